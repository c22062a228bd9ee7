//! Gauss-Legendre rules and endpoint-regularized integrals.
//!
//! Integrands with square-root behavior at both ends of `[a, b]` are
//! integrated after the substitution `p = a + (b - a) sin^2(theta)`,
//! which turns them into smooth functions of `theta in [0, pi/2]`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule on `[-1, 1]`, nodes from Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Shared 16-point rule used as the panel rule of the composite integrals.
fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Default starting node count (panels times 16).
pub const DEFAULT_NODES: usize = 64;
/// Relative change accepted between successive doublings.
pub const DEFAULT_TOL: f64 = 1e-11;
const MAX_DOUBLINGS: usize = 8;

/// Composite Gauss-Legendre of `f(theta)` over `[0, pi/2]` with `panels`
/// equal panels.
fn composite<T, F>(f: &F, panels: usize) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    let rule = panel_rule();
    let h = FRAC_PI_2 / panels as f64;
    let mut acc = T::default();
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc = acc + f(mid + 0.5 * h * x) * (0.5 * h * w);
        }
    }
    acc
}

/// Bisection depth allowed once plain doubling fails.
const MAX_SPLITS: usize = 48;

trait Magnitude: Copy + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + std::ops::Mul<f64, Output = Self> + Default {
    fn magnitude(self) -> f64;
}

impl Magnitude for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Magnitude for Cx {
    fn magnitude(self) -> f64 {
        self.0.norm()
    }
}

/// Doubling on one interval `[s, s + len]` of the parameter `t in [0, 1]`.
fn doubling<T: Magnitude, F: Fn(f64) -> T>(f: &F, s: f64, len: f64, tol: f64, abs_tol: f64) -> Option<T> {
    let g = |theta: f64| {
        let (sn, c) = theta.sin_cos();
        f(s + len * sn * sn) * (len * 2.0 * sn * c)
    };
    let mut panels = DEFAULT_NODES / 16;
    let mut prev = composite(&g, panels);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let next = composite(&g, panels);
        let diff = (next - prev).magnitude();
        if !diff.is_finite() {
            return None;
        }
        if diff <= (tol * next.magnitude()).max(abs_tol) {
            return Some(next);
        }
        prev = next;
    }
    None
}

/// `int_0^1 f(t) dt` over `[s, s + len]`, bisecting where doubling alone
/// does not converge (nearly coincident singular points).
fn adaptive<T: Magnitude, F: Fn(f64) -> T>(
    f: &F,
    s: f64,
    len: f64,
    tol: f64,
    abs_tol: f64,
    depth: usize,
) -> Option<T> {
    if let Some(v) = doubling(f, s, len, tol, abs_tol) {
        return Some(v);
    }
    if depth == MAX_SPLITS {
        return None;
    }
    let h = 0.5 * len;
    let left = adaptive(f, s, h, tol, 0.5 * abs_tol, depth + 1)?;
    let right = adaptive(f, s + h, h, tol, 0.5 * abs_tol, depth + 1)?;
    Some(left + right)
}

/// `int_a^b f(p) dp` via the sin^2 substitution, doubling the node count
/// from `DEFAULT_NODES` until the change drops below `tol` relative to the
/// result or below `abs_tol`.
pub fn integrate_sin2<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, abs_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let len = b - a;
    let h = |t: f64| f(a + len * t) * len;
    let v = adaptive(&h, 0.0, 1.0, tol, abs_tol, 0)
        .ok_or_else(|| Error::Quadrature(format!("no convergence on [{a}, {b}]")))?;
    if !v.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok(v)
}

/// Same substitution along the straight segment from `a` to `b` in the
/// complex plane.
pub fn integrate_sin2_complex<F: Fn(Complex64) -> Complex64>(
    f: F,
    a: Complex64,
    b: Complex64,
    tol: f64,
    abs_tol: f64,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let len = b - a;
    let h = |t: f64| Cx(f(a + len * t) * len);
    let v = adaptive(&h, 0.0, 1.0, tol, abs_tol, 0)
        .ok_or_else(|| Error::Quadrature(format!("no convergence on [{a}, {b}]")))?
        .0;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok(v)
}

// Complex64 lacks Default + Mul<f64> in the form `composite` wants.
#[derive(Clone, Copy, Default)]
struct Cx(Complex64);

impl std::ops::Add for Cx {
    type Output = Cx;
    fn add(self, o: Cx) -> Cx {
        Cx(self.0 + o.0)
    }
}

impl std::ops::Sub for Cx {
    type Output = Cx;
    fn sub(self, o: Cx) -> Cx {
        Cx(self.0 - o.0)
    }
}

impl std::ops::Mul<f64> for Cx {
    type Output = Cx;
    fn mul(self, w: f64) -> Cx {
        Cx(self.0 * w)
    }
}
