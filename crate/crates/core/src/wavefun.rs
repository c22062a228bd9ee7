//! Semiclassical eigenfunctions in the momentum (population imbalance)
//! representation.
//!
//! The continuous formulas are evaluated at the quantum labels
//! `p/hbar = -N, -N + 2, ..., N` and renormalized to unit sum.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::action::{nearest_anchor, Branch, Model, SegmentKind};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quadrature::{integrate_sin2, DEFAULT_TOL};
use crate::quantize::semiclassical_spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavefunctionKind {
    Exact,
    Primitive,
    Uniform,
}

impl WavefunctionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Primitive => "primitive",
            Self::Uniform => "uniform",
        }
    }
}

/// `|Psi_n(p)|^2` on the grid `p = -N, -N + 2, ..., N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumWavefunction {
    pub grid: Vec<i64>,
    pub values: Vec<f64>,
    pub kind: WavefunctionKind,
    pub state: usize,
    pub energy: f64,
}

impl MomentumWavefunction {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// The quantum momentum labels `-N, -N + 2, ..., N`.
pub fn momentum_grid(params: &ModelParams) -> Vec<i64> {
    let n = params.particles as i64;
    (0..=n).map(|k| 2 * k - n).collect()
}

/// Three-term recurrence `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Normalized oscillator eigenfunction `H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi))`,
/// by a recurrence that stays finite for large `n`.
fn hermite_function(n: usize, x: f64) -> f64 {
    let mut f0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return f0;
    }
    let mut f1 = 2f64.sqrt() * x * f0;
    for k in 1..n {
        let kf = k as f64;
        let f2 = (2.0 / (kf + 1.0)).sqrt() * x * f1 - (kf / (kf + 1.0)).sqrt() * f0;
        f0 = f1;
        f1 = f2;
    }
    f1
}

/// A single classical orbit: one allowed momentum interval `[a, b]`
/// (reduced units) with the branch of each end.
struct Orbit {
    m: Model,
    e: f64,
    a: f64,
    b: f64,
    left: Branch,
    right: Branch,
    /// `int_a^b dx / sqrt(D)`, the period in reduced units.
    period: f64,
}

impl Orbit {
    fn new(params: &ModelParams, e: f64) -> Result<Self> {
        let m = Model::new(params)?;
        let segs = m.partition(e);
        let allowed: Vec<usize> = (0..segs.len())
            .filter(|&i| segs[i].kind == SegmentKind::Allowed)
            .collect();
        if allowed.len() != 1 {
            return Err(Error::Unsupported(format!(
                "{} classically allowed intervals at E = {e}; a single orbit is required",
                allowed.len()
            )));
        }
        let i = allowed[0];
        let branch = |j: Option<usize>| match j.map(|j| segs[j].kind) {
            Some(SegmentKind::Saturated) => Branch::Upper,
            _ => Branch::Lower,
        };
        let (a, b) = (segs[i].a, segs[i].b);
        if a <= -m.ns || b >= m.ns {
            return Err(Error::Unsupported(format!("orbit at E = {e} touches the rim")));
        }
        let (left, right) = (branch(i.checked_sub(1)), branch(Some(i + 1).filter(|&j| j < segs.len())));
        let anchors = [Some((a, left)), Some((b, right))];
        let period = integrate_sin2(
            |x| 1.0 / m.disc(e, x, nearest_anchor(anchors, x)).max(f64::MIN_POSITIVE).sqrt(),
            a,
            b,
            DEFAULT_TOL,
            DEFAULT_TOL * PI / m.v,
        )?;
        Ok(Self {
            m,
            e,
            a,
            b,
            left,
            right,
            period,
        })
    }

    fn anchors(&self) -> [Option<(f64, Branch)>; 2] {
        [Some((self.a, self.left)), Some((self.b, self.right))]
    }

    fn inside(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }

    /// Classical density in reduced units, `1 / (T sqrt|D|)`.
    fn density(&self, x: f64) -> f64 {
        let d = self.m.disc(self.e, x, nearest_anchor(self.anchors(), x));
        1.0 / (self.period * d.abs().sqrt())
    }

    /// Phase `S(p)/hbar` measured from the left turning point.
    fn phase(&self, x: f64) -> Result<f64> {
        let (m, e) = (self.m, self.e);
        let anchors = self.anchors();
        let x = x.clamp(self.a, self.b);
        // arccos(-X)/2 from a point on U_-, arccos(X)/2 from one on U_+
        let arc = |y: f64| 0.5 * m.arc(e, y, nearest_anchor(anchors, y));
        match self.left {
            Branch::Lower => integrate_sin2(arc, self.a, x, DEFAULT_TOL, DEFAULT_TOL * m.ns),
            Branch::Upper => integrate_sin2(|y| FRAC_PI_2 - arc(y), self.a, x, DEFAULT_TOL, DEFAULT_TOL * m.ns),
        }
    }

    /// `int |Im q| dx` from the nearer turning point to `x` (outside).
    fn imaginary_action(&self, x: f64) -> Result<f64> {
        let (m, e) = (self.m, self.e);
        if x <= self.a {
            let anchor = Some((self.a, self.left));
            integrate_sin2(|y| 0.5 * m.arc_h(e, y, anchor), x, self.a, DEFAULT_TOL, DEFAULT_TOL * m.ns)
        } else {
            let anchor = Some((self.b, self.right));
            integrate_sin2(|y| 0.5 * m.arc_h(e, y, anchor), self.b, x, DEFAULT_TOL, DEFAULT_TOL * m.ns)
        }
    }
}

fn reduced(params: &ModelParams, p: f64) -> Result<f64> {
    let x = p / params.hbar;
    if !(x.abs() < params.ns()) {
        return Err(Error::Domain {
            p,
            limit: params.p_max(),
        });
    }
    Ok(x)
}

/// `w(p) = 1 / (T sqrt(v^2 (Ns^2 - x^2) - R^2))` per unit momentum, which
/// integrates to one over the allowed interval.
pub fn classical_density(params: &ModelParams, e: f64, p: f64) -> Result<f64> {
    let orbit = Orbit::new(params, e)?;
    let x = reduced(params, p)?;
    if !orbit.inside(x) {
        return Err(Error::InvalidArgument(format!(
            "p = {p} is outside the allowed interval [{}, {}]",
            orbit.a * params.hbar,
            orbit.b * params.hbar
        )));
    }
    Ok(orbit.density(x) / params.hbar)
}

/// Accumulated phase `S(p)` from the left turning point, in action units.
pub fn action_phase(params: &ModelParams, e: f64, p: f64) -> Result<f64> {
    let orbit = Orbit::new(params, e)?;
    let x = reduced(params, p)?;
    let slack = 1e-9 * (orbit.b - orbit.a);
    if x < orbit.a - slack || x > orbit.b + slack {
        return Err(Error::InvalidArgument(format!("p = {p} is outside the allowed interval")));
    }
    Ok(params.hbar * orbit.phase(x)?)
}

/// Forbidden-region density `w(p) exp(-2 |Im S(p)|/hbar) / 2`.
pub fn tail(params: &ModelParams, e: f64, p: f64) -> Result<f64> {
    let orbit = Orbit::new(params, e)?;
    let x = reduced(params, p)?;
    if orbit.inside(x) {
        return Err(Error::InvalidArgument(format!("p = {p} is inside the allowed interval")));
    }
    tail_reduced(&orbit, x).map(|w| w / params.hbar)
}

fn tail_reduced(orbit: &Orbit, x: f64) -> Result<f64> {
    Ok(0.5 * orbit.density(x) * (-2.0 * orbit.imaginary_action(x)?).exp())
}

fn normalize(values: &mut [f64]) -> Result<()> {
    let total: f64 = values.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Quadrature(format!("cannot normalize, total weight {total}")));
    }
    values.iter_mut().for_each(|v| *v /= total);
    Ok(())
}

fn level_energy(params: &ModelParams, n: usize) -> Result<f64> {
    if n > params.particles {
        return Err(Error::StateIndex {
            n,
            max: params.particles,
        });
    }
    Ok(semiclassical_spectrum(params)?.levels[n].energy)
}

/// Primitive form `2 w(p) cos^2(S(p)/hbar - pi/4)` inside the orbit and
/// [`tail`] outside, discretized and normalized.
pub fn primitive(params: &ModelParams, n: usize, e: f64) -> Result<MomentumWavefunction> {
    let orbit = Orbit::new(params, e)?;
    let grid = momentum_grid(params);
    let mut values = grid
        .iter()
        .map(|&k| {
            let x = k as f64;
            if orbit.inside(x) {
                let c = (orbit.phase(x)? - FRAC_PI_4).cos();
                Ok(2.0 * orbit.density(x) * c * c)
            } else {
                tail_reduced(&orbit, x)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    normalize(&mut values)?;
    Ok(MomentumWavefunction {
        grid,
        values,
        kind: WavefunctionKind::Primitive,
        state: n,
        energy: e,
    })
}

/// `½ξ√(ξ0²-ξ²) + ½ξ0²(π/2 + asin(ξ/ξ0))`, increasing on `[-ξ0, ξ0]`.
fn oscillator_phase(xi: f64, xi0: f64) -> f64 {
    let r = (xi / xi0).clamp(-1.0, 1.0);
    0.5 * xi * (xi0 * xi0 - xi * xi).max(0.0).sqrt() + 0.5 * xi0 * xi0 * (FRAC_PI_2 + r.asin())
}

/// Oscillator action under the barrier, `int_{ξ0}^{ξ} sqrt(t² - ξ0²) dt`.
fn oscillator_tail(xi: f64, xi0: f64) -> f64 {
    let s = (xi * xi - xi0 * xi0).max(0.0).sqrt();
    0.5 * xi * s - 0.5 * xi0 * xi0 * ((xi + s) / xi0).ln()
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves `oscillator_phase(ξ) = s` for `ξ in [-ξ0, ξ0]`.
fn xi_inside(s: f64, xi0: f64) -> Result<f64> {
    let top = 0.5 * PI * xi0 * xi0;
    let slack = 1e-6 * top;
    if s < -slack || s > top + slack {
        return Err(Error::InvalidArgument(format!("phase {s} outside [0, {top}]")));
    }
    Ok(bisect(|x| oscillator_phase(x, xi0), -xi0, xi0, s.clamp(0.0, top)))
}

/// `ξ >= ξ0` with `oscillator_tail(ξ) = s`.
fn xi_outside(s: f64, xi0: f64) -> f64 {
    let mut hi = xi0 + 1.0;
    while oscillator_tail(hi, xi0) < s {
        hi *= 2.0;
    }
    bisect(|x| oscillator_tail(x, xi0), xi0, hi, s)
}

/// Oscillator coordinate mapped to `p`; beyond the turning points the
/// under-barrier actions are matched instead.
pub fn xi_of_p(params: &ModelParams, n: usize, e: f64, p: f64) -> Result<f64> {
    let orbit = Orbit::new(params, e)?;
    let x = reduced(params, p)?;
    xi_reduced(&orbit, n, x)
}

fn xi_reduced(orbit: &Orbit, n: usize, x: f64) -> Result<f64> {
    let xi0 = (2.0 * n as f64 + 1.0).sqrt();
    if x < orbit.a {
        Ok(-xi_outside(orbit.imaginary_action(x)?, xi0))
    } else if x > orbit.b {
        Ok(xi_outside(orbit.imaginary_action(x)?, xi0))
    } else {
        xi_inside(orbit.phase(x)?, xi0)
    }
}

/// Uniform approximation `|w(p) sqrt(2n + 1 - ξ²)| H_n(ξ)² exp(-ξ²)` for
/// an orbit whose turning points both lie on `U_-`.
pub fn uniform(params: &ModelParams, n: usize) -> Result<MomentumWavefunction> {
    let e = level_energy(params, n)?;
    let orbit = Orbit::new(params, e)?;
    if orbit.left != Branch::Lower || orbit.right != Branch::Lower {
        return Err(Error::Unsupported(
            "the uniform approximation needs both turning points on U_-".into(),
        ));
    }
    let xi0_sq = 2.0 * n as f64 + 1.0;
    let grid = momentum_grid(params);
    let span = orbit.b - orbit.a;
    let mut values = grid
        .iter()
        .map(|&k| {
            let mut x = k as f64;
            // the product is finite at a turning point; step off it
            for tp in [orbit.a, orbit.b] {
                if (x - tp).abs() < 1e-9 * span {
                    x = tp + if x < tp { -1e-9 } else { 1e-9 } * span;
                }
            }
            let xi = xi_reduced(&orbit, n, x)?;
            let h = hermite_function(n, xi);
            Ok(orbit.density(x) * (xi0_sq - xi * xi).abs().sqrt() * h * h)
        })
        .collect::<Result<Vec<f64>>>()?;
    normalize(&mut values)?;
    Ok(MomentumWavefunction {
        grid,
        values,
        kind: WavefunctionKind::Uniform,
        state: n,
        energy: e,
    })
}

/// Primitive wavefunction at the semiclassical energy of level `n`.
pub fn primitive_state(params: &ModelParams, n: usize) -> Result<MomentumWavefunction> {
    let e = level_energy(params, n)?;
    primitive(params, n, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 0.7), 1.0);
        assert_eq!(hermite(2, 1.0), 2.0);
        assert!((hermite(3, 0.5) - (8.0 * 0.125 - 12.0 * 0.5)).abs() < 1e-14);
    }

    #[test]
    fn hermite_function_matches_polynomial() {
        let x: f64 = 0.8;
        for n in 0..8usize {
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            let direct = hermite(n, x) * (-0.5 * x * x).exp()
                / (2f64.powi(n as i32) * fact * PI.sqrt()).sqrt();
            assert!((hermite_function(n, x) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn oscillator_phase_landmarks() {
        let xi0 = 5f64.sqrt();
        assert!(oscillator_phase(-xi0, xi0).abs() < 1e-14);
        assert!((oscillator_phase(0.0, xi0) - 5.0 * PI / 4.0).abs() < 1e-14);
        assert!((oscillator_phase(xi0, xi0) - 5.0 * PI / 2.0).abs() < 1e-14);
        assert!((xi_inside(5.0 * PI / 4.0, xi0).unwrap()).abs() < 1e-11);
        assert!(xi_inside(9.0, xi0).is_err());
    }

    #[test]
    fn grid_labels() {
        assert_eq!(momentum_grid(&ModelParams::new(3, 0.0, 1.0, 0.0)), vec![-3, -1, 1, 3]);
    }
}
