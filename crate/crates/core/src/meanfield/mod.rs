//! Mean-field ("classical") dynamics of the two-mode condensate.
//!
//! After the amplitude-phase reduction the motion is one-dimensional with
//! the non-rigid pendulum Hamiltonian
//!
//! ```text
//! H(p, q) = eps p/hbar + v sqrt(Ns^2 - p^2/hbar^2) cos(2q) + g/2 (Ns^2 + p^2/hbar^2)
//! ```
//!
//! on the cylinder `q in [0, pi)`, `|p| <= Ns hbar`.

pub mod dynamics;

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::poly;

pub use dynamics::{gpe_propagate, integrate_trajectory, GpeState, GpeTrajectory, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    /// Same point with `q` reduced to `[0, pi)`.
    pub fn folded(self) -> Self {
        Self {
            q: fold_angle(self.q),
            p: self.p,
        }
    }
}

/// Reduces an angle modulo pi into `[0, pi)`.
pub fn fold_angle(q: f64) -> f64 {
    let r = q.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

// relative slack for points sitting on the rim up to rounding
const RIM_SLACK: f64 = 1e-12;

fn reduced_momentum(params: &ModelParams, p: f64) -> Result<f64> {
    let x = p / params.hbar;
    let ns = params.ns();
    if !x.is_finite() || x.abs() > ns * (1.0 + RIM_SLACK) {
        return Err(Error::Domain {
            p,
            limit: params.p_max(),
        });
    }
    Ok(x.clamp(-ns, ns))
}

fn root_term(ns: f64, x: f64) -> f64 {
    ((ns - x) * (ns + x)).max(0.0).sqrt()
}

pub fn hamiltonian(params: &ModelParams, pt: PhasePoint) -> Result<f64> {
    let x = reduced_momentum(params, pt.p)?;
    Ok(hamiltonian_reduced(params, x, (2.0 * pt.q).cos()))
}

/// H as a function of `x = p/hbar` and `cos(2q)`, without domain checks.
pub(crate) fn hamiltonian_reduced(params: &ModelParams, x: f64, cos2q: f64) -> f64 {
    let ns = params.ns();
    params.epsilon * x + params.v * root_term(ns, x) * cos2q + 0.5 * params.g * (ns * ns + x * x)
}

/// Partial derivatives `(dH/dq, dH/dp)`. The equations of motion are
/// `p' = -dH/dq`, `q' = dH/dp`.
pub fn gradient(params: &ModelParams, pt: PhasePoint) -> Result<(f64, f64)> {
    let x = reduced_momentum(params, pt.p)?;
    let ns = params.ns();
    let root = root_term(ns, x);
    if root <= ns * 1e-12 {
        return Err(Error::RimSingularity { p: pt.p });
    }
    let hb = params.hbar;
    let dq = -2.0 * params.v * root * (2.0 * pt.q).sin();
    let dp = (params.epsilon - params.v * x * (2.0 * pt.q).cos() / root + params.g * x) / hb;
    Ok((dq, dp))
}

/// Second derivatives `[[H_qq, H_qp], [H_qp, H_pp]]`.
pub fn hessian(params: &ModelParams, pt: PhasePoint) -> Result<[[f64; 2]; 2]> {
    let x = reduced_momentum(params, pt.p)?;
    let ns = params.ns();
    let root = root_term(ns, x);
    if root <= ns * 1e-12 {
        return Err(Error::RimSingularity { p: pt.p });
    }
    let hb = params.hbar;
    let (s, c) = (2.0 * pt.q).sin_cos();
    let hqq = -4.0 * params.v * root * c;
    let hqp = 2.0 * params.v * x * s / (hb * root);
    let hpp = (-params.v * c * ns * ns / root.powi(3) + params.g) / (hb * hb);
    Ok([[hqq, hqp], [hqp, hpp]])
}

/// The momentum "potentials" `(U_-(p), U_+(p)) = (H(p, pi/2), H(p, 0))`.
pub fn potentials(params: &ModelParams, p: f64) -> Result<(f64, f64)> {
    let x = reduced_momentum(params, p)?;
    Ok((hamiltonian_reduced(params, x, -1.0), hamiltonian_reduced(params, x, 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointKind {
    Maximum,
    Minimum,
    Saddle,
    /// A vanishing Hessian eigenvalue: the merged point at a bifurcation.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointLabel {
    /// The maximum at q = 0.
    EPlus,
    /// The single minimum at q = pi/2 (no self-trapping).
    EMinus,
    /// Self-trapped minimum at the larger momentum.
    EMinusPlus,
    /// Self-trapped minimum at the smaller momentum.
    EMinusMinus,
    ESaddle,
}

impl FixedPointLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::EPlus => "E+",
            Self::EMinus => "E-",
            Self::EMinusPlus => "E-+",
            Self::EMinusMinus => "E--",
            Self::ESaddle => "E-saddle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub point: PhasePoint,
    pub energy: f64,
    pub kind: FixedPointKind,
    pub label: FixedPointLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

/// Self-trapping classification: supercritical iff `|g| > v/Ns`.
pub fn regime(params: &ModelParams) -> Result<Regime> {
    params.validate()?;
    if !(params.v > 0.0) {
        return Err(Error::InvalidParams("regime needs v > 0".into()));
    }
    let threshold = params.v / params.ns();
    let d = params.g.abs() - threshold;
    Ok(if d.abs() <= 1e-12 * threshold {
        Regime::Critical
    } else if d > 0.0 {
        Regime::Supercritical
    } else {
        Regime::Subcritical
    })
}

/// Stationarity residual on the q = 0 (`sign = 1`) or q = pi/2
/// (`sign = -1`) line, in the reduced variable `s = p/(hbar Ns)`.
fn branch_residual(params: &ModelParams, s: f64, sign: f64) -> f64 {
    let gg = params.g * params.ns();
    params.epsilon + gg * s - sign * params.v * s / (1.0 - s * s).sqrt()
}

fn branch_residual_derivative(params: &ModelParams, s: f64, sign: f64) -> f64 {
    let gg = params.g * params.ns();
    gg - sign * params.v / (1.0 - s * s).powf(1.5)
}

/// All stationary points of H, sorted by energy.
///
/// On each line `q in {0, pi/2}` the condition `dH/dp = 0` is squared into a
/// quartic in `s = p/(hbar Ns)`:
/// `(eps + G s)^2 (1 - s^2) - v^2 s^2 = 0`, `G = g Ns`. Real roots inside
/// `|s| < 1` are polished on the unsquared branch equation and kept when the
/// residual is below `1e-9` of the energy scale.
pub fn fixed_points(params: &ModelParams) -> Result<Vec<FixedPoint>> {
    params.validate()?;
    let ns = params.ns();
    let (eps, v) = (params.epsilon, params.v);
    let gg = params.g * ns;
    let coeffs = [
        -gg * gg,
        -2.0 * eps * gg,
        gg * gg - eps * eps - v * v,
        2.0 * eps * gg,
        eps * eps,
    ];
    let scale = eps.abs() + v.abs() + gg.abs();
    let tol = 1e-9 * scale.max(f64::MIN_POSITIVE);

    let mut candidates: Vec<f64> = poly::roots(&coeffs)
        .into_iter()
        .filter(|z| z.im.abs() < 1e-5 && z.re.abs() < 1.0)
        .map(|z| z.re)
        .collect();
    // a zero-coupling or zero-bias corner can hide the trivial root
    if eps == 0.0 {
        candidates.push(0.0);
    }

    let mut found: Vec<(f64, f64)> = Vec::new(); // (s, q)
    for s0 in candidates {
        for (sign, q) in [(1.0, 0.0), (-1.0, FRAC_PI_2)] {
            let mut s = s0;
            for _ in 0..50 {
                let f = branch_residual(params, s, sign);
                let df = branch_residual_derivative(params, s, sign);
                if df == 0.0 || !f.is_finite() {
                    break;
                }
                let next = (s - f / df).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                let done = (next - s).abs() < 1e-15;
                s = next;
                if done {
                    break;
                }
            }
            if branch_residual(params, s, sign).abs() <= tol
                && !found
                    .iter()
                    .any(|&(s1, q1)| q1 == q && (s1 - s).abs() < 1e-7)
            {
                found.push((s, q));
            }
        }
    }

    let degenerate = 1e-9 * (v.abs() * ns + params.g.abs() * ns * ns);
    let mut points: Vec<(PhasePoint, f64, FixedPointKind)> = found
        .into_iter()
        .map(|(s, q)| {
            let pt = PhasePoint::new(q, s * ns * params.hbar);
            let energy = hamiltonian(params, pt)?;
            let h = hessian(params, pt)?;
            // the mixed term vanishes on both lines, so the diagonal are the
            // eigenvalues (up to the positive hbar scaling of H_pp)
            let (a, b) = (h[0][0], h[1][1] * params.hbar * params.hbar);
            let kind = if a.abs() < degenerate || b.abs() < degenerate {
                FixedPointKind::Degenerate
            } else if a < 0.0 && b < 0.0 {
                FixedPointKind::Maximum
            } else if a > 0.0 && b > 0.0 {
                FixedPointKind::Minimum
            } else {
                FixedPointKind::Saddle
            };
            Ok((pt, energy, kind))
        })
        .collect::<Result<_>>()?;
    points.sort_by(|a, b| a.1.total_cmp(&b.1));

    let on_lower: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].0.q != 0.0)
        .collect();
    let mut out = Vec::with_capacity(points.len());
    for (i, (pt, energy, kind)) in points.iter().enumerate() {
        let label = if pt.q == 0.0 {
            FixedPointLabel::EPlus
        } else if on_lower.len() == 1 {
            FixedPointLabel::EMinus
        } else if matches!(kind, FixedPointKind::Minimum) {
            let other_min = on_lower.iter().any(|&j| {
                j != i && matches!(points[j].2, FixedPointKind::Minimum) && points[j].0.p > pt.p
            });
            if other_min {
                FixedPointLabel::EMinusMinus
            } else {
                FixedPointLabel::EMinusPlus
            }
        } else {
            FixedPointLabel::ESaddle
        };
        out.push(FixedPoint {
            point: *pt,
            energy: *energy,
            kind: *kind,
            label,
        });
    }
    Ok(out)
}

/// The minimum and maximum of H over the whole phase space.
pub fn energy_range(params: &ModelParams) -> Result<(f64, f64)> {
    let fps = fixed_points(params)?;
    let ns = params.ns();
    // the rim values are also candidates when a potential is monotone
    let rim = [
        params.epsilon * ns + params.g * ns * ns,
        -params.epsilon * ns + params.g * ns * ns,
    ];
    let lo = fps
        .iter()
        .map(|f| f.energy)
        .chain(rim)
        .fold(f64::INFINITY, f64::min);
    let hi = fps
        .iter()
        .map(|f| f.energy)
        .chain(rim)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}
