//! Fixed-step RK4 integration of the canonical equations and of the
//! two-level nonlinear Schrödinger equation.

use num_complex::Complex64;

use super::{gradient, hamiltonian, PhasePoint};
use crate::error::{Error, Result};
use crate::params::ModelParams;

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Sampled points with `q` folded into `[0, pi)`.
    pub points: Vec<PhasePoint>,
    /// Set when the orbit reached the rim and integration stopped early.
    pub hit_rim: bool,
    /// `max |H(t) - H(0)|` over the samples.
    pub energy_drift: f64,
}

fn check_step(t_final: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !(t_final >= 0.0) || !dt.is_finite() || !t_final.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0 and t_final >= 0, got dt={dt}, t_final={t_final}"
        )));
    }
    Ok((t_final / dt).round() as usize)
}

fn flow(params: &ModelParams, q: f64, p: f64) -> Result<(f64, f64)> {
    let (dq, dp) = gradient(params, PhasePoint::new(q, p))?;
    Ok((dp, -dq))
}

/// Integrates `q' = dH/dp`, `p' = -dH/dq` from `start`. Every step is
/// stored. Reaching the rim ends the run early with `hit_rim` set.
pub fn integrate_trajectory(
    params: &ModelParams,
    start: PhasePoint,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    params.validate()?;
    let steps = check_step(t_final, dt)?;
    let e0 = hamiltonian(params, start)?;
    flow(params, start.q, start.p)?;

    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    let (mut q, mut p) = (start.q, start.p);
    let mut drift: f64 = 0.0;
    let mut hit_rim = false;
    times.push(0.0);
    points.push(start.folded());

    for k in 1..=steps {
        let step = (|| -> Result<(f64, f64)> {
            let (k1q, k1p) = flow(params, q, p)?;
            let (k2q, k2p) = flow(params, q + 0.5 * dt * k1q, p + 0.5 * dt * k1p)?;
            let (k3q, k3p) = flow(params, q + 0.5 * dt * k2q, p + 0.5 * dt * k2p)?;
            let (k4q, k4p) = flow(params, q + dt * k3q, p + dt * k3p)?;
            Ok((
                q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
                p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
            ))
        })();
        match step {
            Ok((nq, np)) if np.abs() < params.p_max() => {
                q = nq;
                p = np;
            }
            Ok(_) | Err(Error::RimSingularity { .. }) | Err(Error::Domain { .. }) => {
                hit_rim = true;
                break;
            }
            Err(e) => return Err(e),
        }
        let pt = PhasePoint::new(q, p);
        drift = drift.max((hamiltonian(params, pt)? - e0).abs());
        times.push(k as f64 * dt);
        points.push(pt.folded());
    }

    Ok(Trajectory {
        times,
        points,
        hit_rim,
        energy_drift: drift,
    })
}

/// Mean-field amplitudes of the two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpeState {
    pub psi1: Complex64,
    pub psi2: Complex64,
}

impl GpeState {
    pub fn new(psi1: Complex64, psi2: Complex64) -> Self {
        Self { psi1, psi2 }
    }

    pub fn norm(&self) -> f64 {
        self.psi1.norm_sqr() + self.psi2.norm_sqr()
    }

    /// Amplitudes with `|psi1|^2 - |psi2|^2 = p/hbar`, total norm `Ns` and
    /// relative phase `arg psi2 - arg psi1 = 2q`.
    pub fn from_phase_point(params: &ModelParams, pt: PhasePoint) -> Result<Self> {
        let ns = params.ns();
        let x = pt.p / params.hbar;
        if x.abs() > ns {
            return Err(Error::Domain {
                p: pt.p,
                limit: params.p_max(),
            });
        }
        let n1 = (0.5 * (ns + x)).max(0.0);
        let n2 = (0.5 * (ns - x)).max(0.0);
        Ok(Self {
            psi1: Complex64::from_polar(n1.sqrt(), -pt.q),
            psi2: Complex64::from_polar(n2.sqrt(), pt.q),
        })
    }

    /// The reduced coordinates `q = (arg psi2 - arg psi1)/2` (folded) and
    /// `p = (|psi1|^2 - |psi2|^2) hbar`.
    pub fn to_phase_point(&self, hbar: f64) -> PhasePoint {
        let q = 0.5 * (self.psi2 * self.psi1.conj()).arg();
        PhasePoint::new(q, (self.psi1.norm_sqr() - self.psi2.norm_sqr()) * hbar).folded()
    }
}

#[derive(Debug, Clone)]
pub struct GpeTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<GpeState>,
}

impl GpeTrajectory {
    /// Population imbalance `|psi1|^2 - |psi2|^2` per sample.
    pub fn imbalance(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|s| s.psi1.norm_sqr() - s.psi2.norm_sqr())
            .collect()
    }
}

fn gpe_rhs(params: &ModelParams, y: [f64; 4]) -> [f64; 4] {
    // y = (Re psi1, Im psi1, Re psi2, Im psi2); i hbar psi' = h psi
    let (a1, b1, a2, b2) = (y[0], y[1], y[2], y[3]);
    let n1 = a1 * a1 + b1 * b1;
    let n2 = a2 * a2 + b2 * b2;
    let d1 = params.epsilon + 2.0 * params.g * n1;
    let d2 = -params.epsilon + 2.0 * params.g * n2;
    let v = params.v;
    let hb = params.hbar;
    // (h psi)_1 and (h psi)_2 as (re, im)
    let h1 = (d1 * a1 + v * a2, d1 * b1 + v * b2);
    let h2 = (v * a1 + d2 * a2, v * b1 + d2 * b2);
    // psi' = -i (h psi) / hbar
    [h1.1 / hb, -h1.0 / hb, h2.1 / hb, -h2.0 / hb]
}

/// RK4 integration of
/// `i hbar psi1' = (eps + 2 g |psi1|^2) psi1 + v psi2`,
/// `i hbar psi2' = v psi1 + (-eps + 2 g |psi2|^2) psi2`.
pub fn gpe_propagate(
    params: &ModelParams,
    state: GpeState,
    t_final: f64,
    dt: f64,
) -> Result<GpeTrajectory> {
    params.validate()?;
    let steps = check_step(t_final, dt)?;
    let ns = params.ns();
    let norm = state.norm();
    if (norm - ns).abs() > 1e-10 * ns {
        return Err(Error::Norm { norm, expected: ns });
    }

    let mut y = [state.psi1.re, state.psi1.im, state.psi2.re, state.psi2.im];
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(state);
    let axpy = |y: &[f64; 4], k: &[f64; 4], h: f64| -> [f64; 4] {
        [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]]
    };
    for k in 1..=steps {
        let k1 = gpe_rhs(params, y);
        let k2 = gpe_rhs(params, axpy(&y, &k1, 0.5 * dt));
        let k3 = gpe_rhs(params, axpy(&y, &k2, 0.5 * dt));
        let k4 = gpe_rhs(params, axpy(&y, &k3, dt));
        for i in 0..4 {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        times.push(k as f64 * dt);
        states.push(GpeState::new(
            Complex64::new(y[0], y[1]),
            Complex64::new(y[2], y[3]),
        ));
    }
    Ok(GpeTrajectory { times, states })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_point_round_trip() {
        let p = ModelParams::new(10, 0.2, 1.0, -0.1);
        let pt = PhasePoint::new(0.7, -3.5);
        let s = GpeState::from_phase_point(&p, pt).unwrap();
        assert!((s.norm() - 11.0).abs() < 1e-12);
        let back = s.to_phase_point(1.0);
        assert!((back.q - 0.7).abs() < 1e-12 && (back.p + 3.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_norm_and_step() {
        let p = ModelParams::new(4, 0.0, 1.0, 0.0);
        let s = GpeState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        assert!(matches!(gpe_propagate(&p, s, 1.0, 1e-3), Err(Error::Norm { .. })));
        let start = PhasePoint::new(0.1, 0.0);
        assert!(integrate_trajectory(&p, start, 1.0, 0.0).is_err());
    }

    #[test]
    fn rim_start_is_an_error() {
        let p = ModelParams::new(4, 0.0, 1.0, 0.0);
        assert!(integrate_trajectory(&p, PhasePoint::new(0.1, 5.0), 1.0, 1e-3).is_err());
    }
}
