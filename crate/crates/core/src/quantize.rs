//! Semiclassical spectrum.
//!
//! Without a barrier every level solves `area(E) = 2 pi (n + 1/2)`. With a
//! barrier the levels below the upper well minimum are quantized in the
//! lower lobe alone; above it the double-well condition
//!
//! ```text
//! sqrt(1 + kappa^2) cos(phi_l + phi_r - s_phi) + kappa cos(phi_l - phi_r - s_theta) = 0
//! ```
//!
//! is solved. It is rewritten as `A -+ tau = 0 (mod 2 pi)` with
//! `A = phi_l + phi_r - s_phi`, `tau = arccos(-c cos B)` and
//! `c = kappa / sqrt(1 + kappa^2)`. Both branch functions are continuous
//! in `E`, so nearly degenerate doublets show up as two separate simple
//! crossings instead of a double root.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::action::{area_between, phase_correction, DoubleWell, Model, Region};
use crate::error::{Error, Result};
use crate::meanfield::{self, FixedPoint, FixedPointKind};
use crate::params::ModelParams;
use crate::quantum;

/// Quadrature tolerance used while solving for levels.
const QUAD_TOL: f64 = 1e-13;
/// Refinement passes of the double-well scan before giving up.
const MAX_RESCANS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub region: Region,
    /// Residual of the quantization condition in radians.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct SemiclassicalSpectrum {
    pub params: ModelParams,
    /// Sorted ascending.
    pub levels: Vec<Level>,
}

impl SemiclassicalSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Bracketed root of a continuous function (Illinois regula falsi with a
/// bisection safeguard).
fn solve_bracket<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut flo: f64,
    mut fhi: f64,
    xtol: f64,
) -> Result<f64> {
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}] ({flo}, {fhi})"
        )));
    }
    let mut side = 0i8;
    for k in 0..200 {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        // every third step bisect to guarantee shrinking
        if !(x > lo && x < hi) || k % 3 == 2 {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(if flo.abs() < fhi.abs() { lo } else { hi })
}

fn area(m: &Model, e: f64, lo: f64, hi: f64) -> Result<f64> {
    let segs = m.partition(e);
    area_between(m, e, &segs, lo, hi, QUAD_TOL)
}

fn single_level(m: &Model, n: usize, e_lo: f64, e_hi: f64) -> Result<Level> {
    let target = 2.0 * PI * (n as f64 + 0.5);
    let f = |e: f64| -> Result<f64> { Ok(area(m, e, -m.ns, m.ns)? - target) };
    let flo = f(e_lo)?;
    let fhi = f(e_hi)?;
    let xtol = 1e-14 * m.scale();
    let e = solve_bracket(f, e_lo, e_hi, flo, fhi, xtol)?;
    Ok(Level {
        energy: e,
        region: Region::Single,
        residual: f(e)?.abs() / 2.0,
    })
}

fn check_state(params: &ModelParams, n: usize) -> Result<()> {
    if n > params.particles {
        return Err(Error::StateIndex {
            n,
            max: params.particles,
        });
    }
    Ok(())
}

/// Level `n` of a system without a barrier.
pub fn quantize_single(params: &ModelParams, n: usize) -> Result<f64> {
    let m = Model::new(params)?;
    check_state(params, n)?;
    if DoubleWell::new(params).is_ok() {
        return Err(Error::Unsupported(
            "a barrier is present; use the double-well quantization".into(),
        ));
    }
    let (lo, hi) = meanfield::energy_range(params)?;
    Ok(single_level(&m, n, lo, hi)?.energy)
}

/// Levels of the lower lobe below the upper well minimum.
fn region_one(dw: &DoubleWell) -> Result<Vec<Level>> {
    let m = &dw.m;
    let (lo, hi) = (dw.info.e_min_lower, dw.info.e_min_upper);
    if !(hi > lo) {
        return Ok(Vec::new());
    }
    let top = area(m, hi, -m.ns, m.ns)?;
    let count = ((top / (2.0 * PI)) - 0.5).ceil().max(0.0) as usize;
    (0..count)
        .map(|n| {
            let mut l = single_level(m, n, lo, hi)?;
            l.region = Region::I;
            Ok(l)
        })
        .collect()
}

/// Lower-lobe levels `n = first, first + 1, ...` above the upper well
/// minimum. The tunneling correction can push a level sitting right at
/// that minimum below it, out of reach of the double-well scan; such
/// levels are taken from the single-lobe condition instead.
fn seam_levels(dw: &DoubleWell, first: usize, count: usize) -> Result<Vec<Level>> {
    let m = &dw.m;
    let lower_left = dw.info.p_min_lower < dw.info.p_barr;
    let (lo, hi) = (dw.info.e_min_upper, dw.info.e_barr - dw.guard());
    let lobe = |e: f64| -> Result<f64> {
        let segs = m.partition(e);
        if lower_left {
            area_between(m, e, &segs, -m.ns, dw.x_barr, QUAD_TOL)
        } else {
            area_between(m, e, &segs, dw.x_barr, m.ns, QUAD_TOL)
        }
    };
    let xtol = 1e-14 * m.scale();
    (first..first + count)
        .map(|n| {
            let target = 2.0 * PI * (n as f64 + 0.5);
            let f = |e: f64| -> Result<f64> { Ok(lobe(e)? - target) };
            let (flo, fhi) = (f(lo)?, f(hi)?);
            let e = solve_bracket(f, lo, hi, flo, fhi, xtol)?;
            Ok(Level {
                energy: e,
                region: Region::I,
                residual: f(e)?.abs() / 2.0,
            })
        })
        .collect()
}

/// Which of the two branch functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sheet {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy)]
struct BranchValues {
    minus: f64,
    plus: f64,
}

impl BranchValues {
    fn get(&self, s: Sheet) -> f64 {
        match s {
            Sheet::Minus => self.minus,
            Sheet::Plus => self.plus,
        }
    }
}

fn branch_values(dw: &DoubleWell, e: f64) -> Result<BranchValues> {
    let ph = dw.phases(e, QUAD_TOL)?;
    let a = ph.phi_l + ph.phi_r - phase_correction(ph.s_eps);
    // continuing the inner turning points into the complex plane takes
    // s_theta off the phase difference measured to the barrier
    let b = ph.phi_l - ph.phi_r - ph.s_theta;
    // c = kappa / sqrt(1 + kappa^2) without forming kappa
    let c = 1.0 / (1.0 + (2.0 * PI * ph.s_eps).exp()).sqrt();
    let tau = (-c * b.cos()).clamp(-1.0, 1.0).acos();
    Ok(BranchValues {
        minus: a - tau,
        plus: a + tau,
    })
}

fn region_label(dw: &DoubleWell, e: f64) -> Region {
    if e < dw.info.e_barr {
        Region::II
    } else {
        Region::III
    }
}

/// Roots of the double-well condition between the upper well minimum and
/// the top of the spectrum, from a scan with `points` samples per region.
fn double_roots(dw: &DoubleWell, e_max: f64, points: usize) -> Result<Vec<Level>> {
    // the orbit of the upper well degenerates to a point at its minimum
    let (e0, eb) = (dw.info.e_min_upper + 1e-9 * dw.m.scale(), dw.info.e_barr);
    let mut grid: Vec<f64> = (0..points).map(|k| e0 + (eb - e0) * k as f64 / points as f64).collect();
    grid.extend((0..=points).map(|k| eb + (e_max - eb) * k as f64 / points as f64));
    let vals = grid
        .iter()
        .map(|&e| branch_values(dw, e))
        .collect::<Result<Vec<_>>>()?;

    let xtol = 1e-14 * dw.m.scale();
    let mut out = Vec::new();
    for sheet in [Sheet::Minus, Sheet::Plus] {
        for k in 0..grid.len() - 1 {
            find_crossings(dw, sheet, (grid[k], vals[k]), (grid[k + 1], vals[k + 1]), xtol, 0, &mut out)?;
        }
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(out)
}

fn find_crossings(
    dw: &DoubleWell,
    sheet: Sheet,
    (ea, va): (f64, BranchValues),
    (eb, vb): (f64, BranchValues),
    xtol: f64,
    depth: usize,
    out: &mut Vec<Level>,
) -> Result<()> {
    let two_pi = 2.0 * PI;
    let (ha, hb) = (va.get(sheet), vb.get(sheet));
    let (ka, kb) = ((ha / two_pi).floor(), (hb / two_pi).floor());
    if ka == kb {
        return Ok(());
    }
    if (ka - kb).abs() > 1.0 && depth < 30 {
        let em = 0.5 * (ea + eb);
        let vm = branch_values(dw, em)?;
        find_crossings(dw, sheet, (ea, va), (em, vm), xtol, depth + 1, out)?;
        return find_crossings(dw, sheet, (em, vm), (eb, vb), xtol, depth + 1, out);
    }
    let target = two_pi * ka.max(kb);
    let f = |e: f64| -> Result<f64> { Ok(branch_values(dw, e)?.get(sheet) - target) };
    let e = solve_bracket(f, ea, eb, ha - target, hb - target, xtol)?;
    let residual = (branch_values(dw, e)?.get(sheet) - target).abs();
    out.push(Level {
        energy: e,
        region: region_label(dw, e),
        residual,
    });
    Ok(())
}

/// Levels in regions II and III of a double-well system.
pub fn quantize_double(params: &ModelParams) -> Result<Vec<f64>> {
    let dw = DoubleWell::new(params)?;
    let (_, e_max) = meanfield::energy_range(params)?;
    Ok(double_roots(&dw, e_max, 8 * params.dim())?
        .into_iter()
        .map(|l| l.energy)
        .collect())
}

/// Maps parameters onto `v > 0`, `g <= 0`. The spectrum of `(eps, v, g)`
/// equals that of `(eps, |v|, g)`, and flipping the sign of `g` negates
/// it.
fn canonical(params: &ModelParams) -> Result<(ModelParams, bool)> {
    params.validate()?;
    if params.v == 0.0 {
        return Err(Error::Unsupported(
            "the semiclassical spectrum needs a nonzero coupling v".into(),
        ));
    }
    let mirrored = params.g > 0.0;
    let mut p = *params;
    p.v = p.v.abs();
    p.g = -p.g.abs();
    Ok((p, mirrored))
}

/// All `N + 1` semiclassical levels.
pub fn semiclassical_spectrum(params: &ModelParams) -> Result<SemiclassicalSpectrum> {
    let (p, mirrored) = canonical(params)?;
    let mut levels = match DoubleWell::new(&p) {
        Err(Error::NoBarrier(_)) => {
            let m = Model::new(&p)?;
            let (lo, hi) = meanfield::energy_range(&p)?;
            (0..p.dim())
                .map(|n| single_level(&m, n, lo, hi))
                .collect::<Result<Vec<_>>>()?
        }
        Err(e) => return Err(e),
        Ok(dw) => {
            let (_, e_max) = meanfield::energy_range(&p)?;
            let low = region_one(&dw)?;
            let mut points = 8 * p.dim();
            let mut attempt = 0;
            loop {
                let mut high = double_roots(&dw, e_max, points)?;
                if low.len() + high.len() < p.dim() {
                    let missing = p.dim() - low.len() - high.len();
                    if let Ok(extra) = seam_levels(&dw, low.len(), missing) {
                        high.extend(extra);
                    }
                }
                if low.len() + high.len() == p.dim() || attempt == MAX_RESCANS {
                    if low.len() + high.len() != p.dim() {
                        let count = |r: Region| high.iter().filter(|l| l.region == r).count();
                        return Err(Error::CountMismatch {
                            found: low.len() + high.len(),
                            expected: p.dim(),
                            detail: format!(
                                "region I: {}, region II: {}, region III: {}",
                                low.len(),
                                count(Region::II),
                                count(Region::III)
                            ),
                        });
                    }
                    let mut all = low;
                    all.extend(high);
                    break all;
                }
                points *= 2;
                attempt += 1;
            }
        }
    };
    if mirrored {
        for l in levels.iter_mut() {
            l.energy = -l.energy;
        }
    }
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(SemiclassicalSpectrum {
        params: *params,
        levels,
    })
}

/// One point of an onsite-energy sweep. A failure on either side is kept
/// as a message instead of aborting the sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub epsilon: f64,
    pub exact: std::result::Result<Vec<f64>, String>,
    pub semiclassical: std::result::Result<Vec<f64>, String>,
    /// Stationary mean-field energies.
    pub stationary: Vec<FixedPoint>,
    /// Four stationary points (inside the swallowtail).
    pub swallowtail: bool,
}

/// Exact and semiclassical spectra plus the stationary energies on a grid
/// of onsite energies, evaluated in parallel.
pub fn sweep_epsilon(params: &ModelParams, eps_grid: &[f64], symmetrized: bool) -> Result<Vec<SweepPoint>> {
    params.validate()?;
    if eps_grid.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a sweep needs at least 2 points, got {}",
            eps_grid.len()
        )));
    }
    Ok(eps_grid.par_iter().map(|&eps| sweep_point(params, eps, symmetrized)).collect())
}

/// One sweep point; see [`sweep_epsilon`].
pub fn sweep_point(params: &ModelParams, eps: f64, symmetrized: bool) -> SweepPoint {
    let p = params.with_epsilon(eps);
    let exact = quantum::exact_spectrum(&p, symmetrized, false)
        .map(|s| s.energies)
        .map_err(|e| e.to_string());
    let semiclassical = semiclassical_spectrum(&p)
        .map(|s| s.energies())
        .map_err(|e| e.to_string());
    let stationary = meanfield::fixed_points(&p).unwrap_or_default();
    let swallowtail = stationary
        .iter()
        .filter(|f| f.kind != FixedPointKind::Degenerate)
        .count()
        == 4;
    SweepPoint {
        epsilon: eps,
        exact,
        semiclassical,
        stationary,
        swallowtail,
    }
}
