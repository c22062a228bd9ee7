//! Orbit geometry, actions, periods and the barrier integrals of the
//! mean-field Hamiltonian.
//!
//! Everything is computed in the reduced momentum `x = p/hbar`, where the
//! Hamiltonian does not depend on `hbar`. For fixed energy the momentum axis
//! `[-Ns, Ns]` splits at the turning points into segments on which
//!
//! ```text
//! X(x) = (E - eps x - g/2 (Ns^2 + x^2)) / (v sqrt(Ns^2 - x^2))
//! ```
//!
//! is above 1 (every angle has `H < E`), below -1 (no angle does), or in
//! between. The measure of `{q in [0, pi) : H < E}` is `pi - arccos X`, so
//! the enclosed area is a sum of segment integrals. Connected runs of
//! non-forbidden segments are the lobes; two lobes exist only inside a
//! double well.
//!
//! Dimensionless phases: a lobe contributes `area/2` (so an isolated well is
//! quantized at `pi (n + 1/2)`), and the barrier integrals are already in
//! units of `hbar`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::meanfield::{self, FixedPointKind};
use crate::params::ModelParams;
use crate::poly;
use crate::quadrature::{integrate_sin2, integrate_sin2_complex, DEFAULT_TOL};
use crate::special::arg_gamma_half;

/// Which momentum potential a turning point sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `U_-(p) = H(p, pi/2)`.
    Lower,
    /// `U_+(p) = H(p, 0)`.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoint {
    pub p: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitClass {
    MinEncircling,
    MaxEncircling,
    Rotor,
    DoubleWellPair,
}

/// Energy regions of a double-well system: `I` below the upper well
/// minimum, `II` between it and the barrier, `III` above the barrier.
/// `Single` when there is no barrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    I,
    II,
    III,
    Single,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::Single => "single",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitGeometry {
    pub energy: f64,
    /// Sorted ascending in `p`.
    pub turning_points: Vec<TurningPoint>,
    pub orbit_class: OrbitClass,
    pub region: Region,
    /// Momentum intervals of the connected pieces of `{H < E}`.
    pub lobes: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierInfo {
    pub e_barr: f64,
    pub p_barr: f64,
    pub e_min_lower: f64,
    pub e_min_upper: f64,
    pub p_min_lower: f64,
    pub p_min_upper: f64,
}

/// Below-barrier tunneling data. With the orientation used here `s_eps`
/// is negative under the barrier, so `kappa = exp(-pi s_eps) >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tunneling {
    pub s_eps: f64,
    pub kappa: f64,
}

impl Tunneling {
    /// The barrier penetration factor `exp(-pi |s_eps|)`, at most 1.
    pub fn transmission(&self) -> f64 {
        (-PI * self.s_eps.abs()).exp()
    }
}

/// Above-barrier continuation: `s_eps >= 0` and the phase `s_theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AboveBarrier {
    pub s_eps: f64,
    pub s_theta: f64,
}

/// All action quantities at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionData {
    pub energy: f64,
    pub region: Region,
    /// Total enclosed action (all lobes).
    pub s: f64,
    /// `dS/dE`; infinite on the separatrix.
    pub t: f64,
    pub s_l: Option<f64>,
    pub s_r: Option<f64>,
    pub s_eps: Option<f64>,
    pub kappa: Option<f64>,
    pub s_phi: Option<f64>,
    pub s_theta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SegmentKind {
    Allowed,
    Saturated,
    Forbidden,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Segment {
    pub a: f64,
    pub b: f64,
    pub kind: SegmentKind,
}

/// The Hamiltonian in reduced units, checked for the semiclassical regime.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Model {
    pub eps: f64,
    pub v: f64,
    pub g: f64,
    pub ns: f64,
    pub hbar: f64,
}

impl Model {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        if !(params.v > 0.0) {
            return Err(Error::Unsupported(
                "the semiclassical analysis needs a positive coupling v".into(),
            ));
        }
        Ok(Self {
            eps: params.epsilon,
            v: params.v,
            g: params.g,
            ns: params.ns(),
            hbar: params.hbar,
        })
    }

    pub fn scale(&self) -> f64 {
        self.eps.abs() * self.ns + self.v * self.ns + self.g.abs() * self.ns * self.ns
    }

    /// `E - eps x - g/2 (Ns^2 + x^2)`.
    pub fn r(&self, e: f64, x: f64) -> f64 {
        e - self.eps * x - 0.5 * self.g * (self.ns * self.ns + x * x)
    }

    pub fn root(&self, x: f64) -> f64 {
        ((self.ns - x) * (self.ns + x)).max(0.0).sqrt()
    }

    pub fn ratio(&self, e: f64, x: f64) -> f64 {
        self.r(e, x) / (self.v * self.root(x))
    }

    pub fn ratio_c(&self, e: f64, z: Complex64) -> Complex64 {
        let r = e - self.eps * z - 0.5 * self.g * (self.ns * self.ns + z * z);
        r / (self.v * (self.ns * self.ns - z * z).sqrt())
    }

    /// `(a + R, a - R)` with `a = v sqrt(Ns^2 - x^2)`, so that
    /// `X = R / a` and `D = (a + R)(a - R)`. The factor that vanishes at the
    /// turning point `anchor` is formed from differences to it, which keeps
    /// it accurate where the direct form cancels.
    pub fn factors(&self, e: f64, x: f64, anchor: Option<(f64, Branch)>) -> (f64, f64) {
        let a = self.v * self.root(x);
        let r = self.r(e, x);
        let Some((t, branch)) = anchor else {
            return (a + r, a - r);
        };
        let da = self.v * (t - x) * (t + x) / (self.root(x) + self.root(t)).max(f64::MIN_POSITIVE);
        let dr = (x - t) * (-self.eps - 0.5 * self.g * (x + t));
        match branch {
            Branch::Lower => {
                let apr = da + dr;
                (apr, 2.0 * a - apr)
            }
            Branch::Upper => {
                let amr = da - dr;
                (2.0 * a - amr, amr)
            }
        }
    }

    /// `arccos(-X)` on an allowed segment.
    pub fn arc(&self, e: f64, x: f64, anchor: Option<(f64, Branch)>) -> f64 {
        let (apr, amr) = self.factors(e, x, anchor);
        2.0 * apr.max(0.0).sqrt().atan2(amr.max(0.0).sqrt())
    }

    /// `arccosh |X|` outside the allowed band (`|X| >= 1`).
    pub fn arc_h(&self, e: f64, x: f64, anchor: Option<(f64, Branch)>) -> f64 {
        let (apr, amr) = self.factors(e, x, anchor);
        let a = self.v * self.root(x);
        let num = -apr.min(amr) + (-apr * amr).max(0.0).sqrt();
        if a > 0.0 {
            (num.max(0.0) / a).ln_1p()
        } else {
            f64::INFINITY
        }
    }

    /// `D = v^2 (Ns^2 - x^2) - R^2` from the anchored factors.
    pub fn disc(&self, e: f64, x: f64, anchor: Option<(f64, Branch)>) -> f64 {
        let (apr, amr) = self.factors(e, x, anchor);
        apr * amr
    }

    /// Coefficients of `R^2 + v^2 x^2 - v^2 Ns^2` in `x`, highest first.
    fn quartic(&self, e: f64) -> [f64; 5] {
        let a2 = -0.5 * self.g;
        let a1 = -self.eps;
        let a0 = e - 0.5 * self.g * self.ns * self.ns;
        let v2 = self.v * self.v;
        [
            a2 * a2,
            2.0 * a2 * a1,
            a1 * a1 + 2.0 * a2 * a0 + v2,
            2.0 * a1 * a0,
            a0 * a0 - v2 * self.ns * self.ns,
        ]
    }

    pub fn quartic_roots(&self, e: f64) -> Vec<Complex64> {
        poly::roots(&self.quartic(e))
    }

    fn polish_real(&self, e: f64, mut x: f64, sign: f64) -> f64 {
        // Newton on R(x) - sign v sqrt(Ns^2 - x^2)
        for _ in 0..20 {
            let root = self.root(x);
            if root == 0.0 {
                break;
            }
            let f = self.r(e, x) - sign * self.v * root;
            let df = -self.eps - self.g * x + sign * self.v * x / root;
            if df == 0.0 || !f.is_finite() {
                break;
            }
            let nx = x - f / df;
            if !nx.is_finite() || nx.abs() >= self.ns {
                break;
            }
            let done = (nx - x).abs() <= 1e-15 * self.ns;
            x = nx;
            if done {
                break;
            }
        }
        x
    }

    fn classify(&self, e: f64, x: f64) -> SegmentKind {
        let r = self.r(e, x);
        let a = self.v * self.root(x);
        if r > a {
            SegmentKind::Saturated
        } else if r < -a {
            SegmentKind::Forbidden
        } else {
            SegmentKind::Allowed
        }
    }

    /// Segment decomposition of `[-Ns, Ns]` at energy `e`.
    pub fn partition(&self, e: f64) -> Vec<Segment> {
        let ns = self.ns;
        let mut cuts: Vec<f64> = self
            .quartic_roots(e)
            .into_iter()
            .filter(|z| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()) && z.re.abs() < ns)
            .map(|z| {
                let sign = if self.r(e, z.re) >= 0.0 { 1.0 } else { -1.0 };
                self.polish_real(e, z.re, sign)
            })
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * ns);

        let mut bounds = Vec::with_capacity(cuts.len() + 2);
        bounds.push(-ns);
        bounds.extend(cuts);
        bounds.push(ns);

        let mut segs: Vec<Segment> = Vec::with_capacity(bounds.len());
        for w in bounds.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let kind = self.classify(e, 0.5 * (a + b));
            match segs.last_mut() {
                Some(last) if last.kind == kind => last.b = b,
                _ => segs.push(Segment { a, b, kind }),
            }
        }
        segs
    }
}

fn lobes_of(segs: &[Segment]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for s in segs {
        if s.kind == SegmentKind::Forbidden {
            if let Some(l) = open.take() {
                out.push(l);
            }
        } else {
            open = Some(match open {
                Some((a, _)) => (a, s.b),
                None => (s.a, s.b),
            });
        }
    }
    if let Some(l) = open {
        out.push(l);
    }
    out
}

fn turning_of(segs: &[Segment]) -> Vec<(f64, Branch)> {
    segs.windows(2).map(|w| (w[0].b, joint_branch(w[0].kind, w[1].kind))).collect()
}

/// Branch of the turning point between two adjacent segments.
fn joint_branch(left: SegmentKind, right: SegmentKind) -> Branch {
    if left == SegmentKind::Saturated || right == SegmentKind::Saturated {
        Branch::Upper
    } else {
        Branch::Lower
    }
}

/// Turning points at the two ends of segment `i`; `None` at the rim.
pub(crate) fn segment_anchors(segs: &[Segment], i: usize) -> [Option<(f64, Branch)>; 2] {
    let s = segs[i];
    let left = i.checked_sub(1).map(|j| (s.a, joint_branch(segs[j].kind, s.kind)));
    let right = segs.get(i + 1).map(|n| (s.b, joint_branch(s.kind, n.kind)));
    [left, right]
}

/// The end of `[a, b]` nearer to `x` that is a turning point.
pub(crate) fn nearest_anchor(anchors: [Option<(f64, Branch)>; 2], x: f64) -> Option<(f64, Branch)> {
    match anchors {
        [Some(l), Some(r)] => Some(if (x - l.0).abs() <= (r.0 - x).abs() { l } else { r }),
        [l, r] => l.or(r),
    }
}

/// `int (pi - arccos X) dx` over the segments clipped to `[lo, hi]`.
pub(crate) fn area_between(m: &Model, e: f64, segs: &[Segment], lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for (i, s) in segs.iter().enumerate() {
        let a = s.a.max(lo);
        let b = s.b.min(hi);
        if b <= a {
            continue;
        }
        let anchors = segment_anchors(segs, i);
        total += match s.kind {
            SegmentKind::Saturated => PI * (b - a),
            SegmentKind::Forbidden => 0.0,
            SegmentKind::Allowed => integrate_sin2(
                |x| m.arc(e, x, nearest_anchor(anchors, x)),
                a,
                b,
                tol,
                tol * PI * m.ns,
            )?,
        };
    }
    Ok(total)
}

/// `dA/dE = int dx / sqrt(v^2 (Ns^2 - x^2) - R^2)` over the allowed
/// segments inside `[lo, hi]`.
pub(crate) fn darea_between(m: &Model, e: f64, segs: &[Segment], lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for (i, s) in segs.iter().enumerate() {
        let a = s.a.max(lo);
        let b = s.b.min(hi);
        if s.kind != SegmentKind::Allowed || b <= a {
            continue;
        }
        let anchors = segment_anchors(segs, i);
        total += integrate_sin2(
            |x| 1.0 / m.disc(e, x, nearest_anchor(anchors, x)).max(f64::MIN_POSITIVE).sqrt(),
            a,
            b,
            tol,
            tol * PI / m.v,
        )?;
    }
    Ok(total)
}

fn check_energy(params: &ModelParams, e: f64) -> Result<(f64, f64)> {
    let (lo, hi) = meanfield::energy_range(params)?;
    let tol = 1e-12 * params.energy_scale();
    if !e.is_finite() || e < lo - tol || e > hi + tol {
        return Err(Error::EnergyOutOfRange {
            energy: e,
            min: lo,
            max: hi,
        });
    }
    Ok((lo, hi))
}

/// `q(p, E) = arccos(X)/2`. Inside the classically allowed band the value
/// is real in `[0, pi/2]`; outside it is continued with a non-negative
/// imaginary part: `i acosh(X)/2` for `X > 1` and `pi/2 + i acosh(-X)/2`
/// for `X < -1`.
pub fn q_of_p(params: &ModelParams, e: f64, p: f64) -> Result<Complex64> {
    let m = Model::new(params)?;
    let x = p / params.hbar;
    if !(x.abs() < m.ns) {
        return Err(Error::RimSingularity { p });
    }
    let xr = m.ratio(e, x);
    Ok(if xr > 1.0 {
        Complex64::new(0.0, 0.5 * xr.acosh())
    } else if xr < -1.0 {
        Complex64::new(0.5 * PI, 0.5 * (-xr).acosh())
    } else {
        Complex64::new(0.5 * xr.acos(), 0.0)
    })
}

/// The saddle and the two well minima of a double-well system.
pub fn barrier(params: &ModelParams) -> Result<BarrierInfo> {
    Model::new(params)?;
    let fps = meanfield::fixed_points(params)?;
    let saddle = fps
        .iter()
        .find(|f| f.kind == FixedPointKind::Saddle && f.point.q != 0.0)
        .ok_or_else(|| Error::NoBarrier("no saddle point on the q = pi/2 line".into()))?;
    let mut minima: Vec<_> = fps.iter().filter(|f| f.kind == FixedPointKind::Minimum).collect();
    if minima.len() != 2 {
        return Err(Error::NoBarrier(format!("expected two minima, found {}", minima.len())));
    }
    minima.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(BarrierInfo {
        e_barr: saddle.energy,
        p_barr: saddle.point.p,
        e_min_lower: minima[0].energy,
        e_min_upper: minima[1].energy,
        p_min_lower: minima[0].point.p,
        p_min_upper: minima[1].point.p,
    })
}

fn region_of(barrier: Option<&BarrierInfo>, e: f64) -> Region {
    match barrier {
        None => Region::Single,
        Some(b) if e < b.e_min_upper => Region::I,
        Some(b) if e < b.e_barr => Region::II,
        Some(_) => Region::III,
    }
}

/// Real turning points, lobes and orbit classification at energy `e`.
pub fn turning_points(params: &ModelParams, e: f64) -> Result<OrbitGeometry> {
    let m = Model::new(params)?;
    check_energy(params, e)?;
    let segs = m.partition(e);
    let hb = params.hbar;
    let turning_points: Vec<TurningPoint> = turning_of(&segs)
        .into_iter()
        .map(|(x, branch)| TurningPoint { p: x * hb, branch })
        .collect();
    let lobes: Vec<(f64, f64)> = lobes_of(&segs).into_iter().map(|(a, b)| (a * hb, b * hb)).collect();
    let orbit_class = if lobes.len() >= 2 {
        OrbitClass::DoubleWellPair
    } else {
        let lower = turning_points.iter().any(|t| t.branch == Branch::Lower);
        let upper = turning_points.iter().any(|t| t.branch == Branch::Upper);
        match (lower, upper) {
            (true, true) => OrbitClass::Rotor,
            (false, true) => OrbitClass::MaxEncircling,
            (true, false) => OrbitClass::MinEncircling,
            // no cut at all: either everything or nothing is enclosed
            (false, false) => {
                if segs.iter().any(|s| s.kind == SegmentKind::Saturated) {
                    OrbitClass::MaxEncircling
                } else {
                    OrbitClass::MinEncircling
                }
            }
        }
    };
    let b = barrier(params).ok();
    Ok(OrbitGeometry {
        energy: e,
        turning_points,
        orbit_class,
        region: region_of(b.as_ref(), e),
        lobes,
    })
}

/// Total action `S(E) = hbar * area{H < E}`, summed over all lobes.
pub fn action(params: &ModelParams, e: f64) -> Result<f64> {
    let m = Model::new(params)?;
    check_energy(params, e)?;
    let segs = m.partition(e);
    Ok(m.hbar * area_between(&m, e, &segs, -m.ns, m.ns, DEFAULT_TOL)?)
}

/// Action of each lobe, ordered by momentum.
pub fn lobe_actions(params: &ModelParams, e: f64) -> Result<Vec<f64>> {
    let m = Model::new(params)?;
    check_energy(params, e)?;
    let segs = m.partition(e);
    lobes_of(&segs)
        .into_iter()
        .map(|(a, b)| Ok(m.hbar * area_between(&m, e, &segs, a, b, DEFAULT_TOL)?))
        .collect()
}

fn check_separatrix(params: &ModelParams, e: f64) -> Result<()> {
    let guard = 1e-9 * params.energy_scale();
    let fps = meanfield::fixed_points(params)?;
    if fps
        .iter()
        .any(|f| f.kind == FixedPointKind::Saddle && (f.energy - e).abs() < guard)
    {
        return Err(Error::Separatrix(e));
    }
    Ok(())
}

/// `T = dS/dE` from the direct integral `int dp / |dH/dq|` over the
/// orbit, summed over all lobes.
pub fn period_direct(params: &ModelParams, e: f64) -> Result<f64> {
    let m = Model::new(params)?;
    check_energy(params, e)?;
    check_separatrix(params, e)?;
    let segs = m.partition(e);
    Ok(m.hbar * darea_between(&m, e, &segs, -m.ns, m.ns, DEFAULT_TOL)?)
}

/// `T = dS/dE` by central differences with one Richardson step. The
/// stencil is kept away from every stationary energy.
pub fn period(params: &ModelParams, e: f64) -> Result<f64> {
    let m = Model::new(params)?;
    let (lo, hi) = check_energy(params, e)?;
    check_separatrix(params, e)?;
    let critical: Vec<f64> = meanfield::fixed_points(params)?
        .iter()
        .map(|f| f.energy)
        .chain([lo, hi])
        .collect();
    let gap = critical.iter().map(|c| (c - e).abs()).fold(f64::INFINITY, f64::min);
    let h = (1e-3 * (hi - lo)).min(0.2 * gap);
    if !(h > 0.0) {
        return Err(Error::Separatrix(e));
    }
    let s = |x: f64| -> Result<f64> {
        let segs = m.partition(x);
        area_between(&m, x, &segs, -m.ns, m.ns, 1e-14)
    };
    let d = |h: f64| -> Result<f64> { Ok((s(e + h)? - s(e - h)?) / (2.0 * h)) };
    let (d1, d2) = (d(h)?, d(0.5 * h)?);
    Ok(m.hbar * (4.0 * d2 - d1) / 3.0)
}

/// Smooth level density `T(E) / (2 pi hbar Ns)`, with unit integral over
/// the energy range.
pub fn smooth_level_density(params: &ModelParams, e: f64) -> Result<f64> {
    Ok(period_direct(params, e)? / (2.0 * PI * params.hbar * params.ns()))
}

/// Average of [`smooth_level_density`] over `[a, b]`, from the action
/// difference. Finite even when the interval holds the separatrix.
pub fn mean_level_density(params: &ModelParams, a: f64, b: f64) -> Result<f64> {
    if !(b > a) {
        return Err(Error::InvalidArgument(format!("empty energy interval [{a}, {b}]")));
    }
    let ds = action(params, b)? - action(params, a)?;
    Ok(ds / (2.0 * PI * params.hbar * params.ns() * (b - a)))
}

/// `S_phi = arg Gamma(1/2 + i s) - s ln|s| + s`, with `S_phi(0) = 0`.
pub fn phase_correction(s_eps: f64) -> f64 {
    if s_eps == 0.0 {
        return 0.0;
    }
    arg_gamma_half(s_eps) - s_eps * s_eps.abs().ln() + s_eps
}

/// Phases entering the double-well quantization at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Phases {
    pub phi_l: f64,
    pub phi_r: f64,
    pub s_eps: f64,
    pub s_theta: f64,
}

/// Double-well bookkeeping in reduced units.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DoubleWell {
    pub m: Model,
    pub info: BarrierInfo,
    pub x_barr: f64,
}

impl DoubleWell {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let m = Model::new(params)?;
        let info = barrier(params)?;
        Ok(Self {
            m,
            info,
            x_barr: info.p_barr / params.hbar,
        })
    }

    pub fn guard(&self) -> f64 {
        1e-9 * self.m.scale()
    }

    /// `-(1/pi) int acosh(-X)/2 dx` over the forbidden gap containing the
    /// barrier; zero if the gap is closed.
    fn below(&self, e: f64, segs: &[Segment], tol: f64) -> Result<f64> {
        let m = &self.m;
        let gap = segs
            .iter()
            .position(|s| s.kind == SegmentKind::Forbidden && s.a < self.x_barr && self.x_barr < s.b);
        let Some(i) = gap else { return Ok(0.0) };
        let gap = segs[i];
        if gap.a <= -m.ns || gap.b >= m.ns {
            return Err(Error::NoBarrier(format!("forbidden gap reaches the rim at E = {e}")));
        }
        let anchors = segment_anchors(segs, i);
        let th = integrate_sin2(
            |x| 0.5 * m.arc_h(e, x, nearest_anchor(anchors, x)),
            gap.a,
            gap.b,
            tol,
            tol * m.ns,
        )?;
        Ok(-th / PI)
    }

    /// The complex turning-point pair above the barrier (upper member).
    fn complex_pair(&self, e: f64) -> Option<Complex64> {
        let tiny = 1e-9 * self.m.ns;
        self.m
            .quartic_roots(e)
            .into_iter()
            .filter(|z| z.im > tiny)
            .min_by(|a, b| (a.re - self.x_barr).abs().total_cmp(&(b.re - self.x_barr).abs()))
    }

    fn above(&self, e: f64, tol: f64) -> Result<(f64, f64)> {
        let m = self.m;
        let Some(zc) = self.complex_pair(e) else {
            return Ok((0.0, 0.0));
        };
        let f = |z: Complex64| (-m.ratio_c(e, z)).acos();
        // int_{-t}^{t} arccos(-X(c + i tau)) d tau, i.e. -i times the
        // contour integral from conj(zc) to zc
        let line = integrate_sin2_complex(f, zc.conj(), zc, tol, tol * PI * m.ns)?;
        let s_eps = (Complex64::new(0.0, -1.0) * line).re / (2.0 * PI);
        let side = integrate_sin2_complex(f, zc, Complex64::from(self.x_barr), tol, tol * PI * m.ns)?;
        Ok((s_eps, side.re))
    }

    pub fn phases(&self, e: f64, tol: f64) -> Result<Phases> {
        let m = &self.m;
        let segs = m.partition(e);
        let phi_l = 0.5 * area_between(m, e, &segs, -m.ns, self.x_barr, tol)?;
        let phi_r = 0.5 * area_between(m, e, &segs, self.x_barr, m.ns, tol)?;
        let (s_eps, s_theta) = if (e - self.info.e_barr).abs() <= self.guard() {
            (0.0, 0.0)
        } else if e < self.info.e_barr {
            (self.below(e, &segs, tol)?, 0.0)
        } else {
            self.above(e, tol)?
        };
        Ok(Phases {
            phi_l,
            phi_r,
            s_eps,
            s_theta,
        })
    }
}

/// Barrier integral and `kappa` below the barrier.
pub fn tunneling_below(params: &ModelParams, e: f64) -> Result<Tunneling> {
    let dw = DoubleWell::new(params)?;
    check_energy(params, e)?;
    if e > dw.info.e_barr + dw.guard() {
        return Err(Error::InvalidArgument(format!(
            "energy {e} lies above the barrier {}",
            dw.info.e_barr
        )));
    }
    let s_eps = if e >= dw.info.e_barr - dw.guard() {
        0.0
    } else {
        let segs = dw.m.partition(e);
        dw.below(e, &segs, DEFAULT_TOL)?
    };
    Ok(Tunneling {
        s_eps,
        kappa: (-PI * s_eps).exp(),
    })
}

/// Continuation of the barrier integral and the phase `S_theta` above the
/// barrier.
pub fn tunneling_above(params: &ModelParams, e: f64) -> Result<AboveBarrier> {
    let dw = DoubleWell::new(params)?;
    check_energy(params, e)?;
    if e < dw.info.e_barr - dw.guard() {
        return Err(Error::InvalidArgument(format!(
            "energy {e} lies below the barrier {}",
            dw.info.e_barr
        )));
    }
    if e <= dw.info.e_barr + dw.guard() {
        return Ok(AboveBarrier {
            s_eps: 0.0,
            s_theta: 0.0,
        });
    }
    let (s_eps, s_theta) = dw.above(e, DEFAULT_TOL)?;
    Ok(AboveBarrier { s_eps, s_theta })
}

/// Everything at once. The period is infinite on the separatrix.
pub fn action_data(params: &ModelParams, e: f64) -> Result<ActionData> {
    let s = action(params, e)?;
    let t = match period_direct(params, e) {
        Ok(t) => t,
        Err(Error::Separatrix(_)) => f64::INFINITY,
        Err(err) => return Err(err),
    };
    let mut out = ActionData {
        energy: e,
        region: Region::Single,
        s,
        t,
        s_l: None,
        s_r: None,
        s_eps: None,
        kappa: None,
        s_phi: None,
        s_theta: None,
    };
    if let Ok(dw) = DoubleWell::new(params) {
        out.region = region_of(Some(&dw.info), e);
        let ph = dw.phases(e, DEFAULT_TOL)?;
        out.s_l = Some(ph.phi_l);
        out.s_r = Some(ph.phi_r);
        out.s_eps = Some(ph.s_eps);
        out.kappa = Some((-PI * ph.s_eps).exp());
        out.s_phi = Some(phase_correction(ph.s_eps));
        out.s_theta = Some(ph.s_theta);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set7() -> ModelParams {
        ModelParams::new(20, 0.0, 1.0, -1.0 / 7.0)
    }

    #[test]
    fn free_case_turning_points_at_rim() {
        let g = turning_points(&ModelParams::new(20, 0.0, 1.0, 0.0), 0.0).unwrap();
        // U_+ and U_- meet E = 0 only at the rim
        assert!(g.turning_points.is_empty());
        assert_eq!(g.lobes.len(), 1);
        assert!((g.lobes[0].0 + 21.0).abs() < 1e-12 && (g.lobes[0].1 - 21.0).abs() < 1e-12);
    }

    #[test]
    fn double_well_at_minus_sixty() {
        let p = set7();
        let g = turning_points(&p, -60.0).unwrap();
        assert_eq!(g.orbit_class, OrbitClass::DoubleWellPair);
        assert_eq!(g.region, Region::II);
        assert_eq!(g.turning_points.len(), 4);
        // the rim value of U_+ is -63, so the outer points sit on U_+
        let branches: Vec<Branch> = g.turning_points.iter().map(|t| t.branch).collect();
        assert_eq!(branches, [Branch::Upper, Branch::Lower, Branch::Lower, Branch::Upper]);
        for t in &g.turning_points {
            let (lo, hi) = meanfield::potentials(&p, t.p).unwrap();
            let u = if t.branch == Branch::Lower { lo } else { hi };
            assert!((u + 60.0).abs() < 1e-9);
        }
        let tp = &g.turning_points;
        assert!((tp[0].p + tp[3].p).abs() < 1e-9 && (tp[1].p + tp[2].p).abs() < 1e-9);
    }

    #[test]
    fn q_of_p_branches() {
        let p = set7();
        let g = turning_points(&p, -60.0).unwrap();
        let q = q_of_p(&p, -60.0, g.turning_points[1].p).unwrap();
        assert!((q.re - PI / 2.0).abs() < 1e-6 && q.im.abs() < 1e-6);
        // forbidden midpoint (p = 0): X = (-60 + 31.5) / 21
        let q0 = q_of_p(&p, -60.0, 0.0).unwrap();
        assert!((q0.im - 0.5 * (28.5f64 / 21.0).acosh()).abs() < 1e-14);
        assert!((q0.re - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_actions() {
        let p = set7();
        let (lo, hi) = meanfield::energy_range(&p).unwrap();
        assert!(action(&p, lo).unwrap().abs() < 1e-8 * 2.0 * PI * 21.0);
        assert!((action(&p, hi).unwrap() - 2.0 * PI * 21.0).abs() < 1e-8 * 2.0 * PI * 21.0);
    }

    #[test]
    fn barrier_of_symmetric_set() {
        let b = barrier(&set7()).unwrap();
        assert!((b.e_barr + 52.5).abs() < 1e-12 && b.p_barr.abs() < 1e-12);
        assert!((b.e_min_lower + 66.5).abs() < 1e-9 && (b.e_min_upper + 66.5).abs() < 1e-9);
        assert!(matches!(
            barrier(&ModelParams::with_g_over_ns(10, 0.0, 1.0, -0.5)),
            Err(Error::NoBarrier(_))
        ));
    }

    #[test]
    fn phase_correction_limits() {
        assert_eq!(phase_correction(0.0), 0.0);
        assert!(phase_correction(10.0).abs() < 0.01);
        assert!((phase_correction(-0.7) + phase_correction(0.7)).abs() < 1e-14);
    }

    #[test]
    fn tunneling_vanishes_at_barrier() {
        let p = set7();
        let below = tunneling_below(&p, -52.5 - 1e-6).unwrap();
        assert!(below.s_eps.abs() < 1e-5 && (below.kappa - 1.0).abs() < 1e-4);
        let above = tunneling_above(&p, -52.5 + 1e-6).unwrap();
        assert!(above.s_eps.abs() < 1e-5 && above.s_theta.abs() < 1e-5);
    }
}
