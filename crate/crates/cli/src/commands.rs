//! One function per subcommand, each producing a [`Table`].

use std::f64::consts::PI;

use bosesemi_core::meanfield::{self, FixedPointKind, PhasePoint};
use bosesemi_core::quantize::{semiclassical_spectrum, sweep_epsilon, sweep_point};
use bosesemi_core::{action, quantum, wavefun, Error, ModelParams};

use crate::args::Method;
use crate::error::CliError;
use crate::parse::{GridSpec, SweepSpec};
use crate::table::{Cell, Table};

/// A finished table plus the number of computations that failed while
/// still leaving a usable file.
pub struct Report {
    pub table: Table,
    pub warnings: Vec<String>,
    pub failed: usize,
    pub total: usize,
}

impl Report {
    fn complete(table: Table) -> Self {
        Self {
            table,
            warnings: Vec::new(),
            failed: 0,
            total: 1,
        }
    }
}

pub fn spectrum(p: &ModelParams, method: Method) -> Result<Report, CliError> {
    let exact = method
        .exact()
        .then(|| quantum::exact_spectrum(p, true, false).map(|s| s.energies))
        .transpose()?;
    let sc = method
        .semiclassical()
        .then(|| semiclassical_spectrum(p).map(|s| s.energies()))
        .transpose()?;
    let span = exact
        .as_ref()
        .or(sc.as_ref())
        .map(|e| e[e.len() - 1] - e[0])
        .unwrap_or(0.0);
    let mut t = Table::new(&["n", "E_exact", "E_semiclassical", "abs_diff", "rel_diff"]);
    for n in 0..p.dim() {
        let a = exact.as_ref().map(|e| e[n]);
        let b = sc.as_ref().map(|e| e[n]);
        let diff = a.zip(b).map(|(a, b)| (a - b).abs());
        let rel = diff.filter(|_| span > 0.0).map(|d| d / span);
        t.push(vec![n.into(), a.into(), b.into(), diff.into(), rel.into()]);
    }
    Ok(Report::complete(t))
}

pub fn sweep(p: &ModelParams, method: Method, spec: &SweepSpec) -> Result<Report, CliError> {
    let grid = spec.points();
    let points = if grid.len() == 1 {
        p.validate()?;
        vec![sweep_point(p, grid[0], true)]
    } else {
        sweep_epsilon(p, &grid, true)?
    };
    let mut t = Table::new(&[
        "epsilon",
        "series",
        "index",
        "E_exact",
        "E_semiclassical",
        "E_stationary",
        "label",
    ]);
    let mut report_warnings = Vec::new();
    let mut failed = 0;
    for pt in &points {
        let mut pick = |wanted: bool, r: &Result<Vec<f64>, String>, what: &str| -> Option<Vec<f64>> {
            if !wanted {
                return None;
            }
            match r {
                Ok(e) => Some(e.clone()),
                Err(msg) => {
                    failed += 1;
                    report_warnings.push(format!("eps = {}: {what} failed: {msg}", pt.epsilon));
                    None
                }
            }
        };
        let exact = pick(method.exact(), &pt.exact, "exact");
        let sc = pick(method.semiclassical(), &pt.semiclassical, "semiclassical");
        for n in 0..p.dim() {
            t.push(vec![
                pt.epsilon.into(),
                "level".into(),
                n.into(),
                exact.as_ref().map(|e| e[n]).into(),
                sc.as_ref().map(|e| e[n]).into(),
                Cell::Empty,
                Cell::Empty,
            ]);
        }
        for (k, f) in pt.stationary.iter().enumerate() {
            t.push(vec![
                pt.epsilon.into(),
                "Hstat".into(),
                k.into(),
                Cell::Empty,
                Cell::Empty,
                f.energy.into(),
                f.label.as_str().into(),
            ]);
        }
    }
    let per_point = usize::from(method.exact()) + usize::from(method.semiclassical());
    Ok(Report {
        table: t,
        warnings: report_warnings,
        failed,
        total: points.len() * per_point,
    })
}

pub fn density(p: &ModelParams, bins: usize) -> Result<Report, CliError> {
    let spec = quantum::exact_spectrum(p, true, false)?;
    let hist = quantum::level_density(&spec, bins)?;
    let mut t = Table::new(&["series", "E", "height", "smooth", "label"]);
    let mut warnings = Vec::new();
    let mut failed = 0;
    for (c, h) in hist.centers().into_iter().zip(&hist.heights) {
        let smooth = match action::smooth_level_density(p, c) {
            Ok(r) => Cell::Num(r),
            Err(Error::Separatrix(_)) => Cell::Num(f64::INFINITY),
            Err(e) => {
                failed += 1;
                warnings.push(format!("smooth density at E = {c}: {e}"));
                Cell::Empty
            }
        };
        t.push(vec!["bin".into(), c.into(), (*h).into(), smooth, Cell::Empty]);
    }
    for f in meanfield::fixed_points(p)? {
        t.push(vec![
            "Hstat".into(),
            f.energy.into(),
            Cell::Empty,
            Cell::Empty,
            f.label.as_str().into(),
        ]);
    }
    Ok(Report {
        table: t,
        warnings,
        failed,
        total: bins,
    })
}

pub fn wavefunction(p: &ModelParams, method: Method, n: usize) -> Result<Report, CliError> {
    if n > p.particles {
        return Err(Error::StateIndex { n, max: p.particles }.into());
    }
    let mut warnings = Vec::new();
    let exact = if method.exact() {
        let spec = quantum::exact_spectrum(p, true, true)?;
        Some(quantum::p_representation(&spec, n)?)
    } else {
        None
    };
    let (primitive, uniform) = if method.semiclassical() {
        let u = match wavefun::uniform(p, n) {
            Ok(w) => Some(w),
            Err(Error::Unsupported(msg)) => {
                warnings.push(format!("uniform column left empty: {msg}"));
                None
            }
            Err(e) => return Err(e.into()),
        };
        (Some(wavefun::primitive_state(p, n)?), u)
    } else {
        (None, None)
    };
    let mut t = Table::new(&["p", "exact", "primitive", "uniform", "U_minus", "U_plus"]);
    for (i, &k) in wavefun::momentum_grid(p).iter().enumerate() {
        let (um, up) = meanfield::potentials(p, k as f64 * p.hbar)?;
        let at = |w: &Option<wavefun::MomentumWavefunction>| w.as_ref().map(|w| w.values[i]);
        t.push(vec![
            k.into(),
            at(&exact).into(),
            at(&primitive).into(),
            at(&uniform).into(),
            um.into(),
            up.into(),
        ]);
    }
    Ok(Report {
        table: t,
        warnings,
        failed: 0,
        total: 1,
    })
}

pub fn portrait(p: &ModelParams, grid: GridSpec) -> Result<Report, CliError> {
    let mut t = Table::new(&["series", "q", "p", "H", "label"]);
    let pmax = p.p_max();
    // cell centres in p keep the grid off the rim |p| = Ns hbar
    for i in 0..grid.nq {
        let q = PI * i as f64 / grid.nq as f64;
        for j in 0..grid.np {
            let pp = pmax * (-1.0 + (2 * j + 1) as f64 / grid.np as f64);
            let h = meanfield::hamiltonian(p, PhasePoint::new(q, pp))?;
            t.push(vec!["grid".into(), q.into(), pp.into(), h.into(), Cell::Empty]);
        }
    }
    let fixed = meanfield::fixed_points(p)?;
    for f in &fixed {
        t.push(vec![
            "fixed".into(),
            f.point.q.into(),
            f.point.p.into(),
            f.energy.into(),
            f.label.as_str().into(),
        ]);
    }
    if let Some(s) = fixed.iter().find(|f| f.kind == FixedPointKind::Saddle) {
        t.push(vec![
            "separatrix".into(),
            Cell::Empty,
            Cell::Empty,
            s.energy.into(),
            s.label.as_str().into(),
        ]);
    }
    Ok(Report::complete(t))
}
