//! Published reference levels for `N = 20`, `v = 1`, `g = -3/Ns` and
//! `eps in {0, 0.5, 1.0, 1.5}`, three decimals, as printed.
//!
//! The printed values are positive while the attractive model has a
//! negative spectrum, and the two printed columns are not labeled
//! reliably. [`resolve`] settles both questions against the exact
//! diagonalization once; every comparison then goes through the returned
//! [`Resolution`].

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quantum;

pub const PARTICLES: usize = 20;
pub const V: f64 = 1.0;
pub const G_OVER_NS: f64 = -3.0;
pub const EPSILONS: [f64; 4] = [0.0, 0.5, 1.0, 1.5];

/// First printed column per onsite energy.
pub const FIRST_COLUMN: [[f64; 21]; 4] = [
    [
        12.481, 16.354, 20.097, 23.707, 27.178, 30.508, 33.690, 36.718, 39.585, 42.281, 44.795, 47.111,
        49.181, 51.112, 52.193, 54.690, 54.783, 58.828, 58.829, 63.766, 63.766,
    ],
    [
        11.823, 15.692, 19.429, 23.032, 26.496, 29.815, 32.985, 35.997, 38.845, 41.516, 43.999, 46.273,
        48.301, 50.031, 51.406, 52.871, 54.680, 56.738, 61.512, 67.009, 73.171,
    ],
    [
        9.859, 13.715, 17.437, 21.021, 24.462, 27.753, 30.888, 33.857, 36.648, 39.246, 41.630, 43.758,
        45.649, 46.729, 48.952, 52.760, 57.413, 62.782, 68.813, 75.475, 82.751,
    ],
    [
        6.618, 10.458, 14.161, 17.722, 21.135, 24.391, 27.481, 30.395, 33.115, 35.622, 37.896, 40.090,
        43.015, 46.847, 51.439, 56.717, 62.641, 69.187, 76.340, 84.090, 92.432,
    ],
];

/// Second printed column per onsite energy.
pub const SECOND_COLUMN: [[f64; 21]; 4] = [
    [
        12.469, 16.342, 20.085, 23.695, 27.167, 30.497, 33.679, 36.708, 39.575, 42.272, 44.786, 47.104,
        49.176, 51.107, 52.192, 54.687, 54.781, 58.825, 58.826, 63.763, 63.763,
    ],
    [
        11.811, 15.679, 19.417, 23.020, 26.484, 29.804, 32.974, 35.987, 38.835, 41.507, 43.990, 46.265,
        48.299, 50.024, 51.406, 52.870, 54.678, 56.750, 61.518, 67.013, 73.173,
    ],
    [
        9.846, 13.702, 17.424, 21.008, 24.449, 27.741, 30.875, 33.844, 36.635, 39.234, 41.618, 43.745,
        45.642, 46.739, 48.979, 52.771, 57.419, 62.786, 68.815, 75.477, 82.752,
    ],
    [
        6.600, 10.440, 14.143, 17.703, 21.115, 24.370, 27.458, 30.369, 33.085, 35.583, 37.829, 40.070,
        43.023, 46.853, 51.443, 56.720, 62.643, 69.188, 76.341, 84.091, 92.433,
    ],
];

/// Parameters of the reference set at one onsite energy.
pub fn params(epsilon: f64) -> ModelParams {
    ModelParams::with_g_over_ns(PARTICLES, epsilon, V, G_OVER_NS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// `sorted(E)` of the stated parameters.
    Plain,
    /// `sorted(-E)` of the stated parameters.
    Negated,
    /// `sorted(E)` with the signs of `eps` and `g` flipped.
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    First,
    Second,
}

impl Column {
    pub fn values(&self) -> &'static [[f64; 21]; 4] {
        match self {
            Column::First => &FIRST_COLUMN,
            Column::Second => &SECOND_COLUMN,
        }
    }

    pub fn other(&self) -> Column {
        match self {
            Column::First => Column::Second,
            Column::Second => Column::First,
        }
    }
}

/// Outcome of matching the exact spectrum to the printed values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub convention: SignConvention,
    /// Column holding the exact levels; the other one is semiclassical.
    pub exact_column: Column,
    /// Largest deviation of the exact levels from that column.
    pub max_deviation: f64,
}

impl Resolution {
    pub fn semiclassical_column(&self) -> Column {
        self.exact_column.other()
    }

    /// Brings levels computed for `params(eps)` into the printed form.
    /// `compute` is called with the parameters the convention asks for.
    pub fn transform<F>(&self, epsilon: f64, compute: F) -> Result<Vec<f64>>
    where
        F: Fn(&ModelParams) -> Result<Vec<f64>>,
    {
        let base = params(epsilon);
        let mut e = match self.convention {
            SignConvention::Plain => compute(&base)?,
            SignConvention::Negated => compute(&base)?.into_iter().map(|x| -x).collect(),
            SignConvention::Flipped => {
                let mut p = base;
                p.epsilon = -p.epsilon;
                p.g = -p.g;
                compute(&p)?
            }
        };
        e.sort_by(f64::total_cmp);
        Ok(e)
    }
}

fn exact_levels(p: &ModelParams) -> Result<Vec<f64>> {
    Ok(quantum::exact_spectrum(p, true, false)?.energies)
}

/// Tries every sign convention against both columns with the symmetrized
/// exact spectrum and keeps the best match, which must lie within `tol`.
pub fn resolve(tol: f64) -> Result<Resolution> {
    let mut best: Option<Resolution> = None;
    for convention in [SignConvention::Plain, SignConvention::Negated, SignConvention::Flipped] {
        for column in [Column::First, Column::Second] {
            let candidate = Resolution {
                convention,
                exact_column: column,
                max_deviation: 0.0,
            };
            let mut dev: f64 = 0.0;
            for (k, &eps) in EPSILONS.iter().enumerate() {
                let e = candidate.transform(eps, exact_levels)?;
                for (a, b) in e.iter().zip(column.values()[k].iter()) {
                    dev = dev.max((a - b).abs());
                }
            }
            if best.map_or(true, |b| dev < b.max_deviation) {
                best = Some(Resolution {
                    max_deviation: dev,
                    ..candidate
                });
            }
        }
    }
    let best = best.expect("at least one candidate");
    if best.max_deviation > tol {
        return Err(Error::InvalidArgument(format!(
            "no sign convention matches the reference levels (best deviation {})",
            best.max_deviation
        )));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_sorted() {
        for col in [FIRST_COLUMN, SECOND_COLUMN] {
            for row in col.iter() {
                assert!(row.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }
}
