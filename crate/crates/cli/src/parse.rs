//! Parsers for the compound command-line values.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Upper bound on sweep points and on each grid dimension.
pub const MAX_POINTS: usize = 100_000;
/// Upper bound on the total number of portrait grid cells.
pub const MAX_CELLS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("expected {expected}, got {input:?}")]
    Shape { expected: &'static str, input: String },
    #[error("invalid number {0:?}")]
    Number(String),
    #[error("{0}")]
    Range(String),
}

/// `min:max:steps`, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let (span, last) = (self.max - self.min, (self.steps - 1) as f64);
        (0..self.steps).map(|k| self.min + span * k as f64 / last).collect()
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.steps)
    }
}

fn real(s: &str) -> Result<f64, ParseError> {
    let x: f64 = s.trim().parse().map_err(|_| ParseError::Number(s.to_string()))?;
    if !x.is_finite() {
        return Err(ParseError::Number(s.to_string()));
    }
    Ok(x)
}

fn count(s: &str) -> Result<usize, ParseError> {
    s.trim().parse().map_err(|_| ParseError::Number(s.to_string()))
}

pub fn parse_sweep(s: &str) -> Result<SweepSpec, ParseError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, steps] = parts[..] else {
        return Err(ParseError::Shape {
            expected: "min:max:steps",
            input: s.to_string(),
        });
    };
    let spec = SweepSpec {
        min: real(min)?,
        max: real(max)?,
        steps: count(steps)?,
    };
    if spec.min > spec.max {
        return Err(ParseError::Range(format!("sweep minimum {} exceeds maximum {}", spec.min, spec.max)));
    }
    match spec.steps {
        0 => Err(ParseError::Range("sweep needs at least one step".into())),
        1 if spec.min != spec.max => Err(ParseError::Range(
            "a single-step sweep needs min = max; use at least 2 steps".into(),
        )),
        n if n > MAX_POINTS => Err(ParseError::Range(format!("at most {MAX_POINTS} sweep steps"))),
        _ => Ok(spec),
    }
}

impl FromStr for SweepSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sweep(s)
    }
}

/// Portrait resolution `<nq>x<np>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub nq: usize,
    pub np: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { nq: 200, np: 200 }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.nq, self.np)
    }
}

pub fn parse_grid(s: &str) -> Result<GridSpec, ParseError> {
    let Some((a, b)) = s.split_once(['x', 'X']) else {
        return Err(ParseError::Shape {
            expected: "<nq>x<np>",
            input: s.to_string(),
        });
    };
    let g = GridSpec {
        nq: count(a)?,
        np: count(b)?,
    };
    for (name, n) in [("nq", g.nq), ("np", g.np)] {
        if !(2..=MAX_POINTS).contains(&n) {
            return Err(ParseError::Range(format!("{name} must lie in 2..={MAX_POINTS}, got {n}")));
        }
    }
    if g.nq * g.np > MAX_CELLS {
        return Err(ParseError::Range(format!("grid {g} has too many points")));
    }
    Ok(g)
}

impl FromStr for GridSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_grid(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_forms() {
        let s = parse_sweep("-2:2:81").unwrap();
        assert_eq!((s.min, s.max, s.steps), (-2.0, 2.0, 81));
        let pts = s.points();
        assert_eq!(pts.len(), 81);
        assert_eq!(pts[40], 0.0);
        assert_eq!(*pts.last().unwrap(), 2.0);
        assert_eq!(parse_sweep("0.5:0.5:1").unwrap().points(), vec![0.5]);
        assert_eq!(parse_sweep(" 1e-1 : 2 : 3").unwrap().min, 0.1);
    }

    #[test]
    fn sweep_rejects() {
        for bad in ["", "1:2", "1:2:3:4", "a:2:3", "2:1:5", "0:1:0", "0:1:1", "0:inf:3", "nan:1:2", "0:1:-3"] {
            assert!(parse_sweep(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("200x100").unwrap(), GridSpec { nq: 200, np: 100 });
        assert_eq!(parse_grid("3X4").unwrap(), GridSpec { nq: 3, np: 4 });
        for bad in ["", "200", "x", "1x5", "5x", "-3x4", "200x200x2", "100001x2"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
