use crate::error::{Error, Result};

/// Physical parameters shared by the many-particle and the mean-field side.
///
/// `epsilon` is the onsite energy (mode energies are ±ε), `v` the coupling,
/// `g` the onsite interaction and `hbar` the action unit. The mean-field
/// amplitudes are normalized to `Ns = N + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub particles: usize,
    pub epsilon: f64,
    pub v: f64,
    pub g: f64,
    pub hbar: f64,
}

impl ModelParams {
    /// Parameters with `hbar = 1`. Not validated until used.
    pub fn new(particles: usize, epsilon: f64, v: f64, g: f64) -> Self {
        Self {
            particles,
            epsilon,
            v,
            g,
            hbar: 1.0,
        }
    }

    /// Interaction given in units of `1/Ns`, i.e. `g = g_over_ns / (N + 1)`.
    pub fn with_g_over_ns(particles: usize, epsilon: f64, v: f64, g_over_ns: f64) -> Self {
        Self::new(particles, epsilon, v, g_over_ns / (particles as f64 + 1.0))
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Symmetrized norm `Ns = N + 1`.
    #[inline]
    pub fn ns(&self) -> f64 {
        self.particles as f64 + 1.0
    }

    /// Hilbert-space dimension, equal to the number of levels.
    #[inline]
    pub fn dim(&self) -> usize {
        self.particles + 1
    }

    /// Largest momentum magnitude, `Ns * hbar`.
    #[inline]
    pub fn p_max(&self) -> f64 {
        self.ns() * self.hbar
    }

    /// Typical energy scale used for relative tolerances.
    pub fn energy_scale(&self) -> f64 {
        let ns = self.ns();
        (self.epsilon.abs() * ns + self.v.abs() * ns + self.g.abs() * ns * ns).max(f64::MIN_POSITIVE)
    }

    pub fn validate(&self) -> Result<()> {
        if self.particles < 1 {
            return Err(Error::InvalidParams("particle number must be at least 1".into()));
        }
        if !(self.hbar > 0.0) || !self.hbar.is_finite() {
            return Err(Error::InvalidParams(format!("hbar must be positive, got {}", self.hbar)));
        }
        for (name, x) in [("epsilon", self.epsilon), ("v", self.v), ("g", self.g)] {
            if !x.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {x}")));
            }
        }
        Ok(())
    }

    /// The semiclassical machinery is validated for `v > 0` and `g <= 0`.
    /// Other signs are accepted by the exact solver but not by the
    /// semiclassical one.
    pub fn in_validated_regime(&self) -> bool {
        self.v > 0.0 && self.g <= 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ns_is_n_plus_one() {
        let p = ModelParams::new(20, 0.0, 1.0, 0.0);
        assert_eq!(p.ns(), 21.0);
        assert_eq!(p.dim(), 21);
    }

    #[test]
    fn g_over_ns() {
        let p = ModelParams::with_g_over_ns(20, 0.5, 1.0, -3.0);
        assert!((p.g + 3.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0, 0.0, 1.0, 0.0).validate().is_err());
        assert!(ModelParams::new(2, 0.0, 1.0, 0.0).with_hbar(0.0).validate().is_err());
        assert!(ModelParams::new(2, 0.0, 1.0, 0.0).with_hbar(-1.0).validate().is_err());
        assert!(ModelParams::new(2, f64::NAN, 1.0, 0.0).validate().is_err());
        assert!(ModelParams::new(2, 0.0, 1.0, 0.0).validate().is_ok());
    }

    #[test]
    fn regime_flag() {
        assert!(ModelParams::new(2, 0.0, 1.0, -0.1).in_validated_regime());
        assert!(!ModelParams::new(2, 0.0, 1.0, 0.1).in_validated_regime());
        assert!(!ModelParams::new(2, 0.0, -1.0, -0.1).in_validated_regime());
    }
}
