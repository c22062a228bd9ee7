//! The N-particle two-mode Bose-Hubbard Hamiltonian in the number basis.
//!
//! Basis states are `|n1, N - n1>` for `n1 = 0..=N`, so the Hamiltonian is
//! tridiagonal: the interaction and bias are diagonal, the coupling hops one
//! particle between the modes.

pub mod tridiag;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::wavefun::{MomentumWavefunction, WavefunctionKind};

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub params: ModelParams,
    pub symmetrized: bool,
}

impl TridiagonalHamiltonian {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `H x` for a vector in the number basis.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Largest absolute matrix element.
    pub fn max_abs_element(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Dense row-major copy, mostly useful for checks.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.offdiag[i];
                m[i + 1][i] = self.offdiag[i];
            }
        }
        m
    }
}

/// The constant by which the symmetrized Hamiltonian exceeds the plain one.
///
/// Replacing `n_j` by `(a_j^+ a_j + a_j a_j^+)/2 = n_j + 1/2` in the
/// interaction adds `g (n1 + n2 + 1/2) = g (N + 1/2)`.
pub fn symmetrization_shift(params: &ModelParams) -> f64 {
    params.g * (params.particles as f64 + 0.5)
}

/// Builds the Hamiltonian matrix in the number basis.
///
/// `diag[n1] = eps (2 n1 - N) + g (n1^2 + n2^2)` (+ `g (N + 1/2)` when
/// symmetrized) and `offdiag[n1] = v sqrt((n1 + 1)(N - n1))`.
pub fn build_hamiltonian(params: &ModelParams, symmetrized: bool) -> Result<TridiagonalHamiltonian> {
    params.validate()?;
    let n = params.particles;
    let nf = n as f64;
    let shift = if symmetrized { symmetrization_shift(params) } else { 0.0 };

    let diag = (0..=n)
        .map(|n1| {
            let a = n1 as f64;
            let b = nf - a;
            params.epsilon * (2.0 * a - nf) + params.g * (a * a + b * b) + shift
        })
        .collect();
    let offdiag = (0..n)
        .map(|n1| {
            let a = n1 as f64;
            params.v * ((a + 1.0) * (nf - a)).sqrt()
        })
        .collect();

    Ok(TridiagonalHamiltonian {
        diag,
        offdiag,
        params: *params,
        symmetrized,
    })
}

/// Exact spectrum, sorted ascending, with optional eigenvectors in the
/// number basis (`eigenvectors[j][n1]`).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub params: ModelParams,
    pub symmetrized: bool,
    pub energies: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.energies[0]
    }

    pub fn max(&self) -> f64 {
        self.energies[self.energies.len() - 1]
    }
}

pub fn diagonalize(h: &TridiagonalHamiltonian, want_vectors: bool) -> Result<Spectrum> {
    let r = tridiag::eigen(&h.diag, &h.offdiag, want_vectors)?;
    Ok(Spectrum {
        params: h.params,
        symmetrized: h.symmetrized,
        energies: r.values,
        eigenvectors: r.vectors,
    })
}

/// Convenience: build and diagonalize in one step.
pub fn exact_spectrum(params: &ModelParams, symmetrized: bool, want_vectors: bool) -> Result<Spectrum> {
    diagonalize(&build_hamiltonian(params, symmetrized)?, want_vectors)
}

/// Momentum (population-imbalance) distribution of eigenstate `n` on the
/// grid `p = 2 n1 - N`.
pub fn p_representation(spec: &Spectrum, n: usize) -> Result<MomentumWavefunction> {
    let vectors = spec.eigenvectors.as_ref().ok_or(Error::MissingEigenvectors)?;
    let max = spec.len() - 1;
    let vec = vectors.get(n).ok_or(Error::StateIndex { n, max })?;
    let big_n = spec.params.particles as i64;
    let grid = (0..=big_n).map(|n1| 2 * n1 - big_n).collect();
    let values = vec.iter().map(|c| c * c).collect();
    Ok(MomentumWavefunction {
        grid,
        values,
        kind: WavefunctionKind::Exact,
        state: n,
        energy: spec.energies[n],
    })
}

/// Normalized histogram of the eigenvalues.
#[derive(Debug, Clone)]
pub struct LevelDensity {
    pub bin_edges: Vec<f64>,
    pub heights: Vec<f64>,
    pub normalization: f64,
}

impl LevelDensity {
    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Index of the bin containing `e`, if inside the histogram range.
    pub fn bin_of(&self, e: f64) -> Option<usize> {
        let lo = self.bin_edges[0];
        let hi = *self.bin_edges.last().unwrap();
        if e < lo || e > hi {
            return None;
        }
        let k = ((e - lo) / self.bin_width()) as usize;
        Some(k.min(self.heights.len() - 1))
    }
}

/// Equal-width histogram over `[min E, max E]`, normalized to unit integral.
pub fn level_density(spec: &Spectrum, num_bins: usize) -> Result<LevelDensity> {
    if num_bins < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 bins, got {num_bins}")));
    }
    let lo = spec.min();
    let hi = spec.max();
    if !(hi > lo) {
        return Err(Error::DegenerateRange(lo));
    }
    let width = (hi - lo) / num_bins as f64;
    let bin_edges: Vec<f64> = (0..=num_bins)
        .map(|k| if k == num_bins { hi } else { lo + k as f64 * width })
        .collect();
    let mut counts = vec![0usize; num_bins];
    for &e in &spec.energies {
        let k = (((e - lo) / width) as usize).min(num_bins - 1);
        counts[k] += 1;
    }
    let total = spec.len() as f64;
    let heights: Vec<f64> = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    let normalization = heights.iter().sum::<f64>() * width;
    Ok(LevelDensity {
        bin_edges,
        heights,
        normalization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_from_operators(p: &ModelParams) -> Vec<Vec<f64>> {
        // element-by-element from the second-quantized form
        let n = p.particles;
        let mut m = vec![vec![0.0; n + 1]; n + 1];
        for n1 in 0..=n {
            let n2 = n - n1;
            let (a, b) = (n1 as f64, n2 as f64);
            m[n1][n1] = p.epsilon * (a - b) + p.g * (a * a + b * b);
            // a1^+ a2 |n1, n2> = sqrt((n1 + 1) n2) |n1 + 1, n2 - 1>
            if n2 > 0 {
                m[n1 + 1][n1] += p.v * ((a + 1.0) * b).sqrt();
            }
            // a2^+ a1 |n1, n2> = sqrt(n1 (n2 + 1)) |n1 - 1, n2 + 1>
            if n1 > 0 {
                m[n1 - 1][n1] += p.v * (a * (b + 1.0)).sqrt();
            }
        }
        m
    }

    #[test]
    fn n2_free_matrix() {
        let h = build_hamiltonian(&ModelParams::new(2, 0.0, 1.0, 0.0), false).unwrap();
        assert_eq!(h.diag, vec![0.0, 0.0, 0.0]);
        let s2 = 2f64.sqrt();
        assert!((h.offdiag[0] - s2).abs() < 1e-15 && (h.offdiag[1] - s2).abs() < 1e-15);
    }

    #[test]
    fn symmetrization_is_uniform_shift() {
        let p = ModelParams::new(2, 0.0, 1.0, 1.0);
        let a = build_hamiltonian(&p, false).unwrap();
        let b = build_hamiltonian(&p, true).unwrap();
        for (x, y) in a.diag.iter().zip(&b.diag) {
            assert!((y - x - 2.5).abs() < 1e-14);
        }
        assert_eq!(a.offdiag, b.offdiag);
    }

    #[test]
    fn n20_matches_operator_construction() {
        let p = ModelParams::new(20, 0.5, 1.0, -3.0 / 21.0);
        let h = build_hamiltonian(&p, true).unwrap();
        let dense = dense_from_operators(&p);
        let shift = p.g * 20.5;
        let mine = h.to_dense();
        for i in 0..=20 {
            for j in 0..=20 {
                let expect = dense[i][j] + if i == j { shift } else { 0.0 };
                assert!((mine[i][j] - expect).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn n2_free_spectrum_and_ground_state() {
        let s = exact_spectrum(&ModelParams::new(2, 0.0, 1.0, 0.0), false, true).unwrap();
        for (e, x) in s.energies.iter().zip([-2.0, 0.0, 2.0]) {
            assert!((e - x).abs() < 1e-13);
        }
        let w = p_representation(&s, 0).unwrap();
        assert_eq!(w.grid, vec![-2, 0, 2]);
        for (a, b) in w.values.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn residuals_and_orthonormality() {
        let p = ModelParams::with_g_over_ns(30, 0.3, 1.0, -2.0);
        let h = build_hamiltonian(&p, true).unwrap();
        let s = diagonalize(&h, true).unwrap();
        let vecs = s.eigenvectors.as_ref().unwrap();
        let scale = h.max_abs_element();
        for (e, v) in s.energies.iter().zip(vecs) {
            let hv = h.apply(v);
            let res: f64 = hv.iter().zip(v).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
            assert!(res <= 1e-9 * scale, "residual {res}");
            let first = v.iter().find(|x| x.abs() > 1e-12).unwrap();
            assert!(*first > 0.0);
        }
        for i in 0..vecs.len() {
            for j in 0..vecs.len() {
                let dot: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn missing_vectors_is_an_error() {
        let s = exact_spectrum(&ModelParams::new(4, 0.0, 1.0, 0.0), true, false).unwrap();
        assert_eq!(p_representation(&s, 0).unwrap_err(), Error::MissingEigenvectors);
        let s = exact_spectrum(&ModelParams::new(4, 0.0, 1.0, 0.0), true, true).unwrap();
        assert!(matches!(p_representation(&s, 5), Err(Error::StateIndex { .. })));
    }

    #[test]
    fn level_density_flat_for_linear_spectrum() {
        let s = exact_spectrum(&ModelParams::new(399, 0.0, 1.0, 0.0), true, false).unwrap();
        let d = level_density(&s, 20).unwrap();
        assert!((d.normalization - 1.0).abs() < 1e-12);
        let flat = 1.0 / (s.max() - s.min());
        for h in &d.heights {
            assert!((h / flat - 1.0).abs() < 0.06, "{h} vs {flat}");
        }
    }

    #[test]
    fn level_density_errors() {
        let s = exact_spectrum(&ModelParams::new(4, 0.0, 1.0, 0.0), true, false).unwrap();
        assert!(level_density(&s, 1).is_err());
        let flat = Spectrum {
            params: s.params,
            symmetrized: true,
            energies: vec![1.0; 3],
            eigenvectors: None,
        };
        assert!(matches!(level_density(&flat, 4), Err(Error::DegenerateRange(_))));
    }
}
