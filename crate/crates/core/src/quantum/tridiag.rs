//! Implicit-shift QL iteration for real symmetric tridiagonal matrices.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of a symmetric tridiagonal matrix.
///
/// `vectors` holds the eigenvectors column by column (`vectors[j]` belongs to
/// `values[j]`), each normalized and with its first nonzero component positive.
#[derive(Debug, Clone)]
pub struct TridiagEigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
}

/// Diagonalizes the matrix with main diagonal `diag` (length n) and
/// off-diagonal `offdiag` (length n - 1). Eigenvalues come back sorted
/// ascending.
pub fn eigen(diag: &[f64], offdiag: &[f64], want_vectors: bool) -> Result<TridiagEigen> {
    let n = diag.len();
    if n == 0 {
        return Ok(TridiagEigen {
            values: Vec::new(),
            vectors: want_vectors.then(Vec::new),
        });
    }
    if offdiag.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "off-diagonal has length {}, expected {}",
            offdiag.len(),
            n - 1
        )));
    }

    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);

    // column-major, z[col * n + row]
    let mut z = if want_vectors {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        Some(z)
    } else {
        None
    };

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: iter - 1,
                });
            }

            // Wilkinson-like shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;

            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                if let Some(z) = z.as_mut() {
                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_next = &mut right[..n];
                    for k in 0..n {
                        let t = col_next[k];
                        col_next[k] = s * col_i[k] + c * t;
                        col_i[k] = c * col_i[k] - s * t;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values: Vec<f64> = order.iter().map(|&j| d[j]).collect();

    let vectors = z.map(|z| {
        order
            .iter()
            .map(|&j| {
                let mut col = z[j * n..(j + 1) * n].to_vec();
                normalize_sign(&mut col);
                col
            })
            .collect()
    });

    Ok(TridiagEigen { values, vectors })
}

/// Rescales to unit norm and flips the sign so that the first component of
/// non-negligible magnitude is positive.
fn normalize_sign(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let cutoff = 1e-12;
    if let Some(first) = v.iter().find(|x| x.abs() > cutoff) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let r = eigen(&[1.0, 1.0], &[1.0], true).unwrap();
        assert!((r.values[0] - 0.0).abs() < 1e-14);
        assert!((r.values[1] - 2.0).abs() < 1e-14);
        let v = &r.vectors.unwrap()[0];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0] - h).abs() < 1e-14 && (v[1] + h).abs() < 1e-14);
    }

    #[test]
    fn already_diagonal() {
        let r = eigen(&[3.0, -1.0, 2.0], &[0.0, 0.0], false).unwrap();
        assert_eq!(r.values, vec![-1.0, 2.0, 3.0]);
        assert!(r.vectors.is_none());
    }

    #[test]
    fn single_element() {
        let r = eigen(&[4.5], &[], true).unwrap();
        assert_eq!(r.values, vec![4.5]);
        assert_eq!(r.vectors.unwrap(), vec![vec![1.0]]);
    }

    #[test]
    fn length_mismatch() {
        assert!(eigen(&[1.0, 2.0], &[1.0, 1.0], false).is_err());
    }

    #[test]
    fn free_chain_matches_cosine_band() {
        // -1 hopping on an open chain: E_k = -2 cos(k pi / (n + 1))
        let n = 50;
        let r = eigen(&vec![0.0; n], &vec![-1.0; n - 1], false).unwrap();
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| -2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in r.values.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
