//! Closed-form roots of low-degree real polynomials.
//!
//! Quartics are solved by Ferrari's method through the resolvent cubic; every
//! root is then polished by a few Newton steps on the original polynomial,
//! which repairs the cancellation the closed form suffers near multiple roots.

use num_complex::Complex64;

/// Coefficients are given from the highest degree down: `c[0] x^4 + ... + c[4]`.
pub fn eval(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn eval_with_derivative(coeffs: &[f64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn polish(coeffs: &[f64], mut x: Complex64) -> Complex64 {
    let mut best = x;
    let mut best_val = eval(coeffs, x).norm();
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(coeffs, x);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        let val = eval(coeffs, x).norm();
        if val < best_val {
            best_val = val;
            best = x;
        }
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    best
}

/// Roots of `a x^2 + b x + c` (a != 0), numerically stable form.
fn quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation
    let s = if (b.conj() * disc).re >= 0.0 { b + disc } else { b - disc };
    if s.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    let q = -0.5 * s;
    [q / a, c / q]
}

/// Largest real root of the monic cubic `x^3 + a x^2 + b x + c`.
fn largest_real_cubic_root(a: f64, b: f64, c: f64) -> f64 {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let t = if disc > 0.0 {
        let sd = disc.sqrt();
        (-q / 2.0 + sd).cbrt() + (-q / 2.0 - sd).cbrt()
    } else if p == 0.0 {
        0.0
    } else {
        let r = (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) / r).clamp(-1.0, 1.0);
        2.0 * r * (arg.acos() / 3.0).cos()
    };
    let mut x = t - shift;
    for _ in 0..6 {
        let f = ((x + a) * x + b) * x + c;
        let df = (3.0 * x + 2.0 * a) * x + b;
        if df == 0.0 {
            break;
        }
        let nx = x - f / df;
        if !nx.is_finite() || (nx - x).abs() <= 1e-16 * x.abs().max(1.0) {
            if nx.is_finite() {
                x = nx;
            }
            break;
        }
        x = nx;
    }
    x
}

/// All complex roots of a real polynomial of degree at most four.
///
/// Leading coefficients that vanish relative to the largest coefficient
/// (`|c| <= 1e-14 max|c|`) reduce the degree.
pub fn roots(coeffs: &[f64]) -> Vec<Complex64> {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let first = coeffs
        .iter()
        .position(|c| c.abs() > 1e-14 * scale)
        .unwrap_or(coeffs.len());
    let c = &coeffs[first..];
    let raw: Vec<Complex64> = match c.len() {
        0 | 1 => Vec::new(),
        2 => vec![Complex64::new(-c[1] / c[0], 0.0)],
        3 => quadratic(c[0].into(), c[1].into(), c[2].into()).to_vec(),
        4 => cubic_roots(c[1] / c[0], c[2] / c[0], c[3] / c[0]).to_vec(),
        5 => quartic_roots(c[1] / c[0], c[2] / c[0], c[3] / c[0], c[4] / c[0]).to_vec(),
        _ => panic!("degree above four is not supported"),
    };
    raw.into_iter().map(|z| polish(c, z)).collect()
}

fn cubic_roots(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    let r = largest_real_cubic_root(a, b, c);
    // deflate: x^3 + a x^2 + b x + c = (x - r)(x^2 + (a + r) x + (b + r (a + r)))
    let [z1, z2] = quadratic(1.0.into(), (a + r).into(), (b + r * (a + r)).into());
    [r.into(), z1, z2]
}

/// Roots of the monic quartic `x^4 + a x^3 + b x^2 + c x + d`.
fn quartic_roots(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 4] {
    // depressed quartic y^4 + p y^2 + q y + r with x = y - a/4
    let shift = a / 4.0;
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = c - a * b / 2.0 + a2 * a / 8.0;
    let r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

    let ys: [Complex64; 4] = if q.abs() <= 1e-14 * (p.abs() + r.abs().sqrt() + 1e-300) {
        // biquadratic in y^2
        let [w1, w2] = quadratic(1.0.into(), p.into(), r.into());
        let (s1, s2) = (w1.sqrt(), w2.sqrt());
        [s1, -s1, s2, -s2]
    } else {
        // resolvent: m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0, want m > 0
        let m = largest_real_cubic_root(p, p * p / 4.0 - r, -q * q / 8.0).max(f64::MIN_POSITIVE);
        let s = (2.0 * m).sqrt();
        let t = q / (2.0 * s);
        let [y1, y2] = quadratic(1.0.into(), (-s).into(), (p / 2.0 + m + t).into());
        let [y3, y4] = quadratic(1.0.into(), s.into(), (p / 2.0 + m - t).into());
        [y1, y2, y3, y4]
    };
    ys.map(|y| y - shift)
}

/// Real roots (imaginary part below `imag_tol` relative to the root size),
/// sorted ascending with the imaginary parts dropped.
pub fn real_roots(coeffs: &[f64], imag_tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = roots(coeffs)
        .into_iter()
        .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sorted_real(v: Vec<f64>) -> Vec<f64> {
        let mut v = v;
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn quartic_with_four_real_roots() {
        // (x-1)(x-2)(x+3)(x-0.5)
        let c = [1.0, -0.5, -7.0, 9.5, -3.0];
        let r = real_roots(&c, 1e-9);
        let expect = sorted_real(vec![1.0, 2.0, -3.0, 0.5]);
        assert_eq!(r.len(), 4);
        for (a, b) in r.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn quartic_with_complex_pair() {
        // (x^2 + 1)(x - 2)(x + 1) = x^4 - x^3 - x^2 - x - 2
        let c = [1.0, -1.0, -1.0, -1.0, -2.0];
        let z = roots(&c);
        assert_eq!(z.len(), 4);
        for zi in &z {
            assert!(eval(&c, *zi).norm() < 1e-12);
        }
        let r = real_roots(&c, 1e-9);
        assert_eq!(r.len(), 2);
        assert!((r[0] + 1.0).abs() < 1e-13 && (r[1] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn biquadratic() {
        // x^4 - 5x^2 + 4 = (x^2-1)(x^2-4)
        let r = real_roots(&[1.0, 0.0, -5.0, 0.0, 4.0], 1e-9);
        assert_eq!(r, sorted_real(vec![-2.0, -1.0, 1.0, 2.0]));
    }

    #[test]
    fn double_root_is_found() {
        // (x - 1)^2 (x + 2)(x - 3)
        let c = [1.0, -3.0, -3.0, 11.0, -6.0];
        let r = real_roots(&c, 1e-6);
        assert!(r.iter().filter(|x| (*x - 1.0).abs() < 1e-6).count() >= 1);
        assert!(r.iter().any(|x| (x + 2.0).abs() < 1e-12));
        assert!(r.iter().any(|x| (x - 3.0).abs() < 1e-12));
    }

    #[test]
    fn lower_degree_fallback() {
        assert_eq!(real_roots(&[0.0, 0.0, 1.0, -3.0, 2.0], 1e-12), vec![1.0, 2.0]);
        assert_eq!(real_roots(&[0.0, 0.0, 0.0, 2.0, -1.0], 1e-12), vec![0.5]);
        let r = real_roots(&[0.0, 1.0, 0.0, -1.0, 0.0], 1e-12);
        assert_eq!(r.len(), 3);
    }

    proptest! {
        #[test]
        fn recovers_planted_roots(
            r in proptest::collection::vec(-20.0f64..20.0, 4)
        ) {
            let mut sorted = r.clone();
            sorted.sort_by(f64::total_cmp);
            // keep the roots separated so that the comparison is well posed
            prop_assume!(sorted.windows(2).all(|w| w[1] - w[0] > 1e-2));
            let (a, b, c, d) = (r[0], r[1], r[2], r[3]);
            let coeffs = [
                1.0,
                -(a + b + c + d),
                a * b + a * c + a * d + b * c + b * d + c * d,
                -(a * b * c + a * b * d + a * c * d + b * c * d),
                a * b * c * d,
            ];
            let got = real_roots(&coeffs, 1e-7);
            prop_assert_eq!(got.len(), 4);
            for (x, y) in got.iter().zip(&sorted) {
                prop_assert!((x - y).abs() < 1e-7 * (1.0 + y.abs()), "{} vs {}", x, y);
            }
        }
    }
}
