//! Complex log-gamma (Lanczos, g = 7, nine coefficients).

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(z)` on the branch that is continuous along lines of constant
/// `Re z >= 1/2` (the imaginary part is not reduced modulo `2 pi`).
/// The left half-plane is reached through the reflection formula.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let s = (Complex64::from(PI) * z).sin();
        return Complex64::from(PI.ln()) - s.ln() - ln_gamma(Complex64::from(1.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::from(LANCZOS[0]);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `arg Gamma(1/2 + i x)`, continuous in `x` and odd.
pub fn arg_gamma_half(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    ln_gamma(Complex64::new(0.5, x)).im
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_values() {
        // Gamma(5) = 24, Gamma(1/2) = sqrt(pi)
        assert!((ln_gamma(Complex64::new(5.0, 0.0)).re - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(Complex64::new(0.5, 0.0)).re - 0.5 * PI.ln()).abs() < 1e-14);
        assert_eq!(arg_gamma_half(0.0), 0.0);
    }

    #[test]
    fn reflection_branch() {
        // Gamma(-1/2) = -2 sqrt(pi), so |.| matches
        let v = ln_gamma(Complex64::new(-0.5, 0.0));
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
    }

    #[test]
    fn recurrence_holds() {
        // ln Gamma(z + 1) - ln Gamma(z) = ln z (mod 2 pi i)
        let z = Complex64::new(2.3, 1.7);
        let d = ln_gamma(z + 1.0) - ln_gamma(z) - z.ln();
        assert!(d.re.abs() < 1e-13);
        let k = d.im / (2.0 * PI);
        assert!((k - k.round()).abs() < 1e-12);
    }

    #[test]
    fn odd_in_x() {
        for x in [0.2, 1.5, 7.0] {
            assert!((arg_gamma_half(x) + arg_gamma_half(-x)).abs() < 1e-14);
        }
    }
}
