use num_complex::Complex64;

use super::UpperHalfPoint;
use crate::gl2::UnitLabel;

/// Representative (ã₁, a₂) with ã₁ ∈ [0, 1), a₂ ∈ [0, 1).
fn coords(a: &UnitLabel) -> (f64, f64) {
    let n = f64::from(a.level());
    (f64::from(a.k1()) / n, f64::from(a.k2()) / n)
}

/// Factors z of the product ∏(1 − z); `visit` receives each z in order and
/// stops the walk by returning false.
fn for_each_factor(a: &UnitLabel, tau: &UpperHalfPoint, terms: usize, mut visit: impl FnMut(Complex64) -> bool) {
    let (a1, a2) = coords(a);
    let two_pi = 2.0 * std::f64::consts::PI;
    for n in 0..=terms {
        let n = n as f64;
        // q^{n+a₁}e^{2πia₂} and q^{n+1−a₁}e^{−2πia₂}
        for (e, phase) in [(n + a1, a2), (n + 1.0 - a1, -a2)] {
            let z = Complex64::from_polar((-two_pi * tau.im * e).exp(), two_pi * (tau.re * e + phase));
            if !visit(z) {
                return;
            }
        }
    }
}

/// g_a(τ) = −q^{B₂(ã₁)/2} e^{πia₂(ã₁−1)} ∏_{n≥0}(1 − q^{n+ã₁}e^{2πia₂})(1 − q^{n+1−ã₁}e^{−2πia₂}),
/// truncated at n = `terms`.
pub fn eval_siegel(a: &UnitLabel, tau: &UpperHalfPoint, terms: usize) -> Complex64 {
    let (a1, a2) = coords(a);
    let b2 = a1 * a1 - a1 + 1.0 / 6.0;
    let two_pi = 2.0 * std::f64::consts::PI;
    let q_pow = Complex64::from_polar((-two_pi * tau.im * b2 / 2.0).exp(), two_pi * tau.re * b2 / 2.0);
    let phase = Complex64::from_polar(1.0, std::f64::consts::PI * a2 * (a1 - 1.0));
    let mut prod = Complex64::new(1.0, 0.0);
    for_each_factor(a, tau, terms, |z| {
        prod *= Complex64::new(1.0, 0.0) - z;
        true
    });
    -q_pow * phase * prod
}

/// log|1 − z| computed as ½·log1p(|z|² − 2 Re z).
fn log_abs_one_minus(z: Complex64) -> f64 {
    0.5 * (z.norm_sqr() - 2.0 * z.re).ln_1p()
}

/// log|g_a(τ)| − ℓ_a log|q|, i.e. Σ log|1 − z| over the product factors.
///
/// Factors with |z| < 10⁻¹⁸ are dropped together with everything after them;
/// the exponents increase, so the omitted part is below 10⁻¹⁷.
pub fn siegel_deviation(a: &UnitLabel, tau: &UpperHalfPoint, terms: usize) -> f64 {
    let mut sum = 0.0;
    let mut small_run = 0;
    for_each_factor(a, tau, terms, |z| {
        if z.norm() < 1e-18 {
            small_run += 1;
            // both factors of a level must be negligible before stopping
            return small_run < 2;
        }
        small_run = 0;
        sum += log_abs_one_minus(z);
        true
    });
    sum
}
