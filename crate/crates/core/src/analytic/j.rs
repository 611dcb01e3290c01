use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::UpperHalfPoint;
use crate::error::{input, Result};

pub const DEFAULT_TERMS: usize = 40;

/// Number of Fourier coefficients of j kept in the cache.
pub(crate) const MAX_FOURIER: usize = 200;

pub(crate) struct JCoefficients {
    /// exact[n] = c(n) in j = q⁻¹ + 744 + Σ_{n≥1} c(n)qⁿ; exact[0] = 744.
    pub exact: Vec<BigInt>,
    pub float: Vec<f64>,
}

fn sigma3(n: usize) -> BigInt {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(3)).sum()
}

fn mul_series(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// j·q = E₄³ / ∏(1 − qⁿ)²⁴ as an exact power series.
fn compute() -> JCoefficients {
    let len = MAX_FOURIER + 2;
    let mut e4 = vec![BigInt::zero(); len];
    e4[0] = BigInt::from(1);
    for (n, c) in e4.iter_mut().enumerate().skip(1) {
        *c = sigma3(n) * 240;
    }
    let e4_cubed = mul_series(&mul_series(&e4, &e4, len), &e4, len);

    let mut eta24 = vec![BigInt::zero(); len];
    eta24[0] = BigInt::from(1);
    for n in 1..len {
        for _ in 0..24 {
            for k in (n..len).rev() {
                let t = eta24[k - n].clone();
                eta24[k] -= t;
            }
        }
    }
    // inverse of a series with constant term 1
    let mut inv = vec![BigInt::zero(); len];
    inv[0] = BigInt::from(1);
    for k in 1..len {
        let s: BigInt = (1..=k).map(|i| &eta24[i] * &inv[k - i]).sum();
        inv[k] = -s;
    }
    let jq = mul_series(&e4_cubed, &inv, len);
    let exact: Vec<BigInt> = jq[1..].to_vec();
    let float = exact.iter().map(|c| c.to_f64().expect("coefficients fit in f64")).collect();
    JCoefficients { exact, float }
}

pub(crate) fn coefficients() -> &'static JCoefficients {
    static CACHE: OnceLock<JCoefficients> = OnceLock::new();
    CACHE.get_or_init(compute)
}

/// c(n) in j = q⁻¹ + 744 + Σ c(n)qⁿ, for 0 ≤ n ≤ 200 (c(0) = 744).
pub fn j_coefficient(n: usize) -> Option<&'static BigInt> {
    coefficients().exact.get(n)
}

fn check_q(q: Complex64) -> Result<()> {
    if q.norm() > 0.5 {
        return input(format!("|q| = {} exceeds 0.5; reduce τ into D first", q.norm()));
    }
    Ok(())
}

/// j(τ) = E₄³/Δ with E₄ = 1 + 240Σσ₃(n)qⁿ and Δ = q∏(1 − qⁿ)²⁴, each
/// truncated after `terms` terms.
pub fn eval_j(tau: &UpperHalfPoint, terms: usize) -> Result<Complex64> {
    let q = tau.q();
    check_q(q)?;
    let mut e4 = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    for n in 1..=terms {
        qn *= q;
        let s3: f64 = (1..=n).filter(|d| n % d == 0).map(|d| (d as f64).powi(3)).sum();
        e4 += qn * s3;
        prod *= (Complex64::new(1.0, 0.0) - qn).powi(24);
    }
    let e4 = Complex64::new(1.0, 0.0) + e4 * 240.0;
    Ok(e4 * e4 * e4 / (q * prod))
}

/// Σ_{n=1}^{terms} c(n)qⁿ = j − q⁻¹ − 744, evaluated without cancellation.
pub fn j_tail(tau: &UpperHalfPoint, terms: usize) -> Result<Complex64> {
    let q = tau.q();
    check_q(q)?;
    let c = &coefficients().float;
    let k = terms.min(MAX_FOURIER);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in (1..=k).rev() {
        acc = (acc + c[n]) * q;
    }
    Ok(acc)
}

/// j(τ) from its Fourier expansion.
pub fn j_fourier(tau: &UpperHalfPoint, terms: usize) -> Result<Complex64> {
    let q = tau.q();
    Ok(q.inv() + 744.0 + j_tail(tau, terms)?)
}

/// Upper bound for Σ_{n>terms} c(n)|q|ⁿ given |q| ≤ q_max (coefficients past
/// the cache are below the last cached term times a vanishing geometric factor
/// for the |q| used here).
pub(crate) fn tail_truncation_bound(q_max: f64, terms: usize) -> f64 {
    let c = &coefficients().float;
    let mut s = 0.0;
    for (n, cn) in c.iter().enumerate().skip(terms + 1) {
        s += cn * q_max.powi(n as i32);
    }
    s
}
