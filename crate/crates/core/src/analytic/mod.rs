//! Floating-point evaluation of j and of Siegel functions on the upper half
//! plane, and seeded sampling checks of their archimedean estimates.

mod checks;
mod domain;
pub mod hiprec;
mod j;
mod siegel;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

pub use checks::{
    check_cor_j, check_prop_j, check_siegel_d, check_siegel_global, cor_j_margins, prop_j_ratio, siegel_global_slack,
    two_level_anomaly, CheckOptions, CorJMargins, TwoLevelAnomaly,
};
pub use domain::{reduce_to_d, Sl2Z};
pub use j::{eval_j, j_coefficient, j_fourier, j_tail, DEFAULT_TERMS};
pub use siegel::{eval_siegel, siegel_deviation};

use crate::error::{input, Result};

/// Point τ of the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UpperHalfPoint {
    pub re: f64,
    pub im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return input(format!("({re}, {im}) is not in the upper half plane"));
        }
        Ok(UpperHalfPoint { re, im })
    }

    pub fn i() -> Self {
        UpperHalfPoint { re: 0.0, im: 1.0 }
    }

    /// e^{iπ/3}, the right corner of D.
    pub fn rho() -> Self {
        UpperHalfPoint { re: 0.5, im: 3f64.sqrt() / 2.0 }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// q = e^{2πiτ}.
    pub fn q(&self) -> Complex64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        Complex64::from_polar((-two_pi * self.im).exp(), two_pi * self.re)
    }

    /// log|q| = −2π·im τ, exact up to one rounding.
    pub fn log_abs_q(&self) -> f64 {
        -2.0 * std::f64::consts::PI * self.im
    }

    pub fn in_d(&self) -> bool {
        self.re.abs() <= 0.5 && self.re * self.re + self.im * self.im >= 1.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub re: f64,
    pub im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<[u32; 2]>,
}

/// Re-evaluation of the worst witness in software floating point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HiPrecRecheck {
    pub bits: usize,
    pub worst_value: f64,
    pub abs_diff: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemOutcome {
    pub name: String,
    pub worst_margin: f64,
    pub worst_witness: Witness,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    pub sample_count: usize,
    /// Fixed points evaluated in addition to the random samples.
    pub anchor_count: usize,
    pub seed: u64,
    pub terms: usize,
    /// "ratio" (larger is worse) or "slack"/"margin" (smaller is worse).
    pub worst_kind: String,
    pub worst_value: f64,
    pub threshold: f64,
    pub worst_witness: Witness,
    pub pass: bool,
    /// True when the constant is only measured, not asserted.
    pub informational: bool,
    pub truncation_bound: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub items: Vec<ItemOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi_prec: Option<HiPrecRecheck>,
}

/// The `index`-th sample of a seeded plan: re uniform on [re_lo, re_hi],
/// im = im_min + Exp(1), resampled until `accept` holds. Each index has its
/// own ChaCha stream, so the plan is independent of how samples are split
/// across threads.
pub fn sample_point(
    seed: u64,
    index: u64,
    re_range: (f64, f64),
    im_min: f64,
    accept: impl Fn(&UpperHalfPoint) -> bool,
) -> UpperHalfPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let re = rng.random_range(re_range.0..=re_range.1);
        let e: f64 = Exp1.sample(&mut rng);
        let p = UpperHalfPoint { re, im: im_min + e };
        if accept(&p) {
            return p;
        }
    }
}

/// Sample in D: |re| ≤ 1/2, |τ| ≥ 1.
pub fn sample_in_d(seed: u64, index: u64) -> UpperHalfPoint {
    sample_point(seed, index, (-0.5, 0.5), 3f64.sqrt() / 2.0, UpperHalfPoint::in_d)
}

/// Index and value of the worst sample; ties go to the smaller index and
/// NaN counts as worst, so the result does not depend on scheduling.
pub(crate) fn worst_by<T: Send>(
    count: usize,
    eval: impl Fn(usize) -> (f64, T) + Sync + Send,
    larger_is_worse: bool,
) -> (usize, f64, T) {
    let key = |v: f64| {
        if v.is_nan() {
            f64::INFINITY
        } else if larger_is_worse {
            v
        } else {
            -v
        }
    };
    (0..count)
        .into_par_iter()
        .map(|i| {
            let (v, t) = eval(i);
            (i, v, t)
        })
        .reduce_with(|a, b| {
            let (ka, kb) = (key(a.1), key(b.1));
            if kb > ka || (kb == ka && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .expect("at least one sample")
}
