use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::domain::{reduce_to_d, Sl2Z};
use super::j::{j_fourier, j_tail, tail_truncation_bound, DEFAULT_TERMS};
use super::siegel::siegel_deviation;
use super::{hiprec, sample_in_d, sample_point, worst_by, HiPrecRecheck, ItemOutcome, UpperHalfPoint, VerificationReport, Witness};
use crate::error::{input, Result};
use crate::exactmath::ell;
use crate::gl2::{label_classes, UnitLabel};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOptions {
    pub samples: usize,
    pub seed: u64,
    pub terms: usize,
    pub hi_prec: bool,
    pub hi_prec_bits: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { samples: 10_000, seed: 42, terms: DEFAULT_TERMS, hi_prec: false, hi_prec_bits: hiprec::DEFAULT_BITS }
    }
}

impl CheckOptions {
    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return input("samples must be at least 1");
        }
        if self.terms == 0 {
            return input("terms must be at least 1");
        }
        Ok(())
    }
}

/// |q| at the corners of D, the largest value on D.
fn q_max_on_d() -> f64 {
    (-std::f64::consts::PI * 3f64.sqrt()).exp()
}

/// Fixed points of D evaluated on top of the random plan: i, the corners,
/// points along the unit arc and the vertical sides near their lower ends.
fn anchors() -> Vec<UpperHalfPoint> {
    let mut pts = vec![UpperHalfPoint::i()];
    for deg in (60..=120).step_by(5) {
        let t = f64::from(deg).to_radians();
        pts.push(UpperHalfPoint { re: t.cos(), im: t.sin() });
    }
    for im in [0.87, 0.9, 1.0, 1.2, 1.5, 2.0] {
        pts.push(UpperHalfPoint { re: -0.5, im });
        pts.push(UpperHalfPoint { re: 0.5, im });
    }
    pts.retain(|p| p.re.abs() <= 0.5);
    pts
}

fn witness(p: &UpperHalfPoint, label: Option<&UnitLabel>) -> Witness {
    Witness { re: p.re, im: p.im, label: label.map(|a| [a.k1(), a.k2()]) }
}

/// Sample `i` of the plan over D, anchors first.
fn plan_point(anchors: &[UpperHalfPoint], seed: u64, i: usize) -> UpperHalfPoint {
    if i < anchors.len() {
        anchors[i]
    } else {
        sample_in_d(seed, (i - anchors.len()) as u64)
    }
}

/// |j − q⁻¹ − 744| / |q|.
pub fn prop_j_ratio(tau: &UpperHalfPoint, terms: usize) -> Result<f64> {
    Ok(j_tail(tau, terms)?.norm() / tau.q().norm())
}

#[allow(clippy::too_many_arguments)]
fn report(
    name: &str,
    level: Option<u32>,
    opts: &CheckOptions,
    kind: &str,
    worst: f64,
    threshold: f64,
    w: Witness,
    pass: bool,
    truncation_bound: f64,
) -> VerificationReport {
    VerificationReport {
        check_name: name.to_string(),
        level,
        sample_count: opts.samples,
        anchor_count: 0,
        seed: opts.seed,
        terms: opts.terms,
        worst_kind: kind.to_string(),
        worst_value: worst,
        threshold,
        worst_witness: w,
        pass,
        informational: false,
        truncation_bound,
        items: Vec::new(),
        hi_prec: None,
    }
}

/// |j(τ) − q⁻¹ − 744| ≤ 330000|q| on D (where |q| ≤ 0.005).
pub fn check_prop_j(opts: &CheckOptions) -> Result<VerificationReport> {
    opts.validate()?;
    const THRESHOLD: f64 = 330_000.0;
    let anchors = anchors();
    let total = anchors.len() + opts.samples;
    let (i, worst, ()) = worst_by(
        total,
        |i| {
            let p = plan_point(&anchors, opts.seed, i);
            (prop_j_ratio(&p, opts.terms).unwrap_or(f64::NAN), ())
        },
        true,
    );
    let p = plan_point(&anchors, opts.seed, i);
    let q_max = q_max_on_d();
    let trunc = tail_truncation_bound(q_max, opts.terms) / q_max;
    let mut r = report("prop-j", None, opts, "ratio", worst, THRESHOLD, witness(&p, None), worst <= THRESHOLD, trunc);
    r.anchor_count = anchors.len();
    if opts.hi_prec {
        let hp = hiprec::prop_j_ratio(&p, opts.terms, opts.hi_prec_bits);
        r.hi_prec = Some(HiPrecRecheck {
            bits: opts.hi_prec_bits,
            worst_value: hp,
            abs_diff: (hp - worst).abs(),
            pass: hp <= THRESHOLD,
        });
        r.pass &= hp <= THRESHOLD;
    }
    Ok(r)
}

/// Margins of the three items at one τ; negative means the item fails.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorJMargins {
    /// log(|j| + 2400) − |log|q||.
    pub log_q: f64,
    /// 3500 − |j| when |j| ≤ 3500, else 0.001 − |q|.
    pub j_or_q: f64,
    /// For |j| > 3500: min(1100 − |j − q⁻¹|, 1.5|j| − |q⁻¹|, |q⁻¹| − 0.5|j|).
    pub large_j: Option<f64>,
}

/// `jq_gap` is |jq| − 1, passed separately because forming it from |j| and
/// |q| cancels completely once |q| is small.
fn margins_from(abs_j: f64, abs_q: f64, abs_diff: f64, jq_gap: f64) -> CorJMargins {
    let inv_q = 1.0 / abs_q;
    CorJMargins {
        // log(|j| + 2400) − log|q⁻¹| = log(|jq| + 2400|q|)
        log_q: (jq_gap + 2400.0 * abs_q).ln_1p(),
        j_or_q: if abs_j <= 3500.0 { 3500.0 - abs_j } else { 0.001 - abs_q },
        large_j: (abs_j > 3500.0)
            .then(|| (1100.0 - abs_diff).min(1.5 * abs_j - inv_q).min(inv_q - 0.5 * abs_j)),
    }
}

pub fn cor_j_margins(tau: &UpperHalfPoint, terms: usize) -> Result<CorJMargins> {
    let q = tau.q();
    let j = j_fourier(tau, terms)?;
    // j − q⁻¹ = 744 + tail, without cancellation
    let diff = j_tail(tau, terms)? + 744.0;
    let w = diff * q;
    let jq_gap = (2.0 * w.re + w.norm_sqr()) / ((1.0 + w).norm() + 1.0);
    Ok(margins_from(j.norm(), q.norm(), diff.norm(), jq_gap))
}

/// Three comparisons of j and q on D: |log|q|| ≤ log(|j| + 2400); |j| ≤ 3500
/// or |q| < 0.001; and for |j| > 3500, |j − q⁻¹| ≤ 1100 and ½|j| ≤ |q⁻¹| ≤ 3/2|j|.
pub fn check_cor_j(opts: &CheckOptions) -> Result<VerificationReport> {
    opts.validate()?;
    let anchors = anchors();
    let mut extra = anchors;
    extra.push(UpperHalfPoint { re: 0.0, im: 12.0 });
    let total = extra.len() + opts.samples;
    let margins: Vec<CorJMargins> = (0..total)
        .into_par_iter()
        .map(|i| cor_j_margins(&plan_point(&extra, opts.seed, i), opts.terms))
        .collect::<Result<_>>()?;

    let pick = |f: &dyn Fn(&CorJMargins) -> Option<f64>| -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, m) in margins.iter().enumerate() {
            if let Some(v) = f(m) {
                let v = if v.is_nan() { f64::NEG_INFINITY } else { v };
                if best.is_none_or(|(_, b)| v < b) {
                    best = Some((i, v));
                }
            }
        }
        best
    };
    let mut items = Vec::new();
    let defs: [(&str, &dyn Fn(&CorJMargins) -> Option<f64>); 3] = [
        ("log-q", &|m| Some(m.log_q)),
        ("j-or-q", &|m| Some(m.j_or_q)),
        ("large-j", &|m| m.large_j),
    ];
    for (name, f) in defs {
        if let Some((i, v)) = pick(f) {
            let p = plan_point(&extra, opts.seed, i);
            items.push(ItemOutcome { name: name.to_string(), worst_margin: v, worst_witness: witness(&p, None), pass: v >= 0.0 });
        }
    }
    let top = items
        .iter()
        .min_by(|a, b| a.worst_margin.total_cmp(&b.worst_margin))
        .expect("items are non-empty")
        .clone();
    let pass = items.iter().all(|x| x.pass);
    let q_max = q_max_on_d();
    let mut r = report(
        "cor-j",
        None,
        opts,
        "margin",
        top.worst_margin,
        0.0,
        top.worst_witness.clone(),
        pass,
        tail_truncation_bound(q_max, opts.terms),
    );
    r.anchor_count = extra.len();
    if opts.hi_prec {
        let w = UpperHalfPoint { re: top.worst_witness.re, im: top.worst_witness.im };
        let (aj, aq, ad, gap) = hiprec::j_moduli(&w, opts.terms, opts.hi_prec_bits);
        let m = margins_from(aj, aq, ad, gap);
        let hp = match top.name.as_str() {
            "log-q" => m.log_q,
            "j-or-q" => m.j_or_q,
            _ => m.large_j.unwrap_or(f64::NAN),
        };
        r.hi_prec = Some(HiPrecRecheck {
            bits: opts.hi_prec_bits,
            worst_value: hp,
            abs_diff: (hp - top.worst_margin).abs(),
            pass: hp >= 0.0,
        });
        r.pass &= hp >= 0.0;
    }
    r.items = items;
    Ok(r)
}

fn check_level(level: u32) -> Result<()> {
    if level < 2 {
        return input(format!("level must be at least 2, got {level}"));
    }
    Ok(())
}

/// Smallest slack log N − |log|g_a(τ)| − ℓ_a log|q|| over `labels`.
fn min_d_slack(labels: &[UnitLabel], tau: &UpperHalfPoint, terms: usize) -> (f64, usize) {
    let log_n = f64::from(labels[0].level()).ln();
    let mut best = (f64::INFINITY, 0);
    for (k, a) in labels.iter().enumerate() {
        let s = log_n - siegel_deviation(a, tau, terms).abs();
        if s < best.0 || s.is_nan() {
            best = (if s.is_nan() { f64::NEG_INFINITY } else { s }, k);
        }
    }
    best
}

/// |log|g_a(τ)| − ℓ_a log|q|| ≤ log N on D, for every label class of level N.
///
/// For N = 2 the constant is exceeded near τ = i; that report is marked
/// informational and its pass flag only records the measurement.
pub fn check_siegel_d(level: u32, opts: &CheckOptions) -> Result<VerificationReport> {
    opts.validate()?;
    check_level(level)?;
    let labels = label_classes(level)?;
    let anchors = anchors();
    let total = anchors.len() + opts.samples;
    let (i, worst, k) = worst_by(
        total,
        |i| min_d_slack(&labels, &plan_point(&anchors, opts.seed, i), opts.terms),
        false,
    );
    let p = plan_point(&anchors, opts.seed, i);
    let a = labels[k];
    let q_max = q_max_on_d();
    // Σ_{n>terms} |log|1 − z|| ≤ 2·Σ 2|q|ⁿ for |z| ≤ 1/2
    let trunc = 4.0 * q_max.powi(opts.terms as i32) / (1.0 - q_max);
    let mut r = report("siegel-d", Some(level), opts, "slack", worst, 0.0, witness(&p, Some(&a)), worst >= 0.0, trunc);
    r.informational = level == 2;
    r.anchor_count = anchors.len();
    if opts.hi_prec {
        let dev = hiprec::siegel_deviation(&a, &p, opts.terms, opts.hi_prec_bits);
        let hp = f64::from(level).ln() - dev.abs();
        r.hi_prec = Some(HiPrecRecheck { bits: opts.hi_prec_bits, worst_value: hp, abs_diff: (hp - worst).abs(), pass: hp >= 0.0 });
        r.pass &= hp >= 0.0;
    }
    Ok(r)
}

/// a·γ⁻¹ reduced mod N, so that |g_a(τ)| = |g_{a·γ⁻¹}(γτ)|.
pub(crate) fn transform_label(a: &UnitLabel, gamma: &Sl2Z) -> UnitLabel {
    let [[p, q], [r, s]] = gamma.inverse().0;
    let (k1, k2) = (i64::from(a.k1()), i64::from(a.k2()));
    UnitLabel::from_i64(a.level(), k1 * p + k2 * r, k1 * q + k2 * s).expect("SL2(Z) preserves nonzero labels")
}

fn ell_f64(a: &UnitLabel) -> f64 {
    ell(a).to_f64().expect("small rational")
}

/// (1/12)log(|j(τ)| + 2400) + log N − |log|g_a(τ)|| for label a, computed
/// after reducing τ into D.
pub fn siegel_global_slack(a: &UnitLabel, tau: &UpperHalfPoint, terms: usize) -> Result<f64> {
    let (t, gamma) = reduce_to_d(tau);
    let j = j_fourier(&t, terms)?;
    let bound = (j.norm() + 2400.0).ln() / 12.0 + f64::from(a.level()).ln();
    let b = transform_label(a, &gamma);
    let log_g = ell_f64(&b) * t.log_abs_q() + siegel_deviation(&b, &t, terms);
    Ok(bound - log_g.abs())
}

fn min_global_slack(labels: &[UnitLabel], tau: &UpperHalfPoint, terms: usize) -> (f64, usize) {
    let (t, gamma) = reduce_to_d(tau);
    let j = j_fourier(&t, terms).map(|j| j.norm()).unwrap_or(f64::NAN);
    let bound = (j + 2400.0).ln() / 12.0 + f64::from(labels[0].level()).ln();
    let log_q = t.log_abs_q();
    let mut best = (f64::INFINITY, 0);
    for (k, a) in labels.iter().enumerate() {
        let b = transform_label(a, &gamma);
        let log_g = ell_f64(&b) * log_q + siegel_deviation(&b, &t, terms);
        let s = bound - log_g.abs();
        if s < best.0 || s.is_nan() {
            best = (if s.is_nan() { f64::NEG_INFINITY } else { s }, k);
        }
    }
    best
}

/// Sample in H for the global check: re uniform on [−1, 1], im = 0.05 + Exp(1) < 10.
fn global_point(seed: u64, i: usize) -> UpperHalfPoint {
    sample_point(seed, i as u64, (-1.0, 1.0), 0.05, |p| p.im < 10.0)
}

/// |log|g_a(τ)|| ≤ (1/12)log(|j(τ)| + 2400) + log N on H.
pub fn check_siegel_global(level: u32, opts: &CheckOptions) -> Result<VerificationReport> {
    opts.validate()?;
    check_level(level)?;
    let labels = label_classes(level)?;
    let anchors = anchors();
    let point = |i: usize| if i < anchors.len() { anchors[i] } else { global_point(opts.seed, i - anchors.len()) };
    let total = anchors.len() + opts.samples;
    let (i, worst, k) = worst_by(total, |i| min_global_slack(&labels, &point(i), opts.terms), false);
    let p = point(i);
    let a = labels[k];
    let q_max = q_max_on_d();
    let trunc = 4.0 * q_max.powi(opts.terms as i32) / (1.0 - q_max) + tail_truncation_bound(q_max, opts.terms) / 12.0;
    let mut r = report("siegel-global", Some(level), opts, "slack", worst, 0.0, witness(&p, Some(&a)), worst >= 0.0, trunc);
    r.informational = level == 2;
    r.anchor_count = anchors.len();
    if opts.hi_prec {
        let (_, gamma) = reduce_to_d(&p);
        let hp = hiprec::siegel_global_slack(&a, &p, &gamma, opts.terms, opts.hi_prec_bits);
        r.hi_prec = Some(HiPrecRecheck { bits: opts.hi_prec_bits, worst_value: hp, abs_diff: (hp - worst).abs(), pass: hp >= 0.0 });
        r.pass &= hp >= 0.0;
    }
    Ok(r)
}

/// Measurement at N = 2, a = (0, 1/2), τ = i.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoLevelAnomaly {
    pub deviation: f64,
    pub log_n: f64,
    pub overshoot: f64,
}

pub fn two_level_anomaly(terms: usize) -> TwoLevelAnomaly {
    let a = UnitLabel::new(2, 0, 1).expect("valid label");
    let deviation = siegel_deviation(&a, &UpperHalfPoint::i(), terms).abs();
    let log_n = 2f64.ln();
    TwoLevelAnomaly { deviation, log_n, overshoot: deviation - log_n }
}
