//! Software-float re-evaluation of single witnesses (default 128-bit mantissa).

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use super::domain::Sl2Z;
use super::j::coefficients;
use super::UpperHalfPoint;
use crate::gl2::UnitLabel;

pub const DEFAULT_BITS: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

/// Arithmetic context: precision and constant cache.
pub struct Ctx {
    p: usize,
    cc: Consts,
}

#[derive(Clone, Debug)]
struct C {
    re: BigFloat,
    im: BigFloat,
}

impl Ctx {
    pub fn new(bits: usize) -> Self {
        Ctx { p: bits.max(64), cc: Consts::new().expect("constant cache") }
    }

    fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    fn int(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.p, RM, &mut self.cc)
    }

    fn to_f64(&mut self, x: &BigFloat) -> f64 {
        let s = x.format(Radix::Dec, RM, &mut self.cc).expect("format");
        s.replace('_', "").parse().unwrap_or(f64::NAN)
    }

    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }
    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }
    fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }
    fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }
    fn two_pi(&mut self) -> BigFloat {
        let pi = self.cc.pi(self.p, RM);
        self.mul(&pi, &self.f(2.0))
    }
    fn abs(&self, a: &BigFloat) -> BigFloat {
        if a.is_negative() {
            a.neg()
        } else {
            a.clone()
        }
    }

    fn cadd(&self, a: &C, b: &C) -> C {
        C { re: self.add(&a.re, &b.re), im: self.add(&a.im, &b.im) }
    }
    fn cmul(&self, a: &C, b: &C) -> C {
        C {
            re: self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im)),
            im: self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re)),
        }
    }
    fn cnorm_sqr(&self, a: &C) -> BigFloat {
        self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im))
    }
    fn cabs(&self, a: &C) -> BigFloat {
        self.cnorm_sqr(a).sqrt(self.p, RM)
    }
    fn cinv(&self, a: &C) -> C {
        let n = self.cnorm_sqr(a);
        C { re: self.div(&a.re, &n), im: self.div(&a.im.neg(), &n) }
    }
    fn cdiv(&self, a: &C, b: &C) -> C {
        self.cmul(a, &self.cinv(b))
    }

    /// e^{2πiw}.
    fn e2pii(&mut self, w: &C) -> C {
        let tp = self.two_pi();
        let r = self.exp(&self.mul(&tp, &w.im).neg());
        let th = self.mul(&tp, &w.re);
        let (c, s) = (th.cos(self.p, RM, &mut self.cc), th.sin(self.p, RM, &mut self.cc));
        C { re: self.mul(&r, &c), im: self.mul(&r, &s) }
    }

    fn point(&self, tau: &UpperHalfPoint) -> C {
        C { re: self.f(tau.re), im: self.f(tau.im) }
    }

    /// Σ_{n=1}^{terms} c(n)qⁿ at τ.
    fn j_tail(&mut self, q: &C, terms: usize) -> C {
        let coeffs = &coefficients().exact;
        let k = terms.min(coeffs.len() - 1);
        let mut acc = C { re: self.f(0.0), im: self.f(0.0) };
        for n in (1..=k).rev() {
            let c = self.int(&coeffs[n].to_string());
            acc.re = self.add(&acc.re, &c);
            acc = self.cmul(&acc, q);
        }
        acc
    }

    fn j_fourier(&mut self, q: &C, terms: usize) -> C {
        let t = self.j_tail(q, terms);
        let inv = self.cinv(q);
        let c744 = C { re: self.f(744.0), im: self.f(0.0) };
        self.cadd(&self.cadd(&inv, &c744), &t)
    }

    /// Σ log|1 − z| over the Siegel product factors at τ.
    fn deviation(&mut self, a: &UnitLabel, tau: &C, terms: usize) -> BigFloat {
        let n = self.f(f64::from(a.level()));
        let a1 = self.div(&self.f(f64::from(a.k1())), &n);
        let a2 = self.div(&self.f(f64::from(a.k2())), &n);
        let one = self.f(1.0);
        let mut sum = self.f(0.0);
        for m in 0..=terms {
            let m = self.f(m as f64);
            let e1 = self.add(&m, &a1);
            let e2 = self.sub(&self.add(&m, &one), &a1);
            for (e, ph) in [(e1, a2.clone()), (e2, a2.neg())] {
                // z = e^{2πi(eτ + ph)}
                let w = C { re: self.add(&self.mul(&e, &tau.re), &ph), im: self.mul(&e, &tau.im) };
                let z = self.e2pii(&w);
                // |1 − z|² = 1 − 2 Re z + |z|²
                let two_re = self.mul(&self.f(2.0), &z.re);
                let m2 = self.add(&self.sub(&one, &two_re), &self.cnorm_sqr(&z));
                let l = self.ln(&m2);
                sum = self.add(&sum, &self.div(&l, &self.f(2.0)));
            }
        }
        sum
    }
}

/// |j − q⁻¹ − 744|/|q| at τ.
pub fn prop_j_ratio(tau: &UpperHalfPoint, terms: usize, bits: usize) -> f64 {
    let mut cx = Ctx::new(bits);
    let t = cx.point(tau);
    let q = cx.e2pii(&t);
    let tail = cx.j_tail(&q, terms);
    let r = cx.div(&cx.cabs(&tail), &cx.cabs(&q));
    cx.to_f64(&r)
}

/// (|j|, |q|, |j − q⁻¹|) at τ.
pub fn j_moduli(tau: &UpperHalfPoint, terms: usize, bits: usize) -> (f64, f64, f64, f64) {
    let mut cx = Ctx::new(bits);
    let t = cx.point(tau);
    let q = cx.e2pii(&t);
    let j = cx.j_fourier(&q, terms);
    let inv = cx.cinv(&q);
    let diff = C { re: cx.sub(&j.re, &inv.re), im: cx.sub(&j.im, &inv.im) };
    let (aj, aq, ad) = (cx.cabs(&j), cx.cabs(&q), cx.cabs(&diff));
    // |jq| − 1 = |1 + w| − 1 with w = (j − q⁻¹)q
    let w = cx.cmul(&diff, &q);
    let num = cx.add(&cx.mul(&cx.f(2.0), &w.re), &cx.cnorm_sqr(&w));
    let one_w = C { re: cx.add(&cx.f(1.0), &w.re), im: w.im.clone() };
    let den = cx.add(&cx.cabs(&one_w), &cx.f(1.0));
    let gap = cx.div(&num, &den);
    (cx.to_f64(&aj), cx.to_f64(&aq), cx.to_f64(&ad), cx.to_f64(&gap))
}

/// log|g_a(τ)| − ℓ_a log|q|.
pub fn siegel_deviation(a: &UnitLabel, tau: &UpperHalfPoint, terms: usize, bits: usize) -> f64 {
    let mut cx = Ctx::new(bits);
    let t = cx.point(tau);
    let d = cx.deviation(a, &t, terms);
    cx.to_f64(&d)
}

/// (1/12)log(|j(τ)| + 2400) + log N − |log|g_a(τ)||, evaluating at γτ with
/// label a·γ⁻¹; γτ is formed in high precision from the f64 input.
pub fn siegel_global_slack(a: &UnitLabel, tau: &UpperHalfPoint, gamma: &Sl2Z, terms: usize, bits: usize) -> f64 {
    let mut cx = Ctx::new(bits);
    let t = cx.point(tau);
    let [[ga, gb], [gc, gd]] = gamma.0.map(|r| r.map(|x| x as f64));
    let num = C { re: cx.add(&cx.mul(&cx.f(ga), &t.re), &cx.f(gb)), im: cx.mul(&cx.f(ga), &t.im) };
    let den = C { re: cx.add(&cx.mul(&cx.f(gc), &t.re), &cx.f(gd)), im: cx.mul(&cx.f(gc), &t.im) };
    let t2 = cx.cdiv(&num, &den);
    let q = cx.e2pii(&t2);
    let j = cx.j_fourier(&q, terms);
    let aj = cx.cabs(&j);
    let shifted = cx.add(&aj, &cx.f(2400.0));
    let log_j = cx.ln(&shifted);
    let lhs_j = cx.div(&log_j, &cx.f(12.0));
    let n = cx.f(f64::from(a.level()));
    let log_n = cx.ln(&n);
    let bound = cx.add(&lhs_j, &log_n);

    let b = super::checks::transform_label(a, gamma);
    let k1 = cx.div(&cx.f(f64::from(b.k1())), &n);
    // ℓ = (k1² − k1 + 1/6)/2
    let b2 = cx.add(&cx.sub(&cx.mul(&k1, &k1), &k1), &cx.div(&cx.f(1.0), &cx.f(6.0)));
    let ell = cx.div(&b2, &cx.f(2.0));
    let tp = cx.two_pi();
    let log_q = cx.mul(&tp, &t2.im).neg();
    let dev = cx.deviation(&b, &t2, terms);
    let log_g = cx.add(&cx.mul(&ell, &log_q), &dev);
    let slack = cx.sub(&bound, &cx.abs(&log_g));
    cx.to_f64(&slack)
}
