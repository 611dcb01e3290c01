//! Explicit height bounds, evaluated with outward rounding.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{input, Result};
use crate::exactmath::l1_budget_squared;

/// Closed interval [lo, hi] of reals with outward-rounded arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn from_u64(n: u64) -> Self {
        let x = n as f64;
        if n < (1u64 << 53) {
            Self::point(x)
        } else {
            Interval { lo: x.next_down(), hi: x.next_up() }
        }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let x = n.to_f64().unwrap_or(f64::INFINITY);
        match n.to_u64() {
            Some(v) if v < (1u64 << 53) => Self::point(x),
            _ => Interval { lo: x.next_down(), hi: x.next_up() },
        }
    }

    fn widen(lo: f64, hi: f64) -> Self {
        Interval { lo: lo.next_down(), hi: hi.next_up() }
    }

    pub fn add(self, o: Self) -> Self {
        Self::widen(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::widen(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn mul(self, o: Self) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::widen(lo, hi)
    }

    /// Division by an interval of positive reals.
    pub fn div(self, o: Self) -> Self {
        assert!(o.lo > 0.0, "divisor interval must be positive");
        let q = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::widen(lo, hi)
    }

    /// Natural log of a positive interval; libm's `ln` is within one ulp, so
    /// two ulps of widening on each side are enough.
    pub fn ln(self) -> Self {
        assert!(self.lo > 0.0, "log of a non-positive interval");
        Interval { lo: self.lo.ln().next_down().next_down(), hi: self.hi.ln().next_up().next_up() }
    }

    /// Square root of a non-negative interval (IEEE sqrt is correctly rounded).
    pub fn sqrt(self) -> Self {
        Self::widen(self.lo.max(0.0).sqrt(), self.hi.sqrt())
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::point(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

fn int(n: u64) -> Interval {
    Interval::from_u64(n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BreakdownTerm {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem_tag: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    /// Upper end of the outward-rounded evaluation.
    pub value: f64,
    pub breakdown: Vec<BreakdownTerm>,
    /// Non-explicit constants the statement depends on, kept symbolic.
    pub symbolic: Vec<String>,
}

impl BoundReport {
    fn new(tag: &str, value: Interval) -> Self {
        BoundReport {
            theorem_tag: tag.to_string(),
            inputs: BTreeMap::new(),
            value: value.hi,
            breakdown: Vec::new(),
            symbolic: Vec::new(),
        }
    }

    fn input(mut self, name: &str, v: impl Into<serde_json::Value>) -> Self {
        self.inputs.insert(name.to_string(), v.into());
        self
    }

    fn term(mut self, name: &str, v: Interval) -> Self {
        self.breakdown.push(BreakdownTerm { name: name.to_string(), value: v.hi });
        self
    }

    pub fn breakdown_value(&self, name: &str) -> Option<f64> {
        self.breakdown.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_level(n: u32) -> Result<()> {
    if n < 2 {
        return input(format!("level must be at least 2, got {n}"));
    }
    Ok(())
}

fn check_odd_prime(p: u32) -> Result<()> {
    if p < 3 || !is_prime(u64::from(p)) {
        return input(format!("{p} is not an odd prime"));
    }
    Ok(())
}

/// Kind of place v of K for the local constant ρ_v.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaceKind {
    Infinite,
    /// Finite with v(N) = 0.
    FiniteCoprime,
    /// Finite above the prime p | N.
    FiniteDividing(u32),
}

/// ρ_v: 12N log N, 0, or 12N·log p/(p − 1).
pub fn rho_interval(level: u32, kind: PlaceKind) -> Result<Interval> {
    check_level(level)?;
    let n = int(u64::from(level));
    match kind {
        PlaceKind::Infinite => Ok(int(12).mul(n).mul(n.ln())),
        PlaceKind::FiniteCoprime => Ok(Interval::point(0.0)),
        PlaceKind::FiniteDividing(p) => {
            if !is_prime(u64::from(p)) || !level.is_multiple_of(p) {
                return input(format!("{p} is not a prime divisor of {level}"));
            }
            let p = int(u64::from(p));
            Ok(int(12).mul(n).mul(p.ln()).div(p.sub(int(1))))
        }
    }
}

pub fn rho(level: u32, kind: PlaceKind) -> Result<f64> {
    Ok(rho_interval(level, kind)?.hi)
}

/// Σ d_v ρ_v over either the infinite or the finite places: 12dN log N.
pub fn rho_aggregate(level: u32, degree: u32) -> Result<f64> {
    check_level(level)?;
    let n = int(u64::from(level));
    Ok(int(12).mul(int(u64::from(degree))).mul(n).mul(n.ln()).hi)
}

/// log|j(P)| ≤ 12|G|N² log 3N for P ∈ Y_G(O_K) with K of unit rank ≤ 1.
pub fn bound_theorem_1_1(level: u32, g_order: u64) -> Result<BoundReport> {
    check_level(level)?;
    if g_order < 2 {
        return input("|G| must be at least 2");
    }
    let n = int(u64::from(level));
    let v = int(12).mul(int(g_order)).mul(n).mul(n).mul(int(3).mul(n).ln());
    Ok(BoundReport::new("theorem-1.1", v).input("N", level).input("G_order", g_order))
}

/// s^{s/2+1}, exact for even s.
fn s_power(s: u32) -> Interval {
    let base = int(u64::from(s));
    let half = if s.is_multiple_of(2) { base.powi(s / 2) } else { base.sqrt().powi(s) };
    half.mul(base)
}

/// h(P) ≤ 36 s^{s/2+1}(N²|G|/2)^s log 2N, or 24 … log 3N when S is the set
/// of infinite places.
pub fn bound_theorem_1_2(level: u32, g_order: u64, s: u32, infinite_only: bool) -> Result<BoundReport> {
    check_level(level)?;
    if s < 1 {
        return input("s must be at least 1");
    }
    if g_order < 2 || !g_order.is_multiple_of(2) {
        return input("|G| must be even (G contains −I)");
    }
    let n = int(u64::from(level));
    let base = n.mul(n).mul(int(g_order / 2));
    let (c, m) = if infinite_only { (24, 3) } else { (36, 2) };
    let v = int(c).mul(s_power(s)).mul(base.powi(s)).mul(int(m).mul(n).ln());
    Ok(BoundReport::new("theorem-1.2", v)
        .input("N", level)
        .input("G_order", g_order)
        .input("s", s)
        .input("infinite_only", infinite_only))
}

/// h(P) ≤ 36B|G′|N² log 2N (24B|G′|N² log 3N when S = M_K^∞), with the
/// three contributions Ξ₁, Ξ₂, Ξ₃ in the form h(P) ≤ N·(Ξ₁ + Ξ₂ + Ξ₃).
pub fn bound_refined(level: u32, g_prime_order: u64, b: &BigInt, infinite_only: bool) -> Result<BoundReport> {
    check_level(level)?;
    if *b < BigInt::one() {
        return input("B must be at least 1");
    }
    let n = int(u64::from(level));
    let bg = Interval::from_bigint(b).mul(int(g_prime_order));
    let (c, m) = if infinite_only { (24, 3) } else { (36, 2) };
    let v = int(c).mul(bg).mul(n).mul(n).mul(int(m).mul(n).ln());

    let xi1_rho = if infinite_only { 12 } else { 24 };
    let xi1 = Interval::point(7000.0).ln().div(n).add(int(xi1_rho).mul(bg).mul(n).mul(n.ln()));
    let xi2 = bg.mul(n).mul(Interval::point(5900.0).ln()).add(int(12).mul(bg).mul(n).mul(n.ln()));
    let xi3 = int(12).mul(bg).mul(n).mul(int(2).ln());
    let recombined = n.mul(xi1.add(xi2).add(xi3));

    let mut report = BoundReport::new("refined", v)
        .input("N", level)
        .input("Gprime_order", g_prime_order)
        .input("infinite_only", infinite_only)
        .term("Xi1_coeff", xi1)
        .term("Xi2_coeff", xi2)
        .term("Xi3_coeff", xi3)
        .term("recombined", recombined);
    report.inputs.insert("B".into(), bigint_json(b));
    Ok(report)
}

pub(crate) fn bigint_json(b: &BigInt) -> serde_json::Value {
    match b.to_i64() {
        Some(v) => v.into(),
        None => b.to_string().into(),
    }
}

/// Exact check that the refined bound at the largest admissible budget
/// B = s^{s/2+1}(|G′|N²)^{s−1} equals `bound_theorem_1_2`, |G′| = |G|/2.
///
/// Both sides share the factor 36 log 2N; the remaining products are compared
/// after squaring, which keeps everything in integers.
pub fn refined_matches_theorem_1_2(level: u32, g_order: u64, s: u32) -> bool {
    let n2 = BigInt::from(level) * BigInt::from(level);
    let gp = BigInt::from(g_order / 2);
    let a = &gp * &n2;
    let lhs = l1_budget_squared(s as usize, &a) * &a * &a;
    let rhs = num_traits::pow(BigInt::from(s), s as usize + 2) * num_traits::pow(n2 * gp, 2 * s as usize);
    lhs == rhs
}

/// The two shapes of the split Cartan bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitCartanBound {
    /// Σ meets at most one rational cusp: 24p log 3p.
    SingleRational,
    /// Σ ⊂ {c_∞, c_0}: 72 log 3p.
    TwoRational,
}

/// Which of the three hand-built units applies to Σ for X_split(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplitCartanCase {
    /// Σ ⊂ {c_∞, c_1, …, c_{p−1}}: w = w_{(1/p,0)}⁻¹.
    #[serde(rename = "6.4")]
    InfinityAndConjugates,
    /// Σ ⊂ {c_0, c_1, …, c_{p−1}}: w = w_{(0,1/p)}⁻¹.
    #[serde(rename = "6.5")]
    ZeroAndConjugates,
    /// Σ ⊂ {c_∞, c_0}: w = w_{(1/p,0)}·w_{(0,1/p)}.
    #[serde(rename = "6.6")]
    BothRational,
}

/// Orbit of cusps of X_split(p) over a quadratic K with H_K = (Z/pZ)^×.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SplitCartanOrbit {
    Infinity,
    Zero,
    Conjugates,
}

impl SplitCartanOrbit {
    /// Position among the Galois orbits of the cusp layout.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            0 => Ok(Self::Infinity),
            1 => Ok(Self::Zero),
            2 => Ok(Self::Conjugates),
            _ => input(format!("X_split(p) has 3 cusp orbits; got index {i}")),
        }
    }
}

impl SplitCartanCase {
    /// Unit as (label numerators (k1, k2), exponent) pairs.
    pub fn unit(self) -> Vec<((u32, u32), i64)> {
        match self {
            Self::InfinityAndConjugates => vec![((1, 0), -1)],
            Self::ZeroAndConjugates => vec![((0, 1), -1)],
            Self::BothRational => vec![((1, 0), 1), ((0, 1), 1)],
        }
    }

    pub fn bound_shape(self) -> SplitCartanBound {
        match self {
            Self::BothRational => SplitCartanBound::TwoRational,
            _ => SplitCartanBound::SingleRational,
        }
    }
}

pub fn split_cartan_case(sigma: &[SplitCartanOrbit]) -> Result<SplitCartanCase> {
    use SplitCartanOrbit::*;
    let mut set = sigma.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.len() > 2 {
        return input("sigma must contain at most two orbits");
    }
    let within = |allowed: &[SplitCartanOrbit]| set.iter().all(|o| allowed.contains(o));
    if within(&[Infinity, Conjugates]) {
        Ok(SplitCartanCase::InfinityAndConjugates)
    } else if within(&[Zero, Conjugates]) {
        Ok(SplitCartanCase::ZeroAndConjugates)
    } else {
        Ok(SplitCartanCase::BothRational)
    }
}

/// Height bound on X_split(p)(O_K, S) for quadratic K with |S| ≤ 2.
pub fn bound_split_cartan(p: u32, shape: SplitCartanBound) -> Result<BoundReport> {
    check_odd_prime(p)?;
    let pi = int(u64::from(p));
    let pm1 = pi.sub(int(1));
    let log3p = int(3).mul(pi).ln();
    let logp = pi.ln();
    let log7000 = Interval::point(7000.0).ln();
    let log5900 = Interval::point(5900.0).ln();
    let half_sq = pm1.mul(pm1).div(int(2));

    let report = match shape {
        SplitCartanBound::SingleRational => {
            let v = int(24).mul(pi).mul(log3p);
            // B = 1; h(P) ≤ (Ξ₁ + Ξ₂ + Ξ₃)/(½(p−1)²)
            let xi1 = half_sq.mul(log7000).add(int(6).mul(pm1).mul(pm1).mul(pi).mul(logp));
            let xi2 = half_sq.mul(pi).mul(log5900).add(int(6).mul(pm1).mul(pm1).mul(pi).mul(logp));
            let xi3 = int(6).mul(pm1).mul(pi).mul(logp);
            let rec = xi1.add(xi2).add(xi3).div(half_sq);
            BoundReport::new("split-cartan", v)
                .term("Xi1_coeff", xi1)
                .term("Xi2_coeff", xi2)
                .term("Xi3_coeff", xi3)
                .term("height_factor", half_sq)
                .term("recombined", rec)
        }
        SplitCartanBound::TwoRational => {
            let v = int(72).mul(log3p);
            // B = 2, λ = 1; h(P) ≤ (Ξ₁ + Ξ₂)/(½(p−1)³)
            let half_cube = half_sq.mul(pm1);
            let xi1 = half_cube.mul(log7000).add(int(12).mul(pm1).mul(pm1).mul(pi).mul(logp));
            let xi2 = pm1.mul(pm1).mul(pi).mul(log5900).add(int(12).mul(pm1).mul(pm1).mul(pi).mul(logp));
            let xi3 = Interval::point(0.0);
            let rec = xi1.add(xi2).div(half_cube);
            BoundReport::new("split-cartan", v)
                .term("Xi1_coeff", xi1)
                .term("Xi2_coeff", xi2)
                .term("Xi3_coeff", xi3)
                .term("height_factor", half_cube)
                .term("recombined", rec)
        }
    };
    let shape_name = match shape {
        SplitCartanBound::SingleRational => "single-rational",
        SplitCartanBound::TwoRational => "two-rational",
    };
    Ok(report.input("p", p).input("case", shape_name))
}

/// h(P) ≤ 110p log p for P ∈ X₀⁺(p^r)(K), K quadratic, p > p₀.
pub fn bound_x0_plus(p: u32) -> Result<BoundReport> {
    check_odd_prime(p)?;
    let pi = int(u64::from(p));
    let mut r = BoundReport::new("x0-plus", int(110).mul(pi).mul(pi.ln())).input("p", p);
    r.symbolic.push("p0: absolute constant, not explicit".into());
    r.symbolic.push("kappa(d): isogeny-degree constant, not explicit".into());
    Ok(r)
}

fn gap_interval(h_prime: Interval, delta: u64) -> Interval {
    int(13).mul(int(1).add(h_prime).ln()).add(int(7).mul(int(delta).ln())).add(int(100))
}

/// |h(j_E) − h(j_E′)| ≤ 13 log(1 + h(j_E′)) + 7 log δ + 100 for a δ-isogeny.
pub fn isogeny_height_gap(h_prime: f64, delta: u64) -> Result<f64> {
    if !(h_prime >= 0.0) || !h_prime.is_finite() {
        return input("h' must be a finite non-negative real");
    }
    if delta < 1 {
        return input("isogeny degree must be at least 1");
    }
    Ok(gap_interval(Interval::point(h_prime), delta).hi)
}

/// 24p log 3p + gap(24p log 3p, p), the height of a point of X₀⁺(p^r)
/// obtained from the split Cartan bound through a p-isogeny; the breakdown
/// carries the X₀⁺ bound it must stay under.
pub fn x0_plus_chain(p: u32) -> Result<BoundReport> {
    check_odd_prime(p)?;
    let pi = int(u64::from(p));
    let split = int(24).mul(pi).mul(int(3).mul(pi).ln());
    let gap = gap_interval(split, u64::from(p));
    let total = split.add(gap);
    let target = int(110).mul(pi).mul(pi.ln());
    Ok(BoundReport::new("x0-plus-chain", total)
        .input("p", p)
        .term("split_cartan", split)
        .term("isogeny_gap", gap)
        .term("x0_plus_bound", target))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn rho_examples() {
        assert!(close(rho(5, PlaceKind::Infinite).unwrap(), 96.57, 0.01));
        assert_eq!(rho(6, PlaceKind::FiniteCoprime).unwrap(), 0.0);
        assert!(close(rho(4, PlaceKind::FiniteDividing(2)).unwrap(), 33.27, 0.01));
        assert!(rho(6, PlaceKind::FiniteDividing(5)).is_err());
        assert!(rho(8, PlaceKind::FiniteDividing(4)).is_err());
        assert!(close(rho_aggregate(5, 2).unwrap(), 2.0 * 60.0 * 5f64.ln(), 1e-9));
    }

    #[test]
    fn theorem_examples() {
        assert!(close(bound_theorem_1_1(5, 16).unwrap().value, 12998.6, 0.1));
        // 12·2·4·log 6
        assert!(close(bound_theorem_1_1(2, 2).unwrap().value, 96.0 * 6f64.ln(), 1e-9));
        assert!(close(bound_theorem_1_2(5, 16, 1, true).unwrap().value, 12998.6, 0.1));
        let v = bound_theorem_1_2(5, 16, 2, false).unwrap().value;
        assert!((v / 1.326e7 - 1.0).abs() < 1e-3);
        assert!(close(bound_refined(2, 1, &BigInt::from(1), false).unwrap().value, 199.6, 0.05));
    }

    #[test]
    fn values_are_upper_bounds() {
        for n in 2..=30u32 {
            let direct = 12.0 * 16.0 * f64::from(n * n) * (3.0 * f64::from(n)).ln();
            let r = bound_theorem_1_1(n, 16).unwrap();
            assert!(r.value >= direct && r.value <= direct * (1.0 + 1e-12));
        }
    }

    #[test]
    fn refined_breakdown_recombines_below_value() {
        for n in 2..=12u32 {
            for gp in [1u64, 2, 8, 24] {
                for b in [1i64, 2, 7, 1000] {
                    for inf in [false, true] {
                        let r = bound_refined(n, gp, &BigInt::from(b), inf).unwrap();
                        assert!(r.breakdown_value("recombined").unwrap() <= r.value);
                    }
                }
            }
        }
    }

    #[test]
    fn identity_holds() {
        for n in 2..=10u32 {
            for g in [2u64, 4, 16, 48] {
                for s in 1..=3u32 {
                    assert!(refined_matches_theorem_1_2(n, g, s));
                    let budget_sq = l1_budget_squared(s as usize, &(BigInt::from(g / 2) * n * n));
                    if s % 2 == 0 || s == 1 {
                        let b = num_integer::Roots::sqrt(&budget_sq);
                        let refined = bound_refined(n, g / 2, &b, false).unwrap().value;
                        let thm = bound_theorem_1_2(n, g, s, false).unwrap().value;
                        assert!((refined / thm - 1.0).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn split_cartan_examples() {
        let v = bound_split_cartan(3, SplitCartanBound::TwoRational).unwrap().value;
        assert!(close(v, 72.0 * 9f64.ln(), 1e-9));
        assert!(close(v, 158.2, 0.05));
        assert!(close(bound_split_cartan(5, SplitCartanBound::TwoRational).unwrap().value, 195.0, 0.05));
        assert!(bound_split_cartan(9, SplitCartanBound::SingleRational).is_err());
        assert!(bound_split_cartan(2, SplitCartanBound::SingleRational).is_err());
        for p in (3..200).filter(|&p| is_prime(p)) {
            let g = bound_split_cartan(p as u32, SplitCartanBound::SingleRational).unwrap();
            let t = bound_split_cartan(p as u32, SplitCartanBound::TwoRational).unwrap();
            assert!(g.value >= t.value);
            assert!(g.breakdown_value("recombined").unwrap() <= g.value, "p = {p}");
            assert!(t.breakdown_value("recombined").unwrap() <= t.value, "p = {p}");
        }
    }

    #[test]
    fn case_classification() {
        use SplitCartanOrbit::*;
        assert_eq!(split_cartan_case(&[Infinity]).unwrap(), SplitCartanCase::InfinityAndConjugates);
        assert_eq!(split_cartan_case(&[Zero, Conjugates]).unwrap(), SplitCartanCase::ZeroAndConjugates);
        assert_eq!(split_cartan_case(&[Infinity, Zero]).unwrap(), SplitCartanCase::BothRational);
        assert_eq!(SplitCartanCase::BothRational.unit().len(), 2);
        assert!(split_cartan_case(&[Infinity, Zero, Conjugates]).is_err());
    }

    #[test]
    fn x0_plus_examples() {
        assert!(close(bound_x0_plus(3).unwrap().value, 362.5, 0.05));
        assert!(close(bound_x0_plus(37).unwrap().value, 4070.0 * 37f64.ln(), 1e-9));
        assert!(close(bound_x0_plus(37).unwrap().value, 14697.0, 1.0));
        assert!(close(isogeny_height_gap(0.0, 1).unwrap(), 100.0, 1e-9));
        assert!(close(isogeny_height_gap(100.0, 5).unwrap(), 171.3, 0.05));
        assert!(isogeny_height_gap(-1.0, 1).is_err());
        assert!(isogeny_height_gap(1.0, 0).is_err());
        for p in (17..2000).filter(|&p| is_prime(p)) {
            let x = bound_x0_plus(p as u32).unwrap().value;
            assert!(x >= bound_split_cartan(p as u32, SplitCartanBound::SingleRational).unwrap().value);
        }
    }

    #[test]
    fn monotone_on_grids() {
        for n in 2..=20u32 {
            for g in [2u64, 4, 8, 16] {
                let here = bound_theorem_1_1(n, g).unwrap().value;
                assert!(here <= bound_theorem_1_1(n + 1, g).unwrap().value);
                assert!(here <= bound_theorem_1_1(n, g * 2).unwrap().value);
                for s in 1..=3 {
                    for inf in [false, true] {
                        let v = bound_theorem_1_2(n, g, s, inf).unwrap().value;
                        assert!(v <= bound_theorem_1_2(n + 1, g, s, inf).unwrap().value);
                        assert!(v <= bound_theorem_1_2(n, g + 2, s, inf).unwrap().value);
                        assert!(v <= bound_theorem_1_2(n, g, s + 1, inf).unwrap().value);
                    }
                }
                for b in 1..5i64 {
                    let v = bound_refined(n, g, &BigInt::from(b), false).unwrap().value;
                    assert!(v <= bound_refined(n, g, &BigInt::from(b + 1), false).unwrap().value);
                    assert!(v <= bound_refined(n + 1, g, &BigInt::from(b), false).unwrap().value);
                }
            }
        }
        for h in 0..50 {
            for d in 1..10 {
                let v = isogeny_height_gap(f64::from(h), d).unwrap();
                assert!(v <= isogeny_height_gap(f64::from(h + 1), d).unwrap());
                assert!(v <= isogeny_height_gap(f64::from(h), d + 1).unwrap());
            }
        }
    }

    #[test]
    fn interval_encloses() {
        let x = Interval::point(2.0).ln();
        assert!(x.contains(std::f64::consts::LN_2));
        let y = Interval::point(10.0).sqrt().powi(3);
        assert!(y.contains(10f64.powf(1.5)));
        assert!(Interval::from_u64(u64::MAX).hi >= u64::MAX as f64);
    }
}
