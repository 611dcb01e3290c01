//! Cuspidal divisors of the Siegel units u_a on X(N) and of the norms w_a on
//! X_G, the divisor matrix, and v-adic leading-order data.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cusps::{Cusp, CuspLayout};
use crate::error::{Error, Result};
use crate::exactmath::{ell, IntMatrix, Rational};
use crate::gl2::{label_classes, unit_galois_group, Subgroup, UnitGaloisGroup, UnitGroup, UnitLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveTag {
    XN,
    XG,
}

/// Cuspidal divisor; `coefficients[i]` is the order at cusp `i` of the
/// curve's cusp list (cusps of X(N), or geometric cusps of X_G).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub curve_tag: CurveTag,
    pub coefficients: Vec<BigInt>,
}

impl Divisor {
    pub fn zero(curve_tag: CurveTag, len: usize) -> Self {
        Divisor { curve_tag, coefficients: vec![BigInt::zero(); len] }
    }

    pub fn degree(&self) -> BigInt {
        self.coefficients.iter().sum()
    }

    /// `self + k·other`.
    pub fn add_scaled(&mut self, other: &Divisor, k: &BigInt) {
        debug_assert_eq!(self.coefficients.len(), other.coefficients.len());
        for (x, y) in self.coefficients.iter_mut().zip(&other.coefficients) {
            *x += k * y;
        }
    }
}

/// Order of u_a at cusp with wedge value k = first coordinate of a·M_c⁻¹,
/// in the parameter q^{1/N}: 12N²·B₂(k/N)/2 = 6k² − 6kN + N².
fn ord_from_first_coordinate(k: u32, level: u32) -> i64 {
    let (k, n) = (i64::from(k), i64::from(level));
    6 * k * k - 6 * k * n + n * n
}

/// First coordinate of a·M_c⁻¹, which only depends on the bottom row of M_c.
fn wedge(a: &UnitLabel, c: &Cusp) -> u32 {
    let n = i64::from(a.level());
    let (x, y) = c.vector();
    (i64::from(a.k1()) * i64::from(y) - i64::from(a.k2()) * i64::from(x)).rem_euclid(n) as u32
}

/// 12N²ℓ_a, the order of u_a at c_∞ in q^{1/N}.
pub fn ord_u_infinity(a: &UnitLabel) -> BigInt {
    let n = BigInt::from(a.level());
    let v = ell(a) * Rational::from_integer(BigInt::from(12) * &n * &n);
    assert!(v.is_integer(), "12N²ℓ_a must be integral");
    v.to_integer()
}

/// Order of u_a at the cusp c of X(N), in the parameter q^{1/N} at c.
///
/// Computed as ord_{c_∞} u_{a·M_c⁻¹}, using g_a ∘ γ = g_{aγ}.
pub fn ord_u(a: &UnitLabel, c: &Cusp) -> Result<BigInt> {
    if a.level() != c.level() {
        return Err(Error::LevelMismatch { expected: a.level(), found: c.level() });
    }
    Ok(BigInt::from(ord_from_first_coordinate(wedge(a, c), a.level())))
}

/// Divisor of u_a on X(N), indexed by `cusps_of_xn`.
pub fn div_u(a: &UnitLabel) -> Result<Divisor> {
    let cusps = crate::cusps::cusps_of_xn(a.level())?;
    let coefficients =
        cusps.iter().map(|c| BigInt::from(ord_from_first_coordinate(wedge(a, c), a.level()))).collect();
    Ok(Divisor { curve_tag: CurveTag::XN, coefficients })
}

/// X_G over K with everything needed to compute divisors of the w_a.
#[derive(Clone, Debug)]
pub struct ModularCurve {
    group: Subgroup,
    h_k: UnitGroup,
    g_prime: UnitGaloisGroup,
    layout: CuspLayout,
    labels: Vec<UnitLabel>,
}

impl ModularCurve {
    pub fn new(group: Subgroup, h_k: UnitGroup) -> Result<Self> {
        let g_prime = unit_galois_group(&group, &h_k)?;
        let layout = CuspLayout::new(&group, &h_k)?;
        let labels = label_classes(group.level())?;
        Ok(ModularCurve { group, h_k, g_prime, layout, labels })
    }

    pub fn level(&self) -> u32 {
        self.group.level()
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn h_k(&self) -> &UnitGroup {
        &self.h_k
    }

    pub fn g_prime(&self) -> &UnitGaloisGroup {
        &self.g_prime
    }

    pub fn layout(&self) -> &CuspLayout {
        &self.layout
    }

    /// Label ± classes, the column index set of the divisor matrix.
    pub fn labels(&self) -> &[UnitLabel] {
        &self.labels
    }

    /// A = |G′|·N², the entry bound of the divisor matrix.
    pub fn entry_bound(&self) -> BigInt {
        let n = BigInt::from(self.level());
        BigInt::from(self.g_prime.order()) * &n * &n
    }

    /// One row representative per Galois orbit: its smallest geometric cusp.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        self.layout.galois_orbits().iter().map(|o| o[0]).collect()
    }

    fn pushdown_sum(&self, a: &UnitLabel, lift: &Cusp) -> i64 {
        let n = self.level();
        self.g_prime
            .elements()
            .iter()
            .map(|s| ord_from_first_coordinate(wedge(&a.act(s), lift), n))
            .sum()
    }

    /// Order of w_a at geometric cusp `i`, checked over every lift.
    pub fn ord_w(&self, a: &UnitLabel, i: usize) -> Result<BigInt> {
        let n = i64::from(self.level());
        let e = i64::from(self.layout.width(i));
        let mut value: Option<i64> = None;
        for lift in self.layout.fiber(i) {
            let total = e * self.pushdown_sum(a, &lift);
            if total % n != 0 {
                return Err(Error::Invariant(format!(
                    "non-integral pushdown of w_{a} at {lift}: {total}/{n}"
                )));
            }
            let v = total / n;
            match value {
                None => value = Some(v),
                Some(prev) if prev != v => {
                    return Err(Error::Invariant(format!(
                        "pushdown of w_{a} depends on the lift: {prev} at {} vs {v} at {lift}",
                        self.layout.representative(i)
                    )))
                }
                _ => {}
            }
        }
        Ok(BigInt::from(value.expect("fibers are non-empty")))
    }

    /// Divisor of w_a = ∏_{σ∈G′} u_{aσ} on X_G.
    pub fn div_w(&self, a: &UnitLabel) -> Result<Divisor> {
        if a.level() != self.level() {
            return Err(Error::LevelMismatch { expected: self.level(), found: a.level() });
        }
        let coefficients =
            (0..self.layout.num_geometric()).map(|i| self.ord_w(a, i)).collect::<Result<Vec<_>>>()?;
        Ok(Divisor { curve_tag: CurveTag::XG, coefficients })
    }

    /// |C(G,K)| × |labels| matrix of ord_c w_a over orbit representatives.
    pub fn divisor_matrix(&self) -> Result<IntMatrix> {
        let reps = self.orbit_representatives();
        let columns: Vec<Vec<BigInt>> = self
            .labels
            .par_iter()
            .map(|a| reps.iter().map(|&i| self.ord_w(a, i)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut m = IntMatrix::zeros(reps.len(), self.labels.len());
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Σ over Galois orbits of [K(c):K]·ord_c, for a divisor on X_G.
    pub fn weighted_degree(&self, d: &Divisor) -> BigInt {
        self.layout
            .galois_orbits()
            .iter()
            .map(|o| BigInt::from(o.len()) * &d.coefficients[o[0]])
            .sum()
    }
}

/// Divisor of w_a on X_G for the given G and H_K.
pub fn div_w(a: &UnitLabel, g: &Subgroup, h_k: &UnitGroup) -> Result<Divisor> {
    ModularCurve::new(g.clone(), h_k.clone())?.div_w(a)
}

pub fn divisor_matrix(g: &Subgroup, h_k: &UnitGroup) -> Result<IntMatrix> {
    ModularCurve::new(g.clone(), h_k.clone())?.divisor_matrix()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoefficientClass {
    /// Leading coefficient is a root of unity times a unit.
    UnitRootOfUnity,
    /// Leading coefficient is a root of unity times (1 − ζ_M).
    RootOfUnityTimesOneMinusZeta { m: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingOrderData {
    pub label: UnitLabel,
    pub order: Rational,
    pub coefficient_class: CoefficientClass,
}

/// v-adic leading term of g_a: order ℓ_a, and whether the coefficient is a
/// unit or picks up a factor 1 − ζ_M.
pub fn siegel_leading_order(a: &UnitLabel) -> LeadingOrderData {
    let coefficient_class = if a.k1() != 0 {
        CoefficientClass::UnitRootOfUnity
    } else {
        CoefficientClass::RootOfUnityTimesOneMinusZeta { m: a.second_order() }
    };
    LeadingOrderData { label: *a, order: ell(a), coefficient_class }
}

/// Height bound 12·B·|G′|·N·log 2 for the integrality defect λ.
pub fn lambda_integrality(b: &BigInt, g_prime_order: usize, level: u32) -> f64 {
    let b = b.to_f64().unwrap_or(f64::INFINITY);
    12.0 * b * g_prime_order as f64 * f64::from(level) * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusps::cusps_of_xn;
    use crate::exactmath::rank;
    use crate::gl2::{closure, ResidueMatrix};

    fn split_cartan(p: u32) -> Subgroup {
        let gens: Vec<ResidueMatrix> = (1..p)
            .flat_map(|u| (1..p).map(move |v| ResidueMatrix::diag(p, u, v).unwrap()))
            .collect();
        closure(&gens, p).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ord_infinity_examples() {
        for p in [3u32, 5, 7, 11] {
            assert_eq!(ord_u_infinity(&UnitLabel::new(p, 0, 1).unwrap()), BigInt::from(p * p));
        }
        assert_eq!(ord_u_infinity(&UnitLabel::new(5, 1, 0).unwrap()), BigInt::from(1));
    }

    #[test]
    fn closed_form_matches_bernoulli_route() {
        for n in 2..=100u32 {
            let n2 = BigInt::from(n * n);
            for k1 in 0..n {
                let a = UnitLabel::new(n, k1, 1).unwrap();
                let v = ord_u_infinity(&a);
                assert_eq!(v, BigInt::from(ord_from_first_coordinate(k1, n)));
                assert!(v <= n2 && -&v <= n2);
            }
        }
    }

    #[test]
    fn ord_u_is_independent_of_scaling_matrix() {
        for n in 2..=13u32 {
            for c in cusps_of_xn(n).unwrap() {
                let m = crate::cusps::scaling_matrix(&c);
                for k in [-2i64, 1, 3] {
                    for sign in [1i64, -1] {
                        // ±U^k·M_c has the same bottom row up to sign.
                        let alt = [
                            sign * (m[0][0] + k * m[1][0]),
                            sign * (m[0][1] + k * m[1][1]),
                            sign * m[1][0],
                            sign * m[1][1],
                        ];
                        let r = ResidueMatrix::new(n, alt).unwrap();
                        for a in label_classes(n).unwrap() {
                            let direct = ord_u_infinity(&a.act(&r.inverse()));
                            assert_eq!(direct, ord_u(&a, &c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn div_u_has_degree_zero() {
        for n in 2..=13u32 {
            for a in label_classes(n).unwrap() {
                assert!(div_u(&a).unwrap().degree().is_zero(), "N = {n}, a = {a}");
            }
        }
    }

    #[test]
    fn split_cartan_p5_divisors() {
        let g = split_cartan(5);
        let full = UnitGroup::full(5).unwrap();
        let d = div_w(&UnitLabel::new(5, 1, 0).unwrap(), &g, &full).unwrap();
        assert_eq!(d.coefficients, ints(&[-40, 200, -40, -40, -40, -40]));
        let d = div_w(&UnitLabel::new(5, 0, 1).unwrap(), &g, &full).unwrap();
        assert_eq!(d.coefficients, ints(&[200, -40, -40, -40, -40, -40]));
    }

    #[test]
    fn split_cartan_p3_matrix() {
        let curve = ModularCurve::new(split_cartan(3), UnitGroup::full(3).unwrap()).unwrap();
        let m = curve.divisor_matrix().unwrap();
        // rows: c_∞, c_0, {c_1, c_2}; −½p(p−1)² = −6, p·6 = 18
        let col = |a: UnitLabel| {
            let j = curve.labels().iter().position(|&b| b == a).unwrap();
            (0..3).map(|i| m.get(i, j).clone()).collect::<Vec<_>>()
        };
        assert_eq!(col(UnitLabel::new(3, 1, 0).unwrap()), ints(&[-6, 18, -6]));
        assert_eq!(col(UnitLabel::new(3, 0, 1).unwrap()), ints(&[18, -6, -6]));
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn trivial_group_gives_u_divisors() {
        let g = closure(&[], 5).unwrap();
        let curve = ModularCurve::new(g.clone(), g.det_image().clone()).unwrap();
        for a in label_classes(5).unwrap() {
            let dw = curve.div_w(&a).unwrap();
            let du = div_u(&a).unwrap();
            assert_eq!(dw.coefficients, du.coefficients);
            assert!(dw.degree().is_zero());
        }
    }

    #[test]
    fn leading_order_examples() {
        let d = siegel_leading_order(&UnitLabel::new(5, 1, 0).unwrap());
        assert_eq!(d.order, crate::exactmath::rational(1, 300));
        assert_eq!(d.coefficient_class, CoefficientClass::UnitRootOfUnity);
        let d = siegel_leading_order(&UnitLabel::new(5, 0, 1).unwrap());
        assert_eq!(d.order, crate::exactmath::rational(1, 12));
        assert_eq!(d.coefficient_class, CoefficientClass::RootOfUnityTimesOneMinusZeta { m: 5 });
        let d = siegel_leading_order(&UnitLabel::new(2, 1, 1).unwrap());
        assert_eq!(d.order, crate::exactmath::rational(-1, 24));
        assert_eq!(d.coefficient_class, CoefficientClass::UnitRootOfUnity);
        let d = siegel_leading_order(&UnitLabel::new(6, 0, 2).unwrap());
        assert_eq!(d.coefficient_class, CoefficientClass::RootOfUnityTimesOneMinusZeta { m: 3 });
    }

    #[test]
    fn lambda_examples() {
        assert!((lambda_integrality(&BigInt::from(1), 1, 2) - 16.636).abs() < 1e-3);
        assert!((lambda_integrality(&BigInt::from(2), 8, 5) - 665.4).abs() < 0.05);
        assert!(lambda_integrality(&BigInt::from(3), 8, 5) > lambda_integrality(&BigInt::from(2), 8, 5));
        assert!(lambda_integrality(&BigInt::from(2), 9, 5) > lambda_integrality(&BigInt::from(2), 8, 5));
        assert!(lambda_integrality(&BigInt::from(2), 8, 6) > lambda_integrality(&BigInt::from(2), 8, 5));
    }
}
