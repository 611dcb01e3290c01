//! Runge units: products ∏ w_a^{b_a} whose divisor is positive on a chosen
//! proper subset Σ of the Galois orbits of cusps.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::exactmath::{l1_budget_squared, positive_combination, within_l1_budget, ExponentVector};
use crate::units::{lambda_integrality, CurveTag, Divisor, ModularCurve};

#[derive(Clone, Debug, PartialEq)]
pub struct RungeUnit {
    /// Exponent b_a for each label class of `ModularCurve::labels`.
    pub exponents: ExponentVector,
    /// B = Σ|b_a|.
    pub budget_b: BigInt,
    /// Sorted Galois-orbit indices the unit must be positive on.
    pub sigma: Vec<usize>,
    /// Parameter s ≥ |Σ| used in the budget s^{s/2+1}(|G′|N²)^{s−1}.
    pub s: usize,
    pub divisor: Divisor,
    pub lambda_height: f64,
}

fn check_sigma(curve: &ModularCurve, sigma: &[usize], s: usize) -> Result<Vec<usize>> {
    let orbits = curve.layout().galois_orbits().len();
    let mut sorted = sigma.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != sigma.len() {
        return input("sigma contains repeated orbit indices");
    }
    if sorted.is_empty() {
        return input("sigma must be non-empty");
    }
    if let Some(&bad) = sorted.iter().find(|&&i| i >= orbits) {
        return input(format!("orbit index {bad} out of range (there are {orbits} orbits)"));
    }
    if sorted.len() == orbits {
        return Err(Error::SigmaNotProper { orbits });
    }
    if s < sorted.len() {
        return input(format!("s = {s} is smaller than |sigma| = {}", sorted.len()));
    }
    Ok(sorted)
}

/// Divisor of ∏ w_a^{b_a} on X_G.
pub fn combined_divisor(curve: &ModularCurve, exponents: &ExponentVector) -> Result<Divisor> {
    if exponents.len() != curve.labels().len() {
        return input(format!(
            "expected {} exponents, got {}",
            curve.labels().len(),
            exponents.len()
        ));
    }
    let mut total = Divisor::zero(CurveTag::XG, curve.layout().num_geometric());
    for (a, b) in curve.labels().iter().zip(exponents.entries()) {
        if !b.is_zero() {
            total.add_scaled(&curve.div_w(a)?, b);
        }
    }
    Ok(total)
}

impl RungeUnit {
    /// Package given exponents as a candidate unit for `sigma` without
    /// checking positivity; use [`verify_runge_unit`] for that.
    pub fn from_exponents(curve: &ModularCurve, sigma: &[usize], s: usize, exponents: ExponentVector) -> Result<Self> {
        let sigma = check_sigma(curve, sigma, s)?;
        let divisor = combined_divisor(curve, &exponents)?;
        let budget_b = exponents.l1_norm().clone();
        let lambda_height = lambda_integrality(&budget_b, curve.g_prime().order(), curve.level());
        Ok(RungeUnit { exponents, budget_b, sigma, s, divisor, lambda_height })
    }
}

/// Construct a Runge unit for `sigma` (Galois-orbit indices). `s` defaults to |sigma|.
pub fn runge_unit(curve: &ModularCurve, sigma: &[usize], s: Option<usize>) -> Result<RungeUnit> {
    let s = s.unwrap_or(sigma.len());
    let sorted = check_sigma(curve, sigma, s)?;
    let reps = curve.orbit_representatives();
    // Row i of the divisor matrix belongs to Galois orbit i.
    let m = curve.divisor_matrix()?.select_rows(&sorted);
    let b = positive_combination(&m).map_err(|e| match e {
        Error::RankDeficient { expected, found } => Error::Invariant(format!(
            "rows of the divisor matrix for sigma {sorted:?} have rank {found} < {expected}"
        )),
        other => other,
    })?;

    let bound = curve.entry_bound();
    if !within_l1_budget(b.l1_norm(), s, &bound) {
        return Err(Error::Invariant(format!(
            "exponent budget {} exceeds s^(s/2+1)·A^(s−1) with s = {s}, A = {bound}",
            b.l1_norm()
        )));
    }
    let unit = RungeUnit::from_exponents(curve, &sorted, s, b)?;
    for &o in &sorted {
        let c = reps[o];
        if !unit.divisor.coefficients[c].is_positive() {
            return Err(Error::Invariant(format!(
                "constructed unit has order {} at cusp {} of orbit {o}",
                unit.divisor.coefficients[c],
                curve.layout().representative(c)
            )));
        }
    }
    Ok(unit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RungeReport {
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
}

fn outcome(name: &str, witness: Option<String>) -> CheckOutcome {
    CheckOutcome { name: name.to_string(), pass: witness.is_none(), witness }
}

/// Re-derive the divisor of `unit` and check positivity on Σ, the ℓ₁ budget,
/// and the weighted degree relation.
pub fn verify_runge_unit(curve: &ModularCurve, unit: &RungeUnit) -> RungeReport {
    let mut checks = Vec::new();
    let recomputed = combined_divisor(curve, &unit.exponents);
    let divisor = match recomputed {
        Ok(d) => {
            let w = (d != unit.divisor).then(|| "stored divisor differs from recomputation".to_string());
            checks.push(outcome("divisor", w));
            Some(d)
        }
        Err(e) => {
            checks.push(outcome("divisor", Some(e.to_string())));
            None
        }
    };

    if let Some(d) = &divisor {
        let orbits = curve.layout().galois_orbits();
        let bad = unit.sigma.iter().find_map(|&o| {
            let orbit = orbits.get(o)?;
            orbit
                .iter()
                .find(|&&c| !d.coefficients[c].is_positive())
                .map(|&c| format!("ord at {} (orbit {o}) is {}", curve.layout().representative(c), d.coefficients[c]))
        });
        let bad = bad.or_else(|| {
            unit.sigma.iter().find(|&&o| o >= orbits.len()).map(|o| format!("orbit index {o} out of range"))
        });
        checks.push(outcome("positivity", bad));

        let degree = curve.weighted_degree(d);
        checks.push(outcome("degree", (!degree.is_zero()).then(|| format!("weighted degree {degree}"))));

        let constant = orbits.iter().find_map(|o| {
            o.iter()
                .find(|&&c| d.coefficients[c] != d.coefficients[o[0]])
                .map(|&c| format!("ord differs between cusps {} and {} of one orbit", o[0], c))
        });
        checks.push(outcome("galois-constancy", constant));
    }

    let norm: BigInt = unit.exponents.entries().iter().map(BigInt::abs).sum();
    let bound = curve.entry_bound();
    let budget = if norm != unit.budget_b {
        Some(format!("stored B = {} but Σ|b_a| = {norm}", unit.budget_b))
    } else if !within_l1_budget(&norm, unit.s, &bound) {
        Some(format!("B² = {} exceeds {}", &norm * &norm, l1_budget_squared(unit.s, &bound)))
    } else {
        None
    };
    checks.push(outcome("budget", budget));

    RungeReport { pass: checks.iter().all(|c| c.pass), checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::{closure, ResidueMatrix, Subgroup, UnitGroup, UnitLabel};

    fn split_cartan(p: u32) -> Subgroup {
        let gens: Vec<ResidueMatrix> = (1..p)
            .flat_map(|u| (1..p).map(move |v| ResidueMatrix::diag(p, u, v).unwrap()))
            .collect();
        closure(&gens, p).unwrap()
    }

    fn curve(p: u32) -> ModularCurve {
        ModularCurve::new(split_cartan(p), UnitGroup::full(p).unwrap()).unwrap()
    }

    fn hand_unit(c: &ModularCurve, terms: &[((u32, u32), i64)]) -> ExponentVector {
        let p = c.level();
        let mut b = vec![BigInt::zero(); c.labels().len()];
        for &((k1, k2), e) in terms {
            let a = UnitLabel::new(p, k1, k2).unwrap().pm_canonical();
            let j = c.labels().iter().position(|&x| x == a).unwrap();
            b[j] = BigInt::from(e);
        }
        ExponentVector::new(b)
    }

    #[test]
    fn constructed_units_pass_verification() {
        for p in [3u32, 5, 7] {
            let c = curve(p);
            for sigma in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
                let u = runge_unit(&c, &sigma, None).unwrap();
                let r = verify_runge_unit(&c, &u);
                assert!(r.pass, "p = {p}, sigma = {sigma:?}: {r:?}");
            }
        }
    }

    #[test]
    fn hand_built_split_cartan_units() {
        for p in [3u32, 5, 7, 11] {
            let c = curve(p);
            // orbits: 0 = {c_∞}, 1 = {c_0}, 2 = {c_1, …, c_{p−1}}
            let cases = [
                (vec![0, 2], vec![((1, 0), -1)]),
                (vec![1, 2], vec![((0, 1), -1)]),
                (vec![0, 1], vec![((1, 0), 1), ((0, 1), 1)]),
            ];
            for (sigma, terms) in cases {
                let u = RungeUnit::from_exponents(&c, &sigma, sigma.len(), hand_unit(&c, &terms)).unwrap();
                assert!(verify_runge_unit(&c, &u).pass, "p = {p}, sigma = {sigma:?}");
                assert_eq!(u.budget_b, BigInt::from(terms.len()));
            }
        }
    }

    #[test]
    fn corrupted_unit_fails() {
        let c = curve(5);
        let mut u = runge_unit(&c, &[0], None).unwrap();
        let negated: Vec<BigInt> = u.exponents.entries().iter().map(|b| -b).collect();
        u.exponents = ExponentVector::new(negated);
        let r = verify_runge_unit(&c, &u);
        assert!(!r.pass);
        let failed: Vec<&str> = r.checks.iter().filter(|x| !x.pass).map(|x| x.name.as_str()).collect();
        assert!(failed.contains(&"divisor"));
        assert!(failed.contains(&"positivity"));
    }

    #[test]
    fn sigma_must_be_proper() {
        let c = curve(5);
        assert_eq!(runge_unit(&c, &[0, 1, 2], None).unwrap_err(), Error::SigmaNotProper { orbits: 3 });
        assert!(matches!(runge_unit(&c, &[], None), Err(Error::Input(_))));
        assert!(matches!(runge_unit(&c, &[0, 0], None), Err(Error::Input(_))));
        assert!(matches!(runge_unit(&c, &[5], None), Err(Error::Input(_))));
        assert!(matches!(runge_unit(&c, &[0, 1], Some(1)), Err(Error::Input(_))));
    }

    #[test]
    fn construction_is_deterministic() {
        let g = closure(&[ResidueMatrix::new(7, [1, 1, 0, 1]).unwrap(), ResidueMatrix::diag(7, 1, 3).unwrap()], 7).unwrap();
        let c = ModularCurve::new(g, UnitGroup::full(7).unwrap()).unwrap();
        let orbits = c.layout().galois_orbits().len();
        assert!(orbits >= 2);
        let sigma: Vec<usize> = (0..orbits - 1).collect();
        let a = runge_unit(&c, &sigma, None).unwrap();
        let b = runge_unit(&c, &sigma, None).unwrap();
        assert_eq!(a, b);
        assert!(verify_runge_unit(&c, &a).pass);
    }
}
