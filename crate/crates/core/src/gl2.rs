//! Subgroups of GL₂(Z/NZ), the unit-Galois group G′, and the right action
//! on Siegel-unit labels.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::exactmath::gcd_i64;

/// Default cap on the number of elements a closure may enumerate.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000_000;

fn check_level(level: u32) -> Result<()> {
    if level < 2 {
        return input(format!("level must be at least 2, got {level}"));
    }
    Ok(())
}

fn reduce(v: i64, n: u32) -> u32 {
    v.rem_euclid(i64::from(n)) as u32
}

/// Multiplicative inverse of `u` mod `n`, if it exists.
pub fn inverse_mod(u: u32, n: u32) -> Option<u32> {
    let (g, s, _) = crate::exactmath::ext_gcd(i64::from(u), i64::from(n));
    (g == 1).then(|| reduce(s, n))
}

/// 2×2 matrix over Z/NZ, entries `[n11, n12, n21, n22]` reduced to `[0, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResidueMatrix {
    level: u32,
    m: [u32; 4],
}

impl ResidueMatrix {
    /// Reduce the entries mod `level` and check invertibility.
    pub fn new(level: u32, entries: [i64; 4]) -> Result<Self> {
        check_level(level)?;
        let m = ResidueMatrix { level, m: entries.map(|e| reduce(e, level)) };
        if inverse_mod(m.det(), level).is_none() {
            return Err(Error::NotInvertible { level, matrix: m.to_string() });
        }
        Ok(m)
    }


    pub fn identity(level: u32) -> Self {
        ResidueMatrix { level, m: [1, 0, 0, 1] }
    }

    pub fn minus_identity(level: u32) -> Self {
        let n1 = level - 1;
        ResidueMatrix { level, m: [n1, 0, 0, n1] }
    }

    pub fn diag(level: u32, u: u32, v: u32) -> Result<Self> {
        Self::new(level, [i64::from(u), 0, 0, i64::from(v)])
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn entries(&self) -> [u32; 4] {
        self.m
    }

    pub fn det(&self) -> u32 {
        let n = u64::from(self.level);
        let [a, b, c, d] = self.m.map(u64::from);
        ((a * d % n + n - b * c % n) % n) as u32
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.level, other.level);
        let n = u64::from(self.level);
        let [a, b, c, d] = self.m.map(u64::from);
        let [e, f, g, h] = other.m.map(u64::from);
        let m = [
            ((a * e + b * g) % n) as u32,
            ((a * f + b * h) % n) as u32,
            ((c * e + d * g) % n) as u32,
            ((c * f + d * h) % n) as u32,
        ];
        ResidueMatrix { level: self.level, m }
    }

    pub fn inverse(&self) -> Self {
        let n = self.level;
        let di = u64::from(inverse_mod(self.det(), n).expect("members of GL2 are invertible"));
        let [a, b, c, d] = self.m;
        let neg = |x: u32| if x == 0 { 0 } else { n - x };
        let m = [d, neg(b), neg(c), a].map(|x| (u64::from(x) * di % u64::from(n)) as u32);
        ResidueMatrix { level: n, m }
    }

    pub fn neg(&self) -> Self {
        let n = self.level;
        ResidueMatrix { level: n, m: self.m.map(|x| if x == 0 { 0 } else { n - x }) }
    }

    /// Canonical representative of the class `{g, −g}`.
    pub fn pm_canonical(&self) -> Self {
        (*self).min(self.neg())
    }

    pub fn is_sl2(&self) -> bool {
        self.det() == 1
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.level)
    }
}

/// Subgroup of (Z/NZ)^×, stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitGroup {
    level: u32,
    elements: Vec<u32>,
}

impl UnitGroup {
    /// Subgroup generated by `generators` (each must be a unit mod `level`).
    pub fn generated(level: u32, generators: &[i64]) -> Result<Self> {
        check_level(level)?;
        let gens: Vec<u32> = generators.iter().map(|&g| reduce(g, level)).collect();
        for &g in &gens {
            if inverse_mod(g, level).is_none() {
                return input(format!("{g} is not a unit mod {level}"));
            }
        }
        let n = u64::from(level);
        let mut seen: HashSet<u32> = HashSet::from([1 % level]);
        let mut queue = VecDeque::from([1 % level]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = (u64::from(x) * u64::from(g) % n) as u32;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<u32> = seen.into_iter().collect();
        elements.sort_unstable();
        Ok(UnitGroup { level, elements })
    }

    /// All of (Z/NZ)^×.
    pub fn full(level: u32) -> Result<Self> {
        check_level(level)?;
        let elements = (1..level).filter(|&u| gcd_i64(i64::from(u), i64::from(level)) == 1).collect();
        Ok(UnitGroup { level, elements })
    }

    pub fn trivial(level: u32) -> Result<Self> {
        Self::generated(level, &[])
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, u: u32) -> bool {
        self.elements.binary_search(&(u % self.level)).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &UnitGroup) -> bool {
        self.elements.iter().all(|&u| other.contains(u))
    }
}

/// Closed subgroup G of GL₂(Z/NZ) containing −I, with cached analysis.
#[derive(Clone, Debug, Serialize)]
pub struct Subgroup {
    level: u32,
    generators: Vec<ResidueMatrix>,
    elements: Vec<ResidueMatrix>,
    det_image: UnitGroup,
    sl2_part: Vec<ResidueMatrix>,
}

/// Smallest subgroup of GL₂(Z/NZ) containing `generators` and −I.
pub fn closure(generators: &[ResidueMatrix], level: u32) -> Result<Subgroup> {
    closure_with_cap(generators, level, DEFAULT_ELEMENT_CAP)
}

pub fn closure_with_cap(generators: &[ResidueMatrix], level: u32, cap: usize) -> Result<Subgroup> {
    check_level(level)?;
    for g in generators {
        if g.level() != level {
            return Err(Error::LevelMismatch { expected: level, found: g.level() });
        }
    }
    let mut gens: Vec<ResidueMatrix> = generators.to_vec();
    gens.push(ResidueMatrix::minus_identity(level));

    // Finite group: saturating under right multiplication by the generators
    // already yields inverses.
    let id = ResidueMatrix::identity(level);
    let mut seen: HashSet<ResidueMatrix> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.mul(g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<ResidueMatrix> = seen.into_iter().collect();
    elements.sort_unstable();

    let dets: Vec<i64> = elements.iter().map(|g| i64::from(g.det())).collect();
    let mut det_elems: Vec<u32> = dets.iter().map(|&d| d as u32).collect();
    det_elems.sort_unstable();
    det_elems.dedup();
    let det_image = UnitGroup { level, elements: det_elems };
    let sl2_part = elements.iter().copied().filter(ResidueMatrix::is_sl2).collect();

    Ok(Subgroup { level, generators: generators.to_vec(), elements, det_image, sl2_part })
}

impl Subgroup {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ResidueMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[ResidueMatrix] {
        &self.generators
    }

    pub fn det_image(&self) -> &UnitGroup {
        &self.det_image
    }

    /// Elements of G ∩ SL₂(Z/NZ).
    pub fn sl2_part(&self) -> &[ResidueMatrix] {
        &self.sl2_part
    }

    pub fn contains(&self, g: &ResidueMatrix) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Size of the sign group {±I} (1 when N = 2, where −I = I).
    pub fn pm_size(&self) -> usize {
        if self.level == 2 {
            1
        } else {
            2
        }
    }

    /// Elements g of G with det g in `h_k`.
    pub fn with_det_in(&self, h_k: &UnitGroup) -> Vec<ResidueMatrix> {
        self.elements.iter().copied().filter(|g| h_k.contains(g.det())).collect()
    }

    /// Resolve a Galois preset against this group.
    pub fn galois_group(&self, spec: &GaloisSpec) -> Result<UnitGroup> {
        match spec {
            GaloisSpec::Full => UnitGroup::full(self.level),
            GaloisSpec::DetG => Ok(self.det_image.clone()),
            GaloisSpec::Explicit(gens) => UnitGroup::generated(self.level, gens),
        }
    }
}

/// How H_K, the image of Gal(K̄/K) in (Z/NZ)^×, is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaloisSpec {
    /// (Z/NZ)^×, i.e. K ∩ Q(ζ_N) = Q.
    Full,
    /// det G, the smallest admissible field of definition.
    DetG,
    /// Subgroup generated by the listed units.
    Explicit(Vec<i64>),
}

/// The diagonal subgroup {diag(u, v)} of GL₂(Z/NZ).
pub fn split_cartan(level: u32) -> Result<Subgroup> {
    let units = UnitGroup::full(level)?;
    let mut gens = Vec::new();
    for &u in units.elements() {
        gens.push(ResidueMatrix::diag(level, u, 1)?);
        gens.push(ResidueMatrix::diag(level, 1, u)?);
    }
    closure(&gens, level)
}

/// The Borel subgroup of upper-triangular matrices in GL₂(Z/NZ).
pub fn borel(level: u32) -> Result<Subgroup> {
    let mut gens = vec![ResidueMatrix::new(level, [1, 1, 0, 1])?];
    for &u in UnitGroup::full(level)?.elements() {
        gens.push(ResidueMatrix::diag(level, u, 1)?);
        gens.push(ResidueMatrix::diag(level, 1, u)?);
    }
    closure(&gens, level)
}

/// G′ = {g ∈ G : det g ∈ H_K}/±1, stored as one canonical matrix per ± class.
#[derive(Clone, Debug, Serialize)]
pub struct UnitGaloisGroup {
    level: u32,
    parent_order: usize,
    h_k: UnitGroup,
    modulus_pm1: Vec<ResidueMatrix>,
}

impl UnitGaloisGroup {
    pub fn order(&self) -> usize {
        self.modulus_pm1.len()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn elements(&self) -> &[ResidueMatrix] {
        &self.modulus_pm1
    }

    pub fn h_k(&self) -> &UnitGroup {
        &self.h_k
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }
}

pub fn unit_galois_group(g: &Subgroup, h_k: &UnitGroup) -> Result<UnitGaloisGroup> {
    if h_k.level() != g.level() {
        return Err(Error::LevelMismatch { expected: g.level(), found: h_k.level() });
    }
    if let Some(&bad) = h_k.elements().iter().find(|&&u| !g.det_image().contains(u)) {
        return Err(Error::GaloisNotInDet { unit: bad });
    }
    let mut classes: Vec<ResidueMatrix> =
        g.with_det_in(h_k).into_iter().map(|m| m.pm_canonical()).collect();
    classes.sort_unstable();
    classes.dedup();
    Ok(UnitGaloisGroup {
        level: g.level(),
        parent_order: g.order(),
        h_k: h_k.clone(),
        modulus_pm1: classes,
    })
}

/// Nonzero element a = (k1/N, k2/N) of (N⁻¹Z/Z)².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UnitLabel {
    level: u32,
    k1: u32,
    k2: u32,
}

impl UnitLabel {
    pub fn new(level: u32, k1: u32, k2: u32) -> Result<Self> {
        Self::from_i64(level, i64::from(k1), i64::from(k2))
    }

    pub fn from_i64(level: u32, k1: i64, k2: i64) -> Result<Self> {
        check_level(level)?;
        let (k1, k2) = (reduce(k1, level), reduce(k2, level));
        if k1 == 0 && k2 == 0 {
            return input("the zero label is excluded");
        }
        Ok(UnitLabel { level, k1, k2 })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn k1(&self) -> u32 {
        self.k1
    }

    pub fn k2(&self) -> u32 {
        self.k2
    }

    pub fn negate(&self) -> Self {
        let n = self.level;
        let neg = |x: u32| if x == 0 { 0 } else { n - x };
        UnitLabel { level: n, k1: neg(self.k1), k2: neg(self.k2) }
    }

    /// Canonical representative of {a, −a}; u_a = u_{−a}.
    pub fn pm_canonical(&self) -> Self {
        (*self).min(self.negate())
    }

    /// Exact order of the label in (N⁻¹Z/Z)².
    pub fn order(&self) -> u32 {
        let n = i64::from(self.level);
        let g = gcd_i64(gcd_i64(i64::from(self.k1), i64::from(self.k2)), n);
        (n / g) as u32
    }

    /// Order of the second coordinate k2/N in Q/Z.
    pub fn second_order(&self) -> u32 {
        let n = i64::from(self.level);
        (n / gcd_i64(i64::from(self.k2), n)) as u32
    }

    /// Right action by a matrix, without a level check.
    pub(crate) fn act(&self, g: &ResidueMatrix) -> Self {
        let n = u64::from(self.level);
        let [a, b, c, d] = g.m.map(u64::from);
        let (x, y) = (u64::from(self.k1), u64::from(self.k2));
        UnitLabel { level: self.level, k1: ((x * a + y * c) % n) as u32, k2: ((x * b + y * d) % n) as u32 }
    }
}

impl fmt::Display for UnitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}/{}, {}/{})", self.k1, self.level, self.k2, self.level)
    }
}

/// All ± classes of nonzero labels of level N, canonical representatives sorted.
pub fn label_classes(level: u32) -> Result<Vec<UnitLabel>> {
    check_level(level)?;
    let mut out = Vec::new();
    for k1 in 0..level {
        for k2 in 0..level {
            if let Ok(a) = UnitLabel::new(level, k1, k2) {
                if a.pm_canonical() == a {
                    out.push(a);
                }
            }
        }
    }
    Ok(out)
}

/// Row-vector right action `(k1, k2) ↦ (k1·g11 + k2·g21, k1·g12 + k2·g22)`.
pub fn act_label(a: &UnitLabel, g: &ResidueMatrix) -> Result<UnitLabel> {
    if a.level() != g.level() {
        return Err(Error::LevelMismatch { expected: a.level(), found: g.level() });
    }
    Ok(a.act(g))
}

/// The multiset {a·σ : σ ∈ G′}, one entry per element of G′.
pub fn label_orbit(a: &UnitLabel, gp: &UnitGaloisGroup) -> Vec<UnitLabel> {
    gp.elements().iter().map(|s| a.act(s).pm_canonical()).collect()
}
