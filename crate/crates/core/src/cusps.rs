//! Cusps of X(N) and X_G: geometric orbits, widths, scaling matrices and
//! Galois orbits over K.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::exactmath::{ext_gcd, gcd_i64};
use crate::gl2::{ResidueMatrix, Subgroup, UnitGroup};

/// Cusp of X(N): ± class of a primitive row vector (x, y) mod N.
///
/// The cusp M·∞ with M ∈ SL₂(Z) corresponds to the bottom row (0, 1)·M, so
/// c_∞ = (0, 1) and c_0 = (1, 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cusp {
    level: u32,
    x: u32,
    y: u32,
}

impl Cusp {
    /// Canonical ± representative: the lexicographically smaller of (x, y), (−x, −y).
    pub fn new(level: u32, x: i64, y: i64) -> Result<Self> {
        if level < 2 {
            return input(format!("level must be at least 2, got {level}"));
        }
        let n = i64::from(level);
        let (x, y) = (x.rem_euclid(n), y.rem_euclid(n));
        if gcd_i64(gcd_i64(x, y), n) != 1 {
            return input(format!("({x}, {y}) is not primitive mod {level}"));
        }
        Ok(Self::canonical(level, x as u32, y as u32))
    }

    fn canonical(level: u32, x: u32, y: u32) -> Self {
        let neg = |v: u32| if v == 0 { 0 } else { level - v };
        let (x, y) = (x, y).min((neg(x), neg(y)));
        Cusp { level, x, y }
    }

    pub fn infinity(level: u32) -> Self {
        Cusp { level, x: 0, y: 1 }
    }

    pub fn zero(level: u32) -> Self {
        Cusp { level, x: 1, y: 0 }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn vector(&self) -> (u32, u32) {
        (self.x, self.y)
    }

    /// Right action v ↦ v·g on the ± class.
    pub fn act(&self, g: &ResidueMatrix) -> Self {
        let n = u64::from(self.level);
        let [a, b, c, d] = g.entries().map(u64::from);
        let (x, y) = (u64::from(self.x), u64::from(self.y));
        Self::canonical(self.level, ((x * a + y * c) % n) as u32, ((x * b + y * d) % n) as u32)
    }

    /// Galois action of σ on cusps: v ↦ det(σ)⁻¹·v·σ.
    pub fn galois_act(&self, g: &ResidueMatrix) -> Self {
        let n = self.level;
        let inv = crate::gl2::inverse_mod(g.det(), n).expect("det of a GL2 element is a unit");
        let moved = self.act(g);
        let s = |v: u32| (u64::from(v) * u64::from(inv) % u64::from(n)) as u32;
        Self::canonical(n, s(moved.x), s(moved.y))
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±({}, {}) mod {}", self.x, self.y, self.level)
    }
}

/// All cusps of X(N), sorted.
pub fn cusps_of_xn(level: u32) -> Result<Vec<Cusp>> {
    if level < 2 {
        return input(format!("level must be at least 2, got {level}"));
    }
    let n = i64::from(level);
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if let Ok(c) = Cusp::new(level, x, y) {
                if c.vector() == (x as u32, y as u32) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// Integer matrix M ∈ SL₂(Z) with (0, 1)·M ≡ (x, y) mod N, as `[[a, b], [c, d]]`.
pub fn scaling_matrix(c: &Cusp) -> [[i64; 2]; 2] {
    let n = i64::from(c.level);
    let (x, y) = (i64::from(c.x), i64::from(c.y));
    let (bx, by) = if gcd_i64(x, y) == 1 {
        (x, y)
    } else if y != 0 {
        let t = (1..).find(|t| gcd_i64(x + t * n, y) == 1).expect("a coprime lift exists");
        (x + t * n, y)
    } else {
        (x, n)
    };
    let (_, s, t) = ext_gcd(by, bx);
    // s·by + t·bx = 1, so [[s, −t], [bx, by]] has determinant 1.
    let m = [[s, -t], [bx, by]];
    debug_assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
    m
}

fn residue_of(m: [[i64; 2]; 2], level: u32) -> ResidueMatrix {
    ResidueMatrix::new(level, [m[0][0], m[0][1], m[1][0], m[1][1]]).expect("SL2(Z) reduces into GL2")
}

/// Reduction of [`scaling_matrix`] mod N.
pub fn scaling_residue(c: &Cusp) -> ResidueMatrix {
    residue_of(scaling_matrix(c), c.level)
}

/// Width of the cusp of X_G below `c`: least e ≥ 1 with M_c⁻¹ Uᵉ M_c ∈ G.
pub fn cusp_width(g: &Subgroup, c: &Cusp) -> Result<u32> {
    if g.level() != c.level() {
        return Err(Error::LevelMismatch { expected: g.level(), found: c.level() });
    }
    let m = scaling_residue(c);
    let mi = m.inverse();
    let n = i64::from(g.level());
    for e in 1..=n {
        let u = ResidueMatrix::new(g.level(), [1, e, 0, 1])?;
        if g.contains(&mi.mul(&u).mul(&m)) {
            return Ok(e as u32);
        }
    }
    Err(Error::Invariant(format!("no width found for {c}: U^N must lie in every G")))
}

/// Cusp structure of X_G: geometric cusps (orbits of G ∩ SL₂ on the cusps of
/// X(N)), their widths, and the Galois orbits over K.
#[derive(Clone, Debug)]
pub struct CuspLayout {
    level: u32,
    xn_cusps: Vec<Cusp>,
    xn_index: HashMap<Cusp, usize>,
    fibers: Vec<Vec<usize>>,
    geometric_of: Vec<usize>,
    widths: Vec<u32>,
    galois: Vec<Vec<usize>>,
    galois_of: Vec<usize>,
}

impl CuspLayout {
    pub fn new(g: &Subgroup, h_k: &UnitGroup) -> Result<Self> {
        let level = g.level();
        if h_k.level() != level {
            return Err(Error::LevelMismatch { expected: level, found: h_k.level() });
        }
        if let Some(&bad) = h_k.elements().iter().find(|&&u| !g.det_image().contains(u)) {
            return Err(Error::GaloisNotInDet { unit: bad });
        }
        let xn_cusps = cusps_of_xn(level)?;
        let xn_index: HashMap<Cusp, usize> = xn_cusps.iter().enumerate().map(|(i, c)| (*c, i)).collect();

        // xn_cusps is sorted, so the first member met is each orbit's minimum.
        let mut geometric_of = vec![usize::MAX; xn_cusps.len()];
        let mut fibers: Vec<Vec<usize>> = Vec::new();
        for (i, c) in xn_cusps.iter().enumerate() {
            if geometric_of[i] != usize::MAX {
                continue;
            }
            let idx = fibers.len();
            let mut fiber = Vec::new();
            for s in g.sl2_part() {
                let j = xn_index[&c.act(s)];
                if geometric_of[j] == usize::MAX {
                    geometric_of[j] = idx;
                    fiber.push(j);
                }
            }
            fiber.sort_unstable();
            fibers.push(fiber);
        }

        let mut widths = Vec::with_capacity(fibers.len());
        for fiber in &fibers {
            let c = &xn_cusps[fiber[0]];
            let e = cusp_width(g, c)?;
            // Orbit–stabiliser cross-check: e = N·|fiber|·|±I| / |G ∩ SL₂|.
            let num = u64::from(level) * fiber.len() as u64 * g.pm_size() as u64;
            if num != u64::from(e) * g.sl2_part().len() as u64 {
                return Err(Error::Invariant(format!(
                    "width {e} of {c} disagrees with orbit count {} (|G∩SL2| = {})",
                    fiber.len(),
                    g.sl2_part().len()
                )));
            }
            widths.push(e);
        }

        let g_k = g.with_det_in(h_k);
        let mut galois_of = vec![usize::MAX; fibers.len()];
        let mut galois: Vec<Vec<usize>> = Vec::new();
        for (gi, fiber) in fibers.iter().enumerate() {
            if galois_of[gi] != usize::MAX {
                continue;
            }
            let idx = galois.len();
            let rep = xn_cusps[fiber[0]];
            let mut orbit = Vec::new();
            for s in &g_k {
                let k = geometric_of[xn_index[&rep.galois_act(s)]];
                if galois_of[k] == usize::MAX {
                    galois_of[k] = idx;
                    orbit.push(k);
                }
            }
            orbit.sort_unstable();
            galois.push(orbit);
        }

        Ok(CuspLayout { level, xn_cusps, xn_index, fibers, geometric_of, widths, galois, galois_of })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn xn_cusps(&self) -> &[Cusp] {
        &self.xn_cusps
    }

    pub fn num_geometric(&self) -> usize {
        self.fibers.len()
    }

    /// Representative of geometric cusp `i`: the smallest cusp of X(N) above it.
    pub fn representative(&self, i: usize) -> Cusp {
        self.xn_cusps[self.fibers[i][0]]
    }

    pub fn representatives(&self) -> Vec<Cusp> {
        (0..self.num_geometric()).map(|i| self.representative(i)).collect()
    }

    /// Cusps of X(N) lying above geometric cusp `i`.
    pub fn fiber(&self, i: usize) -> impl Iterator<Item = Cusp> + '_ {
        self.fibers[i].iter().map(|&j| self.xn_cusps[j])
    }

    pub fn width(&self, i: usize) -> u32 {
        self.widths[i]
    }

    pub fn widths(&self) -> &[u32] {
        &self.widths
    }

    /// Index of the geometric cusp below a cusp of X(N).
    pub fn geometric_index(&self, c: &Cusp) -> Option<usize> {
        self.xn_index.get(c).map(|&j| self.geometric_of[j])
    }

    /// Galois orbits over K, as sorted lists of geometric-cusp indices.
    pub fn galois_orbits(&self) -> &[Vec<usize>] {
        &self.galois
    }

    pub fn galois_orbit_of(&self, i: usize) -> usize {
        self.galois_of[i]
    }
}

/// Representatives of the geometric cusps of X_G.
pub fn geometric_cusps(g: &Subgroup) -> Result<Vec<Cusp>> {
    let layout = CuspLayout::new(g, &UnitGroup::trivial(g.level())?)?;
    Ok(layout.representatives())
}

/// Galois orbits of the geometric cusps over K, by geometric-cusp index.
pub fn galois_orbits(g: &Subgroup, h_k: &UnitGroup) -> Result<Vec<Vec<usize>>> {
    Ok(CuspLayout::new(g, h_k)?.galois.clone())
}

/// Outcome of the Runge condition test |C(G, K)| > s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RungeCondition {
    pub holds: bool,
    pub orbit_count: usize,
    pub s: usize,
    pub orbit_sizes: Vec<usize>,
}

pub fn runge_condition(g: &Subgroup, h_k: &UnitGroup, s: usize) -> Result<RungeCondition> {
    let layout = CuspLayout::new(g, h_k)?;
    let orbit_sizes: Vec<usize> = layout.galois_orbits().iter().map(Vec::len).collect();
    Ok(RungeCondition { holds: orbit_sizes.len() > s, orbit_count: orbit_sizes.len(), s, orbit_sizes })
}
