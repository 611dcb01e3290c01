//! Exact rational arithmetic, the Bernoulli values behind cusp orders, and
//! fraction-free integer linear algebra.
//!
//! Nothing in here touches floating point. Determinants and ranks are
//! computed by Bareiss elimination over `BigInt`, so every intermediate value
//! is an exact integer.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{input, Error, Result};
use crate::gl2::UnitLabel;

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `B₂(x) = x² − x + 1/6` for `x` in `[0, 1)`.
pub fn bernoulli2(x: &Rational) -> Result<Rational> {
    if x.is_negative() || *x >= Rational::one() {
        return input(format!("bernoulli2 expects 0 <= x < 1, got {x}"));
    }
    Ok(bernoulli2_poly(x))
}

fn bernoulli2_poly(x: &Rational) -> Rational {
    x * x - x + rational(1, 6)
}

/// `ℓ_a = B₂(ã₁)/2`, where `ã₁` is the first coordinate of the label lifted to `[0, 1)`.
///
/// Always lies in `[−1/24, 1/12]`.
pub fn ell(a: &UnitLabel) -> Rational {
    let x = rational(i64::from(a.k1()), i64::from(a.level()));
    bernoulli2_poly(&x) / BigInt::from(2)
}

/// Dense integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows * cols != entries.len() {
            return input(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            ));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Build from nested rows of machine integers. Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows.iter().flat_map(|row| row.iter().map(|&v| v.into())).collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Largest absolute value of any entry (0 for an empty matrix).
    pub fn max_abs(&self) -> BigInt {
        self.entries.iter().map(BigInt::abs).max().unwrap_or_default()
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let entries = rows.iter().flat_map(|&i| self.row(i).iter().cloned()).collect();
        IntMatrix { rows: rows.len(), cols: self.cols, entries }
    }

    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            entries.extend(cols.iter().map(|&j| self.get(i, j).clone()));
        }
        IntMatrix { rows: self.rows, cols: cols.len(), entries }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return input(format!("vector of length {} against {} columns", v.len(), self.cols));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn to_nested(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Integer exponent vector together with its ℓ₁ norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector {
    entries: Vec<BigInt>,
    l1_norm: BigInt,
}

impl ExponentVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        let l1_norm = entries.iter().map(BigInt::abs).sum();
        ExponentVector { entries, l1_norm }
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn l1_norm(&self) -> &BigInt {
        &self.l1_norm
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn bareiss_det(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return input(format!("determinant of a non-square {}x{} matrix", m.rows, m.cols));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_nested();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Sylvester's identity makes this division exact.
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Rank over the rationals, computed by fraction-free row reduction.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a = m.to_nested();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// `s^(s+2) · A^(2(s−1))`, the square of the ℓ₁ budget `s^(s/2+1) · A^(s−1)`.
///
/// Working with the square keeps the comparison exact when `s` is odd.
pub fn l1_budget_squared(s: usize, a: &BigInt) -> BigInt {
    let s_big = BigInt::from(s);
    num_traits::pow(s_big, s + 2) * num_traits::pow(a.clone(), 2 * s.saturating_sub(1))
}

/// Whether `norm ≤ s^(s/2+1) · A^(s−1)`, decided exactly.
pub fn within_l1_budget(norm: &BigInt, s: usize, a: &BigInt) -> bool {
    !norm.is_negative() && norm * norm <= l1_budget_squared(s, a)
}

/// Columns `0..t` picked greedily so that the selection stays independent.
///
/// Independence is a matroid property, so the greedy pass returns the
/// lexicographically first set of `rank` columns with a nonzero minor.
fn first_independent_columns(m: &IntMatrix, want: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(want);
    for j in 0..m.cols {
        if chosen.len() == want {
            break;
        }
        chosen.push(j);
        if rank(&m.select_cols(&chosen)) < chosen.len() {
            chosen.pop();
        }
    }
    chosen
}

/// Integer vector `b` with every coordinate of `M·b` strictly positive and
/// `‖b‖₁ ≤ s^(s/2+1)·A^(s−1)`, where `M` is `s×t` of rank `s` and `A` bounds
/// its entries.
///
/// Cramer construction: pick the first nonsingular `s×s` minor, replace each
/// of its columns in turn by the all-ones column and take determinants. The
/// result solves `M'·b = d·(1,…,1)`; multiplying by `sign(d)` makes the right
/// side `|d|`. Columns outside the minor get exponent 0.
pub fn positive_combination(m: &IntMatrix) -> Result<ExponentVector> {
    let s = m.rows;
    let r = rank(m);
    if r < s {
        return Err(Error::RankDeficient { expected: s, found: r });
    }
    let cols = first_independent_columns(m, s);
    let minor = m.select_cols(&cols);
    let d = bareiss_det(&minor)?;
    debug_assert!(!d.is_zero());
    let sign = if d.is_negative() { -BigInt::one() } else { BigInt::one() };

    let mut b = vec![BigInt::zero(); m.cols];
    for (k, &col) in cols.iter().enumerate() {
        let mut replaced = minor.clone();
        for i in 0..s {
            replaced.set(i, k, BigInt::one());
        }
        b[col] = bareiss_det(&replaced)? * &sign;
    }
    Ok(ExponentVector::new(b))
}

/// Greatest common divisor on machine integers (non-negative result).
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Extended Euclid: returns `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}
