//! Exact linear algebra over the character lattice `M ≅ Z^n` and its dual.
//!
//! Everything is arbitrary precision. Rationals are [`BigRational`], which
//! keeps every value in lowest terms with a positive denominator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// An integer vector in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// A vector is primitive when the gcd of its coordinates is 1.
    pub fn is_primitive(&self) -> bool {
        let g = self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        g.is_one()
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|c| c.to_string()))
    }
}

/// A point of `M_R` with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector::from_i64(coords).to_rational()
    }

    pub fn zero(n: usize) -> Self {
        RationalVector(vec![BigRational::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn dot(&self, other: &RationalVector) -> BigRational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_lattice(&self, other: &LatticeVector) -> BigRational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .sum()
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &BigRational) -> RationalVector {
        RationalVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticeVector> {
        if self.is_integral() {
            Some(LatticeVector(self.0.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for RationalVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(crate::arith::fmt_ratio))
    }
}

/// Square integer matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareIntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl SquareIntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Shape("matrix must be at least 1x1".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Shape(format!(
                "row {bad} has length {} in a {n}x{n} matrix",
                rows[bad].len()
            )));
        }
        Ok(SquareIntMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose rows are the given lattice vectors.
    pub fn from_row_vectors(rows: &[&LatticeVector]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|v| v.0.clone()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        SquareIntMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> SquareIntMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                entries.push(self.get(i, j).clone());
            }
        }
        SquareIntMatrix { n, entries }
    }

    pub fn mul(&self, other: &SquareIntMatrix) -> Result<SquareIntMatrix> {
        if self.n != other.n {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.n, self.n, other.n, other.n)));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push((0..n).map(|k| self.get(i, k) * other.get(k, j)).sum());
            }
        }
        Ok(SquareIntMatrix { n, entries })
    }

    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector(
            (0..self.n)
                .map(|i| self.row(i).iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn mul_rational(&self, v: &RationalVector) -> RationalVector {
        RationalVector(
            (0..self.n)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(&v.0)
                        .map(|(a, b)| b * BigRational::from_integer(a.clone()))
                        .sum()
                })
                .collect(),
        )
    }

    pub fn is_unimodular(&self) -> bool {
        det(self).abs().is_one()
    }

    /// Entries as machine integers, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &SquareIntMatrix) -> BigInt {
    let n = m.n;
    let mut a: Vec<Vec<BigInt>> = m.rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Bareiss: the division is exact.
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Solves `m·x = rhs` exactly.
pub fn solve_exact(m: &SquareIntMatrix, rhs: &RationalVector) -> Result<RationalVector> {
    let n = m.n;
    if rhs.dim() != n {
        return Err(Error::Shape(format!("rhs of length {} for a {n}x{n} system", rhs.dim())));
    }
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = m
                .row(i)
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect();
            row.push(rhs.0[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or(Error::SingularMatrix)?;
        aug.swap(col, piv);
        let inv = aug[col][col].recip();
        for v in aug[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=n {
                    let d = &f * &aug[col][c];
                    aug[r][c] -= d;
                }
            }
        }
    }
    Ok(RationalVector(aug.into_iter().map(|mut r| r.pop().unwrap()).collect()))
}

/// Integer inverse of a unimodular matrix.
pub fn invert_unimodular(m: &SquareIntMatrix) -> Result<SquareIntMatrix> {
    let d = det(m);
    if !d.abs().is_one() {
        return Err(Error::NotUnimodular { det: d });
    }
    let n = m.n;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = RationalVector::zero(n);
        e.0[j] = BigRational::one();
        cols.push(solve_exact(m, &e)?);
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for col in &cols {
            // |det| = 1 makes the inverse integral.
            entries.push(col.0[i].to_integer());
        }
    }
    Ok(SquareIntMatrix { n, entries })
}

/// Rank over `Q` of an arbitrary integer matrix given by rows.
pub fn rank_rational(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..a.len() {
            if a[r][col].is_zero() {
                continue;
            }
            let g = a[rank][col].gcd(&a[r][col]);
            let fr = &a[r][col] / &g;
            let fp = &a[rank][col] / &g;
            for c in col..ncols {
                let v = &a[r][c] * &fp - &a[rank][c] * &fr;
                a[r][c] = v;
            }
            let content = a[r][col..].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if content > BigInt::one() {
                for x in a[r][col..].iter_mut() {
                    *x = &*x / &content;
                }
            }
        }
        rank += 1;
    }
    rank
}
