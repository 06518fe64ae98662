use std::collections::HashMap;

use serde::Serialize;

use crate::arith::small_pow;
use crate::error::{Error, Result};

/// Which quotient of the local ring at a fixed point the sections are
/// restricted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientKind {
    /// `O/m^{[p^e]}`: monomials with every exponent `<= p^e - 1`.
    Frobenius { e: u32 },
    /// `O/m^{ℓ+1}`: monomials of total degree `<= ℓ`.
    Classical { ell: u64 },
    /// `O/(m^2)^{[p^e]}`: monomials outside the ideal generated by
    /// `(y_i y_j)^{p^e}`, i.e. at most one exponent `>= p^e`, and that one
    /// `<= 2p^e - 1`.
    FrobeniusSquare { e: u32 },
}

impl QuotientKind {
    /// The numeric parameter (`e` or `ℓ`).
    pub fn order(&self) -> u64 {
        match *self {
            QuotientKind::Frobenius { e } | QuotientKind::FrobeniusSquare { e } => e as u64,
            QuotientKind::Classical { ell } => ell,
        }
    }
}

#[derive(Clone, Debug)]
enum Index {
    /// Box `[0, side)^n`, indexed in mixed radix (first coordinate most significant).
    Box { side: i64 },
    Map(HashMap<Vec<i64>, usize>),
}

/// Monomial basis of a local quotient, in lexicographic order.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    pub kind: QuotientKind,
    pub p: u64,
    pub dim: usize,
    len: usize,
    index: Index,
}

impl QuotientBasis {
    /// `cap` bounds the number of basis monomials.
    pub fn new(kind: QuotientKind, p: u64, dim: usize, cap: usize) -> Result<Self> {
        let too_big = |size: u128| Error::SizeLimit { size, cap };
        match kind {
            QuotientKind::Frobenius { e } => {
                let side = small_pow(p, e).ok_or(too_big(u128::MAX))?;
                let len = (side as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
                if len > cap as u128 {
                    return Err(too_big(len));
                }
                Ok(QuotientBasis {
                    kind,
                    p,
                    dim,
                    len: len as usize,
                    index: Index::Box { side },
                })
            }
            QuotientKind::Classical { ell } => {
                let ell = i64::try_from(ell).map_err(|_| too_big(u128::MAX))?;
                let len = binomial(ell as u128 + dim as u128, dim as u128);
                if len > cap as u128 {
                    return Err(too_big(len));
                }
                let list = lex_box(dim, ell + 1, |a| a.iter().sum::<i64>() <= ell);
                Ok(Self::from_list(kind, p, dim, list))
            }
            QuotientKind::FrobeniusSquare { e } => {
                let q = small_pow(p, e).ok_or(too_big(u128::MAX))?;
                let len = (q as u128)
                    .checked_pow(dim as u32)
                    .and_then(|b| b.checked_mul(dim as u128 + 1))
                    .unwrap_or(u128::MAX);
                if len > cap as u128 {
                    return Err(too_big(len));
                }
                let list = lex_box(dim, 2 * q, |a| a.iter().filter(|&&x| x >= q).count() <= 1);
                Ok(Self::from_list(kind, p, dim, list))
            }
        }
    }

    fn from_list(kind: QuotientKind, p: u64, dim: usize, list: Vec<Vec<i64>>) -> Self {
        let len = list.len();
        let map = list.into_iter().enumerate().map(|(i, a)| (a, i)).collect();
        QuotientBasis {
            kind,
            p,
            dim,
            len,
            index: Index::Map(map),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Row index of the monomial with exponent `a`, if it is a basis element.
    pub fn index_of(&self, a: &[i64]) -> Option<usize> {
        match &self.index {
            Index::Box { side } => {
                let mut idx = 0usize;
                for &x in a {
                    if x < 0 || x >= *side {
                        return None;
                    }
                    idx = idx * (*side as usize) + x as usize;
                }
                Some(idx)
            }
            Index::Map(map) => map.get(a).copied(),
        }
    }

    /// The exponents in row order.
    pub fn exponents(&self) -> Vec<Vec<i64>> {
        match &self.index {
            Index::Box { side } => lex_box(self.dim, *side, |_| true),
            Index::Map(map) => {
                let mut v: Vec<(usize, Vec<i64>)> = map.iter().map(|(a, &i)| (i, a.clone())).collect();
                v.sort_unstable();
                v.into_iter().map(|(_, a)| a).collect()
            }
        }
    }
}

/// Points of `[0, side)^dim` passing `keep`, in lexicographic order.
fn lex_box(dim: usize, side: i64, keep: impl Fn(&[i64]) -> bool) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if side <= 0 {
        return out;
    }
    let mut a = vec![0i64; dim];
    loop {
        if keep(&a) {
            out.push(a.clone());
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if a[i] + 1 < side {
                a[i] += 1;
                for x in a.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}
