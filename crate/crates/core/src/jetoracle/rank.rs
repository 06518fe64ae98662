//! Rank of sparse matrices over `F_p`.
//!
//! Matrices are given column by column, each column a list of `(row, value)`
//! pairs sorted by row with values in `1..p`.

use std::collections::HashMap;

pub type SparseColumn = Vec<(usize, u64)>;

/// Below this many columns (and a bounded number of entries) elimination runs
/// on a dense copy.
pub const DENSE_MAX_COLUMNS: usize = 512;
const DENSE_MAX_ENTRIES: usize = 1 << 22;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Incremental column elimination with pivots keyed by their leading row.
#[derive(Debug)]
pub struct SparseEliminator {
    p: u64,
    pivots: HashMap<usize, SparseColumn>,
}

impl SparseEliminator {
    pub fn new(p: u64) -> Self {
        SparseEliminator {
            p,
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `col` against the current pivots; returns whether it raised the rank.
    pub fn push(&mut self, mut col: SparseColumn) -> bool {
        let p = self.p;
        loop {
            let Some(&(lead, val)) = col.first() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(pivot) => {
                    // col -= val * pivot, pivot has leading coefficient 1
                    col = axpy(&col, pivot, p - val, p);
                }
                None => {
                    let inv = inv_mod(val, p);
                    for (_, v) in col.iter_mut() {
                        *v = mul_mod(*v, inv, p);
                    }
                    self.pivots.insert(lead, col);
                    return true;
                }
            }
        }
    }
}

/// `x + s·y` over `F_p`, both sorted by row.
fn axpy(x: &[(usize, u64)], y: &[(usize, u64)], s: u64, p: u64) -> SparseColumn {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            out.push((y[j].0, mul_mod(y[j].1, s, p)));
            j += 1;
        } else {
            let v = (x[i].1 + mul_mod(y[j].1, s, p)) % p;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Gaussian elimination on a dense row-major copy.
pub fn rank_dense(rows: usize, columns: &[SparseColumn], p: u64) -> usize {
    let cols = columns.len();
    let mut a = vec![0u64; rows * cols];
    for (c, col) in columns.iter().enumerate() {
        for &(r, v) in col {
            a[r * cols + c] = v % p;
        }
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for k in 0..cols {
                a.swap(piv * cols + k, rank * cols + k);
            }
        }
        let inv = inv_mod(a[rank * cols + c], p);
        for k in c..cols {
            a[rank * cols + k] = mul_mod(a[rank * cols + k], inv, p);
        }
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let f = a[r * cols + c];
            if f == 0 {
                continue;
            }
            for k in c..cols {
                let sub = mul_mod(f, a[rank * cols + k], p);
                a[r * cols + k] = (a[r * cols + k] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn rank_sparse(columns: &[SparseColumn], p: u64) -> usize {
    let mut elim = SparseEliminator::new(p);
    for col in columns {
        elim.push(col.clone());
    }
    elim.rank()
}

/// Rank over `F_p`, dense for small inputs and sparse otherwise.
pub fn rank_mod_p(rows: usize, columns: &[SparseColumn], p: u64) -> usize {
    if columns.len() < DENSE_MAX_COLUMNS && rows.saturating_mul(columns.len()) <= DENSE_MAX_ENTRIES {
        rank_dense(rows, columns, p)
    } else {
        rank_sparse(columns, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cols_from_dense(rows: usize, dense: &[Vec<u64>], p: u64) -> Vec<SparseColumn> {
        let ncols = dense.first().map_or(0, Vec::len);
        (0..ncols)
            .map(|c| (0..rows).filter(|&r| !dense[r][c].is_multiple_of(p)).map(|r| (r, dense[r][c] % p)).collect())
            .collect()
    }

    #[test]
    fn inverse() {
        for p in [2u64, 3, 5, 7, 101] {
            for a in 1..p {
                assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
            }
        }
    }

    #[test]
    fn characteristic_matters() {
        // [[1,1],[1,1]] has rank 1; [[1,1],[1,-1]] has rank 1 mod 2 and 2 mod 3.
        let m = vec![vec![1, 1], vec![1, 1]];
        assert_eq!(rank_sparse(&cols_from_dense(2, &m, 3), 3), 1);
        let m = vec![vec![1, 1], vec![1, 2]];
        assert_eq!(rank_sparse(&cols_from_dense(2, &m, 3), 3), 2);
        let m = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(rank_dense(3, &cols_from_dense(3, &m, 2), 2), 2);
        assert_eq!(rank_dense(3, &cols_from_dense(3, &m, 3), 3), 3);
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(rank_mod_p(0, &[], 2), 0);
        assert_eq!(rank_mod_p(3, &[vec![], vec![]], 5), 0);
    }

    proptest! {
        #[test]
        fn dense_and_sparse_agree(
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            rows in 1usize..9,
            cols in 1usize..9,
            seed in prop::collection::vec(0u64..7, 81),
        ) {
            let dense: Vec<Vec<u64>> = (0..rows).map(|r| (0..cols).map(|c| seed[r * 9 + c]).collect()).collect();
            let columns = cols_from_dense(rows, &dense, p);
            let a = rank_dense(rows, &columns, p);
            let b = rank_sparse(&columns, p);
            prop_assert_eq!(a, b);
            prop_assert!(a <= rows.min(cols));
            // column order does not matter
            let mut rev = columns.clone();
            rev.reverse();
            prop_assert_eq!(rank_sparse(&rev, p), b);
        }
    }
}
