//! Sparse integer matrices.
//!
//! Columns are sorted lists of (row, coefficient) with no zero entries, so
//! structural equality is semantic equality. All arithmetic is exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(usize, BigInt)>>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            cols: (0..n).map(|i| vec![(i, BigInt::from(1))]).collect(),
        }
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, BigInt)],
    ) -> Self {
        let mut maps: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); ncols];
        for (r, c, v) in triplets {
            assert!(*r < nrows && *c < ncols, "triplet out of range");
            let entry = maps[*c].entry(*r).or_insert_with(BigInt::zero);
            *entry += v;
        }
        SparseMatrix {
            nrows,
            ncols,
            cols: maps.into_iter().map(normalize_map).collect(),
        }
    }

    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, BigInt)>>) -> Self {
        for col in &cols {
            for window in col.windows(2) {
                assert!(window[0].0 < window[1].0, "column rows must increase");
            }
            for (r, v) in col {
                assert!(*r < nrows && !v.is_zero(), "bad column entry");
            }
        }
        SparseMatrix {
            ncols: cols.len(),
            nrows,
            cols,
        }
    }

    pub fn from_dense(rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut triplets = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    triplets.push((r, c, BigInt::from(v)));
                }
            }
        }
        Self::from_triplets(nrows, ncols, &triplets)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn col(&self, j: usize) -> &[(usize, BigInt)] {
        &self.cols[j]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.cols[c].binary_search_by_key(&r, |(row, _)| *row) {
            Ok(i) => self.cols[c][i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn is_zero_mod(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.cols
            .iter()
            .all(|c| c.iter().all(|(_, v)| v.mod_floor(&p).is_zero()))
    }

    pub fn entry_count(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in mul");
        let cols = other
            .cols
            .iter()
            .map(|bcol| {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (t, coeff) in bcol {
                    for (r, v) in &self.cols[*t] {
                        let entry = acc.entry(*r).or_insert_with(BigInt::zero);
                        *entry += coeff * v;
                    }
                }
                normalize_map(acc)
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            cols,
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.combine(other, true)
    }

    fn combine(&self, other: &SparseMatrix, negate: bool) -> SparseMatrix {
        assert_eq!(
            (self.nrows, self.ncols),
            (other.nrows, other.ncols),
            "shape mismatch in add/sub"
        );
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (r, v) in a {
                    acc.insert(*r, v.clone());
                }
                for (r, v) in b {
                    let entry = acc.entry(*r).or_insert_with(BigInt::zero);
                    if negate {
                        *entry -= v;
                    } else {
                        *entry += v;
                    }
                }
                normalize_map(acc)
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            cols,
        }
    }

    /// Rows listed in `rows` become rows 0..rows.len() of the result, in the
    /// given order; all other rows are dropped.
    pub fn select_rows(&self, rows: &[usize]) -> SparseMatrix {
        let position: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cols = self
            .cols
            .iter()
            .map(|col| {
                let mut out: Vec<(usize, BigInt)> = col
                    .iter()
                    .filter_map(|(r, v)| position.get(r).map(|&i| (i, v.clone())))
                    .collect();
                out.sort_by_key(|(r, _)| *r);
                out
            })
            .collect();
        SparseMatrix {
            nrows: rows.len(),
            ncols: self.ncols,
            cols,
        }
    }

    pub fn select_cols(&self, cols: &[usize]) -> SparseMatrix {
        SparseMatrix {
            nrows: self.nrows,
            ncols: cols.len(),
            cols: cols.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    pub fn hstack(parts: &[&SparseMatrix]) -> SparseMatrix {
        assert!(!parts.is_empty(), "hstack of nothing");
        let nrows = parts[0].nrows;
        let mut cols = Vec::new();
        for part in parts {
            assert_eq!(part.nrows, nrows, "hstack row mismatch");
            cols.extend(part.cols.iter().cloned());
        }
        SparseMatrix {
            nrows,
            ncols: cols.len(),
            cols,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut dense = vec![vec![BigInt::zero(); self.ncols]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                dense[*r][j] = v.clone();
            }
        }
        dense
    }

    /// Largest absolute entry, zero for an empty matrix.
    pub fn max_abs(&self) -> BigInt {
        let mut best = BigInt::zero();
        for col in &self.cols {
            for (_, v) in col {
                let a = v.abs();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }
}

fn normalize_map(map: BTreeMap<usize, BigInt>) -> Vec<(usize, BigInt)> {
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_accumulate_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            &[
                (0, 0, BigInt::from(1)),
                (0, 0, BigInt::from(-1)),
                (1, 1, BigInt::from(3)),
            ],
        );
        assert_eq!(m.get(0, 0), BigInt::zero());
        assert_eq!(m.get(1, 1), BigInt::from(3));
        assert_eq!(m.entry_count(), 1);
    }

    #[test]
    fn multiplication_matches_dense() {
        let a = SparseMatrix::from_dense(&[&[1, 2], &[3, 4]]);
        let b = SparseMatrix::from_dense(&[&[5, 6], &[7, 8]]);
        let ab = a.mul(&b);
        assert_eq!(ab, SparseMatrix::from_dense(&[&[19, 22], &[43, 50]]));
        let id = SparseMatrix::identity(2);
        assert_eq!(a.mul(&id), a);
        assert_eq!(id.mul(&a), a);
    }

    #[test]
    fn add_sub_and_zero_tests() {
        let a = SparseMatrix::from_dense(&[&[1, -2], &[0, 5]]);
        let b = SparseMatrix::from_dense(&[&[-1, 2], &[0, -5]]);
        assert!(a.add(&b).is_zero());
        assert_eq!(a.sub(&a), SparseMatrix::zero(2, 2));
        assert!(SparseMatrix::from_dense(&[&[4, 6]]).is_zero_mod(2));
        assert!(!SparseMatrix::from_dense(&[&[4, 7]]).is_zero_mod(2));
    }

    #[test]
    fn row_and_column_selection() {
        let m = SparseMatrix::from_dense(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let picked = m.select_rows(&[2, 0]);
        assert_eq!(picked, SparseMatrix::from_dense(&[&[7, 8, 9], &[1, 2, 3]]));
        let cols = m.select_cols(&[1]);
        assert_eq!(cols, SparseMatrix::from_dense(&[&[2], &[5], &[8]]));
        let stacked = SparseMatrix::hstack(&[&cols, &cols]);
        assert_eq!(stacked.ncols(), 2);
        assert_eq!(stacked.get(1, 1), BigInt::from(5));
    }
}
