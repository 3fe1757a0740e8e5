//! Sparse elimination over a prime field GF(p).
//!
//! Entries are residues in 0..p. Kernel bases are canonical reduced column
//! echelon forms, so equal subspaces produce identical bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::matrix::SparseMatrix;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    // Deterministic Miller-Rabin for 64-bit integers with the witness set
    // {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod p");
    pow_mod(a % p, p - 2, p)
}

type Col = Vec<(usize, u64)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    p: u64,
    nrows: usize,
    ncols: usize,
    cols: Vec<Col>,
}

impl ModMatrix {
    pub fn from_bigint(m: &SparseMatrix, p: u64) -> Self {
        assert!(is_prime(p), "modulus must be prime");
        let big_p = BigInt::from(p);
        let cols = (0..m.ncols())
            .map(|j| {
                m.col(j)
                    .iter()
                    .filter_map(|(r, v)| {
                        let res = v.mod_floor(&big_p).to_u64().unwrap();
                        (res != 0).then_some((*r, res))
                    })
                    .collect()
            })
            .collect();
        ModMatrix {
            p,
            nrows: m.nrows(),
            ncols: m.ncols(),
            cols,
        }
    }

    pub fn to_bigint(&self) -> SparseMatrix {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, BigInt::from(*v))).collect())
            .collect();
        SparseMatrix::from_columns(self.nrows, cols)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn col(&self, j: usize) -> &[(usize, u64)] {
        &self.cols[j]
    }

    fn from_cols(p: u64, nrows: usize, cols: Vec<Col>) -> Self {
        ModMatrix {
            p,
            nrows,
            ncols: cols.len(),
            cols,
        }
    }
}

fn col_axpy(p: u64, target: &Col, source: &Col, q: u64) -> Col {
    let mut out = Col::new();
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let ra = target.get(i).map(|(r, _)| *r);
        let rb = source.get(j).map(|(r, _)| *r);
        let (row, value) = match (ra, rb) {
            (Some(ra), Some(rb)) if ra == rb => {
                let v = (target[i].1 + mul_mod(q, source[j].1, p)) % p;
                i += 1;
                j += 1;
                (ra, v)
            }
            (Some(ra), rb) if rb.is_none_or(|rb| ra < rb) => {
                let v = target[i].1;
                i += 1;
                (ra, v)
            }
            _ => {
                let v = mul_mod(q, source[j].1, p);
                j += 1;
                (rb.unwrap(), v)
            }
        };
        if value != 0 {
            out.push((row, value));
        }
    }
    out
}

fn col_scale(p: u64, col: &mut Col, c: u64) {
    for (_, v) in col.iter_mut() {
        *v = mul_mod(*v, c, p);
    }
}

struct EchelonMod {
    cols: Vec<Col>,
    v_cols: Vec<Col>,
    pivots: Vec<usize>,
}

/// Column echelon with unit pivots; pivot columns come first in pivot row
/// order, followed by zero columns.
fn echelonize(m: &ModMatrix, track: bool) -> EchelonMod {
    let p = m.p;
    let mut cols = m.cols.clone();
    let mut v_cols: Vec<Col> = if track {
        (0..m.ncols).map(|j| vec![(j, 1u64)]).collect()
    } else {
        Vec::new()
    };
    let mut remaining: Vec<usize> = (0..m.ncols).collect();
    let mut pivot_order = Vec::new();
    let mut pivots = Vec::new();

    for r in 0..m.nrows {
        let holders: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&j| cols[j].first().is_some_and(|(row, _)| *row == r))
            .collect();
        if holders.is_empty() {
            continue;
        }
        let acc = holders[0];
        let scale = inv_mod(cols[acc][0].1, p);
        col_scale(p, &mut cols[acc], scale);
        if track {
            col_scale(p, &mut v_cols[acc], scale);
        }
        for &j in &holders[1..] {
            let q = p - cols[j][0].1;
            cols[j] = col_axpy(p, &cols[j], &cols[acc], q);
            if track {
                v_cols[j] = col_axpy(p, &v_cols[j], &v_cols[acc], q);
            }
        }
        remaining.retain(|&j| j != acc);
        pivot_order.push(acc);
        pivots.push(r);
    }

    let order: Vec<usize> = pivot_order.into_iter().chain(remaining).collect();
    EchelonMod {
        cols: order.iter().map(|&j| std::mem::take(&mut cols[j])).collect(),
        v_cols: if track {
            order.iter().map(|&j| std::mem::take(&mut v_cols[j])).collect()
        } else {
            Vec::new()
        },
        pivots,
    }
}

pub fn rank(m: &ModMatrix) -> usize {
    echelonize(m, false).pivots.len()
}

/// Canonical basis of the column span: unit pivots with their rows cleared
/// from every other basis column.
pub fn reduced_column_echelon(m: &ModMatrix) -> ModMatrix {
    let p = m.p;
    let ech = echelonize(m, false);
    let k = ech.pivots.len();
    let mut cols: Vec<Col> = ech.cols.into_iter().take(k).collect();
    for j in 0..k {
        let pivot_row = ech.pivots[j];
        for i in 0..k {
            if i == j {
                continue;
            }
            let e = cols[i]
                .iter()
                .find(|(r, _)| *r == pivot_row)
                .map(|(_, v)| *v)
                .unwrap_or(0);
            if e != 0 {
                cols[i] = col_axpy(p, &cols[i], &cols[j], p - e);
            }
        }
    }
    ModMatrix::from_cols(p, m.nrows, cols)
}

/// Canonical basis of the kernel of m over GF(p).
pub fn kernel_basis(m: &ModMatrix) -> ModMatrix {
    let ech = echelonize(m, true);
    let k = ech.pivots.len();
    let kernel_cols: Vec<Col> = ech.v_cols.into_iter().skip(k).collect();
    reduced_column_echelon(&ModMatrix::from_cols(m.p, m.ncols, kernel_cols))
}

/// Solves basis * x = rhs column by column; the basis columns must be in
/// echelon form. Returns None if a column lies outside the span.
pub fn solve_echelon(basis: &ModMatrix, rhs: &ModMatrix) -> Option<ModMatrix> {
    assert_eq!(basis.nrows, rhs.nrows, "solve shape mismatch");
    assert_eq!(basis.p, rhs.p, "solve modulus mismatch");
    let p = basis.p;
    let lead: Vec<usize> = (0..basis.ncols)
        .map(|j| {
            let col = basis.col(j);
            assert!(!col.is_empty(), "echelon basis has a zero column");
            col[0].0
        })
        .collect();
    for w in lead.windows(2) {
        assert!(w[0] < w[1], "basis columns are not in echelon order");
    }
    let mut out_cols: Vec<Col> = Vec::with_capacity(rhs.ncols);
    for j in 0..rhs.ncols {
        let mut t: std::collections::BTreeMap<usize, u64> =
            rhs.col(j).iter().copied().collect();
        let mut coeffs: Col = Vec::new();
        for (bj, &r) in lead.iter().enumerate() {
            let front = match t.keys().next() {
                Some(&front) => front,
                None => break,
            };
            if front < r {
                return None;
            }
            if front > r {
                continue;
            }
            let value = t.remove(&r).unwrap();
            let q = mul_mod(value, inv_mod(basis.col(bj)[0].1, p), p);
            for (row, v) in basis.col(bj).iter().skip(1) {
                let entry = t.entry(*row).or_insert(0);
                *entry = (*entry + p - mul_mod(q, *v, p)) % p;
                if *entry == 0 {
                    t.remove(row);
                }
            }
            if q != 0 {
                coeffs.push((bj, q));
            }
            if t.is_empty() {
                break;
            }
        }
        if !t.is_empty() {
            return None;
        }
        out_cols.push(coeffs);
    }
    Some(ModMatrix::from_cols(p, basis.ncols, out_cols))
}

/// Solver over the column span of an arbitrary matrix mod p.
pub struct ColumnSpanMod {
    p: u64,
    ncols: usize,
    h_cols: Vec<Col>,
    v_cols: Vec<Col>,
    pivots: Vec<usize>,
}

impl ColumnSpanMod {
    pub fn new(m: &ModMatrix) -> Self {
        let ech = echelonize(m, true);
        ColumnSpanMod {
            p: m.p,
            ncols: m.ncols,
            h_cols: ech.cols,
            v_cols: ech.v_cols,
            pivots: ech.pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, rhs: &[(usize, u64)]) -> Option<Vec<u64>> {
        let p = self.p;
        let mut t: std::collections::BTreeMap<usize, u64> = rhs.iter().copied().collect();
        let mut y: Vec<u64> = vec![0; self.h_cols.len()];
        for (j, &r) in self.pivots.iter().enumerate() {
            let front = match t.keys().next() {
                Some(&front) => front,
                None => break,
            };
            if front < r {
                return None;
            }
            if front > r {
                continue;
            }
            let value = t.remove(&r).unwrap();
            let q = mul_mod(value, inv_mod(self.h_cols[j][0].1, p), p);
            for (row, v) in self.h_cols[j].iter().skip(1) {
                let entry = t.entry(*row).or_insert(0);
                *entry = (*entry + p - mul_mod(q, *v, p)) % p;
                if *entry == 0 {
                    t.remove(row);
                }
            }
            y[j] = q;
        }
        if !t.is_empty() {
            return None;
        }
        let mut x = vec![0u64; self.ncols];
        for (j, &coeff) in y.iter().enumerate() {
            if coeff == 0 {
                continue;
            }
            for (row, v) in &self.v_cols[j] {
                x[*row] = (x[*row] + mul_mod(coeff, *v, p)) % p;
            }
        }
        Some(x)
    }
}
