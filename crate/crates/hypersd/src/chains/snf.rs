//! Integer normal forms: column echelon, Hermite reduction, kernels,
//! Smith diagonals, and exact solvers over the integers and rationals.
//!
//! Kernel bases are produced by unimodular column transforms, so they span
//! the full integer kernel lattice (saturated). Canonical Hermite reduction
//! makes equal lattices produce identical basis matrices.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseMatrix;

type Col = Vec<(usize, BigInt)>;

fn col_axpy(target: &Col, source: &Col, q: &BigInt) -> Col {
    col_combine(target, source, &BigInt::one(), q)
}

fn col_combine(a: &Col, b: &Col, ca: &BigInt, cb: &BigInt) -> Col {
    let mut out = Col::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map(|(r, _)| *r);
        let rb = b.get(j).map(|(r, _)| *r);
        let (row, value) = match (ra, rb) {
            (Some(ra), Some(rb)) if ra == rb => {
                let v = ca * &a[i].1 + cb * &b[j].1;
                i += 1;
                j += 1;
                (ra, v)
            }
            (Some(ra), rb) if rb.is_none_or(|rb| ra < rb) => {
                let v = ca * &a[i].1;
                i += 1;
                (ra, v)
            }
            _ => {
                let v = cb * &b[j].1;
                j += 1;
                (rb.unwrap(), v)
            }
        };
        if !value.is_zero() {
            out.push((row, value));
        }
    }
    out
}

fn col_scale(col: &mut Col, c: &BigInt) {
    for (_, v) in col.iter_mut() {
        *v *= c;
    }
}

struct Echelon {
    /// Transformed columns, pivot columns first in pivot row order.
    cols: Vec<Col>,
    /// Transform columns in the same order; empty when tracking is off.
    v_cols: Vec<Col>,
    /// Pivot row of each pivot column.
    pivots: Vec<usize>,
}

/// Unimodular column reduction: the returned columns are the input columns
/// times a unimodular matrix, with pivot columns first and strictly
/// increasing leading rows, followed by zero columns.
fn echelonize(m: &SparseMatrix, track: bool) -> Echelon {
    let mut cols: Vec<Col> = (0..m.ncols()).map(|j| m.col(j).to_vec()).collect();
    let mut v_cols: Vec<Col> = if track {
        (0..m.ncols()).map(|j| vec![(j, BigInt::one())]).collect()
    } else {
        Vec::new()
    };
    let mut remaining: Vec<usize> = (0..m.ncols()).collect();
    let mut pivot_order: Vec<usize> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();

    for r in 0..m.nrows() {
        // Every remaining column is zero above row r, so a hit is a leading
        // entry.
        let holders: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&j| cols[j].first().is_some_and(|(row, _)| *row == r))
            .collect();
        if holders.is_empty() {
            continue;
        }
        let acc = holders[0];
        for &j in &holders[1..] {
            let a = cols[acc][0].1.clone();
            let b = cols[j][0].1.clone();
            if (&b % &a).is_zero() {
                let q = -(&b / &a);
                cols[j] = col_axpy(&cols[j], &cols[acc], &q);
                if track {
                    v_cols[j] = col_axpy(&v_cols[j], &v_cols[acc], &q);
                }
            } else {
                let ext = a.extended_gcd(&b);
                let (g, x, y) = (ext.gcd, ext.x, ext.y);
                let (ma, mb) = (-(&b / &g), &a / &g);
                let new_acc = col_combine(&cols[acc], &cols[j], &x, &y);
                let new_j = col_combine(&cols[acc], &cols[j], &ma, &mb);
                cols[acc] = new_acc;
                cols[j] = new_j;
                if track {
                    let new_acc = col_combine(&v_cols[acc], &v_cols[j], &x, &y);
                    let new_j = col_combine(&v_cols[acc], &v_cols[j], &ma, &mb);
                    v_cols[acc] = new_acc;
                    v_cols[j] = new_j;
                }
            }
        }
        remaining.retain(|&j| j != acc);
        pivot_order.push(acc);
        pivots.push(r);
    }

    let order: Vec<usize> = pivot_order.into_iter().chain(remaining).collect();
    Echelon {
        cols: order.iter().map(|&j| std::mem::take(&mut cols[j])).collect(),
        v_cols: if track {
            order.iter().map(|&j| std::mem::take(&mut v_cols[j])).collect()
        } else {
            Vec::new()
        },
        pivots,
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    echelonize(m, false).pivots.len()
}

/// Canonical column Hermite form of the lattice spanned by the columns:
/// strictly increasing leading rows, positive pivots, and entries in a
/// pivot's row reduced into [0, pivot) in all earlier columns.
pub fn hnf_columns(m: &SparseMatrix) -> SparseMatrix {
    let ech = echelonize(m, false);
    let k = ech.pivots.len();
    let mut cols: Vec<Col> = ech.cols.into_iter().take(k).collect();
    for col in cols.iter_mut() {
        if col[0].1.is_negative() {
            col_scale(col, &BigInt::from(-1));
        }
    }
    for j in 0..k {
        let pivot_row = ech.pivots[j];
        let pivot = cols[j][0].1.clone();
        for i in 0..j {
            let e = cols[i]
                .iter()
                .find(|(r, _)| *r == pivot_row)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(BigInt::zero);
            let q = e.div_floor(&pivot);
            if !q.is_zero() {
                cols[i] = col_axpy(&cols[i], &cols[j], &-q);
            }
        }
    }
    SparseMatrix::from_columns(m.nrows(), cols)
}

/// Basis of the integer kernel lattice, in canonical Hermite form. The
/// transform is unimodular, so the basis is saturated: it also spans the
/// rational kernel.
pub fn kernel_basis(m: &SparseMatrix) -> SparseMatrix {
    let ech = echelonize(m, true);
    let k = ech.pivots.len();
    let kernel_cols: Vec<Col> = ech.v_cols.into_iter().skip(k).collect();
    hnf_columns(&SparseMatrix::from_columns(m.ncols(), kernel_cols))
}

/// Solves basis * x = rhs column by column over the integers. The basis
/// columns must be in echelon form (strictly increasing leading rows).
/// Returns None if any column of rhs lies outside the spanned lattice.
pub fn solve_echelon(basis: &SparseMatrix, rhs: &SparseMatrix) -> Option<SparseMatrix> {
    assert_eq!(basis.nrows(), rhs.nrows(), "solve shape mismatch");
    let lead: Vec<usize> = (0..basis.ncols())
        .map(|j| {
            let col = basis.col(j);
            assert!(!col.is_empty(), "echelon basis has a zero column");
            col[0].0
        })
        .collect();
    for w in lead.windows(2) {
        assert!(w[0] < w[1], "basis columns are not in echelon order");
    }
    let mut out_cols: Vec<Col> = Vec::with_capacity(rhs.ncols());
    for j in 0..rhs.ncols() {
        let mut t: BTreeMap<usize, BigInt> = rhs.col(j).iter().cloned().collect();
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
            let (q, rem) = value.div_rem(&basis.col(bj)[0].1);
            if !rem.is_zero() {
                return None;
            }
            for (row, v) in basis.col(bj).iter().skip(1) {
                let entry = t.entry(*row).or_insert_with(BigInt::zero);
                *entry -= &q * v;
                if entry.is_zero() {
                    t.remove(row);
                }
            }
            coeffs.push((bj, q));
            if t.is_empty() {
                break;
            }
        }
        if !t.is_empty() {
            return None;
        }
        coeffs.retain(|(_, v)| !v.is_zero());
        out_cols.push(coeffs);
    }
    Some(SparseMatrix::from_columns(basis.ncols(), out_cols))
}

/// Rational solver over the column span of an arbitrary integer matrix.
pub struct ColumnSpan {
    ncols: usize,
    h_cols: Vec<Col>,
    v_cols: Vec<Col>,
    pivots: Vec<usize>,
}

impl ColumnSpan {
    pub fn new(m: &SparseMatrix) -> Self {
        let ech = echelonize(m, true);
        ColumnSpan {
            ncols: m.ncols(),
            h_cols: ech.cols,
            v_cols: ech.v_cols,
            pivots: ech.pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solves m * x = rhs over the rationals; None if rhs is outside the
    /// column span.
    pub fn solve_rational(&self, rhs: &[(usize, BigInt)]) -> Option<Vec<BigRational>> {
        let mut t: BTreeMap<usize, BigRational> = rhs
            .iter()
            .map(|(r, v)| (*r, BigRational::from_integer(v.clone())))
            .collect();
        let mut y: Vec<BigRational> = vec![BigRational::zero(); self.h_cols.len()];
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
            let pivot = BigRational::from_integer(self.h_cols[j][0].1.clone());
            let q = value / pivot;
            for (row, v) in self.h_cols[j].iter().skip(1) {
                let entry = t.entry(*row).or_insert_with(BigRational::zero);
                *entry -= &q * BigRational::from_integer(v.clone());
                if entry.is_zero() {
                    t.remove(row);
                }
            }
            y[j] = q;
        }
        if !t.is_empty() {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.ncols];
        for (j, coeff) in y.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (row, v) in &self.v_cols[j] {
                x[*row] += coeff * BigRational::from_integer(v.clone());
            }
        }
        Some(x)
    }
}

struct Workspace {
    cols: Vec<HashMap<usize, BigInt>>,
    rows: Vec<HashSet<usize>>,
}

impl Workspace {
    fn from_matrix(m: &SparseMatrix) -> Self {
        let mut ws = Workspace {
            cols: vec![HashMap::new(); m.ncols()],
            rows: vec![HashSet::new(); m.nrows()],
        };
        for j in 0..m.ncols() {
            for (r, v) in m.col(j) {
                ws.cols[j].insert(*r, v.clone());
                ws.rows[*r].insert(j);
            }
        }
        ws
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            if self.cols[c].remove(&r).is_some() {
                self.rows[r].remove(&c);
            }
        } else {
            self.cols[c].insert(r, v);
            self.rows[r].insert(c);
        }
    }

    fn get(&self, r: usize, c: usize) -> BigInt {
        self.cols[c].get(&r).cloned().unwrap_or_else(BigInt::zero)
    }

    /// row dst += q * row src
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        let touched: Vec<usize> = self.rows[src].iter().copied().collect();
        for c in touched {
            let add = &self.cols[c][&src] * q;
            let v = self.get(dst, c) + add;
            self.set(dst, c, v);
        }
    }

    /// col dst += q * col src
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        let touched: Vec<(usize, BigInt)> =
            self.cols[src].iter().map(|(r, v)| (*r, v.clone())).collect();
        for (r, v) in touched {
            let new = self.get(r, dst) + &v * q;
            self.set(r, dst, new);
        }
    }

    /// Replaces rows (rp, ro) by (x*rp + y*ro, -(b/g)*rp + (a/g)*ro) where
    /// a, b are the entries of column c in those rows and g = gcd(a, b).
    /// Returns the 2x2 transform applied on the left.
    fn row_gcd_combine(&mut self, rp: usize, ro: usize, c: usize) -> [BigInt; 4] {
        let a = self.get(rp, c);
        let b = self.get(ro, c);
        let ext = a.extended_gcd(&b);
        let (g, x, y) = (ext.gcd, ext.x, ext.y);
        let (ma, mb) = (-(&b / &g), &a / &g);
        let touched: Vec<usize> = self.rows[rp].union(&self.rows[ro]).copied().collect();
        for cc in touched {
            let old_p = self.get(rp, cc);
            let old_o = self.get(ro, cc);
            self.set(rp, cc, &x * &old_p + &y * &old_o);
            self.set(ro, cc, &ma * &old_p + &mb * &old_o);
        }
        [x, y, ma, mb]
    }

    fn col_gcd_combine(&mut self, cp: usize, co: usize, r: usize) {
        let a = self.get(r, cp);
        let b = self.get(r, co);
        let ext = a.extended_gcd(&b);
        let (g, x, y) = (ext.gcd, ext.x, ext.y);
        let (ma, mb) = (-(&b / &g), &a / &g);
        let touched: Vec<usize> = self.cols[cp]
            .keys()
            .chain(self.cols[co].keys())
            .copied()
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        for rr in touched {
            let old_p = self.get(rr, cp);
            let old_o = self.get(rr, co);
            self.set(rr, cp, &x * &old_p + &y * &old_o);
            self.set(rr, co, &ma * &old_p + &mb * &old_o);
        }
    }

    fn choose_pivot(&self, active_rows: &[bool], active_cols: &[bool]) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_key: Option<(BigInt, usize)> = None;
        for (r, cols) in self.rows.iter().enumerate() {
            if !active_rows[r] {
                continue;
            }
            for &c in cols {
                if !active_cols[c] {
                    continue;
                }
                let a = self.cols[c][&r].abs();
                let fill = (self.rows[r].len() - 1) * (self.cols[c].len() - 1);
                let key = (a, fill);
                if best_key.as_ref().is_none_or(|k| key < *k) {
                    best_key = Some(key);
                    best = Some((r, c));
                }
            }
        }
        best
    }
}

/// Eliminates to a diagonal and applies pairwise gcd/lcm fixing, yielding
/// the invariant factors in divisibility order, all positive.
pub fn smith_diagonal(m: &SparseMatrix) -> Vec<BigInt> {
    let mut ws = Workspace::from_matrix(m);
    let mut active_rows = vec![true; m.nrows()];
    let mut active_cols = vec![true; m.ncols()];
    let mut diag: Vec<BigInt> = Vec::new();

    while let Some((r, c)) = ws.choose_pivot(&active_rows, &active_cols) {
        clear_pivot(&mut ws, r, c, &active_rows, &active_cols, &mut |_| {});
        diag.push(ws.get(r, c).abs());
        active_rows[r] = false;
        active_cols[c] = false;
    }

    fix_divisibility(&mut diag);
    diag
}

fn clear_pivot(
    ws: &mut Workspace,
    r: usize,
    c: usize,
    active_rows: &[bool],
    active_cols: &[bool],
    on_row_op: &mut impl FnMut(RowEvent<'_>),
) {
    loop {
        let mut dirty = false;
        loop {
            let other = ws.cols[c]
                .keys()
                .copied()
                .find(|&r2| r2 != r && active_rows[r2]);
            let r2 = match other {
                Some(r2) => r2,
                None => break,
            };
            let a = ws.get(r, c);
            let b = ws.get(r2, c);
            if (&b % &a).is_zero() {
                let q = -(&b / &a);
                ws.row_op(r2, r, &q);
                on_row_op(RowEvent::Axpy { dst: r2, src: r, q: &q });
            } else {
                let t = ws.row_gcd_combine(r, r2, c);
                on_row_op(RowEvent::Combine { rp: r, ro: r2, t: &t });
            }
            dirty = true;
        }
        loop {
            let other = ws.rows[r]
                .iter()
                .copied()
                .find(|&c2| c2 != c && active_cols[c2]);
            let c2 = match other {
                Some(c2) => c2,
                None => break,
            };
            let a = ws.get(r, c);
            let b = ws.get(r, c2);
            if (&b % &a).is_zero() {
                let q = -(&b / &a);
                ws.col_op(c2, c, &q);
            } else {
                ws.col_gcd_combine(c, c2, r);
            }
            dirty = true;
        }
        if !dirty {
            break;
        }
    }
}

enum RowEvent<'a> {
    Axpy { dst: usize, src: usize, q: &'a BigInt },
    Combine { rp: usize, ro: usize, t: &'a [BigInt; 4] },
}

fn fix_divisibility(diag: &mut [BigInt]) {
    loop {
        let mut changed = false;
        for i in 0..diag.len() {
            for j in (i + 1)..diag.len() {
                if (&diag[j] % &diag[i]).is_zero() {
                    continue;
                }
                let g = diag[i].gcd(&diag[j]);
                let l = (&diag[i] / &g) * &diag[j];
                diag[i] = g;
                diag[j] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    diag.sort();
}

/// Diagonalization of a relations matrix with row transform tracking.
///
/// For relations Y on Z^z the result describes coker(Y): each pivot row r
/// with diagonal d contributes a generator of order d (read off U^-1 column
/// r), and rows never pivoted contribute free generators. The diagonal is
/// not put into divisibility order; the orders are valid as is.
pub struct SmithGenerators {
    pub pivots: Vec<(usize, BigInt)>,
    pub free_rows: Vec<usize>,
    pub u: SparseMatrix,
    pub u_inv: SparseMatrix,
}

pub fn smith_generators(rel: &SparseMatrix) -> SmithGenerators {
    let z = rel.nrows();
    let mut ws = Workspace::from_matrix(rel);
    let mut active_rows = vec![true; z];
    let mut active_cols = vec![true; rel.ncols()];
    let mut u_rows: Vec<HashMap<usize, BigInt>> = (0..z)
        .map(|i| HashMap::from([(i, BigInt::one())]))
        .collect();
    let mut uinv_cols: Vec<HashMap<usize, BigInt>> = (0..z)
        .map(|i| HashMap::from([(i, BigInt::one())]))
        .collect();
    let mut pivots: Vec<(usize, BigInt)> = Vec::new();

    while let Some((r, c)) = ws.choose_pivot(&active_rows, &active_cols) {
        let mut apply = |event: RowEvent<'_>| match event {
            RowEvent::Axpy { dst, src, q } => {
                let src_row: Vec<(usize, BigInt)> =
                    u_rows[src].iter().map(|(k, v)| (*k, v.clone())).collect();
                for (k, v) in src_row {
                    let entry = u_rows[dst].entry(k).or_insert_with(BigInt::zero);
                    *entry += q * &v;
                    if entry.is_zero() {
                        u_rows[dst].remove(&k);
                    }
                }
                // U^-1 gets the inverse op on columns: col src -= q * col dst.
                let dst_col: Vec<(usize, BigInt)> =
                    uinv_cols[dst].iter().map(|(k, v)| (*k, v.clone())).collect();
                for (k, v) in dst_col {
                    let entry = uinv_cols[src].entry(k).or_insert_with(BigInt::zero);
                    *entry -= q * &v;
                    if entry.is_zero() {
                        uinv_cols[src].remove(&k);
                    }
                }
            }
            RowEvent::Combine { rp, ro, t } => {
                let [x, y, ma, mb] = t;
                let old_p = std::mem::take(&mut u_rows[rp]);
                let old_o = std::mem::take(&mut u_rows[ro]);
                u_rows[rp] = combine_maps(&old_p, &old_o, x, y);
                u_rows[ro] = combine_maps(&old_p, &old_o, ma, mb);
                // Inverse of [[x, y], [ma, mb]] is [[mb, -y], [-ma, x]];
                // columns of U^-1 combine with its columns.
                let old_p = std::mem::take(&mut uinv_cols[rp]);
                let old_o = std::mem::take(&mut uinv_cols[ro]);
                uinv_cols[rp] = combine_maps(&old_p, &old_o, mb, &-ma.clone());
                uinv_cols[ro] = combine_maps(&old_p, &old_o, &-y.clone(), x);
            }
        };
        clear_pivot(&mut ws, r, c, &active_rows, &active_cols, &mut apply);
        let d = ws.get(r, c);
        if d.is_negative() {
            // row r <- -row r, reflected in both transforms.
            ws.row_op(r, r, &BigInt::from(-2));
            apply_negate(&mut u_rows[r]);
            apply_negate(&mut uinv_cols[r]);
            debug_assert_eq!(ws.get(r, c), -d);
        }
        pivots.push((r, ws.get(r, c)));
        active_rows[r] = false;
        active_cols[c] = false;
    }

    let free_rows: Vec<usize> = (0..z).filter(|&r| active_rows[r]).collect();
    SmithGenerators {
        pivots,
        free_rows,
        u: rows_to_matrix(z, &u_rows),
        u_inv: cols_to_matrix(z, &uinv_cols),
    }
}

fn combine_maps(
    a: &HashMap<usize, BigInt>,
    b: &HashMap<usize, BigInt>,
    ca: &BigInt,
    cb: &BigInt,
) -> HashMap<usize, BigInt> {
    let mut out: HashMap<usize, BigInt> = HashMap::new();
    for (k, v) in a {
        let entry = out.entry(*k).or_insert_with(BigInt::zero);
        *entry += ca * v;
    }
    for (k, v) in b {
        let entry = out.entry(*k).or_insert_with(BigInt::zero);
        *entry += cb * v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn apply_negate(map: &mut HashMap<usize, BigInt>) {
    for v in map.values_mut() {
        *v = -v.clone();
    }
}

fn rows_to_matrix(n: usize, rows: &[HashMap<usize, BigInt>]) -> SparseMatrix {
    let mut triplets = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row {
            triplets.push((r, *c, v.clone()));
        }
    }
    SparseMatrix::from_triplets(n, n, &triplets)
}

fn cols_to_matrix(n: usize, cols: &[HashMap<usize, BigInt>]) -> SparseMatrix {
    let mut triplets = Vec::new();
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col {
            triplets.push((*r, c, v.clone()));
        }
    }
    SparseMatrix::from_triplets(n, n, &triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_columns() {
        let m = SparseMatrix::from_dense(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        assert_eq!(rank(&SparseMatrix::identity(4)), 4);
        assert_eq!(rank(&SparseMatrix::zero(3, 2)), 0);
    }

    #[test]
    fn kernel_is_primitive() {
        let m = SparseMatrix::from_dense(&[&[2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k.ncols(), 1);
        assert!(m.mul(&k).is_zero());
        // (3, -2) generates the full kernel lattice; HNF makes the leading
        // entry positive.
        assert_eq!(k.get(0, 0), BigInt::from(3));
        assert_eq!(k.get(1, 0), BigInt::from(-2));
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let m = SparseMatrix::from_dense(&[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.ncols(), 1);
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.get(0, 0), BigInt::from(2));
        assert_eq!(k.get(1, 0), BigInt::from(-1));
        assert!(kernel_basis(&SparseMatrix::identity(3)).ncols() == 0);
    }

    #[test]
    fn hnf_is_canonical_for_equal_lattices() {
        // Column transform [[1, 2], [1, 1]] has determinant -1, so both
        // matrices generate the same lattice.
        let a = SparseMatrix::from_dense(&[&[2, 1], &[0, 3]]);
        let a2 = SparseMatrix::from_dense(&[&[3, 5], &[3, 3]]);
        let h = hnf_columns(&a);
        assert_eq!(h, hnf_columns(&a2));
        assert_eq!(h, SparseMatrix::from_dense(&[&[1, 0], &[3, 6]]));
    }

    #[test]
    fn solve_in_echelon_basis() {
        let basis = SparseMatrix::from_dense(&[&[2, 0], &[1, 1], &[0, 3]]);
        let rhs = SparseMatrix::from_dense(&[&[4], &[5], &[9]]);
        let x = solve_echelon(&basis, &rhs).unwrap();
        assert_eq!(basis.mul(&x), rhs);
        // 3 is not an even multiple of the first pivot.
        let bad = SparseMatrix::from_dense(&[&[3], &[0], &[0]]);
        assert!(solve_echelon(&basis, &bad).is_none());
        let outside = SparseMatrix::from_dense(&[&[0], &[0], &[1]]);
        assert!(solve_echelon(&basis, &outside).is_none());
    }

    #[test]
    fn rational_solve_over_column_span() {
        let m = SparseMatrix::from_dense(&[&[2, 0], &[0, 3]]);
        let span = ColumnSpan::new(&m);
        let x = span
            .solve_rational(&[(0, BigInt::from(1)), (1, BigInt::from(1))])
            .unwrap();
        assert_eq!(x[0], BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(x[1], BigRational::new(BigInt::from(1), BigInt::from(3)));
        let narrow = ColumnSpan::new(&SparseMatrix::from_dense(&[&[1], &[1]]));
        assert!(narrow.solve_rational(&[(0, BigInt::from(1))]).is_none());
    }

    #[test]
    fn smith_diagonal_examples() {
        let m = SparseMatrix::from_dense(&[&[2, 0], &[0, 3]]);
        assert_eq!(smith_diagonal(&m), vec![BigInt::from(1), BigInt::from(6)]);
        let m = SparseMatrix::from_dense(&[&[2, 4], &[4, 8]]);
        assert_eq!(smith_diagonal(&m), vec![BigInt::from(2)]);
        let m = SparseMatrix::from_dense(&[&[6, 0], &[0, 10]]);
        assert_eq!(smith_diagonal(&m), vec![BigInt::from(2), BigInt::from(30)]);
        assert!(smith_diagonal(&SparseMatrix::zero(2, 3)).is_empty());
    }

    #[test]
    fn smith_generator_transforms_are_inverse() {
        let rel = SparseMatrix::from_dense(&[&[2, 6], &[0, 4], &[0, 0]]);
        let gens = smith_generators(&rel);
        assert_eq!(gens.u.mul(&gens.u_inv), SparseMatrix::identity(3));
        assert_eq!(gens.pivots.len(), 2);
        assert_eq!(gens.free_rows.len(), 1);
        let mut orders: Vec<BigInt> = gens.pivots.iter().map(|(_, d)| d.clone()).collect();
        fix_divisibility(&mut orders);
        assert_eq!(orders, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn smith_generators_track_row_combines() {
        // Clearing the column of [[2], [3]] needs a gcd row combine.
        let rel = SparseMatrix::from_dense(&[&[2], &[3]]);
        let gens = smith_generators(&rel);
        assert_eq!(gens.u.mul(&gens.u_inv), SparseMatrix::identity(2));
        assert_eq!(gens.pivots.len(), 1);
        assert_eq!(gens.pivots[0].1, BigInt::from(1));
        assert_eq!(gens.free_rows.len(), 1);
        assert_eq!(
            gens.u.mul(&rel),
            SparseMatrix::from_dense(&[&[1], &[0]])
        );
    }
}
