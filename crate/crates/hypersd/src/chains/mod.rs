//! Chain complexes, embedded complexes, and infimum homology.
//!
//! A hypergraph is carried inside the simplicial chain complex of its
//! closure. The hyperedges span a graded submodule D, and the infimum
//! complex is the largest chain subcomplex contained in D:
//!
//!   Inf_n = D_n intersected with the boundary preimage of D_{n-1}.
//!
//! Embedded homology is the homology of the infimum complex. Over the
//! integers every kernel is computed by unimodular transforms, so infimum
//! lattices are saturated and the rational theory reuses the integer bases;
//! prime fields get their own elimination throughout.

pub mod matrix;
pub mod modp;
pub mod snf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::hypergraph::{simplicial_closure, Hypergraph, Simplex, SimplicialComplex};
use self::matrix::SparseMatrix;
use self::modp::ModMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl CoefficientRing {
    pub fn prime_field(p: u64) -> Result<Self, ChainsError> {
        if modp::is_prime(p) {
            Ok(CoefficientRing::PrimeField(p))
        } else {
            Err(ChainsError::NotPrime(p))
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, CoefficientRing::Integers)
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            CoefficientRing::PrimeField(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ChainsError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("chain complex shape mismatch at dimension {dim}")]
    ShapeMismatch { dim: usize },
    #[error("boundary of boundary is nonzero at dimension {dim}")]
    NotAComplex { dim: usize },
    #[error("ambient complex is missing hyperedge {edge}")]
    AmbientMissingEdge { edge: String },
    #[error("coefficient rings differ")]
    RingMismatch,
    #[error("expected a degree zero map")]
    WrongDegree,
    #[error("map does not commute with the boundary at dimension {dim}")]
    NotAChainMap { dim: usize },
    #[error("map leaves the distinguished span at dimension {dim}")]
    NotEmbeddedMap { dim: usize },
}

fn ring_is_zero(ring: CoefficientRing, m: &SparseMatrix) -> bool {
    match ring {
        CoefficientRing::PrimeField(p) => m.is_zero_mod(p),
        _ => m.is_zero(),
    }
}

/// Cells of a simplicial complex grouped by dimension, each dimension in
/// lexicographic vertex order.
#[derive(Debug, Clone)]
pub struct CellIndex {
    cells: Vec<Vec<Simplex>>,
    index: Vec<BTreeMap<Simplex, usize>>,
}

impl CellIndex {
    pub fn new(k: &SimplicialComplex) -> Self {
        let mut cells: Vec<Vec<Simplex>> = vec![Vec::new(); k.max_dim() + 1];
        for cell in k.edges() {
            cells[cell.dim()].push(cell.clone());
        }
        let index = cells
            .iter()
            .map(|list| {
                list.iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();
        CellIndex { cells, index }
    }

    pub fn dim_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self, n: usize) -> &[Simplex] {
        self.cells.get(n).map_or(&[], |v| v.as_slice())
    }

    /// Index of the cell within its own dimension.
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(s).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    ring: CoefficientRing,
    labels: Vec<Vec<String>>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// boundaries[n] maps dimension n to dimension n-1; boundaries[0] must
    /// have zero rows. Validates shapes and that the boundary squares to
    /// zero in the given ring.
    pub fn new(
        ring: CoefficientRing,
        labels: Vec<Vec<String>>,
        boundaries: Vec<SparseMatrix>,
    ) -> Result<Self, ChainsError> {
        if labels.len() != boundaries.len() {
            return Err(ChainsError::ShapeMismatch { dim: 0 });
        }
        for (n, b) in boundaries.iter().enumerate() {
            let rows = if n == 0 { 0 } else { labels[n - 1].len() };
            if b.ncols() != labels[n].len() || b.nrows() != rows {
                return Err(ChainsError::ShapeMismatch { dim: n });
            }
        }
        for n in 1..boundaries.len() {
            if !ring_is_zero(ring, &boundaries[n - 1].mul(&boundaries[n])) {
                return Err(ChainsError::NotAComplex { dim: n });
            }
        }
        Ok(ChainComplex {
            ring,
            labels,
            boundaries,
        })
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    /// Number of graded pieces; dimensions run over 0..dim_count().
    pub fn dim_count(&self) -> usize {
        self.labels.len()
    }

    pub fn size(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, |l| l.len())
    }

    pub fn labels(&self, n: usize) -> &[String] {
        self.labels.get(n).map_or(&[], |l| l.as_slice())
    }

    pub fn boundary(&self, n: usize) -> &SparseMatrix {
        &self.boundaries[n]
    }

    pub fn homology(&self) -> Vec<HomologyGroup> {
        let nd = self.dim_count();
        match self.ring {
            CoefficientRing::Integers => {
                let smiths: Vec<Vec<BigInt>> =
                    self.boundaries.iter().map(snf::smith_diagonal).collect();
                (0..nd)
                    .map(|n| {
                        let below = smiths[n].len();
                        let above = smiths.get(n + 1).map_or(0, |s| s.len());
                        let torsion = smiths
                            .get(n + 1)
                            .map(|s| {
                                s.iter()
                                    .filter(|d| !d.is_one())
                                    .cloned()
                                    .collect()
                            })
                            .unwrap_or_default();
                        HomologyGroup {
                            dim: n,
                            rank: self.size(n) - below - above,
                            torsion,
                        }
                    })
                    .collect()
            }
            CoefficientRing::Rationals => {
                let ranks: Vec<usize> = self.boundaries.iter().map(snf::rank).collect();
                field_groups(self, &ranks)
            }
            CoefficientRing::PrimeField(p) => {
                let ranks: Vec<usize> = self
                    .boundaries
                    .iter()
                    .map(|b| modp::rank(&ModMatrix::from_bigint(b, p)))
                    .collect();
                field_groups(self, &ranks)
            }
        }
    }
}

fn field_groups(c: &ChainComplex, ranks: &[usize]) -> Vec<HomologyGroup> {
    (0..c.dim_count())
        .map(|n| HomologyGroup {
            dim: n,
            rank: c.size(n) - ranks[n] - ranks.get(n + 1).copied().unwrap_or(0),
            torsion: Vec::new(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub dim: usize,
    pub rank: usize,
    /// Invariant factors greater than one, in divisibility order. Always
    /// empty over a field.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    /// JSON rendering with torsion coefficients in decimal.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "rank": self.rank,
            "torsion": self.torsion.iter().map(BigInt::to_string).collect::<Vec<_>>(),
        })
    }
}

/// Chain complex of a simplicial complex with the usual alternating-sign
/// boundary, cells ordered lexicographically within each dimension.
pub fn simplicial_chain_complex(k: &SimplicialComplex, ring: CoefficientRing) -> ChainComplex {
    let cells = CellIndex::new(k);
    let labels: Vec<Vec<String>> = (0..cells.dim_count())
        .map(|n| cells.cells(n).iter().map(|s| s.to_string()).collect())
        .collect();
    let mut boundaries = vec![SparseMatrix::zero(0, cells.cells(0).len())];
    for n in 1..cells.dim_count() {
        let mut triplets = Vec::new();
        for (j, cell) in cells.cells(n).iter().enumerate() {
            for i in 0..cell.len() {
                let facet = cell.facet(i).expect("cells of positive dimension have facets");
                let row = cells
                    .position(&facet)
                    .expect("complex is closed under faces");
                let sign = if i % 2 == 0 { 1 } else { -1 };
                triplets.push((row, j, BigInt::from(sign)));
            }
        }
        boundaries.push(SparseMatrix::from_triplets(
            cells.cells(n - 1).len(),
            cells.cells(n).len(),
            &triplets,
        ));
    }
    ChainComplex::new(ring, labels, boundaries).expect("simplicial boundary squares to zero")
}

/// A chain complex with a distinguished graded span of basis cells.
#[derive(Debug, Clone)]
pub struct EmbeddedComplex {
    ambient: ChainComplex,
    sub: Vec<Vec<usize>>,
}

impl EmbeddedComplex {
    pub fn ambient(&self) -> &ChainComplex {
        &self.ambient
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ambient.ring
    }

    /// Ambient cell indices of the distinguished cells, ascending.
    pub fn sub_indices(&self, n: usize) -> &[usize] {
        self.sub.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn sub_size(&self, n: usize) -> usize {
        self.sub.get(n).map_or(0, |v| v.len())
    }
}

fn embed(h: &Hypergraph, k: &SimplicialComplex, ring: CoefficientRing) -> Result<EmbeddedComplex, ChainsError> {
    let cells = CellIndex::new(k);
    let mut sub: Vec<Vec<usize>> = vec![Vec::new(); cells.dim_count()];
    for edge in h.edges() {
        let position = cells
            .position(edge)
            .ok_or_else(|| ChainsError::AmbientMissingEdge {
                edge: edge.to_string(),
            })?;
        sub[edge.dim()].push(position);
    }
    for list in sub.iter_mut() {
        list.sort_unstable();
    }
    Ok(EmbeddedComplex {
        ambient: simplicial_chain_complex(k, ring),
        sub,
    })
}

/// Embeds the hyperedges into the chain complex of the simplicial closure.
pub fn embedded_complex(h: &Hypergraph, ring: CoefficientRing) -> EmbeddedComplex {
    let k = simplicial_closure(h);
    embed(h, &k, ring).expect("closure contains every hyperedge")
}

/// Embeds the hyperedges into an arbitrary ambient complex on the same
/// vertex numbering; it must contain every hyperedge.
pub fn embedded_complex_in(
    h: &Hypergraph,
    ambient: &SimplicialComplex,
    ring: CoefficientRing,
) -> Result<EmbeddedComplex, ChainsError> {
    embed(h, ambient, ring)
}

/// The infimum complex together with its kernel bases: kernels[n] expresses
/// the infimum basis of dimension n in the coordinates of the distinguished
/// cells of that dimension.
pub struct InfimumData {
    pub complex: ChainComplex,
    pub kernels: Vec<SparseMatrix>,
}

pub fn infimum_data(e: &EmbeddedComplex) -> InfimumData {
    let ring = e.ring();
    let nd = e.ambient.dim_count();
    let mut kernels: Vec<SparseMatrix> = Vec::with_capacity(nd);
    for n in 0..nd {
        let restricted = e.ambient.boundary(n).select_cols(e.sub_indices(n));
        let rows_above = if n == 0 { 0 } else { e.ambient.size(n - 1) };
        let non_sub = complement(rows_above, if n == 0 { &[] } else { e.sub_indices(n - 1) });
        let projected = restricted.select_rows(&non_sub);
        let kernel = match ring {
            CoefficientRing::PrimeField(p) => {
                modp::kernel_basis(&ModMatrix::from_bigint(&projected, p)).to_bigint()
            }
            _ => snf::kernel_basis(&projected),
        };
        kernels.push(kernel);
    }

    let mut labels: Vec<Vec<String>> = Vec::with_capacity(nd);
    for n in 0..nd {
        let ambient_labels = e.ambient.labels(n);
        let named = (0..kernels[n].ncols())
            .map(|i| {
                let col = kernels[n].col(i);
                if col.len() == 1 && col[0].1.is_one() {
                    ambient_labels[e.sub_indices(n)[col[0].0]].clone()
                } else {
                    format!("d{n}b{i}")
                }
            })
            .collect();
        labels.push(named);
    }

    let mut boundaries = vec![SparseMatrix::zero(0, kernels[0].ncols())];
    for n in 1..nd {
        let image = e
            .ambient
            .boundary(n)
            .select_cols(e.sub_indices(n))
            .mul(&kernels[n]);
        let non_sub = complement(e.ambient.size(n - 1), e.sub_indices(n - 1));
        debug_assert!(ring_is_zero(ring, &image.select_rows(&non_sub)));
        let in_sub = image.select_rows(e.sub_indices(n - 1));
        let boundary = match ring {
            CoefficientRing::PrimeField(p) => {
                modp::solve_echelon(
                    &ModMatrix::from_bigint(&kernels[n - 1], p),
                    &ModMatrix::from_bigint(&in_sub, p),
                )
                .expect("boundary of an infimum chain lies in the infimum span")
                .to_bigint()
            }
            _ => snf::solve_echelon(&kernels[n - 1], &in_sub)
                .expect("boundary of an infimum chain lies in the infimum lattice"),
        };
        boundaries.push(boundary);
    }

    let complex =
        ChainComplex::new(ring, labels, boundaries).expect("infimum boundary squares to zero");
    InfimumData { complex, kernels }
}

/// The largest chain subcomplex supported on the distinguished cells.
pub fn infimum_complex(e: &EmbeddedComplex) -> ChainComplex {
    infimum_data(e).complex
}

/// Embedded homology of a hypergraph: homology of the infimum complex of
/// its edges inside the closure.
pub fn embedded_homology(h: &Hypergraph, ring: CoefficientRing) -> Vec<HomologyGroup> {
    infimum_complex(&embedded_complex(h, ring)).homology()
}

fn complement(n: usize, sorted_subset: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n - sorted_subset.len());
    let mut it = sorted_subset.iter().peekable();
    for i in 0..n {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    out
}

/// A graded collection of matrices: matrices[n] maps dimension n of the
/// source to dimension n + degree of the target.
#[derive(Debug, Clone)]
pub struct GradedMap {
    degree: usize,
    matrices: Vec<SparseMatrix>,
}

impl GradedMap {
    pub fn new(degree: usize, matrices: Vec<SparseMatrix>) -> Self {
        GradedMap { degree, matrices }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self, n: usize) -> &SparseMatrix {
        &self.matrices[n]
    }

    pub fn dim_count(&self) -> usize {
        self.matrices.len()
    }

    pub fn shapes_match(&self, source: &ChainComplex, target: &ChainComplex) -> bool {
        self.matrices.len() == source.dim_count()
            && self.matrices.iter().enumerate().all(|(n, m)| {
                m.ncols() == source.size(n) && m.nrows() == target.size(n + self.degree)
            })
    }
}

fn chain_map_failure(
    f: &GradedMap,
    source: &ChainComplex,
    target: &ChainComplex,
) -> Option<usize> {
    for n in 1..source.dim_count() {
        let lhs = if n < target.dim_count() {
            target.boundary(n).mul(f.matrix(n))
        } else {
            SparseMatrix::zero(target.size(n.wrapping_sub(1)), source.size(n))
        };
        let rhs = f.matrix(n - 1).mul(source.boundary(n));
        if !ring_is_zero(source.ring, &lhs.sub(&rhs)) {
            return Some(n);
        }
    }
    None
}

/// True iff f commutes with the boundaries. Only meaningful in degree zero.
pub fn is_chain_map(f: &GradedMap, source: &ChainComplex, target: &ChainComplex) -> bool {
    f.degree == 0
        && source.ring == target.ring
        && f.shapes_match(source, target)
        && chain_map_failure(f, source, target).is_none()
}

fn embedded_failure(
    f: &GradedMap,
    source: &EmbeddedComplex,
    target: &EmbeddedComplex,
) -> Option<usize> {
    let ring = source.ring();
    for n in 0..source.ambient.dim_count() {
        let allowed: BTreeSet<usize> =
            target.sub_indices(n + f.degree).iter().copied().collect();
        for &j in source.sub_indices(n) {
            for (r, v) in f.matrix(n).col(j) {
                let vanishes = match ring {
                    CoefficientRing::PrimeField(p) => v.mod_floor(&BigInt::from(p)).is_zero(),
                    _ => false,
                };
                if !vanishes && !allowed.contains(r) {
                    return Some(n);
                }
            }
        }
    }
    None
}

/// True iff f carries the distinguished span of the source into the
/// distinguished span of the target.
pub fn is_embedded_map(
    f: &GradedMap,
    source: &EmbeddedComplex,
    target: &EmbeddedComplex,
) -> bool {
    f.shapes_match(&source.ambient, &target.ambient)
        && source.ring() == target.ring()
        && embedded_failure(f, source, target).is_none()
}

/// Checks f - g = dh + hd on the ambient complex and that h preserves the
/// distinguished span (in degree one).
pub fn check_homotopy(
    f: &GradedMap,
    g: &GradedMap,
    h: &GradedMap,
    e: &EmbeddedComplex,
) -> bool {
    let c = &e.ambient;
    if f.degree != 0 || g.degree != 0 || h.degree != 1 {
        return false;
    }
    if !f.shapes_match(c, c) || !g.shapes_match(c, c) || !h.shapes_match(c, c) {
        return false;
    }
    for n in 0..c.dim_count() {
        let mut rhs = SparseMatrix::zero(c.size(n), c.size(n));
        if n + 1 < c.dim_count() {
            rhs = rhs.add(&c.boundary(n + 1).mul(h.matrix(n)));
        }
        if n >= 1 {
            rhs = rhs.add(&h.matrix(n - 1).mul(c.boundary(n)));
        }
        let lhs = f.matrix(n).sub(g.matrix(n));
        if !ring_is_zero(c.ring, &lhs.sub(&rhs)) {
            return false;
        }
    }
    embedded_failure(h, e, e).is_none()
}

/// The induced map on embedded homology, one matrix per dimension.
#[derive(Debug, Clone)]
pub struct InducedHomologyMap {
    pub ring: CoefficientRing,
    pub dims: Vec<InducedHomologyDim>,
}

/// Map matrix on homology generators in one dimension. Over the integers
/// the generators come from a diagonalized presentation: an order of d
/// means a torsion generator of order d (coefficients reduced into 0..d),
/// and None means a free generator. Over a field every order is None.
#[derive(Debug, Clone)]
pub struct InducedHomologyDim {
    pub dim: usize,
    pub source_orders: Vec<Option<BigInt>>,
    pub target_orders: Vec<Option<BigInt>>,
    /// entries[i][j]: coefficient of target generator i in the image of
    /// source generator j.
    pub entries: Vec<Vec<BigRational>>,
}

impl InducedHomologyDim {
    pub fn is_identity(&self) -> bool {
        self.source_orders == self.target_orders
            && self.entries.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, v)| {
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(|v| v.is_zero()))
    }
}

impl InducedHomologyMap {
    /// Whether every dimension is a square invertible matrix. Only defined
    /// over fields; over the integers the answer is None and callers must
    /// combine invariants with a field witness.
    pub fn all_invertible(&self) -> Option<bool> {
        match self.ring {
            CoefficientRing::Integers => None,
            CoefficientRing::Rationals => Some(self.dims.iter().all(|d| {
                d.entries.len() == d.source_orders.len()
                    && rational_rank(d.entries.clone()) == d.entries.len()
            })),
            CoefficientRing::PrimeField(p) => Some(self.dims.iter().all(|d| {
                let rows: Vec<Vec<u64>> = d
                    .entries
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| {
                                debug_assert!(v.denom().is_one());
                                v.numer()
                                    .mod_floor(&BigInt::from(p))
                                    .to_u64()
                                    .expect("residue fits in u64")
                            })
                            .collect()
                    })
                    .collect();
                d.entries.len() == d.source_orders.len() && mod_rank_dense(rows, p) == d.entries.len()
            })),
        }
    }
}

fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut rank = 0;
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut row_start = 0;
    for c in 0..ncols {
        let pivot = (row_start..rows.len()).find(|&r| !rows[r][c].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        rows.swap(row_start, pivot);
        let (upper, lower) = rows.split_at_mut(row_start + 1);
        let lead_row = &upper[row_start];
        for row in lower {
            if !row[c].is_zero() {
                let factor = &row[c] / &lead_row[c];
                for (dst, src) in row[c..].iter_mut().zip(&lead_row[c..]) {
                    *dst -= &factor * src;
                }
            }
        }
        row_start += 1;
        rank += 1;
    }
    rank
}

fn mod_rank_dense(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let mut rank = 0;
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut row_start = 0;
    for c in 0..ncols {
        let pivot = (row_start..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p));
        let pivot = match pivot {
            Some(found) => found,
            None => continue,
        };
        rows.swap(row_start, pivot);
        let (upper, lower) = rows.split_at_mut(row_start + 1);
        let lead_row = &upper[row_start];
        let inv = modp::inv_mod(lead_row[c], p);
        for row in lower {
            if !row[c].is_multiple_of(p) {
                let factor = modp::mul_mod(row[c], inv, p);
                for (dst, src) in row[c..].iter_mut().zip(&lead_row[c..]) {
                    *dst = (*dst + p - modp::mul_mod(factor, *src, p)) % p;
                }
            }
        }
        row_start += 1;
        rank += 1;
    }
    rank
}

/// Restriction of a degree zero embedded chain map to the infimum bases.
fn restrict_to_infimum(
    f: &GradedMap,
    source: &EmbeddedComplex,
    target: &EmbeddedComplex,
    src_inf: &InfimumData,
    tgt_inf: &InfimumData,
) -> Vec<SparseMatrix> {
    let ring = source.ring();
    let nd = source.ambient.dim_count();
    let mut out = Vec::with_capacity(nd);
    for n in 0..nd {
        let image = f
            .matrix(n)
            .select_cols(source.sub_indices(n))
            .mul(&src_inf.kernels[n]);
        let non_sub = complement(target.ambient.size(n), target.sub_indices(n));
        debug_assert!(ring_is_zero(ring, &image.select_rows(&non_sub)));
        let in_sub = image.select_rows(target.sub_indices(n));
        let tgt_kernel = tgt_inf
            .kernels
            .get(n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(0, 0));
        let fb = match ring {
            CoefficientRing::PrimeField(p) => modp::solve_echelon(
                &ModMatrix::from_bigint(&tgt_kernel, p),
                &ModMatrix::from_bigint(&in_sub, p),
            )
            .expect("image of an infimum chain lies in the target infimum span")
            .to_bigint(),
            _ => snf::solve_echelon(&tgt_kernel, &in_sub)
                .expect("image of an infimum chain lies in the target infimum lattice"),
        };
        out.push(fb);
    }
    out
}

fn padded_boundary(c: &ChainComplex, n: usize) -> SparseMatrix {
    if n < c.dim_count() {
        c.boundary(n).clone()
    } else {
        SparseMatrix::zero(c.size(n.wrapping_sub(1)), 0)
    }
}

pub fn induced_map_on_homology(
    f: &GradedMap,
    source: &EmbeddedComplex,
    target: &EmbeddedComplex,
) -> Result<InducedHomologyMap, ChainsError> {
    let ring = source.ring();
    if target.ring() != ring {
        return Err(ChainsError::RingMismatch);
    }
    if f.degree != 0 {
        return Err(ChainsError::WrongDegree);
    }
    if !f.shapes_match(&source.ambient, &target.ambient) {
        return Err(ChainsError::ShapeMismatch { dim: 0 });
    }
    if let Some(dim) = chain_map_failure(f, &source.ambient, &target.ambient) {
        return Err(ChainsError::NotAChainMap { dim });
    }
    if let Some(dim) = embedded_failure(f, source, target) {
        return Err(ChainsError::NotEmbeddedMap { dim });
    }

    let src_inf = infimum_data(source);
    let tgt_inf = infimum_data(target);
    let restricted = restrict_to_infimum(f, source, target, &src_inf, &tgt_inf);

    let nd = source.ambient.dim_count();
    let dims = match ring {
        CoefficientRing::Integers => {
            (0..nd)
                .map(|n| induced_dim_integers(n, &src_inf, &tgt_inf, &restricted[n]))
                .collect()
        }
        CoefficientRing::Rationals => (0..nd)
            .map(|n| induced_dim_rationals(n, &src_inf, &tgt_inf, &restricted[n]))
            .collect(),
        CoefficientRing::PrimeField(p) => (0..nd)
            .map(|n| induced_dim_mod(n, p, &src_inf, &tgt_inf, &restricted[n]))
            .collect(),
    };
    Ok(InducedHomologyMap { ring, dims })
}

/// Cycle basis and relations of one dimension of an infimum complex, in
/// infimum coordinates.
fn integer_presentation(inf: &InfimumData, n: usize) -> (SparseMatrix, SparseMatrix) {
    let z_basis = snf::kernel_basis(inf.complex.boundary(n));
    let incoming = padded_boundary(&inf.complex, n + 1);
    let rel = snf::solve_echelon(&z_basis, &incoming).expect("boundaries are cycles");
    (z_basis, rel)
}

fn induced_dim_integers(
    n: usize,
    src_inf: &InfimumData,
    tgt_inf: &InfimumData,
    fb: &SparseMatrix,
) -> InducedHomologyDim {
    let (z_src, rel_src) = integer_presentation(src_inf, n);
    let (z_tgt, rel_tgt) = integer_presentation(tgt_inf, n);
    let gens_src = snf::smith_generators(&rel_src);
    let gens_tgt = snf::smith_generators(&rel_tgt);

    let pick = |gens: &snf::SmithGenerators| -> (Vec<usize>, Vec<Option<BigInt>>) {
        let mut rows = Vec::new();
        let mut orders = Vec::new();
        for (r, d) in &gens.pivots {
            if !d.is_one() {
                rows.push(*r);
                orders.push(Some(d.clone()));
            }
        }
        for &r in &gens.free_rows {
            rows.push(r);
            orders.push(None);
        }
        (rows, orders)
    };
    let (src_rows, source_orders) = pick(&gens_src);
    let (tgt_rows, target_orders) = pick(&gens_tgt);

    // Source generators in infimum coordinates.
    let gen_cols = z_src.mul(&gens_src.u_inv.select_cols(&src_rows));
    let images = fb.mul(&gen_cols);
    let in_cycles = snf::solve_echelon(&z_tgt, &images)
        .expect("images of cycles under a chain map are cycles");
    let coords = gens_tgt.u.mul(&in_cycles);

    let entries = (0..tgt_rows.len())
        .map(|i| {
            (0..src_rows.len())
                .map(|j| {
                    let raw = coords.get(tgt_rows[i], j);
                    let value = match &target_orders[i] {
                        Some(d) => raw.mod_floor(d),
                        None => raw,
                    };
                    BigRational::from_integer(value)
                })
                .collect()
        })
        .collect();
    InducedHomologyDim {
        dim: n,
        source_orders,
        target_orders,
        entries,
    }
}

fn induced_dim_rationals(
    n: usize,
    src_inf: &InfimumData,
    tgt_inf: &InfimumData,
    fb: &SparseMatrix,
) -> InducedHomologyDim {
    let (z_src, rel_src) = integer_presentation(src_inf, n);
    let (z_tgt, rel_tgt) = integer_presentation(tgt_inf, n);
    let rel_src_h = snf::hnf_columns(&rel_src);
    let rel_tgt_h = snf::hnf_columns(&rel_tgt);
    let src_reps = non_pivot_rows(z_src.ncols(), &rel_src_h);
    let tgt_reps = non_pivot_rows(z_tgt.ncols(), &rel_tgt_h);

    let images = fb.mul(&z_src.select_cols(&src_reps));
    let span = snf::ColumnSpan::new(&z_tgt);
    let entries = compute_field_entries(&images, &span, &rel_tgt_h, &tgt_reps);
    InducedHomologyDim {
        dim: n,
        source_orders: vec![None; src_reps.len()],
        target_orders: vec![None; tgt_reps.len()],
        entries,
    }
}

fn non_pivot_rows(z: usize, echelon: &SparseMatrix) -> Vec<usize> {
    let pivots: BTreeSet<usize> = (0..echelon.ncols())
        .map(|j| echelon.col(j)[0].0)
        .collect();
    (0..z).filter(|r| !pivots.contains(r)).collect()
}

/// Expresses each image cycle as class coordinates over the non-pivot
/// representative rows, by a rational solve into the cycle basis followed
/// by forward reduction against the relation echelon.
fn compute_field_entries(
    images: &SparseMatrix,
    span: &snf::ColumnSpan,
    rel_echelon: &SparseMatrix,
    tgt_reps: &[usize],
) -> Vec<Vec<BigRational>> {
    let mut per_source: Vec<Vec<BigRational>> = Vec::new();
    for j in 0..images.ncols() {
        let y = span
            .solve_rational(images.col(j))
            .expect("images of cycles under a chain map are cycles");
        let mut y = y;
        for c in 0..rel_echelon.ncols() {
            let col = rel_echelon.col(c);
            let lead = col[0].0;
            if y[lead].is_zero() {
                continue;
            }
            let q = &y[lead] / BigRational::from_integer(col[0].1.clone());
            for (r, v) in col {
                let sub = &q * BigRational::from_integer(v.clone());
                y[*r] -= sub;
            }
        }
        per_source.push(tgt_reps.iter().map(|&r| y[r].clone()).collect());
    }
    // Transpose to entries[target][source].
    (0..tgt_reps.len())
        .map(|i| per_source.iter().map(|col| col[i].clone()).collect())
        .collect()
}

fn induced_dim_mod(
    n: usize,
    p: u64,
    src_inf: &InfimumData,
    tgt_inf: &InfimumData,
    fb: &SparseMatrix,
) -> InducedHomologyDim {
    let d_src = ModMatrix::from_bigint(src_inf.complex.boundary(n), p);
    let d_tgt = ModMatrix::from_bigint(tgt_inf.complex.boundary(n), p);
    let z_src = modp::kernel_basis(&d_src);
    let z_tgt = modp::kernel_basis(&d_tgt);
    let rel = |inf: &InfimumData, z: &ModMatrix| -> ModMatrix {
        let incoming = ModMatrix::from_bigint(&padded_boundary(&inf.complex, n + 1), p);
        modp::solve_echelon(z, &incoming).expect("boundaries are cycles")
    };
    let rel_src = modp::reduced_column_echelon(&rel(src_inf, &z_src));
    let rel_tgt = modp::reduced_column_echelon(&rel(tgt_inf, &z_tgt));
    let pivot_rows = |m: &ModMatrix| -> BTreeSet<usize> {
        (0..m.ncols()).map(|j| m.col(j)[0].0).collect()
    };
    let src_pivots = pivot_rows(&rel_src);
    let tgt_pivots = pivot_rows(&rel_tgt);
    let src_reps: Vec<usize> = (0..z_src.ncols()).filter(|r| !src_pivots.contains(r)).collect();
    let tgt_reps: Vec<usize> = (0..z_tgt.ncols()).filter(|r| !tgt_pivots.contains(r)).collect();

    let images = fb.mul(&z_src.to_bigint().select_cols(&src_reps));
    let y_all = modp::solve_echelon(&z_tgt, &ModMatrix::from_bigint(&images, p))
        .expect("images of cycles under a chain map are cycles");

    let mut per_source: Vec<Vec<u64>> = Vec::new();
    for j in 0..y_all.ncols() {
        let mut y: BTreeMap<usize, u64> = y_all.col(j).iter().copied().collect();
        for c in 0..rel_tgt.ncols() {
            let col = rel_tgt.col(c);
            let lead = col[0].0;
            let q = match y.get(&lead) {
                Some(&q) => q,
                None => continue,
            };
            for (r, v) in col {
                let entry = y.entry(*r).or_insert(0);
                *entry = (*entry + p - modp::mul_mod(q, *v, p)) % p;
                if *entry == 0 {
                    let r = *r;
                    y.remove(&r);
                }
            }
        }
        per_source.push(
            tgt_reps
                .iter()
                .map(|r| y.get(r).copied().unwrap_or(0))
                .collect(),
        );
    }
    let entries = (0..tgt_reps.len())
        .map(|i| {
            per_source
                .iter()
                .map(|col| BigRational::from_integer(BigInt::from(col[i])))
                .collect()
        })
        .collect();
    InducedHomologyDim {
        dim: n,
        source_orders: vec![None; src_reps.len()],
        target_orders: vec![None; tgt_reps.len()],
        entries,
    }
}
