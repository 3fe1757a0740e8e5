//! Chain-level comparison of a hypergraph with its subdivision.
//!
//! Subdivision replaces every simplex of the closure by the flags below
//! it. On chains this is implemented by three explicit maps: the
//! subdivision map sends a simplex to the signed sum of its flags, the
//! last-vertex retraction collapses a chain of simplices back to a
//! simplex, and a homotopy ties their composite to the identity. All
//! three restrict to the distinguished hyperedge spans, so embedded
//! homology is preserved, and [`verify_invariance`] checks every piece
//! of that argument on concrete matrices.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::json;
use thiserror::Error;

use crate::chains::matrix::SparseMatrix;
use crate::chains::{
    embedded_complex, induced_map_on_homology, infimum_complex, CellIndex, ChainComplex,
    CoefficientRing, EmbeddedComplex, GradedMap, HomologyGroup,
};
use crate::hypergraph::{simplicial_closure, Hypergraph, Simplex};
use crate::subdivision::{subdivide, SubdivisionResult};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvarianceError {
    /// The subdivision's vertex table disagrees with its provenance, so
    /// chains cannot be rewritten over the vertex indices.
    #[error("subdivision vertex {vertex} is not interned as its provenance simplex")]
    InterningMismatch { vertex: usize },
    /// A closure simplex of the source has no subdivision vertex.
    #[error("closure simplex {simplex} has no subdivision vertex")]
    MissingVertex { simplex: String },
}

/// A base simplex with a word of vertex deletions and an optional fixed
/// tail. Realizing it yields the ascending sequence
///
/// (del_{k_n} .. del_{k_1} base) .. (del_{k_1} base) base tail..
///
/// where del_k removes the vertex at position k. Words are constrained
/// by 0 <= k_t <= n + 1 - t so every deletion is in range.
#[derive(Debug, Clone)]
pub struct DeltaChain {
    base: Simplex,
    word: Vec<usize>,
    suffix: Vec<Simplex>,
}

impl DeltaChain {
    pub fn new(base: Simplex, word: Vec<usize>) -> Self {
        DeltaChain { base, word, suffix: Vec::new() }
    }

    pub fn with_suffix(base: Simplex, word: Vec<usize>, suffix: Vec<Simplex>) -> Self {
        DeltaChain { base, word, suffix }
    }

    /// (-1)^(k_1 + .. + k_n - n(n+1)/2). The subtracted triangle number
    /// has the same parity as the added one below.
    pub fn sign(&self) -> i64 {
        let n = self.word.len();
        let total = self.word.iter().sum::<usize>() + n * (n + 1) / 2;
        if total.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The realized component sequence, bottom to top. Returns None when
    /// the word runs out of vertices to delete or the sequence fails to
    /// increase strictly; such degenerate terms contribute zero.
    pub fn realize(&self) -> Option<Vec<Simplex>> {
        let mut flag = vec![self.base.clone()];
        let mut current = self.base.clone();
        for &k in &self.word {
            if k >= current.len() {
                return None;
            }
            current = current.facet(k)?;
            flag.push(current.clone());
        }
        flag.reverse();
        flag.extend(self.suffix.iter().cloned());
        if flag.windows(2).all(|w| w[0].is_proper_face_of(&w[1])) {
            Some(flag)
        } else {
            None
        }
    }
}

/// All words (k_1, .., k_n) with 0 <= k_t <= n + 1 - t, in
/// lexicographic order. There are (n+1)! of them.
fn index_words(n: usize) -> Vec<Vec<usize>> {
    let mut words = vec![Vec::new()];
    for t in 1..=n {
        let mut extended = Vec::with_capacity(words.len() * (n + 2 - t));
        for word in &words {
            for k in 0..=(n + 1 - t) {
                let mut next = word.clone();
                next.push(k);
                extended.push(next);
            }
        }
        words = extended;
    }
    words
}

/// Simplex of the components' last vertices, or None when two collide.
/// Along an ascending chain the last vertices never decrease, so the
/// collected list is sorted and collisions are exactly the repeats.
fn last_vertex_simplex(chain: &[Simplex]) -> Option<Simplex> {
    let lasts: Vec<usize> = chain.iter().map(Simplex::last_vertex).collect();
    Simplex::new(lasts).ok()
}

/// One round of subdivision together with the cell bookkeeping needed
/// to write chain maps between the two ambient complexes. Vertices of
/// the subdivision are identified with closure simplices of the source
/// through the provenance table.
#[derive(Debug)]
pub struct SubdivisionMaps {
    subdivision: SubdivisionResult,
    source_cells: CellIndex,
    sd_cells: CellIndex,
    vertex_of: BTreeMap<Simplex, usize>,
}

impl SubdivisionMaps {
    pub fn new(h: &Hypergraph) -> Self {
        let sd = subdivide(h);
        Self::with_subdivision(h, sd).expect("a fresh subdivision interns consistently")
    }

    /// Accepts a previously computed subdivision after verifying that
    /// its vertices are numbered the way the chain maps assume: vertex
    /// i is labeled by its provenance simplex, vertices ascend by
    /// (dimension, lexicographic) order, and every closure simplex of
    /// the source appears.
    pub fn with_subdivision(
        h: &Hypergraph,
        subdivision: SubdivisionResult,
    ) -> Result<Self, InvarianceError> {
        let labels = subdivision.hypergraph().vertex_table().labels();
        let provenance = subdivision.provenance();
        if labels.len() != provenance.len() {
            return Err(InvarianceError::InterningMismatch {
                vertex: labels.len().min(provenance.len()),
            });
        }
        for (i, s) in provenance.iter().enumerate() {
            if labels[i] != s.to_string() {
                return Err(InvarianceError::InterningMismatch { vertex: i });
            }
            let ascends = i == 0 || {
                let prev = &provenance[i - 1];
                (prev.len(), prev.vertices()) < (s.len(), s.vertices())
            };
            if !ascends {
                return Err(InvarianceError::InterningMismatch { vertex: i });
            }
        }
        let vertex_of: BTreeMap<Simplex, usize> = provenance
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let source_cells = CellIndex::new(&simplicial_closure(h));
        for n in 0..source_cells.dim_count() {
            for cell in source_cells.cells(n) {
                if !vertex_of.contains_key(cell) {
                    return Err(InvarianceError::MissingVertex { simplex: cell.to_string() });
                }
            }
        }
        let sd_cells = CellIndex::new(&simplicial_closure(subdivision.hypergraph()));
        Ok(SubdivisionMaps { subdivision, source_cells, sd_cells, vertex_of })
    }

    pub fn subdivision(&self) -> &SubdivisionResult {
        &self.subdivision
    }

    fn source_size(&self, n: usize) -> usize {
        if n < self.source_cells.dim_count() {
            self.source_cells.cells(n).len()
        } else {
            0
        }
    }

    fn sd_size(&self, n: usize) -> usize {
        if n < self.sd_cells.dim_count() {
            self.sd_cells.cells(n).len()
        } else {
            0
        }
    }

    /// Component simplices of a subdivision cell, bottom to top. Cells
    /// of the subdivided closure are chains, and vertex indices ascend
    /// with dimension, so index order is chain order.
    fn components(&self, cell: &Simplex) -> Vec<Simplex> {
        cell.vertices()
            .iter()
            .map(|&v| self.subdivision.provenance()[v].clone())
            .collect()
    }

    /// Position of a realized sequence among the subdivision's cells.
    fn sd_position(&self, sequence: &[Simplex]) -> Option<usize> {
        let vertices: Option<Vec<usize>> = sequence
            .iter()
            .map(|s| self.vertex_of.get(s).copied())
            .collect();
        let cell = Simplex::new(vertices?).ok()?;
        self.sd_cells.position(&cell)
    }

    /// The subdivision chain map: a simplex goes to the signed sum of
    /// the flags below it, one per index word.
    pub fn rho(&self) -> GradedMap {
        let mut matrices = Vec::new();
        for n in 0..self.source_cells.dim_count() {
            let cells = self.source_cells.cells(n);
            let words = index_words(n);
            let mut triplets = Vec::new();
            for (j, sigma) in cells.iter().enumerate() {
                for word in &words {
                    let delta = DeltaChain::new(sigma.clone(), word.clone());
                    let sign = delta.sign();
                    let sequence = delta.realize().expect("flag words never degenerate");
                    let row = self
                        .sd_position(&sequence)
                        .expect("flags of closure simplices are subdivision cells");
                    triplets.push((row, j, BigInt::from(sign)));
                }
            }
            matrices.push(SparseMatrix::from_triplets(self.sd_size(n), cells.len(), &triplets));
        }
        GradedMap::new(0, matrices)
    }

    /// The last-vertex retraction: a chain goes to the simplex of its
    /// components' last vertices, or to zero on a collision.
    pub fn pi(&self) -> GradedMap {
        let mut matrices = Vec::new();
        for n in 0..self.sd_cells.dim_count() {
            let cells = self.sd_cells.cells(n);
            let mut triplets = Vec::new();
            for (j, cell) in cells.iter().enumerate() {
                let chain = self.components(cell);
                if let Some(target) = last_vertex_simplex(&chain) {
                    let row = self
                        .source_cells
                        .position(&target)
                        .expect("last vertices pick a subset of a closure simplex");
                    triplets.push((row, j, BigInt::from(1)));
                }
            }
            matrices.push(SparseMatrix::from_triplets(self.source_size(n), cells.len(), &triplets));
        }
        GradedMap::new(0, matrices)
    }

    /// The homotopy between the identity and the retraction followed by
    /// subdivision. A chain x contributes, for every truncation point i,
    /// the flags of the last-vertex simplex of x's prefix glued onto
    /// x's tail; degenerate sequences and last-vertex collisions
    /// contribute nothing.
    pub fn homotopy(&self) -> GradedMap {
        let mut matrices = Vec::new();
        for n in 0..self.sd_cells.dim_count() {
            let cells = self.sd_cells.cells(n);
            let words_by_length: Vec<Vec<Vec<usize>>> = (0..=n).map(index_words).collect();
            let mut triplets = Vec::new();
            for (j, cell) in cells.iter().enumerate() {
                let chain = self.components(cell);
                for i in 0..=n {
                    let Some(tau) = last_vertex_simplex(&chain[..=i]) else {
                        continue;
                    };
                    let suffix = chain[i..].to_vec();
                    for word in &words_by_length[i] {
                        let delta =
                            DeltaChain::with_suffix(tau.clone(), word.clone(), suffix.clone());
                        let Some(sequence) = delta.realize() else {
                            continue;
                        };
                        let sign = if i % 2 == 0 { delta.sign() } else { -delta.sign() };
                        let row = self
                            .sd_position(&sequence)
                            .expect("chains of closure simplices are subdivision cells");
                        triplets.push((row, j, BigInt::from(sign)));
                    }
                }
            }
            matrices.push(SparseMatrix::from_triplets(self.sd_size(n + 1), cells.len(), &triplets));
        }
        GradedMap::new(1, matrices)
    }
}

/// Subdivision chain map of `h`, computing the subdivision on the fly.
pub fn rho(h: &Hypergraph) -> GradedMap {
    SubdivisionMaps::new(h).rho()
}

/// Last-vertex retraction of `h`'s subdivision.
pub fn pi(h: &Hypergraph) -> GradedMap {
    SubdivisionMaps::new(h).pi()
}

/// Homotopy witnessing that the retraction inverts subdivision up to
/// boundaries.
pub fn homotopy_h(h: &Hypergraph) -> GradedMap {
    SubdivisionMaps::new(h).homotopy()
}

#[derive(Debug, Clone)]
pub struct InvarianceCheck {
    pub name: &'static str,
    pub pass: bool,
    /// Set on failure: the dimension and cell where the check broke.
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub ring: CoefficientRing,
    pub checks: Vec<InvarianceCheck>,
    pub source_homology: Vec<HomologyGroup>,
    pub subdivided_homology: Vec<HomologyGroup>,
}

impl InvarianceReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let checks: Vec<serde_json::Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = json!({ "name": c.name, "pass": c.pass });
                if let Some(detail) = &c.detail {
                    v.as_object_mut().expect("object literal").insert("detail".into(), json!(detail));
                }
                v
            })
            .collect();
        let groups = |gs: &[HomologyGroup]| -> Vec<serde_json::Value> {
            gs.iter().map(HomologyGroup::to_json_value).collect()
        };
        json!({
            "checks": checks,
            "homology": {
                "source": groups(&self.source_homology),
                "subdivided": groups(&self.subdivided_homology),
            },
        })
        .to_string()
    }
}

fn passed(name: &'static str) -> InvarianceCheck {
    InvarianceCheck { name, pass: true, detail: None }
}

fn failed(name: &'static str, detail: String) -> InvarianceCheck {
    InvarianceCheck { name, pass: false, detail: Some(detail) }
}

fn vanishes(ring: CoefficientRing, v: &BigInt) -> bool {
    match ring {
        CoefficientRing::PrimeField(p) => v.mod_floor(&BigInt::from(p)).is_zero(),
        _ => v.is_zero(),
    }
}

/// First column with an entry that survives in the ring.
fn offending_column(ring: CoefficientRing, m: &SparseMatrix) -> Option<usize> {
    (0..m.ncols()).find(|&j| m.col(j).iter().any(|(_, v)| !vanishes(ring, v)))
}

fn chain_map_check(
    name: &'static str,
    f: &GradedMap,
    source: &ChainComplex,
    target: &ChainComplex,
) -> InvarianceCheck {
    if !f.shapes_match(source, target) {
        return failed(name, "matrix shapes do not match the complexes".into());
    }
    for n in 1..source.dim_count() {
        let lhs = if n < target.dim_count() {
            target.boundary(n).mul(f.matrix(n))
        } else {
            SparseMatrix::zero(target.size(n - 1), source.size(n))
        };
        let rhs = f.matrix(n - 1).mul(source.boundary(n));
        if let Some(j) = offending_column(source.ring(), &lhs.sub(&rhs)) {
            return failed(name, format!("dimension {n}, cell {}", source.labels(n)[j]));
        }
    }
    passed(name)
}

fn embedded_check(
    name: &'static str,
    f: &GradedMap,
    source: &EmbeddedComplex,
    target: &EmbeddedComplex,
) -> InvarianceCheck {
    let ring = source.ring();
    for n in 0..source.ambient().dim_count() {
        let allowed: BTreeSet<usize> =
            target.sub_indices(n + f.degree()).iter().copied().collect();
        for &j in source.sub_indices(n) {
            let stray = f
                .matrix(n)
                .col(j)
                .iter()
                .any(|(r, v)| !vanishes(ring, v) && !allowed.contains(r));
            if stray {
                return failed(
                    name,
                    format!("dimension {n}, cell {}", source.ambient().labels(n)[j]),
                );
            }
        }
    }
    passed(name)
}

fn identity_check(
    name: &'static str,
    pi: &GradedMap,
    rho: &GradedMap,
    source: &ChainComplex,
) -> InvarianceCheck {
    for n in 0..source.dim_count() {
        let product = pi.matrix(n).mul(rho.matrix(n));
        let diff = product.sub(&SparseMatrix::identity(source.size(n)));
        if let Some(j) = offending_column(source.ring(), &diff) {
            return failed(name, format!("dimension {n}, cell {}", source.labels(n)[j]));
        }
    }
    passed(name)
}

fn homotopy_identity_check(
    name: &'static str,
    rho: &GradedMap,
    pi: &GradedMap,
    h: &GradedMap,
    subdivided: &ChainComplex,
) -> InvarianceCheck {
    for n in 0..subdivided.dim_count() {
        let size = subdivided.size(n);
        let mut bounded = SparseMatrix::zero(size, size);
        if n + 1 < subdivided.dim_count() {
            bounded = bounded.add(&subdivided.boundary(n + 1).mul(h.matrix(n)));
        }
        if n >= 1 {
            bounded = bounded.add(&h.matrix(n - 1).mul(subdivided.boundary(n)));
        }
        let defect = SparseMatrix::identity(size).sub(&rho.matrix(n).mul(pi.matrix(n)));
        if let Some(j) = offending_column(subdivided.ring(), &defect.sub(&bounded)) {
            return failed(name, format!("dimension {n}, cell {}", subdivided.labels(n)[j]));
        }
    }
    passed(name)
}

#[allow(clippy::too_many_arguments)]
fn homology_check(
    name: &'static str,
    h: &Hypergraph,
    maps: &SubdivisionMaps,
    rho: &GradedMap,
    source: &EmbeddedComplex,
    subdivided: &EmbeddedComplex,
    source_groups: &[HomologyGroup],
    subdivided_groups: &[HomologyGroup],
) -> InvarianceCheck {
    let mismatch = source_groups
        .iter()
        .zip(subdivided_groups)
        .find(|(a, b)| a != b)
        .map(|(a, _)| a.dim);
    if source_groups.len() != subdivided_groups.len() || mismatch.is_some() {
        let dim = mismatch.unwrap_or_else(|| source_groups.len().min(subdivided_groups.len()));
        return failed(name, format!("dimension {dim}, group invariants differ"));
    }
    let witness = match source.ring() {
        // Over the integers the isomorphism is certified by the matched
        // invariants plus invertibility of the induced map on free
        // parts, read off over the rationals.
        CoefficientRing::Integers => {
            let source_q = embedded_complex(h, CoefficientRing::Rationals);
            let subdivided_q = embedded_complex(
                maps.subdivision().hypergraph(),
                CoefficientRing::Rationals,
            );
            induced_map_on_homology(rho, &source_q, &subdivided_q)
        }
        _ => induced_map_on_homology(rho, source, subdivided),
    };
    match witness {
        Err(e) => failed(name, format!("induced map unavailable: {e}")),
        Ok(induced) => match induced.all_invertible() {
            Some(true) => passed(name),
            _ => failed(name, "induced matrix is not invertible".into()),
        },
    }
}

/// Runs every check behind homology invariance of subdivision: both
/// maps commute with boundaries, all three maps respect the hyperedge
/// spans, the retraction inverts subdivision exactly, the homotopy
/// bounds the other composite, and the induced map on embedded homology
/// is an isomorphism. Failures carry the dimension and cell where the
/// matrices disagree.
pub fn verify_invariance(h: &Hypergraph, ring: CoefficientRing) -> InvarianceReport {
    let maps = SubdivisionMaps::new(h);
    let rho = maps.rho();
    let pi = maps.pi();
    let homotopy = maps.homotopy();
    let source = embedded_complex(h, ring);
    let subdivided = embedded_complex(maps.subdivision().hypergraph(), ring);
    let source_groups = infimum_complex(&source).homology();
    let subdivided_groups = infimum_complex(&subdivided).homology();

    let checks = vec![
        chain_map_check("rho_chain_map", &rho, source.ambient(), subdivided.ambient()),
        chain_map_check("pi_chain_map", &pi, subdivided.ambient(), source.ambient()),
        embedded_check("rho_embedded", &rho, &source, &subdivided),
        embedded_check("pi_embedded", &pi, &subdivided, &source),
        embedded_check("h_embedded", &homotopy, &subdivided, &subdivided),
        identity_check("pi_rho_identity", &pi, &rho, source.ambient()),
        homotopy_identity_check("homotopy_identity", &rho, &pi, &homotopy, subdivided.ambient()),
        homology_check(
            "homology_isomorphism",
            h,
            &maps,
            &rho,
            &source,
            &subdivided,
            &source_groups,
            &subdivided_groups,
        ),
    ];
    InvarianceReport { ring, checks, source_homology: source_groups, subdivided_homology: subdivided_groups }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn hg(count: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::from_edge_lists(count, &edges.iter().map(|e| e.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    fn partial_triangle() -> Hypergraph {
        hg(3, &[&[0], &[1], &[0, 1], &[1, 2], &[0, 1, 2]])
    }

    fn s(vertices: &[usize]) -> Simplex {
        Simplex::new(vertices.to_vec()).unwrap()
    }

    fn cell(maps: &SubdivisionMaps, components: &[&[usize]]) -> usize {
        let sequence: Vec<Simplex> = components.iter().map(|c| s(c)).collect();
        maps.sd_position(&sequence).unwrap()
    }

    fn one() -> BigInt {
        BigInt::from(1)
    }

    #[test]
    fn delta_chains_realize_flags_and_reject_degenerates() {
        let delta = DeltaChain::new(s(&[0, 1, 2]), vec![0, 0]);
        assert_eq!(delta.realize(), Some(vec![s(&[2]), s(&[1, 2]), s(&[0, 1, 2])]));
        assert_eq!(delta.sign(), -1);
        assert_eq!(DeltaChain::new(s(&[0, 1]), vec![1]).sign(), 1);

        let stalled = DeltaChain::with_suffix(s(&[0, 1]), vec![], vec![s(&[0, 1])]);
        assert_eq!(stalled.realize(), None);
        assert_eq!(DeltaChain::new(s(&[0, 1]), vec![5]).realize(), None);
    }

    #[test]
    fn index_words_count_factorially() {
        assert_eq!(index_words(0), vec![Vec::<usize>::new()]);
        assert_eq!(index_words(1), vec![vec![0], vec![1]]);
        assert_eq!(index_words(2).len(), 6);
        assert!(index_words(2).iter().all(|w| w[0] <= 2 && w[1] <= 1));
    }

    #[test]
    fn rho_expands_simplices_into_flags() {
        let h = partial_triangle();
        let maps = SubdivisionMaps::new(&h);
        let rho = maps.rho();

        let vertex_col = rho.matrix(0).col(0);
        assert_eq!(vertex_col, &[(cell(&maps, &[&[0]]), one())]);

        let edge_col = rho.matrix(1).col(0);
        assert_eq!(
            edge_col,
            &[
                (cell(&maps, &[&[0], &[0, 1]]), one()),
                (cell(&maps, &[&[1], &[0, 1]]), -one()),
            ]
        );

        let triangle_col = rho.matrix(2).col(0);
        assert_eq!(triangle_col.len(), 6);
        assert!(triangle_col.iter().all(|(_, v)| v.magnitude() == one().magnitude()));
    }

    #[test]
    fn pi_takes_last_vertices_and_kills_collisions() {
        let h = partial_triangle();
        let maps = SubdivisionMaps::new(&h);
        let pi = maps.pi();

        let straight = cell(&maps, &[&[0], &[0, 1]]);
        let colliding = cell(&maps, &[&[1], &[0, 1]]);
        assert_eq!(pi.matrix(1).col(straight), &[(0, one())]);
        assert!(pi.matrix(1).col(colliding).is_empty());

        for n in 0..pi.dim_count() {
            for j in 0..pi.matrix(n).ncols() {
                assert!(pi.matrix(n).col(j).len() <= 1);
            }
        }
    }

    #[test]
    fn pi_rho_is_the_identity() {
        let h = partial_triangle();
        let maps = SubdivisionMaps::new(&h);
        let (rho, pi) = (maps.rho(), maps.pi());
        for n in 0..rho.dim_count() {
            let product = pi.matrix(n).mul(rho.matrix(n));
            assert_eq!(product, SparseMatrix::identity(product.ncols()), "dimension {n}");
        }
    }

    #[test]
    fn homotopy_bounds_the_subdivision_defect() {
        let h = partial_triangle();
        let maps = SubdivisionMaps::new(&h);
        let (rho, pi, hom) = (maps.rho(), maps.pi(), maps.homotopy());
        let e = embedded_complex(&h, CoefficientRing::Integers);
        let sd = embedded_complex(maps.subdivision().hypergraph(), CoefficientRing::Integers);
        let c = sd.ambient();
        for n in 0..c.dim_count() {
            let size = c.size(n);
            let mut bounded = SparseMatrix::zero(size, size);
            if n + 1 < c.dim_count() {
                bounded = bounded.add(&c.boundary(n + 1).mul(hom.matrix(n)));
            }
            if n >= 1 {
                bounded = bounded.add(&hom.matrix(n - 1).mul(c.boundary(n)));
            }
            let defect = SparseMatrix::identity(size).sub(&rho.matrix(n).mul(pi.matrix(n)));
            assert_eq!(defect, bounded, "dimension {n}");
        }
        assert!(crate::chains::is_chain_map(&rho, e.ambient(), c));
        assert!(crate::chains::is_chain_map(&pi, c, e.ambient()));
        assert!(crate::chains::is_embedded_map(&rho, &e, &sd));
        assert!(crate::chains::is_embedded_map(&pi, &sd, &e));
        assert!(crate::chains::is_embedded_map(&hom, &sd, &sd));
    }

    #[test]
    fn homotopy_on_vertices_moves_toward_last_vertices() {
        let h = hg(2, &[&[0, 1]]);
        let maps = SubdivisionMaps::new(&h);
        let hom = maps.homotopy();

        let plain = cell(&maps, &[&[0]]);
        let barycenter = cell(&maps, &[&[0, 1]]);
        assert!(hom.matrix(0).col(plain).is_empty());
        assert_eq!(
            hom.matrix(0).col(barycenter),
            &[(cell(&maps, &[&[1], &[0, 1]]), one())]
        );
    }

    #[test]
    fn verify_invariance_passes_on_the_example() {
        let report = verify_invariance(&partial_triangle(), CoefficientRing::Integers);
        let names: Vec<&str> = report.checks.iter().map(|c| c.name).collect();
        assert_eq!(
            names,
            [
                "rho_chain_map",
                "pi_chain_map",
                "rho_embedded",
                "pi_embedded",
                "h_embedded",
                "pi_rho_identity",
                "homotopy_identity",
                "homology_isomorphism",
            ]
        );
        assert!(report.all_pass(), "{}", report.to_json());
        let ranks: Vec<usize> = report.source_homology.iter().map(|g| g.rank).collect();
        assert_eq!(ranks, [1, 0, 0]);
        assert_eq!(report.source_homology, report.subdivided_homology);
        assert!(!report.to_json().contains("detail"));
    }

    #[test]
    fn report_json_is_stable() {
        let report = verify_invariance(&hg(2, &[&[0, 1]]), CoefficientRing::Integers);
        let expected = concat!(
            "{\"checks\":[",
            "{\"name\":\"rho_chain_map\",\"pass\":true},",
            "{\"name\":\"pi_chain_map\",\"pass\":true},",
            "{\"name\":\"rho_embedded\",\"pass\":true},",
            "{\"name\":\"pi_embedded\",\"pass\":true},",
            "{\"name\":\"h_embedded\",\"pass\":true},",
            "{\"name\":\"pi_rho_identity\",\"pass\":true},",
            "{\"name\":\"homotopy_identity\",\"pass\":true},",
            "{\"name\":\"homology_isomorphism\",\"pass\":true}],",
            "\"homology\":{",
            "\"source\":[{\"dim\":0,\"rank\":0,\"torsion\":[]},{\"dim\":1,\"rank\":0,\"torsion\":[]}],",
            "\"subdivided\":[{\"dim\":0,\"rank\":0,\"torsion\":[]},{\"dim\":1,\"rank\":0,\"torsion\":[]}]}}",
        );
        assert_eq!(report.to_json(), expected);
    }

    #[test]
    fn verify_invariance_passes_over_fields() {
        for ring in [CoefficientRing::Rationals, CoefficientRing::prime_field(2).unwrap()] {
            let report = verify_invariance(&partial_triangle(), ring);
            assert!(report.all_pass(), "{ring}: {}", report.to_json());
        }
    }

    #[test]
    fn a_complex_reduces_to_the_classical_case() {
        let triangle = simplicial_closure(&hg(3, &[&[0, 1, 2]])).into_hypergraph();
        let report = verify_invariance(&triangle, CoefficientRing::Integers);
        assert!(report.all_pass(), "{}", report.to_json());
        let ranks: Vec<usize> = report.source_homology.iter().map(|g| g.rank).collect();
        assert_eq!(ranks, [1, 0, 0]);
    }

    #[test]
    fn torsion_survives_subdivision() {
        let triangles: &[&[usize]] = &[
            &[0, 1, 4],
            &[0, 1, 5],
            &[0, 2, 3],
            &[0, 2, 5],
            &[0, 3, 4],
            &[1, 2, 3],
            &[1, 2, 4],
            &[1, 3, 5],
            &[2, 4, 5],
            &[3, 4, 5],
        ];
        let plane = simplicial_closure(&hg(6, triangles)).into_hypergraph();
        let report = verify_invariance(&plane, CoefficientRing::Integers);
        assert!(report.all_pass(), "{}", report.to_json());
        assert_eq!(report.source_homology[1].torsion, vec![BigInt::from(2)]);
        assert_eq!(report.subdivided_homology[1].torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn foreign_subdivisions_are_rejected() {
        let foreign = subdivide(&hg(2, &[&[0, 1]]));
        let err = SubdivisionMaps::with_subdivision(&partial_triangle(), foreign).unwrap_err();
        assert_eq!(err, InvarianceError::MissingVertex { simplex: "[2]".into() });
    }
}
