//! Subdivision of hypergraphs.
//!
//! The subdivision of a hypergraph has one vertex per simplex of the
//! simplicial closure and one n-edge per accepted (n+1)-chain of simplices.
//! A chain is accepted when every same-length chain componentwise below it
//! ends in a hyperedge; for chains of simplices this reduces to a test over
//! the subsets of the top simplex. The module also provides the rank-word
//! refinement calculus that enumerates the flags below a chain, and the
//! generic construction on arbitrary marked graded posets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{
    simplicial_closure, Hypergraph, HypergraphError, Simplex, VertexMap, VertexTable,
};
use crate::poset::{chains_with_marked_top, is_successive, Chain, GradedPoset, MarkedGradedPoset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("chain components must strictly increase at position {position}")]
    NotAChain { position: usize },
    #[error("chain must be nonempty")]
    EmptyChain,
    #[error("rank word entries must strictly increase at position {position}")]
    NotAWord { position: usize },
    #[error("no component of the rank word has rank {rank}")]
    RankAbsent { rank: usize },
    #[error("decrementing rank {rank} would break strict increase")]
    CannotDecrement { rank: usize },
    #[error("edge cap {cap} exceeded at iteration {round} with {edges} edges")]
    CapExceeded { round: usize, cap: usize, edges: usize },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

fn validate_chain(chain: &[Simplex]) -> Result<(), SubdivisionError> {
    if chain.is_empty() {
        return Err(SubdivisionError::EmptyChain);
    }
    for position in 1..chain.len() {
        if !chain[position - 1].is_proper_face_of(&chain[position]) {
            return Err(SubdivisionError::NotAChain { position });
        }
    }
    Ok(())
}

/// Strictly increasing word of ranks, the rank profile of a chain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RankWord {
    word: Vec<usize>,
}

impl RankWord {
    pub fn new(word: Vec<usize>) -> Result<Self, SubdivisionError> {
        if word.is_empty() {
            return Err(SubdivisionError::EmptyChain);
        }
        for position in 1..word.len() {
            if word[position] <= word[position - 1] {
                return Err(SubdivisionError::NotAWord { position });
            }
        }
        Ok(RankWord { word })
    }

    pub fn of_chain(chain: &[Simplex]) -> Result<Self, SubdivisionError> {
        validate_chain(chain)?;
        Ok(RankWord {
            word: chain.iter().map(|s| s.dim()).collect(),
        })
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when the word is 0,1,…,n, the profile of a flag.
    pub fn is_flag(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &a)| a == i)
    }

    /// Number of refinement steps needed to reach the flag profile.
    pub fn slack(&self) -> usize {
        self.word.iter().enumerate().map(|(i, &a)| a - i).sum()
    }

    /// Decrements the unique entry equal to `rank`, returning the new word
    /// and the entry's position.
    pub fn decrement_at(&self, rank: usize) -> Result<(RankWord, usize), SubdivisionError> {
        let k = self
            .word
            .iter()
            .position(|&a| a == rank)
            .ok_or(SubdivisionError::RankAbsent { rank })?;
        if rank == 0 || (k > 0 && self.word[k - 1] == rank - 1) {
            return Err(SubdivisionError::CannotDecrement { rank });
        }
        let mut word = self.word.clone();
        word[k] = rank - 1;
        Ok((RankWord { word }, k))
    }
}

/// Set of chains sharing one rank word, produced from a base chain by
/// refinement steps. Every member stays componentwise below the base.
#[derive(Debug, Clone)]
pub struct FlagSet {
    base: Vec<Simplex>,
    word: RankWord,
    chains: BTreeSet<Vec<Simplex>>,
}

impl FlagSet {
    pub fn seed(x: &[Simplex]) -> Result<Self, SubdivisionError> {
        let word = RankWord::of_chain(x)?;
        Ok(FlagSet {
            base: x.to_vec(),
            word,
            chains: BTreeSet::from([x.to_vec()]),
        })
    }

    pub fn base(&self) -> &[Simplex] {
        &self.base
    }

    pub fn word(&self) -> &RankWord {
        &self.word
    }

    pub fn chains(&self) -> &BTreeSet<Vec<Simplex>> {
        &self.chains
    }

    pub fn into_chains(self) -> BTreeSet<Vec<Simplex>> {
        self.chains
    }
}

/// One refinement step: every chain's component of rank `rank` is replaced
/// by each of its codimension-one faces that still contains the previous
/// component.
pub fn refine_step(fs: &FlagSet, rank: usize) -> Result<FlagSet, SubdivisionError> {
    let (word, k) = fs.word.decrement_at(rank)?;
    let mut chains = BTreeSet::new();
    for chain in &fs.chains {
        for tau in chain[k].facets() {
            if k > 0 && !chain[k - 1].is_proper_face_of(&tau) {
                continue;
            }
            let mut refined = chain.clone();
            refined[k] = tau;
            chains.insert(refined);
        }
    }
    Ok(FlagSet {
        base: fs.base.clone(),
        word,
        chains,
    })
}

/// The schedule that lowers each component in turn, leftmost first: ranks
/// a_0,…,1 then a_1,…,2 and so on. Always applicable.
pub fn default_schedule(word: &RankWord) -> Vec<usize> {
    let mut schedule = Vec::with_capacity(word.slack());
    for (i, &a) in word.word().iter().enumerate() {
        for r in ((i + 1)..=a).rev() {
            schedule.push(r);
        }
    }
    schedule
}

/// All maximal refinement schedules for the word. Every one ends at the
/// flag profile after exactly `slack` steps.
pub fn all_schedules(word: &RankWord) -> Vec<Vec<usize>> {
    fn search(word: &RankWord, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if word.is_flag() {
            out.push(path.clone());
            return;
        }
        for &r in word.word() {
            if let Ok((next, _)) = word.decrement_at(r) {
                path.push(r);
                search(&next, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    search(word, &mut Vec::new(), &mut out);
    out
}

/// Flags componentwise below `x`, computed by the default refinement
/// schedule.
pub fn initial_elements(x: &[Simplex]) -> Result<BTreeSet<Vec<Simplex>>, SubdivisionError> {
    let mut fs = FlagSet::seed(x)?;
    for r in default_schedule(fs.word()) {
        fs = refine_step(&fs, r).expect("the default schedule is always applicable");
    }
    Ok(fs.into_chains())
}

/// Independent enumeration of the flags below `x`: nested simplices
/// ξ_0 ⊂ … ⊂ ξ_n with dim ξ_i = i and ξ_i ⊆ x_i, built a vertex at a time.
pub fn flag_oracle(x: &[Simplex]) -> Result<BTreeSet<Vec<Simplex>>, SubdivisionError> {
    validate_chain(x)?;
    fn extend(x: &[Simplex], flag: &mut Vec<Simplex>, out: &mut BTreeSet<Vec<Simplex>>) {
        let i = flag.len();
        if i == x.len() {
            out.insert(flag.clone());
            return;
        }
        if i == 0 {
            for &v in x[0].vertices() {
                flag.push(Simplex::new(vec![v]).expect("a vertex is a simplex"));
                extend(x, flag, out);
                flag.pop();
            }
            return;
        }
        let prev = flag[i - 1].clone();
        for &v in x[i].vertices() {
            if prev.contains_vertex(v) {
                continue;
            }
            let mut vertices = prev.vertices().to_vec();
            vertices.push(v);
            vertices.sort_unstable();
            flag.push(Simplex::new(vertices).expect("vertices are distinct"));
            extend(x, flag, out);
            flag.pop();
        }
    }
    let mut out = BTreeSet::new();
    extend(x, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Largest top-simplex size the subset-based membership test accepts.
const MEMBERSHIP_VERTEX_LIMIT: usize = 25;

struct TopContext {
    vertex_bit: BTreeMap<usize, u32>,
    non_edge_masks: Vec<u64>,
}

impl TopContext {
    fn new(h: &Hypergraph, top: &Simplex) -> Self {
        assert!(
            top.len() <= MEMBERSHIP_VERTEX_LIMIT,
            "membership test supports tops with at most {MEMBERSHIP_VERTEX_LIMIT} vertices"
        );
        let vertex_bit: BTreeMap<usize, u32> = top
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let mut edge_masks = BTreeSet::new();
        for e in h.edges() {
            if e.is_face_of(top) {
                edge_masks.insert(
                    e.vertices()
                        .iter()
                        .map(|v| 1u64 << vertex_bit[v])
                        .sum::<u64>(),
                );
            }
        }
        let full: u64 = (1 << top.len()) - 1;
        let non_edge_masks = (1..=full).filter(|w| !edge_masks.contains(w)).collect();
        TopContext {
            vertex_bit,
            non_edge_masks,
        }
    }

    fn mask(&self, s: &Simplex) -> u64 {
        s.vertices().iter().map(|v| 1u64 << self.vertex_bit[v]).sum()
    }

    /// A chain is accepted iff no subset of the top that can end a chain
    /// componentwise below it fails to be a hyperedge. A subset w can end
    /// such a chain iff |w| ≥ n+1 and |x_j ∩ w| ≥ j+1 for every j < n.
    fn accepts(&self, masks: &[u64]) -> bool {
        let n = masks.len() - 1;
        'next: for &w in &self.non_edge_masks {
            if (w.count_ones() as usize) < n + 1 {
                continue;
            }
            for (j, &m) in masks[..n].iter().enumerate() {
                if ((m & w).count_ones() as usize) < j + 1 {
                    continue 'next;
                }
            }
            return false;
        }
        true
    }
}

/// True when the chain of simplices is an edge of the subdivision of `h`.
pub fn chain_in_subdivision(h: &Hypergraph, chain: &[Simplex]) -> bool {
    if validate_chain(chain).is_err() {
        return false;
    }
    let top = chain.last().expect("chain is nonempty");
    if !h.contains_edge(top) {
        return false;
    }
    let ctx = TopContext::new(h, top);
    let masks: Vec<u64> = chain.iter().map(|s| ctx.mask(s)).collect();
    ctx.accepts(&masks)
}

/// Membership in the hypergraph construction of an arbitrary marked graded
/// poset, by the inductive definition: a chain belongs iff its top is
/// marked and it is either successive or all chains it covers belong.
pub fn membership(mp: &MarkedGradedPoset, c: &Chain) -> bool {
    let mut memo = HashMap::new();
    membership_memo(mp, c, &mut memo)
}

fn membership_memo(mp: &MarkedGradedPoset, c: &Chain, memo: &mut HashMap<Chain, bool>) -> bool {
    if let Some(&known) = memo.get(c) {
        return known;
    }
    let result = if !mp.is_marked(c.top()) {
        false
    } else if is_successive(mp, c) {
        true
    } else {
        chain_covers_down(mp.poset(), c)
            .iter()
            .all(|t| membership_memo(mp, t, memo))
    };
    memo.insert(c.clone(), result);
    result
}

/// Chains covered by `c` in the chain poset: one component replaced by an
/// element it covers, keeping the chain strict.
fn chain_covers_down(poset: &GradedPoset, c: &Chain) -> Vec<Chain> {
    let elements = c.elements();
    let mut out = Vec::new();
    for i in 0..elements.len() {
        for &t in poset.covers_down(elements[i]) {
            if i > 0 && !poset.lt(elements[i - 1], t) {
                continue;
            }
            let mut dropped = elements.to_vec();
            dropped[i] = t;
            out.push(Chain::new(poset, dropped).expect("replacement keeps the chain strict"));
        }
    }
    out
}

/// The hypergraph construction on a marked graded poset: vertices are the
/// poset elements, n-edges the accepted (n+1)-chains, up to dimension
/// `nmax`. Runs the inductive definition directly.
pub fn hypergraph_from_marked_poset(
    mp: &MarkedGradedPoset,
    nmax: usize,
) -> Result<Hypergraph, SubdivisionError> {
    let table = VertexTable::new(mp.poset().labels().to_vec())
        .expect("poset labels are distinct");
    let mut memo = HashMap::new();
    let mut edges = BTreeSet::new();
    for n in 0..=nmax {
        for c in chains_with_marked_top(mp, n) {
            if membership_memo(mp, &c, &mut memo) {
                edges.insert(
                    Simplex::new(c.elements().to_vec())
                        .expect("chain indices strictly increase"),
                );
            }
        }
    }
    Ok(Hypergraph::new(table, edges)?)
}

/// A subdivided hypergraph together with the source simplex behind each
/// vertex.
#[derive(Debug, Clone)]
pub struct SubdivisionResult {
    hypergraph: Hypergraph,
    provenance: Vec<Simplex>,
}

#[derive(Serialize, Deserialize)]
struct SubdivisionDoc {
    vertices: Vec<String>,
    edges: Vec<Vec<usize>>,
    provenance: Vec<Vec<usize>>,
}

impl SubdivisionResult {
    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn provenance(&self) -> &[Simplex] {
        &self.provenance
    }

    pub fn into_hypergraph(self) -> Hypergraph {
        self.hypergraph
    }

    pub fn to_json(&self) -> String {
        let doc = SubdivisionDoc {
            vertices: self.hypergraph.vertex_table().labels().to_vec(),
            edges: self
                .hypergraph
                .edges()
                .map(|e| e.vertices().to_vec())
                .collect(),
            provenance: self.provenance.iter().map(|s| s.vertices().to_vec()).collect(),
        };
        serde_json::to_string(&doc).expect("subdivision documents serialize")
    }
}

/// Subdivides a hypergraph. Vertices of the result are the simplices of
/// the simplicial closure in (dimension, lexicographic) order; edges are
/// the accepted chains, rewritten over the new vertex indices. Interning
/// is monotone, so accepted chains become valid simplices.
pub fn subdivide(h: &Hypergraph) -> SubdivisionResult {
    let closure = simplicial_closure(h);
    let cells: Vec<Simplex> = closure.edges().cloned().collect();
    let index: BTreeMap<&Simplex, usize> =
        cells.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let labels: Vec<String> = cells.iter().map(|s| s.to_string()).collect();

    let mut edges: BTreeSet<Simplex> = BTreeSet::new();
    for top in h.edges() {
        let ctx = TopContext::new(h, top);
        // Chains ending at this top, generated by descending through
        // proper subsets; each is tested independently.
        let full: u64 = (1 << top.len()) - 1;
        let mut rev_masks = vec![full];
        descend_chains(&mut rev_masks, &mut |rev: &[u64]| {
            let masks: Vec<u64> = rev.iter().rev().copied().collect();
            if ctx.accepts(&masks) {
                let vertices = masks
                    .iter()
                    .map(|&m| index[&unmask(top, m)])
                    .collect::<Vec<_>>();
                edges.insert(Simplex::new(vertices).expect("interning is monotone"));
            }
        });
    }

    let table = VertexTable::new(labels).expect("closure simplices are distinct");
    let hypergraph = Hypergraph::new(table, edges)
        .expect("every hyperedge admits at least one accepted flag");
    SubdivisionResult {
        hypergraph,
        provenance: cells,
    }
}

fn unmask(top: &Simplex, mask: u64) -> Simplex {
    let vertices = top
        .vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &v)| v)
        .collect();
    Simplex::new(vertices).expect("top vertices are sorted")
}

fn descend_chains(rev_masks: &mut Vec<u64>, emit: &mut impl FnMut(&[u64])) {
    emit(rev_masks);
    let bottom = *rev_masks.last().expect("chain is nonempty");
    // Proper nonempty submasks of the current bottom.
    let mut sub = (bottom - 1) & bottom;
    while sub > 0 {
        rev_masks.push(sub);
        descend_chains(rev_masks, emit);
        rev_masks.pop();
        sub = (sub - 1) & bottom;
    }
}

/// The induced morphism between subdivisions: each vertex of the
/// subdivided source, a simplex σ, maps to the vertex of the subdivided
/// target interning φ(σ). Fails when some accepted chain's image is not
/// accepted in the target.
pub fn subdivide_morphism(vm: &VertexMap) -> Result<VertexMap, SubdivisionError> {
    let sd_source = subdivide(vm.source());
    let sd_target = subdivide(vm.target());
    let target_index: BTreeMap<&Simplex, usize> = sd_target
        .provenance
        .iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let map = sd_source
        .provenance
        .iter()
        .map(|s| target_index[&vm.image_simplex(s)])
        .collect();
    Ok(VertexMap::new(
        sd_source.into_hypergraph(),
        sd_target.into_hypergraph(),
        map,
    )?)
}

/// Applies `subdivide` k times, stopping with an error when the edge count
/// exceeds `cap`. Provenance refers to the final round's input.
pub fn iterate_subdivision(
    h: &Hypergraph,
    k: usize,
    cap: usize,
) -> Result<SubdivisionResult, SubdivisionError> {
    let mut result = SubdivisionResult {
        hypergraph: h.clone(),
        provenance: (0..h.vertex_table().len())
            .map(|v| Simplex::new(vec![v]).expect("a vertex is a simplex"))
            .collect(),
    };
    for round in 1..=k {
        result = subdivide(&result.hypergraph);
        let edges = result.hypergraph.edge_count();
        if edges > cap {
            return Err(SubdivisionError::CapExceeded { round, cap, edges });
        }
    }
    Ok(result)
}
