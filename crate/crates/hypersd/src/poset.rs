//! Finite graded posets with marked subsets.
//!
//! A graded poset carries a rank function that steps by exactly one along
//! cover relations. Elements are indexed in a linear extension (rank never
//! decreases with index); the Hasse diagram (cover pairs) is primary data
//! and the full order relation is answered from a reachability cache built
//! at construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::{
    Hypergraph, HypergraphError, Simplex, SimplicialComplex, VertexMap, VertexTable,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("rank and label lists must have equal length")]
    LengthMismatch,
    #[error("element labels must be distinct, {label:?} repeats")]
    DuplicateLabel { label: String },
    #[error("cover pair ({low}, {high}) is out of range")]
    CoverOutOfRange { low: usize, high: usize },
    #[error("cover pair ({low}, {high}) must raise rank by exactly 1 (ranks {low_rank}, {high_rank})")]
    CoverRankStep {
        low: usize,
        high: usize,
        low_rank: usize,
        high_rank: usize,
    },
    #[error("element order must be a linear extension: rank decreases at index {index}")]
    NotLinearExtension { index: usize },
    #[error("family is not graded: cover ({low}, {high}) spans heights {low_rank} and {high_rank}")]
    NotGraded {
        low: String,
        high: String,
        low_rank: usize,
        high_rank: usize,
    },
    #[error("marked subset must be nonempty")]
    EmptyMarking,
    #[error("marked element {0} is out of range")]
    MarkOutOfRange(usize),
    #[error("chain elements must strictly increase in the partial order at position {position}")]
    NotAChain { position: usize },
    #[error("chain must be nonempty")]
    EmptyChain,
    #[error("chain element {0} is out of range")]
    ChainOutOfRange(usize),
    #[error("map must list an image for each of the {expected} source elements, got {got}")]
    MapWrongLength { expected: usize, got: usize },
    #[error("image {image} of element {element} is out of range")]
    MapImageOutOfRange { element: usize, image: usize },
    #[error("map is not order preserving on cover ({low}, {high})")]
    NotOrderPreserving { low: usize, high: usize },
    #[error("map violates the graded bound on cover ({low}, {high})")]
    NotGradedMap { low: usize, high: usize },
    #[error("map sends marked element {0} to an unmarked element")]
    NotMarkedToMarked(usize),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Square bit matrix; row i holds the upward reachability set of element i.
#[derive(Debug, Clone)]
struct BitMatrix {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        BitMatrix {
            words_per_row,
            bits: vec![0; words_per_row * n],
        }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] & (1 << (j % 64)) != 0
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
    }

    fn or_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.words_per_row, dst * self.words_per_row);
        for k in 0..self.words_per_row {
            let word = self.bits[s + k];
            self.bits[d + k] |= word;
        }
    }
}

/// Finite graded poset given by its Hasse diagram.
#[derive(Debug, Clone)]
pub struct GradedPoset {
    labels: Vec<String>,
    rank: Vec<usize>,
    covers_up: Vec<Vec<usize>>,
    covers_down: Vec<Vec<usize>>,
    reach: BitMatrix,
}

impl GradedPoset {
    /// Builds from labels, ranks, and cover pairs `(low, high)`. The element
    /// order must already be a linear extension; each cover must raise rank
    /// by one, which also makes every listed pair a genuine cover.
    pub fn new(
        labels: Vec<String>,
        rank: Vec<usize>,
        covers: &[(usize, usize)],
    ) -> Result<Self, PosetError> {
        if labels.len() != rank.len() {
            return Err(PosetError::LengthMismatch);
        }
        let n = labels.len();
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.clone()) {
                return Err(PosetError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        for index in 1..n {
            if rank[index] < rank[index - 1] {
                return Err(PosetError::NotLinearExtension { index });
            }
        }
        let mut covers_up = vec![Vec::new(); n];
        let mut covers_down = vec![Vec::new(); n];
        let mut pair_set = BTreeSet::new();
        for &(low, high) in covers {
            if low >= n || high >= n {
                return Err(PosetError::CoverOutOfRange { low, high });
            }
            if rank[high] != rank[low] + 1 {
                return Err(PosetError::CoverRankStep {
                    low,
                    high,
                    low_rank: rank[low],
                    high_rank: rank[high],
                });
            }
            if pair_set.insert((low, high)) {
                covers_up[low].push(high);
                covers_down[high].push(low);
            }
        }
        for list in covers_up.iter_mut().chain(covers_down.iter_mut()) {
            list.sort_unstable();
        }
        // Covers strictly raise rank, hence point to strictly larger indices;
        // a reverse sweep closes reachability in one pass.
        let mut reach = BitMatrix::new(n);
        for i in (0..n).rev() {
            reach.set(i, i);
            for &up in &covers_up[i] {
                reach.or_row_into(up, i);
            }
        }
        Ok(GradedPoset {
            labels,
            rank,
            covers_up,
            covers_down,
            reach,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn covers_up(&self, i: usize) -> &[usize] {
        &self.covers_up[i]
    }

    pub fn covers_down(&self, i: usize) -> &[usize] {
        &self.covers_down[i]
    }

    /// True when nothing lies below `i`.
    pub fn is_initial(&self, i: usize) -> bool {
        self.covers_down[i].is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.reach.get(a, b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.reach.get(a, b)
    }

    /// Hasse diagram in DOT format, drawn bottom-up.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{label}\"];");
        }
        for (low, ups) in self.covers_up.iter().enumerate() {
            for &high in ups {
                let _ = writeln!(out, "  n{low} -> n{high};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Graded poset with a nonempty marked subset.
#[derive(Debug, Clone)]
pub struct MarkedGradedPoset {
    poset: GradedPoset,
    marked: BTreeSet<usize>,
}

impl MarkedGradedPoset {
    pub fn new(poset: GradedPoset, marked: BTreeSet<usize>) -> Result<Self, PosetError> {
        if marked.is_empty() {
            return Err(PosetError::EmptyMarking);
        }
        if let Some(&bad) = marked.iter().find(|&&m| m >= poset.len()) {
            return Err(PosetError::MarkOutOfRange(bad));
        }
        Ok(MarkedGradedPoset { poset, marked })
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.poset
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.marked.contains(&i)
    }
}

/// Strict chain of poset elements, stored as increasing element indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    elements: Vec<usize>,
}

impl Chain {
    pub fn new(poset: &GradedPoset, elements: Vec<usize>) -> Result<Self, PosetError> {
        if elements.is_empty() {
            return Err(PosetError::EmptyChain);
        }
        for &e in &elements {
            if e >= poset.len() {
                return Err(PosetError::ChainOutOfRange(e));
            }
        }
        for position in 1..elements.len() {
            if !poset.lt(elements[position - 1], elements[position]) {
                return Err(PosetError::NotAChain { position });
            }
        }
        Ok(Chain { elements })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> usize {
        *self.elements.last().expect("chain is nonempty")
    }
}

/// Chains compare componentwise; only equal lengths are comparable.
pub fn chain_leq(poset: &GradedPoset, a: &Chain, b: &Chain) -> bool {
    a.len() == b.len()
        && a.elements
            .iter()
            .zip(&b.elements)
            .all(|(&x, &y)| poset.leq(x, y))
}

/// Elements covered by some member of `y`.
pub fn covered_by(poset: &GradedPoset, y: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for &e in y {
        out.extend(poset.covers_down(e).iter().copied());
    }
    out
}

/// Elements strictly below some member of `y`.
pub fn strictly_below(poset: &GradedPoset, y: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<usize> = Vec::new();
    for &e in y {
        stack.extend(poset.covers_down(e).iter().copied());
    }
    while let Some(e) = stack.pop() {
        if out.insert(e) {
            stack.extend(poset.covers_down(e).iter().copied());
        }
    }
    out
}

/// Initial elements below `y`: initial elements of the strictly-below set,
/// together with any member of `y` that is itself initial.
pub fn initial_below(poset: &GradedPoset, y: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out: BTreeSet<usize> = strictly_below(poset, y)
        .into_iter()
        .filter(|&e| poset.is_initial(e))
        .collect();
    out.extend(y.iter().copied().filter(|&e| poset.is_initial(e)));
    out
}

/// Face poset of a simplicial complex: elements are its simplices in
/// (dimension, lexicographic) order, ranked by dimension, covered by
/// codimension-one inclusion.
pub fn face_poset(k: &SimplicialComplex) -> GradedPoset {
    let elements: Vec<Simplex> = k.edges().cloned().collect();
    let index: BTreeMap<&Simplex, usize> =
        elements.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let labels = elements.iter().map(|s| s.to_string()).collect();
    let rank = elements.iter().map(|s| s.dim()).collect();
    let mut covers = Vec::new();
    for (high, simplex) in elements.iter().enumerate() {
        for facet in simplex.facets() {
            let low = index[&facet];
            covers.push((low, high));
        }
    }
    GradedPoset::new(labels, rank, &covers).expect("face posets are always graded")
}

/// Face poset of the simplicial closure with the hyperedges marked.
pub fn marked_face_poset(h: &Hypergraph) -> MarkedGradedPoset {
    let closure = simplicial_closure_elements(h);
    let poset = face_poset(&closure.0);
    let marked = h
        .edges()
        .map(|e| closure.1[e])
        .collect();
    MarkedGradedPoset::new(poset, marked).expect("a hypergraph has at least one edge")
}

fn simplicial_closure_elements(
    h: &Hypergraph,
) -> (SimplicialComplex, BTreeMap<Simplex, usize>) {
    let closure = crate::hypergraph::simplicial_closure(h);
    let index = closure
        .edges()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    (closure, index)
}

/// Poset of an arbitrary simplex family ordered by inclusion, ranked by
/// height (longest chain from a minimal element). Fails when some cover
/// skips a height level, i.e. the family is not graded.
pub fn inclusion_poset(family: &BTreeSet<Simplex>) -> Result<GradedPoset, PosetError> {
    let elements: Vec<Simplex> = family.iter().cloned().collect();
    let n = elements.len();
    // Height is computable in canonical order: a proper face precedes its
    // cofaces in (dimension, lex) order.
    let mut height = vec![0usize; n];
    for i in 0..n {
        for j in 0..i {
            if elements[j].is_proper_face_of(&elements[i]) {
                height[i] = height[i].max(height[j] + 1);
            }
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if !elements[j].is_proper_face_of(&elements[i]) {
                continue;
            }
            let is_cover = !(0..n).any(|k| {
                k != i
                    && k != j
                    && elements[j].is_proper_face_of(&elements[k])
                    && elements[k].is_proper_face_of(&elements[i])
            });
            if is_cover {
                if height[i] != height[j] + 1 {
                    return Err(PosetError::NotGraded {
                        low: elements[j].to_string(),
                        high: elements[i].to_string(),
                        low_rank: height[j],
                        high_rank: height[i],
                    });
                }
                covers.push((j, i));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (height[i], elements[i].clone()));
    let position: BTreeMap<usize, usize> =
        order.iter().enumerate().map(|(pos, &i)| (i, pos)).collect();
    let labels = order.iter().map(|&i| elements[i].to_string()).collect();
    let rank = order.iter().map(|&i| height[i]).collect();
    let covers: Vec<(usize, usize)> = covers
        .into_iter()
        .map(|(low, high)| (position[&low], position[&high]))
        .collect();
    GradedPoset::new(labels, rank, &covers)
}

/// Order complex: vertices are the poset elements, simplices its strict
/// chains.
pub fn order_complex(poset: &GradedPoset) -> SimplicialComplex {
    let table = VertexTable::new(poset.labels().to_vec())
        .expect("poset labels are distinct");
    let mut edges = BTreeSet::new();
    let mut chain = Vec::new();
    for start in 0..poset.len() {
        chain.push(start);
        collect_chains(poset, &mut chain, &mut edges);
        chain.pop();
    }
    let h = Hypergraph::new(table, edges).expect("a nonempty poset has chains");
    SimplicialComplex::try_new(h).expect("chains are closed under subchains")
}

fn collect_chains(poset: &GradedPoset, chain: &mut Vec<usize>, edges: &mut BTreeSet<Simplex>) {
    edges.insert(Simplex::new(chain.clone()).expect("chain indices strictly increase"));
    let last = *chain.last().expect("chain is nonempty");
    for next in last + 1..poset.len() {
        if poset.lt(last, next) {
            chain.push(next);
            collect_chains(poset, chain, edges);
            chain.pop();
        }
    }
}

/// All strict `(n+1)`-chains whose top element is marked, in lexicographic
/// order of their element indices.
pub fn chains_with_marked_top(mp: &MarkedGradedPoset, n: usize) -> Vec<Chain> {
    let poset = mp.poset();
    let mut out = Vec::new();
    let mut rev_chain = Vec::new();
    for &top in mp.marked() {
        rev_chain.push(top);
        collect_descending(poset, n + 1, &mut rev_chain, &mut out);
        rev_chain.pop();
    }
    out.sort();
    out
}

fn collect_descending(
    poset: &GradedPoset,
    target_len: usize,
    rev_chain: &mut Vec<usize>,
    out: &mut Vec<Chain>,
) {
    if rev_chain.len() == target_len {
        let mut elements = rev_chain.clone();
        elements.reverse();
        out.push(Chain { elements });
        return;
    }
    let bottom = *rev_chain.last().expect("chain is nonempty");
    for below in 0..bottom {
        if poset.lt(below, bottom) {
            rev_chain.push(below);
            collect_descending(poset, target_len, rev_chain, out);
            rev_chain.pop();
        }
    }
}

/// True when the chain is an initial element of the chain poset and its top
/// is marked: its bottom is initial in the underlying poset and each element
/// covers its predecessor.
pub fn is_successive(mp: &MarkedGradedPoset, c: &Chain) -> bool {
    let poset = mp.poset();
    if !mp.is_marked(c.top()) {
        return false;
    }
    if !poset.is_initial(c.elements()[0]) {
        return false;
    }
    c.elements()
        .windows(2)
        .all(|w| poset.covers_up(w[0]).contains(&w[1]))
}

/// Map between marked graded posets: order preserving, rank raised by at
/// most one along covers, marked elements to marked elements.
#[derive(Debug, Clone)]
pub struct PosetMap {
    source: MarkedGradedPoset,
    target: MarkedGradedPoset,
    map: Vec<usize>,
}

impl PosetMap {
    pub fn new(
        source: MarkedGradedPoset,
        target: MarkedGradedPoset,
        map: Vec<usize>,
    ) -> Result<Self, PosetError> {
        if map.len() != source.poset().len() {
            return Err(PosetError::MapWrongLength {
                expected: source.poset().len(),
                got: map.len(),
            });
        }
        for (element, &image) in map.iter().enumerate() {
            if image >= target.poset().len() {
                return Err(PosetError::MapImageOutOfRange { element, image });
            }
        }
        for (low, ups) in source.poset().covers_up.iter().enumerate() {
            for &high in ups {
                if !target.poset().leq(map[low], map[high]) {
                    return Err(PosetError::NotOrderPreserving { low, high });
                }
                if target.poset().rank(map[high]) > target.poset().rank(map[low]) + 1 {
                    return Err(PosetError::NotGradedMap { low, high });
                }
            }
        }
        for &m in source.marked() {
            if !target.is_marked(map[m]) {
                return Err(PosetError::NotMarkedToMarked(m));
            }
        }
        Ok(PosetMap {
            source,
            target,
            map,
        })
    }

    pub fn source(&self) -> &MarkedGradedPoset {
        &self.source
    }

    pub fn target(&self) -> &MarkedGradedPoset {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

/// True when every element covered by an image is the image of a covered
/// element: for all x, the covers below f(x) lie in f(covers below x).
pub fn is_compatible(m: &PosetMap) -> bool {
    let source = m.source().poset();
    let target = m.target().poset();
    for x in 0..source.len() {
        let image_of_covered: BTreeSet<usize> = source
            .covers_down(x)
            .iter()
            .map(|&c| m.map[c])
            .collect();
        for &t in target.covers_down(m.map[x]) {
            if !image_of_covered.contains(&t) {
                return false;
            }
        }
    }
    true
}

/// Poset map on face posets induced by a hypergraph morphism, from the
/// marked face poset of the source to that of the target.
pub fn induced_face_poset_map(vm: &VertexMap) -> Result<PosetMap, PosetError> {
    let source_mp = marked_face_poset(vm.source());
    let target_mp = marked_face_poset(vm.target());
    let source_closure = crate::hypergraph::simplicial_closure(vm.source());
    let target_closure = crate::hypergraph::simplicial_closure(vm.target());
    let target_index: BTreeMap<Simplex, usize> = target_closure
        .edges()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let map = source_closure
        .edges()
        .map(|s| target_index[&vm.image_simplex(s)])
        .collect();
    PosetMap::new(source_mp, target_mp, map)
}
