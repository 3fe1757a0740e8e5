//! Hypergraphs, simplicial closures, and vertex maps.
//!
//! A hypergraph is a nonempty family of nonempty subsets of an indexed
//! vertex set. Its simplicial closure adjoins every nonempty subset of every
//! hyperedge; a hypergraph equal to its closure is a simplicial complex.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("edge {index} is empty")]
    EmptyEdge { index: usize },
    #[error("edge {index} duplicates edge {first} after normalization")]
    DuplicateEdge { index: usize, first: usize },
    #[error("edge {index} references vertex {vertex}, but only {count} vertices are declared")]
    VertexOutOfRange {
        index: usize,
        vertex: usize,
        count: usize,
    },
    #[error("vertex label {label:?} appears more than once")]
    DuplicateLabel { label: String },
    #[error("a hypergraph must have at least one edge")]
    NoEdges,
    #[error("simplex vertex list must be strictly increasing, got {0:?}")]
    UnsortedSimplex(Vec<usize>),
    #[error("not a simplicial complex: face {missing} of edge {edge} is absent")]
    MissingFace { edge: Simplex, missing: Simplex },
    #[error("vertex map must list an image for each of the {expected} source vertices, got {got}")]
    MapWrongLength { expected: usize, got: usize },
    #[error("vertex map sends vertex {vertex} to {image}, outside the {count} target vertices")]
    MapImageOutOfRange {
        vertex: usize,
        image: usize,
        count: usize,
    },
    #[error("image {image} of edge {edge} is not an edge of the target")]
    EdgeImageNotInTarget { edge: Simplex, image: Simplex },
    #[error("edge {edge} is not an edge of the map's source")]
    EdgeNotInSource { edge: Simplex },
    #[error("maps do not compose: the first map's target differs from the second map's source")]
    ComposeMismatch,
    #[error("invalid JSON: {0}")]
    Json(String),
}

/// Ordered list of distinct vertex labels; vertex identity is the index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexTable {
    labels: Vec<String>,
}

impl VertexTable {
    pub fn new(labels: Vec<String>) -> Result<Self, HypergraphError> {
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.clone()) {
                return Err(HypergraphError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        Ok(VertexTable { labels })
    }

    /// Table labeled "0", "1", ... up to `count`.
    pub fn numbered(count: usize) -> Self {
        VertexTable {
            labels: (0..count).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Nonempty set of vertex indices, stored strictly increasing.
///
/// Simplices order by (dimension, lexicographic vertex list); all bases and
/// edge listings in the crate follow that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Simplex {
    vertices: Vec<usize>,
}

impl Simplex {
    /// Accepts a strictly increasing, nonempty vertex list.
    pub fn new(vertices: Vec<usize>) -> Result<Self, HypergraphError> {
        if vertices.is_empty() {
            return Err(HypergraphError::EmptyEdge { index: 0 });
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HypergraphError::UnsortedSimplex(vertices));
        }
        Ok(Simplex { vertices })
    }

    /// Sorts and deduplicates an arbitrary nonempty vertex list.
    pub fn from_unsorted(mut vertices: Vec<usize>) -> Result<Self, HypergraphError> {
        if vertices.is_empty() {
            return Err(HypergraphError::EmptyEdge { index: 0 });
        }
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Simplex { vertices })
    }

    pub fn vertex(v: usize) -> Self {
        Simplex { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest vertex index (the last one in sorted order).
    pub fn last_vertex(&self) -> usize {
        *self.vertices.last().expect("simplex is nonempty")
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// True when `self` is a (not necessarily proper) face of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.vertices.iter();
        self.vertices
            .iter()
            .all(|v| it.by_ref().any(|w| w == v))
    }

    pub fn is_proper_face_of(&self, other: &Simplex) -> bool {
        self.len() < other.len() && self.is_face_of(other)
    }

    /// Face with the vertex at position `i` (in sorted order) removed.
    /// Returns `None` for a single vertex.
    pub fn facet(&self, i: usize) -> Option<Simplex> {
        if self.len() <= 1 {
            return None;
        }
        let mut vertices = self.vertices.clone();
        vertices.remove(i);
        Some(Simplex { vertices })
    }

    /// All codimension-one faces, in lexicographic order.
    pub fn facets(&self) -> Vec<Simplex> {
        (0..self.len()).rev().filter_map(|i| self.facet(i)).collect()
    }

    pub fn intersection_size(&self, other: &Simplex) -> usize {
        let mut count = 0;
        let (mut i, mut j) = (0, 0);
        while i < self.vertices.len() && j < other.vertices.len() {
            match self.vertices[i].cmp(&other.vertices[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct HypergraphDoc {
    vertices: Vec<String>,
    edges: Vec<Vec<usize>>,
}

/// Nonempty family of distinct simplices over a vertex table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: VertexTable,
    edges: BTreeSet<Simplex>,
}

impl Hypergraph {
    pub fn new(
        vertices: VertexTable,
        edges: BTreeSet<Simplex>,
    ) -> Result<Self, HypergraphError> {
        if edges.is_empty() {
            return Err(HypergraphError::NoEdges);
        }
        for edge in &edges {
            let last = edge.last_vertex();
            if last >= vertices.len() {
                return Err(HypergraphError::VertexOutOfRange {
                    index: 0,
                    vertex: last,
                    count: vertices.len(),
                });
            }
        }
        Ok(Hypergraph { vertices, edges })
    }

    /// Builds from raw edge lists over `count` numbered vertices,
    /// normalizing each edge as the JSON reader does.
    pub fn from_edge_lists(
        count: usize,
        edges: &[Vec<usize>],
    ) -> Result<Self, HypergraphError> {
        Self::from_doc(HypergraphDoc {
            vertices: (0..count).map(|i| i.to_string()).collect(),
            edges: edges.to_vec(),
        })
    }

    fn from_doc(doc: HypergraphDoc) -> Result<Self, HypergraphError> {
        let vertices = VertexTable::new(doc.vertices)?;
        let mut edges = BTreeSet::new();
        let mut first_index = std::collections::BTreeMap::new();
        for (index, raw) in doc.edges.iter().enumerate() {
            if raw.is_empty() {
                return Err(HypergraphError::EmptyEdge { index });
            }
            let edge = Simplex::from_unsorted(raw.clone())?;
            let last = edge.last_vertex();
            if last >= vertices.len() {
                return Err(HypergraphError::VertexOutOfRange {
                    index,
                    vertex: last,
                    count: vertices.len(),
                });
            }
            if let Some(&first) = first_index.get(&edge) {
                return Err(HypergraphError::DuplicateEdge { index, first });
            }
            first_index.insert(edge.clone(), index);
            edges.insert(edge);
        }
        Hypergraph::new(vertices, edges)
    }

    pub fn from_json(text: &str) -> Result<Self, HypergraphError> {
        let doc: HypergraphDoc =
            serde_json::from_str(text).map_err(|e| HypergraphError::Json(e.to_string()))?;
        Self::from_doc(doc)
    }

    pub fn to_json(&self) -> String {
        let doc = HypergraphDoc {
            vertices: self.vertices.labels().to_vec(),
            edges: self
                .edges
                .iter()
                .map(|e| e.vertices().to_vec())
                .collect(),
        };
        serde_json::to_string(&doc).expect("hypergraph serialization cannot fail")
    }

    pub fn vertex_table(&self) -> &VertexTable {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (dimension, lexicographic) order.
    pub fn edges(&self) -> impl Iterator<Item = &Simplex> {
        self.edges.iter()
    }

    pub fn edge_set(&self) -> &BTreeSet<Simplex> {
        &self.edges
    }

    pub fn edges_of_dim(&self, dim: usize) -> impl Iterator<Item = &Simplex> {
        self.edges.iter().filter(move |e| e.dim() == dim)
    }

    pub fn contains_edge(&self, s: &Simplex) -> bool {
        self.edges.contains(s)
    }

    pub fn max_dim(&self) -> usize {
        self.edges
            .iter()
            .next_back()
            .map(|e| e.dim())
            .expect("hypergraph has at least one edge")
    }
}

/// Hypergraph that is downward closed: every nonempty subset of an edge is
/// an edge. Constructed only through validating paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    inner: Hypergraph,
}

impl SimplicialComplex {
    /// Validates downward closure.
    pub fn try_new(h: Hypergraph) -> Result<Self, HypergraphError> {
        // Checking codimension-one faces suffices: missing deeper faces force
        // a missing codimension-one face somewhere along the way.
        for edge in &h.edges {
            for facet in edge.facets() {
                if !h.edges.contains(&facet) {
                    return Err(HypergraphError::MissingFace {
                        edge: edge.clone(),
                        missing: facet,
                    });
                }
            }
        }
        Ok(SimplicialComplex { inner: h })
    }

    pub fn as_hypergraph(&self) -> &Hypergraph {
        &self.inner
    }

    pub fn into_hypergraph(self) -> Hypergraph {
        self.inner
    }

    pub fn edges(&self) -> impl Iterator<Item = &Simplex> {
        self.inner.edges()
    }

    pub fn edge_set(&self) -> &BTreeSet<Simplex> {
        self.inner.edge_set()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.inner.contains_edge(s)
    }

    pub fn vertex_table(&self) -> &VertexTable {
        self.inner.vertex_table()
    }

    pub fn max_dim(&self) -> usize {
        self.inner.max_dim()
    }
}

pub fn is_simplicial_complex(h: &Hypergraph) -> bool {
    SimplicialComplex::try_new(h.clone()).is_ok()
}

/// Smallest simplicial complex containing `h`: all nonempty subsets of its
/// edges, over the same vertex table.
pub fn simplicial_closure(h: &Hypergraph) -> SimplicialComplex {
    let mut closed = BTreeSet::new();
    for edge in &h.edges {
        let verts = edge.vertices();
        let k = verts.len();
        assert!(k <= 62, "closure of a {k}-vertex edge exceeds supported size");
        for mask in 1u64..(1u64 << k) {
            let subset: Vec<usize> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| verts[i])
                .collect();
            closed.insert(Simplex { vertices: subset });
        }
    }
    SimplicialComplex {
        inner: Hypergraph {
            vertices: h.vertices.clone(),
            edges: closed,
        },
    }
}

/// Total map of vertex indices from one hypergraph to another that sends
/// every source edge to a target edge (a hypergraph morphism).
#[derive(Debug, Clone)]
pub struct VertexMap {
    source: Hypergraph,
    target: Hypergraph,
    map: Vec<usize>,
}

impl VertexMap {
    pub fn new(
        source: Hypergraph,
        target: Hypergraph,
        map: Vec<usize>,
    ) -> Result<Self, HypergraphError> {
        if map.len() != source.vertex_count() {
            return Err(HypergraphError::MapWrongLength {
                expected: source.vertex_count(),
                got: map.len(),
            });
        }
        for (vertex, &image) in map.iter().enumerate() {
            if image >= target.vertex_count() {
                return Err(HypergraphError::MapImageOutOfRange {
                    vertex,
                    image,
                    count: target.vertex_count(),
                });
            }
        }
        let candidate = VertexMap {
            source,
            target,
            map,
        };
        for edge in &candidate.source.edges {
            let image = candidate.image_simplex(edge);
            if !candidate.target.contains_edge(&image) {
                return Err(HypergraphError::EdgeImageNotInTarget {
                    edge: edge.clone(),
                    image,
                });
            }
        }
        Ok(candidate)
    }

    pub fn identity(h: &Hypergraph) -> Self {
        VertexMap {
            source: h.clone(),
            target: h.clone(),
            map: (0..h.vertex_count()).collect(),
        }
    }

    pub fn source(&self) -> &Hypergraph {
        &self.source
    }

    pub fn target(&self) -> &Hypergraph {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image_vertex(&self, v: usize) -> usize {
        self.map[v]
    }

    /// Set image of a simplex; duplicate images collapse.
    pub fn image_simplex(&self, s: &Simplex) -> Simplex {
        Simplex::from_unsorted(s.vertices().iter().map(|&v| self.map[v]).collect())
            .expect("image of a nonempty simplex is nonempty")
    }

    /// Applies the map to a hypergraph over the source vertex table; every
    /// image edge must be an edge of the target.
    pub fn apply(&self, h: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
        let mut edges = BTreeSet::new();
        for edge in &h.edges {
            if edge.last_vertex() >= self.map.len() {
                return Err(HypergraphError::VertexOutOfRange {
                    index: 0,
                    vertex: edge.last_vertex(),
                    count: self.map.len(),
                });
            }
            let image = self.image_simplex(edge);
            if !self.target.contains_edge(&image) {
                return Err(HypergraphError::EdgeImageNotInTarget {
                    edge: edge.clone(),
                    image,
                });
            }
            edges.insert(image);
        }
        Hypergraph::new(self.target.vertices.clone(), edges)
    }

    /// Image hypergraph of the whole source.
    pub fn image(&self) -> Hypergraph {
        self.apply(&self.source)
            .expect("source edges map to target edges by construction")
    }

    pub fn compose(&self, other: &VertexMap) -> Result<VertexMap, HypergraphError> {
        // self: A -> B, other: B -> C; result: A -> C.
        if other.source.vertices.labels() != self.target.vertices.labels()
            || other.source.edges != self.target.edges
        {
            return Err(HypergraphError::ComposeMismatch);
        }
        VertexMap::new(
            self.source.clone(),
            other.target.clone(),
            self.map.iter().map(|&v| other.map[v]).collect(),
        )
    }
}

/// Applies a morphism to a hypergraph (free-function form of `VertexMap::apply`).
pub fn apply_morphism(m: &VertexMap, h: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
    m.apply(h)
}
