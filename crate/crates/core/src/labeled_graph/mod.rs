//! Based, edge-labeled, oriented graphs and the Stallings fold machinery.
//!
//! A labeled graph carries a map to the rose on the alphabet; it is *tight*
//! when that map is an immersion, i.e. at each vertex at most one incident
//! edge per (label, direction). Tight graphs are deterministic partial
//! automata: membership in the carried subgroup is decided by tracing a word
//! from the basepoint.
//!
//! Vertex and edge ids are renumbered canonically after every fold so that
//! identical inputs produce byte-identical graphs and traces.

mod dot;
mod fold;
mod subgroup;
mod tree;

pub use fold::{FoldRecord, FoldTrace};
pub use subgroup::SubgroupGraph;
pub use tree::{expand_symbols, Step, TracePath, TreeData};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::freegroup::{Sign, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// An oriented labeled edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub origin: VertexId,
    pub terminus: VertexId,
    pub label: usize,
}

/// A finite connected based graph with oriented edges labeled by generator
/// indices of an alphabet of size `num_labels`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    num_labels: usize,
    num_vertices: usize,
    edges: Vec<Edge>,
    basepoint: VertexId,
}

/// A subset of a graph's vertices and edges, used to mark a subgraph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubgraphMarker {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl SubgraphMarker {
    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }
}

/// Position of an edge inside the wedge of circles it was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CirclePosition {
    pub circle: usize,
    pub index: usize,
}

impl LabeledGraph {
    /// The graph with a single basepoint vertex and no edges.
    pub fn single_vertex(num_labels: usize) -> LabeledGraph {
        LabeledGraph { num_labels, num_vertices: 1, edges: Vec::new(), basepoint: VertexId(0) }
    }

    /// Build a graph from explicit parts. Endpoint and label ranges are
    /// validated; connectedness is the caller's responsibility.
    pub fn from_parts(
        num_labels: usize,
        num_vertices: usize,
        edges: Vec<Edge>,
        basepoint: VertexId,
    ) -> Result<LabeledGraph, Error> {
        if basepoint.0 >= num_vertices {
            return Err(Error::Internal(format!("basepoint {basepoint} out of range")));
        }
        for e in &edges {
            if e.origin.0 >= num_vertices || e.terminus.0 >= num_vertices {
                return Err(Error::Internal(format!("edge endpoint out of range: {e:?}")));
            }
            if e.label >= num_labels {
                return Err(Error::GeneratorOutOfRange { index: e.label, rank: num_labels });
            }
        }
        Ok(LabeledGraph { num_labels, num_vertices, edges, basepoint })
    }

    /// Wedge of subdivided circles, one per word, joined at the basepoint.
    ///
    /// A word of length L contributes L edges and L-1 interior vertices; the
    /// circle reads the word when traversed from the basepoint. Empty words
    /// are rejected.
    pub fn bouquet(num_labels: usize, words: &[Word]) -> Result<LabeledGraph, Error> {
        let mut g = LabeledGraph::single_vertex(num_labels);
        for w in words {
            g.wedge_circle(w)?;
        }
        Ok(g)
    }

    /// Like [`LabeledGraph::bouquet`], also returning each edge's circle and
    /// position within it.
    pub fn bouquet_with_layout(
        num_labels: usize,
        words: &[Word],
    ) -> Result<(LabeledGraph, Vec<CirclePosition>), Error> {
        let g = LabeledGraph::bouquet(num_labels, words)?;
        let mut layout = Vec::with_capacity(g.num_edges());
        for (circle, w) in words.iter().enumerate() {
            for index in 0..w.len() {
                layout.push(CirclePosition { circle, index });
            }
        }
        Ok((g, layout))
    }

    /// Attach one more circle reading `w` at the basepoint. Returns the ids
    /// of the new edges in letter order.
    pub(crate) fn wedge_circle(&mut self, w: &Word) -> Result<Vec<EdgeId>, Error> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(g) = w.max_gen() {
            if g >= self.num_labels {
                return Err(Error::GeneratorOutOfRange { index: g, rank: self.num_labels });
            }
        }
        let len = w.len();
        let first_interior = self.num_vertices;
        self.num_vertices += len - 1;
        let mut ids = Vec::with_capacity(len);
        for (k, l) in w.letters().iter().enumerate() {
            let from = if k == 0 { self.basepoint } else { VertexId(first_interior + k - 1) };
            let to = if k == len - 1 { self.basepoint } else { VertexId(first_interior + k) };
            let edge = match l.sign {
                Sign::Plus => Edge { origin: from, terminus: to, label: l.gen },
                Sign::Minus => Edge { origin: to, terminus: from, label: l.gen },
            };
            ids.push(EdgeId(self.edges.len()));
            self.edges.push(edge);
        }
        Ok(ids)
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn basepoint(&self) -> VertexId {
        self.basepoint
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// First Betti number `|E| - |V| + 1` (the graph is connected).
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.num_vertices
    }

    /// Extract a marked subgraph as a standalone graph. Returns the graph
    /// together with maps from its vertex/edge ids back to this graph's ids.
    ///
    /// The marker must contain the basepoint and describe a connected
    /// subgraph for the result to be meaningful.
    pub fn extract(&self, marker: &SubgraphMarker) -> (LabeledGraph, Vec<VertexId>, Vec<EdgeId>) {
        let vertex_ids: Vec<VertexId> = marker.vertices.iter().copied().collect();
        let edge_ids: Vec<EdgeId> = marker.edges.iter().copied().collect();
        let local = |v: VertexId| {
            VertexId(vertex_ids.binary_search(&v).expect("marker edge endpoint outside marker"))
        };
        let edges = edge_ids
            .iter()
            .map(|&e| {
                let ed = self.edge(e);
                Edge { origin: local(ed.origin), terminus: local(ed.terminus), label: ed.label }
            })
            .collect();
        let g = LabeledGraph {
            num_labels: self.num_labels,
            num_vertices: vertex_ids.len(),
            edges,
            basepoint: local(self.basepoint),
        };
        (g, vertex_ids, edge_ids)
    }

    /// Marker covering the whole graph.
    pub fn full_marker(&self) -> SubgraphMarker {
        SubgraphMarker {
            vertices: (0..self.num_vertices).map(VertexId).collect(),
            edges: (0..self.edges.len()).map(EdgeId).collect(),
        }
    }

    /// Number of edge ends at `v` (a loop counts twice).
    pub fn valence(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| (e.origin == v) as usize + (e.terminus == v) as usize)
            .sum()
    }

    /// Repeatedly delete valence-1 vertices other than the basepoint,
    /// together with their incident edges.
    pub fn core(&self) -> LabeledGraph {
        let mut g = self.clone();
        loop {
            let leaf = (0..g.num_vertices)
                .map(VertexId)
                .find(|&v| v != g.basepoint && g.valence(v) == 1);
            let Some(v) = leaf else { break };
            let e = g
                .edges
                .iter()
                .position(|ed| ed.origin == v || ed.terminus == v)
                .expect("valence-1 vertex has an incident edge");
            g.edges.remove(e);
            g.remove_vertex(v);
        }
        g
    }

    /// Drop an isolated vertex, shifting higher ids down by one.
    fn remove_vertex(&mut self, v: VertexId) {
        debug_assert_eq!(self.valence(v), 0);
        debug_assert_ne!(v, self.basepoint);
        let shift = |u: VertexId| if u.0 > v.0 { VertexId(u.0 - 1) } else { u };
        for e in &mut self.edges {
            e.origin = shift(e.origin);
            e.terminus = shift(e.terminus);
        }
        self.basepoint = shift(self.basepoint);
        self.num_vertices -= 1;
    }

    /// Decide based isomorphism of two tight graphs by synchronized
    /// traversal from the basepoints.
    ///
    /// Two subgroups are equal iff their tightened, cored graphs are
    /// based-isomorphic.
    pub fn is_isomorphic_based(&self, other: &LabeledGraph) -> bool {
        if self.num_vertices != other.num_vertices || self.edges.len() != other.edges.len() {
            return false;
        }
        let t1 = tree::Traverser::new(self);
        let t2 = tree::Traverser::new(other);
        let mut map = vec![None; self.num_vertices];
        let mut rmap = vec![None; other.num_vertices];
        map[self.basepoint.0] = Some(other.basepoint);
        rmap[other.basepoint.0] = Some(self.basepoint);
        let mut queue = std::collections::VecDeque::from([(self.basepoint, other.basepoint)]);
        while let Some((u1, u2)) = queue.pop_front() {
            for label in 0..self.num_labels.max(other.num_labels) {
                for outgoing in [true, false] {
                    let e1 = t1.step(u1, label, outgoing);
                    let e2 = t2.step(u2, label, outgoing);
                    match (e1, e2) {
                        (None, None) => {}
                        (Some(a), Some(b)) => {
                            let f1 = self.far_end(a, u1, outgoing);
                            let f2 = other.far_end(b, u2, outgoing);
                            match (map[f1.0], rmap[f2.0]) {
                                (None, None) => {
                                    map[f1.0] = Some(f2);
                                    rmap[f2.0] = Some(f1);
                                    queue.push_back((f1, f2));
                                }
                                (Some(m), Some(r)) if m == f2 && r == f1 => {}
                                _ => return false,
                            }
                        }
                        _ => return false,
                    }
                }
            }
        }
        map.iter().all(|m| m.is_some())
    }

    fn far_end(&self, e: EdgeId, from: VertexId, outgoing: bool) -> VertexId {
        let ed = self.edge(e);
        if outgoing {
            debug_assert_eq!(ed.origin, from);
            ed.terminus
        } else {
            debug_assert_eq!(ed.terminus, from);
            ed.origin
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Alphabet;

    fn alpha() -> Alphabet {
        Alphabet::new(["e1", "e2", "e3"]).unwrap()
    }

    fn words(a: &Alphabet, ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|s| a.parse_word(s).unwrap()).collect()
    }

    #[test]
    fn bouquet_counts() {
        let a = alpha();
        let single = LabeledGraph::bouquet(3, &words(&a, &["e1"])).unwrap();
        assert_eq!((single.num_vertices(), single.num_edges(), single.rank()), (1, 1, 1));

        let ws = words(&a, &["e2 e1 e3", "e2 e3 e1", "e3^-1 e2 e1", "e2 e3 e2^-1 e3"]);
        let g = LabeledGraph::bouquet(3, &ws).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.rank()), (10, 13, 4));

        let empty = LabeledGraph::bouquet(3, &[]).unwrap();
        assert_eq!((empty.num_vertices(), empty.num_edges(), empty.rank()), (1, 0, 0));

        assert_eq!(LabeledGraph::bouquet(3, &[Word::empty()]), Err(Error::EmptyWord));
    }

    #[test]
    fn rank_of_tree_is_zero() {
        // path of two edges: e1 then e2, not closing up
        let g = LabeledGraph {
            num_labels: 2,
            num_vertices: 3,
            edges: vec![
                Edge { origin: VertexId(0), terminus: VertexId(1), label: 0 },
                Edge { origin: VertexId(1), terminus: VertexId(2), label: 1 },
            ],
            basepoint: VertexId(0),
        };
        assert_eq!(g.rank(), 0);
        assert_eq!(g.core().num_vertices(), 1);
        assert_eq!(g.core().num_edges(), 0);
    }

    #[test]
    fn core_keeps_basepoint() {
        let a = alpha();
        let g = LabeledGraph::bouquet(3, &words(&a, &["e1"])).unwrap();
        let cored = g.core();
        assert_eq!(cored, g);
    }

    #[test]
    fn isomorphism_of_inverse_circles() {
        let a = alpha();
        let g1 = LabeledGraph::bouquet(3, &words(&a, &["e1 e2"])).unwrap();
        let g2 = LabeledGraph::bouquet(3, &words(&a, &["e2^-1 e1^-1"])).unwrap();
        assert!(g1.is_isomorphic_based(&g2));
        let g3 = LabeledGraph::bouquet(3, &words(&a, &["e2 e1"])).unwrap();
        assert!(!g1.is_isomorphic_based(&g3));
    }
}
