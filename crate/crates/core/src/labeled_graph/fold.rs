//! Fold detection, single folds, and the tightening loop.

use std::fmt;

use super::{Edge, EdgeId, LabeledGraph, SubgraphMarker, VertexId};
use crate::error::Error;

/// One fold step.
///
/// `kept` and `removed` are edge ids in the graph the fold was applied to;
/// `survivor` is the id of the identified edge in the renumbered result.
/// `merged` records the far endpoints that were identified (pre-fold ids,
/// smaller id first); it is `None` for bigons, whose endpoints already agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldRecord {
    pub kept: EdgeId,
    pub removed: EdgeId,
    pub survivor: EdgeId,
    pub merged: Option<(VertexId, VertexId)>,
}

impl FoldRecord {
    /// Post-fold id of a pre-fold edge; the removed edge maps to the survivor.
    pub fn map_edge(&self, e: EdgeId) -> EdgeId {
        if e == self.removed {
            return self.survivor;
        }
        EdgeId(e.0 - (e.0 > self.removed.0) as usize)
    }

    /// Post-fold id of a pre-fold vertex.
    pub fn map_vertex(&self, v: VertexId) -> VertexId {
        match self.merged {
            None => v,
            Some((keep, drop)) => {
                let v = if v == drop { keep } else { v };
                VertexId(v.0 - (v.0 > drop.0) as usize)
            }
        }
    }

    /// Pre-fold ids of a post-fold edge (two for the survivor, one otherwise).
    pub fn edge_preimages(&self, e: EdgeId) -> (EdgeId, Option<EdgeId>) {
        if e == self.survivor {
            (self.kept, Some(self.removed))
        } else {
            (EdgeId(e.0 + (e.0 >= self.removed.0) as usize), None)
        }
    }

    /// Transport a subgraph marker through this fold: the image of the marked
    /// subgraph in the folded graph.
    pub fn transport(&self, marker: &SubgraphMarker) -> SubgraphMarker {
        SubgraphMarker {
            vertices: marker.vertices.iter().map(|&v| self.map_vertex(v)).collect(),
            edges: marker.edges.iter().map(|&e| self.map_edge(e)).collect(),
        }
    }
}

impl fmt::Display for FoldRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FOLD {} {} -> {}", self.kept, self.removed, self.survivor)
    }
}

/// An ordered list of folds; replaying it from the input graph reproduces
/// the output graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoldTrace {
    pub records: Vec<FoldRecord>,
}

impl FoldTrace {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// All intermediate graphs, starting with `initial` and ending with the
    /// tight result.
    pub fn replay(&self, initial: &LabeledGraph) -> Vec<LabeledGraph> {
        let mut out = vec![initial.clone()];
        for rec in &self.records {
            let (next, check) = out
                .last()
                .unwrap()
                .fold(rec.kept, rec.removed)
                .expect("trace replays on its own input");
            debug_assert_eq!(&check, rec);
            out.push(next);
        }
        out
    }
}

impl fmt::Display for FoldTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl LabeledGraph {
    /// First violation of tightness under the deterministic scan order:
    /// vertices by ascending id, labels by alphabet order, outgoing before
    /// incoming; within a site the two lowest edge ids.
    pub fn find_violation(&self) -> Option<(EdgeId, EdgeId)> {
        self.find_violation_among(|_| true)
    }

    /// Same scan restricted to edges accepted by `pred`.
    ///
    /// Edge ends are packed into sortable keys ordered by (vertex, label,
    /// direction, edge id); the first adjacent pair sharing a site is the
    /// scan-order-first violation.
    pub fn find_violation_among(&self, pred: impl Fn(EdgeId) -> bool) -> Option<(EdgeId, EdgeId)> {
        const EDGE_BITS: u32 = 24;
        const EDGE_MASK: u64 = (1 << EDGE_BITS) - 1;
        debug_assert!(self.num_vertices < (1 << 24));
        debug_assert!(self.edges.len() < (1 << EDGE_BITS));
        debug_assert!(self.num_labels < (1 << 15));
        let pack = |v: usize, label: usize, incoming: u64, e: usize| -> u64 {
            ((v as u64) << 40) | ((label as u64) << 25) | (incoming << EDGE_BITS) | e as u64
        };
        let mut ends: Vec<u64> = Vec::with_capacity(self.edges.len() * 2);
        for (i, edge) in self.edges.iter().enumerate() {
            if !pred(EdgeId(i)) {
                continue;
            }
            ends.push(pack(edge.origin.0, edge.label, 0, i));
            ends.push(pack(edge.terminus.0, edge.label, 1, i));
        }
        ends.sort_unstable();
        ends.windows(2)
            .find(|w| w[0] & !EDGE_MASK == w[1] & !EDGE_MASK)
            .map(|w| (EdgeId((w[0] & EDGE_MASK) as usize), EdgeId((w[1] & EDGE_MASK) as usize)))
    }

    /// `true` iff the labeling is an immersion.
    pub fn is_tight(&self) -> bool {
        self.find_violation().is_none()
    }

    /// Identify `keep` with `remove` (and their far endpoints), renumbering
    /// ids canonically. The pair must be distinct, same-labeled, and share an
    /// origin or a terminus.
    pub fn fold(&self, keep: EdgeId, remove: EdgeId) -> Result<(LabeledGraph, FoldRecord), Error> {
        let illegal = || Error::IllegalFold(keep.0, remove.0);
        if keep == remove || keep.0 >= self.edges.len() || remove.0 >= self.edges.len() {
            return Err(illegal());
        }
        let (ek, er) = (self.edges[keep.0], self.edges[remove.0]);
        if ek.label != er.label {
            return Err(illegal());
        }
        let share_origin = ek.origin == er.origin;
        let share_terminus = ek.terminus == er.terminus;
        let merged = if share_origin && share_terminus {
            None
        } else if share_origin {
            Some((ek.terminus, er.terminus))
        } else if share_terminus {
            Some((ek.origin, er.origin))
        } else {
            return Err(illegal());
        };
        let merged = merged.map(|(a, b)| (a.min(b), a.max(b)));

        let map_vertex = |v: VertexId| match merged {
            None => v,
            Some((kept_v, drop_v)) => {
                let v = if v == drop_v { kept_v } else { v };
                VertexId(v.0 - (v.0 > drop_v.0) as usize)
            }
        };
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != remove.0)
            .map(|(_, e)| Edge {
                origin: map_vertex(e.origin),
                terminus: map_vertex(e.terminus),
                label: e.label,
            })
            .collect();
        let record = FoldRecord {
            kept: keep,
            removed: remove,
            survivor: EdgeId(keep.0 - (keep.0 > remove.0) as usize),
            merged,
        };
        let graph = LabeledGraph {
            num_labels: self.num_labels,
            num_vertices: self.num_vertices - merged.is_some() as usize,
            edges,
            basepoint: map_vertex(self.basepoint),
        };
        Ok((graph, record))
    }

    /// Fold until tight. Deterministic given the scan order; the result is
    /// tight with rank at most the input's, with equality iff the carried
    /// map on fundamental groups is injective.
    pub fn tighten(&self) -> (LabeledGraph, FoldTrace) {
        let mut g = self.clone();
        let mut trace = FoldTrace::default();
        while let Some((e1, e2)) = g.find_violation() {
            let (next, rec) = g.fold(e1, e2).expect("violation is a legal fold");
            trace.records.push(rec);
            g = next;
        }
        (g, trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{Alphabet, Word};

    fn alpha() -> Alphabet {
        Alphabet::new(["e1", "e2", "e3"]).unwrap()
    }

    fn words(a: &Alphabet, ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|s| a.parse_word(s).unwrap()).collect()
    }

    #[test]
    fn single_loop_is_tight() {
        let a = alpha();
        let g = LabeledGraph::bouquet(3, &words(&a, &["e1"])).unwrap();
        assert_eq!(g.find_violation(), None);
        let (tight, trace) = g.tighten();
        assert_eq!(tight, g);
        assert!(trace.is_empty());
    }

    #[test]
    fn double_loop_folds_to_one() {
        let a = alpha();
        let g = LabeledGraph::bouquet(3, &words(&a, &["e1", "e1"])).unwrap();
        assert_eq!(g.rank(), 2);
        let pair = g.find_violation().unwrap();
        assert_eq!(pair, (EdgeId(0), EdgeId(1)));
        let (folded, rec) = g.fold(pair.0, pair.1).unwrap();
        assert_eq!(folded.rank(), 1);
        assert_eq!(folded.num_edges(), 1);
        assert_eq!(rec.merged, None); // bigon
    }

    #[test]
    fn leaf_edges_fold_without_rank_drop() {
        // two e1-edges from the basepoint to distinct leaves
        let g = LabeledGraph {
            num_labels: 1,
            num_vertices: 3,
            edges: vec![
                Edge { origin: VertexId(0), terminus: VertexId(1), label: 0 },
                Edge { origin: VertexId(0), terminus: VertexId(2), label: 0 },
            ],
            basepoint: VertexId(0),
        };
        let (folded, rec) = g.fold(EdgeId(0), EdgeId(1)).unwrap();
        assert_eq!(folded.num_edges(), 1);
        assert_eq!(folded.num_vertices(), 2);
        assert_eq!(folded.rank(), g.rank());
        assert_eq!(rec.merged, Some((VertexId(1), VertexId(2))));
    }

    #[test]
    fn fold_rejects_illegal_pairs() {
        let a = alpha();
        let g = LabeledGraph::bouquet(3, &words(&a, &["e1 e2"])).unwrap();
        assert!(g.fold(EdgeId(0), EdgeId(0)).is_err());
        assert!(g.fold(EdgeId(0), EdgeId(1)).is_err()); // different labels
    }

    #[test]
    fn example_wedge_tightens_to_rank_3() {
        let a = alpha();
        let ws = words(&a, &["e2 e1 e3", "e2 e3 e1", "e3^-1 e2 e1", "e2 e3 e2^-1 e3"]);
        let g = LabeledGraph::bouquet(3, &ws).unwrap();
        let (tight, trace) = g.tighten();
        assert!(tight.is_tight());
        assert_eq!(tight.rank(), 3);
        assert_eq!(trace.len(), g.num_edges() - tight.num_edges());
        // first fold removes one edge
        let step1 = trace.replay(&g)[1].clone();
        assert_eq!(step1.num_edges(), 12);
    }

    #[test]
    fn duplicate_word_drops_rank() {
        let a = alpha();
        let g = LabeledGraph::bouquet(3, &words(&a, &["e1", "e1"])).unwrap();
        let (tight, _) = g.tighten();
        assert_eq!(tight.rank(), 1);
    }

    #[test]
    fn trace_lines_format() {
        let a = alpha();
        let g = LabeledGraph::bouquet(3, &words(&a, &["e1", "e1"])).unwrap();
        let (_, trace) = g.tighten();
        assert_eq!(trace.to_string(), "FOLD e0 e1 -> e0\n");
    }
}
