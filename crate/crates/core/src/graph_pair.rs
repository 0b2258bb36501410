//! Labeled graph pairs `(Z, X)` and the relative tightening procedure.
//!
//! `X` is a connected based subgraph of `Z`, represented as a marked subset
//! of `Z`'s vertices and edges so that the image of `X` under a fold is
//! literally the transported marker. A pair is *invariant* under an
//! endomorphism `phi` when `phi` maps the subgroup of `X` into the subgroup
//! of `Z`; the tightening loop preserves invariance by wedging a loop for
//! the image of the new subgroup element created by an exceptional fold
//! whenever that image is not already carried by `Z`.

use crate::error::Error;
use crate::freegroup::{Endo, Word};
use crate::labeled_graph::{
    EdgeId, FoldRecord, LabeledGraph, SubgraphMarker, VertexId,
};

/// How a fold of `Z` acts on the marked subgraph `X`.
///
/// - `Subgraph`: both edges lie in `X`, so the fold restricts to a fold of `X`.
/// - `Exceptional`: the fold identifies two distinct vertices of `X` from
///   outside `X`, raising `X`'s rank.
/// - `Plain`: `X` is carried homeomorphically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoldClass {
    Subgraph,
    Exceptional { p1: VertexId, p2: VertexId },
    Plain,
}

/// One step of the relative tightening procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFoldRecord {
    pub record: FoldRecord,
    pub class: FoldClass,
    /// The new subgroup element created by an exceptional fold.
    pub delta: Option<Word>,
    /// Label of the circle wedged onto `Z`, when the image of `delta` was
    /// not already carried.
    pub added_loop: Option<Word>,
}

impl PairFoldRecord {
    /// Line form: the fold record, the class, and any created elements.
    pub fn format(&self, alphabet: &crate::freegroup::Alphabet) -> String {
        let mut line = self.record.to_string();
        match self.class {
            FoldClass::Subgraph => line.push_str(" subgraph"),
            FoldClass::Plain => line.push_str(" plain"),
            FoldClass::Exceptional { .. } => line.push_str(" exceptional"),
        }
        if let Some(delta) = &self.delta {
            line.push_str(&format!(" delta={}", alphabet.format_word(delta)));
        }
        if let Some(w) = &self.added_loop {
            line.push_str(&format!(" loop={}", alphabet.format_word(w)));
        }
        line
    }
}

/// Ordered list of pair fold steps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairTrace {
    pub records: Vec<PairFoldRecord>,
}

impl PairTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn exceptional_count(&self) -> usize {
        self.records
            .iter()
            .filter(|r| matches!(r.class, FoldClass::Exceptional { .. }))
            .count()
    }

    pub fn added_loops(&self) -> Vec<&Word> {
        self.records.iter().filter_map(|r| r.added_loop.as_ref()).collect()
    }

    /// All intermediate pairs, starting from `initial`.
    pub fn replay(&self, initial: &LabeledGraphPair, phi: &Endo) -> Vec<LabeledGraphPair> {
        let mut out = vec![initial.clone()];
        for rec in &self.records {
            let (next, check) = out
                .last()
                .unwrap()
                .fold_and_add_loop(rec.record.kept, rec.record.removed, phi)
                .expect("trace replays on its own input");
            debug_assert_eq!(&check, rec);
            out.push(next);
        }
        out
    }
}

/// A labeled graph pair: `Z` together with the marker of the subgraph `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraphPair {
    z: LabeledGraph,
    x: SubgraphMarker,
}

impl LabeledGraphPair {
    /// The pair `(X(A ∪ phi(A)), X(A))`: one circle per word of `A` (marked
    /// as `X`) followed by one circle per image word. Invariant for the
    /// subgroup generated by the stable letter and `A` by construction.
    ///
    /// Duplicate words keep separate circles.
    pub fn initial(phi: &Endo, a: &[Word]) -> Result<LabeledGraphPair, Error> {
        let mut z = LabeledGraph::single_vertex(phi.rank());
        let mut x = SubgraphMarker::default();
        x.vertices.insert(z.basepoint());
        for w in a {
            let edges = z.wedge_circle(w)?;
            x.edges.extend(edges.iter().copied());
            for &e in &edges {
                x.vertices.insert(z.edge(e).origin);
                x.vertices.insert(z.edge(e).terminus);
            }
        }
        for w in a {
            z.wedge_circle(&phi.apply(w))?;
        }
        Ok(LabeledGraphPair { z, x })
    }

    /// A nested bouquet pair: circles for `outer` with the first
    /// `inner_count` circles marked as `X`. The inner words must be a prefix
    /// of `outer`.
    pub fn nested_bouquet(
        num_labels: usize,
        outer: &[Word],
        inner_count: usize,
    ) -> Result<LabeledGraphPair, Error> {
        assert!(inner_count <= outer.len());
        let mut z = LabeledGraph::single_vertex(num_labels);
        let mut x = SubgraphMarker::default();
        x.vertices.insert(z.basepoint());
        for (i, w) in outer.iter().enumerate() {
            let edges = z.wedge_circle(w)?;
            if i < inner_count {
                x.edges.extend(edges.iter().copied());
                for &e in &edges {
                    x.vertices.insert(z.edge(e).origin);
                    x.vertices.insert(z.edge(e).terminus);
                }
            }
        }
        Ok(LabeledGraphPair { z, x })
    }

    /// Wrap an explicit graph and marker. The marker must describe a
    /// connected subgraph containing the basepoint.
    pub fn from_parts(z: LabeledGraph, x: SubgraphMarker) -> LabeledGraphPair {
        debug_assert!(x.contains_vertex(z.basepoint()));
        LabeledGraphPair { z, x }
    }

    pub fn z(&self) -> &LabeledGraph {
        &self.z
    }

    pub fn x_marker(&self) -> &SubgraphMarker {
        &self.x
    }

    /// The subgraph as a standalone graph, with maps back to `Z`'s ids.
    pub fn x_graph(&self) -> (LabeledGraph, Vec<VertexId>, Vec<EdgeId>) {
        self.z.extract(&self.x)
    }

    pub fn x_rank(&self) -> usize {
        self.x.edges.len() + 1 - self.x.vertices.len()
    }

    /// `rank(Z) - rank(X)`.
    pub fn relative_rank(&self) -> usize {
        self.z.rank() - self.x_rank()
    }

    /// Whether `Z` (and hence `X`) is tight.
    pub fn is_tight(&self) -> bool {
        self.z.is_tight()
    }

    /// Classify a legal fold pair of `Z` against the marker.
    pub fn classify_fold(&self, e1: EdgeId, e2: EdgeId) -> Result<FoldClass, Error> {
        let illegal = || Error::IllegalFold(e1.0, e2.0);
        if e1 == e2 || e1.0 >= self.z.num_edges() || e2.0 >= self.z.num_edges() {
            return Err(illegal());
        }
        let (a, b) = (*self.z.edge(e1), *self.z.edge(e2));
        if a.label != b.label {
            return Err(illegal());
        }
        let share_origin = a.origin == b.origin;
        let share_terminus = a.terminus == b.terminus;
        if !share_origin && !share_terminus {
            return Err(illegal());
        }
        if self.x.contains_edge(e1) && self.x.contains_edge(e2) {
            return Ok(FoldClass::Subgraph);
        }
        let bigon = share_origin && share_terminus;
        if bigon {
            return Ok(FoldClass::Plain);
        }
        let (p1, p2) = if share_origin { (a.terminus, b.terminus) } else { (a.origin, b.origin) };
        if p1 != p2 && self.x.contains_vertex(p1) && self.x.contains_vertex(p2) {
            Ok(FoldClass::Exceptional { p1, p2 })
        } else {
            Ok(FoldClass::Plain)
        }
    }

    /// Fold `Z` and restore invariance if the fold was exceptional.
    ///
    /// For an exceptional fold identifying `p1, p2` in `X`, the element
    /// `delta` reads the `X`-spanning-tree path to `p1` against the path to
    /// `p2`; if `phi(delta)` is not carried by the folded graph, the circle
    /// for it is wedged onto the basepoint (outside the subgraph marker).
    pub fn fold_and_add_loop(
        &self,
        e1: EdgeId,
        e2: EdgeId,
        phi: &Endo,
    ) -> Result<(LabeledGraphPair, PairFoldRecord), Error> {
        let class = self.classify_fold(e1, e2)?;
        let delta = match class {
            FoldClass::Exceptional { p1, p2 } => {
                let (xg, xv, _) = self.x_graph();
                let local = |v: VertexId| {
                    VertexId(xv.binary_search(&v).expect("exceptional endpoints lie in X"))
                };
                let tree = xg.spanning_tree();
                let d1 = xg.path_label(tree.path_to(local(p1)));
                let d2 = xg.path_label(tree.path_to(local(p2)));
                Some(d1.concat(&d2.inverse()))
            }
            _ => None,
        };

        let (folded, record) = self.z.fold(e1, e2)?;
        let x1 = record.transport(&self.x);
        let mut pair = LabeledGraphPair { z: folded, x: x1 };

        let added_loop = match &delta {
            Some(delta) => {
                let image = phi.apply(delta);
                let (tight, _) = pair.z.tighten();
                if image.is_empty() || tight.is_member(&image) {
                    None
                } else {
                    pair.z.wedge_circle(&image)?;
                    Some(image)
                }
            }
            None => None,
        };

        Ok((pair, PairFoldRecord { record, class, delta, added_loop }))
    }

    /// Whether `phi` carries the subgroup of `X` into the subgroup of `Z`:
    /// every basis word of `X` has its image traced closed in tightened `Z`.
    pub fn is_invariant(&self, phi: &Endo) -> bool {
        let (xg, _, _) = self.x_graph();
        let (x_tight, _) = xg.tighten();
        let basis = x_tight.basis_from_tree(&x_tight.spanning_tree());
        let (z_tight, _) = self.z.tighten();
        let images: Vec<Word> = basis.iter().map(|a| phi.apply(a)).collect();
        z_tight.all_members(&images)
    }

    /// The relative tightening procedure: fold inside `X` while `X` is not
    /// tight, otherwise fold `Z` (adding loops as needed), until `Z` is
    /// tight.
    ///
    /// Requires an invariant pair. The relative rank never increases; the
    /// pair stays invariant; the subgroup of `X` never shrinks. Terminates
    /// because (vertices of `X`, edges of `Z`) strictly decreases
    /// lexicographically at every step.
    pub fn tighten(&self, phi: &Endo) -> (LabeledGraphPair, PairTrace) {
        let mut pair = self.clone();
        let mut trace = PairTrace::default();
        loop {
            let subgraph_violation =
                pair.z.find_violation_among(|e| pair.x.contains_edge(e));
            let violation = subgraph_violation.or_else(|| pair.z.find_violation());
            let Some((e1, e2)) = violation else { break };
            let measure = (pair.x.vertices.len(), pair.z.num_edges());
            let (next, rec) =
                pair.fold_and_add_loop(e1, e2, phi).expect("violation is a legal fold");
            debug_assert!(
                (next.x.vertices.len(), next.z.num_edges()) < measure,
                "tightening measure decreases"
            );
            trace.records.push(rec);
            pair = next;
        }
        (pair, trace)
    }
}
