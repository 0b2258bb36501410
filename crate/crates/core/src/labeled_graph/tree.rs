//! Spanning trees, basis extraction, and deterministic traversal of tight
//! graphs.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{EdgeId, LabeledGraph, SubgraphMarker, VertexId};
use crate::error::Error;
use crate::freegroup::{Letter, Sign, Word};

/// One edge crossing, in the edge's orientation (`forward`) or against it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub edge: EdgeId,
    pub forward: bool,
}

impl Step {
    pub fn reversed(self) -> Step {
        Step { edge: self.edge, forward: !self.forward }
    }
}

/// A spanning tree with, for every vertex, the tree path from the basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeData {
    pub tree_edges: BTreeSet<EdgeId>,
    pub paths: Vec<Vec<Step>>,
}

impl TreeData {
    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.tree_edges.contains(&e)
    }

    pub fn path_to(&self, v: VertexId) -> &[Step] {
        &self.paths[v.0]
    }
}

/// Result of tracing a word from the basepoint of a tight graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePath {
    pub steps: Vec<Step>,
    pub end: VertexId,
}

impl TracePath {
    pub fn is_closed(&self, g: &LabeledGraph) -> bool {
        self.end == g.basepoint()
    }
}

/// Deterministic transition table of a tight graph: at most one edge per
/// (vertex, label, direction).
pub(crate) struct Traverser {
    table: HashMap<(usize, usize, bool), EdgeId>,
}

impl Traverser {
    /// Panics if the graph is not tight.
    pub(crate) fn new(g: &LabeledGraph) -> Traverser {
        let mut table = HashMap::new();
        for (i, e) in g.edges().iter().enumerate() {
            let prev = table.insert((e.origin.0, e.label, true), EdgeId(i));
            assert!(prev.is_none(), "graph is not tight at {}", e.origin);
            let prev = table.insert((e.terminus.0, e.label, false), EdgeId(i));
            assert!(prev.is_none(), "graph is not tight at {}", e.terminus);
        }
        Traverser { table }
    }

    pub(crate) fn step(&self, v: VertexId, label: usize, outgoing: bool) -> Option<EdgeId> {
        self.table.get(&(v.0, label, outgoing)).copied()
    }
}

/// Incident edge end, ordered by (label, direction, edge id) for
/// deterministic breadth-first search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Incident {
    label: usize,
    incoming: bool,
    edge: EdgeId,
    far: VertexId,
}

impl LabeledGraph {
    fn incidence_sorted(&self) -> Vec<Vec<Incident>> {
        let mut inc = vec![Vec::new(); self.num_vertices()];
        for (i, e) in self.edges().iter().enumerate() {
            inc[e.origin.0].push(Incident {
                label: e.label,
                incoming: false,
                edge: EdgeId(i),
                far: e.terminus,
            });
            inc[e.terminus.0].push(Incident {
                label: e.label,
                incoming: true,
                edge: EdgeId(i),
                far: e.origin,
            });
        }
        for v in &mut inc {
            v.sort();
        }
        inc
    }

    /// Breadth-first spanning tree from the basepoint, neighbors ordered by
    /// (label, outgoing-then-incoming, edge id).
    pub fn spanning_tree(&self) -> TreeData {
        self.spanning_tree_nested(None)
    }

    /// Spanning tree whose restriction to the marked subgraph is a spanning
    /// tree of that subgraph: breadth-first over the subgraph's edges first,
    /// then continued over the whole graph.
    pub fn spanning_tree_nested(&self, inner: Option<&SubgraphMarker>) -> TreeData {
        let incidence = self.incidence_sorted();
        let mut visited = vec![false; self.num_vertices()];
        let mut paths: Vec<Vec<Step>> = vec![Vec::new(); self.num_vertices()];
        let mut tree_edges = BTreeSet::new();
        let mut order: Vec<VertexId> = Vec::new();

        visited[self.basepoint().0] = true;
        order.push(self.basepoint());

        let bfs = |order: &mut Vec<VertexId>,
                       visited: &mut Vec<bool>,
                       paths: &mut Vec<Vec<Step>>,
                       tree_edges: &mut BTreeSet<EdgeId>,
                       allow: &dyn Fn(EdgeId) -> bool| {
            let mut queue: VecDeque<VertexId> = order.iter().copied().collect();
            while let Some(u) = queue.pop_front() {
                for inc in &incidence[u.0] {
                    if !allow(inc.edge) || visited[inc.far.0] {
                        continue;
                    }
                    visited[inc.far.0] = true;
                    tree_edges.insert(inc.edge);
                    let mut path = paths[u.0].clone();
                    path.push(Step { edge: inc.edge, forward: !inc.incoming });
                    paths[inc.far.0] = path;
                    order.push(inc.far);
                    queue.push_back(inc.far);
                }
            }
        };

        if let Some(marker) = inner {
            bfs(&mut order, &mut visited, &mut paths, &mut tree_edges, &|e| {
                marker.contains_edge(e)
            });
        }
        bfs(&mut order, &mut visited, &mut paths, &mut tree_edges, &|_| true);
        debug_assert!(visited.iter().all(|&v| v), "graph is connected");
        TreeData { tree_edges, paths }
    }

    /// The word read along a sequence of steps.
    pub fn path_label(&self, steps: &[Step]) -> Word {
        Word::reduce(steps.iter().map(|s| {
            let label = self.edge(s.edge).label;
            Letter::new(label, if s.forward { Sign::Plus } else { Sign::Minus })
        }))
    }

    /// Basis of the carried subgroup: one element per non-tree edge, in
    /// ascending edge order, each given as `path(origin) · edge ·
    /// path(terminus)^-1`, freely reduced. Paired with the defining edge.
    pub fn basis_elements(&self, tree: &TreeData) -> Vec<(EdgeId, Word)> {
        (0..self.num_edges())
            .map(EdgeId)
            .filter(|e| !tree.is_tree_edge(*e))
            .map(|e| {
                let ed = self.edge(e);
                let mut steps = tree.path_to(ed.origin).to_vec();
                steps.push(Step { edge: e, forward: true });
                steps.extend(tree.path_to(ed.terminus).iter().rev().map(|s| s.reversed()));
                (e, self.path_label(&steps))
            })
            .collect()
    }

    /// Basis words only; `|basis| = rank`.
    pub fn basis_from_tree(&self, tree: &TreeData) -> Vec<Word> {
        self.basis_elements(tree).into_iter().map(|(_, w)| w).collect()
    }

    /// Follow `w` letter-by-letter from the basepoint of a tight graph.
    /// Returns the crossed path, or `None` as soon as a transition is
    /// missing. Membership in the carried subgroup is `trace(w)` existing
    /// and closing at the basepoint.
    ///
    /// Panics if the graph is not tight.
    pub fn trace(&self, w: &Word) -> Option<TracePath> {
        let t = Traverser::new(self);
        self.trace_with(&t, w)
    }

    fn trace_with(&self, t: &Traverser, w: &Word) -> Option<TracePath> {
        let mut at = self.basepoint();
        let mut steps = Vec::with_capacity(w.len());
        for l in w.letters() {
            let outgoing = l.sign == Sign::Plus;
            let e = t.step(at, l.gen, outgoing)?;
            at = self.far_end(e, at, outgoing);
            steps.push(Step { edge: e, forward: outgoing });
        }
        Some(TracePath { steps, end: at })
    }

    /// Membership test for tight graphs.
    pub fn is_member(&self, w: &Word) -> bool {
        self.trace(w).is_some_and(|p| p.is_closed(self))
    }

    /// Membership of every word, sharing one transition table.
    pub fn all_members<'a>(&self, words: impl IntoIterator<Item = &'a Word>) -> bool {
        let t = Traverser::new(self);
        words.into_iter().all(|w| {
            self.trace_with(&t, w).is_some_and(|p| p.is_closed(self))
        })
    }

    /// Rewrite a closed loop word over the basis symbols of `tree`: every
    /// non-tree edge crossed emits its basis symbol with the crossing sign;
    /// tree edges emit nothing. Expanding the result through
    /// [`LabeledGraph::basis_from_tree`] recovers `w`.
    pub fn express_in_basis(&self, tree: &TreeData, w: &Word) -> Result<Word, Error> {
        let path = self.trace(w).ok_or(Error::NotAMember)?;
        if !path.is_closed(self) {
            return Err(Error::NotAMember);
        }
        let symbol_of: HashMap<EdgeId, usize> = (0..self.num_edges())
            .map(EdgeId)
            .filter(|e| !tree.is_tree_edge(*e))
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        Ok(Word::reduce(path.steps.iter().filter_map(|s| {
            symbol_of.get(&s.edge).map(|&sym| {
                Letter::new(sym, if s.forward { Sign::Plus } else { Sign::Minus })
            })
        })))
    }
}

/// Substitute each symbol of `symbols` by the corresponding word of `basis`
/// and reduce.
pub fn expand_symbols(symbols: &Word, basis: &[Word]) -> Word {
    let mut out = Word::empty();
    for l in symbols.letters() {
        let w = &basis[l.gen];
        out = match l.sign {
            Sign::Plus => out.concat(w),
            Sign::Minus => out.concat(&w.inverse()),
        };
    }
    out
}
