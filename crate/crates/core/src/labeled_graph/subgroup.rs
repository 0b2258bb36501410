//! Membership and expression over an arbitrary finite generating set.
//!
//! [`SubgroupGraph`] folds the wedge of generator circles once and keeps the
//! fold trace. Membership is a trace in the tight graph. Expression of a
//! member over the *given generators* (not the tree basis) lifts the traced
//! path back through the folds, one at a time, to a closed path in the
//! original wedge, where every reduced closed path is a concatenation of
//! full circles and can be read off as a word in the generators.

use super::tree::Step;
use super::{CirclePosition, EdgeId, FoldRecord, FoldTrace, LabeledGraph, VertexId};
use crate::error::Error;
use crate::freegroup::{Letter, Sign, Word};

/// The folded (tight) graph of the subgroup generated by a word list,
/// with enough provenance to express members over those words.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    generators: Vec<Word>,
    bouquet: LabeledGraph,
    layout: Vec<CirclePosition>,
    circle_edges: Vec<Vec<EdgeId>>,
    trace: FoldTrace,
    tight: LabeledGraph,
}

impl SubgroupGraph {
    /// Fold the wedge of circles for `generators`. Empty generator words are
    /// rejected.
    pub fn new(num_labels: usize, generators: &[Word]) -> Result<SubgroupGraph, Error> {
        let (bouquet, layout) = LabeledGraph::bouquet_with_layout(num_labels, generators)?;
        let mut circle_edges = vec![Vec::new(); generators.len()];
        for (i, pos) in layout.iter().enumerate() {
            circle_edges[pos.circle].push(EdgeId(i));
        }
        let (tight, trace) = bouquet.tighten();
        Ok(SubgroupGraph {
            generators: generators.to_vec(),
            bouquet,
            layout,
            circle_edges,
            trace,
            tight,
        })
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    /// The tight graph carrying the subgroup.
    pub fn graph(&self) -> &LabeledGraph {
        &self.tight
    }

    pub fn fold_trace(&self) -> &FoldTrace {
        &self.trace
    }

    pub fn rank(&self) -> usize {
        self.tight.rank()
    }

    /// Rank preservation under folding: the generators freely generate iff
    /// no fold ever dropped the rank.
    pub fn freely_generates(&self) -> bool {
        self.rank() == self.generators.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.tight.is_member(w)
    }

    /// Basis of the subgroup from the tight graph's spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        self.tight.basis_from_tree(&self.tight.spanning_tree())
    }

    /// Express a member as a word over the generator symbols (symbol `i`
    /// stands for `generators[i]`), or `None` if `w` is not a member.
    ///
    /// The expression expands back to `w`; it is unique when the generators
    /// freely generate.
    pub fn express(&self, w: &Word) -> Option<Word> {
        let traced = self.tight.trace(w)?;
        if !traced.is_closed(&self.tight) {
            return None;
        }
        let chain = self.trace.replay(&self.bouquet);
        let mut path = traced.steps;
        for (pre, rec) in chain.iter().zip(self.trace.records.iter()).rev() {
            path = lift_through_fold(pre, rec, &path);
            path = reduce_path(path);
        }
        Some(self.read_circles(&path))
    }

    /// Read a reduced closed basepoint path in the wedge as a generator word.
    ///
    /// A circle's positive traversal crosses its k-th edge forward iff the
    /// k-th letter of the generator is positive (inverse letters produce
    /// edges oriented against the word direction).
    fn read_circles(&self, path: &[Step]) -> Word {
        let positive: Vec<Vec<Step>> = self
            .circle_edges
            .iter()
            .zip(&self.generators)
            .map(|(edges, w)| {
                edges
                    .iter()
                    .zip(w.letters())
                    .map(|(&e, l)| Step { edge: e, forward: l.sign == Sign::Plus })
                    .collect()
            })
            .collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < path.len() {
            let circle = self.layout[path[i].edge.0].circle;
            let steps = &positive[circle];
            let len = steps.len();
            if path[i] == steps[0] {
                debug_assert_eq!(&path[i..i + len], &steps[..]);
                letters.push(Letter::new(circle, Sign::Plus));
            } else {
                debug_assert!(
                    path[i..i + len].iter().rev().map(|s| s.reversed()).eq(steps.iter().copied()),
                    "closed reduced path traverses full circles"
                );
                letters.push(Letter::new(circle, Sign::Minus));
            }
            i += len;
        }
        Word::reduce(letters)
    }
}

/// Cancel immediate backtracks (the same edge crossed twice in opposite
/// directions).
fn reduce_path(path: Vec<Step>) -> Vec<Step> {
    let mut out: Vec<Step> = Vec::with_capacity(path.len());
    for s in path {
        match out.last() {
            Some(&top) if top == s.reversed() => {
                out.pop();
            }
            _ => out.push(s),
        }
    }
    out
}

/// Lift a closed basepoint path through one fold: given the graph the fold
/// was applied to and a path in the folded graph, produce a path in the
/// pre-fold graph mapping to it up to homotopy.
///
/// Where consecutive preimage edges fail to connect, the two possible
/// attachment points are exactly the fold's merged vertices, and the
/// detour `kept^-1 · removed` (which maps to a null-homotopic spur) joins
/// them.
fn lift_through_fold(pre: &LabeledGraph, rec: &FoldRecord, path: &[Step]) -> Vec<Step> {
    let start_of = |s: Step| {
        let e = pre.edge(s.edge);
        if s.forward {
            e.origin
        } else {
            e.terminus
        }
    };
    let end_of = |s: Step| {
        let e = pre.edge(s.edge);
        if s.forward {
            e.terminus
        } else {
            e.origin
        }
    };

    // detour between the merged far endpoints, as (from, to, steps)
    let connector = |from: VertexId| -> Vec<Step> {
        let (keep, remove) = (pre.edge(rec.kept), pre.edge(rec.removed));
        let steps = if keep.origin == remove.origin {
            // far endpoints are the termini
            vec![
                Step { edge: rec.kept, forward: false },
                Step { edge: rec.removed, forward: true },
            ]
        } else {
            vec![
                Step { edge: rec.kept, forward: true },
                Step { edge: rec.removed, forward: false },
            ]
        };
        let far_kept = if keep.origin == remove.origin { keep.terminus } else { keep.origin };
        if from == far_kept {
            steps
        } else {
            steps.into_iter().rev().map(Step::reversed).collect()
        }
    };

    let mut out: Vec<Step> = Vec::with_capacity(path.len());
    let mut at = pre.basepoint();
    for &step in path {
        let (first, second) = rec.edge_preimages(step.edge);
        let candidates = [Some(first), second];
        let pick = candidates
            .iter()
            .flatten()
            .map(|&e| Step { edge: e, forward: step.forward })
            .find(|&s| start_of(s) == at);
        let lifted = match pick {
            Some(s) => s,
            None => {
                // `at` is one of the merged pair; hop to the other side
                out.extend(connector(at));
                at = end_of(*out.last().unwrap());
                candidates
                    .iter()
                    .flatten()
                    .map(|&e| Step { edge: e, forward: step.forward })
                    .find(|&s| start_of(s) == at)
                    .expect("merged partner carries a preimage")
            }
        };
        out.push(lifted);
        at = end_of(lifted);
    }
    if at != pre.basepoint() {
        out.extend(connector(at));
        debug_assert_eq!(end_of(*out.last().unwrap()), pre.basepoint());
    }
    out
}
