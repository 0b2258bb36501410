//! DOT rendering.

use std::fmt::Write as _;

use super::{LabeledGraph, SubgraphMarker, VertexId};
use crate::freegroup::Alphabet;

impl LabeledGraph {
    /// Render as a DOT digraph. The basepoint is double-circled; edges of the
    /// highlighted subgraph are drawn bold.
    pub fn to_dot(&self, alphabet: &Alphabet, highlight: Option<&SubgraphMarker>) -> String {
        let mut out = String::from("digraph folded {\n  rankdir=LR;\n");
        for v in 0..self.num_vertices() {
            let v = VertexId(v);
            let shape = if v == self.basepoint() { "doublecircle" } else { "circle" };
            let label = if v == self.basepoint() { "*".to_string() } else { format!("{v}") };
            writeln!(out, "  {v} [shape={shape}, label=\"{label}\"];").unwrap();
        }
        for (i, e) in self.edges().iter().enumerate() {
            let bold = highlight.is_some_and(|h| h.contains_edge(super::EdgeId(i)));
            let style = if bold { ", style=bold, penwidth=2" } else { "" };
            writeln!(
                out,
                "  {} -> {} [label=\"{}\"{}];",
                e.origin,
                e.terminus,
                alphabet.name(e.label),
                style
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Word;

    #[test]
    fn loop_renders_single_node_with_self_arc() {
        let alphabet = Alphabet::new(["e1"]).unwrap();
        let g = LabeledGraph::bouquet(1, &[Word::generator(0)]).unwrap();
        let dot = g.to_dot(&alphabet, None);
        assert!(dot.contains("v0 [shape=doublecircle"));
        assert!(dot.contains("v0 -> v0 [label=\"e1\"]"));
        assert!(!dot.contains("style=bold"));
        let full = g.full_marker();
        let dot2 = g.to_dot(&alphabet, Some(&full));
        assert!(dot2.contains("style=bold"));
    }
}
