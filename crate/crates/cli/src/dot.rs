use std::fmt::Write;

use hatcycle_core::{CycleStrategy, Edge, EdgeColour, EdgeColouring};

/// Graphviz rendering of the coloured layered graph.
///
/// Nodes are `v_k_i` for colour `i` of player `k`. Yellow edges point right,
/// red edges point left and blue edges are undirected. Edges closing the
/// cycle do not constrain the layout.
pub fn export_dot(f: &CycleStrategy, c: &EdgeColouring) -> String {
    let n = f.n();
    let mut out = String::new();
    writeln!(out, "digraph strategy {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for k in 0..n {
        write!(out, "  {{ rank=same;").unwrap();
        for i in 0..3 {
            write!(out, " v_{k}_{i} [label=\"{i}\"];").unwrap();
        }
        writeln!(out, " }}").unwrap();
    }
    for k in 0..n {
        let next = (k + 1) % n;
        for e in Edge::boundary(k) {
            let (l, r) = (e.left.value(), e.right.value());
            let wrap = if next == 0 { ", constraint=false" } else { "" };
            let line = match c.colour_of(e) {
                EdgeColour::Yellow => format!("v_{k}_{l} -> v_{next}_{r} [color=gold{wrap}]"),
                EdgeColour::Red => format!("v_{next}_{r} -> v_{k}_{l} [color=red{wrap}]"),
                EdgeColour::Blue => {
                    format!("v_{k}_{l} -> v_{next}_{r} [color=blue, dir=none{wrap}]")
                }
            };
            writeln!(out, "  {line};").unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}
