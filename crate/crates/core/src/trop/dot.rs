use std::fmt::Write;

use crate::arith::format_fraction;
use crate::profile::Profile;

use super::{cover_multiplicity, TropicalCover};

/// Graphviz rendering of a cover: internal vertices labelled with their
/// attached ends and position on the line, edges labelled with weights.
pub fn cover_to_dot(c: &TropicalCover, p: &Profile) -> String {
    let weights = c.edge_weights(p);
    let mut position = vec![0usize; c.tree.len()];
    for (pos, &v) in c.order.iter().enumerate() {
        position[v] = pos;
    }
    let mult = cover_multiplicity(c, p).total;

    let mut out = String::new();
    writeln!(out, "digraph cover {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  label=\"multiplicity {}\";", format_fraction(&mult)).unwrap();
    for (v, vx) in c.tree.vertices.iter().enumerate() {
        let ends: Vec<String> = vx
            .ends
            .iter()
            .map(|&e| match e {
                0 => format!("d={}", p.d()),
                i => format!("nu{i}={}", p.nu()[i - 1]),
            })
            .collect();
        writeln!(
            out,
            "  v{v} [shape=box, label=\"v{v} @{}\\n{}\"];",
            position[v],
            ends.join(", ")
        )
        .unwrap();
    }
    for (v, w) in weights.iter().enumerate() {
        if let (Some(w), Some(parent)) = (w, c.tree.vertices[v].parent) {
            writeln!(out, "  v{parent} -> v{v} [label=\"{w}\"];").unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}
