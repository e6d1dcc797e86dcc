//! Cover relation of a family and its DOT rendering.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::induced::Relations;
use crate::structure::Decomposition;

pub const HASSE_CAP: usize = 256;

/// Index pairs `(i, j)` of members with `F_i ⊂ F_j` and nothing in between,
/// sorted.
pub fn cover_edges(f: &SetFamily) -> Vec<(usize, usize)> {
    let rel = Relations::new(f.members());
    let mut edges = Vec::new();
    for i in 0..f.len() {
        for j in ones(rel.above(i)) {
            let between = rel
                .above(i)
                .iter()
                .zip(rel.below(j))
                .any(|(a, b)| a & b != 0);
            if !between {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &bits)| {
        (0..64)
            .filter(move |b| bits >> b & 1 == 1)
            .map(move |b| w * 64 + b)
    })
}

const CLASS_COLOURS: [(&str, &str); 5] = [
    ("A", "lightblue"),
    ("X", "salmon"),
    ("GB", "palegreen"),
    ("HY", "khaki"),
    ("B", "plum"),
];

/// DOT digraph of the cover relation, edges pointing upward. With a
/// decomposition, members of `A`, `X`, `G(B)`, `H(Y)` and `B` are filled by
/// the first class they belong to, in that order.
pub fn hasse_dot(f: &SetFamily, classes: Option<&Decomposition>) -> Result<String> {
    if f.len() > HASSE_CAP {
        return Err(Error::Range(format!(
            "Hasse diagram limited to {HASSE_CAP} members, family has {}",
            f.len()
        )));
    }
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, s) in f.iter().enumerate() {
        let label = if s.is_empty() {
            "∅".to_string()
        } else {
            s.to_string()
        };
        let class = classes.and_then(|d| {
            let fams = [&d.a, &d.x, &d.gb, &d.hy, &d.b];
            fams.iter()
                .position(|g| g.contains(s))
                .map(|k| CLASS_COLOURS[k])
        });
        match class {
            Some((name, colour)) => writeln!(
                out,
                "  n{i} [label=\"{label}\", style=filled, fillcolor={colour}, tooltip=\"{name}\"];"
            ),
            None => writeln!(out, "  n{i} [label=\"{label}\"];"),
        }
        .expect("writing to a String");
    }
    for (i, j) in cover_edges(f) {
        writeln!(out, "  n{i} -> n{j};").expect("writing to a String");
    }
    out.push_str("}\n");
    Ok(out)
}
