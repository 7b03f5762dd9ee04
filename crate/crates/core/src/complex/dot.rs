//! Graphviz output.

use std::fmt::Write;

use super::nuclear::NuclearBall;
use super::poset::WhiteheadPoset;
use super::tree::LabelledBipartiteTree;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram, edges pointing up from each fold.
pub fn poset_dot(p: &WhiteheadPoset) -> String {
    let mut s = String::from("digraph poset {\n  rankdir=BT;\n");
    for (k, t) in p.elements.iter().enumerate() {
        let _ = writeln!(s, "  t{k} [label={}];", quote(&t.to_string()));
    }
    for &(lo, hi) in &p.covers {
        let _ = writeln!(s, "  t{lo} -> t{hi};");
    }
    s.push_str("}\n");
    s
}

/// The bipartite tree itself: labelled vertices as boxes, hubs as points.
pub fn tree_dot(t: &LabelledBipartiteTree) -> String {
    let mut s = String::from("graph tree {\n");
    for l in 1..=t.n() {
        let _ = writeln!(s, "  b{l} [shape=box,label=\"b{l}\"];");
    }
    for (h, labels) in t.hubs().iter().enumerate() {
        let _ = writeln!(s, "  u{h} [shape=point];");
        for l in labels {
            let _ = writeln!(s, "  u{h} -- b{l};");
        }
    }
    s.push_str("}\n");
    s
}

pub fn ball_dot(b: &NuclearBall) -> String {
    let mut s = String::from("graph ball {\n");
    for (k, v) in b.vertices.iter().enumerate() {
        let _ = writeln!(s, "  v{k} [label={}];", quote(&v.to_string()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for e in &b.edges {
        let key = (e.from.min(e.to), e.from.max(e.to));
        if seen.insert(key) {
            let _ = writeln!(s, "  v{} -- v{} [label={}];", key.0, key.1, quote(&e.tree));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::enumerate_whitehead_poset;

    #[test]
    fn poset_dot_lists_every_cover() {
        let p = enumerate_whitehead_poset(3).unwrap();
        let d = poset_dot(&p);
        assert_eq!(d.matches("->").count(), 3);
        assert!(d.starts_with("digraph"));
        let t = tree_dot(&p.elements[1]);
        assert_eq!(t.matches("--").count(), 4);
    }
}
