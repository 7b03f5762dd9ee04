//! Labelled bipartite trees over a fixed basis `b_1..b_n`.
//!
//! Every edge joins a labelled vertex to an unlabelled one and every leaf is
//! labelled, so each unlabelled vertex ("hub") is determined by the set of
//! labels adjacent to it, which has size at least 2. A tree is therefore
//! stored as its sorted list of hubs; the incidence graph must be a tree.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledBipartiteTree {
    n: usize,
    hubs: Vec<Vec<usize>>,
}

/// An edge from the vertex labelled `label` to the hub with index `hub`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub label: usize,
    pub hub: usize,
}

impl LabelledBipartiteTree {
    pub fn new(n: usize, hubs: Vec<Vec<usize>>) -> Result<Self> {
        let mut hubs: Vec<Vec<usize>> = hubs
            .into_iter()
            .map(|mut h| {
                h.sort_unstable();
                h
            })
            .collect();
        hubs.sort();
        let t = Self { n, hubs };
        t.validate()?;
        Ok(t)
    }

    /// The tree with a single unlabelled vertex joined to every label.
    pub fn trivial(n: usize) -> Result<Self> {
        Self::new(n, vec![(1..=n).collect()])
    }

    /// Parse the display form, e.g. `{1,2,4}{3,4}`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let bad = || Error::Parse(format!("bad tree {s:?}; expected hubs like {{1,2}}{{2,3}}"));
        let mut hubs = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('{').ok_or_else(bad)?;
            let end = body.find('}').ok_or_else(bad)?;
            let hub = body[..end]
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            hubs.push(hub);
            rest = body[end + 1..].trim_start();
        }
        Self::new(n, hubs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hubs(&self) -> &[Vec<usize>] {
        &self.hubs
    }

    pub fn unlabelled_count(&self) -> usize {
        self.hubs.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.hubs.len() == 1
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .hubs
            .iter()
            .enumerate()
            .flat_map(|(h, labels)| labels.iter().map(move |&l| Edge { label: l, hub: h }))
            .collect();
        out.sort();
        out
    }

    /// Hubs adjacent to the vertex labelled `v`.
    pub fn hubs_at(&self, v: usize) -> Vec<usize> {
        (0..self.hubs.len()).filter(|&h| self.hubs[h].contains(&v)).collect()
    }

    /// Re-check the defining conditions on the explicit bipartite graph:
    /// a tree, one labelled endpoint per edge, labelled leaves, and at most
    /// `n - 1` unlabelled vertices.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        let bad = |m: String| Err(Error::InvalidTree(m));
        for h in &self.hubs {
            if h.len() < 2 {
                return bad(format!("unlabelled vertex {h:?} has valence below 2"));
            }
            if h.windows(2).any(|w| w[0] == w[1]) {
                return bad(format!("repeated label in {h:?}"));
            }
            if h.iter().any(|&l| l == 0 || l > n) {
                return bad(format!("label out of range in {h:?}"));
            }
        }
        if self.hubs.len() > n - 1 {
            return bad(format!("{} unlabelled vertices exceed n - 1", self.hubs.len()));
        }
        let edges: usize = self.hubs.iter().map(Vec::len).sum();
        let vertices = n + self.hubs.len();
        if edges + 1 != vertices {
            return bad(format!("{edges} edges on {vertices} vertices is not a tree"));
        }
        // Connectivity via union-find on labels through hubs.
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for h in &self.hubs {
            for w in h.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 1);
        if (2..=n).any(|l| find(&mut parent, l) != root) {
            return bad("graph is disconnected".into());
        }
        Ok(())
    }

    /// Components of `T - v`, one per hub at `v`, each given by its labels
    /// and sorted by smallest label. The first is the designated component.
    pub fn components_at(&self, v: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for h in self.hubs_at(v) {
            let mut seen_hubs = BTreeSet::from([h]);
            let mut labels = BTreeSet::new();
            let mut stack = vec![h];
            while let Some(hub) = stack.pop() {
                for &l in &self.hubs[hub] {
                    if l == v || !labels.insert(l) {
                        continue;
                    }
                    for h2 in self.hubs_at(l) {
                        if seen_hubs.insert(h2) {
                            stack.push(h2);
                        }
                    }
                }
            }
            out.push(labels.into_iter().collect::<Vec<_>>());
        }
        out.sort();
        out
    }

    /// Identify the edges `e1`, `e2` at `v` together with their hubs.
    pub fn fold(&self, v: usize, e1: Edge, e2: Edge) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidFold(m));
        for e in [e1, e2] {
            if e.label != v {
                return bad(format!("edge {e:?} is not incident to label {v}"));
            }
            if e.hub >= self.hubs.len() || !self.hubs[e.hub].contains(&v) {
                return bad(format!("edge {e:?} does not exist"));
            }
        }
        if e1.hub == e2.hub {
            return bad("the two edges coincide".into());
        }
        let mut merged: BTreeSet<usize> = self.hubs[e1.hub].iter().copied().collect();
        merged.extend(self.hubs[e2.hub].iter().copied());
        let mut hubs: Vec<Vec<usize>> = self
            .hubs
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != e1.hub && k != e2.hub)
            .map(|(_, h)| h.clone())
            .collect();
        hubs.push(merged.into_iter().collect());
        Self::new(self.n, hubs)
    }

    /// Every tree reachable by one fold.
    pub fn folds(&self) -> Vec<Self> {
        let mut out = BTreeSet::new();
        for v in 1..=self.n {
            let at = self.hubs_at(v);
            for (a, &h1) in at.iter().enumerate() {
                for &h2 in &at[a + 1..] {
                    let t = self
                        .fold(v, Edge { label: v, hub: h1 }, Edge { label: v, hub: h2 })
                        .expect("folds of valid edges are valid");
                    out.insert(t);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Every tree that folds onto `self` in one step: split a hub `h` at a
    /// label `v ∈ h` into two hubs meeting at `v`.
    pub fn unfolds(&self) -> Vec<Self> {
        let mut out = BTreeSet::new();
        for (k, h) in self.hubs.iter().enumerate() {
            if h.len() < 3 {
                continue;
            }
            for &v in h {
                let rest: Vec<usize> = h.iter().copied().filter(|&l| l != v).collect();
                // Splits of `rest` into two nonempty parts, the first holding rest[0].
                let m = rest.len();
                for mask in 0..(1u32 << (m - 1)) {
                    let mut a = vec![v, rest[0]];
                    let mut b = vec![v];
                    for (bit, &l) in rest[1..].iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            a.push(l);
                        } else {
                            b.push(l);
                        }
                    }
                    if b.len() < 2 {
                        continue;
                    }
                    let mut hubs: Vec<Vec<usize>> = self
                        .hubs
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, x)| x.clone())
                        .collect();
                    hubs.push(a);
                    hubs.push(b);
                    if let Ok(t) = Self::new(self.n, hubs) {
                        out.insert(t);
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Relabel by `perm`: label `i` becomes `perm[i-1]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let hubs = self
            .hubs
            .iter()
            .map(|h| h.iter().map(|&l| perm[l - 1]).collect())
            .collect();
        Self::new(self.n, hubs).expect("relabelling preserves validity")
    }

    fn rooted(&self, hub: usize, from_label: Option<usize>, labels: bool) -> String {
        let mut kids: Vec<String> = self.hubs[hub]
            .iter()
            .filter(|&&l| Some(l) != from_label)
            .map(|&l| {
                let mut sub: Vec<String> = self
                    .hubs_at(l)
                    .into_iter()
                    .filter(|&h| h != hub)
                    .map(|h| self.rooted(h, Some(l), labels))
                    .collect();
                sub.sort();
                let tag = if labels { format!("b{l}") } else { "b".to_string() };
                format!("{tag}({})", sub.concat())
            })
            .collect();
        kids.sort();
        format!("u({})", kids.concat())
    }

    fn min_rooted(&self, labels: bool) -> String {
        (0..self.hubs.len())
            .map(|h| self.rooted(h, None, labels))
            .min()
            .expect("a tree has at least one hub")
    }

    /// Canonical rooted encoding with label annotations: the minimum over
    /// all unlabelled roots.
    pub fn encoding(&self) -> String {
        self.min_rooted(true)
    }

    /// Encoding of the type: the isomorphism class with labels forgotten
    /// (labelled vertices remain distinguished from unlabelled ones).
    pub fn type_encoding(&self) -> String {
        self.min_rooted(false)
    }
}

impl fmt::Display for LabelledBipartiteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.hubs {
            let s: Vec<String> = h.iter().map(|l| l.to_string()).collect();
            write!(f, "{{{}}}", s.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for LabelledBipartiteTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            hubs: &'a [Vec<usize>],
            encoding: String,
            #[serde(rename = "type")]
            kind: String,
        }
        Repr {
            hubs: &self.hubs,
            encoding: self.encoding(),
            kind: self.type_encoding(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize, hubs: &[&[usize]]) -> LabelledBipartiteTree {
        LabelledBipartiteTree::new(n, hubs.iter().map(|h| h.to_vec()).collect()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(LabelledBipartiteTree::trivial(1).is_err());
        assert!(LabelledBipartiteTree::new(3, vec![vec![1, 2], vec![1, 2], vec![2, 3]]).is_err());
        assert!(LabelledBipartiteTree::new(3, vec![vec![1, 2], vec![3]]).is_err());
        assert!(LabelledBipartiteTree::new(4, vec![vec![1, 2], vec![3, 4]]).is_err());
        assert!(LabelledBipartiteTree::new(3, vec![vec![1, 2], vec![2, 3], vec![1, 3]]).is_err());
        t(4, &[&[1, 2, 4], &[3, 4]]);
    }

    #[test]
    fn fold_to_trivial() {
        let left = t(4, &[&[1, 2, 3], &[3, 4]]);
        let e = left.edges();
        let at3: Vec<Edge> = e.into_iter().filter(|e| e.label == 3).collect();
        let folded = left.fold(3, at3[0], at3[1]).unwrap();
        assert_eq!(folded, LabelledBipartiteTree::trivial(4).unwrap());

        let path = t(3, &[&[1, 2], &[2, 3]]);
        let at2: Vec<Edge> = path.edges().into_iter().filter(|e| e.label == 2).collect();
        assert_eq!(path.fold(2, at2[0], at2[1]).unwrap(), LabelledBipartiteTree::trivial(3).unwrap());
    }

    #[test]
    fn fold_errors() {
        let triv = LabelledBipartiteTree::trivial(3).unwrap();
        let e = Edge { label: 1, hub: 0 };
        assert!(matches!(triv.fold(1, e, e), Err(Error::InvalidFold(_))));
        let path = t(3, &[&[1, 2], &[2, 3]]);
        assert!(path.fold(1, Edge { label: 1, hub: 0 }, Edge { label: 1, hub: 1 }).is_err());
        assert!(path.fold(2, Edge { label: 1, hub: 0 }, Edge { label: 2, hub: 1 }).is_err());
    }

    #[test]
    fn components() {
        let path = t(3, &[&[1, 3], &[2, 3]]);
        assert_eq!(path.components_at(3), vec![vec![1], vec![2]]);
        assert_eq!(path.components_at(1), vec![vec![2, 3]]);
        let x = t(4, &[&[1, 2, 4], &[3, 4]]);
        assert_eq!(x.components_at(4), vec![vec![1, 2], vec![3]]);
    }

    #[test]
    fn unfold_inverts_fold() {
        let triv = LabelledBipartiteTree::trivial(4).unwrap();
        for u in triv.unfolds() {
            assert!(u.folds().contains(&triv));
        }
        assert_eq!(triv.unfolds().len(), 4 * 3);
    }

    #[test]
    fn encodings() {
        let a = t(3, &[&[1, 3], &[2, 3]]);
        let b = t(3, &[&[1, 2], &[2, 3]]);
        assert_ne!(a.encoding(), b.encoding());
        assert_eq!(a.type_encoding(), b.type_encoding());
        assert_ne!(a.type_encoding(), LabelledBipartiteTree::trivial(3).unwrap().type_encoding());
        assert_eq!(a.permuted(&[1, 3, 2]), t(3, &[&[1, 2], &[2, 3]]));
        assert_eq!(LabelledBipartiteTree::parse(&a.to_string(), 3).unwrap(), a);
        assert!(LabelledBipartiteTree::parse("{1,2", 3).is_err());
    }
}
