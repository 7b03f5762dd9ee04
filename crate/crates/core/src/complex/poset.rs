//! The poset of labelled bipartite trees over a fixed basis, ordered by
//! folding: `T' <= T` when `T'` is obtained from `T` by folds.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::tree::LabelledBipartiteTree;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct WhiteheadPoset {
    pub n: usize,
    /// Sorted by number of unlabelled vertices, then by hubs. Index 0 is
    /// the trivial tree, the unique minimum.
    pub elements: Vec<LabelledBipartiteTree>,
    /// `(lower, upper)`: `lower` is one fold of `upper`.
    pub covers: Vec<(usize, usize)>,
    #[serde(skip)]
    above: Vec<Vec<usize>>,
}

pub fn enumerate_whitehead_poset(n: usize) -> Result<WhiteheadPoset> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let mut all = BTreeSet::new();
    let mut frontier = vec![LabelledBipartiteTree::trivial(n)?];
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for t in frontier {
            if all.insert(t.clone()) {
                next.extend(t.unfolds().into_iter().filter(|u| !all.contains(u)));
            }
        }
        frontier = next.into_iter().collect();
    }
    let mut elements: Vec<LabelledBipartiteTree> = all.into_iter().collect();
    elements.sort_by(|a, b| (a.unlabelled_count(), a.hubs()).cmp(&(b.unlabelled_count(), b.hubs())));
    let index: BTreeMap<&LabelledBipartiteTree, usize> =
        elements.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let mut covers = Vec::new();
    for (upper, t) in elements.iter().enumerate() {
        for f in t.folds() {
            covers.push((index[&f], upper));
        }
    }
    covers.sort_unstable();
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); elements.len()];
    for &(lo, hi) in &covers {
        up[lo].push(hi);
    }
    // Strict upper sets, computed from the top down.
    let mut above: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); elements.len()];
    for k in (0..elements.len()).rev() {
        let mut s = BTreeSet::new();
        for &h in &up[k] {
            s.insert(h);
            s.extend(above[h].iter().copied());
        }
        above[k] = s;
    }
    Ok(WhiteheadPoset {
        n,
        elements,
        covers,
        above: above.into_iter().map(|s| s.into_iter().collect()).collect(),
    })
}

impl WhiteheadPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, t: &LabelledBipartiteTree) -> Option<usize> {
        self.elements.iter().position(|e| e == t)
    }

    /// Strict order `a < b`.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.above[a].binary_search(&b).is_ok()
    }

    /// Elements strictly above `a`, sorted.
    pub fn strictly_above(&self, a: usize) -> &[usize] {
        &self.above[a]
    }

    /// Number of elements in a longest chain.
    pub fn max_chain_cardinality(&self) -> usize {
        let mut best = vec![1usize; self.len()];
        for k in (0..self.len()).rev() {
            for &h in &self.above[k] {
                best[k] = best[k].max(best[h] + 1);
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// All nonempty chains, each listed bottom-up, ordered by length and
    /// then lexicographically.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..self.len()).rev().map(|k| vec![k]).collect();
        while let Some(c) = stack.pop() {
            let top = *c.last().expect("chains are nonempty");
            for &h in self.above[top].iter().rev() {
                let mut d = c.clone();
                d.push(h);
                stack.push(d);
            }
            out.push(c);
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    /// Number of chains of each cardinality `1..`.
    pub fn chain_counts(&self) -> Vec<usize> {
        let mut counts: Vec<usize> = Vec::new();
        for c in self.chains() {
            if counts.len() < c.len() {
                counts.resize(c.len(), 0);
            }
            counts[c.len() - 1] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all bipartite graphs between `n` labels and `h`
    /// hubs, keeping the trees whose leaves are labelled.
    fn oracle_count(n: usize) -> usize {
        let mut seen = BTreeSet::new();
        for h in 1..n {
            let bits = n * h;
            for mask in 0u64..(1 << bits) {
                let mut hubs: Vec<Vec<usize>> = vec![Vec::new(); h];
                for b in 0..bits {
                    if mask & (1 << b) != 0 {
                        hubs[b / n].push(b % n + 1);
                    }
                }
                if hubs.iter().any(|x| x.len() < 2) {
                    continue;
                }
                if let Ok(t) = LabelledBipartiteTree::new(n, hubs) {
                    seen.insert(t);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn element_counts_match_brute_force() {
        for n in 2..=4 {
            let p = enumerate_whitehead_poset(n).unwrap();
            assert_eq!(p.len(), oracle_count(n), "n={n}");
        }
        assert_eq!(enumerate_whitehead_poset(2).unwrap().len(), 1);
        assert_eq!(enumerate_whitehead_poset(3).unwrap().len(), 4);
        assert_eq!(enumerate_whitehead_poset(4).unwrap().len(), 29);
    }

    #[test]
    fn rank_one_is_rejected() {
        assert!(matches!(enumerate_whitehead_poset(1), Err(Error::InvalidRank(1))));
    }

    #[test]
    fn small_structure() {
        let p = enumerate_whitehead_poset(3).unwrap();
        assert_eq!(p.covers.len(), 3);
        assert!(p.elements[0].is_trivial());
        for n in 2..=4 {
            let p = enumerate_whitehead_poset(n).unwrap();
            assert_eq!(p.max_chain_cardinality(), n - 1);
            assert!((1..p.len()).all(|k| p.less(0, k)));
        }
        assert_eq!(enumerate_whitehead_poset(3).unwrap().chain_counts(), vec![4, 3]);
        assert_eq!(enumerate_whitehead_poset(4).unwrap().chain_counts(), vec![29, 64, 36]);
    }

    #[test]
    fn covers_are_folds() {
        let p = enumerate_whitehead_poset(4).unwrap();
        for &(lo, hi) in &p.covers {
            assert_eq!(p.elements[lo].unlabelled_count() + 1, p.elements[hi].unlabelled_count());
            assert!(p.elements[hi].folds().contains(&p.elements[lo]));
        }
    }
}
