//! Integral reduced homology of finite simplicial complexes, used for the
//! order complex of the fold poset.
//!
//! Boundary matrices are reduced by sparse elimination on unit pivots; any
//! residue without unit entries goes through a dense Smith normal form.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use super::poset::WhiteheadPoset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub dim: usize,
    pub rank: usize,
    /// Invariant factors above 1, as decimal strings.
    pub torsion: Vec<String>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologyReport {
    /// Simplices per dimension `0..`.
    pub simplices: Vec<usize>,
    pub euler_characteristic: i64,
    /// Reduced homology in each dimension.
    pub reduced: Vec<HomologyGroup>,
}

impl HomologyReport {
    pub fn is_acyclic(&self) -> bool {
        self.reduced.iter().all(HomologyGroup::is_trivial)
    }
}

/// Reduced homology of the order complex of `poset`.
pub fn order_complex_homology(poset: &WhiteheadPoset) -> HomologyReport {
    simplicial_homology(&poset.chains())
}

/// Reduced homology of the complex whose simplices are `simplices` (each a
/// sorted vertex list; the list must be closed under faces).
pub fn simplicial_homology(simplices: &[Vec<usize>]) -> HomologyReport {
    let top = simplices.iter().map(Vec::len).max().unwrap_or(0);
    let mut by_dim: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); top];
    for s in simplices {
        by_dim[s.len() - 1].push(s);
    }
    let index: Vec<HashMap<&Vec<usize>, usize>> = by_dim
        .iter()
        .map(|ss| ss.iter().enumerate().map(|(k, s)| (*s, k)).collect())
        .collect();
    let counts: Vec<usize> = by_dim.iter().map(Vec::len).collect();

    // divisors[d]: nonzero invariant factors of the boundary C_d -> C_{d-1},
    // with d = 0 the augmentation onto Z.
    let mut divisors: Vec<Vec<BigInt>> = Vec::with_capacity(top + 1);
    let aug: Vec<(usize, usize, i64)> = (0..counts.first().copied().unwrap_or(0)).map(|c| (0, c, 1)).collect();
    divisors.push(invariant_factors(1, counts.first().copied().unwrap_or(0), aug));
    for d in 1..top {
        let mut entries = Vec::new();
        for (c, s) in by_dim[d].iter().enumerate() {
            for k in 0..s.len() {
                let mut face = (*s).clone();
                face.remove(k);
                let r = index[d - 1][&face];
                entries.push((r, c, if k % 2 == 0 { 1 } else { -1 }));
            }
        }
        divisors.push(invariant_factors(counts[d - 1], counts[d], entries));
    }
    divisors.push(Vec::new());

    let reduced = (0..top)
        .map(|d| {
            let rank = counts[d] - divisors[d].len() - divisors[d + 1].len();
            let torsion = divisors[d + 1]
                .iter()
                .filter(|x| **x != BigInt::from(1))
                .map(|x| x.to_string())
                .collect();
            HomologyGroup { dim: d, rank, torsion }
        })
        .collect();
    let euler = counts
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    HomologyReport {
        simplices: counts,
        euler_characteristic: euler,
        reduced,
    }
}

/// Nonzero invariant factors (absolute values, sorted ascending) of a
/// sparse integer matrix given as `(row, col, value)` triples.
pub fn invariant_factors(rows: usize, cols: usize, entries: Vec<(usize, usize, i64)>) -> Vec<BigInt> {
    let mut row: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); rows];
    let mut col: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
    for (r, c, v) in entries {
        let e = row[r].entry(c).or_insert_with(|| BigInt::from(0));
        *e += v;
    }
    for (r, m) in row.iter_mut().enumerate() {
        m.retain(|_, v| *v != BigInt::from(0));
        for &c in m.keys() {
            col[c].insert(r);
        }
    }
    let one = BigInt::from(1);
    let is_unit = |v: &BigInt| *v == one || *v == -one.clone();
    let mut units = 0usize;
    loop {
        // Cheapest unit pivot by fill-in estimate.
        let mut best: Option<(usize, usize, usize)> = None;
        for (c, rs) in col.iter().enumerate() {
            for &r in rs {
                if is_unit(&row[r][&c]) {
                    let cost = (row[r].len() - 1) * (rs.len() - 1);
                    if best.is_none_or(|b| cost < b.0) {
                        best = Some((cost, r, c));
                    }
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((_, pr, pc)) = best else { break };
        units += 1;
        let pivot_row = std::mem::take(&mut row[pr]);
        let p = pivot_row[&pc].clone();
        for &c in pivot_row.keys() {
            col[c].remove(&pr);
        }
        let others: Vec<usize> = col[pc].iter().copied().collect();
        for s in others {
            let factor = &row[s][&pc] * &p;
            for (&c, v) in &pivot_row {
                let e = row[s].entry(c).or_insert_with(|| BigInt::from(0));
                *e -= &factor * v;
                if *e == BigInt::from(0) {
                    row[s].remove(&c);
                    col[c].remove(&s);
                } else {
                    col[c].insert(s);
                }
            }
        }
        debug_assert!(col[pc].is_empty());
    }
    let live_rows: Vec<usize> = (0..rows).filter(|&r| !row[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols).filter(|&c| !col[c].is_empty()).collect();
    let mut out = vec![one.clone(); units];
    if !live_rows.is_empty() {
        let cpos: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut dense = vec![vec![BigInt::from(0); live_cols.len()]; live_rows.len()];
        for (k, &r) in live_rows.iter().enumerate() {
            for (c, v) in &row[r] {
                dense[k][cpos[c]] = v.clone();
            }
        }
        out.extend(smith_diagonal(dense));
    }
    out.sort();
    out
}

/// Dense Smith normal form; returns the nonzero diagonal, each entry
/// dividing the next.
#[allow(clippy::needless_range_loop)]
fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let zero = BigInt::from(0);
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if a[i][j] != zero
                    && best.is_none_or(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..m {
            if a[i][t] != zero {
                let q = &a[i][t] / &a[t][t];
                for j in t..n {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                if a[i][t] != zero {
                    clean = false;
                }
            }
        }
        for j in t + 1..n {
            if a[t][j] != zero {
                let q = &a[t][j] / &a[t][t];
                for i in t..m {
                    let d = &q * &a[i][t];
                    a[i][j] -= d;
                }
                if a[t][j] != zero {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // Enforce divisibility of the rest by the pivot.
        let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| &a[i][j] % &a[t][t] != zero));
        if let Some(i) = bad {
            for j in t..n {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        diag.push(a[t][t].magnitude().clone().into());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::poset::enumerate_whitehead_poset;

    fn closure(facets: &[&[usize]]) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in facets {
            for mask in 1u32..(1 << f.len()) {
                out.insert(
                    (0..f.len())
                        .filter(|k| mask & (1 << k) != 0)
                        .map(|k| f[k])
                        .collect::<Vec<_>>(),
                );
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn circle_and_sphere() {
        let circle = simplicial_homology(&closure(&[&[0, 1], &[1, 2], &[0, 2]]));
        assert_eq!(circle.euler_characteristic, 0);
        assert_eq!(circle.reduced[1].rank, 1);
        assert_eq!(circle.reduced[0].rank, 0);
        let sphere = simplicial_homology(&closure(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]));
        assert_eq!(sphere.reduced[2].rank, 1);
        assert_eq!(sphere.reduced[1].rank, 0);
        let two_points = simplicial_homology(&closure(&[&[0], &[1]]));
        assert_eq!(two_points.reduced[0].rank, 1);
    }

    #[test]
    fn torsion_survives() {
        let f = invariant_factors(2, 2, vec![(0, 0, 2), (1, 1, 3)]);
        assert_eq!(f, vec![BigInt::from(1), BigInt::from(6)]);
        let g = invariant_factors(1, 1, vec![(0, 0, 2)]);
        assert_eq!(g, vec![BigInt::from(2)]);
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        // Minimal six-vertex triangulation.
        let rp2 = closure(&[
            &[0, 1, 3], &[0, 1, 5], &[0, 2, 4], &[0, 2, 5], &[0, 3, 4],
            &[1, 2, 3], &[1, 2, 4], &[1, 4, 5], &[2, 3, 5], &[3, 4, 5],
        ]);
        let h = simplicial_homology(&rp2);
        assert_eq!(h.euler_characteristic, 1);
        assert_eq!(h.reduced[1].torsion, vec!["2".to_string()]);
        assert_eq!(h.reduced[2].rank, 0);
    }

    #[test]
    fn fold_poset_is_acyclic() {
        for n in 2..=4 {
            let h = order_complex_homology(&enumerate_whitehead_poset(n).unwrap());
            assert_eq!(h.euler_characteristic, 1, "n={n}");
            assert!(h.is_acyclic(), "n={n}: {:?}", h.reduced);
        }
    }
}
