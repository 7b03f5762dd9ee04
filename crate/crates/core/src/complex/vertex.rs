//! Automorphisms carried by a labelled vertex of a tree, and generators for
//! the stabilizer of a tree over the standard basis.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::tree::LabelledBipartiteTree;
use crate::error::{Error, Result};
use crate::symaut::{perm_letters, GeneratorWord, Letter, SymmetricAut};
use crate::words::{GeneratorConjugate, GroupContext, Word};

/// `b ↦ b_v^{θ(b)} b b_v^{-θ(b)}`, with `θ` constant on each component of
/// `T - v`. `theta[i - 1]` is the power for `b_i`; the entry for `v` itself
/// is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexAutomorphismSpec {
    pub tree: LabelledBipartiteTree,
    pub v: usize,
    pub theta: Vec<i64>,
}

impl VertexAutomorphismSpec {
    /// Powers `powers[c]` on the components at `v`, in the order of
    /// [`LabelledBipartiteTree::components_at`].
    pub fn from_components(tree: &LabelledBipartiteTree, v: usize, powers: &[i64]) -> Result<Self> {
        let comps = tree.components_at(v);
        if powers.len() != comps.len() {
            return Err(Error::LengthMismatch {
                expected: comps.len(),
                found: powers.len(),
            });
        }
        let mut theta = vec![0; tree.n()];
        for (c, &p) in comps.iter().zip(powers) {
            for &l in c {
                theta[l - 1] = p;
            }
        }
        Ok(Self {
            tree: tree.clone(),
            v,
            theta,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.tree.n();
        if self.v == 0 || self.v > n {
            return Err(Error::IndexOutOfRange {
                index: self.v,
                rank: n,
            });
        }
        if self.theta.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: self.theta.len(),
            });
        }
        for comp in self.tree.components_at(self.v) {
            let p = self.theta[comp[0] - 1];
            if let Some(&l) = comp.iter().find(|&&l| self.theta[l - 1] != p) {
                return Err(Error::NonConstantTheta(l));
            }
        }
        Ok(())
    }

    /// The equivalent product of `α_{i,v}` powers; these commute, so the
    /// order is immaterial.
    pub fn generator_word(&self) -> GeneratorWord {
        let mut letters = Vec::new();
        for (k, &p) in self.theta.iter().enumerate() {
            let i = k + 1;
            if i == self.v {
                continue;
            }
            let l = if p >= 0 { Letter::a(i, self.v) } else { Letter::a_inv(i, self.v) };
            letters.extend(std::iter::repeat_n(l, p.unsigned_abs() as usize));
        }
        GeneratorWord::new(self.tree.n(), letters).expect("indices are in range")
    }
}

/// Evaluate a vertex automorphism over the standard basis of `ctx`.
pub fn vertex_aut_eval(spec: &VertexAutomorphismSpec, ctx: GroupContext) -> Result<SymmetricAut> {
    spec.validate()?;
    if ctx.rank() != spec.tree.n() {
        return Err(Error::RankMismatch {
            expected: spec.tree.n(),
            found: ctx.rank(),
        });
    }
    let images = (1..=ctx.rank())
        .map(|i| {
            let p = if i == spec.v { 0 } else { spec.theta[i - 1] };
            (Word::gen_power(ctx, spec.v, p), i, 1)
        })
        .collect();
    let source = ctx.is_free().then(|| spec.generator_word());
    Ok(SymmetricAut::from_images(ctx, images)?.with_source(source))
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexGenerator {
    pub v: usize,
    /// Labels of the (non-designated) component that is conjugated.
    pub component: Vec<usize>,
    pub word: GeneratorWord,
}

#[derive(Debug, Clone, Serialize)]
pub struct PermutationGenerator {
    /// One-line notation: `i ↦ perm[i - 1]`.
    pub perm: Vec<usize>,
    pub word: GeneratorWord,
}

/// Generators for the stabilizer `V_T ⋊ ((Z/2)^n ⋊ S_T)` of a tree over the
/// standard basis.
#[derive(Debug, Clone, Serialize)]
pub struct StabilizerGenerators {
    pub tree: LabelledBipartiteTree,
    pub vertex: Vec<VertexGenerator>,
    pub rho: Vec<GeneratorWord>,
    pub permutations: Vec<PermutationGenerator>,
    /// Order of the permutation part `S_T`.
    pub symmetry_order: usize,
}

impl StabilizerGenerators {
    pub fn rank_vertex_part(&self) -> usize {
        self.vertex.len()
    }

    pub fn all_words(&self) -> Vec<GeneratorWord> {
        self.vertex
            .iter()
            .map(|g| g.word.clone())
            .chain(self.rho.iter().cloned())
            .chain(self.permutations.iter().map(|p| p.word.clone()))
            .collect()
    }
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x - 1]).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (1..=n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

/// Label permutations preserving the tree, in lexicographic order.
pub fn tree_symmetries(tree: &LabelledBipartiteTree) -> Vec<Vec<usize>> {
    permutations(tree.n())
        .into_iter()
        .filter(|p| tree.permuted(p) == *tree)
        .collect()
}

fn closure(gens: &[Vec<usize>], n: usize) -> BTreeSet<Vec<usize>> {
    let id: Vec<usize> = (1..=n).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = compose_perm(g, &p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Greedy generating set: scan the group in lexicographic order and keep
/// each element not yet generated.
fn generating_set(group: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut span = closure(&gens, n);
    for g in group {
        if !span.contains(g) {
            gens.push(g.clone());
            span = closure(&gens, n);
        }
    }
    gens
}

pub fn stabilizer_generators(tree: &LabelledBipartiteTree) -> StabilizerGenerators {
    let n = tree.n();
    let mut vertex = Vec::new();
    for v in 1..=n {
        for comp in tree.components_at(v).into_iter().skip(1) {
            let letters = comp.iter().map(|&i| Letter::a(i, v)).collect();
            vertex.push(VertexGenerator {
                v,
                component: comp,
                word: GeneratorWord::new(n, letters).expect("indices are in range"),
            });
        }
    }
    let rho = (1..=n)
        .map(|i| GeneratorWord::new(n, vec![Letter::R(i)]).expect("index in range"))
        .collect();
    let group = tree_symmetries(tree);
    let permutations = generating_set(&group, n)
        .into_iter()
        .map(|perm| {
            let word = GeneratorWord::new(n, perm_letters(&perm)).expect("indices are in range");
            PermutationGenerator { perm, word }
        })
        .collect();
    StabilizerGenerators {
        tree: tree.clone(),
        vertex,
        rho,
        permutations,
        symmetry_order: group.len(),
    }
}

/// Decide whether `f` fixes the equivalence class of `tree` over the
/// standard basis, by undoing conjugations with vertex automorphisms of
/// the tree and inner automorphisms until every basis element is a bare
/// generator, then comparing the induced relabelling with the tree.
///
/// The descent is greedy, so `false` means "no reduction found"; every
/// `true` is exact.
pub fn stabilizes(tree: &LabelledBipartiteTree, f: &SymmetricAut) -> Result<bool> {
    let n = tree.n();
    if f.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: f.rank(),
        });
    }
    let ctx = f.context();
    // Basis element at vertex i: f(y_i).
    let mut basis: Vec<GeneratorConjugate> = f
        .images()
        .iter()
        .map(|im| GeneratorConjugate::new(im.conjugator.clone(), im.target, im.sign as i64))
        .collect();
    let cost = |b: &[GeneratorConjugate]| b.iter().map(|g| g.conjugator.letter_len()).sum::<u64>();
    let comps: Vec<Vec<Vec<usize>>> = (1..=n).map(|v| tree.components_at(v)).collect();
    let conj_all = |b: &[GeneratorConjugate], members: &[usize], by: &Word| -> Vec<GeneratorConjugate> {
        let mut out = b.to_vec();
        for &i in members {
            let g = &b[i - 1];
            out[i - 1] = GeneratorConjugate::new(by.mul(&g.conjugator), g.target, g.exponent);
        }
        out
    };
    let everyone: Vec<usize> = (1..=n).collect();
    let mut current = cost(&basis);
    while current > 0 {
        let mut best: Option<(u64, Vec<GeneratorConjugate>)> = None;
        for v in 1..=n {
            let bv = basis[v - 1].to_word();
            for comp in &comps[v - 1] {
                for by in [bv.clone(), bv.inverse()] {
                    let cand = conj_all(&basis, comp, &by);
                    let c = cost(&cand);
                    if c < current && best.as_ref().is_none_or(|b| c < b.0) {
                        best = Some((c, cand));
                    }
                }
            }
        }
        for g in 1..=n {
            for e in [1, -1] {
                let cand = conj_all(&basis, &everyone, &Word::gen_power(ctx, g, e));
                let c = cost(&cand);
                if c < current && best.as_ref().is_none_or(|b| c < b.0) {
                    best = Some((c, cand));
                }
            }
        }
        match best {
            Some((c, b)) => {
                current = c;
                basis = b;
            }
            None => return Ok(false),
        }
    }
    let relabel: Vec<usize> = basis.iter().map(|g| g.target).collect();
    Ok(tree.permuted(&relabel) == *tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symaut::eval_generator_word;

    fn t(n: usize, hubs: &[&[usize]]) -> LabelledBipartiteTree {
        LabelledBipartiteTree::new(n, hubs.iter().map(|h| h.to_vec()).collect()).unwrap()
    }

    #[test]
    fn path_vertex_automorphism_is_alpha() {
        let path = t(3, &[&[1, 3], &[2, 3]]);
        let ctx = GroupContext::free(3).unwrap();
        let spec = VertexAutomorphismSpec::from_components(&path, 3, &[1, 0]).unwrap();
        let f = vertex_aut_eval(&spec, ctx).unwrap();
        let alpha = eval_generator_word(&GeneratorWord::parse("a[1,3]", 3).unwrap(), ctx).unwrap();
        assert_eq!(f, alpha);
    }

    #[test]
    fn non_constant_theta_is_rejected() {
        let x = t(4, &[&[1, 2, 4], &[3, 4]]);
        let spec = VertexAutomorphismSpec {
            tree: x,
            v: 4,
            theta: vec![1, 0, 0, 0],
        };
        let ctx = GroupContext::free(4).unwrap();
        assert!(matches!(vertex_aut_eval(&spec, ctx), Err(Error::NonConstantTheta(2))));
    }

    #[test]
    fn trivial_tree_automorphisms_are_inner() {
        let triv = LabelledBipartiteTree::trivial(3).unwrap();
        let ctx = GroupContext::free(3).unwrap();
        for v in 1..=3 {
            let spec = VertexAutomorphismSpec::from_components(&triv, v, &[2]).unwrap();
            assert!(vertex_aut_eval(&spec, ctx).unwrap().is_inner().unwrap());
        }
    }

    #[test]
    fn rho_inverts_vertex_automorphisms() {
        let x = t(4, &[&[1, 2, 4], &[3, 4]]);
        let ctx = GroupContext::free(4).unwrap();
        let f = vertex_aut_eval(&VertexAutomorphismSpec::from_components(&x, 4, &[2, -1]).unwrap(), ctx).unwrap();
        let r = SymmetricAut::letter(Letter::R(4), ctx);
        let lhs = r.compose(&f).unwrap().compose(&r).unwrap();
        assert_eq!(lhs, f.inverse().unwrap());
    }

    #[test]
    fn stabilizer_examples() {
        let x = t(4, &[&[1, 2, 4], &[3, 4]]);
        let s = stabilizer_generators(&x);
        assert_eq!(s.rank_vertex_part(), 1);
        assert_eq!(s.vertex[0].v, 4);
        assert_eq!(s.symmetry_order, 2);
        assert_eq!(s.permutations.len(), 1);
        assert_eq!(s.permutations[0].perm, vec![2, 1, 3, 4]);

        let path = t(3, &[&[1, 3], &[2, 3]]);
        let s = stabilizer_generators(&path);
        assert_eq!(s.permutations.iter().map(|p| p.perm.clone()).collect::<Vec<_>>(), vec![vec![2, 1, 3]]);

        let triv = stabilizer_generators(&LabelledBipartiteTree::trivial(3).unwrap());
        assert_eq!(triv.symmetry_order, 6);
        assert_eq!(triv.rank_vertex_part(), 0);
        let perms: Vec<Vec<usize>> = triv.permutations.iter().map(|p| p.perm.clone()).collect();
        assert_eq!(closure(&perms, 3).len(), 6);
    }

    #[test]
    fn generators_stabilize() {
        let ctx = GroupContext::free(4).unwrap();
        for tree in [t(4, &[&[1, 2, 4], &[3, 4]]), t(4, &[&[1, 2], &[2, 3], &[3, 4]]), t(4, &[&[1, 4], &[2, 4], &[3, 4]])] {
            for w in stabilizer_generators(&tree).all_words() {
                let f = eval_generator_word(&w, ctx).unwrap();
                assert!(stabilizes(&tree, &f).unwrap(), "{tree}: {w}");
            }
        }
    }

    #[test]
    fn non_stabilizers_are_rejected() {
        let ctx = GroupContext::free(3).unwrap();
        let path = t(3, &[&[1, 3], &[2, 3]]);
        for s in ["a[1,2]", "s[1,3]", "a[3,1]"] {
            let f = eval_generator_word(&GeneratorWord::parse(s, 3).unwrap(), ctx).unwrap();
            assert!(!stabilizes(&path, &f).unwrap(), "{s}");
        }
    }
}
