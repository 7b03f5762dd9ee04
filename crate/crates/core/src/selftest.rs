//! The acceptance checks, runnable at two scales. Each check seeds its own
//! generator from the run seed, so results do not depend on check order or
//! thread count. Timings are deliberately absent from the report.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::braid::bounded_kernel_search;
use crate::complex::{
    enumerate_whitehead_poset, order_complex_homology, quotient_star_check, stabilizer_generators, stabilizes,
    vertex_aut_eval, LabelledBipartiteTree, NuclearVertex, VertexAutomorphismSpec,
};
use crate::error::{Error, Result};
use crate::kernel::{certify, verify_certificate};
use crate::lift::{kernel_verdict, kernel_verdicts, Route, Verdict};
use crate::random::{random_generator_word, random_pure_letter, random_rho_product, rng_from_seed};
use crate::symaut::{check_relations_with, eval_generator_word, outer_equal, GeneratorWord, Letter, RelationFault, SymmetricAut};
use crate::words::{GroupContext, Word};

/// Version of the JSON layout shared by the report types.
pub const SCHEMA: &str = "symlift/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(Error::Parse(format!("unknown level {s:?}"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Quick => "quick",
            Level::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SelftestOptions {
    pub level: Level,
    pub seed: u64,
    /// Corrupt the relation table, to confirm failures are reported.
    pub fault: Option<RelationFault>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub schema: &'static str,
    pub level: Level,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub all_pass: bool,
}

impl SelftestReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn check(criterion: u8, name: &'static str, body: impl FnOnce() -> Result<(bool, Value)>) -> CheckResult {
    match body() {
        Ok((pass, detail)) => CheckResult {
            criterion,
            name,
            pass,
            detail,
        },
        Err(e) => CheckResult {
            criterion,
            name,
            pass: false,
            detail: json!({ "error": e.to_string() }),
        },
    }
}

fn sub_seed(seed: u64, criterion: u8) -> u64 {
    seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(criterion as u64 + 1))
}

/// Every defining relation, and the extra inner relation, holds in the
/// outer automorphism group.
pub fn presentation(ns: &[usize], fault: Option<RelationFault>) -> CheckResult {
    check(1, "presentation", || {
        let mut per_n = Vec::new();
        let mut pass = true;
        for &n in ns {
            let r = check_relations_with(n, fault)?;
            let failed: Vec<String> = r.failures().map(|c| format!("{}: {} = {}", c.family, c.lhs, c.rhs)).collect();
            pass &= r.all_pass;
            per_n.push(json!({ "n": n, "checked": r.checks.len(), "failed": failed.into_iter().take(5).collect::<Vec<_>>() }));
        }
        Ok((pass, json!(per_n)))
    })
}

/// The two kernel routes agree with no unknowns on random words.
pub fn route_agreement(ns: &[usize], per_n: usize, max_len: usize, seed: u64) -> CheckResult {
    check(2, "route-agreement", || {
        let mut rng = rng_from_seed(sub_seed(seed, 2));
        let mut out = Vec::new();
        let mut pass = true;
        for &n in ns {
            let words: Vec<GeneratorWord> = (0..per_n)
                .map(|_| {
                    let len = rng.gen_range(0..=max_len);
                    random_generator_word(n, len, &mut rng)
                })
                .collect();
            let verdicts = kernel_verdicts(&words, Route::Both);
            let (mut agree, mut unknown, mut inside) = (0, 0, 0);
            let mut first_bad = None;
            for (w, v) in words.iter().zip(verdicts) {
                let v = v?;
                let ok = v.inner_in_h == v.lift && v.inner_in_h != Some(Verdict::Unknown);
                agree += ok as usize;
                unknown += (v.inner_in_h == Some(Verdict::Unknown) || v.lift == Some(Verdict::Unknown)) as usize;
                inside += (v.verdict == Verdict::In) as usize;
                if !ok && first_bad.is_none() {
                    first_bad = Some(w.to_string());
                }
            }
            pass &= agree == per_n;
            out.push(json!({ "n": n, "words": per_n, "agree": agree, "unknown": unknown, "in_kernel": inside, "first_disagreement": first_bad }));
        }
        Ok((pass, json!(out)))
    })
}

/// Rank two: the signed permutations all lie in the kernel by the lift
/// route, and `α_{1,2}` is inner.
pub fn rank_two() -> CheckResult {
    check(3, "rank-two", || {
        let ctx = GroupContext::free(2)?;
        let gens = [Letter::R(1), Letter::R(2), Letter::s(1, 2)];
        let mut seen: HashMap<SymmetricAut, GeneratorWord> = HashMap::new();
        let id = SymmetricAut::identity(ctx);
        seen.insert(id, GeneratorWord::empty(2));
        let mut queue = VecDeque::from([GeneratorWord::empty(2)]);
        while let Some(w) = queue.pop_front() {
            for &g in &gens {
                let next = w.concat(&GeneratorWord::new(2, vec![g])?);
                let f = eval_generator_word(&next, ctx)?;
                if let Entry::Vacant(e) = seen.entry(f) {
                    e.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let mut words: Vec<GeneratorWord> = seen.into_values().collect();
        words.sort_by_key(|w| (w.len(), w.to_string()));
        let mut all_in = true;
        let mut listed = Vec::new();
        for w in &words {
            let v = kernel_verdict(w, Route::Lift)?;
            all_in &= v.verdict == Verdict::In;
            listed.push(json!({ "word": w.to_string(), "verdict": v.verdict }));
        }
        let alpha = eval_generator_word(&GeneratorWord::parse("a[1,2]", 2)?, ctx)?;
        let alpha_inner = alpha.is_inner()?;
        let pass = words.len() == 8 && all_in && alpha_inner;
        Ok((pass, json!({ "elements": listed, "alpha_inner": alpha_inner })))
    })
}

/// Products of conjugates of `ρ` test in the kernel, certify, and the
/// certificates verify.
pub fn rho_products(ns: &[usize], per_n: usize, seed: u64) -> CheckResult {
    check(4, "rho-products", || {
        let mut rng = rng_from_seed(sub_seed(seed, 4));
        let mut out = Vec::new();
        let mut pass = true;
        for &n in ns {
            let words: Vec<GeneratorWord> = (0..per_n).map(|_| random_rho_product(n, 6, 10, &mut rng)).collect();
            let results: Vec<Result<(bool, bool, bool)>> = words
                .par_iter()
                .map(|w| {
                    let inside = kernel_verdict(w, Route::InnerInH)?.verdict == Verdict::In;
                    let cert = certify(w);
                    let verified = match &cert {
                        Some(c) => verify_certificate(c, w)?,
                        None => false,
                    };
                    Ok((inside, cert.is_some(), verified))
                })
                .collect();
            let (mut a, mut b, mut c) = (0, 0, 0);
            let mut first_bad = None;
            for (w, r) in words.iter().zip(results) {
                let (x, y, z) = r?;
                a += x as usize;
                b += y as usize;
                c += z as usize;
                if !(x && y && z) && first_bad.is_none() {
                    first_bad = Some(w.to_string());
                }
            }
            pass &= a == per_n && b == per_n && c == per_n;
            out.push(json!({ "n": n, "words": per_n, "in_kernel": a, "certified": b, "verified": c, "first_failure": first_bad }));
        }
        Ok((pass, json!(out)))
    })
}

/// The abstract word in the free basis `α_{1,2}, α_{2,3}, α_{3,1}` of the
/// pure outer group in rank three, with `α_{1,3} = α_{2,3}^-1`,
/// `α_{2,1} = α_{3,1}^-1`, `α_{3,2} = α_{1,2}^-1`.
fn omega_letters(gw: &GeneratorWord) -> Vec<(usize, i64)> {
    gw.letters()
        .iter()
        .map(|l| match *l {
            Letter::A { i, j, inv } => {
                let e = if inv { -1 } else { 1 };
                match (i, j) {
                    (1, 2) => (1, e),
                    (2, 3) => (2, e),
                    (3, 1) => (3, e),
                    (1, 3) => (2, -e),
                    (2, 1) => (3, -e),
                    (3, 2) => (1, -e),
                    _ => unreachable!("rank three"),
                }
            }
            _ => unreachable!("pure words only"),
        })
        .collect()
}

/// Rank-three kernel computations: the outer identity `α_{1,3} = α_{2,3}^-1`,
/// freeness of `α_{1,2}, α_{2,3}, α_{3,1}` up to a length bound, and the
/// kernel test against the mod-2 oracle on pure words.
pub fn rank_three_kernel(max_relation_len: usize, samples: usize, seed: u64) -> CheckResult {
    check(5, "rank-three-kernel", || {
        let n = 3;
        let ctx = GroupContext::free(n)?;
        let eval = |s: &str| -> Result<SymmetricAut> { eval_generator_word(&GeneratorWord::parse(s, n)?, ctx) };
        let identity_holds = outer_equal(&eval("a[1,3]")?, &eval("a[2,3]^-1")?)?;

        // A relation of length ≤ 2m is u v^-1 = 1 for distinct reduced u, v
        // of length ≤ m, so it suffices that those have distinct outer
        // classes. Pure automorphisms meet signed permutations times inner
        // automorphisms only in inner ones, so nuclear vertices separate
        // outer classes here.
        let half = max_relation_len / 2;
        let alphabet = [Letter::a(1, 2), Letter::a_inv(1, 2), Letter::a(2, 3), Letter::a_inv(2, 3), Letter::a(3, 1), Letter::a_inv(3, 1)];
        let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut all: Vec<Vec<Letter>> = vec![Vec::new()];
        for _ in 0..half {
            let mut next = Vec::new();
            for w in &level {
                for &a in &alphabet {
                    if w.last() == Some(&a.inverse()) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            all.extend(next.iter().cloned());
            level = next;
        }
        let keys: Vec<Result<NuclearVertex>> = all
            .par_iter()
            .map(|w| NuclearVertex::from_aut(&eval_generator_word(&GeneratorWord::new(n, w.clone())?, ctx)?))
            .collect();
        let mut distinct = BTreeSet::new();
        for k in keys {
            distinct.insert(k?);
        }
        let free_up_to_bound = distinct.len() == all.len();

        let mut rng = rng_from_seed(sub_seed(seed, 5));
        let hctx = GroupContext::involutions(3)?;
        let words: Vec<GeneratorWord> = (0..samples)
            .map(|s| {
                let len = rng.gen_range(0..=6);
                let u: Vec<Letter> = (0..len).map(|_| random_pure_letter(n, &mut rng)).collect();
                let mut letters = u.clone();
                if s % 2 == 0 {
                    // Mirror with arbitrary signs: trivial after reduction mod 2.
                    for l in u.iter().rev() {
                        letters.push(if rng.gen_bool(0.5) { *l } else { l.inverse() });
                    }
                } else {
                    letters.extend((0..rng.gen_range(0..=6)).map(|_| random_pure_letter(n, &mut rng)));
                }
                GeneratorWord::new(n, letters).expect("rank three")
            })
            .collect();
        let verdicts = kernel_verdicts(&words, Route::Both);
        let (mut agree, mut inside) = (0, 0);
        let mut first_bad = None;
        for (w, v) in words.iter().zip(verdicts) {
            let ours = v?.verdict == Verdict::In;
            let oracle = Word::normalize(omega_letters(w), hctx)?.is_identity();
            inside += oracle as usize;
            if ours == oracle {
                agree += 1;
            } else if first_bad.is_none() {
                first_bad = Some(w.to_string());
            }
        }
        let pass = identity_holds && free_up_to_bound && agree == samples;
        Ok((
            pass,
            json!({
                "alpha13_outer_equals_alpha23_inverse": identity_holds,
                "relation_length_bound": 2 * half,
                "words_compared": all.len(),
                "free_up_to_bound": free_up_to_bound,
                "samples": samples,
                "oracle_agreements": agree,
                "oracle_in_kernel": inside,
                "first_disagreement": first_bad,
            }),
        ))
    })
}

/// Element counts against brute force, chain lengths, Euler characteristic
/// and reduced homology of the fold posets.
pub fn poset_facts(max_n: usize) -> CheckResult {
    check(6, "whitehead-poset", || {
        let mut out = Vec::new();
        let mut pass = true;
        for n in 2..=max_n {
            let p = enumerate_whitehead_poset(n)?;
            let oracle = if n <= 3 { Some(brute_force_tree_count(n)) } else { None };
            let h = order_complex_homology(&p);
            let chain = p.max_chain_cardinality();
            let ok = oracle.is_none_or(|c| c == p.len()) && chain == n - 1 && h.euler_characteristic == 1 && h.is_acyclic();
            pass &= ok;
            out.push(json!({
                "n": n,
                "elements": p.len(),
                "oracle_elements": oracle,
                "max_chain": chain,
                "simplices": h.simplices,
                "euler": h.euler_characteristic,
                "acyclic": h.is_acyclic(),
            }));
        }
        Ok((pass, json!(out)))
    })
}

/// Exhaustive count of trees by enumerating bipartite graphs between the
/// labels and up to `n - 1` hubs.
pub fn brute_force_tree_count(n: usize) -> usize {
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
            if let Ok(t) = LabelledBipartiteTree::new(n, hubs) {
                seen.insert(t);
            }
        }
    }
    seen.len()
}

fn random_vertex_aut<R: Rng>(
    trees: &[LabelledBipartiteTree],
    rng: &mut R,
    exclude: Option<usize>,
    tree: Option<&LabelledBipartiteTree>,
) -> Option<VertexAutomorphismSpec> {
    let t = match tree {
        Some(t) => t.clone(),
        None => trees[rng.gen_range(0..trees.len())].clone(),
    };
    let vertices: Vec<usize> = (1..=t.n())
        .filter(|&v| Some(v) != exclude && t.components_at(v).len() >= 2)
        .collect();
    if vertices.is_empty() {
        return None;
    }
    let v = vertices[rng.gen_range(0..vertices.len())];
    let k = t.components_at(v).len();
    let mut powers = vec![0i64; k];
    while powers.iter().all(|&p| p == 0) {
        for p in powers.iter_mut().skip(1) {
            *p = rng.gen_range(-2..=2);
        }
    }
    VertexAutomorphismSpec::from_components(&t, v, &powers).ok()
}

/// Vertex automorphisms: `f^2 = [f, ρ_v]`, commutation up to inner
/// automorphisms at distinct vertices, and soundness of the stabilizer
/// generators.
pub fn stabilizer_algebra(ns: &[usize], samples: usize, seed: u64) -> CheckResult {
    check(7, "stabilizer-algebra", || {
        let mut rng = rng_from_seed(sub_seed(seed, 7));
        let mut out = Vec::new();
        let mut pass = true;
        for &n in ns {
            let ctx = GroupContext::free(n)?;
            let trees: Vec<LabelledBipartiteTree> =
                enumerate_whitehead_poset(n)?.elements.into_iter().filter(|t| !t.is_trivial()).collect();
            let (mut inversion, mut commute, mut commute_checked, mut sound, mut sound_checked) = (0, 0, 0, 0, 0);
            let mut drawn = 0;
            while drawn < samples {
                let Some(spec) = random_vertex_aut(&trees, &mut rng, None, None) else { continue };
                drawn += 1;
                let f = vertex_aut_eval(&spec, ctx)?;
                let r = SymmetricAut::letter(Letter::R(spec.v), ctx);
                let fsq = f.compose(&f)?;
                let comm = f.compose(&r)?.compose(&f.inverse()?)?.compose(&r)?;
                inversion += (fsq == comm) as usize;
                if let Some(other) = random_vertex_aut(&trees, &mut rng, Some(spec.v), Some(&spec.tree)) {
                    let g = vertex_aut_eval(&other, ctx)?;
                    commute_checked += 1;
                    commute += outer_equal(&f.compose(&g)?, &g.compose(&f)?)? as usize;
                }
                let mut ok = stabilizes(&spec.tree, &f)?;
                for w in stabilizer_generators(&spec.tree).all_words() {
                    ok &= stabilizes(&spec.tree, &eval_generator_word(&w, ctx)?)?;
                }
                sound_checked += 1;
                sound += ok as usize;
            }
            pass &= inversion == samples && commute == commute_checked && sound == sound_checked;
            out.push(json!({
                "n": n,
                "samples": samples,
                "rho_inversion": inversion,
                "commutation_checked": commute_checked,
                "commutation": commute,
                "soundness_checked": sound_checked,
                "sound": sound,
            }));
        }
        Ok((pass, json!(out)))
    })
}

/// The mod-2 quotient on the star of the standard nuclear vertex.
pub fn quotient_map(ns: &[usize], samples: usize, seed: u64) -> CheckResult {
    check(8, "quotient-map", || {
        let mut rng = rng_from_seed(sub_seed(seed, 8));
        let mut out = Vec::new();
        let mut pass = true;
        for &n in ns {
            let v = NuclearVertex::standard(GroupContext::free(n)?)?;
            let r = quotient_star_check(&v, samples, &mut rng)?;
            pass &= r.pass;
            out.push(serde_json::to_value(&r).expect("reports serialize"));
        }
        Ok((pass, json!(out)))
    })
}

/// Bounded searches for kernel elements of `η_{n,k}`.
pub fn braid_kernel(cases: &[(usize, u32, usize)]) -> CheckResult {
    check(9, "braid-kernel", || {
        let mut out = Vec::new();
        let mut pass = true;
        for &(n, k, len) in cases {
            let r = bounded_kernel_search(n, k, len)?;
            pass &= r.flagged.is_empty();
            out.push(json!({
                "n": n, "k": k, "max_len": len,
                "words_checked": r.words_checked,
                "inner_images": r.inner_images,
                "flagged": r.flagged.len(),
            }));
        }
        Ok((pass, json!(out)))
    })
}

pub fn run_selftest(opts: SelftestOptions) -> SelftestReport {
    run_selftest_with_progress(opts, |_, _| {})
}

/// As [`run_selftest`], calling `progress` after each check with its wall
/// time. Timings never enter the report.
pub fn run_selftest_with_progress(
    opts: SelftestOptions,
    mut progress: impl FnMut(&CheckResult, std::time::Duration),
) -> SelftestReport {
    let seed = opts.seed;
    let full = opts.level == Level::Full;
    let plan: Vec<Box<dyn Fn() -> CheckResult>> = vec![
        Box::new(move || presentation(&[3, 4, 5], opts.fault)),
        Box::new(move || route_agreement(&[3, 4], if full { 1000 } else { 150 }, 20, seed)),
        Box::new(rank_two),
        Box::new(move || rho_products(&[3, 4], if full { 250 } else { 30 }, seed)),
        Box::new(move || rank_three_kernel(8, if full { 500 } else { 100 }, seed)),
        Box::new(move || poset_facts(if full { 5 } else { 4 })),
        Box::new(move || stabilizer_algebra(&[3, 4], if full { 60 } else { 15 }, seed)),
        Box::new(move || quotient_map(&[3, 4], if full { 100 } else { 20 }, seed)),
        Box::new(move || {
            braid_kernel(if full {
                &[(2, 2, 6), (3, 2, 6), (3, 3, 4)]
            } else {
                &[(2, 2, 6), (3, 2, 4), (3, 3, 3)]
            })
        }),
    ];
    let mut checks = Vec::with_capacity(plan.len());
    for run in plan {
        let start = std::time::Instant::now();
        let c = run();
        progress(&c, start.elapsed());
        checks.push(c);
    }
    let all_pass = checks.iter().all(|c| c.pass);
    SelftestReport {
        schema: SCHEMA,
        level: opts.level,
        seed,
        checks,
        all_pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_counts() {
        assert_eq!(brute_force_tree_count(2), 1);
        assert_eq!(brute_force_tree_count(3), 4);
    }

    #[test]
    fn fault_is_named() {
        let c = presentation(&[3], Some(RelationFault::RhoActionSign));
        assert!(!c.pass);
        assert_eq!(c.name, "presentation");
    }

    #[test]
    fn omega_oracle_examples() {
        let h = GroupContext::involutions(3).unwrap();
        let trivial = GeneratorWord::parse("a[1,3] a[2,3]", 3).unwrap();
        assert!(Word::normalize(omega_letters(&trivial), h).unwrap().is_identity());
        let not = GeneratorWord::parse("a[1,2] a[2,3]", 3).unwrap();
        assert!(!Word::normalize(omega_letters(&not), h).unwrap().is_identity());
    }
}
