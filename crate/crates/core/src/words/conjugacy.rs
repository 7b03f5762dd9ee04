//! Conjugacy in free products via cyclic reduction, and the search for a
//! single conjugator realizing a family of generator conjugates.

use super::{GroupContext, Reducer, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyWitness {
    /// `g` with `g * u * g^-1 = v`.
    pub conjugator: Word,
}

/// A word of the form `c * g_target^exponent * c^-1`, with any trailing
/// `g_target` power absorbed into the exponent so that `c` is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorConjugate {
    pub conjugator: Word,
    pub target: usize,
    pub exponent: i64,
}

impl GeneratorConjugate {
    pub fn new(conjugator: Word, target: usize, exponent: i64) -> Self {
        let (conjugator, _) = conjugator.strip_trailing(target);
        let exponent = conjugator.context().reduce_exp(exponent);
        Self {
            conjugator,
            target,
            exponent,
        }
    }

    /// Decompose `w` as a conjugate of a generator power, if it is one.
    pub fn from_word(w: &Word) -> Option<Self> {
        let (h, r) = cyclic_reduce(w);
        match r.syllables() {
            [(t, e)] => Some(Self::new(h, *t, *e)),
            _ => None,
        }
    }

    pub fn to_word(&self) -> Word {
        let ctx = self.conjugator.context();
        let mut r = Reducer::new(ctx);
        r.push_word(&self.conjugator);
        r.push(self.target, self.exponent);
        r.push_inverse(&self.conjugator);
        r.finish()
    }
}

/// Bounds for the central-exponent search in [`common_conjugator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InnerSearch {
    /// Largest exponent range the search is willing to scan when the
    /// constraints do not pin the exponent. A computed bound above this cap
    /// is reported as [`Error::BoundExceeded`].
    pub exponent_cap: u64,
}

impl Default for InnerSearch {
    fn default() -> Self {
        Self {
            exponent_cap: 1 << 24,
        }
    }
}

/// Split `w = h * r * h^-1` with `r` cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    let ctx = w.context();
    let s = w.syllables();
    let mut h = Vec::new();
    let (mut i, mut j) = (0usize, s.len());
    while j >= i + 2 && s[i].0 == s[j - 1].0 {
        let g = s[i].0;
        let merged = ctx.reduce_exp(s[i].1 + s[j - 1].1);
        h.push(s[i]);
        if merged == 0 {
            i += 1;
            j -= 1;
        } else {
            // s_i X s_j = s_i (X s_j s_i) s_i^-1, and X s_j s_i is cyclically reduced.
            let mut r: Vec<(usize, i64)> = s[i + 1..j - 1].to_vec();
            r.push((g, merged));
            return (Word::from_reduced(ctx, h), Word::from_reduced(ctx, r));
        }
    }
    (
        Word::from_reduced(ctx, h),
        Word::from_reduced(ctx, s[i..j].to_vec()),
    )
}

fn rotate(s: &[(usize, i64)], k: usize) -> Vec<(usize, i64)> {
    let mut out = s[k..].to_vec();
    out.extend_from_slice(&s[..k]);
    out
}

/// Primitive root of a cyclically reduced word of syllable length >= 2.
fn cyclic_root(r: &Word) -> Word {
    let s = r.syllables();
    let len = s.len();
    for d in 1..=len {
        if len.is_multiple_of(d) && (0..len).all(|k| s[k] == s[k % d]) {
            return Word::from_reduced(r.context(), s[..d].to_vec());
        }
    }
    r.clone()
}

type WitnessKey = (u64, Vec<(usize, i64)>, Vec<(usize, i64)>);

/// Tie-break key: shortest first, then a lexicographic order that treats a
/// word and its inverse symmetrically, then plain lexicographic order.
fn witness_key(g: &Word) -> WitnessKey {
    let fwd = g.syllables().to_vec();
    let inv = g.inverse().syllables().to_vec();
    let sym = if inv < fwd { inv } else { fwd.clone() };
    (g.letter_len(), sym, fwd)
}

/// Find `g` with `g * u * g^-1 = v`, choosing the shortest such `g` and
/// breaking ties lexicographically.
pub fn conjugacy_witness(u: &Word, v: &Word) -> Result<Option<ConjugacyWitness>> {
    let ctx = u.context();
    if ctx != v.context() {
        return Err(Error::ContextMismatch {
            left: ctx,
            right: v.context(),
        });
    }
    if ctx.rank() == 1 {
        return Ok((u == v).then(|| ConjugacyWitness {
            conjugator: Word::identity(ctx),
        }));
    }
    let (h, r) = cyclic_reduce(u);
    let (k, s) = cyclic_reduce(v);
    if r.syllable_len() != s.syllable_len() {
        return Ok(None);
    }
    if r.is_identity() {
        return Ok(Some(ConjugacyWitness {
            conjugator: Word::identity(ctx),
        }));
    }
    // s = p^-1 r p for a prefix p of r (syllable rotation).
    let len = r.syllable_len();
    let rot = (0..len).find(|&t| rotate(r.syllables(), t) == s.syllables());
    let Some(rot) = rot else {
        return Ok(None);
    };
    let p = Word::from_reduced(ctx, r.syllables()[..rot].to_vec());
    let mut g0 = Reducer::new(ctx);
    g0.push_word(&k);
    g0.push_inverse(&p);
    g0.push_inverse(&h);
    let g0 = g0.finish();

    // All witnesses form the coset g0 * h <c> h^-1 with c generating the
    // centralizer of r.
    let (c, finite_order) = if len == 1 {
        let gen = r.syllables()[0].0;
        (Word::generator(ctx, gen), ctx.modulus())
    } else {
        (cyclic_root(&r), None)
    };
    let candidate = |m: i64| -> Word {
        let mut acc = Reducer::new(ctx);
        acc.push_word(&g0);
        acc.push_word(&h);
        let base = if m < 0 { c.inverse() } else { c.clone() };
        for _ in 0..m.unsigned_abs() {
            acc.push_word(&base);
        }
        acc.push_inverse(&h);
        acc.finish()
    };
    let range: Vec<i64> = match finite_order {
        Some(order) => (0..order as i64).collect(),
        None => {
            // |g0 h c^m h^-1| >= |m| |c| - |g0| - 2|h|, so beyond this range
            // no candidate can beat m = 0.
            let bound = (2 * g0.letter_len() + 2 * h.letter_len()) / c.letter_len().max(1) + 1;
            let b = bound as i64;
            (-b..=b).collect()
        }
    };
    let best = range
        .into_iter()
        .map(candidate)
        .min_by(|a, b| witness_key(a).cmp(&witness_key(b)))
        .expect("non-empty candidate range");
    debug_assert_eq!(u.conjugated_by(&best), *v);
    Ok(Some(ConjugacyWitness { conjugator: best }))
}

/// Does `p * g_t1^m * q` lie in the cyclic subgroup generated by `g_t2`?
fn lands_in_cyclic(p: &Word, t1: usize, m: i64, q: &Word, t2: usize) -> bool {
    let ctx = p.context();
    let (p_rest, a) = p.strip_trailing(t1);
    let (q_rest, b) = q.strip_leading(t1);
    let mid = ctx.reduce_exp(a + m + b);
    if mid != 0 {
        // p_rest does not end and q_rest does not start with t1, so nothing cancels.
        return t1 == t2 && p_rest.is_identity() && q_rest.is_identity();
    }
    let mut r = Reducer::new(ctx);
    r.push_word(&p_rest);
    r.push_word(&q_rest);
    let w = r.finish();
    match w.syllables() {
        [] => true,
        [(g, _)] => *g == t2,
        _ => false,
    }
}

/// Find `w` with `w * src_i * w^-1 = dst_i` for every `i`.
///
/// Every solution lies in `d_1 <g_t1> c_1^-1` where `src_1 = c_1 g_t1^e c_1^-1`
/// and `dst_1 = d_1 g_t1^e d_1^-1`, so for free contexts only the central
/// exponent `m` in `w = d_1 g_t1^m c_1^-1` is unknown. For torsion contexts
/// `m` ranges over `0..k`.
///
/// Bound for free contexts. Take any constraint `i` with `t_i != t_1`. A
/// solution also lies in `d_i <g_ti> c_i^-1`, so
/// `g_t1^m (c_1^-1 c_i) g_ti^-p = d_1^-1 d_i` for some `p`. Write `X = c_1^-1 c_i`.
/// Left multiplication by `g_t1^m` can only merge into the first syllable of
/// `X`; if `X` is absorbed completely the surviving `g_t1` syllable still
/// meets the `g_ti` syllable without cancelling, since `t_1 != t_i`. Either
/// way the reduced left side has length at least `|m| - |X|`, hence
/// `|m| <= |c_1| + |c_i| + |d_1| + |d_i|`. The same cancellation argument
/// pins `m` outright unless the probe constraint is a pure `g_t1` power;
/// only then is the range scanned, using the bound plus a slack of 2.
pub fn common_conjugator(
    src: &[GeneratorConjugate],
    dst: &[GeneratorConjugate],
    search: InnerSearch,
) -> Result<Option<Word>> {
    if src.len() != dst.len() {
        return Err(Error::LengthMismatch {
            expected: src.len(),
            found: dst.len(),
        });
    }
    let Some(first) = src.first() else {
        return Ok(None);
    };
    let ctx = first.conjugator.context();
    for (a, b) in src.iter().zip(dst) {
        if a.conjugator.context() != ctx || b.conjugator.context() != ctx {
            return Err(Error::ContextMismatch {
                left: ctx,
                right: b.conjugator.context(),
            });
        }
        if a.target != b.target || a.exponent != b.exponent {
            return Ok(None);
        }
    }
    let check = |w: &Word| -> bool {
        src.iter().zip(dst).all(|(a, b)| {
            let wc = w.mul(&a.conjugator);
            wc.strip_trailing(a.target).0 == b.conjugator
        })
    };
    if ctx.rank() == 1 || src.len() == 1 {
        let w = dst[0].conjugator.mul(&first.conjugator.inverse());
        return Ok(check(&w).then_some(w));
    }

    let t1 = first.target;
    let c1_inv = first.conjugator.inverse();
    let d1 = &dst[0].conjugator;
    // The constraint used as a cheap filter: prefer one with a different target.
    let probe = (1..src.len()).find(|&i| src[i].target != t1).unwrap_or(1);
    let p = dst[probe].conjugator.inverse().mul(d1);
    let q = c1_inv.mul(&src[probe].conjugator);
    let t2 = src[probe].target;

    // Outside the degenerate case the probe pins `m`: the `g_t1` syllables
    // around it must cancel, so `m = -(a + b)`.
    let (p_rest, a) = p.strip_trailing(t1);
    let (q_rest, b) = q.strip_leading(t1);
    let degenerate = t1 == t2 && p_rest.is_identity() && q_rest.is_identity();
    let range: Vec<i64> = match ctx.modulus() {
        Some(k) if degenerate => (0..k as i64).collect(),
        Some(k) => vec![(-(a + b)).rem_euclid(k as i64)],
        None if !degenerate => vec![-(a + b)],
        None => {
            let widest = src
                .iter()
                .zip(dst)
                .map(|(a, b)| a.conjugator.letter_len() + b.conjugator.letter_len())
                .max()
                .unwrap_or(0);
            let bound = first.conjugator.letter_len() + d1.letter_len() + widest + 2;
            if bound > search.exponent_cap {
                return Err(Error::BoundExceeded {
                    needed: bound,
                    cap: search.exponent_cap,
                });
            }
            let b = bound as i64;
            (-b..=b).collect()
        }
    };
    for m in range {
        if !lands_in_cyclic(&p, t1, m, &q, t2) {
            continue;
        }
        let mut w = Reducer::new(ctx);
        w.push_word(d1);
        w.push(t1, m);
        w.push_word(&c1_inv);
        let w = w.finish();
        if check(&w) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn is_unit_exponent(ctx: GroupContext, e: i64) -> bool {
    match ctx.modulus() {
        None => e == 1 || e == -1,
        Some(k) => e == 1 || e == k as i64 - 1,
    }
}

/// Decide whether `g_i -> images[i]` is conjugation by a single word `w`,
/// returning `w` when it is.
pub fn inner_witness(images: &[Word], ctx: GroupContext) -> Result<Option<Word>> {
    inner_witness_with(images, ctx, InnerSearch::default())
}

pub fn inner_witness_with(
    images: &[Word],
    ctx: GroupContext,
    search: InnerSearch,
) -> Result<Option<Word>> {
    if images.len() != ctx.rank() {
        return Err(Error::LengthMismatch {
            expected: ctx.rank(),
            found: images.len(),
        });
    }
    let mut dst = Vec::with_capacity(images.len());
    for w in images {
        if w.context() != ctx {
            return Err(Error::ContextMismatch {
                left: ctx,
                right: w.context(),
            });
        }
        match GeneratorConjugate::from_word(w) {
            Some(gc) if is_unit_exponent(ctx, gc.exponent) => dst.push(gc),
            _ => return Err(Error::NotConjugateOfGenerator(w.to_string())),
        }
    }
    let src: Vec<GeneratorConjugate> = (1..=ctx.rank())
        .map(|i| GeneratorConjugate::new(Word::identity(ctx), i, 1))
        .collect();
    common_conjugator(&src, &dst, search)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize) -> GroupContext {
        GroupContext::free(n).unwrap()
    }
    fn h(n: usize) -> GroupContext {
        GroupContext::involutions(n).unwrap()
    }
    fn w(s: &str, ctx: GroupContext) -> Word {
        Word::parse(s, ctx).unwrap()
    }

    #[test]
    fn direct_conjugation() {
        let g = conjugacy_witness(&w("y1", f(3)), &w("y2 y1 y2^-1", f(3)))
            .unwrap()
            .unwrap();
        assert_eq!(g.conjugator, w("y2", f(3)));
    }

    #[test]
    fn distinct_generators_not_conjugate() {
        assert!(conjugacy_witness(&w("y1", f(3)), &w("y2", f(3)))
            .unwrap()
            .is_none());
    }

    #[test]
    fn torsion_conjugation() {
        let g = conjugacy_witness(&w("z1 z2 z1", h(3)), &w("z2", h(3)))
            .unwrap()
            .unwrap();
        assert_eq!(g.conjugator, w("z1", h(3)));
    }

    #[test]
    fn context_mismatch() {
        assert!(conjugacy_witness(&w("y1", f(3)), &w("y1", f(2))).is_err());
    }

    #[test]
    fn rank_one_conjugacy_is_equality() {
        let ctx = f(1);
        assert!(conjugacy_witness(&w("y1^2", ctx), &w("y1^2", ctx))
            .unwrap()
            .is_some());
        assert!(conjugacy_witness(&w("y1^2", ctx), &w("y1^-2", ctx))
            .unwrap()
            .is_none());
    }

    #[test]
    fn cyclic_rotation_witness() {
        let u = w("y1 y2^2 y3", f(3));
        let v = w("y2^2 y3 y1", f(3));
        let g = conjugacy_witness(&u, &v).unwrap().unwrap();
        assert_eq!(u.conjugated_by(&g.conjugator), v);
        assert_eq!(g.conjugator.letter_len(), 1);
    }

    #[test]
    fn periodic_words_pick_shortest() {
        let u = w("y1 y2 y1 y2", f(2));
        let g = conjugacy_witness(&u, &u).unwrap().unwrap();
        assert!(g.conjugator.is_identity());
    }

    #[test]
    fn cyclic_reduce_splits() {
        let x = w("y2 y1 y3 y1^-1 y2^-1", f(3));
        let (hh, r) = cyclic_reduce(&x);
        assert_eq!(hh, w("y2 y1", f(3)));
        assert_eq!(r, w("y3", f(3)));
        let x = w("y1 y2 y1^2", f(2));
        let (hh, r) = cyclic_reduce(&x);
        assert_eq!(r.conjugated_by(&hh), x);
        assert_eq!(r.syllable_len(), 2);
    }

    #[test]
    fn inner_identity() {
        let ctx = f(3);
        let imgs: Vec<Word> = (1..=3).map(|i| Word::generator(ctx, i)).collect();
        assert_eq!(inner_witness(&imgs, ctx).unwrap(), Some(Word::identity(ctx)));
    }

    #[test]
    fn inner_global_conjugation() {
        let ctx = f(3);
        let y2 = Word::generator(ctx, 2);
        let imgs: Vec<Word> = (1..=3)
            .map(|i| Word::generator(ctx, i).conjugated_by(&y2))
            .collect();
        assert_eq!(inner_witness(&imgs, ctx).unwrap(), Some(y2));
    }

    #[test]
    fn inner_torsion_rejects() {
        let ctx = h(3);
        let imgs = vec![w("z2 z1 z2", ctx), w("z2", ctx), w("z3", ctx)];
        assert_eq!(inner_witness(&imgs, ctx).unwrap(), None);
        // Independent enumeration over the coset {z2, z2 z1}.
        for cand in [w("z2", ctx), w("z2 z1", ctx)] {
            let ok = (1..=3).all(|i| Word::generator(ctx, i).conjugated_by(&cand) == imgs[i - 1]);
            assert!(!ok);
        }
    }

    #[test]
    fn inner_errors() {
        let ctx = f(2);
        assert!(matches!(
            inner_witness(&[w("y1", ctx)], ctx),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            inner_witness(&[w("y1 y2", ctx), w("y2", ctx)], ctx),
            Err(Error::NotConjugateOfGenerator(_))
        ));
        assert!(matches!(
            inner_witness(&[w("y1^2", ctx), w("y2", ctx)], ctx),
            Err(Error::NotConjugateOfGenerator(_))
        ));
    }

    #[test]
    fn bound_exhaustion_is_reported() {
        // Two copies of one constraint leave the central exponent free.
        let ctx = f(2);
        let c = w("y2 y1 y2 y1 y2", ctx);
        let src = vec![GeneratorConjugate::new(Word::identity(ctx), 1, 1); 2];
        let dst = vec![GeneratorConjugate::new(c.clone(), 1, 1); 2];
        let err = common_conjugator(&src, &dst, InnerSearch { exponent_cap: 3 }).unwrap_err();
        assert!(matches!(err, Error::BoundExceeded { .. }));
        let found = common_conjugator(&src, &dst, InnerSearch::default()).unwrap().unwrap();
        assert_eq!(w("y1", ctx).conjugated_by(&found), w("y1", ctx).conjugated_by(&c));
    }

    #[test]
    fn pinned_exponent_ignores_cap() {
        let ctx = f(2);
        let c = w("y2 y1 y2 y1 y2", ctx);
        let imgs = vec![w("y1", ctx).conjugated_by(&c), w("y2", ctx).conjugated_by(&c)];
        let got = inner_witness_with(&imgs, ctx, InnerSearch { exponent_cap: 3 }).unwrap();
        assert_eq!(got, Some(c));
    }

    #[test]
    fn generator_conjugate_absorbs_target_powers() {
        let ctx = f(3);
        let x = w("y2 y1^3 y1 y1^-3 y2^-1", ctx);
        let gc = GeneratorConjugate::from_word(&x).unwrap();
        assert_eq!(gc.conjugator, w("y2", ctx));
        assert_eq!(gc.target, 1);
        assert_eq!(gc.to_word(), x);
    }
}
