//! Symmetric automorphisms: every generator maps to a conjugate of a
//! generator (or of its inverse, over a free group).

mod genword;
mod normal;
mod relations;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{common_conjugator, GeneratorConjugate, GroupContext, InnerSearch, Reducer, Word};

pub use genword::{GeneratorWord, Letter};
pub use normal::{perm_letters, semidirect_normal_form, NormalForm};
pub use relations::{check_relations, check_relations_with, RelationCheck, RelationFault, RelationReport};

/// `y_i -> conjugator * y_target^sign * conjugator^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Image {
    pub conjugator: Word,
    pub target: usize,
    pub sign: i8,
}

impl Image {
    /// Canonical form: a trailing `y_target` power in the conjugator is absorbed.
    pub fn new(conjugator: Word, target: usize, sign: i8) -> Self {
        let (conjugator, _) = conjugator.strip_trailing(target);
        Self {
            conjugator,
            target,
            sign,
        }
    }

    pub fn to_word(&self) -> Word {
        let ctx = self.conjugator.context();
        let mut r = Reducer::new(ctx);
        r.push_word(&self.conjugator);
        r.push(self.target, self.sign as i64);
        r.push_inverse(&self.conjugator);
        r.finish()
    }

    fn as_conjugate(&self) -> GeneratorConjugate {
        GeneratorConjugate::new(self.conjugator.clone(), self.target, self.sign as i64)
    }
}

impl Serialize for Image {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            conjugator: String,
            target: usize,
            sign: i8,
        }
        Repr {
            conjugator: self.conjugator.to_string(),
            target: self.target,
            sign: self.sign,
        }
        .serialize(s)
    }
}

/// A symmetric automorphism, optionally remembering the generator word it
/// was evaluated from. Equality ignores the source word.
#[derive(Debug, Clone)]
pub struct SymmetricAut {
    ctx: GroupContext,
    images: Vec<Image>,
    source: Option<GeneratorWord>,
}

impl PartialEq for SymmetricAut {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.images == other.images
    }
}

impl Eq for SymmetricAut {}

impl std::hash::Hash for SymmetricAut {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.hash(state);
        self.images.hash(state);
    }
}

impl Serialize for SymmetricAut {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

impl SymmetricAut {
    pub fn identity(ctx: GroupContext) -> Self {
        let images = (1..=ctx.rank())
            .map(|i| Image::new(Word::identity(ctx), i, 1))
            .collect();
        Self {
            ctx,
            images,
            source: Some(GeneratorWord::empty(ctx.rank())),
        }
    }

    /// Build from explicit images. Targets must form a permutation; signs
    /// must be `±1` over free groups and `+1` in torsion contexts. Whether
    /// the map is actually bijective is the caller's responsibility.
    pub fn from_images(ctx: GroupContext, images: Vec<(Word, usize, i8)>) -> Result<Self> {
        if images.len() != ctx.rank() {
            return Err(Error::LengthMismatch {
                expected: ctx.rank(),
                found: images.len(),
            });
        }
        let mut seen = vec![false; ctx.rank()];
        let mut out = Vec::with_capacity(images.len());
        for (c, t, s) in images {
            if c.context() != ctx {
                return Err(Error::ContextMismatch {
                    left: ctx,
                    right: c.context(),
                });
            }
            ctx.check_index(t)?;
            if std::mem::replace(&mut seen[t - 1], true) {
                return Err(Error::Parse(format!("target {t} repeated; targets must be a permutation")));
            }
            let ok = if ctx.is_free() { s == 1 || s == -1 } else { s == 1 };
            if !ok {
                return Err(Error::Parse(format!("sign {s} not allowed in {ctx}")));
            }
            out.push(Image::new(c, t, s));
        }
        Ok(Self {
            ctx,
            images: out,
            source: None,
        })
    }

    /// Build from image words, each of which must be a conjugate of a
    /// generator or its inverse.
    pub fn from_words(ctx: GroupContext, words: &[Word]) -> Result<Self> {
        let mut images = Vec::with_capacity(words.len());
        for w in words {
            let gc = GeneratorConjugate::from_word(w)
                .ok_or_else(|| Error::NotConjugateOfGenerator(w.to_string()))?;
            let sign = match ctx.modulus() {
                None if gc.exponent.abs() == 1 => gc.exponent as i8,
                Some(_) if gc.exponent == 1 => 1,
                _ => return Err(Error::NotConjugateOfGenerator(w.to_string())),
            };
            images.push((gc.conjugator, gc.target, sign));
        }
        Self::from_images(ctx, images)
    }

    /// The automorphism of a single presentation letter. `R(i)` is the
    /// identity in torsion contexts.
    pub fn letter(letter: Letter, ctx: GroupContext) -> Self {
        let mut images: Vec<Image> = (1..=ctx.rank())
            .map(|i| Image::new(Word::identity(ctx), i, 1))
            .collect();
        match letter {
            Letter::A { i, j, inv } => {
                let e = if inv { -1 } else { 1 };
                images[i - 1] = Image::new(Word::gen_power(ctx, j, e), i, 1);
            }
            Letter::R(i) => {
                if ctx.is_free() {
                    images[i - 1].sign = -1;
                }
            }
            Letter::S(i, j) => {
                images[i - 1].target = j;
                images[j - 1].target = i;
            }
        }
        Self {
            ctx,
            images,
            source: GeneratorWord::new(ctx.rank(), vec![letter]).ok(),
        }
    }

    pub fn context(&self) -> GroupContext {
        self.ctx
    }

    pub fn rank(&self) -> usize {
        self.ctx.rank()
    }

    pub fn images(&self) -> &[Image] {
        &self.images
    }

    pub fn source(&self) -> Option<&GeneratorWord> {
        self.source.as_ref()
    }

    pub fn with_source(mut self, source: Option<GeneratorWord>) -> Self {
        self.source = source;
        self
    }

    pub fn image_word(&self, i: usize) -> Word {
        self.images[i - 1].to_word()
    }

    pub fn image_words(&self) -> Vec<Word> {
        self.images.iter().map(Image::to_word).collect()
    }

    /// Targets as an index array: `y_i` maps into the class of `y_{targets[i-1]}`.
    pub fn targets(&self) -> Vec<usize> {
        self.images.iter().map(|im| im.target).collect()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.images.iter().map(|im| im.sign).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, im)| im.target == k + 1 && im.sign == 1 && im.conjugator.is_identity())
    }

    /// Every image is a generator or inverse generator (no conjugation).
    pub fn is_signed_permutation(&self) -> bool {
        self.images.iter().all(|im| im.conjugator.is_identity())
    }

    /// Check that targets form a permutation and signs fit the context.
    pub fn validate(&self) -> Result<()> {
        Self::from_images(
            self.ctx,
            self.images
                .iter()
                .map(|im| (im.conjugator.clone(), im.target, im.sign))
                .collect(),
        )
        .map(|_| ())
    }

    /// Image of an arbitrary word.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.context() != self.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx,
                right: w.context(),
            });
        }
        Ok(self.apply_unchecked(w))
    }

    fn apply_unchecked(&self, w: &Word) -> Word {
        let mut r = Reducer::new(self.ctx);
        for &(g, e) in w.syllables() {
            let im = &self.images[g - 1];
            r.push_word(&im.conjugator);
            r.push(im.target, im.sign as i64 * e);
            r.push_inverse(&im.conjugator);
        }
        r.finish()
    }

    /// `self ∘ letter`, in place. Only the images the letter moves are
    /// rebuilt, which matters once conjugators run to millions of syllables.
    fn then_letter(&mut self, letter: Letter) {
        match letter {
            Letter::A { i, j, inv } => {
                let e = if inv { -1 } else { 1 };
                let (cj, tj, sj) = {
                    let im = &self.images[j - 1];
                    (&im.conjugator, im.target, im.sign)
                };
                let ci = &self.images[i - 1];
                let mut r = Reducer::new(self.ctx);
                r.push_word(cj);
                r.push(tj, sj as i64 * e);
                r.push_inverse(cj);
                r.push_word(&ci.conjugator);
                let next = Image::new(r.finish(), ci.target, ci.sign);
                self.images[i - 1] = next;
            }
            Letter::R(i) => {
                if self.ctx.is_free() {
                    self.images[i - 1].sign *= -1;
                }
            }
            Letter::S(i, j) => self.images.swap(i - 1, j - 1),
        }
    }

    /// `(self ∘ g)(y_i) = self(g(y_i))`.
    pub fn compose(&self, g: &SymmetricAut) -> Result<SymmetricAut> {
        if self.ctx != g.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx,
                right: g.ctx,
            });
        }
        let images = g
            .images
            .iter()
            .map(|im| {
                let outer = &self.images[im.target - 1];
                let mut c = Reducer::new(self.ctx);
                c.push_word(&self.apply_unchecked(&im.conjugator));
                c.push_word(&outer.conjugator);
                Image::new(c.finish(), outer.target, outer.sign * im.sign)
            })
            .collect();
        let source = match (&self.source, &g.source) {
            (Some(a), Some(b)) => Some(a.concat(b)),
            _ => None,
        };
        Ok(SymmetricAut {
            ctx: self.ctx,
            images,
            source,
        })
    }

    /// Conjugation by `w`: `y_i -> w y_i w^-1`.
    pub fn inner(w: &Word) -> Self {
        let ctx = w.context();
        let images = (1..=ctx.rank())
            .map(|i| Image::new(w.clone(), i, 1))
            .collect();
        Self {
            ctx,
            images,
            source: None,
        }
    }

    /// `w` with `self = inn(w)`, if `self` is inner.
    pub fn inner_witness(&self) -> Result<Option<Word>> {
        if self.images.iter().enumerate().any(|(k, im)| im.target != k + 1 || im.sign != 1) {
            return Ok(None);
        }
        let id = Self::identity(self.ctx);
        outer_witness(self, &id)
    }

    pub fn is_inner(&self) -> Result<bool> {
        Ok(self.inner_witness()?.is_some())
    }

    /// The inverse automorphism. Uses the source word when present, and
    /// otherwise a bounded greedy solver that rewrites `self` as a generator
    /// word first.
    pub fn inverse(&self) -> Result<SymmetricAut> {
        let word = match &self.source {
            Some(w) => w.clone(),
            None => self.solve_word(DEFAULT_SOLVER_STEPS)?,
        };
        eval_generator_word(&word.inverse(), self.ctx)
    }

    /// Express `self` as a generator word by greedily precomposing with
    /// `A(i,j)^{±1}` letters while the total conjugator length drops, then
    /// reading off the remaining signed permutation.
    pub fn solve_word(&self, max_steps: usize) -> Result<GeneratorWord> {
        let n = self.rank();
        let cost = |f: &SymmetricAut| -> u64 {
            f.images.iter().map(|im| im.conjugator.letter_len()).sum()
        };
        let mut cur = self.clone().with_source(None);
        let mut steps: Vec<Letter> = Vec::new();
        let mut current_cost = cost(&cur);
        while current_cost > 0 {
            if steps.len() >= max_steps {
                return Err(Error::InverseUnavailable);
            }
            let mut best: Option<(u64, Letter, SymmetricAut)> = None;
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    for l in [Letter::a(i, j), Letter::a_inv(i, j)] {
                        let next = cur.compose(&SymmetricAut::letter(l, self.ctx))?;
                        let c = cost(&next);
                        if c < current_cost && best.as_ref().is_none_or(|b| c < b.0) {
                            best = Some((c, l, next));
                        }
                    }
                }
            }
            let Some((c, l, next)) = best else {
                return Err(Error::InverseUnavailable);
            };
            steps.push(l);
            cur = next;
            current_cost = c;
        }
        // self ∘ L_1 ∘ ... ∘ L_m = P, so self = P ∘ L_m^-1 ∘ ... ∘ L_1^-1.
        let mut letters = signed_perm_letters(&cur);
        letters.extend(steps.iter().rev().map(|l| l.inverse()));
        GeneratorWord::new(n, letters)
    }
}

const DEFAULT_SOLVER_STEPS: usize = 4096;

/// Letters of a signed permutation `P`: `P = perm ∘ ∏ R(i)` over the
/// inverted indices.
fn signed_perm_letters(p: &SymmetricAut) -> Vec<Letter> {
    let perm = p.targets();
    let mut letters = perm_letters(&perm);
    for (k, im) in p.images.iter().enumerate() {
        if im.sign == -1 {
            letters.push(Letter::R(k + 1));
        }
    }
    letters
}

/// Left-to-right evaluation: `eval(L_1 ... L_m) = f_{L_1} ∘ ... ∘ f_{L_m}`.
pub fn eval_generator_word(gw: &GeneratorWord, ctx: GroupContext) -> Result<SymmetricAut> {
    if gw.rank() != ctx.rank() {
        return Err(Error::RankMismatch {
            expected: ctx.rank(),
            found: gw.rank(),
        });
    }
    let mut acc = SymmetricAut::identity(ctx);
    for &l in gw.letters() {
        acc.then_letter(l);
    }
    acc.source = Some(gw.clone());
    Ok(acc)
}

/// `w` with `f = inn(w) ∘ g`, if any. No inverse is needed: the equation is
/// solved directly as a common-conjugator problem on the images.
pub fn outer_witness(f: &SymmetricAut, g: &SymmetricAut) -> Result<Option<Word>> {
    if f.ctx != g.ctx {
        return Err(Error::ContextMismatch {
            left: f.ctx,
            right: g.ctx,
        });
    }
    if f.images.iter().zip(&g.images).any(|(a, b)| a.target != b.target || a.sign != b.sign) {
        return Ok(None);
    }
    let src: Vec<GeneratorConjugate> = g.images.iter().map(Image::as_conjugate).collect();
    let dst: Vec<GeneratorConjugate> = f.images.iter().map(Image::as_conjugate).collect();
    common_conjugator(&src, &dst, InnerSearch::default())
}

/// Equality in the outer automorphism group.
pub fn outer_equal(f: &SymmetricAut, g: &SymmetricAut) -> Result<bool> {
    Ok(outer_witness(f, g)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize) -> GroupContext {
        GroupContext::free(n).unwrap()
    }
    fn ev(s: &str, ctx: GroupContext) -> SymmetricAut {
        eval_generator_word(&GeneratorWord::parse(s, ctx.rank()).unwrap(), ctx).unwrap()
    }
    fn word(s: &str, ctx: GroupContext) -> Word {
        Word::parse(s, ctx).unwrap()
    }

    #[test]
    fn letterwise_eval_matches_compose() {
        use crate::random::{random_generator_word, rng_from_seed};
        let mut rng = rng_from_seed(11);
        for ctx in [f(3), f(4), GroupContext::involutions(3).unwrap()] {
            for _ in 0..200 {
                let gw = random_generator_word(ctx.rank(), 12, &mut rng);
                let mut slow = SymmetricAut::identity(ctx);
                for &l in gw.letters() {
                    slow = slow.compose(&SymmetricAut::letter(l, ctx)).unwrap();
                }
                assert_eq!(eval_generator_word(&gw, ctx).unwrap(), slow);
            }
        }
    }

    #[test]
    fn alpha_action() {
        let a = ev("a[1,2]", f(3));
        assert_eq!(a.image_word(1), word("y2 y1 y2^-1", f(3)));
        assert_eq!(a.image_word(2), word("y2", f(3)));
        assert_eq!(a.image_word(3), word("y3", f(3)));
    }

    #[test]
    fn rho_and_swap() {
        let r = ev("r[1]", f(3));
        assert_eq!(r.image_word(1), word("y1^-1", f(3)));
        assert_eq!(r.image_word(2), word("y2", f(3)));
        let s = ev("s[1,2]", f(3));
        assert_eq!(s.image_word(1), word("y2", f(3)));
        assert_eq!(s.image_word(2), word("y1", f(3)));
        assert_eq!(s.image_word(3), word("y3", f(3)));
    }

    #[test]
    fn composition_examples() {
        let ctx = f(3);
        let a = ev("a[1,2]", ctx);
        let ai = ev("a[1,2]^-1", ctx);
        assert!(a.compose(&ai).unwrap().is_identity());
        let r = ev("r[1]", ctx);
        assert!(r.compose(&r).unwrap().is_identity());
        let r2 = ev("r[2]", ctx);
        assert_eq!(r2.compose(&a).unwrap().compose(&r2).unwrap(), ai);
    }

    #[test]
    fn composition_applies_right_first() {
        let ctx = f(3);
        let a = ev("a[1,2]", ctx);
        let s = ev("s[2,3]", ctx);
        let fg = a.compose(&s).unwrap();
        for i in 1..=3 {
            let y = Word::generator(ctx, i);
            assert_eq!(fg.apply(&y).unwrap(), a.apply(&s.apply(&y).unwrap()).unwrap());
        }
    }

    #[test]
    fn torsion_rho_is_trivial() {
        let ctx = GroupContext::involutions(3).unwrap();
        assert!(ev("r[1] r[2] r[3]", ctx).is_identity());
        let a = ev("a[1,2]", ctx);
        assert_eq!(a.image_word(1).to_string(), "z2 z1 z2");
    }

    #[test]
    fn outer_examples() {
        let ctx = f(3);
        let y1 = Word::generator(ctx, 1);
        let id = SymmetricAut::identity(ctx);
        assert!(outer_equal(&SymmetricAut::inner(&y1), &id).unwrap());
        assert!(!outer_equal(&ev("a[1,2]", ctx), &ev("a[1,2]^-1", ctx)).unwrap());
        let ctx2 = f(2);
        assert!(outer_equal(&ev("a[1,2]", ctx2), &SymmetricAut::identity(ctx2)).unwrap());
        assert!(ev("a[2,1]", ctx2).is_inner().unwrap());
    }

    #[test]
    fn alpha_products_are_inner() {
        let ctx = f(3);
        let p = ev("a[2,1] a[3,1]", ctx);
        assert_eq!(p.inner_witness().unwrap(), Some(Word::generator(ctx, 1)));
    }

    #[test]
    fn solver_recovers_inverse() {
        let ctx = f(4);
        let g = ev("a[1,2] s[1,3] a[3,4]^-1 r[2] a[2,1] a[4,3]", ctx);
        let raw = SymmetricAut::from_images(
            ctx,
            g.images().iter().map(|im| (im.conjugator.clone(), im.target, im.sign)).collect(),
        )
        .unwrap();
        let inv = raw.inverse().unwrap();
        assert!(raw.compose(&inv).unwrap().is_identity());
        assert_eq!(inv, g.inverse().unwrap());
    }

    #[test]
    fn from_words_and_validation() {
        let ctx = f(2);
        let a = SymmetricAut::from_words(ctx, &[word("y2 y1 y2^-1", ctx), word("y2", ctx)]).unwrap();
        assert_eq!(a, ev("a[1,2]", ctx));
        assert!(SymmetricAut::from_words(ctx, &[word("y1 y2", ctx), word("y2", ctx)]).is_err());
        assert!(SymmetricAut::from_images(
            ctx,
            vec![(Word::identity(ctx), 1, 1), (Word::identity(ctx), 1, 1)]
        )
        .is_err());
    }

    #[test]
    fn json_form() {
        let a = ev("a[1,2]", f(2));
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(
            v,
            serde_json::json!([
                {"conjugator": "y2", "target": 1, "sign": 1},
                {"conjugator": "e", "target": 2, "sign": 1}
            ])
        );
    }
}
