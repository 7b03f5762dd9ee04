//! Reduced words in a free group `F_n` or a free product of cyclic groups
//! `H_{n,k} = (Z/kZ)^{*n}`.
//!
//! A [`Word`] is stored as a sequence of syllables `(generator, exponent)`
//! in free-product normal form: exponents are nonzero (and lie in `1..k` for
//! torsion contexts) and adjacent syllables use distinct generators. Words
//! are immutable values; every operation returns a new word.

mod conjugacy;
mod xbasis;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use conjugacy::{
    common_conjugator, conjugacy_witness, cyclic_reduce, inner_witness, ConjugacyWitness,
    GeneratorConjugate, InnerSearch,
};
pub use xbasis::{even_to_x, expand_x, project_mod_k};

/// Whether the factors of the free product are infinite cyclic or `Z/kZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Torsion {
    Free,
    Cyclic(u32),
}

/// The group a word lives in: `F_n` or `H_{n,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupContext {
    rank: usize,
    torsion: Torsion,
}

impl GroupContext {
    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank(rank));
        }
        Ok(Self {
            rank,
            torsion: Torsion::Free,
        })
    }

    pub fn torsion(rank: usize, modulus: u32) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank(rank));
        }
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(Self {
            rank,
            torsion: Torsion::Cyclic(modulus),
        })
    }

    /// `H_n = (Z/2Z)^{*n}`.
    pub fn involutions(rank: usize) -> Result<Self> {
        Self::torsion(rank, 2)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion_kind(&self) -> Torsion {
        self.torsion
    }

    pub fn modulus(&self) -> Option<u32> {
        match self.torsion {
            Torsion::Free => None,
            Torsion::Cyclic(k) => Some(k),
        }
    }

    pub fn is_free(&self) -> bool {
        self.torsion == Torsion::Free
    }

    /// The same torsion type with a different rank.
    pub fn with_rank(&self, rank: usize) -> Result<Self> {
        match self.torsion {
            Torsion::Free => Self::free(rank),
            Torsion::Cyclic(k) => Self::torsion(rank, k),
        }
    }

    pub(crate) fn reduce_exp(&self, e: i64) -> i64 {
        match self.torsion {
            Torsion::Free => e,
            Torsion::Cyclic(k) => e.rem_euclid(k as i64),
        }
    }

    /// Word-metric cost of a single syllable exponent.
    pub(crate) fn exp_cost(&self, e: i64) -> u64 {
        match self.torsion {
            Torsion::Free => e.unsigned_abs(),
            Torsion::Cyclic(k) => {
                let r = e.rem_euclid(k as i64) as u64;
                r.min(k as u64 - r)
            }
        }
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.rank {
            Err(Error::IndexOutOfRange {
                index,
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    /// Default letter used when printing words of this context.
    pub fn letter(&self) -> char {
        if self.is_free() {
            'y'
        } else {
            'z'
        }
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.torsion {
            Torsion::Free => write!(f, "F:{}", self.rank),
            Torsion::Cyclic(k) => write!(f, "H:{}:{}", self.rank, k),
        }
    }
}

impl FromStr for GroupContext {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| -> Result<u64> {
            p.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad number `{p}` in context `{s}`")))
        };
        match parts.as_slice() {
            ["F", n] => Self::free(num(n)? as usize),
            ["H", n] => Self::involutions(num(n)? as usize),
            ["H", n, k] => Self::torsion(num(n)? as usize, num(k)? as u32),
            _ => Err(Error::Parse(format!(
                "context `{s}` must look like `F:n` or `H:n:k`"
            ))),
        }
    }
}

impl Serialize for GroupContext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupContext {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A reduced word. Syllables are `(generator index in 1..=n, exponent)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    ctx: GroupContext,
    syllables: Vec<(usize, i64)>,
}

/// Stack-based free-product reducer. Pushing syllables one at a time and
/// merging with the top of the stack yields the normal form regardless of
/// the order in which cancellations become available.
pub(crate) struct Reducer {
    ctx: GroupContext,
    stack: Vec<(usize, i64)>,
}

impl Reducer {
    pub(crate) fn new(ctx: GroupContext) -> Self {
        Self {
            ctx,
            stack: Vec::new(),
        }
    }

    pub(crate) fn with_capacity(ctx: GroupContext, cap: usize) -> Self {
        Self {
            ctx,
            stack: Vec::with_capacity(cap),
        }
    }

    pub(crate) fn push(&mut self, index: usize, exp: i64) {
        let e = self.ctx.reduce_exp(exp);
        if e == 0 {
            return;
        }
        match self.stack.last_mut() {
            Some(top) if top.0 == index => {
                let merged = self.ctx.reduce_exp(top.1 + e);
                if merged == 0 {
                    self.stack.pop();
                } else {
                    top.1 = merged;
                }
            }
            _ => self.stack.push((index, e)),
        }
    }

    pub(crate) fn push_word(&mut self, w: &Word) {
        for &(g, e) in &w.syllables {
            self.push(g, e);
        }
    }

    pub(crate) fn push_inverse(&mut self, w: &Word) {
        for &(g, e) in w.syllables.iter().rev() {
            self.push(g, -e);
        }
    }

    pub(crate) fn finish(self) -> Word {
        Word {
            ctx: self.ctx,
            syllables: self.stack,
        }
    }
}

impl Word {
    pub fn identity(ctx: GroupContext) -> Self {
        Self {
            ctx,
            syllables: Vec::new(),
        }
    }

    /// `g_index ^ exp`. Panics on an out-of-range index.
    pub fn gen_power(ctx: GroupContext, index: usize, exp: i64) -> Self {
        assert!(
            index >= 1 && index <= ctx.rank,
            "generator {index} out of range for {ctx}"
        );
        let mut r = Reducer::new(ctx);
        r.push(index, exp);
        r.finish()
    }

    pub fn generator(ctx: GroupContext, index: usize) -> Self {
        Self::gen_power(ctx, index, 1)
    }

    /// Reduce a raw syllable sequence to normal form.
    pub fn normalize<I>(raw: I, ctx: GroupContext) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let mut r = Reducer::new(ctx);
        for (g, e) in raw {
            ctx.check_index(g)?;
            r.push(g, e);
        }
        Ok(r.finish())
    }

    pub(crate) fn from_reduced(ctx: GroupContext, syllables: Vec<(usize, i64)>) -> Self {
        debug_assert!(syllables.windows(2).all(|w| w[0].0 != w[1].0));
        Self { ctx, syllables }
    }

    pub fn context(&self) -> GroupContext {
        self.ctx
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of syllables.
    pub fn syllable_len(&self) -> usize {
        self.syllables.len()
    }

    /// Word length with respect to the standard generators.
    pub fn letter_len(&self) -> u64 {
        self.syllables.iter().map(|&(_, e)| self.ctx.exp_cost(e)).sum()
    }

    /// Sum of exponents, the image under the abelianization to `Z`.
    pub fn exponent_sum(&self) -> i64 {
        self.syllables.iter().map(|&(_, e)| e).sum()
    }

    pub fn first(&self) -> Option<(usize, i64)> {
        self.syllables.first().copied()
    }

    pub fn last(&self) -> Option<(usize, i64)> {
        self.syllables.last().copied()
    }

    pub fn inverse(&self) -> Self {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|&(g, e)| (g, self.ctx.reduce_exp(-e)))
            .collect();
        Self {
            ctx: self.ctx,
            syllables,
        }
    }

    /// Product `self * other`. Panics when contexts differ.
    pub fn mul(&self, other: &Word) -> Word {
        assert_eq!(self.ctx, other.ctx, "multiplying words from different groups");
        let mut r = Reducer::with_capacity(self.ctx, self.syllables.len() + other.syllables.len());
        r.push_word(self);
        r.push_word(other);
        r.finish()
    }

    pub fn try_mul(&self, other: &Word) -> Result<Word> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx,
                right: other.ctx,
            });
        }
        Ok(self.mul(other))
    }

    /// `g * self * g^-1`.
    pub fn conjugated_by(&self, g: &Word) -> Word {
        assert_eq!(self.ctx, g.ctx, "conjugating by a word from a different group");
        let mut r = Reducer::new(self.ctx);
        r.push_word(g);
        r.push_word(self);
        r.push_inverse(g);
        r.finish()
    }

    pub fn pow(&self, m: i64) -> Word {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut r = Reducer::new(self.ctx);
        for _ in 0..m.unsigned_abs() {
            r.push_word(&base);
        }
        r.finish()
    }

    /// Drop a trailing syllable on generator `index`, returning the word and
    /// the removed exponent (0 if nothing was removed).
    pub fn strip_trailing(&self, index: usize) -> (Word, i64) {
        match self.syllables.last() {
            Some(&(g, e)) if g == index => (
                Word {
                    ctx: self.ctx,
                    syllables: self.syllables[..self.syllables.len() - 1].to_vec(),
                },
                e,
            ),
            _ => (self.clone(), 0),
        }
    }

    /// Drop a leading syllable on generator `index`.
    pub fn strip_leading(&self, index: usize) -> (Word, i64) {
        match self.syllables.first() {
            Some(&(g, e)) if g == index => (
                Word {
                    ctx: self.ctx,
                    syllables: self.syllables[1..].to_vec(),
                },
                e,
            ),
            _ => (self.clone(), 0),
        }
    }

    /// Replace the context by one with the same torsion and a larger (or
    /// equal) rank, e.g. to view an `F_{n-1}` word inside `F_n`.
    pub fn in_context(&self, ctx: GroupContext) -> Result<Word> {
        Word::normalize(self.syllables.iter().copied(), ctx)
    }

    /// Render with an explicit generator letter, e.g. `x` for the even-word basis.
    pub fn display_with(&self, letter: char) -> String {
        if self.syllables.is_empty() {
            return "e".to_string();
        }
        let mut out = String::new();
        for (k, &(g, e)) in self.syllables.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            if e == 1 {
                out.push_str(&format!("{letter}{g}"));
            } else {
                out.push_str(&format!("{letter}{g}^{e}"));
            }
        }
        out
    }

    /// Parse the text grammar: whitespace-separated syllables like `y3^-2`,
    /// `z1`, `x2^5`; `e` is the identity. `x` and `y` are accepted in free
    /// contexts, `z` in torsion contexts.
    pub fn parse(s: &str, ctx: GroupContext) -> Result<Word> {
        let mut raw = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "e" || tok == "1" {
                continue;
            }
            let mut chars = tok.chars();
            let letter = chars.next().unwrap();
            let ok = match letter {
                'x' | 'y' => ctx.is_free(),
                'z' => !ctx.is_free(),
                _ => false,
            };
            if !ok {
                return Err(Error::Parse(format!(
                    "token `{tok}` does not name a generator of {ctx}"
                )));
            }
            let rest = chars.as_str();
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let index: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator index in `{tok}`")))?;
            let exp: i64 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
            raw.push((index, exp));
        }
        Word::normalize(raw, ctx)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(self.ctx.letter()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.ctx, self)
    }
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

    #[test]
    fn cancellation() {
        let w = Word::normalize([(1, 1), (1, -1)], f(3)).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn cancellation_then_merge() {
        let w = Word::normalize([(1, 1), (2, -1), (2, 1), (1, 1)], f(3)).unwrap();
        assert_eq!(w.syllables(), &[(1, 2)]);
    }

    #[test]
    fn involutions_square_to_one() {
        let w = Word::normalize([(1, 1), (2, 1), (2, 1), (1, 1)], h(3)).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn index_out_of_range() {
        let err = Word::normalize([(4, 1)], f(3)).unwrap_err();
        assert_eq!(err, Error::IndexOutOfRange { index: 4, rank: 3 });
        assert!(Word::normalize([(0, 1)], f(3)).is_err());
    }

    #[test]
    fn torsion_exponents_are_canonical() {
        let ctx = GroupContext::torsion(2, 3).unwrap();
        let w = Word::normalize([(1, -1), (2, 4)], ctx).unwrap();
        assert_eq!(w.syllables(), &[(1, 2), (2, 1)]);
        assert_eq!(w.letter_len(), 2);
    }

    #[test]
    fn parse_and_display() {
        let w = Word::parse("y3^-2 y1 e y1", f(3)).unwrap();
        assert_eq!(w.to_string(), "y3^-2 y1^2");
        assert_eq!(Word::parse("e", f(2)).unwrap().to_string(), "e");
        assert!(Word::parse("z1", f(2)).is_err());
        assert!(Word::parse("y1^q", f(2)).is_err());
        let z = Word::parse("z1 z2 z2", h(2)).unwrap();
        assert_eq!(z.to_string(), "z1");
    }

    #[test]
    fn context_grammar() {
        assert_eq!("F:3".parse::<GroupContext>().unwrap(), f(3));
        assert_eq!("H:3:2".parse::<GroupContext>().unwrap(), h(3));
        assert_eq!(h(4).to_string(), "H:4:2");
        assert!("H:3:1".parse::<GroupContext>().is_err());
        assert!("F:0".parse::<GroupContext>().is_err());
        assert!("G:3".parse::<GroupContext>().is_err());
    }

    #[test]
    fn mixed_context_multiplication_is_an_error() {
        let a = Word::generator(f(2), 1);
        let b = Word::generator(h(2), 1);
        assert!(matches!(a.try_mul(&b), Err(Error::ContextMismatch { .. })));
    }
}
