//! Braid groups acting on free groups, the reduction `η_{n,k}` to the free
//! product of cyclic groups, and bounded searches for its kernel.
//!
//! Convention: `σ_i` sends `y_i ↦ y_i y_{i+1} y_i^-1`, `y_{i+1} ↦ y_i` and
//! fixes the rest; words act left to right like generator words.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symaut::SymmetricAut;
use crate::words::{project_mod_k, GroupContext, Word};

/// A freely reduced word in `σ_i^{±1}`; letters are `(i, ±1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidWord {
    n: usize,
    letters: Vec<(usize, i8)>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(letters.len());
        for (i, e) in letters {
            if i == 0 || i >= n {
                return Err(Error::IndexOutOfRange { index: i, rank: n - 1 });
            }
            if e != 1 && e != -1 {
                return Err(Error::Parse(format!("braid exponent {e} is not ±1")));
            }
            if out.last() == Some(&(i, -e)) {
                out.pop();
            } else {
                out.push((i, e));
            }
        }
        Ok(Self { n, letters: out })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        Self::new(self.n, l)
    }

    pub fn inverse(&self) -> Self {
        let letters = self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect();
        Self { n: self.n, letters }
    }

    /// Parse `s1 s2^-1 s1` (also `σ1`), with `e` for the empty braid. An
    /// integer exponent repeats the letter.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "e" || tok == "1" {
                continue;
            }
            let body = tok
                .strip_prefix('s')
                .or_else(|| tok.strip_prefix('σ'))
                .ok_or_else(|| Error::Parse(format!("bad braid letter {tok:?}")))?;
            let (idx, exp) = match body.split_once('^') {
                Some((a, b)) => (a, b),
                None => (body, "1"),
            };
            let i: usize = idx.parse().map_err(|_| Error::Parse(format!("bad index in {tok:?}")))?;
            let e: i64 = exp.parse().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
            let sign = if e < 0 { -1 } else { 1 };
            letters.extend(std::iter::repeat_n((i, sign), e.unsigned_abs() as usize));
        }
        Self::new(n, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(i, e)| if e < 0 { format!("s{i}^-1") } else { format!("s{i}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for BraidWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn sigma(ctx: GroupContext, i: usize, e: i8) -> SymmetricAut {
    let n = ctx.rank();
    let mut images: Vec<(Word, usize, i8)> = (1..=n).map(|j| (Word::identity(ctx), j, 1)).collect();
    if e > 0 {
        images[i - 1] = (Word::generator(ctx, i), i + 1, 1);
        images[i] = (Word::identity(ctx), i, 1);
    } else {
        // Inverse: y_i ↦ y_{i+1}, y_{i+1} ↦ y_{i+1}^-1 y_i y_{i+1}.
        images[i - 1] = (Word::identity(ctx), i + 1, 1);
        images[i] = (Word::gen_power(ctx, i + 1, -1), i, 1);
    }
    SymmetricAut::from_images(ctx, images).expect("braid generators are symmetric")
}

fn act(b: &BraidWord, ctx: GroupContext) -> SymmetricAut {
    let mut f = SymmetricAut::identity(ctx).with_source(None);
    for &(i, e) in &b.letters {
        f = f.compose(&sigma(ctx, i, e)).expect("contexts agree");
    }
    f
}

/// The Artin action on `F_n`.
pub fn artin_action(b: &BraidWord) -> SymmetricAut {
    act(b, GroupContext::free(b.n).expect("braid words have n >= 2"))
}

/// `η_{n,k}(b)`: the Artin action with conjugators reduced into `H_{n,k}`.
pub fn eta_image(b: &BraidWord, k: u32) -> Result<SymmetricAut> {
    if k < 2 {
        return Err(Error::InvalidModulus(k));
    }
    let ctx = GroupContext::torsion(b.n, k)?;
    let f = artin_action(b);
    let images = f
        .images()
        .iter()
        .map(|im| Ok((project_mod_k(&im.conjugator, k)?, im.target, 1)))
        .collect::<Result<Vec<_>>>()?;
    SymmetricAut::from_images(ctx, images)
}

#[derive(Debug, Clone, Serialize)]
pub struct FlaggedBraid {
    pub word: BraidWord,
    pub eta_image: SymmetricAut,
}

#[derive(Debug, Clone, Serialize)]
pub struct BraidSearchReport {
    pub n: usize,
    pub k: u32,
    pub max_len: usize,
    pub words_checked: usize,
    /// Words acting trivially on `F_n` (nontrivial words equal to the identity braid).
    pub trivial_braids: usize,
    /// Nontrivial braids whose η-image is inner; these include the
    /// centre, whose Artin image is already inner.
    pub inner_images: usize,
    /// Of those, braids whose Artin image is not inner on `F_n`.
    pub inner_images_outer_nontrivial: usize,
    /// Nontrivial braids with `η(b) = 1`. Expected empty.
    pub flagged: Vec<FlaggedBraid>,
}

/// All reduced braid words of length `1..=max_len`, in shortlex order of
/// letters `s1, s1^-1, s2, ...`.
fn reduced_words(n: usize, max_len: usize) -> Vec<BraidWord> {
    let alphabet: Vec<(usize, i8)> = (1..n).flat_map(|i| [(i, 1), (i, -1)]).collect();
    let mut out = Vec::new();
    let mut level: Vec<Vec<(usize, i8)>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for &(i, e) in &alphabet {
                if w.last() == Some(&(i, -e)) {
                    continue;
                }
                let mut v = w.clone();
                v.push((i, e));
                next.push(v);
            }
        }
        out.extend(next.iter().map(|l| BraidWord { n, letters: l.clone() }));
        level = next;
    }
    out
}

/// Look for nontrivial braids in the kernel of `η_{n,k}` among reduced
/// words of length at most `max_len`. Words are checked in parallel and the
/// outcomes merged in enumeration order, so the report does not depend on
/// the thread count.
pub fn bounded_kernel_search(n: usize, k: u32, max_len: usize) -> Result<BraidSearchReport> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    if k < 2 {
        return Err(Error::InvalidModulus(k));
    }
    let words = reduced_words(n, max_len);
    struct Outcome {
        trivial: bool,
        inner: bool,
        outer_nontrivial: bool,
        flag: Option<FlaggedBraid>,
    }
    let outcomes: Vec<Result<Outcome>> = words
        .par_iter()
        .map(|w| {
            let a = artin_action(w);
            if a.is_identity() {
                return Ok(Outcome {
                    trivial: true,
                    inner: false,
                    outer_nontrivial: false,
                    flag: None,
                });
            }
            let e = eta_image(w, k)?;
            let inner = e.is_inner()?;
            let outer_nontrivial = inner && !a.is_inner()?;
            let flag = e.is_identity().then(|| FlaggedBraid {
                word: w.clone(),
                eta_image: e,
            });
            Ok(Outcome {
                trivial: false,
                inner,
                outer_nontrivial,
                flag,
            })
        })
        .collect();
    let mut report = BraidSearchReport {
        n,
        k,
        max_len,
        words_checked: words.len(),
        trivial_braids: 0,
        inner_images: 0,
        inner_images_outer_nontrivial: 0,
        flagged: Vec::new(),
    };
    for o in outcomes {
        let o = o?;
        report.trivial_braids += o.trivial as usize;
        report.inner_images += o.inner as usize;
        report.inner_images_outer_nontrivial += o.outer_nontrivial as usize;
        report.flagged.extend(o.flag);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str, n: usize) -> BraidWord {
        BraidWord::parse(s, n).unwrap()
    }

    #[test]
    fn sigma_one_acts_as_stated() {
        let f = artin_action(&b("s1", 3));
        let ctx = GroupContext::free(3).unwrap();
        let w = |s: &str| Word::parse(s, ctx).unwrap();
        assert_eq!(f.image_words(), vec![w("y1 y2 y1^-1"), w("y1"), w("y3")]);
        assert!(artin_action(&b("e", 3)).is_identity());
    }

    #[test]
    fn braid_relations_hold() {
        for n in 2..=5 {
            for i in 1..n {
                let inv = artin_action(&b(&format!("s{i} s{i}^-1"), n));
                assert!(inv.is_identity());
                let single = artin_action(&b(&format!("s{i}"), n));
                let back = artin_action(&b(&format!("s{i}^-1"), n));
                assert!(single.compose(&back).unwrap().is_identity());
                for j in i + 1..n {
                    let (l, r) = if j == i + 1 {
                        (format!("s{i} s{j} s{i}"), format!("s{j} s{i} s{j}"))
                    } else {
                        (format!("s{i} s{j}"), format!("s{j} s{i}"))
                    };
                    assert_eq!(artin_action(&b(&l, n)), artin_action(&b(&r, n)), "n={n} {l} = {r}");
                }
            }
        }
    }

    #[test]
    fn eta_examples() {
        let ctx = GroupContext::involutions(3).unwrap();
        let e = eta_image(&b("s1", 3), 2).unwrap();
        let w = |s: &str| Word::parse(s, ctx).unwrap();
        assert_eq!(e.image_words(), vec![w("z1 z2 z1"), w("z1"), w("z3")]);
        assert!(eta_image(&b("e", 3), 2).unwrap().is_identity());
        assert!(!eta_image(&b("s1^2", 3), 2).unwrap().is_inner().unwrap());
        assert!(matches!(eta_image(&b("s1", 3), 1), Err(Error::InvalidModulus(1))));
    }

    #[test]
    fn full_twist_is_inner_but_not_flagged() {
        let twist = b("s1 s2 s1 s2 s1 s2", 3);
        assert!(artin_action(&twist).is_inner().unwrap());
        assert!(!eta_image(&twist, 2).unwrap().is_identity());
    }

    #[test]
    fn parse_and_reduce() {
        assert_eq!(b("s1 s2 s2^-1 s1^-1", 3).len(), 0);
        assert_eq!(b("s1^3 s2^-2", 3).to_string(), "s1 s1 s1 s2^-1 s2^-1");
        assert!(BraidWord::parse("s3", 3).is_err());
        assert!(BraidWord::parse("x1", 3).is_err());
    }

    #[test]
    fn small_searches_are_empty() {
        let r = bounded_kernel_search(3, 2, 4).unwrap();
        assert!(r.flagged.is_empty());
        assert_eq!(r.words_checked, 4 + 12 + 36 + 108);
        assert_eq!(bounded_kernel_search(2, 2, 4).unwrap().flagged.len(), 0);
    }
}
