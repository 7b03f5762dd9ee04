//! Recognition of semipalindromes and of products of semipalindromes.
//!
//! A semipalindrome is built from the empty word and `α^{±2}` by wrapping
//! `α w α` or `α w α^-1` with `α = α_{i,j}^{±1}`. Unwinding the rules, a
//! word is a semipalindrome exactly when it has even length and its `k`-th
//! and `k`-th-from-last letters always involve the same pair `(i,j)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symaut::{GeneratorWord, Letter};

/// A derivation by the inductive rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Derivation {
    Empty,
    /// `α α` for a single letter `α = α_{i,j}^{±1}`.
    Base {
        #[serde(serialize_with = "ser_letter")]
        letter: Letter,
    },
    /// `α w α` (`inverse = false`) or `α w α^-1` (`inverse = true`).
    Wrap {
        #[serde(serialize_with = "ser_letter")]
        letter: Letter,
        inverse: bool,
        inner: Box<Derivation>,
    },
}

fn ser_letter<S: serde::Serializer>(l: &Letter, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(l)
}

impl Derivation {
    /// The letters this derivation produces.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.emit(&mut out);
        out
    }

    fn emit(&self, out: &mut Vec<Letter>) {
        match self {
            Derivation::Empty => {}
            Derivation::Base { letter } => {
                out.push(*letter);
                out.push(*letter);
            }
            Derivation::Wrap {
                letter,
                inverse,
                inner,
            } => {
                out.push(*letter);
                inner.emit(out);
                out.push(if *inverse { letter.inverse() } else { *letter });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub derivation: Derivation,
}

/// A product of semipalindromes: consecutive blocks covering the word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemipalindromeDerivation {
    pub blocks: Vec<Block>,
}

impl SemipalindromeDerivation {
    pub fn letters(&self) -> Vec<Letter> {
        self.blocks.iter().flat_map(|b| b.derivation.letters()).collect()
    }
}

fn pair(l: Letter) -> (usize, usize) {
    match l {
        Letter::A { i, j, .. } => (i, j),
        _ => unreachable!("only A letters reach the parser"),
    }
}

/// Interval table: `sp[i][len]` says whether `letters[i..i+len]` is a semipalindrome.
struct Table {
    sp: Vec<Vec<bool>>,
}

impl Table {
    fn build(letters: &[Letter]) -> Self {
        let m = letters.len();
        let mut sp: Vec<Vec<bool>> = (0..=m).map(|i| vec![false; m - i + 1]).collect();
        for row in sp.iter_mut() {
            row[0] = true;
        }
        for len in (2..=m).step_by(2) {
            for i in 0..=m - len {
                let j = i + len - 1;
                sp[i][len] = pair(letters[i]) == pair(letters[j]) && sp[i + 1][len - 2];
            }
        }
        Self { sp }
    }

    fn is_sp(&self, i: usize, j: usize) -> bool {
        self.sp[i][j - i]
    }
}

fn derive(letters: &[Letter]) -> Derivation {
    match letters.len() {
        0 => Derivation::Empty,
        2 if letters[0] == letters[1] => Derivation::Base { letter: letters[0] },
        len => {
            let (a, b) = (letters[0], letters[len - 1]);
            Derivation::Wrap {
                letter: a,
                inverse: b != a,
                inner: Box::new(derive(&letters[1..len - 1])),
            }
        }
    }
}

fn check_pure(w: &GeneratorWord) -> Result<()> {
    match w.letters().iter().find(|l| !l.is_pure()) {
        Some(l) => Err(Error::NotPure(l.to_string())),
        None => Ok(()),
    }
}

/// Split `letters` into the fewest-lookahead product of semipalindromes:
/// at each position the longest block whose remainder still splits.
fn split(letters: &[Letter], table: &Table) -> Option<Vec<(usize, usize)>> {
    let m = letters.len();
    // ok[i]: the suffix from i is a product; next[i]: the chosen block end.
    let mut ok = vec![false; m + 1];
    let mut next = vec![0usize; m + 1];
    ok[m] = true;
    for i in (0..m).rev() {
        for j in (i + 2..=m).rev() {
            if (j - i) % 2 == 0 && ok[j] && table.is_sp(i, j) {
                ok[i] = true;
                next[i] = j;
                break;
            }
        }
    }
    if !ok[0] {
        return None;
    }
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < m {
        blocks.push((i, next[i]));
        i = next[i];
    }
    Some(blocks)
}

fn blocks_of(letters: &[Letter], spans: Vec<(usize, usize)>) -> SemipalindromeDerivation {
    SemipalindromeDerivation {
        blocks: spans
            .into_iter()
            .map(|(s, e)| Block {
                start: s,
                end: e,
                derivation: derive(&letters[s..e]),
            })
            .collect(),
    }
}

/// Recognize a single semipalindrome.
pub fn parse_semipalindrome(w: &GeneratorWord) -> Result<Option<Derivation>> {
    check_pure(w)?;
    let letters = w.letters();
    let table = Table::build(letters);
    Ok((letters.len().is_multiple_of(2) && table.is_sp(0, letters.len())).then(|| derive(letters)))
}

/// Recognize a product of semipalindromes. The empty word is the empty product.
pub fn parse_semipalindrome_product(w: &GeneratorWord) -> Result<Option<SemipalindromeDerivation>> {
    check_pure(w)?;
    let letters = w.letters();
    if !letters.len().is_multiple_of(2) {
        return Ok(None);
    }
    let table = Table::build(letters);
    Ok(split(letters, &table).map(|spans| blocks_of(letters, spans)))
}

/// The longest prefix of a pure word that is a product of semipalindromes,
/// with its derivation. Always succeeds (possibly with the empty prefix).
pub(crate) fn longest_product_prefix(letters: &[Letter]) -> (usize, SemipalindromeDerivation) {
    let table = Table::build(letters);
    for p in (0..=letters.len()).rev().filter(|p| p % 2 == 0) {
        if let Some(spans) = split(&letters[..p], &table) {
            return (p, blocks_of(letters, spans));
        }
    }
    unreachable!("the empty prefix always splits")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gw(s: &str) -> GeneratorWord {
        GeneratorWord::parse(s, 3).unwrap()
    }

    #[test]
    fn wrap_around_base() {
        let d = parse_semipalindrome(&gw("a[1,2] a[2,3] a[2,3] a[1,2]")).unwrap().unwrap();
        assert_eq!(
            d,
            Derivation::Wrap {
                letter: Letter::a(1, 2),
                inverse: false,
                inner: Box::new(Derivation::Base { letter: Letter::a(2, 3) }),
            }
        );
        assert_eq!(d.letters(), gw("a[1,2] a[2,3] a[2,3] a[1,2]").letters());
    }

    #[test]
    fn odd_words_are_rejected() {
        assert!(parse_semipalindrome_product(&gw("a[1,2]")).unwrap().is_none());
        assert!(parse_semipalindrome_product(&gw("a[1,2] a[1,2] a[2,1]")).unwrap().is_none());
    }

    #[test]
    fn product_of_bases() {
        let d = parse_semipalindrome_product(&gw("a[1,2] a[1,2] a[2,3] a[2,3]")).unwrap().unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert!(d.blocks.iter().all(|b| matches!(b.derivation, Derivation::Base { .. })));
    }

    #[test]
    fn greedy_prefers_long_blocks_but_backtracks() {
        // Several splits exist for each; any chosen one must recompose.
        for s in [
            "a[1,2] a[1,2] a[2,3] a[2,3] a[1,2] a[1,2]",
            "a[1,2] a[2,3] a[2,3] a[1,2] a[3,1] a[3,1]",
            "a[1,2] a[1,2]^-1 a[2,1] a[2,1]^-1",
        ] {
            let w = gw(s);
            let d = parse_semipalindrome_product(&w).unwrap().unwrap();
            assert_eq!(d.letters(), w.letters(), "{s}");
        }
    }

    #[test]
    fn non_pure_is_an_error() {
        assert!(matches!(parse_semipalindrome_product(&gw("r[1]")), Err(Error::NotPure(_))));
    }

    #[test]
    fn signs_are_ignored_in_matching() {
        let d = parse_semipalindrome(&gw("a[1,2]^-1 a[2,3] a[2,3]^-1 a[1,2]")).unwrap();
        assert!(d.is_some());
        assert!(parse_semipalindrome(&gw("a[1,2] a[2,1]")).unwrap().is_none());
    }

    #[test]
    fn prefix_split() {
        let w = gw("a[1,2] a[1,2] a[2,3] a[3,1]");
        let (p, d) = longest_product_prefix(w.letters());
        assert_eq!(p, 2);
        assert_eq!(d.blocks.len(), 1);
    }

    #[test]
    fn characterization_matches_rules() {
        // Independent oracle: closure of the inductive rules over a
        // two-letter alphabet up to length 6.
        use std::collections::BTreeSet;
        let alphabet = [Letter::a(1, 2), Letter::a_inv(1, 2), Letter::a(2, 3), Letter::a_inv(2, 3)];
        let mut sp: BTreeSet<Vec<Letter>> = BTreeSet::new();
        sp.insert(vec![]);
        for &a in &alphabet {
            sp.insert(vec![a, a]);
        }
        for _ in 0..3 {
            let cur: Vec<Vec<Letter>> = sp.iter().cloned().collect();
            for w in cur {
                for &a in &alphabet {
                    for end in [a, a.inverse()] {
                        let mut v = vec![a];
                        v.extend(&w);
                        v.push(end);
                        if v.len() <= 6 {
                            sp.insert(v);
                        }
                    }
                }
            }
        }
        for len in (0..=6).step_by(2) {
            let mut words: Vec<Vec<Letter>> = vec![vec![]];
            for _ in 0..len {
                words = words
                    .into_iter()
                    .flat_map(|w| alphabet.iter().map(move |&a| {
                        let mut v = w.clone();
                        v.push(a);
                        v
                    }))
                    .collect();
            }
            for w in words {
                let g = GeneratorWord::new(3, w.clone()).unwrap();
                let ours = parse_semipalindrome(&g).unwrap().is_some();
                assert_eq!(ours, sp.contains(&w), "{g}");
            }
        }
    }
}
