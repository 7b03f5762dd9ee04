use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A letter of the presentation: `A(i,j)^{±1}` (`y_i -> y_j y_i y_j^-1`),
/// `R(i)` (invert `y_i`) or `S(i,j)` (swap `y_i` and `y_j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A { i: usize, j: usize, inv: bool },
    R(usize),
    /// Stored with `i < j`.
    S(usize, usize),
}

impl Letter {
    pub fn a(i: usize, j: usize) -> Self {
        Letter::A { i, j, inv: false }
    }

    pub fn a_inv(i: usize, j: usize) -> Self {
        Letter::A { i, j, inv: true }
    }

    pub fn s(i: usize, j: usize) -> Self {
        Letter::S(i.min(j), i.max(j))
    }

    pub fn inverse(self) -> Self {
        match self {
            Letter::A { i, j, inv } => Letter::A { i, j, inv: !inv },
            other => other,
        }
    }

    pub fn is_pure(self) -> bool {
        matches!(self, Letter::A { .. })
    }

    fn validate(self, rank: usize) -> Result<()> {
        let check = |x: usize| {
            if x == 0 || x > rank {
                Err(Error::IndexOutOfRange { index: x, rank })
            } else {
                Ok(())
            }
        };
        match self {
            Letter::A { i, j, .. } | Letter::S(i, j) => {
                check(i)?;
                check(j)?;
                if i == j {
                    return Err(Error::Parse(format!("letter {self} needs distinct indices")));
                }
                Ok(())
            }
            Letter::R(i) => check(i),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::A { i, j, inv: false } => write!(f, "a[{i},{j}]"),
            Letter::A { i, j, inv: true } => write!(f, "a[{i},{j}]^-1"),
            Letter::R(i) => write!(f, "r[{i}]"),
            Letter::S(i, j) => write!(f, "s[{i},{j}]"),
        }
    }
}

/// A word in the presentation letters for a fixed rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(rank: usize, letters: Vec<Letter>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank(rank));
        }
        for l in &letters {
            l.validate(rank)?;
        }
        Ok(Self { rank, letters })
    }

    pub fn empty(rank: usize) -> Self {
        Self {
            rank,
            letters: Vec::new(),
        }
    }

    /// `ρ = R(1) ... R(n)`.
    pub fn rho(rank: usize) -> Self {
        Self {
            rank,
            letters: (1..=rank).map(Letter::R).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_pure(&self) -> bool {
        self.letters.iter().all(|l| l.is_pure())
    }

    pub fn inverse(&self) -> Self {
        Self {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Concatenation. Panics when ranks differ.
    pub fn concat(&self, other: &GeneratorWord) -> Self {
        assert_eq!(self.rank, other.rank, "concatenating words of different rank");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self {
            rank: self.rank,
            letters,
        }
    }

    /// `c * self * c^-1`.
    pub fn conjugated_by(&self, c: &GeneratorWord) -> Self {
        c.concat(self).concat(&c.inverse())
    }

    /// Cancel adjacent `A A^-1` pairs and `R R`, `S S` pairs.
    pub fn freely_reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self {
            rank: self.rank,
            letters: out,
        }
    }

    /// Parse whitespace-separated tokens `a[1,2]`, `a[1,2]^-1`, `r[3]`,
    /// `s[1,2]`, or `e`. An integer exponent on any token repeats it.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "e" || tok == "1" {
                continue;
            }
            let bad = || Error::Parse(format!("bad generator token `{tok}`"));
            let (head, exp) = match tok.rsplit_once('^') {
                Some((h, e)) if h.ends_with(']') => (h, e.parse::<i64>().map_err(|_| bad())?),
                _ => (tok, 1),
            };
            let kind = head.chars().next().ok_or_else(bad)?.to_ascii_lowercase();
            let inner = head[1..]
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(bad)?;
            let idx: Vec<usize> = inner
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            let letter = match (kind, idx.as_slice()) {
                ('a', [i, j]) => Letter::a(*i, *j),
                ('r', [i]) => Letter::R(*i),
                ('s', [i, j]) => Letter::s(*i, *j),
                _ => return Err(bad()),
            };
            let unit = if exp < 0 { letter.inverse() } else { letter };
            for _ in 0..exp.unsigned_abs() {
                letters.push(unit);
            }
        }
        Self::new(rank, letters)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for GeneratorWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trip() {
        let w = GeneratorWord::parse("a[1,2] a[2,3]^-1 r[3] s[2,1] e", 3).unwrap();
        assert_eq!(w.to_string(), "a[1,2] a[2,3]^-1 r[3] s[1,2]");
        assert_eq!(GeneratorWord::parse(&w.to_string(), 3).unwrap(), w);
        assert_eq!(GeneratorWord::parse("e", 3).unwrap().to_string(), "e");
    }

    #[test]
    fn powers_expand() {
        let w = GeneratorWord::parse("a[1,2]^-2", 2).unwrap();
        assert_eq!(w.letters(), &[Letter::a_inv(1, 2), Letter::a_inv(1, 2)]);
    }

    #[test]
    fn rejects_bad_letters() {
        assert!(GeneratorWord::parse("a[1,1]", 3).is_err());
        assert!(GeneratorWord::parse("a[1,4]", 3).is_err());
        assert!(GeneratorWord::parse("q[1]", 3).is_err());
        assert!(GeneratorWord::parse("a[1 2]", 3).is_err());
        assert!(GeneratorWord::parse("r[1,2]", 3).is_err());
    }

    #[test]
    fn inverse_reverses() {
        let w = GeneratorWord::parse("a[1,2] r[1] s[1,3]", 3).unwrap();
        assert_eq!(w.inverse().to_string(), "s[1,3] r[1] a[1,2]^-1");
        assert!(w.concat(&w.inverse()).freely_reduced().is_empty());
    }
}
