//! The projection `F_n -> H_{n,k}` and the rewriting of even-length words of
//! `H_n` in the free basis `x_i = z_i z_n` (with `x_n` read as the identity).

use super::{GroupContext, Reducer, Word};
use crate::error::{Error, Result};

/// Reduce every exponent mod `k`.
pub fn project_mod_k(w: &Word, k: u32) -> Result<Word> {
    if k < 2 {
        return Err(Error::InvalidModulus(k));
    }
    let src = w.context();
    if !src.is_free() {
        return Err(Error::WrongContext("free"));
    }
    let ctx = GroupContext::torsion(src.rank(), k)?;
    Word::normalize(w.syllables().iter().copied(), ctx)
}

fn check_involutions(ctx: GroupContext) -> Result<()> {
    if ctx.modulus() != Some(2) {
        return Err(Error::WrongContext("H:n:2"));
    }
    if ctx.rank() < 2 {
        return Err(Error::InvalidRank(ctx.rank()));
    }
    Ok(())
}

/// Rewrite an even-length word of `H_n` over `x_1..x_{n-1}`.
///
/// Consecutive letters pair up as `z_a z_b = (z_a z_n)(z_n z_b) = x_a x_b^-1`.
pub fn even_to_x(w: &Word) -> Result<Word> {
    let ctx = w.context();
    check_involutions(ctx)?;
    let len = w.syllable_len();
    if !len.is_multiple_of(2) {
        return Err(Error::OddLength(len));
    }
    let n = ctx.rank();
    let target = GroupContext::free(n - 1)?;
    let mut r = Reducer::with_capacity(target, len);
    for pair in w.syllables().chunks(2) {
        let (a, b) = (pair[0].0, pair[1].0);
        if a != n {
            r.push(a, 1);
        }
        if b != n {
            r.push(b, -1);
        }
    }
    Ok(r.finish())
}

/// Substitute `x_i -> z_i z_n` in a word of `F_{n-1}` and reduce in `H_n`.
pub fn expand_x(w: &Word, n: usize) -> Result<Word> {
    let src = w.context();
    if !src.is_free() {
        return Err(Error::WrongContext("free"));
    }
    if src.rank() + 1 != n {
        return Err(Error::RankMismatch {
            expected: n - 1,
            found: src.rank(),
        });
    }
    let ctx = GroupContext::involutions(n)?;
    let mut r = Reducer::new(ctx);
    for &(g, e) in w.syllables() {
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                r.push(g, 1);
                r.push(n, 1);
            } else {
                r.push(n, 1);
                r.push(g, 1);
            }
        }
    }
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h3(s: &str) -> Word {
        Word::parse(s, GroupContext::involutions(3).unwrap()).unwrap()
    }

    #[test]
    fn projection_examples() {
        let f2 = GroupContext::free(2).unwrap();
        let w = Word::parse("y1^2 y2^-1", f2).unwrap();
        assert_eq!(project_mod_k(&w, 2).unwrap().to_string(), "z2");
        let w = Word::parse("y1 y2 y1^-1", f2).unwrap();
        assert_eq!(project_mod_k(&w, 2).unwrap().to_string(), "z1 z2 z1");
        let w = Word::parse("y1^4 y2^3", f2).unwrap();
        assert_eq!(project_mod_k(&w, 3).unwrap().to_string(), "z1");
        assert_eq!(project_mod_k(&w, 1), Err(Error::InvalidModulus(1)));
        let z = project_mod_k(&w, 2).unwrap();
        assert!(project_mod_k(&z, 2).is_err());
    }

    #[test]
    fn x_basis_examples() {
        assert_eq!(even_to_x(&h3("z1 z3")).unwrap().display_with('x'), "x1");
        assert_eq!(even_to_x(&h3("z1 z2")).unwrap().display_with('x'), "x1 x2^-1");
        assert_eq!(even_to_x(&h3("z3 z1")).unwrap().display_with('x'), "x1^-1");
        assert_eq!(even_to_x(&h3("z1")), Err(Error::OddLength(1)));
    }

    #[test]
    fn expand_round_trip() {
        let w = h3("z2 z1 z2 z3");
        let x = even_to_x(&w).unwrap();
        assert_eq!(expand_x(&x, 3).unwrap(), w);
    }

    #[test]
    fn needs_involutions() {
        let f = Word::generator(GroupContext::free(3).unwrap(), 1);
        assert!(even_to_x(&f).is_err());
        let one = Word::identity(GroupContext::involutions(1).unwrap());
        assert_eq!(even_to_x(&one), Err(Error::InvalidRank(1)));
    }
}
