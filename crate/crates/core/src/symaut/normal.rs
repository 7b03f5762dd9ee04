use serde::Serialize;

use super::{GeneratorWord, Letter};

/// `pure · ∏ R(i)^{rho_i} · perm`, with `perm[i-1] = σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub pure: GeneratorWord,
    pub rho: Vec<bool>,
    pub perm: Vec<usize>,
}

impl NormalForm {
    pub fn rank(&self) -> usize {
        self.rho.len()
    }

    pub fn perm_is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &p)| p == k + 1)
    }

    /// The generator word `pure · ∏ R(i)^{rho_i} · perm`.
    pub fn recompose(&self) -> GeneratorWord {
        let mut letters = self.pure.letters().to_vec();
        for (k, &b) in self.rho.iter().enumerate() {
            if b {
                letters.push(Letter::R(k + 1));
            }
        }
        letters.extend(perm_letters(&self.perm));
        GeneratorWord::new(self.rank(), letters).expect("normal form letters are in range")
    }
}

/// Transposition letters whose left-to-right evaluation is the permutation
/// automorphism `y_i -> y_{perm[i-1]}`.
///
/// Repeatedly split off `τ = (i σ(i))` for the smallest moved `i`, since
/// `σ = τ ∘ (τ ∘ σ)` and `τ ∘ σ` fixes `i`.
pub fn perm_letters(perm: &[usize]) -> Vec<Letter> {
    let mut sigma = perm.to_vec();
    let mut out = Vec::new();
    while let Some(i) = (1..=sigma.len()).find(|&i| sigma[i - 1] != i) {
        let j = sigma[i - 1];
        out.push(Letter::s(i, j));
        for v in sigma.iter_mut() {
            if *v == i {
                *v = j;
            } else if *v == j {
                *v = i;
            }
        }
    }
    out
}

/// Push every `R` and `S` letter to the right of the `A` letters, using
/// `ρ_k α_{i,j} ρ_k = α_{i,j}^{-1}` exactly when `k = j`, and
/// `σ α_{i,j} σ^-1 = α_{σ(i),σ(j)}`.
pub fn semidirect_normal_form(gw: &GeneratorWord) -> NormalForm {
    let n = gw.rank();
    let mut pure = Vec::new();
    let mut rho = vec![false; n];
    let mut perm: Vec<usize> = (1..=n).collect();
    // Invariant: the processed prefix equals pure · P with P = ρ^rho ∘ σ.
    for &l in gw.letters() {
        match l {
            Letter::A { i, j, inv } => {
                let (si, sj) = (perm[i - 1], perm[j - 1]);
                let flip = rho[sj - 1];
                pure.push(Letter::A {
                    i: si,
                    j: sj,
                    inv: inv ^ flip,
                });
            }
            Letter::R(k) => {
                let sk = perm[k - 1];
                rho[sk - 1] ^= true;
            }
            Letter::S(a, b) => {
                // σ ∘ τ
                perm.swap(a - 1, b - 1);
            }
        }
    }
    NormalForm {
        pure: GeneratorWord::new(n, pure).expect("pushed letters stay in range"),
        rho,
        perm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symaut::eval_generator_word;
    use crate::words::GroupContext;

    fn gw(s: &str, n: usize) -> GeneratorWord {
        GeneratorWord::parse(s, n).unwrap()
    }

    #[test]
    fn rho_flips_alpha() {
        let nf = semidirect_normal_form(&gw("r[2] a[1,2]", 3));
        assert_eq!(nf.pure, gw("a[1,2]^-1", 3));
        assert_eq!(nf.rho, vec![false, true, false]);
        assert!(nf.perm_is_identity());
    }

    #[test]
    fn pure_is_fixed() {
        let nf = semidirect_normal_form(&gw("a[1,2]", 3));
        assert_eq!(nf.pure, gw("a[1,2]", 3));
        assert_eq!(nf.rho, vec![false; 3]);
        assert!(nf.perm_is_identity());
    }

    #[test]
    fn swap_relabels_alpha() {
        let nf = semidirect_normal_form(&gw("s[1,2] a[1,2]", 3));
        assert_eq!(nf.pure, gw("a[2,1]", 3));
        assert_eq!(nf.perm, vec![2, 1, 3]);
    }

    #[test]
    fn recomposition_is_exact() {
        let ctx = GroupContext::free(4).unwrap();
        for s in [
            "s[1,2] r[1] a[1,3] s[2,4] a[4,2]^-1 r[2] a[2,1]",
            "r[3] s[1,3] s[2,3] a[3,1] r[1] a[1,2]^-1",
            "s[1,4] s[2,3] s[1,2]",
        ] {
            let w = gw(s, 4);
            let nf = semidirect_normal_form(&w);
            let lhs = eval_generator_word(&w, ctx).unwrap();
            let rhs = eval_generator_word(&nf.recompose(), ctx).unwrap();
            assert_eq!(lhs, rhs, "{s}");
        }
    }

    #[test]
    fn perm_words_evaluate_to_perm() {
        let ctx = GroupContext::free(4).unwrap();
        let perm = vec![3, 1, 4, 2];
        let w = GeneratorWord::new(4, perm_letters(&perm)).unwrap();
        assert_eq!(eval_generator_word(&w, ctx).unwrap().targets(), perm);
    }
}
