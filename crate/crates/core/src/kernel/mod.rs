//! Membership in the normal closure of `ρ = R(1) ... R(n)`, made explicit:
//! the `ρ`-normal form, semipalindrome splitting, and certificates
//! `∏ c_k ρ c_k^-1`.

mod semipal;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lift::{kernel_verdict, Route, Verdict};
use crate::symaut::{
    eval_generator_word, outer_equal, semidirect_normal_form, GeneratorWord, Letter, SymmetricAut,
};
use crate::words::GroupContext;

pub use semipal::{
    parse_semipalindrome, parse_semipalindrome_product, Block, Derivation, SemipalindromeDerivation,
};

/// `(∏ semiparts) · residual · ∏ R(i)^{rho_i} · perm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoNormalForm {
    pub semiparts: Vec<GeneratorWord>,
    pub derivation: SemipalindromeDerivation,
    /// Trailing pure letters that do not split into semipalindromes. Empty
    /// for inputs already shaped as products of conjugates of `ρ`-letters.
    pub residual: GeneratorWord,
    /// The whole pure part after free cancellation.
    pub reduced_pure: GeneratorWord,
    pub rho: Vec<bool>,
    pub perm: Vec<usize>,
}

impl RhoNormalForm {
    pub fn rank(&self) -> usize {
        self.rho.len()
    }

    pub fn perm_is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &p)| p == k + 1)
    }

    /// `Some(ℓ)` when the `ρ`-exponents are all equal.
    pub fn uniform_rho(&self) -> Option<bool> {
        let first = *self.rho.first()?;
        self.rho.iter().all(|&b| b == first).then_some(first)
    }

    pub fn recompose(&self) -> GeneratorWord {
        let n = self.rank();
        let mut letters: Vec<Letter> = self.semiparts.iter().flat_map(|w| w.letters().to_vec()).collect();
        letters.extend_from_slice(self.residual.letters());
        for (k, &b) in self.rho.iter().enumerate() {
            if b {
                letters.push(Letter::R(k + 1));
            }
        }
        letters.extend(crate::symaut::perm_letters(&self.perm));
        GeneratorWord::new(n, letters).expect("normal form letters are in range")
    }
}

pub fn rho_normal_form(gw: &GeneratorWord) -> RhoNormalForm {
    let nf = semidirect_normal_form(gw);
    let n = gw.rank();
    let letters = nf.pure.letters();
    let (p, derivation) = semipal::longest_product_prefix(letters);
    let semiparts = derivation
        .blocks
        .iter()
        .map(|b| GeneratorWord::new(n, letters[b.start..b.end].to_vec()).expect("in range"))
        .collect();
    RhoNormalForm {
        semiparts,
        derivation,
        residual: GeneratorWord::new(n, letters[p..].to_vec()).expect("in range"),
        reduced_pure: nf.pure.freely_reduced(),
        rho: nf.rho,
        perm: nf.perm,
    }
}

/// Conjugators `c_1..c_m` with the certified element outer-equal to
/// `∏ c_k ρ c_k^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub n: usize,
    pub conjugators: Vec<GeneratorWord>,
}

impl Certificate {
    /// The generator word `∏ c_k ρ c_k^-1`.
    pub fn product(&self) -> GeneratorWord {
        let rho = GeneratorWord::rho(self.n);
        self.conjugators
            .iter()
            .fold(GeneratorWord::empty(self.n), |acc, c| acc.concat(&rho.conjugated_by(c)))
    }

    /// Read either a bare list of conjugator strings or an object with a
    /// `conjugators` (or `certificate`) list and optionally `n`.
    pub fn from_json(value: &serde_json::Value, n: usize) -> Result<Self> {
        let list = match value {
            serde_json::Value::Array(a) => a,
            serde_json::Value::Object(o) => {
                if let Some(m) = o.get("n").and_then(|v| v.as_u64()) {
                    if m as usize != n {
                        return Err(Error::RankMismatch {
                            expected: n,
                            found: m as usize,
                        });
                    }
                }
                o.get("conjugators")
                    .or_else(|| o.get("certificate"))
                    .and_then(|v| v.as_array())
                    .ok_or_else(|| Error::Parse("certificate object lacks a `conjugators` list".into()))?
            }
            _ => return Err(Error::Parse("certificate must be a list or an object".into())),
        };
        let conjugators = list
            .iter()
            .map(|v| {
                v.as_str()
                    .ok_or_else(|| Error::Parse("certificate entries must be strings".into()))
                    .and_then(|s| GeneratorWord::parse(s, n))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, conjugators })
    }
}

fn prefix(c: &GeneratorWord, cert: Vec<GeneratorWord>) -> Vec<GeneratorWord> {
    cert.into_iter().map(|k| c.concat(&k)).collect()
}

/// Certificate for one semipalindrome, following the induction:
/// `β β = (β ρ β^-1) ρ`; `α w α^-1` prefixes every conjugator by `α`; and
/// `α w α = (α w α^-1) α^2`.
fn derivation_certificate(d: &Derivation, n: usize) -> Vec<GeneratorWord> {
    let single = |l: Letter| GeneratorWord::new(n, vec![l]).expect("in range");
    match d {
        Derivation::Empty => Vec::new(),
        Derivation::Base { letter } => vec![single(*letter), GeneratorWord::empty(n)],
        Derivation::Wrap {
            letter,
            inverse,
            inner,
        } => {
            let a = single(*letter);
            let mut out = prefix(&a, derivation_certificate(inner, n));
            if !inverse {
                out.push(a);
                out.push(GeneratorWord::empty(n));
            }
            out
        }
    }
}

/// Certificate for a product of semipalindromes followed by `ρ^ℓ`.
fn assemble(derivation: &SemipalindromeDerivation, n: usize, ell: bool) -> Certificate {
    let mut conjugators: Vec<GeneratorWord> = derivation
        .blocks
        .iter()
        .flat_map(|b| derivation_certificate(&b.derivation, n))
        .collect();
    if ell {
        conjugators.push(GeneratorWord::empty(n));
    }
    Certificate { n, conjugators }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertifyMethod {
    Semipalindrome,
    ReducedSemipalindrome,
    BoundedSearch,
}

/// Limits of the fallback search used when the input is not already shaped
/// as a product of conjugates of `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBound {
    pub max_conjugates: usize,
    pub max_conjugator_len: usize,
}

impl Default for SearchBound {
    fn default() -> Self {
        Self {
            max_conjugates: 2,
            max_conjugator_len: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyReport {
    pub normal_form: RhoNormalForm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<CertifyMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Lift-module verdict, computed only when the shape-based route fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_bound: Option<SearchBound>,
}

pub fn certify(gw: &GeneratorWord) -> Option<Certificate> {
    certify_detailed(gw, SearchBound::default()).ok().and_then(|r| r.certificate)
}

pub fn certify_detailed(gw: &GeneratorWord, bound: SearchBound) -> Result<CertifyReport> {
    let n = gw.rank();
    let nf = rho_normal_form(gw);
    let mut report = CertifyReport {
        normal_form: nf.clone(),
        method: None,
        certificate: None,
        kernel: None,
        search_bound: None,
    };
    if nf.perm_is_identity() {
        if let Some(ell) = nf.uniform_rho() {
            if nf.residual.is_empty() {
                report.method = Some(CertifyMethod::Semipalindrome);
                report.certificate = Some(assemble(&nf.derivation, n, ell));
                return Ok(report);
            }
            if let Some(d) = parse_semipalindrome_product(&nf.reduced_pure)? {
                report.method = Some(CertifyMethod::ReducedSemipalindrome);
                report.certificate = Some(assemble(&d, n, ell));
                return Ok(report);
            }
        }
    }
    if n < 2 {
        return Ok(report);
    }
    let route = if n == 2 { Route::Lift } else { Route::Both };
    let verdict = kernel_verdict(gw, route)?.verdict;
    report.kernel = Some(verdict);
    if verdict != Verdict::In {
        return Ok(report);
    }
    report.search_bound = Some(bound);
    if let Some(c) = bounded_search(gw, bound)? {
        report.method = Some(CertifyMethod::BoundedSearch);
        report.certificate = Some(c);
    }
    Ok(report)
}

fn all_letters(n: usize) -> Vec<Letter> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(Letter::a(i, j));
                out.push(Letter::a_inv(i, j));
            }
        }
    }
    out.extend((1..=n).map(Letter::R));
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Letter::s(i, j));
        }
    }
    out
}

/// Try every product of at most `max_conjugates` conjugates of `ρ` by words
/// of length at most `max_conjugator_len` (zero conjugates meaning the
/// identity), in a fixed order.
fn bounded_search(gw: &GeneratorWord, bound: SearchBound) -> Result<Option<Certificate>> {
    let n = gw.rank();
    let ctx = GroupContext::free(n)?;
    let target = eval_generator_word(gw, ctx)?;
    let letters = all_letters(n);
    let mut conjugators: Vec<GeneratorWord> = vec![GeneratorWord::empty(n)];
    let mut layer = conjugators.clone();
    for _ in 0..bound.max_conjugator_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                let mut v = w.letters().to_vec();
                v.push(l);
                let c = GeneratorWord::new(n, v)?.freely_reduced();
                if c.len() == w.len() + 1 {
                    next.push(c);
                }
            }
        }
        conjugators.extend(next.iter().cloned());
        layer = next;
    }
    let rho = GeneratorWord::rho(n);
    let pieces: Vec<SymmetricAut> = conjugators
        .iter()
        .map(|c| eval_generator_word(&rho.conjugated_by(c), ctx))
        .collect::<Result<_>>()?;

    let mut stack: Vec<(Vec<usize>, SymmetricAut)> = vec![(Vec::new(), SymmetricAut::identity(ctx))];
    let mut depth = 0;
    while depth <= bound.max_conjugates {
        let mut next = Vec::new();
        for (choice, acc) in &stack {
            if outer_equal(acc, &target)? {
                return Ok(Some(Certificate {
                    n,
                    conjugators: choice.iter().map(|&k| conjugators[k].clone()).collect(),
                }));
            }
            if depth < bound.max_conjugates {
                for (k, p) in pieces.iter().enumerate() {
                    let mut c = choice.clone();
                    c.push(k);
                    next.push((c, acc.compose(p)?));
                }
            }
        }
        stack = next;
        depth += 1;
    }
    Ok(None)
}

/// Check `∏ c_k ρ c_k^-1` against `target` in the outer automorphism group.
pub fn verify_certificate(cert: &Certificate, target: &GeneratorWord) -> Result<bool> {
    if cert.n != target.rank() {
        return Err(Error::RankMismatch {
            expected: target.rank(),
            found: cert.n,
        });
    }
    if let Some(c) = cert.conjugators.iter().find(|c| c.rank() != cert.n) {
        return Err(Error::RankMismatch {
            expected: cert.n,
            found: c.rank(),
        });
    }
    // Outer equality of the two sides is innerness of `product · target^-1`.
    // Images of either side alone can run to hundreds of millions of
    // syllables, so that word is first rewritten into semidirect normal form
    // (an identity in the group) and freely reduced, where the matching pure
    // parts cancel.
    let ctx = GroupContext::free(cert.n)?;
    let quotient = cert.product().concat(&target.inverse());
    let mut nf = semidirect_normal_form(&quotient);
    nf.pure = nf.pure.freely_reduced();
    eval_generator_word(&nf.recompose(), ctx)?.is_inner()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gw(s: &str, n: usize) -> GeneratorWord {
        GeneratorWord::parse(s, n).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let nf = rho_normal_form(&gw("r[1] a[1,2] r[1]", 3));
        assert_eq!(nf.reduced_pure, gw("a[1,2]", 3));
        assert_eq!(nf.residual, gw("a[1,2]", 3));
        assert_eq!(nf.rho, vec![false; 3]);
        assert!(nf.perm_is_identity());

        let nf = rho_normal_form(&gw("a[1,2] r[2] a[1,2] r[2]", 3));
        assert!(nf.reduced_pure.is_empty());
        assert!(nf.residual.is_empty());
        assert_eq!(nf.rho, vec![false; 3]);

        let nf = rho_normal_form(&gw("a[1,3] r[2] a[1,3]^-1", 3));
        assert!(nf.reduced_pure.is_empty());
        assert_eq!(nf.rho, vec![false, true, false]);
    }

    #[test]
    fn certificate_examples() {
        let c = certify(&gw("a[1,2] a[1,2]", 3)).unwrap();
        assert_eq!(c.conjugators, vec![gw("a[1,2]", 3), gw("e", 3)]);
        assert!(verify_certificate(&c, &gw("a[1,2] a[1,2]", 3)).unwrap());

        let c = certify(&GeneratorWord::rho(3)).unwrap();
        assert_eq!(c.conjugators, vec![gw("e", 3)]);

        assert!(certify(&gw("a[1,2]", 3)).is_none());
    }

    #[test]
    fn verification_examples() {
        let c = Certificate {
            n: 3,
            conjugators: vec![gw("e", 3)],
        };
        assert!(verify_certificate(&c, &GeneratorWord::rho(3)).unwrap());
        assert!(!verify_certificate(&c, &gw("a[1,2]", 3)).unwrap());
        assert!(verify_certificate(&c, &gw("a[1,2]", 4)).is_err());
    }

    #[test]
    fn wraps_certify() {
        for s in [
            "a[1,2] a[2,3] a[2,3] a[1,2]",
            "a[1,2] a[2,3] a[2,3] a[1,2]^-1",
            "a[3,1]^-1 a[1,2] a[2,3]^-1 a[2,3]^-1 a[1,2]^-1 a[3,1] r[1] r[2] r[3]",
            "a[2,3] r[1] r[2] r[3] a[2,3]^-1",
        ] {
            let w = gw(s, 3);
            let c = certify(&w).unwrap_or_else(|| panic!("{s}"));
            assert!(verify_certificate(&c, &w).unwrap(), "{s}");
        }
    }

    #[test]
    fn search_fallback() {
        // An inner automorphism is outer-trivial but not a product of
        // semipalindromes as written.
        let w = gw("a[2,1] a[3,1]", 3);
        let r = certify_detailed(&w, SearchBound::default()).unwrap();
        assert_eq!(r.method, Some(CertifyMethod::BoundedSearch));
        let c = r.certificate.unwrap();
        assert!(verify_certificate(&c, &w).unwrap());
        let w = gw("a[2,1] a[3,1] r[1] r[2] r[3]", 3);
        let c = certify(&w).unwrap();
        assert!(verify_certificate(&c, &w).unwrap());
    }

    #[test]
    fn certificate_json() {
        let c = Certificate {
            n: 3,
            conjugators: vec![gw("a[1,2]", 3), gw("e", 3)],
        };
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v, serde_json::json!({"n": 3, "conjugators": ["a[1,2]", "e"]}));
        let back = Certificate::from_json(&serde_json::json!({"certificate": ["a[1,2]", "e"]}), 3).unwrap();
        assert_eq!(back, c);
        assert_eq!(Certificate::from_json(&v, 3).unwrap(), c);
        assert!(Certificate::from_json(&serde_json::json!({"n": 4, "certificate": []}), 3).is_err());
    }
}
