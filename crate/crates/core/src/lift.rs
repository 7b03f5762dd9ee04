//! The reduction `F_n -> H_n` on symmetric automorphisms, the restriction of
//! an automorphism of `H_n` to the even-length subgroup `F_{n-1}` (basis
//! `x_i = z_i z_n`), and two independent tests for the kernel of the
//! composite.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symaut::{eval_generator_word, GeneratorWord, SymmetricAut};
use crate::words::{
    common_conjugator, even_to_x, project_mod_k, GeneratorConjugate, GroupContext, InnerSearch,
    Word,
};

/// Project every conjugator mod 2 and drop the signs.
pub fn reduce_aut(f: &SymmetricAut) -> Result<SymmetricAut> {
    let ctx = f.context();
    if !ctx.is_free() {
        return Err(Error::WrongContext("free"));
    }
    let target = GroupContext::involutions(ctx.rank())?;
    let images = f
        .images()
        .iter()
        .map(|im| Ok((project_mod_k(&im.conjugator, 2)?, im.target, 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymmetricAut::from_images(target, images)?.with_source(f.source().cloned()))
}

/// An automorphism of a free group given by arbitrary generator images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XAutomorphism {
    ctx: GroupContext,
    images: Vec<Word>,
}

impl Serialize for XAutomorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.images.iter().map(|w| w.display_with('x')).collect();
        v.serialize(s)
    }
}

impl XAutomorphism {
    pub fn new(ctx: GroupContext, images: Vec<Word>) -> Result<Self> {
        if !ctx.is_free() {
            return Err(Error::WrongContext("free"));
        }
        if images.len() != ctx.rank() {
            return Err(Error::LengthMismatch {
                expected: ctx.rank(),
                found: images.len(),
            });
        }
        if let Some(w) = images.iter().find(|w| w.context() != ctx) {
            return Err(Error::ContextMismatch {
                left: ctx,
                right: w.context(),
            });
        }
        Ok(Self { ctx, images })
    }

    pub fn identity(ctx: GroupContext) -> Self {
        let images = (1..=ctx.rank()).map(|i| Word::generator(ctx, i)).collect();
        Self { ctx, images }
    }

    /// `ι`: invert every generator.
    pub fn iota(ctx: GroupContext) -> Self {
        let images = (1..=ctx.rank()).map(|i| Word::gen_power(ctx, i, -1)).collect();
        Self { ctx, images }
    }

    pub fn context(&self) -> GroupContext {
        self.ctx
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::identity(self.ctx);
        for &(g, e) in w.syllables() {
            out = out.mul(&self.images[g - 1].pow(e));
        }
        out
    }

    /// `(self ∘ g)(x_i) = self(g(x_i))`.
    pub fn compose(&self, g: &XAutomorphism) -> Result<XAutomorphism> {
        if self.ctx != g.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx,
                right: g.ctx,
            });
        }
        Ok(Self {
            ctx: self.ctx,
            images: g.images.iter().map(|w| self.apply(w)).collect(),
        })
    }

    /// `self ∘ ι`: `x_i -> self(x_i)^-1`.
    pub fn with_iota(&self) -> XAutomorphism {
        Self {
            ctx: self.ctx,
            images: self.images.iter().map(Word::inverse).collect(),
        }
    }

    /// `w` with `self = inn(w)`. Images that are not conjugates of their own
    /// generator rule innerness out immediately. Over `F_1` innerness is
    /// equality with the identity.
    pub fn inner_witness(&self, search: InnerSearch) -> Result<Option<Word>> {
        let mut dst = Vec::with_capacity(self.images.len());
        for (k, w) in self.images.iter().enumerate() {
            match GeneratorConjugate::from_word(w) {
                Some(gc) if gc.target == k + 1 && gc.exponent == 1 => dst.push(gc),
                _ => return Ok(None),
            }
        }
        if self.ctx.rank() == 1 {
            return Ok(Some(Word::identity(self.ctx)));
        }
        let src: Vec<GeneratorConjugate> = (1..=self.ctx.rank())
            .map(|i| GeneratorConjugate::new(Word::identity(self.ctx), i, 1))
            .collect();
        common_conjugator(&src, &dst, search)
    }

    pub fn is_inner(&self) -> Result<bool> {
        Ok(self.inner_witness(InnerSearch::default())?.is_some())
    }
}

/// The restriction of `h ∈ Aut(H_n)` to the even subgroup, in the basis
/// `x_i = z_i z_n`: `x_i -> h(z_i) h(z_n)` rewritten over the `x_j`.
pub fn lift_restrict(h: &SymmetricAut) -> Result<XAutomorphism> {
    let ctx = h.context();
    if ctx.modulus() != Some(2) {
        return Err(Error::WrongContext("H:n:2"));
    }
    let n = ctx.rank();
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let hn = h.image_word(n);
    let images = (1..n)
        .map(|i| even_to_x(&h.image_word(i).mul(&hn)))
        .collect::<Result<Vec<_>>>()?;
    XAutomorphism::new(GroupContext::free(n - 1)?, images)
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftResult {
    pub restriction: XAutomorphism,
    #[serde(serialize_with = "ser_opt_x")]
    pub inner_witness: Option<Word>,
    pub composed_with_iota: bool,
}

fn ser_opt_x<S: serde::Serializer>(w: &Option<Word>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(w) => s.serialize_some(&w.display_with('x')),
        None => s.serialize_none(),
    }
}

fn ser_opt_word<S: serde::Serializer>(w: &Option<Word>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(w) => s.serialize_some(&w.to_string()),
        None => s.serialize_none(),
    }
}

/// Restrict and test for "inner or inner ∘ ι".
pub fn lift_analyze(h: &SymmetricAut, search: InnerSearch) -> Result<LiftResult> {
    let restriction = lift_restrict(h)?;
    if let Some(w) = restriction.inner_witness(search)? {
        return Ok(LiftResult {
            restriction,
            inner_witness: Some(w),
            composed_with_iota: false,
        });
    }
    let twisted = restriction.with_iota();
    let w = twisted.inner_witness(search)?;
    let composed = w.is_some();
    Ok(LiftResult {
        restriction,
        inner_witness: w,
        composed_with_iota: composed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    InnerInH,
    Lift,
    Both,
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inner-in-h" | "inner-in-H" | "h" => Ok(Route::InnerInH),
            "lift" => Ok(Route::Lift),
            "both" => Ok(Route::Both),
            _ => Err(Error::Parse(format!("unknown route `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    In,
    Out,
    Unknown,
}

impl Verdict {
    fn from_search(r: Result<bool>) -> Result<Verdict> {
        match r {
            Ok(true) => Ok(Verdict::In),
            Ok(false) => Ok(Verdict::Out),
            Err(Error::BoundExceeded { .. }) => Ok(Verdict::Unknown),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Witnesses {
    /// Conjugator realizing the reduced automorphism of `H_n` as inner.
    #[serde(serialize_with = "ser_opt_word")]
    pub inner_in_h: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelVerdict {
    pub verdict: Verdict,
    /// Whether both routes agree; absent when only one route was run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_in_h: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<Verdict>,
    /// The route whose answer is the verdict. Over `H_2` the inner test is
    /// not meaningful (the lift of the deck involution is outer there), so
    /// only the lift route decides.
    pub authoritative: Route,
    pub witnesses: Witnesses,
}

/// Decide whether `gw` lies in the kernel of reduction followed by restriction.
pub fn kernel_verdict(gw: &GeneratorWord, route: Route) -> Result<KernelVerdict> {
    kernel_verdict_with(gw, route, InnerSearch::default())
}

pub fn kernel_verdict_with(
    gw: &GeneratorWord,
    route: Route,
    search: InnerSearch,
) -> Result<KernelVerdict> {
    let n = gw.rank();
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let f = eval_generator_word(gw, GroupContext::free(n)?)?;
    let h = reduce_aut(&f)?;
    let mut witnesses = Witnesses {
        inner_in_h: None,
        lift: None,
    };
    let h_verdict = if route != Route::Lift {
        let r = h.inner_witness();
        if let Ok(Some(w)) = &r {
            witnesses.inner_in_h = Some(w.clone());
        }
        Some(Verdict::from_search(r.map(|w| w.is_some()))?)
    } else {
        None
    };
    let lift_verdict = if route != Route::InnerInH {
        let r = lift_analyze(&h, search);
        let v = Verdict::from_search(r.as_ref().map(|l| l.inner_witness.is_some()).map_err(Clone::clone))?;
        witnesses.lift = r.ok();
        Some(v)
    } else {
        None
    };
    let authoritative = match route {
        Route::InnerInH => Route::InnerInH,
        Route::Lift => Route::Lift,
        Route::Both if n == 2 => Route::Lift,
        Route::Both => Route::Both,
    };
    let (verdict, agree) = match (h_verdict, lift_verdict) {
        (Some(a), Some(b)) => {
            let agree = a == b;
            let v = if n == 2 {
                b
            } else if agree {
                a
            } else {
                Verdict::Unknown
            };
            (v, Some(agree))
        }
        (Some(a), None) => (a, None),
        (None, Some(b)) => (b, None),
        (None, None) => unreachable!("at least one route runs"),
    };
    Ok(KernelVerdict {
        verdict,
        agree,
        route,
        inner_in_h: h_verdict,
        lift: lift_verdict,
        authoritative,
        witnesses,
    })
}

/// Batch version; results come back in input order.
pub fn kernel_verdicts(gws: &[GeneratorWord], route: Route) -> Vec<Result<KernelVerdict>> {
    gws.par_iter().map(|gw| kernel_verdict(gw, route)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize) -> GroupContext {
        GroupContext::free(n).unwrap()
    }
    fn ev(s: &str, n: usize) -> SymmetricAut {
        eval_generator_word(&GeneratorWord::parse(s, n).unwrap(), f(n)).unwrap()
    }
    fn gw(s: &str, n: usize) -> GeneratorWord {
        GeneratorWord::parse(s, n).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert!(reduce_aut(&ev("r[1] r[2] r[3]", 3)).unwrap().is_identity());
        let a = reduce_aut(&ev("a[1,2]", 3)).unwrap();
        assert_eq!(a.image_word(1).to_string(), "z2 z1 z2");
        assert_eq!(a.image_word(2).to_string(), "z2");
        assert!(reduce_aut(&ev("a[1,2] a[1,2]", 3)).unwrap().is_identity());
    }

    #[test]
    fn restriction_examples() {
        let h = reduce_aut(&ev("s[1,2]", 2)).unwrap();
        let s = lift_restrict(&h).unwrap();
        assert_eq!(s.images()[0].display_with('x'), "x1^-1");

        let id = SymmetricAut::identity(GroupContext::involutions(3).unwrap());
        assert_eq!(lift_restrict(&id).unwrap(), XAutomorphism::identity(f(2)));

        let h = reduce_aut(&ev("a[1,2]", 3)).unwrap();
        let s = lift_restrict(&h).unwrap();
        assert_eq!(s.images()[0].display_with('x'), "x2 x1^-1 x2");
        assert_eq!(s.images()[1].display_with('x'), "x2");
    }

    #[test]
    fn verdict_examples() {
        for n in 2..=4 {
            let v = kernel_verdict(&GeneratorWord::rho(n), Route::Both).unwrap();
            assert_eq!(v.verdict, Verdict::In, "n={n}");
        }
        let v = kernel_verdict(&gw("a[1,2]", 3), Route::Both).unwrap();
        assert_eq!(v.verdict, Verdict::Out);
        assert_eq!(v.agree, Some(true));
        let v = kernel_verdict(&gw("a[2,3] r[1] r[2] r[3] a[2,3]^-1", 3), Route::Both).unwrap();
        assert_eq!(v.verdict, Verdict::In);
        assert_eq!(v.agree, Some(true));
    }

    #[test]
    fn rank_two_uses_lift_route() {
        let v = kernel_verdict(&gw("s[1,2]", 2), Route::Both).unwrap();
        assert_eq!(v.verdict, Verdict::In);
        assert_eq!(v.inner_in_h, Some(Verdict::Out));
        assert_eq!(v.authoritative, Route::Lift);
        assert!(v.witnesses.lift.as_ref().unwrap().composed_with_iota);
    }

    #[test]
    fn iota_commutator_vector() {
        for m in 2..=4 {
            let ctx = f(m);
            let x1i = Word::gen_power(ctx, 1, -1);
            let mut images = vec![x1i.clone()];
            images.extend((2..=m).map(|i| Word::generator(ctx, i).mul(&x1i)));
            let sigma = XAutomorphism::new(ctx, images).unwrap();
            assert!(sigma.compose(&sigma).unwrap() == XAutomorphism::identity(ctx));
            let iota = XAutomorphism::iota(ctx);
            let comm = sigma.compose(&iota).unwrap().compose(&sigma).unwrap().compose(&iota).unwrap();
            assert!(comm.is_inner().unwrap(), "m={m}");
        }
    }

    #[test]
    fn non_generator_shapes_are_not_inner() {
        let ctx = f(2);
        let x = XAutomorphism::new(ctx, vec![Word::parse("x2 x1^-1 x2", ctx).unwrap(), Word::generator(ctx, 2)]).unwrap();
        assert!(!x.is_inner().unwrap());
    }
}
