//! Nuclear vertices (trivial trees over a symmetric basis), balls around the
//! standard one, and the checks on the mod-2 quotient map.
//!
//! A nuclear vertex is a symmetric basis taken up to inversion of each
//! element, reordering, and simultaneous conjugation. Sorting by target
//! handles reordering; conjugation is normalized by minimizing the total
//! conjugator length, which is a convex function on the Cayley tree, and
//! breaking ties by the lexicographically least result on the minimizing
//! plateau.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::poset::enumerate_whitehead_poset;
use super::tree::LabelledBipartiteTree;
use super::vertex::{vertex_aut_eval, VertexAutomorphismSpec};
use crate::error::{Error, Result};
use crate::lift::reduce_aut;
use crate::symaut::{perm_letters, GeneratorWord, Letter, SymmetricAut};
use crate::words::{GroupContext, Torsion, Word};

/// Cap on the size of a minimizing plateau explored during normalization.
const PLATEAU_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NuclearVertex {
    ctx: GroupContext,
    /// `conjugators[t - 1]` conjugates `y_t`.
    conjugators: Vec<Word>,
}

fn check_context(ctx: GroupContext) -> Result<()> {
    match ctx.torsion_kind() {
        Torsion::Free => Ok(()),
        Torsion::Cyclic(2) => Ok(()),
        _ => Err(Error::WrongContext("nuclear vertices need F_n or H_n with k = 2")),
    }
}

impl NuclearVertex {
    pub fn standard(ctx: GroupContext) -> Result<Self> {
        Self::from_aut(&SymmetricAut::identity(ctx))
    }

    /// The vertex with basis `g(y_1), ..., g(y_n)`.
    pub fn from_aut(g: &SymmetricAut) -> Result<Self> {
        let ctx = g.context();
        check_context(ctx)?;
        let mut conjugators = vec![Word::identity(ctx); ctx.rank()];
        for im in g.images() {
            conjugators[im.target - 1] = im.conjugator.clone();
        }
        Ok(Self::normalized(ctx, conjugators))
    }

    /// From explicit basis words, each a conjugate of a generator or its
    /// inverse with distinct targets.
    pub fn from_basis(ctx: GroupContext, basis: &[Word]) -> Result<Self> {
        Self::from_aut(&SymmetricAut::from_words(ctx, basis)?)
    }

    fn normalized(ctx: GroupContext, raw: Vec<Word>) -> Self {
        let shift = |w: &Word| -> Vec<Word> {
            raw.iter()
                .enumerate()
                .map(|(k, c)| w.mul(c).strip_trailing(k + 1).0)
                .collect()
        };
        let phi = |cs: &[Word]| cs.iter().map(Word::letter_len).sum::<u64>();
        let steps: Vec<Word> = (1..=ctx.rank())
            .flat_map(|g| {
                let up = Word::gen_power(ctx, g, 1);
                let down = Word::gen_power(ctx, g, -1);
                if up == down { vec![up] } else { vec![up, down] }
            })
            .collect();
        // Greedy descent.
        let mut w = Word::identity(ctx);
        let mut best = phi(&shift(&w));
        loop {
            let mut moved = false;
            for s in &steps {
                let cand = s.mul(&w);
                let c = phi(&shift(&cand));
                if c < best {
                    best = c;
                    w = cand;
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
        // Least representative on the plateau.
        let mut seen = BTreeSet::from([w.clone()]);
        let mut queue = VecDeque::from([w.clone()]);
        let mut least = shift(&w);
        while let Some(u) = queue.pop_front() {
            if seen.len() >= PLATEAU_CAP {
                break;
            }
            for s in &steps {
                let cand = s.mul(&u);
                if seen.contains(&cand) {
                    continue;
                }
                let cs = shift(&cand);
                if phi(&cs) == best {
                    seen.insert(cand.clone());
                    if cs < least {
                        least = cs;
                    }
                    queue.push_back(cand);
                }
            }
        }
        Self { ctx, conjugators: least }
    }

    pub fn context(&self) -> GroupContext {
        self.ctx
    }

    pub fn conjugators(&self) -> &[Word] {
        &self.conjugators
    }

    /// Basis words `c_t y_t c_t^-1`.
    pub fn basis(&self) -> Vec<Word> {
        self.conjugators
            .iter()
            .enumerate()
            .map(|(k, c)| Word::gen_power(self.ctx, k + 1, 1).conjugated_by(c))
            .collect()
    }

    /// An automorphism carrying the standard basis onto this one.
    pub fn as_aut(&self) -> SymmetricAut {
        let images = self
            .conjugators
            .iter()
            .enumerate()
            .map(|(k, c)| (c.clone(), k + 1, 1))
            .collect();
        SymmetricAut::from_images(self.ctx, images).expect("targets form a permutation")
    }

    /// The image `f · v`.
    pub fn translate(&self, f: &SymmetricAut) -> Result<Self> {
        Self::from_aut(&f.compose(&self.as_aut())?)
    }

    /// Image under the quotient `F_n → H_n`.
    pub fn project(&self) -> Result<Self> {
        if !self.ctx.is_free() {
            return Err(Error::WrongContext("projection starts from a free group"));
        }
        Self::from_aut(&reduce_aut(&self.as_aut())?)
    }

    pub fn encoding(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for NuclearVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis().iter().map(|w| w.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for NuclearVertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.basis().iter().map(|w| w.to_string()))
    }
}

/// All elements of `V_T` with exponents bounded by `bound` (free groups) or
/// in `{0, 1}` (involutions), as `(description, automorphism)` pairs. The
/// designated component at each vertex carries power 0.
fn vertex_group_elements(
    tree: &LabelledBipartiteTree,
    ctx: GroupContext,
    bound: u32,
) -> Result<Vec<(String, SymmetricAut)>> {
    let range: Vec<i64> = if ctx.is_free() {
        (-(bound as i64)..=bound as i64).collect()
    } else {
        vec![0, 1]
    };
    let slots: Vec<(usize, usize)> = (1..=tree.n())
        .flat_map(|v| (1..tree.components_at(v).len()).map(move |c| (v, c)))
        .collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; slots.len()];
    loop {
        let mut f = SymmetricAut::identity(ctx);
        let mut desc = Vec::new();
        for v in 1..=tree.n() {
            let comps = tree.components_at(v);
            let mut powers = vec![0i64; comps.len()];
            for (s, &(sv, c)) in slots.iter().enumerate() {
                if sv == v {
                    powers[c] = range[digits[s]];
                }
            }
            if powers.iter().all(|&p| p == 0) {
                continue;
            }
            desc.push(format!("v{v}:{powers:?}"));
            let spec = VertexAutomorphismSpec::from_components(tree, v, &powers)?;
            f = f.compose(&vertex_aut_eval(&spec, ctx)?)?;
        }
        if !desc.is_empty() {
            out.push((desc.join(" "), f));
        }
        // Advance the mixed-radix counter.
        let mut k = 0;
        while k < digits.len() {
            digits[k] += 1;
            if digits[k] < range.len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == digits.len() {
            break;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct BallEdge {
    pub from: usize,
    pub to: usize,
    /// Tree shape of the shared star element.
    pub tree: String,
    /// Vertex automorphism applied, as `v<label>:[powers per component]`.
    pub theta: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NuclearBall {
    pub context: GroupContext,
    pub radius: usize,
    /// Exponent bound used for free contexts.
    pub bound: u32,
    /// Vertices in order of discovery; `distance[k]` is the distance of
    /// `vertices[k]` from the standard vertex.
    pub vertices: Vec<NuclearVertex>,
    pub distance: Vec<usize>,
    /// Number of vertices at each distance `0..=radius`.
    pub level_sizes: Vec<usize>,
    pub edges: Vec<BallEdge>,
    /// Set for free contexts: vertex automorphisms were enumerated only up
    /// to the exponent bound, so the ball may be incomplete.
    pub bound_limited: bool,
}

/// Breadth-first ball around the standard nuclear vertex, joining two
/// nuclear vertices when they share a star element.
pub fn nuclear_ball(ctx: GroupContext, radius: usize, bound: u32) -> Result<NuclearBall> {
    check_context(ctx)?;
    let n = ctx.rank();
    let shapes: Vec<LabelledBipartiteTree> = enumerate_whitehead_poset(n)?
        .elements
        .into_iter()
        .filter(|t| !t.is_trivial())
        .collect();
    let mut moves: Vec<(String, String, SymmetricAut)> = Vec::new();
    for t in &shapes {
        for (desc, f) in vertex_group_elements(t, ctx, bound)? {
            moves.push((t.to_string(), desc, f));
        }
    }
    let start = NuclearVertex::standard(ctx)?;
    let mut index: BTreeMap<NuclearVertex, usize> = BTreeMap::from([(start.clone(), 0)]);
    let mut vertices = vec![start];
    let mut distance = vec![0usize];
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    for d in 1..=radius {
        let mut next = Vec::new();
        for &k in &frontier {
            let g = vertices[k].as_aut();
            for (tree, theta, f) in &moves {
                let nb = NuclearVertex::from_aut(&g.compose(f)?)?;
                if nb == vertices[k] {
                    continue;
                }
                let to = match index.get(&nb) {
                    Some(&j) => j,
                    None => {
                        let j = vertices.len();
                        index.insert(nb.clone(), j);
                        vertices.push(nb);
                        distance.push(d);
                        next.push(j);
                        j
                    }
                };
                if distance[to] + 1 >= distance[k] && to != k {
                    edges.push(BallEdge {
                        from: k,
                        to,
                        tree: tree.clone(),
                        theta: theta.clone(),
                    });
                }
            }
        }
        frontier = next;
    }
    let mut level_sizes = vec![0usize; radius + 1];
    for &d in &distance {
        level_sizes[d] += 1;
    }
    Ok(NuclearBall {
        context: ctx,
        radius,
        bound,
        vertices,
        distance,
        level_sizes,
        edges,
        bound_limited: ctx.is_free(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientStarReport {
    pub vertex: NuclearVertex,
    pub image: NuclearVertex,
    /// Elements in the star of the vertex and of its image.
    pub star_size: usize,
    pub image_star_size: usize,
    /// Projection is a bijection on stars preserving covers.
    pub star_isomorphic: bool,
    pub kernel_translates_checked: usize,
    pub kernel_translates_agreeing: usize,
    pub separations_checked: usize,
    /// Samples where distinctness of images matched the direct test on the
    /// projected bases.
    pub separations_consistent: usize,
    /// Samples with non-equivalent projected bases.
    pub separations_distinct: usize,
    pub pass: bool,
}

/// Label each tree shape by the basis words of `v` and encode it.
fn labelled_star(v: &NuclearVertex, shapes: &[LabelledBipartiteTree]) -> Vec<String> {
    let names: Vec<String> = v.basis().iter().map(|w| w.to_string()).collect();
    shapes
        .iter()
        .map(|t| {
            let mut hubs: Vec<Vec<&str>> = t
                .hubs()
                .iter()
                .map(|h| {
                    let mut x: Vec<&str> = h.iter().map(|&l| names[l - 1].as_str()).collect();
                    x.sort();
                    x
                })
                .collect();
            hubs.sort();
            format!("{hubs:?}")
        })
        .collect()
}

/// Random element of the kernel of `Σ(F_n) → Σ(H_n)`: products of
/// conjugates of `ρ` and of squares `α^2`.
fn random_kernel_element<R: Rng>(ctx: GroupContext, rng: &mut R) -> Result<SymmetricAut> {
    let n = ctx.rank();
    let mut gw = GeneratorWord::empty(n);
    for _ in 0..rng.gen_range(1..=3) {
        let c = crate::random::random_generator_word(n, rng.gen_range(0..=2), rng);
        let core = if rng.gen_bool(0.5) {
            GeneratorWord::rho(n)
        } else {
            let i = rng.gen_range(1..=n);
            let mut j = rng.gen_range(1..n);
            if j >= i {
                j += 1;
            }
            GeneratorWord::new(n, vec![Letter::a(i, j), Letter::a(i, j)])?
        };
        gw = gw.concat(&core.conjugated_by(&c));
    }
    crate::symaut::eval_generator_word(&gw, ctx)
}

/// Direct test in `Σ(H_n)`: is `g = inn(w) ∘ h ∘ σ` for some word `w` and
/// permutation `σ`? Signs are trivial with involutive generators.
fn same_vertex_direct(g: &SymmetricAut, h: &SymmetricAut) -> Result<bool> {
    let ctx = g.context();
    let n = ctx.rank();
    // The only candidate is σ = t_h^-1 ∘ t_g on targets.
    let mut inv_h = vec![0usize; n];
    for (k, &t) in h.targets().iter().enumerate() {
        inv_h[t - 1] = k + 1;
    }
    let sigma: Vec<usize> = g.targets().iter().map(|&t| inv_h[t - 1]).collect();
    let s = crate::symaut::eval_generator_word(&GeneratorWord::new(n, perm_letters(&sigma))?, ctx)?;
    Ok(crate::symaut::outer_witness(g, &h.compose(&s)?)?.is_some())
}

/// Checks that the mod-2 quotient is an isomorphism on the star of `v`,
/// that translates by kernel elements share an image, and that translates
/// with non-equivalent projected bases are separated.
pub fn quotient_star_check<R: Rng>(v: &NuclearVertex, samples: usize, rng: &mut R) -> Result<QuotientStarReport> {
    let ctx = v.context();
    if !ctx.is_free() {
        return Err(Error::WrongContext("the quotient check starts from a free group"));
    }
    let n = ctx.rank();
    let hctx = GroupContext::involutions(n)?;
    let image = v.project()?;

    let poset = enumerate_whitehead_poset(n)?;
    let star_f = labelled_star(v, &poset.elements);
    let star_h = labelled_star(&image, &poset.elements);
    let distinct = |xs: &[String]| xs.iter().collect::<BTreeSet<_>>().len() == xs.len();
    // Covers are inherited from the shapes, so a bijection on labelled
    // trees is automatically order-preserving; the projected labels must
    // also form a symmetric basis of H_n.
    let image_basis_ok = SymmetricAut::from_words(hctx, &image.basis()).is_ok();
    let star_isomorphic = distinct(&star_f) && distinct(&star_h) && image_basis_ok;

    let mut agreeing = 0;
    for _ in 0..samples {
        let k = random_kernel_element(ctx, rng)?;
        if v.translate(&k)?.project()? == image {
            agreeing += 1;
        }
    }

    let mut consistent = 0;
    let mut sep_distinct = 0;
    let base_h = reduce_aut(&v.as_aut())?;
    for _ in 0..samples {
        let len = rng.gen_range(1..=4);
        let f = crate::symaut::eval_generator_word(&crate::random::random_generator_word(n, len, rng), ctx)?;
        let moved = v.translate(&f)?;
        let moved_h = reduce_aut(&moved.as_aut())?;
        let direct_same = same_vertex_direct(&moved_h, &base_h)?;
        let images_same = moved.project()? == image;
        if !direct_same {
            sep_distinct += 1;
        }
        if direct_same == images_same {
            consistent += 1;
        }
    }

    let pass = star_isomorphic && agreeing == samples && consistent == samples;
    Ok(QuotientStarReport {
        vertex: v.clone(),
        image,
        star_size: star_f.len(),
        image_star_size: star_h.len(),
        star_isomorphic,
        kernel_translates_checked: samples,
        kernel_translates_agreeing: agreeing,
        separations_checked: samples,
        separations_consistent: consistent,
        separations_distinct: sep_distinct,
        pass,
    })
}
