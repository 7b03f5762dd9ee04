use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use symlift::braid::{artin_action, bounded_kernel_search, eta_image, BraidWord};
use symlift::complex::{
    dot, enumerate_whitehead_poset, nuclear_ball, order_complex_homology, quotient_star_check,
    stabilizer_generators, vertex_aut_eval, Edge, LabelledBipartiteTree, NuclearVertex, VertexAutomorphismSpec,
};
use symlift::kernel::{
    certify_detailed, parse_semipalindrome_product, rho_normal_form, verify_certificate, Certificate, SearchBound,
};
use symlift::lift::{kernel_verdicts, lift_analyze, reduce_aut, Route, Verdict};
use symlift::random::{rng_from_seed, DEFAULT_SEED};
use symlift::selftest::{run_selftest_with_progress, Level, SelftestOptions, SCHEMA};
use symlift::symaut::{
    check_relations_with, eval_generator_word, outer_witness, semidirect_normal_form, GeneratorWord, RelationFault,
};
use symlift::words::{
    conjugacy_witness, cyclic_reduce, even_to_x, expand_x, inner_witness, project_mod_k, GroupContext, InnerSearch,
    Word,
};
use symlift::Error;

#[derive(Parser)]
#[command(name = "symlift", version, about = "Symmetric automorphisms, lifting kernels, and tree complexes")]
struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, env = "SYMLIFT_SEED", default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Words in F_n and H_{n,k}.
    #[command(subcommand)]
    Words(WordsCmd),
    /// Symmetric automorphisms of F_n.
    #[command(subcommand)]
    Symaut(SymautCmd),
    /// Reduction to H_n and restriction to the even subgroup.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Normal forms and kernel certificates.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Trees, fold posets, stabilizers and nuclear vertices.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Braid groups and the map into SymAut(H_{n,k}).
    #[command(subcommand)]
    Braid(BraidCmd),
    /// Run the acceptance checks.
    Selftest {
        #[arg(long, default_value = "quick")]
        level: LevelArg,
        /// Corrupt the relation table to confirm failures are reported.
        #[arg(long)]
        fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    RhoActionSign,
    SigmaIndexSwap,
    TriangleOrder,
}

impl From<FaultArg> for RelationFault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::RhoActionSign => RelationFault::RhoActionSign,
            FaultArg::SigmaIndexSwap => RelationFault::SigmaIndexSwap,
            FaultArg::TriangleOrder => RelationFault::TriangleOrder,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    #[value(name = "inner-in-h", alias = "inner-in-H", alias = "h")]
    InnerInH,
    Lift,
    Both,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::InnerInH => Route::InnerInH,
            RouteArg::Lift => Route::Lift,
            RouteArg::Both => Route::Both,
        }
    }
}

#[derive(Args)]
struct CtxWord {
    /// Group context: F:n, H:n or H:n:k.
    #[arg(long)]
    ctx: GroupContext,
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct RankWord {
    #[arg(long)]
    n: usize,
    /// Generator word, e.g. "a[1,2] r[3] s[1,2]".
    #[arg(long)]
    word: String,
}

#[derive(Subcommand)]
enum WordsCmd {
    /// Reduce a word to normal form.
    Normalize(CtxWord),
    /// Split w = h r h^-1 with r cyclically reduced.
    CyclicReduce(CtxWord),
    /// Find g with g u g^-1 = v.
    Conjugacy {
        #[arg(long)]
        ctx: GroupContext,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Find w with w y_i w^-1 = image_i for every i.
    Inner {
        #[arg(long)]
        ctx: GroupContext,
        /// One image per generator, in order.
        #[arg(long = "image", required = true)]
        images: Vec<String>,
    },
    /// Reduce exponents of a free-group word mod k.
    Project {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        cw: CtxWord,
    },
    /// Rewrite an even word of H_n in the basis x_i = z_i z_n.
    EvenToX(CtxWord),
    /// Expand an x-word of F_{n-1} into H_n.
    ExpandX {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
    },
}

#[derive(Subcommand)]
enum SymautCmd {
    /// Evaluate a generator word to images of the generators.
    Eval {
        #[command(flatten)]
        rw: RankWord,
        /// Evaluate over this context instead of F_n.
        #[arg(long)]
        ctx: Option<GroupContext>,
    },
    /// Check every defining relation.
    Relations {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        fault: Option<FaultArg>,
    },
    /// Push permutations and inversions to the right.
    NormalForm(RankWord),
    /// Decide whether two words agree as outer automorphisms.
    OuterEqual {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(Subcommand)]
enum LiftCmd {
    /// Reduce to H_n and restrict to the even subgroup.
    Eval(RankWord),
    /// Kernel test of reduction followed by restriction.
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "both")]
        route: RouteArg,
        /// Repeat for a batch; the report is then a list.
        #[arg(long = "word", required = true)]
        words: Vec<String>,
    },
}

#[derive(Subcommand)]
enum KernelCmd {
    /// Semipalindrome product decomposition of the pure part.
    NormalForm(RankWord),
    /// Produce a certificate as a product of conjugates of rho.
    Certify {
        #[command(flatten)]
        rw: RankWord,
        #[arg(long, default_value_t = 2)]
        max_conjugates: usize,
        #[arg(long, default_value_t = 1)]
        max_conjugator_len: usize,
    },
    /// Check a certificate file against a word.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        word: String,
        /// Rank, when the certificate does not record one.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Decompose a pure word into semipalindromes.
    Semipal(RankWord),
}

#[derive(Args)]
struct TreeArg {
    #[arg(long)]
    n: usize,
    /// Hubs, e.g. "{1,2,4}{3,4}".
    #[arg(long)]
    tree: String,
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Enumerate the fold poset of trees over a fixed basis.
    Poset {
        #[arg(long)]
        n: usize,
    },
    /// Reduced homology of the order complex of the fold poset.
    Homology {
        #[arg(long)]
        n: usize,
    },
    /// Show a tree with its encodings.
    Tree(TreeArg),
    /// Fold two edges at a labelled vertex; edges are named by hub index.
    Fold {
        #[command(flatten)]
        t: TreeArg,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        e1: usize,
        #[arg(long)]
        e2: usize,
    },
    /// Evaluate a vertex automorphism given powers per component.
    VertexAut {
        #[command(flatten)]
        t: TreeArg,
        #[arg(long)]
        v: usize,
        /// Comma-separated powers, one per component in sorted order.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        powers: Vec<i64>,
    },
    /// Generators of the stabilizer of a tree.
    Stabilizer(TreeArg),
    /// Ball of nuclear vertices around the standard one.
    Ball {
        #[arg(long)]
        ctx: GroupContext,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        /// Exponent bound for vertex automorphisms over F_n.
        #[arg(long, default_value_t = 1)]
        bound: u32,
    },
    /// Checks on the mod-2 quotient at the standard nuclear vertex.
    Quotient {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Artin action on F_n.
    Action {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
    },
    /// Image in SymAut(H_{n,k}).
    Eta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        word: String,
    },
    /// Bounded search for kernel elements.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_len: usize,
    },
}

/// Result of a command: the JSON body, optional DOT text, and exit status.
struct Outcome {
    body: Value,
    dot: Option<String>,
    code: u8,
}

impl Outcome {
    fn ok(body: Value) -> Self {
        Self { body, dot: None, code: 0 }
    }

    fn verdict(body: Value, positive: bool) -> Self {
        Self {
            body,
            dot: None,
            code: if positive { 0 } else { 1 },
        }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn word_json(w: &Word) -> Value {
    json!({ "word": w.to_string(), "syllable_len": w.syllable_len(), "letter_len": w.letter_len() })
}

fn parse_tree(t: &TreeArg) -> Res<LabelledBipartiteTree> {
    Ok(LabelledBipartiteTree::parse(&t.tree, t.n)?)
}

fn run_words(cmd: WordsCmd) -> Res<Outcome> {
    Ok(match cmd {
        WordsCmd::Normalize(cw) => Outcome::ok(word_json(&Word::parse(&cw.word, cw.ctx)?)),
        WordsCmd::CyclicReduce(cw) => {
            let (h, r) = cyclic_reduce(&Word::parse(&cw.word, cw.ctx)?);
            Outcome::ok(json!({ "conjugator": h.to_string(), "core": r.to_string() }))
        }
        WordsCmd::Conjugacy { ctx, u, v } => {
            let w = conjugacy_witness(&Word::parse(&u, ctx)?, &Word::parse(&v, ctx)?)?;
            Outcome::verdict(
                json!({ "conjugate": w.is_some(), "conjugator": w.as_ref().map(|w| w.conjugator.to_string()) }),
                w.is_some(),
            )
        }
        WordsCmd::Inner { ctx, images } => {
            let ims = images.iter().map(|s| Word::parse(s, ctx)).collect::<Result<Vec<_>, _>>()?;
            let w = inner_witness(&ims, ctx)?;
            Outcome::verdict(json!({ "inner": w.is_some(), "witness": w.as_ref().map(|w| w.to_string()) }), w.is_some())
        }
        WordsCmd::Project { k, cw } => Outcome::ok(word_json(&project_mod_k(&Word::parse(&cw.word, cw.ctx)?, k)?)),
        WordsCmd::EvenToX(cw) => {
            let x = even_to_x(&Word::parse(&cw.word, cw.ctx)?)?;
            Outcome::ok(json!({ "word": x.display_with('x'), "letter_len": x.letter_len() }))
        }
        WordsCmd::ExpandX { n, word } => {
            let fctx = GroupContext::free(n.checked_sub(1).filter(|&m| m >= 1).ok_or(Error::InvalidRank(n))?)?;
            Outcome::ok(word_json(&expand_x(&Word::parse(&word, fctx)?, n)?))
        }
    })
}

fn run_symaut(cmd: SymautCmd) -> Res<Outcome> {
    Ok(match cmd {
        SymautCmd::Eval { rw, ctx } => {
            let ctx = match ctx {
                Some(c) if c.rank() != rw.n => {
                    return Err(Error::RankMismatch {
                        expected: rw.n,
                        found: c.rank(),
                    }
                    .into())
                }
                Some(c) => c,
                None => GroupContext::free(rw.n)?,
            };
            let f = eval_generator_word(&GeneratorWord::parse(&rw.word, rw.n)?, ctx)?;
            let words: Vec<String> = f.image_words().iter().map(|w| w.to_string()).collect();
            Outcome::ok(json!({ "context": ctx, "images": f, "image_words": words, "inner": f.is_inner()? }))
        }
        SymautCmd::Relations { n, fault } => {
            let r = check_relations_with(n, fault.map(Into::into))?;
            let pass = r.all_pass;
            Outcome::verdict(to_value(&r), pass)
        }
        SymautCmd::NormalForm(rw) => {
            let nf = semidirect_normal_form(&GeneratorWord::parse(&rw.word, rw.n)?);
            Outcome::ok(json!({ "normal_form": nf, "recomposed": nf.recompose().to_string() }))
        }
        SymautCmd::OuterEqual { n, left, right } => {
            let ctx = GroupContext::free(n)?;
            let f = eval_generator_word(&GeneratorWord::parse(&left, n)?, ctx)?;
            let g = eval_generator_word(&GeneratorWord::parse(&right, n)?, ctx)?;
            let w = outer_witness(&f, &g)?;
            Outcome::verdict(json!({ "outer_equal": w.is_some(), "witness": w.as_ref().map(|w| w.to_string()) }), w.is_some())
        }
    })
}

fn run_lift(cmd: LiftCmd) -> Res<Outcome> {
    Ok(match cmd {
        LiftCmd::Eval(rw) => {
            let f = eval_generator_word(&GeneratorWord::parse(&rw.word, rw.n)?, GroupContext::free(rw.n)?)?;
            let h = reduce_aut(&f)?;
            let r = lift_analyze(&h, InnerSearch::default())?;
            Outcome::ok(json!({ "reduced": h, "lift": r }))
        }
        LiftCmd::Kernel { n, route, words } => {
            let gws = words.iter().map(|s| GeneratorWord::parse(s, n)).collect::<Result<Vec<_>, _>>()?;
            let results = kernel_verdicts(&gws, route.into());
            let mut out = Vec::with_capacity(results.len());
            let mut code = 0;
            for (w, r) in words.iter().zip(results) {
                let v = r?;
                code = code.max(match v.verdict {
                    Verdict::In => 0,
                    Verdict::Out => 1,
                    Verdict::Unknown => 2,
                });
                let mut obj = to_value(&v);
                obj["word"] = json!(w);
                out.push(obj);
            }
            let body = if out.len() == 1 { out.pop().expect("one result") } else { json!(out) };
            Outcome { body, dot: None, code }
        }
    })
}

fn run_kernel(cmd: KernelCmd) -> Res<Outcome> {
    Ok(match cmd {
        KernelCmd::NormalForm(rw) => {
            let nf = rho_normal_form(&GeneratorWord::parse(&rw.word, rw.n)?);
            Outcome::ok(json!({ "normal_form": nf, "recomposed": nf.recompose().to_string() }))
        }
        KernelCmd::Certify {
            rw,
            max_conjugates,
            max_conjugator_len,
        } => {
            let bound = SearchBound {
                max_conjugates,
                max_conjugator_len,
            };
            let r = certify_detailed(&GeneratorWord::parse(&rw.word, rw.n)?, bound)?;
            let found = r.certificate.is_some();
            Outcome::verdict(to_value(&r), found)
        }
        KernelCmd::Verify { cert, word, n } => {
            let text = std::fs::read_to_string(&cert)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", cert.display())))?;
            let value: Value =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("certificate is not JSON: {e}")))?;
            let recorded = value.get("n").and_then(Value::as_u64).map(|m| m as usize);
            let n = n
                .or(recorded)
                .ok_or_else(|| Failure::Usage("rank unknown: pass --n or record \"n\" in the certificate".into()))?;
            let c = Certificate::from_json(&value, n)?;
            let target = GeneratorWord::parse(&word, n)?;
            let valid = verify_certificate(&c, &target)?;
            Outcome::verdict(
                json!({ "valid": valid, "n": n, "word": word, "product": c.product().to_string() }),
                valid,
            )
        }
        KernelCmd::Semipal(rw) => {
            let d = parse_semipalindrome_product(&GeneratorWord::parse(&rw.word, rw.n)?)?;
            Outcome::verdict(json!({ "product": d.is_some(), "derivation": d }), d.is_some())
        }
    })
}

fn run_complex(cmd: ComplexCmd, seed: u64) -> Res<Outcome> {
    Ok(match cmd {
        ComplexCmd::Poset { n } => {
            let p = enumerate_whitehead_poset(n)?;
            Outcome {
                body: json!({
                    "n": n,
                    "elements": p.elements,
                    "covers": p.covers,
                    "max_chain_cardinality": p.max_chain_cardinality(),
                    "chain_counts": p.chain_counts(),
                }),
                dot: Some(dot::poset_dot(&p)),
                code: 0,
            }
        }
        ComplexCmd::Homology { n } => {
            let h = order_complex_homology(&enumerate_whitehead_poset(n)?);
            let acyclic = h.is_acyclic();
            Outcome::ok(json!({ "n": n, "homology": h, "acyclic": acyclic }))
        }
        ComplexCmd::Tree(t) => {
            let tree = parse_tree(&t)?;
            let edges = tree.edges();
            Outcome {
                body: json!({ "tree": tree, "edges": edges }),
                dot: Some(dot::tree_dot(&tree)),
                code: 0,
            }
        }
        ComplexCmd::Fold { t, v, e1, e2 } => {
            let tree = parse_tree(&t)?;
            let folded = tree.fold(v, Edge { label: v, hub: e1 }, Edge { label: v, hub: e2 })?;
            Outcome {
                body: json!({ "from": tree, "to": folded }),
                dot: Some(dot::tree_dot(&folded)),
                code: 0,
            }
        }
        ComplexCmd::VertexAut { t, v, powers } => {
            let tree = parse_tree(&t)?;
            let spec = VertexAutomorphismSpec::from_components(&tree, v, &powers)?;
            let f = vertex_aut_eval(&spec, GroupContext::free(t.n)?)?;
            Outcome::ok(json!({
                "spec": spec,
                "components": tree.components_at(v),
                "images": f,
                "generator_word": spec.generator_word().to_string(),
            }))
        }
        ComplexCmd::Stabilizer(t) => Outcome::ok(to_value(&stabilizer_generators(&parse_tree(&t)?))),
        ComplexCmd::Ball { ctx, radius, bound } => {
            let b = nuclear_ball(ctx, radius, bound)?;
            Outcome {
                body: to_value(&b),
                dot: Some(dot::ball_dot(&b)),
                code: 0,
            }
        }
        ComplexCmd::Quotient { n, samples } => {
            let v = NuclearVertex::standard(GroupContext::free(n)?)?;
            let mut rng = rng_from_seed(seed);
            let r = quotient_star_check(&v, samples, &mut rng)?;
            let pass = r.pass;
            Outcome::verdict(to_value(&r), pass)
        }
    })
}

fn run_braid(cmd: BraidCmd) -> Res<Outcome> {
    Ok(match cmd {
        BraidCmd::Action { n, word } => {
            let b = BraidWord::parse(&word, n)?;
            let f = artin_action(&b);
            let words: Vec<String> = f.image_words().iter().map(|w| w.to_string()).collect();
            Outcome::ok(json!({ "braid": b, "images": f, "image_words": words }))
        }
        BraidCmd::Eta { n, k, word } => {
            let b = BraidWord::parse(&word, n)?;
            let f = eta_image(&b, k)?;
            let words: Vec<String> = f.image_words().iter().map(|w| w.to_string()).collect();
            Outcome::ok(json!({
                "braid": b,
                "images": f,
                "image_words": words,
                "inner": f.is_inner()?,
                "identity": f.is_identity(),
            }))
        }
        BraidCmd::Search { n, k, max_len } => {
            if max_len == 0 {
                return Err(Failure::Usage("--max-len must be positive".into()));
            }
            let r = bounded_kernel_search(n, k, max_len)?;
            let empty = r.flagged.is_empty();
            Outcome::verdict(to_value(&r), empty)
        }
    })
}

fn dispatch(cli: Cli) -> Res<Outcome> {
    match cli.cmd {
        Cmd::Words(c) => run_words(c),
        Cmd::Symaut(c) => run_symaut(c),
        Cmd::Lift(c) => run_lift(c),
        Cmd::Kernel(c) => run_kernel(c),
        Cmd::Complex(c) => run_complex(c, cli.seed),
        Cmd::Braid(c) => run_braid(c),
        Cmd::Selftest { level, fault } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let opts = SelftestOptions {
                level,
                seed: cli.seed,
                fault: fault.map(Into::into),
            };
            let report = run_selftest_with_progress(opts, |c, t| {
                eprintln!("check {} {:<20} {} {:.2}s", c.criterion, c.name, if c.pass { "pass" } else { "FAIL" }, t.as_secs_f64());
            });
            for c in report.failures() {
                eprintln!("FAILED check {} ({})", c.criterion, c.name);
            }
            let pass = report.all_pass;
            Ok(Outcome::verdict(to_value(&report), pass))
        }
    }
}

fn with_schema(body: Value) -> Value {
    match body {
        Value::Object(mut m) => {
            m.insert("schema".into(), json!(SCHEMA));
            Value::Object(m)
        }
        other => json!({ "schema": SCHEMA, "results": other }),
    }
}

/// Write to stdout, ignoring a closed pipe.
fn write_stdout(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn emit_error(kind: &str, message: &str) -> ExitCode {
    let v = json!({ "schema": SCHEMA, "error": { "kind": kind, "message": message } });
    write_stdout(&format!("{}\n", serde_json::to_string_pretty(&v).expect("json")));
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            return emit_error("usage", msg.trim());
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            return emit_error("usage", "--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("thread pool is configured once");
    }
    let format = cli.format;
    let start = Instant::now();
    let outcome = match dispatch(cli) {
        Ok(o) => o,
        Err(Failure::Lib(e)) => return emit_error(e.kind(), &e.to_string()),
        Err(Failure::Usage(m)) => return emit_error("usage", &m),
    };
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match format {
        Format::Json => {
            write_stdout(&format!("{}\n", serde_json::to_string_pretty(&with_schema(outcome.body)).expect("json")));
        }
        Format::Dot => match outcome.dot {
            Some(d) => write_stdout(&d),
            None => return emit_error("usage", "this command has no DOT output"),
        },
    }
    ExitCode::from(outcome.code)
}
