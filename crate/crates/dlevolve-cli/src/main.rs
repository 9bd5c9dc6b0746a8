use clap::{Args, Parser, Subcommand, ValueEnum};
use dlevolve::abox_evolution::{abox_maximal, careful_update, fast_contract, fast_expand};
use dlevolve::evolution::{self, EvolutionResult, Kind};
use dlevolve::finite_models::{check_disjunction_witness, mba_contract, mba_expand, Granularity, MbaConfig, Measure, ModelSet, Scope};
use dlevolve::generators::{self, Graph};
use dlevolve::io::{self, careful_json, kb_json, models_json, parse_assertion, print_kb, report_json, result_json};
use dlevolve::postulates::{self, PostulateReport, Verdict, Witness};
use dlevolve::reasoner;
use dlevolve::{Assertion, Error, KnowledgeBase};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dlevolve", version, about = "DL-Lite_FR reasoning and knowledge-base evolution")]
struct Cli {
    /// Print structured JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Refuse inputs that are not already closed instead of closing them.
    #[arg(long, global = true)]
    no_close: bool,
    /// Largest domain accepted by the finite-model commands.
    #[arg(long, global = true, env = "DLEVOLVE_MAX_DOMAIN", default_value_t = 5)]
    max_domain: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print cl(T) and cl_T(A).
    Closure { kb: PathBuf },
    Sat { kb: PathBuf },
    Coherent { kb: PathBuf },
    /// Does the KB entail an assertion, or every assertion of a second KB?
    Entails {
        kb: PathBuf,
        query: Option<PathBuf>,
        #[arg(long, conflicts_with = "query", required_unless_present = "query")]
        assertion: Option<String>,
    },
    Equiv { a: PathBuf, b: PathBuf },
    /// Formula-based expansion.
    Expand(Evolve),
    /// Formula-based contraction.
    Contract(Evolve),
    /// ABox expansion (the TBox is kept).
    AboxExpand(AboxArgs),
    /// ABox contraction (the TBox is kept).
    AboxContract(AboxArgs),
    /// Careful ABox update.
    CarefulUpdate(Pair),
    /// Is an assertion entailed by the WIDTIO result?
    WidtioMember {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        assertion: String,
        #[arg(long, value_enum, default_value_t = KindArg::Expansion)]
        kind: KindArg,
    },
    /// Model-based evolution over a bounded domain.
    Mba {
        #[arg(value_enum)]
        op: OpArg,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        mba: MbaArgs,
        /// How many models to list.
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Is the model-based result forced into phi or psi without entailing either?
    DisjunctionCheck {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long, value_enum, default_value_t = OpArg::Expand)]
        op: OpArg,
        #[command(flatten)]
        mba: MbaChoice,
    },
    /// Check the evolution postulates on one instance.
    Postulates {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Cp)]
        semantics: SemanticsArg,
        /// Second new information, for EP4.
        #[arg(long)]
        second: Option<PathBuf>,
        /// An equivalent KB, for EP5/CP5.
        #[arg(long, requires = "variant_new")]
        variant_kb: Option<PathBuf>,
        /// Equivalent new information, for EP5/CP5.
        #[arg(long, requires = "variant_kb")]
        variant_new: Option<PathBuf>,
        /// Kind of evolution for bold-family.
        #[arg(long, value_enum, default_value_t = KindArg::Expansion)]
        kind: KindArg,
        #[command(flatten)]
        mba: MbaArgs,
    },
    /// Generate a hardness instance.
    Gen {
        #[arg(value_enum)]
        what: GenKind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 4)]
        clauses: usize,
        #[arg(long, default_value_t = 5)]
        vertices: usize,
        #[arg(long, default_value_t = 0.4)]
        edge_prob: f64,
        #[arg(long, value_enum, default_value_t = VariantArg::Tbox)]
        variant: VariantArg,
        /// Write kb.dlkb, new.dlkb and the query into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is the subset K0 of K of maximum cardinality among the expansion members?
    MaxcardCheck {
        #[command(flatten)]
        pair: Pair,
        subset: PathBuf,
    },
}

#[derive(Args)]
struct Pair {
    kb: PathBuf,
    new: PathBuf,
}

#[derive(Args)]
struct Evolve {
    #[command(flatten)]
    pair: Pair,
    #[arg(long, value_enum)]
    semantics: FormulaSemantics,
    /// Order for the bold semantics: canonical, or the order of the KB file.
    #[arg(long, value_enum, default_value_t = OrderArg::Lex)]
    order: OrderArg,
}

#[derive(Args)]
struct AboxArgs {
    #[command(flatten)]
    pair: Pair,
    #[arg(long, value_enum, default_value_t = AboxMethod::Fast)]
    method: AboxMethod,
}

#[derive(Args)]
struct MbaArgs {
    #[arg(long, value_enum, default_value_t = ScopeArg::Local)]
    scope: ScopeArg,
    #[arg(long, value_enum, default_value_t = GranArg::Atoms)]
    granularity: GranArg,
    #[arg(long, value_enum, default_value_t = MeasureArg::Set)]
    measure: MeasureArg,
    #[arg(long, default_value_t = 2)]
    domain_size: usize,
    /// ABox evolution: keep the TBox fixed.
    #[arg(long)]
    abox: bool,
}

/// Unset choices range over every value.
#[derive(Args)]
struct MbaChoice {
    #[arg(long, value_enum)]
    scope: Option<ScopeArg>,
    #[arg(long, value_enum)]
    granularity: Option<GranArg>,
    #[arg(long, value_enum)]
    measure: Option<MeasureArg>,
    #[arg(long, default_value_t = 2)]
    domain_size: usize,
    #[arg(long)]
    abox: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaSemantics {
    Bold,
    Widtio,
    Cp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SemanticsArg {
    Bold,
    Widtio,
    Cp,
    Mba,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Lex,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum AboxMethod {
    Fast,
    Maximal,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Expansion,
    Contraction,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Expand,
    Contract,
}

impl KindArg {
    fn kind(self) -> Kind {
        match self {
            KindArg::Expansion => Kind::Expansion,
            KindArg::Contraction => Kind::Contraction,
        }
    }
}

impl OpArg {
    fn kind(self) -> Kind {
        match self {
            OpArg::Expand => Kind::Expansion,
            OpArg::Contract => Kind::Contraction,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Expansion,
    Contraction,
    BoldFamily,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Local,
    Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum GranArg {
    Atoms,
    Symbols,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Set,
    Card,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    #[value(name = "widtio-3sat")]
    Widtio3sat,
    IndepSet,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Tbox,
    Abox,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Local => Scope::Local,
            ScopeArg::Global => Scope::Global,
        }
    }
}

impl From<GranArg> for Granularity {
    fn from(g: GranArg) -> Self {
        match g {
            GranArg::Atoms => Granularity::Atoms,
            GranArg::Symbols => Granularity::Symbols,
        }
    }
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Set => Measure::Set,
            MeasureArg::Card => Measure::Card,
        }
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Validation(_) => Failure::Usage(e.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Ctx {
    json: bool,
    no_close: bool,
    max_domain: usize,
}

fn read_text(path: &Path) -> Res<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_kb(path: &Path) -> Res<KnowledgeBase> {
    let text = read_text(path)?;
    io::parse_kb(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn assertion(text: &str) -> Res<Assertion> {
    parse_assertion(text).map_err(|e| Failure::Usage(format!("{text:?}: {e}")))
}

/// Smallest-by-deletion unsatisfiable subset, for error messages.
fn conflict(kb: &KnowledgeBase) -> Vec<Assertion> {
    let mut core = kb.clone();
    for a in kb.canonical_order() {
        let mut smaller = KnowledgeBase::new(core.signature.clone());
        for b in core.assertions().into_iter().filter(|b| *b != a) {
            smaller.insert(b);
        }
        if reasoner::is_satisfiable(&smaller) == Ok(false) {
            core = smaller;
        }
    }
    core.canonical_order()
}

fn unsat_failure(path: &Path, kb: &KnowledgeBase) -> Failure {
    let c: Vec<String> = conflict(kb).iter().map(|a| a.to_string()).collect();
    Failure::Domain(format!("{}: knowledge base is unsatisfiable; conflicting assertions: {}", path.display(), c.join("; ")))
}

fn require_sat(path: &Path, kb: &KnowledgeBase) -> Res<()> {
    if reasoner::is_satisfiable(kb)? {
        Ok(())
    } else {
        Err(unsat_failure(path, kb))
    }
}

impl Ctx {
    /// Reads an input KB and closes it, or checks that it is closed under `--no-close`.
    fn closed_kb(&self, path: &Path) -> Res<KnowledgeBase> {
        let kb = read_kb(path)?;
        require_sat(path, &kb)?;
        if self.no_close {
            return match reasoner::missing_from_closure(&kb) {
                Some(a) => Err(Failure::Domain(format!("{}: input is not closed: missing {a}", path.display()))),
                None => Ok(kb),
            };
        }
        let closed = reasoner::close_kb(&kb)?;
        let added = closed.len() - kb.len();
        if added > 0 {
            eprintln!("note: closed {} (+{added} assertions)", path.display());
        }
        Ok(closed)
    }

    fn domain(&self, d: usize) -> Res<usize> {
        if d > self.max_domain {
            return Err(Failure::Domain(format!("domain size {d} exceeds DLEVOLVE_MAX_DOMAIN={}", self.max_domain)));
        }
        Ok(d)
    }

    fn emit(&self, text: String, value: Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        } else {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }

    fn verdict(&self, key: &str, yes: bool, word_yes: &str, word_no: &str) {
        self.emit((if yes { word_yes } else { word_no }).to_string(), json!({ key: yes }));
    }
}

fn file_order(path: &Path, kb: &KnowledgeBase) -> Res<Vec<Assertion>> {
    let text = read_text(path)?;
    let mut order: Vec<Assertion> = Vec::new();
    for line in text.lines() {
        let body = line.split('#').next().unwrap_or("").trim();
        let first = body.split_whitespace().next().unwrap_or("");
        if body.is_empty() || ["concept", "role", "const"].contains(&first) {
            continue;
        }
        let a = assertion(body)?;
        if kb.contains(&a) && !order.contains(&a) {
            order.push(a);
        }
    }
    for a in kb.canonical_order() {
        if !order.contains(&a) {
            order.push(a);
        }
    }
    Ok(order)
}

fn result_text(r: &EvolutionResult) -> String {
    let mut out = String::new();
    let members = r.members();
    for (i, (m, dropped)) in members.iter().zip(&r.dropped).enumerate() {
        if members.len() > 1 {
            out.push_str(&format!("# member {} of {}\n", i + 1, members.len()));
        }
        for d in dropped {
            out.push_str(&format!("# dropped {d}\n"));
        }
        out.push_str(&print_kb(m));
    }
    out
}

fn mba_config(a: &MbaArgs, ctx: &Ctx) -> Res<MbaConfig> {
    let cfg = MbaConfig::new(a.scope.into(), a.granularity.into(), a.measure.into(), ctx.domain(a.domain_size)?);
    Ok(if a.abox { cfg.abox() } else { cfg })
}

fn mba_configs(c: &MbaChoice, ctx: &Ctx) -> Res<Vec<MbaConfig>> {
    let d = ctx.domain(c.domain_size)?;
    Ok(MbaConfig::all(d)
        .into_iter()
        .filter(|cfg| c.scope.is_none_or(|s| cfg.scope == s.into()))
        .filter(|cfg| c.granularity.is_none_or(|g| cfg.granularity == g.into()))
        .filter(|cfg| c.measure.is_none_or(|m| cfg.measure == m.into()))
        .map(|cfg| if c.abox { cfg.abox() } else { cfg })
        .collect())
}

fn run_mba(kind: Kind, k: &KnowledgeBase, n: &KnowledgeBase, cfg: &MbaConfig) -> Res<ModelSet> {
    Ok(match kind {
        Kind::Expansion => mba_expand(k, n, cfg)?,
        Kind::Contraction => mba_contract(k, n, cfg)?,
    })
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Assertion(a) => a.to_string(),
        Witness::Symbol(s) => format!("symbol {s} is empty in every model"),
        Witness::Kb(k) => format!("{{{}}}", k.canonical_order().iter().map(|a| a.to_string()).collect::<Vec<_>>().join("; ")),
        Witness::KbPair(a, b) => format!("{} vs {}", witness_text(&Witness::Kb(a.clone())), witness_text(&Witness::Kb(b.clone()))),
        Witness::Model(j) => format!("model {j}"),
    }
}

fn report_text(r: &PostulateReport) -> String {
    let mut out = format!("# {} {}\n", r.operator, r.instance);
    for (name, v) in &r.verdicts {
        let line = match v {
            Verdict::Holds => format!("{name} holds"),
            Verdict::Fails(w) => format!("{name} fails: {}", witness_text(w)),
            Verdict::NotApplicable(why) => format!("{name} not applicable: {why}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    for n in &r.notes {
        out.push_str(&format!("# {n}\n"));
    }
    out
}

fn members(r: &EvolutionResult) -> Vec<KnowledgeBase> {
    r.members().into_iter().cloned().collect()
}

fn formula_result(sem: SemanticsArg, k: &KnowledgeBase, n: &KnowledgeBase, kind: Kind) -> Res<EvolutionResult> {
    Ok(match (sem, kind) {
        (SemanticsArg::Cp, _) => evolution::cp(k, n, kind)?,
        (SemanticsArg::Widtio, _) => evolution::widtio(k, n, kind)?,
        (SemanticsArg::Bold, Kind::Expansion) => evolution::bold_expand(k, n, None)?,
        (SemanticsArg::Bold, Kind::Contraction) => evolution::bold_contract(k, n, None)?,
        (SemanticsArg::Mba, _) => unreachable!("model-based semantics has no formula result"),
    })
}

fn sem_name(s: SemanticsArg) -> &'static str {
    match s {
        SemanticsArg::Bold => "bold",
        SemanticsArg::Widtio => "widtio",
        SemanticsArg::Cp => "cp",
        SemanticsArg::Mba => "mba",
    }
}

#[allow(clippy::too_many_arguments)]
fn postulates_cmd(
    ctx: &Ctx,
    which: Which,
    pair: &Pair,
    semantics: SemanticsArg,
    second: Option<&Path>,
    variant: Option<(&Path, &Path)>,
    kind: KindArg,
    mba: &MbaArgs,
) -> Res<()> {
    let k = ctx.closed_kb(&pair.kb)?;
    let n = read_kb(&pair.new)?;
    let n2 = second.map(read_kb).transpose()?;
    let var = match variant {
        Some((a, b)) => Some((ctx.closed_kb(a)?, read_kb(b)?)),
        None => None,
    };
    let rep = match which {
        Which::BoldFamily => {
            postulates::check_bold_family(&k, &n, n2.as_ref(), var.as_ref().map(|(a, b)| (a, b)), kind.kind())?
        }
        Which::Expansion | Which::Contraction => {
            let kind = if matches!(which, Which::Expansion) { Kind::Expansion } else { Kind::Contraction };
            if semantics == SemanticsArg::Mba {
                let cfg = mba_config(mba, ctx)?;
                let mut rep = match kind {
                    Kind::Expansion => postulates::check_mba_expansion(&k, &n, &cfg)?,
                    Kind::Contraction => postulates::check_mba_contraction(&k, &n, &cfg)?,
                };
                if let (Kind::Expansion, Some(n2)) = (kind, &n2) {
                    rep.push("EP4", postulates::check_mba_ep4(&k, &n, n2, &cfg)?);
                }
                if let Some((k2, nb)) = &var {
                    let name = if kind == Kind::Expansion { "EP5" } else { "CP5" };
                    rep.push(name, postulates::check_mba_syntax(&k, &n, k2, nb, &cfg, kind)?);
                }
                rep
            } else {
                let r = members(&formula_result(semantics, &k, &n, kind)?);
                let mut rep = match kind {
                    Kind::Expansion => postulates::check_expansion(&k, &n, &r, sem_name(semantics))?,
                    Kind::Contraction => postulates::check_contraction(&k, &n, &r, sem_name(semantics))?,
                };
                if let (Kind::Expansion, Some(n2)) = (kind, &n2) {
                    let r12 = members(&formula_result(semantics, &k, &n.union(n2), kind)?);
                    rep.push("EP4", postulates::check_ep4(&k, &n, n2, &r, &r12)?);
                }
                if let Some((k2, nb)) = &var {
                    let rv = members(&formula_result(semantics, k2, nb, kind)?);
                    let name = if kind == Kind::Expansion { "EP5" } else { "CP5" };
                    rep.push(name, postulates::check_ep5(&k, &n, &r, k2, nb, &rv)?);
                }
                rep
            }
        }
    };
    ctx.emit(report_text(&rep), report_json(&rep));
    Ok(())
}

fn write_out(dir: &Path, name: &str, text: &str) -> Res<()> {
    fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let p = dir.join(name);
    fs::write(&p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
}

fn graph_text(g: &Graph) -> String {
    let edges: Vec<String> = g.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("{} vertices, edges {}", g.vertices, if edges.is_empty() { "none".into() } else { edges.join(" ") })
}

#[allow(clippy::too_many_arguments)]
fn gen_cmd(
    ctx: &Ctx,
    what: GenKind,
    seed: u64,
    vars: usize,
    clauses: usize,
    vertices: usize,
    p: f64,
    variant: VariantArg,
    out: Option<&Path>,
) -> Res<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Failure::Usage(format!("--edge-prob {p} is not a probability")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (k, n, header, extra) = match what {
        GenKind::Widtio3sat => {
            if vars == 0 || clauses < 2 {
                return Err(Failure::Usage("need at least one variable and two clauses".into()));
            }
            let psi = generators::random_cnf3(&mut rng, vars, clauses);
            let sat = generators::brute_sat(&psi)?;
            let inst = generators::gen_widtio_instance(&psi)?;
            let header = format!("# seed {seed}\n# formula {psi}\n# satisfiable {sat}\n# query {}\n", inst.phi);
            let extra = json!({"formula": psi.to_string(), "satisfiable": sat, "query": inst.phi.to_string()});
            if let Some(dir) = out {
                write_out(dir, "query.txt", &format!("{}\n", inst.phi))?;
            }
            (inst.kb, inst.n, header, extra)
        }
        GenKind::IndepSet => {
            if vertices == 0 || vertices > 20 {
                return Err(Failure::Usage("--vertices must be between 1 and 20".into()));
            }
            let g = generators::random_graph(&mut rng, vertices, p);
            let best = generators::max_independent_set(&g)?;
            let v = match variant {
                VariantArg::Tbox => generators::Variant::Tbox,
                VariantArg::Abox => generators::Variant::Abox,
            };
            let (k, n) = generators::gen_indepset_instance(&g, v);
            let header = format!("# seed {seed}\n# graph {}\n# maximum independent set {best}\n", graph_text(&g));
            let edges: Vec<[usize; 2]> = g.edges.iter().map(|&(a, b)| [a, b]).collect();
            let extra = json!({"vertices": g.vertices, "edges": edges, "max_independent_set": best});
            (k, n, header, extra)
        }
    };
    if let Some(dir) = out {
        write_out(dir, "kb.dlkb", &print_kb(&k))?;
        write_out(dir, "new.dlkb", &print_kb(&n))?;
    }
    let mut text = header;
    if out.is_none() {
        text.push_str("# knowledge base\n");
        text.push_str(&print_kb(&k));
        text.push_str("# new information\n");
        text.push_str(&print_kb(&n));
    }
    let mut v = json!({"seed": seed, "kb": kb_json(&k), "new": kb_json(&n)});
    v.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
    ctx.emit(text, v);
    Ok(())
}

fn run(cli: Cli) -> Res<()> {
    let ctx = Ctx { json: cli.json, no_close: cli.no_close, max_domain: cli.max_domain };
    match cli.cmd {
        Cmd::Closure { kb } => {
            let k = read_kb(&kb)?;
            require_sat(&kb, &k)?;
            let c = reasoner::close_kb(&k)?;
            ctx.emit(print_kb(&c), kb_json(&c));
        }
        Cmd::Sat { kb } => {
            let k = read_kb(&kb)?;
            ctx.verdict("satisfiable", reasoner::is_satisfiable(&k)?, "satisfiable", "unsatisfiable");
        }
        Cmd::Coherent { kb } => {
            let k = read_kb(&kb)?;
            ctx.verdict("coherent", reasoner::is_coherent(&k)?, "coherent", "incoherent");
        }
        Cmd::Entails { kb, query, assertion: a } => {
            let k = read_kb(&kb)?;
            require_sat(&kb, &k)?;
            let yes = match (query, a) {
                (Some(q), _) => reasoner::entails_kb(&k, &read_kb(&q)?)?,
                (None, Some(a)) => reasoner::entails_assertion(&k, &assertion(&a)?)?,
                (None, None) => unreachable!("clap requires a query"),
            };
            ctx.verdict("entailed", yes, "entailed", "not entailed");
        }
        Cmd::Equiv { a, b } => {
            let (ka, kb) = (read_kb(&a)?, read_kb(&b)?);
            require_sat(&a, &ka)?;
            require_sat(&b, &kb)?;
            ctx.verdict("equivalent", reasoner::kb_equivalent(&ka, &kb)?, "equivalent", "not equivalent");
        }
        Cmd::Expand(e) => evolve_cmd(&ctx, &e, Kind::Expansion)?,
        Cmd::Contract(e) => evolve_cmd(&ctx, &e, Kind::Contraction)?,
        Cmd::AboxExpand(a) => abox_cmd(&ctx, &a, Kind::Expansion)?,
        Cmd::AboxContract(a) => abox_cmd(&ctx, &a, Kind::Contraction)?,
        Cmd::CarefulUpdate(p) => {
            let k = ctx.closed_kb(&p.kb)?;
            let r = careful_update(&k, &read_kb(&p.new)?)?;
            let mut text = String::new();
            for d in &r.dropped {
                text.push_str(&format!("# dropped {}: {}\n", d.assertion, d.reason));
            }
            text.push_str(&print_kb(&r.result));
            ctx.emit(text, careful_json(&r));
        }
        Cmd::WidtioMember { pair, assertion: a, kind } => {
            let k = ctx.closed_kb(&pair.kb)?;
            let n = read_kb(&pair.new)?;
            let yes = evolution::widtio_member(&k, &n, kind.kind(), &assertion(&a)?)?;
            ctx.verdict("member", yes, "member", "not member");
        }
        Cmd::Mba { op, pair, mba, limit } => {
            let cfg = mba_config(&mba, &ctx)?;
            let k = read_kb(&pair.kb)?;
            require_sat(&pair.kb, &k)?;
            let ms = run_mba(op.kind(), &k, &read_kb(&pair.new)?, &cfg)?;
            let all = ms.interpretations()?;
            let mut text = format!("# {cfg}: {} models over {{{}}}\n", all.len(), ms.universe.domain.join(", "));
            for j in all.iter().take(limit) {
                text.push_str(&format!("{j}\n"));
            }
            if all.len() > limit {
                text.push_str(&format!("# {} more\n", all.len() - limit));
            }
            let mut v = models_json(&ms, limit)?;
            v["config"] = json!(cfg.to_string());
            ctx.emit(text, v);
        }
        Cmd::DisjunctionCheck { pair, phi, psi, op, mba } => {
            let k = read_kb(&pair.kb)?;
            require_sat(&pair.kb, &k)?;
            let n = read_kb(&pair.new)?;
            let (phi, psi) = (assertion(&phi)?, assertion(&psi)?);
            let mut text = String::new();
            let mut rows = Vec::new();
            for cfg in mba_configs(&mba, &ctx)? {
                let ms = run_mba(op.kind(), &k, &n, &cfg)?;
                let w = check_disjunction_witness(&ms, &phi, &psi)?;
                text.push_str(&format!("{cfg} {}\n", if w { "witness" } else { "no witness" }));
                rows.push(json!({"config": cfg.to_string(), "witness": w}));
            }
            ctx.emit(text, json!({"phi": phi.to_string(), "psi": psi.to_string(), "results": rows}));
        }
        Cmd::Postulates { which, pair, semantics, second, variant_kb, variant_new, kind, mba } => {
            let variant = variant_kb.as_deref().zip(variant_new.as_deref());
            postulates_cmd(&ctx, which, &pair, semantics, second.as_deref(), variant, kind, &mba)?;
        }
        Cmd::Gen { what, seed, vars, clauses, vertices, edge_prob, variant, out } => {
            gen_cmd(&ctx, what, seed, vars, clauses, vertices, edge_prob, variant, out.as_deref())?;
        }
        Cmd::MaxcardCheck { pair, subset } => {
            let k = ctx.closed_kb(&pair.kb)?;
            let n = read_kb(&pair.new)?;
            let mut k0 = read_kb(&subset)?;
            k0.signature = k0.signature.union(&k.signature);
            let yes = evolution::is_max_cardinality_member(&k, &n, &k0)?;
            ctx.verdict("maximum", yes, "maximum cardinality", "not maximum cardinality");
        }
    }
    Ok(())
}

fn evolve_cmd(ctx: &Ctx, e: &Evolve, kind: Kind) -> Res<()> {
    let k = ctx.closed_kb(&e.pair.kb)?;
    let n = read_kb(&e.pair.new)?;
    let order = match e.order {
        OrderArg::Lex => None,
        OrderArg::File => Some(file_order(&e.pair.kb, &k)?),
    };
    let r = match (e.semantics, kind) {
        (FormulaSemantics::Cp, _) => evolution::cp(&k, &n, kind)?,
        (FormulaSemantics::Widtio, _) => evolution::widtio(&k, &n, kind)?,
        (FormulaSemantics::Bold, Kind::Expansion) => evolution::bold_expand(&k, &n, order.as_deref())?,
        (FormulaSemantics::Bold, Kind::Contraction) => evolution::bold_contract(&k, &n, order.as_deref())?,
    };
    ctx.emit(result_text(&r), result_json(&r));
    Ok(())
}

fn abox_cmd(ctx: &Ctx, a: &AboxArgs, kind: Kind) -> Res<()> {
    let k = ctx.closed_kb(&a.pair.kb)?;
    let n = read_kb(&a.pair.new)?;
    let r = match (a.method, kind) {
        (AboxMethod::Fast, Kind::Expansion) => fast_expand(&k, &n)?,
        (AboxMethod::Fast, Kind::Contraction) => fast_contract(&k, &n)?,
        (AboxMethod::Maximal, Kind::Expansion) => abox_maximal(&k, &n, kind)?.union(&n),
        (AboxMethod::Maximal, Kind::Contraction) => abox_maximal(&k, &n, kind)?,
    };
    ctx.emit(print_kb(&r), kb_json(&r));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
