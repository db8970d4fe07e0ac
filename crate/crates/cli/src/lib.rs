//! Command-line front end: argument parsing, output formatting and exit codes.
//!
//! Exit codes: 0 success, 1 negative answer under `--exit-status`, 2 usage
//! error, 3 cap or prime-policy exhaustion, 4 certificate failure.

pub mod input;
pub mod reproduce;

use std::ffi::OsString;
use std::fmt::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use provar::closures::{closure, dense, ClosureConfig, ClosureResult, PrimePolicy, Variety};
use provar::lattice::{fringe, intersect, join, FringeConfig};
use provar::modlin::abelian_image;
use provar::oracle::{closure_inconsistency, separation_status, Separation};
use provar::{Alphabet, Error, LabeledGraph, Word};

pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "provar", version, about = "Stallings graphs, pro-V denseness and closures in free groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Debug)]
struct Options {
    /// Generators: letters such as `ab`, or comma-separated symbols such as `x1,x2`.
    #[arg(short, long, global = true, default_value = "ab")]
    alphabet: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Subgroup file: one subgroup per line, words separated by commas, `#` comments.
    #[arg(short, long, global = true)]
    file: Option<String>,
    /// Base primes for nil and su, e.g. `2,3,5,7,11`.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Stop after this many primes leave the intersection unchanged.
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Largest prime tried after the base primes.
    #[arg(long, global = true)]
    max_prime: Option<u64>,
    /// Largest number of fringe members enumerated.
    #[arg(long, global = true)]
    fringe_cap: Option<usize>,
    /// Skip the Magnus-quotient and ascent cross-checks.
    #[arg(long, global = true)]
    no_cross_check: bool,
    /// Exit with 1 when the answer is negative.
    #[arg(long, global = true)]
    exit_status: bool,
    /// Print certificates and matrices.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fold generators into the canonical reduced graph.
    Fold { subgroups: Vec<String> },
    /// Test whether a word lies in each subgroup.
    Member {
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
        subgroups: Vec<String>,
    },
    /// Schreier transversal and basis for the BFS spanning tree.
    Schreier { subgroups: Vec<String> },
    /// Intersection of all given subgroups.
    Intersect { subgroups: Vec<String> },
    /// Subgroup generated by all given subgroups.
    Join { subgroups: Vec<String> },
    /// All overgroups whose graphs are quotients of the given one.
    Fringe { subgroups: Vec<String> },
    /// Decide denseness in the pro-V topology.
    Dense {
        #[arg(long)]
        variety: String,
        subgroups: Vec<String>,
    },
    /// Closure in the pro-V topology.
    Closure {
        #[arg(long)]
        variety: String,
        subgroups: Vec<String>,
    },
    /// Check a closure against finite groups of the variety.
    Verify {
        #[arg(long)]
        variety: String,
        /// Words to test against the closure (repeatable).
        #[arg(short, long, allow_hyphen_values = true)]
        word: Vec<String>,
        /// Largest catalog group used.
        #[arg(long, default_value_t = 24)]
        max_order: usize,
        subgroups: Vec<String>,
    },
    /// Write a graph, given by generators or by `--graph FILE`, as JSON or DOT.
    Export {
        /// Graph JSON to read instead of generators.
        #[arg(long)]
        graph: Option<String>,
        /// Destination file; standard output when absent.
        #[arg(short, long)]
        output: Option<String>,
        subgroups: Vec<String>,
    },
    /// Run the reproduction suite.
    Reproduce {
        /// Run a single check by name.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

/// Everything `run` produced.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::FringeCapExceeded { .. } | Error::OrderCapExceeded { .. } => EXIT_CAP,
            Error::CertificateFailure(_) => EXIT_CERTIFICATE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// Validated job, built before any computation starts.
struct Job {
    alphabet: Alphabet,
    subgroups: Vec<Vec<Word>>,
    /// Subgroups came from a file or several arguments, so JSON output is an array.
    many: bool,
    format: Format,
    policy: PrimePolicy,
    config: ClosureConfig,
    exit_status: bool,
    verbose: bool,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = String::new();
    match execute(cli, &mut out) {
        Ok(code) => Outcome { code, stdout: out, stderr: String::new() },
        Err(f) => Outcome { code: f.code, stdout: out, stderr: format!("error: {}\n", f.message) },
    }
}

fn parse_alphabet(text: &str) -> Result<Alphabet, Failure> {
    let a = if text.contains(',') {
        Alphabet::new(text.split(',').map(str::trim))
    } else {
        Alphabet::from_letters(text.trim())
    };
    Ok(a?)
}

fn build_job(opts: &Options, positional: &[String]) -> Result<Job, Failure> {
    let alphabet = parse_alphabet(&opts.alphabet)?;
    let mut subgroups = Vec::new();
    let mut many = positional.len() > 1;
    if let Some(path) = &opts.file {
        let contents =
            std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
        subgroups.extend(input::parse_file(&alphabet, &contents)?);
        many = true;
    }
    for text in positional {
        subgroups.push(input::parse_list(&alphabet, text)?);
    }
    let mut policy = PrimePolicy::default();
    if let Some(p) = &opts.primes {
        if p.is_empty() {
            return Err(usage("--primes needs at least one prime"));
        }
        policy.base_primes = p.clone();
    }
    if let Some(w) = opts.window {
        policy.stability_window = w;
    }
    if let Some(m) = opts.max_prime {
        policy.max_prime = m;
    }
    for &p in &policy.base_primes {
        Variety::Gp(p).validate()?;
    }
    let mut fringe_cfg = FringeConfig::default();
    if let Some(cap) = opts.fringe_cap {
        fringe_cfg.max_members = cap;
    }
    Ok(Job {
        alphabet,
        subgroups,
        many,
        format: opts.format,
        policy,
        config: ClosureConfig { fringe: fringe_cfg, cross_check: !opts.no_cross_check },
        exit_status: opts.exit_status,
        verbose: opts.verbose,
    })
}

impl Job {
    fn graphs(&self) -> Result<Vec<LabeledGraph>, Failure> {
        if self.subgroups.is_empty() {
            return Err(usage("no subgroup given: pass generators or --file"));
        }
        self.subgroups
            .iter()
            .map(|g| LabeledGraph::from_generators(g, &self.alphabet).map_err(Failure::from))
            .collect()
    }

    fn fmt_word(&self, w: &Word) -> String {
        self.alphabet.format(w)
    }

    fn fmt_words(&self, ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| self.fmt_word(w)).collect()
    }

    fn no_dot(&self, command: &str) -> Result<(), Failure> {
        if self.format == Format::Dot {
            return Err(usage(format!("--format dot is not available for {command}")));
        }
        Ok(())
    }

    /// Prints one JSON value per subgroup, as an array when there are several.
    fn emit_json(&self, out: &mut String, values: Vec<Value>) {
        let v = if self.many { Value::Array(values) } else { values.into_iter().next().unwrap_or(Value::Null) };
        out.push_str(&serde_json::to_string_pretty(&v).expect("json serializes"));
        out.push('\n');
    }

    fn emit_blocks(&self, out: &mut String, blocks: Vec<String>) {
        out.push_str(&blocks.join("\n"));
    }

    fn emit_graphs(&self, out: &mut String, graphs: &[LabeledGraph]) {
        match self.format {
            Format::Json => self.emit_json(out, graphs.iter().map(LabeledGraph::to_json).collect()),
            Format::Dot => graphs.iter().for_each(|g| out.push_str(&g.to_dot())),
            Format::Text => self.emit_blocks(out, graphs.iter().map(|g| self.graph_text(g)).collect()),
        }
    }

    fn graph_text(&self, g: &LabeledGraph) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "vertices: {}", g.vertex_count());
        let _ = writeln!(s, "edges: {}", g.edge_count());
        let _ = writeln!(s, "rank: {}", g.rank());
        let _ = writeln!(s, "index: {}", g.index());
        let _ = writeln!(s, "generators: {}", self.fmt_words(&g.generators()).join(", "));
        for e in g.edges() {
            let _ = writeln!(s, "  {} -{}-> {}", e.from, self.alphabet.symbol(e.label), e.to);
        }
        s
    }
}

fn execute(cli: Cli, out: &mut String) -> Result<i32, Failure> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Fold { subgroups } => {
            let job = build_job(opts, subgroups)?;
            let graphs = job.graphs()?;
            job.emit_graphs(out, &graphs);
            Ok(0)
        }
        Command::Member { word, subgroups } => {
            let job = build_job(opts, subgroups)?;
            job.no_dot("member")?;
            let w = input::parse_word(&job.alphabet, word)?;
            let answers: Vec<bool> = job.graphs()?.iter().map(|g| g.member(&w)).collect();
            match job.format {
                Format::Text => job.emit_blocks(out, answers.iter().map(|a| format!("{a}\n")).collect()),
                _ => job.emit_json(
                    out,
                    answers.iter().map(|&a| json!({"word": job.fmt_word(&w), "member": a})).collect(),
                ),
            }
            Ok(negative(&job, answers.iter().all(|&a| a)))
        }
        Command::Schreier { subgroups } => {
            let job = build_job(opts, subgroups)?;
            job.no_dot("schreier")?;
            let mut values = Vec::new();
            let mut blocks = Vec::new();
            for g in job.graphs()? {
                let s = g.schreier_bfs();
                let transversal = job.fmt_words(s.transversal());
                let basis: Vec<Value> = s
                    .basis()
                    .iter()
                    .map(|(id, w)| json!({"edge": id, "word": job.fmt_word(w)}))
                    .collect();
                let mut b = String::new();
                let _ = writeln!(b, "tree edges: {:?}", s.tree());
                for (v, t) in transversal.iter().enumerate() {
                    let _ = writeln!(b, "  T({v}) = {}", if t.is_empty() { "1" } else { t });
                }
                for (id, w) in s.basis() {
                    let _ = writeln!(b, "  edge {id}: {}", job.fmt_word(w));
                }
                blocks.push(b);
                values.push(json!({
                    "tree": s.tree(),
                    "transversal": transversal,
                    "basis": basis,
                }));
            }
            match job.format {
                Format::Text => job.emit_blocks(out, blocks),
                _ => job.emit_json(out, values),
            }
            Ok(0)
        }
        Command::Intersect { subgroups } | Command::Join { subgroups } => {
            let is_meet = matches!(cli.command, Command::Intersect { .. });
            let mut job = build_job(opts, subgroups)?;
            let graphs = job.graphs()?;
            if graphs.len() < 2 {
                return Err(usage("need at least two subgroups"));
            }
            let mut acc = graphs[0].clone();
            for g in &graphs[1..] {
                acc = if is_meet { intersect(&acc, g)? } else { join(&acc, g)? };
            }
            job.many = false;
            job.emit_graphs(out, &[acc]);
            Ok(0)
        }
        Command::Fringe { subgroups } => {
            let job = build_job(opts, subgroups)?;
            let mut values = Vec::new();
            let mut blocks = Vec::new();
            let mut dots = String::new();
            for g in job.graphs()? {
                let fr = fringe(&g, &job.config.fringe)?;
                values.push(fr.to_json());
                let mut b = format!("{} members\n", fr.len());
                for m in fr.graphs() {
                    let _ = writeln!(b, "  <{}>", job.fmt_words(&m.generators()).join(", "));
                    dots.push_str(&m.to_dot());
                }
                blocks.push(b);
            }
            match job.format {
                Format::Json => job.emit_json(out, values),
                Format::Text => job.emit_blocks(out, blocks),
                Format::Dot => out.push_str(&dots),
            }
            Ok(0)
        }
        Command::Dense { variety, subgroups } => {
            let job = build_job(opts, subgroups)?;
            job.no_dot("dense")?;
            let v: Variety = variety.parse()?;
            let mut all = true;
            let mut values = Vec::new();
            let mut blocks = Vec::new();
            for g in job.graphs()? {
                let verdict = dense(&g, v, &job.policy)?;
                all &= verdict.dense;
                let mut value = json!({
                    "variety": v.to_string(),
                    "dense": verdict.dense,
                    "status": verdict.status,
                    "primes_used": verdict.primes_used,
                });
                let mut b = format!("{}\n", verdict.dense);
                if job.verbose {
                    let _ = writeln!(b, "status: {}", verdict.status);
                    if !verdict.primes_used.is_empty() {
                        let _ = writeln!(b, "primes used: {:?}", verdict.primes_used);
                    }
                    if let Some(d) = abelian_modulus(v) {
                        let m = abelian_image(&g.generators(), job.alphabet.len(), d)?;
                        let _ = write!(b, "abelian image {m}");
                        if m.is_zero() {
                            let _ = writeln!(b, "  (zero)");
                        }
                        value["howell_rows"] = json!(m.rows());
                        value["howell_modulus"] = json!(d);
                    }
                }
                blocks.push(b);
                values.push(value);
            }
            match job.format {
                Format::Text => job.emit_blocks(out, blocks),
                _ => job.emit_json(out, values),
            }
            Ok(negative(&job, all))
        }
        Command::Closure { variety, subgroups } => {
            let job = build_job(opts, subgroups)?;
            let v: Variety = variety.parse()?;
            let mut results = Vec::new();
            for g in job.graphs()? {
                results.push(closure(&g, v, &job.policy, &job.config)?);
            }
            match job.format {
                Format::Json => job.emit_json(out, results.iter().map(ClosureResult::to_json).collect()),
                Format::Dot => results.iter().for_each(|r| out.push_str(&r.graph.to_dot())),
                Format::Text => {
                    job.emit_blocks(out, results.iter().map(|r| closure_text(&job, r)).collect())
                }
            }
            Ok(if results.iter().any(exhausted) { EXIT_CAP } else { 0 })
        }
        Command::Verify { variety, word, max_order, subgroups } => {
            let job = build_job(opts, subgroups)?;
            job.no_dot("verify")?;
            let v: Variety = variety.parse()?;
            let words: Vec<Word> =
                word.iter().map(|w| input::parse_word(&job.alphabet, w)).collect::<Result<_, _>>()?;
            let mut failed = false;
            let mut values = Vec::new();
            let mut blocks = Vec::new();
            for g in job.graphs()? {
                let lines = verify(&job, &g, v, &words, *max_order)?;
                failed |= lines.iter().any(|l| l.verdict == "FAIL");
                let mut b = String::new();
                for l in &lines {
                    let _ = writeln!(b, "{} {}{}", l.verdict, l.property, l.detail_suffix());
                }
                blocks.push(b);
                values.push(Value::Array(
                    lines
                        .iter()
                        .map(|l| json!({"property": l.property, "verdict": l.verdict, "detail": l.detail}))
                        .collect(),
                ));
            }
            match job.format {
                Format::Text => job.emit_blocks(out, blocks),
                _ => job.emit_json(out, values),
            }
            Ok(if failed { EXIT_CERTIFICATE } else { 0 })
        }
        Command::Export { graph, output, subgroups } => {
            let mut job = build_job(opts, subgroups)?;
            let graphs = match graph {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| usage(format!("cannot read {path}: {e}")))?;
                    job.many = false;
                    vec![LabeledGraph::from_json_str(&text)?]
                }
                None => job.graphs()?,
            };
            let mut text = String::new();
            job.emit_graphs(&mut text, &graphs);
            match output {
                Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {path}: {e}")))?,
                None => out.push_str(&text),
            }
            Ok(0)
        }
        Command::Reproduce { only, json } => {
            let outcomes = reproduce::run(only.as_deref()).map_err(usage)?;
            if *json {
                let v = json!({
                    "checks": outcomes,
                    "passed": outcomes.iter().filter(|o| o.pass).count(),
                    "failed": outcomes.iter().filter(|o| !o.pass).count(),
                });
                out.push_str(&serde_json::to_string_pretty(&v).expect("json serializes"));
                out.push('\n');
            } else {
                for o in &outcomes {
                    let _ = writeln!(
                        out,
                        "{} {:<18} expected: {}\n  {:<21} actual: {}",
                        if o.pass { "PASS" } else { "FAIL" },
                        o.name,
                        o.expected,
                        "",
                        o.actual
                    );
                }
            }
            Ok(if outcomes.iter().all(|o| o.pass) { 0 } else { EXIT_NEGATIVE })
        }
    }
}

fn negative(job: &Job, positive: bool) -> i32 {
    if job.exit_status && !positive {
        EXIT_NEGATIVE
    } else {
        0
    }
}

fn abelian_modulus(v: Variety) -> Option<u64> {
    match v {
        Variety::Ab(d) => Some(d),
        Variety::Gp(p) => Some(p),
        Variety::Hp(p) => Some(if p == 2 { 2 } else { p - 1 }),
        _ => None,
    }
}

fn exhausted(r: &ClosureResult) -> bool {
    r.certificates.iter().any(|c| c.starts_with("warning: policy exhausted"))
}

fn closure_text(job: &Job, r: &ClosureResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "variety: {}", r.variety);
    let _ = writeln!(s, "status: {}", r.status);
    if !r.primes_used.is_empty() {
        let _ = writeln!(s, "primes used: {:?}", r.primes_used);
    }
    let _ = writeln!(s, "generators: {}", job.fmt_words(&r.graph.generators()).join(", "));
    let _ = writeln!(s, "vertices: {}, rank: {}, index: {}", r.graph.vertex_count(), r.graph.rank(), r.graph.index());
    if job.verbose || exhausted(r) {
        for c in &r.certificates {
            let _ = writeln!(s, "  {c}");
        }
    }
    s
}

struct Line {
    property: String,
    verdict: &'static str,
    detail: String,
}

impl Line {
    fn detail_suffix(&self) -> String {
        if self.detail.is_empty() {
            String::new()
        } else {
            format!(": {}", self.detail)
        }
    }
}

/// Computes the closure of `g` and checks it against homomorphisms into the
/// catalog groups of `v`. Words outside the closure that no catalog group
/// separates are reported as `OPEN`, since their witness may be larger.
fn verify(job: &Job, g: &LabeledGraph, v: Variety, words: &[Word], max_order: usize) -> Result<Vec<Line>, Failure> {
    let line = |property: String, ok: bool, detail: String| Line {
        property,
        verdict: if ok { "PASS" } else { "FAIL" },
        detail,
    };
    let mut lines = Vec::new();
    let c = closure(g, v, &job.policy, &job.config)?;
    let c_gens = c.graph.generators();
    lines.push(line(
        format!("closure {} computed", v),
        true,
        format!("<{}> {}", job.fmt_words(&c_gens).join(", "), c.status),
    ));
    for cert in &c.certificates {
        match cert.strip_prefix("warning: ") {
            Some(rest) => lines.push(Line { property: rest.to_string(), verdict: "WARN", detail: String::new() }),
            None => lines.push(line(format!("certificate: {cert}"), true, String::new())),
        }
    }
    let h_gens = g.generators();
    let contains_h = h_gens.iter().all(|w| c.graph.member(w));
    lines.push(line("closure contains H".into(), contains_h, String::new()));
    let bad = closure_inconsistency(&h_gens, &c_gens, &job.alphabet, v, max_order)?;
    lines.push(line(
        format!("closure and H have equal images in catalog groups up to order {max_order}"),
        bad.is_none(),
        bad.map(|w| w.description).unwrap_or_default(),
    ));
    for w in words {
        let sep = separation_status(w, &h_gens, &job.alphabet, v, max_order)?;
        let name = job.fmt_word(w);
        if c.graph.member(w) {
            let ok = !matches!(sep, Separation::Separated(_));
            lines.push(line(format!("{name} in closure is not separated from H"), ok, sep.to_string()));
        } else {
            match sep {
                Separation::Separated(wit) => lines.push(line(
                    format!("{name} outside closure is separated from H"),
                    true,
                    wit.description,
                )),
                s => lines.push(Line {
                    property: format!("{name} outside closure is separated from H"),
                    verdict: "OPEN",
                    detail: s.to_string(),
                }),
            }
        }
    }
    Ok(lines)
}
