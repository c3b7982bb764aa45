//! Command-line front end: argument parsing, subcommand dispatch and report
//! output. [`run`] returns the process exit code: 0 on success, 1 when a
//! violation or verification failure is found, 2 on usage or input errors.

mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use spectral_factor::extremal::{build_extremal, case_two_range, threshold_adjacency, threshold_signless, ExtremalSpec};
use spectral_factor::factor::{has_factor_with, NAIVE_MAX_ORDER};
use spectral_factor::graph6::{from_graph6, read_corpus};
use spectral_factor::spectra::{MatrixKind, DEFAULT_GAP_TOL, DEFAULT_TOL};
use spectral_factor::trees::{enumerate_trees, in_tree_family, MAX_TREE_ORDER};
use spectral_factor::verify::{
    chain_check_adjacency, chain_check_q, random_scan, separation_scan, threshold_for, verify_theorem_instance,
    Outcome, VerificationReport, VerifyConfig,
};
use spectral_factor::{FamilyParams, Graph, Strategy};

pub use report::{round12, Report, TOOL_VERSION};
use report::{
    FactorRecord, GraphRecord, LineRecord, Params, SpectraRecord, StepRecord, SummaryRecord, ThresholdRecord,
};

#[derive(Debug, Parser)]
#[command(name = "spectral-factor", version, about = "Factor criterion, spectral radii and extremal-graph checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Adjacency and signless Laplacian spectral radii with closed-form bounds
    Spectra(Common),
    /// Decide factor existence and print a violating set if there is one
    Check(Common),
    /// Build the extremal graph G1(s) with its certificate and order thresholds
    Extremal(Common),
    /// Enumerate free trees on n vertices with their family membership
    Trees(Common),
    /// Replay the spectral conditions
    Verify(Common),
    /// Process a newline-delimited graph6 corpus
    Scan(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Instance,
    Separation,
    Chain,
    RandomScan,
}

#[derive(Debug, Clone, Args)]
struct Common {
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    delta: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    graph6: Option<String>,
    /// graph6 file; the first graph is used except by `scan`
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
    gap_tol: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random graphs for `verify --mode random-scan`
    #[arg(long, default_value_t = 100)]
    count: u64,
    /// Use exhaustive subset enumeration instead of the pruned search
    #[arg(long)]
    naive: bool,
    /// Largest graph order accepted by the factor checker
    #[arg(long, default_value_t = 256)]
    max_order: usize,
    #[arg(long, value_enum)]
    mode: Option<VerifyMode>,
}

/// A usage or input error (exit 2).
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<(Report, i32), UsageError>;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

impl Common {
    fn validate(&self) -> Result<(), UsageError> {
        if !(self.tol > 0.0 && self.gap_tol > 0.0) {
            return Err(usage("tolerances must be positive"));
        }
        if self.max_order == 0 {
            return Err(usage("--max-order must be at least 1"));
        }
        Ok(())
    }

    fn family(&self) -> Result<FamilyParams, UsageError> {
        match (self.k, self.r) {
            (Some(k), Some(r)) => Ok(FamilyParams::new(k, r)?),
            _ => Err(usage("--k and --r are required")),
        }
    }

    fn require(&self, value: Option<u64>, flag: &str) -> Result<u64, UsageError> {
        value.ok_or_else(|| usage(format!("--{flag} is required")))
    }

    fn params(&self) -> Params {
        Params {
            k: self.k,
            r: self.r,
            delta: self.delta,
            n: self.n,
            s: self.s,
        }
    }

    fn strategy(&self) -> Strategy {
        if self.naive {
            Strategy::Naive
        } else {
            Strategy::Pruned
        }
    }

    fn config(&self) -> VerifyConfig {
        VerifyConfig {
            eig_tol: self.tol,
            gap_tol: self.gap_tol,
            ..VerifyConfig::default()
        }
    }

    /// The graph from `--graph6`, or the first line of `--input`.
    fn graph(&self) -> Result<Graph, UsageError> {
        if let Some(text) = &self.graph6 {
            return Ok(from_graph6(text)?);
        }
        let path = self.input.as_ref().ok_or_else(|| usage("--graph6 or --input is required"))?;
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let entry = read_corpus(&text)
            .into_iter()
            .next()
            .ok_or_else(|| usage(format!("{}: no graph found", path.display())))?;
        entry.graph.map_err(|e| usage(format!("{}:{}: {e}", path.display(), entry.line)))
    }

    fn factor_cap(&self) -> usize {
        if self.naive {
            self.max_order.min(NAIVE_MAX_ORDER)
        } else {
            self.max_order
        }
    }
}

/// Runs the CLI on `argv` (including the program name), writing the report
/// to standard output or `--out`.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = writeln!(err, "{}", rendered.lines().next().unwrap_or("error"));
            }
            return code;
        }
    };
    let common = match &cli.command {
        Command::Spectra(c)
        | Command::Check(c)
        | Command::Extremal(c)
        | Command::Trees(c)
        | Command::Verify(c)
        | Command::Scan(c) => c.clone(),
    };
    let result = common.validate().and_then(|_| match cli.command {
        Command::Spectra(c) => spectra(&c),
        Command::Check(c) => check(&c),
        Command::Extremal(c) => extremal(&c),
        Command::Trees(c) => trees(&c),
        Command::Verify(c) => verify(&c),
        Command::Scan(c) => scan(&c),
    });
    let (report, code) = match result {
        Ok(r) => r,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {}", msg.lines().next().unwrap_or(""));
            return 2;
        }
    };
    let rendered = match common.format {
        Format::Json => Ok(report.to_json() + "\n"),
        Format::Csv => report.to_csv(),
        Format::Text => Ok(report.to_text()),
    };
    let rendered = match rendered {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let written = match &common.out {
        Some(path) => fs::write(path, rendered).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(rendered.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    code
}

fn spectra(c: &Common) -> CmdResult {
    let g = c.graph()?;
    let mut rep = Report::new("spectra", c.params());
    rep.graph = Some(GraphRecord::of(&g)?);
    rep.spectra = Some(SpectraRecord::of(&g, c.tol)?);
    Ok((rep, 0))
}

fn check(c: &Common) -> CmdResult {
    let p = c.family()?;
    let g = c.graph()?;
    if g.order() > c.factor_cap() {
        return Err(usage(format!("order {} exceeds --max-order {}", g.order(), c.factor_cap())));
    }
    let verdict = has_factor_with(&g, p, c.strategy())?;
    let mut rep = Report::new("check", c.params());
    rep.graph = Some(GraphRecord::of(&g)?);
    rep.factor = Some(FactorRecord::of(&verdict));
    let code = if verdict.has_factor() {
        0
    } else {
        rep.overall = "violation".into();
        1
    };
    Ok((rep, code))
}

fn extremal(c: &Common) -> CmdResult {
    let p = c.family()?;
    let n = c.require(c.n, "n")?;
    let s = c.s.or(c.delta).ok_or_else(|| usage("--delta or --s is required"))?;
    let spec = ExtremalSpec::new(n, s, p)?;
    let g = build_extremal(&spec);
    let mut params = c.params();
    params.s = Some(s);
    params.delta = Some(c.delta.unwrap_or(s));
    let delta = params.delta.unwrap();
    let mut rep = Report::new("extremal", params);
    rep.graph = Some(GraphRecord::of(&g)?);
    rep.spectra = Some(SpectraRecord::of(&g, c.tol)?);
    rep.factor = Some(FactorRecord::of(&has_factor_with(&g, p, c.strategy())?));
    rep.thresholds = Some(ThresholdRecord::of(&threshold_adjacency(delta, p)?, &threshold_signless(delta, p)?));
    Ok((rep, 0))
}

fn trees(c: &Common) -> CmdResult {
    let p = c.family()?;
    let n = c.require(c.n, "n")? as usize;
    if n > MAX_TREE_ORDER.min(c.max_order) {
        return Err(usage(format!("tree enumeration is limited to n <= {}", MAX_TREE_ORDER.min(c.max_order))));
    }
    let all = enumerate_trees(n)?;
    let classified: Vec<Result<bool, String>> = all
        .par_iter()
        .map(|t| in_tree_family(t, p).map(|c| c.member).map_err(|e| e.to_string()))
        .collect();
    let mut records = Vec::new();
    let mut members = 0;
    for (i, (t, member)) in all.iter().zip(classified).enumerate() {
        let member = member?;
        members += usize::from(member);
        let g = GraphRecord::of(t)?;
        records.push(LineRecord {
            line: i + 1,
            graph6: g.graph6,
            n: Some(g.n),
            edges: Some(g.edges),
            min_degree: g.min_degree,
            connected: Some(true),
            verdict: Some(if member { "member" } else { "non-member" }.into()),
            ..LineRecord::default()
        });
    }
    let mut rep = Report::new("trees", c.params());
    rep.notes.push(format!("{} trees, {members} members", records.len()));
    rep.records = Some(records);
    Ok((rep, 0))
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
        Outcome::NotApplicable => "not-applicable",
        Outcome::Boundary => "boundary",
    }
}

/// Folds several verification outcomes: any fail fails, then any pass
/// passes, then boundary, then not-applicable.
fn combine(outcomes: &[Outcome]) -> Outcome {
    for o in [Outcome::Fail, Outcome::Pass, Outcome::Boundary] {
        if outcomes.contains(&o) {
            return o;
        }
    }
    Outcome::NotApplicable
}

fn absorb(rep: &mut Report, sub: &VerificationReport, prefix: &str) {
    rep.steps.extend(sub.steps.iter().map(|s| StepRecord::of(s, prefix)));
    rep.notes.extend(sub.notes.iter().map(|n| format!("{prefix}{n}")));
    if let Some(c) = &sub.counterexample {
        rep.notes.push(format!("{prefix}counterexample {}", c.graph6));
    }
}

fn finish(mut rep: Report, outcomes: &[Outcome]) -> CmdResult {
    let overall = combine(outcomes);
    rep.overall = outcome_name(overall).into();
    Ok((rep, if overall == Outcome::Fail { 1 } else { 0 }))
}

fn verify(c: &Common) -> CmdResult {
    let mode = c.mode.ok_or_else(|| usage("--mode is required (instance, separation, chain, random-scan)"))?;
    let p = c.family()?;
    let cfg = c.config();
    match mode {
        VerifyMode::Instance => {
            let g = c.graph()?;
            let delta = match c.delta {
                Some(d) => d,
                None => g.min_degree().ok_or_else(|| usage("empty graph"))? as u64,
            };
            let mut params = c.params();
            params.delta = Some(delta);
            params.n = Some(g.order() as u64);
            let mut rep = Report::new("verify-instance", params);
            rep.graph = Some(GraphRecord::of(&g)?);
            rep.spectra = Some(SpectraRecord::of(&g, c.tol)?);
            let mut outcomes = Vec::new();
            for (kind, prefix) in [(MatrixKind::Adjacency, "adjacency: "), (MatrixKind::SignlessLaplacian, "signless: ")] {
                let sub = verify_theorem_instance(&g, delta, p, kind, &cfg)?;
                rep.notes.push(format!("{prefix}{}", outcome_name(sub.overall)));
                absorb(&mut rep, &sub, prefix);
                outcomes.push(sub.overall);
            }
            finish(rep, &outcomes)
        }
        VerifyMode::Separation => {
            let n = c.require(c.n, "n")?;
            let delta = c.require(c.delta, "delta")?;
            let sub = separation_scan(n, delta, p, &cfg)?;
            let mut rep = Report::new("verify-separation", c.params());
            absorb(&mut rep, &sub, "");
            finish(rep, &[sub.overall])
        }
        VerifyMode::Chain => {
            let n = c.require(c.n, "n")?;
            let delta = c.require(c.delta, "delta")?;
            let sizes: Vec<u64> = match c.s {
                Some(s) => vec![s],
                None => case_two_range(n, delta, p).collect(),
            };
            if sizes.is_empty() {
                return Err(usage("no separator sizes in delta + 1 <= s < rn/(k+r)"));
            }
            let mut rep = Report::new("verify-chain", c.params());
            let mut outcomes = Vec::new();
            let adjacency_ok = n >= threshold_adjacency(delta.max(1), p)?.minimal_order();
            let signless_ok = n >= threshold_signless(delta.max(1), p)?.minimal_order();
            if !adjacency_ok && !signless_ok {
                return Err(usage(format!("order {n} is below both thresholds")));
            }
            for s in sizes {
                if adjacency_ok {
                    let sub = chain_check_adjacency(n, delta, p, s, &cfg)?;
                    absorb(&mut rep, &sub, &format!("s={s} adjacency: "));
                    outcomes.push(sub.overall);
                }
                if signless_ok {
                    let sub = chain_check_q(n, delta, p, s, &cfg)?;
                    absorb(&mut rep, &sub, &format!("s={s} signless: "));
                    outcomes.push(sub.overall);
                }
            }
            if !adjacency_ok {
                rep.notes.push("adjacency chain skipped: order below its threshold".into());
            }
            if !signless_ok {
                rep.notes.push("signless chain skipped: order below its threshold".into());
            }
            finish(rep, &outcomes)
        }
        VerifyMode::RandomScan => {
            let seed = c.seed.ok_or_else(|| usage("--seed is required for random-scan"))?;
            let delta = c.require(c.delta, "delta")?;
            let mut rep = Report::new("verify-random-scan", c.params());
            let mut summary = SummaryRecord {
                total: 0,
                pass: 0,
                not_applicable: 0,
                boundary: 0,
                fail: 0,
                counterexamples: Vec::new(),
            };
            for kind in [MatrixKind::Adjacency, MatrixKind::SignlessLaplacian] {
                let n = match c.n {
                    Some(n) => n,
                    None => threshold_for(kind, delta, p)?.minimal_order(),
                };
                let s = random_scan(n as usize, delta, p, kind, seed, c.count, &cfg)?;
                summary.total += s.total;
                summary.pass += s.pass;
                summary.not_applicable += s.not_applicable;
                summary.boundary += s.boundary;
                summary.fail += s.fail;
                summary
                    .counterexamples
                    .extend(s.failures.iter().filter_map(|f| f.counterexample.as_ref().map(|c| c.graph6.clone())));
            }
            let overall = if summary.fail > 0 { Outcome::Fail } else { Outcome::Pass };
            rep.summary = Some(summary);
            finish(rep, &[overall])
        }
    }
}

fn scan_line(text: &str, line: usize, graph: Result<&Graph, String>, p: FamilyParams, c: &Common) -> LineRecord {
    let mut rec = LineRecord {
        line,
        graph6: text.trim().to_string(),
        ..LineRecord::default()
    };
    let g = match graph {
        Ok(g) => g,
        Err(e) => {
            rec.error = Some(e);
            return rec;
        }
    };
    rec.n = Some(g.order());
    rec.edges = Some(g.edge_count());
    rec.min_degree = g.min_degree();
    rec.connected = Some(g.is_connected());
    match SpectraRecord::of(g, c.tol) {
        Ok(s) => {
            rec.rho = Some(s.rho);
            rec.q = Some(s.q);
            rec.hong = s.hong;
            rec.das = s.das;
        }
        Err(e) => rec.error = Some(e),
    }
    if g.order() > c.factor_cap() {
        rec.error = Some(format!("order {} exceeds --max-order {}", g.order(), c.factor_cap()));
        return rec;
    }
    match has_factor_with(g, p, c.strategy()) {
        Ok(v) => {
            let f = FactorRecord::of(&v);
            rec.verdict = Some(f.verdict.into());
            rec.certificate = f.certificate;
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

fn scan(c: &Common) -> CmdResult {
    let p = c.family()?;
    let path = c.input.as_ref().ok_or_else(|| usage("--input is required"))?;
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let entries = read_corpus(&text);
    if !entries.iter().any(|e| e.graph.is_ok()) {
        return Err(usage(format!("{}: no line parses as graph6", path.display())));
    }
    let records: Vec<LineRecord> = entries
        .par_iter()
        .map(|e| scan_line(&e.text, e.line, e.graph.as_ref().map_err(|err| err.to_string()), p, c))
        .collect();
    let mut rep = Report::new("scan", c.params());
    let errors = records.iter().filter(|r| r.error.is_some()).count();
    let violations = records.iter().filter(|r| r.verdict.as_deref() == Some("no-factor")).count();
    rep.notes.push(format!("{} lines, {errors} errors, {violations} without a factor", records.len()));
    rep.records = Some(records);
    Ok((rep, 0))
}
