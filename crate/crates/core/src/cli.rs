//! Command-line front end. Every numerical step is delegated to the library.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::blockspace::SeqSpec;
use crate::domain::{packing_profile, DyadicDomain};
use crate::envelope::{verify_exponent, verify_hilbert};
use crate::error::Error;
use crate::exponents::{
    finite_measure_exponent_eval, func_exponent_eval, seq_exponent_eval, seq_spec_for, Evaluation,
    ExponentResult, SNumberKind,
};
use crate::format::g12;
use crate::params::{
    func_compact, int, parse_rational, seq_compact, EmbeddingParams, ExtReal, Rational,
};
use crate::suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNTESTABLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "snumbers",
    version,
    about = "s-number asymptotics for block sequence and function space embeddings"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// File of `key = value` lines; its values override the command line
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Predicted exponents for one tuple or a comma-separated grid
    Exponent(ExponentArgs),
    /// Compactness status of one tuple
    Compact(CompactArgs),
    /// Fit envelope slopes and compare with the predicted exponent
    Verify(VerifyArgs),
    /// Packing profile of a domain description file
    Domain(DomainArgs),
    /// Run the acceptance checks
    Suite(SuiteArgs),
}

/// Either `--delta` (sequence spaces) or `--s1/--s2/--d` (function spaces).
#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long, default_value = "2")]
    pub p1: String,
    #[arg(long, default_value = "2")]
    pub q1: String,
    #[arg(long, default_value = "2")]
    pub p2: String,
    #[arg(long, default_value = "2")]
    pub q2: String,
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["s1", "d"])]
    pub delta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s1: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub s2: String,
    #[arg(long)]
    pub d: Option<String>,
    /// Box-packing constant; defaults to d for function spaces
    #[arg(long)]
    pub b: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ExponentArgs {
    /// weyl, gelfand, kolmogorov, approx, or all (comma lists allowed)
    #[arg(long, default_value = "all")]
    pub kind: String,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Use the finite-measure statement (b = d)
    #[arg(long)]
    pub finite_measure: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CompactArgs {
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// weyl, gelfand or hilbert-all
    #[arg(long)]
    pub kind: String,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 4)]
    pub lmin: u32,
    #[arg(long, default_value_t = 10)]
    pub lmax: u32,
    /// Allocation exponent; defaults to the middle of the admissible window
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long, default_value_t = 0.15)]
    pub tol: f64,
    /// Largest index for the Hilbert check
    #[arg(long, default_value_t = 4096)]
    pub kmax: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct DomainArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub jmax: u32,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = suite::DEFAULT_SEED)]
    pub seed: u64,
    /// Comma-separated criterion ids
    #[arg(long)]
    pub only: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Untestable(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Untestable(_) => EXIT_UNTESTABLE,
            CliError::Failed(_) => EXIT_FAIL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Untestable(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let msg = err.to_string();
        match err {
            Error::Untestable(_)
            | Error::NotCompact
            | Error::TooFewPoints { .. }
            | Error::TooFewLevels(_)
            | Error::PackingCondition { .. } => CliError::Untestable(msg),
            Error::TableMismatch { .. } | Error::Unsorted(_) => CliError::Failed(msg),
            _ => CliError::Invalid(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Failed(err.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse(&args) {
        Ok(cli) => cli,
        Err(ParseFailure::Clap(e)) => {
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return e.exit_code();
        }
        Err(ParseFailure::Cli(e)) => {
            let _ = writeln!(err, "error: {}", e.message());
            return e.code();
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

enum ParseFailure {
    Clap(clap::Error),
    Cli(CliError),
}

fn parse(args: &[OsString]) -> std::result::Result<Cli, ParseFailure> {
    let cli = Cli::try_parse_from(args).map_err(ParseFailure::Clap)?;
    let Some(path) = cli.config.clone() else {
        return Ok(cli);
    };
    let sub = subcommand_name(&cli.command);
    let text = fs::read_to_string(&path).map_err(|e| {
        ParseFailure::Cli(CliError::Invalid(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })?;
    let extra = config_args(&text, sub).map_err(ParseFailure::Cli)?;
    let mut all = args.to_vec();
    all.extend(extra);
    Cli::try_parse_from(all).map_err(ParseFailure::Clap)
}

fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Exponent(_) => "exponent",
        Command::Compact(_) => "compact",
        Command::Verify(_) => "verify",
        Command::Domain(_) => "domain",
        Command::Suite(_) => "suite",
    }
}

/// Turns `key = value` lines into `--key value` tokens for `sub`.
pub fn config_args(text: &str, sub: &str) -> CliResult<Vec<OsString>> {
    let command = Cli::command();
    let sub_cmd = command
        .find_subcommand(sub)
        .ok_or_else(|| CliError::Invalid(format!("unknown subcommand {sub}")))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Invalid(format!("config line {}: expected key = value", i + 1))
        })?;
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key == "config" {
            return Err(CliError::Invalid(format!(
                "config line {}: nested config files are not supported",
                i + 1
            )));
        }
        let arg = sub_cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| {
                CliError::Invalid(format!(
                    "config line {}: unknown key {key:?} for {sub}",
                    i + 1
                ))
            })?;
        if matches!(arg.get_action(), clap::ArgAction::SetTrue) {
            match value {
                "true" => out.push(format!("--{key}").into()),
                "false" => {}
                _ => {
                    return Err(CliError::Invalid(format!(
                        "config line {}: {key} takes true or false",
                        i + 1
                    )))
                }
            }
        } else {
            out.push(format!("--{key}={value}").into());
        }
    }
    Ok(out)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        Command::Exponent(a) => cmd_exponent(&a, out),
        Command::Compact(a) => cmd_compact(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Domain(a) => cmd_domain(&a, out),
        Command::Suite(a) => cmd_suite(&a, out),
    }
}

fn emit(output: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn list<T>(flag: &str, raw: &str, parse: impl Fn(&str) -> crate::Result<T>) -> CliResult<Vec<T>> {
    raw.split(',')
        .map(|item| parse(item.trim()).map_err(|e| CliError::Invalid(format!("--{flag}: {e}"))))
        .collect()
}

fn ext(s: &str) -> crate::Result<ExtReal> {
    s.parse()
}

fn dim(s: &str) -> crate::Result<u32> {
    s.parse().map_err(|_| Error::Parse {
        input: s.to_string(),
        reason: "expected a positive integer".into(),
    })
}

/// One point of a parameter grid.
#[derive(Clone, Debug)]
pub enum Tuple {
    Seq(SeqSpec),
    Func {
        params: EmbeddingParams,
        b: Rational,
    },
}

impl Tuple {
    fn spec(&self) -> CliResult<SeqSpec> {
        match self {
            Tuple::Seq(spec) => Ok(*spec),
            Tuple::Func { params, b } => Ok(seq_spec_for(params, *b)?),
        }
    }
}

/// Cartesian product of every comma list, in column order.
pub fn expand(a: &ParamArgs) -> CliResult<Vec<Tuple>> {
    let p1 = list("p1", &a.p1, ext)?;
    let q1 = list("q1", &a.q1, ext)?;
    let p2 = list("p2", &a.p2, ext)?;
    let q2 = list("q2", &a.q2, ext)?;
    let b =
        a.b.as_deref()
            .map(|s| list("b", s, parse_rational))
            .transpose()?;
    let mut out = Vec::new();
    if let Some(delta) = &a.delta {
        let delta = list("delta", delta, parse_rational)?;
        let b = b.ok_or_else(|| CliError::Invalid("--b is required with --delta".into()))?;
        for &p1 in &p1 {
            for &q1 in &q1 {
                for &delta in &delta {
                    for &p2 in &p2 {
                        for &q2 in &q2 {
                            for &b in &b {
                                out.push(Tuple::Seq(SeqSpec::geometric(p1, q1, p2, q2, delta, b)?));
                            }
                        }
                    }
                }
            }
        }
        return Ok(out);
    }
    let s1 =
        a.s1.as_deref()
            .ok_or_else(|| CliError::Invalid("either --delta or --s1 is required".into()))?;
    let s1 = list("s1", s1, parse_rational)?;
    let s2 = list("s2", &a.s2, parse_rational)?;
    let d = list("d", a.d.as_deref().unwrap_or("1"), dim)?;
    for &p1 in &p1 {
        for &q1 in &q1 {
            for &s1 in &s1 {
                for &p2 in &p2 {
                    for &q2 in &q2 {
                        for &s2 in &s2 {
                            for &d in &d {
                                let params = EmbeddingParams::new((p1, q1, s1), (p2, q2, s2), d)?;
                                let bs = b.clone().unwrap_or_else(|| vec![int(d as i128)]);
                                for b in bs {
                                    out.push(Tuple::Func { params, b });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn single(a: &ParamArgs) -> CliResult<Tuple> {
    let mut tuples = expand(a)?;
    if tuples.len() != 1 {
        return Err(CliError::Invalid(format!(
            "expected a single parameter tuple, got a grid of {}",
            tuples.len()
        )));
    }
    Ok(tuples.pop().unwrap())
}

fn kinds(raw: &str) -> CliResult<Vec<SNumberKind>> {
    let mut out = Vec::new();
    for item in raw.split(',').map(str::trim) {
        if item == "all" {
            out.extend(SNumberKind::ALL);
        } else {
            out.push(
                item.parse()
                    .map_err(|e: Error| CliError::Invalid(format!("--kind: {e}")))?,
            );
        }
    }
    Ok(out)
}

pub const EXPONENT_HEADER: &str = "p1,q1,s1,p2,q2,s2,d,b,kind,case,gamma_lower,gamma_upper,status";

fn exponent_row(tuple: &Tuple, kind: SNumberKind, ev: &Evaluation) -> String {
    let (p1, q1, s1, p2, q2, s2, d, b) = match tuple {
        // sequence inputs carry δ in the s1 column
        Tuple::Seq(s) => (
            s.p1,
            s.q1,
            s.delta,
            s.p2,
            s.q2,
            Rational::from(0),
            String::new(),
            s.b,
        ),
        Tuple::Func { params: p, b } => (p.p1, p.q1, p.s1, p.p2, p.q2, p.s2, p.d.to_string(), *b),
    };
    let (lo, up) = match ev.result.rates() {
        Some((lower, upper)) => (lower.to_string(), upper.to_string()),
        None => (String::new(), String::new()),
    };
    let status = match &ev.result {
        ExponentResult::LimitingCase { boundary } => format!("limiting {boundary}"),
        other => other.status().to_string(),
    };
    format!(
        "{p1},{q1},{s1},{p2},{q2},{s2},{d},{b},{kind},{},{lo},{up},{status}",
        ev.case
    )
}

fn cmd_exponent(a: &ExponentArgs, out: &mut dyn Write) -> CliResult<i32> {
    let kinds = kinds(&a.kind)?;
    let tuples = expand(&a.params)?;
    let mut text = format!("{EXPONENT_HEADER}\n");
    for tuple in &tuples {
        for &kind in &kinds {
            let ev = match (tuple, a.finite_measure) {
                (Tuple::Seq(spec), false) => seq_exponent_eval(spec, kind),
                (Tuple::Seq(_), true) => {
                    return Err(CliError::Invalid(
                        "--finite-measure needs function-space parameters".into(),
                    ))
                }
                (Tuple::Func { params, b }, false) => func_exponent_eval(params, *b, kind)?,
                (Tuple::Func { params, b }, true) => {
                    if *b != params.dim() {
                        return Err(CliError::Invalid("--finite-measure fixes b = d".into()));
                    }
                    finite_measure_exponent_eval(params, kind)?
                }
            };
            text.push_str(&exponent_row(tuple, kind, &ev));
            text.push('\n');
        }
    }
    emit(&a.output, &text, out)?;
    Ok(EXIT_OK)
}

fn cmd_compact(a: &CompactArgs, out: &mut dyn Write) -> CliResult<i32> {
    let status = match single(&a.params)? {
        Tuple::Seq(spec) => seq_compact(&spec),
        Tuple::Func { params, b } => func_compact(&params, b)?,
    };
    writeln!(out, "{status:?}")?;
    Ok(EXIT_OK)
}

fn opt(x: Option<f64>) -> String {
    x.map(g12).unwrap_or_default()
}

fn predicted(result: &ExponentResult) -> String {
    match result {
        ExponentResult::Sandwich {
            lower_exp,
            upper_exp,
        } => format!("{lower_exp}..{upper_exp}"),
        ExponentResult::Exact { gamma } => gamma.to_string(),
        other => other.to_string(),
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let spec = single(&a.params)?.spec()?;
    let mut text = String::from("k,lower,upper\n");
    let summary = match a.kind.as_str() {
        "hilbert-all" => {
            let rep = verify_hilbert(&spec, a.kmax, a.tol)?;
            for (k, v) in &rep.points {
                text.push_str(&format!("{k},{},{}\n", g12(*v), g12(*v)));
            }
            let beta = rep.predicted[0].1.clone();
            (rep.pass, predicted(&beta), rep.fit.slope, rep.fit.slope)
        }
        "weyl" | "gelfand" => {
            let kind: SNumberKind = a.kind.parse()?;
            if a.lmin > a.lmax {
                return Err(CliError::Invalid(format!(
                    "--lmin {} exceeds --lmax {}",
                    a.lmin, a.lmax
                )));
            }
            let eps = a.eps.as_deref().map(parse_rational).transpose()?;
            let rep = verify_exponent(&spec, kind, a.lmin..=a.lmax, eps, a.tol)?;
            for (k, lo, up) in rep.envelope.rows() {
                text.push_str(&format!("{k},{},{}\n", opt(lo), opt(up)));
            }
            (
                rep.pass,
                predicted(&rep.predicted),
                rep.upper_slope,
                rep.lower_slope,
            )
        }
        other => {
            return Err(CliError::Invalid(format!(
                "--kind {other}: expected weyl, gelfand or hilbert-all"
            )))
        }
    };
    let (pass, beta, up, lo) = summary;
    let line = format!(
        "{} predicted={beta} upper_slope={} lower_slope={} tol={}\n",
        if pass { "PASS" } else { "FAIL" },
        g12(up),
        g12(lo),
        g12(a.tol)
    );
    match &a.output {
        Some(path) => {
            fs::write(path, &text)?;
            out.write_all(line.as_bytes())?;
        }
        None => {
            text.push_str(&line);
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_domain(a: &DomainArgs, out: &mut dyn Write) -> CliResult<i32> {
    let text = fs::read_to_string(&a.file)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", a.file.display())))?;
    let domain: DyadicDomain = text.parse()?;
    let prof = packing_profile(&domain, a.jmax)?;
    let mut csv = String::from("j,b_j,log2_bj,ratio\n");
    for (j, count) in &prof.entries {
        csv.push_str(&format!(
            "{j},{count},{},{}\n",
            opt(prof.log2_count(*j)),
            opt(prof.ratio(*j))
        ));
    }
    let line = format!(
        "b_hat={} bj_condition={} ratio_min={} ratio_max={} window={}..{}\n",
        g12(prof.b_hat),
        prof.bj_condition,
        g12(prof.ratio_range.0),
        g12(prof.ratio_range.1),
        prof.window.0,
        prof.window.1
    );
    match &a.output {
        Some(path) => {
            fs::write(path, &csv)?;
            out.write_all(line.as_bytes())?;
        }
        None => {
            csv.push_str(&line);
            out.write_all(csv.as_bytes())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_suite(a: &SuiteArgs, out: &mut dyn Write) -> CliResult<i32> {
    let ids: Vec<u32> = match &a.only {
        Some(raw) => list("only", raw, |s| {
            s.parse().map_err(|_| Error::Parse {
                input: s.to_string(),
                reason: "expected a criterion number".into(),
            })
        })?,
        None => suite::CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut all = true;
    for id in ids {
        let outcome = suite::run(id, a.seed)?;
        all &= outcome.pass;
        writeln!(out, "{outcome}")?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAIL })
}
