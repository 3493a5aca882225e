//! `dsigma`: check equations, axiom suites and quasi-equations, run the
//! weak-unit normalization pipeline, and replay counterexamples.
//!
//! Exit codes: 0 when every check passes, 1 when a counterexample is found
//! (or a replay does not reproduce), 2 on input errors.

pub mod model_file;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use dsigma_core::logic::{
    axiom_suite, check_in, check_quasi_in, compile_quasi, premises_hold, Algebra, CheckConfig, Reals,
};
use dsigma_core::models::{check_homomorphism, check_sigma_continuity, normalize_unit, Check, QuotientModel};
use dsigma_core::rational;
use dsigma_core::term::{parse, Signature, Statement};

use model_file::ModelFile;
use report::{CheckResult, PipelineReport, Render, Report, Value};

pub const DEFAULT_TRIALS: u64 = 2000;

#[derive(Debug, Parser)]
#[command(name = "dsigma", version, about = "Equational workbench for Dedekind σ-complete ℓ-groups and Riesz spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Number of sampled valuations per check.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    /// Sampling seed; derived from the input when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include the elapsed time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check equations or quasi-equations (inline, or a file with one per line).
    Check {
        input: String,
        /// One of lg, lgu, rs, rsu.
        #[arg(long, default_value = "rsu")]
        sig: String,
        /// Also check in the model described by this JSON file.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the axiom suite of a variety in ℝ and optionally in a model.
    Axioms {
        variety: String,
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Compile a quasi-equation into a single equation.
    Compile {
        input: String,
        #[arg(long, default_value = "rsu")]
        sig: String,
        /// Check the compiled equation and the quasi-equation directly, and compare.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the weak-unit normalization pipeline on a model file.
    Pipeline {
        file: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-evaluate the counterexamples recorded in a JSON report.
    Replay {
        report: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Outcome {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let result = match cli.command {
        Command::Check { input, sig, model, common } => cmd_check(&echo, &input, &sig, model.as_deref(), &common),
        Command::Axioms { variety, model, common } => cmd_axioms(&echo, &variety, model.as_deref(), &common),
        Command::Compile { input, sig, check, common } => cmd_compile(&echo, &input, &sig, check, &common),
        Command::Pipeline { file, model, common } => match file.or(model) {
            Some(path) => cmd_pipeline(&echo, &path, &common),
            None => Err("pipeline needs a model file".to_string()),
        },
        Command::Replay { report, format } => cmd_replay(&report, format),
    };
    result.unwrap_or_else(Outcome::input_error)
}

fn signature(tag: &str) -> Result<Signature, String> {
    tag.parse::<Signature>().map_err(|e| e.to_string())
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

/// Statements from a file (one per line, `#` comments) or the inline text.
fn statements(input: &str) -> Result<(String, Vec<(String, String)>), String> {
    let path = Path::new(input);
    if path.is_file() {
        let text = read_file(path)?;
        let lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| (format!("line {}", i + 1), l.trim().to_string()))
            .collect();
        Ok((text, lines))
    } else {
        Ok((input.to_string(), vec![("input".to_string(), input.to_string())]))
    }
}

/// Seed derived from the command and its input.
fn default_seed(parts: &[&str]) -> u64 {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0]);
    }
    let digest = h.finalize();
    u64::from_be_bytes(digest[..8].try_into().expect("8 bytes"))
}

fn load_model(path: Option<&Path>) -> Result<Option<(ModelFile, QuotientModel)>, String> {
    match path {
        None => Ok(None),
        Some(p) => {
            let file = ModelFile::parse(&read_file(p)?)?;
            let model = file.model()?;
            Ok(Some((file, model)))
        }
    }
}

struct Run {
    started: Instant,
    timing: bool,
    format: Format,
}

impl Run {
    fn new(common: &Common) -> Run {
        Run { started: Instant::now(), timing: common.timing, format: common.format }
    }

    fn finish(&self, mut report: Report, code: i32) -> Outcome {
        if self.timing {
            report.elapsed_ms = Some(self.started.elapsed().as_millis() as u64);
        }
        let stdout = match self.format {
            Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
            Format::Text => render_text(&report),
        };
        Outcome { code, stdout, stderr: String::new() }
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = write!(out, "{}: seed {}, {} trials", r.command, r.seed, r.trials);
    if let Some(sig) = &r.signature {
        let _ = write!(out, ", signature {sig}");
    }
    out.push('\n');
    if let Some(c) = &r.compiled {
        let _ = writeln!(out, "compiled: {c}");
    }
    for res in &r.results {
        let _ = writeln!(out, "{}", res.text_line());
    }
    if let Some(agree) = r.agree {
        let _ = writeln!(out, "compiled and direct checks {}", if agree { "agree" } else { "DISAGREE" });
    }
    if let Some(p) = &r.pipeline {
        let set = |v: &[String]| format!("{{{}}}", v.join(","));
        let ideal: Vec<String> = p.ideal.iter().map(|m| set(m)).collect();
        let _ = writeln!(out, "X = {}", set(&p.x));
        let _ = writeln!(out, "I = {{{}}}", ideal.join(", "));
        let _ = writeln!(out, "rho: {}", p.rho.join("; "));
        let _ = writeln!(out, "m:   {}", p.m_iso.join("; "));
        let _ = writeln!(out, "eta: {}", p.eta.join("; "));
        let _ = writeln!(out, "phi: {}", p.phi.join("; "));
        let _ = writeln!(out, "phi([u]) = ({})", p.unit_image.join(", "));
        let _ = writeln!(out, "injective: {} ({})", p.injective, p.criterion);
        let _ = writeln!(out, "sigma-continuity: {}", p.sigma_continuity);
        let _ = writeln!(out, "homomorphism: {}", p.homomorphism);
    }
    let _ = writeln!(out, "{}", if r.passed { "result: pass" } else { "result: FAIL" });
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(out, "elapsed: {ms} ms");
    }
    out
}

fn empty_report(command: &str, echo: &[String], sig: Option<Signature>, seed: u64, trials: u64) -> Report {
    Report {
        command: command.to_string(),
        arguments: echo.to_vec(),
        signature: sig.map(|s| s.name().to_string()),
        seed,
        trials,
        model: None,
        compiled: None,
        agree: None,
        results: Vec::new(),
        pipeline: None,
        passed: true,
        elapsed_ms: None,
    }
}

/// Checks one parsed statement in `alg`.
fn check_statement<A: Algebra>(
    alg: &A,
    algebra: &str,
    name: &str,
    stmt: &Statement,
    config: CheckConfig,
) -> Result<CheckResult, String>
where
    A::Element: Render,
{
    match stmt {
        Statement::Term(_) => Err(format!("{name}: expected an equation or a quasi-equation")),
        Statement::Equation(eq) => {
            let v = check_in(alg, &eq.lhs, &eq.rhs, config).map_err(|e| format!("{name}: {e}"))?;
            Ok(CheckResult::from_verdict::<A>(name.to_string(), eq.to_string(), algebra, &v))
        }
        Statement::Quasi(qe) => {
            let out = check_quasi_in(alg, qe, config).map_err(|e| format!("{name}: {e}"))?;
            Ok(CheckResult::from_quasi::<A>(name.to_string(), qe.to_string(), algebra, &out))
        }
    }
}

fn cmd_check(
    echo: &[String],
    input: &str,
    sig: &str,
    model: Option<&Path>,
    common: &Common,
) -> Result<Outcome, String> {
    let run = Run::new(common);
    let sig = signature(sig)?;
    let (text, lines) = statements(input)?;
    let parsed = lines
        .iter()
        .map(|(name, line)| parse(line, sig).map(|s| (name.clone(), s)).map_err(|e| format!("{name}: {e}")))
        .collect::<Result<Vec<_>, String>>()?;
    let seed = common.seed.unwrap_or_else(|| default_seed(&["check", sig.name(), &text]));
    let config = CheckConfig::new(common.trials, seed);
    let model = load_model(model)?;
    let mut report = empty_report("check", echo, Some(sig), seed, common.trials);
    for (name, stmt) in &parsed {
        report.results.push(check_statement(&Reals, "R", name, stmt, config)?);
        if let Some((_, m)) = &model {
            report.results.push(check_statement(m, "model", name, stmt, config)?);
        }
    }
    report.model = model.map(|(f, _)| f);
    report.passed = report.results.iter().all(|r| !r.failed());
    let code = if report.passed { 0 } else { 1 };
    Ok(run.finish(report, code))
}

fn cmd_axioms(echo: &[String], variety: &str, model: Option<&Path>, common: &Common) -> Result<Outcome, String> {
    let run = Run::new(common);
    let sig = signature(variety)?;
    let seed = common.seed.unwrap_or_else(|| default_seed(&["axioms", sig.name()]));
    let config = CheckConfig::new(common.trials, seed);
    let model = load_model(model)?;
    let mut report = empty_report("axioms", echo, Some(sig), seed, common.trials);
    for named in axiom_suite(sig).equations {
        let stmt = Statement::Equation(named.equation);
        report.results.push(check_statement(&Reals, "R", &named.name, &stmt, config)?);
        if let Some((_, m)) = &model {
            report.results.push(check_statement(m, "model", &named.name, &stmt, config)?);
        }
    }
    report.model = model.map(|(f, _)| f);
    report.passed = report.results.iter().all(|r| !r.failed());
    let code = if report.passed { 0 } else { 1 };
    Ok(run.finish(report, code))
}

fn cmd_compile(echo: &[String], input: &str, sig: &str, check: bool, common: &Common) -> Result<Outcome, String> {
    let run = Run::new(common);
    let sig = signature(sig)?;
    let (text, lines) = statements(input)?;
    let [(name, line)] = lines.as_slice() else {
        return Err("compile expects exactly one quasi-equation".to_string());
    };
    let qe = dsigma_core::term::parse_quasi(line, sig).map_err(|e| format!("{name}: {e}"))?;
    let compiled = compile_quasi(&qe).map_err(|e| e.to_string())?;
    let seed = common.seed.unwrap_or_else(|| default_seed(&["compile", sig.name(), &text]));
    let mut report = empty_report("compile", echo, Some(sig), seed, common.trials);
    report.compiled = Some(compiled.to_string());
    let mut code = 0;
    if check {
        let config = CheckConfig::new(common.trials, seed);
        let compiled_result = check_statement(&Reals, "R", "compiled", &Statement::Equation(compiled), config)?;
        let direct = check_statement(&Reals, "R", "direct", &Statement::Quasi(qe), config)?;
        let agree = compiled_result.failed() == direct.failed()
            && compiled_result.counterexample.as_ref().map(|c| (&c.trial, &c.valuation))
                == direct.counterexample.as_ref().map(|c| (&c.trial, &c.valuation));
        report.passed = agree && !compiled_result.failed() && !direct.failed();
        report.agree = Some(agree);
        report.results = vec![compiled_result, direct];
        code = if report.passed { 0 } else { 1 };
    }
    Ok(run.finish(report, code))
}

fn cmd_pipeline(echo: &[String], path: &Path, common: &Common) -> Result<Outcome, String> {
    let run = Run::new(common);
    let text = read_file(path)?;
    let file = ModelFile::parse(&text)?;
    let loaded = file.load()?;
    let u = loaded.unit.ok_or("the pipeline needs a `unit` in the model file")?;
    let seed = common.seed.unwrap_or_else(|| default_seed(&["pipeline", &text]));
    let r = normalize_unit(&loaded.ground, &loaded.ideal, &u).map_err(|e| e.to_string())?;
    let sigma = check_sigma_continuity(&r.phi, common.trials, seed);
    let hom = check_homomorphism(&r.phi, common.trials, seed);
    let all_ones = r.unit_image.values().iter().all(|q| *q == rational::one());
    let describe = |c: bool, what: String| if c { format!("passed ({} samples)", common.trials) } else { what };
    let pipeline = PipelineReport {
        x: r.x.labels().to_vec(),
        ideal: r.ideal.member_labels(),
        rho: r.rho.describe(),
        m_iso: r.m_iso.describe(),
        eta: r.eta.describe(),
        phi: r.phi.describe(),
        unit_image: r.unit_image.values().iter().map(rational::format).collect(),
        unit_image_is_all_ones: all_ones,
        injective: r.injective,
        criterion: r.explanation.clone(),
        kernel: r.kernel.clone(),
        sigma_continuity: describe(
            sigma.passed(),
            match &sigma {
                Check::Failed(f) => format!(
                    "failed: image of sup {} but sup of images {}",
                    f.image_of_sup.format(),
                    f.sup_of_images.format()
                ),
                Check::Passed { .. } => String::new(),
            },
        ),
        homomorphism: describe(
            hom.passed(),
            match &hom {
                Check::Failed(f) => format!("failed to preserve `{}`", f.operation),
                Check::Passed { .. } => String::new(),
            },
        ),
    };
    let mut report = empty_report("pipeline", echo, None, seed, common.trials);
    report.passed = sigma.passed() && hom.passed() && all_ones;
    report.model = Some(file);
    report.pipeline = Some(pipeline);
    let code = if report.passed { 0 } else { 1 };
    Ok(run.finish(report, code))
}

/// Re-evaluates one recorded counterexample; `Ok(true)` if it reproduces.
fn replay_one<A: Algebra>(
    alg: &A,
    sig: Signature,
    result: &CheckResult,
    parse_value: impl Fn(&Value) -> Result<A::Element, String>,
) -> Result<bool, String>
where
    A::Element: Render,
{
    let c = result.counterexample.as_ref().expect("only counterexamples are replayed");
    let v = c
        .valuation
        .iter()
        .map(|(x, val)| Ok((x.clone(), parse_value(val)?)))
        .collect::<Result<std::collections::BTreeMap<_, _>, String>>()?;
    let stmt = parse(&result.statement, sig).map_err(|e| format!("{}: {e}", result.name))?;
    let (lhs, rhs, premises) = match &stmt {
        Statement::Equation(eq) => (&eq.lhs, &eq.rhs, true),
        Statement::Quasi(qe) => {
            let held = premises_hold(alg, qe, &v).map_err(|e| e.to_string())?;
            (&qe.conclusion.0, &qe.conclusion.1, held)
        }
        Statement::Term(_) => return Err(format!("{}: not an equation", result.name)),
    };
    let l = alg.evaluate(lhs, &v).map_err(|e| e.to_string())?;
    let r = alg.evaluate(rhs, &v).map_err(|e| e.to_string())?;
    Ok(premises && l != r && l.value() == c.lhs && r.value() == c.rhs)
}

fn cmd_replay(path: &Path, format: Format) -> Result<Outcome, String> {
    let report: Report = serde_json::from_str(&read_file(path)?).map_err(|e| format!("malformed report: {e}"))?;
    let sig = signature(report.signature.as_deref().unwrap_or("rsu"))?;
    let model = match &report.model {
        Some(f) => Some(f.model()?),
        None => None,
    };
    let scalar = |v: &Value| match v {
        Value::Scalar(s) => rational::parse(s).map_err(|e| e.to_string()),
        Value::Tuple(_) => Err("expected a rational".to_string()),
    };
    let tuple = |v: &Value| match v {
        Value::Tuple(t) => t
            .iter()
            .map(|s| rational::parse(s).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()
            .map(dsigma_core::models::ModelElement),
        Value::Scalar(_) => Err("expected a tuple".to_string()),
    };
    let mut out = empty_report("replay", &[path.display().to_string()], Some(sig), report.seed, report.trials);
    for result in report.results.iter().filter(|r| r.failed()) {
        let reproduced = match result.algebra.as_str() {
            "R" => replay_one(&Reals, sig, result, scalar)?,
            "model" => {
                let m = model.as_ref().ok_or("model counterexample without a model description")?;
                replay_one(m, sig, result, tuple)?
            }
            other => return Err(format!("unknown algebra `{other}`")),
        };
        let mut r = result.clone();
        r.verdict = if reproduced { "reproduced" } else { "not-reproduced" }.to_string();
        if !reproduced {
            out.passed = false;
        }
        out.results.push(r);
    }
    let code = if out.passed { 0 } else { 1 };
    let stdout = match format {
        Format::Json => serde_json::to_string_pretty(&out).expect("reports serialize") + "\n",
        Format::Text => {
            let mut s = format!("replay: {} counterexample(s)\n", out.results.len());
            for r in &out.results {
                let _ = writeln!(s, "{}  [{}] {}", r.verdict, r.algebra, r.name);
            }
            s
        }
    };
    Ok(Outcome { code, stdout, stderr: String::new() })
}
