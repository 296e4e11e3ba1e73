//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 property failure, 2 usage or spec error, 3 budget.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::affine::{self, AffineGroup};
use crate::code::{self, CodeParams};
use crate::error::Error;
use crate::gf::FieldCtx;
use crate::minwords::{self, CheckOutcome, Instance, StructureReport, VerificationReport};
use crate::poly::{CartesianSet, ReducedPoly};
use crate::search;
use crate::spec::CodeSpec;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "cartesian-codes", version, about = "Affine cartesian codes over subfield chains")]
pub struct RunConfig {
    /// Code spec JSON: {"field": {"p", "m", "modulus"?}, "chain", "d"}
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Enumeration budget (steps)
    #[arg(long, global = true, env = search::BUDGET_ENV, default_value_t = search::DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized property trials
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form parameters (k, ℓ, δ, dim)
    Params,
    /// Minimum distance: closed form against exhaustive search
    Mindist,
    /// Full weight distribution
    Spectrum,
    /// All minimal-weight codewords
    Enumerate,
    /// Certify the shape of every minimal-weight word and run the lemma checks
    Verify {
        /// Trials per randomized check
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Search Aff(X) for φ with f = g ∘ φ
    Equiv {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Next-to-minimal weight of GRM_q(d, n): case table against exhaustive search
    Grm2 {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<(String, i32), Failure>;

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    run(&cfg)
}

pub fn run(cfg: &RunConfig) -> i32 {
    let outcome = match cfg.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t as usize).build() {
            Ok(pool) => pool.install(|| dispatch(cfg)),
            Err(e) => Err(Failure::Usage(e.to_string())),
        },
        None => dispatch(cfg),
    };
    match outcome {
        Ok((text, code)) => match emit(cfg, &text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(Failure::Lib(e @ Error::BudgetExceeded { .. })) => {
            eprintln!("error: {e}");
            EXIT_BUDGET
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn emit(cfg: &RunConfig, text: &str) -> std::io::Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn dispatch(cfg: &RunConfig) -> CmdResult {
    match &cfg.command {
        Command::Grm2 { q, n, d } => cmd_grm2(cfg, *q, *n, *d),
        command => {
            let path = cfg.spec.as_ref().ok_or_else(|| Failure::Usage("--spec is required".into()))?;
            let spec = CodeSpec::load(path)?;
            let set = spec.build()?;
            match command {
                Command::Params => cmd_params(cfg, &spec, &set),
                Command::Mindist => cmd_mindist(cfg, &spec, &set),
                Command::Spectrum => cmd_spectrum(cfg, &spec, &set),
                Command::Enumerate => cmd_enumerate(cfg, &spec, &set),
                Command::Verify { trials } => cmd_verify(cfg, &spec, &set, *trials),
                Command::Equiv { f, g } => cmd_equiv(cfg, &spec, &set, f, g),
                Command::Grm2 { .. } => unreachable!(),
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn to_csv<R: Serialize>(header: Option<&[&str]>, rows: &[R]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(header.is_none()).from_writer(Vec::new());
    if let Some(h) = header {
        w.write_record(h).expect("in-memory write");
    }
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

fn cmd_params(cfg: &RunConfig, spec: &CodeSpec, set: &CartesianSet) -> CmdResult {
    let p = CodeParams::new(set, spec.d)?;
    let text = match cfg.format {
        Format::Text => format!("d={} k={} ℓ={} delta={} dim={}\n", p.d, p.k, p.l, p.delta, p.dim),
        Format::Json => to_json(&json!({"schema_version": SCHEMA_VERSION, "spec": CodeSpec::of(set, spec.d), "params": p})),
        Format::Csv => to_csv(None, &[p]),
    };
    Ok((text, EXIT_PASS))
}

fn cmd_mindist(cfg: &RunConfig, spec: &CodeSpec, set: &Arc<CartesianSet>) -> CmdResult {
    code::decompose(set, spec.d)?;
    let formula = code::min_distance_formula(set, spec.d);
    let brute = search::min_distance_bruteforce(set, spec.d, cfg.budget)?;
    let (flag, exit) = if brute == formula { ("AGREE", EXIT_PASS) } else { ("DISAGREE", EXIT_FAILURE) };
    let text = match cfg.format {
        Format::Text => format!("formula={formula} bruteforce={brute} {flag}\n"),
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "spec": CodeSpec::of(set, spec.d),
            "formula": formula,
            "bruteforce": brute,
            "agree": formula == brute,
        })),
        Format::Csv => to_csv(Some(&["formula", "bruteforce", "agree"]), &[(formula, brute, formula == brute)]),
    };
    Ok((text, exit))
}

#[derive(Serialize)]
struct SpectrumRow {
    weight: usize,
    count: u64,
}

fn cmd_spectrum(cfg: &RunConfig, spec: &CodeSpec, set: &Arc<CartesianSet>) -> CmdResult {
    let rows: Vec<SpectrumRow> = search::weight_spectrum(set, spec.d, cfg.budget)?
        .into_iter()
        .map(|(weight, count)| SpectrumRow { weight, count })
        .collect();
    let text = match cfg.format {
        Format::Csv => to_csv(None, &rows),
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "spec": CodeSpec::of(set, spec.d),
            "spectrum": rows,
        })),
        Format::Text => rows.iter().map(|r| format!("weight {:>6}: {}\n", r.weight, r.count)).collect(),
    };
    Ok((text, EXIT_PASS))
}

fn word_string(values: &[crate::gf::FieldElement]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_enumerate(cfg: &RunConfig, spec: &CodeSpec, set: &Arc<CartesianSet>) -> CmdResult {
    let words = minwords::enumerate_minimal_words(set, spec.d, cfg.budget)?;
    let delta = code::min_distance_formula(set, spec.d);
    let text = match cfg.format {
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "spec": CodeSpec::of(set, spec.d),
            "delta": delta,
            "count": words.len(),
            "words": words.iter().map(|w| &w.values).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let rows: Vec<(usize, usize, String)> =
                words.iter().enumerate().map(|(i, w)| (i, w.weight, word_string(&w.values))).collect();
            to_csv(Some(&["index", "weight", "values"]), &rows)
        }
        Format::Text => {
            let mut s = format!("{} words of weight {delta}\n", words.len());
            for (i, w) in words.iter().enumerate() {
                s.push_str(&format!("{i:>6}: {}\n", word_string(&w.values)));
            }
            s
        }
    };
    Ok((text, EXIT_PASS))
}

#[derive(Serialize)]
struct LemmaChecks {
    structure: StructureReport,
    fatores: CheckOutcome,
    support: CheckOutcome,
    ladder: CheckOutcome,
}

impl LemmaChecks {
    fn passed(&self) -> bool {
        self.structure.passed() && self.fatores.passed && self.support.passed && self.ladder.passed
    }

    fn named(&self) -> Vec<(&'static str, &CheckOutcome)> {
        vec![
            ("minimal", &self.structure.minimal.outcome),
            ("d1dk", &self.structure.d1dk),
            ("soma1", &self.structure.soma1),
            ("poligual", &self.structure.poligual),
            ("fatores", &self.fatores),
            ("support", &self.support),
            ("ladder", &self.ladder),
        ]
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    schema_version: u32,
    spec: CodeSpec,
    #[serde(flatten)]
    report: VerificationReport,
    lemma_checks: LemmaChecks,
}

fn cmd_verify(cfg: &RunConfig, spec: &CodeSpec, set: &Arc<CartesianSet>, trials: usize) -> CmdResult {
    let inst = Instance::new(set, spec.d, cfg.budget)?;
    let report = minwords::verify_instance(&inst)?;
    let checks = LemmaChecks {
        structure: minwords::structure_lemmas(&inst, trials, cfg.seed),
        fatores: minwords::fatores_batch(&inst)?,
        support: minwords::support_batch(&inst)?,
        ladder: minwords::ladder_batch(set, spec.d),
    };
    let exit = if report.passed() && checks.passed() { EXIT_PASS } else { EXIT_FAILURE };
    let text = match cfg.format {
        Format::Json => to_json(&VerifyOutput {
            schema_version: SCHEMA_VERSION,
            spec: CodeSpec::of(set, spec.d),
            report,
            lemma_checks: checks,
        }),
        Format::Csv => {
            let mut rows = vec![("dgm_extension".to_string(), true, report.count_minimal, report.passed())];
            rows.extend(checks.named().into_iter().map(|(n, c)| (n.to_string(), c.applicable, c.checked, c.passed)));
            to_csv(Some(&["check", "applicable", "checked", "passed"]), &rows)
        }
        Format::Text => {
            let p = &report.params;
            let mut s = format!(
                "d={} k={} ℓ={} delta={} dim={} |Aff(X)|={}\n",
                p.d, p.k, p.l, p.delta, p.dim, report.group_order
            );
            s.push_str(&format!(
                "minimal words: {}  matched: {}  failures: {}  forms: {}  orbits: {}\n",
                report.count_minimal,
                report.matches.len(),
                report.failures.len(),
                report.forms.len(),
                report.orbits.len()
            ));
            if let Some(dgm) = &report.dgm_shape {
                s.push_str(&format!("GRM shape: {} forms checked, {} mismatches\n", dgm.checked, dgm.mismatches.len()));
            }
            for (name, c) in checks.named() {
                let status = match (c.applicable, c.passed) {
                    (false, _) => "N/A ",
                    (true, true) => "PASS",
                    (true, false) => "FAIL",
                };
                s.push_str(&format!("{status} {name} ({} cases)\n", c.checked));
                for f in &c.failures {
                    s.push_str(&format!("     {f}\n"));
                }
            }
            for (name, t) in &report.timings {
                s.push_str(&format!("time {name}: {:.3}s\n", t.as_secs_f64()));
            }
            s
        }
    };
    Ok((text, exit))
}

fn cmd_equiv(cfg: &RunConfig, spec: &CodeSpec, set: &Arc<CartesianSet>, f: &str, g: &str) -> CmdResult {
    let f = ReducedPoly::parse(set, f)?;
    let g = ReducedPoly::parse(set, g)?;
    let group = AffineGroup::enumerate(set, cfg.budget)?;
    let phi = affine::x_equivalent(&f, &g, &group);
    let text = match cfg.format {
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "spec": CodeSpec::of(set, spec.d),
            "f": f.to_string(),
            "g": g.to_string(),
            "equivalent": phi.is_some(),
            "phi": phi,
        })),
        Format::Csv => to_csv(
            Some(&["equivalent", "phi"]),
            &[(phi.is_some(), phi.as_ref().map(|p| serde_json::to_string(p).expect("serializable")).unwrap_or_default())],
        ),
        Format::Text => match &phi {
            Some(p) => format!("equivalent: f = g ∘ φ with φ = {}\n", serde_json::to_string(p).expect("serializable")),
            None => "not equivalent\n".to_string(),
        },
    };
    Ok((text, EXIT_PASS))
}

fn cmd_grm2(cfg: &RunConfig, q: usize, n: usize, d: usize) -> CmdResult {
    let (p, m) = code::prime_power_parts(q).ok_or_else(|| Failure::Usage(format!("q = {q} is not a prime power")))?;
    let formula = code::grm_second_weight(q, n, d)?;
    let ctx = Arc::new(FieldCtx::new(p, m, None)?);
    let set = CartesianSet::new(ctx, vec![m; n])?;
    let (brute, skipped) = match search::second_weight_bruteforce(&set, d, cfg.budget) {
        Ok(b) => (b, false),
        Err(Error::BudgetExceeded { .. }) => (None, true),
        Err(e) => return Err(e.into()),
    };
    let (flag, exit) = match brute {
        _ if skipped => ("SKIPPED", EXIT_PASS),
        Some(b) if b == formula => ("AGREE", EXIT_PASS),
        _ => ("DISAGREE", EXIT_FAILURE),
    };
    let shown = if skipped { "skipped".to_string() } else { brute.map_or("none".to_string(), |b| b.to_string()) };
    let text = match cfg.format {
        Format::Text if skipped => format!("formula={formula} bruteforce={shown}\n"),
        Format::Text => format!("formula={formula} bruteforce={shown} {flag}\n"),
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "q": q,
            "n": n,
            "d": d,
            "formula": formula,
            "bruteforce": brute,
            "verdict": flag,
        })),
        Format::Csv => to_csv(
            Some(&["q", "n", "d", "formula", "bruteforce", "verdict"]),
            &[(q, n, d, formula, shown, flag)],
        ),
    };
    Ok((text, exit))
}
