use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::classify::{classify, normalize_presentation};
use crate::error::{Error, Result};
use crate::freeness::freeness_certify_with;
use crate::skew::{delta_tower, orbit_analyze};

use super::expr::{eval_fraction, eval_ratfunc, parse_expr};
use super::problem::{parse_problem, ProblemFile};

#[derive(Debug, Parser)]
#[command(name = "skewfree", version, about = "Free subalgebra evidence for skew function fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// No summary line on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    /// Overrides `option.max_terms`.
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Overrides `option.max_bits`.
    #[arg(long, global = true)]
    max_bits: Option<u64>,
    /// Overrides `option.max_words`.
    #[arg(long, global = true)]
    max_words: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Free / PI / commutative verdict with evidence.
    Classify { file: PathBuf },
    /// Rank certificate for the words in `b(1-x)^-1` and `(1-x)^-1`.
    Freeness {
        file: PathBuf,
        #[arg(long)]
        b: String,
        #[arg(long = "max-len", default_value_t = 3)]
        max_len: usize,
    },
    /// Rewrite a mixed presentation as a pure automorphism.
    Normalize { file: PathBuf },
    /// Orbit of an element under `sigma`.
    Orbit {
        file: PathBuf,
        #[arg(long)]
        elem: String,
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
    /// Iterated derivatives of an element and the strictness of their fields.
    Tower {
        file: PathBuf,
        #[arg(long)]
        elem: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Evaluate an expression in `K(x; sigma, delta)`; `X` is the Ore variable.
    Compute {
        file: PathBuf,
        #[arg(long)]
        expr: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Freeness { .. } => "freeness",
            Command::Normalize { .. } => "normalize",
            Command::Orbit { .. } => "orbit",
            Command::Tower { .. } => "tower",
            Command::Compute { .. } => "compute",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Classify { file }
            | Command::Freeness { file, .. }
            | Command::Normalize { file }
            | Command::Orbit { file, .. }
            | Command::Tower { file, .. }
            | Command::Compute { file, .. } => file,
        }
    }
}

/// Result of one invocation: process exit code and both output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// 1 input, 2 inconsistent presentation, 3 resource bound, 4 internal.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotAnAutomorphism(_) | Error::InconsistentDerivation(_) | Error::BadPresentation(_) => 2,
        Error::ResourceBoundExceeded(_) => 3,
        Error::InvariantViolation(_) => 4,
        _ => 1,
    }
}

pub fn error_json(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("error".into(), json!(e.kind()));
    m.insert("detail".into(), json!(e.to_string()));
    if let Some(p) = e.position() {
        m.insert("position".into(), json!({ "line": p.line, "column": p.column }));
    }
    Value::Object(m)
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Parses `args` (program name first) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: text, stderr: String::new() };
            }
            let v = json!({ "error": "UsageError", "detail": text.trim_end() });
            return Outcome { code: 1, stdout: render(&v), stderr: text };
        }
    };
    let start = Instant::now();
    let name = cli.command.name();
    let result = catch_unwind(AssertUnwindSafe(|| execute(&cli)));
    let result = match result {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(Error::InvariantViolation(msg))
        }
    };
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok((mut payload, summary)) => {
            if let Value::Object(m) = &mut payload {
                m.insert("meta".into(), meta(&cli));
            }
            let stderr = if cli.quiet { String::new() } else { format!("{name}: {summary} ({secs:.2} s)\n") };
            Outcome { code: 0, stdout: render(&payload), stderr }
        }
        Err(e) => {
            let code = exit_code(&e);
            let mut v = error_json(&e);
            if let Value::Object(m) = &mut v {
                m.insert("meta".into(), meta(&cli));
            }
            let stderr = if cli.quiet { String::new() } else { format!("{name}: error: {e}\n") };
            Outcome { code, stdout: render(&v), stderr }
        }
    }
}

/// Run data kept apart from the payload; deterministic for identical inputs.
fn meta(cli: &Cli) -> Value {
    let file = cli.command.file();
    let digest = std::fs::read(file).ok().map(|bytes| {
        let d = Sha256::digest(&bytes);
        d.iter().map(|b| format!("{b:02x}")).collect::<String>()
    });
    json!({
        "command": cli.command.name(),
        "input": file.display().to_string(),
        "input_sha256": digest,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn load(cli: &Cli) -> Result<ProblemFile> {
    let path = cli.command.file();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let mut pf = parse_problem(&text)?;
    let limits = &mut pf.spec.options.limits;
    if let Some(t) = cli.max_terms {
        limits.max_terms = t;
    }
    if let Some(b) = cli.max_bits {
        limits.max_bits = b;
    }
    if let Some(w) = cli.max_words {
        limits.max_words = w;
    }
    Ok(pf)
}

fn execute(cli: &Cli) -> Result<(Value, String)> {
    let pf = load(cli)?;
    let ctx = &pf.spec.pair;
    let ring = ctx.ring();
    // flag expressions are reported on line 0
    let arg_expr = |src: &str, allow_x: bool| parse_expr(src, 0, 1, allow_x);
    match &cli.command {
        Command::Classify { .. } => {
            let v = classify(&pf.spec)?;
            let summary = format!("{:?}{}", v.kind, v.theorem_tag.as_ref().map(|t| format!(" [{t}]")).unwrap_or_default());
            Ok((v.to_json(), summary))
        }
        Command::Freeness { b, max_len, .. } => {
            let b = eval_ratfunc(&arg_expr(b, false)?, ring)?;
            let cert = freeness_certify_with(ctx, &b, *max_len, &pf.spec.options.limits)?;
            let summary = format!("rank {} of {}", cert.rank, cert.word_count);
            Ok((cert.to_json(), summary))
        }
        Command::Normalize { .. } => {
            let n = normalize_presentation(ctx)?;
            Ok((n.to_json(), n.kind.describe().to_string()))
        }
        Command::Orbit { elem, bound, .. } => {
            let a = eval_ratfunc(&arg_expr(elem, false)?, ring)?;
            let r = orbit_analyze(ctx.sigma(), &a, *bound)?;
            let summary = r.to_json()["kind"].as_str().unwrap_or("").to_string();
            Ok((r.to_json(), summary))
        }
        Command::Tower { elem, depth, .. } => {
            let a = eval_ratfunc(&arg_expr(elem, false)?, ring)?;
            let r = delta_tower(ctx.delta(), &a, *depth)?;
            let summary = if r.all_strict() { "all levels strict" } else { "not all levels strict" };
            Ok((r.to_json(), summary.to_string()))
        }
        Command::Compute { expr, .. } => {
            let f = eval_fraction(&arg_expr(expr, true)?, ctx)?.reduce();
            let v = json!({
                "expr": expr,
                "value": f.to_string(),
                "den": f.den().to_string(),
                "num": f.num().to_string(),
            });
            Ok((v, f.to_string()))
        }
    }
}
