//! Command implementations behind the `graphman` binary.
//!
//! Every command returns an [`Output`] holding its buffered stdout, stderr and
//! exit status; `main` only prints it. Batch mode relies on this to emit
//! per-file output in input order.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphman_core::oracle::{bruteforce_bound, bruteforce_min_f, bruteforce_phi, verify_lemma};
use graphman_core::{best_bound, bound, capital_phi, BoundReport, DecompositionGraph, Error, Limits, Theorem};
use rayon::prelude::*;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_DISAGREEMENT: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "graphman", version, about = "Complexity upper bounds for graph manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a decomposition graph file and list every violated condition.
    Validate { path: PathBuf },
    /// Evaluate a complexity upper bound.
    Bound {
        path: PathBuf,
        #[command(flatten)]
        options: BoundOptions,
    },
    /// Normalize every edge matrix and print the resulting graph.
    Normalize { path: PathBuf },
    /// Recompute with brute force and compare against the fast paths.
    Oracle {
        #[command(subcommand)]
        check: OracleCheck,
    },
    /// Run `bound` on every `.json` file of a directory.
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        options: BoundOptions,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCheck {
    /// Closed-form matrix complexity against the Farey tree walk.
    Lemma { beta_max: i64 },
    /// Greedy Phi against the minimum over all spanning trees.
    Phi {
        path: PathBuf,
        #[arg(long, default_value_t = Limits::default().max_trees)]
        max_trees: u64,
    },
    /// Minimum of the f terms, and the total, against plain enumeration.
    Minf {
        path: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    #[default]
    Auto,
    Regular,
    Tree,
    General,
}

#[derive(Clone, Debug, Args)]
pub struct LimitArgs {
    #[arg(long, default_value_t = Limits::default().max_trees)]
    pub max_trees: u64,
    #[arg(long, env = "MC_MAX_ASSIGNMENTS", default_value_t = Limits::default().max_assignments)]
    pub max_assignments: u64,
}

impl Default for LimitArgs {
    fn default() -> Self {
        let limits = Limits::default();
        LimitArgs { max_trees: limits.max_trees, max_assignments: limits.max_assignments }
    }
}

impl LimitArgs {
    pub fn limits(&self) -> Limits {
        Limits { max_trees: self.max_trees, max_assignments: self.max_assignments }
    }
}

#[derive(Clone, Debug, Default, Args)]
pub struct BoundOptions {
    #[arg(long, value_enum, default_value_t)]
    pub theorem: TheoremArg,
    /// Print the full report with every term and the witness labeling.
    #[arg(long)]
    pub breakdown: bool,
    /// Normalize edge matrices (adjusting b) before evaluating.
    #[arg(long)]
    pub normalize_first: bool,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: u8, message: impl std::fmt::Display) -> Self {
        Output { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }

    fn from_error(e: &Error) -> Self {
        Output::fail(exit_code(e), e)
    }
}

/// Exit status for an error raised after the file parsed.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

pub fn run(cli: &Cli) -> Output {
    match &cli.command {
        Command::Validate { path } => cmd_validate(path),
        Command::Bound { path, options } => cmd_bound(path, options),
        Command::Normalize { path } => cmd_normalize(path),
        Command::Oracle { check } => match check {
            OracleCheck::Lemma { beta_max } => cmd_oracle_lemma(*beta_max),
            OracleCheck::Phi { path, max_trees } => cmd_oracle_phi(path, *max_trees),
            OracleCheck::Minf { path, limits } => cmd_oracle_minf(path, &limits.limits()),
        },
        Command::Batch { dir, options } => cmd_batch(dir, options),
    }
}

/// Reads and parses a graph file; any failure is a parse error.
pub fn load(path: &Path) -> Result<DecompositionGraph, Output> {
    let text = fs::read_to_string(path)
        .map_err(|e| Output::fail(EXIT_PARSE, format_args!("cannot read {}: {e}", path.display())))?;
    DecompositionGraph::from_json(&text).map_err(|e| Output::fail(EXIT_PARSE, format_args!("{}: {e}", path.display())))
}

fn load_valid(path: &Path, normalize_first: bool) -> Result<(DecompositionGraph, String), Output> {
    let mut g = load(path)?;
    let mut stderr = String::new();
    if normalize_first {
        let (normalized, moves) = g.normalize_all().map_err(|e| Output::from_error(&e))?;
        for m in moves.iter().filter(|m| !m.is_trivial()) {
            stderr += &format!("normalized {m}\n");
        }
        g = normalized;
    }
    let report = g.validate();
    if !report.is_ok() {
        for v in &report.violations {
            stderr += &format!("{v}\n");
        }
        return Err(Output { code: EXIT_INVALID, stdout: String::new(), stderr });
    }
    Ok((g, stderr))
}

pub fn cmd_validate(path: &Path) -> Output {
    let g = match load(path) {
        Ok(g) => g,
        Err(out) => return out,
    };
    let report = g.validate();
    let stderr: String = report.notes.iter().map(|n| format!("note: {n}\n")).collect();
    if report.is_ok() {
        return Output { code: EXIT_OK, stdout: "ok\n".into(), stderr };
    }
    let stdout = report.violations.iter().map(|v| format!("{v}\n")).collect();
    Output { code: EXIT_INVALID, stdout, stderr }
}

fn evaluate(g: &DecompositionGraph, options: &BoundOptions) -> Result<BoundReport, Error> {
    let limits = options.limits.limits();
    match options.theorem {
        TheoremArg::Auto => best_bound(g, &limits),
        TheoremArg::Regular => bound(g, Theorem::Regular, &limits),
        TheoremArg::Tree => bound(g, Theorem::Tree, &limits),
        TheoremArg::General => bound(g, Theorem::General, &limits),
    }
}

pub fn cmd_bound(path: &Path, options: &BoundOptions) -> Output {
    let (g, stderr) = match load_valid(path, options.normalize_first) {
        Ok(x) => x,
        Err(out) => return out,
    };
    match evaluate(&g, options) {
        Ok(report) => {
            let stdout = if options.breakdown {
                report.to_json() + "\n"
            } else {
                format!("{}\ntheorem: {}\n", report.total, report.theorem.name())
            };
            Output { code: EXIT_OK, stdout, stderr }
        }
        Err(e) => {
            let mut out = Output::from_error(&e);
            out.stderr = stderr + &out.stderr;
            out
        }
    }
}

pub fn cmd_normalize(path: &Path) -> Output {
    let g = match load(path) {
        Ok(g) => g,
        Err(out) => return out,
    };
    match g.normalize_all() {
        Ok((normalized, moves)) => Output {
            code: EXIT_OK,
            stdout: normalized.to_json() + "\n",
            stderr: moves.iter().filter(|m| !m.is_trivial()).map(|m| format!("{m}\n")).collect(),
        },
        Err(e) => Output::from_error(&e),
    }
}

pub fn cmd_oracle_lemma(beta_max: i64) -> Output {
    if beta_max < 2 {
        return Output::fail(EXIT_INVALID, "beta_max must be at least 2");
    }
    match verify_lemma(beta_max) {
        Ok(report) => {
            let code = if report.is_verified() { EXIT_OK } else { EXIT_DISAGREEMENT };
            Output { code, stdout: format!("{report}\n"), stderr: String::new() }
        }
        Err(e) => Output::from_error(&e),
    }
}

pub fn cmd_oracle_phi(path: &Path, max_trees: u64) -> Output {
    let g = match load(path) {
        Ok(g) => g,
        Err(out) => return out,
    };
    let greedy = match capital_phi(&g) {
        Ok(x) => x,
        Err(e) => return Output::from_error(&e),
    };
    let brute = match bruteforce_phi(&g, max_trees) {
        Ok(x) => x,
        Err(e) => return Output::from_error(&e),
    };
    if greedy == brute {
        Output::ok(format!("Φ = {greedy} (greedy = brute force)\n"))
    } else {
        Output {
            code: EXIT_DISAGREEMENT,
            stdout: format!("Φ disagreement: greedy = {greedy}, brute force = {brute}\n"),
            stderr: String::new(),
        }
    }
}

pub fn cmd_oracle_minf(path: &Path, limits: &Limits) -> Output {
    let (g, stderr) = match load_valid(path, false) {
        Ok(x) => x,
        Err(out) => return out,
    };
    let report = match best_bound(&g, limits) {
        Ok(r) => r,
        Err(e) => return Output::from_error(&e),
    };
    let production: u64 = report.terms.vertices.iter().map(|v| v.f).sum();
    let cap = limits.max_assignments.max(limits.max_trees);
    let oracle = bruteforce_min_f(&g, report.theorem, cap).and_then(|(min_f, _)| {
        let (total, _) = bruteforce_bound(&g, report.theorem, cap)?;
        Ok((min_f, total))
    });
    let (min_f, total) = match oracle {
        Ok(x) => x,
        Err(e) => return Output::from_error(&e),
    };
    let name = report.theorem.name();
    if min_f == production && total == report.total {
        let stdout = format!("min Σf = {min_f}\nbound = {total} ({name}, oracle = production)\n");
        Output { code: EXIT_OK, stdout, stderr }
    } else {
        let stdout = format!(
            "disagreement ({name}): min Σf oracle = {min_f}, production = {production}; \
             bound oracle = {total}, production = {}\n",
            report.total
        );
        Output { code: EXIT_DISAGREEMENT, stdout, stderr }
    }
}

/// `.json` files directly inside `dir`, sorted by path.
pub fn batch_inputs(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn cmd_batch(dir: &Path, options: &BoundOptions) -> Output {
    let files = match batch_inputs(dir) {
        Ok(f) => f,
        Err(e) => return Output::fail(EXIT_PARSE, format_args!("cannot list {}: {e}", dir.display())),
    };
    let results: Vec<(PathBuf, Output)> = files
        .into_par_iter()
        .map(|p| {
            let out = cmd_bound(&p, options);
            (p, out)
        })
        .collect();

    let mut all = Output::default();
    for (path, out) in results {
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        if out.code == EXIT_OK && !options.breakdown {
            let mut lines = out.stdout.lines();
            let total = lines.next().unwrap_or_default();
            let theorem = lines.next().and_then(|l| l.strip_prefix("theorem: ")).unwrap_or_default();
            all.stdout += &format!("{name}: {total} ({theorem})\n");
        } else if out.code == EXIT_OK {
            all.stdout += &format!("{name}:\n{}", out.stdout);
        } else {
            all.stdout += &format!("{name}: exit {}\n", out.code);
        }
        for line in out.stderr.lines() {
            all.stderr += &format!("{name}: {line}\n");
        }
        all.code = all.code.max(out.code);
    }
    all
}
