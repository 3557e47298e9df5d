//! Command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::fission::canonical_form;
use crate::permgroup::{BruteForceBound, Notation};
use crate::rootsys::{IrregularType, IrregularTypeDoc};
use crate::selftest::{self, SelftestConfig};
use crate::wmcg::{analyze, AnalysisReport, AnalyzeOptions, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Json {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(
    name = "wildmcg",
    version,
    about = "Fission trees, Weyl stabilizers and cabled braid generators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze an irregular type given as JSON.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Run the Weyl-group oracles even when n exceeds the brute-force bound.
        #[arg(long)]
        verify: bool,
        /// Largest n whose n! elements may be enumerated.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..=30))]
        max_brute_n: u64,
        /// Render group expressions with ×, ≀ and superscripts.
        #[arg(long)]
        unicode: bool,
        /// List the braid generators in text output.
        #[arg(long)]
        emit_generators: bool,
    },
    /// Run the seeded property suites and print a scoreboard.
    Selftest {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..=30))]
        max_brute_n: u64,
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        /// Random type-A instances to draw.
        #[arg(long, default_value_t = 500)]
        cases: usize,
    },
}

pub fn load_input(path: &Path) -> Result<IrregularType, InputError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Read {
        path: name.clone(),
        source,
    })?;
    parse_input(&name, &text)
}

pub fn parse_input(name: &str, text: &str) -> Result<IrregularType, InputError> {
    let doc: IrregularTypeDoc = serde_json::from_str(text).map_err(|e| InputError::Json {
        path: name.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_location(&e.to_string()),
    })?;
    IrregularType::from_doc(&doc).map_err(|e| InputError::Invalid {
        path: name.to_string(),
        message: e.to_string(),
    })
}

fn strip_location(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

fn status_tag(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skipped => "skip",
    }
}

fn fmt_order(o: Option<u128>) -> String {
    o.map_or_else(|| "overflow".to_string(), |o| o.to_string())
}

/// Human-readable report; byte-stable for fixed input and flags.
pub fn render_text(report: &AnalysisReport, emit_generators: bool) -> String {
    let mut out = String::new();
    let doc = &report.input;
    let _ = match doc.n {
        Some(n) => writeln!(
            out,
            "algebra: {}{n}, p = {}",
            doc.algebra,
            doc.coefficients.len()
        ),
        None => writeln!(
            out,
            "algebra: {}, p = {}",
            doc.algebra,
            doc.coefficients.len()
        ),
    };
    if let Some(tree) = &report.tree {
        let _ = writeln!(out, "fission tree (ranks by level, root first):");
        for l in (1..=tree.height() + 1).rev() {
            let ranks: Vec<String> = tree
                .level_ranks(l)
                .iter()
                .map(ToString::to_string)
                .collect();
            let _ = writeln!(out, "  level {l}: {}", ranks.join(" "));
        }
        let _ = writeln!(out, "canonical form: {}", canonical_form(tree));
    }
    let g = &report.groups;
    let line = |label: &str, s: &crate::wmcg::GroupSummary| match &s.expr {
        Some(e) => format!("{label} = {e}, order {}\n", fmt_order(s.order)),
        None => format!("{label}: order {}\n", fmt_order(s.order)),
    };
    out.push_str(&line("W_h1", &g.w_h1));
    out.push_str(&line("Stab(U)", &g.stab_flag));
    if let Some(e) = &g.aut.expr {
        let _ = writeln!(
            out,
            "Aut(T,r) = {e}, covering degree {}",
            fmt_order(report.covering_degree)
        );
        if let Some(ext) = &g.ext_aut.expr {
            let _ = writeln!(
                out,
                "Ext Aut(T,r) = {ext}, order {}",
                fmt_order(g.ext_aut.order)
            );
        }
    } else {
        let _ = writeln!(out, "covering degree {}", fmt_order(report.covering_degree));
    }
    if let Some(pure) = report.pure {
        let _ = writeln!(
            out,
            "local wild mapping class group: {}",
            if pure { "pure" } else { "not pure" }
        );
    }
    if let Some(gens) = &report.generators {
        let _ = writeln!(out, "pure cabled generators: {}", gens.pure.len());
        let _ = writeln!(out, "cabled generators: {}", gens.full.len());
        if let Some(order) = &report.leaf_order {
            let ids: Vec<String> = order.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "strand order (leaf ids): {}", ids.join(" "));
        }
        if emit_generators {
            for (label, words) in [("pure", &gens.pure), ("full", &gens.full)] {
                for w in words.iter() {
                    let _ = writeln!(out, "  {label}: [{w}]");
                }
            }
        }
    }
    let _ = writeln!(out, "verifications:");
    for v in &report.verifications {
        let _ = writeln!(out, "  [{}] {}: {}", status_tag(v.status), v.name, v.detail);
    }
    out
}

fn run_analyze(
    file: &Path,
    format: Format,
    verify: bool,
    max_brute_n: usize,
    unicode: bool,
    emit_generators: bool,
) -> (i32, String, String) {
    let q = match load_input(file) {
        Ok(q) => q,
        Err(e) => return (EXIT_INPUT, String::new(), format!("error: {e}\n")),
    };
    let opts = AnalyzeOptions {
        bound: BruteForceBound::new(max_brute_n),
        force_oracles: verify,
        notation: if unicode {
            Notation::Unicode
        } else {
            Notation::Ascii
        },
    };
    let report = match analyze(&q, &opts) {
        Ok(r) => r,
        Err(e) => return (EXIT_INPUT, String::new(), format!("error: {e}\n")),
    };
    let body = match format {
        Format::Text => render_text(&report, emit_generators),
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Dot => match &report.tree {
            Some(t) => t.to_dot(),
            None => {
                return (
                    EXIT_INPUT,
                    String::new(),
                    "error: DOT output needs a type-A input\n".into(),
                )
            }
        },
    };
    let code = if report.has_failures() {
        EXIT_VERIFICATION
    } else {
        EXIT_OK
    };
    (code, body, String::new())
}

fn run_selftest(max_brute_n: usize, seed: u64, cases: usize) -> (i32, String) {
    let config = SelftestConfig {
        seed,
        bound: BruteForceBound::new(max_brute_n),
        type_a_cases: cases,
        ..SelftestConfig::default()
    };
    let scores = selftest::run(&config);
    let mut out = format!("selftest seed={seed} max-brute-n={max_brute_n} cases={cases}\n");
    for s in &scores {
        let _ = writeln!(out, "{s}");
    }
    let failed = scores.iter().filter(|s| s.status() == Status::Fail).count();
    let _ = writeln!(out, "{} properties, {failed} failing", scores.len());
    (
        if failed > 0 {
            EXIT_VERIFICATION
        } else {
            EXIT_OK
        },
        out,
    )
}

/// Runs the CLI on an argument vector; returns (exit code, stdout, stderr).
pub fn run_captured<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                (code, String::new(), text)
            } else {
                (code, text, String::new())
            };
        }
    };
    match cli.command {
        Command::Analyze {
            file,
            format,
            verify,
            max_brute_n,
            unicode,
            emit_generators,
        } => run_analyze(
            &file,
            format,
            verify,
            max_brute_n as usize,
            unicode,
            emit_generators,
        ),
        Command::Selftest {
            max_brute_n,
            seed,
            cases,
        } => {
            let (code, out) = run_selftest(max_brute_n as usize, seed, cases);
            (code, out, String::new())
        }
    }
}

/// Runs the CLI, printing to the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (code, out, err) = run_captured(argv);
    print!("{out}");
    eprint!("{err}");
    code
}
