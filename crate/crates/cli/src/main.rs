mod commands;
mod input;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relcx::Limits;

use commands::Report;
use input::{load_lift, load_structure};

#[derive(Debug)]
pub enum CliError {
    Core(relcx::Error),
    Input(String),
    Usage(String),
}

impl From<relcx::Error> for CliError {
    fn from(e: relcx::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_limit() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) | CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

/// Ultrahomogeneity, relational and lift complexity of finite structures.
#[derive(Parser)]
#[command(name = "relcx", version)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Backtracking node limit per search.
    #[arg(long, global = true, value_name = "NODES")]
    limit: Option<u64>,
    /// Assert that no randomness is used (always the case).
    #[arg(long, global = true)]
    seedless: bool,
    /// Output path for witnesses, lifts and generated structures.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test ultrahomogeneity; prints a non-extendable partial isomorphism otherwise.
    Uh { input: PathBuf },
    /// Relational complexity with a witness lift.
    Rc { input: PathBuf },
    /// Lift complexity with a witness lift.
    Lc { input: PathBuf },
    /// Re-verify a witness lift written by `rc` or `lc`.
    Verify {
        witness: PathBuf,
        #[arg(long, default_value = "rc")]
        kind: String,
    },
    /// Automorphism group generators and order.
    Aut { input: PathBuf },
    /// Orbits of the automorphism group on k-tuples.
    Orbits {
        input: PathBuf,
        #[arg(long)]
        arity: usize,
        /// Include tuples with repeated entries.
        #[arg(long)]
        all_tuples: bool,
    },
    /// Minimal g-separating g-cuts of the Gaifman graph.
    Gcuts { input: PathBuf },
    /// Generate a structure: a family name with parameters, `cograph <expr>`,
    /// or `permutation <degree> <cycles>...`.
    Gen {
        #[arg(required = true, num_args = 1..)]
        family: Vec<String>,
    },
    /// Build an explicit homogenizing lift.
    Homogenize {
        input: PathBuf,
        #[arg(long, value_parser = ["tree", "metric"])]
        method: String,
        /// Comma-separated vertex colors for `--method tree`.
        #[arg(long)]
        colors: Option<String>,
    },
    /// Amalgamation failures of a class of graphs.
    Amalg {
        #[command(subcommand)]
        action: AmalgAction,
    },
    /// Search for a homomorphism (or an embedding) F → A.
    Hom {
        f: PathBuf,
        a: PathBuf,
        #[arg(long)]
        embedding: bool,
    },
    /// Whether every endomorphism is an automorphism.
    Core { input: PathBuf },
    /// Enumerate isomorphism types on exactly n vertices.
    Enumerate {
        #[arg(long)]
        vertices: usize,
        #[arg(long, conflicts_with = "cographs")]
        trees: bool,
        #[arg(long)]
        cographs: bool,
        /// Compare a graph6 corpus against the enumeration.
        #[arg(long, value_name = "GRAPH6")]
        check: Option<PathBuf>,
    },
    /// Run `uh`, `rc`, `lc` or `aut` on every graph of a graph6 file.
    Batch {
        #[arg(value_parser = ["uh", "rc", "lc", "aut"])]
        operation: String,
        corpus: PathBuf,
    },
    /// Check the complementation, ordering, bound and disjoint-union
    /// properties over a corpus.
    Props {
        #[arg(long, value_name = "GRAPH6")]
        corpus: Option<PathBuf>,
        /// Without a corpus: all graphs up to this many vertices.
        #[arg(long, default_value_t = 5)]
        vertices: usize,
    },
}

#[derive(Subcommand)]
enum AmalgAction {
    /// List failures with |A|, |B| ≤ max, marking the minimal ones.
    Failures {
        /// `all`, `induced:P4`, `hom:C3,C5` or `hom:@file.json`.
        #[arg(long)]
        class: String,
        #[arg(long)]
        max: usize,
    },
}

fn run(cli: &Cli) -> Result<(Report, bool), CliError> {
    let mut limits = Limits::default();
    if let Some(n) = cli.limit {
        limits = limits.with_search_nodes(n);
    }
    let out = cli.out.as_deref();
    let ok = |r: Report| Ok((r, true));
    match &cli.command {
        Command::Uh { input } => ok(commands::uh(&load_lift(input)?, &limits)?),
        Command::Rc { input } => ok(commands::rc(input, out, &limits)?),
        Command::Lc { input } => ok(commands::lc(input, out, &limits)?),
        Command::Verify { witness, kind } => ok(commands::verify(witness, kind, &limits)?),
        Command::Aut { input } => ok(commands::aut(&load_structure(input)?, &limits)?),
        Command::Orbits {
            input,
            arity,
            all_tuples,
        } => ok(commands::orbits(
            &load_structure(input)?,
            *arity,
            *all_tuples,
            &limits,
        )?),
        Command::Gcuts { input } => ok(commands::gcuts(&load_structure(input)?, &limits)?),
        Command::Gen { family } => ok(commands::gen_cmd(family, out, &limits)?),
        Command::Homogenize {
            input,
            method,
            colors,
        } => ok(commands::homogenize(
            input,
            method,
            colors.as_deref(),
            out,
            &limits,
        )?),
        Command::Amalg {
            action: AmalgAction::Failures { class, max },
        } => ok(commands::amalg_failures(class, *max, &limits)?),
        Command::Hom { f, a, embedding } => ok(commands::hom(
            &load_structure(f)?,
            &load_structure(a)?,
            *embedding,
            &limits,
        )?),
        Command::Core { input } => ok(commands::core(&load_structure(input)?, &limits)?),
        Command::Enumerate {
            vertices,
            trees,
            cographs,
            check,
        } => {
            let family = if *trees {
                "trees"
            } else if *cographs {
                "cographs"
            } else {
                "graphs"
            };
            ok(commands::enumerate(*vertices, family, check.as_deref())?)
        }
        Command::Batch { operation, corpus } => ok(commands::batch(operation, corpus, &limits)?),
        Command::Props { corpus, vertices } => {
            commands::props(corpus.as_deref().map(Path::new), *vertices, &limits)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, ok)) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("JSON values serialize")
                );
            } else {
                print!("{}", report.text);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
