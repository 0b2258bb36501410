use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use foldings_cli::commands::{cmd_fold, cmd_normalize, cmd_present, cmd_reduce, cmd_verify};
use foldings_cli::problem::{parse_problem, ProblemFile};
use foldings_cli::CliError;

/// Presentations for finitely generated subgroups of ascending HNN
/// extensions of free groups, by folding labeled graph pairs.
#[derive(Parser)]
#[command(name = "foldings", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fold a list of words and print a basis of the subgroup they generate.
    Fold {
        /// Generator names, space separated (default: inferred from the words)
        #[arg(long)]
        alphabet: Option<String>,
        /// Emit the machine-readable JSON document instead of text
        #[arg(long)]
        machine: bool,
        /// Write one DOT file per fold step into this directory
        #[arg(long, value_name = "DIR")]
        dot_dir: Option<PathBuf>,
        /// Words under the token grammar, e.g. "e2 e1 e3"
        words: Vec<String>,
    },
    /// Compute a presentation for the subgroup of each problem file.
    Present {
        /// Certification depth (overrides the problem file; default 8)
        #[arg(long)]
        depth: Option<usize>,
        /// Emit the machine-readable JSON document instead of text
        #[arg(long)]
        machine: bool,
        /// Write one DOT file per tightening step into this directory
        #[arg(long, value_name = "DIR")]
        dot_dir: Option<PathBuf>,
        /// Process independent problem files on up to N threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Re-verify an emitted presentation document against a problem file.
    Verify {
        presentation: PathBuf,
        problem: PathBuf,
    },
    /// Print the canonical t^-q · x · t^r form of a word.
    Normalize {
        problem: PathBuf,
        word: String,
        #[arg(long)]
        machine: bool,
    },
    /// Report the subgroup reduction (free case or stable-letter case).
    Reduce {
        problem: PathBuf,
        #[arg(long)]
        machine: bool,
    },
}

fn load_problem(path: &Path) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn run() -> Result<bool, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Fold { alphabet, machine, dot_dir, words } => {
            let out = cmd_fold(&words, alphabet.as_deref(), machine, dot_dir.as_deref())?;
            print!("{}", out.text());
            Ok(out.verification_failed)
        }
        Cmd::Present { depth, machine, dot_dir, jobs, files } => {
            let one = |path: &PathBuf| -> Result<_, CliError> {
                let problem = load_problem(path)?;
                let dot = dot_dir.as_ref().map(|dir| {
                    if files.len() == 1 {
                        dir.clone()
                    } else {
                        dir.join(path.file_stem().unwrap_or_default())
                    }
                });
                cmd_present(&problem, depth, machine, dot.as_deref())
            };
            let results: Vec<Result<_, CliError>> = if jobs > 1 && files.len() > 1 {
                std::thread::scope(|scope| {
                    let handles: Vec<_> = files
                        .chunks(files.len().div_ceil(jobs))
                        .map(|chunk| scope.spawn(move || chunk.iter().map(one).collect::<Vec<_>>()))
                        .collect();
                    handles.into_iter().flat_map(|h| h.join().expect("worker")).collect()
                })
            } else {
                files.iter().map(one).collect()
            };
            let mut failed = false;
            for (path, result) in files.iter().zip(results) {
                if files.len() > 1 {
                    println!("== {} ==", path.display());
                }
                let out = result?;
                print!("{}", out.text());
                failed |= out.verification_failed;
            }
            Ok(failed)
        }
        Cmd::Verify { presentation, problem } => {
            let doc = std::fs::read_to_string(&presentation).map_err(|e| {
                CliError::Input(format!("cannot read {}: {e}", presentation.display()))
            })?;
            let problem = load_problem(&problem)?;
            let out = cmd_verify(&doc, &problem)?;
            print!("{}", out.text());
            Ok(out.verification_failed)
        }
        Cmd::Normalize { problem, word, machine } => {
            let problem = load_problem(&problem)?;
            let out = cmd_normalize(&problem, &word, machine)?;
            print!("{}", out.text());
            Ok(out.verification_failed)
        }
        Cmd::Reduce { problem, machine } => {
            let problem = load_problem(&problem)?;
            let out = cmd_reduce(&problem, machine)?;
            print!("{}", out.text());
            Ok(out.verification_failed)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
