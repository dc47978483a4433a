use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use deducto::diff::{self, DiffError};
use deducto::{check_source, exit, run_corpus};

#[derive(Parser)]
#[command(name = "deducto", version, about = "C++11 type-deduction simulator")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check one file and print its report.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check every .tdl file of a directory against its expectation header.
    Corpus {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the deduced type of one variable or function.
    Type { file: PathBuf, name: String },
    /// Compile the file's deductions with a C++11 compiler and report disagreements.
    Diff {
        file: PathBuf,
        /// Compiler command, e.g. `g++` or `clang++`.
        #[arg(long, required_unless_present = "emit")]
        cc: Option<String>,
        /// Print the generated translation unit instead of compiling it.
        #[arg(long)]
        emit: bool,
    },
}

fn read(path: &PathBuf) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("deducto: {}: {}", path.display(), e);
        exit::USAGE
    })
}

fn run(cli: Cli) -> Result<i32, i32> {
    match cli.command {
        Cmd::Check { file, json } => {
            let src = read(&file)?;
            let report = check_source(&src, &file.display().to_string()).report;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            Ok(if report.passed {
                exit::OK
            } else {
                exit::FAILURE
            })
        }
        Cmd::Corpus { dir, json } => {
            let summary = run_corpus(&dir).map_err(|e| {
                eprintln!("deducto: {}: {}", dir.display(), e);
                exit::USAGE
            })?;
            if json {
                println!("{}", summary.to_json());
            } else {
                print!("{}", summary.to_text());
            }
            Ok(if summary.passed {
                exit::OK
            } else {
                exit::FAILURE
            })
        }
        Cmd::Type { file, name } => {
            let src = read(&file)?;
            let checked = check_source(&src, &file.display().to_string());
            match checked.types.get(&name) {
                Some(t) => {
                    println!("{}", t);
                    Ok(exit::OK)
                }
                None => {
                    eprint!("{}", checked.report.to_text());
                    eprintln!("deducto: no variable or function named '{}'", name);
                    Ok(exit::FAILURE)
                }
            }
        }
        Cmd::Diff { file, cc, emit } => {
            let src = read(&file)?;
            let result =
                diff::prepare(&[(file.display().to_string(), src)]).and_then(|cases| match cc {
                    Some(cc) if !emit => diff::run(&cases, &cc).map(Some),
                    _ => {
                        print!("{}", diff::render(&cases));
                        Ok(None)
                    }
                });
            match result {
                Ok(None) => Ok(exit::OK),
                Ok(Some(report)) => {
                    print!("{}", report.to_text());
                    Ok(if report.agrees() {
                        exit::OK
                    } else {
                        exit::FAILURE
                    })
                }
                Err(e @ DiffError::CompilerUnavailable(_)) => {
                    eprintln!("deducto: {} (skipped)", e);
                    Ok(exit::COMPILER_UNAVAILABLE)
                }
                Err(e @ DiffError::Unrenderable { .. }) => {
                    eprintln!("deducto: {}", e);
                    Ok(exit::FAILURE)
                }
                Err(e) => {
                    eprintln!("deducto: {}", e);
                    Ok(exit::USAGE)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = run(cli).unwrap_or_else(|code| code);
    ExitCode::from(code as u8)
}
