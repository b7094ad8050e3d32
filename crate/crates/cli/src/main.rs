//! `hre` command-line tool.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hre_core::document::{load_document, parse_known, InputFormat};
use hre_core::pc::DEFAULT_RECIPROCITY_TOLERANCE;
use hre_core::report::{
    check_report, compare_report, rank_report, to_canonical_json, ErrorReport, EXIT_INPUT,
};
use hre_core::{bound_table, Error, Problem};

#[derive(Parser)]
#[command(name = "hre", version, about = "Heuristic rating estimation over pairwise comparisons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the unknown concepts against the reference values.
    Rank(MatrixArgs),
    /// Report inconsistency, the solvability bound and M-matrix evidence.
    Check(MatrixArgs),
    /// Print the table of solvability bounds for 3 <= n <= N.
    Table {
        /// Largest matrix size.
        #[arg(default_value_t = 7)]
        n_max: usize,
        #[arg(long)]
        json: bool,
        /// Full-precision CSV instead of the 3-decimal text table.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Rank with both HRE and the principal eigenvector and compare.
    Compare(MatrixArgs),
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix file (JSON, or CSV with a label header row).
    file: PathBuf,
    /// JSON object of reference values, replacing any in the matrix file.
    #[arg(long, value_name = "FILE")]
    known: Option<PathBuf>,
    /// Relative tolerance for `m_ij * m_ji = 1`.
    #[arg(long, default_value_t = DEFAULT_RECIPROCITY_TOLERANCE)]
    tolerance: f64,
    /// Emit canonical JSON.
    #[arg(long)]
    json: bool,
    /// Read the matrix file as CSV whatever its extension.
    #[arg(long)]
    csv: bool,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

impl MatrixArgs {
    fn load(&self) -> Result<Problem, Vec<String>> {
        let one = |e: Error| vec![e.to_string()];
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(vec![format!("invalid tolerance {}", self.tolerance)]);
        }
        let format = if self.csv {
            InputFormat::Csv
        } else {
            InputFormat::from_path(&self.file)
        };
        let text = read(&self.file).map_err(one)?;
        let known = match &self.known {
            Some(path) => Some(parse_known(&read(path).map_err(one)?).map_err(one)?),
            None => None,
        };
        let doc = load_document(&text, format, known).map_err(one)?;
        let diagnostics = doc.diagnostics(self.tolerance);
        if !diagnostics.is_empty() {
            return Err(diagnostics.into_iter().map(|d| d.message).collect());
        }
        doc.to_problem(self.tolerance).map_err(one)
    }
}

fn input_failure(messages: &[String], json: bool) -> ExitCode {
    for m in messages {
        eprintln!("error: {m}");
    }
    if json {
        let report = ErrorReport {
            kind: hre_core::ErrorKind::Input,
            message: messages.join("; "),
            solution: None,
        };
        print!("{}", to_canonical_json(&report));
    }
    code(EXIT_INPUT)
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn run_matrix(args: &MatrixArgs, command: &Command) -> ExitCode {
    let problem = match args.load() {
        Ok(p) => p,
        Err(messages) => return input_failure(&messages, args.json),
    };
    match command {
        Command::Rank(_) => match rank_report(&problem) {
            Ok(report) => {
                if args.json {
                    print!("{}", to_canonical_json(&report));
                } else {
                    print!("{}", render::rank(&report));
                }
                if let (true, Some(e)) = (args.json, &report.error) {
                    eprintln!("error: {}", e.message);
                }
                code(report.exit_code())
            }
            Err(e) => input_failure(&[e.to_string()], args.json),
        },
        Command::Check(_) => match check_report(&problem) {
            Ok(report) => {
                if args.json {
                    print!("{}", to_canonical_json(&report));
                } else {
                    print!("{}", render::check(&report));
                }
                code(report.exit_code())
            }
            Err(e) => input_failure(&[e.to_string()], args.json),
        },
        Command::Compare(_) => {
            let report = compare_report(&problem);
            if args.json {
                print!("{}", to_canonical_json(&report));
            } else {
                print!("{}", render::compare(&report));
            }
            if args.json {
                for e in [&report.hre.error, &report.eigenvector.error].into_iter().flatten() {
                    eprintln!("error: {}", e.message);
                }
            }
            code(report.exit_code())
        }
        Command::Table { .. } => unreachable!("table takes no matrix"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Table { n_max, json, .. } if *n_max < 3 => {
            input_failure(&[format!("n_max must be at least 3, got {n_max}")], *json)
        }
        Command::Table { n_max, json, csv } => match bound_table(*n_max) {
            Ok(table) => {
                if *json {
                    print!("{}", to_canonical_json(&table));
                } else if *csv {
                    print!("{}", table.to_csv());
                } else {
                    print!("{}", table.to_text());
                }
                ExitCode::SUCCESS
            }
            Err(e) => input_failure(&[e.to_string()], *json),
        },
        Command::Rank(args) | Command::Check(args) | Command::Compare(args) => {
            run_matrix(args, &cli.command)
        }
    }
}
