use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qvahlen::json::to_canonical_string;
use qvahlen_cli::{verify, CliResult, OrderFlags, Report, EXIT_FAILURE, EXIT_OK};

#[derive(Parser)]
#[command(name = "qvahlen", version, about = "Exact computations with quaternion Vahlen groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quaternion algebra invariants.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Order axioms, ‡-stability and maximality.
    Order {
        #[command(subcommand)]
        command: OrderCommand,
    },
    /// Matrices in SL‡(2,H).
    Vahlen {
        #[command(subcommand)]
        command: VahlenCommand,
    },
    /// Conjugacy certificates between arithmetic groups.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Replay the bundled worked examples.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Ramified places, discriminant, definiteness.
    Info { file: PathBuf },
}

#[derive(Subcommand)]
enum OrderCommand {
    /// Check a basis file against an involution.
    Check {
        file: PathBuf,
        #[arg(long)]
        involution: PathBuf,
        /// Require maximality among ‡-orders.
        #[arg(long)]
        maximal: bool,
        /// List the unit group (definite algebras only).
        #[arg(long)]
        units: bool,
        /// Search for ‡-stable superorders; fails if any exist.
        #[arg(long)]
        scan: bool,
    },
}

#[derive(Subcommand)]
enum VahlenCommand {
    /// Report which defining clauses hold.
    Member { file: PathBuf },
    /// Product of two members.
    Mul { left: PathBuf, right: PathBuf },
    /// Inverse of a member.
    Inv { file: PathBuf },
    /// Write a rational member as a word in U(z), L(z).
    Decompose { file: PathBuf },
    /// The 5x5 orthogonal matrix of the spinor map.
    Spin { file: PathBuf },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Verify a conjugacy certificate in both directions.
    Certify { file: PathBuf },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Run every bundled example check.
    PaperExamples {
        /// Read fixtures from this directory instead of the built-in copy.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<i32> {
    let report: Report = match cli.command {
        Command::Algebra {
            command: AlgebraCommand::Info { file },
        } => qvahlen_cli::algebra_info(&file)?,
        Command::Order {
            command:
                OrderCommand::Check {
                    file,
                    involution,
                    maximal,
                    units,
                    scan,
                },
        } => {
            let flags = OrderFlags { maximal, units, scan };
            qvahlen_cli::order_check(&file, &involution, flags, qvahlen_cli::scan_bound_from_env()?)?
        }
        Command::Vahlen { command } => match command {
            VahlenCommand::Member { file } => qvahlen_cli::vahlen_member(&file)?,
            VahlenCommand::Mul { left, right } => qvahlen_cli::vahlen_mul(&left, &right)?,
            VahlenCommand::Inv { file } => qvahlen_cli::vahlen_inv(&file)?,
            VahlenCommand::Decompose { file } => qvahlen_cli::vahlen_decompose(&file)?,
            VahlenCommand::Spin { file } => qvahlen_cli::vahlen_spin(&file)?,
        },
        Command::Group {
            command: GroupCommand::Certify { file },
        } => qvahlen_cli::group_certify(&file)?,
        Command::Verify {
            command: VerifyCommand::PaperExamples { fixtures },
        } => {
            let results = verify::run_from(fixtures.as_deref(), qvahlen_cli::scan_bound_from_env()?);
            print!("{}", verify::render(&results));
            let ok = results.iter().all(|r| r.passed);
            return Ok(if ok { EXIT_OK } else { EXIT_FAILURE });
        }
    };
    print!("{}", to_canonical_string(&report.json));
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
