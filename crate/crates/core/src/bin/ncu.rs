use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ncu_core::cli::{execute, Command, Format, Options};
use ncu_core::scalars::GaussRat;
use ncu_core::whcalc::Wrt;

#[derive(Parser)]
#[command(name = "ncu", about = "Quantum differential calculus on U(u(2)_h)")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Value of hbar (`p/q` or `ip/q`), or `formal`
    #[arg(long, global = true, default_value = "formal")]
    hbar: String,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Seed for randomized check suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Copy, Clone, ValueEnum)]
enum WrtArg {
    T,
    Ttilde,
    X,
    Y,
    Z,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normal form of an expression
    Norm { expr: String },
    /// Quantum partial derivative
    Deriv {
        #[arg(long, value_enum)]
        wrt: WrtArg,
        expr: String,
    },
    /// The matrix Θ̂(expr)
    Theta { expr: String },
    /// Inverse of Θ̂(expr) and the derivatives of expr⁻¹
    Inv { expr: String },
    /// Check that profile·(x, y, z) solves the monopole equations
    Monopole {
        #[arg(long)]
        profile: String,
    },
    /// Run identity suites: ch, braid, theta-mult, drham, evaluators or all
    Check { suite: String },
    /// Classical limit hbar → 0
    Limit { expr: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let hbar = if cli.hbar == "formal" {
        None
    } else {
        match cli.hbar.parse::<GaussRat>() {
            Ok(v) => Some(v),
            Err(e) => {
                eprintln!("error: invalid --hbar value {}: {}", cli.hbar, e.0);
                return ExitCode::from(1);
            }
        }
    };
    let wrt = |w: WrtArg| match w {
        WrtArg::T => Wrt::T,
        WrtArg::Ttilde => Wrt::TTilde,
        WrtArg::X => Wrt::X,
        WrtArg::Y => Wrt::Y,
        WrtArg::Z => Wrt::Z,
    };
    let command = match cli.command {
        Cmd::Norm { expr } => Command::Norm(expr),
        Cmd::Deriv { wrt: w, expr } => Command::Deriv { wrt: wrt(w), expr },
        Cmd::Theta { expr } => Command::Theta(expr),
        Cmd::Inv { expr } => Command::Inv(expr),
        Cmd::Monopole { profile } => Command::Monopole { profile },
        Cmd::Check { suite } => Command::Check { suite },
        Cmd::Limit { expr } => Command::Limit(expr),
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let out = execute(&command, &Options { hbar, format, seed: cli.seed });
    // A closed pipe (e.g. `ncu ... | head`) is not an error worth reporting.
    if !out.stdout.is_empty() {
        let _ = writeln!(std::io::stdout(), "{}", out.stdout);
    }
    if !out.stderr.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", out.stderr);
    }
    ExitCode::from(out.code as u8)
}
