//! `selfsim`: derive exact similarity parameters, construct
//! hypergeometric series solutions of four families of degenerate
//! equations, evaluate them on grids, and verify them — exactly in
//! rational arithmetic and numerically by finite differences.
//!
//! Exit codes: 0 success, 1 verification/convergence failure, 2 invalid
//! input. Documents go to stdout (JSON, or CSV for `eval`); diagnostics
//! go to stderr.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use selfsim_core::hypergeom::{DEFAULT_MAX_TERMS, DEFAULT_TOL};
use selfsim_core::rational::parse_rational;
use selfsim_core::{EquationKind, EquationSpec, Error};

#[derive(Parser)]
#[command(
    name = "selfsim",
    version,
    about = "Exact self-similar series solutions of degenerate high-order equations",
    long_about = "Derives similarity exponents, builds generalized hypergeometric series\n\
                  solutions of four families of degenerate equations, evaluates them on\n\
                  grids (CSV), and verifies them exactly in rational arithmetic (JSON)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Equation selection shared by every subcommand.
#[derive(Args)]
struct SpecArgs {
    /// Equation kind: 1..=4
    #[arg(long)]
    kind: u32,
    /// Order p of the x-derivative
    #[arg(long)]
    p: usize,
    /// Order q of the y-derivative (1 <= q < p)
    #[arg(long)]
    q: usize,
    /// Weight exponent alpha, exact: "num/den", integer, or finite decimal
    #[arg(long, default_value = "0")]
    alpha: String,
    /// Weight exponent beta, exact: "num/den", integer, or finite decimal
    #[arg(long, default_value = "0")]
    beta: String,
}

impl SpecArgs {
    fn to_spec(&self) -> Result<EquationSpec, Error> {
        let kind = EquationKind::from_index(self.kind)?;
        let alpha = parse_rational(&self.alpha)?;
        let beta = parse_rational(&self.beta)?;
        EquationSpec::new(kind, self.p, self.q, alpha, beta)
    }
}

/// Grid and tolerance settings for `eval`.
#[derive(Args)]
pub struct EvalArgs {
    /// Evaluate only member i (default: all members 0..p)
    #[arg(long)]
    pub i: Option<usize>,
    /// Series truncation order used when constructing the family ledger
    #[arg(long, default_value_t = 12)]
    pub terms: usize,
    /// Relative tolerance for series evaluation
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Cap on summed series terms per evaluation
    #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
    /// Grid lower bound in x (strictly positive)
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,
    /// Grid upper bound in x
    #[arg(long, default_value_t = 2.0)]
    pub x1: f64,
    /// Number of x nodes
    #[arg(long, default_value_t = 2)]
    pub nx: usize,
    /// Grid lower bound in y (strictly positive)
    #[arg(long, default_value_t = 1.0)]
    pub y0: f64,
    /// Grid upper bound in y
    #[arg(long, default_value_t = 2.0)]
    pub y1: f64,
    /// Number of y nodes
    #[arg(long, default_value_t = 2)]
    pub ny: usize,
}

/// Options for `verify`.
#[derive(Args)]
pub struct VerifyArgs {
    /// Verify only member i (default: all members)
    #[arg(long)]
    pub i: Option<usize>,
    /// Truncation order N (the residual is the single term after c_N)
    #[arg(long, default_value_t = 12)]
    pub terms: usize,
    /// Also run the finite-difference spot check at fixed probe points
    #[arg(long)]
    pub numeric: bool,
    /// Finite-difference step for --numeric
    #[arg(long, default_value_t = 1e-2)]
    pub h: f64,
    /// Deliberately corrupt one coefficient first (negative control)
    #[arg(long)]
    pub inject_fault: bool,
    /// Verify coefficients from a `coeffs` JSON document instead of
    /// regenerating them (the file must describe the same equation)
    #[arg(long)]
    pub coeffs: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact similarity parameters a, b, c, the gamma ladder, and K (JSON)
    Params {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Exact series coefficients for the family or one member (JSON)
    Coeffs {
        #[command(flatten)]
        spec: SpecArgs,
        /// Emit only member i (default: all members)
        #[arg(long)]
        i: Option<usize>,
        /// Truncation order N: coefficients c_0..c_N
        #[arg(long, default_value_t = 12)]
        terms: usize,
    },
    /// Evaluate members on a positive rectangular grid (CSV, y-major)
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Verify the truncated series exactly; exit 0 only if all members pass
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Check the sufficient conditions for family independence (JSON)
    Independence {
        #[command(flatten)]
        spec: SpecArgs,
        /// Probe a specific exponent b instead of the derived one
        #[arg(long)]
        b: Option<String>,
    },
    /// Hypergeometric data (full and reduced) for one member (JSON)
    Pfq {
        #[command(flatten)]
        spec: SpecArgs,
        /// Member index
        #[arg(long, default_value_t = 0)]
        i: usize,
        /// Evaluate the reduced series at this argument z (series in K*z)
        #[arg(long)]
        z: Option<f64>,
        /// Relative tolerance for evaluation
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Cap on summed series terms
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Params { spec } => commands::cmd_params(&spec.to_spec()?),
        Command::Coeffs { spec, i, terms } => commands::cmd_coeffs(&spec.to_spec()?, i, terms),
        Command::Eval { spec, eval } => commands::cmd_eval(&spec.to_spec()?, &eval),
        Command::Verify { spec, verify } => commands::cmd_verify(&spec.to_spec()?, &verify),
        Command::Independence { spec, b } => {
            commands::cmd_independence(&spec.to_spec()?, b.as_deref())
        }
        Command::Pfq {
            spec,
            i,
            z,
            tol,
            max_terms,
        } => commands::cmd_pfq(&spec.to_spec()?, i, z, tol, max_terms),
    }
}

/// Convergence failures are runtime failures (1); everything else a
/// command can reject is invalid input (2).
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::MaxTermsExceeded { .. } => 1,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {}", err);
            std::process::exit(exit_code(&err));
        }
    }
}
