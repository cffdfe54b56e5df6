//! The `lococo` command line. Every command prints one JSON document on
//! stdout; failures print `{"error": …}` on stderr and exit with
//!
//! - `2` for invalid input (unparsable arguments, malformed files,
//!   inadmissible weights),
//! - `3` when the request is well formed but infeasible (failed search
//!   preconditions, cycles not in general position),
//! - `4` when a randomized search exhausts its trials.
//!
//! Exact scalars are always JSON strings.

mod commands;
mod inputs;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub use commands::execute;

#[derive(Debug, Parser)]
#[command(name = "lococo", version, about = "Exact twisted homology, intersections and tensor invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degrees in which cohomology with coefficients of weight μ can be nonzero.
    Ranges(RangesArgs),
    /// Interlacing branching of a partition to the next smaller group.
    Branch(BranchArgs),
    /// The invariant tensor τ_x for a frame x.
    Invariant(InvariantArgs),
    /// The pairing (τ_x, τ_y).
    Pair(PairArgs),
    /// Twisted homology dimensions and representatives.
    Homology(ComplexArgs),
    /// Twisted cohomology dimensions and representatives.
    Cohomology(ComplexArgs),
    /// Cup product of two cochains.
    Cup(CupArgs),
    /// Duality map α ↦ α ∩ [X], or the Poincaré dual of a cycle.
    Dual(DualArgs),
    /// Geometric intersection of two decomposable cycles.
    Intersect(IntersectArgs),
    /// Homology of a finite group through the bar complex.
    GroupHomology(GroupArgs),
    /// Randomized searches for rational witness tuples.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
pub struct RangesArgs {
    #[arg(long)]
    pub n: usize,
    /// Comma separated weight; trailing zeros may be omitted. Without it
    /// every dominant weight up to `--max-size` is listed.
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
}

#[derive(Debug, Args)]
pub struct BranchArgs {
    #[arg(long)]
    pub mu: String,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub mu: String,
    /// Use the form x₁² + ⋯ + xₙ² − √m·x_{n+1}² instead of the standard
    /// rational form of signature (n,1).
    #[arg(long)]
    pub sqrt: Option<u64>,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Vectors file, or `e` (standard frame) or `u` (isotropic frame).
    #[arg(long)]
    pub x: String,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
}

#[derive(Debug, Args)]
pub struct ComplexArgs {
    #[arg(long)]
    pub complex: String,
    /// System file; the trivial rank-1 system when omitted.
    #[arg(long)]
    pub system: Option<String>,
    /// Report only this degree, with representatives.
    #[arg(long)]
    pub deg: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TripleArgs {
    #[arg(long)]
    pub complex: String,
    #[arg(long)]
    pub e: Option<String>,
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub g: Option<String>,
    /// Pairing file or one of `scalar`, `evaluation`, `left_unit`,
    /// `right_unit`.
    #[arg(long, default_value = "scalar")]
    pub pairing: String,
}

#[derive(Debug, Args)]
pub struct CupArgs {
    #[command(flatten)]
    pub systems: TripleArgs,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
}

#[derive(Debug, Args)]
pub struct DualArgs {
    #[arg(long)]
    pub complex: String,
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long, conflicts_with = "cycle", required_unless_present = "cycle")]
    pub cochain: Option<String>,
    #[arg(long)]
    pub cycle: Option<String>,
}

#[derive(Debug, Args)]
pub struct IntersectArgs {
    #[command(flatten)]
    pub systems: TripleArgs,
    #[arg(long)]
    pub cycle1: String,
    #[arg(long)]
    pub cycle2: String,
    /// Also compute 𝒟(PD(b) ∪ PD(a)) and report whether it is homologous
    /// to the geometric product.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Group file, `Z/n` or `S3`.
    #[arg(long)]
    pub group: String,
    /// Rep file, `trivial`, `trivial:r`, `sign` or `standard`.
    #[arg(long, default_value = "trivial")]
    pub rep: String,
    #[arg(long)]
    pub deg: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_degree: usize,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(subcommand)]
    pub kind: SearchKind,
}

#[derive(Debug, Args)]
pub struct SearchCommon {
    #[arg(long)]
    pub n: usize,
    /// Square-free m > 1 defining the field ℚ(√m).
    #[arg(long, default_value_t = 2)]
    pub sqrt: u64,
    #[arg(long, default_value_t = lococo_core::geometry::DEFAULT_TRIALS)]
    pub trials: usize,
    /// Generated and echoed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum SearchKind {
    /// Tuples y with (τ_x, τ_{y′}) ≠ 0 spanning a positive definite hyperplane with x.
    Complementary {
        #[command(flatten)]
        common: SearchCommon,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        mu: String,
        /// Vectors file for x; the standard frame e₁, …, e_k when omitted.
        #[arg(long)]
        x: Option<String>,
    },
    /// Tuples w for the cup product of two invariant classes.
    Cup {
        #[command(flatten)]
        common: SearchCommon,
        #[arg(long)]
        q1: usize,
        #[arg(long)]
        q2: usize,
        #[arg(long, default_value = "0")]
        mu1: String,
        #[arg(long, default_value = "0")]
        mu2: String,
    },
}

/// A failed command with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    pub detail: Option<Value>,
}

impl CliError {
    pub fn invalid(message: impl ToString) -> Self {
        CliError {
            code: 2,
            message: message.to_string(),
            detail: None,
        }
    }

    pub fn infeasible(message: impl ToString) -> Self {
        CliError {
            code: 3,
            message: message.to_string(),
            detail: None,
        }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    fn to_json(&self) -> Value {
        let mut v = json!({"error": self.message, "code": self.code});
        if let (Some(Value::Object(extra)), Value::Object(map)) = (&self.detail, &mut v) {
            map.extend(extra.clone());
        }
        v
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    /// Parsed stdout; `Value::Null` when it is not JSON.
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or(Value::Null)
    }

    /// Parsed stderr; `Value::Null` when it is not JSON.
    pub fn error_json(&self) -> Value {
        serde_json::from_str(&self.stderr).unwrap_or(Value::Null)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("{}\n", CliError::invalid(text.trim_end()).to_json()),
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(v) => Outcome {
            code: 0,
            stdout: format!("{}\n", serde_json::to_string_pretty(&v).expect("values serialize")),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.code,
            stdout: String::new(),
            stderr: format!("{}\n", e.to_json()),
        },
    }
}
