//! Command-line front end for the qfhsp toolkit.
//!
//! [`run`] parses arguments into a [`RunConfig`], dispatches one subcommand and
//! renders the result as JSON lines or CSV. Every line carries the command,
//! crate version, seed and the full parameter echo.

mod commands;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qfhsp::sampling::Fraction;

pub use output::{render, Report};

/// Exit code for success or a passing verification.
pub const EXIT_OK: i32 = 0;
/// Exit code for an algorithmic failure or a failing verification.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for invalid arguments or parameters.
pub const EXIT_INVALID: i32 = 2;
/// Exit code for an unreadable, malformed or inconsistent oracle file.
pub const EXIT_ORACLE: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "qfhsp", version, about = "Quantum Fourier transforms, Fourier sampling and hidden subgroup algorithms on explicit statevectors")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice (any u64)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format: one JSON object per line, or CSV with a header row
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write results to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Named policies for deriving the working modulus `M`.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MPolicy {
    /// M = RN
    Rn,
    /// M = 2^ceil(log2(8RN)), the smallest power of two with 4RN/M at most 1/2
    Pow2,
}

impl MPolicy {
    pub fn name(self) -> &'static str {
        match self {
            MPolicy::Rn => "rn",
            MPolicy::Pow2 => "pow2",
        }
    }

    pub fn modulus(self, n: usize, r: usize) -> Option<usize> {
        let rn = n.checked_mul(r)?;
        match self {
            MPolicy::Rn => Some(rn),
            MPolicy::Pow2 => rn.checked_mul(8).map(usize::next_power_of_two),
        }
    }
}

/// Policy for the period-finding parameters over the reals.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealPolicy {
    /// M = 2^min(n+6, 10), N = 16M, J = 2^n, threshold M/2^(m+n), range J·M/2^n, n² samples
    Tuned,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyId {
    /// Embedding of F_N into F_M (needs --N, --M with M > N, --trials)
    Fsl,
    /// Exhaustive point-mass amplitude claims (needs --N, --M with M > N)
    Pointmass,
    /// Repetition witness distance (needs --N, --R, --trials; --M or --auto-m, default M = RN)
    Ftt,
    /// L1 distance of the sampled distribution (needs --N, --R, --trials; --M or --auto-m, default M = RN)
    Ftts,
    /// Falloff, shift and tail claims (needs --N, --R, --trials; --M or --auto-m, default M = RN)
    TailShift,
    /// Approximate circulant bound and circulant norm fact (needs --N, --M with M > 8N, --trials)
    Circulant,
    /// Real-line falloff, integral-period closeness and rescaled separation (needs --p or --oracle, --M, --N, --k, --t, --d)
    Real,
    /// Fixed FSL grid (needs --trials)
    SuiteFsl,
    /// Fixed tail and shift grid (needs --trials)
    SuiteTailShift,
    /// Fixed circulant grid (needs --trials)
    SuiteCirculant,
    /// Real-line families and zero cases
    SuiteReal,
}

impl VerifyId {
    pub fn name(self) -> &'static str {
        match self {
            VerifyId::Fsl => "fsl",
            VerifyId::Pointmass => "pointmass",
            VerifyId::Ftt => "ftt",
            VerifyId::Ftts => "ftts",
            VerifyId::TailShift => "tail-shift",
            VerifyId::Circulant => "circulant",
            VerifyId::Real => "real",
            VerifyId::SuiteFsl => "suite-fsl",
            VerifyId::SuiteTailShift => "suite-tail-shift",
            VerifyId::SuiteCirculant => "suite-circulant",
            VerifyId::SuiteReal => "suite-real",
        }
    }
}

/// Subgroup generators written as `g;g;...` with each `g` comma separated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators(pub Vec<Vec<u64>>);

fn parse_generators(s: &str) -> Result<Generators, String> {
    if s.is_empty() {
        return Ok(Generators(Vec::new()));
    }
    s.split(';')
        .map(|g| g.split(',').map(|x| x.trim().parse::<u64>().map_err(|_| format!("bad generator entry {x:?}"))).collect())
        .collect::<Result<_, _>>()
        .map(Generators)
}

fn parse_fraction(s: &str) -> Result<Fraction, String> {
    s.parse().map_err(|e: qfhsp::Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct ModulusArgs {
    /// Working modulus M (M ≥ RN, M ≤ 2^26)
    #[arg(long = "M", value_name = "M", conflicts_with = "auto_m")]
    pub m: Option<usize>,
    /// Derive M by a named policy instead of giving --M
    #[arg(long = "auto-m", value_enum)]
    pub auto_m: Option<MPolicy>,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    /// Oracle description file (key=value tokens); errors exit with code 3
    #[arg(long, value_name = "PATH")]
    pub oracle: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Exact QFT circuit over 2^n: size, depth and deviation from the DFT
    QftExact {
        /// Number of qubits (1 ≤ n ≤ 20; the matrix check runs for n ≤ 10)
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=20))]
        n: u32,
        /// Emit every matrix entry as row,col,re,im (n ≤ 8)
        #[arg(long)]
        emit_matrix: bool,
    },
    /// Truncated QFT keeping rotations up to R_kmax
    QftAqft {
        /// Number of qubits (1 ≤ n ≤ 16)
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
        n: u32,
        /// Largest kept rotation index (2 ≤ kmax ≤ n)
        #[arg(long)]
        kmax: u32,
    },
    /// Randomly shifted parallel QFT on a random state
    QftParallel {
        /// Number of qubits (2 ≤ n ≤ 12, 2k must divide n)
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=12))]
        n: u32,
        /// Block size k of the phase estimation (k ≥ 1, 2k | n)
        #[arg(long)]
        k: u32,
    },
    /// Repetition algorithm for the QFT over Z_N on a random state
    QftModn {
        /// Modulus N (N ≥ 1)
        #[arg(long = "N", value_name = "N")]
        big_n: usize,
        /// Repetitions R (a power of two)
        #[arg(long = "R", value_name = "R")]
        r: usize,
        #[command(flatten)]
        modulus: ModulusArgs,
    },
    /// Quantum chirp-z QFT over Z_N on a random state
    QftChirpz {
        /// Modulus N (N ≥ 1)
        #[arg(long = "N", value_name = "N")]
        big_n: usize,
        /// Target error (0 < eps ≤ 1)
        #[arg(long)]
        eps: f64,
    },
    /// QFT over Z_N through the CRT decomposition of N on a random state
    QftSmooth {
        /// Modulus N (N ≥ 1)
        #[arg(long = "N", value_name = "N")]
        big_n: usize,
        /// Pairwise coprime factors with product N; omitted means the prime powers of N
        #[arg(long, value_delimiter = ',')]
        factors: Option<Vec<u64>>,
    },
    /// Eigenvalue estimation of the shift on Z_N for the Fourier state i
    EigEst {
        /// Modulus N (N ≥ 2)
        #[arg(long = "N", value_name = "N")]
        big_n: usize,
        /// Control qubits (1 ≤ k, k plus the bits of N at most 20)
        #[arg(long)]
        k: usize,
        /// Fourier state index (0 ≤ i < N)
        #[arg(long)]
        i: usize,
        /// Number of estimates (≥ 1)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Fourier sampling of a random state with known modulus N
    SampleKnown {
        /// Modulus N (N ≥ 1)
        #[arg(long = "N", value_name = "N")]
        big_n: usize,
        /// Repetitions R (a power of two)
        #[arg(long = "R", value_name = "R")]
        r: usize,
        #[command(flatten)]
        modulus: ModulusArgs,
        /// Number of samples (≥ 1)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Fourier sampling of a random N-periodic state of length M with unknown N
    SampleUnknown {
        /// Hidden period N (1 ≤ N ≤ M)
        #[arg(long = "N", value_name = "N")]
        big_n: usize,
        /// Transform length M (N ≤ M ≤ 2^26)
        #[arg(long = "M", value_name = "M")]
        m: usize,
        /// Denominator bound T for rounding (T ≥ 1)
        #[arg(long = "T", value_name = "T")]
        t: u64,
        /// Number of samples (≥ 1)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Simon's problem on a 2-to-1 or 1-1 function over (Z_2)^n
    Simon {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Input bits (1 ≤ n ≤ 20); required without --oracle, must match it otherwise
        #[arg(long)]
        n: Option<u32>,
        /// Subroutine round budget (≥ 1); omitted means 4n
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Hidden subgroup of a finite abelian group with a distinct-coset oracle
    Hsp {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Cyclic factor orders (each ≥ 1, group order at most 10^6); required without --oracle
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<u64>>,
        /// Hidden subgroup generators g;g;... (entries reduced mod the orders); required without --oracle
        #[arg(long, value_parser = parse_generators)]
        subgroup: Option<Generators>,
    },
    /// Hidden subgroup with an oracle that is 1/d-separated but not coset-constant
    HspRelaxed {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Cyclic factor orders (each ≥ 1, group order at most 10^6); required without --oracle
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<u64>>,
        /// Hidden subgroup generators g;g;...; required without --oracle
        #[arg(long, value_parser = parse_generators)]
        subgroup: Option<Generators>,
        /// Separation parameter d (d ≥ 2)
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        d: u32,
    },
    /// Period finding over Z for a period at most T
    PeriodZ {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Hidden period (1 ≤ period ≤ T); required without --oracle
        #[arg(long)]
        period: Option<u64>,
        /// Period bound T (T ≥ 2)
        #[arg(long = "T", value_name = "T")]
        t: u64,
        /// Relaxed path with separation parameter d (d ≥ 2)
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        d: Option<u32>,
    },
    /// Leading bits of a rational period of a step function over the reals
    PeriodR {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Period a/b of a square wave (p > 0); required without --oracle
        #[arg(long, value_parser = parse_fraction)]
        p: Option<Fraction>,
        /// Period bound: p < 2^n (1 ≤ n ≤ 20)
        #[arg(long)]
        n: u32,
        /// Leading bits to recover (1 ≤ m ≤ 63)
        #[arg(long)]
        m: u32,
        /// Average step at least 2^-k (k ≥ 0)
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Derive M, N, J, threshold, range and samples by a named policy
        #[arg(long = "auto-m", value_enum, conflicts_with_all = ["big_m", "big_n", "j", "threshold", "range", "samples"])]
        auto_m: Option<RealPolicy>,
        /// Fourier modulus M (a power of two)
        #[arg(long = "M", value_name = "M")]
        big_m: Option<u64>,
        /// Grid denominator N (a power of two above M, MN ≤ 2^24)
        #[arg(long = "N", value_name = "N")]
        big_n: Option<u64>,
        /// Denominator bound J for the sample ratios (J ≥ 2)
        #[arg(long = "J", value_name = "J")]
        j: Option<u64>,
        /// Discard samples with |k| below this
        #[arg(long)]
        threshold: Option<u64>,
        /// Discard samples with |k| above this (range ≥ threshold)
        #[arg(long)]
        range: Option<u64>,
        /// Fourier samples per run (≥ 1)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Check one inequality family exactly and emit BoundReport lines; exit 0 iff all pass
    Verify {
        /// Check to run
        #[arg(value_enum)]
        id: VerifyId,
        /// Modulus N (N ≥ 2); for `real` the grid denominator (a power of two above M)
        #[arg(long = "N", value_name = "N")]
        big_n: Option<u64>,
        /// Repetitions R (a power of two)
        #[arg(long = "R", value_name = "R")]
        r: Option<u64>,
        #[command(flatten)]
        modulus: VerifyModulusArgs,
        /// Random states per check (≥ 1)
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Tail parameter k for `real` (k divides N)
        #[arg(long)]
        k: Option<u64>,
        /// Period perturbation t for `real` (t ≥ 0, a fraction a/b)
        #[arg(long, value_parser = parse_fraction)]
        t: Option<Fraction>,
        /// Separation parameter d for `real` (d ≥ 1)
        #[arg(long)]
        d: Option<u32>,
        /// Square-wave period a/b for `real` (p > 0)
        #[arg(long, value_parser = parse_fraction)]
        p: Option<Fraction>,
        #[command(flatten)]
        oracle: OracleArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct VerifyModulusArgs {
    /// Working modulus M (fsl, pointmass: M > N; ftt, ftts, tail-shift: M ≥ RN; circulant: M > 8N; real: a power of two)
    #[arg(long = "M", value_name = "M", conflicts_with = "auto_m")]
    pub m: Option<u64>,
    /// Derive M by a named policy (ftt, ftts, tail-shift only; default rn)
    #[arg(long = "auto-m", value_enum)]
    pub auto_m: Option<MPolicy>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::QftExact { .. } => "qft-exact",
            Command::QftAqft { .. } => "qft-aqft",
            Command::QftParallel { .. } => "qft-parallel",
            Command::QftModn { .. } => "qft-modn",
            Command::QftChirpz { .. } => "qft-chirpz",
            Command::QftSmooth { .. } => "qft-smooth",
            Command::EigEst { .. } => "eig-est",
            Command::SampleKnown { .. } => "sample-known",
            Command::SampleUnknown { .. } => "sample-unknown",
            Command::Simon { .. } => "simon",
            Command::Hsp { .. } => "hsp",
            Command::HspRelaxed { .. } => "hsp-relaxed",
            Command::PeriodZ { .. } => "period-z",
            Command::PeriodR { .. } => "period-r",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Why a run stopped early, mapped onto the exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Invalid(String),
    Oracle(String),
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Oracle(_) => EXIT_ORACLE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Invalid(_) => "invalid_input",
            CliError::Oracle(_) => "oracle_file",
            CliError::Failure(_) => "algorithm_failure",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Oracle(m) | CliError::Failure(m) => m,
        }
    }

    /// One JSON object on one line.
    pub fn to_line(&self) -> String {
        let v = serde_json::json!({ "error": self.kind(), "exit_code": self.code(), "message": self.message() });
        format!("{v}\n")
    }
}

impl From<qfhsp::Error> for CliError {
    fn from(e: qfhsp::Error) -> Self {
        match e {
            qfhsp::Error::AlgorithmFailure(_) => CliError::Failure(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

/// Result of one invocation: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (including the program name) without running anything.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    RunConfig::try_parse_from(args)
}

/// Executes a parsed configuration and renders its report.
pub fn execute(config: &RunConfig) -> Result<(Report, String), CliError> {
    let report = commands::dispatch(config)?;
    let text = render(&report, config.format, config.seed).map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok((report, text))
}

/// Parses, runs and renders one invocation. Writes the artifact to `--output` when given.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_config(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: EXIT_OK, stdout: text, stderr: String::new() },
                _ => {
                    let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
                    Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: CliError::Invalid(first).to_line() }
                }
            };
        }
    };
    match execute(&config) {
        Ok((report, text)) => {
            let code = if report.pass { EXIT_OK } else { EXIT_FAILURE };
            match &config.output {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => {
                        let err = CliError::Invalid(format!("cannot write {}: {e}", path.display()));
                        Outcome { code: err.code(), stdout: String::new(), stderr: err.to_line() }
                    }
                },
                None => Outcome { code, stdout: text, stderr: String::new() },
            }
        }
        Err(e) => Outcome { code: e.code(), stdout: String::new(), stderr: e.to_line() },
    }
}
