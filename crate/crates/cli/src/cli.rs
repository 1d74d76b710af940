use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "isopower", version, about = "Abelian varieties isogenous to a power of an elliptic curve over a finite field")]
pub struct Cli {
    /// Largest field order that may be built.
    #[arg(long, global = true)]
    pub bound_q: Option<u64>,
    /// Largest extension degree over the curve's field.
    #[arg(long, global = true)]
    pub bound_ext: Option<u32>,
    /// Largest |D| for class group computations.
    #[arg(long, global = true)]
    pub bound_disc: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 over F_{p^m}. A coefficient is an
/// integer or a comma-separated list of polynomial coefficients, lowest degree first.
#[derive(Debug, Args)]
pub struct CurveArgs {
    pub p: u64,
    pub m: u32,
    #[arg(num_args = 5, value_names = ["A1", "A2", "A3", "A4", "A6"], allow_negative_numbers = true)]
    pub coefficients: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether HOM_R(−, E) is an equivalence for the given curve.
    ClassifyCurve(CurveArgs),
    /// List the isomorphism classes of rank-n modules over the order of discriminant D.
    #[command(allow_negative_numbers = true)]
    EnumerateModules { disc: i64, n: usize },
    /// Verdict, optionally with the counts of varieties in and around the image.
    Decide {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        image: bool,
        #[arg(long, default_value_t = 2)]
        max_rank: usize,
    },
    /// Read a subgroup as JSON from stdin and test whether it is a kernel subgroup.
    KernelTest {
        #[command(flatten)]
        curve: OptionalCurve,
    },
    /// Curves over F_{p²} with (p + 1)² points, or (p − 1)² with --minimal.
    MaximalScan {
        p: u64,
        #[arg(long)]
        minimal: bool,
        #[arg(long, default_value_t = 3)]
        g: usize,
        /// Test this many random curves instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Point counts and torsion of HOM_R(M, E) for a module given by its normal form.
    FunctorEval {
        #[command(flatten)]
        curve: CurveArgs,
        /// Conductor chain f_1, …, f_n (each divisible by the next).
        #[arg(long, value_delimiter = ',', required = true)]
        conductors: Vec<u64>,
        /// Steinitz class as a form a,b,c; the principal form by default.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        steinitz: Option<Vec<i64>>,
        /// Discriminant of the base order; defaults to the order of conductor f_1.
        #[arg(long, allow_negative_numbers = true)]
        disc: Option<i64>,
        #[arg(long, default_value_t = 3)]
        degrees: u32,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Compare brute-force kernel subgroups with the stability criterion.
    OracleCompare {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Largest number of endomorphisms combined in one brute-force kernel.
        #[arg(long, default_value_t = 4)]
        s_max: usize,
    },
}

/// Curve given on the command line, or else inside the JSON input.
#[derive(Debug, Args)]
pub struct OptionalCurve {
    pub p: Option<u64>,
    pub m: Option<u32>,
    #[arg(num_args = 5, value_names = ["A1", "A2", "A3", "A4", "A6"], allow_negative_numbers = true)]
    pub coefficients: Vec<String>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ClassifyCurve(_) => "classify-curve",
            Command::EnumerateModules { .. } => "enumerate-modules",
            Command::Decide { .. } => "decide",
            Command::KernelTest { .. } => "kernel-test",
            Command::MaximalScan { .. } => "maximal-scan",
            Command::FunctorEval { .. } => "functor-eval",
            Command::OracleCompare { .. } => "oracle-compare",
        }
    }
}
