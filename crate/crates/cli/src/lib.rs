//! Batch front end: subcommands mirror the library operations, instances
//! come from files or sequence manifests, and reports are emitted as JSON or
//! CSV with optional SVG plot data.
//!
//! Exit codes: 0 success (warnings allowed), 1 internal error, 2 input error.

pub mod commands;
pub mod plot;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use report::{OutFormat, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable supplying the default worker count.
pub const JOBS_ENV: &str = "COSTBETA_JOBS";

#[derive(Debug, Parser)]
#[command(name = "costbeta", version, about = "Finite-scale cost and l2-Betti approximation tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for table cells.
    #[arg(long, global = true, env = JOBS_ENV)]
    pub jobs: Option<usize>,
    /// Seed for randomized solvers and generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub out: OutFormat,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Write SVG plot data of the main table.
    #[arg(long, global = true)]
    pub emit_plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Solver {
    Auto,
    Exact,
    Heuristic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graphing cost, principal cost and orbit count of a labeled graphing.
    Cost {
        #[arg(long)]
        graphing: PathBuf,
    },
    /// Fixed/free decomposition of one bisection of a graphing.
    Decompose {
        #[arg(long)]
        graphing: PathBuf,
        #[arg(long, default_value_t = 0)]
        bisection: usize,
    },
    /// Decide L-Lipschitz containment of one graphing in another.
    Embeds {
        #[arg(long)]
        sub: PathBuf,
        #[arg(long = "super")]
        sup: PathBuf,
        #[arg(long = "L")]
        l: usize,
        /// Word of length k may use only the first k generators.
        #[arg(long)]
        indexed: bool,
        /// One word per bisection instead of one per pair.
        #[arg(long)]
        strict: bool,
    },
    /// Minimum L-Lipschitz cost of one graph.
    Lipcost {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "L")]
        l: usize,
        #[arg(long, conflicts_with = "heuristic")]
        exact: bool,
        #[arg(long)]
        heuristic: bool,
    },
    /// Combinatorial-cost table over a graph sequence.
    Ccost {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long = "Lmax")]
        l_max: Option<usize>,
        #[arg(long)]
        n0: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        solver: Solver,
        #[arg(long, default_value_t = 16)]
        degree_bound: usize,
    },
    /// Schreier graph of a permutation action.
    Schreier {
        #[arg(long)]
        action: PathBuf,
    },
    /// Subgroup ranks and coset costs along a chain of actions.
    RankGradient {
        /// Chain file, or a manifest of kind actions.
        #[arg(long)]
        chain: PathBuf,
    },
    /// Largest fixed-point fraction of short reduced words.
    Farber {
        /// Action file, chain file, or a manifest of kind actions.
        #[arg(long)]
        action: PathBuf,
        #[arg(long = "R", value_delimiter = ',', required = true)]
        r: Vec<usize>,
        /// Accept permutations that violate relators and report how much.
        #[arg(long)]
        labeled: bool,
    },
    /// q-Rips complex of a graph.
    Rips {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
        /// Also write the complex file here.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Betti numbers of a complex or of each fiber of a fibered complex.
    Betti {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        i: usize,
        /// `q` or `fp:P`.
        #[arg(long, default_value = "q")]
        field: String,
        /// Also report the Laplacian kernel dimension (over Q).
        #[arg(long)]
        laplacian: bool,
    },
    /// Normalized image dimension of H_i(sub) -> H_i(super).
    Nabla {
        #[arg(long)]
        sub: PathBuf,
        #[arg(long = "super")]
        sup: PathBuf,
        #[arg(long)]
        i: usize,
    },
    /// Rips image-dimension table over a graph sequence.
    BetaD {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',')]
        qgrid: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        pgrid: Option<Vec<usize>>,
        #[arg(long)]
        n0: Option<usize>,
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Short-cycle space table over a graph sequence.
    ElekBeta {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_delimiter = ',')]
        qgrid: Option<Vec<usize>>,
        #[arg(long)]
        n0: Option<usize>,
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long, default_value_t = 50_000_000)]
        budget: usize,
    },
    /// Local connectivity of a Rips complex, checked in homology.
    Connectivity {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        inner: usize,
        #[arg(long)]
        outer: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Spectral measure of an integer symmetric matrix.
    Spectral {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 10)]
        bins: usize,
    },
    /// Small-eigenvalue mass bound and nonzero eigenvalue product.
    LueckCheck {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
    },
    /// Normalized kernel dimensions along a matrix sequence.
    KernelSeq {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Write a built-in instance: a generator expression such as
    /// `cycle 6`, `random-schreier 2 200` (seed from --seed) or
    /// `double-cover-chain 6`.
    Generate {
        family: String,
        params: Vec<String>,
        /// Base action for double covers, as an expression.
        #[arg(long, default_value = "bouquet(2)")]
        base: String,
    },
}

/// An input problem detected by the front end itself.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn classify(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if cause.is::<InputError>()
            || cause.is::<costbeta_core::Error>()
            || cause.is::<std::io::Error>()
        {
            return EXIT_INPUT;
        }
    }
    EXIT_INTERNAL
}

/// Runs the front end on explicit arguments (the first being the program
/// name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let job = job_echo(&args);
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        commands::execute(&cli, job)
    }));
    let outcome = match result {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "error: {e:#}");
            return classify(&e);
        }
        Err(_) => {
            let _ = writeln!(stderr, "error: internal failure");
            return EXIT_INTERNAL;
        }
    };
    match emit(&cli, outcome, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            classify(&e)
        }
    }
}

/// Arguments echoed into reports, minus options that only affect where
/// output goes or how many threads run.
fn job_echo(args: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        let s = a.to_string_lossy().to_string();
        if skip {
            skip = false;
            continue;
        }
        if ["--jobs", "--output", "--emit-plot"].contains(&s.as_str()) {
            skip = true;
            continue;
        }
        if ["--jobs=", "--output=", "--emit-plot="].iter().any(|p| s.starts_with(p)) {
            continue;
        }
        out.push(s);
    }
    out
}

fn emit(
    cli: &Cli,
    outcome: commands::Outcome,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> anyhow::Result<()> {
    let text = match &outcome {
        commands::Outcome::Report { report, .. } => {
            for w in &report.warnings {
                writeln!(stderr, "warning: {w}")?;
            }
            report.render(cli.out)
        }
        commands::Outcome::Instance(text) => text.clone(),
    };
    match &cli.output {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if let Some(path) = &cli.emit_plot {
        match &outcome {
            commands::Outcome::Report { plot: Some(svg), .. } => std::fs::write(path, svg)?,
            _ => writeln!(stderr, "warning: this command has no plot data")?,
        }
    }
    Ok(())
}
