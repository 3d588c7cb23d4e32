use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use species_partitions::inference::{ep_pmf_kn, format_real, pmf_k, pmf_kn, posterior_k, PmfTable, Truncation};
use species_partitions::model::{
    ep_eppf, eppf, restricted_eppf, EwensPitmanParams, PartitionState, QuadraticParams, RestrictedStart,
};
use species_partitions::sampler::{replicate, sample_restricted, sample_rule, MixtureSampler};
use species_partitions::verify::{run_suite, SuiteConfig, DEFAULT_SEED, FAMILIES};
use species_partitions::Error;

/// Exact laws, samplers and self-checks for exchangeable partitions with a
/// quadratic new-box rule (family `gnedin`) and for the Ewens–Pitman family.
///
/// Exit status: 0 on success, 1 when a verification check fails, 2 on
/// invalid arguments or parameters.
#[derive(Parser, Debug)]
#[command(name = "species-partitions", version)]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw partitions of [n], one JSON record per line.
    Sample(SampleArgs),
    /// Tabulate the law of K_n (`kn`) or of the terminal box count K (`k`).
    Pmf(PmfArgs),
    /// Posterior law of K after observing k boxes among n balls (zeta = 0).
    Posterior(PosteriorArgs),
    /// Probability of one partition with the given block sizes.
    Eppf(EppfArgs),
    /// Run the verification suite; nonzero exit iff a check fails.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    #[value(name = "gnedin")]
    Quadratic,
    EwensPitman,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value = "gnedin")]
    family: FamilyName,
    /// gnedin: gamma >= 0.
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// gnedin: zeta, with k^2 - gamma*k + zeta >= 0 up to its first integer root.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    zeta: f64,
    /// ewens-pitman: alpha < 1.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// ewens-pitman: theta > -alpha, or theta = -alpha*kappa when alpha < 0.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
}

enum Family {
    Quadratic(QuadraticParams),
    EwensPitman(EwensPitmanParams),
}

impl FamilyArgs {
    fn gamma(&self) -> Result<f64, Failure> {
        self.gamma
            .ok_or_else(|| usage("--gamma is required for the gnedin family"))
    }

    fn resolve(&self) -> Result<Family, Failure> {
        match self.family {
            FamilyName::Quadratic => Ok(Family::Quadratic(QuadraticParams::new(self.gamma()?, self.zeta)?)),
            FamilyName::EwensPitman => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| usage("--alpha is required for the ewens-pitman family"))?;
                let theta = self
                    .theta
                    .ok_or_else(|| usage("--theta is required for the ewens-pitman family"))?;
                Ok(Family::EwensPitman(EwensPitmanParams::new(alpha, theta)?))
            }
        }
    }

    fn quadratic(&self, what: &str) -> Result<QuadraticParams, Failure> {
        match self.resolve()? {
            Family::Quadratic(p) => Ok(p),
            Family::EwensPitman(_) => Err(usage(format!("{what} is only available for the gnedin family"))),
        }
    }
}

#[derive(Args, Debug)]
struct TruncationArgs {
    /// Stop listing once the remaining mass is below eps.
    #[arg(long, default_value_t = 1e-10)]
    eps: f64,
    /// Never list beyond this index; the remaining mass goes to the tail bound.
    #[arg(long, default_value_t = 100_000)]
    kappa_max: u64,
}

impl TruncationArgs {
    fn get(&self) -> Result<Truncation, Failure> {
        if self.kappa_max == 0 {
            return Err(usage("--kappa-max must be at least 1"));
        }
        Ok(Truncation::new(self.eps, self.kappa_max)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Sequential,
    Mixture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    reps: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "sequential")]
    method: Method,
    /// Fixed allocation of the first balls, e.g. "[[1],[2]]" (gnedin, zeta = 0,
    /// sequential); then -(m-k) < gamma < k is allowed.
    #[arg(long)]
    initial: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PmfKind {
    /// Number of boxes among the first n balls.
    Kn,
    /// Terminal number of boxes.
    K,
}

#[derive(Args, Debug)]
struct PmfArgs {
    #[arg(value_enum)]
    kind: PmfKind,
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    trunc: TruncationArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: TableFormat,
}

#[derive(Args, Debug)]
struct PosteriorArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// 0 < gamma < 1.
    #[arg(long)]
    gamma: f64,
    #[command(flatten)]
    trunc: TruncationArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: TableFormat,
}

#[derive(Args, Debug)]
struct EppfArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Block sizes in order of least element, e.g. 2,3,1.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Condition on this allocation of the first balls (gnedin, zeta = 0).
    #[arg(long)]
    initial: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: TableFormat,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run a single family of checks.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(FAMILIES))]
    check: Option<String>,
    /// Break the weight identity in the recursion checks; they must then fail.
    #[arg(long)]
    perturb: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    /// Override the Monte Carlo sample sizes.
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// Why a command did not succeed.
enum Failure {
    Usage(String),
    ChecksFailed,
    Io(io::Error),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Out = Box<dyn Write>;

fn write_table(out: &mut Out, table: &PmfTable, format: TableFormat) -> io::Result<()> {
    match format {
        TableFormat::Json => writeln!(out, "{}", table.to_json()),
        TableFormat::Csv => write!(out, "{}", table.to_csv()),
    }
}

fn cmd_sample(args: &SampleArgs, out: &mut Out) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let draws = match (args.family.resolve()?, &args.initial) {
        (Family::EwensPitman(ep), None) => {
            if args.method == Method::Mixture {
                return Err(usage("--method mixture is only available for the gnedin family"));
            }
            replicate(args.seed, args.reps, |s| sample_rule(args.n, &ep, s))?
        }
        (Family::EwensPitman(_), Some(_)) => return Err(usage("--initial is only available for the gnedin family")),
        (Family::Quadratic(p), None) => match args.method {
            Method::Sequential => replicate(args.seed, args.reps, |s| sample_rule(args.n, &p, s))?,
            Method::Mixture => {
                let sampler = MixtureSampler::new(&p, Truncation::default())?;
                replicate(args.seed, args.reps, |s| sampler.sample(args.n, &mut s.rng()))?
            }
        },
        (Family::Quadratic(_), Some(_)) => unreachable!("handled before resolving"),
    };
    for d in draws {
        writeln!(out, "{}", d.to_json())?;
    }
    Ok(())
}

/// `--initial` widens the admissible gamma range, so it bypasses the
/// unrestricted parameter check.
fn cmd_sample_restricted(args: &SampleArgs, initial: &str, out: &mut Out) -> Result<(), Failure> {
    if args.family.family != FamilyName::Quadratic {
        return Err(usage("--initial is only available for the gnedin family"));
    }
    if args.method != Method::Sequential {
        return Err(usage("--initial needs --method sequential"));
    }
    if args.family.zeta != 0.0 {
        return Err(usage(format!(
            "--initial needs zeta = 0, got zeta={}",
            args.family.zeta
        )));
    }
    let start = RestrictedStart::new(PartitionState::parse_blocks(initial)?, args.family.gamma()?)?;
    if args.n < start.initial().n() {
        return Err(usage(format!(
            "--n={} is smaller than the {} balls of --initial",
            args.n,
            start.initial().n()
        )));
    }
    for d in replicate(args.seed, args.reps, |s| sample_restricted(args.n, &start, s))? {
        writeln!(out, "{}", d.to_json())?;
    }
    Ok(())
}

fn cmd_pmf(args: &PmfArgs, out: &mut Out) -> Result<(), Failure> {
    let table = match args.kind {
        PmfKind::Kn => {
            let n = args.n.ok_or_else(|| usage("pmf kn needs --n"))?;
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            match args.family.resolve()? {
                Family::Quadratic(p) => pmf_kn(n, &p)?,
                Family::EwensPitman(ep) => ep_pmf_kn(n, &ep)?,
            }
        }
        PmfKind::K => pmf_k(&args.family.quadratic("pmf k")?, args.trunc.get()?)?,
    };
    write_table(out, &table, args.format)?;
    Ok(())
}

fn cmd_posterior(args: &PosteriorArgs, out: &mut Out) -> Result<(), Failure> {
    let table = posterior_k(args.n, args.k, args.gamma, args.trunc.get()?)?;
    write_table(out, &table, args.format)?;
    Ok(())
}

fn cmd_eppf(args: &EppfArgs, out: &mut Out) -> Result<(), Failure> {
    let p = match &args.initial {
        Some(text) => {
            if args.family.family != FamilyName::Quadratic || args.family.zeta != 0.0 {
                return Err(usage("--initial needs the gnedin family with zeta = 0"));
            }
            let b = PartitionState::parse_blocks(text)?;
            restricted_eppf(&args.sizes, &b.sizes(), args.family.gamma()?)?
        }
        None => match args.family.resolve()? {
            Family::Quadratic(q) => eppf(&args.sizes, &q)?,
            Family::EwensPitman(ep) => ep_eppf(&args.sizes, &ep)?,
        },
    };
    let sizes: Vec<String> = args.sizes.iter().map(|s| s.to_string()).collect();
    let value = format_real(p.to_f64());
    match args.format {
        TableFormat::Json => writeln!(out, "{{\"sizes\":[{}],\"probability\":{value}}}", sizes.join(","))?,
        TableFormat::Csv => writeln!(out, "sizes,probability\n\"{}\",{value}", sizes.join(","))?,
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut Out) -> Result<(), Failure> {
    let cfg = SuiteConfig {
        seed: args.seed,
        reps: args.reps,
        selection: args.check.clone(),
        perturb: args.perturb,
    };
    let reports = run_suite(&cfg)?;
    for r in &reports {
        let line = match args.format {
            ReportFormat::Json => r.to_json_line(),
            ReportFormat::Text => r.to_text_line(),
        };
        writeln!(out, "{line}")?;
    }
    if reports.iter().any(|r| r.failed()) {
        return Err(Failure::ChecksFailed);
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut out: Out = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = match &cli.command {
        Command::Sample(a) => match &a.initial {
            Some(text) => cmd_sample_restricted(a, text, &mut out),
            None => cmd_sample(a, &mut out),
        },
        Command::Pmf(a) => cmd_pmf(a, &mut out),
        Command::Posterior(a) => cmd_posterior(a, &mut out),
        Command::Eppf(a) => cmd_eppf(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
