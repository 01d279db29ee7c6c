use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use alphaperm::hunt::{hunt_with, AlphaSampling, HuntConfig, HuntReport, KindChoice, Target};
use alphaperm::inequality::Checker;
use alphaperm::suite::{check_matrices, random_rational_matrix, random_symmetric_matrix, run_suite, AlphaSet, Suite, SuiteConfig};
use alphaperm::{parse_matrix, random_gram, serialize_matrix, Field, GramKind, GramSpec, Kernels, Matrix, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Algo, BenchArgs, BenchKernel, CheckArgs, Cli, Command, GenArgs, HuntArgs, Mode, ModeArgs, Quantity};

pub enum CliError {
    Usage(String),
    Core(alphaperm::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use alphaperm::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Parse(_) | E::Io(_)) => 3,
            CliError::Core(E::Capacity { .. }) => 4,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<alphaperm::Error> for CliError {
    fn from(e: alphaperm::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(e.into())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Command-line values are usage errors when malformed, unlike file contents.
fn arg<T: std::str::FromStr<Err = alphaperm::Error>>(flag: &str, text: &str) -> Result<T> {
    text.parse().map_err(|e| usage(format!("--{flag}: {e}")))
}

fn read_input(path: &Path) -> Result<Matrix> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Core(alphaperm::Error::Parse(format!("{}: {e}", path.display()))))?
    };
    parse_matrix(&text).map_err(|e| match e {
        alphaperm::Error::Parse(m) => alphaperm::Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
    .map_err(CliError::Core)
}

/// Exact mode refuses float input; float mode converts everything.
fn in_mode(a: Matrix, mode: &ModeArgs) -> Result<Matrix> {
    match mode.mode {
        Mode::Exact if !a.is_exact() => Err(usage("matrix has float entries; pass --mode float to evaluate it")),
        Mode::Exact => Ok(a),
        Mode::Float => Ok(a.to_float()),
    }
}

fn scalar_in_mode(flag: &str, text: &str, mode: &ModeArgs) -> Result<Scalar> {
    let x: Scalar = arg(flag, text)?;
    match mode.mode {
        Mode::Exact if !x.is_exact() => Err(usage(format!("--{flag} {x} is a float; pass --mode float"))),
        Mode::Exact => Ok(x),
        Mode::Float => Ok(x.to_float()),
    }
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| usage(format!("--jobs: {e}")))?;
    Ok(pool.install(f))
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    let kernels = Kernels::new(cli.caps.resolve().map_err(|e| usage(e.to_string()))?);
    match cli.command {
        Command::Compute { quantity } => compute(&kernels, quantity),
        Command::Gen(args) => gen(args),
        Command::Check(args) => check(&kernels, args),
        Command::Hunt(args) => hunt(&kernels, args),
        Command::Bench(args) => bench(&kernels, args),
    }
}

fn compute(k: &Kernels, quantity: Quantity) -> Result<ExitCode> {
    let value = match quantity {
        Quantity::PerAlpha { alpha, algo, file, mode } => {
            let a = in_mode(read_input(&file)?, &mode)?;
            let alpha = scalar_in_mode("alpha", &alpha, &mode)?;
            match algo {
                Algo::Dp => k.per_alpha_dp(&a, &alpha)?,
                Algo::Naive => k.per_alpha_naive(&a, &alpha)?,
            }
        }
        Quantity::Per { file, mode } => k.permanent(&in_mode(read_input(&file)?, &mode)?)?,
        Quantity::Det { file, mode } => k.determinant(&in_mode(read_input(&file)?, &mode)?)?,
        Quantity::Haf { file, mode } => k.hafnian(&in_mode(read_input(&file)?, &mode)?)?,
        Quantity::AlphaDet { alpha, file, mode } => {
            let a = in_mode(read_input(&file)?, &mode)?;
            k.alpha_determinant(&a, &scalar_in_mode("alpha", &alpha, &mode)?)?
        }
        Quantity::PerBetaK { beta, k: blocks, file, mode } => {
            let a = in_mode(read_input(&file)?, &mode)?;
            k.per_beta_k(&a, &scalar_in_mode("beta", &beta, &mode)?, blocks)?
        }
    };
    println!("{value}");
    Ok(ExitCode::SUCCESS)
}

fn gen(args: GenArgs) -> Result<ExitCode> {
    let kind: GramKind = arg("kind", &args.kind)?;
    if args.scale == 0 || args.rank == Some(0) {
        return Err(usage("--scale and --rank must be positive"));
    }
    let spec = GramSpec {
        rank: args.rank,
        unit_diagonal: args.unit_diagonal,
        ..GramSpec::new(args.n, kind, args.scale)
    };
    let a = random_gram(&spec, &mut ChaCha8Rng::seed_from_u64(args.seed));
    let text = serialize_matrix(&a);
    match args.out {
        Some(path) => {
            std::fs::write(&path, text)?;
            println!("{}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write + Send>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout()),
    })
}

fn check(k: &Kernels, args: CheckArgs) -> Result<ExitCode> {
    let config = SuiteConfig {
        alpha_set: arg::<AlphaSet>("alpha-set", &args.alpha_set)?,
        float_tol: (args.mode.mode == Mode::Float).then_some(args.mode.tol),
        ..SuiteConfig::new(arg::<Suite>("suite", &args.suite)?, args.n_max, args.trials, args.seed)
    };
    let checker = Checker::new(*k);
    let matrices = args.matrices.iter().map(|p| read_input(p)).collect::<Result<Vec<_>>>()?;
    if config.float_tol.is_none() && matrices.iter().any(|a| !a.is_exact()) {
        return Err(usage("matrix has float entries; pass --mode float to evaluate it"));
    }
    let report = with_jobs(args.jobs, || {
        if matrices.is_empty() {
            run_suite(&checker, &config)
        } else {
            check_matrices(&checker, &matrices, &config)
        }
    })??;
    let mut out = open_out(&args.findings)?;
    for f in &report.findings {
        writeln!(out, "{}", f.to_json_line())?;
    }
    out.flush()?;
    drop(out);
    print!("{report}");
    let violated = report.has_violation();
    println!("status\t{}", if violated { "violation" } else { "ok" });
    Ok(if violated { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn hunt_config(args: &HuntArgs) -> Result<HuntConfig> {
    let targets = args
        .targets
        .iter()
        .map(|t| arg::<Target>("target", t.trim()))
        .collect::<Result<Vec<_>>>()?;
    let (n_min, n_max) = match (args.n, args.n_min, args.n_max) {
        (Some(n), _, _) => (n, n),
        (None, Some(lo), Some(hi)) => (lo, hi),
        (None, Some(lo), None) => (lo, lo),
        (None, None, Some(hi)) => (1, hi),
        (None, None, None) => return Err(usage("pass --n or --n-min/--n-max")),
    };
    let alpha = match (&args.alpha_range, &args.alpha, &args.alpha_grid) {
        (Some(r), _, _) => AlphaSampling::parse_range(r).map_err(|e| usage(format!("--alpha-range: {e}")))?,
        (None, Some(a), _) => AlphaSampling::Fixed(arg("alpha", a)?),
        (None, None, Some(g)) => AlphaSampling::Grid(
            g.split(',').map(|t| arg("alpha-grid", t.trim())).collect::<Result<Vec<_>>>()?,
        ),
        (None, None, None) => return Err(usage("pass one of --alpha-range, --alpha, --alpha-grid")),
    };
    Ok(HuntConfig {
        targets,
        n_min,
        n_max,
        alpha,
        trials: args.trials,
        seed: args.seed,
        normalize: !args.no_normalize,
        kind: arg::<KindChoice>("kind", &args.kind)?,
        scale: args.scale,
        rank: args.rank,
        keep_smallest: args.keep_smallest,
        timestamp: args.timestamp,
    })
}

fn argmin_path(out: &Path, target: Target) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(format!(".{target}.argmin.mat"));
    PathBuf::from(name)
}

fn hunt(k: &Kernels, args: HuntArgs) -> Result<ExitCode> {
    let config = hunt_config(&args)?;
    let checker = Checker::new(*k);
    config.validate(&checker).map_err(|e| match e {
        alphaperm::Error::Capacity { .. } => CliError::Core(e),
        other => usage(other.to_string()),
    })?;
    let mut out = open_out(&args.out)?;
    let report = with_jobs(args.jobs, || {
        hunt_with(&checker, &config, |f| {
            writeln!(out, "{}", f.to_json_line())?;
            Ok(())
        })
    })??;
    out.flush()?;
    drop(out);
    if let Some(out) = &args.out {
        for s in &report.summaries {
            if let Some(min) = &s.min {
                std::fs::write(argmin_path(out, s.target), serialize_matrix(&min.matrix))?;
            }
        }
    }
    print_hunt_summary(&report, args.out.as_deref());
    let failed = report.violations() > 0 || report.mismatches() > 0;
    if report.mismatches() > 0 {
        eprintln!("alphaperm: fast kernels disagree with the enumeration oracle; this is a bug");
    }
    println!("status\t{}", if failed { "violation" } else { "ok" });
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn print_hunt_summary(report: &HuntReport, out: Option<&Path>) {
    println!("trials\t{}", report.trials);
    println!(
        "target\tevaluated\tholds\tequality\tviolated\tverified_violations\tmismatches\tmin_slack\targmin_trial\targmin_inequality\targmin_alpha\targmin_split\targmin_matrix"
    );
    for s in &report.summaries {
        let (slack, trial, name, alpha, split, path) = match &s.min {
            Some(m) => (
                m.slack.to_string(),
                m.trial.to_string(),
                m.inequality.to_string(),
                m.alpha.to_string(),
                m.split.map_or("-".into(), |sp| sp.m.to_string()),
                out.map_or("-".into(), |o| argmin_path(o, s.target).display().to_string()),
            ),
            None => Default::default(),
        };
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{slack}\t{trial}\t{name}\t{alpha}\t{split}\t{path}",
            s.target, s.evaluated, s.counts.holds, s.counts.equality, s.counts.violated, s.violations, s.mismatches
        );
    }
    for s in &report.summaries {
        for (regime, c) in &s.by_regime {
            println!("regime\t{}\t{regime}\t{}\t{}\t{}", s.target, c.holds, c.equality, c.violated);
        }
    }
}

fn bench(k: &Kernels, args: BenchArgs) -> Result<ExitCode> {
    if args.reps == 0 || args.n_min > args.n_max {
        return Err(usage("need --reps >= 1 and --n-min <= --n-max"));
    }
    let kernels: &[BenchKernel] = match args.kernel {
        BenchKernel::All => &[BenchKernel::Naive, BenchKernel::Dp, BenchKernel::Ryser, BenchKernel::Det, BenchKernel::Haf],
        ref one => std::slice::from_ref(one),
    };
    let explicit = args.kernel != BenchKernel::All;
    let alpha = match args.mode.mode {
        Mode::Exact => Scalar::ratio(3, 2),
        Mode::Float => Scalar::Float(1.5),
    };
    println!("kernel\tn\treps\tmean_s\tmin_s");
    for &kernel in kernels {
        for n in args.n_min..=args.n_max {
            if kernel == BenchKernel::Haf && n % 2 == 1 {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ n as u64);
            let mut times = Vec::with_capacity(args.reps);
            let mut skipped = false;
            for _ in 0..args.reps {
                let a = if kernel == BenchKernel::Haf {
                    random_symmetric_matrix(&mut rng, n, 5)
                } else {
                    random_rational_matrix(&mut rng, n, Field::Rational, 5)
                };
                let a = if args.mode.mode == Mode::Float { a.to_float() } else { a };
                let start = Instant::now();
                let r = match kernel {
                    BenchKernel::Naive => k.per_alpha_naive(&a, &alpha),
                    BenchKernel::Dp => k.per_alpha_dp(&a, &alpha),
                    BenchKernel::Ryser => k.permanent(&a),
                    BenchKernel::Det => k.determinant(&a),
                    BenchKernel::Haf => k.hafnian(&a),
                    BenchKernel::All => unreachable!(),
                };
                match r {
                    Ok(v) => {
                        std::hint::black_box(v);
                    }
                    Err(alphaperm::Error::Capacity { .. }) if !explicit => {
                        skipped = true;
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
                times.push(start.elapsed().as_secs_f64());
            }
            if skipped {
                continue;
            }
            let mean = times.iter().sum::<f64>() / times.len() as f64;
            let min = times.iter().copied().fold(f64::INFINITY, f64::min);
            println!("{}\t{n}\t{}\t{mean:.6e}\t{min:.6e}", kernel_name(kernel), args.reps);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn kernel_name(k: BenchKernel) -> &'static str {
    match k {
        BenchKernel::Naive => "naive",
        BenchKernel::Dp => "dp",
        BenchKernel::Ryser => "ryser",
        BenchKernel::Det => "det",
        BenchKernel::Haf => "haf",
        BenchKernel::All => "all",
    }
}
