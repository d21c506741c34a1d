use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rcpsp_bench::make_decoder;
use rcpsp_bench::report::{write_records, write_trace, Metadata};
use rcpsp_bench::selftest::selftest;
use rcpsp_bench::sweep::{run_sweep, Mode, SweepConfig};
use rcpsp_bench::trace::{run_adaptive_trace, TraceConfig};
use rcpsp_ssgs::instance::{generate_instance, parse_native, parse_psplib, to_native, Axis};
use rcpsp_ssgs::metaheuristic::{run_metaheuristic, SearchConfig};
use rcpsp_ssgs::ssgs::Implementation;
use rcpsp_ssgs::{GeneratorParams, HybridConfig, Instance};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "ssgs",
    version,
    about = "Serial schedule generation benchmarks for RCPSP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance in the native text format.
    Generate {
        #[command(flatten)]
        params: ParamArgs,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the local search on one instance with one implementation.
    Solve {
        /// Instance file. Files ending in `.sm` are read as PSPLIB.
        instance: PathBuf,
        #[arg(long = "impl", default_value = "hybrid")]
        implementation: Implementation,
        #[arg(long, default_value_t = 100_000)]
        iterations: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the best start times, one per line, to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Measure every implementation across the values of one generator axis.
    Sweep(SweepArgs),
    /// Record which implementation the hybrid runs at every execution.
    Trace(TraceArgs),
    /// Check that all implementations agree on a quick instance suite.
    Selftest {
        #[arg(long, default_value_t = 50)]
        permutations: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Generator parameters; unset ones keep their defaults.
#[derive(Args, Clone, Default)]
struct ParamArgs {
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    resources: Option<usize>,
    #[arg(long)]
    max_duration: Option<u32>,
    #[arg(long)]
    network_complexity: Option<f64>,
    #[arg(long)]
    resource_factor: Option<f64>,
    #[arg(long)]
    resource_strength: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl ParamArgs {
    fn params(&self) -> GeneratorParams {
        let d = GeneratorParams::default();
        GeneratorParams {
            num_jobs: self.jobs.unwrap_or(d.num_jobs),
            num_resources: self.resources.unwrap_or(d.num_resources),
            max_duration: self.max_duration.unwrap_or(d.max_duration),
            network_complexity: self.network_complexity.unwrap_or(d.network_complexity),
            resource_factor: self.resource_factor.unwrap_or(d.resource_factor),
            resource_strength: self.resource_strength.unwrap_or(d.resource_strength),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    axis: Axis,
    /// Comma-separated axis values; the axis defaults when omitted.
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    instances: usize,
    #[arg(long, default_value_t = 1_000_000)]
    iterations: u64,
    #[arg(long, default_value_t = rcpsp_bench::sweep::DEFAULT_WARMUP)]
    warmup: u64,
    /// Comma-separated implementations.
    #[arg(
        long = "impls",
        value_delimiter = ',',
        default_value = "conv,nbf,bf,hybrid"
    )]
    implementations: Vec<Implementation>,
    /// `timing` runs on one thread; `validate` spreads axis values over
    /// threads and only checks results.
    #[arg(long, default_value = "timing")]
    mode: Mode,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    /// Instance file; a generated instance when omitted.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 1_000_000)]
    iterations: u64,
    /// Seed of the local search.
    #[arg(long, default_value_t = 0)]
    search_seed: u64,
    #[arg(long, default_value_t = 10_000)]
    period: u64,
    #[arg(long, default_value_t = 100)]
    alternation_cap: u64,
    /// Keep the first commitment forever.
    #[arg(long)]
    no_restarts: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { params, output } => {
            let instance = generate_instance(&params.params())?;
            let mut out = open_output(output.as_deref())?;
            out.write_all(to_native(&instance).as_bytes())?;
            out.flush()?;
        }
        Command::Solve {
            instance,
            implementation,
            iterations,
            seed,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let decoder = make_decoder(&inst, implementation, &HybridConfig::default());
            let config = SearchConfig {
                iterations,
                seed,
                warmup: 0,
            };
            let result = run_metaheuristic(&inst, decoder, config)?;
            println!("makespan {}", result.best.makespan());
            println!(
                "decode_seconds {:.6}",
                result.stats.decode_time.as_secs_f64()
            );
            println!("executions {}", result.stats.executions);
            if let Some(path) = output {
                let mut out = open_output(Some(&path))?;
                for t in result.best.starts() {
                    writeln!(out, "{t}")?;
                }
                out.flush()?;
            }
        }
        Command::Sweep(args) => sweep(args)?,
        Command::Trace(args) => trace(args)?,
        Command::Selftest { permutations, seed } => {
            let summary = selftest(permutations, seed)?;
            println!(
                "selftest passed: {} instances, {} identical schedules",
                summary.instances, summary.schedules
            );
        }
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut config = SweepConfig::new(args.axis);
    if !args.values.is_empty() {
        config.values = args.values;
    }
    config.base = args.params.params();
    config.instances_per_point = args.instances;
    config.iterations_per_instance = args.iterations;
    config.warmup = args.warmup;
    config.implementations = args.implementations;
    config.mode = args.mode;

    let report = run_sweep(&config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut meta = Metadata::default();
    meta.push("axis", config.axis);
    meta.push("mode", config.mode);
    meta.push("instances_per_point", config.instances_per_point);
    meta.push("iterations_per_instance", config.iterations_per_instance);
    meta.push("warmup", config.warmup);
    meta.push("base", format!("{:?}", config.base));
    write_records(open_output(args.output.as_deref())?, &meta, &report.records)
}

fn trace(args: TraceArgs) -> Result<()> {
    let instance = match &args.instance {
        Some(path) => load_instance(path)?,
        None => generate_instance(&args.params.params())?,
    };
    let config = TraceConfig {
        iterations: args.iterations,
        seed: args.search_seed,
        hybrid: HybridConfig {
            period: args.period,
            alternation_cap: args.alternation_cap,
            restarts: !args.no_restarts,
            ..Default::default()
        },
    };
    let result = run_adaptive_trace(&instance, &config)?;
    match result.ratio() {
        Some(r) => eprintln!(
            "{} switches, hybrid/initial-choice time ratio {:.3}",
            result.switches(),
            r
        ),
        None => eprintln!("the hybrid never committed"),
    }
    write_trace(
        open_output(args.output.as_deref())?,
        &result.metadata(&config),
        &result.trace,
    )
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("sm"))
    {
        parse_psplib(&text)
    } else {
        parse_native(&text)
    };
    match parsed {
        Ok(instance) => Ok(instance),
        Err(e) => bail!("{}: {e}", path.display()),
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}
