use crate::make_decoder;
use rcpsp_ssgs::hybrid::ConfigError;
use rcpsp_ssgs::instance::{generate_instance, Axis, GeneratorError};
use rcpsp_ssgs::metaheuristic::{run_interleaved, SearchConfig, SearchResult};
use rcpsp_ssgs::ssgs::Implementation;
use rcpsp_ssgs::{GeneratorParams, HybridConfig, SsgsError};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;
use thiserror::Error;

/// Decodes per (instance, implementation) left out of the timing.
pub const DEFAULT_WARMUP: u64 = 100;

/// How a sweep is run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Everything on the calling thread; the timings are the product.
    #[default]
    Timing,
    /// One thread per axis value. Timings are recorded but not comparable;
    /// the point is the cross-implementation result check.
    Validate,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Timing => "timing",
            Mode::Validate => "validate",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "timing" => Ok(Mode::Timing),
            "validate" => Ok(Mode::Validate),
            other => Err(format!(
                "unknown mode {other:?}, expected timing or validate"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub axis: Axis,
    pub values: Vec<f64>,
    /// Parameters of every instance apart from the swept one. Instance `i`
    /// of a point uses seed `base.seed + i`.
    pub base: GeneratorParams,
    pub instances_per_point: usize,
    pub iterations_per_instance: u64,
    pub warmup: u64,
    pub implementations: Vec<Implementation>,
    pub hybrid: HybridConfig,
    pub mode: Mode,
}

impl SweepConfig {
    /// The full-scale protocol for `axis`: its default values, 50 instances
    /// of 1,000,000 iterations each, all four implementations.
    pub fn new(axis: Axis) -> Self {
        SweepConfig {
            axis,
            values: axis.default_values().to_vec(),
            base: GeneratorParams::default(),
            instances_per_point: 50,
            iterations_per_instance: 1_000_000,
            warmup: DEFAULT_WARMUP,
            implementations: Implementation::ALL.to_vec(),
            hybrid: HybridConfig::default(),
            mode: Mode::Timing,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.values.is_empty() {
            return Err(SweepError::NoValues);
        }
        if self.instances_per_point == 0 || self.iterations_per_instance == 0 {
            return Err(SweepError::ZeroCount);
        }
        if self.implementations.is_empty() {
            return Err(SweepError::NoImplementations);
        }
        for (i, a) in self.implementations.iter().enumerate() {
            if self.implementations[..i].contains(a) {
                return Err(SweepError::DuplicateImplementation(*a));
            }
        }
        self.hybrid.validate()?;
        for &value in &self.values {
            self.axis
                .apply(&self.base, value)
                .validate()
                .map_err(|source| SweepError::Value { value, source })?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("no axis values given")]
    NoValues,
    #[error("instance and iteration counts must be positive")]
    ZeroCount,
    #[error("no implementations selected")]
    NoImplementations,
    #[error("implementation {0} listed twice")]
    DuplicateImplementation(Implementation),
    #[error("axis value {value}: {source}")]
    Value { value: f64, source: GeneratorError },
    #[error(transparent)]
    Hybrid(#[from] ConfigError),
    #[error("decoding failed at {axis}={value}, instance seed {seed}: {source}")]
    Decode {
        axis: Axis,
        value: f64,
        seed: u64,
        source: SsgsError,
    },
    #[error("{implementation} disagrees with {reference} at {axis}={value}, instance seed {seed}")]
    Mismatch {
        axis: Axis,
        value: f64,
        seed: u64,
        implementation: Implementation,
        reference: Implementation,
    },
}

/// Aggregate of one implementation at one axis point.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub axis: Axis,
    pub value: f64,
    pub implementation: Implementation,
    /// Decode time summed over the point's instances, warm-up excluded.
    pub seconds: f64,
    /// Decoder calls summed over the point's instances, warm-up included.
    pub executions: u64,
    /// `100 * seconds / seconds(Conv)`; `None` when Conv was not run.
    pub relative_pct: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepReport {
    pub records: Vec<BenchRecord>,
    /// Instances skipped because generation failed.
    pub warnings: Vec<String>,
}

struct PointTotals {
    time: Vec<Duration>,
    executions: Vec<u64>,
    instances: usize,
}

/// Runs the sweep and returns `values.len() * implementations.len()`
/// records in axis-value order, or fewer if every instance of some point
/// failed to generate.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, SweepError> {
    config.validate()?;
    let mut report = SweepReport::default();
    let points: Vec<(Result<PointTotals, SweepError>, Vec<String>)> = match config.mode {
        Mode::Timing => config
            .values
            .iter()
            .map(|&v| run_point(config, v))
            .collect(),
        Mode::Validate => std::thread::scope(|scope| {
            let handles: Vec<_> = config
                .values
                .iter()
                .map(|&v| scope.spawn(move || run_point(config, v)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        }),
    };
    for (&value, (totals, warnings)) in config.values.iter().zip(points) {
        report.warnings.extend(warnings);
        let totals = totals?;
        if totals.instances == 0 {
            continue;
        }
        let conv = config
            .implementations
            .iter()
            .position(|&i| i == Implementation::Conv)
            .map(|k| totals.time[k].as_secs_f64());
        for (k, &implementation) in config.implementations.iter().enumerate() {
            let seconds = totals.time[k].as_secs_f64();
            let relative_pct = conv.map(|c| {
                if implementation == Implementation::Conv {
                    100.0
                } else {
                    100.0 * seconds / c
                }
            });
            report.records.push(BenchRecord {
                axis: config.axis,
                value,
                implementation,
                seconds,
                executions: totals.executions[k],
                relative_pct,
            });
        }
    }
    Ok(report)
}

fn run_point(config: &SweepConfig, value: f64) -> (Result<PointTotals, SweepError>, Vec<String>) {
    let n = config.implementations.len();
    let mut totals = PointTotals {
        time: vec![Duration::ZERO; n],
        executions: vec![0; n],
        instances: 0,
    };
    let mut warnings = Vec::new();
    let params = config.axis.apply(&config.base, value);
    for i in 0..config.instances_per_point {
        let seed = params.seed.wrapping_add(i as u64);
        let instance = match generate_instance(&GeneratorParams {
            seed,
            ..params.clone()
        }) {
            Ok(instance) => instance,
            Err(e) => {
                warnings.push(format!(
                    "{}={value}, seed {seed}: skipped, {e}",
                    config.axis
                ));
                continue;
            }
        };
        let decoders = config
            .implementations
            .iter()
            .map(|&imp| make_decoder(&instance, imp, &config.hybrid))
            .collect();
        let search = SearchConfig {
            iterations: config.iterations_per_instance,
            seed,
            warmup: config.warmup,
        };
        let runs = match run_interleaved(&instance, decoders, search) {
            Ok(runs) => runs,
            Err(source) => {
                let err = SweepError::Decode {
                    axis: config.axis,
                    value,
                    seed,
                    source,
                };
                return (Err(err), warnings);
            }
        };
        if let Err(err) = check_agreement(config, value, seed, &runs) {
            return (Err(err), warnings);
        }
        for (k, run) in runs.iter().enumerate() {
            totals.time[k] += run.stats.decode_time;
            totals.executions[k] += run.stats.executions;
        }
        totals.instances += 1;
    }
    (Ok(totals), warnings)
}

/// All implementations must have walked the same search path.
fn check_agreement(
    config: &SweepConfig,
    value: f64,
    seed: u64,
    runs: &[SearchResult],
) -> Result<(), SweepError> {
    let reference = &runs[0];
    for (k, run) in runs.iter().enumerate().skip(1) {
        if run.best != reference.best || run.final_permutation != reference.final_permutation {
            return Err(SweepError::Mismatch {
                axis: config.axis,
                value,
                seed,
                implementation: config.implementations[k],
                reference: config.implementations[0],
            });
        }
    }
    Ok(())
}
