use crate::report::Metadata;
use rcpsp_ssgs::hybrid::{Choice, Commitment, ConfigError, ExecutionKind, TraceRecord};
use rcpsp_ssgs::metaheuristic::{run_interleaved, SearchConfig};
use rcpsp_ssgs::{
    BfDecoder, Decoder, HybridConfig, HybridDecoder, Instance, NbfDecoder, SsgsError,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Decode(#[from] SsgsError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub iterations: u64,
    pub seed: u64,
    /// `restarts: false` gives the forced-commit mode.
    pub hybrid: HybridConfig,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            iterations: 1_000_000,
            seed: 0,
            hybrid: HybridConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveTrace {
    pub trace: Vec<TraceRecord>,
    pub commitments: Vec<Commitment>,
    pub hybrid_seconds: f64,
    /// Decode time of the first committed implementation running alone.
    /// `None` if the hybrid never committed.
    pub baseline_seconds: Option<f64>,
    pub best_makespan: u32,
}

impl AdaptiveTrace {
    pub fn initial_choice(&self) -> Option<Choice> {
        self.commitments.first().map(|c| c.choice)
    }

    /// Hybrid time divided by the baseline time.
    pub fn ratio(&self) -> Option<f64> {
        self.baseline_seconds.map(|b| self.hybrid_seconds / b)
    }

    /// Commitments that differ from the previous one.
    pub fn switches(&self) -> usize {
        self.commitments
            .windows(2)
            .filter(|w| w[0].choice != w[1].choice)
            .count()
    }

    pub fn metadata(&self, config: &TraceConfig) -> Metadata {
        let mut m = Metadata::default();
        m.push("iterations", config.iterations);
        m.push("seed", config.seed);
        m.push("period", config.hybrid.period);
        m.push("alternation_cap", config.hybrid.alternation_cap);
        m.push("alpha", config.hybrid.alpha);
        m.push("restarts", config.hybrid.restarts);
        let initial = self
            .initial_choice()
            .map(|c| ExecutionKind::from(c).name())
            .unwrap_or("none");
        m.push("initial_choice", initial);
        m.push("switches", self.switches());
        m.push("hybrid_seconds", self.hybrid_seconds);
        if let (Some(b), Some(r)) = (self.baseline_seconds, self.ratio()) {
            m.push("baseline_seconds", b);
            m.push("ratio", r);
        }
        m.push("best_makespan", self.best_makespan);
        m
    }
}

/// Runs the local search with a tracing hybrid decoder and, in lockstep on
/// the same search path, with BF alone and NBF alone. The baseline is
/// whichever of the two the hybrid committed to first. Running them side by
/// side instead of one after the other keeps machine drift out of the ratio.
pub fn run_adaptive_trace(
    instance: &Instance,
    config: &TraceConfig,
) -> Result<AdaptiveTrace, TraceError> {
    let search = SearchConfig {
        iterations: config.iterations,
        seed: config.seed,
        warmup: 0,
    };
    let mut hybrid = HybridDecoder::with_config(instance, config.hybrid.clone())?;
    hybrid.enable_trace();
    let bf = BfDecoder::with_width(instance, config.hybrid.width).map_err(ConfigError::from)?;
    let decoders: Vec<Box<dyn Decoder + '_>> = vec![
        Box::new(&mut hybrid),
        Box::new(bf),
        Box::new(NbfDecoder::new(instance)),
    ];
    let runs = run_interleaved(instance, decoders, search)?;
    let seconds: Vec<f64> = runs
        .iter()
        .map(|r| r.stats.decode_time.as_secs_f64())
        .collect();

    let trace = hybrid.take_trace().unwrap_or_default();
    let commitments = hybrid.commitments().to_vec();
    let baseline_seconds = commitments.first().map(|c| match c.choice {
        Choice::Bf => seconds[1],
        Choice::Nbf => seconds[2],
    });
    Ok(AdaptiveTrace {
        trace,
        commitments,
        hybrid_seconds: seconds[0],
        baseline_seconds,
        best_makespan: runs[0].best.makespan(),
    })
}
