//! Online selection between BF and NBF.
//!
//! Each period of `period` executions starts with one data execution that
//! learns the resource ordering and the Bloom filters. The controller then
//! alternates BF and NBF, timing each, and after every (BF, NBF) pair runs a
//! sign test on how often BF was faster. It commits to the winner once the
//! test is significant or the alternation cap is reached, and keeps using it
//! until the period ends and everything learned is discarded.

mod clock;

pub use clock::{ExecutionClock, FnClock, MonotonicClock};
pub use sign_test::{sign_test, sign_test_p_value, SignTestOutcome};

use crate::bloom::{Bloom, BloomFilters, StructureError, WORD_BITS};
use crate::instance::{Instance, Permutation, Schedule};
use crate::ssgs::enhanced::data_run_into;
use crate::ssgs::{
    order_resources, preprocess, ssgs_run_into, AvailabilityProfile, Decoder, Enhanced,
    ExecutionCounts, Implementation, JobPreprocess, SsgsError,
};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct HybridConfig {
    /// Executions per learning period.
    pub period: u64,
    /// Maximum number of alternating executions before committing.
    pub alternation_cap: u64,
    /// Sign-test significance level.
    pub alpha: f64,
    /// Bloom structure width in bits.
    pub width: usize,
    /// Restart every `period` executions. When off, the first commitment is
    /// kept for the lifetime of the decoder.
    pub restarts: bool,
}

impl Default for HybridConfig {
    fn default() -> Self {
        HybridConfig {
            period: 10_000,
            alternation_cap: 100,
            alpha: 0.05,
            width: WORD_BITS,
            restarts: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("alpha must lie in (0, 1), got {0}")]
    Alpha(f64),
    #[error(transparent)]
    Width(#[from] StructureError),
}

impl HybridConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.period == 0 {
            return Err(ConfigError::ZeroPeriod);
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(ConfigError::Alpha(self.alpha));
        }
        if self.width == 0 {
            return Err(StructureError::ZeroLimit.into());
        }
        if self.width > WORD_BITS {
            return Err(StructureError::TooWide(self.width).into());
        }
        Ok(())
    }
}

/// One of the two implementations the controller can commit to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Choice {
    Bf,
    Nbf,
}

impl From<Choice> for Implementation {
    fn from(c: Choice) -> Self {
        match c {
            Choice::Bf => Implementation::Bf,
            Choice::Nbf => Implementation::Nbf,
        }
    }
}

/// What a single execution ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExecutionKind {
    Data,
    Bf,
    Nbf,
}

impl ExecutionKind {
    pub fn name(self) -> &'static str {
        match self {
            ExecutionKind::Data => "data",
            ExecutionKind::Bf => "BF",
            ExecutionKind::Nbf => "NBF",
        }
    }
}

impl fmt::Display for ExecutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExecutionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "data" => Ok(ExecutionKind::Data),
            "BF" => Ok(ExecutionKind::Bf),
            "NBF" => Ok(ExecutionKind::Nbf),
            other => Err(format!("unknown execution kind {other:?}")),
        }
    }
}

impl From<Choice> for ExecutionKind {
    fn from(c: Choice) -> Self {
        match c {
            Choice::Bf => ExecutionKind::Bf,
            Choice::Nbf => ExecutionKind::Nbf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Data,
    Alternating,
    Committed(Choice),
}

/// Controller state of the current period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridState {
    pub phase: Phase,
    /// Executions completed in this period.
    pub execution_in_period: u64,
    /// Number of restarts so far.
    pub period_index: u64,
    /// Alternating executions run in this period.
    pub alternations: u64,
    /// Timing of the BF leg of an incomplete pair; the inner `None` is a
    /// failed measurement.
    pub pending_bf: Option<Option<u64>>,
    /// Pairs in which BF was strictly faster.
    pub wins: u64,
    /// Completed pairs.
    pub trials: u64,
}

impl HybridState {
    fn fresh(period_index: u64) -> Self {
        HybridState {
            phase: Phase::Data,
            execution_in_period: 0,
            period_index,
            alternations: 0,
            pending_bf: None,
            wins: 0,
            trials: 0,
        }
    }
}

/// One line of the optional execution trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRecord {
    pub index: u64,
    pub kind: ExecutionKind,
    pub nanos: Option<u64>,
}

/// A commitment decision: execution index (0-based, global) of the pair or
/// alternation that triggered it, and the chosen implementation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Commitment {
    pub index: u64,
    pub period: u64,
    pub choice: Choice,
}

/// The hybrid implementation as a [`Decoder`]. It returns exactly the
/// schedules the other decoders return; only the speed differs.
pub struct HybridDecoder<'a, C: ExecutionClock = MonotonicClock> {
    instance: &'a Instance,
    config: HybridConfig,
    clock: C,
    profile: AvailabilityProfile,
    base_prep: Vec<JobPreprocess>,
    prep: Vec<JobPreprocess>,
    filters: Option<BloomFilters>,
    schedule: Schedule,
    state: HybridState,
    executions: u64,
    counts: ExecutionCounts,
    commitments: Vec<Commitment>,
    trace: Option<Vec<TraceRecord>>,
}

impl<'a> HybridDecoder<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Self::with_config(instance, HybridConfig::default())
            .expect("default configuration is valid")
    }

    pub fn with_config(instance: &'a Instance, config: HybridConfig) -> Result<Self, ConfigError> {
        Self::with_clock(instance, config, MonotonicClock)
    }
}

impl<'a, C: ExecutionClock> HybridDecoder<'a, C> {
    pub fn with_clock(
        instance: &'a Instance,
        config: HybridConfig,
        clock: C,
    ) -> Result<Self, ConfigError> {
        config.validate()?;
        let base_prep = preprocess(instance);
        Ok(HybridDecoder {
            instance,
            config,
            clock,
            profile: AvailabilityProfile::for_instance(instance),
            prep: base_prep.clone(),
            base_prep,
            filters: None,
            schedule: Schedule::default(),
            state: HybridState::fresh(0),
            executions: 0,
            counts: ExecutionCounts::default(),
            commitments: Vec::new(),
            trace: None,
        })
    }

    pub fn config(&self) -> &HybridConfig {
        &self.config
    }

    pub fn state(&self) -> &HybridState {
        &self.state
    }

    pub fn phase(&self) -> Phase {
        self.state.phase
    }

    /// Total executions so far.
    pub fn executions(&self) -> u64 {
        self.executions
    }

    pub fn commitments(&self) -> &[Commitment] {
        &self.commitments
    }

    /// Filters learned in the current period, if any.
    pub fn filters(&self) -> Option<&BloomFilters> {
        self.filters.as_ref()
    }

    /// Current per-job resource ordering.
    pub fn preprocessed(&self) -> &[JobPreprocess] {
        &self.prep
    }

    pub fn clock(&self) -> &C {
        &self.clock
    }

    /// Starts recording every execution, timing each one.
    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn trace(&self) -> Option<&[TraceRecord]> {
        self.trace.as_deref()
    }

    pub fn take_trace(&mut self) -> Option<Vec<TraceRecord>> {
        self.trace.take()
    }

    /// Discards everything learned in the current period.
    pub fn restart(&mut self) {
        self.prep.clone_from(&self.base_prep);
        self.filters = None;
        self.state = HybridState::fresh(self.state.period_index + 1);
    }

    fn next_kind(&self) -> ExecutionKind {
        match self.state.phase {
            Phase::Data => ExecutionKind::Data,
            Phase::Alternating if self.state.pending_bf.is_none() => ExecutionKind::Bf,
            Phase::Alternating => ExecutionKind::Nbf,
            Phase::Committed(choice) => choice.into(),
        }
    }

    fn commit(&mut self, choice: Choice) {
        self.state.phase = Phase::Committed(choice);
        self.commitments.push(Commitment {
            index: self.executions,
            period: self.state.period_index,
            choice,
        });
    }

    /// Bookkeeping after an alternating execution.
    fn record_alternation(&mut self, kind: ExecutionKind, nanos: Option<u64>) {
        let state = &mut self.state;
        state.alternations += 1;
        match kind {
            ExecutionKind::Bf => state.pending_bf = Some(nanos),
            ExecutionKind::Nbf => {
                let bf = state.pending_bf.take().expect("NBF leg follows a BF leg");
                state.trials += 1;
                if let (Some(bf), Some(nbf)) = (bf, nanos) {
                    if bf < nbf {
                        state.wins += 1;
                    }
                }
                match sign_test(state.wins, state.trials, self.config.alpha) {
                    SignTestOutcome::BfFaster => return self.commit(Choice::Bf),
                    SignTestOutcome::NbfFaster => return self.commit(Choice::Nbf),
                    SignTestOutcome::Inconclusive => {}
                }
            }
            ExecutionKind::Data => unreachable!("data executions are not alternations"),
        }
        if self.state.alternations >= self.config.alternation_cap {
            self.commit(self.majority());
        }
    }

    /// Choice at the cap: BF only with a strict majority of wins.
    fn majority(&self) -> Choice {
        if self.state.wins > self.state.trials - self.state.wins {
            Choice::Bf
        } else {
            Choice::Nbf
        }
    }
}

impl<C: ExecutionClock> Decoder for HybridDecoder<'_, C> {
    fn implementation(&self) -> Implementation {
        Implementation::Hybrid
    }

    fn decode(&mut self, permutation: &Permutation) -> Result<&Schedule, SsgsError> {
        let kind = self.next_kind();
        let timed = self.trace.is_some() || self.state.phase == Phase::Alternating;
        let order = permutation.as_slice();
        let Self {
            instance,
            profile,
            prep,
            filters,
            schedule,
            clock,
            ..
        } = self;

        let mut run = || -> Result<Option<crate::ssgs::InsufficiencyStats>, SsgsError> {
            match kind {
                ExecutionKind::Data => {
                    data_run_into(instance, order, profile, prep, schedule).map(Some)
                }
                ExecutionKind::Bf => {
                    let filters = filters
                        .as_mut()
                        .expect("filters exist after the data execution");
                    ssgs_run_into(
                        instance,
                        order,
                        profile,
                        &mut Bloom::new(prep, filters),
                        schedule,
                    )
                    .map(|_| None)
                }
                ExecutionKind::Nbf => {
                    ssgs_run_into(instance, order, profile, &mut Enhanced::new(prep), schedule)
                        .map(|_| None)
                }
            }
        };
        let (result, nanos) = if timed {
            clock.time(kind, run)
        } else {
            (run(), None)
        };
        let stats = result?;

        if let Some(trace) = &mut self.trace {
            trace.push(TraceRecord {
                index: self.executions,
                kind,
                nanos,
            });
        }
        match kind {
            ExecutionKind::Data => {
                self.counts.data += 1;
                let stats = stats.expect("data execution returns statistics");
                order_resources(&mut self.prep, &stats);
                self.filters = Some(
                    BloomFilters::build(self.instance, &stats, self.config.width)
                        .expect("width and distribution shapes are valid"),
                );
                self.state.phase = Phase::Alternating;
                if self.config.alternation_cap == 0 {
                    self.commit(Choice::Nbf);
                }
            }
            ExecutionKind::Bf => self.counts.bf += 1,
            ExecutionKind::Nbf => self.counts.nbf += 1,
        }
        if kind != ExecutionKind::Data && self.state.phase == Phase::Alternating {
            self.record_alternation(kind, nanos);
        }

        self.executions += 1;
        self.state.execution_in_period += 1;
        if self.config.restarts && self.state.execution_in_period >= self.config.period {
            self.restart();
        }
        Ok(&self.schedule)
    }

    fn execution_counts(&self) -> Option<ExecutionCounts> {
        Some(self.counts)
    }
}

impl<C: ExecutionClock + fmt::Debug> fmt::Debug for HybridDecoder<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HybridDecoder")
            .field("config", &self.config)
            .field("clock", &self.clock)
            .field("state", &self.state)
            .field("executions", &self.executions)
            .field("counts", &self.counts)
            .finish_non_exhaustive()
    }
}
