//! A deliberately simple local search used to drive the decoders with a
//! realistic stream of slowly changing permutations.
//!
//! Each iteration moves one random job to a random position inside its
//! precedence-feasible range, decodes the result, and accepts it if the
//! makespan did not get worse, or otherwise on a fair coin flip. There is no
//! temperature.
//!
//! Randomness comes from four independent ChaCha8 streams of one seed (the
//! initial permutation, job choice, position choice, acceptance coin). All
//! decoders return identical schedules, so the search path depends only on
//! the seed and not on which decoder is plugged in.

use crate::instance::{random_permutation_with, Instance, Permutation, Schedule};
use crate::ssgs::{Decoder, ExecutionCounts, SsgsError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

const STREAM_INIT: u64 = 0;
const STREAM_JOB: u64 = 1;
const STREAM_POSITION: u64 = 2;
const STREAM_COIN: u64 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub iterations: u64,
    pub seed: u64,
    /// Decodes excluded from the timing total, counting the initial one.
    pub warmup: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            iterations: 1_000_000,
            seed: 0,
            warmup: 0,
        }
    }
}

/// Positions (0-based) where `job` can be reinserted without breaking
/// precedence, given the position of every job.
pub fn feasible_interval(
    instance: &Instance,
    positions: &[usize],
    job: usize,
) -> RangeInclusive<usize> {
    let lo = instance
        .predecessors(job)
        .iter()
        .map(|&p| positions[p] + 1)
        .max()
        .unwrap_or(0);
    let hi = instance
        .successors(job)
        .iter()
        .map(|&s| positions[s] - 1)
        .min()
        .unwrap_or(positions.len() - 1);
    lo..=hi
}

/// [`feasible_interval`] for a permutation.
pub fn feasible_positions(
    instance: &Instance,
    permutation: &Permutation,
    job: usize,
) -> RangeInclusive<usize> {
    feasible_interval(instance, &permutation.positions(), job)
}

/// Moves the job at position `from` to position `to`, shifting the jobs in
/// between and keeping `positions` in sync.
pub fn move_job(order: &mut [usize], positions: &mut [usize], from: usize, to: usize) {
    let range = if from <= to {
        order[from..=to].rotate_left(1);
        from..=to
    } else {
        order[to..=from].rotate_right(1);
        to..=from
    };
    for i in range {
        positions[order[i]] = i;
    }
}

/// Accepts a candidate that is not worse, otherwise flips a fair coin.
pub fn accept<R: Rng + ?Sized>(old_makespan: u32, new_makespan: u32, rng: &mut R) -> bool {
    new_makespan <= old_makespan || rng.random_bool(0.5)
}

/// A proposed move: `job` goes from position `from` to position `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub job: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchState {
    pub current: Permutation,
    pub current_makespan: u32,
    pub best_makespan: u32,
    pub iteration: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStatistics {
    pub iterations: u64,
    /// Decoder calls, including the initial solution.
    pub executions: u64,
    /// Decoder calls counted in `decode_time`.
    pub timed_executions: u64,
    pub decode_time: Duration,
    pub accepted: u64,
    /// `(iteration, makespan)` each time the best makespan improved;
    /// iteration 0 is the initial solution.
    pub best_trajectory: Vec<(u64, u32)>,
    /// Executions per internal implementation, for decoders that report it.
    pub execution_counts: Option<ExecutionCounts>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub best: Schedule,
    pub best_permutation: Permutation,
    pub final_permutation: Permutation,
    pub stats: RunStatistics,
}

/// Step-by-step search driver.
pub struct Search<'a, D: Decoder> {
    instance: &'a Instance,
    decoder: D,
    config: SearchConfig,
    state: SearchState,
    positions: Vec<usize>,
    best: Schedule,
    best_permutation: Permutation,
    job_rng: ChaCha8Rng,
    position_rng: ChaCha8Rng,
    coin_rng: ChaCha8Rng,
    stats: RunStatistics,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

impl<'a, D: Decoder> Search<'a, D> {
    /// Draws and decodes the initial solution.
    pub fn new(
        instance: &'a Instance,
        decoder: D,
        config: SearchConfig,
    ) -> Result<Self, SsgsError> {
        let current = random_permutation_with(instance, &mut stream(config.seed, STREAM_INIT))
            .expect("instances are acyclic by construction");
        let positions = current.positions();
        let mut search = Search {
            instance,
            decoder,
            state: SearchState {
                best_makespan: 0,
                current_makespan: 0,
                current: current.clone(),
                iteration: 0,
                seed: config.seed,
            },
            positions,
            best: Schedule::default(),
            best_permutation: current,
            job_rng: stream(config.seed, STREAM_JOB),
            position_rng: stream(config.seed, STREAM_POSITION),
            coin_rng: stream(config.seed, STREAM_COIN),
            stats: RunStatistics::default(),
            config,
        };
        let schedule = search.decode()?.clone();
        search.state.current_makespan = schedule.makespan();
        search.state.best_makespan = schedule.makespan();
        search.stats.best_trajectory.push((0, schedule.makespan()));
        search.best = schedule;
        Ok(search)
    }

    pub fn state(&self) -> &SearchState {
        &self.state
    }

    pub fn decoder(&self) -> &D {
        &self.decoder
    }

    pub fn best(&self) -> &Schedule {
        &self.best
    }

    /// Picks a random job and a random target inside its feasible interval.
    pub fn propose_move(&mut self) -> Move {
        let n = self.positions.len();
        let job = self.job_rng.random_range(0..n);
        let to =
            self.position_rng
                .random_range(feasible_interval(self.instance, &self.positions, job));
        Move {
            job,
            from: self.positions[job],
            to,
        }
    }

    fn decode(&mut self) -> Result<&Schedule, SsgsError> {
        let timed = self.stats.executions >= self.config.warmup;
        self.stats.executions += 1;
        if timed {
            let start = Instant::now();
            let schedule = self.decoder.decode(&self.state.current)?;
            self.stats.decode_time += start.elapsed();
            self.stats.timed_executions += 1;
            Ok(schedule)
        } else {
            self.decoder.decode(&self.state.current)
        }
    }

    /// One propose/decode/accept iteration. Returns whether the move was kept.
    pub fn step(&mut self) -> Result<bool, SsgsError> {
        let mv = self.propose_move();
        move_job(
            self.state.current.as_mut_vec(),
            &mut self.positions,
            mv.from,
            mv.to,
        );
        let best_makespan = self.state.best_makespan;
        let (makespan, improved) = {
            let schedule = self.decode()?;
            let m = schedule.makespan();
            // An improvement on the best is never worse than the current
            // solution, so it is accepted without a coin flip.
            (m, (m < best_makespan).then(|| schedule.clone()))
        };
        self.state.iteration += 1;
        let accepted = accept(self.state.current_makespan, makespan, &mut self.coin_rng);
        if accepted {
            self.stats.accepted += 1;
            self.state.current_makespan = makespan;
            if let Some(schedule) = improved {
                self.state.best_makespan = makespan;
                self.best = schedule;
                self.best_permutation = self.state.current.clone();
                self.stats
                    .best_trajectory
                    .push((self.state.iteration, makespan));
            }
        } else {
            move_job(
                self.state.current.as_mut_vec(),
                &mut self.positions,
                mv.to,
                mv.from,
            );
        }
        Ok(accepted)
    }

    pub fn finish(mut self) -> SearchResult {
        self.stats.iterations = self.state.iteration;
        self.stats.execution_counts = self.decoder.execution_counts();
        SearchResult {
            best: self.best,
            best_permutation: self.best_permutation,
            final_permutation: self.state.current,
            stats: self.stats,
        }
    }
}

/// Runs `config.iterations` iterations from a random initial solution.
pub fn run_metaheuristic<D: Decoder>(
    instance: &Instance,
    decoder: D,
    config: SearchConfig,
) -> Result<SearchResult, SsgsError> {
    let iterations = config.iterations;
    let mut search = Search::new(instance, decoder, config)?;
    for _ in 0..iterations {
        search.step()?;
    }
    Ok(search.finish())
}

/// Runs one search per decoder in lockstep, rotating which decoder steps
/// first. All searches follow the same path, so the results equal separate
/// [`run_metaheuristic`] calls, but slow drifts in machine speed hit every
/// decoder alike, which makes their timings comparable.
pub fn run_interleaved<'a>(
    instance: &'a Instance,
    decoders: Vec<Box<dyn Decoder + 'a>>,
    config: SearchConfig,
) -> Result<Vec<SearchResult>, SsgsError> {
    let iterations = config.iterations;
    let mut searches = decoders
        .into_iter()
        .map(|d| Search::new(instance, d, config.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let k = searches.len();
    for i in 0..iterations {
        for offset in 0..k {
            searches[(i as usize + offset) % k].step()?;
        }
    }
    Ok(searches.into_iter().map(Search::finish).collect())
}
