//! Parameterised random instance generator in the style of PSPLIB's
//! ProGen, sweeping the same feature axes.
//!
//! Sampling rules:
//!
//! * durations are uniform on `1 ..= max_duration`;
//! * precedence arcs go from a lower to a higher job index, each candidate
//!   arc drawn with probability `network_complexity / ((n - 1) / 2)`, so the
//!   mean out-degree is `network_complexity` (capped at the complete DAG).
//!   Jobs may end up with no predecessors or successors at all;
//! * every job consumes `round(resource_factor * |R|)` distinct resources,
//!   chosen uniformly, with demand uniform on `1 ..= 10`;
//! * capacity `c_r = K_min + round(resource_strength * (K_max - K_min))`
//!   where `K_min` is the largest single demand for `r` and `K_max` the peak
//!   demand for `r` in the precedence-only earliest-start schedule;
//! * finally job labels are shuffled so index order carries no information.
//!
//! The generator draws from ChaCha8 seeded with `seed_from_u64(seed)`, so
//! instances are identical across machines.

use super::{Instance, Job};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest demand a job places on a consumed resource.
pub const MAX_DEMAND: u32 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub num_jobs: usize,
    pub num_resources: usize,
    pub max_duration: u32,
    /// Target mean number of direct successors per job.
    pub network_complexity: f64,
    /// Fraction of resources consumed by each job.
    pub resource_factor: f64,
    /// Capacity tightness: 0 is the tightest feasible, 1 the precedence-only peak.
    pub resource_strength: f64,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            num_jobs: 120,
            num_resources: 4,
            max_duration: 10,
            network_complexity: 1.0,
            resource_factor: 0.75,
            resource_strength: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.num_jobs == 0 {
            return Err(GeneratorError::NotPositive("num_jobs"));
        }
        if self.num_resources == 0 {
            return Err(GeneratorError::NotPositive("num_resources"));
        }
        if self.max_duration == 0 {
            return Err(GeneratorError::NotPositive("max_duration"));
        }
        if !(self.network_complexity.is_finite() && self.network_complexity >= 0.0) {
            return Err(GeneratorError::OutOfRange {
                name: "network_complexity",
                value: self.network_complexity,
                range: "[0, inf)",
            });
        }
        for (name, value) in [
            ("resource_factor", self.resource_factor),
            ("resource_strength", self.resource_strength),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(GeneratorError::OutOfRange {
                    name,
                    value,
                    range: "[0, 1]",
                });
            }
        }
        Ok(())
    }
}

pub fn generate_instance(params: &GeneratorParams) -> Result<Instance, GeneratorError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.num_jobs;
    let num_resources = params.num_resources;

    let durations: Vec<u32> = (0..n)
        .map(|_| rng.random_range(1..=params.max_duration))
        .collect();

    let arc_probability = if n > 1 {
        (params.network_complexity / ((n - 1) as f64 / 2.0)).min(1.0)
    } else {
        0.0
    };
    let mut predecessors = vec![Vec::new(); n];
    if arc_probability > 0.0 {
        for i in 0..n {
            for preds in predecessors.iter_mut().skip(i + 1) {
                if rng.random_bool(arc_probability) {
                    preds.push(i);
                }
            }
        }
    }

    let consumed =
        ((params.resource_factor * num_resources as f64).round() as usize).min(num_resources);
    let demands: Vec<Vec<u32>> = (0..n)
        .map(|_| {
            let mut row = vec![0u32; num_resources];
            for r in index::sample(&mut rng, num_resources, consumed) {
                row[r] = rng.random_range(1..=MAX_DEMAND);
            }
            row
        })
        .collect();

    // Arcs only point forward, so index order is already topological.
    let mut earliest = vec![1u32; n];
    for j in 0..n {
        earliest[j] = predecessors[j]
            .iter()
            .map(|&p| earliest[p] + durations[p])
            .max()
            .unwrap_or(1);
    }
    let capacities: Vec<u32> = (0..num_resources)
        .map(|r| {
            let k_min = demands.iter().map(|d| d[r]).max().unwrap_or(0);
            let k_max = peak_usage(&earliest, &durations, demands.iter().map(|d| d[r]));
            let span = (k_max - k_min) as f64;
            (k_min + (params.resource_strength * span).round() as u32).max(1)
        })
        .collect();

    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut jobs = vec![Job::new(0, Vec::new(), Vec::new()); n];
    for old in 0..n {
        jobs[labels[old]] = Job::new(
            durations[old],
            demands[old].clone(),
            predecessors[old].iter().map(|&p| labels[p]).collect(),
        );
    }
    Ok(Instance::new(capacities, jobs).expect("generator output satisfies instance invariants"))
}

fn peak_usage(starts: &[u32], durations: &[u32], demands: impl Iterator<Item = u32>) -> u32 {
    let end = starts
        .iter()
        .zip(durations)
        .map(|(s, d)| s + d)
        .max()
        .unwrap_or(1) as usize;
    let mut delta = vec![0i64; end + 1];
    for ((&s, &d), v) in starts.iter().zip(durations).zip(demands) {
        delta[s as usize] += v as i64;
        delta[(s + d) as usize] -= v as i64;
    }
    let mut usage = 0i64;
    let mut peak = 0i64;
    for change in delta {
        usage += change;
        peak = peak.max(usage);
    }
    peak as u32
}
