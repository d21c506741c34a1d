//! RCPSP data model: instances, permutations, schedules, and the tooling
//! around them (parsers, generator, validation).
//!
//! Jobs and resources are indexed from 0 in memory. Time slots are indexed
//! from 1: a job starting at `t` occupies slots `t ..= t + d - 1`, and a
//! job without predecessors may start at slot 1.

mod axis;
mod generator;
pub mod native;
mod parse;
mod permutation;
pub mod psplib;
mod validate;

pub use axis::Axis;
pub use generator::{generate_instance, GeneratorError, GeneratorParams, MAX_DEMAND};
pub use native::{parse_native, to_native};
pub use parse::{ParseError, ParseErrorKind};
pub(crate) use permutation::random_permutation_with;
pub use permutation::{
    random_topological_order, random_topological_permutation, Permutation, PermutationError,
};
pub use psplib::parse_psplib;
pub use validate::{is_active, validate_schedule, ActivenessError, ValidationReport, Violation};

use std::collections::VecDeque;
use thiserror::Error;

/// One job of a project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    /// Number of slots the job occupies, at least 1.
    pub duration: u32,
    /// Units of each resource consumed in every occupied slot.
    pub demands: Vec<u32>,
    /// Jobs that must finish before this one starts.
    pub predecessors: Vec<usize>,
}

impl Job {
    pub fn new(duration: u32, demands: Vec<u32>, predecessors: Vec<usize>) -> Self {
        Job {
            duration,
            demands,
            predecessors,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("resource {resource} has zero capacity")]
    ZeroCapacity { resource: usize },
    #[error("job {job} has zero duration")]
    ZeroDuration { job: usize },
    #[error("job {job} lists {found} demands, expected {expected}")]
    DemandCount {
        job: usize,
        expected: usize,
        found: usize,
    },
    #[error("demand exceeds capacity: job {job} needs {demand} of resource {resource} (capacity {capacity})")]
    DemandExceedsCapacity {
        job: usize,
        resource: usize,
        demand: u32,
        capacity: u32,
    },
    #[error("job {job} has unknown predecessor {predecessor}")]
    UnknownPredecessor { job: usize, predecessor: usize },
    #[error("precedence relation is cyclic (job {job} lies on a cycle)")]
    Cycle { job: usize },
}

/// A validated single-mode RCPSP instance.
///
/// Immutable after construction; predecessor lists are sorted and free of
/// duplicates, and the successor lists are derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    capacities: Vec<u32>,
    jobs: Vec<Job>,
    successors: Vec<Vec<usize>>,
}

impl Instance {
    pub fn new(capacities: Vec<u32>, mut jobs: Vec<Job>) -> Result<Self, InstanceError> {
        if let Some(resource) = capacities.iter().position(|&c| c == 0) {
            return Err(InstanceError::ZeroCapacity { resource });
        }
        let n = jobs.len();
        for (j, job) in jobs.iter_mut().enumerate() {
            if job.duration == 0 {
                return Err(InstanceError::ZeroDuration { job: j });
            }
            if job.demands.len() != capacities.len() {
                return Err(InstanceError::DemandCount {
                    job: j,
                    expected: capacities.len(),
                    found: job.demands.len(),
                });
            }
            for (r, (&demand, &capacity)) in job.demands.iter().zip(&capacities).enumerate() {
                if demand > capacity {
                    return Err(InstanceError::DemandExceedsCapacity {
                        job: j,
                        resource: r,
                        demand,
                        capacity,
                    });
                }
            }
            job.predecessors.sort_unstable();
            job.predecessors.dedup();
            if let Some(&p) = job.predecessors.iter().find(|&&p| p >= n) {
                return Err(InstanceError::UnknownPredecessor {
                    job: j,
                    predecessor: p,
                });
            }
        }

        let mut successors = vec![Vec::new(); n];
        for (j, job) in jobs.iter().enumerate() {
            for &p in &job.predecessors {
                successors[p].push(j);
            }
        }
        let instance = Instance {
            capacities,
            jobs,
            successors,
        };
        instance.topological_order()?;
        Ok(instance)
    }

    #[inline]
    pub fn num_jobs(&self) -> usize {
        self.jobs.len()
    }

    #[inline]
    pub fn num_resources(&self) -> usize {
        self.capacities.len()
    }

    #[inline]
    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    #[inline]
    pub fn job(&self, j: usize) -> &Job {
        &self.jobs[j]
    }

    #[inline]
    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    #[inline]
    pub fn duration(&self, j: usize) -> u32 {
        self.jobs[j].duration
    }

    #[inline]
    pub fn demand(&self, j: usize, r: usize) -> u32 {
        self.jobs[j].demands[r]
    }

    #[inline]
    pub fn predecessors(&self, j: usize) -> &[usize] {
        &self.jobs[j].predecessors
    }

    #[inline]
    pub fn successors(&self, j: usize) -> &[usize] {
        &self.successors[j]
    }

    /// Upper bound on the makespan of any schedule the decoders produce:
    /// the sum of all durations.
    pub fn horizon(&self) -> u32 {
        self.jobs.iter().map(|j| j.duration).sum()
    }

    /// Kahn order with ties broken by job index.
    pub fn topological_order(&self) -> Result<Vec<usize>, InstanceError> {
        let n = self.num_jobs();
        let mut indegree: Vec<usize> = self.jobs.iter().map(|j| j.predecessors.len()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(j) = queue.pop_front() {
            order.push(j);
            for &s in &self.successors[j] {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    queue.push_back(s);
                }
            }
        }
        if order.len() != n {
            let job = (0..n).find(|&j| indegree[j] > 0).unwrap_or(0);
            return Err(InstanceError::Cycle { job });
        }
        Ok(order)
    }

    /// Start times of the precedence-only earliest-start schedule.
    pub fn earliest_starts(&self) -> Vec<u32> {
        let order = self
            .topological_order()
            .expect("validated instance is acyclic");
        let mut starts = vec![1u32; self.num_jobs()];
        for j in order {
            starts[j] = self.jobs[j]
                .predecessors
                .iter()
                .map(|&p| starts[p] + self.jobs[p].duration)
                .max()
                .unwrap_or(1);
        }
        starts
    }
}

/// Start times `t_j` of a decoded solution together with its makespan.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    starts: Vec<u32>,
    makespan: u32,
}

impl Schedule {
    /// Builds a schedule from start times, computing the makespan as the
    /// last occupied slot.
    pub fn new(instance: &Instance, starts: Vec<u32>) -> Self {
        let makespan = starts
            .iter()
            .zip(instance.jobs())
            .map(|(&t, job)| (t + job.duration).saturating_sub(1))
            .max()
            .unwrap_or(0);
        Schedule { starts, makespan }
    }

    pub(crate) fn reset(&mut self, num_jobs: usize) {
        self.starts.clear();
        self.starts.resize(num_jobs, 0);
        self.makespan = 0;
    }

    pub(crate) fn starts_mut(&mut self) -> &mut [u32] {
        &mut self.starts
    }

    pub(crate) fn set_makespan(&mut self, makespan: u32) {
        self.makespan = makespan;
    }

    #[inline]
    pub fn starts(&self) -> &[u32] {
        &self.starts
    }

    #[inline]
    pub fn start(&self, j: usize) -> u32 {
        self.starts[j]
    }

    #[inline]
    pub fn makespan(&self) -> u32 {
        self.makespan
    }

    pub fn into_starts(self) -> Vec<u32> {
        self.starts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Instance {
        Instance::new(
            vec![4],
            vec![
                Job::new(3, vec![1], vec![]),
                Job::new(2, vec![2], vec![0]),
                Job::new(1, vec![0], vec![1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn horizon_sums_durations() {
        let single = Instance::new(vec![1], vec![Job::new(3, vec![0], vec![])]).unwrap();
        assert_eq!(single.horizon(), 3);
        let three = Instance::new(
            vec![1],
            vec![
                Job::new(2, vec![0], vec![]),
                Job::new(5, vec![0], vec![]),
                Job::new(1, vec![0], vec![]),
            ],
        )
        .unwrap();
        assert_eq!(three.horizon(), 8);
    }

    #[test]
    fn successors_mirror_predecessors() {
        let inst = chain3();
        assert_eq!(inst.successors(0), &[1]);
        assert_eq!(inst.successors(1), &[2]);
        assert!(inst.successors(2).is_empty());
        assert_eq!(inst.earliest_starts(), vec![1, 4, 6]);
    }

    #[test]
    fn rejects_invariant_violations() {
        assert_eq!(
            Instance::new(vec![4], vec![Job::new(1, vec![5], vec![])]),
            Err(InstanceError::DemandExceedsCapacity {
                job: 0,
                resource: 0,
                demand: 5,
                capacity: 4
            })
        );
        assert_eq!(
            Instance::new(vec![4], vec![Job::new(0, vec![1], vec![])]),
            Err(InstanceError::ZeroDuration { job: 0 })
        );
        assert!(matches!(
            Instance::new(vec![4], vec![Job::new(1, vec![1, 1], vec![])]),
            Err(InstanceError::DemandCount { .. })
        ));
        assert!(matches!(
            Instance::new(vec![4], vec![Job::new(1, vec![1], vec![3])]),
            Err(InstanceError::UnknownPredecessor { .. })
        ));
        assert!(matches!(
            Instance::new(
                vec![4],
                vec![Job::new(1, vec![1], vec![1]), Job::new(1, vec![1], vec![0])]
            ),
            Err(InstanceError::Cycle { .. })
        ));
        assert!(matches!(
            Instance::new(vec![4], vec![Job::new(1, vec![1], vec![0])]),
            Err(InstanceError::Cycle { job: 0 })
        ));
    }

    #[test]
    fn schedule_makespan_is_last_occupied_slot() {
        let inst = chain3();
        let s = Schedule::new(&inst, vec![1, 4, 6]);
        assert_eq!(s.makespan(), 6);
    }
}
