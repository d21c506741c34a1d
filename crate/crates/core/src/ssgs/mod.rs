//! The SSGS driver shared by every implementation, the conventional
//! baseline, and the enhanced (non-Bloom) implementation.
//!
//! The driver walks the permutation, computes each job's precedence-based
//! earliest start, and delegates the slot search and the availability update
//! to an [`SsgsStrategy`]. At the end it restores the used prefix of the
//! availability profile so the next execution starts from a clean profile.

mod conventional;
pub mod enhanced;
mod profile;

pub use conventional::{find_conventional, update_conventional, ConvDecoder, Conventional};
pub use enhanced::{
    find_enhanced, find_single_resource, order_resources, preprocess, ssgs_data_run,
    update_enhanced, update_single_resource, DataCollector, Enhanced, InsufficiencyStats,
    JobPreprocess, Kernel, NbfDecoder, ResourceDemand,
};
pub use profile::AvailabilityProfile;

use crate::instance::{Instance, Permutation, Schedule};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsgsError {
    #[error("permutation has {found} entries, instance has {expected} jobs")]
    Length { expected: usize, found: usize },
    #[error("job {job} appears twice or is out of range")]
    InvalidJob { job: usize },
    #[error("job {job} is scheduled before its predecessor {predecessor}")]
    UnscheduledPredecessor { job: usize, predecessor: usize },
}

/// Instrumentation hooks for the inner loops. The unit type ignores every
/// event and compiles away.
pub trait Probe {
    /// One slot was tested for resource sufficiency.
    #[inline(always)]
    fn slot_test(&mut self) {}
    /// A slot needed a full per-resource comparison after the filter test.
    #[inline(always)]
    fn verification(&mut self) {}
}

impl Probe for () {}

/// Event counts collected by a [`Probe`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProbeCounts {
    pub slot_tests: u64,
    pub verifications: u64,
}

impl Probe for ProbeCounts {
    #[inline]
    fn slot_test(&mut self) {
        self.slot_tests += 1;
    }

    #[inline]
    fn verification(&mut self) {
        self.verifications += 1;
    }
}

/// The `find`/`update` pair an SSGS implementation plugs into the driver.
pub trait SsgsStrategy {
    /// Earliest slot `>= earliest` where `job` fits for its whole duration.
    fn find(
        &mut self,
        instance: &Instance,
        job: usize,
        earliest: u32,
        profile: &AvailabilityProfile,
    ) -> u32;

    /// Commits `job` at `start`.
    fn update(
        &mut self,
        instance: &Instance,
        job: usize,
        start: u32,
        profile: &mut AvailabilityProfile,
    );

    /// Returns the profile to full capacity after an execution.
    fn restore(&mut self, profile: &mut AvailabilityProfile, makespan: u32) {
        profile.restore(makespan);
    }
}

/// Earliest start allowed by precedence: the latest finish of the
/// predecessors, or slot 1. `starts[p] == 0` marks an unscheduled job.
#[inline]
pub fn precedence_earliest_start(
    instance: &Instance,
    job: usize,
    starts: &[u32],
) -> Result<u32, SsgsError> {
    let mut earliest = 1;
    for &p in instance.predecessors(job) {
        let s = starts[p];
        if s == 0 {
            return Err(SsgsError::UnscheduledPredecessor {
                job,
                predecessor: p,
            });
        }
        earliest = earliest.max(s + instance.duration(p));
    }
    Ok(earliest)
}

/// Decodes `order` into `schedule` with the given strategy.
///
/// `profile` must be at full capacity on entry and is at full capacity again
/// on return, also when an error is reported.
pub fn ssgs_run_into<S: SsgsStrategy + ?Sized>(
    instance: &Instance,
    order: &[usize],
    profile: &mut AvailabilityProfile,
    strategy: &mut S,
    schedule: &mut Schedule,
) -> Result<(), SsgsError> {
    let n = instance.num_jobs();
    schedule.reset(n);
    if order.len() != n {
        return Err(SsgsError::Length {
            expected: n,
            found: order.len(),
        });
    }
    let mut makespan = 0;
    let mut result = Ok(());
    for &job in order {
        if job >= n || schedule.starts()[job] != 0 {
            result = Err(SsgsError::InvalidJob { job });
            break;
        }
        let earliest = match precedence_earliest_start(instance, job, schedule.starts()) {
            Ok(t) => t,
            Err(e) => {
                result = Err(e);
                break;
            }
        };
        let start = strategy.find(instance, job, earliest, profile);
        let finish = start + instance.duration(job) - 1;
        assert!(finish <= profile.horizon(), "schedule exceeds the horizon");
        strategy.update(instance, job, start, profile);
        schedule.starts_mut()[job] = start;
        makespan = makespan.max(finish);
    }
    strategy.restore(profile, makespan);
    if result.is_ok() {
        schedule.set_makespan(makespan);
    }
    result
}

pub fn ssgs_run<S: SsgsStrategy + ?Sized>(
    instance: &Instance,
    permutation: &Permutation,
    profile: &mut AvailabilityProfile,
    strategy: &mut S,
) -> Result<Schedule, SsgsError> {
    let mut schedule = Schedule::default();
    ssgs_run_into(
        instance,
        permutation.as_slice(),
        profile,
        strategy,
        &mut schedule,
    )?;
    Ok(schedule)
}

/// Which SSGS implementation produced an execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Implementation {
    Conv,
    Nbf,
    Bf,
    Hybrid,
}

impl Implementation {
    pub const ALL: [Implementation; 4] = [
        Implementation::Conv,
        Implementation::Nbf,
        Implementation::Bf,
        Implementation::Hybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Implementation::Conv => "Conv",
            Implementation::Nbf => "NBF",
            Implementation::Bf => "BF",
            Implementation::Hybrid => "Hybrid",
        }
    }
}

impl std::fmt::Display for Implementation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Implementation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "conv" => Ok(Implementation::Conv),
            "nbf" => Ok(Implementation::Nbf),
            "bf" => Ok(Implementation::Bf),
            "hybrid" => Ok(Implementation::Hybrid),
            other => Err(format!("unknown implementation {other:?}")),
        }
    }
}

/// Per-kind execution counts reported by the hybrid decoder.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExecutionCounts {
    pub data: u64,
    pub bf: u64,
    pub nbf: u64,
}

/// A complete SSGS implementation bound to one instance: what a
/// metaheuristic calls to evaluate a permutation.
pub trait Decoder {
    fn implementation(&self) -> Implementation;

    fn decode(&mut self, permutation: &Permutation) -> Result<&Schedule, SsgsError>;

    fn execution_counts(&self) -> Option<ExecutionCounts> {
        None
    }
}

impl<D: Decoder + ?Sized> Decoder for &mut D {
    fn implementation(&self) -> Implementation {
        (**self).implementation()
    }

    fn decode(&mut self, permutation: &Permutation) -> Result<&Schedule, SsgsError> {
        (**self).decode(permutation)
    }

    fn execution_counts(&self) -> Option<ExecutionCounts> {
        (**self).execution_counts()
    }
}

impl<D: Decoder + ?Sized> Decoder for Box<D> {
    fn implementation(&self) -> Implementation {
        (**self).implementation()
    }

    fn decode(&mut self, permutation: &Permutation) -> Result<&Schedule, SsgsError> {
        (**self).decode(permutation)
    }

    fn execution_counts(&self) -> Option<ExecutionCounts> {
        (**self).execution_counts()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Job;

    #[test]
    fn earliest_start_follows_latest_predecessor() {
        let inst = Instance::new(
            vec![1],
            vec![
                Job::new(4, vec![0], vec![]),
                Job::new(2, vec![0], vec![]),
                Job::new(1, vec![0], vec![0, 1]),
            ],
        )
        .unwrap();
        // Predecessors finish at the end of slots 4 and 7.
        assert_eq!(precedence_earliest_start(&inst, 2, &[1, 6, 0]), Ok(8));
        assert_eq!(precedence_earliest_start(&inst, 0, &[0, 0, 0]), Ok(1));
        assert_eq!(
            precedence_earliest_start(&inst, 2, &[1, 0, 0]),
            Err(SsgsError::UnscheduledPredecessor {
                job: 2,
                predecessor: 1
            })
        );
    }

    #[test]
    fn driver_rejects_infeasible_order_and_stays_clean() {
        let inst = Instance::new(
            vec![2],
            vec![Job::new(2, vec![1], vec![]), Job::new(1, vec![1], vec![0])],
        )
        .unwrap();
        let mut profile = AvailabilityProfile::for_instance(&inst);
        let bad = Permutation::new_unchecked(vec![1, 0]);
        assert!(matches!(
            ssgs_run(&inst, &bad, &mut profile, &mut Conventional),
            Err(SsgsError::UnscheduledPredecessor { .. })
        ));
        assert!(profile.is_pristine());
        let dup = Permutation::new_unchecked(vec![0, 0]);
        assert_eq!(
            ssgs_run(&inst, &dup, &mut profile, &mut Conventional),
            Err(SsgsError::InvalidJob { job: 0 })
        );
        assert!(profile.is_pristine());
    }

    #[test]
    fn implementation_names_parse_back() {
        for i in Implementation::ALL {
            assert_eq!(i.name().parse::<Implementation>(), Ok(i));
        }
    }
}
