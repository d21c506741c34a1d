//! Enhanced SSGS without Bloom filters (NBF).
//!
//! Three changes over the conventional scan, none of which affect the
//! returned slot:
//!
//! * the candidate window is tested from its last slot backwards, and a slot
//!   already known to be sufficient is never tested again for the same job;
//! * each job only looks at the resources it consumes, in an order learned
//!   from an instrumented "data" execution (most often insufficient first);
//! * jobs consuming a single resource use a kernel without the resource loop.

use super::{
    ssgs_run_into, AvailabilityProfile, Decoder, Implementation, Probe, SsgsError, SsgsStrategy,
};
use crate::instance::{Instance, Permutation, Schedule};
use std::cmp::Reverse;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceDemand {
    pub resource: usize,
    pub demand: u32,
}

/// Which find/update specialisation a job dispatches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// Consumes nothing: always starts at its precedence earliest start.
    Idle,
    Single,
    Multi,
}

/// Per-job data computed once per instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobPreprocess {
    pub duration: u32,
    /// Resources with positive demand; ascending index until reordered.
    pub consumed: Vec<ResourceDemand>,
    pub kernel: Kernel,
}

pub fn preprocess(instance: &Instance) -> Vec<JobPreprocess> {
    instance
        .jobs()
        .iter()
        .map(|job| {
            let consumed: Vec<ResourceDemand> = job
                .demands
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0)
                .map(|(resource, &demand)| ResourceDemand { resource, demand })
                .collect();
            let kernel = match consumed.len() {
                0 => Kernel::Idle,
                1 => Kernel::Single,
                _ => Kernel::Multi,
            };
            JobPreprocess {
                duration: job.duration,
                consumed,
                kernel,
            }
        })
        .collect()
}

/// Reversed-window search with skip memory.
///
/// The window `[start, start + d - 1]` is tested from its end. When slot
/// `t` is insufficient the next window starts at `t + 1`, and slots below
/// the old window end were already seen to be sufficient, so testing stops
/// there.
pub fn find_enhanced<P: Probe>(
    duration: u32,
    earliest: u32,
    profile: &AvailabilityProfile,
    consumed: &[ResourceDemand],
    probe: &mut P,
) -> u32 {
    if consumed.is_empty() {
        return earliest;
    }
    let mut start = earliest;
    let mut t = start + duration - 1;
    let mut test_from = start;
    while t >= test_from {
        probe.slot_test();
        if consumed
            .iter()
            .all(|rd| profile.get(t, rd.resource) >= rd.demand)
        {
            t -= 1;
        } else {
            test_from = start + duration;
            start = t + 1;
            t = start + duration - 1;
        }
    }
    start
}

/// [`find_enhanced`] for a job that consumes a single resource, scanning one
/// availability row.
pub fn find_single_resource<P: Probe>(
    duration: u32,
    earliest: u32,
    row: &[u32],
    demand: u32,
    probe: &mut P,
) -> u32 {
    let mut start = earliest;
    let mut t = start + duration - 1;
    let mut test_from = start;
    while t >= test_from {
        probe.slot_test();
        if row[t as usize] >= demand {
            t -= 1;
        } else {
            test_from = start + duration;
            start = t + 1;
            t = start + duration - 1;
        }
    }
    start
}

#[inline]
pub fn update_enhanced(
    duration: u32,
    start: u32,
    profile: &mut AvailabilityProfile,
    consumed: &[ResourceDemand],
) {
    for rd in consumed {
        profile.consume(rd.resource, start, duration, rd.demand);
    }
}

#[inline]
pub fn update_single_resource(duration: u32, start: u32, row: &mut [u32], demand: u32) {
    for cell in &mut row[start as usize..(start + duration) as usize] {
        debug_assert!(*cell >= demand, "availability would go negative");
        *cell -= demand;
    }
}

/// The NBF `find`/`update` pair over preprocessed jobs.
#[derive(Debug, Clone, Copy)]
pub struct Enhanced<'p> {
    prep: &'p [JobPreprocess],
}

impl<'p> Enhanced<'p> {
    pub fn new(prep: &'p [JobPreprocess]) -> Self {
        Enhanced { prep }
    }
}

impl SsgsStrategy for Enhanced<'_> {
    #[inline]
    fn find(
        &mut self,
        _: &Instance,
        job: usize,
        earliest: u32,
        profile: &AvailabilityProfile,
    ) -> u32 {
        let p = &self.prep[job];
        match p.kernel {
            Kernel::Idle => earliest,
            Kernel::Single => {
                let rd = p.consumed[0];
                find_single_resource(
                    p.duration,
                    earliest,
                    profile.row(rd.resource),
                    rd.demand,
                    &mut (),
                )
            }
            Kernel::Multi => find_enhanced(p.duration, earliest, profile, &p.consumed, &mut ()),
        }
    }

    #[inline]
    fn update(&mut self, _: &Instance, job: usize, start: u32, profile: &mut AvailabilityProfile) {
        let p = &self.prep[job];
        match p.kernel {
            Kernel::Idle => {}
            Kernel::Single => {
                let rd = p.consumed[0];
                update_single_resource(p.duration, start, profile.row_mut(rd.resource), rd.demand);
            }
            Kernel::Multi => update_enhanced(p.duration, start, profile, &p.consumed),
        }
    }
}

/// Statistics gathered by an instrumented execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsufficiencyStats {
    num_resources: usize,
    /// `[job * |R| + r]`: times `r` was found insufficient while placing `job`.
    counts: Vec<u64>,
    /// `[r][k]`: times a tested slot had exactly `k` units of `r` available.
    histograms: Vec<Vec<u64>>,
}

impl InsufficiencyStats {
    pub fn new(instance: &Instance) -> Self {
        InsufficiencyStats {
            num_resources: instance.num_resources(),
            counts: vec![0; instance.num_jobs() * instance.num_resources()],
            histograms: instance
                .capacities()
                .iter()
                .map(|&c| vec![0; c as usize + 1])
                .collect(),
        }
    }

    #[inline]
    pub fn count(&self, job: usize, resource: usize) -> u64 {
        self.counts[job * self.num_resources + resource]
    }

    /// Observed availabilities of `resource`, indexed by units available.
    pub fn histogram(&self, resource: usize) -> &[u64] {
        &self.histograms[resource]
    }

    pub fn histograms(&self) -> &[Vec<u64>] {
        &self.histograms
    }

    /// Overwrites one histogram, e.g. to inject observations in tests.
    pub fn set_histogram(&mut self, resource: usize, bins: Vec<u64>) {
        assert_eq!(
            bins.len(),
            self.histograms[resource].len(),
            "bins must span 0..=capacity"
        );
        self.histograms[resource] = bins;
    }

    pub fn set_count(&mut self, job: usize, resource: usize, value: u64) {
        self.counts[job * self.num_resources + resource] = value;
    }

    pub fn total_insufficiencies(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Window search of the data execution: same scan as [`find_enhanced`], but
/// every consumed resource of every tested slot is examined (no early exit)
/// so that insufficiency counts and availability histograms are unbiased.
pub fn find_data(
    job: usize,
    duration: u32,
    earliest: u32,
    profile: &AvailabilityProfile,
    consumed: &[ResourceDemand],
    stats: &mut InsufficiencyStats,
) -> u32 {
    if consumed.is_empty() {
        return earliest;
    }
    let row = job * stats.num_resources;
    let mut start = earliest;
    let mut t = start + duration - 1;
    let mut test_from = start;
    while t >= test_from {
        let mut sufficient = true;
        for rd in consumed {
            let available = profile.get(t, rd.resource);
            stats.histograms[rd.resource][available as usize] += 1;
            if available < rd.demand {
                stats.counts[row + rd.resource] += 1;
                sufficient = false;
            }
        }
        if sufficient {
            t -= 1;
        } else {
            test_from = start + duration;
            start = t + 1;
            t = start + duration - 1;
        }
    }
    start
}

/// Strategy for the instrumented data execution.
pub struct DataCollector<'p, 's> {
    prep: &'p [JobPreprocess],
    stats: &'s mut InsufficiencyStats,
}

impl<'p, 's> DataCollector<'p, 's> {
    pub fn new(prep: &'p [JobPreprocess], stats: &'s mut InsufficiencyStats) -> Self {
        DataCollector { prep, stats }
    }
}

impl SsgsStrategy for DataCollector<'_, '_> {
    fn find(
        &mut self,
        _: &Instance,
        job: usize,
        earliest: u32,
        profile: &AvailabilityProfile,
    ) -> u32 {
        let p = &self.prep[job];
        find_data(job, p.duration, earliest, profile, &p.consumed, self.stats)
    }

    fn update(&mut self, _: &Instance, job: usize, start: u32, profile: &mut AvailabilityProfile) {
        let p = &self.prep[job];
        update_enhanced(p.duration, start, profile, &p.consumed);
    }
}

/// Runs the instrumented execution into `schedule`, returning its statistics.
pub(crate) fn data_run_into(
    instance: &Instance,
    order: &[usize],
    profile: &mut AvailabilityProfile,
    prep: &[JobPreprocess],
    schedule: &mut Schedule,
) -> Result<InsufficiencyStats, SsgsError> {
    let mut stats = InsufficiencyStats::new(instance);
    ssgs_run_into(
        instance,
        order,
        profile,
        &mut DataCollector::new(prep, &mut stats),
        schedule,
    )?;
    Ok(stats)
}

pub fn ssgs_data_run(
    instance: &Instance,
    permutation: &Permutation,
    profile: &mut AvailabilityProfile,
    prep: &[JobPreprocess],
) -> Result<(Schedule, InsufficiencyStats), SsgsError> {
    let mut schedule = Schedule::default();
    let stats = data_run_into(
        instance,
        permutation.as_slice(),
        profile,
        prep,
        &mut schedule,
    )?;
    Ok((schedule, stats))
}

/// Sorts every job's consumed resources by descending insufficiency count.
/// The sort is stable, so ties keep their current order.
pub fn order_resources(prep: &mut [JobPreprocess], stats: &InsufficiencyStats) {
    for (job, p) in prep.iter_mut().enumerate() {
        p.consumed
            .sort_by_key(|rd| Reverse(stats.count(job, rd.resource)));
    }
}

/// NBF as a [`Decoder`]: the first call runs the data execution and orders
/// the resource lists; later calls use the enhanced strategy.
#[derive(Debug, Clone)]
pub struct NbfDecoder<'a> {
    instance: &'a Instance,
    profile: AvailabilityProfile,
    prep: Vec<JobPreprocess>,
    schedule: Schedule,
    primed: bool,
}

impl<'a> NbfDecoder<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        NbfDecoder {
            instance,
            profile: AvailabilityProfile::for_instance(instance),
            prep: preprocess(instance),
            schedule: Schedule::default(),
            primed: false,
        }
    }

    pub fn preprocessed(&self) -> &[JobPreprocess] {
        &self.prep
    }
}

impl Decoder for NbfDecoder<'_> {
    fn implementation(&self) -> Implementation {
        Implementation::Nbf
    }

    fn decode(&mut self, permutation: &Permutation) -> Result<&Schedule, SsgsError> {
        if self.primed {
            ssgs_run_into(
                self.instance,
                permutation.as_slice(),
                &mut self.profile,
                &mut Enhanced::new(&self.prep),
                &mut self.schedule,
            )?;
        } else {
            let stats = data_run_into(
                self.instance,
                permutation.as_slice(),
                &mut self.profile,
                &self.prep,
                &mut self.schedule,
            )?;
            order_resources(&mut self.prep, &stats);
            self.primed = true;
        }
        Ok(&self.schedule)
    }
}
