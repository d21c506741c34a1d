//! Conventional SSGS: forward slot scan over every resource, no
//! preprocessing. This is the baseline the other implementations are
//! measured against.

use super::{
    ssgs_run_into, AvailabilityProfile, Decoder, Implementation, Probe, SsgsError, SsgsStrategy,
};
use crate::instance::{Instance, Permutation, Schedule};

/// Forward scan: tests slots `t_j, t_j + 1, ...` and restarts the window
/// right after the first insufficient slot.
pub fn find_conventional<P: Probe>(
    instance: &Instance,
    job: usize,
    earliest: u32,
    profile: &AvailabilityProfile,
    probe: &mut P,
) -> u32 {
    let demands = &instance.job(job).demands;
    let duration = instance.duration(job);
    let mut start = earliest;
    let mut t = start;
    while t < start + duration {
        probe.slot_test();
        let sufficient = demands
            .iter()
            .enumerate()
            .all(|(r, &v)| profile.get(t, r) >= v);
        if sufficient {
            t += 1;
        } else {
            start = t + 1;
            t = start;
        }
    }
    start
}

pub fn update_conventional(
    instance: &Instance,
    job: usize,
    start: u32,
    profile: &mut AvailabilityProfile,
) {
    let duration = instance.duration(job);
    for (r, &v) in instance.job(job).demands.iter().enumerate() {
        profile.consume(r, start, duration, v);
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Conventional;

impl SsgsStrategy for Conventional {
    #[inline]
    fn find(
        &mut self,
        instance: &Instance,
        job: usize,
        earliest: u32,
        profile: &AvailabilityProfile,
    ) -> u32 {
        find_conventional(instance, job, earliest, profile, &mut ())
    }

    #[inline]
    fn update(
        &mut self,
        instance: &Instance,
        job: usize,
        start: u32,
        profile: &mut AvailabilityProfile,
    ) {
        update_conventional(instance, job, start, profile);
    }
}

/// The conventional implementation as a [`Decoder`].
#[derive(Debug, Clone)]
pub struct ConvDecoder<'a> {
    instance: &'a Instance,
    profile: AvailabilityProfile,
    schedule: Schedule,
}

impl<'a> ConvDecoder<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        ConvDecoder {
            instance,
            profile: AvailabilityProfile::for_instance(instance),
            schedule: Schedule::default(),
        }
    }

    pub fn profile(&self) -> &AvailabilityProfile {
        &self.profile
    }
}

impl Decoder for ConvDecoder<'_> {
    fn implementation(&self) -> Implementation {
        Implementation::Conv
    }

    fn decode(&mut self, permutation: &Permutation) -> Result<&Schedule, SsgsError> {
        ssgs_run_into(
            self.instance,
            permutation.as_slice(),
            &mut self.profile,
            &mut Conventional,
            &mut self.schedule,
        )?;
        Ok(&self.schedule)
    }
}
