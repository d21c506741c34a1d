//! Bloom-filter accelerated SSGS (BF).
//!
//! Every job and every slot carries one 32-bit word over a chosen subset `L`
//! of "at least `k` units of resource `r`" bits. A slot can only suffice for a
//! job if the slot word covers the job word, which is one `AND NOT`. Passing
//! slots are verified per resource unless the job's demands are all exactly
//! represented in `L`.

mod builder;
mod distributions;
mod filters;
mod structure;

pub use builder::{build_structure, build_structure_traced, deletion_cost};
pub use distributions::{
    availability_distribution, compute_demand_distribution, ResourceDistributions,
};
pub use filters::{
    compute_exactness, encode_job, encode_slot, filter_test, find_bloom, update_with_filters,
    FilterVerdict, JobFilter, SlotFilterBank,
};
pub use structure::{BloomStructure, LevelBit, StructureError, WORD_BITS};

use crate::instance::{Instance, Permutation, Schedule};
use crate::ssgs::enhanced::data_run_into;
use crate::ssgs::{
    find_single_resource, order_resources, preprocess, ssgs_run_into, AvailabilityProfile, Decoder,
    Implementation, InsufficiencyStats, JobPreprocess, Kernel, SsgsError, SsgsStrategy,
};

/// Structure, job words and slot words learned from one data execution.
#[derive(Debug, Clone)]
pub struct BloomFilters {
    structure: BloomStructure,
    jobs: Vec<JobFilter>,
    bank: SlotFilterBank,
}

impl BloomFilters {
    /// Optimizes a structure of at most `width` bits for `instance` from the
    /// statistics of a data execution.
    pub fn build(
        instance: &Instance,
        stats: &InsufficiencyStats,
        width: usize,
    ) -> Result<Self, StructureError> {
        let dists = ResourceDistributions::<f64>::from_run(instance, stats);
        let structure = build_structure(&dists, instance.capacities(), width)?;
        Ok(Self::with_structure(instance, structure))
    }

    pub fn with_structure(instance: &Instance, structure: BloomStructure) -> Self {
        let jobs = instance
            .jobs()
            .iter()
            .map(|job| encode_job(&job.demands, &structure))
            .collect();
        let bank = SlotFilterBank::new(&structure, instance.horizon());
        BloomFilters {
            structure,
            jobs,
            bank,
        }
    }

    pub fn structure(&self) -> &BloomStructure {
        &self.structure
    }

    pub fn job(&self, job: usize) -> JobFilter {
        self.jobs[job]
    }

    pub fn bank(&self) -> &SlotFilterBank {
        &self.bank
    }
}

/// The BF `find`/`update` pair. Single-resource jobs use the plain
/// single-row kernel but still refresh the slot words.
pub struct Bloom<'a> {
    prep: &'a [JobPreprocess],
    filters: &'a mut BloomFilters,
}

impl<'a> Bloom<'a> {
    pub fn new(prep: &'a [JobPreprocess], filters: &'a mut BloomFilters) -> Self {
        Bloom { prep, filters }
    }
}

impl SsgsStrategy for Bloom<'_> {
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
            Kernel::Multi => find_bloom(
                p.duration,
                earliest,
                profile,
                &self.filters.bank,
                self.filters.jobs[job],
                &p.consumed,
                &mut (),
            ),
        }
    }

    #[inline]
    fn update(&mut self, _: &Instance, job: usize, start: u32, profile: &mut AvailabilityProfile) {
        let p = &self.prep[job];
        let f = &mut *self.filters;
        update_with_filters(
            p.duration,
            start,
            profile,
            &mut f.bank,
            &f.structure,
            &p.consumed,
        );
    }

    fn restore(&mut self, profile: &mut AvailabilityProfile, makespan: u32) {
        profile.restore(makespan);
        self.filters.bank.restore(makespan);
    }
}

/// BF as a [`Decoder`]: the first call runs the data execution, orders the
/// resource lists and builds the filters; later calls use [`Bloom`].
#[derive(Debug, Clone)]
pub struct BfDecoder<'a> {
    instance: &'a Instance,
    profile: AvailabilityProfile,
    prep: Vec<JobPreprocess>,
    filters: Option<BloomFilters>,
    schedule: Schedule,
    width: usize,
}

impl<'a> BfDecoder<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Self::with_width(instance, WORD_BITS).expect("full word width is valid")
    }

    /// Limits the structure to `width` bits, `1 ..= 32`.
    pub fn with_width(instance: &'a Instance, width: usize) -> Result<Self, StructureError> {
        if width == 0 {
            return Err(StructureError::ZeroLimit);
        }
        if width > WORD_BITS {
            return Err(StructureError::TooWide(width));
        }
        Ok(BfDecoder {
            instance,
            profile: AvailabilityProfile::for_instance(instance),
            prep: preprocess(instance),
            filters: None,
            schedule: Schedule::default(),
            width,
        })
    }

    /// The learned filters, once the first execution has run.
    pub fn filters(&self) -> Option<&BloomFilters> {
        self.filters.as_ref()
    }
}

impl Decoder for BfDecoder<'_> {
    fn implementation(&self) -> Implementation {
        Implementation::Bf
    }

    fn decode(&mut self, permutation: &Permutation) -> Result<&Schedule, SsgsError> {
        match &mut self.filters {
            Some(filters) => ssgs_run_into(
                self.instance,
                permutation.as_slice(),
                &mut self.profile,
                &mut Bloom::new(&self.prep, filters),
                &mut self.schedule,
            )?,
            None => {
                let stats = data_run_into(
                    self.instance,
                    permutation.as_slice(),
                    &mut self.profile,
                    &self.prep,
                    &mut self.schedule,
                )?;
                order_resources(&mut self.prep, &stats);
                let filters = BloomFilters::build(self.instance, &stats, self.width)
                    .expect("width and distribution shapes are valid");
                self.filters = Some(filters);
            }
        }
        Ok(&self.schedule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, random_topological_permutation, GeneratorParams};
    use crate::ssgs::ConvDecoder;

    #[test]
    fn bf_matches_conv_on_generated_instances() {
        for seed in 0..5 {
            let inst = generate_instance(&GeneratorParams {
                num_jobs: 40,
                seed,
                ..Default::default()
            })
            .unwrap();
            let mut conv = ConvDecoder::new(&inst);
            let mut bf = BfDecoder::new(&inst);
            for k in 0..10 {
                let pi = random_topological_permutation(&inst, seed * 100 + k).unwrap();
                let expected = conv.decode(&pi).unwrap().clone();
                assert_eq!(
                    bf.decode(&pi).unwrap(),
                    &expected,
                    "seed {seed}, permutation {k}"
                );
            }
            let filters = bf.filters().unwrap();
            assert!(filters.structure().len() <= WORD_BITS);
            assert!(filters
                .bank()
                .words()
                .iter()
                .all(|&w| w == filters.structure().full_word()));
        }
    }

    #[test]
    fn width_is_validated() {
        let inst = generate_instance(&GeneratorParams {
            num_jobs: 5,
            ..Default::default()
        })
        .unwrap();
        assert!(matches!(
            BfDecoder::with_width(&inst, 0),
            Err(StructureError::ZeroLimit)
        ));
        assert!(matches!(
            BfDecoder::with_width(&inst, 33),
            Err(StructureError::TooWide(33))
        ));
        assert!(BfDecoder::with_width(&inst, 3).is_ok());
    }
}
