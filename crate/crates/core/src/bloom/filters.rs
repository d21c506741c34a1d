use super::structure::BloomStructure;
use crate::ssgs::{AvailabilityProfile, Probe, ResourceDemand};

/// Filter word of a job plus whether its filter verdict is final.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct JobFilter {
    pub word: u32,
    /// Every consumed resource has its exact demand level in the structure,
    /// so a passing filter test proves sufficiency.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterVerdict {
    /// Some demanded level bit is missing from the slot: guaranteed correct.
    Insufficient,
    /// The slot may suffice; verify unless the job is exact.
    MaybeSufficient,
}

#[inline(always)]
pub fn filter_test(job_word: u32, slot_word: u32) -> FilterVerdict {
    if job_word & !slot_word == 0 {
        FilterVerdict::MaybeSufficient
    } else {
        FilterVerdict::Insufficient
    }
}

pub fn compute_exactness(demands: &[u32], structure: &BloomStructure) -> bool {
    demands
        .iter()
        .enumerate()
        .all(|(r, &v)| v == 0 || structure.contains(r, v))
}

pub fn encode_job(demands: &[u32], structure: &BloomStructure) -> JobFilter {
    JobFilter {
        word: structure.encode(demands),
        exact: compute_exactness(demands, structure),
    }
}

/// Word of slot `t` from its availability column.
pub fn encode_slot(column: &[u32], structure: &BloomStructure) -> u32 {
    structure.encode(column)
}

/// One filter word per slot, kept in step with an [`AvailabilityProfile`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotFilterBank {
    full: u32,
    words: Vec<u32>,
}

impl SlotFilterBank {
    /// All slots at full capacity.
    pub fn new(structure: &BloomStructure, horizon: u32) -> Self {
        let full = structure.full_word();
        SlotFilterBank {
            full,
            words: vec![full; horizon as usize + 1],
        }
    }

    /// Re-encodes every slot of `profile`.
    pub fn from_profile(structure: &BloomStructure, profile: &AvailabilityProfile) -> Self {
        let mut bank = Self::new(structure, profile.horizon());
        for t in 1..=profile.horizon() {
            bank.words[t as usize] = encode_slot(&profile.column(t), structure);
        }
        bank
    }

    #[inline]
    pub fn word(&self, slot: u32) -> u32 {
        self.words[slot as usize]
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    /// Resets slots `1 ..= makespan` to the full word.
    pub fn restore(&mut self, makespan: u32) {
        let m = (makespan as usize).min(self.words.len() - 1);
        self.words[1..=m].fill(self.full);
    }
}

/// Reversed-window search where each slot is first tested with one
/// `AND NOT` of the job and slot words.
pub fn find_bloom<P: Probe>(
    duration: u32,
    earliest: u32,
    profile: &AvailabilityProfile,
    bank: &SlotFilterBank,
    filter: JobFilter,
    consumed: &[ResourceDemand],
    probe: &mut P,
) -> u32 {
    if consumed.is_empty() {
        return earliest;
    }
    let words = &bank.words;
    let mut start = earliest;
    let mut t = start + duration - 1;
    let mut test_from = start;
    while t >= test_from {
        probe.slot_test();
        let sufficient = match filter_test(filter.word, words[t as usize]) {
            FilterVerdict::Insufficient => false,
            FilterVerdict::MaybeSufficient if filter.exact => true,
            FilterVerdict::MaybeSufficient => {
                probe.verification();
                consumed
                    .iter()
                    .all(|rd| profile.get(t, rd.resource) >= rd.demand)
            }
        };
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

/// Consumes the job's demands and refreshes only the consumed resources'
/// spans of the affected slot words.
pub fn update_with_filters(
    duration: u32,
    start: u32,
    profile: &mut AvailabilityProfile,
    bank: &mut SlotFilterBank,
    structure: &BloomStructure,
    consumed: &[ResourceDemand],
) {
    let slots = start as usize..(start + duration) as usize;
    for rd in consumed {
        let keep = !structure.span_mask(rd.resource);
        let masks = structure.level_masks(rd.resource);
        let row = &mut profile.row_mut(rd.resource)[slots.clone()];
        for (cell, word) in row.iter_mut().zip(&mut bank.words[slots.clone()]) {
            debug_assert!(*cell >= rd.demand, "availability would go negative");
            *cell -= rd.demand;
            *word = (*word & keep) | masks[*cell as usize];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloom::LevelBit;
    use crate::ssgs::ProbeCounts;

    fn figure_structure() -> BloomStructure {
        let bits = [
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 1),
            (2, 3),
            (3, 1),
            (3, 3),
            (3, 4),
        ]
        .into_iter()
        .map(|(r, k)| LevelBit::new(r - 1, k))
        .collect();
        BloomStructure::new(&[4, 4, 4], bits).unwrap()
    }

    #[test]
    fn worked_example_words_and_verdicts() {
        let s = figure_structure();
        let job = encode_job(&[3, 2, 0], &s);
        assert_eq!(s.format_word(job.word), "110 10 000");
        assert!(!job.exact, "u_{{2,2}} is not retained");

        let t = encode_slot(&[2, 3, 4], &s);
        let t1 = encode_slot(&[3, 1, 4], &s);
        let t2 = encode_slot(&[3, 2, 2], &s);
        assert_eq!(s.format_word(t), "100 11 111");
        assert_eq!(s.format_word(t1), "110 10 111");
        assert_eq!(s.format_word(t2), "110 10 100");

        assert_eq!(filter_test(job.word, t), FilterVerdict::Insufficient);
        assert_eq!(filter_test(job.word, t1), FilterVerdict::MaybeSufficient);
        assert_eq!(filter_test(job.word, t2), FilterVerdict::MaybeSufficient);
    }

    #[test]
    fn zero_demand_and_full_demand_words() {
        let s = BloomStructure::full(&[3, 2]).unwrap();
        assert_eq!(
            encode_job(&[0, 0], &s),
            JobFilter {
                word: 0,
                exact: true
            }
        );
        let full = encode_job(&[3, 2], &s);
        assert_eq!(full.word, s.full_word());
        assert!(full.exact);
        assert_eq!(encode_slot(&[3, 2], &s), s.full_word());
    }

    #[test]
    fn exactness_requires_every_consumed_level() {
        let s = figure_structure();
        assert!(compute_exactness(&[3, 3, 0], &s));
        assert!(!compute_exactness(&[3, 2, 0], &s));
        assert!(!compute_exactness(&[1, 0, 0], &s));
        let full = BloomStructure::full(&[4, 4, 4]).unwrap();
        assert!(compute_exactness(&[1, 2, 0], &full));
    }

    #[test]
    fn bank_follows_updates_and_restore() {
        let s = figure_structure();
        let mut profile = AvailabilityProfile::new(&[4, 4, 4], 10);
        let mut bank = SlotFilterBank::new(&s, 10);
        let consumed = [
            ResourceDemand {
                resource: 0,
                demand: 2,
            },
            ResourceDemand {
                resource: 1,
                demand: 3,
            },
        ];
        update_with_filters(3, 2, &mut profile, &mut bank, &s, &consumed);
        assert_eq!(bank, SlotFilterBank::from_profile(&s, &profile));
        // Resource 3's span is untouched.
        assert_eq!(bank.word(3) & s.span_mask(2), s.span_mask(2));
        profile.restore(4);
        bank.restore(4);
        assert!(profile.is_pristine());
        assert_eq!(bank, SlotFilterBank::new(&s, 10));
    }

    #[test]
    fn exact_jobs_skip_verification() {
        let s = BloomStructure::full(&[2, 2]).unwrap();
        let mut profile = AvailabilityProfile::new(&[2, 2], 10);
        let mut bank = SlotFilterBank::new(&s, 10);
        let blocker = [ResourceDemand {
            resource: 0,
            demand: 2,
        }];
        update_with_filters(1, 3, &mut profile, &mut bank, &s, &blocker);
        let consumed = [
            ResourceDemand {
                resource: 0,
                demand: 1,
            },
            ResourceDemand {
                resource: 1,
                demand: 1,
            },
        ];
        let filter = encode_job(&[1, 1], &s);
        let mut probe = ProbeCounts::default();
        assert_eq!(
            find_bloom(2, 2, &profile, &bank, filter, &consumed, &mut probe),
            4
        );
        assert_eq!(probe.verifications, 0);
    }

    #[test]
    fn false_positives_are_verified() {
        // Only u_{1,1} retained: a demand of 2 cannot be told apart from 1.
        let s = BloomStructure::new(&[2, 2], vec![LevelBit::new(0, 1)]).unwrap();
        let mut profile = AvailabilityProfile::new(&[2, 2], 10);
        let mut bank = SlotFilterBank::new(&s, 10);
        let blocker = [ResourceDemand {
            resource: 0,
            demand: 1,
        }];
        update_with_filters(2, 1, &mut profile, &mut bank, &s, &blocker);
        let consumed = [
            ResourceDemand {
                resource: 0,
                demand: 2,
            },
            ResourceDemand {
                resource: 1,
                demand: 1,
            },
        ];
        let filter = encode_job(&[2, 1], &s);
        assert!(!filter.exact);
        let mut probe = ProbeCounts::default();
        assert_eq!(
            find_bloom(1, 1, &profile, &bank, filter, &consumed, &mut probe),
            3
        );
        assert_eq!(probe.verifications, 3);
    }
}
