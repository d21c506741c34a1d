use crate::instance::Instance;
use crate::num::Probability;
use crate::ssgs::InsufficiencyStats;

/// Per-resource distributions that drive the structure builder.
///
/// `demand[r][k]` is the probability that a random job demands exactly `k`
/// units of `r`. `availability[r][k]` is the probability that a slot
/// examined during the data execution had exactly `k` units of `r` left.
/// Both are indexed `0 ..= c_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceDistributions<P> {
    pub demand: Vec<Vec<P>>,
    pub availability: Vec<Vec<P>>,
}

impl<P: Probability> ResourceDistributions<P> {
    pub fn new(demand: Vec<Vec<P>>, availability: Vec<Vec<P>>) -> Self {
        ResourceDistributions {
            demand,
            availability,
        }
    }

    /// Demand from the instance, availability from a data execution.
    pub fn from_run(instance: &Instance, stats: &InsufficiencyStats) -> Self {
        Self::new(
            compute_demand_distribution(instance),
            availability_distribution(stats),
        )
    }
}

pub fn compute_demand_distribution<P: Probability>(instance: &Instance) -> Vec<Vec<P>> {
    let n = instance.num_jobs() as u64;
    instance
        .capacities()
        .iter()
        .enumerate()
        .map(|(r, &c)| {
            let mut counts = vec![0u64; c as usize + 1];
            for job in instance.jobs() {
                counts[job.demands[r] as usize] += 1;
            }
            if n == 0 {
                counts[0] = 1;
            }
            normalize(&counts)
        })
        .collect()
}

/// Normalized availability histograms. A resource that was never examined
/// gets the uniform distribution over `0 ..= c_r`.
pub fn availability_distribution<P: Probability>(stats: &InsufficiencyStats) -> Vec<Vec<P>> {
    stats
        .histograms()
        .iter()
        .map(|bins| {
            if bins.iter().all(|&b| b == 0) {
                vec![P::from_counts(1, bins.len() as u64); bins.len()]
            } else {
                normalize(bins)
            }
        })
        .collect()
}

fn normalize<P: Probability>(counts: &[u64]) -> Vec<P> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| P::from_counts(c, total)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, GeneratorParams, Job, Permutation};
    use crate::ssgs::{preprocess, ssgs_data_run, AvailabilityProfile};
    use num_rational::Rational64;

    #[test]
    fn two_job_demand_distribution() {
        let inst = Instance::new(
            vec![4],
            vec![Job::new(1, vec![0], vec![]), Job::new(1, vec![3], vec![])],
        )
        .unwrap();
        let d: Vec<Vec<f64>> = compute_demand_distribution(&inst);
        assert_eq!(d, vec![vec![0.5, 0.0, 0.0, 0.5, 0.0]]);
    }

    #[test]
    fn zero_demand_everywhere_puts_all_mass_on_zero() {
        let inst = Instance::new(vec![2, 3], vec![Job::new(1, vec![0, 0], vec![]); 3]).unwrap();
        let d: Vec<Vec<Rational64>> = compute_demand_distribution(&inst);
        assert_eq!(d[0][0], Rational64::from_integer(1));
        assert_eq!(d[1][0], Rational64::from_integer(1));
    }

    #[test]
    fn generated_instance_distributions_sum_to_one() {
        let inst = generate_instance(&GeneratorParams::default()).unwrap();
        let d: Vec<Vec<f64>> = compute_demand_distribution(&inst);
        for dist in &d {
            assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(dist.iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn histogram_normalizes_and_empty_falls_back_to_uniform() {
        let inst = Instance::new(vec![1, 3], vec![Job::new(1, vec![0, 0], vec![])]).unwrap();
        let mut stats = InsufficiencyStats::new(&inst);
        stats.set_histogram(0, vec![3, 1]);
        let e: Vec<Vec<f64>> = availability_distribution(&stats);
        assert_eq!(e[0], vec![0.75, 0.25]);
        assert_eq!(e[1], vec![0.25; 4]);
    }

    #[test]
    fn availability_from_contended_data_run() {
        // Same fixture as the data-run test in the SSGS module: one slot
        // seen busy, four seen free.
        let inst = Instance::new(
            vec![1],
            vec![Job::new(2, vec![1], vec![]), Job::new(2, vec![1], vec![])],
        )
        .unwrap();
        let mut profile = AvailabilityProfile::for_instance(&inst);
        let prep = preprocess(&inst);
        let (_, stats) = ssgs_data_run(
            &inst,
            &Permutation::new_unchecked(vec![0, 1]),
            &mut profile,
            &prep,
        )
        .unwrap();
        let dists = ResourceDistributions::<Rational64>::from_run(&inst, &stats);
        assert_eq!(
            dists.availability[0],
            vec![Rational64::new(1, 5), Rational64::new(4, 5)]
        );
        assert_eq!(
            dists.demand[0],
            vec![Rational64::from_integer(0), Rational64::from_integer(1)]
        );
    }
}
