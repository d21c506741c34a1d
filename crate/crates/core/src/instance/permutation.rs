use super::{Instance, InstanceError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("permutation has {found} entries, instance has {expected} jobs")]
    Length { expected: usize, found: usize },
    #[error("job {job} is out of range or repeated")]
    NotAPermutation { job: usize },
    #[error("job {job} precedes its predecessor {predecessor}")]
    Precedence { job: usize, predecessor: usize },
}

/// A precedence-feasible order of all jobs: the indirect solution
/// representation decoded by SSGS.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(instance: &Instance, order: Vec<usize>) -> Result<Self, PermutationError> {
        check_order(instance, &order)?;
        Ok(Permutation(order))
    }

    /// Wraps an order without checking it. Decoders still reject orders that
    /// schedule a job before one of its predecessors.
    pub fn new_unchecked(order: Vec<usize>) -> Self {
        Permutation(order)
    }

    #[inline]
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `positions()[j]` is the index of job `j` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            pos[j] = i;
        }
        pos
    }

    pub fn is_precedence_feasible(&self, instance: &Instance) -> bool {
        check_order(instance, &self.0).is_ok()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub(crate) fn as_mut_vec(&mut self) -> &mut Vec<usize> {
        &mut self.0
    }
}

fn check_order(instance: &Instance, order: &[usize]) -> Result<(), PermutationError> {
    let n = instance.num_jobs();
    if order.len() != n {
        return Err(PermutationError::Length {
            expected: n,
            found: order.len(),
        });
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &j) in order.iter().enumerate() {
        if j >= n || pos[j] != usize::MAX {
            return Err(PermutationError::NotAPermutation { job: j });
        }
        pos[j] = i;
    }
    for (j, job) in instance.jobs().iter().enumerate() {
        if let Some(&p) = job.predecessors.iter().find(|&&p| pos[p] > pos[j]) {
            return Err(PermutationError::Precedence {
                job: j,
                predecessor: p,
            });
        }
    }
    Ok(())
}

/// Samples a topological order of a raw precedence graph, choosing uniformly
/// among the currently eligible jobs at every step.
///
/// `predecessors[j]` lists the predecessors of job `j`; indices must be in
/// range. Cycles are reported rather than silently truncated.
pub fn random_topological_order<R: Rng + ?Sized>(
    predecessors: &[Vec<usize>],
    rng: &mut R,
) -> Result<Vec<usize>, InstanceError> {
    let n = predecessors.len();
    let mut successors = vec![Vec::new(); n];
    let mut remaining = vec![0usize; n];
    for (j, preds) in predecessors.iter().enumerate() {
        remaining[j] = preds.len();
        for &p in preds {
            successors[p].push(j);
        }
    }
    let mut eligible: Vec<usize> = (0..n).filter(|&j| remaining[j] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !eligible.is_empty() {
        let pick = rng.random_range(0..eligible.len());
        let j = eligible.swap_remove(pick);
        order.push(j);
        for &s in &successors[j] {
            remaining[s] -= 1;
            if remaining[s] == 0 {
                eligible.push(s);
            }
        }
    }
    if order.len() != n {
        let job = (0..n).find(|&j| remaining[j] > 0).unwrap_or(0);
        return Err(InstanceError::Cycle { job });
    }
    Ok(order)
}

/// Random precedence-feasible permutation, deterministic per seed.
pub fn random_topological_permutation(
    instance: &Instance,
    seed: u64,
) -> Result<Permutation, InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_permutation_with(instance, &mut rng)
}

pub(crate) fn random_permutation_with<R: Rng + ?Sized>(
    instance: &Instance,
    rng: &mut R,
) -> Result<Permutation, InstanceError> {
    let preds: Vec<Vec<usize>> = instance
        .jobs()
        .iter()
        .map(|j| j.predecessors.clone())
        .collect();
    random_topological_order(&preds, rng).map(Permutation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Job;
    use std::collections::HashMap;

    fn independent(n: usize) -> Instance {
        Instance::new(
            vec![1],
            (0..n).map(|_| Job::new(1, vec![0], vec![])).collect(),
        )
        .unwrap()
    }

    #[test]
    fn chain_has_a_single_order() {
        let inst = Instance::new(
            vec![1],
            vec![
                Job::new(1, vec![0], vec![]),
                Job::new(1, vec![0], vec![0]),
                Job::new(1, vec![0], vec![1]),
            ],
        )
        .unwrap();
        for seed in 0..20 {
            let p = random_topological_permutation(&inst, seed).unwrap();
            assert_eq!(p.as_slice(), &[0, 1, 2]);
        }
    }

    #[test]
    fn independent_jobs_cover_all_orders_evenly() {
        let inst = independent(3);
        let mut freq: HashMap<Vec<usize>, u32> = HashMap::new();
        for seed in 0..1000 {
            let p = random_topological_permutation(&inst, seed).unwrap();
            *freq.entry(p.into_inner()).or_default() += 1;
        }
        assert_eq!(freq.len(), 6);
        // Pearson chi-square against uniform, 5 degrees of freedom; the
        // 0.999 quantile is 20.52.
        let expected = 1000.0 / 6.0;
        let chi2: f64 = freq
            .values()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 20.52, "chi-square {chi2}");
    }

    #[test]
    fn cycle_is_reported() {
        let preds = vec![vec![2], vec![0], vec![1]];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            random_topological_order(&preds, &mut rng),
            Err(InstanceError::Cycle { .. })
        ));
    }

    #[test]
    fn checked_constructor_rejects_bad_orders() {
        let inst = Instance::new(
            vec![1],
            vec![Job::new(1, vec![0], vec![]), Job::new(1, vec![0], vec![0])],
        )
        .unwrap();
        assert!(Permutation::new(&inst, vec![0, 1]).is_ok());
        assert_eq!(
            Permutation::new(&inst, vec![1, 0]),
            Err(PermutationError::Precedence {
                job: 1,
                predecessor: 0
            })
        );
        assert!(matches!(
            Permutation::new(&inst, vec![0, 0]),
            Err(PermutationError::NotAPermutation { job: 0 })
        ));
        assert!(matches!(
            Permutation::new(&inst, vec![0]),
            Err(PermutationError::Length { .. })
        ));
    }
}
