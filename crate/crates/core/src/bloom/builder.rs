//! Greedy construction of the Bloom structure.
//!
//! Starting from every level bit, the builder repeatedly deletes the bit
//! whose removal adds the least expected false-positive mass. Removing
//! `u_{r,i}` with retained neighbours `q < i < m` merges the demand range
//! `[i, m)` into the next lower retained level, so a job demanding `k` in
//! that range now passes the filter on slots with availability in `[q, i)`
//! that it would previously have been rejected by:
//!
//! ```text
//! cost(u_{r,i}) = (D_i + ... + D_{m-1}) * (E_q + ... + E_{i-1})
//! ```
//!
//! `q` is 0 when there is no lower retained level and `m` is `c_r + 1` when
//! there is no higher one. Ties go to the smallest `(r, i)`.

use super::structure::{BloomStructure, LevelBit, StructureError};
use super::ResourceDistributions;
use crate::num::Probability;
use std::cmp::Ordering;

/// Builds a structure of at most `limit` bits.
pub fn build_structure<P: Probability>(
    dists: &ResourceDistributions<P>,
    capacities: &[u32],
    limit: usize,
) -> Result<BloomStructure, StructureError> {
    build_structure_traced(dists, capacities, limit).map(|(s, _)| s)
}

/// [`build_structure`] that also returns the deleted bits in deletion order.
pub fn build_structure_traced<P: Probability>(
    dists: &ResourceDistributions<P>,
    capacities: &[u32],
    limit: usize,
) -> Result<(BloomStructure, Vec<LevelBit>), StructureError> {
    if limit == 0 {
        return Err(StructureError::ZeroLimit);
    }
    check_shape(&dists.demand, capacities)?;
    check_shape(&dists.availability, capacities)?;

    let mut resources: Vec<ResourceLevels<P>> = capacities
        .iter()
        .enumerate()
        .map(|(r, &c)| ResourceLevels::new(c, &dists.demand[r], &dists.availability[r]))
        .collect();

    // Flat candidate list in (r, k) order, so the first strict minimum found
    // by a scan is also the lexicographically smallest.
    let mut candidates: Vec<Candidate<P>> = Vec::new();
    for (r, levels) in resources.iter().enumerate() {
        for k in 1..=levels.capacity {
            candidates.push(Candidate {
                bit: LevelBit::new(r, k),
                cost: levels.cost(k),
                alive: true,
            });
        }
    }
    let offsets: Vec<usize> = capacities
        .iter()
        .scan(0usize, |acc, &c| {
            let o = *acc;
            *acc += c as usize;
            Some(o)
        })
        .collect();

    let mut remaining = candidates.len();
    let mut deleted = Vec::new();
    while remaining > limit {
        let mut best: Option<usize> = None;
        for (i, cand) in candidates.iter().enumerate() {
            if !cand.alive {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => cand.cost.partial_cmp(&candidates[b].cost) == Some(Ordering::Less),
            };
            if better {
                best = Some(i);
            }
        }
        let i = best.expect("remaining > limit >= 1 implies a live candidate");
        let bit = candidates[i].bit;
        candidates[i].alive = false;
        remaining -= 1;
        deleted.push(bit);

        let levels = &mut resources[bit.resource];
        let (q, m) = levels.remove(bit.level);
        for neighbour in [q, m] {
            if neighbour >= 1 && neighbour <= levels.capacity {
                let idx = offsets[bit.resource] + neighbour as usize - 1;
                candidates[idx].cost = levels.cost(neighbour);
            }
        }
    }

    let bits = candidates
        .iter()
        .filter(|c| c.alive)
        .map(|c| c.bit)
        .collect();
    Ok((BloomStructure::new(capacities, bits)?, deleted))
}

/// Deletion cost of `u_{r,level}` given explicit neighbours; the definition
/// the builder's incremental bookkeeping must agree with.
pub fn deletion_cost<P: Probability>(
    demand: &[P],
    availability: &[P],
    q: u32,
    level: u32,
    m: u32,
) -> P {
    let sum = |xs: &[P]| xs.iter().fold(P::zero(), |acc, &x| acc + x);
    sum(&demand[level as usize..m as usize]) * sum(&availability[q as usize..level as usize])
}

struct Candidate<P> {
    bit: LevelBit,
    cost: P,
    alive: bool,
}

/// Retained levels of one resource as a doubly linked list over `0 ..= c+1`
/// with sentinels at both ends, plus prefix sums of D and E.
struct ResourceLevels<P> {
    capacity: u32,
    prev: Vec<u32>,
    next: Vec<u32>,
    /// `demand_prefix[k] = D_0 + ... + D_{k-1}`, for `k` in `0 ..= c+1`.
    demand_prefix: Vec<P>,
    availability_prefix: Vec<P>,
}

impl<P: Probability> ResourceLevels<P> {
    fn new(capacity: u32, demand: &[P], availability: &[P]) -> Self {
        let prefix = |xs: &[P]| {
            let mut out = Vec::with_capacity(xs.len() + 1);
            out.push(P::zero());
            for &x in xs {
                let last = *out.last().unwrap();
                out.push(last + x);
            }
            out
        };
        let c = capacity;
        ResourceLevels {
            capacity: c,
            prev: (0..=c + 1).map(|k| k.saturating_sub(1)).collect(),
            next: (0..=c + 1).map(|k| (k + 1).min(c + 1)).collect(),
            demand_prefix: prefix(demand),
            availability_prefix: prefix(availability),
        }
    }

    fn cost(&self, level: u32) -> P {
        let (q, i, m) = (
            self.prev[level as usize] as usize,
            level as usize,
            self.next[level as usize] as usize,
        );
        (self.demand_prefix[m] - self.demand_prefix[i])
            * (self.availability_prefix[i] - self.availability_prefix[q])
    }

    /// Unlinks `level` and returns its former neighbours `(q, m)`.
    fn remove(&mut self, level: u32) -> (u32, u32) {
        let q = self.prev[level as usize];
        let m = self.next[level as usize];
        self.next[q as usize] = m;
        self.prev[m as usize] = q;
        (q, m)
    }
}

fn check_shape<P>(dists: &[Vec<P>], capacities: &[u32]) -> Result<(), StructureError> {
    for (r, &c) in capacities.iter().enumerate() {
        let expected = c as usize + 1;
        let found = dists.get(r).map_or(0, Vec::len);
        if found != expected {
            return Err(StructureError::DistributionShape {
                resource: r,
                expected,
                found,
            });
        }
    }
    Ok(())
}
