use super::{Instance, Schedule};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The schedule does not have one start per job.
    JobCount { expected: usize, found: usize },
    /// Slots are numbered from 1.
    StartBeforeFirstSlot { job: usize },
    /// `job` starts before `predecessor` has finished.
    Precedence { job: usize, predecessor: usize },
    /// Jobs running in `slot` consume more of `resource` than available.
    Resource {
        slot: u32,
        resource: usize,
        usage: u64,
        capacity: u32,
    },
}

/// Constraint violations found in a schedule; empty iff it is feasible.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_schedule(instance: &Instance, schedule: &Schedule) -> ValidationReport {
    let starts = schedule.starts();
    let mut violations = Vec::new();
    if starts.len() != instance.num_jobs() {
        violations.push(Violation::JobCount {
            expected: instance.num_jobs(),
            found: starts.len(),
        });
        return ValidationReport { violations };
    }
    for (j, &t) in starts.iter().enumerate() {
        if t < 1 {
            violations.push(Violation::StartBeforeFirstSlot { job: j });
        }
    }
    for (j, job) in instance.jobs().iter().enumerate() {
        for &p in &job.predecessors {
            if starts[j] < starts[p] + instance.duration(p) {
                violations.push(Violation::Precedence {
                    job: j,
                    predecessor: p,
                });
            }
        }
    }
    let usage = usage_grid(instance, starts);
    let last = usage.len() / instance.num_resources().max(1);
    for t in 1..last {
        for (r, &capacity) in instance.capacities().iter().enumerate() {
            let used = usage[t * instance.num_resources() + r];
            if used > capacity as u64 {
                violations.push(Violation::Resource {
                    slot: t as u32,
                    resource: r,
                    usage: used,
                    capacity,
                });
            }
        }
    }
    ValidationReport { violations }
}

/// Slot-major usage `[t * |R| + r]` for slots `0 ..= last finish`.
fn usage_grid(instance: &Instance, starts: &[u32]) -> Vec<u64> {
    let nr = instance.num_resources();
    let end = starts
        .iter()
        .zip(instance.jobs())
        .map(|(&t, job)| t + job.duration)
        .max()
        .unwrap_or(1) as usize;
    let mut usage = vec![0u64; end * nr];
    for (&t, job) in starts.iter().zip(instance.jobs()) {
        for slot in t..t + job.duration {
            for (r, &v) in job.demands.iter().enumerate() {
                usage[slot as usize * nr + r] += v as u64;
            }
        }
    }
    usage
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schedule is infeasible ({} violations)", .0.violations.len())]
pub struct ActivenessError(pub ValidationReport);

/// Whether no single job can start earlier, all other starts fixed, without
/// breaking feasibility. Only meaningful for feasible schedules.
pub fn is_active(instance: &Instance, schedule: &Schedule) -> Result<bool, ActivenessError> {
    let report = validate_schedule(instance, schedule);
    if !report.is_feasible() {
        return Err(ActivenessError(report));
    }
    let starts = schedule.starts();
    let nr = instance.num_resources();
    let usage = usage_grid(instance, starts);
    for (j, job) in instance.jobs().iter().enumerate() {
        let earliest = job
            .predecessors
            .iter()
            .map(|&p| starts[p] + instance.duration(p))
            .max()
            .unwrap_or(1);
        let latest_finish = instance
            .successors(j)
            .iter()
            .map(|&s| starts[s])
            .min()
            .unwrap_or(u32::MAX);
        let own = starts[j]..starts[j] + job.duration;
        'candidate: for s in earliest..starts[j] {
            if s + job.duration > latest_finish {
                break;
            }
            for slot in s..s + job.duration {
                for (r, &v) in job.demands.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    let mut others = usage[slot as usize * nr + r];
                    if own.contains(&slot) {
                        others -= v as u64;
                    }
                    if others + v as u64 > instance.capacities()[r] as u64 {
                        continue 'candidate;
                    }
                }
            }
            return Ok(false);
        }
    }
    Ok(true)
}
