//! Line-based native instance format.
//!
//! ```text
//! # optional comments and blank lines
//! <jobs> <resources>
//! <c_1> ... <c_R>
//! <duration> <k_pred> <pred>... <k_res> <resource> <demand> ...   (one line per job)
//! ```
//!
//! Job and resource indices are 1-based in the file. Only positive demands
//! are listed; omitted resources have demand 0.

use super::parse::{Fields, ParseError, ParseErrorKind};
use super::{Instance, Job};
use std::fmt::Write as _;

pub fn to_native(instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", instance.num_jobs(), instance.num_resources()).unwrap();
    let caps: Vec<String> = instance.capacities().iter().map(u32::to_string).collect();
    writeln!(out, "{}", caps.join(" ")).unwrap();
    for job in instance.jobs() {
        write!(out, "{} {}", job.duration, job.predecessors.len()).unwrap();
        for p in &job.predecessors {
            write!(out, " {}", p + 1).unwrap();
        }
        let used: Vec<(usize, u32)> = job
            .demands
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(r, &v)| (r, v))
            .collect();
        write!(out, " {}", used.len()).unwrap();
        for (r, v) in used {
            write!(out, " {} {}", r + 1, v).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_native(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "header", ParseErrorKind::MissingSection("header")))?;
    let mut f = Fields::new(line_no, header);
    let num_jobs: usize = f.next("jobs")?;
    let num_resources: usize = f.next("resources")?;

    let (line_no, caps_line) = lines.next().ok_or_else(|| {
        ParseError::new(
            line_no + 1,
            "capacities",
            ParseErrorKind::MissingSection("capacities"),
        )
    })?;
    let mut f = Fields::new(line_no, caps_line);
    let capacities = (0..num_resources)
        .map(|r| f.next(&format!("capacity {}", r + 1)))
        .collect::<Result<Vec<u32>, _>>()?;

    let mut jobs = Vec::with_capacity(num_jobs);
    let mut last_line = line_no;
    for (line_no, text) in lines.by_ref().take(num_jobs) {
        last_line = line_no;
        let j = jobs.len() + 1;
        let mut f = Fields::new(line_no, text);
        let duration: u32 = f.next(&format!("job {j} duration"))?;
        let k_pred: usize = f.next(&format!("job {j} predecessor count"))?;
        let mut predecessors = Vec::with_capacity(k_pred);
        for _ in 0..k_pred {
            let p: usize = f.next(&format!("job {j} predecessor"))?;
            if p == 0 || p > num_jobs {
                return Err(f.error(
                    format!("job {j} predecessor"),
                    ParseErrorKind::OutOfRange(p),
                ));
            }
            predecessors.push(p - 1);
        }
        let k_res: usize = f.next(&format!("job {j} resource count"))?;
        let mut demands = vec![0u32; num_resources];
        for _ in 0..k_res {
            let r: usize = f.next(&format!("job {j} resource"))?;
            if r == 0 || r > num_resources {
                return Err(f.error(format!("job {j} resource"), ParseErrorKind::OutOfRange(r)));
            }
            let v: u32 = f.next(&format!("job {j} demand"))?;
            if v > capacities[r - 1] {
                return Err(f.error(
                    format!("job {j} demand R{r}"),
                    ParseErrorKind::Instance(super::InstanceError::DemandExceedsCapacity {
                        job: j - 1,
                        resource: r - 1,
                        demand: v,
                        capacity: capacities[r - 1],
                    }),
                ));
            }
            demands[r - 1] = v;
        }
        jobs.push(Job::new(duration, demands, predecessors));
    }
    if jobs.len() != num_jobs {
        return Err(ParseError::new(
            last_line,
            "jobs",
            ParseErrorKind::CountMismatch {
                expected: num_jobs,
                found: jobs.len(),
            },
        ));
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(ParseError::new(
            line_no,
            "jobs",
            ParseErrorKind::CountMismatch {
                expected: num_jobs,
                found: num_jobs + 1,
            },
        ));
    }
    Instance::new(capacities, jobs)
        .map_err(|e| ParseError::new(last_line, "instance", ParseErrorKind::Instance(e)))
}
