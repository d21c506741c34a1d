//! Reader for PSPLIB single-mode (`.sm`) files.
//!
//! Only the parts needed for single-mode RCPSP are read: the job count, the
//! renewable resource count, the precedence section, the requests/durations
//! section and the resource availabilities. Zero-duration jobs (the
//! supersource and supersink dummies) are dropped and precedence is bridged
//! through them, so every remaining job has a positive duration.

use super::parse::{Fields, ParseError, ParseErrorKind};
use super::{Instance, InstanceError, Job};
use std::collections::VecDeque;

struct Line<'a> {
    number: usize,
    text: &'a str,
}

pub fn parse_psplib(text: &str) -> Result<Instance, ParseError> {
    let lines: Vec<Line<'_>> = text
        .lines()
        .enumerate()
        .map(|(i, t)| Line {
            number: i + 1,
            text: t.trim(),
        })
        .collect();

    let jobs_line = find_line(
        &lines,
        |t| t.starts_with("jobs"),
        "jobs (incl. supersource/sink )",
    )?;
    let num_jobs: usize = value_after_colon(jobs_line, "jobs")?;
    let res_line = find_line(&lines, |t| t.starts_with("- renewable"), "- renewable")?;
    let num_resources: usize = value_after_colon(res_line, "renewable")?;

    // Precedence relations.
    let prec_start = section(&lines, "PRECEDENCE RELATIONS")?;
    let prec_rows = table_rows(&lines, prec_start + 1);
    if prec_rows.len() != num_jobs {
        let at = prec_rows
            .last()
            .map_or(lines[prec_start].number, |l| l.number);
        return Err(ParseError::new(
            at,
            "precedence relations",
            ParseErrorKind::CountMismatch {
                expected: num_jobs,
                found: prec_rows.len(),
            },
        ));
    }
    let mut successors = vec![Vec::new(); num_jobs];
    for (i, row) in prec_rows.iter().enumerate() {
        let mut f = Fields::new(row.number, row.text);
        let jobnr: usize = f.next("jobnr.")?;
        if jobnr != i + 1 {
            return Err(f.error("jobnr.", ParseErrorKind::OutOfRange(jobnr)));
        }
        let modes: usize = f.next("#modes")?;
        if modes != 1 {
            return Err(f.error(
                "#modes",
                ParseErrorKind::Unsupported(format!("{modes} modes")),
            ));
        }
        let count: usize = f.next("#successors")?;
        for _ in 0..count {
            let s: usize = f.next("successors")?;
            if s == 0 || s > num_jobs {
                return Err(f.error("successors", ParseErrorKind::OutOfRange(s)));
            }
            successors[i].push(s - 1);
        }
    }

    // Requests and durations.
    let req_start = section(&lines, "REQUESTS/DURATIONS")?;
    let req_rows: Vec<&Line<'_>> = table_rows(&lines, req_start + 1)
        .into_iter()
        .filter(|l| !l.text.starts_with('-'))
        .collect();
    if req_rows.len() != num_jobs {
        let at = req_rows
            .last()
            .map_or(lines[req_start].number, |l| l.number);
        return Err(ParseError::new(
            at,
            "requests/durations",
            ParseErrorKind::CountMismatch {
                expected: num_jobs,
                found: req_rows.len(),
            },
        ));
    }

    // Availabilities come last in the file but are needed to check demands.
    let avail_start = section(&lines, "RESOURCEAVAILABILITIES")?;
    let avail_row = table_rows(&lines, avail_start + 1)
        .into_iter()
        .next()
        .ok_or_else(|| {
            ParseError::new(
                lines[avail_start].number,
                "resource availabilities",
                ParseErrorKind::MissingValue,
            )
        })?;
    let mut f = Fields::new(avail_row.number, avail_row.text);
    let capacities = (0..num_resources)
        .map(|r| f.next(&format!("R {}", r + 1)))
        .collect::<Result<Vec<u32>, _>>()?;

    let mut durations = Vec::with_capacity(num_jobs);
    let mut demands = Vec::with_capacity(num_jobs);
    for (i, row) in req_rows.iter().enumerate() {
        let mut f = Fields::new(row.number, row.text);
        let jobnr: usize = f.next("jobnr.")?;
        if jobnr != i + 1 {
            return Err(f.error("jobnr.", ParseErrorKind::OutOfRange(jobnr)));
        }
        let _mode: usize = f.next("mode")?;
        durations.push(f.next::<u32>("duration")?);
        let mut row_demands = Vec::with_capacity(num_resources);
        for (r, &capacity) in capacities.iter().enumerate() {
            let field = format!("R {}", r + 1);
            let v: u32 = f.next(&field)?;
            if v > capacity {
                return Err(f.error(
                    field,
                    ParseErrorKind::Instance(InstanceError::DemandExceedsCapacity {
                        job: i,
                        resource: r,
                        demand: v,
                        capacity,
                    }),
                ));
            }
            row_demands.push(v);
        }
        demands.push(row_demands);
    }

    // Bridge precedence through zero-duration jobs, in topological order.
    let order = topological(&successors).map_err(|job| {
        ParseError::new(
            prec_rows[job].number,
            "successors",
            ParseErrorKind::Instance(InstanceError::Cycle { job }),
        )
    })?;
    let mut new_index = vec![usize::MAX; num_jobs];
    let mut kept = 0;
    for j in 0..num_jobs {
        if durations[j] > 0 {
            new_index[j] = kept;
            kept += 1;
        }
    }
    // effective[j]: kept jobs that must finish before anything after j starts.
    let mut direct_preds = vec![Vec::new(); num_jobs];
    for (j, succ) in successors.iter().enumerate() {
        for &s in succ {
            direct_preds[s].push(j);
        }
    }
    let mut effective: Vec<Vec<usize>> = vec![Vec::new(); num_jobs];
    let mut jobs = vec![None; kept];
    for &j in &order {
        let mut preds: Vec<usize> = Vec::new();
        for &p in &direct_preds[j] {
            if durations[p] > 0 {
                preds.push(new_index[p]);
            } else {
                preds.extend_from_slice(&effective[p]);
            }
        }
        preds.sort_unstable();
        preds.dedup();
        if durations[j] > 0 {
            jobs[new_index[j]] = Some(Job::new(durations[j], demands[j].clone(), preds));
        } else {
            effective[j] = preds;
        }
    }
    let jobs: Vec<Job> = jobs
        .into_iter()
        .map(|j| j.expect("every kept job is visited"))
        .collect();
    Instance::new(capacities, jobs).map_err(|e| {
        ParseError::new(
            lines[req_start].number,
            "requests/durations",
            ParseErrorKind::Instance(e),
        )
    })
}

fn find_line<'a, 'b>(
    lines: &'b [Line<'a>],
    pred: impl Fn(&str) -> bool,
    name: &'static str,
) -> Result<&'b Line<'a>, ParseError> {
    lines.iter().find(|l| pred(l.text)).ok_or_else(|| {
        ParseError::new(
            lines.len().max(1),
            name,
            ParseErrorKind::MissingSection(name),
        )
    })
}

fn value_after_colon<T: std::str::FromStr>(line: &Line<'_>, field: &str) -> Result<T, ParseError> {
    let rest = line.text.split_once(':').map_or("", |(_, r)| r);
    Fields::new(line.number, rest).next(field)
}

fn section(lines: &[Line<'_>], name: &'static str) -> Result<usize, ParseError> {
    lines
        .iter()
        .position(|l| l.text.starts_with(name))
        .ok_or_else(|| {
            ParseError::new(
                lines.len().max(1),
                name,
                ParseErrorKind::MissingSection(name),
            )
        })
}

/// Data rows following a section title: skips the column-header line, stops
/// at the next `****` separator.
fn table_rows<'a, 'b>(lines: &'b [Line<'a>], from: usize) -> Vec<&'b Line<'a>> {
    lines
        .iter()
        .skip(from)
        .take_while(|l| !l.text.starts_with('*'))
        .filter(|l| !l.text.is_empty())
        .filter(|l| l.text.starts_with(|c: char| c.is_ascii_digit()))
        .collect()
}

fn topological(successors: &[Vec<usize>]) -> Result<Vec<usize>, usize> {
    let n = successors.len();
    let mut indegree = vec![0usize; n];
    for succ in successors {
        for &s in succ {
            indegree[s] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(j) = queue.pop_front() {
        order.push(j);
        for &s in &successors[j] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                queue.push_back(s);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).find(|&j| indegree[j] > 0).unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CHAIN: &str = "\
************************************************************************
file with basedata            : synthetic.bas
initial value random generator: 1
************************************************************************
projects                      :  1
jobs (incl. supersource/sink ):  5
horizon                       :  6
RESOURCES
  - renewable                 :  2   R
  - nonrenewable              :  0   N
  - doubly constrained        :  0   D
************************************************************************
PRECEDENCE RELATIONS:
jobnr.    #modes  #successors   successors
   1        1          1           2
   2        1          1           3
   3        1          1           4
   4        1          1           5
   5        1          0
************************************************************************
REQUESTS/DURATIONS:
jobnr. mode duration  R 1  R 2
------------------------------------------------------------------------
  1      1     0       0    0
  2      1     1       2    0
  3      1     3       0    4
  4      1     2       1    1
  5      1     0       0    0
************************************************************************
RESOURCEAVAILABILITIES:
  R 1  R 2
    3    4
************************************************************************
";

    #[test]
    fn chain_is_transcribed_without_dummies() {
        let inst = parse_psplib(CHAIN).unwrap();
        assert_eq!(inst.num_jobs(), 3);
        assert_eq!(inst.capacities(), &[3, 4]);
        assert!(inst.predecessors(0).is_empty());
        assert_eq!(inst.predecessors(1), &[0]);
        assert_eq!(inst.predecessors(2), &[1]);
        assert_eq!(
            inst.jobs().iter().map(|j| j.duration).collect::<Vec<_>>(),
            vec![1, 3, 2]
        );
        assert_eq!(inst.job(2).demands, vec![1, 1]);
    }

    #[test]
    fn demand_over_capacity_names_the_field() {
        let text = CHAIN.replace(
            "  3      1     3       0    4",
            "  3      1     3       0    5",
        );
        let err = parse_psplib(&text).unwrap_err();
        assert_eq!(err.field, "R 2");
        assert_eq!(err.line, 26);
        assert!(err.to_string().contains("demand exceeds capacity"), "{err}");
    }

    #[test]
    fn job_count_mismatch_is_reported() {
        let text = CHAIN.replace("):  5", "):  6");
        let err = parse_psplib(&text).unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::CountMismatch {
                expected: 6,
                found: 5
            }
        ));
    }

    #[test]
    fn cyclic_precedence_is_reported() {
        let text = CHAIN.replace(
            "   4        1          1           5",
            "   4        1          2           5   3",
        );
        let err = parse_psplib(&text).unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::Instance(InstanceError::Cycle { .. })
        ));
    }

    #[test]
    fn malformed_header_is_reported() {
        let text = CHAIN.replace(
            "jobs (incl. supersource/sink ):  5",
            "jobs (incl. supersource/sink ):  x",
        );
        let err = parse_psplib(&text).unwrap_err();
        assert_eq!(err.line, 6);
        assert!(matches!(err.kind, ParseErrorKind::InvalidNumber(_)));
        let err = parse_psplib("nothing here").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::MissingSection(_)));
    }

    #[test]
    fn bridges_precedence_through_interior_dummy() {
        // 1 (dummy) -> {2, 3}; 2 -> 4 (zero-duration) -> 5; 3 -> 5; 5 -> 6 (dummy)
        let text = "\
jobs (incl. supersource/sink ):  6
  - renewable                 :  1   R
PRECEDENCE RELATIONS:
jobnr.    #modes  #successors   successors
   1        1          2           2   3
   2        1          1           4
   3        1          1           5
   4        1          1           5
   5        1          1           6
   6        1          0
************************************************************************
REQUESTS/DURATIONS:
jobnr. mode duration  R 1
------------------------------------------------------------------------
  1      1     0       0
  2      1     2       1
  3      1     1       1
  4      1     0       0
  5      1     1       1
  6      1     0       0
************************************************************************
RESOURCEAVAILABILITIES:
  R 1
    2
************************************************************************
";
        let inst = parse_psplib(text).unwrap();
        assert_eq!(inst.num_jobs(), 3);
        assert_eq!(inst.predecessors(2), &[0, 1]);
    }
}
