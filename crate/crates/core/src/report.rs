//! Solver reports and their independent re-checking.
//!
//! Reports use 1-based element indices, like instance files. Rationals are
//! written as strings (`"7/2"`) so audits stay exact.

use std::io::Write;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::approx::{ApproxParams, AuditRecord, IterationRecord, LevelRecord};
use crate::error::{Error, Result};
use crate::exact::{check_weight_splitting, verify_dual_cardinality, CardinalityDual, Instance, WeightSplitting};
use crate::io::parse_weight;

/// Optimality certificate emitted by the exact solvers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `(S, T)` with `S ∪ T = [n]` and `rank₁(S) + rank₂(T) = value`.
    Cardinality { s: Vec<usize>, t: Vec<usize>, value: usize },
    /// A weight splitting with `c₁(I) + c₂(I) = value`.
    Weighted { c1: Vec<String>, c2: Vec<String>, value: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trace {
    Cardinality {
        best_level: usize,
        levels: Vec<LevelRecord>,
    },
    Weighted {
        bootstrap_size: usize,
        k: usize,
        sketch_rows: [usize; 2],
        iterations: Vec<IterationRecord>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        audits: Vec<AuditRecord>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resamples {
    /// Sketches redrawn after a result fell short.
    pub sketch: usize,
    /// Degenerate bilinear forms replaced.
    pub form_restarts: usize,
    /// Membership queries answered by elimination after repeated degeneracy.
    pub exact_fallbacks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub command: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub n: usize,
    /// 1-based, ascending.
    pub solution: Vec<usize>,
    pub size: usize,
    /// Size, or weight as a rational string.
    pub objective: String,
    /// Optimum size, when an exact solver ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_star: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Trace>,
    #[serde(default)]
    pub resamples: Resamples,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ApproxParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl SolveReport {
    /// A report with the solution filled in and everything optional empty.
    ///
    /// `set` uses 0-based indices.
    pub fn new(command: &str, seed: u64, inst: &Instance, set: &[usize]) -> Self {
        let mut solution: Vec<usize> = set.iter().map(|&i| i + 1).collect();
        solution.sort_unstable();
        let objective = match inst.weights() {
            Some(_) if command.ends_with("weighted") => inst.weight_of(set).to_string(),
            _ => set.len().to_string(),
        };
        Self {
            command: command.to_string(),
            seed,
            eps: None,
            n: inst.n(),
            size: solution.len(),
            solution,
            objective,
            r_star: None,
            certificate: None,
            trace: None,
            resamples: Resamples::default(),
            params: None,
            wall_ms: None,
        }
    }

    /// The solution with 0-based indices.
    pub fn zero_based(&self) -> Result<Vec<usize>> {
        to_zero_based(&self.solution, self.n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

fn to_zero_based(indices: &[usize], n: usize) -> Result<Vec<usize>> {
    indices
        .iter()
        .map(|&i| {
            if i == 0 || i > n {
                Err(Error::IndexOutOfRange { index: i, len: n })
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

pub fn certificate_from_dual(dual: &CardinalityDual, inst: &Instance) -> Certificate {
    let one = |v: &[usize]| v.iter().map(|&i| i + 1).collect();
    Certificate::Cardinality {
        s: one(&dual.s),
        t: one(&dual.t),
        value: dual.value(inst),
    }
}

pub fn certificate_from_splitting(split: &WeightSplitting, value: &BigRational) -> Certificate {
    let text = |v: &[BigRational]| v.iter().map(|x| x.to_string()).collect();
    Certificate::Weighted {
        c1: text(&split.c1),
        c2: text(&split.c2),
        value: value.to_string(),
    }
}

/// Outcome of re-checking a report against its instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub independent: bool,
    pub objective_matches: bool,
    /// `None` when the report has no certificate.
    pub certificate: Option<bool>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.independent && self.objective_matches && self.certificate != Some(false)
    }
}

fn parse_rationals(values: &[String]) -> Option<Vec<BigRational>> {
    values.iter().map(|v| parse_weight(v)).collect()
}

/// Re-validates a report from scratch: independence in both matroids, the
/// stated objective and, when present, the optimality certificate.
pub fn verify_report(inst: &Instance, report: &SolveReport) -> Result<Verification> {
    if report.n != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            actual: report.n,
        });
    }
    let set = report.zero_based()?;
    let mut distinct = set.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let independent = distinct.len() == set.len() && inst.is_common_independent(&set);
    let objective = match &report.certificate {
        Some(Certificate::Weighted { .. }) => inst.weight_of(&set).to_string(),
        _ if report.command.ends_with("weighted") => inst.weight_of(&set).to_string(),
        _ => set.len().to_string(),
    };
    let objective_matches = objective == report.objective && report.size == set.len();
    let certificate = match &report.certificate {
        None => None,
        Some(Certificate::Cardinality { s, t, value }) => {
            let dual = CardinalityDual {
                s: to_zero_based(s, inst.n())?,
                t: to_zero_based(t, inst.n())?,
            };
            Some(*value == set.len() && verify_dual_cardinality(inst, &set, &dual))
        }
        Some(Certificate::Weighted { c1, c2, value }) => {
            let ok = match (parse_rationals(c1), parse_rationals(c2), parse_weight(value)) {
                (Some(c1), Some(c2), Some(value)) => {
                    let split = WeightSplitting { c1, c2 };
                    value == inst.weight_of(&set) && check_weight_splitting(inst, &set, &split)
                }
                _ => false,
            };
            Some(ok)
        }
    };
    Ok(Verification {
        independent,
        objective_matches,
        certificate,
    })
}

/// Writes JSON to `path`, or to stdout when `path` is `None`.
pub fn write_report(report: &SolveReport, path: Option<&Path>) -> Result<()> {
    let text = report.to_json();
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn read_report(path: impl AsRef<Path>) -> Result<SolveReport> {
    SolveReport::from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{max_common_independent, weighted_exact_with_splitting};
    use crate::io::parse_instance;

    const WORKED: &str = "lmi 1\nfield 7\nrows 2 2\ncols 3\nm1 3\n1 1 1\n1 2 1\n2 3 1\nm2 3\n1 1 1\n2 2 1\n2 3 1\nweights\n5\n3\n2\n";

    #[test]
    fn exact_report_round_trips_and_verifies() {
        let inst = parse_instance(WORKED).unwrap();
        let sol = max_common_independent(&inst);
        let mut report = SolveReport::new("exact", 0, &inst, &sol.set);
        report.r_star = Some(sol.set.len());
        report.certificate = Some(certificate_from_dual(&sol.dual, &inst));
        let back = SolveReport::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
        assert!(verify_report(&inst, &back).unwrap().passed());
        assert_eq!(back.objective, "2");
    }

    #[test]
    fn weighted_certificate_verifies() {
        let inst = parse_instance(WORKED).unwrap();
        let sol = weighted_exact_with_splitting(&inst).unwrap();
        let mut report = SolveReport::new("exact-weighted", 0, &inst, &sol.set);
        report.certificate = Some(certificate_from_splitting(&sol.splitting, &sol.weight));
        assert_eq!(report.solution, vec![1, 3]);
        assert_eq!(report.objective, "7");
        let v = verify_report(&inst, &report).unwrap();
        assert_eq!(v.certificate, Some(true));
        assert!(v.passed());
    }

    #[test]
    fn tampered_reports_fail() {
        let inst = parse_instance(WORKED).unwrap();
        let sol = max_common_independent(&inst);
        let mut report = SolveReport::new("exact", 0, &inst, &sol.set);
        report.certificate = Some(certificate_from_dual(&sol.dual, &inst));
        let mut dependent = report.clone();
        dependent.solution = vec![1, 2];
        assert!(!verify_report(&inst, &dependent).unwrap().independent);
        let mut wrong = report.clone();
        wrong.objective = "3".into();
        assert!(!verify_report(&inst, &wrong).unwrap().passed());
        let mut loose = report.clone();
        loose.certificate = Some(Certificate::Cardinality {
            s: vec![1, 2, 3],
            t: vec![],
            value: 2,
        });
        assert_eq!(verify_report(&inst, &loose).unwrap().certificate, Some(true));
        loose.certificate = Some(Certificate::Cardinality {
            s: vec![1, 2, 3],
            t: vec![1],
            value: 2,
        });
        assert_eq!(verify_report(&inst, &loose).unwrap().certificate, Some(false));
        let mut out_of_range = report;
        out_of_range.solution = vec![4];
        assert!(verify_report(&inst, &out_of_range).is_err());
    }

    #[test]
    fn timing_is_omitted_unless_set() {
        let inst = parse_instance(WORKED).unwrap();
        let report = SolveReport::new("approx", 1, &inst, &[0]);
        assert!(!report.to_json().contains("wall_ms"));
    }
}
