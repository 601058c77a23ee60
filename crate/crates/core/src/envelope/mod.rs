//! Largest translation-invariant distance below a family of caps h(a_i) ≤ b_i
//! and the base cap h(x) ≤ |x|.
//!
//! Every such envelope is d(x) = min over integer combinations p = Σ k_i a_i
//! of Σ |k_i| b_i + |x − p|, i.e. a lower envelope of slope-one cones. Two
//! solvers compute it: [`solve_envelope`] relaxes the dense grid graph, and
//! [`solve_envelope_exact`] runs Dijkstra on cone apexes only.

mod cones;
mod grid;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cones::{solve_envelope_exact, ConeEnvelope};
pub use grid::solve_envelope;

use crate::gauge::Gauge;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvelopeError {
    #[error("invalid constraint family: {0}")]
    InvalidFamily(String),
    #[error("constraint point {a} is not a multiple of the grid step {step}")]
    Misaligned { a: f64, step: f64 },
    #[error("x_max = {x_max} is smaller than the largest constraint point {max_a}")]
    DomainTooSmall { x_max: f64, max_a: f64 },
    #[error("sequence hypothesis fails at index {index}: {condition}")]
    Hypothesis { index: usize, condition: String },
    #[error("dense grid of {nodes} nodes exceeds the solver limit {limit}")]
    TooLarge { nodes: usize, limit: usize },
}

/// One cap h(a) ≤ b. `label` is the family index n the cap came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub a: f64,
    pub b: f64,
    pub label: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintSet {
    constraints: Vec<Constraint>,
    /// Caps with b ≥ a, already implied by h ≤ |·|.
    dropped: Vec<Constraint>,
    pub truncation_n: usize,
    /// Alignment step: every a is an integer multiple of it.
    step: f64,
    #[serde(skip)]
    units: Vec<i64>,
}

fn aligned_units(a: f64, step: f64) -> Result<i64, EnvelopeError> {
    let q = a / step;
    let r = q.round();
    if !q.is_finite() || (q - r).abs() > 1e-9 * r.abs().max(1.0) || !(1.0..=9.0e15).contains(&r) {
        return Err(EnvelopeError::Misaligned { a, step });
    }
    Ok(r as i64)
}

impl ConstraintSet {
    pub fn new(list: Vec<Constraint>, step: f64, truncation_n: usize) -> Result<ConstraintSet, EnvelopeError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(EnvelopeError::InvalidFamily(format!("grid step must be positive, got {step}")));
        }
        let mut constraints = Vec::new();
        let mut dropped = Vec::new();
        let mut units = Vec::new();
        for c in list {
            if !(c.a > 0.0 && c.b > 0.0 && c.a.is_finite() && c.b.is_finite()) {
                return Err(EnvelopeError::InvalidFamily(format!("caps need a, b > 0, got ({}, {})", c.a, c.b)));
            }
            let u = aligned_units(c.a, step)?;
            if units.contains(&u) || dropped.iter().any(|d: &Constraint| d.a == c.a) {
                return Err(EnvelopeError::InvalidFamily(format!("constraint point {} appears twice", c.a)));
            }
            if c.b >= c.a {
                log::info!("dropping vacuous cap h({}) ≤ {}", c.a, c.b);
                dropped.push(c);
            } else {
                constraints.push(c);
                units.push(u);
            }
        }
        Ok(ConstraintSet { constraints, dropped, truncation_n, step, units })
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn dropped(&self) -> &[Constraint] {
        &self.dropped
    }

    /// h ≤ |·| always applies.
    pub fn base_cap(&self) -> bool {
        true
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub(crate) fn units(&self) -> &[i64] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn max_a(&self) -> f64 {
        self.constraints.iter().map(|c| c.a).fold(0.0, f64::max)
    }

    /// Indices of the constraints whose label satisfies `keep`.
    pub fn indices_where(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.len()).filter(|&i| keep(self.constraints[i].label)).collect()
    }

    pub fn subset(&self, indices: &[usize]) -> Result<ConstraintSet, EnvelopeError> {
        let mut out = ConstraintSet {
            constraints: Vec::new(),
            dropped: Vec::new(),
            truncation_n: self.truncation_n,
            step: self.step,
            units: Vec::new(),
        };
        for &i in indices {
            let c = *self
                .constraints
                .get(i)
                .ok_or_else(|| EnvelopeError::InvalidFamily(format!("no constraint with index {i}")))?;
            if !out.units.contains(&self.units[i]) {
                out.constraints.push(c);
                out.units.push(self.units[i]);
            }
        }
        Ok(out)
    }

    /// Scales every (a, b) and the alignment step by `s`.
    pub fn scaled(&self, s: f64) -> ConstraintSet {
        let mut out = self.clone();
        for c in out.constraints.iter_mut().chain(out.dropped.iter_mut()) {
            c.a *= s;
            c.b *= s;
        }
        out.step *= s;
        out
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// 1/(2·lcm(1..n)), the step that puts every 1/k, k ≤ n, and their midpoints on the grid.
pub fn bcp_default_step(n: usize) -> Result<f64, EnvelopeError> {
    let mut l: u64 = 1;
    for k in 1..=n as u64 {
        l = (l / gcd(l, k)).checked_mul(k).filter(|&v| v < 1 << 52).ok_or_else(|| {
            EnvelopeError::InvalidFamily(format!("lcm(1..{n}) is too large for an aligned grid"))
        })?;
    }
    Ok(1.0 / (2.0 * l as f64))
}

/// Caps h(1) ≤ 1/2 and h(1/n) ≤ 1/(n+1) for 2 ≤ n ≤ N.
pub fn bcp_constraints(n: usize, step: f64) -> Result<ConstraintSet, EnvelopeError> {
    if n < 2 {
        return Err(EnvelopeError::InvalidFamily(format!("the BCP family needs N ≥ 2, got {n}")));
    }
    let list = (1..=n).map(|k| Constraint { a: 1.0 / k as f64, b: 1.0 / (k + 1) as f64, label: k }).collect();
    ConstraintSet::new(list, step, n)
}

/// Caps h(a_{n+1}) ≤ a_n for 1 ≤ n ≤ N, after checking that a is increasing,
/// a_n/a_{n+1} is decreasing and a_{n+1}/a_n² is increasing on the prefix.
pub fn nonlc_constraints(a: &[f64], n: usize, step: f64) -> Result<ConstraintSet, EnvelopeError> {
    if n < 1 {
        return Err(EnvelopeError::InvalidFamily("the non-LC family needs N ≥ 1".into()));
    }
    if a.len() < n + 1 {
        return Err(EnvelopeError::InvalidFamily(format!("N = {n} needs {} sequence terms, got {}", n + 1, a.len())));
    }
    let a = &a[..=n];
    if let Some(i) = (0..n).find(|&i| !(a[i] > 0.0 && a[i + 1] > a[i])) {
        return Err(EnvelopeError::Hypothesis { index: i + 2, condition: "a must be positive and strictly increasing".into() });
    }
    let ratio: Vec<f64> = (0..n).map(|i| a[i] / a[i + 1]).collect();
    if let Some(i) = (1..n).find(|&i| ratio[i] >= ratio[i - 1]) {
        return Err(EnvelopeError::Hypothesis { index: i + 1, condition: "a_n/a_{n+1} must be decreasing".into() });
    }
    let growth: Vec<f64> = (0..n).map(|i| a[i + 1] / (a[i] * a[i])).collect();
    if let Some(i) = (1..n).find(|&i| growth[i] <= growth[i - 1]) {
        return Err(EnvelopeError::Hypothesis { index: i + 1, condition: "a_{n+1}/a_n² must be increasing".into() });
    }
    let list = (0..n).map(|i| Constraint { a: a[i + 1], b: a[i], label: i + 1 }).collect();
    ConstraintSet::new(list, step, n)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SolverStats {
    /// Grid nodes (dense solver) or accepted cone apexes (exact solver).
    pub nodes: usize,
    /// Edge relaxations (dense) or heap pushes (exact).
    pub relaxations: usize,
}

#[derive(Debug, Clone)]
pub struct EnvelopeSolution {
    pub gauge: Gauge,
    pub constraint_set: ConstraintSet,
    pub grid_step: f64,
    pub stats: SolverStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solver {
    Exact,
    Grid { step: f64 },
}

/// Envelope of the constraints with the given indices.
pub fn partial_envelope(
    c: &ConstraintSet,
    subset: &[usize],
    solver: Solver,
    x_max: f64,
) -> Result<EnvelopeSolution, EnvelopeError> {
    let sub = c.subset(subset)?;
    match solver {
        Solver::Exact => solve_envelope_exact(&sub, x_max, None),
        Solver::Grid { step } => solve_envelope(&sub, step, x_max),
    }
}

/// On-disk constraint family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintFile {
    pub constraints: Vec<(f64, f64)>,
    pub truncation_n: usize,
    #[serde(default)]
    pub step: Option<f64>,
}

impl ConstraintFile {
    pub fn build(&self) -> Result<ConstraintSet, EnvelopeError> {
        let step = match self.step {
            Some(s) => s,
            None if self.constraints.iter().all(|c| c.0.fract() == 0.0) => 1.0,
            None => return Err(EnvelopeError::InvalidFamily("non-integer constraint points need an explicit step".into())),
        };
        let list = self.constraints.iter().enumerate().map(|(i, &(a, b))| Constraint { a, b, label: i + 1 }).collect();
        ConstraintSet::new(list, step, self.truncation_n)
    }
}

pub fn load_constraints(path: &Path) -> Result<ConstraintSet, EnvelopeError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| EnvelopeError::InvalidFamily(format!("cannot read {}: {e}", path.display())))?;
    let f: ConstraintFile = serde_json::from_str(&text)
        .map_err(|e| EnvelopeError::InvalidFamily(format!("{}: {e}", path.display())))?;
    f.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(c: &ConstraintSet) -> Vec<(f64, f64)> {
        c.constraints().iter().map(|c| (c.a, c.b)).collect()
    }

    #[test]
    fn bcp_family_instances() {
        let c = bcp_constraints(3, 1.0 / 12.0).unwrap();
        assert_eq!(pairs(&c), vec![(1.0, 0.5), (0.5, 1.0 / 3.0), (1.0 / 3.0, 0.25)]);
        assert_eq!(c.truncation_n, 3);
        let c = bcp_constraints(2, 1.0 / 6.0).unwrap();
        assert_eq!(pairs(&c), vec![(1.0, 0.5), (0.5, 1.0 / 3.0)]);
        assert!(bcp_constraints(1, 0.5).is_err());
    }

    #[test]
    fn bcp_alignment() {
        assert!(matches!(bcp_constraints(3, 0.1), Err(EnvelopeError::Misaligned { .. })));
        let d = bcp_default_step(20).unwrap();
        assert_eq!(d, 1.0 / 465_585_120.0);
        assert_eq!(bcp_constraints(20, d).unwrap().len(), 20);
    }

    #[test]
    fn nonlc_family_instances() {
        let a = [8.0, 512.0, 134_217_728.0];
        let c = nonlc_constraints(&a, 2, 1.0).unwrap();
        assert_eq!(pairs(&c), vec![(512.0, 8.0), (134_217_728.0, 512.0)]);
        let bad = [4.0, 16.0, 256.0, 65536.0];
        assert!(matches!(nonlc_constraints(&bad, 2, 1.0), Err(EnvelopeError::Hypothesis { .. })));
        assert!(matches!(nonlc_constraints(&bad, 3, 1.0), Err(EnvelopeError::Hypothesis { .. })));
        match nonlc_constraints(&[8.0, 512.0, 100.0], 2, 1.0) {
            Err(EnvelopeError::Hypothesis { index, .. }) => assert_eq!(index, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vacuous_caps_are_dropped() {
        let list = vec![Constraint { a: 1.0, b: 2.0, label: 1 }, Constraint { a: 2.0, b: 1.0, label: 2 }];
        let c = ConstraintSet::new(list, 1.0, 2).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.dropped().len(), 1);
        assert!(c.base_cap());
    }

    #[test]
    fn constraint_file_round_trip() {
        let f: ConstraintFile = serde_json::from_str(r#"{"constraints": [[512, 8], [134217728, 512]], "truncation_n": 2}"#).unwrap();
        let c = f.build().unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.step(), 1.0);
        let f: ConstraintFile = serde_json::from_str(r#"{"constraints": [[0.5, 0.25]], "truncation_n": 1}"#).unwrap();
        assert!(f.build().is_err());
    }
}
