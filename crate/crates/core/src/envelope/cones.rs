use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use super::{ConstraintSet, EnvelopeError, EnvelopeSolution, SolverStats};
use crate::gauge::Gauge;

/// d(x) = min_i C_i + |x − p_i| over apexes p_i sorted increasingly, none of
/// which is dominated by another (C_j + |p_i − p_j| > C_i for j ≠ i). Then the
/// nearest apex on each side of x realises the minimum.
#[derive(Debug, Clone, Serialize)]
pub struct ConeEnvelope {
    pos: Vec<f64>,
    cost: Vec<f64>,
    /// Constraint points of the family that produced the envelope.
    pub anchors: Vec<f64>,
}

impl ConeEnvelope {
    pub fn new(pos: Vec<f64>, cost: Vec<f64>, anchors: Vec<f64>) -> ConeEnvelope {
        assert_eq!(pos.len(), cost.len());
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "apexes must be strictly increasing");
        ConeEnvelope { pos, cost, anchors }
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn apexes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pos.iter().copied().zip(self.cost.iter().copied())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.pos.partition_point(|&p| p <= x);
        let mut v = f64::INFINITY;
        if i > 0 {
            v = self.cost[i - 1] + (x - self.pos[i - 1]);
        }
        if i < self.pos.len() {
            v = v.min(self.cost[i] + (self.pos[i] - x));
        }
        v
    }

    /// Peak of the envelope between apexes j and j + 1.
    fn peak(&self, j: usize) -> (f64, f64) {
        let (p1, c1, p2, c2) = (self.pos[j], self.cost[j], self.pos[j + 1], self.cost[j + 1]);
        (0.5 * (c2 - c1 + p1 + p2), 0.5 * (c1 + c2 + p2 - p1))
    }

    pub fn max_on(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut best = (self.eval(lo), lo);
        let vh = self.eval(hi);
        if vh > best.0 {
            best = (vh, hi);
        }
        let j0 = self.pos.partition_point(|&p| p < lo).saturating_sub(1);
        let j1 = self.pos.partition_point(|&p| p <= hi).min(self.pos.len() - 1);
        for j in j0..j1 {
            let (x, v) = self.peak(j);
            if x > lo && x < hi && v > best.0 {
                best = (v, x);
            }
        }
        best
    }

    pub fn min_on(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut best = (self.eval(lo), lo);
        let vh = self.eval(hi);
        if vh < best.0 {
            best = (vh, hi);
        }
        let j0 = self.pos.partition_point(|&p| p < lo);
        let j1 = self.pos.partition_point(|&p| p <= hi);
        for j in j0..j1 {
            if self.cost[j] < best.0 {
                best = (self.cost[j], self.pos[j]);
            }
        }
        best
    }

    /// Maximal intervals of {x ∈ [lo, hi] : d(x) ≤ r} (or < r when `closed` is
    /// false; endpoints are then excluded).
    pub fn sublevel(&self, r: f64, closed: bool, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let mut pieces: Vec<(f64, f64)> = self
            .apexes()
            .filter(|&(_, c)| if closed { c <= r } else { c < r })
            .map(|(p, c)| (p - (r - c), p + (r - c)))
            .filter(|&(a, b)| b >= lo && a <= hi)
            .collect();
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (a, b) in pieces {
            match out.last_mut() {
                Some(last) if (closed && a <= last.1) || (!closed && a < last.1) => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        for iv in out.iter_mut() {
            iv.0 = iv.0.max(lo);
            iv.1 = iv.1.min(hi);
        }
        out
    }

    /// sup{x ∈ [0, x_max] : d(x) ≤ r}.
    pub fn inverse_max(&self, r: f64, x_max: f64) -> f64 {
        if self.eval(x_max) <= r {
            return x_max;
        }
        self.apexes()
            .filter(|&(p, c)| c <= r && p - (r - c) <= x_max && p + (r - c) >= 0.0)
            .map(|(p, c)| p + (r - c))
            .fold(0.0, f64::max)
    }

    /// Every apex is a strict local minimum, so d is nondecreasing on
    /// [0, x_max] iff no apex lies in (0, x_max].
    pub fn is_monotone(&self, x_max: f64) -> bool {
        let i = self.pos.partition_point(|&p| p <= 0.0);
        self.pos.get(i).is_none_or(|&p| p > x_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Node {
    cost: f64,
    pos: i64,
}

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost.total_cmp(&other.cost).then(self.pos.cmp(&other.pos))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dominated(accepted: &BTreeMap<i64, f64>, pos: i64, cost: f64, step: f64) -> bool {
    let tol = 1e-12 * (1.0 + cost.abs());
    let left = accepted.range(..=pos).next_back();
    let right = accepted.range(pos..).next();
    left.into_iter().chain(right).any(|(&q, &c)| c + (pos - q).abs() as f64 * step <= cost + tol)
}

/// Exact envelope as a cone family. Apex positions are integer multiples of
/// the alignment step; a minimal decomposition of any x ∈ [0, x_max] can be
/// ordered to stay in [−2·a_max, x_max + 2·a_max], which bounds the search.
///
/// `scan_step` sets the gauge's scan grid (default x_max/40000); values
/// between grid points are exact regardless.
pub fn solve_envelope_exact(
    c: &ConstraintSet,
    x_max: f64,
    scan_step: Option<f64>,
) -> Result<EnvelopeSolution, EnvelopeError> {
    let max_a = c.max_a();
    if !(x_max > 0.0) || x_max < max_a * (1.0 - 1e-12) {
        return Err(EnvelopeError::DomainTooSmall { x_max, max_a });
    }
    let step = c.step();
    let jumps: Vec<(i64, f64)> = c.units().iter().copied().zip(c.constraints().iter().map(|k| k.b)).collect();
    let umax = jumps.iter().map(|j| j.0).max().unwrap_or(0);
    let xu = (x_max / step).ceil() as i64;
    let (lo, hi) = (-2 * umax, xu + 2 * umax);

    let mut heap = BinaryHeap::new();
    let mut accepted: BTreeMap<i64, f64> = BTreeMap::new();
    let mut pushes = 1usize;
    heap.push(Reverse(Node { cost: 0.0, pos: 0 }));
    while let Some(Reverse(Node { cost, pos })) = heap.pop() {
        if dominated(&accepted, pos, cost, step) {
            continue;
        }
        accepted.insert(pos, cost);
        for &(u, b) in &jumps {
            for q in [pos + u, pos - u] {
                let nc = cost + b;
                if q >= lo && q <= hi && !dominated(&accepted, q, nc, step) {
                    heap.push(Reverse(Node { cost: nc, pos: q }));
                    pushes += 1;
                }
            }
        }
    }
    let nodes = accepted.len();
    let (pos, cost): (Vec<f64>, Vec<f64>) = accepted.into_iter().map(|(p, c)| (p as f64 * step, c)).unzip();
    let anchors = c.constraints().iter().map(|k| k.a).collect();
    let env = ConeEnvelope::new(pos, cost, anchors);
    let scan = scan_step.unwrap_or(x_max / 40_000.0);
    log::debug!("exact envelope: {nodes} apexes, {pushes} pushes");
    Ok(EnvelopeSolution {
        gauge: Gauge::from_cones(env, x_max, scan),
        constraint_set: c.clone(),
        grid_step: scan,
        stats: SolverStats { nodes, relaxations: pushes },
    })
}
