use super::{aligned_units, ConstraintSet, EnvelopeError, EnvelopeSolution, SolverStats};
use crate::gauge::{Gauge, GaugeKind};

const MAX_NODES: usize = 100_000;

/// Dense single-source shortest path on the grid {−2U, …, X + 2U}·δ, where
/// every node i has an edge to i ± j of weight g(jδ) = jδ, lowered to b at the
/// constraint points. O(M²) for M nodes.
pub fn solve_envelope(c: &ConstraintSet, step: f64, x_max: f64) -> Result<EnvelopeSolution, EnvelopeError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(EnvelopeError::InvalidFamily(format!("grid step must be positive, got {step}")));
    }
    let max_a = c.max_a();
    if !(x_max > 0.0) || x_max < max_a * (1.0 - 1e-12) {
        return Err(EnvelopeError::DomainTooSmall { x_max, max_a });
    }
    let jumps: Vec<(usize, f64)> = c
        .constraints()
        .iter()
        .map(|k| aligned_units(k.a, step).map(|u| (u as usize, k.b)))
        .collect::<Result<_, _>>()?;
    let u = jumps.iter().map(|j| j.0).max().unwrap_or(0);
    let x = (x_max / step + 1e-9).floor() as usize;
    let m = x + 4 * u + 1;
    if m > MAX_NODES {
        return Err(EnvelopeError::TooLarge { nodes: m, limit: MAX_NODES });
    }
    let mut weight: Vec<f64> = (0..m).map(|j| j as f64 * step).collect();
    for &(j, b) in &jumps {
        weight[j] = weight[j].min(b);
    }

    let origin = 2 * u;
    let mut dist = vec![f64::INFINITY; m];
    let mut done = vec![false; m];
    dist[origin] = 0.0;
    let mut relaxations = 0usize;
    for _ in 0..m {
        let mut v = usize::MAX;
        let mut best = f64::INFINITY;
        for (i, (&d, &f)) in dist.iter().zip(&done).enumerate() {
            if !f && d < best {
                best = d;
                v = i;
            }
        }
        if v == usize::MAX {
            break;
        }
        done[v] = true;
        for (w, (dw, &f)) in dist.iter_mut().zip(&done).enumerate() {
            if f {
                continue;
            }
            let nd = best + weight[v.abs_diff(w)];
            relaxations += 1;
            if nd < *dw {
                *dw = nd;
            }
        }
    }
    let values = dist[origin..=origin + x].to_vec();
    let gauge = Gauge::sampled(step, values, GaugeKind::EnvelopeResult).map_err(|e| EnvelopeError::InvalidFamily(e.to_string()))?;
    Ok(EnvelopeSolution {
        gauge,
        constraint_set: c.clone(),
        grid_step: step,
        stats: SolverStats { nodes: m, relaxations },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{bcp_constraints, solve_envelope_exact, Constraint};

    #[test]
    fn identity_without_caps() {
        let c = ConstraintSet::new(vec![], 0.01, 0).unwrap();
        let s = solve_envelope(&c, 0.01, 2.0).unwrap();
        for (i, v) in s.gauge.samples().unwrap().iter().enumerate() {
            assert!((v - i as f64 * 0.01).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_cone_solver() {
        let c = bcp_constraints(5, 1.0 / 120.0).unwrap();
        let dense = solve_envelope(&c, 1.0 / 120.0, 2.0).unwrap().gauge;
        let exact = solve_envelope_exact(&c, 2.0, None).unwrap().gauge;
        for (i, v) in dense.samples().unwrap().iter().enumerate() {
            let x = i as f64 / 120.0;
            assert!((v - exact.eval(x).unwrap()).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn rejects_misaligned_and_short_domains() {
        let list = vec![Constraint { a: 1.0, b: 0.5, label: 1 }];
        let c = ConstraintSet::new(list, 0.25, 1).unwrap();
        assert!(matches!(solve_envelope(&c, 0.3, 2.0), Err(EnvelopeError::Misaligned { .. })));
        assert!(matches!(solve_envelope(&c, 0.25, 0.5), Err(EnvelopeError::DomainTooSmall { .. })));
    }
}
