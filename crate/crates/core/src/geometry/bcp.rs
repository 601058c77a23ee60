use serde::Serialize;
use thiserror::Error;

use super::ball_components;
use crate::gauge::Gauge;

/// Relative slack for closed-ball membership; cone costs are float sums.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

const MAX_APEX_CANDIDATES: usize = 300;

#[derive(Debug, Clone, Serialize)]
pub struct BallCheck {
    pub index: usize,
    pub center: f64,
    pub radius: f64,
    /// d(0, center)
    pub distance: f64,
    pub pass: bool,
}

/// Center i lies outside ball j.
#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    pub radius_j: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BcpCertificate {
    /// (center, radius), radii nonincreasing.
    pub balls: Vec<(f64, f64)>,
    pub depth: usize,
    pub membership: Vec<BallCheck>,
    pub non_membership: Vec<PairCheck>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Error)]
pub enum BcpError {
    #[error("no disconnected closed balls on the radius ladder")]
    NoDisconnectedBalls,
    #[error("largest compatible ball family has {found} balls, {needed} requested ({disconnected} disconnected ladder balls)")]
    InsufficientBalls { found: usize, needed: usize, disconnected: usize },
}

fn inside(dist: f64, r: f64) -> bool {
    dist <= r * (1.0 + MEMBERSHIP_TOL)
}

impl BcpCertificate {
    fn build(g: &Gauge, balls: Vec<(f64, f64)>) -> BcpCertificate {
        let membership = balls
            .iter()
            .enumerate()
            .map(|(index, &(center, radius))| {
                let distance = g.value(center.abs());
                BallCheck { index, center, radius, distance, pass: inside(distance, radius) }
            })
            .collect();
        let mut non_membership = Vec::new();
        for (i, &(xi, _)) in balls.iter().enumerate() {
            for (j, &(xj, rj)) in balls.iter().enumerate() {
                if i != j {
                    let distance = g.value((xi - xj).abs());
                    non_membership.push(PairCheck { i, j, distance, radius_j: rj, pass: !inside(distance, rj) });
                }
            }
        }
        BcpCertificate { depth: balls.len(), balls, membership, non_membership, tolerance: MEMBERSHIP_TOL }
    }

    pub fn all_pass(&self) -> bool {
        self.membership.iter().all(|c| c.pass) && self.non_membership.iter().all(|c| c.pass)
    }

    /// Recomputes every check from `g` alone.
    pub fn verify(&self, g: &Gauge) -> bool {
        let again = BcpCertificate::build(g, self.balls.clone());
        again.all_pass() && again.depth == self.depth
    }
}

/// Radii 1/(n+1) for n = 2..N−1.
pub fn bcp_radius_ladder(n: usize) -> Vec<f64> {
    (2..n).map(|k| 1.0 / (k + 1) as f64).collect()
}

/// Searches for `depth` closed balls that all contain 0 while no ball contains
/// another ball's center. Candidates are ±y″ for each disconnected ladder ball
/// (0 then sits on the ball's boundary), cone apexes p with radius d(p), and
/// one small-scale pair; the family is an exact maximum-compatible subset,
/// stopping once `depth` balls are found.
pub fn bcp_violation(g: &Gauge, depth: usize, radii: &[f64]) -> Result<BcpCertificate, BcpError> {
    let half = g.x_max() / 2.0;
    let mut cand: Vec<(f64, f64)> = Vec::new();
    let mut disconnected = 0;
    for &r in radii {
        let b = ball_components(g, r, true);
        if b.truncated || b.components.len() < 2 {
            continue;
        }
        if let Some((_, y2)) = b.gap_after_origin() {
            disconnected += 1;
            if y2 <= half {
                cand.push((-y2, r));
                cand.push((y2, r));
            }
        }
    }
    if disconnected == 0 {
        return Err(BcpError::NoDisconnectedBalls);
    }
    if let Some(env) = g.cones() {
        let mut apexes: Vec<f64> = env.apexes().filter(|&(p, _)| p > 0.0 && p <= half).map(|a| a.0).collect();
        if apexes.len() > MAX_APEX_CANDIDATES {
            apexes.sort_by(|a, b| (g.value(*a) / a).total_cmp(&(g.value(*b) / b)));
            apexes.truncate(MAX_APEX_CANDIDATES);
        }
        for p in apexes {
            let r = g.value(p);
            cand.push((-p, r));
            cand.push((p, r));
        }
    }
    let smallest = cand.iter().map(|c| c.0.abs()).fold(half, f64::min);
    let eps = (smallest / 64.0).min(g.grid_step());
    let r_eps = g.value(eps);
    cand.push((-eps, r_eps));
    cand.push((eps, r_eps));

    cand.retain(|&(x, r)| r > 0.0 && inside(g.value(x.abs()), r));
    cand.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    cand.dedup();

    let n = cand.len();
    let compatible = |i: usize, j: usize| {
        let (xi, ri) = cand[i];
        let (xj, rj) = cand[j];
        let d = g.value((xi - xj).abs());
        xi != xj && !inside(d, ri) && !inside(d, rj)
    };
    let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i != j && compatible(i, j)).collect()).collect();
    let mut best = Vec::new();
    let mut cur = Vec::new();
    clique(&adj, &mut cur, (0..n).collect(), &mut best, depth);
    if best.len() < depth {
        return Err(BcpError::InsufficientBalls { found: best.len(), needed: depth, disconnected });
    }
    let balls = best.iter().map(|&i| cand[i]).collect();
    Ok(BcpCertificate::build(g, balls))
}

fn clique(adj: &[Vec<bool>], cur: &mut Vec<usize>, cand: Vec<usize>, best: &mut Vec<usize>, target: usize) {
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    if best.len() >= target {
        return;
    }
    for (k, &v) in cand.iter().enumerate() {
        if cur.len() + cand.len() - k <= best.len() {
            return;
        }
        let next: Vec<usize> = cand[k + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
        cur.push(v);
        clique(adj, cur, next, best, target);
        cur.pop();
        if best.len() >= target {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{BuiltinId, Gauge};

    #[test]
    fn euclidean_has_no_disconnected_balls() {
        let r = bcp_violation(&Gauge::euclidean(), 3, &bcp_radius_ladder(20));
        assert!(matches!(r, Err(BcpError::NoDisconnectedBalls)));
    }

    #[test]
    fn depth_five_on_bcp_envelope() {
        let g = Gauge::builtin(BuiltinId::BcpEnvelope).unwrap();
        let c = bcp_violation(&g, 5, &bcp_radius_ladder(20)).unwrap();
        assert_eq!(c.depth, 5);
        assert_eq!(c.membership.len() + c.non_membership.len(), 25);
        assert!(c.all_pass());
        assert!(c.verify(&g));
    }

    #[test]
    fn covering_subfamilies_keep_every_ball() {
        let g = Gauge::builtin(BuiltinId::BcpEnvelope).unwrap();
        let c = bcp_violation(&g, 5, &bcp_radius_ladder(20)).unwrap();
        let n = c.depth;
        for mask in 0u32..(1 << n) {
            let covers = c.balls.iter().all(|&(x, _)| {
                (0..n).any(|j| mask & (1 << j) != 0 && inside(g.value((x - c.balls[j].0).abs()), c.balls[j].1))
            });
            if covers {
                assert_eq!(mask, (1 << n) - 1);
            }
        }
        for &(x, r) in &c.balls {
            assert!(inside(g.value(x.abs()), r));
        }
    }
}
