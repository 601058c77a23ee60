//! Balls, linear connectedness, Besicovitch violations and biLipschitz tests.

mod bcp;

use serde::Serialize;

pub use bcp::{bcp_radius_ladder, bcp_violation, BallCheck, BcpCertificate, BcpError, PairCheck};

use crate::gauge::Gauge;

/// Geometric ladder of `n` points from `lo` to `hi` inclusive.
pub fn geometric_ladder(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 2, "bad ladder");
    let q = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo * (q * i as f64).exp() }).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BallDecomposition {
    pub center: f64,
    pub radius: f64,
    pub closed: bool,
    /// Sorted, pairwise disjoint intervals of the ball within [−x_max, x_max].
    pub components: Vec<(f64, f64)>,
    /// The ball reaches the end of the represented domain.
    pub truncated: bool,
}

impl BallDecomposition {
    pub fn origin_index(&self) -> usize {
        self.components.iter().position(|&(a, b)| a <= 0.0 && 0.0 <= b).expect("the center lies in the ball")
    }

    pub fn origin_component(&self) -> (f64, f64) {
        self.components[self.origin_index()]
    }

    /// (y′, y″): the gap between the origin component and the next component to the right.
    pub fn gap_after_origin(&self) -> Option<(f64, f64)> {
        let i = self.origin_index();
        self.components.get(i + 1).map(|c| (self.components[i].1, c.0))
    }

    pub fn contains(&self, x: f64) -> bool {
        self.components.iter().any(|&(a, b)| a <= x && x <= b)
    }

    pub fn measure(&self) -> f64 {
        self.components.iter().map(|c| c.1 - c.0).sum()
    }
}

/// Components of the ball of radius r about 0, computed on [0, x_max] and mirrored.
pub fn ball_components(g: &Gauge, r: f64, closed: bool) -> BallDecomposition {
    assert!(r > 0.0, "radius must be positive");
    let right = g.sublevel_set(r, closed);
    let truncated = right.last().is_some_and(|c| c.1 >= g.x_max());
    let mut components: Vec<(f64, f64)> = right.iter().skip(1).rev().map(|&(a, b)| (-b, -a)).collect();
    let u = right.first().map_or(0.0, |c| c.1);
    components.push((-u, u));
    components.extend(right.iter().skip(1).copied());
    BallDecomposition { center: 0.0, radius: r, closed, components, truncated }
}

#[derive(Debug, Clone, Serialize)]
pub struct LcSample {
    pub t: f64,
    /// max{h(s) : s ≤ t}
    pub running_max: f64,
    pub argmax: f64,
    pub value: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LcVerdict {
    Bounded { lambda: f64 },
    Diverging { evidence: Vec<(f64, f64)> },
    /// Ratios stay below λ_max but do not settle over the top decade.
    Inconclusive { sup: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct LcReport {
    pub samples: Vec<LcSample>,
    pub sup_estimate: f64,
    pub witness_t: f64,
    /// Point s ≤ witness_t where the running max is attained.
    pub witness_s: f64,
    pub lambda_max: f64,
    pub verdict: LcVerdict,
}

pub const DEFAULT_LAMBDA_MAX: f64 = 1e6;

/// λ(t) = max{h(s) : s ∈ (0, t)} / h(t) over the ladder.
pub fn lc_ratio(g: &Gauge, t_samples: &[f64], lambda_max: f64) -> LcReport {
    let mut ts: Vec<f64> = t_samples.iter().copied().filter(|&t| t > 0.0 && t <= g.x_max()).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    assert!(!ts.is_empty(), "empty t ladder");
    let samples: Vec<LcSample> = ts
        .iter()
        .map(|&t| {
            let (running_max, argmax) = g.max_on(0.0, t).expect("t in domain");
            let value = g.value(t);
            LcSample { t, running_max, argmax, value, ratio: running_max / value }
        })
        .collect();
    let w = samples.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)).unwrap();
    let (sup, witness_t, witness_s) = (w.ratio, w.t, w.argmax);
    let t_top = samples.last().unwrap().t;
    let top: Vec<f64> = samples.iter().filter(|s| s.t >= t_top / 10.0).map(|s| s.ratio).collect();
    let tail: Vec<&LcSample> = samples.iter().rev().take(3).collect();
    let rising = tail.len() == 3 && tail[0].ratio > tail[1].ratio && tail[1].ratio > tail[2].ratio;
    let verdict = if sup > lambda_max && rising {
        LcVerdict::Diverging { evidence: tail.iter().rev().map(|s| (s.t, s.ratio)).collect() }
    } else if sup <= lambda_max && top.windows(2).all(|p| p[1] <= p[0]) {
        LcVerdict::Bounded { lambda: sup }
    } else {
        LcVerdict::Inconclusive { sup }
    };
    LcReport { samples, sup_estimate: sup, witness_t, witness_s, lambda_max, verdict }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BilipVerdict {
    Bounded { k_hat: f64 },
    /// Samples (x, h(x)/x) at the small-x end along which the ratio moves
    /// monotonically away from the rest of the ladder.
    Unbounded { witnesses: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, Serialize)]
pub struct BilipReport {
    pub samples: Vec<(f64, f64)>,
    pub max_ratio: f64,
    pub min_ratio: f64,
    /// max ratio / min ratio; the best K for h(x)/x ∈ [c/K, c·K] up to the choice of c.
    pub k_hat: f64,
    pub k_max: f64,
    pub verdict: BilipVerdict,
}

pub const DEFAULT_K_MAX: f64 = 10.0;

pub fn bilipschitz_check(g: &Gauge, x_ladder: &[f64], k_max: f64) -> BilipReport {
    let mut xs: Vec<f64> = x_ladder.iter().copied().filter(|&x| x > 0.0 && x <= g.x_max()).collect();
    xs.sort_by(f64::total_cmp);
    assert!(xs.len() >= 2, "need at least two ladder points");
    let samples: Vec<(f64, f64)> = xs.iter().map(|&x| (x, g.value(x) / x)).collect();
    let max_ratio = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let min_ratio = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let k_hat = max_ratio / min_ratio;
    // longest monotone run starting at the smallest x
    let up = samples.windows(2).take_while(|w| w[0].1 > w[1].1).count();
    let down = samples.windows(2).take_while(|w| w[0].1 < w[1].1).count();
    let run = up.max(down) + 1;
    let drift = samples[0].1 / samples[run - 1].1;
    let verdict = if k_hat > k_max || (run >= 4 && !(0.5..=2.0).contains(&drift)) {
        BilipVerdict::Unbounded { witnesses: samples[..run].to_vec() }
    } else {
        BilipVerdict::Bounded { k_hat }
    };
    BilipReport { samples, max_ratio, min_ratio, k_hat, k_max, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::BuiltinId;

    #[test]
    fn euclidean_ball_is_an_interval() {
        let b = ball_components(&Gauge::euclidean(), 0.5, true);
        assert_eq!(b.components, vec![(-0.5, 0.5)]);
        assert!(!b.truncated);
    }

    #[test]
    fn sqrt_open_ball() {
        let b = ball_components(&Gauge::sqrt(), 0.3, false);
        assert_eq!(b.components.len(), 1);
        let (a, c) = b.components[0];
        assert!((a + 0.09).abs() < 1e-15 && (c - 0.09).abs() < 1e-15);
    }

    #[test]
    fn sampled_ball_round_trip() {
        let vals = vec![0.0, 1.0, 0.4, 0.8, 1.2, 0.3, 2.0];
        let g = Gauge::from_samples(1.0, vals.clone()).unwrap();
        let b = ball_components(&g, 0.5, true);
        assert_eq!(b.components.len(), 5);
        for (i, &v) in vals.iter().enumerate() {
            assert_eq!(b.contains(i as f64), v <= 0.5, "x={i}");
            assert_eq!(b.contains(-(i as f64)), v <= 0.5);
        }
    }

    #[test]
    fn monotone_gauges_have_unit_lc_ratio() {
        let ladder = geometric_ladder(1e-3, 4.0, 30);
        for id in [BuiltinId::Euclidean, BuiltinId::Sqrt, BuiltinId::Dim1, BuiltinId::Ex3] {
            let r = lc_ratio(&Gauge::builtin(id).unwrap(), &ladder, DEFAULT_LAMBDA_MAX);
            assert_eq!(r.sup_estimate, 1.0, "{id:?}");
            assert_eq!(r.verdict, LcVerdict::Bounded { lambda: 1.0 });
        }
    }

    #[test]
    fn lc_of_regularization_is_one() {
        let g = Gauge::from_samples(1.0, vec![0.0, 1.0, 0.5, 1.5, 0.2]).unwrap();
        let ladder = [1.0, 2.0, 3.0, 4.0];
        assert!(lc_ratio(&g, &ladder, 1e6).sup_estimate > 1.0);
        let r = lc_ratio(&g.monotone_regularization(), &ladder, 1e6);
        assert!(r.samples.iter().all(|s| s.ratio == 1.0));
    }

    #[test]
    fn bilipschitz_examples() {
        let ladder = geometric_ladder(1e-4, 1.0, 20);
        let r = bilipschitz_check(&Gauge::euclidean(), &ladder, DEFAULT_K_MAX);
        assert_eq!(r.verdict, BilipVerdict::Bounded { k_hat: 1.0 });
        let r = bilipschitz_check(&Gauge::sqrt(), &ladder, DEFAULT_K_MAX);
        assert!((r.samples[0].1 - 100.0).abs() < 1e-9);
        assert!(matches!(r.verdict, BilipVerdict::Unbounded { .. }));
    }

    #[test]
    fn bilipschitz_is_scale_invariant() {
        let ladder = geometric_ladder(1e-3, 2.0, 25);
        let g = Gauge::builtin(BuiltinId::Cbrt).unwrap();
        let a = bilipschitz_check(&g, &ladder, DEFAULT_K_MAX);
        let b = bilipschitz_check(&g.scaled(7.5), &ladder, DEFAULT_K_MAX);
        assert!((a.k_hat - b.k_hat).abs() <= 1e-12 * a.k_hat);
        assert_eq!(std::mem::discriminant(&a.verdict), std::mem::discriminant(&b.verdict));
    }

    #[test]
    fn ladder_endpoints() {
        let l = geometric_ladder(1e-3, 1.0, 4);
        assert_eq!(l.len(), 4);
        assert_eq!(l[0], 1e-3);
        assert_eq!(l[3], 1.0);
        assert!((l[1] - 1e-2).abs() < 1e-15);
    }
}
