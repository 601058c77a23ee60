use serde::Serialize;

use super::Gauge;

#[derive(Debug, Clone, Serialize)]
pub struct PositivityCheck {
    pub pass: bool,
    /// A point with h(x) = 0 and x > 0, or x = 0 if h(0) ≠ 0.
    pub witness_x: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubadditivityCheck {
    pub pass: bool,
    /// (x, y) maximising h(x + y) − h(x) − h(y).
    pub witness: Option<(f64, f64)>,
    pub max_excess: f64,
    pub tolerance: f64,
    pub pairs_checked: usize,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityCheck {
    pub pass: bool,
    /// (t, sup{h(x) : x ≤ t}) for decreasing t.
    pub ladder: Vec<(f64, f64)>,
    pub witness_t: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationCheck {
    pub pass: bool,
    /// (ε, inf{h(x) : x ≥ ε}).
    pub ladder: Vec<(f64, f64)>,
    /// A point x ≥ ε with h(x) = 0.
    pub witness_x: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProperCheck {
    pub pass: bool,
    /// (r, largest grid x with h(x) < r).
    pub ladder: Vec<(f64, f64)>,
    pub witness_r: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeValidationReport {
    pub gauge: String,
    pub positivity: PositivityCheck,
    pub subadditivity: SubadditivityCheck,
    pub continuity_at_zero: ContinuityCheck,
    pub separation: SeparationCheck,
    pub properness: ProperCheck,
    pub monotone: bool,
}

impl GaugeValidationReport {
    pub fn all_pass(&self) -> bool {
        self.positivity.pass
            && self.subadditivity.pass
            && self.continuity_at_zero.pass
            && self.separation.pass
            && self.properness.pass
    }
}

/// Scans the grid of `g` for the metric-gauge properties. Subadditivity is
/// checked on every grid pair when there are at most `pair_budget` of them,
/// otherwise on a deterministic mix of uniform and geometric indices.
pub fn validate(g: &Gauge, pair_budget: usize) -> GaugeValidationReport {
    let vals = g.grid_values();
    let m = vals.len() - 1;
    let xs: Vec<f64> = (0..=m).map(|i| g.grid_point(i)).collect();

    let positivity = match (1..=m).find(|&i| vals[i] <= 0.0) {
        _ if vals[0] != 0.0 => PositivityCheck { pass: false, witness_x: Some(0.0) },
        Some(i) => PositivityCheck { pass: false, witness_x: Some(xs[i]) },
        None => PositivityCheck { pass: true, witness_x: None },
    };

    let step_var = vals.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let tolerance = 1e-9 + 2.0 * step_var;
    let total_pairs = (m / 2 + 1) * (m - m / 2 + 1);
    let exhaustive = total_pairs <= pair_budget.max(1);
    let idx: Vec<usize> = if exhaustive { (0..=m).collect() } else { stratified(m, pair_budget.max(4)) };
    let mut max_excess = f64::NEG_INFINITY;
    let mut witness = None;
    let mut pairs_checked = 0;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a..] {
            if i + j > m {
                break;
            }
            pairs_checked += 1;
            let e = vals[i + j] - vals[i] - vals[j];
            if e > max_excess {
                max_excess = e;
                witness = Some((xs[i], xs[j]));
            }
        }
    }
    let sub_pass = max_excess <= tolerance;
    let subadditivity = SubadditivityCheck {
        pass: sub_pass,
        witness: if sub_pass { None } else { witness },
        max_excess,
        tolerance,
        pairs_checked,
        exhaustive,
    };

    let ladder_t: Vec<f64> = (1..=6).map(|k| g.x_max() * 10f64.powi(-k)).collect();
    // prefix maxima so each ladder entry is a lookup
    let mut prefix = vals.clone();
    for i in 1..prefix.len() {
        prefix[i] = prefix[i].max(prefix[i - 1]);
    }
    let mut suffix = vals.clone();
    for i in (0..m).rev() {
        suffix[i] = suffix[i].min(suffix[i + 1]);
    }
    let below = |t: f64| ((t / g.grid_step()).floor() as usize).min(m);
    let cont: Vec<(f64, f64)> = ladder_t.iter().map(|&t| (t, prefix[below(t)].max(g.value(t)))).collect();
    let witness_t = cont.windows(2).find(|w| w[1].1 >= w[0].1).map(|w| w[1].0);
    let continuity_at_zero = ContinuityCheck { pass: witness_t.is_none(), ladder: cont, witness_t };

    let mut sep_witness = None;
    let sep: Vec<(f64, f64)> = ladder_t
        .iter()
        .map(|&e| {
            let i = ((e / g.grid_step()).ceil() as usize).min(m);
            let inf = suffix[i].min(g.value(e));
            if inf <= 0.0 && sep_witness.is_none() {
                sep_witness = if g.value(e) <= 0.0 { Some(e) } else { (i..=m).find(|&k| vals[k] <= 0.0).map(|k| xs[k]) };
            }
            (e, inf)
        })
        .collect();
    let separation = SeparationCheck { pass: sep.iter().all(|p| p.1 > 0.0), ladder: sep, witness_x: sep_witness };

    let sup = prefix[m];
    let mut witness_r = None;
    let proper: Vec<(f64, f64)> = (1..=5)
        .map(|k| {
            let r = sup * k as f64 / 10.0;
            let x = (0..=m).rev().find(|&i| vals[i] < r).map(|i| xs[i]).unwrap_or(0.0);
            if x >= g.x_max() && witness_r.is_none() {
                witness_r = Some(r);
            }
            (r, x)
        })
        .collect();
    let properness = ProperCheck { pass: witness_r.is_none(), ladder: proper, witness_r };

    GaugeValidationReport {
        gauge: g.label(),
        positivity,
        subadditivity,
        continuity_at_zero,
        separation,
        properness,
        monotone: vals.windows(2).all(|w| w[1] >= w[0]),
    }
}

// About sqrt(2·budget) indices: half uniform, half geometric, plus the ends.
fn stratified(m: usize, budget: usize) -> Vec<usize> {
    let q = ((2.0 * budget as f64).sqrt() as usize).max(4);
    let half = q / 2;
    let mut idx = vec![0, 1, m / 2, m];
    for k in 0..=half {
        idx.push(k * m / half);
        let g = (m as f64).powf(k as f64 / half as f64).round() as usize;
        idx.push(g.min(m));
    }
    idx.sort_unstable();
    idx.dedup();
    idx
}
