//! Ball measure, Hausdorff and Assouad scaling exponents, Nagata covers.

mod nagata;

use serde::Serialize;
use thiserror::Error;

pub use nagata::{nagata_cover, NagataCover, NAGATA_PADDING};

use crate::gauge::{Gauge, GaugeError};
use crate::geometry::{ball_components, geometric_ladder};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimensionError {
    #[error("invalid radius window: {0}")]
    Window(String),
    #[error("every ball measure in the window underflows")]
    Underflow,
    #[error("gauge is not monotone; balls may be disconnected (see the lc ratio)")]
    NotMonotone,
    #[error("scale {s} needs {tiles} tiles, above the limit {limit}")]
    ScaleTooFine { s: f64, tiles: usize, limit: usize },
    #[error(transparent)]
    Gauge(#[from] GaugeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallMeasure {
    /// Lebesgue measure of B(0, r).
    pub value: f64,
    /// 2·x_r, equal to `value` for monotone gauges.
    pub upper_bound: f64,
}

pub fn ball_measure(g: &Gauge, r: f64) -> Result<BallMeasure, GaugeError> {
    let upper = 2.0 * g.inverse_max(r)?;
    if g.is_monotone() || r <= 0.0 {
        return Ok(BallMeasure { value: upper, upper_bound: upper });
    }
    Ok(BallMeasure { value: ball_components(g, r, true).measure(), upper_bound: upper })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingSample {
    pub r: f64,
    pub measure: f64,
    /// Slope of ln|B| against ln r from the previous sample.
    pub local_exponent: Option<f64>,
    /// e with |B(r)| = 2·r^e.
    pub density_exponent: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub samples: Vec<ScalingSample>,
    /// Hausdorff estimate: smallest density exponent in the window.
    pub limsup_exponent: f64,
    /// Assouad lower bound: largest density exponent in the window.
    pub liminf_exponent: f64,
    pub window: (f64, f64),
    pub divergence_flag: bool,
    pub divergence_cap: f64,
    /// Ladder radii dropped because the ball measure underflowed.
    pub dropped_underflow: usize,
}

pub const DIVERGENCE_CAP: f64 = 25.0;
const DIVERGENCE_RUN: usize = 4;

/// Scaling of |B(0, r)| over a geometric ladder in [r_min, r_max] ⊂ (0, 1).
pub fn hausdorff_exponent(g: &Gauge, r_min: f64, r_max: f64, n_samples: usize) -> Result<ScalingReport, DimensionError> {
    if !(r_min > 0.0 && r_min < r_max && r_max < 1.0) {
        return Err(DimensionError::Window(format!("need 0 < r_min < r_max < 1, got [{r_min}, {r_max}]")));
    }
    if n_samples < 8 {
        return Err(DimensionError::Window(format!("need at least 8 samples, got {n_samples}")));
    }
    let mut dropped_underflow = 0;
    let mut pts = Vec::new();
    for r in geometric_ladder(r_min, r_max, n_samples) {
        let m = ball_measure(g, r)?.value;
        if m < f64::MIN_POSITIVE {
            dropped_underflow += 1;
        } else {
            pts.push((r, m));
        }
    }
    if pts.len() < 2 {
        return Err(DimensionError::Underflow);
    }
    let samples: Vec<ScalingSample> = pts
        .iter()
        .enumerate()
        .map(|(i, &(r, m))| ScalingSample {
            r,
            measure: m,
            local_exponent: (i > 0).then(|| (m.ln() - pts[i - 1].1.ln()) / (r.ln() - pts[i - 1].0.ln())),
            density_exponent: (m / 2.0).ln() / r.ln(),
        })
        .collect();
    let e = samples.iter().map(|s| s.density_exponent);
    let limsup_exponent = e.clone().fold(f64::INFINITY, f64::min);
    let liminf_exponent = e.fold(f64::NEG_INFINITY, f64::max);
    // slopes in increasing r; divergence = a run growing as r shrinks
    let slopes: Vec<f64> = samples.iter().filter_map(|s| s.local_exponent).collect();
    let mut run = 0;
    let mut divergence_flag = false;
    for i in 0..slopes.len() {
        if slopes[i] > DIVERGENCE_CAP && (run == 0 || slopes[i] < slopes[i - 1]) {
            run += 1;
        } else {
            run = usize::from(slopes[i] > DIVERGENCE_CAP);
        }
        divergence_flag |= run >= DIVERGENCE_RUN;
    }
    Ok(ScalingReport {
        window: (pts[0].0, pts[pts.len() - 1].0),
        samples,
        limsup_exponent,
        liminf_exponent,
        divergence_flag,
        divergence_cap: DIVERGENCE_CAP,
        dropped_underflow,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AssouadParams {
    pub betas: Vec<f64>,
    pub eps_ladder: Vec<f64>,
    pub d_ladder: Vec<f64>,
    pub cap: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub n_samples: usize,
}

impl Default for AssouadParams {
    fn default() -> Self {
        AssouadParams {
            betas: vec![1.1, 1.5, 2.0, 2.5, 3.0, 3.5],
            eps_ladder: geometric_ladder(1e-12, 1e-1, 12),
            d_ladder: geometric_ladder(1e-6, 0.4, 8),
            cap: 1e3,
            r_min: 1e-5,
            r_max: 1e-2,
            n_samples: 64,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AssouadUpper {
    pub beta: f64,
    pub ok: bool,
    pub max_ratio: f64,
    /// (ε, D) attaining the max.
    pub argmax: (f64, f64),
    /// The ratio still rises at the smallest ε for some D.
    pub growing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssouadReport {
    pub lower: f64,
    pub upper: Vec<AssouadUpper>,
    pub scaling: ScalingReport,
}

impl AssouadReport {
    pub fn upper_ok(&self, beta: f64) -> Option<bool> {
        self.upper.iter().find(|u| u.beta == beta).map(|u| u.ok)
    }
}

/// Lower bound from the scaling report; for each β, whether
/// ε^β ρ^{-1}(D)/ρ^{-1}(εD) stays below `cap` and stops growing as ε → 0.
pub fn assouad_bounds(g: &Gauge, p: &AssouadParams) -> Result<AssouadReport, DimensionError> {
    if !g.is_monotone() {
        return Err(DimensionError::NotMonotone);
    }
    let scaling = hausdorff_exponent(g, p.r_min, p.r_max, p.n_samples)?;
    let mut eps = p.eps_ladder.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    let mut table = Vec::new();
    for &d in &p.d_ladder {
        let top = g.inverse_max(d)?;
        let row: Vec<(f64, f64)> = eps.iter().map(|&e| Ok((e, top / g.inverse_max(e * d)?))).collect::<Result<_, GaugeError>>()?;
        table.push((d, row));
    }
    let upper = p
        .betas
        .iter()
        .map(|&beta| {
            let mut max_ratio = 0.0f64;
            let mut argmax = (0.0, 0.0);
            let mut growing = false;
            for (d, row) in &table {
                let ratios: Vec<f64> = row.iter().map(|&(e, q)| e.powf(beta) * q).collect();
                for (k, &v) in ratios.iter().enumerate() {
                    if v > max_ratio {
                        max_ratio = v;
                        argmax = (row[k].0, *d);
                    }
                }
                let n = ratios.len();
                if n >= 3 && ratios[n - 1] > ratios[n - 2] * (1.0 + 1e-9) && ratios[n - 2] > ratios[n - 3] * (1.0 + 1e-9) {
                    growing = true;
                }
            }
            AssouadUpper { beta, ok: max_ratio <= p.cap && !growing, max_ratio, argmax, growing }
        })
        .collect();
    Ok(AssouadReport { lower: scaling.liminf_exponent, upper, scaling })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::BuiltinId;

    #[test]
    fn measure_examples() {
        assert!((ball_measure(&Gauge::sqrt(), 0.5).unwrap().value - 0.5).abs() < 1e-15);
        assert!((ball_measure(&Gauge::euclidean(), 0.3).unwrap().value - 0.6).abs() < 1e-15);
        let ex3 = Gauge::builtin(BuiltinId::Ex3).unwrap();
        let m = ball_measure(&ex3, 0.2).unwrap().value;
        assert!((m - 2.0 * (-25.0f64).exp()).abs() < 1e-20);
        assert!((m - 2.78e-11).abs() < 1e-13);
    }

    #[test]
    fn measure_is_monotone_in_r() {
        let g = Gauge::builtin(BuiltinId::BcpEnvelope).unwrap();
        let mut last = 0.0;
        for i in 1..200 {
            let m = ball_measure(&g, i as f64 / 200.0).unwrap();
            assert!(m.value >= last && m.value <= m.upper_bound + 1e-12);
            last = m.value;
        }
    }

    #[test]
    fn power_laws() {
        let r = hausdorff_exponent(&Gauge::euclidean(), 1e-4, 1e-1, 16).unwrap();
        assert!((r.limsup_exponent - 1.0).abs() < 1e-9);
        for s in r.samples.iter().filter_map(|s| s.local_exponent) {
            assert!((s - 1.0).abs() < 1e-6);
        }
        let r = hausdorff_exponent(&Gauge::sqrt(), 1e-4, 1e-1, 16).unwrap();
        assert!((r.limsup_exponent - 2.0).abs() < 1e-9);
        assert!(!r.divergence_flag);
        let c = make_custom(0.25);
        let r = hausdorff_exponent(&c, 1e-4, 1e-1, 16).unwrap();
        assert!((r.limsup_exponent - 4.0).abs() < 1e-9 && (r.liminf_exponent - 4.0).abs() < 1e-9);
    }

    fn make_custom(p: f64) -> Gauge {
        crate::gauge::make_builtin(BuiltinId::Custom, &crate::gauge::BuiltinParams { exponent: Some(p), ..Default::default() })
            .unwrap()
    }

    #[test]
    fn ex3_diverges() {
        let g = Gauge::builtin(BuiltinId::Ex3).unwrap();
        let r = hausdorff_exponent(&g, 0.15, 0.4, 16).unwrap();
        assert!(r.divergence_flag);
        // slope of ln|B| = ln 2 − 1/r² is 2/r², bracketed by the endpoints
        for w in r.samples.windows(2).filter(|w| w[1].r < 0.5f64.sqrt()) {
            let s = w[1].local_exponent.unwrap();
            assert!(s <= 2.0 / (w[0].r * w[0].r) * (1.0 + 1e-9) && s >= 2.0 / (w[1].r * w[1].r) * (1.0 - 1e-9), "{s}");
        }
    }

    #[test]
    fn window_errors() {
        let g = Gauge::euclidean();
        assert!(hausdorff_exponent(&g, 0.1, 0.01, 16).is_err());
        assert!(hausdorff_exponent(&g, 0.01, 0.1, 4).is_err());
        assert!(hausdorff_exponent(&g, 0.01, 1.5, 16).is_err());
        let ex3 = Gauge::builtin(BuiltinId::Ex3).unwrap();
        assert_eq!(hausdorff_exponent(&ex3, 1e-4, 1e-2, 16).unwrap_err(), DimensionError::Underflow);
    }

    #[test]
    fn euclidean_assouad() {
        let r = assouad_bounds(&Gauge::euclidean(), &AssouadParams::default()).unwrap();
        assert!((r.lower - 1.0).abs() < 1e-9);
        assert!(r.upper.iter().all(|u| u.ok));
        let p = AssouadParams { betas: vec![0.9], ..Default::default() };
        assert_eq!(assouad_bounds(&Gauge::euclidean(), &p).unwrap().upper_ok(0.9), Some(false));
    }

    #[test]
    fn assouad_refuses_non_monotone() {
        let g = Gauge::builtin(BuiltinId::BcpEnvelope).unwrap();
        assert_eq!(assouad_bounds(&g, &AssouadParams::default()).unwrap_err(), DimensionError::NotMonotone);
    }
}
