//! Gauges h with d(x, y) = h(|x − y|).

mod builtin;
mod file;
mod validate;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builtin::{BuiltinId, ClosedForm, Dim1, Ex3, Ex4Instance, DIM1_KINK};
pub use file::{load_gauge, GaugeFile};
pub use validate::{
    validate, ContinuityCheck, GaugeValidationReport, PositivityCheck, ProperCheck, SeparationCheck,
    SubadditivityCheck,
};

use crate::envelope::{self, ConeEnvelope, EnvelopeError};

pub const DEFAULT_GRID_STEP: f64 = 1e-4;
pub const DEFAULT_X_MAX: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaugeError {
    #[error("x = {x} is outside the represented domain [0, {x_max}]")]
    Domain { x: f64, x_max: f64 },
    #[error("r = {r} exceeds the supremum {sup} of the gauge")]
    Range { r: f64, sup: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("malformed gauge: {0}")]
    Malformed(String),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeKind {
    ClosedFormBuiltin,
    SampledTable,
    EnvelopeResult,
}

#[derive(Debug, Clone)]
enum Repr {
    Closed(ClosedForm),
    Sampled(Arc<Vec<f64>>),
    Cones(Arc<ConeEnvelope>),
}

/// Parameters accepted by [`make_builtin`]. Unused fields are ignored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuiltinParams {
    /// Exponent p of the custom gauge x^p.
    pub exponent: Option<f64>,
    /// Largest cube-root pin of the ex4 instance.
    pub s0: Option<f64>,
    /// Truncation index of an envelope family.
    pub n: Option<usize>,
    /// Alignment step of an envelope family.
    pub step: Option<f64>,
    /// Increasing sequence a_1, a_2, ... of the non-LC family.
    pub a: Option<Vec<f64>>,
    pub grid_step: Option<f64>,
    pub x_max: Option<f64>,
}

/// An immutable gauge on [0, x_max].
#[derive(Debug, Clone)]
pub struct Gauge {
    repr: Repr,
    kind: GaugeKind,
    builtin: Option<BuiltinId>,
    grid_step: f64,
    x_max: f64,
    scale: f64,
}

pub fn make_builtin(id: BuiltinId, params: &BuiltinParams) -> Result<Gauge, GaugeError> {
    let grid_step = params.grid_step.unwrap_or(DEFAULT_GRID_STEP);
    let x_max = params.x_max.unwrap_or(DEFAULT_X_MAX);
    if !(grid_step > 0.0 && x_max > 0.0 && grid_step <= x_max) {
        return Err(GaugeError::InvalidParams(format!("need 0 < grid_step ≤ x_max, got {grid_step}, {x_max}")));
    }
    let form = match id {
        BuiltinId::Euclidean => ClosedForm::Power(1.0),
        BuiltinId::Sqrt => ClosedForm::Power(0.5),
        BuiltinId::Cbrt => ClosedForm::Power(1.0 / 3.0),
        BuiltinId::Custom => {
            let p = params
                .exponent
                .ok_or_else(|| GaugeError::InvalidParams("custom gauge needs an exponent".into()))?;
            if !(p > 0.0 && p.is_finite()) {
                return Err(GaugeError::InvalidParams(format!("exponent must be positive, got {p}")));
            }
            ClosedForm::Power(p)
        }
        BuiltinId::Ex3 => ClosedForm::Ex3(Ex3::new(grid_step, x_max)),
        BuiltinId::Ex4Instance => ClosedForm::Ex4(Ex4Instance::new(params.s0.unwrap_or(Ex4Instance::DEFAULT_S0))?),
        BuiltinId::Dim1 => ClosedForm::Dim1(Dim1),
        BuiltinId::BcpEnvelope => {
            let n = params.n.unwrap_or(20);
            let step = match params.step {
                Some(s) => s,
                None => envelope::bcp_default_step(n)?,
            };
            let c = envelope::bcp_constraints(n, step)?;
            let x_max = params.x_max.unwrap_or(2.0);
            let sol = envelope::solve_envelope_exact(&c, x_max, params.grid_step)?;
            return Ok(sol.gauge.with_builtin(BuiltinId::BcpEnvelope));
        }
        BuiltinId::NonlcEnvelope => {
            let a = params.a.clone().unwrap_or_else(|| vec![8.0, 512.0, 134_217_728.0]);
            let n = params.n.unwrap_or(a.len().saturating_sub(1).max(1));
            let c = envelope::nonlc_constraints(&a, n, params.step.unwrap_or(1.0))?;
            let x_max = params.x_max.unwrap_or_else(|| c.max_a());
            let sol = envelope::solve_envelope_exact(&c, x_max, params.grid_step)?;
            return Ok(sol.gauge.with_builtin(BuiltinId::NonlcEnvelope));
        }
    };
    Ok(Gauge::closed(form, id, grid_step, x_max))
}

impl Gauge {
    /// Builtin with default parameters.
    pub fn builtin(id: BuiltinId) -> Result<Gauge, GaugeError> {
        make_builtin(id, &BuiltinParams::default())
    }

    pub fn euclidean() -> Gauge {
        Gauge::closed(ClosedForm::Power(1.0), BuiltinId::Euclidean, DEFAULT_GRID_STEP, DEFAULT_X_MAX)
    }

    pub fn sqrt() -> Gauge {
        Gauge::closed(ClosedForm::Power(0.5), BuiltinId::Sqrt, DEFAULT_GRID_STEP, DEFAULT_X_MAX)
    }

    pub fn closed(form: ClosedForm, id: BuiltinId, grid_step: f64, x_max: f64) -> Gauge {
        Gauge {
            repr: Repr::Closed(form),
            kind: GaugeKind::ClosedFormBuiltin,
            builtin: Some(id),
            grid_step,
            x_max,
            scale: 1.0,
        }
    }

    /// A sampled table h(iδ) = values[i]; x_max = (len − 1)·δ.
    pub fn from_samples(step: f64, values: Vec<f64>) -> Result<Gauge, GaugeError> {
        Self::sampled(step, values, GaugeKind::SampledTable)
    }

    pub(crate) fn sampled(step: f64, values: Vec<f64>, kind: GaugeKind) -> Result<Gauge, GaugeError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(GaugeError::Malformed(format!("step must be positive, got {step}")));
        }
        if values.len() < 2 {
            return Err(GaugeError::Malformed("a sampled gauge needs at least two values".into()));
        }
        if values[0] != 0.0 {
            return Err(GaugeError::Malformed(format!("h(0) must be 0, got {}", values[0])));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(GaugeError::Malformed(format!("value {v} at index {i} is not a finite nonnegative number")));
        }
        let x_max = (values.len() - 1) as f64 * step;
        Ok(Gauge { repr: Repr::Sampled(Arc::new(values)), kind, builtin: None, grid_step: step, x_max, scale: 1.0 })
    }

    pub(crate) fn from_cones(cones: ConeEnvelope, x_max: f64, grid_step: f64) -> Gauge {
        Gauge {
            repr: Repr::Cones(Arc::new(cones)),
            kind: GaugeKind::EnvelopeResult,
            builtin: None,
            grid_step,
            x_max,
            scale: 1.0,
        }
    }

    pub(crate) fn with_builtin(mut self, id: BuiltinId) -> Gauge {
        self.builtin = Some(id);
        self
    }

    pub fn kind(&self) -> GaugeKind {
        self.kind
    }

    pub fn builtin_id(&self) -> Option<BuiltinId> {
        self.builtin
    }

    pub fn label(&self) -> String {
        match (self.builtin, self.kind) {
            (Some(id), _) => id.name().to_string(),
            (None, GaugeKind::EnvelopeResult) => "envelope".to_string(),
            _ => "sampled".to_string(),
        }
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        match &self.repr {
            Repr::Closed(f) => Some(f),
            _ => None,
        }
    }

    pub fn cones(&self) -> Option<&ConeEnvelope> {
        match &self.repr {
            Repr::Cones(c) => Some(c),
            _ => None,
        }
    }

    /// Raw samples of a table-backed gauge (before any scaling).
    pub fn samples(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Sampled(v) => Some(v),
            _ => None,
        }
    }

    /// Number of scan-grid points 0, δ, …, floor(x_max/δ)·δ.
    pub fn grid_len(&self) -> usize {
        match &self.repr {
            Repr::Sampled(v) => v.len(),
            _ => (self.x_max / self.grid_step + 1e-9).floor() as usize + 1,
        }
    }

    pub fn grid_point(&self, i: usize) -> f64 {
        (i as f64 * self.grid_step).min(self.x_max)
    }

    /// Values at every scan-grid point.
    pub fn grid_values(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Sampled(v) => v.iter().map(|x| x * self.scale).collect(),
            _ => (0..self.grid_len()).map(|i| self.value(self.grid_point(i))).collect(),
        }
    }

    fn check_domain(&self, x: f64) -> Result<f64, GaugeError> {
        if x.is_nan() || x < 0.0 || x > self.x_max * (1.0 + 1e-12) {
            return Err(GaugeError::Domain { x, x_max: self.x_max });
        }
        Ok(x.min(self.x_max))
    }

    pub fn eval(&self, x: f64) -> Result<f64, GaugeError> {
        let x = self.check_domain(x)?;
        Ok(self.value(x))
    }

    /// h(x) for x already known to lie in the domain; clamps otherwise.
    pub fn value(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, self.x_max);
        self.scale
            * match &self.repr {
                Repr::Closed(f) => f.eval(x),
                Repr::Cones(c) => c.eval(x),
                Repr::Sampled(v) => {
                    let t = x / self.grid_step;
                    let i = (t.floor() as usize).min(v.len() - 1);
                    if i + 1 >= v.len() {
                        v[v.len() - 1]
                    } else {
                        let w = t - i as f64;
                        v[i] + w * (v[i + 1] - v[i])
                    }
                }
            }
    }

    /// (max h on [lo, hi], a point where it is attained).
    pub fn max_on(&self, lo: f64, hi: f64) -> Result<(f64, f64), GaugeError> {
        let lo = self.check_domain(lo)?;
        let hi = self.check_domain(hi)?;
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let (v, at) = match &self.repr {
            Repr::Closed(f) => (f.eval(hi), hi),
            Repr::Cones(c) => c.max_on(lo, hi),
            Repr::Sampled(v) => self.scan_sampled(v, lo, hi, |a, b| a > b),
        };
        Ok((self.scale * v, at))
    }

    /// (min h on [lo, hi], a point where it is attained).
    pub fn min_on(&self, lo: f64, hi: f64) -> Result<(f64, f64), GaugeError> {
        let lo = self.check_domain(lo)?;
        let hi = self.check_domain(hi)?;
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let (v, at) = match &self.repr {
            Repr::Closed(f) => (f.eval(lo), lo),
            Repr::Cones(c) => c.min_on(lo, hi),
            Repr::Sampled(v) => self.scan_sampled(v, lo, hi, |a, b| a < b),
        };
        Ok((self.scale * v, at))
    }

    // Piecewise-linear extremes sit at the endpoints or at grid points.
    fn scan_sampled(&self, v: &[f64], lo: f64, hi: f64, better: impl Fn(f64, f64) -> bool) -> (f64, f64) {
        let raw = |x: f64| self.value(x) / self.scale;
        let mut best = (raw(lo), lo);
        let hv = raw(hi);
        if better(hv, best.0) {
            best = (hv, hi);
        }
        let i0 = (lo / self.grid_step).ceil() as usize;
        let i1 = ((hi / self.grid_step).floor() as usize).min(v.len() - 1);
        for (i, &val) in v.iter().enumerate().take(i1 + 1).skip(i0) {
            if better(val, best.0) {
                best = (val, i as f64 * self.grid_step);
            }
        }
        best
    }

    pub fn sup_value(&self) -> f64 {
        self.max_on(0.0, self.x_max).map(|p| p.0).unwrap_or(0.0)
    }

    /// x_r = sup{x ∈ [0, x_max] : h(x) ≤ r}, the right end of the sublevel set.
    pub fn inverse_max(&self, r: f64) -> Result<f64, GaugeError> {
        let sup = self.sup_value();
        if r.is_nan() || r < 0.0 || r > sup * (1.0 + 1e-12) {
            return Err(GaugeError::Range { r, sup });
        }
        if self.value(self.x_max) <= r {
            return Ok(self.x_max);
        }
        let raw = r / self.scale;
        Ok(match &self.repr {
            Repr::Closed(f) => f.inverse(raw).min(self.x_max),
            Repr::Cones(c) => c.inverse_max(raw, self.x_max),
            Repr::Sampled(v) => {
                let j = v.iter().rposition(|&y| y <= raw).unwrap_or(0);
                let (a, b) = (v[j], v[j + 1]);
                (j as f64 + (raw - a) / (b - a)) * self.grid_step
            }
        })
    }

    /// Nondecreasing on [0, x_max] (on the grid for tables).
    pub fn is_monotone(&self) -> bool {
        match &self.repr {
            Repr::Closed(_) => true,
            Repr::Cones(c) => c.is_monotone(self.x_max),
            Repr::Sampled(v) => v.windows(2).all(|w| w[1] >= w[0]),
        }
    }

    /// Strictly increasing on [0, x_max] (on the grid for tables).
    pub fn is_strictly_increasing(&self) -> bool {
        match &self.repr {
            Repr::Closed(_) => true,
            Repr::Cones(c) => c.is_monotone(self.x_max),
            Repr::Sampled(v) => v.windows(2).all(|w| w[1] > w[0]),
        }
    }

    /// Running maximum u ↦ max{h(v) : v ≤ u}.
    pub fn monotone_regularization(&self) -> Gauge {
        if self.is_monotone() {
            return self.clone();
        }
        let mut vals = match &self.repr {
            Repr::Sampled(v) => v.as_ref().clone(),
            _ => (0..self.grid_len()).map(|i| self.value(self.grid_point(i)) / self.scale).collect(),
        };
        let mut run = 0.0f64;
        for v in vals.iter_mut() {
            run = run.max(*v);
            *v = run;
        }
        let mut g = Gauge::sampled(self.grid_step, vals, self.kind).expect("running max of a valid gauge");
        g.scale = self.scale;
        g
    }

    /// The gauge s·h.
    pub fn scaled(&self, s: f64) -> Gauge {
        assert!(s > 0.0 && s.is_finite(), "scale factor must be positive");
        let mut g = self.clone();
        g.scale *= s;
        g
    }

    /// Maximal intervals of {x ∈ [0, x_max] : h(x) ≤ r} (`closed`) or
    /// {h(x) < r}, sorted. The first contains 0 whenever r > 0.
    pub fn sublevel_set(&self, r: f64, closed: bool) -> Vec<(f64, f64)> {
        let raw = r / self.scale;
        let inside = |v: f64| if closed { v <= raw } else { v < raw };
        match &self.repr {
            Repr::Closed(f) => {
                if !inside(0.0) {
                    return vec![];
                }
                vec![(0.0, f.inverse(raw).min(self.x_max))]
            }
            Repr::Cones(c) => c.sublevel(raw, closed, 0.0, self.x_max),
            Repr::Sampled(v) => {
                let mut out: Vec<(f64, f64)> = Vec::new();
                let mut push = |a: f64, b: f64| match out.last_mut() {
                    Some(last) if a <= last.1 => last.1 = last.1.max(b),
                    _ => out.push((a, b)),
                };
                for k in 0..v.len() - 1 {
                    let (a, b) = (v[k], v[k + 1]);
                    let x0 = k as f64 * self.grid_step;
                    let cross = x0 + (raw - a) / (b - a) * self.grid_step;
                    match (inside(a), inside(b)) {
                        (true, true) => push(x0, x0 + self.grid_step),
                        (true, false) => push(x0, cross),
                        (false, true) => push(cross, x0 + self.grid_step),
                        (false, false) => {}
                    }
                }
                if out.is_empty() && inside(v[0]) {
                    out.push((0.0, 0.0));
                }
                out
            }
        }
    }

    /// Constraint points recorded by an envelope gauge.
    pub fn anchors(&self) -> &[f64] {
        match &self.repr {
            Repr::Cones(c) => &c.anchors,
            _ => &[],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(Gauge::euclidean().eval(0.7).unwrap(), 0.7);
        assert_eq!(Gauge::sqrt().eval(0.25).unwrap(), 0.5);
        let ex3 = Gauge::builtin(BuiltinId::Ex3).unwrap();
        assert!((ex3.eval(0.01).unwrap() - 0.465_990_601_784_656).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let g = Gauge::euclidean();
        assert!(matches!(g.eval(-0.1), Err(GaugeError::Domain { .. })));
        assert!(matches!(g.eval(4.5), Err(GaugeError::Domain { .. })));
        assert!(matches!(g.inverse_max(5.0), Err(GaugeError::Range { .. })));
    }

    #[test]
    fn inverse_examples() {
        assert!((Gauge::euclidean().inverse_max(0.3).unwrap() - 0.3).abs() < 1e-15);
        assert!((Gauge::sqrt().inverse_max(0.5).unwrap() - 0.25).abs() < 1e-15);
        let ex3 = Gauge::builtin(BuiltinId::Ex3).unwrap();
        for &r in &[0.2f64, 0.3, 0.5] {
            let want = (-1.0 / (r * r)).exp();
            assert!((ex3.inverse_max(r).unwrap() - want).abs() <= 1e-4);
        }
    }

    #[test]
    fn dim1_kink_through_gauge() {
        let g = Gauge::builtin(BuiltinId::Dim1).unwrap();
        assert!((g.inverse_max(0.5).unwrap() - 0.378_671_043_061_1).abs() < 1e-9);
    }

    #[test]
    fn sampled_running_max() {
        let g = Gauge::from_samples(1.0, vec![0.0, 1.0, 0.5, 1.5]).unwrap();
        assert!(!g.is_monotone());
        let r = g.monotone_regularization();
        assert_eq!(r.samples().unwrap(), &[0.0, 1.0, 1.0, 1.5]);
        assert_eq!(r.monotone_regularization().samples(), r.samples());
        assert_eq!(g.max_on(0.0, 2.0).unwrap(), (1.0, 1.0));
        assert_eq!(g.min_on(1.0, 3.0).unwrap(), (0.5, 2.0));
        assert_eq!(g.eval(2.5).unwrap(), 1.0);
    }

    #[test]
    fn sampled_inverse_interpolates() {
        let g = Gauge::from_samples(0.5, vec![0.0, 1.0, 2.0]).unwrap();
        assert!((g.inverse_max(1.5).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(g.inverse_max(2.0).unwrap(), 1.0);
    }

    #[test]
    fn malformed_tables() {
        assert!(Gauge::from_samples(0.1, vec![0.1, 0.2]).is_err());
        assert!(Gauge::from_samples(0.1, vec![0.0, -0.2]).is_err());
        assert!(Gauge::from_samples(0.0, vec![0.0, 0.2]).is_err());
    }

    #[test]
    fn scaling_multiplies_values() {
        let g = Gauge::sqrt().scaled(3.0);
        assert!((g.eval(0.25).unwrap() - 1.5).abs() < 1e-15);
        assert!((g.inverse_max(1.5).unwrap() - 0.25).abs() < 1e-15);
    }
}
