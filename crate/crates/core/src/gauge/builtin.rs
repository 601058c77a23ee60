//! Closed-form gauges.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::GaugeError;
use crate::quadrature;

/// ρ^{-1}(1/2) for [`Dim1`], i.e. E1(ln 2).
pub const DIM1_KINK: f64 = 0.378_671_043_061_088;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinId {
    Euclidean,
    Sqrt,
    Cbrt,
    Ex3,
    Ex4Instance,
    Dim1,
    Custom,
    BcpEnvelope,
    NonlcEnvelope,
}

impl BuiltinId {
    pub fn parse(s: &str) -> Option<BuiltinId> {
        Some(match s {
            "euclidean" => BuiltinId::Euclidean,
            "sqrt" => BuiltinId::Sqrt,
            "cbrt" => BuiltinId::Cbrt,
            "ex3" => BuiltinId::Ex3,
            "ex4_instance" => BuiltinId::Ex4Instance,
            "dim1" => BuiltinId::Dim1,
            "custom" => BuiltinId::Custom,
            "bcp_envelope" => BuiltinId::BcpEnvelope,
            "nonlc_envelope" => BuiltinId::NonlcEnvelope,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            BuiltinId::Euclidean => "euclidean",
            BuiltinId::Sqrt => "sqrt",
            BuiltinId::Cbrt => "cbrt",
            BuiltinId::Ex3 => "ex3",
            BuiltinId::Ex4Instance => "ex4_instance",
            BuiltinId::Dim1 => "dim1",
            BuiltinId::Custom => "custom",
            BuiltinId::BcpEnvelope => "bcp_envelope",
            BuiltinId::NonlcEnvelope => "nonlc_envelope",
        }
    }
}

#[derive(Debug, Clone)]
pub enum ClosedForm {
    /// x^p with 0 < p ≤ 1.
    Power(f64),
    Ex3(Ex3),
    Ex4(Ex4Instance),
    Dim1(Dim1),
}

impl ClosedForm {
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            ClosedForm::Power(p) => power(x, *p),
            ClosedForm::Ex3(e) => e.eval(x),
            ClosedForm::Ex4(e) => e.eval(x),
            ClosedForm::Dim1(d) => d.eval(x),
        }
    }

    /// Exact inverse of a strictly increasing closed form.
    pub fn inverse(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        match self {
            ClosedForm::Power(p) => r.powf(1.0 / p),
            ClosedForm::Ex3(_) => Ex3::inverse(r),
            ClosedForm::Ex4(e) => e.inverse(r),
            ClosedForm::Dim1(d) => d.inverse(r),
        }
    }
}

fn power(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 0.5 {
        x.sqrt()
    } else if (p - 1.0 / 3.0).abs() < 1e-15 {
        x.cbrt()
    } else {
        x.powf(p)
    }
}

/// min{√(−1/ln x), (2/3)^{3/2}((e^{3/2}/2)x + 1)}: the affine branch is the
/// tangent of the log branch at its inflection point e^{−3/2}.
#[derive(Debug, Clone, Serialize)]
pub struct Ex3 {
    /// First scan-grid point where the affine branch is strictly below the log branch.
    pub crossover: Option<f64>,
}

impl Ex3 {
    pub const TANGENT_POINT: f64 = 0.223_130_160_148_429_83;

    pub fn log_branch(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= 1.0 {
            f64::INFINITY
        } else {
            (-1.0 / x.ln()).sqrt()
        }
    }

    pub fn affine_branch(x: f64) -> f64 {
        (2.0f64 / 3.0).powf(1.5) * (1.5f64.exp() / 2.0 * x + 1.0)
    }

    pub fn new(scan_step: f64, x_max: f64) -> Ex3 {
        let n = (x_max / scan_step).floor() as usize;
        let crossover = (1..=n)
            .map(|i| i as f64 * scan_step)
            .find(|&x| Self::affine_branch(x) < Self::log_branch(x));
        Ex3 { crossover }
    }

    pub fn eval(&self, x: f64) -> f64 {
        Self::log_branch(x).min(Self::affine_branch(x))
    }

    pub fn inverse(r: f64) -> f64 {
        let r0 = (2.0f64 / 3.0).sqrt();
        if r <= r0 {
            (-1.0 / (r * r)).exp()
        } else {
            (r / (2.0f64 / 3.0).powf(1.5) - 1.0) * 2.0 / 1.5f64.exp()
        }
    }
}

/// A concrete gauge squeezed between √x and ∛x on (0, 1) that touches √x on a
/// sequence x_n → 0 and ∛x on an interleaved sequence y_n → 0:
/// ρ = min(∛x, T_n) with T_n the tangent line of √ at x_n.
#[derive(Debug, Clone, Serialize)]
pub struct Ex4Instance {
    pub sqrt_touch: Vec<f64>,
    pub cbrt_touch: Vec<f64>,
    sqrt_roots: Vec<f64>,
}

impl Ex4Instance {
    pub const DEFAULT_S0: f64 = 9e-3;

    pub fn new(s0: f64) -> Result<Ex4Instance, GaugeError> {
        if !(s0 > 0.0 && s0 <= 0.01) {
            return Err(GaugeError::InvalidParams(format!("ex4_instance needs 0 < s0 ≤ 0.01, got {s0}")));
        }
        let mut sqrt_roots = Vec::new();
        let mut cbrt_touch = Vec::new();
        let mut s = s0;
        loop {
            let r = s * s / 4.0;
            if r * r < 1e-300 || s * s * s < 1e-300 {
                break;
            }
            cbrt_touch.push(s * s * s);
            sqrt_roots.push(r);
            s = r / 4.0;
        }
        let sqrt_touch = sqrt_roots.iter().map(|r| r * r).collect();
        let g = Ex4Instance { sqrt_touch, cbrt_touch, sqrt_roots };
        g.check_sandwich()?;
        Ok(g)
    }

    fn check_sandwich(&self) -> Result<(), GaugeError> {
        let bad = |what: &str, x: f64| Err(GaugeError::InvalidParams(format!("ex4_instance: {what} fails at x = {x:e}")));
        for (&x, &r) in self.sqrt_touch.iter().zip(&self.sqrt_roots) {
            if (self.eval(x) - r).abs() > 1e-12 * r {
                return bad("ρ(x_n) = √x_n", x);
            }
        }
        for &y in &self.cbrt_touch {
            if (self.eval(y) - y.cbrt()).abs() > 1e-12 * y.cbrt() {
                return bad("ρ(y_n) = ∛y_n", y);
            }
        }
        // 400 samples per decade, down to the last pin.
        let lo = self.sqrt_touch.last().copied().unwrap_or(1e-6).log10().floor() as i32;
        for i in (lo * 400)..0 {
            let x = 10f64.powf(i as f64 / 400.0);
            let v = self.eval(x);
            if v < x.sqrt() * (1.0 - 1e-12) || v > x.cbrt() * (1.0 + 1e-12) {
                return bad("√x ≤ ρ ≤ ∛x", x);
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = x.cbrt();
        for &r in &self.sqrt_roots {
            v = v.min(r / 2.0 + x / (2.0 * r));
        }
        v
    }

    pub fn inverse(&self, r: f64) -> f64 {
        let mut x = r * r * r;
        for &s in &self.sqrt_roots {
            x = x.max(2.0 * s * r - s * s);
        }
        x
    }
}

/// Inverse ρ^{-1}(y) = −∫₀^y dt/ln t on (0, 1/2), continued linearly with slope
/// 1/ln 2 beyond 1/2.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Dim1;

impl Dim1 {
    const CUT: f64 = 1e-12;

    /// −∫₀^y dt/ln t for 0 < y ≤ 1/2. With t = y·e^{−v} this is
    /// y ∫₀^∞ e^{−v}/(L+v) dv, L = −ln y; the piece e^{−v} < CUT is bounded by
    /// its right-endpoint value times its length.
    pub fn log_integral(y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let l = -y.ln();
        let v_cut = -Self::CUT.ln();
        let q = quadrature::integrate(|v| (-v).exp() / (l + v), 0.0, v_cut, 1e-15, 1e-13);
        y * (q.value + Self::CUT / (l + v_cut))
    }

    pub fn inverse(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else if r < 0.5 {
            Self::log_integral(r)
        } else {
            DIM1_KINK + (r - 0.5) / LN_2
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= DIM1_KINK {
            return 0.5 + LN_2 * (x - DIM1_KINK);
        }
        // Solve inverse(y) = x; d/dy inverse = −1/ln y. Start from y ≈ x·ln(1/x).
        let mut lo = 0.0f64;
        let mut hi = 0.5f64;
        let mut y = (x * (-x.ln()).max(1.0)).clamp(f64::MIN_POSITIVE, 0.5);
        for _ in 0..100 {
            let f = self.inverse(y) - x;
            if f > 0.0 {
                hi = y;
            } else {
                lo = y;
            }
            if f.abs() <= 1e-15 * x {
                break;
            }
            let mut next = y + f * y.ln();
            if !(next > lo && next < hi) {
                next = if lo > 0.0 { 0.5 * (lo + hi) } else { 0.5 * hi.min(y) };
            }
            if (next - y).abs() <= 1e-16 * y {
                y = next;
                break;
            }
            y = next;
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Exponential integral E1 by series (u ≤ 1) or continued fraction.
    fn e1(u: f64) -> f64 {
        if u <= 1.0 {
            let mut sum = 0.0;
            let mut term = 1.0;
            for k in 1..60 {
                term *= -u / k as f64;
                sum -= term / k as f64;
            }
            -0.577_215_664_901_532_9 - u.ln() + sum
        } else {
            let tiny = 1e-300;
            let mut b = u + 1.0;
            let mut c = 1.0 / tiny;
            let mut d = 1.0 / b;
            let mut h = d;
            for i in 1..200 {
                let a = -((i * i) as f64);
                b += 2.0;
                d = 1.0 / (a * d + b);
                c = b + a / c;
                let del = c * d;
                h *= del;
                if (del - 1.0).abs() < 1e-16 {
                    break;
                }
            }
            h * (-u).exp()
        }
    }

    #[test]
    fn dim1_kink_value() {
        assert!((Dim1::log_integral(0.5) - DIM1_KINK).abs() < 1e-12);
        assert!((e1(LN_2) - DIM1_KINK).abs() < 1e-12);
    }

    #[test]
    fn dim1_matches_exponential_integral() {
        for &y in &[0.49, 0.3, 0.1, 1e-3, 1e-8, 1e-20, 1e-60, 1e-200] {
            let want = e1(-f64::ln(y));
            let got = Dim1::log_integral(y);
            assert!((got - want).abs() <= 1e-10 * want, "y={y}: {got} vs {want}");
        }
    }

    #[test]
    fn dim1_round_trip() {
        let g = Dim1;
        for &x in &[1e-60, 1e-30, 1e-9, 1e-3, 0.1, 0.3, 0.37, 0.5, 1.0, 3.0] {
            let y = g.eval(x);
            let back = g.inverse(y);
            assert!((back - x).abs() <= 1e-12 * x, "x={x}: y={y}, back={back}");
        }
        assert!((g.eval(DIM1_KINK) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ex3_tangent_point() {
        let x0 = Ex3::TANGENT_POINT;
        assert!((x0 - (-1.5f64).exp()).abs() < 1e-16);
        let v = (2.0f64 / 3.0).sqrt();
        assert!((Ex3::log_branch(x0) - v).abs() < 1e-14);
        assert!((Ex3::affine_branch(x0) - v).abs() < 1e-14);
    }

    #[test]
    fn ex3_small_value() {
        let g = Ex3::new(1e-4, 4.0);
        let want = (1.0 / 100f64.ln()).sqrt();
        assert!((g.eval(0.01) - want).abs() < 1e-15);
        assert!((g.eval(0.01) - 0.46600).abs() < 1e-4);
        assert!(Ex3::affine_branch(0.01) > Ex3::log_branch(0.01));
    }

    #[test]
    fn ex3_crossover_near_tangent() {
        let g = Ex3::new(1e-4, 4.0);
        let c = g.crossover.unwrap();
        assert!((c - Ex3::TANGENT_POINT).abs() < 2e-4, "{c}");
        // the branches agree at the crossover up to the scan step
        let gap = (Ex3::log_branch(c) - Ex3::affine_branch(c)).abs();
        assert!(gap < 1e-6, "{gap}");
    }

    #[test]
    fn ex4_pins_and_inverse() {
        let g = Ex4Instance::new(Ex4Instance::DEFAULT_S0).unwrap();
        assert!(g.sqrt_touch.len() >= 3);
        for &x in &g.sqrt_touch {
            assert!((g.eval(x) - x.sqrt()).abs() <= 1e-12 * x.sqrt());
        }
        for &y in &g.cbrt_touch {
            assert!((g.eval(y) - y.cbrt()).abs() <= 1e-12 * y.cbrt());
        }
        for i in 1..300 {
            let x = 10f64.powf(-(i as f64) / 10.0);
            let y = g.eval(x);
            let back = g.inverse(y);
            assert!((g.eval(back) - y).abs() <= 1e-12 * y, "x={x}");
        }
    }

    #[test]
    fn ex4_rejects_large_seed() {
        assert!(Ex4Instance::new(0.5).is_err());
    }
}
