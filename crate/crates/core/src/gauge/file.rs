use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{make_builtin, BuiltinId, BuiltinParams, Gauge, GaugeError};

/// On-disk gauge description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeFile {
    ClosedFormBuiltin {
        builtin_id: String,
        #[serde(default)]
        params: BuiltinParams,
        grid_step: Option<f64>,
        x_max: Option<f64>,
    },
    EnvelopeResult {
        builtin_id: String,
        #[serde(default)]
        params: BuiltinParams,
        grid_step: Option<f64>,
        x_max: Option<f64>,
    },
    SampledTable {
        step: f64,
        values: Vec<f64>,
    },
}

impl GaugeFile {
    pub fn build(&self) -> Result<Gauge, GaugeError> {
        match self {
            GaugeFile::SampledTable { step, values } => Gauge::from_samples(*step, values.clone()),
            GaugeFile::ClosedFormBuiltin { builtin_id, params, grid_step, x_max }
            | GaugeFile::EnvelopeResult { builtin_id, params, grid_step, x_max } => {
                let id = BuiltinId::parse(builtin_id)
                    .ok_or_else(|| GaugeError::InvalidParams(format!("unknown builtin_id {builtin_id:?}")))?;
                let mut p = params.clone();
                p.grid_step = grid_step.or(p.grid_step);
                p.x_max = x_max.or(p.x_max);
                make_builtin(id, &p)
            }
        }
    }
}

pub fn load_gauge(path: &Path) -> Result<Gauge, GaugeError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GaugeError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    let spec: GaugeFile =
        serde_json::from_str(&text).map_err(|e| GaugeError::Malformed(format!("{}: {e}", path.display())))?;
    spec.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_layouts() {
        let a: GaugeFile =
            serde_json::from_str(r#"{"kind":"closed_form_builtin","builtin_id":"sqrt","params":{},"grid_step":0.001,"x_max":2}"#)
                .unwrap();
        let g = a.build().unwrap();
        assert_eq!(g.x_max(), 2.0);
        assert_eq!(g.eval(0.25).unwrap(), 0.5);
        let b: GaugeFile = serde_json::from_str(r#"{"kind":"sampled_table","step":0.5,"values":[0,0.5,1]}"#).unwrap();
        assert_eq!(b.build().unwrap().eval(0.75).unwrap(), 0.75);
    }

    #[test]
    fn unknown_builtin() {
        let a: GaugeFile = serde_json::from_str(r#"{"kind":"closed_form_builtin","builtin_id":"cosh"}"#).unwrap();
        assert!(a.build().is_err());
    }
}
