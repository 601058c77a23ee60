//! Batch front-end. One command per invocation; every report embeds the
//! resolved configuration and seed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dimension::{assouad_bounds, hausdorff_exponent, nagata_cover, AssouadParams};
use crate::envelope::{bcp_constraints, bcp_default_step, load_constraints, nonlc_constraints, solve_envelope_exact, ConstraintSet};
use crate::gauge::{load_gauge, make_builtin, validate, BuiltinId, BuiltinParams, Gauge, GaugeError};
use crate::geometry::{
    ball_components, bcp_radius_ladder, bcp_violation, bilipschitz_check, geometric_ladder, lc_ratio, BcpError,
    BilipVerdict, LcVerdict, DEFAULT_K_MAX, DEFAULT_LAMBDA_MAX,
};
use crate::hexcert::{certify_contradiction, plan_instance, planted_cover, CertifyError, Color, Contradiction, Cover, PlanOverrides};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_PATHOLOGY: i32 = 2;
pub const EXIT_CONFIG: i32 = 64;
pub const EXIT_DOMAIN: i32 = 65;

const DEFAULT_NONLC_A: [f64; 3] = [8.0, 512.0, 134_217_728.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Envelope,
    Balls,
    Lc,
    Bcp,
    Bilip,
    Dims,
    Assouad,
    NagataCover,
    HexCertify,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Parser, Serialize, Deserialize)]
#[command(name = "homline", version, about = "Translation-invariant metrics on the line")]
#[serde(default)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON file with the same fields; flags given on the command line win.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Builtin id or gauge file.
    #[arg(long)]
    pub gauge: Option<String>,
    /// "bcp", "nonlc" or a constraint file.
    #[arg(long)]
    pub constraints: Option<String>,
    /// Truncation index N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Alignment step δ of an envelope family.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub xmax: Option<f64>,
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Exponent of the custom power gauge.
    #[arg(long)]
    pub exponent: Option<f64>,
    /// Sequence a_n of the non-LC family.
    #[arg(long, value_delimiter = ',')]
    pub a: Option<Vec<f64>>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Scale s of a Nagata cover.
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub d_ladder: Option<Vec<f64>>,
    /// Pair or test-set budget.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Cover file, or planted-white / planted-black.
    #[arg(long)]
    pub cover: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_ERROR,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn gauge_err(e: GaugeError) -> CliError {
    match e {
        GaugeError::Malformed(s) => CliError::Config(s),
        e => domain(e),
    }
}

impl RunConfig {
    /// Fields from `--config`, overridden by flags that were given.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut base: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let flags = serde_json::to_value(&self).expect("config serializes");
        if let (Some(b), Value::Object(f)) = (base.as_object_mut(), flags) {
            for (k, v) in f.into_iter().filter(|(_, v)| !v.is_null()) {
                b.insert(k, v);
            }
        } else {
            return Err(CliError::Config(format!("{}: expected a JSON object", path.display())));
        }
        let mut cfg: RunConfig = serde_json::from_value(base).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.config = Some(path);
        Ok(cfg)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn params(&self) -> BuiltinParams {
        BuiltinParams {
            exponent: self.exponent,
            n: self.n,
            step: self.step,
            a: self.a.clone(),
            grid_step: self.grid_step,
            x_max: self.xmax,
            ..Default::default()
        }
    }

    fn constraint_set(&self, src: &str) -> Result<ConstraintSet, CliError> {
        match src {
            "bcp" => {
                let n = self.n.unwrap_or(20);
                let step = match self.step {
                    Some(s) => s,
                    None => bcp_default_step(n).map_err(domain)?,
                };
                bcp_constraints(n, step).map_err(domain)
            }
            "nonlc" => {
                let a = self.a.clone().unwrap_or_else(|| DEFAULT_NONLC_A.to_vec());
                let n = self.n.unwrap_or(a.len() - 1);
                nonlc_constraints(&a, n, self.step.unwrap_or(1.0)).map_err(domain)
            }
            path => {
                if !Path::new(path).exists() {
                    return Err(CliError::Config(format!("no constraint family or file named {path}")));
                }
                load_constraints(Path::new(path)).map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }

    fn gauge(&self) -> Result<Gauge, CliError> {
        match (&self.gauge, &self.constraints) {
            (Some(src), _) => {
                if let Some(id) = BuiltinId::parse(src) {
                    make_builtin(id, &self.params()).map_err(gauge_err)
                } else if Path::new(src).exists() {
                    load_gauge(Path::new(src)).map_err(gauge_err)
                } else {
                    Err(CliError::Config(format!("no builtin or file named {src}")))
                }
            }
            (None, Some(src)) => {
                let c = self.constraint_set(src)?;
                let x_max = self.xmax.unwrap_or_else(|| c.max_a() * 2.0);
                Ok(solve_envelope_exact(&c, x_max, self.grid_step).map_err(domain)?.gauge)
            }
            (None, None) => Err(CliError::Config("need --gauge or --constraints".into())),
        }
    }
}

/// Plot-ready rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Table {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: impl IntoIterator<Item = impl ToString>) {
        self.rows.push(row.into_iter().map(|v| v.to_string()).collect());
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Command,
    pub verdict: String,
    pub exit_code: i32,
    pub seed: u64,
    pub config: RunConfig,
    pub result: Value,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub table: Table,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.report).expect("report serializes") + "\n",
            Format::Csv => {
                let mut s = String::new();
                let cfg = serde_json::to_string(&self.report.config).expect("config serializes");
                let _ = writeln!(s, "# command: {:?}; verdict: {}; seed: {}", self.report.command, self.report.verdict, self.report.seed);
                let _ = writeln!(s, "# config: {cfg}");
                let _ = writeln!(s, "{}", self.table.header.join(","));
                for r in &self.table.rows {
                    let _ = writeln!(s, "{}", r.join(","));
                }
                s
            }
        }
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

/// Dispatches one command.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let command = cfg.command.ok_or_else(|| CliError::Config("no command given".into()))?;
    let (verdict, exit_code, result, table): (String, i32, Value, Table) = match command {
        Command::Validate => {
            let g = cfg.gauge()?;
            let r = validate(&g, cfg.budget.unwrap_or(20_000));
            let mut t = Table::new(&["check", "pass"]);
            t.push(["positivity".to_string(), r.positivity.pass.to_string()]);
            t.push(["subadditivity".to_string(), r.subadditivity.pass.to_string()]);
            t.push(["continuity".to_string(), r.continuity_at_zero.pass.to_string()]);
            t.push(["separation".to_string(), r.separation.pass.to_string()]);
            t.push(["proper".to_string(), r.properness.pass.to_string()]);
            let pass = r.all_pass();
            (if pass { "all checks pass" } else { "not a proper metric gauge" }.into(), if pass { EXIT_PASS } else { EXIT_PATHOLOGY }, to_value(&r), t)
        }
        Command::Envelope => {
            let src = match (&cfg.constraints, cfg.gauge.as_deref()) {
                (Some(s), _) => s.clone(),
                (None, Some("bcp_envelope")) => "bcp".into(),
                (None, Some("nonlc_envelope")) => "nonlc".into(),
                _ => return Err(CliError::Config("envelope needs --constraints".into())),
            };
            let c = cfg.constraint_set(&src)?;
            let x_max = cfg.xmax.unwrap_or_else(|| if src == "nonlc" { c.max_a() } else { c.max_a() * 2.0 });
            let sol = solve_envelope_exact(&c, x_max, cfg.grid_step).map_err(domain)?;
            let n = cfg.samples.unwrap_or(1000).max(2);
            let mut t = Table::new(&["x", "d"]);
            for i in 0..=n {
                let x = x_max * i as f64 / n as f64;
                t.push([x, sol.gauge.value(x)]);
            }
            let result = json!({
                "constraints": sol.constraint_set.constraints(),
                "dropped": sol.constraint_set.dropped(),
                "step": sol.constraint_set.step(),
                "x_max": x_max,
                "cones": sol.gauge.cones().map_or(0, |e| e.len()),
                "stats": sol.stats,
                "monotone": sol.gauge.is_monotone(),
            });
            ("solved".into(), EXIT_PASS, result, t)
        }
        Command::Balls => {
            let g = cfg.gauge()?;
            let radii = cfg.radii.clone().unwrap_or_else(|| (3..=10).map(|n| 1.0 / (n + 1) as f64).collect());
            let mut t = Table::new(&["radius", "lo", "hi"]);
            let mut balls = Vec::new();
            for &r in &radii {
                if !(r > 0.0) {
                    return Err(domain(format!("radius must be positive, got {r}")));
                }
                let b = ball_components(&g, r, true);
                for &(lo, hi) in &b.components {
                    t.push([r, lo, hi]);
                }
                balls.push(b);
            }
            let split = balls.iter().filter(|b| b.components.len() > 1).count();
            let verdict = format!("{split} of {} balls disconnected", balls.len());
            (verdict, if split > 0 { EXIT_PATHOLOGY } else { EXIT_PASS }, to_value(&balls), t)
        }
        Command::Lc => {
            let g = cfg.gauge()?;
            let lo = cfg.r_min.unwrap_or_else(|| g.grid_step().min(g.x_max() / 10.0));
            let mut ladder = geometric_ladder(lo, g.x_max(), cfg.samples.unwrap_or(64).max(2));
            ladder.extend(g.anchors().iter().copied().filter(|&a| a > 0.0 && a <= g.x_max()));
            let r = lc_ratio(&g, &ladder, DEFAULT_LAMBDA_MAX);
            let mut t = Table::new(&["t", "running_max", "argmax", "value", "ratio"]);
            for s in &r.samples {
                t.push([s.t, s.running_max, s.argmax, s.value, s.ratio]);
            }
            let (verdict, code) = match &r.verdict {
                LcVerdict::Bounded { lambda } => (format!("linearly connected, λ ≈ {lambda}"), EXIT_PASS),
                LcVerdict::Diverging { .. } => (format!("not linearly connected, ratio {}", r.sup_estimate), EXIT_PATHOLOGY),
                LcVerdict::Inconclusive { sup } => (format!("ratio {sup} does not settle"), EXIT_PATHOLOGY),
            };
            (verdict, code, to_value(&r), t)
        }
        Command::Bcp => {
            let g = cfg.gauge()?;
            let depth = cfg.depth.unwrap_or(10);
            let radii = cfg.radii.clone().unwrap_or_else(|| bcp_radius_ladder(cfg.n.unwrap_or(20)));
            let mut t = Table::new(&["center", "radius"]);
            match bcp_violation(&g, depth, &radii) {
                Ok(cert) => {
                    for &(x, r) in &cert.balls {
                        t.push([x, r]);
                    }
                    let checks = cert.membership.len() + cert.non_membership.len();
                    let ok = cert.all_pass();
                    let verdict = format!("depth {} family, {checks} checks, all pass: {ok}", cert.depth);
                    (verdict, if ok { EXIT_PATHOLOGY } else { EXIT_ERROR }, to_value(&cert), t)
                }
                Err(e @ (BcpError::InsufficientBalls { .. } | BcpError::NoDisconnectedBalls)) => {
                    (e.to_string(), EXIT_PASS, json!({ "found": false, "reason": e.to_string(), "detail": format!("{e:?}") }), t)
                }
            }
        }
        Command::Bilip => {
            let g = cfg.gauge()?;
            let lo = cfg.r_min.unwrap_or(1e-12).min(g.x_max() / 2.0);
            let hi = cfg.r_max.unwrap_or(g.x_max()).min(g.x_max());
            let r = bilipschitz_check(&g, &geometric_ladder(lo, hi, cfg.samples.unwrap_or(60).max(2)), DEFAULT_K_MAX);
            let mut t = Table::new(&["x", "ratio"]);
            for &(x, q) in &r.samples {
                t.push([x, q]);
            }
            let (verdict, code) = match r.verdict {
                BilipVerdict::Bounded { k_hat } => (format!("biLipschitz to euclidean, K ≈ {k_hat}"), EXIT_PASS),
                BilipVerdict::Unbounded { .. } => ("not biLipschitz to euclidean".to_string(), EXIT_PATHOLOGY),
            };
            (verdict, code, to_value(&r), t)
        }
        Command::Dims => {
            let g = cfg.gauge()?;
            let r = hausdorff_exponent(&g, cfg.r_min.unwrap_or(1e-3), cfg.r_max.unwrap_or(0.5), cfg.samples.unwrap_or(32))
                .map_err(domain)?;
            let mut t = Table::new(&["r", "measure", "local_exponent", "density_exponent"]);
            for s in &r.samples {
                let local = s.local_exponent.map_or(String::new(), |v| v.to_string());
                t.push([s.r.to_string(), s.measure.to_string(), local, s.density_exponent.to_string()]);
            }
            let verdict = format!("exponents {} to {}, divergence {}", r.limsup_exponent, r.liminf_exponent, r.divergence_flag);
            (verdict, if r.divergence_flag { EXIT_PATHOLOGY } else { EXIT_PASS }, to_value(&r), t)
        }
        Command::Assouad => {
            let g = cfg.gauge()?;
            let mut p = AssouadParams::default();
            if let Some(b) = &cfg.betas {
                p.betas = b.clone();
            }
            if let Some(e) = &cfg.eps {
                p.eps_ladder = e.clone();
            }
            if let Some(d) = &cfg.d_ladder {
                p.d_ladder = d.clone();
            }
            p.r_min = cfg.r_min.unwrap_or(p.r_min);
            p.r_max = cfg.r_max.unwrap_or(p.r_max);
            p.n_samples = cfg.samples.unwrap_or(p.n_samples);
            let r = assouad_bounds(&g, &p).map_err(domain)?;
            let mut t = Table::new(&["beta", "ok", "max_ratio", "eps", "D", "growing"]);
            for u in &r.upper {
                t.push([u.beta.to_string(), u.ok.to_string(), u.max_ratio.to_string(), u.argmax.0.to_string(), u.argmax.1.to_string(), u.growing.to_string()]);
            }
            let ok: Vec<String> = r.upper.iter().filter(|u| u.ok).map(|u| u.beta.to_string()).collect();
            let verdict = format!("lower {}, upper holds for β in [{}]", r.lower, ok.join(", "));
            (verdict, EXIT_PASS, json!({ "params": p, "report": r }), t)
        }
        Command::NagataCover => {
            let g = cfg.gauge()?;
            let s = cfg.scale.ok_or_else(|| CliError::Config("nagata-cover needs --scale".into()))?;
            let cover = nagata_cover(&g, s, cfg.budget.unwrap_or(10_000), cfg.seed()).map_err(domain)?;
            let mut t = Table::new(&["tile", "lo", "hi", "family"]);
            if cover.tile_count <= 100_000 {
                for k in 0..cover.tile_count {
                    let (a, b) = cover.tile(k);
                    t.push([k.to_string(), a.to_string(), b.to_string(), (k % 2).to_string()]);
                }
            }
            let valid = cover.is_valid();
            let verdict = format!("multiplicity {}, c {}, separation {}", cover.multiplicity_achieved, cover.c_achieved, cover.separation_achieved);
            (verdict, if valid { EXIT_PASS } else { EXIT_PATHOLOGY }, to_value(&cover), t)
        }
        Command::HexCertify => {
            let g = cfg.gauge()?;
            let ov = PlanOverrides { m: cfg.m, k: cfg.k, l: cfg.l };
            let c = cfg.c.unwrap_or(3.0);
            let mut t = Table::new(&["i", "j", "image"]);
            match plan_instance(&g, c, ov) {
                Err(e @ CertifyError::NotApplicable { .. }) => {
                    ("not applicable".into(), EXIT_PASS, json!({ "applicable": false, "reason": e.to_string() }), t)
                }
                Err(e) => return Err(domain(e)),
                Ok(plan) => {
                    let cover = match cfg.cover.as_deref().unwrap_or("planted-white") {
                        "planted-white" => planted_cover(&plan, Color::White),
                        "planted-black" => planted_cover(&plan, Color::Black),
                        path => Cover::load(Path::new(path)).map_err(CliError::Config)?,
                    };
                    let cert = certify_contradiction(&g, &plan, &cover).map_err(domain)?;
                    let check = cert.verify(&g, &cover);
                    for &cell in &cert.chain.chain {
                        t.push([cell.0.to_string(), cell.1.to_string(), plan.grid.image(cell).to_string()]);
                    }
                    let branch = match cert.contradiction {
                        Contradiction::BlackDiameter { distance, .. } => format!("black element of diameter ≥ {distance}"),
                        Contradiction::WhiteFarPair { distance, .. } => format!("white element with a pair at distance {distance}"),
                    };
                    let ok = check.all_pass();
                    let verdict = format!("{branch}; reverified: {ok}");
                    let result = json!({ "applicable": true, "certificate": cert, "verification": check });
                    (verdict, if ok { EXIT_PATHOLOGY } else { EXIT_ERROR }, result, t)
                }
            }
        }
    };
    let report = Report { command, verdict, exit_code, seed: cfg.seed(), config: cfg.clone(), result };
    Ok(Outcome { report, table })
}

/// Parses, runs and writes the report; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_CONFIG,
            };
        }
    };
    let result = cfg.resolve().and_then(|cfg| {
        let out = run(&cfg)?;
        let text = out.render(cfg.format.unwrap_or_default());
        match &cfg.out {
            Some(p) => std::fs::write(p, &text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
            None => print!("{text}"),
        }
        log::info!("{}", out.report.verdict);
        Ok(out.report.exit_code)
    });
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("homline").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn validate_euclidean() {
        let o = run(&cfg(&["validate", "--gauge", "euclidean"])).unwrap();
        assert_eq!(o.report.exit_code, EXIT_PASS);
        assert_eq!(o.report.result["subadditivity"]["pass"], Value::Bool(true));
    }

    #[test]
    fn dims_ex3_is_pathological() {
        let o = run(&cfg(&["dims", "--gauge", "ex3"])).unwrap();
        assert_eq!(o.report.exit_code, EXIT_PATHOLOGY);
        assert_eq!(o.report.result["divergence_flag"], Value::Bool(true));
    }

    #[test]
    fn errors_map_to_codes() {
        assert_eq!(run(&cfg(&["validate"])).unwrap_err().exit_code(), EXIT_CONFIG);
        assert_eq!(run(&cfg(&["validate", "--gauge", "nope"])).unwrap_err().exit_code(), EXIT_CONFIG);
        let e = run(&cfg(&["dims", "--gauge", "euclidean", "--r-min", "0.5", "--r-max", "0.1"])).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_DOMAIN);
        assert_eq!(main_with_args(["homline", "frobnicate"]), EXIT_CONFIG);
    }

    #[test]
    fn csv_embeds_config() {
        let o = run(&cfg(&["envelope", "--constraints", "bcp", "--n", "2", "--samples", "4", "--seed", "7"])).unwrap();
        let s = o.render(Format::Csv);
        assert!(s.lines().nth(1).unwrap().contains("\"constraints\":\"bcp\""));
        assert_eq!(s.lines().nth(2), Some("x,d"));
        assert_eq!(s.lines().count(), 3 + 5);
        assert_eq!(o.report.seed, 7);
    }

    #[test]
    fn config_file_and_override() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.json");
        std::fs::write(&p, r#"{"command": "dims", "gauge": "euclidean", "samples": 16}"#).unwrap();
        let c = cfg(&["--config", p.to_str().unwrap(), "--samples", "12"]).resolve().unwrap();
        assert_eq!(c.command, Some(Command::Dims));
        assert_eq!(c.samples, Some(12));
        let o = run(&c).unwrap();
        assert_eq!(o.report.result["samples"].as_array().unwrap().len(), 12);
        std::fs::write(&p, "{not json").unwrap();
        let e = cfg(&["--config", p.to_str().unwrap()]).resolve().unwrap_err();
        assert_eq!(e.exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn hex_certify_euclidean_not_applicable() {
        let o = run(&cfg(&["hex-certify", "--gauge", "euclidean"])).unwrap();
        assert_eq!(o.report.exit_code, EXIT_PASS);
        assert_eq!(o.report.verdict, "not applicable");
    }
}
