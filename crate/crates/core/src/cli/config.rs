use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SweepPlan;
use crate::matstab::{DEFAULT_SEED, TOL_A};
use crate::operators::Order;
use crate::stepping::{DissipationMode, SchemeCase, SchemeConfig};

pub const SEED_VAR: &str = "WAVESTAB_SEED";

/// Comma-separated numbers. `a,b,...,z` expands to the arithmetic
/// progression with step `b - a` that ends at `z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "Vec<f64>")]
pub struct NumList(pub Vec<f64>);

impl From<NumList> for Vec<f64> {
    fn from(l: NumList) -> Self {
        l.0
    }
}

impl fmt::Display for NumList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

impl FromStr for NumList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|_| format!("{p:?} is not a number"));
        if let Some(pos) = parts.iter().position(|p| *p == "...") {
            if pos < 2 || pos + 2 != parts.len() {
                return Err(format!("{s:?}: an ellipsis needs two leading values and one final value"));
            }
            let mut out: Vec<f64> = parts[..pos].iter().map(|p| num(p)).collect::<std::result::Result<_, _>>()?;
            let (a, b) = (out[pos - 2], out[pos - 1]);
            let end = num(parts[pos + 1])?;
            let step = b - a;
            if !(step != 0.0) || (end - b) / step < 0.0 {
                return Err(format!("{s:?}: the progression does not reach {end}"));
            }
            let n = ((end - b) / step + 1e-9).floor() as usize;
            for i in 1..=n {
                out.push(round12(b + i as f64 * step));
            }
            if (out[out.len() - 1] - end).abs() > 1e-9 * step.abs() {
                out.push(end);
            }
            return Ok(NumList(out));
        }
        if parts.is_empty() {
            return Err("empty list".into());
        }
        Ok(NumList(parts.into_iter().map(num).collect::<std::result::Result<_, _>>()?))
    }
}

impl<'de> Deserialize<'de> for NumList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(f64),
            Many(Vec<f64>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::One(v) => Ok(NumList(vec![v])),
            Raw::Many(v) => Ok(NumList(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Every option any subcommand reads. Values from `--config` take precedence
/// over flags; unset values fall back to the per-subcommand defaults.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// JSON file whose entries override the flags
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Scheme name: EME2, EME4, IME2, IME4, SPIE2 or SPIE4
    #[arg(long)]
    pub scheme: Option<String>,
    /// Order of accuracy (2 or 4) where no scheme is given
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub alpha2: Option<NumList>,
    #[arg(long)]
    pub alpha4: Option<NumList>,
    /// Dissipation scale(s) in [0, 1]; accepts `0,0.1,...,1`
    #[arg(long)]
    pub gamma: Option<NumList>,
    /// Number of dissipation corrections
    #[arg(long = "nu", alias = "n-u")]
    pub n_u: Option<u32>,
    /// Safety factor of the dissipation coefficient
    #[arg(long)]
    pub sf: Option<f64>,
    #[arg(long)]
    pub cfl: Option<f64>,
    /// none, pc or monolithic
    #[arg(long)]
    pub dissipation: Option<String>,
    /// Grid ratio h_L / h_R
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub delta_min: Option<f64>,
    #[arg(long)]
    pub delta_max: Option<f64>,
    #[arg(long)]
    pub n_delta: Option<usize>,
    /// Intervals on the right grid
    #[arg(long)]
    pub nr: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Standing-mode number for convergence runs
    #[arg(long)]
    pub mode: Option<u32>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// CFL number for the symbol and GKS probes
    #[arg(long)]
    pub lambda: Option<f64>,
    /// plain, monolithic or pc (symbol surface)
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub nu_p: Option<f64>,
    #[arg(long)]
    pub n_theta: Option<usize>,
    #[arg(long)]
    pub n_z: Option<usize>,
    #[arg(long)]
    pub z_min: Option<f64>,
    #[arg(long)]
    pub z_max: Option<f64>,
    #[arg(long)]
    pub tol_a: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps (default: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output CSV; a JSON sidecar is written next to it
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

fn bad<T>(msg: String) -> Result<T> {
    Err(Error::InvalidArgument(msg))
}

impl RunConfig {
    /// Applies the `--config` file, if any, over the flags.
    pub fn resolve(self) -> Result<RunConfig> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
        Self::overlay(self, &text)
    }

    pub fn overlay(flags: RunConfig, json: &str) -> Result<RunConfig> {
        let file: serde_json::Value = serde_json::from_str(json)?;
        let serde_json::Value::Object(file) = file else {
            return bad("config file must hold a JSON object".into());
        };
        let config = flags.config.clone();
        let mut merged = match serde_json::to_value(&flags)? {
            serde_json::Value::Object(m) => m,
            _ => unreachable!("RunConfig serializes to an object"),
        };
        for (k, v) in file {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
        let mut out: RunConfig = serde_json::from_value(serde_json::Value::Object(merged))?;
        out.config = config;
        Ok(out)
    }

    /// Flag or file value, then `WAVESTAB_SEED`, then the built-in seed.
    pub fn seed(&self) -> Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_VAR) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("{SEED_VAR}={v:?} is not an unsigned integer"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }

    pub fn single(list: &Option<NumList>, name: &str) -> Result<Option<f64>> {
        match list {
            None => Ok(None),
            Some(NumList(v)) if v.len() == 1 => Ok(Some(v[0])),
            Some(_) => bad(format!("--{name} takes a single value here")),
        }
    }

    pub fn order(&self) -> Result<Order> {
        match (&self.scheme, self.p) {
            (Some(s), p) => {
                let (_, o) = SchemeCase::parse(s)?;
                if p.is_some_and(|p| p != o.p()) {
                    return bad(format!("--p {} disagrees with scheme {s}", p.unwrap()));
                }
                Ok(o)
            }
            (None, Some(p)) => Order::from_p(p),
            (None, None) => Ok(Order::Two),
        }
    }

    /// Scheme configuration from the named case with every given override.
    pub fn scheme_config(&self) -> Result<SchemeConfig> {
        let name = self.scheme.as_deref().ok_or_else(|| Error::InvalidArgument("--scheme is required".into()))?;
        let (case, order) = SchemeCase::parse(name)?;
        self.order()?;
        let mut c = SchemeConfig::new(case, order);
        if let Some(a) = Self::single(&self.alpha2, "alpha2")? {
            c.alpha2 = a;
        }
        if let Some(a) = Self::single(&self.alpha4, "alpha4")? {
            c.alpha4 = a;
        }
        if let Some(g) = Self::single(&self.gamma, "gamma")? {
            c.gamma = g;
        }
        if let Some(n) = self.n_u {
            c.n_u = n;
        }
        if let Some(s) = self.sf {
            c.s_f = s;
        }
        if let Some(l) = self.cfl {
            c.cfl = l;
        }
        if let Some(d) = &self.dissipation {
            c.dissipation = match d.to_ascii_lowercase().as_str() {
                "none" => DissipationMode::None,
                "pc" => DissipationMode::PredictorCorrector,
                "monolithic" => DissipationMode::Monolithic,
                other => return bad(format!("unknown dissipation {other:?}; use none, pc or monolithic")),
            };
        }
        c.validate()?;
        Ok(c)
    }

    pub fn sweep_plan(&self) -> Result<SweepPlan> {
        let std = SweepPlan::standard();
        SweepPlan::new(
            self.delta_min.unwrap_or(std.delta_min),
            self.delta_max.unwrap_or(std.delta_max),
            self.n_delta.unwrap_or(std.n_delta),
            self.gamma.clone().map(|l| l.0).unwrap_or(std.gamma_values),
        )
    }

    pub fn tol_a(&self) -> f64 {
        self.tol_a.unwrap_or(TOL_A)
    }

    pub fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_with_ellipsis() {
        let l: NumList = "0,0.1,...,1".parse().unwrap();
        assert_eq!(l.0, vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]);
        let l: NumList = "1, 2, 3".parse().unwrap();
        assert_eq!(l.0, vec![1.0, 2.0, 3.0]);
        let l: NumList = "0,0.3,...,1".parse().unwrap();
        assert_eq!(l.0, vec![0.0, 0.3, 0.6, 0.9, 1.0]);
        assert!("0,...,1".parse::<NumList>().is_err());
        assert!("0,0.1,...,-1".parse::<NumList>().is_err());
        assert!("a,b".parse::<NumList>().is_err());
    }

    #[test]
    fn file_values_override_flags() {
        let flags = RunConfig {
            scheme: Some("EME2".into()),
            cfl: Some(0.5),
            nr: Some(10),
            ..Default::default()
        };
        let m = RunConfig::overlay(flags, r#"{"cfl": 0.7, "gamma": "0,0.5,...,1", "alpha2": 0.3}"#).unwrap();
        assert_eq!(m.cfl, Some(0.7));
        assert_eq!(m.nr, Some(10));
        assert_eq!(m.scheme.as_deref(), Some("EME2"));
        assert_eq!(m.gamma.unwrap().0, vec![0.0, 0.5, 1.0]);
        assert_eq!(m.alpha2.unwrap().0, vec![0.3]);
        assert!(RunConfig::overlay(RunConfig::default(), r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn scheme_overrides_and_validation() {
        let r = RunConfig {
            scheme: Some("IME4".into()),
            n_u: Some(3),
            sf: Some(0.5),
            ..Default::default()
        };
        let c = r.scheme_config().unwrap();
        assert_eq!((c.n_u, c.s_f, c.cfl), (3, 0.5, 5.0));
        let bad = RunConfig {
            scheme: Some("IME4".into()),
            gamma: Some(NumList(vec![2.0])),
            ..Default::default()
        };
        assert!(bad.scheme_config().unwrap_err().is_validation());
        let clash = RunConfig {
            scheme: Some("IME4".into()),
            p: Some(2),
            ..Default::default()
        };
        assert!(clash.order().is_err());
    }
}
