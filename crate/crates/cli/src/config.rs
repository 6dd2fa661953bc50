//! Run configuration: file contents merged with flags and environment, then
//! validated before any computation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cavqed_core::circuits::{CostModel, DEFAULT_FAULT_FACTOR};
use cavqed_core::dynamics::{IntegratorConfig, DEFAULT_LEAKAGE_TOL};
use cavqed_core::model::PhysicalParams;
use cavqed_core::protocol::EngineMode;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Table,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Effective,
    Full,
    Decay,
}

impl From<Mode> for EngineMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Effective => EngineMode::Effective,
            Mode::Full => EngineMode::Full,
            Mode::Decay => EngineMode::FullWithDecay,
        }
    }
}

/// Inclusive register-size range, written `10`, `3..12` or `3..=12`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NRange {
    pub start: usize,
    pub end: usize,
}

impl NRange {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl Default for NRange {
    fn default() -> Self {
        NRange { start: 10, end: 10 }
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad register size {x:?}: {e}"));
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(NRange { start, end })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

impl<'de> Deserialize<'de> for NRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Spec {
            One(usize),
            Range(String),
        }
        match Spec::deserialize(d)? {
            Spec::One(n) => Ok(NRange { start: n, end: n }),
            Spec::Range(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsSection {
    pub omega_c: Option<f64>,
    pub delta: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma: Option<f64>,
    pub nu_k: Option<f64>,
    pub omega_e: Option<f64>,
    pub omega_g: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub dt: Option<f64>,
    pub leakage_tol: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CostSection {
    pub n: Option<NRange>,
    pub fault_factor: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FidelitySection {
    /// (gamma, kappa) points.
    pub grid: Option<Vec<[f64; 2]>>,
}

/// Contents of a `--config` file (TOML, or JSON by `.json` extension).
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub mode: Option<Mode>,
    /// Highest cavity photon number kept.
    pub n_max: Option<usize>,
    pub dump_states: Option<bool>,
    pub params: ParamsSection,
    pub integrator: IntegratorSection,
    pub cost: CostSection,
    pub fidelity: FidelitySection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        }
    }
}

/// Values given on the command line or through `CAVQED_*` variables.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub mode: Option<Mode>,
    pub omega_c: Option<f64>,
    pub delta: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma: Option<f64>,
    pub dt: Option<f64>,
    pub leakage_tol: Option<f64>,
    pub n_max: Option<usize>,
    pub dump_states: bool,
    pub n: Option<NRange>,
    pub fault_factor: Option<u64>,
}

pub const DEFAULT_DELTA: f64 = 10.0;
pub const DEFAULT_N_MAX: usize = 2;

/// Fully resolved and validated settings.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub mode: Mode,
    pub params: PhysicalParams,
    pub integrator: IntegratorConfig,
    pub n_max: usize,
    pub dump_states: bool,
    pub n_range: NRange,
    pub fault_factor: u64,
    pub grid: Option<Vec<(f64, f64)>>,
}

impl Settings {
    /// Flags win over the file, the file over built-in defaults.
    pub fn resolve(file: RunConfig, flags: Overrides) -> Result<Self> {
        let p = &file.params;
        let mut params = PhysicalParams::new(
            flags.delta.or(p.delta).unwrap_or(DEFAULT_DELTA),
            flags.kappa.or(p.kappa).unwrap_or(0.0),
            flags.gamma.or(p.gamma).unwrap_or(0.0),
        );
        params.omega_c = flags.omega_c.or(p.omega_c).unwrap_or(1.0);
        params.nu_k = p.nu_k;
        params.omega_e = p.omega_e;
        params.omega_g = p.omega_g;
        params.validate()?;

        let mut integrator = IntegratorConfig::for_params(&params);
        if let Some(dt) = flags.dt.or(file.integrator.dt) {
            integrator.dt = Some(dt);
        }
        integrator.leakage_tol = flags.leakage_tol.or(file.integrator.leakage_tol).unwrap_or(DEFAULT_LEAKAGE_TOL);
        integrator.validate()?;

        let n_range = flags.n.or(file.cost.n).unwrap_or_default();
        let fault_factor = flags.fault_factor.or(file.cost.fault_factor).unwrap_or(DEFAULT_FAULT_FACTOR);
        CostModel::new(n_range.start, fault_factor)?;

        let grid = match file.fidelity.grid {
            Some(g) if g.is_empty() => return Err(CliError::Config("fidelity grid is empty".into())),
            Some(g) => {
                for [gamma, kappa] in &g {
                    PhysicalParams::new(params.delta, *kappa, *gamma).validate()?;
                }
                Some(g.into_iter().map(|[gamma, kappa]| (gamma, kappa)).collect())
            }
            None => None,
        };

        Ok(Settings {
            format: flags.format.or(file.format).unwrap_or_default(),
            out: flags.out.or(file.out),
            mode: flags.mode.or(file.mode).unwrap_or_default(),
            params,
            integrator,
            n_max: flags.n_max.or(file.n_max).unwrap_or(DEFAULT_N_MAX),
            dump_states: flags.dump_states || file.dump_states.unwrap_or(false),
            n_range,
            fault_factor,
            grid,
        })
    }

    pub fn engine_mode(&self) -> EngineMode {
        self.mode.into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!("10".parse::<NRange>().unwrap(), NRange { start: 10, end: 10 });
        assert_eq!("3..12".parse::<NRange>().unwrap(), NRange { start: 3, end: 12 });
        assert_eq!("3..=12".parse::<NRange>().unwrap(), NRange { start: 3, end: 12 });
        assert!("12..3".parse::<NRange>().is_err());
        assert!("x".parse::<NRange>().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = toml::from_str::<RunConfig>("[params]\ndelta = 10\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"));
        assert!(serde_json::from_str::<RunConfig>(r#"{"speed": 3}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: RunConfig = toml::from_str("mode = \"full\"\n[params]\ndelta = 30\nkappa = 0.1\n").unwrap();
        let s = Settings::resolve(file, Overrides { delta: Some(50.0), ..Default::default() }).unwrap();
        assert_eq!(s.params.delta, 50.0);
        assert_eq!(s.params.kappa, 0.1);
        assert_eq!(s.mode, Mode::Full);
    }

    #[test]
    fn invalid_values_fail_before_running() {
        let bad = |o: Overrides| Settings::resolve(RunConfig::default(), o).unwrap_err().exit_code();
        assert_eq!(bad(Overrides { gamma: Some(-1.0), ..Default::default() }), 2);
        assert_eq!(bad(Overrides { n: Some(NRange { start: 1, end: 4 }), ..Default::default() }), 2);
        assert_eq!(bad(Overrides { dt: Some(0.0), ..Default::default() }), 2);
        let empty: RunConfig = toml::from_str("[fidelity]\ngrid = []\n").unwrap();
        assert_eq!(Settings::resolve(empty, Overrides::default()).unwrap_err().exit_code(), 2);
    }
}
