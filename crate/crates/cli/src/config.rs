//! JSON run configuration for `netepi simulate`.

use std::path::PathBuf;

use netepi::dynamics::{InitialInfected, RateParams};
use netepi::graph::GraphModel;
use netepi::interventions::InterventionSpec;
use netepi::ode::DEFAULT_DT;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Json(#[from] serde_path_to_error::Error<serde_json::Error>),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErBlock {
    pub n: usize,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WsBlock {
    pub n: usize,
    pub k: usize,
    pub p_rewire: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaBlock {
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeListBlock {
    pub path: PathBuf,
    #[serde(default)]
    pub compact_ids: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WellMixedBlock {
    pub n: usize,
    pub k_avg: f64,
}

/// Exactly one of the keys must be present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub er: Option<ErBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ws: Option<WsBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ba: Option<BaBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_list: Option<EdgeListBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub well_mixed: Option<WellMixedBlock>,
}

/// The selected contact structure.
#[derive(Debug, Clone, PartialEq)]
pub enum Network {
    Generated { model: GraphModel, seed: u64 },
    EdgeList(EdgeListBlock),
    WellMixed(WellMixedBlock),
}

impl NetworkBlock {
    fn present(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        if self.er.is_some() {
            keys.push("er");
        }
        if self.ws.is_some() {
            keys.push("ws");
        }
        if self.ba.is_some() {
            keys.push("ba");
        }
        if self.edge_list.is_some() {
            keys.push("edge_list");
        }
        if self.well_mixed.is_some() {
            keys.push("well_mixed");
        }
        keys
    }

    fn fill_seed(&mut self, seed: u64) {
        if let Some(b) = &mut self.er {
            b.seed.get_or_insert(seed);
        }
        if let Some(b) = &mut self.ws {
            b.seed.get_or_insert(seed);
        }
        if let Some(b) = &mut self.ba {
            b.seed.get_or_insert(seed);
        }
    }

    pub fn resolve(&self) -> Result<Network, ConfigError> {
        match self.present().as_slice() {
            [] => {
                return Err(invalid(
                    "network: no source given; use one of er, ws, ba, edge_list, well_mixed",
                ))
            }
            [_] => {}
            keys => {
                return Err(invalid(format!(
                    "network: conflicting sources {}; give exactly one",
                    keys.join(", ")
                )))
            }
        }
        let generated = |model: GraphModel, seed: Option<u64>| -> Result<Network, ConfigError> {
            model.validate().map_err(|e| invalid(format!("network: {e}")))?;
            Ok(Network::Generated {
                model,
                seed: seed.expect("seed filled during resolution"),
            })
        };
        if let Some(b) = self.er {
            return generated(GraphModel::Er { n: b.n, p: b.p }, b.seed);
        }
        if let Some(b) = self.ws {
            return generated(
                GraphModel::Ws {
                    n: b.n,
                    k: b.k,
                    p_rewire: b.p_rewire,
                },
                b.seed,
            );
        }
        if let Some(b) = self.ba {
            return generated(GraphModel::Ba { n: b.n, m: b.m }, b.seed);
        }
        if let Some(b) = &self.edge_list {
            return Ok(Network::EdgeList(b.clone()));
        }
        let b = self.well_mixed.expect("one source present");
        if b.n == 0 || !(b.k_avg >= 0.0) || !b.k_avg.is_finite() {
            return Err(invalid("network.well_mixed: need n > 0 and finite k_avg >= 0"));
        }
        Ok(Network::WellMixed(b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    pub seed: u64,
}

impl InitBlock {
    pub fn initial(&self) -> Result<InitialInfected, ConfigError> {
        match (self.fraction, self.count) {
            (Some(f), None) => Ok(InitialInfected::Fraction(f)),
            (None, Some(c)) => Ok(InitialInfected::Count(c)),
            (None, None) => Err(invalid("init: give either `fraction` or `count`")),
            (Some(_), Some(_)) => Err(invalid("init: `fraction` and `count` are mutually exclusive")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    #[default]
    Gillespie,
    Abm,
    Ode,
}

fn default_trajectory() -> PathBuf {
    PathBuf::from("trajectory.csv")
}

fn default_summary() -> PathBuf {
    PathBuf::from("summary.json")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default = "default_trajectory")]
    pub trajectory: PathBuf,
    #[serde(default = "default_summary")]
    pub summary: PathBuf,
}

impl Default for OutputPaths {
    fn default() -> Self {
        Self {
            trajectory: default_trajectory(),
            summary: default_summary(),
        }
    }
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub network: NetworkBlock,
    pub rates: RateParams,
    pub init: InitBlock,
    pub t_max: f64,
    #[serde(default)]
    pub interventions: Vec<InterventionSpec>,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default)]
    pub engine: EngineKind,
    /// Integration step of the ODE engine.
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Gillespie engine: record every n-th event.
    #[serde(default = "default_stride")]
    pub record_stride: usize,
}

/// Parses and validates a run configuration. `seed` replaces `init.seed`
/// before defaults are resolved; generator seeds default to `init.seed`.
pub fn parse_config_with_seed(text: &str, seed: Option<u64>) -> Result<RunConfig, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let mut cfg: RunConfig = serde_path_to_error::deserialize(&mut de)?;
    de.end().map_err(|e| invalid(format!("trailing input: {e}")))?;
    if let Some(seed) = seed {
        cfg.init.seed = seed;
    }
    cfg.network.fill_seed(cfg.init.seed);
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with_seed(text, None)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let network = self.network.resolve()?;
        self.rates.validate().map_err(|e| invalid(format!("rates: {e}")))?;
        self.init.initial()?;
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(invalid(format!("t_max: {} must be finite and > 0", self.t_max)));
        }
        for (j, iv) in self.interventions.iter().enumerate() {
            iv.validate().map_err(|e| invalid(format!("interventions[{j}]: {e}")))?;
        }
        if self.record_stride == 0 {
            return Err(invalid("record_stride: must be >= 1"));
        }
        match self.engine {
            EngineKind::Gillespie => {
                if matches!(network, Network::WellMixed(_)) && !self.interventions.is_empty() {
                    return Err(invalid("interventions need a contact network, not well_mixed"));
                }
            }
            EngineKind::Abm | EngineKind::Ode => {
                if !matches!(network, Network::WellMixed(_)) {
                    return Err(invalid(format!(
                        "engine {:?} needs a well_mixed network block",
                        self.engine
                    )));
                }
                if !self.interventions.is_empty() {
                    return Err(invalid("interventions are only supported by the gillespie engine"));
                }
            }
        }
        if self.engine == EngineKind::Ode && !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid(format!("dt: {} must be finite and > 0", self.dt)));
        }
        Ok(())
    }

    pub fn network(&self) -> Network {
        self.network.resolve().expect("validated at parse time")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"network":{"er":{"n":100,"p":0.1}},"rates":{"beta":0.1,"gamma":1.0},
        "init":{"fraction":0.01,"seed":7},"t_max":20}"#;

    #[test]
    fn minimal_config_resolves_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.rates.alpha, 0.0);
        assert_eq!(cfg.engine, EngineKind::Gillespie);
        assert_eq!(cfg.network.er.unwrap().seed, Some(7));
        assert_eq!(cfg.output, OutputPaths::default());
        assert_eq!(cfg.dt, DEFAULT_DT);
        assert_eq!(
            cfg.network(),
            Network::Generated {
                model: GraphModel::Er { n: 100, p: 0.1 },
                seed: 7
            }
        );
    }

    #[test]
    fn round_trip_is_idempotent() {
        let cfg = parse_config(MINIMAL).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let again = parse_config(&text).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(text, serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn seed_override_flows_into_generator() {
        let cfg = parse_config_with_seed(MINIMAL, Some(99)).unwrap();
        assert_eq!(cfg.init.seed, 99);
        assert_eq!(cfg.network.er.unwrap().seed, Some(99));
        let explicit = MINIMAL.replace(r#""p":0.1}"#, r#""p":0.1,"seed":3}"#);
        let cfg = parse_config_with_seed(&explicit, Some(99)).unwrap();
        assert_eq!(cfg.network.er.unwrap().seed, Some(3));
    }

    #[test]
    fn conflicting_sources() {
        let text = MINIMAL.replace(
            r#""er":{"n":100,"p":0.1}"#,
            r#""er":{"n":100,"p":0.1},"edge_list":{"path":"g.txt"}"#,
        );
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("conflicting") && err.contains("edge_list"), "{err}");
    }

    #[test]
    fn unknown_key_is_named() {
        let text = MINIMAL.replace(r#""t_max":20"#, r#""t_max":20,"tmax":3"#);
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("tmax"), "{err}");
        let text = MINIMAL.replace(r#""beta":0.1"#, r#""beta":0.1,"delta":1"#);
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("rates") && err.contains("delta"), "{err}");
    }

    #[test]
    fn missing_field_reports_path() {
        let text = MINIMAL.replace(r#","seed":7"#, "");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.starts_with("init") && err.contains("seed"), "{err}");
    }

    #[test]
    fn engine_compatibility() {
        let text = MINIMAL.replace(r#""t_max":20"#, r#""t_max":20,"engine":"ode""#);
        assert!(parse_config(&text).unwrap_err().to_string().contains("well_mixed"));
        let text = MINIMAL
            .replace(r#""er":{"n":100,"p":0.1}"#, r#""well_mixed":{"n":100,"k_avg":5}"#)
            .replace(r#""t_max":20"#, r#""t_max":20,"engine":"abm""#);
        assert_eq!(parse_config(&text).unwrap().engine, EngineKind::Abm);
    }

    #[test]
    fn init_needs_one_rule() {
        let text = MINIMAL.replace(r#""fraction":0.01"#, r#""fraction":0.01,"count":3"#);
        assert!(parse_config(&text)
            .unwrap_err()
            .to_string()
            .contains("mutually exclusive"));
    }

    #[test]
    fn interventions_parse() {
        let text = MINIMAL.replace(
            r#""t_max":20"#,
            r#""t_max":20,"interventions":[{"t":2,"action":"degree_cap","cap":5},{"t":3,"action":"thin","target":0.003}]"#,
        );
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.interventions[0], InterventionSpec::degree_cap(2.0, 5));
        assert_eq!(cfg.interventions[1], InterventionSpec::thin(3.0, 0.003));
    }
}
