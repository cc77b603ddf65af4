//! The run configuration file: one JSON document with `sim`, `noise`,
//! `tracker`, and `metrics` sections. Unknown keys are rejected, missing
//! keys take documented defaults, and the effective config (defaults
//! applied) is echoed into every run manifest for reproducibility.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::io::IoError;
use crate::metrics::MetricsConfig;
use crate::simulate::{NoiseConfig, SimConfig};
use crate::tracker::TrackerConfig;

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sim: SimConfig,
    pub noise: NoiseConfig,
    pub tracker: TrackerConfig,
    pub metrics: MetricsConfig,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), IoError> {
        let schema = |msg: String| IoError::Schema { msg };
        self.sim.validate().map_err(|e| schema(e.to_string()))?;
        self.noise.validate().map_err(|e| schema(e.to_string()))?;
        self.tracker.validate().map_err(|e| schema(e.to_string()))?;
        self.metrics.validate().map_err(|e| schema(e.to_string()))?;
        Ok(())
    }

    /// Effective config with all defaults applied, as pretty JSON.
    pub fn echo_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

pub fn parse_config(text: &str, origin: &Path) -> Result<RunConfig, IoError> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: origin.display().to_string(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn read_config(path: &Path) -> Result<RunConfig, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Io { path: path.display().to_string(), source: e })?;
    parse_config(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MotpMode;
    use crate::simulate::Scenario;
    use std::path::PathBuf;

    fn parse(text: &str) -> Result<RunConfig, IoError> {
        parse_config(text, &PathBuf::from("test.json"))
    }

    #[test]
    fn empty_object_is_all_defaults() {
        let cfg = parse("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.sim.mat_height, 240);
        assert_eq!(cfg.sim.mat_width, 120);
        assert_eq!(cfg.tracker.strategy, "uoe");
        assert_eq!(cfg.metrics.iou_threshold, 0.5);
    }

    #[test]
    fn sections_override_defaults() {
        let cfg = parse(
            r#"{
                "sim": {"n_persons": 2, "scenario": "follow", "seed": 99},
                "tracker": {"strategy": "ioukalman", "max_lost": 10},
                "metrics": {"motp": "distance"}
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.sim.n_persons, 2);
        assert_eq!(cfg.sim.scenario, Scenario::Follow);
        assert_eq!(cfg.sim.fps, 25.0); // untouched default
        assert_eq!(cfg.tracker.strategy, "ioukalman");
        assert_eq!(cfg.tracker.max_lost, 10);
        assert_eq!(cfg.metrics.motp, MotpMode::Distance);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let e = parse(r#"{"sim": {"n_people": 2}}"#).unwrap_err().to_string();
        assert!(e.contains("n_people"), "{e}");
        let e = parse(r#"{"tracking": {}}"#).unwrap_err().to_string();
        assert!(e.contains("tracking"), "{e}");
    }

    #[test]
    fn threshold_ordering_is_validated() {
        let e = parse(r#"{"tracker": {"conf_discard": 0.7, "conf_spawn": 0.5}}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("conf_discard") && e.contains("conf_spawn"), "{e}");
    }

    #[test]
    fn echo_json_round_trips() {
        let cfg = RunConfig::default();
        let echoed = parse(&cfg.echo_json()).unwrap();
        assert_eq!(cfg, echoed);
    }
}
