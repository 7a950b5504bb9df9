//! Scenario config files: JSON documents deserialized into
//! [`ScenarioConfig`]. Missing keys take the built-in defaults; unknown
//! keys and malformed values are parse errors with line context, and a
//! parsed config is validated with every violation reported.

use std::fs;
use std::path::Path;

use bbsim_core::ScenarioConfig;

use crate::CliError;

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg: ScenarioConfig =
        serde_json::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.to_path_buf(),
            source,
        })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Loads the config at `path`, or the defaults when no path is given.
pub fn load_config_or_default(path: Option<&Path>) -> Result<ScenarioConfig, CliError> {
    match path {
        Some(path) => load_config(path),
        None => Ok(ScenarioConfig::default()),
    }
}

/// Serializes a config back to the JSON document `load_config` accepts.
pub fn config_to_json(cfg: &ScenarioConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    use std::io::Write;

    use bbsim_core::{Bandwidth, ScenarioConfig};
    use proptest::prelude::*;

    fn write_config(dir: &tempfile::TempDir, name: &str, contents: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        let mut file = fs::File::create(&path).unwrap();
        file.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn empty_object_yields_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(&dir, "empty.json", "{}");
        let cfg = load_config(&path).unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.capacity_kbps.value(), 6000.0);
        assert_eq!(cfg.femto.users, 6);
        assert_eq!(cfg.femto.target_mean_kbps.value(), 450.0);
        assert_eq!(cfg.window.sample_interval_s, 1.0);
        assert_eq!(cfg.window.observation_period_s, 60.0);
        assert_eq!(cfg.run.replications, 20);
    }

    #[test]
    fn partial_override_keeps_other_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            &dir,
            "partial.json",
            r#"{"background":{"arbit_kbps":5500}}"#,
        );
        let cfg = load_config(&path).unwrap();
        assert_eq!(cfg.background.arbit_kbps.value(), 5500.0);
        assert_eq!(
            cfg.background.per_flow_kbps,
            ScenarioConfig::default().background.per_flow_kbps
        );
        assert_eq!(cfg.capacity_kbps.value(), 6000.0);
    }

    #[test]
    fn window_multiple_violation_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(&dir, "window.json", r#"{"window":{"T_s":61,"t1_s":2}}"#);
        let err = load_config(&path).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("window.T_s"), "got: {text}");
        assert!(text.contains("multiple"), "got: {text}");
        assert_eq!(err.exit_code(), crate::EXIT_USAGE);
    }

    #[test]
    fn every_violation_is_listed() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            &dir,
            "bad.json",
            r#"{"capacity_kbps":0,"femto":{"users":0},"run":{"replications":0}}"#,
        );
        let err = load_config(&path).unwrap_err();
        let text = err.to_string();
        for key in ["capacity_kbps", "femto.users", "run.replications"] {
            assert!(text.contains(key), "missing {key} in: {text}");
        }
    }

    #[test]
    fn parse_error_reports_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(&dir, "syntax.json", "{\n  \"capacity_kbps\": oops\n}");
        let err = load_config(&path).unwrap_err();
        assert!(err.to_string().contains("line 2"), "got: {err}");
    }

    #[test]
    fn negative_bandwidth_is_rejected_at_parse() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(&dir, "neg.json", r#"{"capacity_kbps": -5}"#);
        let err = load_config(&path).unwrap_err();
        assert!(err.to_string().contains("non-negative"), "got: {err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(&dir, "unknown.json", r#"{"capacity_mbps": 6}"#);
        let err = load_config(&path).unwrap_err();
        assert!(err.to_string().contains("capacity_mbps"), "got: {err}");
    }

    #[test]
    fn missing_file_is_a_config_error() {
        let err = load_config(Path::new("/no/such/config.json")).unwrap_err();
        assert_eq!(err.exit_code(), crate::EXIT_USAGE);
        assert!(err.to_string().contains("/no/such/config.json"));
    }

    proptest! {
        /// Any valid config survives a write/parse round trip unchanged.
        #[test]
        fn config_round_trips(
            capacity in 1.0f64..100_000.0,
            arbit in 0.0f64..100_000.0,
            users in 1u32..50,
            target in 0.0f64..5_000.0,
            window_len in 1usize..200,
            t1_choice in 0usize..3,
            m in 1usize..5,
            duration_ticks in 2usize..5_000,
            warmup_frac in 0.0f64..0.9,
            replications in 1u32..100,
            base_seed in any::<u64>(),
        ) {
            let t1 = [0.5, 1.0, 2.0][t1_choice];
            let defaults = ScenarioConfig::default();
            let cfg = ScenarioConfig {
                capacity_kbps: Bandwidth::new(capacity),
                femto: bbsim_core::FemtoTrafficConfig {
                    users,
                    target_mean_kbps: Bandwidth::new(target),
                    ..defaults.femto
                },
                background: bbsim_core::BackgroundTrafficConfig {
                    arbit_kbps: Bandwidth::new(arbit),
                    ..defaults.background
                },
                window: bbsim_core::WindowParams {
                    sample_interval_s: t1,
                    observation_period_s: t1 * window_len as f64,
                    start_offset: m,
                },
                run: bbsim_core::RunParams {
                    duration_s: t1 * duration_ticks as f64,
                    warmup_s: t1 * ((duration_ticks as f64 * warmup_frac) as usize) as f64,
                    replications,
                    base_seed,
                },
            };
            prop_assert!(cfg.validate().is_ok(), "probe config should be valid");

            let dir = tempfile::tempdir().unwrap();
            let path = write_config(&dir, "round.json", &config_to_json(&cfg));
            let reloaded = load_config(&path).unwrap();
            prop_assert_eq!(cfg, reloaded);
        }
    }
}
