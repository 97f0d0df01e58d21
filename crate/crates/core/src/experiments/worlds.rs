use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Age of the universe in seconds.
pub const DEFAULT_UNIVERSE_AGE_S: f64 = 4.35e17;
/// Planck time in seconds.
pub const DEFAULT_PLANCK_TIME_S: f64 = 5.39e-44;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthModel {
    /// N = T / t_P
    Linear,
    /// N = exp(T / t_P)
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorldCountConfig {
    pub universe_age_s: f64,
    pub planck_time_s: f64,
    pub model: GrowthModel,
}

impl Default for WorldCountConfig {
    fn default() -> Self {
        Self {
            universe_age_s: DEFAULT_UNIVERSE_AGE_S,
            planck_time_s: DEFAULT_PLANCK_TIME_S,
            model: GrowthModel::Linear,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldCountReport {
    pub model: GrowthModel,
    pub universe_age_s: f64,
    pub planck_time_s: f64,
    pub log10_ratio: f64,
    pub log10_worlds: Option<f64>,
    pub log10_log10_worlds: Option<f64>,
}

/// World count N = f(T / t_P), reported in nested base-10 logarithms so that
/// no intermediate quantity overflows.
pub fn world_count(config: &WorldCountConfig) -> Result<WorldCountReport> {
    let (t, tp) = (config.universe_age_s, config.planck_time_s);
    if !(t.is_finite() && tp.is_finite() && t > 0.0 && tp > 0.0) {
        return Err(Error::InvalidParameter(
            "universe age and Planck time must be positive and finite".into(),
        ));
    }
    if t <= tp {
        return Err(Error::InvalidParameter(
            "universe age must exceed the Planck time".into(),
        ));
    }
    let log10_ratio = t.log10() - tp.log10();
    let (log10_worlds, log10_log10_worlds) = match config.model {
        GrowthModel::Linear => (Some(log10_ratio), None),
        // log10 N = (T/t_P) · log10 e
        GrowthModel::Exponential => (None, Some(log10_ratio + std::f64::consts::LOG10_E.log10())),
    };
    Ok(WorldCountReport {
        model: config.model,
        universe_age_s: t,
        planck_time_s: tp,
        log10_ratio,
        log10_worlds,
        log10_log10_worlds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_of_ten() {
        let r = world_count(&WorldCountConfig {
            universe_age_s: 1e20,
            planck_time_s: 1e-40,
            model: GrowthModel::Linear,
        })
        .unwrap();
        assert!((r.log10_worlds.unwrap() - 60.0).abs() < 1e-12);
        assert_eq!(r.log10_log10_worlds, None);
    }

    #[test]
    fn rejects_bad_inputs() {
        for (t, tp) in [(0.0, 1.0), (1.0, -1.0), (1.0, 2.0), (f64::INFINITY, 1.0)] {
            let cfg = WorldCountConfig {
                universe_age_s: t,
                planck_time_s: tp,
                model: GrowthModel::Linear,
            };
            assert!(world_count(&cfg).is_err());
        }
    }

    #[test]
    fn extreme_inputs_stay_finite() {
        let r = world_count(&WorldCountConfig {
            universe_age_s: 1e300,
            planck_time_s: 1e-300,
            model: GrowthModel::Exponential,
        })
        .unwrap();
        assert!((r.log10_log10_worlds.unwrap() - (600.0 + std::f64::consts::LOG10_E.log10())).abs() < 1e-10);
    }
}
