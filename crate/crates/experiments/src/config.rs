//! Line-oriented `key = value` scenario files.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use wpcr_core::baselines::BenchmarkDesign;
use wpcr_core::SystemParams64;

use crate::error::{ExperimentError, Result};

/// Noise power in watts for a level in dBm.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Placement {
    /// Uniform random positions drawn from the run seed.
    Random,
    /// Positions of PU^T, PU^R, S^T_1, S^R_1, ... in that order.
    Explicit(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepName {
    L,
    Eta,
    N,
    Delta,
    P0,
}

impl SweepName {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepName::L => "L",
            SweepName::Eta => "eta",
            SweepName::N => "N",
            SweepName::Delta => "delta",
            SweepName::P0 => "P0",
        }
    }

    /// Copy of `params` with this parameter set to `value`.
    pub fn apply(&self, params: &SystemParams64, value: f64) -> SystemParams64 {
        let mut p = params.clone();
        match self {
            SweepName::L => p.l = value,
            SweepName::Eta => p.eta = value,
            SweepName::N => p.n = value.round() as usize,
            SweepName::Delta => p.delta = value,
            SweepName::P0 => p.p0 = value,
        }
        p
    }
}

impl fmt::Display for SweepName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepName {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "L" | "l" => Ok(SweepName::L),
            "eta" => Ok(SweepName::Eta),
            "N" | "n" => Ok(SweepName::N),
            "delta" => Ok(SweepName::Delta),
            "P0" | "p0" => Ok(SweepName::P0),
            other => Err(ExperimentError::Usage(format!(
                "unknown sweep `{other}`; expected L, eta, N, delta or P0"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub name: SweepName,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Sweep {
    /// `steps` evenly spaced values from `min` to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.min + (self.max - self.min) * i as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: SystemParams64,
    pub placement: Placement,
    pub sweep: Option<Sweep>,
    pub trials: usize,
    pub tau0_grid: usize,
    pub xi: f64,
    pub benchmark_design: BenchmarkDesign,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            params: SystemParams64::default(),
            placement: Placement::Random,
            sweep: None,
            trials: 1,
            tau0_grid: 1000,
            xi: 1e-9,
            benchmark_design: BenchmarkDesign::PbsOnly,
        }
    }
}

fn number(line: usize, key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ExperimentError::Config {
            line,
            reason: format!("`{key}` needs a finite number, got `{value}`"),
        })
}

fn count(line: usize, key: &str, value: &str) -> Result<usize> {
    value.parse::<usize>().map_err(|_| ExperimentError::Config {
        line,
        reason: format!("`{key}` needs a nonnegative integer, got `{value}`"),
    })
}

fn parse_placement(line: usize, value: &str) -> Result<Placement> {
    if value == "random" {
        return Ok(Placement::Random);
    }
    let Some(list) = value.strip_prefix("explicit:") else {
        return Err(ExperimentError::Config {
            line,
            reason: format!("placement must be `random` or `explicit:x,y;...`, got `{value}`"),
        });
    };
    list.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let mut it = p.split(',').map(str::trim);
            match (it.next(), it.next(), it.next()) {
                (Some(x), Some(y), None) => {
                    Ok((number(line, "placement", x)?, number(line, "placement", y)?))
                }
                _ => Err(ExperimentError::Config {
                    line,
                    reason: format!("bad coordinate `{p}`"),
                }),
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(Placement::Explicit)
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        let (mut sweep_name, mut sweep_min, mut sweep_max, mut sweep_steps) =
            (None, None, None, None);
        let mut sweep_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ExperimentError::Config {
                    line,
                    reason: format!("expected `key = value`, got `{content}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let p = &mut cfg.params;
            match key {
                "p0_watts" => p.p0 = number(line, key, value)?,
                "eta" => p.eta = number(line, key, value)?,
                "sigma2_dbm" => p.sigma2 = dbm_to_watts(number(line, key, value)?),
                "delta" => p.delta = number(line, key, value)?,
                "l_meters" => p.l = number(line, key, value)?,
                "n_su" => p.n = count(line, key, value)?,
                "nu_hz" => p.nu = number(line, key, value)?,
                "zeta_pl" => p.zeta_pl = number(line, key, value)?,
                "d_min" => p.d_min = number(line, key, value)?,
                "placement" => cfg.placement = parse_placement(line, value)?,
                "sweep_name" => {
                    sweep_name =
                        Some(
                            value
                                .parse::<SweepName>()
                                .map_err(|e| ExperimentError::Config {
                                    line,
                                    reason: e.to_string(),
                                })?,
                        );
                    sweep_line = line;
                }
                "sweep_min" => sweep_min = Some(number(line, key, value)?),
                "sweep_max" => sweep_max = Some(number(line, key, value)?),
                "sweep_steps" => sweep_steps = Some(count(line, key, value)?),
                "trials" => cfg.trials = count(line, key, value)?,
                "tau0_grid" => cfg.tau0_grid = count(line, key, value)?,
                "xi" => cfg.xi = number(line, key, value)?,
                "benchmark_design" => {
                    cfg.benchmark_design = match value {
                        "pbs_only" => BenchmarkDesign::PbsOnly,
                        "full_harvest" => BenchmarkDesign::FullHarvest,
                        _ => return Err(ExperimentError::Config {
                            line,
                            reason: format!(
                                "benchmark_design must be pbs_only or full_harvest, got `{value}`"
                            ),
                        }),
                    }
                }
                _ => {
                    return Err(ExperimentError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        if let Some(name) = sweep_name {
            let missing = |what: &str| ExperimentError::Config {
                line: sweep_line,
                reason: format!("sweep needs `{what}`"),
            };
            cfg.sweep = Some(Sweep {
                name,
                min: sweep_min.ok_or_else(|| missing("sweep_min"))?,
                max: sweep_max.ok_or_else(|| missing("sweep_max"))?,
                steps: sweep_steps.ok_or_else(|| missing("sweep_steps"))?,
            });
        } else if sweep_min.is_some() || sweep_max.is_some() || sweep_steps.is_some() {
            return Err(ExperimentError::Config {
                line: 0,
                reason: "sweep bounds given without `sweep_name`".into(),
            });
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let bad = |reason: String| Err(ExperimentError::Config { line: 0, reason });
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.tau0_grid < 2 {
            return bad("tau0_grid must be at least 2".into());
        }
        if !(self.xi > 0.0 && self.xi < 1.0) {
            return bad(format!("xi must lie in (0, 1), got {}", self.xi));
        }
        if let Some(s) = &self.sweep {
            if !(s.min > 0.0 && s.max >= s.min) || s.steps == 0 {
                return bad(format!(
                    "sweep needs 0 < min <= max and steps >= 1, got [{}, {}] x {}",
                    s.min, s.max, s.steps
                ));
            }
            if s.steps > 1 && s.max == s.min {
                return bad("sweep with several steps needs min < max".into());
            }
        }
        if let Placement::Explicit(points) = &self.placement {
            if points.len() != 2 + 2 * self.params.n {
                return bad(format!(
                    "explicit placement needs {} points for n_su = {}, got {}",
                    2 + 2 * self.params.n,
                    self.params.n,
                    points.len()
                ));
            }
        }
        Ok(())
    }
}
