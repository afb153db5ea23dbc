use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::fit::{fit_loglog, median, LogLogFit};
use crate::instances::{gen_instance, Family, PerturbationStyle};
use crate::rng::SplitMix64;

pub const CSV_HEADER: &str = "family,n,eps,trial,distance,gnorm1,gnorm2,diag_resid,spec_resid,status";

pub fn default_eps_grid() -> Vec<f64> {
    (2..=8).map(|k| 10f64.powi(-k)).collect()
}

fn default_trials() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: Family,
    pub n: usize,
    #[serde(default = "default_eps_grid")]
    pub eps_grid: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials_per_eps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub perturbation_style: PerturbationStyle,
}

impl SweepConfig {
    pub fn new(family: Family, n: usize, seed: u64, style: PerturbationStyle) -> Self {
        Self {
            family,
            n,
            eps_grid: default_eps_grid(),
            trials_per_eps: default_trials(),
            seed,
            perturbation_style: style,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials_per_eps == 0 {
            return Err(HarnessError::InvalidConfig("trials_per_eps must be at least 1".into()));
        }
        if self.eps_grid.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(HarnessError::InvalidConfig("eps_grid entries must be positive".into()));
        }
        if self.eps_grid.windows(2).any(|w| w[1] >= w[0]) {
            return Err(HarnessError::InvalidConfig("eps_grid must be strictly decreasing".into()));
        }
        if self.eps_grid.len() < 2 {
            return Err(HarnessError::InsufficientGrid { points: self.eps_grid.len() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub family: Family,
    pub n: usize,
    pub eps: f64,
    pub trial: usize,
    pub distance: f64,
    pub gnorm1: f64,
    pub gnorm2: f64,
    pub diag_resid: f64,
    pub spec_resid: f64,
    /// `ok`, or the name of the error that stopped the trial.
    pub status: String,
}

impl SweepRecord {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// Ordered by `(ε index, trial)`.
    pub records: Vec<SweepRecord>,
    /// Median distance per grid point, over successful trials.
    pub medians: Vec<Option<f64>>,
    pub fit: LogLogFit,
    pub g1_fit: Option<LogLogFit>,
    pub g2_fit: Option<LogLogFit>,
}

impl SweepResult {
    pub fn fitted_slope(&self) -> f64 {
        self.fit.slope
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.ok()).count()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                r.family, r.n, r.eps, r.trial, r.distance, r.gnorm1, r.gnorm2, r.diag_resid, r.spec_resid, r.status
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

fn error_tag(e: &schur_horn::Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

/// Runs every trial at every grid point and fits the log-log slope of the
/// median distance against `ε`.
///
/// Trial `t` draws its instance and perturbation direction from stream `t`
/// of the seed, so the same instance is followed down the whole grid.
pub fn epsilon_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let mut trials = Vec::with_capacity(cfg.trials_per_eps);
    for t in 0..cfg.trials_per_eps {
        let mut rng = SplitMix64::stream(cfg.seed, t as u64);
        let inst = gen_instance(cfg.family, cfg.n, rng.next_u64())?;
        let gen = inst.generator(cfg.perturbation_style, &mut rng);
        trials.push((inst, gen));
    }

    let mut records = Vec::with_capacity(cfg.eps_grid.len() * cfg.trials_per_eps);
    for &eps in &cfg.eps_grid {
        for (t, (inst, gen)) in trials.iter().enumerate() {
            let mut rec = SweepRecord {
                family: cfg.family,
                n: cfg.n,
                eps,
                trial: t,
                distance: f64::NAN,
                gnorm1: f64::NAN,
                gnorm2: f64::NAN,
                diag_resid: f64::NAN,
                spec_resid: f64::NAN,
                status: "ok".into(),
            };
            match inst.correct(&gen.at(eps)) {
                Ok(c) => {
                    let (g1, g2) = c.factor_norms();
                    rec.distance = c.distance_to_original;
                    rec.gnorm1 = g1;
                    rec.gnorm2 = g2;
                    rec.diag_resid = c.diag_residual;
                    rec.spec_resid = c.spectrum_residual;
                }
                Err(e) => rec.status = error_tag(&e),
            }
            records.push(rec);
        }
    }

    let column = |f: fn(&SweepRecord) -> f64| -> Vec<Option<f64>> {
        records
            .chunks(cfg.trials_per_eps)
            .map(|chunk| median(&chunk.iter().filter(|r| r.ok()).map(f).collect::<Vec<_>>()))
            .collect()
    };
    let medians = column(|r| r.distance);
    let fit_of = |m: &[Option<f64>]| {
        let ys: Vec<f64> = m.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        fit_loglog(&cfg.eps_grid, &ys)
    };
    let fit = fit_of(&medians)?;
    let g1_fit = fit_of(&column(|r| r.gnorm1)).ok();
    let g2_fit = fit_of(&column(|r| r.gnorm2)).ok();
    Ok(SweepResult { config: cfg.clone(), records, medians, fit, g1_fit, g2_fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adversarial_diagonal_is_square_root() {
        let cfg = SweepConfig::new(Family::DiagonalDistinct, 4, 11, PerturbationStyle::Adversarial);
        let r = epsilon_sweep(&cfg).unwrap();
        assert_eq!(r.records.len(), 7 * cfg.trials_per_eps);
        assert_eq!(r.failures(), 0);
        assert!((r.fitted_slope() - 0.5).abs() < 0.05, "{}", r.fitted_slope());
    }

    #[test]
    fn one_point_grid() {
        let mut cfg = SweepConfig::new(Family::DiagonalDistinct, 3, 0, PerturbationStyle::Generic);
        cfg.eps_grid = vec![1e-3];
        assert!(matches!(epsilon_sweep(&cfg), Err(HarnessError::InsufficientGrid { points: 1 })));
    }

    #[test]
    fn bad_grids() {
        let mut cfg = SweepConfig::new(Family::Irreducible, 3, 0, PerturbationStyle::Generic);
        cfg.eps_grid = vec![1e-3, 1e-2];
        assert!(matches!(cfg.validate(), Err(HarnessError::InvalidConfig(_))));
        cfg.eps_grid = vec![1e-2, -1e-3];
        assert!(cfg.validate().is_err());
        cfg.eps_grid = default_eps_grid();
        cfg.trials_per_eps = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn csv_is_reproducible() {
        let cfg = SweepConfig::new(Family::MixedBlock, 5, 3, PerturbationStyle::Generic);
        let a = epsilon_sweep(&cfg).unwrap().to_csv();
        let b = epsilon_sweep(&cfg).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        assert_eq!(a.lines().count(), 1 + 7 * cfg.trials_per_eps);
    }

    #[test]
    fn config_json_defaults() {
        let cfg: SweepConfig = serde_json::from_str(r#"{"family": "hermitian-irreducible", "n": 4}"#).unwrap();
        assert_eq!(cfg.eps_grid, default_eps_grid());
        assert_eq!(cfg.perturbation_style, PerturbationStyle::Adversarial);
    }
}
