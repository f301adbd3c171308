//! JSON configuration. Every field has a default, so an empty document (or no
//! file at all) reproduces the standard verification runs.

use std::path::Path;

use greenball::fields::{TrigMode, TrigPolynomial};
use greenball::Dimension;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One `amplitude · cos(frequency · x + phase)` record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeRecord {
    pub amplitude: f64,
    pub frequency: Vec<f64>,
    #[serde(default)]
    pub phase: f64,
}

impl ModeRecord {
    fn new(amplitude: f64, frequency: &[f64]) -> Self {
        Self {
            amplitude,
            frequency: frequency.to_vec(),
            phase: 0.0,
        }
    }
}

pub fn trig(records: &[ModeRecord]) -> Result<TrigPolynomial, greenball::Error> {
    let n = records.first().map_or(3, |m| m.frequency.len());
    let modes = records
        .iter()
        .map(|m| TrigMode::new(m.amplitude, m.frequency.clone(), m.phase))
        .collect();
    TrigPolynomial::new(Dimension::new(n)?, modes)
}

fn cos_x1() -> Vec<ModeRecord> {
    vec![ModeRecord::new(1.0, &[1.0, 0.0, 0.0])]
}

fn two_mode() -> Vec<ModeRecord> {
    vec![
        ModeRecord::new(1.0, &[1.0, 2f64.sqrt(), 0.0]),
        ModeRecord::new(0.5, &[3f64.sqrt(), 0.0, 0.0]),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub kernels: KernelsConfig,
    pub representation: RepresentationSuite,
    pub gradient: GradientSuite,
    #[serde(alias = "lemma-lim")]
    pub lemma_lim: LemmaLimSuite,
    pub averaging: AveragingSuite,
    pub recovery: RecoverySuite,
    pub appendix: AppendixSuite,
    #[serde(alias = "almost-period")]
    pub almost_period: AlmostPeriodSuite,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 20240611,
            kernels: KernelsConfig::default(),
            representation: RepresentationSuite::default(),
            gradient: GradientSuite::default(),
            lemma_lim: LemmaLimSuite::default(),
            averaging: AveragingSuite::default(),
            recovery: RecoverySuite::default(),
            appendix: AppendixSuite::default(),
            almost_period: AlmostPeriodSuite::default(),
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Replaces every quadrature level in every section.
    pub fn override_level(&mut self, level: usize) {
        self.kernels.level = level;
        self.representation.level = level;
        self.gradient.level = level;
        self.gradient.limit_level = level;
        self.lemma_lim.level = level;
        self.averaging.level = level;
        self.recovery.level = level;
        self.recovery.mollifier_level = level;
        self.appendix.fubini_levels = vec![level.saturating_sub(2).max(1), level.saturating_sub(1).max(1), level];
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelsConfig {
    pub level: usize,
    pub mass_points: Vec<Vec<f64>>,
    pub mass_tol: f64,
    pub mixed_samples: usize,
    pub mixed_h: [f64; 2],
    pub mixed_ratio: [f64; 2],
    pub singular_dims: Vec<usize>,
    pub singular_deltas: Vec<f64>,
    pub singular_shift: f64,
    pub singular_tol: f64,
}

impl Default for KernelsConfig {
    fn default() -> Self {
        Self {
            level: 8,
            mass_points: vec![vec![0.0, 0.0, 0.0], vec![0.5, 0.0, 0.0], vec![0.0, 0.9, 0.0]],
            mass_tol: 1e-8,
            mixed_samples: 20,
            mixed_h: [1e-2, 1e-3],
            mixed_ratio: [8.0, 12.0],
            singular_dims: vec![3, 4, 5],
            singular_deltas: vec![0.25, 0.5, 0.9],
            singular_shift: 0.1,
            singular_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RepresentationSuite {
    pub level: usize,
    pub forcings: Vec<Vec<ModeRecord>>,
    pub samples: usize,
    pub sample_radius: f64,
    pub rel_tol: f64,
}

impl Default for RepresentationSuite {
    fn default() -> Self {
        Self {
            level: 8,
            forcings: vec![cos_x1(), two_mode()],
            samples: 10,
            sample_radius: 0.5,
            rel_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GradientSuite {
    pub level: usize,
    pub forcings: Vec<Vec<ModeRecord>>,
    pub samples: usize,
    pub sample_box: f64,
    pub tol: f64,
    pub defect_forcing: Vec<ModeRecord>,
    pub defect_samples: usize,
    pub defect_h: Vec<f64>,
    pub limit_level: usize,
    pub defect_slack: f64,
}

impl Default for GradientSuite {
    fn default() -> Self {
        Self {
            level: 8,
            forcings: vec![cos_x1(), two_mode()],
            samples: 10,
            sample_box: 3.0,
            tol: 1e-3,
            defect_forcing: cos_x1(),
            defect_samples: 5,
            defect_h: vec![0.125, 0.0625, 0.03125, 0.015625],
            limit_level: 10,
            defect_slack: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaLimSuite {
    pub dim: usize,
    pub axis: usize,
    pub level: usize,
    pub h: Vec<f64>,
    pub min_slope: f64,
    pub max_ratio: f64,
}

impl Default for LemmaLimSuite {
    fn default() -> Self {
        Self {
            dim: 3,
            axis: 0,
            level: 10,
            h: vec![0.125, 0.0625, 0.03125, 0.015625, 0.0078125],
            min_slope: 0.9,
            max_ratio: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AveragingSuite {
    pub level: usize,
    pub big_r: f64,
    pub delta: f64,
    pub forcing: Vec<ModeRecord>,
    pub exact_tol: f64,
    pub trig_tol: f64,
    pub printed_min: f64,
}

impl Default for AveragingSuite {
    fn default() -> Self {
        Self {
            level: 8,
            big_r: 1.0,
            delta: 0.1,
            forcing: cos_x1(),
            exact_tol: 1e-8,
            trig_tol: 1e-4,
            printed_min: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecoverySuite {
    pub level: usize,
    pub big_r: f64,
    pub delta: f64,
    pub forcing: Vec<ModeRecord>,
    pub override_value: f64,
    pub centres: Vec<Vec<f64>>,
    pub epsilons: Vec<f64>,
    pub agree_tol: f64,
    pub rate: f64,
    pub mollifier_level: usize,
    pub mass_dims: Vec<usize>,
    pub mass_epsilons: Vec<f64>,
    pub mass_tol: f64,
    pub convergence_field: Vec<ModeRecord>,
    pub convergence_epsilons: Vec<f64>,
    pub convergence_box: f64,
    pub convergence_grid: usize,
    pub min_slope: f64,
    pub equation_points: usize,
    pub equation_tol: f64,
}

impl Default for RecoverySuite {
    fn default() -> Self {
        Self {
            level: 6,
            big_r: 1.0,
            delta: 0.1,
            forcing: cos_x1(),
            override_value: 5.0,
            centres: vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]],
            epsilons: vec![0.2, 0.1, 0.05],
            agree_tol: 1e-6,
            rate: 0.5,
            mollifier_level: 8,
            mass_dims: vec![3, 4],
            mass_epsilons: vec![1.0, 0.1, 0.01],
            mass_tol: 1e-10,
            convergence_field: two_mode(),
            convergence_epsilons: vec![0.2, 0.1, 0.05, 0.025],
            convergence_box: 2.0,
            convergence_grid: 5,
            min_slope: 0.9,
            equation_points: 10,
            equation_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppendixSuite {
    pub samples: usize,
    pub max_m: u32,
    pub log10_range: [f64; 2],
    pub fubini_field: Vec<ModeRecord>,
    pub fubini_levels: Vec<usize>,
    pub fubini_tol: f64,
}

impl Default for AppendixSuite {
    fn default() -> Self {
        Self {
            samples: 100_000,
            max_m: 12,
            log10_range: [-3.0, 3.0],
            fubini_field: vec![ModeRecord::new(1.0, &[1.0, 0.0, 0.0]), ModeRecord::new(0.5, &[0.0, 2f64.sqrt(), 0.0])],
            fubini_levels: vec![4, 5, 6],
            fubini_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlmostPeriodSuite {
    pub forcing: Vec<ModeRecord>,
    pub epsilon: f64,
    pub axis: usize,
    pub t_max: f64,
    pub half_width: f64,
    pub grid: usize,
}

impl Default for AlmostPeriodSuite {
    fn default() -> Self {
        Self {
            forcing: vec![ModeRecord::new(1.0, &[1.0, 0.0, 0.0]), ModeRecord::new(1.0, &[2f64.sqrt(), 0.0, 0.0])],
            epsilon: 0.1,
            axis: 0,
            t_max: 200.0,
            half_width: 20.0,
            grid: 401,
        }
    }
}
