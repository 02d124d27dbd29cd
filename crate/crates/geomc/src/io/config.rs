//! Experiment configuration: JSON schema, validation, presets, overrides.
//!
//! Configs are plain JSON objects with snake_case keys; unknown keys are
//! rejected. Each experiment reads its own parameter section (`bvmf`,
//! `volleyball`, `eigenmodel`, `dirichlet_bench`); supplying a section that
//! does not match `experiment` is an error. Named presets reproduce the
//! shipped studies and can be patched with dotted-path overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which study to run.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Bingham-von Mises-Fisher trace study on the sphere.
    Bvmf,
    /// Win/loss posterior with a single sampler.
    Volleyball,
    /// Low-rank probit network model.
    Eigenmodel,
    /// ESS benchmark grid: four samplers times a list of prior strengths.
    DirichletBench,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Bvmf => "bvmf",
            ExperimentKind::Volleyball => "volleyball",
            ExperimentKind::Eigenmodel => "eigenmodel",
            ExperimentKind::DirichletBench => "dirichlet-bench",
        }
    }
}

/// Kernel selector for the config file.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKindName {
    GeodesicHmc,
    RwSimplex,
    SphericalRw,
}

/// Scalar step size, or one per product-manifold block.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum EpsilonSpec {
    Scalar(f64),
    PerBlock(Vec<f64>),
}

impl EpsilonSpec {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            EpsilonSpec::Scalar(e) => e.is_finite() && *e > 0.0,
            EpsilonSpec::PerBlock(v) => {
                !v.is_empty() && v.iter().all(|e| e.is_finite() && *e > 0.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(
                "kernel.epsilon must be positive (scalar or non-empty array)".into(),
            ))
        }
    }
}

/// Parameterization a kernel runs in, where an experiment supports both.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Sphere,
    Simplex,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    #[serde(rename = "type")]
    pub kind: KernelKindName,
    pub epsilon: EpsilonSpec,
    /// Integration steps per proposal; required for `geodesic-hmc`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_steps: Option<usize>,
    /// Sphere or simplex parameterization for experiments that offer both
    /// (volleyball with `geodesic-hmc`); defaults to sphere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceKind>,
}

impl KernelConfig {
    fn validate(&self) -> Result<()> {
        self.epsilon.validate()?;
        match self.kind {
            KernelKindName::GeodesicHmc => {
                let t = self.t_steps.ok_or_else(|| {
                    Error::Config("kernel.t_steps is required for geodesic-hmc".into())
                })?;
                if t < 1 {
                    return Err(Error::Config("kernel.t_steps must be >= 1".into()));
                }
            }
            KernelKindName::RwSimplex | KernelKindName::SphericalRw => {
                if self.t_steps.is_some() {
                    return Err(Error::Config(
                        "kernel.t_steps only applies to geodesic-hmc".into(),
                    ));
                }
                if self.space.is_some() {
                    return Err(Error::Config(
                        "kernel.space only applies to geodesic-hmc (random walks fix their own space)".into(),
                    ));
                }
                if matches!(self.epsilon, EpsilonSpec::PerBlock(_)) {
                    return Err(Error::Config(
                        "random-walk kernels take a scalar epsilon".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Parallel-tempering section.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    /// Ascending inverse temperatures in (0, 1], ending at 1.
    pub rhos: Vec<f64>,
    pub exchanges_per_sweep: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BvmfSection {
    /// Diagonal of the quadratic coefficient matrix.
    pub a_diag: Vec<f64>,
    /// Linear coefficients along the first axis; one chain per value.
    pub c1_values: Vec<f64>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VolleyballSection {
    /// Dirichlet prior strength (alpha * ones).
    pub alpha: f64,
}

/// Planted-model generator for the eigenmodel when no dataset is given.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SyntheticNetwork {
    pub m: usize,
    pub lambda: Vec<f64>,
    pub c: f64,
    pub seed: u64,
}

impl Default for SyntheticNetwork {
    fn default() -> Self {
        SyntheticNetwork {
            m: 20,
            lambda: vec![50.0, -35.0, 25.0],
            c: 0.0,
            seed: 23,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EigenmodelSection {
    /// Latent rank p.
    pub p: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticNetwork>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DirichletBenchSection {
    /// Prior strengths; the grid runs every sampler at each value.
    pub alphas: Vec<f64>,
}

/// A full experiment description, loadable from JSON.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub kernel: KernelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<LadderConfig>,
    pub n_samples: usize,
    /// Samples dropped before summaries; defaults to `n_samples / 10`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    pub seed: u64,
    /// Input dataset; experiments fall back to their built-in fixture or
    /// generator when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    /// Directory the trace CSVs and summary JSON are written into.
    pub output: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bvmf: Option<BvmfSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volleyball: Option<VolleyballSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenmodel: Option<EigenmodelSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirichlet_bench: Option<DirichletBenchSection>,
}

impl ExperimentConfig {
    /// Burn-in with the 10% default applied.
    pub fn resolved_burn_in(&self) -> usize {
        self.burn_in.unwrap_or(self.n_samples / 10)
    }

    /// Full validation; returns a copy with defaults materialised (the form
    /// echoed into summary files).
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        self.kernel.validate()?;

        if let Some(ladder) = &self.ladder {
            crate::tempering::TemperatureLadder::new(ladder.rhos.clone())
                .map_err(|e| Error::Config(format!("ladder.rhos: {e}")))?;
            if ladder.exchanges_per_sweep < 1 {
                return Err(Error::Config(
                    "ladder.exchanges_per_sweep must be >= 1".into(),
                ));
            }
        }

        let burn = self.resolved_burn_in();
        if burn > self.n_samples {
            return Err(Error::Config(format!(
                "burn_in {burn} exceeds n_samples {}",
                self.n_samples
            )));
        }

        let sections: [(&str, bool); 4] = [
            ("bvmf", self.bvmf.is_some()),
            ("volleyball", self.volleyball.is_some()),
            ("eigenmodel", self.eigenmodel.is_some()),
            ("dirichlet_bench", self.dirichlet_bench.is_some()),
        ];
        let expected = match self.experiment {
            ExperimentKind::Bvmf => "bvmf",
            ExperimentKind::Volleyball => "volleyball",
            ExperimentKind::Eigenmodel => "eigenmodel",
            ExperimentKind::DirichletBench => "dirichlet_bench",
        };
        for (name, present) in sections {
            if name == expected && !present {
                return Err(Error::Config(format!(
                    "experiment {:?} requires the `{name}` section",
                    self.experiment.name()
                )));
            }
            if name != expected && present {
                return Err(Error::Config(format!(
                    "section `{name}` does not apply to experiment {:?}",
                    self.experiment.name()
                )));
            }
        }

        let mut resolved = self.clone();
        resolved.burn_in = Some(burn);

        match self.experiment {
            ExperimentKind::Bvmf => {
                let section = self.bvmf.as_ref().unwrap();
                if section.a_diag.len() < 2 || section.a_diag.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Config(
                        "bvmf.a_diag needs >= 2 finite entries".into(),
                    ));
                }
                if section.c1_values.is_empty()
                    || section.c1_values.iter().any(|v| !v.is_finite())
                {
                    return Err(Error::Config(
                        "bvmf.c1_values needs >= 1 finite entries".into(),
                    ));
                }
                if self.kernel.kind == KernelKindName::RwSimplex {
                    return Err(Error::Config(
                        "the BvMF target lives on the sphere; rw-simplex does not apply".into(),
                    ));
                }
                if self.dataset.is_some() {
                    return Err(Error::Config("bvmf takes no dataset".into()));
                }
            }
            ExperimentKind::Volleyball => {
                let section = self.volleyball.as_ref().unwrap();
                if !(section.alpha.is_finite() && section.alpha > 0.0) {
                    return Err(Error::Config("volleyball.alpha must be positive".into()));
                }
                if self.kernel.kind == KernelKindName::GeodesicHmc
                    && resolved.kernel.space.is_none()
                {
                    resolved.kernel.space = Some(SpaceKind::Sphere);
                }
            }
            ExperimentKind::Eigenmodel => {
                let section = self.eigenmodel.as_ref().unwrap();
                if section.p < 1 {
                    return Err(Error::Config("eigenmodel.p must be >= 1".into()));
                }
                if let Some(synth) = &section.synthetic {
                    if self.dataset.is_some() {
                        return Err(Error::Config(
                            "give either a dataset or eigenmodel.synthetic, not both".into(),
                        ));
                    }
                    if synth.lambda.len() != section.p {
                        return Err(Error::Config(
                            "eigenmodel.synthetic.lambda length must equal p".into(),
                        ));
                    }
                    if synth.m < 2 {
                        return Err(Error::Config("eigenmodel.synthetic.m must be >= 2".into()));
                    }
                } else if self.dataset.is_none() {
                    resolved.eigenmodel.as_mut().unwrap().synthetic =
                        Some(SyntheticNetwork::default());
                }
            }
            ExperimentKind::DirichletBench => {
                let section = self.dirichlet_bench.as_ref().unwrap();
                if section.alphas.is_empty()
                    || section
                        .alphas
                        .iter()
                        .any(|a| !(a.is_finite() && *a > 0.0))
                {
                    return Err(Error::Config(
                        "dirichlet_bench.alphas must be positive".into(),
                    ));
                }
                if self.kernel.kind != KernelKindName::GeodesicHmc {
                    return Err(Error::Config(
                        "dirichlet-bench reads epsilon/t_steps from a geodesic-hmc kernel and runs every sampler"
                            .into(),
                    ));
                }
                if self.ladder.is_some() {
                    return Err(Error::Config(
                        "dirichlet-bench does not support tempering".into(),
                    ));
                }
            }
        }

        Ok(resolved)
    }
}

/// Parse a config from JSON text. Parse errors carry the offending line.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    cfg.resolve()?;
    Ok(cfg)
}

/// Load and validate a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// Serialize a config as pretty JSON.
pub fn config_to_json(cfg: &ExperimentConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config serialization cannot fail")
}

fn set_path(
    node: &mut serde_json::Value,
    segments: &[&str],
    value: serde_json::Value,
    full_path: &str,
) -> Result<()> {
    let obj = node.as_object_mut().ok_or_else(|| {
        Error::Config(format!(
            "override path {full_path:?} does not address an object"
        ))
    })?;
    match segments {
        [] => Err(Error::Config(format!("empty override path {full_path:?}"))),
        [leaf] => {
            obj.insert(leaf.to_string(), value);
            Ok(())
        }
        [head, rest @ ..] => {
            let child = obj
                .entry(head.to_string())
                .or_insert_with(|| serde_json::Value::Object(Default::default()));
            set_path(child, rest, value, full_path)
        }
    }
}

/// Apply `key=value` overrides (dotted paths, values parsed as JSON with a
/// string fallback) and re-validate.
pub fn apply_overrides(cfg: &ExperimentConfig, overrides: &[String]) -> Result<ExperimentConfig> {
    let mut value = serde_json::to_value(cfg).expect("config serialization cannot fail");
    for spec in overrides {
        let (path, raw) = spec.split_once('=').ok_or_else(|| {
            Error::Config(format!("override {spec:?} is not of the form key=value"))
        })?;
        let parsed: serde_json::Value = serde_json::from_str(raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        let segments: Vec<&str> = path.split('.').collect();
        set_path(&mut value, &segments, parsed, path)?;
    }
    let cfg: ExperimentConfig = serde_json::from_value(value)
        .map_err(|e| Error::Config(format!("override produced an invalid config: {e}")))?;
    cfg.resolve()?;
    Ok(cfg)
}

/// Names of the built-in presets.
pub const PRESET_NAMES: [&str; 5] = [
    "figure4",
    "figure5",
    "table1",
    "eigenmodel",
    "eigenmodel-pt",
];

/// A named preset configuration compiled into the library.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let hmc = |eps: EpsilonSpec| KernelConfig {
        kind: KernelKindName::GeodesicHmc,
        epsilon: eps,
        t_steps: Some(20),
        space: None,
    };
    let cfg = match name {
        "figure4" => ExperimentConfig {
            experiment: ExperimentKind::Bvmf,
            kernel: hmc(EpsilonSpec::Scalar(0.01)),
            ladder: None,
            n_samples: 200,
            burn_in: None,
            seed: 20130521,
            dataset: None,
            output: PathBuf::from("out/figure4"),
            bvmf: Some(BvmfSection {
                a_diag: vec![-20.0, -10.0, 0.0, 10.0, 20.0],
                c1_values: vec![0.0, 40.0, 80.0],
            }),
            volleyball: None,
            eigenmodel: None,
            dirichlet_bench: None,
        },
        "figure5" => {
            let mut cfg = preset("figure4")?;
            cfg.ladder = Some(LadderConfig {
                rhos: (1..=10).map(|k| k as f64 / 10.0).collect(),
                exchanges_per_sweep: 10,
            });
            cfg.output = PathBuf::from("out/figure5");
            cfg
        }
        "table1" => ExperimentConfig {
            experiment: ExperimentKind::DirichletBench,
            kernel: hmc(EpsilonSpec::Scalar(0.01)),
            ladder: None,
            n_samples: 20_000,
            burn_in: None,
            seed: 20130521,
            dataset: None,
            output: PathBuf::from("out/table1"),
            bvmf: None,
            volleyball: None,
            eigenmodel: None,
            dirichlet_bench: Some(DirichletBenchSection {
                alphas: vec![0.1, 0.5, 1.0, 5.0],
            }),
        },
        "eigenmodel" => ExperimentConfig {
            experiment: ExperimentKind::Eigenmodel,
            kernel: hmc(EpsilonSpec::PerBlock(vec![0.005, 0.1, 0.001])),
            ladder: None,
            n_samples: 1000,
            burn_in: None,
            seed: 20130521,
            dataset: None,
            output: PathBuf::from("out/eigenmodel"),
            bvmf: None,
            volleyball: None,
            eigenmodel: Some(EigenmodelSection {
                p: 3,
                synthetic: None,
            }),
            dirichlet_bench: None,
        },
        "eigenmodel-pt" => {
            let mut cfg = preset("eigenmodel")?;
            cfg.ladder = Some(LadderConfig {
                rhos: crate::tempering::TemperatureLadder::geometric(0.05, 20)?
                    .rhos()
                    .to_vec(),
                exchanges_per_sweep: 10,
            });
            cfg.output = PathBuf::from("out/eigenmodel-pt");
            cfg
        }
        other => {
            return Err(Error::Config(format!(
                "unknown preset {other:?}; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    // Validate, but hand back the unresolved form so later overrides keep
    // relative defaults (burn-in) relative.
    cfg.resolve()?;
    Ok(cfg)
}
