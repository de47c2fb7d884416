//! TOML run configuration.
//!
//! ```toml
//! [medium]
//! model = "iid_cell"
//! a_star = 1.0
//! nu = 0.25
//!
//! [[scheme]]
//! kind = "msfem"
//!
//! [[scheme]]
//! kind = "hmm"
//! delta_over_h = 0.25
//!
//! [ensemble]
//! realizations = 5000
//! epsilons = [0.0009765625]
//! meshes = [16]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::elliptic::SourceTerm;
use crate::error::{Error, Result};
use crate::harness::ExperimentPlan;
use crate::random_media::{MediumModel, MediumSpec};
use crate::schemes::{SchemeConfig, SchemeKind};

pub const DEFAULT_MICRO_POINTS_PER_EPS: u32 = 16;
pub const DEFAULT_PROBE_COUNT: usize = 9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    pub model: MediumModel,
    pub a_star: f64,
    pub nu: f64,
    /// Defaults to 1 for short-range media; required for long-range media.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Single correlation length, used when `ensemble.epsilons` is absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default = "default_micro")]
    pub micro_points_per_eps: u32,
}

fn default_micro() -> u32 {
    DEFAULT_MICRO_POINTS_PER_EPS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Fem,
    Msfem,
    Hmm,
    Hybrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    pub kind: SchemeName,
    /// Overridden by `ensemble.meshes` when that is set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_elements: Option<usize>,
    /// HMM patch length relative to `h`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_over_h: Option<f64>,
    /// HMM patch length in absolute units; needs `n_elements`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_patches: Option<u32>,
}

impl SchemeSection {
    fn field(i: usize, name: &str) -> String {
        format!("scheme[{i}].{name}")
    }

    /// Scheme with the given mesh (or the section's own `n_elements`).
    pub fn to_config(&self, i: usize, n: Option<usize>) -> Result<SchemeConfig> {
        let n = n.or(self.n_elements).ok_or_else(|| Error::config(Self::field(i, "n_elements"), "missing; set it here or in ensemble.meshes"))?;
        let only = |allowed: &[&str]| -> Result<()> {
            for (name, set) in [("delta_over_h", self.delta_over_h.is_some()), ("delta", self.delta.is_some()), ("m_patches", self.m_patches.is_some())] {
                if set && !allowed.contains(&name) {
                    return Err(Error::config(Self::field(i, name), format!("not a parameter of {:?}", self.kind)));
                }
            }
            Ok(())
        };
        let kind = match self.kind {
            SchemeName::Fem => {
                only(&[])?;
                SchemeKind::Fem
            }
            SchemeName::Msfem => {
                only(&[])?;
                SchemeKind::Msfem
            }
            SchemeName::Hmm => {
                only(&["delta_over_h", "delta"])?;
                let ratio = match (self.delta_over_h, self.delta) {
                    (Some(r), None) => r,
                    (None, Some(d)) => {
                        let own = self.n_elements.ok_or_else(|| Error::config(Self::field(i, "delta"), "absolute delta needs n_elements in the same section"))?;
                        d * own as f64
                    }
                    (Some(_), Some(_)) => return Err(Error::config(Self::field(i, "delta"), "give either delta or delta_over_h, not both")),
                    (None, None) => return Err(Error::config(Self::field(i, "delta_over_h"), "HMM needs a patch length")),
                };
                SchemeKind::Hmm { delta_over_h: ratio }
            }
            SchemeName::Hybrid => {
                only(&["m_patches"])?;
                SchemeKind::Hybrid { m_patches: self.m_patches.ok_or_else(|| Error::config(Self::field(i, "m_patches"), "hybrid needs m_patches"))? }
            }
        };
        let cfg = SchemeConfig::new(kind, n);
        cfg.validate().map_err(|e| match e {
            Error::Config { field, message } => Error::config(field.replacen("scheme", &format!("scheme[{i}]"), 1), message),
            other => other,
        })?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbesSection {
    /// Explicit probe points; otherwise `count` equispaced interior points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl ProbesSection {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        match (&self.points, self.count) {
            (Some(_), Some(_)) => Err(Error::config("probes", "give either points or count, not both")),
            (Some(p), None) => {
                if p.is_empty() || p.iter().any(|x| !(0.0..=1.0).contains(x)) {
                    return Err(Error::config("probes.points", "need at least one point, all inside [0, 1]"));
                }
                Ok(p.clone())
            }
            (None, c) => {
                let c = c.unwrap_or(DEFAULT_PROBE_COUNT);
                if c == 0 {
                    return Err(Error::config("probes.count", "need at least one probe"));
                }
                Ok((1..=c).map(|i| i as f64 / (c + 1) as f64).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub realizations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meshes: Option<Vec<usize>>,
    /// Index of the first realization.
    #[serde(default)]
    pub first_index: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

fn default_directory() -> PathBuf {
    PathBuf::from("corrector-lab-out")
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { directory: default_directory(), formats: default_formats() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub medium: MediumSection,
    #[serde(rename = "scheme")]
    pub schemes: Vec<SchemeSection>,
    #[serde(default)]
    pub source: SourceTerm,
    #[serde(default)]
    pub probes: ProbesSection,
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Line and column (1-based) of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.chars().count(), |p| before[p + 1..].chars().count()) + 1;
    (line, col)
}

impl RunConfig {
    /// Parses, validates and materializes defaults.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().trim().to_string();
            match e.span() {
                Some(span) => {
                    let (l, c) = line_col(text, span.start);
                    Error::Parse(format!("line {l}, column {c}: {msg}"))
                }
                None => Error::Parse(msg),
            }
        })?;
        cfg.materialize()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Internal(format!("config serialization: {e}")))
    }

    fn materialize(&mut self) -> Result<()> {
        let long = self.medium.model.is_long_range();
        if self.medium.alpha.is_none() {
            if long {
                return Err(Error::config("medium.alpha", "long-range media need alpha in (0, 1)"));
            }
            self.medium.alpha = Some(1.0);
        }
        if self.probes.points.is_none() {
            self.probes = ProbesSection { points: Some(self.probes.resolve()?), count: None };
        }
        if self.ensemble.epsilons.is_none() {
            let eps = self.medium.epsilon.ok_or_else(|| Error::config("ensemble.epsilons", "missing; set it or medium.epsilon"))?;
            self.ensemble.epsilons = Some(vec![eps]);
        }
        if self.ensemble.meshes.is_none() {
            let mut ns: Vec<usize> = self.schemes.iter().filter_map(|s| s.n_elements).collect();
            ns.sort_unstable();
            ns.dedup();
            match ns.as_slice() {
                [n] if self.schemes.iter().all(|s| s.n_elements.is_some()) => self.ensemble.meshes = Some(vec![*n]),
                [] | [_] => return Err(Error::config("ensemble.meshes", "missing; set it or n_elements in every scheme")),
                _ => return Err(Error::config("ensemble.meshes", "schemes disagree on n_elements; set ensemble.meshes")),
            }
        }
        // absolute HMM patch lengths become ratios so that meshes can vary
        for (i, s) in self.schemes.iter_mut().enumerate() {
            if s.kind == SchemeName::Hmm && s.delta.is_some() && s.delta_over_h.is_none() {
                let own = s.n_elements.ok_or_else(|| Error::config(format!("scheme[{i}].delta"), "absolute delta needs n_elements in the same section"))?;
                s.delta_over_h = Some(s.delta.take().unwrap() * own as f64);
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::config("scheme", "at least one [[scheme]] section is required"));
        }
        self.plan()?.validate()
    }

    pub fn medium_spec(&self, epsilon: f64) -> MediumSpec {
        MediumSpec {
            model: self.medium.model,
            a_star: self.medium.a_star,
            nu: self.medium.nu,
            alpha: self.medium.alpha.unwrap_or(1.0),
            epsilon,
            micro_points_per_eps: self.medium.micro_points_per_eps,
            seed: self.ensemble.seed,
        }
    }

    pub fn epsilons(&self) -> Vec<f64> {
        self.ensemble.epsilons.clone().unwrap_or_default()
    }

    pub fn meshes(&self) -> Vec<usize> {
        self.ensemble.meshes.clone().unwrap_or_default()
    }

    pub fn probes(&self) -> Vec<f64> {
        self.probes.points.clone().unwrap_or_default()
    }

    /// Scheme configurations on mesh `n`.
    pub fn schemes_on(&self, n: usize) -> Result<Vec<SchemeConfig>> {
        self.schemes.iter().enumerate().map(|(i, s)| s.to_config(i, Some(n))).collect()
    }

    pub fn plan(&self) -> Result<ExperimentPlan> {
        let epsilons = self.epsilons();
        let meshes = self.meshes();
        let first_eps = *epsilons.first().ok_or_else(|| Error::config("ensemble.epsilons", "ladder is empty"))?;
        let first_n = *meshes.first().ok_or_else(|| Error::config("ensemble.meshes", "ladder is empty"))?;
        Ok(ExperimentPlan {
            medium: self.medium_spec(first_eps),
            schemes: self.schemes_on(first_n)?,
            source: self.source.clone(),
            probes: self.probes(),
            realizations: self.ensemble.realizations,
            epsilons,
            meshes,
            first_index: self.ensemble.first_index,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.ensemble.seed = seed;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[medium]
model = "iid_cell"
a_star = 1.0
nu = 0.25
epsilon = 0.0009765625

[[scheme]]
kind = "msfem"
n_elements = 16

[ensemble]
realizations = 10
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.source, SourceTerm::ConstantOne);
        let p = c.probes();
        assert_eq!(p.len(), 9);
        assert!((p[0] - 0.1).abs() < 1e-15 && (p[8] - 0.9).abs() < 1e-15);
        assert_eq!(c.meshes(), vec![16]);
        assert_eq!(c.medium.micro_points_per_eps, 16);
        assert_eq!(c.medium.alpha, Some(1.0));
        let plan = c.plan().unwrap();
        assert_eq!(plan.schemes[0], SchemeConfig::new(SchemeKind::Msfem, 16));
    }

    #[test]
    fn round_trip() {
        let text = format!("{MINIMAL}\n[[scheme]]\nkind = \"hmm\"\nn_elements = 16\ndelta = 0.015625\n\n[[scheme]]\nkind = \"hybrid\"\nm_patches = 4\nn_elements = 16\n");
        let c = RunConfig::parse(&text).unwrap();
        assert_eq!(c.schemes[1].delta_over_h, Some(0.25));
        let again = RunConfig::parse(&c.to_toml().unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn ellipticity_violation_is_named() {
        let text = MINIMAL.replace("nu = 0.25", "nu = 1.5");
        match RunConfig::parse(&text) {
            Err(Error::Config { field, message }) => {
                assert_eq!(field, "medium.nu");
                assert!(message.contains("ellipticity"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let text = MINIMAL.replace("nu = 0.25", "nu = 0.25\ncolour = 3");
        match RunConfig::parse(&text) {
            Err(Error::Parse(m)) => assert!(m.contains("line 6"), "{m}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(RunConfig::parse("[medium\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn scheme_parameter_checks() {
        let bad = format!("{MINIMAL}\n[[scheme]]\nkind = \"hmm\"\nn_elements = 16\ndelta_over_h = 1.5\n");
        assert!(matches!(RunConfig::parse(&bad), Err(Error::Config { .. })));
        let bad = format!("{MINIMAL}\n[[scheme]]\nkind = \"fem\"\nn_elements = 16\nm_patches = 2\n");
        assert!(matches!(RunConfig::parse(&bad), Err(Error::Config { field, .. }) if field == "scheme[1].m_patches"));
        let bad = MINIMAL.replace("n_elements = 16", "n_elements = 256");
        assert!(matches!(RunConfig::parse(&bad), Err(Error::Config { .. })));
        let lrc = MINIMAL.replace("iid_cell", "transformed_lrc");
        assert!(matches!(RunConfig::parse(&lrc), Err(Error::Config { field, .. }) if field == "medium.alpha"));
    }
}
