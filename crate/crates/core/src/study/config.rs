use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{generate_matrix, CaseSpec, GroupKey, RunOptions};
use crate::eigen::{Method, SolverSettings};
use crate::error::{Error, Result};
use crate::fem_beam::{BoundaryCondition, CrossSection};
use crate::materials::MaterialDatabase;

/// A case in a JSON config. Geometry in mm, temperature in °C.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    #[serde(default)]
    pub id: Option<String>,
    pub bc: BoundaryCondition,
    pub h1_mm: f64,
    pub h2_mm: f64,
    pub h3_mm: f64,
    #[serde(default = "default_width")]
    pub width_mm: f64,
    #[serde(default = "default_length")]
    pub length_m: f64,
    pub material: String,
    #[serde(default = "default_glass")]
    pub glass: String,
    pub temp_c: f64,
}

fn default_width() -> f64 {
    100.0
}

fn default_length() -> f64 {
    1.0
}

fn default_glass() -> String {
    "glass".into()
}

impl CaseConfig {
    pub fn to_spec(&self) -> Result<CaseSpec> {
        let section = CrossSection::from_mm(self.h1_mm, self.h2_mm, self.h3_mm, self.width_mm)?;
        if !(self.length_m > 0.0 && self.length_m.is_finite()) {
            return Err(Error::Config(format!(
                "length_m must be positive, got {}",
                self.length_m
            )));
        }
        let mut spec = CaseSpec::new(self.bc, section, &self.material, self.temp_c);
        if let Some(id) = &self.id {
            spec.id = id.clone();
        }
        spec.glass = self.glass.clone();
        spec.length = self.length_m;
        Ok(spec)
    }
}

/// Study configuration file. Every field is optional; missing fields take
/// the built-in defaults (the 63-case matrix, all methods, 3 modes,
/// 200 elements, tolerance 1e-5, 50 iterations).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    /// Material database replacing the built-in one; relative paths are
    /// resolved against the config file.
    #[serde(default)]
    pub materials: Option<PathBuf>,
    #[serde(default)]
    pub methods: Option<Vec<Method>>,
    #[serde(default)]
    pub modes: Option<usize>,
    #[serde(default)]
    pub elements: Option<usize>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub cases: Option<Vec<CaseConfig>>,
    /// Box-plot panels, e.g. `[["bc", "mode"], ["mode"]]`.
    #[serde(default)]
    pub group_by: Option<Vec<Vec<GroupKey>>>,
    #[serde(skip)]
    base_dir: Option<PathBuf>,
}

impl StudyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn cases(&self) -> Result<Vec<CaseSpec>> {
        match &self.cases {
            None => Ok(generate_matrix()),
            Some(list) if list.is_empty() => Err(Error::Config("`cases` is empty".into())),
            Some(list) => list.iter().map(CaseConfig::to_spec).collect(),
        }
    }

    pub fn options(&self) -> Result<RunOptions> {
        let defaults = SolverSettings::default();
        let settings = SolverSettings {
            tolerance: self.tolerance.unwrap_or(defaults.tolerance),
            max_iter: self.max_iter.unwrap_or(defaults.max_iter),
            modes: self.modes.unwrap_or(defaults.modes),
            rigid_mode_cutoff: None,
        };
        settings.validate()?;
        let options = RunOptions {
            methods: self.methods.clone().unwrap_or_else(|| Method::ALL.to_vec()),
            settings,
            elements: self.elements.unwrap_or(200),
        };
        if options.methods.is_empty() {
            return Err(Error::Config("`methods` is empty".into()));
        }
        Ok(options)
    }

    pub fn grouping(&self) -> Vec<Vec<GroupKey>> {
        self.group_by
            .clone()
            .unwrap_or_else(|| vec![vec![GroupKey::Bc, GroupKey::Mode], vec![GroupKey::Mode]])
    }

    pub fn database(&self) -> Result<MaterialDatabase> {
        match &self.materials {
            None => Ok(MaterialDatabase::builtin().clone()),
            Some(p) => {
                let path = match &self.base_dir {
                    Some(base) if p.is_relative() => base.join(p),
                    _ => p.clone(),
                };
                let text =
                    std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                MaterialDatabase::from_json(&text)
            }
        }
    }
}
