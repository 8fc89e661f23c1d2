//! JSON model files.

use serde::{Deserialize, Serialize};

use crtypes_core::coeff::default_coeff_set;
use crtypes_core::fixtures::ModelFixture;
use crtypes_core::psh::Grid;
use crtypes_core::{parse_poly, Frame, GaussianRational, Hypersurface, WeightSystem};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    pub z: Vec<u32>,
    pub w: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub bracket_cap: u32,
    pub degree_cap: u32,
    pub coeff_set: Vec<String>,
    pub grid_scale: String,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            bracket_cap: 8,
            degree_cap: 3,
            coeff_set: default_coeff_set().iter().map(|c| c.to_string()).collect(),
            grid_scale: "1".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub rho: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Weights>,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_contact: Option<u32>,
}

impl From<&ModelFixture> for ModelFile {
    fn from(f: &ModelFixture) -> Self {
        ModelFile {
            name: Some(f.name.clone()),
            n: f.n,
            rho: f.rho.clone(),
            frame: f.frame.clone(),
            weights: None,
            caps: Caps::default(),
            a_contact: f.a_contact,
        }
    }
}

/// A model file after parsing and validation.
pub struct Model {
    pub file: ModelFile,
    pub hypersurface: Hypersurface,
    pub frame: Option<Frame>,
    pub coeff_set: Vec<GaussianRational>,
}

pub fn parse_coeff(s: &str) -> Result<GaussianRational, CliError> {
    let p = parse_poly(s, 1).map_err(|e| CliError::Input(format!("coefficient '{}': {}", s, e)))?;
    if p.degree().unwrap_or(0) > 0 {
        return Err(CliError::Input(format!("coefficient '{}' is not a constant", s)));
    }
    Ok(p.constant_term())
}

pub fn parse_coeff_list(items: &[String]) -> Result<Vec<GaussianRational>, CliError> {
    if items.is_empty() {
        return Err(CliError::Input("empty coefficient set".into()));
    }
    items.iter().map(|s| parse_coeff(s.trim())).collect()
}

pub fn grid_for(scale: &str) -> Result<Grid, CliError> {
    let s = parse_coeff(scale)?;
    if s.is_zero() {
        return Err(CliError::Input("grid_scale must be nonzero".into()));
    }
    Ok(Grid::default().scaled(&s))
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("model file: {}", e)))
    }

    pub fn load(self) -> Result<Model, CliError> {
        if self.n < 2 {
            return Err(CliError::Input("n must be at least 2".into()));
        }
        let nz = self.n - 1;
        let rho = parse_poly(&self.rho, nz).map_err(|e| CliError::Input(format!("rho: {}", e)))?;
        let hypersurface = Hypersurface::from_raw(rho).map_err(|e| CliError::Input(format!("rho: {}", e)))?;
        let frame = match &self.frame {
            None => None,
            Some(rows) => {
                let mut parsed = Vec::new();
                for (j, r) in rows.iter().enumerate() {
                    let mut row = Vec::new();
                    for (h, s) in r.iter().enumerate() {
                        row.push(parse_poly(s, nz).map_err(|e| CliError::Input(format!("frame[{}][{}]: {}", j, h, e)))?);
                    }
                    parsed.push(row);
                }
                Some(Frame::new(nz, parsed).map_err(|e| CliError::Input(format!("frame: {}", e)))?)
            }
        };
        if let Some(w) = &self.weights {
            if w.z.len() != nz {
                return Err(CliError::Input(format!("weights.z needs {} entries", nz)));
            }
        }
        let coeff_set = parse_coeff_list(&self.caps.coeff_set)?;
        grid_for(&self.caps.grid_scale)?;
        Ok(Model { file: self, hypersurface, frame, coeff_set })
    }
}

impl Model {
    pub fn nz(&self) -> usize {
        self.hypersurface.nz()
    }

    /// The given frame, or `{L_1, .., L_{n-2}}`.
    pub fn frame_or_default(&self) -> Frame {
        self.frame.clone().unwrap_or_else(|| {
            let cols: Vec<usize> = (1..self.nz()).collect();
            Frame::coordinate(self.nz(), &cols)
        })
    }

    pub fn weights(&self) -> Option<WeightSystem> {
        self.file.weights.as_ref().map(|w| WeightSystem::new(w.z.clone(), w.w))
    }
}
