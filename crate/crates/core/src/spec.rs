//! JSON distribution specs.
//!
//! ```json
//! {"atoms": [{"x": 0.0, "p": 0.001}],
//!  "lattice": {"r": 0.0, "h": 1.0},
//!  "ac": {"weight": 0.999, "kind": "normal", "mean": 1.0, "variance": 1.0}}
//! ```
//!
//! `kind` is one of `normal`, `exponential` (`rate`, optional `loc`),
//! `uniform` (`left`, `right`), `mixture` (`components`, each a weighted
//! density object) or `tabulated` (`file` pointing at an `x,density` CSV, or
//! inline `x` and `density` arrays).

use crate::density::{DensityDescriptor, TabulatedDensity};
use crate::distribution::{Atom, Distribution, Lattice};
use crate::error::{QidError, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawAtom {
    pub x: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawLattice {
    pub r: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RawDensity {
    Normal {
        mean: f64,
        variance: f64,
    },
    Exponential {
        rate: f64,
        #[serde(default)]
        loc: f64,
    },
    Uniform {
        left: f64,
        right: f64,
    },
    Mixture {
        components: Vec<RawComponent>,
    },
    Tabulated {
        #[serde(default)]
        file: Option<PathBuf>,
        #[serde(default)]
        x: Option<Vec<f64>>,
        #[serde(default)]
        density: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawComponent {
    pub weight: f64,
    #[serde(flatten)]
    pub density: RawDensity,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RawSpec {
    #[serde(default)]
    pub atoms: Vec<RawAtom>,
    #[serde(default)]
    pub lattice: Option<RawLattice>,
    #[serde(default)]
    pub ac: Option<RawComponent>,
}

impl RawSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QidError::Schema(e.to_string()))
    }
}

fn read_density_csv(path: &Path) -> Result<TabulatedDensity> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().unwrap_or("").trim().replace(' ', "");
    if header != "x,density" {
        return Err(QidError::Schema(format!("{}: expected header \"x,density\"", path.display())));
    }
    let (mut xs, mut vs) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let mut cols = line.split(',').map(str::trim);
        let parse = |s: Option<&str>| -> Result<f64> {
            s.and_then(|s| s.parse().ok())
                .ok_or_else(|| QidError::Schema(format!("{}: bad row {}", path.display(), i + 2)))
        };
        xs.push(parse(cols.next())?);
        vs.push(parse(cols.next())?);
    }
    TabulatedDensity::from_nodes(&xs, vs)
}

fn build_density(raw: &RawDensity, base: Option<&Path>) -> Result<DensityDescriptor> {
    let d = match raw {
        RawDensity::Normal { mean, variance } => DensityDescriptor::normal(*mean, *variance),
        RawDensity::Exponential { rate, loc } => DensityDescriptor::Exponential { rate: *rate, loc: *loc },
        RawDensity::Uniform { left, right } => DensityDescriptor::uniform(*left, *right),
        RawDensity::Mixture { components } => {
            if components.is_empty() {
                return Err(QidError::Schema("mixture without components".into()));
            }
            let mut comps = Vec::new();
            for c in components {
                comps.push(crate::density::Component { weight: c.weight, density: build_density(&c.density, base)? });
            }
            DensityDescriptor::Mixture(comps)
        }
        RawDensity::Tabulated { file, x, density } => match (file, x, density) {
            (Some(f), None, None) => {
                let path = match base {
                    Some(b) if f.is_relative() => b.join(f),
                    _ => f.clone(),
                };
                DensityDescriptor::Tabulated(read_density_csv(&path)?)
            }
            (None, Some(x), Some(v)) => DensityDescriptor::Tabulated(TabulatedDensity::from_nodes(x, v.clone())?),
            _ => return Err(QidError::Schema("tabulated density needs either \"file\" or both \"x\" and \"density\"".into())),
        },
    };
    d.validate()?;
    Ok(d)
}

/// Builds a validated [`Distribution`]; relative CSV paths resolve against `base`.
pub fn validate_spec(raw: &RawSpec, base: Option<&Path>) -> Result<Distribution> {
    let atoms = raw.atoms.iter().map(|a| Atom { x: a.x, p: a.p }).collect();
    let lattice = raw.lattice.as_ref().map(|l| Lattice { r: l.r, h: l.h });
    let (w, ac) = match &raw.ac {
        Some(c) => (c.weight, Some(build_density(&c.density, base)?)),
        None => (0.0, None),
    };
    Distribution::new(atoms, lattice, w, ac)
}

pub fn parse_spec(text: &str) -> Result<Distribution> {
    validate_spec(&RawSpec::from_json(text)?, None)
}

pub fn load_spec(path: &Path) -> Result<Distribution> {
    let text = std::fs::read_to_string(path)?;
    validate_spec(&RawSpec::from_json(&text)?, path.parent())
}
