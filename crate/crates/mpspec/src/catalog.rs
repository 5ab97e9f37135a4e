//! Versioned particle parameter catalog.
//!
//! Particle and environment defaults live in a JSON document, not in code.
//! The built-in catalog ships with the crate; `MPSPEC_CATALOG` or an explicit
//! path overrides it. Boundary values accept unit suffixes (`"63.8 emu/g"`,
//! `"25 nm"`, `"250 Oe"`); bare numbers are SI.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::physics::{BindingState, Environment, ParticleModel, SampleSpec};
use crate::units::{Dimension, Quantity};

/// Environment variable that overrides the catalog path.
pub const CATALOG_ENV_VAR: &str = "MPSPEC_CATALOG";

/// Built-in catalog document.
pub const DEFAULT_CATALOG_JSON: &str = include_str!("../catalog/particles.json");

#[derive(Debug, Deserialize)]
struct RawCatalog {
    version: String,
    environment: RawEnvironment,
    particles: BTreeMap<String, RawParticle>,
}

#[derive(Debug, Deserialize)]
struct RawEnvironment {
    temperature: Quantity,
    viscosity: Quantity,
}

#[derive(Debug, Deserialize)]
struct RawParticle {
    d_core: Quantity,
    d_hydro: Quantity,
    m_sat: Quantity,
    density: Quantity,
    anisotropy_k: Quantity,
    tau0: Quantity,
    vial: Option<RawVial>,
}

#[derive(Debug, Deserialize)]
struct RawVial {
    weight: Quantity,
    molar_amount: Quantity,
}

/// Resolved catalog: SI-valued particle models plus the shared environment.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub version: String,
    pub environment: Environment,
    particles: BTreeMap<String, ParticleModel>,
    vials: BTreeMap<String, (f64, f64)>,
}

impl Catalog {
    /// Parses a catalog document.
    pub fn from_json(json: &str) -> Result<Catalog> {
        let raw: RawCatalog = serde_json::from_str(json)
            .map_err(|e| Error::InvalidInput(format!("catalog parse error: {e}")))?;
        let environment = Environment {
            temperature: raw.environment.temperature.to_si(Dimension::Temperature)?,
            viscosity: raw.environment.viscosity.to_si(Dimension::Viscosity)?,
        };
        environment.validate()?;

        let mut particles = BTreeMap::new();
        let mut vials = BTreeMap::new();
        for (name, p) in raw.particles {
            let model = ParticleModel {
                name: name.clone(),
                d_core: p.d_core.to_si(Dimension::Length)?,
                d_hydro: p.d_hydro.to_si(Dimension::Length)?,
                m_sat: p.m_sat.to_si(Dimension::SpecificMagnetization)?,
                density: p.density.to_si(Dimension::MassDensity)?,
                anisotropy_k: p.anisotropy_k.to_si(Dimension::EnergyDensity)?,
                tau0: p.tau0.to_si(Dimension::Time)?,
            };
            model.validate()?;
            if let Some(vial) = p.vial {
                vials.insert(
                    name.clone(),
                    (
                        vial.weight.to_si(Dimension::Mass)?,
                        vial.molar_amount.to_si(Dimension::Amount)?,
                    ),
                );
            }
            particles.insert(name, model);
        }
        Ok(Catalog {
            version: raw.version,
            environment,
            particles,
            vials,
        })
    }

    /// Built-in defaults.
    pub fn builtin() -> Catalog {
        Catalog::from_json(DEFAULT_CATALOG_JSON).expect("built-in catalog must parse")
    }

    /// Loads a catalog file.
    pub fn from_path(path: &Path) -> Result<Catalog> {
        let json = std::fs::read_to_string(path).map_err(|source| Error::IoFailure {
            path: path.display().to_string(),
            source,
        })?;
        Catalog::from_json(&json)
    }

    /// Resolution order: explicit path, then `MPSPEC_CATALOG`, then built-in.
    pub fn resolve(path: Option<&Path>) -> Result<Catalog> {
        if let Some(p) = path {
            return Catalog::from_path(p);
        }
        if let Ok(env_path) = std::env::var(CATALOG_ENV_VAR) {
            if !env_path.is_empty() {
                return Catalog::from_path(Path::new(&env_path));
            }
        }
        Ok(Catalog::builtin())
    }

    pub fn particle(&self, name: &str) -> Result<&ParticleModel> {
        self.particles.get(name).ok_or_else(|| Error::UnknownParticle {
            name: name.to_string(),
        })
    }

    pub fn particle_names(&self) -> Vec<&str> {
        self.particles.keys().map(String::as_str).collect()
    }

    /// Vial sample of a particle in a given binding state, when the catalog
    /// records vial amounts for it.
    pub fn sample(&self, name: &str, binding: BindingState) -> Result<SampleSpec> {
        let (weight, moles) = self.vials.get(name).ok_or_else(|| {
            Error::InvalidInput(format!("catalog has no vial amounts for {name:?}"))
        })?;
        let spec = SampleSpec {
            particle: name.to_string(),
            weight_amount: *weight,
            molar_amount: *moles,
            binding,
        };
        spec.validate()?;
        Ok(spec)
    }
}
