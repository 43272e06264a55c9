//! The four channel constructions behind one trait, registered by name and
//! selected at runtime from config or CLI.

use std::collections::BTreeMap;

use super::{
    build_exact_impl, build_image_oracle_impl, build_los_oracle_impl, build_paraxial_impl,
    ChannelMatrix, Provenance, Scenario,
};
use crate::error::Result;

/// A channel-matrix construction strategy.
pub trait ChannelBuilder: Send + Sync {
    /// Registry key, e.g. `"exact"`.
    fn name(&self) -> &'static str;
    fn provenance(&self) -> Provenance;
    fn build(&self, scenario: &Scenario) -> Result<ChannelMatrix>;
}

/// Exact spectral synthesis along the deformed contour.
pub struct ExactBuilder;

impl ChannelBuilder for ExactBuilder {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn provenance(&self) -> Provenance {
        Provenance::Exact
    }

    fn build(&self, scenario: &Scenario) -> Result<ChannelMatrix> {
        build_exact_impl(scenario)
    }
}

/// Closed-form spherical-wave entries; the direct-path reference.
pub struct LosOracleBuilder;

impl ChannelBuilder for LosOracleBuilder {
    fn name(&self) -> &'static str {
        "los-oracle"
    }

    fn provenance(&self) -> Provenance {
        Provenance::LosOracle
    }

    fn build(&self, scenario: &Scenario) -> Result<ChannelMatrix> {
        build_los_oracle_impl(scenario)
    }
}

/// Mirror-image construction: `-1` times the spherical wave from the source
/// mirrored across the surface. Exact for a perfect conductor.
pub struct ImageOracleBuilder;

impl ChannelBuilder for ImageOracleBuilder {
    fn name(&self) -> &'static str {
        "image-oracle"
    }

    fn provenance(&self) -> Provenance {
        Provenance::ImageOracle
    }

    fn build(&self, scenario: &Scenario) -> Result<ChannelMatrix> {
        build_image_oracle_impl(scenario)
    }
}

/// Ray-style construction: the image wave weighted by the Fresnel
/// reflectivity at the centroid incidence angle.
pub struct ParaxialBuilder;

impl ChannelBuilder for ParaxialBuilder {
    fn name(&self) -> &'static str {
        "paraxial"
    }

    fn provenance(&self) -> Provenance {
        Provenance::Paraxial
    }

    fn build(&self, scenario: &Scenario) -> Result<ChannelMatrix> {
        build_paraxial_impl(scenario)
    }
}

/// Exact spectral synthesis of the channel matrix.
pub fn build_exact(scenario: &Scenario) -> Result<ChannelMatrix> {
    build_exact_impl(scenario)
}

/// Closed-form direct-path reference matrix.
pub fn build_los_oracle(scenario: &Scenario) -> Result<ChannelMatrix> {
    build_los_oracle_impl(scenario)
}

/// Mirror-image reference matrix (exact for a perfect conductor).
pub fn build_image_oracle(scenario: &Scenario) -> Result<ChannelMatrix> {
    build_image_oracle_impl(scenario)
}

/// Reflectivity-weighted image matrix, the ray-tracing approximation.
pub fn build_paraxial(scenario: &Scenario) -> Result<ChannelMatrix> {
    build_paraxial_impl(scenario)
}

/// Name-keyed registry of channel builders. Iteration order is the sorted
/// key order, so listings and manifests are deterministic.
pub struct BuilderRegistry {
    entries: BTreeMap<&'static str, Box<dyn ChannelBuilder>>,
}

impl BuilderRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Registry pre-populated with the four built-in constructions.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(ExactBuilder));
        reg.register(Box::new(LosOracleBuilder));
        reg.register(Box::new(ImageOracleBuilder));
        reg.register(Box::new(ParaxialBuilder));
        reg
    }

    /// Registers a builder under its own name, replacing any previous entry.
    pub fn register(&mut self, builder: Box<dyn ChannelBuilder>) {
        self.entries.insert(builder.name(), builder);
    }

    pub fn get(&self, name: &str) -> Option<&dyn ChannelBuilder> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for BuilderRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
