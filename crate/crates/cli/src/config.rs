//! Experiment configuration: a single TOML file with unit-explicit keys.
//! Unknown keys are rejected everywhere.

use std::path::Path;

use anyhow::{anyhow, bail, Context};
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use specmimo_core::channel::Scenario;
use specmimo_core::geometry::ArraySpec;
use specmimo_core::materials::{builtin_materials, Material};
use specmimo_core::quadrature::ContourConfig;
use specmimo_core::spectrum::{Indicator, KernelMode, PropagationPath, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig12,
    Fig13,
    Fig14,
    Custom,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
            Preset::Fig10 => "fig10",
            Preset::Fig12 => "fig12",
            Preset::Fig13 => "fig13",
            Preset::Fig14 => "fig14",
            Preset::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub preset: Preset,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
    /// Spectral-band handling: "tail" (complete synthesis, default) or
    /// "hard" (truncate at the propagating disk).
    #[serde(default)]
    pub indicator: Option<String>,
    #[serde(default)]
    pub threads: Option<usize>,
    /// SNR for single-point custom reports.
    #[serde(default = "default_snr_db")]
    pub snr_db: f64,
    #[serde(default)]
    pub contour: Option<ContourSection>,
    #[serde(default, rename = "materials")]
    pub extra_materials: Vec<MaterialSection>,
    #[serde(default)]
    pub scenario: Option<ScenarioSection>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

fn default_out_dir() -> String {
    ".".into()
}

fn default_snr_db() -> f64 {
    0.0
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSection {
    pub kappa_min_ratio: Option<f64>,
    pub n_nodes: Option<usize>,
    pub rel_tol: Option<f64>,
    pub tail_cutoff: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    pub name: String,
    pub n2_real: f64,
    #[serde(default)]
    pub n2_imag: f64,
    #[serde(default)]
    pub perfect_conductor: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub frequency_ghz: f64,
    pub d0_m: f64,
    pub material: String,
    /// "los" | "reflected" | "total"
    pub path: String,
    /// "between" (default) | "below"
    #[serde(default)]
    pub region: Option<String>,
    /// Channel construction: "exact" (default), "los-oracle",
    /// "image-oracle" or "paraxial".
    #[serde(default)]
    pub builder: Option<String>,
    pub tx: ArraySection,
    pub rx: ArraySection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub n_antennas: usize,
    pub spacing_m: f64,
    #[serde(default)]
    pub tilt_deg: f64,
    pub centroid_m: [f64; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// "snr_db" | "rx_x_m" | "rx_z_m"
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let config: ExperimentConfig =
            toml::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if let Some(ind) = &self.indicator {
            parse_indicator(ind)?;
        }
        match self.preset {
            Preset::Custom => {
                let scenario = self
                    .scenario
                    .as_ref()
                    .ok_or_else(|| anyhow!("preset \"custom\" requires a [scenario] section"))?;
                self.build_scenario(scenario)?.validate()?;
                if let Some(sweep) = &self.sweep {
                    sweep.validate()?;
                }
            }
            _ => {
                if self.scenario.is_some() || self.sweep.is_some() {
                    bail!(
                        "preset \"{}\" is self-contained; remove the [scenario]/[sweep] sections \
                         or switch to preset = \"custom\"",
                        self.preset.name()
                    );
                }
            }
        }
        for m in &self.extra_materials {
            m.to_material()?;
        }
        Ok(())
    }

    /// Builtin materials extended by the config's table; config entries win
    /// on name clashes.
    pub fn material_table(&self) -> anyhow::Result<Vec<Material>> {
        let mut table = builtin_materials();
        for section in &self.extra_materials {
            let material = section.to_material()?;
            table.retain(|m| !m.name.eq_ignore_ascii_case(&material.name));
            table.push(material);
        }
        Ok(table)
    }

    pub fn find_material(&self, name: &str) -> anyhow::Result<Material> {
        self.material_table()?
            .into_iter()
            .find(|m| m.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| anyhow!("unknown material \"{name}\""))
    }

    pub fn indicator(&self) -> anyhow::Result<Indicator> {
        match &self.indicator {
            Some(s) => parse_indicator(s),
            None => Ok(Indicator::Tail),
        }
    }

    pub fn contour(&self) -> anyhow::Result<ContourConfig> {
        let mut contour = ContourConfig {
            indicator: self.indicator()?,
            ..ContourConfig::default()
        };
        if let Some(section) = &self.contour {
            if let Some(v) = section.kappa_min_ratio {
                contour.kappa_min_ratio = v;
            }
            if let Some(v) = section.n_nodes {
                contour.n_nodes = v;
            }
            if let Some(v) = section.rel_tol {
                contour.rel_tol = v;
            }
            if let Some(v) = section.tail_cutoff {
                contour.tail_cutoff = v;
            }
        }
        contour.validate()?;
        Ok(contour)
    }

    pub fn build_scenario(&self, section: &ScenarioSection) -> anyhow::Result<Scenario> {
        let path = match section.path.as_str() {
            "los" => PropagationPath::LosOnly,
            "reflected" => PropagationPath::ReflectedOnly,
            "total" => PropagationPath::Total,
            other => bail!("unknown path \"{other}\" (expected los|reflected|total)"),
        };
        let region = match section.region.as_deref() {
            None | Some("between") => Region::Between,
            Some("below") => Region::Below,
            Some(other) => bail!("unknown region \"{other}\" (expected between|below)"),
        };
        Ok(Scenario {
            frequency: section.frequency_ghz * 1e9,
            material: self.find_material(&section.material)?,
            surface_offset: section.d0_m,
            tx: section.tx.to_array_spec()?,
            rx: section.rx.to_array_spec()?,
            mode: KernelMode { path, region },
            contour: self.contour()?,
        })
    }
}

impl MaterialSection {
    pub fn to_material(&self) -> anyhow::Result<Material> {
        if self.perfect_conductor {
            Ok(Material::conductor(self.name.clone()))
        } else {
            Material::dielectric(
                self.name.clone(),
                num_complex::Complex64::new(self.n2_real, self.n2_imag),
            )
            .map_err(|e| anyhow!(e.to_string()))
        }
    }
}

impl ArraySection {
    pub fn to_array_spec(&self) -> anyhow::Result<ArraySpec> {
        ArraySpec::new(
            self.n_antennas,
            self.spacing_m,
            self.tilt_deg.to_radians(),
            Vector3::new(self.centroid_m[0], self.centroid_m[1], self.centroid_m[2]),
        )
        .map_err(|e| anyhow!(e.to_string()))
    }
}

impl SweepSection {
    pub fn validate(&self) -> anyhow::Result<()> {
        match self.variable.as_str() {
            "snr_db" | "rx_x_m" | "rx_z_m" => {}
            other => bail!("unknown sweep variable \"{other}\" (expected snr_db|rx_x_m|rx_z_m)"),
        }
        if self.steps == 0 {
            bail!("sweep needs at least one step");
        }
        if self.steps > 1 && !(self.stop > self.start) {
            bail!("sweep stop must exceed start for more than one step");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        (0..self.steps)
            .map(|i| {
                self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
            })
            .collect()
    }
}

pub fn parse_indicator(s: &str) -> anyhow::Result<Indicator> {
    match s {
        "hard" => Ok(Indicator::Hard),
        "tail" => Ok(Indicator::Tail),
        other => bail!("unknown indicator \"{other}\" (expected hard|tail)"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUSTOM: &str = r#"
preset = "custom"
out_dir = "out"
snr_db = 10.0

[scenario]
frequency_ghz = 57.5
d0_m = 15.0
material = "concrete"
path = "total"

[scenario.tx]
n_antennas = 8
spacing_m = 0.0807
centroid_m = [0.0, 0.0, 0.0]

[scenario.rx]
n_antennas = 8
spacing_m = 0.0807
centroid_m = [0.0, 0.0, 10.0]
"#;

    #[test]
    fn custom_config_roundtrip() {
        let cfg: ExperimentConfig = toml::from_str(CUSTOM).unwrap();
        cfg.validate().unwrap();
        let scenario = cfg.build_scenario(cfg.scenario.as_ref().unwrap()).unwrap();
        assert_eq!(scenario.rx.n_antennas, 8);
        assert_eq!(scenario.mode.path, PropagationPath::Total);
        assert_eq!(scenario.mode.region, Region::Between);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = format!("{CUSTOM}\nbogus_key = 1\n");
        assert!(toml::from_str::<ExperimentConfig>(&bad).is_err());
        let bad_scenario = CUSTOM.replace("path = \"total\"", "path = \"total\"\nwhatever = 2");
        assert!(toml::from_str::<ExperimentConfig>(&bad_scenario).is_err());
    }

    #[test]
    fn preset_with_scenario_rejected() {
        let text = CUSTOM.replace("preset = \"custom\"", "preset = \"fig4\"");
        let cfg: ExperimentConfig = toml::from_str(&text).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn material_table_extends_builtins() {
        let text = format!(
            "{CUSTOM}\n[[materials]]\nname = \"glass\"\nn2_real = 2.0\nn2_imag = 0.1\n"
        );
        let cfg: ExperimentConfig = toml::from_str(&text).unwrap();
        cfg.validate().unwrap();
        assert!(cfg.find_material("glass").is_ok());
        assert!(cfg.find_material("concrete").is_ok());
        assert!(cfg.find_material("unobtanium").is_err());
    }

    #[test]
    fn sweep_values_inclusive() {
        let s = SweepSection {
            variable: "snr_db".into(),
            start: -10.0,
            stop: 30.0,
            steps: 5,
        };
        s.validate().unwrap();
        assert_eq!(s.values(), vec![-10.0, 0.0, 10.0, 20.0, 30.0]);
    }
}
