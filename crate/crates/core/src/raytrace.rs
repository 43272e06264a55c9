//! Exact-versus-paraxial comparison: sweep the array aperture relative to the
//! equivalent range and measure how far the ray-style construction drifts
//! from the full spectral synthesis.

use nalgebra::Vector3;

use crate::channel::{build_exact, build_paraxial, Scenario};
use crate::error::{Error, Result};
use crate::geometry::ArraySpec;
use crate::materials::{Material, SPEED_OF_LIGHT};
use crate::mimo::{normalized_eigenvalues, optimal_spacing, waterfill_capacity, SpacingQuery};
use crate::quadrature::ContourConfig;
use crate::spectrum::{KernelMode, Region};

/// Aperture sweep description. Antenna counts grow with the aperture at the
/// spacing optimized for the reflected link, so `ratios` directly control the
/// aperture-to-range ratio `L / De`.
#[derive(Clone, Debug)]
pub struct ApertureSweep {
    /// Aperture over equivalent range, ascending.
    pub ratios: Vec<f64>,
    /// Centroid separation `D`, meters.
    pub range: f64,
    /// Source-to-surface distance `D0`, meters.
    pub surface_offset: f64,
    pub frequency: f64,
    pub snr_db: f64,
    pub material: Material,
    pub contour: ContourConfig,
}

impl ApertureSweep {
    /// The reference configuration: 57.5 GHz, `D = 2` m, `D0 = 3` m (so
    /// `De = 4` m) at 0 dB SNR. The default ratio grid sits in the regime
    /// where the paraxial error grows monotonically.
    pub fn reference(material: Material, contour: ContourConfig) -> Self {
        Self {
            ratios: vec![0.05, 0.35, 0.5, 0.75, 1.0],
            range: 2.0,
            surface_offset: 3.0,
            frequency: 57.5e9,
            snr_db: 0.0,
            material,
            contour,
        }
    }

    pub fn equivalent_range(&self) -> f64 {
        2.0 * self.surface_offset - self.range
    }

    pub fn validate(&self) -> Result<()> {
        if self.ratios.is_empty() {
            return Err(Error::Scenario("aperture sweep needs at least one ratio".into()));
        }
        if !self.ratios.windows(2).all(|w| w[0] < w[1]) || !(self.ratios[0] > 0.0) {
            return Err(Error::Scenario(
                "aperture ratios must be positive and strictly ascending".into(),
            ));
        }
        if !(self.range > 0.0) || self.range >= self.surface_offset {
            return Err(Error::Scenario(format!(
                "need 0 < range < surface offset, got D = {}, D0 = {}",
                self.range, self.surface_offset
            )));
        }
        Ok(())
    }
}

/// One point of the sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepPoint {
    pub ratio: f64,
    pub n_antennas: usize,
    /// Element spacing used at this point, meters.
    pub spacing: f64,
    /// Water-filled spectral efficiency of the exact synthesis, bit/s/Hz.
    pub se_exact: f64,
    /// Same for the paraxial construction.
    pub se_paraxial: f64,
    /// `|se_exact - se_paraxial| / se_exact`.
    pub rel_gap: f64,
}

impl SweepPoint {
    pub fn csv_header() -> &'static str {
        "ratio,n_antennas,spacing_m,se_exact,se_paraxial,rel_gap"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{:.6},{},{:.12e},{:.12e},{:.12e},{:.12e}",
            self.ratio, self.n_antennas, self.spacing, self.se_exact, self.se_paraxial, self.rel_gap
        )
    }
}

/// Largest antenna count whose optimized array still fits the aperture, with
/// its spacing. `n * d_opt(n)` grows monotonically in `n`, so the first
/// overflow terminates the scan.
pub fn antennas_for_aperture(
    aperture: f64,
    wavelength: f64,
    equivalent_range: f64,
    snr_db: f64,
) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for n in 1..=16_384usize {
        let d = optimal_spacing(&SpacingQuery {
            wavelength,
            distance: equivalent_range,
            n_max: n,
            snr_db: Some(snr_db),
            tilt: 0.0,
        })?;
        if n as f64 * d <= aperture {
            best = Some((n, d));
        } else {
            break;
        }
    }
    best.ok_or_else(|| {
        Error::Scenario(format!(
            "aperture {aperture} m cannot fit a single antenna at the optimized spacing"
        ))
    })
}

/// Runs the sweep: per ratio, build the exact and the paraxial reflected
/// channel and water-fill both. Points are evaluated in ratio order and the
/// result is deterministic.
pub fn run_sweep(sweep: &ApertureSweep) -> Result<Vec<SweepPoint>> {
    sweep.validate()?;
    let wavelength = SPEED_OF_LIGHT / sweep.frequency;
    let de = sweep.equivalent_range();
    let snr_linear = 10f64.powf(sweep.snr_db / 10.0);
    let mut points = Vec::with_capacity(sweep.ratios.len());
    for &ratio in &sweep.ratios {
        let (n, spacing) = antennas_for_aperture(ratio * de, wavelength, de, sweep.snr_db)?;
        let scenario = Scenario {
            frequency: sweep.frequency,
            material: sweep.material.clone(),
            surface_offset: sweep.surface_offset,
            tx: ArraySpec::new(n, spacing, 0.0, Vector3::zeros())?,
            rx: ArraySpec::new(n, spacing, 0.0, Vector3::new(0.0, 0.0, sweep.range))?,
            mode: KernelMode::reflected(Region::Between),
            contour: sweep.contour,
        };
        let se_exact = spectral_efficiency(&build_exact(&scenario)?, snr_linear)?;
        let se_paraxial = spectral_efficiency(&build_paraxial(&scenario)?, snr_linear)?;
        points.push(SweepPoint {
            ratio,
            n_antennas: n,
            spacing,
            se_exact,
            se_paraxial,
            rel_gap: (se_exact - se_paraxial).abs() / se_exact,
        });
    }
    Ok(points)
}

fn spectral_efficiency(h: &crate::channel::ChannelMatrix, snr_linear: f64) -> Result<f64> {
    let eigs = normalized_eigenvalues(h)?;
    Ok(waterfill_capacity(&eigs, snr_linear)?.capacity)
}
