//! MIMO channel matrices: a scenario describes the full experiment geometry;
//! four interchangeable builders (exact spectral synthesis, the two
//! closed-form oracles, and the ray-style paraxial construction) sample the
//! impulse response at every antenna pair.

mod builders;

pub use builders::{
    build_exact, build_image_oracle, build_los_oracle, build_paraxial, BuilderRegistry,
    ChannelBuilder, ExactBuilder, ImageOracleBuilder, LosOracleBuilder, ParaxialBuilder,
};

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{ula_positions, ArraySpec, Placement};
use crate::quadrature::{self, ContourConfig, DELTA_RHO_LAMBDA_LIMIT};
use crate::spectrum::{HalfSpace, KernelMode, Region};

/// Full experiment geometry: frequency, surface, material and both arrays.
/// The transmit centroid must sit on the source plane `z = 0`; the surface
/// lies at `z = surface_offset`.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub frequency: f64,
    pub material: crate::materials::Material,
    /// Source-to-surface distance `D0` along z, meters.
    pub surface_offset: f64,
    pub tx: ArraySpec,
    pub rx: ArraySpec,
    pub mode: KernelMode,
    pub contour: ContourConfig,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.frequency > 0.0) || !self.frequency.is_finite() {
            return Err(Error::Scenario(format!(
                "frequency must be positive, got {}",
                self.frequency
            )));
        }
        self.material.validate()?;
        self.tx.validate()?;
        self.rx.validate()?;
        self.contour.validate()?;
        if !(self.surface_offset > 0.0) {
            return Err(Error::Scenario(format!(
                "surface offset must be positive, got {}",
                self.surface_offset
            )));
        }
        if self.tx.centroid.z != 0.0 {
            return Err(Error::Scenario(
                "transmit centroid must lie on the source plane z = 0".into(),
            ));
        }
        let wavelength = crate::materials::SPEED_OF_LIGHT / self.frequency;
        let margin = self.surface_offset - wavelength;
        for (label, positions) in [("tx", self.tx_positions()), ("rx", self.rx_positions())] {
            for (i, p) in positions.iter().enumerate() {
                if p.z > margin {
                    return Err(Error::Scenario(format!(
                        "{label} antenna {i} at z = {} is within one wavelength of the surface \
                         at z = {}",
                        p.z, self.surface_offset
                    )));
                }
            }
        }
        // The spectral synthesis needs source and receiver separated by a
        // z-plane, on the side matching the kernel region.
        let tx_z: Vec<f64> = self.tx_positions().iter().map(|p| p.z).collect();
        let rx_z: Vec<f64> = self.rx_positions().iter().map(|p| p.z).collect();
        let tx_max = tx_z.iter().cloned().fold(f64::MIN, f64::max);
        let tx_min = tx_z.iter().cloned().fold(f64::MAX, f64::min);
        let rx_max = rx_z.iter().cloned().fold(f64::MIN, f64::max);
        let rx_min = rx_z.iter().cloned().fold(f64::MAX, f64::min);
        match self.mode.region {
            Region::Between => {
                if rx_min <= tx_max {
                    return Err(Error::Scenario(format!(
                        "region Between requires every rx antenna above every tx antenna in z \
                         (rx min {rx_min}, tx max {tx_max})"
                    )));
                }
            }
            Region::Below => {
                if rx_max >= tx_min {
                    return Err(Error::Scenario(format!(
                        "region Below requires every rx antenna below every tx antenna in z \
                         (rx max {rx_max}, tx min {tx_min})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn half_space(&self) -> Result<HalfSpace> {
        HalfSpace::new(self.frequency, self.material.clone(), self.surface_offset)
    }

    pub fn tx_positions(&self) -> Vec<Vector3<f64>> {
        ula_positions(&self.tx)
    }

    pub fn rx_positions(&self) -> Vec<Vector3<f64>> {
        ula_positions(&self.rx)
    }

    /// Receive-centroid placement relative to the transmit centroid.
    pub fn placement(&self) -> Result<Placement> {
        Placement::new(self.rx.centroid - self.tx.centroid, self.surface_offset)
    }

    /// Stable hash of every parameter that influences the numbers; used to
    /// tie exported matrices and reports back to their scenario.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        let mut feed = |s: String| h.update(s.as_bytes());
        feed(format!(
            "f={:016x};d0={:016x};mat={}:{:016x}:{:016x}:{};",
            self.frequency.to_bits(),
            self.surface_offset.to_bits(),
            self.material.name,
            self.material.n2.re.to_bits(),
            self.material.n2.im.to_bits(),
            self.material.perfect_conductor,
        ));
        for (tag, a) in [("tx", &self.tx), ("rx", &self.rx)] {
            feed(format!(
                "{tag}={}:{:016x}:{:016x}:{:016x}:{:016x}:{:016x};",
                a.n_antennas,
                a.spacing.to_bits(),
                a.tilt.to_bits(),
                a.centroid.x.to_bits(),
                a.centroid.y.to_bits(),
                a.centroid.z.to_bits(),
            ));
        }
        feed(format!(
            "mode={:?};contour={:016x}:{}:{:016x}:{:?}:{:016x}",
            self.mode,
            self.contour.kappa_min_ratio.to_bits(),
            self.contour.n_nodes,
            self.contour.rel_tol.to_bits(),
            self.contour.indicator,
            self.contour.tail_cutoff.to_bits(),
        ));
        let digest = h.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// How a matrix was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    LosOracle,
    ImageOracle,
    Paraxial,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Exact => "exact",
            Provenance::LosOracle => "los-oracle",
            Provenance::ImageOracle => "image-oracle",
            Provenance::Paraxial => "paraxial",
        })
    }
}

/// A complex Nr x Nt channel matrix tagged with its construction route.
#[derive(Clone, Debug)]
pub struct ChannelMatrix {
    pub entries: DMatrix<Complex64>,
    pub provenance: Provenance,
    pub scenario_hash: String,
}

impl ChannelMatrix {
    pub fn nr(&self) -> usize {
        self.entries.nrows()
    }

    pub fn nt(&self) -> usize {
        self.entries.ncols()
    }

    /// Plain-text complex CSV: one row per receive antenna, entries as
    /// `re+imj` pairs in 17-significant-digit scientific notation.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for m in 0..self.nr() {
            let row: Vec<String> = (0..self.nt())
                .map(|n| {
                    let v = self.entries[(m, n)];
                    format!("{:.16e}{:+.16e}j", v.re, v.im)
                })
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Kernel arguments of one antenna pair, quantized so that geometrically
/// identical pairs (Toeplitz structure of equal parallel ULAs) collapse onto
/// one integral evaluation. The quantum of 1e-9 wavelengths perturbs phases
/// by ~1e-8 radians, far below the engine tolerances.
fn kernel_key(delta_rho: f64, rz: f64, sz: f64, quantum: f64) -> (i64, i64, i64) {
    let q = |v: f64| (v / quantum).round() as i64;
    (q(delta_rho), q(rz), q(sz))
}

pub(crate) fn build_exact_impl(scenario: &Scenario) -> Result<ChannelMatrix> {
    scenario.validate()?;
    let hs = scenario.half_space()?;
    let txp = scenario.tx_positions();
    let rxp = scenario.rx_positions();
    let wavelength = hs.wavenumbers.wavelength;
    let quantum = wavelength * 1e-9;

    let mut groups: BTreeMap<(i64, i64, i64), Vec<(usize, usize)>> = BTreeMap::new();
    for (m, r) in rxp.iter().enumerate() {
        for (n, s) in txp.iter().enumerate() {
            let delta_rho = (r.x - s.x).hypot(r.y - s.y);
            let ratio = delta_rho / wavelength;
            if ratio >= DELTA_RHO_LAMBDA_LIMIT {
                return Err(Error::TransverseGuard {
                    ratio,
                    at: format!(" for antenna pair (rx {m}, tx {n})"),
                });
            }
            groups
                .entry(kernel_key(delta_rho, r.z, s.z, quantum))
                .or_default()
                .push((m, n));
        }
    }

    let unique: Vec<(i64, i64, i64)> = groups.keys().copied().collect();
    let values: Vec<Result<Complex64>> = unique
        .par_iter()
        .map(|&(kd, kr, ks)| {
            quadrature::sommerfeld_h(
                kd as f64 * quantum,
                kr as f64 * quantum,
                ks as f64 * quantum,
                &hs,
                scenario.mode,
                &scenario.contour,
            )
        })
        .collect();

    let mut entries = DMatrix::zeros(rxp.len(), txp.len());
    for (key, value) in unique.iter().zip(values) {
        let v = value?;
        for &(m, n) in &groups[key] {
            entries[(m, n)] = v;
        }
    }
    Ok(ChannelMatrix {
        entries,
        provenance: Provenance::Exact,
        scenario_hash: scenario.content_hash(),
    })
}

fn oracle_matrix(
    scenario: &Scenario,
    provenance: Provenance,
    entry: impl Fn(Vector3<f64>, Vector3<f64>) -> Result<Complex64>,
) -> Result<ChannelMatrix> {
    scenario.validate()?;
    let txp = scenario.tx_positions();
    let rxp = scenario.rx_positions();
    let mut entries = DMatrix::zeros(rxp.len(), txp.len());
    for (m, &r) in rxp.iter().enumerate() {
        for (n, &s) in txp.iter().enumerate() {
            entries[(m, n)] = entry(r, s)?;
        }
    }
    Ok(ChannelMatrix {
        entries,
        provenance,
        scenario_hash: scenario.content_hash(),
    })
}

pub(crate) fn build_los_oracle_impl(scenario: &Scenario) -> Result<ChannelMatrix> {
    let w = crate::materials::Wavenumbers::new(scenario.frequency, &scenario.material)?;
    oracle_matrix(scenario, Provenance::LosOracle, |r, s| {
        crate::spectrum::weyl_los_closed_form(r, s, &w)
    })
}

fn mirror_across_surface(s: Vector3<f64>, surface_offset: f64) -> Vector3<f64> {
    Vector3::new(s.x, s.y, 2.0 * surface_offset - s.z)
}

pub(crate) fn build_image_oracle_impl(scenario: &Scenario) -> Result<ChannelMatrix> {
    let w = crate::materials::Wavenumbers::new(scenario.frequency, &scenario.material)?;
    let d0 = scenario.surface_offset;
    oracle_matrix(scenario, Provenance::ImageOracle, |r, s| {
        Ok(-crate::spectrum::weyl_los_closed_form(r, mirror_across_surface(s, d0), &w)?)
    })
}

pub(crate) fn build_paraxial_impl(scenario: &Scenario) -> Result<ChannelMatrix> {
    let w = crate::materials::Wavenumbers::new(scenario.frequency, &scenario.material)?;
    let d0 = scenario.surface_offset;
    let placement = scenario.placement().map_err(|_| {
        Error::Scenario(
            "paraxial construction needs the receive centroid between source plane and surface"
                .into(),
        )
    })?;
    let reflectivity = crate::materials::fresnel_angle(placement.incidence, &scenario.material);
    oracle_matrix(scenario, Provenance::Paraxial, |r, s| {
        Ok(reflectivity * crate::spectrum::weyl_los_closed_form(r, mirror_across_surface(s, d0), &w)?)
    })
}
