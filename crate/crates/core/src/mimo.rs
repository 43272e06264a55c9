//! Eigenvalue analysis, water-filling capacity, spacing optimization and
//! pathloss for the synthesized channel matrices.

use crate::channel::{ChannelMatrix, Scenario};
use crate::error::{Error, Result};
use crate::geometry;
use crate::materials::fresnel_angle;
use crate::spectrum::PropagationPath;

/// Eigenvalues within this many dB of the largest count as usable spatial
/// channels.
pub const DEFAULT_DOF_THRESHOLD_DB: f64 = 40.0;

/// Raw eigenvalues of `H H^H` (squared singular values of `H`), descending.
/// These carry the absolute channel scale; use [`normalized_eigenvalues`]
/// for the scale-free spectrum.
pub fn gram_eigenvalues(h: &ChannelMatrix) -> Result<Vec<f64>> {
    if h.entries.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("channel matrix has non-finite entries".into()));
    }
    if h.entries.iter().all(|v| v.norm_sqr() == 0.0) {
        return Err(Error::Numerical("all-zero channel matrix".into()));
    }
    // singular values of H rather than eigenvalues of the formed Gram
    // product, for conditioning
    let svd = h
        .entries
        .clone()
        .try_svd_unordered(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("singular value decomposition did not converge".into()))?;
    let mut eigs: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    eigs.sort_by(|a, b| b.total_cmp(a));
    Ok(eigs)
}

/// Eigenvalues of `H H^H` scaled so that their sum is `Nr * Nt`, descending.
pub fn normalized_eigenvalues(h: &ChannelMatrix) -> Result<Vec<f64>> {
    let mut eigs = gram_eigenvalues(h)?;
    let total: f64 = eigs.iter().sum();
    let scale = (h.nr() * h.nt()) as f64 / total;
    for e in &mut eigs {
        *e *= scale;
    }
    Ok(eigs)
}

/// Water-filling solution over a set of eigenvalues.
#[derive(Clone, Debug)]
pub struct WaterFill {
    /// Capacity in bit/s/Hz.
    pub capacity: f64,
    /// Water level `nu`.
    pub water_level: f64,
    /// Power allocated per eigenvalue (aligned with the descending input).
    pub powers: Vec<f64>,
}

/// Exact water-filling by active-set search over the sorted eigenvalues:
/// `C = sum log2(1 + (nu - 1/l)^+ l)` with `sum (nu - 1/l)^+ = snr`.
/// No iteration tolerance is involved; the allocated powers sum to `snr`
/// up to rounding.
pub fn waterfill_capacity(eigenvalues: &[f64], snr_linear: f64) -> Result<WaterFill> {
    if !(snr_linear > 0.0) || !snr_linear.is_finite() {
        return Err(Error::Scenario(format!(
            "snr must be positive and finite, got {snr_linear}"
        )));
    }
    let mut eigs: Vec<f64> = eigenvalues.to_vec();
    eigs.sort_by(|a, b| b.total_cmp(a));
    if eigs.is_empty() || !(eigs[0] > 0.0) {
        return Err(Error::Numerical(
            "water-filling needs at least one positive eigenvalue".into(),
        ));
    }

    let positive: Vec<f64> = eigs.iter().copied().take_while(|&l| l > 0.0).collect();
    let mut prefix = 0.0;
    let mut active = 1;
    let mut water_level = 0.0;
    for (k, &l) in positive.iter().enumerate() {
        prefix += 1.0 / l;
        let nu = (snr_linear + prefix) / (k + 1) as f64;
        if nu >= 1.0 / l {
            active = k + 1;
            water_level = nu;
        } else {
            break;
        }
    }

    let mut powers = vec![0.0; eigs.len()];
    let mut capacity = 0.0;
    for k in 0..active {
        powers[k] = water_level - 1.0 / positive[k];
        // log2(1 + p l) with p = nu - 1/l collapses to log2(nu l)
        capacity += (water_level * positive[k]).log2();
    }
    Ok(WaterFill {
        capacity,
        water_level,
        powers,
    })
}

/// Capacity upper bound and its maximizing stream count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityBound {
    /// Bound in bit/s/Hz.
    pub bound: f64,
    /// Maximizing number of streams `rho*` (ties resolve to fewer streams).
    pub streams: usize,
}

/// `max over rho of rho log2(1 + snr/rho * Nr Nt / rho)`: the capacity of the
/// best possible eigenvalue split into `rho` equal nonzero eigenvalues.
pub fn capacity_upper_bound(nr: usize, nt: usize, snr_linear: f64) -> Result<CapacityBound> {
    if nr == 0 || nt == 0 {
        return Err(Error::Scenario("antenna counts must be at least 1".into()));
    }
    if !(snr_linear > 0.0) || !snr_linear.is_finite() {
        return Err(Error::Scenario(format!(
            "snr must be positive and finite, got {snr_linear}"
        )));
    }
    let n_min = nr.min(nt);
    let product = (nr * nt) as f64;
    let mut best = CapacityBound {
        bound: f64::MIN,
        streams: 0,
    };
    for rho in 1..=n_min {
        let r = rho as f64;
        let value = r * (1.0 + snr_linear / r * product / r).log2();
        if value > best.bound {
            best = CapacityBound {
                bound: value,
                streams: rho,
            };
        }
    }
    Ok(best)
}

/// Spacing request: the distance is the plain range for a direct link or the
/// equivalent image range for a reflected one.
#[derive(Clone, Copy, Debug)]
pub struct SpacingQuery {
    pub wavelength: f64,
    /// `D` or `De`, meters.
    pub distance: f64,
    pub n_max: usize,
    /// When set, the spacing shrinks by the SNR-optimal stream fraction.
    pub snr_db: Option<f64>,
    /// Equivalent array tilt, radians (0 for parallel arrays).
    pub tilt: f64,
}

/// Optimal ULA spacing `sqrt(eta lambda D / Nmax) / cos(tilt)` with
/// `eta = rho*(snr) / Nmax` when an SNR is given and 1 otherwise.
pub fn optimal_spacing(q: &SpacingQuery) -> Result<f64> {
    if !(q.distance > 0.0) || !(q.wavelength > 0.0) || q.n_max == 0 {
        return Err(Error::Scenario(format!(
            "spacing query needs positive distance, wavelength and antenna count \
             (distance {}, wavelength {}, n_max {})",
            q.distance, q.wavelength, q.n_max
        )));
    }
    let cos_tilt = q.tilt.cos();
    if cos_tilt <= 1e-12 {
        return Err(Error::Geometry(format!(
            "tilt {} rad leaves no transverse aperture",
            q.tilt
        )));
    }
    let eta = match q.snr_db {
        Some(db) => {
            let bound = capacity_upper_bound(q.n_max, q.n_max, 10f64.powf(db / 10.0))?;
            bound.streams as f64 / q.n_max as f64
        }
        None => 1.0,
    };
    Ok((eta * q.wavelength * q.distance / q.n_max as f64).sqrt() / cos_tilt)
}

/// Number of eigenvalues within `threshold_db` of the largest.
pub fn dof_count(eigenvalues: &[f64], threshold_db: f64) -> usize {
    let max = eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    if !(max > 0.0) {
        return 0;
    }
    let floor = max * 10f64.powf(-threshold_db / 10.0);
    eigenvalues.iter().filter(|&&l| l >= floor).count()
}

/// Link pathloss. `db` is the loss expressed positively:
/// `-10 log10(linear)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pathloss {
    pub linear: f64,
    pub db: f64,
}

/// Free-space pathloss of the scenario's link: `(lambda / 4 pi D)^2` for a
/// direct path, `|R(theta0)|^2 (lambda / 4 pi De)^2` through the reflection.
pub fn pathloss(scenario: &Scenario) -> Result<Pathloss> {
    let w = crate::materials::Wavenumbers::new(scenario.frequency, &scenario.material)?;
    let r0 = scenario.rx.centroid - scenario.tx.centroid;
    let linear = match scenario.mode.path {
        PropagationPath::LosOnly => {
            let d = r0.norm();
            if !(d > 0.0) {
                return Err(Error::Geometry("coincident array centroids".into()));
            }
            (w.wavelength / (4.0 * std::f64::consts::PI * d)).powi(2)
        }
        _ => {
            let theta0 = geometry::incidence_angle(r0, scenario.surface_offset)?;
            let de = geometry::equivalent_distance(theta0, scenario.surface_offset, r0.z)?;
            let r = fresnel_angle(theta0, &scenario.material);
            r.norm_sqr() * (w.wavelength / (4.0 * std::f64::consts::PI * de)).powi(2)
        }
    };
    Ok(Pathloss {
        linear,
        db: -10.0 * linear.log10(),
    })
}

/// Summary of one channel matrix at one SNR.
#[derive(Clone, Debug)]
pub struct MimoReport {
    /// Normalized eigenvalues, descending; they sum to `Nr * Nt`.
    pub eigenvalues: Vec<f64>,
    pub capacity_bps_hz: f64,
    pub water_level: f64,
    pub dof: usize,
    pub pathloss_db: f64,
    pub snr_db: f64,
}

impl MimoReport {
    pub fn csv_header(n_eigenvalues: usize) -> String {
        let mut cols = vec![
            "scenario_id".to_string(),
            "snr_db".to_string(),
            "capacity_bps_hz".to_string(),
            "dof".to_string(),
            "pathloss_db".to_string(),
        ];
        cols.extend((1..=n_eigenvalues).map(|i| format!("eig_{i}")));
        cols.join(",")
    }

    pub fn to_csv_row(&self, scenario_id: &str) -> String {
        let mut cols = vec![
            scenario_id.to_string(),
            format!("{:.6}", self.snr_db),
            format!("{:.12e}", self.capacity_bps_hz),
            format!("{}", self.dof),
            format!("{:.12e}", self.pathloss_db),
        ];
        cols.extend(self.eigenvalues.iter().map(|e| format!("{e:.12e}")));
        cols.join(",")
    }
}

/// Full analysis of one matrix: normalized spectrum, water-filled capacity,
/// usable-channel count and link pathloss.
pub fn analyze(h: &ChannelMatrix, scenario: &Scenario, snr_db: f64) -> Result<MimoReport> {
    let eigenvalues = normalized_eigenvalues(h)?;
    let wf = waterfill_capacity(&eigenvalues, 10f64.powf(snr_db / 10.0))?;
    let dof = dof_count(&eigenvalues, DEFAULT_DOF_THRESHOLD_DB);
    let loss = pathloss(scenario)?;
    Ok(MimoReport {
        eigenvalues,
        capacity_bps_hz: wf.capacity,
        water_level: wf.water_level,
        dof,
        pathloss_db: loss.db,
        snr_db,
    })
}
