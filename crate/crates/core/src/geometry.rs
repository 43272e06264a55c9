//! Array placement and the purely geometric quantities of a link: incidence
//! angle, equivalent (image) range, and projected tilts for oblique receivers.
//!
//! Conventions: the transmit centroid sits at the origin with the reflecting
//! surface at `z = D0 > 0`; the receive centroid is `r0`. Angles are radians
//! everywhere inside the engine; degrees appear only at CLI boundaries.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// A uniform linear array: `n_antennas` collinear elements with equal
/// `spacing`, rotated by `tilt` in the xz-plane about the `centroid`
/// (`tilt = 0` is x-oriented).
#[derive(Clone, Debug, PartialEq)]
pub struct ArraySpec {
    pub n_antennas: usize,
    /// Element spacing in meters.
    pub spacing: f64,
    /// Rotation of the array axis in the xz-plane, radians.
    pub tilt: f64,
    /// Centroid position (x, y, z) in meters.
    pub centroid: Vector3<f64>,
}

impl ArraySpec {
    pub fn new(n_antennas: usize, spacing: f64, tilt: f64, centroid: Vector3<f64>) -> Result<Self> {
        let spec = Self {
            n_antennas,
            spacing,
            tilt,
            centroid,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_antennas == 0 {
            return Err(Error::Geometry("array needs at least one antenna".into()));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::Geometry(format!(
                "antenna spacing must be positive and finite, got {}",
                self.spacing
            )));
        }
        if !self.tilt.is_finite() || !self.centroid.iter().all(|c| c.is_finite()) {
            return Err(Error::Geometry("non-finite array parameters".into()));
        }
        Ok(())
    }

    /// End-to-end aperture `(n - 1) * spacing`.
    pub fn aperture(&self) -> f64 {
        (self.n_antennas - 1) as f64 * self.spacing
    }
}

/// Antenna positions of a ULA, symmetric about the centroid.
pub fn ula_positions(spec: &ArraySpec) -> Vec<Vector3<f64>> {
    let axis = Vector3::new(spec.tilt.cos(), 0.0, spec.tilt.sin());
    let mid = (spec.n_antennas as f64 - 1.0) / 2.0;
    (0..spec.n_antennas)
        .map(|i| spec.centroid + axis * ((i as f64 - mid) * spec.spacing))
        .collect()
}

/// Incidence angle of the specular path between the image source and the
/// receiver at `r0`, measured from the surface normal.
///
/// `theta0 = arccos((2 D0 - r0z) / sqrt(D^2 + 4 D0 (D0 - r0z)))` with
/// `D = ||r0||`; requires `0 < r0z <= D0`.
pub fn incidence_angle(r0: Vector3<f64>, d0: f64) -> Result<f64> {
    check_receiver_side(r0, d0)?;
    let d = r0.norm();
    let num = 2.0 * d0 - r0.z;
    let den = (d * d + 4.0 * d0 * (d0 - r0.z)).sqrt();
    Ok((num / den).clamp(-1.0, 1.0).acos())
}

/// Range of the equivalent LOS link through the image source:
/// `De = (2 D0 - r0z) / cos(theta0)`.
pub fn equivalent_distance(theta0: f64, d0: f64, r0z: f64) -> Result<f64> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta0) {
        return Err(Error::Geometry(format!(
            "incidence angle must lie in [0, pi/2), got {theta0} rad"
        )));
    }
    Ok((2.0 * d0 - r0z) / theta0.cos())
}

/// Equivalent array tilts seen by an x-oriented ULA when the receiver is
/// displaced off axis: `los` applies to the direct link, `reflected` to the
/// link through the image source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectedTilts {
    /// Tilt of the direct link, radians.
    pub los: f64,
    /// Tilt of the reflected link, radians.
    pub reflected: f64,
}

/// Projects the direct and image ranges onto the xz-plane and returns the
/// equivalent tilt angles of both links.
pub fn projected_tilts(r0: Vector3<f64>, d0: f64) -> Result<ProjectedTilts> {
    let theta0 = incidence_angle(r0, d0)?;
    let d = r0.norm();
    let de = equivalent_distance(theta0, d0, r0.z)?;
    let d_hat = d / (1.0 + (r0.y / r0.z).powi(2)).sqrt();
    let de_hat = de / (1.0 + (r0.y / (2.0 * d0 - r0.z)).powi(2)).sqrt();
    Ok(ProjectedTilts {
        los: (r0.z / d_hat).clamp(-1.0, 1.0).acos(),
        reflected: ((2.0 * d0 - r0.z) / de_hat).clamp(-1.0, 1.0).acos(),
    })
}

/// Receiver placement relative to a transmit centroid at the origin, with
/// every derived geometric quantity of the link.
#[derive(Clone, Copy, Debug)]
pub struct Placement {
    pub r0: Vector3<f64>,
    /// Source-to-surface distance along z, meters.
    pub surface_offset: f64,
    /// Centroid-to-centroid range `D = ||r0||`.
    pub range: f64,
    /// Image-path range `De >= D`.
    pub equivalent_range: f64,
    /// Specular incidence angle `theta0`, radians.
    pub incidence: f64,
    /// Equivalent tilt of the direct link, radians.
    pub tilt_los: f64,
    /// Equivalent tilt of the reflected link, radians.
    pub tilt_reflected: f64,
}

impl Placement {
    pub fn new(r0: Vector3<f64>, surface_offset: f64) -> Result<Self> {
        let incidence = incidence_angle(r0, surface_offset)?;
        let equivalent_range = equivalent_distance(incidence, surface_offset, r0.z)?;
        let tilts = projected_tilts(r0, surface_offset)?;
        Ok(Self {
            r0,
            surface_offset,
            range: r0.norm(),
            equivalent_range,
            incidence,
            tilt_los: tilts.los,
            tilt_reflected: tilts.reflected,
        })
    }
}

fn check_receiver_side(r0: Vector3<f64>, d0: f64) -> Result<()> {
    if !(d0 > 0.0) || !d0.is_finite() {
        return Err(Error::Geometry(format!(
            "surface offset must be positive, got {d0}"
        )));
    }
    if !(r0.z > 0.0) || r0.z > d0 {
        return Err(Error::Geometry(format!(
            "receiver z must satisfy 0 < z <= {d0} (between source plane and surface), got {}",
            r0.z
        )));
    }
    Ok(())
}
