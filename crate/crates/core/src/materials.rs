//! Material properties and Fresnel reflection/transmission coefficients for
//! the TE polarization, in both the angle and the transverse-wavenumber form.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wave impedance `eta_1 = 120 pi` ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 120.0 * std::f64::consts::PI;

/// A homogeneous half-space material, characterized by its complex refractive
/// index relative to free space. A perfect conductor reflects totally
/// (`R = -1` at all angles) and bypasses the refractive index entirely.
#[derive(Clone, Debug, PartialEq)]
pub struct Material {
    pub name: String,
    /// Complex refractive index; ignored when `perfect_conductor` is set.
    pub n2: Complex64,
    pub perfect_conductor: bool,
}

impl Material {
    pub fn dielectric(name: impl Into<String>, n2: Complex64) -> Result<Self> {
        let m = Self {
            name: name.into(),
            n2,
            perfect_conductor: false,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn conductor(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            n2: Complex64::new(1.0, 0.0),
            perfect_conductor: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.perfect_conductor {
            return Ok(());
        }
        if !self.n2.re.is_finite() || !self.n2.im.is_finite() {
            return Err(Error::Material(format!(
                "{}: refractive index must be finite",
                self.name
            )));
        }
        // Im = 0 is admitted as the lossless limit.
        if self.n2.re < 1.0 || self.n2.im < 0.0 {
            return Err(Error::Material(format!(
                "{}: refractive index must have Re >= 1 and Im >= 0, got {}",
                self.name, self.n2
            )));
        }
        Ok(())
    }
}

/// Built-in material table. The dielectric indices are real-valued and
/// back-derived from the normal-incidence reflectivities 7.19 dB (concrete),
/// 9.63 dB (floorboard) and 13.98 dB (plasterboard) by inverting
/// `|R(0)| = |1 - n| / |1 + n|`.
pub fn builtin_materials() -> Vec<Material> {
    vec![
        Material::conductor("conductor"),
        Material {
            name: "concrete".into(),
            n2: Complex64::new(2.552515733023503, 0.0),
            perfect_conductor: false,
        },
        Material {
            name: "floorboard".into(),
            n2: Complex64::new(1.9850274363033345, 0.0),
            perfect_conductor: false,
        },
        Material {
            name: "plasterboard".into(),
            n2: Complex64::new(1.5, 0.0),
            perfect_conductor: false,
        },
    ]
}

/// Looks up a built-in material by (case-insensitive) name.
pub fn builtin_material(name: &str) -> Option<Material> {
    builtin_materials()
        .into_iter()
        .find(|m| m.name.eq_ignore_ascii_case(name))
}

/// Free-space and material wavenumbers at a given frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wavenumbers {
    /// Free-space wavenumber `2 pi / lambda`, rad/m.
    pub kappa1: f64,
    /// Material wavenumber `n2 * kappa1`, rad/m.
    pub kappa2: Complex64,
    /// Free-space wavelength, meters.
    pub wavelength: f64,
    /// Free-space wave impedance, ohms.
    pub impedance: f64,
}

impl Wavenumbers {
    pub fn new(frequency: f64, material: &Material) -> Result<Self> {
        if !(frequency > 0.0) || !frequency.is_finite() {
            return Err(Error::Scenario(format!(
                "frequency must be positive, got {frequency}"
            )));
        }
        material.validate()?;
        let wavelength = SPEED_OF_LIGHT / frequency;
        let kappa1 = 2.0 * std::f64::consts::PI / wavelength;
        Ok(Self {
            kappa1,
            kappa2: material.n2 * kappa1,
            wavelength,
            impedance: FREE_SPACE_IMPEDANCE,
        })
    }
}

/// Longitudinal wavenumber `sqrt(kappa^2 - krho^2)` on the radiation-condition
/// branch: `Im >= 0` everywhere, and `Re >= 0` where the value is real.
pub fn kz_component(kappa_sq: Complex64, krho: Complex64) -> Complex64 {
    let s = (kappa_sq - krho * krho).sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// Fresnel reflection coefficient as a function of the incidence angle:
/// `R = (cos t - sqrt(n2^2 - sin^2 t)) / (cos t + sqrt(n2^2 - sin^2 t))`.
pub fn fresnel_angle(theta_i: f64, m: &Material) -> Complex64 {
    if m.perfect_conductor {
        return Complex64::new(-1.0, 0.0);
    }
    let (sin_t, cos_t) = theta_i.sin_cos();
    let root = (m.n2 * m.n2 - sin_t * sin_t).sqrt();
    (cos_t - root) / (cos_t + root)
}

/// Fresnel reflection coefficient as a function of the transverse wavenumber:
/// `R = (k1z - k2z) / (k1z + k2z)` on the radiation-condition branch.
pub fn fresnel_wavenumber(krho: Complex64, w: &Wavenumbers, m: &Material) -> Complex64 {
    if m.perfect_conductor {
        return Complex64::new(-1.0, 0.0);
    }
    let k1z = kz_component(Complex64::new(w.kappa1 * w.kappa1, 0.0), krho);
    let k2z = kz_component(w.kappa2 * w.kappa2, krho);
    (k1z - k2z) / (k1z + k2z)
}

/// Snell transmission across the interface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transmission {
    /// Transmission angle `asin(sin(theta_i) / n2)`; `None` for a perfect
    /// conductor, where no field crosses the surface.
    pub theta_t: Option<Complex64>,
    /// Transmission coefficient `T = 1 + R`.
    pub coefficient: Complex64,
}

pub fn snell_transmission(theta_i: f64, m: &Material) -> Transmission {
    if m.perfect_conductor {
        return Transmission {
            theta_t: None,
            coefficient: Complex64::ZERO,
        };
    }
    let sin_t = Complex64::new(theta_i.sin(), 0.0) / m.n2;
    Transmission {
        theta_t: Some(sin_t.asin()),
        coefficient: Complex64::ONE + fresnel_angle(theta_i, m),
    }
}
