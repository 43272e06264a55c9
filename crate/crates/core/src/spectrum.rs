//! Wavenumber-domain channel kernels: the LSI wavenumber response of a link
//! over a reflecting half-space, the band-limited surface impulse response
//! (the blur applied to the image of the source), and the closed-form
//! spherical-wave kernel used as the LOS oracle.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::legendre;
use crate::materials::{fresnel_wavenumber, kz_component, Material, Wavenumbers};
use crate::quadrature::bessel::bessel_j0_complex;

/// Which propagation terms enter the synthesized kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagationPath {
    LosOnly,
    ReflectedOnly,
    Total,
}

/// Receiver region relative to the source plane at `z = 0`: `Between` places
/// the receiver between source and surface (`0 < z <= D0`), `Below` on the
/// opposite side (`z < 0`). The sign of the direct-path exponential follows
/// the region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Below,
    Between,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelMode {
    pub path: PropagationPath,
    pub region: Region,
}

impl KernelMode {
    pub fn los(region: Region) -> Self {
        Self {
            path: PropagationPath::LosOnly,
            region,
        }
    }

    pub fn reflected(region: Region) -> Self {
        Self {
            path: PropagationPath::ReflectedOnly,
            region,
        }
    }

    pub fn total(region: Region) -> Self {
        Self {
            path: PropagationPath::Total,
            region,
        }
    }
}

/// Handling of the spectral band beyond the propagating disk `krho <= kappa1`.
///
/// `Tail` keeps the evanescent continuation (complete synthesis; the tail
/// decays exponentially in the z-separation). `Hard` truncates the integral
/// at `kappa1`, the low-pass disk indicator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Indicator {
    Hard,
    #[default]
    Tail,
}

/// Propagation medium plus reflecting surface: everything the spectral
/// kernels need besides the endpoint coordinates.
#[derive(Clone, Debug)]
pub struct HalfSpace {
    pub wavenumbers: Wavenumbers,
    pub material: Material,
    /// Source-to-surface distance `D0` along z, meters.
    pub surface_offset: f64,
}

impl HalfSpace {
    pub fn new(frequency: f64, material: Material, surface_offset: f64) -> Result<Self> {
        if !(surface_offset > 0.0) || !surface_offset.is_finite() {
            return Err(Error::Scenario(format!(
                "surface offset must be positive, got {surface_offset}"
            )));
        }
        let wavenumbers = Wavenumbers::new(frequency, &material)?;
        Ok(Self {
            wavenumbers,
            material,
            surface_offset,
        })
    }
}

/// A transverse wavenumber together with both longitudinal components on the
/// radiation-condition branch.
#[derive(Clone, Copy, Debug)]
pub struct SpectralPoint {
    pub kappa_rho: Complex64,
    pub kappa_1z: Complex64,
    pub kappa_2z: Complex64,
}

impl SpectralPoint {
    pub fn new(kappa_rho: Complex64, w: &Wavenumbers) -> Self {
        Self {
            kappa_rho,
            kappa_1z: kz_component(Complex64::new(w.kappa1 * w.kappa1, 0.0), kappa_rho),
            kappa_2z: kz_component(w.kappa2 * w.kappa2, kappa_rho),
        }
    }
}

/// Direct and reflected exponential terms of the kernel at one spectral
/// point, without the common `kappa1 eta1 / (2 kappa_1z)` prefactor. The
/// reflected term carries the Fresnel coefficient.
pub(crate) fn kernel_terms(
    kappa_rho: Complex64,
    kappa_1z: Complex64,
    rz: f64,
    sz: f64,
    hs: &HalfSpace,
    region: Region,
) -> (Complex64, Complex64) {
    let i = Complex64::I;
    let los = match region {
        Region::Between => (i * kappa_1z * (rz - sz)).exp(),
        Region::Below => (-i * kappa_1z * (rz - sz)).exp(),
    };
    let r = fresnel_wavenumber(kappa_rho, &hs.wavenumbers, &hs.material);
    let refl = r * (-i * kappa_1z * (rz + sz - 2.0 * hs.surface_offset)).exp();
    (los, refl)
}

pub(crate) fn combine_path(path: PropagationPath, los: Complex64, refl: Complex64) -> Complex64 {
    match path {
        PropagationPath::LosOnly => los,
        PropagationPath::ReflectedOnly => refl,
        PropagationPath::Total => los + refl,
    }
}

/// LSI wavenumber response of the link between the z-planes of source and
/// receiver: `kappa1 eta1 / (2 kappa_1z)` times the mode-selected direct and
/// reflected exponentials. With `Indicator::Hard`, real spectral points
/// beyond the propagating disk return zero.
pub fn wavenumber_response(
    kappa_rho: Complex64,
    rz: f64,
    sz: f64,
    hs: &HalfSpace,
    mode: KernelMode,
    indicator: Indicator,
) -> Result<Complex64> {
    let k1 = hs.wavenumbers.kappa1;
    if kappa_rho.im == 0.0 && (kappa_rho.re - k1).abs() < 1e-12 * k1 {
        return Err(Error::Numerical(
            "wavenumber response evaluated on the 1/kappa_1z branch-point pole".into(),
        ));
    }
    if indicator == Indicator::Hard && kappa_rho.im == 0.0 && kappa_rho.re > k1 {
        return Ok(Complex64::ZERO);
    }
    let sp = SpectralPoint::new(kappa_rho, &hs.wavenumbers);
    let (los, refl) = kernel_terms(kappa_rho, sp.kappa_1z, rz, sz, hs, mode.region);
    // prefactor applied per term so the three paths stay exactly linear
    let prefactor = k1 * hs.wavenumbers.impedance / 2.0 / sp.kappa_1z;
    Ok(combine_path(mode.path, prefactor * los, prefactor * refl))
}

/// Band-limited surface impulse response sampled at transverse radius `rho`:
/// `(1/2pi) * integral_0^kmax R(krho) J0(krho rho) krho dkrho`. This is the
/// radially symmetric blur convolved with the image of the source; for a
/// perfect conductor it collapses to a band-limited delta with weight -1.
pub fn surface_impulse_response(rho: f64, hs: &HalfSpace, kappa_max: f64) -> Result<Complex64> {
    if !(kappa_max > 0.0) || !kappa_max.is_finite() {
        return Err(Error::Scenario(format!(
            "kappa_max must be positive, got {kappa_max}"
        )));
    }
    if !(rho >= 0.0) {
        return Err(Error::Scenario(format!("rho must be >= 0, got {rho}")));
    }
    let k1 = hs.wavenumbers.kappa1;

    // Two smooth charts remove the sqrt kink at the band edge: krho = k1 sin t
    // below k1 and krho = k1 cosh u above it.
    let t_max = (kappa_max.min(k1) / k1).min(1.0).asin();
    let propagating = integrate_to_tolerance(|n| {
        segment_sum(0.0, t_max, n, |t| {
            let (sin_t, cos_t) = t.sin_cos();
            let krho = Complex64::new(k1 * sin_t, 0.0);
            let r = fresnel_wavenumber(krho, &hs.wavenumbers, &hs.material);
            let j0 = bessel_j0_complex(krho * rho)?;
            Ok(r * j0 * krho * (k1 * cos_t))
        })
    })?;

    let evanescent = if kappa_max > k1 {
        let u_max = (kappa_max / k1).acosh();
        integrate_to_tolerance(|n| {
            segment_sum(0.0, u_max, n, |u| {
                let krho = Complex64::new(k1 * u.cosh(), 0.0);
                let r = fresnel_wavenumber(krho, &hs.wavenumbers, &hs.material);
                let j0 = bessel_j0_complex(krho * rho)?;
                Ok(r * j0 * krho * (k1 * u.sinh()))
            })
        })?
    } else {
        Complex64::ZERO
    };

    Ok((propagating + evanescent) / (2.0 * std::f64::consts::PI))
}

fn segment_sum(
    a: f64,
    b: f64,
    n_nodes: usize,
    mut f: impl FnMut(f64) -> Result<Complex64>,
) -> Result<Complex64> {
    let panels = (n_nodes / legendre::PANEL_ORDER).max(1);
    let mut acc = Complex64::ZERO;
    for p in 0..panels {
        let pa = a + (b - a) * p as f64 / panels as f64;
        let pb = a + (b - a) * (p + 1) as f64 / panels as f64;
        for (x, w) in legendre::panel(pa, pb) {
            acc += f(x)? * w;
        }
    }
    Ok(acc)
}

fn integrate_to_tolerance(mut eval: impl FnMut(usize) -> Result<Complex64>) -> Result<Complex64> {
    let mut n = 64;
    let mut last = eval(n)?;
    for _ in 0..14 {
        n *= 2;
        let next = eval(n)?;
        if (next - last).norm() <= 1e-11 * next.norm().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        last = next;
    }
    Err(Error::NonConvergent(
        "surface impulse response did not stabilize under node doubling".into(),
    ))
}

/// Closed-form spherical-wave kernel between two points:
/// `c * exp(i kappa1 d) / d` with the engine constant
/// `c = kappa1 eta1 / (4 pi i)`, chosen so the spectral synthesis and this
/// closed form agree identically.
pub fn weyl_los_closed_form(
    r: Vector3<f64>,
    s: Vector3<f64>,
    w: &Wavenumbers,
) -> Result<Complex64> {
    let d = (r - s).norm();
    if !(d > 0.0) {
        return Err(Error::Geometry(
            "coincident source and receiver points".into(),
        ));
    }
    let c = Complex64::new(0.0, -w.kappa1 * w.impedance / (4.0 * std::f64::consts::PI));
    Ok(c * (Complex64::I * w.kappa1 * d).exp() / d)
}
