//! Numerical evaluation of the cylindrical-wave (Sommerfeld-type) integral
//! along a semi-elliptical contour deformed into the fourth quadrant of the
//! complex transverse-wavenumber plane, where the integrand is analytic and
//! the branch-point singularity at `kappa1` is bypassed.
//!
//! The contour is `krho(theta) = (kmaj/2)(1 + cos theta) + i (kmin/2) sin theta`
//! for `theta in (pi, 2pi)`, sampled by composite Gauss-Legendre panels whose
//! weights carry the complex Jacobian. Node counts double until two passes
//! agree to the configured relative tolerance; the result is deterministic
//! for a fixed configuration.

pub mod bessel;

use num_complex::Complex64;

pub use bessel::{bessel_j0_complex, bessel_j1_complex};

use crate::error::{Error, Result};
use crate::legendre::{self, PANEL_ORDER};
use crate::materials::{kz_component, Material, Wavenumbers};
use crate::spectrum::{combine_path, kernel_terms, HalfSpace, Indicator, KernelMode, Region};

/// Validity limit of the semi-elliptical contour: transverse distances of
/// `delta_rho / lambda >= 3600` would need a steepest-descent path.
pub const DELTA_RHO_LAMBDA_LIMIT: f64 = 3600.0;

const MAX_DOUBLINGS: usize = 12;

/// Quadrature configuration. `n_nodes` is the starting resolution of the
/// node-doubling convergence loop, not a hard budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourConfig {
    /// Semi-minor over semi-major axis ratio of the contour ellipse.
    pub kappa_min_ratio: f64,
    /// Starting node count (composite Gauss-Legendre, order 16 panels).
    pub n_nodes: usize,
    /// Relative self-convergence tolerance under node doubling.
    pub rel_tol: f64,
    /// Handling of the spectral band beyond the propagating disk.
    pub indicator: Indicator,
    /// Evanescent-tail truncation: panels stop once they contribute less
    /// than this fraction of the running tail total.
    pub tail_cutoff: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            kappa_min_ratio: 1e-3,
            n_nodes: 2048,
            rel_tol: 1e-9,
            indicator: Indicator::Tail,
            tail_cutoff: 1e-16,
        }
    }
}

impl ContourConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa_min_ratio > 0.0) || self.kappa_min_ratio > 0.1 {
            return Err(Error::Scenario(format!(
                "kappa_min_ratio must lie in (0, 0.1], got {}",
                self.kappa_min_ratio
            )));
        }
        if self.n_nodes < PANEL_ORDER {
            return Err(Error::Scenario(format!(
                "n_nodes must be at least {PANEL_ORDER}, got {}",
                self.n_nodes
            )));
        }
        if !(self.rel_tol > 0.0) || self.rel_tol > 1e-3 {
            return Err(Error::Scenario(format!(
                "rel_tol must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if !(self.tail_cutoff > 0.0) || self.tail_cutoff > 1e-6 {
            return Err(Error::Scenario(format!(
                "tail_cutoff must lie in (0, 1e-6], got {}",
                self.tail_cutoff
            )));
        }
        Ok(())
    }
}

/// One contour sample: position and complex-Jacobian weight.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureNode {
    pub kappa_rho: Complex64,
    pub weight: Complex64,
}

/// A materialized contour. `nodes` integrate `f` as `sum f(krho_j) w_j`.
#[derive(Clone, Debug)]
pub struct Contour {
    pub kappa_maj: f64,
    pub kappa_min: f64,
    pub nodes: Vec<QuadratureNode>,
}

/// Semi-axes of the contour ellipse. The semi-major endpoint must clear the
/// `kappa1` branch point, so near-unity refractive indices are floored and a
/// perfect conductor (which has no material wavenumber) uses `kmaj = 2 kappa1`,
/// placing the branch point at maximum clearance under the arch.
pub fn contour_axes(w: &Wavenumbers, m: &Material, cfg: &ContourConfig) -> (f64, f64) {
    let k1 = w.kappa1;
    let k2_eff = if m.perfect_conductor {
        3.0 * k1
    } else {
        w.kappa2.re.max(1.4 * k1)
    };
    let kappa_maj = 0.5 * (k1 + k2_eff);
    (kappa_maj, kappa_maj * cfg.kappa_min_ratio)
}

/// Builds the contour at the configured starting resolution.
pub fn build_contour(w: &Wavenumbers, m: &Material, cfg: &ContourConfig) -> Result<Contour> {
    cfg.validate()?;
    let (kappa_maj, kappa_min) = contour_axes(w, m, cfg);
    let mut nodes = Vec::with_capacity(cfg.n_nodes);
    for_each_contour_node(kappa_maj, kappa_min, cfg.n_nodes, |node| {
        nodes.push(node);
        Ok(())
    })?;
    Ok(Contour {
        kappa_maj,
        kappa_min,
        nodes,
    })
}

fn for_each_contour_node(
    kappa_maj: f64,
    kappa_min: f64,
    n_nodes: usize,
    mut f: impl FnMut(QuadratureNode) -> Result<()>,
) -> Result<()> {
    use std::f64::consts::PI;
    let panels = (n_nodes / PANEL_ORDER).max(1);
    for p in 0..panels {
        let a = PI + PI * p as f64 / panels as f64;
        let b = PI + PI * (p + 1) as f64 / panels as f64;
        for (theta, w) in legendre::panel(a, b) {
            let (sin_t, cos_t) = theta.sin_cos();
            let kappa_rho = Complex64::new(
                kappa_maj / 2.0 * (1.0 + cos_t),
                kappa_min / 2.0 * sin_t,
            );
            let jacobian = Complex64::new(-kappa_maj * sin_t / 2.0, kappa_min * cos_t / 2.0);
            f(QuadratureNode {
                kappa_rho,
                weight: jacobian * w,
            })?;
        }
    }
    Ok(())
}

/// Direct and reflected integral components, accumulated jointly so that the
/// three kernel modes stay exactly linear in each other.
#[derive(Clone, Copy, Debug, Default)]
struct PathParts {
    los: Complex64,
    reflected: Complex64,
}

impl PathParts {
    fn add(&mut self, other: PathParts) {
        self.los += other.los;
        self.reflected += other.reflected;
    }

    fn sub(&mut self, other: PathParts) {
        self.los -= other.los;
        self.reflected -= other.reflected;
    }

    fn norm(&self) -> f64 {
        self.los.norm() + self.reflected.norm()
    }

    fn is_finite(&self) -> bool {
        self.los.is_finite() && self.reflected.is_finite()
    }
}

/// Cylindrical-wave channel integral between z-planes `sz` and `rz` at
/// transverse distance `delta_rho`, for the selected propagation path:
/// `kappa1 eta1/(4 pi) * integral krho J0(krho delta_rho)/kappa_1z * (terms) dkrho`.
///
/// Deterministic for a fixed configuration; fails with the documented guard
/// for `delta_rho / lambda >= 3600`.
pub fn sommerfeld_h(
    delta_rho: f64,
    rz: f64,
    sz: f64,
    hs: &HalfSpace,
    mode: KernelMode,
    cfg: &ContourConfig,
) -> Result<Complex64> {
    let parts = sommerfeld_parts(delta_rho, rz, sz, hs, mode.region, cfg)?;
    Ok(combine_path(mode.path, parts.los, parts.reflected))
}

fn sommerfeld_parts(
    delta_rho: f64,
    rz: f64,
    sz: f64,
    hs: &HalfSpace,
    region: Region,
    cfg: &ContourConfig,
) -> Result<PathParts> {
    cfg.validate()?;
    if !(delta_rho >= 0.0) || !delta_rho.is_finite() {
        return Err(Error::Geometry(format!(
            "transverse distance must be >= 0, got {delta_rho}"
        )));
    }
    let ratio = delta_rho / hs.wavenumbers.wavelength;
    if ratio >= DELTA_RHO_LAMBDA_LIMIT {
        return Err(Error::TransverseGuard {
            ratio,
            at: String::new(),
        });
    }

    let (kappa_maj, kappa_min) = contour_axes(&hs.wavenumbers, &hs.material, cfg);

    // The evanescent continuation decays exponentially in the z-separations
    // and is resolution-independent; evaluate it once.
    let tail = match cfg.indicator {
        Indicator::Tail => evanescent_tail(kappa_maj, delta_rho, rz, sz, hs, region, cfg)?,
        Indicator::Hard => PathParts::default(),
    };

    let evaluate = |n: usize| -> Result<PathParts> {
        let mut acc = contour_sum(kappa_maj, kappa_min, n, delta_rho, rz, sz, hs, region)?;
        match cfg.indicator {
            Indicator::Tail => acc.add(tail),
            // Truncating at kappa1 removes the band the arch implicitly
            // carries between kappa1 and the contour endpoint.
            Indicator::Hard => acc.sub(evanescent_band(
                kappa_maj,
                n.max(128) / 2,
                delta_rho,
                rz,
                sz,
                hs,
                region,
            )?),
        }
        if !acc.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite integral at delta_rho = {delta_rho}, rz = {rz}, sz = {sz}"
            )));
        }
        Ok(acc)
    };

    let mut n = cfg.n_nodes;
    let mut prev = evaluate(n)?;
    for _ in 0..MAX_DOUBLINGS {
        let next = evaluate(2 * n)?;
        let scale = next.norm().max(f64::MIN_POSITIVE);
        if (next.los - prev.los).norm() <= cfg.rel_tol * scale
            && (next.reflected - prev.reflected).norm() <= cfg.rel_tol * scale
        {
            let prefactor =
                hs.wavenumbers.kappa1 * hs.wavenumbers.impedance / (4.0 * std::f64::consts::PI);
            return Ok(PathParts {
                los: prefactor * next.los,
                reflected: prefactor * next.reflected,
            });
        }
        prev = next;
        n *= 2;
    }
    Err(Error::NonConvergent(format!(
        "contour integral still moving after {MAX_DOUBLINGS} node doublings \
         (delta_rho = {delta_rho}, rz = {rz}, sz = {sz}, last n = {n}, \
         residual = {:.3e})",
        prev.norm()
    )))
}

fn contour_sum(
    kappa_maj: f64,
    kappa_min: f64,
    n_nodes: usize,
    delta_rho: f64,
    rz: f64,
    sz: f64,
    hs: &HalfSpace,
    region: Region,
) -> Result<PathParts> {
    let k1sq = Complex64::new(
        hs.wavenumbers.kappa1 * hs.wavenumbers.kappa1,
        0.0,
    );
    let mut acc = PathParts::default();
    for_each_contour_node(kappa_maj, kappa_min, n_nodes, |node| {
        let kappa_1z = kz_component(k1sq, node.kappa_rho);
        let j0 = bessel_j0_complex(node.kappa_rho * delta_rho)?;
        let base = node.kappa_rho * j0 / kappa_1z * node.weight;
        let (los, refl) = kernel_terms(node.kappa_rho, kappa_1z, rz, sz, hs, region);
        acc.los += base * los;
        acc.reflected += base * refl;
        Ok(())
    })?;
    Ok(acc)
}

/// Shared chart for the real axis beyond `kappa1`: `krho = kappa1 cosh u`
/// makes `kappa_1z = i kappa1 sinh u`, so `krho/kappa_1z dkrho` collapses to
/// the smooth `-i kappa1 cosh u du` and the branch-point singularity cancels
/// analytically.
fn evanescent_panel(
    u_a: f64,
    u_b: f64,
    delta_rho: f64,
    rz: f64,
    sz: f64,
    hs: &HalfSpace,
    region: Region,
) -> Result<PathParts> {
    let k1 = hs.wavenumbers.kappa1;
    let mut acc = PathParts::default();
    for (u, w) in legendre::panel(u_a, u_b) {
        let kappa_rho = Complex64::new(k1 * u.cosh(), 0.0);
        let kappa_1z = Complex64::new(0.0, k1 * u.sinh());
        let j0 = bessel_j0_complex(kappa_rho * delta_rho)?;
        let base = Complex64::new(0.0, -k1 * u.cosh()) * j0 * w;
        let (los, refl) = kernel_terms(kappa_rho, kappa_1z, rz, sz, hs, region);
        acc.los += base * los;
        acc.reflected += base * refl;
    }
    Ok(acc)
}

/// Real-axis band `[kappa1, kappa_maj]` at a resolution tied to the main
/// node-doubling loop.
fn evanescent_band(
    kappa_maj: f64,
    n_nodes: usize,
    delta_rho: f64,
    rz: f64,
    sz: f64,
    hs: &HalfSpace,
    region: Region,
) -> Result<PathParts> {
    let u_max = (kappa_maj / hs.wavenumbers.kappa1).acosh();
    let panels = (n_nodes / PANEL_ORDER).max(2);
    let mut acc = PathParts::default();
    for p in 0..panels {
        let a = u_max * p as f64 / panels as f64;
        let b = u_max * (p + 1) as f64 / panels as f64;
        acc.add(evanescent_panel(a, b, delta_rho, rz, sz, hs, region)?);
    }
    Ok(acc)
}

/// Real-axis continuation beyond the contour endpoint, marched panel by
/// panel until the exponential z-decay renders further panels negligible.
fn evanescent_tail(
    kappa_maj: f64,
    delta_rho: f64,
    rz: f64,
    sz: f64,
    hs: &HalfSpace,
    region: Region,
    cfg: &ContourConfig,
) -> Result<PathParts> {
    let k1 = hs.wavenumbers.kappa1;
    let mut u = (kappa_maj / k1).acosh();
    let mut acc = PathParts::default();
    const MAX_PANELS: usize = 100_000;
    for _ in 0..MAX_PANELS {
        // resolve both the Bessel oscillation and the exponential decay
        let du_osc = 5.0 / (k1 * u.sinh() * delta_rho + 1.0);
        let du = du_osc.min(0.3);
        let panel = evanescent_panel(u, u + du, delta_rho, rz, sz, hs, region)?;
        acc.add(panel);
        if panel.norm() <= cfg.tail_cutoff * acc.norm().max(f64::MIN_POSITIVE) {
            return Ok(acc);
        }
        u += du;
        if u > 700.0 {
            return Ok(acc); // cosh overflow horizon; decay is absolute zero here
        }
    }
    Err(Error::NonConvergent(format!(
        "evanescent tail not decaying (delta_rho = {delta_rho}, rz = {rz}, sz = {sz}); \
         are source and receiver z-planes separated?"
    )))
}
