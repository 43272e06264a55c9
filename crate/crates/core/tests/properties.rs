//! Property tests for the engine invariants that hold over whole parameter
//! ranges rather than at isolated reference points.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use proptest::prelude::*;

use specmimo_core::channel::{ChannelMatrix, Provenance};
use specmimo_core::geometry::{incidence_angle, projected_tilts, Placement};
use specmimo_core::materials::{
    builtin_material, fresnel_angle, fresnel_wavenumber, kz_component, Material, Wavenumbers,
};
use specmimo_core::mimo::{
    capacity_upper_bound, dof_count, normalized_eigenvalues, waterfill_capacity,
};

fn matrix_of(entries: DMatrix<Complex64>) -> ChannelMatrix {
    ChannelMatrix {
        entries,
        provenance: Provenance::LosOracle,
        scenario_hash: "prop".into(),
    }
}

proptest! {
    #[test]
    fn fresnel_magnitude_bounded(
        theta in 0.0..std::f64::consts::FRAC_PI_2,
        n_re in 1.0..10.0f64,
        n_im in 0.0..5.0f64,
    ) {
        let m = Material::dielectric("m", Complex64::new(n_re, n_im)).unwrap();
        let r = fresnel_angle(theta, &m);
        prop_assert!(r.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn fresnel_wavenumber_consistent_with_angle(
        theta in 0.0..1.55f64,
        n_re in 1.05..6.0f64,
        n_im in 0.0..2.0f64,
    ) {
        let m = Material::dielectric("m", Complex64::new(n_re, n_im)).unwrap();
        let w = Wavenumbers::new(57.5e9, &m).unwrap();
        let krho = Complex64::new(w.kappa1 * theta.sin(), 0.0);
        let ra = fresnel_angle(theta, &m);
        let rk = fresnel_wavenumber(krho, &w, &m);
        prop_assert!((ra - rk).norm() <= 1e-11 * ra.norm().max(1e-6));
    }

    #[test]
    fn radiation_branch_in_fourth_quadrant(
        re in 0.0..2.5f64,
        im in -0.01..0.0f64,
        n_re in 1.0..4.0f64,
    ) {
        let m = Material::dielectric("m", Complex64::new(n_re, 0.1)).unwrap();
        let w = Wavenumbers::new(57.5e9, &m).unwrap();
        let krho = Complex64::new(re * w.kappa1, im * w.kappa1);
        for ksq in [Complex64::new(w.kappa1 * w.kappa1, 0.0), w.kappa2 * w.kappa2] {
            let kz = kz_component(ksq, krho);
            prop_assert!(kz.im >= 0.0);
            if kz.im == 0.0 {
                prop_assert!(kz.re >= 0.0);
            }
        }
    }

    #[test]
    fn incidence_monotone_and_projection_ordered(
        x0 in 0.0..40.0f64,
        dx in 0.01..40.0f64,
        y in 0.0..20.0f64,
        z in 0.1..14.9f64,
    ) {
        let d0 = 15.0;
        let t1 = incidence_angle(Vector3::new(x0, 0.0, z), d0).unwrap();
        let t2 = incidence_angle(Vector3::new(x0 + dx, 0.0, z), d0).unwrap();
        prop_assert!(t2 > t1);
        // image path is longer and shallower
        let p = Placement::new(Vector3::new(x0, y, z), d0).unwrap();
        prop_assert!(p.equivalent_range >= p.range - 1e-12);
        let tilts = projected_tilts(Vector3::new(x0.max(1e-3), y, z), d0).unwrap();
        prop_assert!(tilts.reflected <= tilts.los + 1e-12);
    }

    #[test]
    fn incidence_rotation_invariant_about_z(
        x in 0.1..50.0f64,
        y in 0.0..50.0f64,
        z in 0.1..14.9f64,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let d0 = 15.0;
        let rho = x.hypot(y);
        let rotated = Vector3::new(rho * phi.cos(), rho * phi.sin(), z);
        let t1 = incidence_angle(Vector3::new(x, y, z), d0).unwrap();
        let t2 = incidence_angle(rotated, d0).unwrap();
        prop_assert!((t1 - t2).abs() <= 1e-10);
    }

    #[test]
    fn capacity_never_exceeds_bound(
        seed_entries in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..64),
        nr in 1..=8usize,
        nt in 1..=8usize,
        snr_db in -15.0..35.0f64,
    ) {
        let mut it = seed_entries.into_iter().cycle();
        let m = matrix_of(DMatrix::from_fn(nr, nt, |_, _| {
            let (re, im) = it.next().unwrap();
            Complex64::new(re, im + 0.1)
        }));
        let eigs = normalized_eigenvalues(&m).unwrap();
        let sum: f64 = eigs.iter().sum();
        prop_assert!((sum - (nr * nt) as f64).abs() <= 1e-9 * (nr * nt) as f64);
        let snr = 10f64.powf(snr_db / 10.0);
        let wf = waterfill_capacity(&eigs, snr).unwrap();
        let bound = capacity_upper_bound(nr, nt, snr).unwrap();
        prop_assert!(wf.capacity <= bound.bound * (1.0 + 1e-12) + 1e-12);
        // allocated power is exactly the budget
        let total: f64 = wf.powers.iter().sum();
        prop_assert!((total - snr).abs() <= 1e-9 * snr);
    }

    #[test]
    fn analysis_invariant_under_scaling(
        scale_re in -3.0..3.0f64,
        scale_im in -3.0..3.0f64,
        snr_db in -10.0..30.0f64,
    ) {
        prop_assume!(scale_re.abs() + scale_im.abs() > 1e-3);
        let base = DMatrix::from_fn(4, 4, |r, c| {
            Complex64::new((r * 3 + c) as f64 - 4.0, (r as f64) * 0.7 - c as f64)
        });
        let scaled = base.map(|v| v * Complex64::new(scale_re, scale_im));
        let a = normalized_eigenvalues(&matrix_of(base)).unwrap();
        let b = normalized_eigenvalues(&matrix_of(scaled)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8 * x.max(1e-12));
        }
        prop_assert_eq!(dof_count(&a, 40.0), dof_count(&b, 40.0));
        let snr = 10f64.powf(snr_db / 10.0);
        let ca = waterfill_capacity(&a, snr).unwrap().capacity;
        let cb = waterfill_capacity(&b, snr).unwrap().capacity;
        prop_assert!((ca - cb).abs() <= 1e-8 * ca.max(1e-12));
    }

    #[test]
    fn capacity_monotone_in_snr(
        snr_db in -10.0..25.0f64,
        step_db in 0.1..10.0f64,
    ) {
        let eigs = [30.0, 18.0, 9.0, 4.0, 2.0, 0.6, 0.3, 0.1];
        let c1 = waterfill_capacity(&eigs, 10f64.powf(snr_db / 10.0)).unwrap().capacity;
        let c2 = waterfill_capacity(&eigs, 10f64.powf((snr_db + step_db) / 10.0))
            .unwrap()
            .capacity;
        prop_assert!(c2 > c1);
        let b1 = capacity_upper_bound(6, 7, 10f64.powf(snr_db / 10.0)).unwrap().bound;
        let b2 = capacity_upper_bound(7, 7, 10f64.powf(snr_db / 10.0)).unwrap().bound;
        prop_assert!(b2 >= b1);
    }
}

#[test]
fn fresnel_grid_monotone_for_builtins() {
    // |R| grows toward grazing for every real-index builtin
    for m in specmimo_core::materials::builtin_materials() {
        if m.perfect_conductor {
            continue;
        }
        let mut last = 0.0;
        for k in 0..=900 {
            let r = fresnel_angle((k as f64) * 0.1f64.to_radians(), &m).norm();
            assert!(r >= last - 1e-12, "{}: |R| dipped at {k}", m.name);
            last = r;
        }
        assert!(builtin_material(&m.name).is_some());
    }
}
