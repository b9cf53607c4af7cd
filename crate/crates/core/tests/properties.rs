use std::f64::consts::PI;

use proptest::prelude::*;

use faplab_core::capacity::{dispersion_of, ConstraintSpec, Source};
use faplab_core::{
    independent_sum, CauchyParams, ChannelGeometry, Density, Dimension, DriftVector, FapDensity, MultivariateCauchy,
    UnivariateCauchy,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn univariate_entropy_shifts_by_log_scale(g in 1e-3f64..1e3, c in 1e-2f64..1e2) {
        let a = UnivariateCauchy::new(0.0, g).unwrap().entropy();
        let b = UnivariateCauchy::new(1.0, g * c).unwrap().entropy();
        prop_assert!((b - a - c.ln()).abs() < 1e-12);
    }

    #[test]
    fn bivariate_entropy_shifts_by_twice_log_scale(g in 1e-2f64..1e2, c in 1e-2f64..1e2) {
        let a = MultivariateCauchy::isotropic(vec![0.0, 0.0], g).unwrap().entropy();
        let b = MultivariateCauchy::isotropic(vec![0.0, 0.0], g * c).unwrap().entropy();
        prop_assert!((b - a - 2.0 * c.ln()).abs() < 1e-11);
    }

    #[test]
    fn sums_add_locations_and_scales(l1 in -10f64..10.0, l2 in -10f64..10.0, g1 in 1e-3f64..10.0, g2 in 1e-3f64..10.0) {
        let u: CauchyParams = UnivariateCauchy::new(l1, g1).unwrap().into();
        let v: CauchyParams = UnivariateCauchy::new(l2, g2).unwrap().into();
        let (loc, scale) = independent_sum(&u, &v).unwrap().location_and_scale().unwrap();
        prop_assert!((loc[0] - (l1 + l2)).abs() < 1e-12);
        prop_assert!((scale - (g1 + g2)).abs() < 1e-12);
        let u: CauchyParams = MultivariateCauchy::isotropic(vec![l1, l2], g1).unwrap().into();
        let v: CauchyParams = MultivariateCauchy::isotropic(vec![l2, l1], g2).unwrap().into();
        let (loc, scale) = independent_sum(&u, &v).unwrap().location_and_scale().unwrap();
        prop_assert!((loc[0] - (l1 + l2)).abs() < 1e-12 && (loc[1] - (l1 + l2)).abs() < 1e-12);
        prop_assert!((scale - (g1 + g2)).abs() < 1e-12);
    }

    #[test]
    fn point_mass_is_sum_identity(g in 1e-3f64..10.0, l in -5f64..5.0) {
        let u: CauchyParams = UnivariateCauchy::new(l, g).unwrap().into();
        let zero = CauchyParams::point_mass(vec![0.0]);
        prop_assert_eq!(independent_sum(&u, &zero).unwrap(), u.clone());
        prop_assert_eq!(independent_sum(&zero, &u).unwrap(), u);
    }

    #[test]
    fn fap_2d_reflection_symmetry(lambda in 0.1f64..5.0, vy in -3f64..3.0, y in -20f64..20.0, x in -3f64..3.0) {
        let g = ChannelGeometry::new(Dimension::Two, lambda, 1.0).unwrap();
        let d = FapDensity::new(g, DriftVector::new(vec![0.0, vy]).unwrap(), vec![x]).unwrap();
        let (a, b) = (d.pdf(&[x + y]), d.pdf(&[x - y]));
        prop_assert!((a - b).abs() <= 1e-13 * a.max(b));
    }

    #[test]
    fn fap_2d_transverse_drift_mirror(v1 in -3f64..3.0, vy in -3f64..3.0, y in -20f64..20.0) {
        let g = ChannelGeometry::new(Dimension::Two, 1.0, 0.7).unwrap();
        let p = FapDensity::new(g, DriftVector::new(vec![v1, vy]).unwrap(), vec![0.0]).unwrap();
        let m = FapDensity::new(g, DriftVector::new(vec![-v1, vy]).unwrap(), vec![0.0]).unwrap();
        let (a, b) = (p.pdf(&[y]), m.pdf(&[-y]));
        prop_assert!((a - b).abs() <= 1e-13 * a.max(b));
    }

    #[test]
    fn fap_3d_rotation_symmetry_without_transverse_drift(vz in -3f64..3.0, r in 0f64..20.0, t in 0f64..6.28) {
        let g = ChannelGeometry::new(Dimension::Three, 1.0, 1.0).unwrap();
        let d = FapDensity::new(g, DriftVector::new(vec![0.0, 0.0, vz]).unwrap(), vec![0.0, 0.0]).unwrap();
        let (a, b) = (d.pdf(&[r, 0.0]), d.pdf(&[r * t.cos(), r * t.sin()]));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dispersion_of_shifted_cauchy(g in 0.05f64..50.0, l in -5f64..5.0) {
        let spec = ConstraintSpec::new(1).unwrap();
        let centered = dispersion_of(Source::Pdf(&UnivariateCauchy::new(0.0, g).unwrap()), &spec).unwrap();
        prop_assert!((centered - g).abs() <= 1e-10 * g);
        // E ln(1 + (Y/k)²) = ln(((k + g)² + l²) / k²) for Cauchy(l, g).
        let oracle = (g + (4.0 * g * g + 3.0 * l * l).sqrt()) / 3.0;
        let d = dispersion_of(Source::Pdf(&UnivariateCauchy::new(l, g).unwrap()), &spec).unwrap();
        prop_assert!((d - oracle).abs() <= 1e-9 * oracle);
    }

    #[test]
    fn bivariate_dispersion_recovers_scale(g in 0.05f64..50.0) {
        let spec = ConstraintSpec::new(2).unwrap();
        let m = MultivariateCauchy::isotropic(vec![0.0, 0.0], g).unwrap();
        let d = dispersion_of(Source::Pdf(&m), &spec).unwrap();
        prop_assert!((d - g).abs() <= 1e-9 * g);
    }
}

#[test]
fn fap_zero_drift_matches_cauchy_closed_form() {
    let g = ChannelGeometry::new(Dimension::Two, 2.0, 1.0).unwrap();
    let d = FapDensity::new(g, DriftVector::zero(Dimension::Two), vec![1.0]).unwrap();
    for y in [-30.0, -1.0, 1.0, 2.5, 50.0] {
        let c = 2.0 / (PI * (4.0 + (y - 1.0) * (y - 1.0)));
        assert!((d.pdf(&[y]) - c).abs() <= 1e-15);
    }
}
