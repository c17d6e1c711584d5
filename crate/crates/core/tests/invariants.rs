//! Property tests for pointwise invariants.

use heiscone::geodesics::closed_form::{closed_form_heis, HeisGeodesicParams, HeisKind};
use heiscone::maps::{isometry_residual, pushforward};
use heiscone::metric::{inner, metric_matrix};
use heiscone::structures::apply_cstruct;
use heiscone::{ComplexStructureId, MapId, MetricId, Point, Tangent};
use proptest::prelude::*;

fn heis() -> impl Strategy<Value = Point> {
    (-3.0..3.0f64, -3.0..3.0f64, -5.0..5.0f64).prop_map(|(x, y, t)| Point::heisenberg(x, y, t))
}

fn cone() -> impl Strategy<Value = Point> {
    (-3.0..3.0f64, -3.0..3.0f64, -5.0..5.0f64, 0.2..5.0f64).prop_map(|(x, y, t, r)| Point::cone(x, y, t, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn heisenberg_maps_preserve_sasaki(p in heis(), a in -2.0..2.0f64, b in -2.0..2.0f64, s in -2.0..2.0f64, th in 0.0..6.3f64) {
        for f in [MapId::LeftTranslation { a, b, s }, MapId::Rotation { theta: th }, MapId::Conjugation] {
            prop_assert!(isometry_residual(&f, &MetricId::Sasaki, &MetricId::Sasaki, &p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn translations_compose_with_their_inverse(p in heis(), a in -2.0..2.0f64, b in -2.0..2.0f64, s in -2.0..2.0f64) {
        let f = MapId::LeftTranslation { a, b, s };
        let q = f.inverse().unwrap().apply(&f.apply(&p).unwrap()).unwrap();
        for (x, y) in q.coords().iter().zip(p.coords()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn metrics_are_positive_definite(p in cone()) {
        for m in [MetricId::Cone, MetricId::Prime] {
            let g = metric_matrix(&m, &p).unwrap();
            prop_assert!(g.clone().cholesky().is_some());
            prop_assert!((&g - g.transpose()).norm() <= 1e-14 * g.norm());
        }
    }

    #[test]
    fn complex_structures_square_to_minus_one_and_are_orthogonal(p in cone(), c in prop::array::uniform4(-1.0..1.0f64)) {
        let u = Tangent::new(p, &c).unwrap();
        for (j, m) in [(ComplexStructureId::JCone, MetricId::Cone), (ComplexStructureId::ICone, MetricId::Prime)] {
            let ju = apply_cstruct(j, &u).unwrap();
            let jju = apply_cstruct(j, &ju).unwrap();
            prop_assert!(jju.add(&u).unwrap().coord_norm() < 1e-12);
            let (uu, vv) = (inner(&m, &p, &u, &u).unwrap(), inner(&m, &p, &ju, &ju).unwrap());
            prop_assert!((uu - vv).abs() < 1e-10 * uu.max(1.0));
            prop_assert!(inner(&m, &p, &u, &ju).unwrap().abs() < 1e-10 * uu.max(1.0));
        }
    }

    #[test]
    fn horospherical_map_is_isometric(p in cone()) {
        let res = isometry_residual(&MapId::Horospherical, &MetricId::Prime, &MetricId::Bergman, &p).unwrap();
        prop_assert!(res < 1e-8);
    }

    #[test]
    fn pushforward_matches_jacobian(p in cone(), c in prop::array::uniform4(-1.0..1.0f64)) {
        let u = Tangent::new(p, &c).unwrap();
        let w = pushforward(&MapId::Pcr, &u).unwrap();
        prop_assert!((w.components()[3] - c[3] / p.r().unwrap().sqrt()).abs() < 1e-14);
    }

    #[test]
    fn heisenberg_closed_form_starts_at_base(p in heis(), s in 0.0..1.0f64) {
        let params = HeisGeodesicParams::new(HeisKind::HorizontalLine { a: 0.4f64.cos(), b: 0.4f64.sin() }, p).unwrap();
        prop_assert_eq!(closed_form_heis(&params, 0.0), p);
        let q = closed_form_heis(&params, s);
        prop_assert!((q.coords()[2] - p.coords()[2] - 2.0 * s * (p.coords()[1] * 0.4f64.cos() - p.coords()[0] * 0.4f64.sin())).abs() < 1e-12);
    }
}
