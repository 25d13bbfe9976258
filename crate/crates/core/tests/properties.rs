use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use torus_ainf::gauge::{gauge_apply, random_gauge};
use torus_ainf::hochschild::{coboundary, gerstenhaber, CochainBasis};
use torus_ainf::quiver_ainf::{ainf_check_unital, category_a, preset_a, Cochain};
use torus_ainf::torus_polygons::{enumerate_polygons, preset_scene, CornerSpec};
use torus_ainf::useries::IntSeries;
use torus_ainf::{FieldSpec, FieldValue};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed_a1f0),
        failure_persistence: None,
        ..Config::default()
    }
}

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rational),
        Just(FieldSpec::Prime(2)),
        Just(FieldSpec::Prime(3)),
        Just(FieldSpec::Prime(5)),
        Just(FieldSpec::Prime(7)),
    ]
}

fn cochain(spec: FieldSpec, r: usize, s: i32, picks: &[(usize, i64)]) -> Cochain {
    let basis = CochainBasis::new(&category_a(), r, s);
    let mut c = Cochain::zero(r, s);
    if basis.is_empty() {
        return c;
    }
    for (i, x) in picks {
        let (t, g) = &basis.elements[i % basis.len()];
        c.add_term_at(t, *g, &FieldValue::from_i64(*x, spec));
    }
    c
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((any::<usize>(), -3i64..=3), 1..6)
}

fn sign(e: i64, spec: FieldSpec) -> FieldValue {
    FieldValue::sign(e, spec)
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn field_axioms(spec in field(), a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let (a, b, c) = (FieldValue::from_i64(a, spec), FieldValue::from_i64(b, spec), FieldValue::from_i64(c, spec));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn series_ring(
        xs in prop::collection::vec(-9i64..9, 8),
        ys in prop::collection::vec(-9i64..9, 8),
        zs in prop::collection::vec(-9i64..9, 8),
    ) {
        let s = |v: &[i64]| IntSeries::from_coeffs(v.iter().map(|x| BigInt::from(*x)).collect());
        let (x, y, z) = (s(&xs), s(&ys), s(&zs));
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        let mut unit = xs.clone();
        unit[0] = 1;
        let u = s(&unit);
        prop_assert!(u.mul(&u.inv().unwrap()).unwrap().is_one());
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn delta_squared_vanishes(spec in field(), r in 0usize..4, s in -3i32..=1, p in picks()) {
        let a = preset_a(spec);
        let phi = cochain(spec, r, s, &p);
        let dd = coboundary(&a, &coboundary(&a, &phi));
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn coboundary_keeps_degrees(spec in field(), r in 0usize..4, s in -3i32..=1, p in picks()) {
        let a = preset_a(spec);
        let d = coboundary(&a, &cochain(spec, r, s, &p));
        prop_assert_eq!((d.arity, d.shift), (r + 1, s));
        prop_assert!(d.validate(a.cat()).is_ok());
        prop_assert!(d.is_normalized(a.cat()));
    }

    #[test]
    fn bracket_graded_jacobi(
        spec in field(),
        shape in ((1usize..3, -2i32..=0), (1usize..3, -2i32..=0), (1usize..3, -2i32..=0)),
        px in picks(), py in picks(), pz in picks(),
    ) {
        let cat = category_a();
        let ((rx, sx), (ry, sy), (rz, sz)) = shape;
        let x = cochain(spec, rx, sx, &px);
        let y = cochain(spec, ry, sy, &py);
        let z = cochain(spec, rz, sz, &pz);
        let (a, b, c) = (x.shifted_degree(), y.shifted_degree(), z.shifted_degree());
        let g = |p: &Cochain, q: &Cochain| gerstenhaber(&cat, spec, p, q);
        let mut total = g(&g(&x, &y), &z).scaled(&sign(a * c, spec));
        total.add_scaled(&g(&g(&y, &z), &x), &sign(b * a, spec));
        total.add_scaled(&g(&g(&z, &x), &y), &sign(c * b, spec));
        prop_assert!(total.is_zero());
        // Graded antisymmetry.
        let mut anti = g(&x, &y);
        anti.add_scaled(&g(&y, &x), &sign(a * b, spec));
        prop_assert!(anti.is_zero());
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn gauge_preserves_relations(seed in any::<u64>()) {
        let spec = FieldSpec::Rational;
        let g = random_gauge(spec, seed, 4, 0.15);
        prop_assert!(g.validate().is_ok());
        prop_assume!(!g.is_identity());
        let moved = gauge_apply(&g, &preset_a(spec), 6);
        prop_assert!(moved.validate().is_ok());
        prop_assert!(ainf_check_unital(&moved, 6).is_empty());
        prop_assert!(moved.mu[3..].iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn polygon_witnesses_are_rigid_and_convex(bound in 0u32..4) {
        let scene = preset_scene();
        for spec in [CornerSpec::mu2_first(), CornerSpec::mu2_second(), CornerSpec::mu3()] {
            for w in enumerate_polygons(&scene, &spec, bound).unwrap() {
                prop_assert_eq!(w.degree_defect, 0);
                prop_assert!(w.wrap <= bound);
                let n = w.corners.len();
                for i in 0..n {
                    let (a, b, c) = (w.corners[i], w.corners[(i + 1) % n], w.corners[(i + 2) % n]);
                    let turn = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
                    prop_assert!(turn > 0.into());
                }
            }
        }
    }
}
