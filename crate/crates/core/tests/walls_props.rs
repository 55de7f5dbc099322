use ellk3_stab::charges::{ChargeSpec, Family, Polarization};
use ellk3_stab::lattice::{ChernVector, DivisorClass, SurfaceParams};
use ellk3_stab::rational::{int, rat, to_f64, Rational};
use ellk3_stab::walls::{
    display_diagnostic, enumerate_destabilizers, mini_wall_root, mini_walls_on_ray, rank_bound, slice_circle,
    stability_certificate, wall_quadric, Degeneracy, RaySide, SearchBounds, Verdict, WallFrame,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn chern(r: i64) -> impl Strategy<Value = ChernVector> {
    (-r..=r, -r..=r, -r..=r, -r..=r).prop_map(|(n, a, b, s)| ChernVector::ints(n, a, b, s))
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-30i64..30, 1i64..6).prop_map(|(n, d)| rat(n, d))
}

fn fiber() -> ChernVector {
    ChernVector::ints(0, 0, 1, 0)
}

proptest! {
    #[test]
    fn quadric_is_the_wall_relation(
        d0 in 1i64..4, ve in chern(5), vf in chern(5),
        x in (1i64..30, 1i64..6), y in small_rat(), z in small_rat(),
    ) {
        let frame = WallFrame::new(SurfaceParams::k3(), int(d0)).unwrap();
        let rec = wall_quadric(&frame, &ve, &vf);
        let x = rat(x.0, x.1);
        let spec = frame.charge_at(&x, &y, &z).unwrap();
        let (a, b) = (spec.eval(&ve), spec.eval(&vf));
        let n4 = frame.norm_sq() * frame.norm_sq();
        prop_assert_eq!((&a.re * &b.im - &b.re * &a.im) * n4, &x * rec.quadric.eval(&x, &y, &z));
    }

    #[test]
    fn fiber_walls_concentric_and_nested(
        d0 in 1i64..4,
        cs in prop::collection::vec((1i64..5, -4i64..5, -4i64..5, -3i64..7), 2..6),
        z in small_rat(),
    ) {
        let frame = WallFrame::new(SurfaceParams::k3(), int(d0)).unwrap();
        let slices: Vec<_> = cs
            .iter()
            .map(|&(n, a, b, s)| wall_quadric(&frame, &ChernVector::ints(n, a, b, s), &fiber()))
            .filter_map(|r| slice_circle(&r, &z))
            .collect();
        for s in &slices {
            prop_assert_eq!(&s.center_y, &-z.clone());
            prop_assert!(!s.radius_sq.is_negative());
        }
        for a in &slices {
            for b in &slices {
                prop_assert!(a.nested_or_equal(b));
            }
        }
    }

    #[test]
    fn displays_agree(d0 in 1i64..4, ve in chern(5), a in -3i64..4, b in -3i64..4, s in -3i64..4) {
        let frame = WallFrame::new(SurfaceParams::k3(), int(d0)).unwrap();
        let rec = wall_quadric(&frame, &ve, &fiber());
        if rec.degeneracy != Degeneracy::IdenticallyZero {
            prop_assert_eq!(display_diagnostic(&rec).fiber_display, Some(true));
        }
        let l = ChernVector::ints(1, a, b, s);
        let rec = wall_quadric(&frame, &ve, &l);
        if rec.degeneracy != Degeneracy::IdenticallyZero {
            prop_assert_eq!(display_diagnostic(&rec).line_bundle_display, Some(true));
        }
    }

    #[test]
    fn mini_wall_roots_scale_invariant(
        target in chern(4), cand in chern(4), k in 1i64..5, lam in (1i64..9, 1i64..4), hf in 3i64..8,
    ) {
        let k3 = SurfaceParams::k3();
        let h = DivisorClass::ints(1, hf);
        let b = DivisorClass::zero();
        if let Ok(base) = mini_wall_root(&k3, &h, &b, &target, &cand) {
            let lam = rat(lam.0, lam.1);
            prop_assert_eq!(mini_wall_root(&k3, &h.scale(&lam), &b, &target, &cand).unwrap(), base.clone());
            let scaled = mini_wall_root(&k3, &h, &b, &target, &cand.scale(&int(k))).unwrap();
            prop_assert_eq!(scaled, base);
        }
    }

    #[test]
    fn rank_bound_surd_matches_float(a in -3i64..4, b in -3i64..6, d in (1i64..30, 1i64..6), v in (1i64..30, 1i64..6)) {
        let k3 = SurfaceParams::k3();
        let alpha = DivisorClass::ints(a, b);
        let omega = Polarization::from_dv(&k3, &rat(d.0, d.1), &rat(v.0, v.1)).unwrap();
        let Ok(rb) = rank_bound(&k3, &alpha, &omega) else { return Ok(()) };
        let s = to_f64(&omega.scale_sq).sqrt();
        let x = to_f64(&omega.square(&k3));
        let y = s * to_f64(&k3.intersect(&omega.unit, &alpha));
        let aa = to_f64(&k3.square(&alpha));
        let direct = (x - aa + ((aa - x).powi(2) + 4.0 * y * y).sqrt()) / (2.0 * x);
        prop_assert!((rb.value.to_f64() - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        prop_assert!(rb.enclosure.0 <= rb.enclosure.1);
        prop_assert!(to_f64(&rb.enclosure.0) <= direct + 1e-9 && direct - 1e-9 <= to_f64(&rb.enclosure.1));
        prop_assert_eq!(rb.floor.clone(), BigInt::from(direct.floor() as i64));
    }
}

#[test]
fn contrived_ray_root() {
    let k3 = SurfaceParams::k3();
    let l = ChernVector::ints(1, 1, 1, 0);
    let a = ChernVector::ints(1, 0, 1, 1);
    let h = DivisorClass::ints(1, 4);
    let (t, side) = mini_wall_root(&k3, &h, &DivisorClass::zero(), &l, &a).unwrap();
    assert_eq!((t, side), (rat(3, 2), RaySide::StableAbove));
    let walls = mini_walls_on_ray(&k3, &h, &DivisorClass::zero(), &l, &[a.clone(), ChernVector::ints(1, 0, 1, 3)]).unwrap();
    assert_eq!(walls.len(), 2);
    assert!(walls[0].t_root > walls[1].t_root);
}

#[test]
fn rank_bound_fixture() {
    let k3 = SurfaceParams::k3();
    let rb = rank_bound(&k3, &DivisorClass::ints(1, 1), &Polarization::rational(DivisorClass::ints(1, 4))).unwrap();
    let want = 0.5 + 72f64.sqrt() / 12.0;
    assert!((rb.value.to_f64() - want).abs() < 1e-12);
    assert!(&rb.enclosure.1 - &rb.enclosure.0 < rat(1, 1_000_000_000_000));
    assert_eq!(rb.floor, BigInt::from(1));
}

#[test]
fn small_vd_enumeration_is_empty() {
    let k3 = SurfaceParams::k3();
    let spec = ChargeSpec::new(k3.clone(), Family::VD { v: rat(1, 10), d: rat(1, 10) }).unwrap();
    let l = k3.line_bundle(&DivisorClass::ints(1, 1));
    assert!(enumerate_destabilizers(&spec, &l, &SearchBounds::new(3, 3, 3)).unwrap().is_empty());
}

#[test]
fn certificate_fixtures() {
    let k3 = SurfaceParams::k3();
    let bounds = SearchBounds::new(5, 5, 5);
    let cert = |dalpha: i64, d: Rational, v: Rational| {
        let spec = ChargeSpec::new(k3.clone(), Family::VD { v, d }).unwrap();
        stability_certificate(&spec, &k3.line_bundle(&k3.unit_divisor(&int(dalpha))), &bounds).unwrap()
    };
    assert_eq!(cert(-1, int(2), int(2)), Verdict::NoNumericalWall);
    match cert(0, int(1), rat(1, 2)) {
        Verdict::Inconclusive(why) => assert!(why.contains("twisted ampleness"), "{why}"),
        other => panic!("{other:?}"),
    }
    // D + D_alpha + e <= 0 puts L outside the heart.
    match cert(-4, int(1), int(1)) {
        Verdict::Inconclusive(why) => assert!(why.contains("heart"), "{why}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn identical_classes_give_zero_quadric() {
    let frame = WallFrame::new(SurfaceParams::k3(), int(1)).unwrap();
    let v = ChernVector::ints(2, 1, -1, 3);
    let rec = wall_quadric(&frame, &v, &v.scale(&int(3)));
    assert!(rec.quadric.is_zero());
    assert_eq!(rec.degeneracy, Degeneracy::IdenticallyZero);
    assert!(Rational::zero().is_zero());
}
