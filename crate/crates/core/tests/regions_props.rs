use ellk3_stab::lattice::SurfaceParams;
use ellk3_stab::rational::{int, rat, Rational};
use ellk3_stab::regions::{
    classify, positivity, raster, tangency_data, thm1_stable, transform_case_stable, twisted_ample, volume_ok,
    witness_stable_not_twisted_ample, RegionError, RegionQuery, Window,
};
use num_traits::Signed;
use proptest::prelude::*;

fn pos() -> impl Strategy<Value = Rational> {
    (1i64..400, 1i64..20).prop_map(|(n, d)| rat(n, d))
}

fn q(dalpha: i64, d: &Rational, v: &Rational) -> RegionQuery {
    RegionQuery::new(SurfaceParams::k3(), int(dalpha), d.clone(), v.clone()).unwrap()
}

proptest! {
    #[test]
    fn implications(dalpha in -8i64..8, d in pos(), v in pos()) {
        let l = classify(&q(dalpha, &d, &v));
        prop_assert_eq!(l.thm1_stable, l.positive && l.volume_ok && l.twisted_ample);
        prop_assert!(!l.twisted_ample || l.positive);
        prop_assert!(!l.theorem_region_stable || l.positive);
        prop_assert!(!l.transform_case_stable || dalpha == -1 || dalpha == -2);
    }

    #[test]
    fn closed_upward_in_v(dalpha in -8i64..8, d in pos(), v in pos(), dv in pos()) {
        let (lo, hi) = (q(dalpha, &d, &v), q(dalpha, &d, &(&v + &dv)));
        prop_assert!(!thm1_stable(&lo) || thm1_stable(&hi));
        prop_assert!(!volume_ok(&lo) || volume_ok(&hi));
        prop_assert!(!twisted_ample(&lo) || twisted_ample(&hi));
    }

    #[test]
    fn twisted_closed_rightward_in_d(dalpha in -2i64..=0, d in pos(), v in pos(), dd in pos()) {
        let (l, r) = (q(dalpha, &d, &v), q(dalpha, &(&d + &dd), &v));
        prop_assert!(!(positivity(&l) && twisted_ample(&l)) || (positivity(&r) && twisted_ample(&r)));
    }

    #[test]
    fn twisted_ample_gives_transform_case(dalpha in -2i64..=-1, d in pos(), v in pos()) {
        let p = q(dalpha, &d, &v);
        prop_assert!(!twisted_ample(&p) || transform_case_stable(&p));
    }

    #[test]
    fn volume_boundary_is_tangency_curve(dalpha in -9i64..-2, d in pos()) {
        let t = tangency_data(&SurfaceParams::k3(), &int(dalpha)).unwrap();
        let v = t.boundary_value_at(&d);
        let b = RegionQuery::boundary(SurfaceParams::k3(), int(dalpha), d.clone(), v.clone());
        prop_assert!(b.volume_poly() == int(0));
        // Second-order remainder of the derivative.
        let h = rat(1, 1_000_000);
        let rem = t.boundary_value_at(&(&d + &h)) - &v - &h * t.derivative_at(&d);
        prop_assert!(rem.abs() < rat(1, 1_000_000_000));
    }
}

#[test]
fn reductions_at_boundary() {
    let d = rat(7, 3);
    assert!(!twisted_ample(&q(-1, &d, &(int(1) + int(1) / &d))));
    assert!(twisted_ample(&q(-1, &d, &(int(1) + int(1) / &d + rat(1, 1000)))));
    assert!(!twisted_ample(&q(-2, &d, &int(1))));
    assert!(twisted_ample(&q(-2, &d, &rat(1001, 1000))));
}

#[test]
fn volume_ok_is_not_closed_rightward() {
    // With V fixed, (D + D_alpha + e)^2 eventually outgrows 4V(D + e/2).
    assert!(volume_ok(&q(0, &int(1), &int(2))));
    assert!(!volume_ok(&q(0, &int(100), &int(2))));
}

#[test]
fn tangency_fixture() {
    let k3 = SurfaceParams::k3();
    let t = tangency_data(&k3, &int(-4)).unwrap();
    assert_eq!(t.point, (int(2), int(0)));
    assert_eq!(t.g_at_point, int(6));
    assert!(t.neighborhood_ok);
    assert!(matches!(tangency_data(&k3, &int(-2)), Err(RegionError::HypothesisViolated(_))));
}

#[test]
fn witness_fixture() {
    let k3 = SurfaceParams::k3();
    for da in 0..5 {
        let (d, v) = witness_stable_not_twisted_ample(&k3, &int(da)).unwrap();
        let l = classify(&q(da, &d, &v));
        assert!(l.positive && !l.twisted_ample && l.theorem_region_stable);
    }
    assert_eq!(witness_stable_not_twisted_ample(&k3, &int(0)).unwrap(), (int(1), rat(1, 2)));
}

#[test]
fn raster_is_deterministic() {
    let base = q(-1, &int(1), &int(1));
    let w = Window::new(rat(1, 10), rat(1, 10), int(4), int(4)).unwrap();
    let a = raster(&base, &w, 37, 23).unwrap();
    let b = raster(&base, &w, 37, 23).unwrap();
    assert_eq!(a.to_svg(), b.to_svg());
    let csv = a.to_csv();
    assert_eq!(csv, b.to_csv());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 37 * 23 + 1);
    assert_eq!(lines[0], "D,V,positive,volume_ok,twisted_ample,thm1,case,theorem");
    assert_eq!(a.cells[0].d, rat(1, 10));
    assert_eq!(a.cells[0].v, rat(1, 10));
    assert_eq!(a.cells.last().unwrap().v, int(4));
    assert!(matches!(Window::new(int(1), int(0), int(1), int(2)), Err(RegionError::WindowEmpty)));
    assert!(matches!(raster(&base, &w, 0, 3), Err(RegionError::GridSize(0, 3))));
}
