use std::cmp::Ordering;

use ellk3_stab::charges::{
    limit_phase, numeric_phase, ChargeError, ChargeSpec, Family, LimitObject, LimitPath, Polarization,
};
use ellk3_stab::lattice::{ChernVector, DivisorClass, NamedClass, SurfaceParams};
use ellk3_stab::rational::{int, rat};
use proptest::prelude::*;

fn chern() -> impl Strategy<Value = ChernVector> {
    (-8i64..8, -8i64..8, -8i64..8, -8i64..8).prop_map(|(n, a, b, s)| ChernVector::ints(n, a, b, s))
}

fn vd(v: (i64, i64), d: (i64, i64)) -> ChargeSpec {
    ChargeSpec::new(SurfaceParams::k3(), Family::VD { v: rat(v.0, v.1), d: rat(d.0, d.1) }).unwrap()
}

proptest! {
    #[test]
    fn exact_order_matches_float_phase(v in chern(), w in chern(), dv in 1i64..20, dd in 1i64..20) {
        let spec = ChargeSpec::new(
            SurfaceParams::k3(),
            Family::Standard {
                omega: Polarization::from_dv(&SurfaceParams::k3(), &rat(dd, 4), &rat(dv, 3)).unwrap(),
                b: DivisorClass::ints(0, 1),
            },
        ).unwrap();
        prop_assume!(!spec.in_kernel(&v) && !spec.in_kernel(&w));
        let (pv, pw) = (spec.phase(&v).unwrap(), spec.phase(&w).unwrap());
        let exact = spec.compare_phase(&v, &w).unwrap();
        let gap = pv.to_f64() - pw.to_f64();
        if gap.abs() > 1e-9 {
            prop_assert_eq!(exact, if gap > 0.0 { Ordering::Greater } else { Ordering::Less });
        }
        prop_assert_eq!(spec.compare_phase(&w, &v).unwrap(), exact.reverse());
    }

    #[test]
    fn heart_shadow_is_phase_in_unit_interval(v in chern()) {
        let spec = vd((3, 2), (1, 1));
        prop_assume!(!spec.in_kernel(&v));
        let phi = spec.phase(&v).unwrap().to_f64();
        prop_assert_eq!(spec.heart_necessary(&v), phi > 0.0 && phi <= 1.0);
    }

    #[test]
    fn todd_shifts_real_part_by_rank(v in chern(), p in -4i64..4) {
        let k3 = SurfaceParams::k3();
        let omega = Polarization::rational(DivisorClass::ints(1, 3));
        let b = DivisorClass::ints(p, 1);
        let std = ChargeSpec::new(k3.clone(), Family::Standard { omega: omega.clone(), b: b.clone() }).unwrap();
        let td = ChargeSpec::new(k3, Family::Todd { omega, b }).unwrap();
        let (zs, zt) = (std.eval(&v), td.eval(&v));
        prop_assert_eq!(zs.im, zt.im);
        prop_assert_eq!(zt.re - zs.re, -v.n.clone());
    }
}

#[test]
fn named_charge_values() {
    let k3 = SurfaceParams::k3();
    let spec = vd((1, 2), (3, 1));
    let z = spec.eval(&ChernVector::ints(-1, 0, 0, 0));
    assert_eq!((z.re, z.im), (rat(-1, 2), int(0)));
    let ot = k3.chern_named(&NamedClass::SectionSheaf(-1)).unwrap();
    let z = spec.eval(&ot);
    assert_eq!((z.re, z.im), (int(0), int(3)));
    let special = ChargeSpec::new(k3.clone(), Family::WeakSpecial { dalpha: int(2) }).unwrap();
    let z = special.eval(&k3.chern_named(&NamedClass::SectionSheaf(-2)).unwrap());
    assert_eq!((z.re, z.im), (rat(-7, 2), rat(1, 2)));
}

#[test]
fn kernel_phases_and_ties() {
    let k3 = SurfaceParams::k3();
    let weak_h = ChargeSpec::new(k3.clone(), Family::WeakH).unwrap();
    let o_shift = ChernVector::ints(-1, 0, 0, 0);
    let section = ChernVector::ints(0, 1, 0, 0);
    assert_eq!(weak_h.phase(&o_shift).unwrap().to_f64(), 1.0);
    assert_eq!(weak_h.phase(&section).unwrap().to_f64(), 0.5);
    // O_X[1] (phase 1) against a class on the negative real axis: the kernel class sorts last.
    let neg_real = ChernVector::ints(0, 0, 0, 1);
    assert_eq!(weak_h.compare_phase(&o_shift, &neg_real).unwrap(), Ordering::Greater);

    let mixed = o_shift.clone() + section.scale(&int(2));
    assert!(matches!(weak_h.phase(&mixed), Err(ChargeError::KernelWithoutTable(_))));
    let with_ratio = weak_h.clone().with_kernel_param(int(2)).unwrap();
    let phi = with_ratio.phase(&mixed).unwrap().to_f64();
    assert!(phi > 0.5 && phi < 1.0);

    let std = vd((1, 1), (1, 1));
    let kernel_free = ChernVector::zero();
    assert!(matches!(std.phase(&kernel_free), Err(ChargeError::KernelWithoutTable(_))));
}

#[test]
fn limits_converge() {
    let diag = LimitPath::Diagonal { ratio: rat(1, 3) };
    for (obj, want) in [
        (LimitObject::L0Shift, 0.75),
        (LimitObject::L1, 0.25),
        (LimitObject::L1Shift, 1.25),
        (LimitObject::StructureShift, 1.0),
        (LimitObject::SectionMinusOne, 0.5),
    ] {
        assert_eq!(ellk3_stab::rational::to_f64(&limit_phase(&diag, obj).unwrap()), want);
        let mut last = f64::INFINITY;
        for k in 2..8 {
            let t = 10f64.powi(-k);
            let err = (numeric_phase(obj, t, t / 3.0) - want).abs();
            assert!(err <= last + 1e-15, "{obj:?} not converging");
            last = err;
        }
        assert!(last < 1e-3);
    }
    assert_eq!(limit_phase(&LimitPath::DToZero, LimitObject::L1), Err(ChargeError::UnknownLimit));
}
