use ellk3_stab::fmt::{phi, phi_hat, psi, psi_prime, upsilon, upsilon_prime};
use ellk3_stab::lattice::{ChernVector, SurfaceParams};
use ellk3_stab::rational::{int, rat};
use proptest::prelude::*;

fn chern() -> impl Strategy<Value = ChernVector> {
    (-30i64..30, -30i64..30, -30i64..30, -30i64..30).prop_map(|(n, a, b, s)| ChernVector::ints(n, a, b, s))
}

fn surface() -> impl Strategy<Value = SurfaceParams> {
    (1i64..6, 1i64..3).prop_map(|(p, q)| SurfaceParams::new(rat(p, q)).unwrap())
}

proptest! {
    #[test]
    fn phi_hat_undoes_phi_up_to_sign(s in surface(), v in chern()) {
        prop_assert_eq!(phi_hat(&s, &phi(&s, &v)), -v.clone());
        prop_assert_eq!(phi(&s, &phi_hat(&s, &v)), -v);
    }

    #[test]
    fn phi_is_linear(s in surface(), v in chern(), w in chern(), k in -5i64..5) {
        let lhs = phi(&s, &(v.clone() + w.scale(&int(k))));
        prop_assert_eq!(lhs, phi(&s, &v) + phi(&s, &w).scale(&int(k)));
    }

    #[test]
    fn phi_swaps_rank_and_fiber_degree(s in surface(), v in chern()) {
        let w = phi(&s, &v);
        // f . ch1(phi v) = -n, and rank(phi v) = f . ch1(v)
        prop_assert_eq!(w.fiber_degree(), -v.n.clone());
        prop_assert_eq!(w.n, v.fiber_degree());
    }

    #[test]
    fn euler_pairing_is_preserved(v in chern(), w in chern()) {
        let k3 = SurfaceParams::k3();
        let before = k3.euler_pairing(&v, &w).unwrap();
        prop_assert_eq!(k3.euler_pairing(&phi(&k3, &v), &phi(&k3, &w)).unwrap(), before);
    }

    #[test]
    fn psi_and_upsilon_quasi_inverses(v in chern(), d in 0i64..6) {
        let k3 = SurfaceParams::k3();
        let da = int(d);
        prop_assert_eq!(psi(&k3, &da, &psi_prime(&k3, &da, &v)), -v.clone());
        prop_assert_eq!(psi_prime(&k3, &da, &psi(&k3, &da, &v)), -v.clone());
        prop_assert_eq!(upsilon(&k3, &upsilon_prime(&k3, &v)), -v);
    }

    #[test]
    fn chern_json_round_trip(v in chern(), den in 1i64..7) {
        let w = v.scale(&rat(1, den));
        prop_assert_eq!(ChernVector::from_json(&w.to_json()).unwrap(), w);
    }
}

#[test]
fn structure_sheaf_images() {
    let k3 = SurfaceParams::k3();
    assert_eq!(phi(&k3, &ChernVector::ints(1, 0, 0, 0)), ChernVector::ints(0, -1, 0, 1));
    assert_eq!(phi(&k3, &ChernVector::ints(1, -1, 0, -1)), ChernVector::ints(-1, -1, 0, 1));
}
