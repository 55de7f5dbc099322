//! Solving `Z'(phi(E)) = T Z(E)` in RDV coordinates.
//!
//! The source charge is the standard one at `omega = R(Theta + (D+e)f)`,
//! `omega^2/2 = V`, with a B-field `B = p Theta + q f`. The target is the
//! standard or Todd-corrected charge at `(omega', B')`.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::charges::{ChargeError, ChargeSpec, ChargeValue, Family, Polarization};
use crate::fmt::{phi, psi, upsilon};
use crate::lattice::{ChernVector, DivisorClass, SurfaceParams};
use crate::rational::{int, rat, to_f64, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CceError {
    #[error("source polarization is not ample (need D > 0, V > 0)")]
    NotAmple,
    #[error("target polarization degenerates (2D' + e = 0)")]
    DegenerateTarget,
    #[error("target polarization is not ample (V' = {0} <= 0)")]
    TargetNotAmple(String),
    #[error(transparent)]
    Charge(#[from] ChargeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Plain,
    Todd,
}

pub type Mat2 = [[f64; 2]; 2];

#[derive(Debug, Clone)]
pub struct TransitionData {
    pub variant: Variant,
    pub d_omega: Rational,
    pub v_omega: Rational,
    pub b: DivisorClass,
    pub d_omega_prime: Rational,
    /// `omega'^2 / 2`.
    pub v_omega_prime: Rational,
    pub omega_prime: Polarization,
    pub b_prime: DivisorClass,
    /// Coefficient of `ch0^{B'}` in the real part of the target charge.
    pub a_prime: Rational,
    pub t: Mat2,
    pub det_t: f64,
    /// Max over the lattice basis of `|Z'(phi e_i) - T Z(e_i)|`.
    pub residual: f64,
}

impl TransitionData {
    /// `R_{B'}`, the Theta-coefficient of `B'`.
    pub fn r_b_prime(&self) -> &Rational {
        &self.b_prime.theta
    }

    /// `R_{B'} D_{B'} = q' - e R_{B'}`.
    pub fn r_b_d_b_prime(&self, surface: &SurfaceParams) -> Rational {
        &self.b_prime.fiber - surface.e() * &self.b_prime.theta
    }

    pub fn source_spec(&self, surface: &SurfaceParams) -> Result<ChargeSpec, CceError> {
        let omega = Polarization::from_dv(surface, &self.d_omega, &self.v_omega)?;
        Ok(ChargeSpec::new(surface.clone(), Family::Standard { omega, b: self.b.clone() })?)
    }

    pub fn target_spec(&self, surface: &SurfaceParams) -> Result<ChargeSpec, CceError> {
        let omega = self.omega_prime.clone();
        let b = self.b_prime.clone();
        let family = match self.variant {
            Variant::Plain => Family::Standard { omega, b },
            Variant::Todd => Family::Todd { omega, b },
        };
        Ok(ChargeSpec::new(surface.clone(), family)?)
    }
}

fn complex(z: &ChargeValue) -> (f64, f64) {
    (z.re_f64(), z.im_f64())
}

fn apply(t: &Mat2, z: (f64, f64)) -> (f64, f64) {
    (t[0][0] * z.0 + t[0][1] * z.1, t[1][0] * z.0 + t[1][1] * z.1)
}

/// General solver for `B = p Theta + q f` (any `p`, including 0).
pub fn solve(
    surface: &SurfaceParams,
    d: &Rational,
    v: &Rational,
    b: &DivisorClass,
    variant: Variant,
) -> Result<TransitionData, CceError> {
    if !d.is_positive() || !v.is_positive() {
        return Err(CceError::NotAmple);
    }
    let e = surface.e();
    let half_e = surface.half_e();
    let (p, q) = (&b.theta, &b.fiber);
    let two_d_e = int(2) * d + e;

    let dp = v + p * p * (d + &half_e);
    let two_dp_e = int(2) * &dp + e;
    if two_dp_e.is_zero() {
        return Err(CceError::DegenerateTarget);
    }
    let r_bp = -(p * &two_d_e) / &two_dp_e;
    let a_prime = d - p * p * &two_d_e * &two_d_e / (int(2) * &two_dp_e);
    let vp = match variant {
        Variant::Plain => a_prime.clone(),
        Variant::Todd => &a_prime + int(1),
    };
    if !vp.is_positive() {
        return Err(CceError::TargetNotAmple(vp.to_string()));
    }
    let r_bp_d_bp = (q - e * p) + &half_e * (p - &r_bp - int(1));
    let b_prime = DivisorClass::new(r_bp.clone(), &r_bp_d_bp + e * &r_bp);
    let omega_prime = Polarization::from_dv(surface, &dp, &vp)?;

    // T = N'^-1 J N with N = [[1, -R_B/R_w], [0, 1/R_w]], J = [[0, 1], [-1, 0]].
    let r_w = (to_f64(v) / to_f64(&(d + &half_e))).sqrt();
    let r_wp = to_f64(&omega_prime.scale_sq).sqrt();
    let (pf, rbpf) = (to_f64(p), to_f64(&r_bp));
    let n = [[1.0, -pf / r_w], [0.0, 1.0 / r_w]];
    let j_n = [[n[1][0], n[1][1]], [-n[0][0], -n[0][1]]];
    let n_prime_inv = [[1.0, rbpf], [0.0, r_wp]];
    let t = [
        [
            n_prime_inv[0][0] * j_n[0][0] + n_prime_inv[0][1] * j_n[1][0],
            n_prime_inv[0][0] * j_n[0][1] + n_prime_inv[0][1] * j_n[1][1],
        ],
        [
            n_prime_inv[1][0] * j_n[0][0] + n_prime_inv[1][1] * j_n[1][0],
            n_prime_inv[1][0] * j_n[0][1] + n_prime_inv[1][1] * j_n[1][1],
        ],
    ];
    let det_t = t[0][0] * t[1][1] - t[0][1] * t[1][0];

    let mut data = TransitionData {
        variant,
        d_omega: d.clone(),
        v_omega: v.clone(),
        b: b.clone(),
        d_omega_prime: dp,
        v_omega_prime: vp,
        omega_prime,
        b_prime,
        a_prime,
        t,
        det_t,
        residual: f64::NAN,
    };
    data.residual = residual(surface, &data)?;
    Ok(data)
}

fn residual(surface: &SurfaceParams, data: &TransitionData) -> Result<f64, CceError> {
    let src = data.source_spec(surface)?;
    let dst = data.target_spec(surface)?;
    let mut worst = 0.0f64;
    for e in ChernVector::basis() {
        let lhs = complex(&dst.eval(&phi(surface, &e)));
        let rhs = apply(&data.t, complex(&src.eval(&e)));
        worst = worst.max((lhs.0 - rhs.0).abs()).max((lhs.1 - rhs.1).abs());
    }
    Ok(worst)
}

/// `B = l f`: `D' = V`, `V' = D`, `B' = (l - e/2) f`, `a' = V'`.
pub fn solve_simple(surface: &SurfaceParams, d: &Rational, v: &Rational, l: &Rational) -> Result<TransitionData, CceError> {
    solve(surface, d, v, &DivisorClass::new(int(0), l.clone()), Variant::Plain)
}

pub fn solve_todd(surface: &SurfaceParams, d: &Rational, v: &Rational, b: &DivisorClass) -> Result<TransitionData, CceError> {
    solve(surface, d, v, b, Variant::Todd)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiZ {
    pub d_omega_prime: Rational,
    pub r_b_prime: Rational,
    pub v_omega_prime: Rational,
    pub r_b_d_b_prime: Rational,
}

/// The image of `(D, V)` under the transformed Todd charge with `B = -alpha`, `e = 2`.
pub fn psi_z(d: &Rational, v: &Rational, dalpha: &Rational) -> PsiZ {
    let denom = d + v + int(2);
    PsiZ {
        d_omega_prime: v + d + int(1),
        r_b_prime: (d + int(1)) / &denom,
        v_omega_prime: (d * v - int(1)) / &denom + int(1),
        r_b_d_b_prime: -(d + int(1)) / &denom - (dalpha + int(2)),
    }
}

pub const G_MATRIX: [[(i64, i64); 2]; 2] = [[(-1, 2), (1, 2)], [(-1, 2), (-1, 2)]];
pub const H_MATRIX: [[(i64, i64); 2]; 2] = [[(0, 1), (1, 1)], [(-1, 1), (0, 1)]];

fn rmat(m: [[(i64, i64); 2]; 2]) -> [[Rational; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| rat(m[i][j].0, m[i][j].1)))
}

/// Max over the basis of `|lhs(e_i) - M rhs(e_i)|`, computed exactly.
fn exact_residual(
    m: [[Rational; 2]; 2],
    lhs: impl Fn(&ChernVector) -> ChargeValue,
    rhs: impl Fn(&ChernVector) -> ChargeValue,
) -> Rational {
    let mut worst = Rational::zero();
    for e in ChernVector::basis() {
        let l = lhs(&e);
        let r = rhs(&e);
        let mr = (&m[0][0] * &r.re + &m[0][1] * &r.im, &m[1][0] * &r.re + &m[1][1] * &r.im);
        for diff in [(&l.re - &mr.0).abs(), (&l.im - &mr.1).abs()] {
            if diff > worst {
                worst = diff;
            }
        }
    }
    worst
}

/// `Z'_0(Psi e_i) = g Z_H(e_i)` on K3.
pub fn check_g(dalpha: &Rational) -> Result<Rational, CceError> {
    let k3 = SurfaceParams::k3();
    let special = ChargeSpec::new(k3.clone(), Family::WeakSpecial { dalpha: dalpha.clone() })?;
    let weak_h = ChargeSpec::new(k3.clone(), Family::WeakH)?;
    Ok(exact_residual(rmat(G_MATRIX), |e| special.eval(&psi(&k3, dalpha, e)), |e| weak_h.eval(e)))
}

/// `Z_D(Upsilon e_i) = h Z_{V,H}(e_i)` with `D = V`, on K3.
pub fn check_h(v: &Rational) -> Result<Rational, CceError> {
    let k3 = SurfaceParams::k3();
    let z_d = ChargeSpec::new(k3.clone(), Family::WeakD { d: v.clone() })?;
    let z_vh = ChargeSpec::new(k3.clone(), Family::WeakVH { v: v.clone() })?;
    Ok(exact_residual(rmat(H_MATRIX), |e| z_d.eval(&upsilon(&k3, e)), |e| z_vh.eval(e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_swap() {
        let k3 = SurfaceParams::k3();
        let t = solve_simple(&k3, &int(3), &rat(1, 2), &int(0)).unwrap();
        assert_eq!(t.d_omega_prime, rat(1, 2));
        assert_eq!(t.v_omega_prime, int(3));
        assert_eq!(t.b_prime, DivisorClass::new(int(0), int(-1)));
        assert_eq!(t.a_prime, t.v_omega_prime);
        assert!(t.det_t > 0.0 && t.residual < 1e-9);
    }

    #[test]
    fn special_point() {
        let k3 = SurfaceParams::k3();
        for da in 0..6 {
            let z = psi_z(&int(0), &int(0), &int(da));
            assert_eq!(
                (z.d_omega_prime, z.r_b_prime.clone(), z.v_omega_prime, z.r_b_d_b_prime.clone()),
                (int(1), rat(1, 2), rat(1, 2), int(-da) - rat(5, 2))
            );
            let d_b = z.r_b_d_b_prime / z.r_b_prime;
            assert_eq!(d_b, int(-2 * da - 5));
            let _ = &k3;
        }
        let z = psi_z(&int(1), &int(1), &int(0));
        assert_eq!(z.d_omega_prime, int(3));
        assert_eq!(z.r_b_prime, rat(1, 2));
        assert_eq!(z.v_omega_prime, int(1));
        assert_eq!(z.r_b_d_b_prime, rat(-5, 2));
    }

    #[test]
    fn todd_matches_psi_z() {
        let k3 = SurfaceParams::k3();
        let (d, v, da) = (rat(3, 2), rat(5, 3), int(2));
        let alpha = k3.unit_divisor(&da);
        let t = solve_todd(&k3, &d, &v, &-alpha).unwrap();
        let z = psi_z(&d, &v, &da);
        assert_eq!(t.d_omega_prime, z.d_omega_prime);
        assert_eq!(t.r_b_prime(), &z.r_b_prime);
        assert_eq!(t.v_omega_prime, z.v_omega_prime);
        assert_eq!(t.r_b_d_b_prime(&k3), z.r_b_d_b_prime);
        assert!(t.residual < 1e-9 && t.det_t > 0.0);
    }

    #[test]
    fn g_and_h() {
        for da in 0..4 {
            assert_eq!(check_g(&int(da)).unwrap(), int(0));
        }
        for v in [rat(1, 4), int(1), rat(7, 2)] {
            assert_eq!(check_h(&v).unwrap(), int(0));
        }
    }

    #[test]
    fn target_not_ample() {
        let k3 = SurfaceParams::k3();
        let err = solve(&k3, &int(1), &int(1), &DivisorClass::new(rat(-3, 2), rat(5, 4)), Variant::Plain);
        assert!(matches!(err, Err(CceError::TargetNotAmple(_))));
    }
}
