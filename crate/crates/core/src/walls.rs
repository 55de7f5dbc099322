//! Potential walls, mini-walls on volume rays, destabilizer search and
//! numerical stability certificates.
//!
//! Wall coordinates: with `omega_0 = Theta + (D_0+e) f`, `H_0 = Theta - D_0 f`
//! and `N^2 = 2 D_0 + e`, a point `(x, y, z)` stands for the charge with
//! `omega = x omega_0 / N^2` and `B = (y omega_0 + z H_0) / N^2`. These are the
//! unit-normalized coordinates multiplied by `N`, so everything stays rational.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charges::{ChargeError, ChargeSpec, Family, Polarization};
use crate::lattice::{ChernVector, DivisorClass, LatticeError, SurfaceParams};
use crate::rational::{floor, format_rational, int, Rational, Surd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WallError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("g-lines are parallel: no isolated crossing")]
    ParallelSlopes,
    #[error("imaginary part vanishes on the ray for {0}")]
    ZeroImaginary(String),
    #[error(transparent)]
    Charge(#[from] ChargeError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallFrame {
    pub surface: SurfaceParams,
    pub d0: Rational,
}

impl WallFrame {
    pub fn new(surface: SurfaceParams, d0: Rational) -> Result<Self, WallError> {
        let frame = WallFrame { surface, d0 };
        if !frame.norm_sq().is_positive() {
            return Err(WallError::HypothesisViolated("2 D_0 + e must be positive".into()));
        }
        Ok(frame)
    }

    pub fn omega0(&self) -> DivisorClass {
        self.surface.unit_divisor(&self.d0)
    }

    pub fn h0(&self) -> DivisorClass {
        DivisorClass::new(int(1), -self.d0.clone())
    }

    pub fn norm_sq(&self) -> Rational {
        int(2) * &self.d0 + self.surface.e()
    }

    /// The standard charge at the point `(x, y, z)`; `x` must be positive.
    pub fn charge_at(&self, x: &Rational, y: &Rational, z: &Rational) -> Result<ChargeSpec, WallError> {
        let n2 = self.norm_sq();
        let omega = self.omega0().scale(&(x / &n2));
        let b = (self.omega0().scale(y) + self.h0().scale(z)).scale(&(int(1) / &n2));
        Ok(ChargeSpec::new(self.surface.clone(), Family::Standard { omega: Polarization::rational(omega), b })?)
    }

    /// `N^2 Re Z` as a polynomial in `(x, y, z)`: `-N^2 s + y w + z h + n(x^2 - y^2 + z^2)/2`.
    fn scaled_re(&self, v: &ChernVector) -> Poly3 {
        let c1 = v.ch1();
        let w = self.surface.intersect(&self.omega0(), &c1);
        let h = self.surface.intersect(&self.h0(), &c1);
        let half_n = &v.n / int(2);
        let mut p = Poly3::default();
        p.add([0, 0, 0], -(self.norm_sq() * &v.s));
        p.add([0, 1, 0], w);
        p.add([0, 0, 1], h);
        p.add([2, 0, 0], half_n.clone());
        p.add([0, 2, 0], -half_n.clone());
        p.add([0, 0, 2], half_n);
        p
    }

    /// `N^2 Im Z / x = w - n y`.
    fn scaled_im_over_x(&self, v: &ChernVector) -> Poly3 {
        let w = self.surface.intersect(&self.omega0(), &v.ch1());
        let mut p = Poly3::default();
        p.add([0, 0, 0], w);
        p.add([0, 1, 0], -v.n.clone());
        p
    }
}

/// Sparse polynomial in three variables, keyed by exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Poly3(BTreeMap<[u8; 3], Rational>);

impl Poly3 {
    fn add(&mut self, mono: [u8; 3], c: Rational) {
        let entry = self.0.entry(mono).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&mono);
        }
    }

    fn mul(&self, o: &Poly3) -> Poly3 {
        let mut out = Poly3::default();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &o.0 {
                out.add([ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]], ca * cb);
            }
        }
        out
    }

    fn sub(&self, o: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (m, c) in &o.0 {
            out.add(*m, -c.clone());
        }
        out
    }

    fn coeff(&self, mono: [u8; 3]) -> Rational {
        self.0.get(&mono).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Monomial order of [`Quadric::coeffs`].
pub const QUADRIC_MONOMIALS: [&str; 10] = ["x^2", "y^2", "z^2", "xy", "xz", "yz", "x", "y", "z", "1"];
const MONO_EXP: [[u8; 3]; 10] = [
    [2, 0, 0],
    [0, 2, 0],
    [0, 0, 2],
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [0, 0, 0],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadric {
    pub coeffs: [Rational; 10],
}

impl Quadric {
    fn from_poly(p: &Poly3) -> Self {
        Quadric { coeffs: std::array::from_fn(|i| p.coeff(MONO_EXP[i])) }
    }

    fn c(&self, name: &str) -> &Rational {
        &self.coeffs[QUADRIC_MONOMIALS.iter().position(|m| *m == name).unwrap()]
    }

    pub fn eval(&self, x: &Rational, y: &Rational, z: &Rational) -> Rational {
        let vars = [x, y, z];
        let mut total = Rational::zero();
        for (c, e) in self.coeffs.iter().zip(MONO_EXP) {
            let mut term = c.clone();
            for (v, k) in vars.iter().zip(e) {
                for _ in 0..k {
                    term *= *v;
                }
            }
            total += term;
        }
        total
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(k)` with `self = k * other`, `k != 0`.
    pub fn proportional_to(&self, other: &Quadric) -> Option<Rational> {
        let i = other.coeffs.iter().position(|c| !c.is_zero())?;
        let k = &self.coeffs[i] / &other.coeffs[i];
        if k.is_zero() {
            return None;
        }
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == &(&k * b)).then_some(k)
    }

    /// `radius^2(z) = a z^2 + b z + c` for the slice circles, when slices are circles.
    fn radius_sq_poly(&self) -> Option<[Rational; 3]> {
        let a = self.c("x^2");
        if a.is_zero() {
            return None;
        }
        // A(x^2+y^2) + (By + Byz z) y + (Czz z^2 + Cz z + C1)
        let (by, byz) = (self.c("y"), self.c("yz"));
        let (czz, cz, c1) = (self.c("z^2"), self.c("z"), self.c("1"));
        let a2 = a * a * int(4);
        Some([
            byz * byz / &a2 - czz / a,
            int(2) * by * byz / &a2 - cz / a,
            by * by / &a2 - c1 / a,
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    Proper,
    /// Every point is on the wall.
    IdenticallyZero,
    /// `x^2` and `y^2` coefficients vanish; slices are lines or empty.
    NoCircularSlices,
    /// No point with `x > 0`.
    Empty,
}

#[derive(Debug, Clone)]
pub struct WallRecord {
    pub frame: WallFrame,
    pub v_e: ChernVector,
    pub v_f: ChernVector,
    pub quadric: Quadric,
    pub degeneracy: Degeneracy,
}

/// Expands `N^4 (Re Z(E) Im Z(F) - Re Z(F) Im Z(E)) / x`. The cubic terms cancel.
pub fn wall_quadric(frame: &WallFrame, v_e: &ChernVector, v_f: &ChernVector) -> WallRecord {
    let rel = frame
        .scaled_re(v_e)
        .mul(&frame.scaled_im_over_x(v_f))
        .sub(&frame.scaled_re(v_f).mul(&frame.scaled_im_over_x(v_e)));
    assert!(rel.0.keys().all(|m| m.iter().sum::<u8>() <= 2), "cubic terms must cancel");
    let quadric = Quadric::from_poly(&rel);
    for m in ["xy", "xz", "x"] {
        assert!(quadric.c(m).is_zero(), "wall quadric has an {m} term");
    }
    assert_eq!(quadric.c("x^2"), quadric.c("y^2"));
    let degeneracy = if quadric.is_zero() {
        Degeneracy::IdenticallyZero
    } else {
        match quadric.radius_sq_poly() {
            None => Degeneracy::NoCircularSlices,
            Some(r) if never_positive(&r) => Degeneracy::Empty,
            Some(_) => Degeneracy::Proper,
        }
    };
    WallRecord { frame: frame.clone(), v_e: v_e.clone(), v_f: v_f.clone(), quadric, degeneracy }
}

/// `a z^2 + b z + c <= 0` for every real `z`.
fn never_positive(p: &[Rational; 3]) -> bool {
    let [a, b, c] = p;
    if a.is_zero() {
        return b.is_zero() && !c.is_positive();
    }
    a.is_negative() && !(b * b - int(4) * a * c).is_positive()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceCircle {
    #[serde(serialize_with = "ser_rat")]
    pub z: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub center_y: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub radius_sq: Rational,
}

impl SliceCircle {
    /// Concentric circles are always nested or equal; otherwise compare via distance.
    pub fn nested_or_equal(&self, o: &SliceCircle) -> bool {
        let d = &self.center_y - &o.center_y;
        let (big, small) = if self.radius_sq >= o.radius_sq { (self, o) } else { (o, self) };
        // |d| + r_small <= r_big, squared twice.
        let lhs = &big.radius_sq - &small.radius_sq - &d * &d;
        if lhs.is_negative() {
            return false;
        }
        &lhs * &lhs >= int(4) * &d * &d * &small.radius_sq
    }
}

fn ser_rat<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub fn slice_circle(record: &WallRecord, z: &Rational) -> Option<SliceCircle> {
    let q = &record.quadric;
    let a = q.c("x^2");
    if a.is_zero() {
        return None;
    }
    let b = q.c("y") + q.c("yz") * z;
    let c = q.c("z^2") * z * z + q.c("z") * z + q.c("1");
    let center_y = -&b / (int(2) * a);
    let radius_sq = &center_y * &center_y - c / a;
    if radius_sq.is_negative() {
        return None;
    }
    if record.v_f == ChernVector::ints(0, 0, 1, 0) {
        debug_assert_eq!(center_y, -z.clone(), "walls against a fiber class are centered at y = -z");
    }
    Some(SliceCircle { z: z.clone(), center_y, radius_sq })
}

/// Comparison of the derived quadric with the two expanded forms printed for it.
#[derive(Debug, Clone, Serialize)]
pub struct DisplayDiagnostic {
    /// Against a fiber class: `r(x^2+y^2+z^2)/2 + r yz - E_w z - E_H z - d`.
    pub fiber_display: Option<bool>,
    /// Against a rank-one class: the general line-bundle expansion.
    pub line_bundle_display: Option<bool>,
}

impl WallFrame {
    /// Components `(w, h) = (omega_0 . c1, H_0 . c1)`; the unit-normalized
    /// components are `E_w = w / N` and `E_H = -h / N`.
    fn components(&self, v: &ChernVector) -> (Rational, Rational) {
        let c1 = v.ch1();
        (self.surface.intersect(&self.omega0(), &c1), self.surface.intersect(&self.h0(), &c1))
    }

    /// The printed fiber-class wall, multiplied by `N^2` and written in scaled coordinates.
    fn fiber_display(&self, v_e: &ChernVector) -> Quadric {
        let (w, h) = self.components(v_e);
        let half_r = &v_e.n / int(2);
        let mut p = Poly3::default();
        p.add([2, 0, 0], half_r.clone());
        p.add([0, 2, 0], half_r.clone());
        p.add([0, 0, 2], half_r);
        p.add([0, 1, 1], v_e.n.clone());
        // -E_w z - E_H z  ->  -(w - h) z
        p.add([0, 0, 1], -(w - h));
        p.add([0, 0, 0], -(self.norm_sq() * &v_e.s));
        Quadric::from_poly(&p)
    }

    /// The printed line-bundle wall, multiplied by `N^3` and written in scaled coordinates.
    fn line_bundle_display(&self, v_e: &ChernVector, v_l: &ChernVector) -> Quadric {
        let (w, h) = self.components(v_e);
        let (wl, hl) = self.components(v_l);
        let (r, d, el) = (&v_e.n, &v_e.s, &v_l.s);
        let n2 = self.norm_sq();
        let sq = (r * &wl - &w) / int(2);
        let mut p = Poly3::default();
        p.add([2, 0, 0], sq.clone());
        p.add([0, 2, 0], sq.clone());
        p.add([0, 0, 2], sq);
        // -yz (r l_H - E_H) with l_H = -h_L/N, E_H = -h/N
        p.add([0, 1, 1], r * &hl - &h);
        p.add([0, 1, 0], &n2 * (d - el * r));
        // -z (E_H l_w - l_H E_w)
        p.add([0, 0, 1], -(&hl * &w - &h * &wl));
        p.add([0, 0, 0], -(&n2 * (d * &wl - el * &w)));
        Quadric::from_poly(&p)
    }
}

pub fn display_diagnostic(record: &WallRecord) -> DisplayDiagnostic {
    let frame = &record.frame;
    let matches = |printed: Quadric| {
        if record.quadric.is_zero() {
            printed.is_zero()
        } else {
            record.quadric.proportional_to(&printed).is_some()
        }
    };
    let fiber_display = (record.v_f == ChernVector::ints(0, 0, 1, 0)).then(|| matches(frame.fiber_display(&record.v_e)));
    let line_bundle_display =
        (record.v_f.n.is_one()).then(|| matches(frame.line_bundle_display(&record.v_e, &record.v_f)));
    DisplayDiagnostic { fiber_display, line_bundle_display }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RaySide {
    /// The candidate has smaller phase above the root.
    StableAbove,
    /// The candidate has larger phase above the root.
    UnstableAbove,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayMiniWall {
    pub t_root: Rational,
    pub candidate: ChernVector,
    pub side: RaySide,
}

/// `(ch2^B, H ch1^B, ch0)` of a class.
fn ray_data(surface: &SurfaceParams, h: &DivisorClass, b: &DivisorClass, v: &ChernVector) -> (Rational, Rational, Rational) {
    let (n, c1b, ch2b) = crate::charges::twisted_chern(surface, v, b);
    (ch2b, surface.intersect(h, &c1b), n)
}

/// The crossing `t` of `g_A(t) = g_E(t)`, where `g_M(t) = (ch2^B - t ch0) / (H ch1^B)`.
pub fn mini_wall_root(
    surface: &SurfaceParams,
    h: &DivisorClass,
    b: &DivisorClass,
    target: &ChernVector,
    candidate: &ChernVector,
) -> Result<(Rational, RaySide), WallError> {
    let (e2, e1, e0) = ray_data(surface, h, b, target);
    let (a2, a1, a0) = ray_data(surface, h, b, candidate);
    if e1.is_zero() {
        return Err(WallError::ZeroImaginary(target.to_string()));
    }
    if a1.is_zero() {
        return Err(WallError::ZeroImaginary(candidate.to_string()));
    }
    let denom = &e0 / &e1 - &a0 / &a1;
    if denom.is_zero() {
        return Err(WallError::ParallelSlopes);
    }
    let t = (&e2 / &e1 - &a2 / &a1) / &denom;
    // g_A - g_E has slope `denom` in t.
    let side = if denom.is_positive() { RaySide::UnstableAbove } else { RaySide::StableAbove };
    Ok((t, side))
}

/// Positive roots, sorted descending. Candidates with parallel g-lines are skipped.
pub fn mini_walls_on_ray(
    surface: &SurfaceParams,
    h: &DivisorClass,
    b: &DivisorClass,
    target: &ChernVector,
    candidates: &[ChernVector],
) -> Result<Vec<RayMiniWall>, WallError> {
    if !surface.is_ample(h) {
        return Err(WallError::HypothesisViolated("H must be ample".into()));
    }
    let mut walls = Vec::new();
    for c in candidates {
        match mini_wall_root(surface, h, b, target, c) {
            Ok((t, side)) if t.is_positive() => walls.push(RayMiniWall { t_root: t, candidate: c.clone(), side }),
            Ok(_) | Err(WallError::ParallelSlopes) => {}
            Err(e) => return Err(e),
        }
    }
    walls.sort_by(|x, y| y.t_root.cmp(&x.t_root));
    Ok(walls)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankBound {
    /// `[sqrt((A - X)^2 + 4Y^2) - (A - X)] / (2X)` with `X = omega^2`, `A = alpha^2`, `Y = omega.alpha`.
    pub value: Surd,
    pub floor: BigInt,
    pub enclosure: (Rational, Rational),
}

pub const RANK_BOUND_BITS: u32 = 60;

/// Bound on the rank of a destabilizing subobject of a line bundle with `c1 = alpha`.
pub fn rank_bound(surface: &SurfaceParams, alpha: &DivisorClass, omega: &Polarization) -> Result<RankBound, WallError> {
    if !omega.is_ample(surface) {
        return Err(WallError::HypothesisViolated("omega must be ample".into()));
    }
    let u_alpha = surface.intersect(&omega.unit, alpha);
    if !u_alpha.is_positive() {
        return Err(WallError::HypothesisViolated("need omega . alpha > 0".into()));
    }
    let x = omega.square(surface);
    let a = surface.square(alpha);
    let y_sq = &omega.scale_sq * &u_alpha * &u_alpha;
    let diff = &a - &x;
    let value = Surd::new(-&diff / (int(2) * &x), int(1) / (int(2) * &x), &diff * &diff + int(4) * y_sq);
    Ok(RankBound { floor: value.floor(), enclosure: value.enclosure(RANK_BOUND_BITS), value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BgMode {
    Classical,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_theta: u32,
    pub max_fiber: u32,
    pub max_points: u32,
    pub bg: BgMode,
}

impl SearchBounds {
    pub fn new(max_theta: u32, max_fiber: u32, max_points: u32) -> Self {
        SearchBounds { max_theta, max_fiber, max_points, bg: BgMode::Classical }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub rank: u32,
    /// `C = p Theta + q f` with `c1(A) = rank * c1(L) - C`.
    pub curve: (u32, u32),
    /// Point count for rank one; `None` for higher rank.
    pub points: Option<u32>,
    pub chern: ChernVector,
    /// `Greater` or `Equal`: phase of the candidate against `L`.
    pub phase_vs_target: Ordering,
    pub negative_curve: bool,
}

impl Candidate {
    fn sort_key(&self) -> (u32, u32, u32, Option<u32>, Rational) {
        (self.rank, self.curve.0, self.curve.1, self.points, self.chern.s.clone())
    }
}

/// `omega` and `B` of a charge given by a polarization, when it has one.
fn polarization_of(spec: &ChargeSpec) -> Option<(Polarization, DivisorClass)> {
    match &spec.family {
        Family::Standard { omega, b } => Some((omega.clone(), b.clone())),
        Family::VD { v, d } => Some((Polarization::from_dv(&spec.surface, d, v).ok()?, DivisorClass::zero())),
        _ => None,
    }
}

/// Rank-one classes `L(-C) - n pt` and, for `B = 0` polarization charges, higher
/// rank classes with `c1 = r c1(L) - C` up to the rank bound, that pass the heart
/// shadow, `0 < Im A <= Im L`, and have phase at least that of `L`.
pub fn enumerate_destabilizers(spec: &ChargeSpec, v_l: &ChernVector, bounds: &SearchBounds) -> Result<Vec<Candidate>, WallError> {
    let surface = &spec.surface;
    if !surface.is_line_bundle_class(v_l) {
        return Err(WallError::HypothesisViolated(format!("{v_l} is not a line-bundle class")));
    }
    let z_l = spec.eval(v_l);
    let phase_l = spec.phase(v_l)?;
    let alpha = v_l.ch1();
    let e = surface.e().clone();

    let max_rank = match polarization_of(spec) {
        Some((omega, b)) if b.is_zero() && surface.intersect(&omega.unit, &alpha).is_positive() => {
            rank_bound(surface, &alpha, &omega)?.floor.to_u32().unwrap_or(u32::MAX).max(1)
        }
        _ => 1,
    };

    let grid: Vec<(u32, u32, u32)> = (1..=max_rank)
        .flat_map(|r| (0..=bounds.max_theta).flat_map(move |p| (0..=bounds.max_fiber).map(move |q| (r, p, q))))
        .collect();

    let per_cell = |&(r, p, q): &(u32, u32, u32)| -> Result<Vec<Candidate>, WallError> {
        let c = DivisorClass::ints(p as i64, q as i64);
        let negative_curve = p > 0 && int(2 * q as i64) < int(p as i64) * &e;
        let mut found = Vec::new();
        let mut consider = |chern: ChernVector, points: Option<u32>| -> Result<(), WallError> {
            let z = spec.eval(&chern);
            if !spec.heart_necessary(&chern) || !z.im.is_positive() || z.im > z_l.im {
                return Ok(());
            }
            if r > 1 && z.im == z_l.im {
                return Ok(());
            }
            let cmp = crate::charges::compare_phase_values(&spec.phase(&chern)?, &phase_l)?;
            if cmp != Ordering::Less {
                found.push(Candidate { rank: r, curve: (p, q), points, chern, phase_vs_target: cmp, negative_curve });
            }
            Ok(())
        };
        if r == 1 {
            let twisted = surface.twist(v_l, &-c.clone());
            for n in 0..=bounds.max_points {
                if p == 0 && q == 0 && n == 0 {
                    continue;
                }
                let chern = twisted.clone() - ChernVector::ints(0, 0, 0, n as i64);
                consider(chern, Some(n))?;
            }
            return Ok(found);
        }
        let rank = int(r as i64);
        let c1 = alpha.scale(&rank) - c;
        let base = ChernVector::new(rank.clone(), c1.theta.clone(), c1.fiber.clone(), Rational::zero());
        let z0 = spec.eval(&base);
        if !z0.im.is_positive() || z0.im >= z_l.im {
            return Ok(found);
        }
        // Phase at least that of L:  s >= Re(base) - Re(L) Im(A) / Im(L).
        let s_min = &z0.re - &z_l.re * &z0.im / &z_l.im;
        let c1_sq = surface.square(&c1);
        let mut s_max = &c1_sq / (int(2) * &rank);
        if bounds.bg == BgMode::Strong {
            surface.require_k3()?;
            s_max = s_max - &rank + int(1) / &rank;
        }
        // ch2 lies in c1^2/2 + Z.
        let offset = &c1_sq / int(2);
        let lo = floor(&(&s_min - &offset));
        let mut k = lo;
        loop {
            let s = &offset + Rational::from_integer(k.clone());
            if s > s_max {
                break;
            }
            if s >= s_min {
                consider(ChernVector::new(rank.clone(), c1.theta.clone(), c1.fiber.clone(), s), None)?;
            }
            k += 1;
        }
        Ok(found)
    };

    let mut all: Vec<Candidate> = grid
        .par_iter()
        .map(per_cell)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    all.sort_by_key(Candidate::sort_key);
    Ok(all)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Empty search and the exclusion premises hold; consistent with stability.
    NoNumericalWall,
    /// Numerical walls only; the classes need not be realized by objects.
    CandidateFound(Vec<Candidate>),
    Inconclusive(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NoNumericalWall => "no_numerical_wall",
            Verdict::CandidateFound(_) => "candidate_found",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

/// The class `((omega^2 - alpha^2) / (2 omega.alpha)) omega + alpha`, rational
/// because `omega = sqrt(s) u` contributes `s u^2 / (sqrt(s) u.alpha) sqrt(s) u`.
pub fn twisted_class(surface: &SurfaceParams, alpha: &DivisorClass, omega: &Polarization) -> Option<DivisorClass> {
    let u_alpha = surface.intersect(&omega.unit, alpha);
    if u_alpha.is_zero() {
        return None;
    }
    let coeff = (omega.square(surface) - surface.square(alpha)) / (int(2) * u_alpha);
    Some(omega.unit.scale(&coeff) + alpha.clone())
}

pub fn stability_certificate(spec: &ChargeSpec, v_l: &ChernVector, bounds: &SearchBounds) -> Result<Verdict, WallError> {
    let surface = &spec.surface;
    let Some((omega, b)) = polarization_of(spec) else {
        return Ok(Verdict::Inconclusive("certificate needs a VD or standard charge".into()));
    };
    if !b.is_zero() {
        return Ok(Verdict::Inconclusive("certificate needs B = 0".into()));
    }
    if !surface.is_line_bundle_class(v_l) {
        return Err(WallError::HypothesisViolated(format!("{v_l} is not a line-bundle class")));
    }
    if !spec.eval(v_l).im.is_positive() {
        return Ok(Verdict::Inconclusive("Im Z(L) ≤ 0: L not in heart".into()));
    }
    let candidates = enumerate_destabilizers(spec, v_l, bounds)?;
    if !candidates.is_empty() {
        return Ok(Verdict::CandidateFound(candidates));
    }
    let alpha = v_l.ch1();
    let t = twisted_class(surface, &alpha, &omega).expect("Im Z(L) > 0 forces omega.alpha > 0");
    let (t_theta, t_fiber) = (
        surface.intersect(&t, &DivisorClass::theta()),
        surface.intersect(&t, &DivisorClass::fiber_class()),
    );
    if !t_theta.is_positive() || !t_fiber.is_positive() {
        return Ok(Verdict::Inconclusive(format!(
            "twisted ampleness fails: T.Theta = {t_theta}, T.f = {t_fiber}"
        )));
    }
    // omega^2 >= omega.alpha, compared through squares (both sides positive).
    let x = omega.square(surface);
    let u_alpha = surface.intersect(&omega.unit, &alpha);
    let y_sq = &omega.scale_sq * &u_alpha * &u_alpha;
    if &x * &x < y_sq {
        return Ok(Verdict::Inconclusive("volume premise fails: omega^2 < omega.alpha".into()));
    }
    Ok(Verdict::NoNumericalWall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn k3_frame(d0: i64) -> WallFrame {
        WallFrame::new(SurfaceParams::k3(), int(d0)).unwrap()
    }

    const FIBER: (i64, i64, i64, i64) = (0, 0, 1, 0);

    fn fiber() -> ChernVector {
        let (n, a, b, s) = FIBER;
        ChernVector::ints(n, a, b, s)
    }

    #[test]
    fn structure_sheaf_vs_fiber() {
        let rec = wall_quadric(&k3_frame(1), &ChernVector::ints(1, 0, 0, 0), &fiber());
        let h = rat(1, 2);
        let z = Rational::zero();
        assert_eq!(
            rec.quadric.coeffs,
            [h.clone(), h.clone(), h, z.clone(), z.clone(), int(1), z.clone(), z.clone(), z.clone(), z]
        );
        assert_eq!(rec.degeneracy, Degeneracy::Empty);
        let same = wall_quadric(&k3_frame(1), &fiber(), &fiber());
        assert_eq!(same.degeneracy, Degeneracy::IdenticallyZero);
    }

    #[test]
    fn relation_holds() {
        let frame = k3_frame(1);
        let (ve, vf) = (ChernVector::ints(1, 1, 0, -1), fiber());
        let rec = wall_quadric(&frame, &ve, &vf);
        assert_eq!(rec.degeneracy, Degeneracy::Proper);
        let n4 = frame.norm_sq() * frame.norm_sq();
        for (x, y, z) in [(1, 0, 0), (2, -1, 3), (5, 2, -2), (1, 7, 1), (3, 3, 3)] {
            let (x, y, z) = (rat(x, 3), rat(y, 2), int(z));
            let spec = frame.charge_at(&x, &y, &z).unwrap();
            let (a, b) = (spec.eval(&ve), spec.eval(&vf));
            let rel = &a.re * &b.im - &b.re * &a.im;
            assert_eq!(rel * &n4, &x * rec.quadric.eval(&x, &y, &z));
        }
        // Empty at z = 0 (radius^2 = -8); a real circle once z > 1.
        assert!(slice_circle(&rec, &Rational::zero()).is_none());
        let c = slice_circle(&rec, &int(2)).unwrap();
        assert_eq!((c.center_y, c.radius_sq), (int(-2), int(8)));
    }

    #[test]
    fn displays_match() {
        let frame = k3_frame(2);
        for ve in [ChernVector::ints(1, 1, 0, -1), ChernVector::ints(2, -1, 3, 4), ChernVector::ints(0, 1, 0, 0)] {
            let d = display_diagnostic(&wall_quadric(&frame, &ve, &fiber()));
            assert_eq!(d.fiber_display, Some(true));
            let l = ChernVector::ints(1, 1, 1, 0);
            let d = display_diagnostic(&wall_quadric(&frame, &ve, &l));
            assert_eq!(d.line_bundle_display, Some(true));
        }
    }

    #[test]
    fn ray_walls() {
        let k3 = SurfaceParams::k3();
        let l = ChernVector::ints(1, 1, 1, 0);
        let h = DivisorClass::ints(1, 4);
        let cands: Vec<_> = (1..4).map(|n| ChernVector::ints(1, 0, 1, -n)).collect();
        assert!(mini_walls_on_ray(&k3, &h, &DivisorClass::zero(), &l, &cands).unwrap().is_empty());
        assert_eq!(
            mini_wall_root(&k3, &h, &DivisorClass::zero(), &l, &l),
            Err(WallError::ParallelSlopes)
        );
    }

    #[test]
    fn rank_bound_fixtures() {
        let k3 = SurfaceParams::k3();
        let rb = rank_bound(&k3, &DivisorClass::ints(1, 1), &Polarization::rational(DivisorClass::ints(1, 4))).unwrap();
        assert_eq!(rb.value, Surd::new(rat(1, 2), rat(1, 12), int(72)));
        assert_eq!(rb.floor, BigInt::from(1));
        let w = DivisorClass::ints(1, 4);
        let same = rank_bound(&k3, &w, &Polarization::rational(w.clone())).unwrap();
        assert_eq!(same.value.cmp_rational(&int(1)), Ordering::Equal);
    }

    #[test]
    fn certificate_in_twisted_ample_region() {
        let k3 = SurfaceParams::k3();
        let spec = ChargeSpec::new(k3.clone(), Family::VD { v: int(2), d: int(2) }).unwrap();
        let l = k3.line_bundle(&DivisorClass::ints(1, 1));
        let v = stability_certificate(&spec, &l, &SearchBounds::new(5, 5, 5)).unwrap();
        assert_eq!(v, Verdict::NoNumericalWall);
    }
}
