//! Central charges, exact phase comparison and kernel-phase tables.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{ChernVector, DivisorClass, LatticeError, NamedClass, SurfaceParams};
use crate::rational::{cmp_scaled, int, rat, sign, to_f64, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChargeError {
    #[error("invalid charge parameters: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("Z(v) = 0 and {0}")]
    KernelWithoutTable(String),
    #[error("family has no kernel (not a weak family)")]
    NotWeakFamily,
    #[error("no closed-form limit for this object along this path")]
    UnknownLimit,
    #[error("phase {0} has no exact slope representation")]
    UnsupportedPhase(String),
}

/// `omega = sqrt(scale_sq) * unit`, with `unit` rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarization {
    pub unit: DivisorClass,
    pub scale_sq: Rational,
}

impl Polarization {
    pub fn rational(m: DivisorClass) -> Self {
        Polarization { unit: m, scale_sq: Rational::one() }
    }

    /// `omega = R (Theta + (D+e) f)` with `omega^2 / 2 = V`.
    pub fn from_dv(surface: &SurfaceParams, d: &Rational, v: &Rational) -> Result<Self, ChargeError> {
        let rdv = surface.rdv_from_dv(d.clone(), v.clone())?;
        Ok(Polarization { unit: surface.unit_divisor(d), scale_sq: rdv.r_sq })
    }

    pub fn square(&self, surface: &SurfaceParams) -> Rational {
        &self.scale_sq * surface.square(&self.unit)
    }

    pub fn is_ample(&self, surface: &SurfaceParams) -> bool {
        self.scale_sq.is_positive() && surface.is_ample(&self.unit)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let r = to_f64(&self.scale_sq).sqrt();
        (r * to_f64(&self.unit.theta), r * to_f64(&self.unit.fiber))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Standard { omega: Polarization, b: DivisorClass },
    Todd { omega: Polarization, b: DivisorClass },
    VD { v: Rational, d: Rational },
    Ray { h: DivisorClass, b: DivisorClass, t: Rational },
    WeakH,
    WeakVH { v: Rational },
    WeakD { d: Rational },
    WeakSpecial { dalpha: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeSpec {
    pub surface: SurfaceParams,
    pub family: Family,
    /// The projective ratio `V:D` used to order direct sums of kernel generators.
    pub kernel_param: Option<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleNote {
    Exact,
    /// `im` must be multiplied by `sqrt(im_scale_sq)` to get the true value.
    FactoredSqrt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeValue {
    pub re: Rational,
    pub im: Rational,
    pub im_scale_sq: Rational,
}

impl ChargeValue {
    fn exact(re: Rational, im: Rational) -> Self {
        ChargeValue { re, im, im_scale_sq: Rational::one() }
    }

    pub fn scale_note(&self) -> ScaleNote {
        if self.im_scale_sq.is_one() {
            ScaleNote::Exact
        } else {
            ScaleNote::FactoredSqrt
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn re_f64(&self) -> f64 {
        to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        to_f64(&self.im) * to_f64(&self.im_scale_sq).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfPlane {
    /// `Im < 0`, principal phase in `(-1, 0)`.
    Lower,
    /// Phase `0`.
    PositiveReal,
    /// Phase in `(0, 1)`.
    Upper,
    /// Phase `1`.
    NegativeReal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhaseValue {
    /// A nonzero charge. `slope = -re/im` (scaled as the charge), zero on the real axis.
    Interior { half_plane: HalfPlane, slope: Rational, scale_sq: Rational },
    /// A kernel class with a tabulated phase.
    KernelTabulated { phi: Rational },
    /// A mixed sum of kernel generators, placed in the upper half plane by its slope.
    KernelSlope { slope: Rational },
}

impl PhaseValue {
    pub fn is_kernel(&self) -> bool {
        !matches!(self, PhaseValue::Interior { .. })
    }

    /// `(1/pi) arg` on the principal branch `(-1, 1]`, or the tabulated value.
    pub fn to_f64(&self) -> f64 {
        match self {
            PhaseValue::Interior { half_plane, slope, scale_sq } => {
                let rho = to_f64(slope) / to_f64(scale_sq).sqrt();
                match half_plane {
                    HalfPlane::PositiveReal => 0.0,
                    HalfPlane::NegativeReal => 1.0,
                    HalfPlane::Upper => 1.0f64.atan2(-rho) / std::f64::consts::PI,
                    HalfPlane::Lower => (-1.0f64).atan2(rho) / std::f64::consts::PI,
                }
            }
            PhaseValue::KernelTabulated { phi } => to_f64(phi),
            PhaseValue::KernelSlope { slope } => 1.0f64.atan2(-to_f64(slope)) / std::f64::consts::PI,
        }
    }

    fn key(&self) -> Result<PhaseKey, ChargeError> {
        Ok(match self {
            PhaseValue::Interior { half_plane, slope, scale_sq } => PhaseKey {
                winding: 0,
                half_plane: *half_plane,
                slope: slope.clone(),
                scale_sq: scale_sq.clone(),
                kernel: false,
            },
            PhaseValue::KernelSlope { slope } => PhaseKey {
                winding: 0,
                half_plane: HalfPlane::Upper,
                slope: slope.clone(),
                scale_sq: Rational::one(),
                kernel: true,
            },
            PhaseValue::KernelTabulated { phi } => tabulated_key(phi)?,
        })
    }
}

struct PhaseKey {
    winding: i64,
    half_plane: HalfPlane,
    slope: Rational,
    scale_sq: Rational,
    kernel: bool,
}

impl PhaseKey {
    fn cmp(&self, o: &PhaseKey) -> Ordering {
        self.winding
            .cmp(&o.winding)
            .then(self.half_plane.cmp(&o.half_plane))
            .then_with(|| match self.half_plane {
                HalfPlane::Upper | HalfPlane::Lower => cmp_scaled(&self.slope, &self.scale_sq, &o.slope, &o.scale_sq),
                _ => Ordering::Equal,
            })
            // Ties between a kernel class and an interior class: kernel last.
            .then(self.kernel.cmp(&o.kernel))
    }
}

/// Exact key for a tabulated phase; only multiples of 1/4 have rational slopes.
fn tabulated_key(phi: &Rational) -> Result<PhaseKey, ChargeError> {
    let quarters = phi * int(4);
    if !quarters.is_integer() {
        return Err(ChargeError::UnsupportedPhase(phi.to_string()));
    }
    let q = quarters.to_integer();
    let q: i64 = i64::try_from(q).map_err(|_| ChargeError::UnsupportedPhase(phi.to_string()))?;
    // Principal part in (-4, 4] quarters.
    let winding = (q + 3).div_euclid(8);
    let p = q - 8 * winding;
    let (half_plane, slope) = match p {
        -3 => (HalfPlane::Lower, int(-1)),
        -2 => (HalfPlane::Lower, int(0)),
        -1 => (HalfPlane::Lower, int(1)),
        0 => (HalfPlane::PositiveReal, int(0)),
        1 => (HalfPlane::Upper, int(-1)),
        2 => (HalfPlane::Upper, int(0)),
        3 => (HalfPlane::Upper, int(1)),
        4 => (HalfPlane::NegativeReal, int(0)),
        _ => unreachable!(),
    };
    Ok(PhaseKey { winding, half_plane, slope, scale_sq: Rational::one(), kernel: true })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelGenerator {
    pub name: &'static str,
    pub class: ChernVector,
    pub phi: Rational,
}

/// `ch^B = e^{-B} ch`: returns `(ch0, ch1^B, ch2^B)`.
pub fn twisted_chern(surface: &SurfaceParams, v: &ChernVector, b: &DivisorClass) -> (Rational, DivisorClass, Rational) {
    let c1 = v.ch1();
    let c1b = c1.clone() - b.scale(&v.n);
    let ch2b = &v.s - surface.intersect(b, &c1) + &v.n * surface.square(b) / int(2);
    (v.n.clone(), c1b, ch2b)
}

impl ChargeSpec {
    pub fn new(surface: SurfaceParams, family: Family) -> Result<Self, ChargeError> {
        let bad = |m: &str| Err(ChargeError::InvalidSpec(m.to_string()));
        match &family {
            Family::Standard { omega, .. } | Family::Todd { omega, .. } => {
                if !omega.is_ample(&surface) {
                    return bad("omega must be ample");
                }
            }
            Family::VD { v, d } => {
                if !v.is_positive() || !d.is_positive() {
                    return bad("VD requires V > 0 and D > 0");
                }
            }
            Family::Ray { h, t, .. } => {
                if !surface.is_ample(h) || !t.is_positive() {
                    return bad("ray charge requires H ample and t > 0");
                }
            }
            Family::WeakH => {}
            Family::WeakVH { v } => {
                if v.is_negative() {
                    return bad("weak (V,H) charge requires V >= 0");
                }
            }
            Family::WeakD { d } => {
                if d.is_negative() {
                    return bad("weak D charge requires D >= 0");
                }
            }
            Family::WeakSpecial { .. } => surface.require_k3()?,
        }
        Ok(ChargeSpec { surface, family, kernel_param: None })
    }

    pub fn with_kernel_param(mut self, ratio: Rational) -> Result<Self, ChargeError> {
        if ratio.is_negative() {
            return Err(ChargeError::InvalidSpec("kernel ratio must be >= 0".into()));
        }
        self.kernel_param = Some(ratio);
        Ok(self)
    }

    pub fn is_weak(&self) -> bool {
        matches!(
            self.family,
            Family::WeakH | Family::WeakVH { .. } | Family::WeakD { .. } | Family::WeakSpecial { .. }
        )
    }

    /// `H = Theta + e f`.
    pub fn h_class(&self) -> DivisorClass {
        DivisorClass::new(int(1), self.surface.e().clone())
    }

    /// `omega'_0 = (Theta + 3f)/2` and `B'_0 = (Theta + (-2 D_alpha - 3) f)/2`.
    pub fn special_point(dalpha: &Rational) -> (DivisorClass, DivisorClass) {
        (
            DivisorClass::new(rat(1, 2), rat(3, 2)),
            DivisorClass::new(rat(1, 2), (int(-2) * dalpha - int(3)) / int(2)),
        )
    }

    pub fn eval(&self, v: &ChernVector) -> ChargeValue {
        let s = &self.surface;
        let general = |omega: &Polarization, b: &DivisorClass, ch0_coeff: Rational| {
            let (n, c1b, ch2b) = twisted_chern(s, v, b);
            ChargeValue {
                re: -ch2b + ch0_coeff * n,
                im: s.intersect(&omega.unit, &c1b),
                im_scale_sq: omega.scale_sq.clone(),
            }
        };
        match &self.family {
            Family::Standard { omega, b } => general(omega, b, omega.square(s) / int(2)),
            Family::Todd { omega, b } => general(omega, b, omega.square(s) / int(2) - int(1)),
            Family::VD { v: vol, d } => {
                ChargeValue::exact(-&v.s + vol * &v.n, s.intersect(&s.unit_divisor(d), &v.ch1()))
            }
            Family::Ray { h, b, t } => {
                let (n, c1b, ch2b) = twisted_chern(s, v, b);
                ChargeValue::exact(-ch2b + t * n, s.intersect(h, &c1b))
            }
            Family::WeakH => ChargeValue::exact(-v.s.clone(), s.intersect(&self.h_class(), &v.ch1())),
            Family::WeakVH { v: vol } => {
                ChargeValue::exact(-&v.s + vol * &v.n, s.intersect(&self.h_class(), &v.ch1()))
            }
            Family::WeakD { d } => ChargeValue::exact(-v.s.clone(), s.intersect(&s.unit_divisor(d), &v.ch1())),
            Family::WeakSpecial { dalpha } => {
                let (omega, b) = Self::special_point(dalpha);
                let omega = Polarization::rational(omega);
                general(&omega, &b, omega.square(s) / int(2) - int(1))
            }
        }
    }

    pub fn in_kernel(&self, v: &ChernVector) -> bool {
        self.eval(v).is_zero()
    }

    pub fn kernel_basis(&self) -> Result<Vec<KernelGenerator>, ChargeError> {
        let s = &self.surface;
        let o_shift = ChernVector::ints(-1, 0, 0, 0);
        let ot_minus_one = ChernVector::ints(0, 1, 0, 0);
        Ok(match &self.family {
            Family::WeakH => vec![
                KernelGenerator { name: "O_X[1]", class: o_shift, phi: int(1) },
                KernelGenerator { name: "O_Theta(-1)", class: ot_minus_one, phi: rat(1, 2) },
            ],
            Family::WeakVH { .. } => {
                vec![KernelGenerator { name: "O_Theta(-1)", class: ot_minus_one, phi: rat(1, 2) }]
            }
            Family::WeakD { .. } => vec![KernelGenerator { name: "O_X[1]", class: o_shift, phi: int(1) }],
            Family::WeakSpecial { dalpha } => vec![
                KernelGenerator {
                    name: "L0[1]",
                    class: s.chern_named(&NamedClass::L0(dalpha.clone()))?.shift(1),
                    phi: rat(3, 4),
                },
                KernelGenerator {
                    name: "L1",
                    class: s.chern_named(&NamedClass::L1(dalpha.clone()))?,
                    phi: rat(1, 4),
                },
            ],
            _ => return Err(ChargeError::NotWeakFamily),
        })
    }

    pub fn phase(&self, v: &ChernVector) -> Result<PhaseValue, ChargeError> {
        let z = self.eval(v);
        if !z.is_zero() {
            let half_plane = match (sign(&z.im), sign(&z.re)) {
                (1, _) => HalfPlane::Upper,
                (-1, _) => HalfPlane::Lower,
                (_, 1) => HalfPlane::PositiveReal,
                _ => HalfPlane::NegativeReal,
            };
            let slope = if z.im.is_zero() { Rational::zero() } else { -&z.re / &z.im };
            return Ok(PhaseValue::Interior { half_plane, slope, scale_sq: z.im_scale_sq });
        }
        if !self.is_weak() {
            return Err(ChargeError::KernelWithoutTable("the family is not weak".into()));
        }
        self.kernel_phase(v)
    }

    fn kernel_phase(&self, v: &ChernVector) -> Result<PhaseValue, ChargeError> {
        let gens = self.kernel_basis()?;
        let mult = decompose(v, &gens)
            .ok_or_else(|| ChargeError::KernelWithoutTable(format!("{v} is not a sum of tabulated kernel generators")))?;
        let nonzero: Vec<usize> = (0..mult.len()).filter(|&i| !mult[i].is_zero()).collect();
        if nonzero.is_empty() {
            return Err(ChargeError::KernelWithoutTable("the zero class has no phase".into()));
        }
        if nonzero.len() == 1 {
            return Ok(PhaseValue::KernelTabulated { phi: gens[nonzero[0]].phi.clone() });
        }
        let ratio = self.kernel_param.clone().ok_or_else(|| {
            ChargeError::KernelWithoutTable("mixed kernel sums need a kernel ratio parameter".into())
        })?;
        let slope = match &self.family {
            // m1 O_X[1] + m0 O_Theta(-1): slope b m1 / m0.
            Family::WeakH => &ratio * &mult[0] / &mult[1],
            // m0 L0[1] + m1 L1: slope (m0 - r m1)/(m0 + r m1).
            Family::WeakSpecial { .. } => {
                let a = &ratio * &mult[1];
                (&mult[0] - &a) / (&mult[0] + &a)
            }
            _ => unreachable!("single-generator families have no mixed sums"),
        };
        Ok(PhaseValue::KernelSlope { slope })
    }

    pub fn compare_phase(&self, v: &ChernVector, w: &ChernVector) -> Result<Ordering, ChargeError> {
        compare_phase_values(&self.phase(v)?, &self.phase(w)?)
    }

    /// Numerical shadow of heart membership: `Im >= 0` and `Im = 0 => Re <= 0`.
    pub fn heart_necessary(&self, v: &ChernVector) -> bool {
        let z = self.eval(v);
        match sign(&z.im) {
            1 => true,
            0 => !z.re.is_positive(),
            _ => false,
        }
    }
}

pub fn compare_phase_values(a: &PhaseValue, b: &PhaseValue) -> Result<Ordering, ChargeError> {
    Ok(a.key()?.cmp(&b.key()?))
}

/// Non-negative multiplicities `m` with `v = sum m_i g_i`, if they exist.
fn decompose(v: &ChernVector, gens: &[KernelGenerator]) -> Option<Vec<Rational>> {
    let target = v.to_array();
    let cols: Vec<[Rational; 4]> = gens.iter().map(|g| g.class.to_array()).collect();
    let mult = match cols.len() {
        1 => {
            let i = (0..4).find(|&i| !cols[0][i].is_zero())?;
            vec![&target[i] / &cols[0][i]]
        }
        2 => {
            // Solve on the first pair of rows with a nonzero 2x2 minor.
            let mut found = None;
            'outer: for i in 0..4 {
                for j in (i + 1)..4 {
                    let det = &cols[0][i] * &cols[1][j] - &cols[1][i] * &cols[0][j];
                    if !det.is_zero() {
                        let x = (&target[i] * &cols[1][j] - &cols[1][i] * &target[j]) / &det;
                        let y = (&cols[0][i] * &target[j] - &target[i] * &cols[0][j]) / &det;
                        found = Some(vec![x, y]);
                        break 'outer;
                    }
                }
            }
            found?
        }
        _ => return None,
    };
    let rebuilt = gens
        .iter()
        .zip(&mult)
        .fold(ChernVector::zero(), |acc, (g, m)| acc + g.class.scale(m));
    if rebuilt != *v || mult.iter().any(|m| m.is_negative()) {
        return None;
    }
    Some(mult)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitObject {
    L0Shift,
    L1,
    L1Shift,
    StructureShift,
    SectionMinusOne,
}

impl LimitObject {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "l0[1]" => LimitObject::L0Shift,
            "l1" => LimitObject::L1,
            "l1[1]" => LimitObject::L1Shift,
            "o[1]" => LimitObject::StructureShift,
            "otheta(-1)" => LimitObject::SectionMinusOne,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitPath {
    /// `(D, V) -> (0, 0)` along `V = ratio * D`.
    Diagonal { ratio: Rational },
    DToZero,
    VToZero,
}

/// Closed-form limit phase of a kernel object.
pub fn limit_phase(path: &LimitPath, obj: LimitObject) -> Result<Rational, ChargeError> {
    if let LimitPath::Diagonal { ratio } = path {
        if !ratio.is_positive() {
            return Err(ChargeError::InvalidSpec("limit ratio must be positive".into()));
        }
    }
    match (obj, path) {
        (LimitObject::StructureShift, _) => Ok(int(1)),
        (LimitObject::SectionMinusOne, _) => Ok(rat(1, 2)),
        (LimitObject::L0Shift, LimitPath::Diagonal { .. }) => Ok(rat(3, 4)),
        (LimitObject::L1, LimitPath::Diagonal { .. }) => Ok(rat(1, 4)),
        (LimitObject::L1Shift, LimitPath::Diagonal { .. }) => Ok(rat(5, 4)),
        _ => Err(ChargeError::UnknownLimit),
    }
}

/// Phase of a kernel object at a small `(D, V)`, from the transformed Todd
/// charge (for `L0`, `L1`) or the `(V, D)` charge (for `O_X`, `O_Theta(-1)`).
/// Shifts add 1 to the phase.
pub fn numeric_phase(obj: LimitObject, d: f64, v: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let denom = d + v + 2.0;
    let k = ((d + 1.0) * (v + 1.0)).sqrt() / denom;
    let phase = |re: f64, im: f64| im.atan2(re) / pi;
    match obj {
        LimitObject::L0Shift => phase((d * v + d) / denom, -d * k) + 1.0,
        LimitObject::L1 => phase((d * v + v) / denom, v * k),
        LimitObject::L1Shift => phase((d * v + v) / denom, v * k) + 1.0,
        LimitObject::StructureShift => phase(v, 0.0) + 1.0,
        LimitObject::SectionMinusOne => phase(0.0, d),
    }
}

/// Rank-one classes `(1, c1, c1^2/2)` with `Z'_0 = 0`, searched over
/// `|c1.Theta|, |c1.f| <= bound` and filtered by the Hodge-index family
/// `(c1 + a Theta + (D_alpha + 1 - a) f)^2 <= 0` for integral `|a| <= bound`.
pub fn kernel_line_bundle_classes(dalpha: &Rational, bound: i64) -> Result<Vec<DivisorClass>, ChargeError> {
    let k3 = SurfaceParams::k3();
    let spec = ChargeSpec::new(k3.clone(), Family::WeakSpecial { dalpha: dalpha.clone() })?;
    let mut out = Vec::new();
    for y in -bound..=bound {
        for x in -bound..=bound {
            // x = c1.Theta = q - 2p, y = c1.f = p
            let c1 = DivisorClass::ints(y, x + 2 * y);
            let v = ChernVector::new(int(1), c1.theta.clone(), c1.fiber.clone(), k3.square(&c1) / int(2));
            if !spec.eval(&v).is_zero() {
                continue;
            }
            let hodge = (-bound..=bound).all(|a| {
                let shift = DivisorClass::new(int(a), dalpha + int(1) - int(a));
                !k3.square(&(c1.clone() + shift)).is_positive()
            });
            if hodge {
                out.push(c1);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> SurfaceParams {
        SurfaceParams::k3()
    }

    #[test]
    fn vd_fixtures() {
        let spec = ChargeSpec::new(k3(), Family::VD { v: rat(1, 2), d: int(3) }).unwrap();
        let z = spec.eval(&ChernVector::ints(-1, 0, 0, 0));
        assert_eq!((z.re, z.im), (rat(-1, 2), int(0)));
        let z = spec.eval(&ChernVector::ints(0, 1, 0, 0));
        assert_eq!((z.re, z.im), (int(0), int(3)));
    }

    #[test]
    fn special_fixture() {
        for d in 0..4 {
            let spec = ChargeSpec::new(k3(), Family::WeakSpecial { dalpha: int(d) }).unwrap();
            let z = spec.eval(&ChernVector::ints(0, 1, 0, -1));
            assert_eq!((z.re, z.im), (int(-d) - rat(3, 2), rat(1, 2)));
        }
    }

    #[test]
    fn kernel_classes_vanish() {
        let specs = [
            Family::WeakH,
            Family::WeakVH { v: rat(3, 2) },
            Family::WeakD { d: int(2) },
            Family::WeakSpecial { dalpha: int(1) },
        ];
        for f in specs {
            let spec = ChargeSpec::new(k3(), f).unwrap();
            for g in spec.kernel_basis().unwrap() {
                assert!(spec.in_kernel(&g.class), "{}", g.name);
                assert_eq!(spec.phase(&g.class).unwrap(), PhaseValue::KernelTabulated { phi: g.phi });
            }
        }
    }

    #[test]
    fn tabulated_ordering() {
        let phis = [rat(-3, 4), rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), int(1), rat(5, 4), int(2)];
        for w in phis.windows(2) {
            let a = PhaseValue::KernelTabulated { phi: w[0].clone() };
            let b = PhaseValue::KernelTabulated { phi: w[1].clone() };
            assert_eq!(compare_phase_values(&a, &b).unwrap(), Ordering::Less, "{} < {}", w[0], w[1]);
        }
    }

    #[test]
    fn mixed_kernel_sums() {
        let spec = ChargeSpec::new(k3(), Family::WeakH).unwrap().with_kernel_param(int(2)).unwrap();
        let sum = ChernVector::ints(-1, 0, 0, 0) + ChernVector::ints(0, 2, 0, 0);
        assert_eq!(spec.phase(&sum).unwrap(), PhaseValue::KernelSlope { slope: int(1) });
        let bare = ChargeSpec::new(k3(), Family::WeakH).unwrap();
        assert!(matches!(bare.phase(&sum), Err(ChargeError::KernelWithoutTable(_))));
    }

    #[test]
    fn non_weak_kernel_errors() {
        let spec = ChargeSpec::new(k3(), Family::VD { v: int(1), d: int(1) }).unwrap();
        // (1, 0, 0, 1): Re = -1 + 1 = 0, Im = 0.
        assert!(matches!(spec.phase(&ChernVector::ints(1, 0, 0, 1)), Err(ChargeError::KernelWithoutTable(_))));
    }

    #[test]
    fn limits() {
        let diag = LimitPath::Diagonal { ratio: int(1) };
        assert_eq!(limit_phase(&diag, LimitObject::L0Shift).unwrap(), rat(3, 4));
        assert_eq!(limit_phase(&diag, LimitObject::L1Shift).unwrap(), rat(5, 4));
        assert_eq!(limit_phase(&LimitPath::DToZero, LimitObject::L1), Err(ChargeError::UnknownLimit));
        assert!((numeric_phase(LimitObject::L1Shift, 1e-7, 1e-7) - 1.25).abs() < 1e-3);
    }
}
