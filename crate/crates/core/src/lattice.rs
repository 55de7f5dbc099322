//! Intersection theory on span(Theta, f) and Chern-character arithmetic.
//!
//! A divisor is `a*Theta + b*f` with `Theta^2 = -e`, `Theta.f = 1`, `f^2 = 0`.
//! A Chern vector is `(n, a, b, s)`: rank, `ch1 = a*Theta + b*f`, and `ch2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, int, parse_rational, rat, rational_sqrt, ParseError, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("the invariant e must be positive, got {0}")]
    NonPositiveE(String),
    #[error("divisor has zero Theta-component and no RDV view")]
    ZeroThetaComponent,
    #[error("operation is only defined on the K3 case e = 2")]
    KThreeOnly,
    #[error("rank must be nonzero")]
    ZeroRank,
    #[error("class must have positive self-intersection")]
    NonPositiveSquare,
    #[error("R^2 = {0} is not a rational square, so the divisor is irrational")]
    IrrationalScale(String),
    #[error("unsupported named class {0:?}")]
    UnsupportedName(String),
}

/// The surface invariant `e = -Theta^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceParams {
    e: Rational,
}

impl SurfaceParams {
    pub fn new(e: Rational) -> Result<Self, LatticeError> {
        if !e.is_positive() {
            return Err(LatticeError::NonPositiveE(format_rational(&e)));
        }
        if !e.is_integer() {
            log::warn!("e = {} is not an integer; no Weierstrass surface has this invariant", e);
        }
        Ok(SurfaceParams { e })
    }

    pub fn k3() -> Self {
        SurfaceParams { e: int(2) }
    }

    pub fn e(&self) -> &Rational {
        &self.e
    }

    pub fn half_e(&self) -> Rational {
        &self.e / int(2)
    }

    pub fn is_k3(&self) -> bool {
        self.e == int(2)
    }

    pub fn require_k3(&self) -> Result<(), LatticeError> {
        if self.is_k3() {
            Ok(())
        } else {
            Err(LatticeError::KThreeOnly)
        }
    }

    pub fn intersect(&self, m: &DivisorClass, w: &DivisorClass) -> Rational {
        -(&self.e * &m.theta * &w.theta) + &m.theta * &w.fiber + &m.fiber * &w.theta
    }

    pub fn square(&self, m: &DivisorClass) -> Rational {
        self.intersect(m, m)
    }

    /// `a > 0` and `b > e*a`.
    pub fn is_ample(&self, m: &DivisorClass) -> bool {
        m.theta.is_positive() && m.fiber > &self.e * &m.theta
    }

    /// `Theta + (D+e) f`, the unit-scale divisor of an RDV point.
    pub fn unit_divisor(&self, d: &Rational) -> DivisorClass {
        DivisorClass::new(int(1), d + &self.e)
    }

    pub fn rdv_of(&self, m: &DivisorClass) -> Result<RdvCoords, LatticeError> {
        if m.theta.is_zero() {
            return Err(LatticeError::ZeroThetaComponent);
        }
        let r = m.theta.clone();
        let d = &m.fiber / &r - &self.e;
        let v = self.square(m) / int(2);
        Ok(RdvCoords {
            r_sq: &r * &r,
            negative: r.is_negative(),
            d,
            v,
        })
    }

    /// RDV coordinates from `(D, V)` with positive scale `R = sqrt(V/(D+e/2))`.
    pub fn rdv_from_dv(&self, d: Rational, v: Rational) -> Result<RdvCoords, LatticeError> {
        let denom = &d + self.half_e();
        if denom.is_zero() {
            return Err(LatticeError::NonPositiveSquare);
        }
        let r_sq = &v / &denom;
        if r_sq.is_negative() {
            return Err(LatticeError::NonPositiveSquare);
        }
        Ok(RdvCoords { r_sq, negative: false, d, v })
    }

    pub fn divisor_of_rdv(&self, r: &RdvCoords) -> Result<DivisorClass, LatticeError> {
        let scale = r
            .r()
            .ok_or_else(|| LatticeError::IrrationalScale(format_rational(&r.r_sq)))?;
        Ok(self.unit_divisor(&r.d).scale(&scale))
    }

    pub fn twist(&self, v: &ChernVector, m: &DivisorClass) -> ChernVector {
        let c1 = v.ch1();
        let s = &v.s + self.intersect(m, &c1) + &v.n * self.square(m) / int(2);
        let new_c1 = c1 + m.scale(&v.n);
        ChernVector::new(v.n.clone(), new_c1.theta, new_c1.fiber, s)
    }

    /// `ch(O(M)) = (1, M, M^2/2)`.
    pub fn line_bundle(&self, m: &DivisorClass) -> ChernVector {
        ChernVector::new(int(1), m.theta.clone(), m.fiber.clone(), self.square(m) / int(2))
    }

    pub fn is_line_bundle_class(&self, v: &ChernVector) -> bool {
        v.n.is_one() && v.s == self.square(&v.ch1()) / int(2)
    }

    pub fn section_degree(&self, v: &ChernVector) -> Rational {
        -(&self.e * &v.a) + &v.b
    }

    pub fn mukai_vector(&self, v: &ChernVector) -> Result<MukaiVector, LatticeError> {
        self.require_k3()?;
        Ok(MukaiVector {
            r: v.n.clone(),
            c1: v.ch1(),
            s: &v.n + &v.s,
        })
    }

    /// `(v, w) = c1.c1' - r s' - r' s` on Mukai components.
    pub fn mukai_pairing(&self, v: &ChernVector, w: &ChernVector) -> Result<Rational, LatticeError> {
        let mv = self.mukai_vector(v)?;
        let mw = self.mukai_vector(w)?;
        Ok(self.intersect(&mv.c1, &mw.c1) - &mv.r * &mw.s - &mw.r * &mv.s)
    }

    pub fn euler_pairing(&self, v: &ChernVector, w: &ChernVector) -> Result<Rational, LatticeError> {
        Ok(-self.mukai_pairing(v, w)?)
    }

    pub fn chern_named(&self, name: &NamedClass) -> Result<ChernVector, LatticeError> {
        Ok(match name {
            NamedClass::StructureSheaf => ChernVector::new(int(1), int(0), int(0), int(0)),
            NamedClass::Fiber => ChernVector::new(int(0), int(0), int(1), int(0)),
            NamedClass::Point => ChernVector::new(int(0), int(0), int(0), int(1)),
            NamedClass::SectionSheaf(m) => {
                self.require_k3()?;
                ChernVector::new(int(0), int(1), int(0), int(m + 1))
            }
            NamedClass::LineBundle(m) => self.line_bundle(m),
            NamedClass::L0(dalpha) => {
                self.line_bundle(&DivisorClass::new(int(0), -(dalpha + int(1))))
            }
            NamedClass::L1(dalpha) => {
                self.line_bundle(&DivisorClass::new(int(1), -(dalpha + int(2))))
            }
        })
    }

    /// Classical Bogomolov-Gieseker: `s <= c1^2 / (2n)`.
    pub fn bg_classical(&self, v: &ChernVector) -> Result<bool, LatticeError> {
        if v.n.is_zero() {
            return Err(LatticeError::ZeroRank);
        }
        Ok(v.s <= self.square(&v.ch1()) / (int(2) * &v.n))
    }

    /// Strong K3 form: `s <= c1^2/(2n) - n + 1/n`.
    pub fn bg_k3_strong(&self, v: &ChernVector) -> Result<bool, LatticeError> {
        if v.n.is_zero() {
            return Err(LatticeError::ZeroRank);
        }
        self.require_k3()?;
        let bound = self.square(&v.ch1()) / (int(2) * &v.n) - &v.n + v.n.recip();
        Ok(v.s <= bound)
    }

    /// Hodge-index upper bound `(omega.c1)^2 / omega^2` for `c1^2`.
    pub fn hodge_upper(&self, v: &ChernVector, omega: &DivisorClass) -> Result<Rational, LatticeError> {
        let sq = self.square(omega);
        if !sq.is_positive() {
            return Err(LatticeError::NonPositiveSquare);
        }
        let d = self.intersect(omega, &v.ch1());
        Ok(&d * &d / sq)
    }
}

/// `theta*Theta + fiber*f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub theta: Rational,
    pub fiber: Rational,
}

impl DivisorClass {
    pub fn new(theta: Rational, fiber: Rational) -> Self {
        DivisorClass { theta, fiber }
    }

    pub fn zero() -> Self {
        DivisorClass::new(int(0), int(0))
    }

    pub fn theta() -> Self {
        DivisorClass::new(int(1), int(0))
    }

    pub fn fiber_class() -> Self {
        DivisorClass::new(int(0), int(1))
    }

    pub fn ints(a: i64, b: i64) -> Self {
        DivisorClass::new(int(a), int(b))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        DivisorClass::new(&self.theta * k, &self.fiber * k)
    }

    pub fn is_zero(&self) -> bool {
        self.theta.is_zero() && self.fiber.is_zero()
    }

    /// Parses `"a,b"`.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(ParseError::Divisor(s.to_string()));
        }
        let a = parse_rational(parts[0]).map_err(|_| ParseError::Divisor(s.to_string()))?;
        let b = parse_rational(parts[1]).map_err(|_| ParseError::Divisor(s.to_string()))?;
        Ok(DivisorClass::new(a, b))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.theta, self.fiber)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.theta + o.theta, self.fiber + o.fiber)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.theta - o.theta, self.fiber - o.fiber)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(-self.theta, -self.fiber)
    }
}

/// `M = R (Theta + (D+e) f)`, `V = M^2/2`. `R` is kept as a sign and `R^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdvCoords {
    pub r_sq: Rational,
    pub negative: bool,
    pub d: Rational,
    pub v: Rational,
}

impl RdvCoords {
    /// `R` itself when it is rational.
    pub fn r(&self) -> Option<Rational> {
        rational_sqrt(&self.r_sq).map(|r| if self.negative { -r } else { r })
    }

    pub fn r_f64(&self) -> f64 {
        let r = crate::rational::to_f64(&self.r_sq).sqrt();
        if self.negative {
            -r
        } else {
            r
        }
    }
}

/// Mukai vector `(r, c1, r + ch2)` on a K3 surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MukaiVector {
    pub r: Rational,
    pub c1: DivisorClass,
    pub s: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedClass {
    StructureSheaf,
    Fiber,
    Point,
    /// The structure sheaf of the section twisted by `O(m)` along it.
    SectionSheaf(i64),
    LineBundle(DivisorClass),
    L0(Rational),
    L1(Rational),
}

impl NamedClass {
    /// Parses `o`, `of`, `opt`, `otheta:m`, `line:a,b`, `l0:k`, `l1:k`.
    pub fn parse(s: &str) -> Result<Self, LatticeError> {
        let bad = || LatticeError::UnsupportedName(s.to_string());
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("o", None) => Ok(NamedClass::StructureSheaf),
            ("of", None) => Ok(NamedClass::Fiber),
            ("opt", None) => Ok(NamedClass::Point),
            ("otheta", Some(m)) => m.trim().parse().map(NamedClass::SectionSheaf).map_err(|_| bad()),
            ("line", Some(d)) => DivisorClass::parse(d).map(NamedClass::LineBundle).map_err(|_| bad()),
            ("l0", Some(k)) => parse_rational(k).map(NamedClass::L0).map_err(|_| bad()),
            ("l1", Some(k)) => parse_rational(k).map(NamedClass::L1).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// `(n, a, b, s)`: rank, `ch1 = a*Theta + b*f`, `ch2 = s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ChernJson", into = "ChernJson")]
pub struct ChernVector {
    pub n: Rational,
    pub a: Rational,
    pub b: Rational,
    pub s: Rational,
}

impl ChernVector {
    pub fn new(n: Rational, a: Rational, b: Rational, s: Rational) -> Self {
        ChernVector { n, a, b, s }
    }

    pub fn ints(n: i64, a: i64, b: i64, s: i64) -> Self {
        ChernVector::new(int(n), int(a), int(b), int(s))
    }

    pub fn zero() -> Self {
        ChernVector::ints(0, 0, 0, 0)
    }

    pub fn from_array(x: [Rational; 4]) -> Self {
        let [n, a, b, s] = x;
        ChernVector::new(n, a, b, s)
    }

    pub fn to_array(&self) -> [Rational; 4] {
        [self.n.clone(), self.a.clone(), self.b.clone(), self.s.clone()]
    }

    pub fn basis() -> [ChernVector; 4] {
        [
            ChernVector::ints(1, 0, 0, 0),
            ChernVector::ints(0, 1, 0, 0),
            ChernVector::ints(0, 0, 1, 0),
            ChernVector::ints(0, 0, 0, 1),
        ]
    }

    pub fn ch1(&self) -> DivisorClass {
        DivisorClass::new(self.a.clone(), self.b.clone())
    }

    /// `f . ch1`.
    pub fn fiber_degree(&self) -> Rational {
        self.a.clone()
    }

    pub fn dual(&self) -> Self {
        ChernVector::new(self.n.clone(), -self.a.clone(), -self.b.clone(), self.s.clone())
    }

    /// The class of `E[k]`.
    pub fn shift(&self, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            -self.clone()
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ChernVector::new(&self.n * k, &self.a * k, &self.b * k, &self.s * k)
    }

    /// Rank and ch1 integral and `ch2` in `(1/2)Z`.
    pub fn is_half_integral(&self) -> bool {
        self.n.is_integer()
            && self.a.is_integer()
            && self.b.is_integer()
            && (&self.s * int(2)).is_integer()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("chern vector serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ParseError> {
        serde_json::from_str(s).map_err(|e| ParseError::Chern(e.to_string()))
    }
}

impl fmt::Display for ChernVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}T + {}f, {})", self.n, self.a, self.b, self.s)
    }
}

impl Add for ChernVector {
    type Output = ChernVector;
    fn add(self, o: ChernVector) -> ChernVector {
        ChernVector::new(self.n + o.n, self.a + o.a, self.b + o.b, self.s + o.s)
    }
}

impl Sub for ChernVector {
    type Output = ChernVector;
    fn sub(self, o: ChernVector) -> ChernVector {
        ChernVector::new(self.n - o.n, self.a - o.a, self.b - o.b, self.s - o.s)
    }
}

impl Neg for ChernVector {
    type Output = ChernVector;
    fn neg(self) -> ChernVector {
        ChernVector::new(-self.n, -self.a, -self.b, -self.s)
    }
}

impl Mul<&Rational> for &ChernVector {
    type Output = ChernVector;
    fn mul(self, k: &Rational) -> ChernVector {
        self.scale(k)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChernJson {
    n: String,
    theta: String,
    fiber: String,
    ch2: String,
}

impl TryFrom<ChernJson> for ChernVector {
    type Error = ParseError;
    fn try_from(j: ChernJson) -> Result<Self, ParseError> {
        Ok(ChernVector::new(
            parse_rational(&j.n)?,
            parse_rational(&j.theta)?,
            parse_rational(&j.fiber)?,
            parse_rational(&j.ch2)?,
        ))
    }
}

impl From<ChernVector> for ChernJson {
    fn from(v: ChernVector) -> Self {
        ChernJson {
            n: format_rational(&v.n),
            theta: format_rational(&v.a),
            fiber: format_rational(&v.b),
            ch2: format_rational(&v.s),
        }
    }
}

/// Shorthand used by tests and fixtures: `(n, a, b, s)` from `(num, den)` pairs.
pub fn chern_q(n: (i64, i64), a: (i64, i64), b: (i64, i64), s: (i64, i64)) -> ChernVector {
    ChernVector::new(rat(n.0, n.1), rat(a.0, a.1), rat(b.0, b.1), rat(s.0, s.1))
}
