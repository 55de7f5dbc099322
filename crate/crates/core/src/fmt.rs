//! The relative Fourier-Mukai transform and its composites as 4x4 rational
//! matrices acting on `(n, a, b, s)`.

use std::fmt as stdfmt;

use num_traits::Zero;
use serde::Serialize;

use crate::lattice::{ChernVector, DivisorClass, NamedClass, SurfaceParams};
use crate::rational::{int, Rational};

pub type Mat4 = [[Rational; 4]; 4];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    pub name: String,
    pub m: Mat4,
}

fn zero_mat() -> Mat4 {
    std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()))
}

impl LatticeMap {
    pub fn from_rows(name: &str, m: Mat4) -> Self {
        LatticeMap { name: name.to_string(), m }
    }

    pub fn identity() -> Self {
        let mut m = zero_mat();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = int(1);
        }
        LatticeMap::from_rows("id", m)
    }

    pub fn apply(&self, v: &ChernVector) -> ChernVector {
        let x = v.to_array();
        ChernVector::from_array(std::array::from_fn(|i| {
            (0..4).fold(Rational::zero(), |acc, j| acc + &self.m[i][j] * &x[j])
        }))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        let m = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).fold(Rational::zero(), |acc, k| acc + &self.m[i][k] * &other.m[k][j]))
        });
        LatticeMap::from_rows(&format!("{}.{}", self.name, other.name), m)
    }

    pub fn scaled(&self, k: &Rational, name: &str) -> LatticeMap {
        let m = std::array::from_fn(|i| std::array::from_fn(|j| &self.m[i][j] * k));
        LatticeMap::from_rows(name, m)
    }

    pub fn det(&self) -> Rational {
        det(&self.m)
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<LatticeMap> {
        let mut a = self.m.clone();
        let mut inv = LatticeMap::identity().m;
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..4 {
                a[col][j] = &a[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let k = a[r][col].clone();
                    for j in 0..4 {
                        let t = &k * &a[col][j];
                        a[r][j] = &a[r][j] - t;
                        let t = &k * &inv[col][j];
                        inv[r][j] = &inv[r][j] - t;
                    }
                }
            }
        }
        Some(LatticeMap::from_rows(&format!("{}^-1", self.name), inv))
    }

    /// The matrix of the linear map `v -> f(v)` read off the basis.
    pub fn from_fn(name: &str, f: impl Fn(&ChernVector) -> ChernVector) -> Self {
        let cols: Vec<[Rational; 4]> = ChernVector::basis().iter().map(|e| f(e).to_array()).collect();
        let m = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()));
        LatticeMap::from_rows(name, m)
    }
}

impl stdfmt::Display for LatticeMap {
    fn fmt(&self, f: &mut stdfmt::Formatter<'_>) -> stdfmt::Result {
        writeln!(f, "{}:", self.name)?;
        for row in &self.m {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn det(m: &Mat4) -> Rational {
    // Laplace expansion along the first row; 4x4 is small enough.
    fn minor3(m: &Mat4, rows: [usize; 3], cols: [usize; 3]) -> Rational {
        let g = |i: usize, j: usize| &m[rows[i]][cols[j]];
        g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
            + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
    }
    let mut total = Rational::zero();
    for j in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let term = &m[0][j] * minor3(m, [1, 2, 3], [cols[0], cols[1], cols[2]]);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `alpha = Theta + (D_alpha + e) f`.
pub fn alpha(surface: &SurfaceParams, dalpha: &Rational) -> DivisorClass {
    surface.unit_divisor(dalpha)
}

pub fn twist_map(surface: &SurfaceParams, m: &DivisorClass) -> LatticeMap {
    LatticeMap::from_fn(&format!("twist({m})"), |v| surface.twist(v, m))
}

/// `ch0 -> d`, `ch1 -> -ch1 + (d-n)Theta + (c + ed/2 + s) f`, `ch2 -> -c - de + ne/2`.
pub fn phi_map(surface: &SurfaceParams) -> LatticeMap {
    let e = surface.e();
    LatticeMap::from_fn("phi", |v| {
        let d = v.fiber_degree();
        let c = surface.section_degree(v);
        let n = &v.n;
        let half = |x: &Rational| x / int(2);
        let new_n = d.clone();
        let new_a = -&v.a + (&d - n);
        let new_b = -&v.b + &c + half(&(e * &d)) + &v.s;
        let new_s = -&c - &d * e + half(&(n * e));
        ChernVector::new(new_n, new_a, new_b, new_s)
    })
}

pub fn phi(surface: &SurfaceParams, v: &ChernVector) -> ChernVector {
    phi_map(surface).apply(v)
}

/// `-phi^-1`, fixed by `phi_hat . phi = id[-1]`.
pub fn phi_hat_map(surface: &SurfaceParams) -> LatticeMap {
    phi_map(surface)
        .inverse()
        .expect("phi is invertible")
        .scaled(&int(-1), "phi_hat")
}

pub fn phi_hat(surface: &SurfaceParams, v: &ChernVector) -> ChernVector {
    phi_hat_map(surface).apply(v)
}

/// `Psi = phi(- (x) O(-alpha))`.
pub fn psi_map(surface: &SurfaceParams, dalpha: &Rational) -> LatticeMap {
    let a = alpha(surface, dalpha);
    let mut m = phi_map(surface).compose(&twist_map(surface, &-a));
    m.name = "psi".into();
    m
}

/// `Psi' = O(alpha) (x) phi^-1(-)[-1]`.
pub fn psi_prime_map(surface: &SurfaceParams, dalpha: &Rational) -> LatticeMap {
    let a = alpha(surface, dalpha);
    let inv = phi_map(surface).inverse().expect("phi is invertible");
    twist_map(surface, &a).compose(&inv).scaled(&int(-1), "psi_prime")
}

/// `Upsilon = phi(-) (x) O(f)`.
pub fn upsilon_map(surface: &SurfaceParams) -> LatticeMap {
    let mut m = twist_map(surface, &DivisorClass::fiber_class()).compose(&phi_map(surface));
    m.name = "upsilon".into();
    m
}

/// `Upsilon' = phi^-1(- (x) O(-f))[-1]`.
pub fn upsilon_prime_map(surface: &SurfaceParams) -> LatticeMap {
    let inv = phi_map(surface).inverse().expect("phi is invertible");
    inv.compose(&twist_map(surface, &-DivisorClass::fiber_class()))
        .scaled(&int(-1), "upsilon_prime")
}

pub fn psi(surface: &SurfaceParams, dalpha: &Rational, v: &ChernVector) -> ChernVector {
    psi_map(surface, dalpha).apply(v)
}

pub fn psi_prime(surface: &SurfaceParams, dalpha: &Rational, v: &ChernVector) -> ChernVector {
    psi_prime_map(surface, dalpha).apply(v)
}

pub fn upsilon(surface: &SurfaceParams, v: &ChernVector) -> ChernVector {
    upsilon_map(surface).apply(v)
}

pub fn upsilon_prime(surface: &SurfaceParams, v: &ChernVector) -> ChernVector {
    upsilon_prime_map(surface).apply(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapName {
    Phi,
    PhiHat,
    Psi,
    PsiPrime,
    Upsilon,
    UpsilonPrime,
}

impl MapName {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "phi" => MapName::Phi,
            "phi-hat" => MapName::PhiHat,
            "psi" => MapName::Psi,
            "psi-prime" => MapName::PsiPrime,
            "upsilon" => MapName::Upsilon,
            "upsilon-prime" => MapName::UpsilonPrime,
            _ => return None,
        })
    }

    pub fn needs_dalpha(self) -> bool {
        matches!(self, MapName::Psi | MapName::PsiPrime)
    }

    pub fn matrix(self, surface: &SurfaceParams, dalpha: &Rational) -> LatticeMap {
        match self {
            MapName::Phi => phi_map(surface),
            MapName::PhiHat => phi_hat_map(surface),
            MapName::Psi => psi_map(surface, dalpha),
            MapName::PsiPrime => psi_prime_map(surface, dalpha),
            MapName::Upsilon => upsilon_map(surface),
            MapName::UpsilonPrime => upsilon_prime_map(surface),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub expected: ChernVector,
    pub actual: ChernVector,
    pub pass: bool,
}

/// Every named transform identity at lattice level. Requires `e = 2`.
pub fn named_object_checks(surface: &SurfaceParams, dalpha: &Rational) -> Result<Vec<NamedCheck>, crate::lattice::LatticeError> {
    surface.require_k3()?;
    let s = surface;
    let o = s.chern_named(&NamedClass::StructureSheaf)?;
    let o_minus_theta = s.line_bundle(&DivisorClass::ints(-1, 0));
    let o_theta = s.line_bundle(&DivisorClass::ints(1, 0));
    let ot = |m: i64| s.chern_named(&NamedClass::SectionSheaf(m));
    let l0 = s.chern_named(&NamedClass::L0(dalpha.clone()))?;
    let l1 = s.chern_named(&NamedClass::L1(dalpha.clone()))?;
    let o_alpha = s.line_bundle(&alpha(s, dalpha));

    let cases: Vec<(&str, ChernVector, ChernVector)> = vec![
        ("phi(O) = O_Theta(-2)[-1]", phi(s, &o), ot(-2)?.shift(-1)),
        ("phi(O(-Theta)) = O(Theta)[-1]", phi(s, &o_minus_theta), o_theta.shift(-1)),
        ("psi(O_Theta(-1)[1]) = L0[1]", psi(s, dalpha, &ot(-1)?.shift(1)), l0.shift(1)),
        ("psi(O[1]) = L1", psi(s, dalpha, &o.shift(1)), l1),
        ("psi'(O_Theta(-2)) = O(alpha)", psi_prime(s, dalpha, &ot(-2)?), o_alpha),
        ("upsilon(O_Theta(-1)) = O", upsilon(s, &ot(-1)?), o),
    ];
    Ok(cases
        .into_iter()
        .map(|(name, actual, expected)| NamedCheck {
            name: name.to_string(),
            pass: actual == expected,
            expected,
            actual,
        })
        .collect())
}
