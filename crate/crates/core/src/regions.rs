//! Classification of the `(D, V)` quadrant for a line bundle `L` with
//! `c1(L) = alpha = Theta + (D_alpha + e) f`.
//!
//! Each predicate is an exact sign test on a polynomial in `(D, V)`:
//!
//! | predicate       | polynomial                                   | strict |
//! |-----------------|----------------------------------------------|--------|
//! | positivity      | `D + D_alpha + e`                            | yes    |
//! | volume_ok       | `4V(D + e/2) - (D + D_alpha + e)^2`          | no     |
//! | twisted_ample   | `D(V - e/2) + D_alpha(D_alpha + e)`          | yes    |

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::SurfaceParams;
use crate::rational::{format_rational, int, is_integer, rat, sign, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("point ({0}, {1}) is outside the open quadrant D > 0, V > 0")]
    OutsideQuadrant(String, String),
    #[error("raster window is empty")]
    WindowEmpty,
    #[error("raster grid {0}x{1} exceeds 4096 in some direction or is zero")]
    GridSize(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionQuery {
    pub surface: SurfaceParams,
    pub dalpha: Rational,
    pub d: Rational,
    pub v: Rational,
}

impl RegionQuery {
    /// Interior query: requires `D > 0` and `V > 0`.
    pub fn new(surface: SurfaceParams, dalpha: Rational, d: Rational, v: Rational) -> Result<Self, RegionError> {
        if !d.is_positive() || !v.is_positive() {
            return Err(RegionError::OutsideQuadrant(d.to_string(), v.to_string()));
        }
        Ok(Self::boundary(surface, dalpha, d, v))
    }

    /// Query allowed on the closed quadrant, including the axes.
    pub fn boundary(surface: SurfaceParams, dalpha: Rational, d: Rational, v: Rational) -> Self {
        RegionQuery { surface, dalpha, d, v }
    }

    pub fn at(&self, d: Rational, v: Rational) -> Self {
        RegionQuery { d, v, ..self.clone() }
    }

    fn e(&self) -> &Rational {
        self.surface.e()
    }

    /// `omega . alpha / R = D + D_alpha + e`.
    pub fn positivity_poly(&self) -> Rational {
        &self.d + &self.dalpha + self.e()
    }

    pub fn volume_poly(&self) -> Rational {
        let g = self.positivity_poly();
        int(4) * &self.v * (&self.d + self.surface.half_e()) - &g * &g
    }

    pub fn twisted_poly(&self) -> Rational {
        &self.d * (&self.v - self.surface.half_e()) + &self.dalpha * (&self.dalpha + self.e())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Inside,
    Boundary,
    Outside,
}

impl TriState {
    fn of(x: &Rational) -> Self {
        match sign(x) {
            1 => TriState::Inside,
            0 => TriState::Boundary,
            _ => TriState::Outside,
        }
    }
}

pub fn positivity(q: &RegionQuery) -> bool {
    q.positivity_poly().is_positive()
}

pub fn volume_ok(q: &RegionQuery) -> bool {
    !q.volume_poly().is_negative()
}

/// The polynomial test is only meaningful under `omega . alpha > 0`, which is checked too.
pub fn twisted_ample(q: &RegionQuery) -> bool {
    positivity(q) && q.twisted_poly().is_positive()
}

pub fn thm1_stable(q: &RegionQuery) -> bool {
    positivity(q) && volume_ok(q) && twisted_ample(q)
}

/// For `e = 2`, `D_alpha in {-1, -2}`: stable directly, or after the
/// transform exchanging `D` and `V` (which sends `D_alpha` to `-D_alpha - 3e/2`).
pub fn transform_case_stable(q: &RegionQuery) -> bool {
    let two = int(2);
    if q.e() != &two || !(q.dalpha == int(-1) || q.dalpha == int(-2)) {
        return false;
    }
    if thm1_stable(q) {
        return true;
    }
    let swapped = RegionQuery {
        surface: q.surface.clone(),
        dalpha: -&q.dalpha - rat(3, 2) * q.e(),
        d: q.v.clone(),
        v: q.d.clone(),
    };
    thm1_stable(&swapped)
}

/// Which theorem-level result covers the whole positivity region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `e = 2`, `D_alpha >= 0` integral.
    NonNegativeAlpha,
    /// `e = 2`, `D_alpha in {-1, -2}`.
    SmallNegativeAlpha,
    /// `D_alpha < -e` integral.
    NegativeIntegralAlpha,
}

pub fn provenance(surface: &SurfaceParams, dalpha: &Rational) -> Option<Provenance> {
    if !is_integer(dalpha) {
        return None;
    }
    let k3 = surface.e() == &int(2);
    if k3 && !dalpha.is_negative() {
        Some(Provenance::NonNegativeAlpha)
    } else if k3 && (dalpha == &int(-1) || dalpha == &int(-2)) {
        Some(Provenance::SmallNegativeAlpha)
    } else if dalpha < &-surface.e() {
        Some(Provenance::NegativeIntegralAlpha)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryStates {
    pub positive: TriState,
    pub volume: TriState,
    pub twisted: TriState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionLabel {
    pub positive: bool,
    pub volume_ok: bool,
    pub twisted_ample: bool,
    pub thm1_stable: bool,
    pub transform_case_stable: bool,
    pub theorem_region_stable: bool,
    pub provenance: Option<Provenance>,
    pub states: BoundaryStates,
}

pub fn classify(q: &RegionQuery) -> RegionLabel {
    let prov = provenance(&q.surface, &q.dalpha);
    let positive = positivity(q);
    RegionLabel {
        positive,
        volume_ok: volume_ok(q),
        twisted_ample: twisted_ample(q),
        thm1_stable: thm1_stable(q),
        transform_case_stable: transform_case_stable(q),
        theorem_region_stable: positive && prov.is_some(),
        provenance: prov,
        states: BoundaryStates {
            positive: TriState::of(&q.positivity_poly()),
            volume: TriState::of(&q.volume_poly()),
            twisted: TriState::of(&q.twisted_poly()),
        },
    }
}

/// Geometry of the volume boundary near the `D`-axis when `D_alpha < -e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tangency {
    pub e: Rational,
    pub dalpha: Rational,
    pub point: (Rational, Rational),
    /// Twisted-ampleness polynomial evaluated at `point`.
    pub g_at_point: Rational,
    pub neighborhood_ok: bool,
}

impl Tangency {
    /// `V(D) = (D + D_alpha + e)^2 / (4(D + e/2))`.
    pub fn boundary_value_at(&self, d: &Rational) -> Rational {
        let u = d + &self.dalpha + &self.e;
        &u * &u / (int(4) * (d + &self.e / int(2)))
    }

    /// `dV/dD = (D + D_alpha + e)(D - D_alpha) / (4(D + e/2)^2)`.
    pub fn derivative_at(&self, d: &Rational) -> Rational {
        let w = d + &self.e / int(2);
        (d + &self.dalpha + &self.e) * (d - &self.dalpha) / (int(4) * &w * &w)
    }
}

pub fn tangency_data(surface: &SurfaceParams, dalpha: &Rational) -> Result<Tangency, RegionError> {
    let e = surface.e().clone();
    if !is_integer(dalpha) || dalpha >= &-&e {
        return Err(RegionError::HypothesisViolated(format!("need integral D_alpha < -e, got {dalpha}")));
    }
    let point = (-(dalpha + &e), Rational::zero());
    let g = RegionQuery::boundary(surface.clone(), dalpha.clone(), point.0.clone(), point.1.clone()).twisted_poly();
    Ok(Tangency { neighborhood_ok: g.is_positive(), e, dalpha: dalpha.clone(), point, g_at_point: g })
}

/// A point with `omega . alpha > 0` that is not twisted ample. Fixes `V = e/4`
/// and doubles `D` from 1 until the twisted-ampleness polynomial is non-positive.
pub fn witness_stable_not_twisted_ample(surface: &SurfaceParams, dalpha: &Rational) -> Result<(Rational, Rational), RegionError> {
    if dalpha.is_negative() {
        return Err(RegionError::HypothesisViolated(format!("need D_alpha >= 0, got {dalpha}")));
    }
    let v = surface.e() / int(4);
    let mut d = int(1);
    loop {
        let q = RegionQuery::boundary(surface.clone(), dalpha.clone(), d.clone(), v.clone());
        if positivity(&q) && !twisted_ample(&q) {
            return Ok((d, v));
        }
        d *= int(2);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub d_min: Rational,
    pub v_min: Rational,
    pub d_max: Rational,
    pub v_max: Rational,
}

impl Window {
    pub fn new(d_min: Rational, v_min: Rational, d_max: Rational, v_max: Rational) -> Result<Self, RegionError> {
        if d_min >= d_max || v_min >= v_max {
            return Err(RegionError::WindowEmpty);
        }
        Ok(Window { d_min, v_min, d_max, v_max })
    }
}

/// Grid nodes including both endpoints; a single node sits at the midpoint.
fn nodes(lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    if n == 1 {
        return vec![(lo + hi) / int(2)];
    }
    let step = (hi - lo) / int(n as i64 - 1);
    (0..n).map(|i| lo + &step * int(i as i64)).collect()
}

#[derive(Debug, Clone)]
pub struct RasterCell {
    pub d: Rational,
    pub v: Rational,
    pub label: RegionLabel,
}

/// Row-major grid; row 0 has the smallest `V`.
#[derive(Debug, Clone)]
pub struct Raster {
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<RasterCell>,
}

pub fn raster(base: &RegionQuery, window: &Window, nx: usize, ny: usize) -> Result<Raster, RegionError> {
    if nx == 0 || ny == 0 || nx > 4096 || ny > 4096 {
        return Err(RegionError::GridSize(nx, ny));
    }
    let ds = nodes(&window.d_min, &window.d_max, nx);
    let vs = nodes(&window.v_min, &window.v_max, ny);
    let cells = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let (d, v) = (ds[k % nx].clone(), vs[k / nx].clone());
            let label = classify(&base.at(d.clone(), v.clone()));
            RasterCell { d, v, label }
        })
        .collect();
    Ok(Raster { nx, ny, cells })
}

/// Fill colors, first matching rule wins:
///
/// | rule                       | color     |
/// |----------------------------|-----------|
/// | not positive               | `#bdbdbd` |
/// | thm1_stable                | `#1b5e20` |
/// | transform_case_stable      | `#1565c0` |
/// | theorem_region_stable      | `#f9a825` |
/// | otherwise                  | `#ffffff` |
pub const PALETTE: [(&str, &str); 5] = [
    ("outside", "#bdbdbd"),
    ("thm1", "#1b5e20"),
    ("case", "#1565c0"),
    ("theorem", "#f9a825"),
    ("positive", "#ffffff"),
];

pub fn cell_color(label: &RegionLabel) -> &'static str {
    let idx = if !label.positive {
        0
    } else if label.thm1_stable {
        1
    } else if label.transform_case_stable {
        2
    } else if label.theorem_region_stable {
        3
    } else {
        4
    };
    PALETTE[idx].1
}

impl Raster {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("D,V,positive,volume_ok,twisted_ample,thm1,case,theorem\n");
        for c in &self.cells {
            let l = &c.label;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                format_rational(&c.d),
                format_rational(&c.v),
                l.positive,
                l.volume_ok,
                l.twisted_ample,
                l.thm1_stable,
                l.transform_case_stable,
                l.theorem_region_stable
            );
        }
        out
    }

    /// One unit square per cell, `V` increasing upwards; horizontal runs of equal
    /// color are merged into one rectangle.
    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {nx} {ny}" width="{nx}" height="{ny}" shape-rendering="crispEdges">"#,
            nx = self.nx,
            ny = self.ny
        );
        for row in 0..self.ny {
            let y = self.ny - 1 - row;
            let mut col = 0;
            while col < self.nx {
                let color = cell_color(&self.cells[row * self.nx + col].label);
                let start = col;
                while col < self.nx && cell_color(&self.cells[row * self.nx + col].label) == color {
                    col += 1;
                }
                let _ = writeln!(
                    out,
                    r#"<rect x="{start}" y="{y}" width="{}" height="1" fill="{color}"/>"#,
                    col - start
                );
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(dalpha: i64, d: Rational, v: Rational) -> RegionQuery {
        RegionQuery::new(SurfaceParams::k3(), int(dalpha), d, v).unwrap()
    }

    #[test]
    fn fixtures() {
        assert!(twisted_ample(&q(-1, int(2), int(2))));
        assert!(!twisted_ample(&q(-2, int(5), int(1))));
        let b = q(-1, int(3), int(1));
        assert!(volume_ok(&b));
        assert_eq!(classify(&b).states.volume, TriState::Boundary);

        let c = classify(&q(-1, int(5), rat(9, 8)));
        assert!(!c.volume_ok && c.transform_case_stable);

        let w = classify(&q(0, int(1), rat(1, 2)));
        assert!(!w.twisted_ample && w.theorem_region_stable);
        assert_eq!(w.provenance, Some(Provenance::NonNegativeAlpha));

        assert!(!positivity(&q(-3, rat(1, 2), int(1))));
    }

    #[test]
    fn tangency() {
        let t = tangency_data(&SurfaceParams::k3(), &int(-3)).unwrap();
        assert_eq!(t.point, (int(1), int(0)));
        assert_eq!(t.g_at_point, int(2));
        assert!(t.neighborhood_ok);
        assert_eq!(t.derivative_at(&int(1)), int(0));
        assert_eq!(t.boundary_value_at(&int(2)), rat(1, 12));
        assert!(tangency_data(&SurfaceParams::k3(), &int(-2)).is_err());
    }

    #[test]
    fn witnesses() {
        let k3 = SurfaceParams::k3();
        assert_eq!(witness_stable_not_twisted_ample(&k3, &int(0)).unwrap(), (int(1), rat(1, 2)));
        let (d, v) = witness_stable_not_twisted_ample(&k3, &int(1)).unwrap();
        let w = q(1, d, v);
        assert!(positivity(&w) && !twisted_ample(&w));
    }

    #[test]
    fn small_raster() {
        let base = q(-1, int(1), int(1));
        let w = Window::new(int(1), int(1), int(2), int(2)).unwrap();
        let r = raster(&base, &w, 2, 2).unwrap();
        assert_eq!(r.cells.len(), 4);
        let corner = &r.cells[3];
        assert_eq!((corner.d.clone(), corner.v.clone()), (int(2), int(2)));
        assert!(corner.label.twisted_ample);
        assert_eq!(r.to_svg(), raster(&base, &w, 2, 2).unwrap().to_svg());
        assert_eq!(Window::new(int(1), int(1), int(1), int(2)), Err(RegionError::WindowEmpty));
    }
}
