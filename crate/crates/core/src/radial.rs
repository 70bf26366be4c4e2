//! The radial regime `3/2 < β ≤ β⁎`.
//!
//! The triple overlap disappears and a central hole
//! `H = {x < 1/β, y < 1/β, x + y > 1/(β(β-1))}` opens in Δ. Every hole of the
//! attractor is some `f_{q_i}^n(H)`, lined up along the three medians. The
//! images `f_{q_i} f_{q_j}^n(H)` with `i ≠ j` are covered by the piece
//! `f_{q_j}(S_β)`, so on them the first digit is forced to `q_j` even though
//! they sit inside the switch region `C̃_ij`.
//!
//! Membership in a hole is decided by walking inverse maps down a chain and
//! testing the open triangle `H`; chains longer than the search depth are
//! below resolution and treated as empty.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{GasketError, Result};
use crate::expansion::CoinTapes;
use crate::geometry::{
    f_apply, f_inverse, in_hull, snap_to_hull, Beta, Digit, Point, Regime, HULL_TOL,
};

/// Real roots of the three cubics that bound the regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Root of `x³ − x² − 1` (≈ 1.4656).
    pub beta_star: f64,
    /// Root of `x³ − 2x² + 2x − 2` (≈ 1.5437), upper end of the radial regime.
    pub beta_sup: f64,
    /// Root of `x³ − x² + x − 1/2` (≈ 0.6478), the contraction ratio matching `β⁎`.
    pub lambda_star: f64,
}

fn eval_cubic(c: [f64; 4], x: f64) -> f64 {
    ((c[0] * x + c[1]) * x + c[2]) * x + c[3]
}

/// Root of `c3 x³ + c2 x² + c1 x + c0` on `[lo, hi]` by bisection, polished
/// with Newton steps.
pub fn solve_cubic(c3: f64, c2: f64, c1: f64, c0: f64, lo: f64, hi: f64) -> Result<f64> {
    let c = [c3, c2, c1, c0];
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (fa, fb) = (eval_cubic(c, a), eval_cubic(c, b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(GasketError::NoSignChange { lo, hi });
    }
    let neg_at_a = fa < 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = eval_cubic(c, m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..4 {
        let d = (3.0 * c3 * x + 2.0 * c2) * x + c1;
        if d == 0.0 {
            break;
        }
        let next = x - eval_cubic(c, x) / d;
        if !(lo.min(hi)..=lo.max(hi)).contains(&next) {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// The three regime constants, computed once.
pub fn constants() -> Constants {
    static CONSTANTS: OnceLock<Constants> = OnceLock::new();
    *CONSTANTS.get_or_init(|| Constants {
        beta_star: solve_cubic(1.0, -1.0, 0.0, -1.0, 1.0, 2.0).expect("bracketed"),
        beta_sup: solve_cubic(1.0, -2.0, 2.0, -2.0, 1.0, 2.0).expect("bracketed"),
        lambda_star: solve_cubic(1.0, -1.0, 1.0, -0.5, 0.0, 1.0).expect("bracketed"),
    })
}

/// Vertices of the open central hole `H`: the right-angle corner
/// `(1/β, 1/β)` first.
pub fn hole_triangle(beta: &Beta) -> Result<[Point; 3]> {
    beta.require(Regime::Radial)?;
    let (i, s) = (beta.inv(), beta.split());
    Ok([Point::new(i, i), Point::new(i, s - i), Point::new(s - i, i)])
}

fn in_open_hole(beta: &Beta, z: Point) -> bool {
    z.x < beta.inv() && z.y < beta.inv() && z.x + z.y > beta.split()
}

/// Names the set `f_{head} f_{repeat}^n(H)`, or `f_{repeat}^n(H)` when there
/// is no head.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoleChain {
    head: Option<Digit>,
    repeat: Digit,
    n: usize,
}

impl HoleChain {
    pub fn new(head: Option<Digit>, repeat: Digit, n: usize) -> Result<Self> {
        if head == Some(repeat) {
            return Err(GasketError::InvalidParameter(
                "hole chain head must differ from the repeated map".into(),
            ));
        }
        Ok(HoleChain { head, repeat, n })
    }

    /// `f_{repeat}^n(H)`: an actual hole of the attractor.
    pub fn hole(repeat: Digit, n: usize) -> Self {
        HoleChain {
            head: None,
            repeat,
            n,
        }
    }

    pub fn head(&self) -> Option<Digit> {
        self.head
    }

    pub fn repeat(&self) -> Digit {
        self.repeat
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of maps applied to `H`.
    pub fn len(&self) -> usize {
        self.n + usize::from(self.head.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Image of a point of `H` under the chain.
    pub fn apply(&self, beta: &Beta, mut z: Point) -> Point {
        for _ in 0..self.n {
            z = f_apply(beta, self.repeat, z);
        }
        match self.head {
            Some(h) => f_apply(beta, h, z),
            None => z,
        }
    }

    /// The closed triangle bounding the chain's image of `H`.
    pub fn triangle(&self, beta: &Beta) -> Result<[Point; 3]> {
        Ok(hole_triangle(beta)?.map(|v| self.apply(beta, v)))
    }
}

/// Whether `z` lies in the open set named by `chain`.
pub fn hole_membership(beta: &Beta, z: Point, chain: HoleChain) -> Result<bool> {
    beta.require(Regime::Radial)?;
    let mut w = z;
    if let Some(h) = chain.head {
        w = f_inverse(beta, h, w);
    }
    for _ in 0..chain.n {
        w = f_inverse(beta, chain.repeat, w);
    }
    Ok(in_open_hole(beta, w))
}

/// Default chain search depth: deeper chains are smaller than `1e-9`.
pub fn default_depth(beta: &Beta) -> usize {
    let diam = std::f64::consts::SQRT_2 * beta.hull();
    ((diam / 1e-9).ln() / beta.value().ln()).ceil() as usize
}

/// Region of an attractor point in the radial regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RadialRegion {
    E0,
    E1,
    E2,
    C01,
    C12,
    C02,
    Hole,
}

impl RadialRegion {
    pub fn name(self) -> &'static str {
        match self {
            RadialRegion::E0 => "E0",
            RadialRegion::E1 => "E1",
            RadialRegion::E2 => "E2",
            RadialRegion::C01 => "C01",
            RadialRegion::C12 => "C12",
            RadialRegion::C02 => "C02",
            RadialRegion::Hole => "Hole",
        }
    }

    pub fn equality_digit(self) -> Option<Digit> {
        match self {
            RadialRegion::E0 => Some(Digit::Q0),
            RadialRegion::E1 => Some(Digit::Q1),
            RadialRegion::E2 => Some(Digit::Q2),
            _ => None,
        }
    }

    pub fn switch_pair(self) -> Option<(Digit, Digit)> {
        match self {
            RadialRegion::C01 => Some((Digit::Q0, Digit::Q1)),
            RadialRegion::C12 => Some((Digit::Q1, Digit::Q2)),
            RadialRegion::C02 => Some((Digit::Q0, Digit::Q2)),
            _ => None,
        }
    }

    fn equality(d: Digit) -> Self {
        match d {
            Digit::Q0 => RadialRegion::E0,
            Digit::Q1 => RadialRegion::E1,
            Digit::Q2 => RadialRegion::E2,
        }
    }
}

impl std::fmt::Display for RadialRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The coarse partition of Δ before hole corrections.
fn tilde_region(beta: &Beta, z: Point) -> RadialRegion {
    let lo_x = z.x < beta.inv();
    let lo_y = z.y < beta.inv();
    let lower = z.x + z.y <= beta.split();
    match (lo_x, lo_y, lower) {
        (true, true, true) => RadialRegion::E0,
        (true, true, false) => RadialRegion::Hole,
        (false, true, true) => RadialRegion::C01,
        (false, true, false) => RadialRegion::E1,
        (true, false, true) => RadialRegion::C02,
        (true, false, false) => RadialRegion::E2,
        (false, false, _) => RadialRegion::C12,
    }
}

/// Smallest `n ≤ depth` with `f_{head}⁻¹` then `f_{repeat}⁻ⁿ` landing in `H`.
/// The search stops once the inverse orbit leaves Δ.
fn chain_hit(
    beta: &Beta,
    z: Point,
    head: Option<Digit>,
    repeat: Digit,
    min_n: usize,
    depth: usize,
) -> Option<usize> {
    let mut w = match head {
        Some(h) => f_inverse(beta, h, z),
        None => z,
    };
    for n in 0..=depth {
        if !in_hull(beta, w, 1e-12) {
            return None;
        }
        if n >= min_n && in_open_hole(beta, w) {
            return Some(n);
        }
        w = f_inverse(beta, repeat, w);
    }
    None
}

/// Classify a point of Δ in the radial regime, searching hole chains up to
/// `depth` maps deep.
pub fn classify_radial(beta: &Beta, z: Point, depth: usize) -> Result<RadialRegion> {
    beta.require(Regime::Radial)?;
    let z = snap_to_hull(beta, z, HULL_TOL)?;
    let tilde = tilde_region(beta, z);
    if tilde == RadialRegion::Hole {
        return Ok(RadialRegion::Hole);
    }
    if Digit::ALL
        .iter()
        .any(|&i| chain_hit(beta, z, None, i, 1, depth).is_some())
    {
        return Ok(RadialRegion::Hole);
    }
    if let Some((i, j)) = tilde.switch_pair() {
        if chain_hit(beta, z, Some(i), j, 1, depth).is_some() {
            return Ok(RadialRegion::equality(j));
        }
        if chain_hit(beta, z, Some(j), i, 1, depth).is_some() {
            return Ok(RadialRegion::equality(i));
        }
    }
    Ok(tilde)
}

/// Attractor membership up to chain resolution: inside Δ and in no hole
/// chain of length at most `depth`.
pub fn in_attractor(beta: &Beta, z: Point, depth: usize) -> Result<bool> {
    match classify_radial(beta, z, depth) {
        Ok(r) => Ok(r != RadialRegion::Hole),
        Err(GasketError::OutsideHull { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// One step of the radial `K_β`; only the two-sided tape is read.
pub fn kbeta_radial_step(
    beta: &Beta,
    tapes: &mut CoinTapes,
    z: Point,
    depth: usize,
) -> Result<(Point, Digit)> {
    kbeta_radial_step_traced(beta, tapes, z, depth).map(|(p, d, _)| (p, d))
}

pub(crate) fn kbeta_radial_step_traced(
    beta: &Beta,
    tapes: &mut CoinTapes,
    z: Point,
    depth: usize,
) -> Result<(Point, Digit, RadialRegion)> {
    let region = classify_radial(beta, z, depth)?;
    let z = snap_to_hull(beta, z, HULL_TOL)?;
    let d = match (region.equality_digit(), region.switch_pair()) {
        (Some(d), _) => d,
        (None, Some((i, j))) => {
            if tapes.next_omega()? == 0 {
                i
            } else {
                j
            }
        }
        (None, None) => return Err(GasketError::PointInHole),
    };
    Ok((f_inverse(beta, d, z), d, region))
}

/// Vertex `p_i` of the equilateral triangle of the rotated IFS.
pub fn equilateral_vertex(i: Digit) -> Point {
    let a = 2.0 * std::f64::consts::PI * i.index() as f64 / 3.0;
    Point::new(2.0 / 3.0 * a.cos(), 2.0 / 3.0 * a.sin())
}

/// `g_i(z) = λ z + (1 − λ) p_i`.
pub fn g_apply(lambda: f64, i: Digit, z: Point) -> Point {
    z * lambda + equilateral_vertex(i) * (1.0 - lambda)
}

/// The affine map carrying the equilateral attractor onto the gasket:
/// `l(p_i) = q_i / (β − 1)`.
pub fn affine_l(beta: &Beta, z: Point) -> Point {
    let s = beta.hull();
    let r3 = 3.0_f64.sqrt() / 2.0;
    Point::new(
        s * (-0.5 * z.x + r3 * z.y + 1.0 / 3.0),
        s * (-0.5 * z.x - r3 * z.y + 1.0 / 3.0),
    )
}

/// Closed-triangle containment with slack `tol` on every edge.
pub fn triangle_contains(tri: &[Point; 3], p: Point, tol: f64) -> bool {
    let orient = signed_area(tri);
    (0..3).all(|e| {
        let (a, b) = (tri[e], tri[(e + 1) % 3]);
        let edge = b - a;
        let len = edge.x.hypot(edge.y);
        let cross = edge.x * (p.y - a.y) - edge.y * (p.x - a.x);
        cross * orient.signum() / len >= -tol
    })
}

/// Whether `p` lies in the triangle at distance more than `eps` from every
/// edge.
pub fn in_erosion(tri: &[Point; 3], p: Point, eps: f64) -> bool {
    let orient = signed_area(tri);
    (0..3).all(|e| {
        let (a, b) = (tri[e], tri[(e + 1) % 3]);
        let edge = b - a;
        let len = edge.x.hypot(edge.y);
        let cross = edge.x * (p.y - a.y) - edge.y * (p.x - a.x);
        cross * orient.signum() / len > eps
    })
}

fn signed_area(tri: &[Point; 3]) -> f64 {
    let (a, b, c) = (tri[0], tri[1], tri[2]);
    0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y))
}

/// Separating-axis test for two open triangles; touching within `tol`
/// counts as disjoint.
pub fn triangles_disjoint(a: &[Point; 3], b: &[Point; 3], tol: f64) -> bool {
    let axes = a
        .iter()
        .zip(a.iter().cycle().skip(1))
        .chain(b.iter().zip(b.iter().cycle().skip(1)));
    for (p, q) in axes {
        let edge = *q - *p;
        let len = edge.x.hypot(edge.y);
        if len == 0.0 {
            continue;
        }
        let n = Point::new(-edge.y / len, edge.x / len);
        let project = |t: &[Point; 3]| {
            t.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    let d = v.x * n.x + v.y * n.y;
                    (lo.min(d), hi.max(d))
                })
        };
        let (alo, ahi) = project(a);
        let (blo, bhi) = project(b);
        if ahi <= blo + tol || bhi <= alo + tol {
            return true;
        }
    }
    false
}
