//! Geometry of the three-map IFS `f_q(z) = (z + q) / β` on the plane.
//!
//! Everything here is a pure function of its inputs. The convex hull Δ is the
//! right triangle with vertices `(0,0)`, `(1/(β-1), 0)` and `(0, 1/(β-1))`.
//! For `1 < β ≤ 3/2` the attractor fills Δ and the overlap structure of the
//! three first-level pieces splits Δ into seven regions ([`Region`]); the
//! greedy and lazy steps pick the largest and smallest admissible digit on
//! each of them.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::error::{GasketError, Result};
use crate::radial;

/// Snap radius used by the step functions when an orbit point drifts out of
/// Δ by rounding.
pub const HULL_TOL: f64 = 1e-9;

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm1(self) -> f64 {
        self.x.abs() + self.y.abs()
    }

    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn check_finite(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(GasketError::NonFinite)
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The plane order: compare `x + y` first, then `y`.
pub fn plane_less(a: Point, b: Point) -> bool {
    let (sa, sb) = (a.x + a.y, b.x + b.y);
    sa < sb || (sa == sb && a.y < b.y)
}

/// One of the three digits `q0 = (0,0)`, `q1 = (1,0)`, `q2 = (0,1)`.
///
/// The derived order `Q0 < Q1 < Q2` coincides with [`plane_less`] on the
/// digit values, so `Vec<Digit>` compares lexicographically in the digit
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Digit {
    Q0,
    Q1,
    Q2,
}

impl Digit {
    pub const ALL: [Digit; 3] = [Digit::Q0, Digit::Q1, Digit::Q2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Digit> {
        Digit::ALL.get(i).copied()
    }

    pub fn value(self) -> Point {
        match self {
            Digit::Q0 => Point::new(0.0, 0.0),
            Digit::Q1 => Point::new(1.0, 0.0),
            Digit::Q2 => Point::new(0.0, 1.0),
        }
    }

    pub fn from_char(c: char) -> Result<Digit> {
        match c {
            '0' => Ok(Digit::Q0),
            '1' => Ok(Digit::Q1),
            '2' => Ok(Digit::Q2),
            other => Err(GasketError::InvalidDigit(other)),
        }
    }

    pub fn to_char(self) -> char {
        (b'0' + self as u8) as char
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.index())
    }
}

/// Parse a string over `{'0','1','2'}` into digits.
pub fn parse_digits(s: &str) -> Result<Vec<Digit>> {
    s.chars().map(Digit::from_char).collect()
}

pub fn format_digits(digits: &[Digit]) -> String {
    digits.iter().map(|d| d.to_char()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `1 < β ≤ 3/2`: Δ is the attractor, seven-region partition.
    Triangle,
    /// `3/2 < β ≤ β⁎`: radial holes, six regions plus holes.
    Radial,
}

/// A validated base `β` together with its regime and cached thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beta {
    value: f64,
    regime: Regime,
    inv: f64,
    split: f64,
    hull: f64,
}

impl Beta {
    /// Accepts `1 < β ≤ β⁎`; the regime follows from `β`.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 1.0 || value > radial::constants().beta_sup {
            return Err(GasketError::InvalidBeta(value));
        }
        let regime = if value <= 1.5 {
            Regime::Triangle
        } else {
            Regime::Radial
        };
        Ok(Beta {
            value,
            regime,
            inv: 1.0 / value,
            split: 1.0 / (value * (value - 1.0)),
            hull: 1.0 / (value - 1.0),
        })
    }

    /// Like [`Beta::new`] but insists on a particular regime.
    pub fn with_regime(value: f64, regime: Regime) -> Result<Self> {
        let beta = Beta::new(value)?;
        if beta.regime != regime {
            return Err(GasketError::WrongRegime { expected: regime });
        }
        Ok(beta)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `1/β`.
    pub fn inv(&self) -> f64 {
        self.inv
    }

    /// `1/(β(β-1))`, the threshold on `x + y` separating the lower pieces
    /// from the upper ones.
    pub fn split(&self) -> f64 {
        self.split
    }

    /// `1/(β-1)`, the leg length of Δ.
    pub fn hull(&self) -> f64 {
        self.hull
    }

    /// `β == 3/2`, where the triple overlap shrinks to `(2/3, 2/3)`.
    pub fn is_three_halves(&self) -> bool {
        self.value == 1.5
    }

    /// Fails with [`GasketError::WrongRegime`] unless `β` is in `regime`.
    pub fn require(&self, regime: Regime) -> Result<()> {
        if self.regime == regime {
            Ok(())
        } else {
            Err(GasketError::WrongRegime { expected: regime })
        }
    }
}

/// Region of the seven-piece partition of Δ for `1 < β ≤ 3/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    E0,
    E1,
    E2,
    C01,
    C12,
    C02,
    C012,
}

impl Region {
    pub const ALL: [Region; 7] = [
        Region::E0,
        Region::E1,
        Region::E2,
        Region::C01,
        Region::C12,
        Region::C02,
        Region::C012,
    ];

    /// `(i, j)` with `i < j` for the switch regions `C_ij`.
    pub fn switch_pair(self) -> Option<(Digit, Digit)> {
        match self {
            Region::C01 => Some((Digit::Q0, Digit::Q1)),
            Region::C12 => Some((Digit::Q1, Digit::Q2)),
            Region::C02 => Some((Digit::Q0, Digit::Q2)),
            _ => None,
        }
    }

    pub fn equality_digit(self) -> Option<Digit> {
        match self {
            Region::E0 => Some(Digit::Q0),
            Region::E1 => Some(Digit::Q1),
            Region::E2 => Some(Digit::Q2),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::E0 => "E0",
            Region::E1 => "E1",
            Region::E2 => "E2",
            Region::C01 => "C01",
            Region::C12 => "C12",
            Region::C02 => "C02",
            Region::C012 => "C012",
        }
    }

    fn greedy_digit(self) -> Digit {
        match self {
            Region::E0 => Digit::Q0,
            Region::E1 | Region::C01 => Digit::Q1,
            Region::E2 | Region::C12 | Region::C02 | Region::C012 => Digit::Q2,
        }
    }

    fn lazy_digit(self) -> Digit {
        match self {
            Region::E0 | Region::C01 | Region::C02 | Region::C012 => Digit::Q0,
            Region::E1 | Region::C12 => Digit::Q1,
            Region::E2 => Digit::Q2,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `f_d(z) = (z + d) / β`.
pub fn f_apply(beta: &Beta, d: Digit, z: Point) -> Point {
    (z + d.value()) * beta.inv
}

/// `f_d⁻¹(z) = βz − d`.
pub fn f_inverse(beta: &Beta, d: Digit, z: Point) -> Point {
    z * beta.value - d.value()
}

/// Closed-hull membership with slack `tol`.
pub fn in_hull(beta: &Beta, z: Point, tol: f64) -> bool {
    z.x >= -tol && z.y >= -tol && z.x + z.y <= beta.hull + tol
}

/// Check hull membership within `tol` and pull the point onto Δ if it sits
/// just outside.
pub fn snap_to_hull(beta: &Beta, z: Point, tol: f64) -> Result<Point> {
    let z = z.check_finite()?;
    if !in_hull(beta, z, tol) {
        return Err(GasketError::OutsideHull { x: z.x, y: z.y });
    }
    let (mut x, mut y) = (z.x.max(0.0), z.y.max(0.0));
    let excess = x + y - beta.hull;
    if excess > 0.0 {
        x -= excess / 2.0;
        y -= excess / 2.0;
        if x < 0.0 {
            x = 0.0;
            y = beta.hull;
        } else if y < 0.0 {
            y = 0.0;
            x = beta.hull;
        }
    }
    Ok(Point::new(x, y))
}

fn region_of(beta: &Beta, z: Point) -> Region {
    let lo_x = z.x < beta.inv;
    let lo_y = z.y < beta.inv;
    let lower = z.x + z.y <= beta.split;
    match (lo_x, lo_y) {
        (true, true) => Region::E0,
        (false, true) => {
            if lower {
                Region::C01
            } else {
                Region::E1
            }
        }
        (true, false) => {
            if lower {
                Region::C02
            } else {
                Region::E2
            }
        }
        (false, false) => {
            if beta.is_three_halves() {
                let c = 2.0 / 3.0;
                if (z.x - c).abs() <= 1e-12 && (z.y - c).abs() <= 1e-12 {
                    Region::C012
                } else {
                    Region::C12
                }
            } else if lower {
                Region::C012
            } else {
                Region::C12
            }
        }
    }
}

/// Classify a point of Δ into the seven-piece partition.
///
/// `tol` only widens the outer boundary of Δ; the interior boundaries follow
/// the strict/non-strict inequalities of the partition exactly.
pub fn classify_region(beta: &Beta, z: Point, tol: f64) -> Result<Region> {
    beta.require(Regime::Triangle)?;
    let z = snap_to_hull(beta, z, tol)?;
    Ok(region_of(beta, z))
}

fn step_with(beta: &Beta, z: Point, pick: fn(Region) -> Digit) -> Result<(Point, Digit)> {
    beta.require(Regime::Triangle)?;
    let z = snap_to_hull(beta, z, HULL_TOL)?;
    let d = pick(region_of(beta, z));
    Ok((f_inverse(beta, d, z), d))
}

/// One step of the greedy map `T_β`: the largest admissible digit.
pub fn greedy_step(beta: &Beta, z: Point) -> Result<(Point, Digit)> {
    step_with(beta, z, Region::greedy_digit)
}

/// One step of the lazy map `L_β`: the smallest admissible digit.
pub fn lazy_step(beta: &Beta, z: Point) -> Result<(Point, Digit)> {
    step_with(beta, z, Region::lazy_digit)
}

/// The involution `ψ(x, y) = (x, 1/(β-1) − x − y)` conjugating the greedy
/// map to the lazy one.
pub fn psi(beta: &Beta, z: Point) -> Point {
    Point::new(z.x, beta.hull - z.x - z.y)
}

/// A uniform random point of Δ.
pub fn uniform_in_hull<R: rand::Rng + ?Sized>(beta: &Beta, rng: &mut R) -> Point {
    let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    Point::new(u * beta.hull, v * beta.hull)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(v: f64) -> Beta {
        Beta::new(v).unwrap()
    }

    fn close(a: Point, b: Point, tol: f64) -> bool {
        (a - b).norm_inf() < tol
    }

    fn near_boundary(beta: &Beta, z: Point, band: f64) -> bool {
        let s = z.x + z.y;
        (z.x - beta.inv()).abs() < band
            || (z.y - beta.inv()).abs() < band
            || (s - beta.split()).abs() < band
    }

    #[test]
    fn plane_order_examples() {
        assert!(plane_less(Point::new(0.0, 0.0), Point::new(1.0, 0.0)));
        assert!(plane_less(Point::new(1.0, 0.0), Point::new(0.0, 1.0)));
        assert!(!plane_less(Point::new(0.3, 0.3), Point::new(0.3, 0.3)));
        for i in Digit::ALL {
            for j in Digit::ALL {
                assert_eq!(plane_less(i.value(), j.value()), i < j);
            }
        }
    }

    #[test]
    fn ifs_maps() {
        assert_eq!(f_apply(&b(1.4), Digit::Q0, Point::ORIGIN), Point::ORIGIN);
        let half = Beta {
            value: 2.0,
            regime: Regime::Radial,
            inv: 0.5,
            split: 0.5,
            hull: 1.0,
        };
        assert_eq!(
            f_apply(&half, Digit::Q1, Point::ORIGIN),
            Point::new(0.5, 0.0)
        );
        let z = f_apply(&b(1.5), Digit::Q2, Point::new(2.0 / 3.0, 2.0 / 3.0));
        assert!(close(z, Point::new(4.0 / 9.0, 10.0 / 9.0), 1e-12));
        assert_eq!(f_inverse(&b(1.4), Digit::Q0, Point::ORIGIN), Point::ORIGIN);
        let z = f_inverse(&b(1.5), Digit::Q1, Point::new(2.0 / 3.0, 0.0));
        assert!(close(z, Point::ORIGIN, 1e-12));
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let beta = b(1.37);
        for _ in 0..10_000 {
            let z = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            for d in Digit::ALL {
                let back = f_inverse(&beta, d, f_apply(&beta, d, z));
                assert!(close(back, z, 1e-12));
            }
        }
    }

    #[test]
    fn beta_validation() {
        assert!(Beta::new(1.0).is_err());
        assert!(Beta::new(f64::NAN).is_err());
        assert!(Beta::new(1.6).is_err());
        assert_eq!(b(1.5).regime(), Regime::Triangle);
        assert_eq!(b(1.52).regime(), Regime::Radial);
        assert!(Beta::with_regime(1.4, Regime::Radial).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = 2.0 / 3.0;
        assert_eq!(
            classify_region(&b(1.5), Point::new(c, c), 0.0).unwrap(),
            Region::C012
        );
        assert_eq!(
            classify_region(&b(1.4), Point::ORIGIN, 0.0).unwrap(),
            Region::E0
        );
        assert_eq!(
            classify_region(&b(1.4), Point::new(1.0 / 1.4, 0.0), 0.0).unwrap(),
            Region::C01
        );
        // one point off the degenerate triple overlap
        assert_eq!(
            classify_region(&b(1.5), Point::new(c + 1e-9, c), 0.0).unwrap(),
            Region::C12
        );
    }

    #[test]
    fn classify_errors() {
        let beta = b(1.4);
        assert!(matches!(
            classify_region(&beta, Point::new(-0.1, 0.0), 1e-9),
            Err(GasketError::OutsideHull { .. })
        ));
        assert!(matches!(
            classify_region(&beta, Point::new(2.0, 1.0), 1e-9),
            Err(GasketError::OutsideHull { .. })
        ));
        assert_eq!(
            classify_region(&beta, Point::new(f64::NAN, 0.0), 1e-9),
            Err(GasketError::NonFinite)
        );
        assert!(classify_region(&beta, Point::new(-1e-12, 0.0), 1e-9).is_ok());
        assert!(matches!(
            classify_region(&b(1.52), Point::ORIGIN, 0.0),
            Err(GasketError::WrongRegime { .. })
        ));
    }

    #[test]
    fn step_examples() {
        let beta = b(1.4);
        assert_eq!(
            greedy_step(&beta, Point::ORIGIN).unwrap(),
            (Point::ORIGIN, Digit::Q0)
        );
        let v = Point::new(1.0 / 0.4, 0.0);
        let (z, d) = greedy_step(&beta, v).unwrap();
        assert_eq!(d, Digit::Q1);
        assert!(close(z, v, 1e-9));

        let c = 2.0 / 3.0;
        let (z, d) = greedy_step(&b(1.5), Point::new(c, c)).unwrap();
        assert_eq!(d, Digit::Q2);
        assert!(close(z, Point::new(1.0, 0.0), 1e-12));
        let (z, d) = lazy_step(&b(1.5), Point::new(c, c)).unwrap();
        assert_eq!(d, Digit::Q0);
        assert!(close(z, Point::new(1.0, 1.0), 1e-12));
        assert_eq!(
            lazy_step(&beta, Point::ORIGIN).unwrap(),
            (Point::ORIGIN, Digit::Q0)
        );
    }

    #[test]
    fn greedy_and_lazy_agree_on_equality_regions() {
        let beta = b(1.4);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut seen = 0;
        while seen < 2000 {
            let z = uniform_in_hull(&beta, &mut rng);
            let r = classify_region(&beta, z, 0.0).unwrap();
            if r.equality_digit().is_some() {
                assert_eq!(greedy_step(&beta, z).unwrap(), lazy_step(&beta, z).unwrap());
                seen += 1;
            }
        }
    }

    #[test]
    fn psi_examples() {
        assert!(close(
            psi(&b(1.4), Point::ORIGIN),
            Point::new(0.0, 2.5),
            1e-12
        ));
        let c = 2.0 / 3.0;
        assert!(close(
            psi(&b(1.5), Point::new(c, c)),
            Point::new(c, c),
            1e-12
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let beta = b(1.25);
        for _ in 0..10_000 {
            let z = uniform_in_hull(&beta, &mut rng);
            assert!(close(psi(&beta, psi(&beta, z)), z, 1e-12));
        }
    }

    #[test]
    fn psi_maps_regions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for &v in &[1.1, 1.3, 1.45] {
            let beta = b(v);
            for _ in 0..20_000 {
                let z = uniform_in_hull(&beta, &mut rng);
                if near_boundary(&beta, z, 1e-7) || near_boundary(&beta, psi(&beta, z), 1e-7) {
                    continue;
                }
                let from = classify_region(&beta, z, 0.0).unwrap();
                let to = classify_region(&beta, psi(&beta, z), 1e-12).unwrap();
                let expected = match from {
                    Region::E0 => Region::E2,
                    Region::E2 => Region::E0,
                    Region::E1 => Region::E1,
                    Region::C01 => Region::C12,
                    Region::C12 => Region::C01,
                    Region::C02 => Region::C02,
                    Region::C012 => Region::C012,
                };
                assert_eq!(to, expected, "z = {z}");
            }
        }
    }

    #[test]
    fn psi_conjugates_greedy_to_lazy() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let beta = b(1.4);
        for _ in 0..20_000 {
            let z = uniform_in_hull(&beta, &mut rng);
            if near_boundary(&beta, z, 1e-7) {
                continue;
            }
            let lhs = psi(&beta, greedy_step(&beta, z).unwrap().0);
            let rhs = lazy_step(&beta, psi(&beta, z)).unwrap().0;
            assert!(close(lhs, rhs, 1e-9));
        }
    }

    #[test]
    fn partition_is_exhaustive_and_disjoint() {
        // Evaluate every region's defining inequalities independently.
        fn memberships(beta: &Beta, z: Point) -> Vec<Region> {
            let (x, y, s) = (z.x, z.y, z.x + z.y);
            let (i, bb, h) = (beta.inv(), beta.split(), beta.hull());
            let mut out = Vec::new();
            if (0.0..i).contains(&x) && (0.0..i).contains(&y) {
                out.push(Region::E0);
            }
            if 0.0 <= y && y < i && bb < s && s <= h {
                out.push(Region::E1);
            }
            if 0.0 <= x && x < i && bb < s && s <= h {
                out.push(Region::E2);
            }
            if x >= i && 0.0 <= y && y < i && s <= bb {
                out.push(Region::C01);
            }
            if x >= i && y >= i && bb < s && s <= h {
                out.push(Region::C12);
            }
            if 0.0 <= x && x < i && y >= i && s <= bb {
                out.push(Region::C02);
            }
            if x >= i && y >= i && s <= bb {
                out.push(Region::C012);
            }
            out
        }
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for &v in &[1.1, 1.4, 1.49] {
            let beta = b(v);
            for _ in 0..200_000 {
                let z = uniform_in_hull(&beta, &mut rng);
                let m = memberships(&beta, z);
                assert_eq!(m.len(), 1, "z = {z} in {m:?}");
                assert_eq!(classify_region(&beta, z, 0.0).unwrap(), m[0]);
            }
        }
    }

    #[test]
    fn first_level_pieces_cover_their_regions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let beta = b(1.35);
        for _ in 0..50_000 {
            let z = uniform_in_hull(&beta, &mut rng);
            let r = classify_region(&beta, z, 0.0).unwrap();
            let pieces: &[Digit] = match r {
                Region::E0 => &[Digit::Q0],
                Region::E1 => &[Digit::Q1],
                Region::E2 => &[Digit::Q2],
                Region::C01 => &[Digit::Q0, Digit::Q1],
                Region::C12 => &[Digit::Q1, Digit::Q2],
                Region::C02 => &[Digit::Q0, Digit::Q2],
                Region::C012 => &Digit::ALL,
            };
            for &d in pieces {
                assert!(in_hull(&beta, f_inverse(&beta, d, z), 1e-12), "{r} {d} {z}");
            }
        }
    }

    #[test]
    fn digit_parsing() {
        assert_eq!(parse_digits("012").unwrap(), Digit::ALL.to_vec());
        assert_eq!(parse_digits("03"), Err(GasketError::InvalidDigit('3')));
        assert_eq!(format_digits(&Digit::ALL), "012");
    }
}
