//! Coin-driven expansions.
//!
//! The random map `K_β` walks a point through Δ, emitting one digit per
//! step. On an equality region the digit is forced; on a switch region
//! `C_ij` it reads the next symbol of the two-sided tape ω (0 picks `q_i`,
//! 1 picks `q_j`), and on the triple overlap `C_012` the next symbol `i` of
//! the three-sided tape υ picks `q_i`. In the radial regime only ω is used.
//!
//! [`coins_from_digits`] runs the construction backwards: given a point and
//! one of its expansions it recovers the unique coin prefixes that make
//! `K_β` produce that expansion.

use serde::Serialize;

use crate::error::{GasketError, Result, Tape};
use crate::geometry::{
    f_inverse, greedy_step, lazy_step, snap_to_hull, Beta, Digit, Point, Regime, Region, HULL_TOL,
};
use crate::radial::{self, RadialRegion};

/// Finite coin tapes with read cursors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoinTapes {
    omega: Vec<u8>,
    upsilon: Vec<u8>,
    k: usize,
    l: usize,
}

impl CoinTapes {
    pub fn new(omega: Vec<u8>, upsilon: Vec<u8>) -> Result<Self> {
        if let Some(&s) = omega.iter().find(|&&s| s > 1) {
            return Err(GasketError::InvalidSymbol {
                tape: Tape::Omega,
                symbol: char::from(b'0'.saturating_add(s)),
            });
        }
        if let Some(&s) = upsilon.iter().find(|&&s| s > 2) {
            return Err(GasketError::InvalidSymbol {
                tape: Tape::Upsilon,
                symbol: char::from(b'0'.saturating_add(s)),
            });
        }
        Ok(CoinTapes {
            omega,
            upsilon,
            k: 0,
            l: 0,
        })
    }

    /// Tapes written as strings over `{0,1}` and `{0,1,2}`.
    pub fn parse(omega: &str, upsilon: &str) -> Result<Self> {
        let read = |s: &str, tape: Tape, max: u8| -> Result<Vec<u8>> {
            s.chars()
                .map(|c| match c.to_digit(10) {
                    Some(v) if v as u8 <= max => Ok(v as u8),
                    _ => Err(GasketError::InvalidSymbol { tape, symbol: c }),
                })
                .collect()
        };
        CoinTapes::new(
            read(omega, Tape::Omega, 1)?,
            read(upsilon, Tape::Upsilon, 2)?,
        )
    }

    pub fn constant(omega_symbol: u8, upsilon_symbol: u8, len: usize) -> Result<Self> {
        CoinTapes::new(vec![omega_symbol; len], vec![upsilon_symbol; len])
    }

    pub fn omega(&self) -> &[u8] {
        &self.omega
    }

    pub fn upsilon(&self) -> &[u8] {
        &self.upsilon
    }

    /// Number of ω symbols consumed so far.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of υ symbols consumed so far.
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn consumed_omega(&self) -> &[u8] {
        &self.omega[..self.k]
    }

    pub fn consumed_upsilon(&self) -> &[u8] {
        &self.upsilon[..self.l]
    }

    pub fn rewind(&mut self) {
        self.k = 0;
        self.l = 0;
    }

    pub(crate) fn next_omega(&mut self) -> Result<u8> {
        let s = *self
            .omega
            .get(self.k)
            .ok_or(GasketError::TapeExhausted(Tape::Omega))?;
        self.k += 1;
        Ok(s)
    }

    fn next_upsilon(&mut self) -> Result<u8> {
        let s = *self
            .upsilon
            .get(self.l)
            .ok_or(GasketError::TapeExhausted(Tape::Upsilon))?;
        self.l += 1;
        Ok(s)
    }
}

/// Region label shared by both regimes, as reported in traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepRegion {
    Triangle(Region),
    Radial(RadialRegion),
}

impl StepRegion {
    pub fn name(self) -> &'static str {
        match self {
            StepRegion::Triangle(r) => r.name(),
            StepRegion::Radial(r) => r.name(),
        }
    }

    fn is_switch(self) -> bool {
        match self {
            StepRegion::Triangle(r) => r.switch_pair().is_some(),
            StepRegion::Radial(r) => r.switch_pair().is_some(),
        }
    }
}

/// Digit choice from the branch table given a region and the coins.
fn choose_digit(region: Region, tapes: &mut CoinTapes) -> Result<Digit> {
    if let Some(d) = region.equality_digit() {
        return Ok(d);
    }
    if let Some((i, j)) = region.switch_pair() {
        return Ok(if tapes.next_omega()? == 0 { i } else { j });
    }
    let u = tapes.next_upsilon()?;
    Ok(Digit::from_index(u as usize).expect("validated tape symbol"))
}

/// One step of `K_β` in the triangle regime.
///
/// On error the tapes are left untouched.
pub fn kbeta_step(beta: &Beta, tapes: &mut CoinTapes, z: Point) -> Result<(Point, Digit)> {
    kbeta_step_traced(beta, tapes, z).map(|(p, d, _)| (p, d))
}

fn kbeta_step_traced(
    beta: &Beta,
    tapes: &mut CoinTapes,
    z: Point,
) -> Result<(Point, Digit, Region)> {
    beta.require(Regime::Triangle)?;
    let z = snap_to_hull(beta, z, HULL_TOL)?;
    let region = crate::geometry::classify_region(beta, z, 0.0)?;
    let d = choose_digit(region, tapes)?;
    Ok((f_inverse(beta, d, z), d, region))
}

/// One orbit step as recorded by [`expand_traced`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub point: Point,
    pub region: StepRegion,
    pub digit: Digit,
    /// ω cursor after the step.
    pub k: usize,
    /// υ cursor after the step.
    pub l: usize,
}

/// Result of running `K_β` for a number of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionRecord {
    pub digits: Vec<Digit>,
    /// Steps at which the orbit was in a two-way switch region.
    pub visits_c: Vec<usize>,
    /// Steps at which the orbit was in the triple overlap.
    pub visits_c012: Vec<usize>,
    /// Orbit point after the last emitted digit.
    pub final_point: Point,
    /// Set when a tape ran out before the requested number of steps.
    pub exhausted: Option<Tape>,
}

fn step_any(
    beta: &Beta,
    tapes: &mut CoinTapes,
    z: Point,
    depth: usize,
) -> Result<(Point, Digit, StepRegion)> {
    match beta.regime() {
        Regime::Triangle => {
            kbeta_step_traced(beta, tapes, z).map(|(p, d, r)| (p, d, StepRegion::Triangle(r)))
        }
        Regime::Radial => radial::kbeta_radial_step_traced(beta, tapes, z, depth)
            .map(|(p, d, r)| (p, d, StepRegion::Radial(r))),
    }
}

/// Run `K_β` for `n` steps and keep the full trace.
///
/// Stops early (recording which tape) when a coin is needed and none is left.
/// In the radial regime hole chains are searched to [`radial::default_depth`].
pub fn expand_traced(
    beta: &Beta,
    tapes: &mut CoinTapes,
    z: Point,
    n: usize,
) -> Result<(ExpansionRecord, Vec<TraceStep>)> {
    expand_traced_to_depth(beta, tapes, z, n, radial::default_depth(beta))
}

/// [`expand_traced`] with an explicit hole-chain search depth.
pub fn expand_traced_to_depth(
    beta: &Beta,
    tapes: &mut CoinTapes,
    z: Point,
    n: usize,
    depth: usize,
) -> Result<(ExpansionRecord, Vec<TraceStep>)> {
    let mut record = ExpansionRecord {
        digits: Vec::with_capacity(n),
        visits_c: Vec::new(),
        visits_c012: Vec::new(),
        final_point: z,
        exhausted: None,
    };
    let mut trace = Vec::with_capacity(n);
    let mut point = z;
    for step in 0..n {
        match step_any(beta, tapes, point, depth) {
            Ok((next, d, region)) => {
                if region.is_switch() {
                    record.visits_c.push(step);
                } else if region == StepRegion::Triangle(Region::C012) {
                    record.visits_c012.push(step);
                }
                trace.push(TraceStep {
                    step,
                    point,
                    region,
                    digit: d,
                    k: tapes.k(),
                    l: tapes.l(),
                });
                record.digits.push(d);
                point = next;
            }
            Err(GasketError::TapeExhausted(t)) => {
                record.exhausted = Some(t);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    record.final_point = point;
    Ok((record, trace))
}

/// Run `K_β` for `n` steps from `z`.
pub fn expand(beta: &Beta, tapes: &mut CoinTapes, z: Point, n: usize) -> Result<ExpansionRecord> {
    expand_traced(beta, tapes, z, n).map(|(r, _)| r)
}

/// First `n` digits of the greedy expansion (iterating `T_β`).
pub fn greedy_expansion(beta: &Beta, z: Point, n: usize) -> Result<Vec<Digit>> {
    iterate(beta, z, n, greedy_step)
}

/// First `n` digits of the lazy expansion (iterating `L_β`).
pub fn lazy_expansion(beta: &Beta, z: Point, n: usize) -> Result<Vec<Digit>> {
    iterate(beta, z, n, lazy_step)
}

fn iterate(
    beta: &Beta,
    mut z: Point,
    n: usize,
    step: fn(&Beta, Point) -> Result<(Point, Digit)>,
) -> Result<Vec<Digit>> {
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let (next, d) = step(beta, z)?;
        digits.push(d);
        z = next;
    }
    Ok(digits)
}

/// `Σ d_i β^{-i}` over the given digits, evaluated by Horner's rule from the
/// tail.
pub fn expansion_value(beta: &Beta, digits: &[Digit]) -> Point {
    digits
        .iter()
        .rev()
        .fold(Point::ORIGIN, |acc, d| (acc + d.value()) * beta.inv())
}

/// A subset of `{q0, q1, q2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DigitSet(u8);

impl DigitSet {
    pub fn of(digits: &[Digit]) -> Self {
        DigitSet(digits.iter().fold(0, |m, d| m | (1 << d.index())))
    }

    pub fn contains(self, d: Digit) -> bool {
        self.0 & (1 << d.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Digit> {
        Digit::ALL.into_iter().filter(move |d| self.contains(*d))
    }
}

fn admissible_for_triangle(region: Region) -> DigitSet {
    match (region.equality_digit(), region.switch_pair()) {
        (Some(d), _) => DigitSet::of(&[d]),
        (None, Some((i, j))) => DigitSet::of(&[i, j]),
        (None, None) => DigitSet::of(&Digit::ALL),
    }
}

fn admissible_for_radial(region: RadialRegion) -> Result<DigitSet> {
    match (region.equality_digit(), region.switch_pair()) {
        (Some(d), _) => Ok(DigitSet::of(&[d])),
        (None, Some((i, j))) => Ok(DigitSet::of(&[i, j])),
        (None, None) => Err(GasketError::PointInHole),
    }
}

/// The digits that can start an expansion of `z`.
pub fn admissible_digits(beta: &Beta, z: Point) -> Result<DigitSet> {
    match beta.regime() {
        Regime::Triangle => Ok(admissible_for_triangle(crate::geometry::classify_region(
            beta, z, HULL_TOL,
        )?)),
        Regime::Radial => admissible_for_radial(radial::classify_radial(
            beta,
            z,
            radial::default_depth(beta),
        )?),
    }
}

/// A switch-region visit found while decoding an expansion into coins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoinVisit {
    pub step: usize,
    pub region: StepRegion,
    pub digit: Digit,
    /// Symbol written to the tape for this visit.
    pub symbol: u8,
}

/// Coin prefixes that reproduce a given expansion.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoinCoding {
    pub omega: Vec<u8>,
    pub upsilon: Vec<u8>,
    pub visits: Vec<CoinVisit>,
}

impl CoinCoding {
    pub fn into_tapes(self) -> CoinTapes {
        CoinTapes::new(self.omega, self.upsilon).expect("decoded symbols are in range")
    }
}

/// Recover the ω and υ prefixes under which `K_β` started at `z` emits
/// exactly `digits`.
///
/// The orbit is followed by `z_{j+1} = β z_j − d_j`. Fails with
/// [`GasketError::InadmissibleDigit`] (0-based step) as soon as a digit is
/// not admissible at the current orbit point.
pub fn coins_from_digits(beta: &Beta, z: Point, digits: &[Digit]) -> Result<CoinCoding> {
    coins_from_digits_to_depth(beta, z, digits, radial::default_depth(beta))
}

/// [`coins_from_digits`] with an explicit hole-chain search depth.
pub fn coins_from_digits_to_depth(
    beta: &Beta,
    z: Point,
    digits: &[Digit],
    depth: usize,
) -> Result<CoinCoding> {
    let mut coding = CoinCoding::default();
    let mut point = z;
    for (step, &digit) in digits.iter().enumerate() {
        point = snap_to_hull(beta, point, HULL_TOL)?;
        let (allowed, region) = match beta.regime() {
            Regime::Triangle => {
                let r = crate::geometry::classify_region(beta, point, 0.0)?;
                (admissible_for_triangle(r), StepRegion::Triangle(r))
            }
            Regime::Radial => {
                let r = radial::classify_radial(beta, point, depth)?;
                let allowed = admissible_for_radial(r)
                    .map_err(|_| GasketError::InadmissibleDigit { step, digit })?;
                (allowed, StepRegion::Radial(r))
            }
        };
        if !allowed.contains(digit) {
            return Err(GasketError::InadmissibleDigit { step, digit });
        }
        let pair = match region {
            StepRegion::Triangle(r) => r.switch_pair(),
            StepRegion::Radial(r) => r.switch_pair(),
        };
        if let Some((i, _)) = pair {
            let symbol = u8::from(digit != i);
            coding.omega.push(symbol);
            coding.visits.push(CoinVisit {
                step,
                region,
                digit,
                symbol,
            });
        } else if region == StepRegion::Triangle(Region::C012) {
            let symbol = digit.index() as u8;
            coding.upsilon.push(symbol);
            coding.visits.push(CoinVisit {
                step,
                region,
                digit,
                symbol,
            });
        }
        point = f_inverse(beta, digit, point);
    }
    Ok(coding)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(v: f64) -> Beta {
        Beta::new(v).unwrap()
    }

    fn random_tapes(rng: &mut impl Rng, len: usize) -> CoinTapes {
        CoinTapes::new(
            (0..len).map(|_| rng.gen_range(0..2)).collect(),
            (0..len).map(|_| rng.gen_range(0..3)).collect(),
        )
        .unwrap()
    }

    fn random_point(beta: &Beta, rng: &mut impl Rng) -> Point {
        let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        Point::new(u * beta.hull(), v * beta.hull())
    }

    #[test]
    fn tape_validation() {
        assert!(CoinTapes::new(vec![0, 2], vec![]).is_err());
        assert!(CoinTapes::new(vec![], vec![3]).is_err());
        assert!(CoinTapes::parse("01", "012").is_ok());
        assert_eq!(
            CoinTapes::parse("0a", ""),
            Err(GasketError::InvalidSymbol {
                tape: Tape::Omega,
                symbol: 'a'
            })
        );
    }

    #[test]
    fn kbeta_step_examples() {
        let beta = b(1.4);
        let mut t = CoinTapes::parse("1", "2").unwrap();
        assert_eq!(
            kbeta_step(&beta, &mut t, Point::ORIGIN).unwrap(),
            (Point::ORIGIN, Digit::Q0)
        );
        assert_eq!((t.k(), t.l()), (0, 0));

        let (z, d) = kbeta_step(&beta, &mut t, Point::new(1.0 / 1.4, 0.0)).unwrap();
        assert_eq!(d, Digit::Q1);
        assert!(z.norm_inf() < 1e-12);
        assert_eq!((t.k(), t.l()), (1, 0));

        let c = 2.0 / 3.0;
        let mut t = CoinTapes::parse("", "2").unwrap();
        let (z, d) = kbeta_step(&b(1.5), &mut t, Point::new(c, c)).unwrap();
        assert_eq!(d, Digit::Q2);
        assert!((z - Point::new(1.0, 0.0)).norm_inf() < 1e-12);
        assert_eq!((t.k(), t.l()), (0, 1));
    }

    #[test]
    fn kbeta_step_tape_exhaustion_leaves_tapes_alone() {
        let beta = b(1.4);
        let mut t = CoinTapes::default();
        assert_eq!(
            kbeta_step(&beta, &mut t, Point::new(1.0 / 1.4, 0.0)),
            Err(GasketError::TapeExhausted(Tape::Omega))
        );
        let c = 2.0 / 3.0;
        assert_eq!(
            kbeta_step(&b(1.5), &mut t, Point::new(c, c)),
            Err(GasketError::TapeExhausted(Tape::Upsilon))
        );
        assert_eq!((t.k(), t.l()), (0, 0));
        assert!(matches!(
            kbeta_step(&beta, &mut t, Point::new(3.0, 0.0)),
            Err(GasketError::OutsideHull { .. })
        ));
    }

    #[test]
    fn origin_expands_to_zeros() {
        let beta = b(1.4);
        let mut t = CoinTapes::default();
        let rec = expand(&beta, &mut t, Point::ORIGIN, 20).unwrap();
        assert_eq!(rec.digits, vec![Digit::Q0; 20]);
        assert!(rec.visits_c.is_empty() && rec.visits_c012.is_empty());
        assert_eq!(rec.exhausted, None);
    }

    #[test]
    fn expand_notes_exhaustion() {
        let beta = b(1.4);
        let mut t = CoinTapes::default();
        let rec = expand(&beta, &mut t, Point::new(1.0 / 1.4, 0.0), 10).unwrap();
        assert!(rec.digits.is_empty());
        assert_eq!(rec.exhausted, Some(Tape::Omega));
    }

    #[test]
    fn extremal_tapes_give_greedy_and_lazy() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &v in &[1.2, 1.4, 1.5] {
            let beta = b(v);
            for _ in 0..500 {
                let z = random_point(&beta, &mut rng);
                let mut ones = CoinTapes::constant(1, 2, 80).unwrap();
                let greedy = expand(&beta, &mut ones, z, 60).unwrap();
                assert_eq!(greedy.digits, greedy_expansion(&beta, z, 60).unwrap());
                let mut zeros = CoinTapes::constant(0, 0, 80).unwrap();
                let lazy = expand(&beta, &mut zeros, z, 60).unwrap();
                assert_eq!(lazy.digits, lazy_expansion(&beta, z, 60).unwrap());
            }
        }
    }

    #[test]
    fn vertex_expansions() {
        let beta = b(1.3);
        let v = Point::new(beta.hull(), 0.0);
        assert_eq!(greedy_expansion(&beta, v, 30).unwrap(), vec![Digit::Q1; 30]);
        assert_eq!(lazy_expansion(&beta, v, 30).unwrap(), vec![Digit::Q1; 30]);
    }

    #[test]
    fn greedy_and_lazy_agree_until_first_switch() {
        let beta = b(1.4);
        let z = Point::new(0.5, 0.5);
        let greedy = greedy_expansion(&beta, z, 40).unwrap();
        let lazy = lazy_expansion(&beta, z, 40).unwrap();
        let mut t = CoinTapes::constant(1, 2, 64).unwrap();
        let rec = expand(&beta, &mut t, z, 40).unwrap();
        let first = rec
            .visits_c
            .iter()
            .chain(&rec.visits_c012)
            .copied()
            .min()
            .unwrap();
        assert_eq!(greedy[..first], lazy[..first]);
        assert!(greedy[first] > lazy[first]);
    }

    #[test]
    fn expansion_value_examples() {
        let beta = b(1.4);
        assert_eq!(expansion_value(&beta, &[Digit::Q0; 10]), Point::ORIGIN);
        let ones = expansion_value(&beta, &[Digit::Q1; 200]);
        assert!((ones - Point::new(beta.hull(), 0.0)).norm_inf() < 1e-12);
        let w = expansion_value(
            &beta,
            &[Digit::Q1, Digit::Q2, Digit::Q2, Digit::Q0, Digit::Q0],
        );
        let expected = Point::new(1.0 / 1.4, 1.0 / 1.96 + 1.0 / 2.744);
        assert!((w - expected).norm_inf() < 1e-12);
    }

    #[test]
    fn reconstruction_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let beta = b(1.33);
        for _ in 0..2000 {
            let z = random_point(&beta, &mut rng);
            let mut t = random_tapes(&mut rng, 64);
            let rec = expand(&beta, &mut t, z, 60).unwrap();
            for n in [1, 5, 20, 60] {
                let err = (z - expansion_value(&beta, &rec.digits[..n])).norm1();
                assert!(err <= beta.hull() / beta.value().powi(n as i32) + 1e-9);
            }
        }
    }

    #[test]
    fn admissible_examples() {
        let beta = b(1.4);
        assert_eq!(
            admissible_digits(&beta, Point::ORIGIN).unwrap(),
            DigitSet::of(&[Digit::Q0])
        );
        let c = 2.0 / 3.0;
        assert_eq!(
            admissible_digits(&b(1.5), Point::new(c, c)).unwrap(),
            DigitSet::of(&Digit::ALL)
        );
        assert_eq!(
            admissible_digits(&beta, Point::new(1.0 / 1.4, 0.0)).unwrap(),
            DigitSet::of(&[Digit::Q0, Digit::Q1])
        );
    }

    #[test]
    fn emitted_digits_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let beta = b(1.45);
        for _ in 0..500 {
            let mut z = random_point(&beta, &mut rng);
            let mut t = random_tapes(&mut rng, 64);
            for _ in 0..40 {
                let allowed = admissible_digits(&beta, z).unwrap();
                let (next, d) = kbeta_step(&beta, &mut t, z).unwrap();
                assert!(allowed.contains(d));
                z = next;
            }
        }
    }

    #[test]
    fn coins_from_digits_examples() {
        let beta = b(1.4);
        let c = coins_from_digits(&beta, Point::ORIGIN, &[Digit::Q0; 12]).unwrap();
        assert!(c.omega.is_empty() && c.upsilon.is_empty());

        let mut digits = vec![Digit::Q1];
        digits.extend([Digit::Q0; 8]);
        let c = coins_from_digits(&beta, Point::new(1.0 / 1.4, 0.0), &digits).unwrap();
        assert_eq!(c.omega, vec![1]);
        assert!(c.upsilon.is_empty());
        assert_eq!(c.visits.len(), 1);
        assert_eq!(c.visits[0].step, 0);
    }

    #[test]
    fn coins_from_digits_rejects() {
        let beta = b(1.4);
        let err = coins_from_digits(&beta, Point::ORIGIN, &[Digit::Q0, Digit::Q0, Digit::Q2]);
        assert_eq!(
            err,
            Err(GasketError::InadmissibleDigit {
                step: 2,
                digit: Digit::Q2
            })
        );
    }

    #[test]
    fn coding_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for &v in &[1.2, 1.4, 1.5] {
            let beta = b(v);
            for _ in 0..1000 {
                let z = random_point(&beta, &mut rng);
                let mut t = random_tapes(&mut rng, 64);
                let rec = expand(&beta, &mut t, z, 50).unwrap();
                let coding = coins_from_digits(&beta, z, &rec.digits).unwrap();
                assert_eq!(coding.omega, t.consumed_omega());
                assert_eq!(coding.upsilon, t.consumed_upsilon());
                let mut back = coding.into_tapes();
                let again = expand(&beta, &mut back, z, 50).unwrap();
                assert_eq!(again.digits, rec.digits);
            }
        }
    }

    #[test]
    fn monotone_in_coins() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let beta = b(1.4);
        for _ in 0..1000 {
            let z = random_point(&beta, &mut rng);
            let lo = random_tapes(&mut rng, 64);
            let mut om = lo.omega().to_vec();
            let mut up = lo.upsilon().to_vec();
            let m = rng.gen_range(0..om.len());
            om[m] = 1;
            let mut lo_om = lo.omega().to_vec();
            lo_om[m] = 0;
            let n = rng.gen_range(0..up.len());
            let mut lo_up = lo.upsilon().to_vec();
            let (a, c) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 2) };
            lo_up[n] = a;
            up[n] = c;
            for s in &mut om[m + 1..] {
                *s = rng.gen_range(0..2);
            }
            let mut t1 = CoinTapes::new(lo_om, lo_up).unwrap();
            let mut t2 = CoinTapes::new(om, up).unwrap();
            let d1 = expand(&beta, &mut t1, z, 60).unwrap().digits;
            let d2 = expand(&beta, &mut t2, z, 60).unwrap().digits;
            assert!(d1 <= d2);
        }
    }
}
