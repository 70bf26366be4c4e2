//! The position-independent random map `R = {τ_1, …, τ_6; p_1, …, p_6}`.
//!
//! The branch weights come from a two-sided coin `{p, 1−p}` and a three-sided
//! coin `{s, t, 1−s−t}`: `p_1 = ps`, `p_2 = pt`, `p_3 = p(1−s−t)`,
//! `p_4 = (1−p)s`, `p_5 = (1−p)t`, `p_6 = (1−p)(1−s−t)`. Branches 1–3 take
//! the smaller digit on a double overlap and 4–6 the larger; on the triple
//! overlap branches `{1,4}`, `{2,5}`, `{3,6}` pick `q0`, `q1`, `q2`.
//!
//! Only constant weights are supported.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GasketError, Result};
use crate::geometry::{classify_region, f_inverse, Beta, Digit, Point, Regime, Region, HULL_TOL};

/// Coin biases for `R` together with the base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomMapSpec {
    beta: Beta,
    p: f64,
    s: f64,
    t: f64,
}

fn open_unit(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(GasketError::InvalidParameter(format!(
            "{name} = {v} must lie in (0, 1)"
        )))
    }
}

impl RandomMapSpec {
    pub fn new(beta: Beta, p: f64, s: f64, t: f64) -> Result<Self> {
        beta.require(Regime::Triangle)?;
        let (p, s, t) = (open_unit("p", p)?, open_unit("s", s)?, open_unit("t", t)?);
        if s + t >= 1.0 {
            return Err(GasketError::InvalidParameter(format!(
                "s + t = {} must be below 1",
                s + t
            )));
        }
        Ok(RandomMapSpec { beta, p, s, t })
    }

    /// Fair coins: `p = 1/2`, `s = t = 1/3`.
    pub fn fair(beta: Beta) -> Result<Self> {
        RandomMapSpec::new(beta, 0.5, 1.0 / 3.0, 1.0 / 3.0)
    }

    pub fn beta(&self) -> &Beta {
        &self.beta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `p_1, …, p_6`.
    pub fn weights(&self) -> [f64; 6] {
        let (p, s, t) = (self.p, self.s, self.t);
        let r = 1.0 - s - t;
        let q = 1.0 - p;
        [p * s, p * t, p * r, q * s, q * t, q * r]
    }

    /// Prefix sums `c_0 = 0, …, c_6 = 1` of the weights, formed so that
    /// `c_3 = p` holds exactly.
    pub fn cumulative(&self) -> [f64; 7] {
        let (p, s, t) = (self.p, self.s, self.t);
        let q = 1.0 - p;
        [
            0.0,
            p * s,
            p * s + p * t,
            p,
            p + q * s,
            p + q * s + q * t,
            1.0,
        ]
    }

    /// Branch index `1..=6` for a uniform `u ∈ [0, 1)`.
    pub fn branch_for(&self, u: f64) -> usize {
        let c = self.cumulative();
        (1..=6).find(|&k| u < c[k]).unwrap_or(6)
    }
}

/// The digit branch `k` uses in `region`.
pub fn branch_digit(beta: &Beta, region: Region, k: usize) -> Digit {
    if let Some(d) = region.equality_digit() {
        return d;
    }
    if let Some((i, j)) = region.switch_pair() {
        return if k <= 3 { i } else { j };
    }
    if beta.is_three_halves() {
        // the single triple point goes to βz under every branch
        return Digit::Q0;
    }
    Digit::from_index((k - 1) % 3).expect("k in 1..=6")
}

fn check_branch(k: usize) -> Result<()> {
    if (1..=6).contains(&k) {
        Ok(())
    } else {
        Err(GasketError::InvalidParameter(format!(
            "branch index {k} outside 1..=6"
        )))
    }
}

/// `τ_k(z)` together with the digit it removes.
pub fn tau_digit(spec: &RandomMapSpec, k: usize, z: Point) -> Result<(Point, Digit)> {
    check_branch(k)?;
    let beta = &spec.beta;
    let region = classify_region(beta, z, HULL_TOL)?;
    let z = crate::geometry::snap_to_hull(beta, z, HULL_TOL)?;
    let d = branch_digit(beta, region, k);
    Ok((f_inverse(beta, d, z), d))
}

/// `τ_k(z)` for `k ∈ 1..=6`.
pub fn tau(spec: &RandomMapSpec, k: usize, z: Point) -> Result<Point> {
    tau_digit(spec, k, z).map(|(p, _)| p)
}

/// Endless orbit of `R`, one uniform draw per step.
pub struct ROrbit {
    spec: RandomMapSpec,
    rng: ChaCha8Rng,
    z: Point,
}

impl ROrbit {
    /// Advance one step and return the branch used together with the new
    /// point.
    pub fn step(&mut self) -> Result<(usize, Point)> {
        let k = self.spec.branch_for(self.rng.gen());
        let (next, _) = tau_digit(&self.spec, k, self.z)?;
        self.z = next;
        Ok((k, next))
    }

    pub fn point(&self) -> Point {
        self.z
    }
}

/// Start an orbit of `R` at `z0`.
pub fn r_orbit(spec: &RandomMapSpec, z0: Point, seed: u64) -> Result<ROrbit> {
    let z = crate::geometry::snap_to_hull(&spec.beta, z0, HULL_TOL)?;
    Ok(ROrbit {
        spec: *spec,
        rng: ChaCha8Rng::seed_from_u64(seed),
        z,
    })
}

/// `z0, R(z0), …` (n points).
pub fn sample_r_orbit(spec: &RandomMapSpec, z0: Point, n: usize, seed: u64) -> Result<Vec<Point>> {
    let mut orbit = r_orbit(spec, z0, seed)?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(orbit.point());
        orbit.step()?;
    }
    Ok(out)
}

/// Probability of following `chain` (branch indices) from `z`.
pub fn chain_probability(spec: &RandomMapSpec, chain: &[usize], z: Point) -> Result<f64> {
    let w = spec.weights();
    let mut z = crate::geometry::snap_to_hull(&spec.beta, z, HULL_TOL)?;
    let mut prob = 1.0;
    for &k in chain {
        check_branch(k)?;
        prob *= w[k - 1];
        z = tau(spec, k, z)?;
    }
    Ok(prob)
}
