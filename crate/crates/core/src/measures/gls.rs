//! Generalised Lüroth coding of `[0, 1)` by the six branch weights.
//!
//! `[0, 1)` is cut into intervals `I_k = [c_{k−1}, c_k)` of lengths `p_k`.
//! One step reads the interval index `γ = k − 1` and blows `I_k` up affinely
//! onto `[0, 1)`. The digits split back into a two-sided symbol `h1(γ)` and a
//! three-sided one `h2(γ)`, which is how a single uniform draw drives both
//! coins.

use crate::error::Result;
use crate::measures::random_map::RandomMapSpec;

/// Branch weights with their prefix sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlsSpec {
    weights: [f64; 6],
    cumulative: [f64; 7],
}

impl GlsSpec {
    pub fn from_random_map(spec: &RandomMapSpec) -> Self {
        GlsSpec {
            weights: spec.weights(),
            cumulative: spec.cumulative(),
        }
    }

    /// Weights from coin biases, with validation as in [`RandomMapSpec`].
    pub fn new(beta: crate::geometry::Beta, p: f64, s: f64, t: f64) -> Result<Self> {
        Ok(GlsSpec::from_random_map(&RandomMapSpec::new(
            beta, p, s, t,
        )?))
    }

    pub fn weights(&self) -> [f64; 6] {
        self.weights
    }

    pub fn cumulative(&self) -> [f64; 7] {
        self.cumulative
    }
}

/// Two-sided symbol of a digit: 0 for `{0, 1, 2}`, 1 for `{3, 4, 5}`.
pub fn h1(gamma: u8) -> u8 {
    u8::from(gamma >= 3)
}

/// Three-sided symbol of a digit: `γ mod 3`.
pub fn h2(gamma: u8) -> u8 {
    gamma % 3
}

/// Largest double below 1.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// One step of the coding map: `(w', γ)`.
pub fn gls_step(spec: &GlsSpec, w: f64) -> (f64, u8) {
    let c = &spec.cumulative;
    let k = (1..=6).find(|&k| w < c[k]).unwrap_or(6);
    let next = ((w - c[k - 1]) / spec.weights[k - 1]).clamp(0.0, BELOW_ONE);
    (next, (k - 1) as u8)
}

/// First `n` digits of `w`.
pub fn gls_digits(spec: &GlsSpec, mut w: f64, n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let (next, g) = gls_step(spec, w);
        out.push(g);
        w = next;
    }
    out
}

/// `Σ c_{γ_i} Π_{j<i} p_{γ_j}`: the left end of the cylinder the digits name.
pub fn gls_value(spec: &GlsSpec, digits: &[u8]) -> f64 {
    digits.iter().rev().fold(0.0, |acc, &g| {
        let g = g as usize;
        spec.cumulative[g] + spec.weights[g] * acc
    })
}

/// Mass of the cylinder `[γ_1 … γ_n]`.
pub fn cylinder_mass(spec: &GlsSpec, digits: &[u8]) -> f64 {
    digits.iter().map(|&g| spec.weights[g as usize]).product()
}

/// Apply `h1` and `h2` componentwise.
pub fn split_coins(gammas: &[u8]) -> (Vec<u8>, Vec<u8>) {
    (
        gammas.iter().map(|&g| h1(g)).collect(),
        gammas.iter().map(|&g| h2(g)).collect(),
    )
}
