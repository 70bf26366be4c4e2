//! One-step push-forward comparison of `K_β` against branch-sampled `R`.
//!
//! Uniform points of Δ are pushed once through `K_β` (with fresh coins drawn
//! from one spec's biases) and once through a branch of `R` (drawn from
//! another spec's weights). Both sides share the same starting points, so
//! their histograms differ only where coins matter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GasketError, Result};
use crate::expansion::{kbeta_step, CoinTapes};
use crate::geometry::uniform_in_hull;
use crate::measures::gls::{gls_step, h1, h2, GlsSpec};
use crate::measures::random_map::{tau, RandomMapSpec};
use crate::measures::ulam::{square_bin, total_variation};

/// How the coins of `K_β` relate to the branch drawn for `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    /// Coins and branch drawn independently.
    #[default]
    Independent,
    /// Coins read off the branch digit through `h1`, `h2`; both sides then
    /// move every point identically.
    Shared,
}

/// Settings for [`pushforward_compare_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PushforwardConfig {
    pub samples: usize,
    pub seed: u64,
    pub bins: usize,
    pub coupling: Coupling,
}

impl PushforwardConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        PushforwardConfig {
            samples,
            seed,
            bins: 32,
            coupling: Coupling::Independent,
        }
    }
}

fn draw_symbol(rng: &mut ChaCha8Rng, cut: &[f64]) -> u8 {
    let u: f64 = rng.gen();
    cut.iter().position(|&c| u < c).unwrap_or(cut.len()) as u8
}

/// Total variation between the one-step histograms of `K_β` (coins from
/// `coins`) and `R` (branches from `branches`).
pub fn pushforward_compare_with(
    coins: &RandomMapSpec,
    branches: &RandomMapSpec,
    cfg: PushforwardConfig,
) -> Result<f64> {
    if cfg.samples < 10_000 {
        return Err(GasketError::InvalidParameter(format!(
            "sample size {} must be at least 10^4",
            cfg.samples
        )));
    }
    if coins.beta() != branches.beta() {
        return Err(GasketError::InvalidParameter(
            "specs use different beta".into(),
        ));
    }
    if cfg.coupling == Coupling::Shared && coins != branches {
        return Err(GasketError::InvalidParameter(
            "shared coupling needs one spec".into(),
        ));
    }
    let beta = *coins.beta();
    let hull = beta.hull();
    let gls = GlsSpec::from_random_map(branches);
    let omega_cut = [coins.p()];
    let upsilon_cut = [coins.s(), coins.s() + coins.t()];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bins = cfg.bins;
    let mut hk = vec![0.0; bins * bins];
    let mut hr = vec![0.0; bins * bins];
    for _ in 0..cfg.samples {
        let z = uniform_in_hull(&beta, &mut rng);
        let (_, gamma) = gls_step(&gls, rng.gen());
        let (o, u) = match cfg.coupling {
            Coupling::Shared => (h1(gamma), h2(gamma)),
            Coupling::Independent => (
                draw_symbol(&mut rng, &omega_cut),
                draw_symbol(&mut rng, &upsilon_cut),
            ),
        };
        let mut tapes = CoinTapes::new(vec![o], vec![u])?;
        let (zk, _) = kbeta_step(&beta, &mut tapes, z)?;
        let zr = tau(branches, gamma as usize + 1, z)?;
        hk[square_bin(zk, hull, bins)] += 1.0;
        hr[square_bin(zr, hull, bins)] += 1.0;
    }
    let n = cfg.samples as f64;
    hk.iter_mut().for_each(|c| *c /= n);
    hr.iter_mut().for_each(|c| *c /= n);
    Ok(total_variation(&hk, &hr))
}

/// [`pushforward_compare_with`] using one spec for both sides, a 32×32 grid
/// and independent coins.
pub fn pushforward_compare(spec: &RandomMapSpec, samples: usize, seed: u64) -> Result<f64> {
    pushforward_compare_with(spec, spec, PushforwardConfig::new(samples, seed))
}
