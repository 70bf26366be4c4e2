//! Chaos-game sampling of the attractor for any `1 < β ≤ 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GasketError, Result};
use crate::geometry::{Digit, Point};

/// Number of initial points discarded by [`chaos_game`].
pub const DEFAULT_BURN_IN: usize = 100;

/// `n` points of the attractor of `{(z + q_i)/β}`, digits drawn uniformly.
///
/// The walk starts at the origin (a fixed point of `f_{q0}`, so already on
/// the attractor) and drops the first `burn_in` points.
pub fn chaos_game(beta: f64, n: usize, burn_in: usize, seed: u64) -> Result<Vec<Point>> {
    if !beta.is_finite() || beta <= 1.0 || beta > 2.0 {
        return Err(GasketError::InvalidBeta(beta));
    }
    let inv = 1.0 / beta;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = Point::ORIGIN;
    let mut out = Vec::with_capacity(n);
    for i in 0..burn_in + n {
        let d = Digit::ALL[rng.gen_range(0..3)];
        z = (z + d.value()) * inv;
        if i >= burn_in {
            out.push(z);
        }
    }
    Ok(out)
}

/// Point counts on an `n × n` raster over `[0, 1/(β−1)]²`, row-major with
/// row = y bin.
pub fn rasterize(points: &[Point], beta: f64, n: usize) -> Vec<u64> {
    let hull = 1.0 / (beta - 1.0);
    let mut counts = vec![0u64; n * n];
    for z in points {
        counts[crate::measures::ulam::square_bin(*z, hull, n)] += 1;
    }
    counts
}
