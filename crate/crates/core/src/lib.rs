//! β-expansions in two dimensions on fat Sierpiński gaskets.
//!
//! The gasket `S_β` is the attractor of `f_q(z) = (z + q)/β` for the digits
//! `q0 = (0,0)`, `q1 = (1,0)`, `q2 = (0,1)`. Its convex hull Δ is the right
//! triangle with legs `1/(β−1)`.
//!
//! * [`geometry`]: bases, digits, the seven-region partition, greedy and lazy
//!   steps and the involution `ψ`.
//! * [`expansion`]: the coin-driven map `K_β`, expansions and their coin
//!   codings.
//! * [`radial`]: the regime `3/2 < β ≤ β⁎` with its central hole and hole
//!   chains, and the regime constants.
//! * [`measures`]: the random map `R`, Ulam matrices and stationary densities,
//!   Lüroth coding of coins.
//! * [`chaos`]: chaos-game sampling for rendering.

pub mod chaos;
pub mod error;
pub mod expansion;
pub mod geometry;
pub mod measures;
pub mod radial;

pub use error::{GasketError, Result, Tape};
pub use expansion::{
    admissible_digits, coins_from_digits, coins_from_digits_to_depth, expand, expand_traced,
    expand_traced_to_depth, expansion_value, greedy_expansion, kbeta_step, lazy_expansion,
    CoinCoding, CoinTapes, DigitSet, ExpansionRecord, StepRegion, TraceStep,
};
pub use geometry::{
    classify_region, greedy_step, lazy_step, psi, Beta, Digit, Point, Regime, Region, HULL_TOL,
};
pub use radial::{classify_radial, constants, hole_triangle, Constants, HoleChain, RadialRegion};
