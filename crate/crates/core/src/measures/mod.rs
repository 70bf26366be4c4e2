//! Invariant measures: the random map `R`, Ulam matrices, the Lüroth coding
//! of the coins and the one-step push-forward check.

pub mod gls;
pub mod pushforward;
pub mod random_map;
pub mod ulam;

pub use gls::{gls_digits, gls_step, gls_value, split_coins, GlsSpec};
pub use pushforward::{pushforward_compare, pushforward_compare_with, Coupling, PushforwardConfig};
pub use random_map::{chain_probability, r_orbit, sample_r_orbit, tau, RandomMapSpec};
pub use ulam::{build_ulam, stationary_density, CellGrid, UlamGrid, UlamMap};
