//! Exact-arithmetic verification oracles and quality metrics.

pub mod exact;

pub use exact::{
    check_deep_reduced, check_lll_reduced, check_lovasz, check_pot_reduced, check_size_reduced,
    delta_rational, ln_bigint, log_potential_exact, potential_exact, ExactGso, Violation,
};
