//! Network scenario types, channel sampling, and the closed-form
//! achievable-rate model for a massive-MIMO macro cell with picocells.

mod channel;
mod rate;
mod scenario;

pub use channel::{path_loss, sample_channel, ChannelState, PATH_LOSS_BREAKPOINT_M};
pub use rate::{
    build_rate_matrix, build_rate_matrix_with, coverage_sets, macro_rate, pico_rate_worstcase,
    RateMatrix, RateOptions,
};
pub use scenario::{
    dbm_to_linear, linear_to_dbm, Area, BaseStation, BsKind, Point, Scenario, UserTerminal,
    MACRO_PATH_LOSS_EXPONENT, PICO_PATH_LOSS_EXPONENT,
};
