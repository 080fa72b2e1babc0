//! Distributed user association as repeated games between the service
//! provider and the users: a price-probing protocol with a binary search
//! over each user's weight, and a deferred-acceptance bidding protocol,
//! plus equilibrium and stability verifiers.

mod bidding;
mod price;
mod verify;

use std::io::Write;

use serde::Serialize;

pub use bidding::{bidding_game_run, BidGameConfig, BidOutcome};
pub use price::{
    default_weight_set, price_game_run, user_best_response, PriceGameConfig, PriceGameOutcome,
};
pub use verify::{verify_ne, verify_stability, BlockingPair, NeWitness};

use crate::error::Result;

/// How the provider estimates a user's valuation of a link when it prices
/// the final assignment. The user model itself always values a link as
/// `ω·log2(c)`; the product form is kept as a comparison switch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EvalForm {
    /// `v = ω·log2(c)` — consistent with the users' best responses.
    #[default]
    WeightedLogRate,
    /// `v = ω·c` — the literal product form.
    WeightedRate,
}

impl EvalForm {
    pub fn valuation(self, rate: f64, omega: f64) -> f64 {
        match self {
            EvalForm::WeightedLogRate => omega * rate.log2(),
            EvalForm::WeightedRate => omega * rate,
        }
    }
}

/// A user's valuation of one link: `ω·log2(c)`. −∞ for a zero rate.
pub(crate) fn link_valuation(rate: f64, omega: f64) -> f64 {
    omega * rate.log2()
}

/// One round of a game, as exported to JSON-lines traces. `waiting_lists`
/// is empty for the price game; the full price/bid matrix is attached only
/// under a verbose flag.
#[derive(Clone, Debug, Serialize)]
pub struct GameTraceRecord {
    pub round: usize,
    pub prices_or_bids_digest: String,
    pub connections: Vec<Option<usize>>,
    pub provider_utility: f64,
    pub user_utility_sum: f64,
    pub waiting_lists: Vec<Vec<usize>>,
    pub capacity_violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prices_or_bids: Option<Vec<Vec<f64>>>,
}

/// Writes trace records as JSON lines.
pub fn write_trace_jsonl<W: Write>(records: &[GameTraceRecord], mut out: W) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Stable FNV-1a digest of a matrix, for compact trace regression.
pub(crate) fn matrix_digest(matrix: &[Vec<f64>]) -> String {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = FNV_OFFSET;
    for row in matrix {
        for value in row {
            for byte in value.to_le_bytes() {
                hash ^= byte as u64;
                hash = hash.wrapping_mul(FNV_PRIME);
            }
        }
    }
    format!("{hash:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        assert_eq!(matrix_digest(&a), matrix_digest(&a.clone()));
        let mut b = a.clone();
        b[1][1] = 4.000000001;
        assert_ne!(matrix_digest(&a), matrix_digest(&b));
        // Frozen value so traces stay comparable across runs.
        assert_eq!(matrix_digest(&a), "93b2be02cd2882a0");
    }
}
