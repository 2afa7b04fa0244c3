//! Exhaustive checking of round bounds, per-round lemmas and impossibility.

pub mod enumerate;
pub mod game;
pub mod impossibility;
pub mod lemmas;

pub use enumerate::{enumerate_initial_configs, enumerate_with, initial_worlds, Symmetry};
pub use game::{
    canonical, replay_counterexample, verify_worst_case, BoundReport, Counterexample, GameGraph,
    SearchOptions,
};
pub use impossibility::{verify_impossibility, ImpossibilityReport};
pub use lemmas::{check_round_lemmas, check_step, Lemma, LemmaViolation};

use crate::algorithms::PolicyKind;

/// Worst case of the ring-of-four algorithm over every start, orientation and
/// adversary branch, as found by exhaustive search.
pub const EVEN4_WORST_CASE: usize = 6;

/// The round bound each shipped policy is held to on a ring of `n` nodes.
/// Local rules carry no bound.
pub fn proven_bound(policy: PolicyKind, n: usize) -> Option<usize> {
    match policy {
        PolicyKind::VpChain | PolicyKind::VpOneInterval => Some(n.saturating_sub(1)),
        // one preprocessing round, then the chain algorithm
        PolicyKind::NoChirPreprocess => Some(n),
        PolicyKind::AchiralOdd => Some(n.div_ceil(2) + 2 * n - 2),
        PolicyKind::AchiralEven4 => Some(EVEN4_WORST_CASE),
        PolicyKind::Local(_) => None,
    }
}
