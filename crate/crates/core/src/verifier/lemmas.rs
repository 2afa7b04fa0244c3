//! Per-round progress guarantees of the shipped policies.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::adversary::Mode;
use crate::algorithms::PolicyKind;
use crate::ring::{Metrics, RingConfiguration};
use crate::scheduler::{RoundPhase, RoundTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    /// Chain filling under vertex permutation removes at least one hole.
    VpHoleDecrease,
    /// Good-chain filling under edge removal removes at least one hole.
    IntervalHoleDecrease,
    /// On odd achiral rings, holes drop or multinodes grow.
    OddProgress,
    /// Multinodes never vanish faster than holes are filled.
    MultinodeLoss,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::VpHoleDecrease => "vp-hole-decrease",
            Lemma::IntervalHoleDecrease => "interval-hole-decrease",
            Lemma::OddProgress => "odd-progress",
            Lemma::MultinodeLoss => "multinode-loss",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaViolation {
    pub round: usize,
    pub lemma: Lemma,
    pub before: Metrics,
    pub after: Metrics,
    pub holes_filled: usize,
}

impl fmt::Display for LemmaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "round {}: {} violated (holes {} -> {}, multinodes {} -> {}, holes filled {})",
            self.round,
            self.lemma,
            self.before.holes,
            self.after.holes,
            self.before.multinodes,
            self.after.multinodes,
            self.holes_filled
        )
    }
}

/// Positions that were holes when robots looked and are occupied afterwards.
pub fn holes_filled(seen: &RingConfiguration, post: &RingConfiguration) -> usize {
    (0..seen.n())
        .filter(|&p| seen.count(p) == 0 && post.count(p) > 0)
        .count()
}

/// The lemmas that bind `policy` in a round of the given phase.
pub fn applicable(policy: PolicyKind, mode: Mode, phase: RoundPhase, n: usize) -> Vec<Lemma> {
    let mut out = Vec::new();
    match policy {
        PolicyKind::Local(_) => return out,
        PolicyKind::VpChain if matches!(mode, Mode::None | Mode::Vp) => {
            out.push(Lemma::VpHoleDecrease)
        }
        PolicyKind::VpOneInterval => out.push(Lemma::IntervalHoleDecrease),
        PolicyKind::NoChirPreprocess | PolicyKind::AchiralEven4 if phase == RoundPhase::Chiral => {
            out.push(Lemma::IntervalHoleDecrease)
        }
        PolicyKind::AchiralOdd if n % 2 == 1 => out.push(Lemma::OddProgress),
        _ => {}
    }
    out.push(Lemma::MultinodeLoss);
    out
}

/// Checks one round that started from a non-dispersed ring. `seen` is the
/// ring after dynamism, `post` the ring after moves.
pub fn check_step(
    policy: PolicyKind,
    mode: Mode,
    phase: RoundPhase,
    round: usize,
    seen: &RingConfiguration,
    post: &RingConfiguration,
) -> Vec<LemmaViolation> {
    let before = seen.classify();
    if before.dispersed {
        return Vec::new();
    }
    let after = post.classify();
    let filled = holes_filled(seen, post);
    applicable(policy, mode, phase, seen.n())
        .into_iter()
        .filter(|lemma| !match lemma {
            Lemma::VpHoleDecrease | Lemma::IntervalHoleDecrease => after.holes < before.holes,
            Lemma::OddProgress => {
                after.holes < before.holes
                    || (after.holes == before.holes && after.multinodes > before.multinodes)
            }
            Lemma::MultinodeLoss => before.multinodes.saturating_sub(after.multinodes) <= filled,
        })
        .map(|lemma| LemmaViolation {
            round,
            lemma,
            before,
            after,
            holes_filled: filled,
        })
        .collect()
}

/// Every lemma violation in a recorded run.
pub fn check_round_lemmas(
    trace: &[RoundTrace],
    policy: PolicyKind,
    mode: Mode,
) -> Vec<LemmaViolation> {
    trace
        .iter()
        .flat_map(|t| check_step(policy, mode, t.phase, t.round, &t.seen, &t.post))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: &[usize]) -> RingConfiguration {
        RingConfiguration::from_multiplicities(m).unwrap()
    }

    #[test]
    fn hole_increase_is_flagged() {
        let v = check_step(
            PolicyKind::VpChain,
            Mode::Vp,
            RoundPhase::Main,
            3,
            &cfg(&[2, 1, 0, 1]),
            &cfg(&[2, 2, 0, 0]),
        );
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].lemma, Lemma::VpHoleDecrease);
        assert_eq!(v[0].round, 3);
    }

    #[test]
    fn odd_progress_accepts_new_multinode() {
        // equal chains: the mover makes a second multinode, holes unchanged
        let v = check_step(
            PolicyKind::AchiralOdd,
            Mode::Combined,
            RoundPhase::Main,
            1,
            &cfg(&[3, 1, 0, 0, 1]),
            &cfg(&[2, 2, 0, 0, 1]),
        );
        assert!(v.is_empty());
        let v = check_step(
            PolicyKind::AchiralOdd,
            Mode::Combined,
            RoundPhase::Main,
            1,
            &cfg(&[3, 1, 0, 0, 1]),
            &cfg(&[3, 1, 0, 0, 1]),
        );
        assert_eq!(
            v.iter().map(|v| v.lemma).collect::<Vec<_>>(),
            vec![Lemma::OddProgress]
        );
    }

    #[test]
    fn multinode_loss_counts_filled_holes() {
        // one multinode vanishes and one hole gets filled
        let v = check_step(
            PolicyKind::AchiralEven4,
            Mode::Combined,
            RoundPhase::Main,
            1,
            &cfg(&[2, 2, 0, 0]),
            &cfg(&[1, 1, 2, 0]),
        );
        assert!(v.is_empty());
        assert_eq!(holes_filled(&cfg(&[2, 2, 0, 0]), &cfg(&[1, 1, 1, 1])), 2);
        // two vanish, one filled
        let v = check_step(
            PolicyKind::VpChain,
            Mode::OneInterval,
            RoundPhase::Main,
            1,
            &cfg(&[2, 2, 2, 0, 0, 0]),
            &cfg(&[3, 1, 1, 0, 1, 0]),
        );
        assert_eq!(
            v.iter().map(|v| v.lemma).collect::<Vec<_>>(),
            vec![Lemma::MultinodeLoss]
        );
    }

    #[test]
    fn local_rules_are_unconstrained() {
        let rule = PolicyKind::Local("000000".parse().unwrap());
        assert!(applicable(rule, Mode::Vp, RoundPhase::Main, 3).is_empty());
    }
}
