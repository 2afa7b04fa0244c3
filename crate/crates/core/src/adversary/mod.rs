//! Per-round dynamism: which vertex permutation and which (at most one)
//! missing edge the ring gets before robots look.

mod exhaustive;
mod killers;
mod random;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AdversaryError, ConfigError, ScenarioError};
use crate::ring::{MoveIntent, RingConfiguration};

pub use exhaustive::{branches, canonical_rotation, VP_BRANCHING_LIMIT};
pub use killers::{all_intent_vectors, killer_for, OneIntervalKiller, VpKiller, VpKillerN3};
pub use random::RandomAdversary;

/// Which forms of dynamism the adversary may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Mode {
    #[default]
    #[serde(rename = "none")]
    None,
    #[serde(rename = "vp")]
    Vp,
    #[serde(rename = "1i")]
    OneInterval,
    #[serde(rename = "combined")]
    Combined,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::None, Mode::Vp, Mode::OneInterval, Mode::Combined];

    pub fn allows_permutation(self) -> bool {
        matches!(self, Mode::Vp | Mode::Combined)
    }

    pub fn allows_removal(self) -> bool {
        matches!(self, Mode::OneInterval | Mode::Combined)
    }

    pub fn id(self) -> &'static str {
        match self {
            Mode::None => "none",
            Mode::Vp => "vp",
            Mode::OneInterval => "1i",
            Mode::Combined => "combined",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown mode `{0}` (expected none, vp, 1i or combined)")]
pub struct UnknownMode(pub String);

impl FromStr for Mode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| UnknownMode(s.into()))
    }
}

/// One round of dynamism. The node at position `i` moves to `permutation[i]`;
/// then `edge`, if any, is removed for the round.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Dynamism {
    pub permutation: Option<Vec<usize>>,
    pub edge: Option<usize>,
}

impl Dynamism {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn permute(perm: Vec<usize>) -> Self {
        Self {
            permutation: Some(perm),
            edge: None,
        }
    }

    pub fn remove(edge: usize) -> Self {
        Self {
            permutation: None,
            edge: Some(edge),
        }
    }

    pub fn is_identity_permutation(&self) -> bool {
        self.permutation
            .as_ref()
            .is_none_or(|p| p.iter().enumerate().all(|(i, &q)| i == q))
    }

    /// Rejects dynamism the mode does not allow. An identity permutation is
    /// allowed everywhere.
    pub fn check(&self, mode: Mode) -> Result<(), ScenarioError> {
        if !mode.allows_permutation() && !self.is_identity_permutation() {
            return Err(ScenarioError::IllegalDynamism(format!(
                "permutation in mode {mode}"
            )));
        }
        if !mode.allows_removal() && self.edge.is_some() {
            return Err(ScenarioError::IllegalDynamism(format!(
                "edge removal in mode {mode}"
            )));
        }
        Ok(())
    }

    /// The configuration robots observe: permuted, then with the edge removed.
    pub fn apply(&self, cfg: &RingConfiguration) -> Result<RingConfiguration, ConfigError> {
        let permuted = match &self.permutation {
            Some(p) => cfg.apply_vertex_permutation(p)?,
            None => cfg.clone().without_missing_edge(),
        };
        permuted.apply_edge_removal(self.edge)
    }
}

impl fmt::Display for Dynamism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.permutation {
            Some(p) => write!(f, "perm {p:?}")?,
            None => write!(f, "perm id")?,
        }
        match self.edge {
            Some(e) => write!(f, ", edge {e}"),
            None => write!(f, ", no edge"),
        }
    }
}

/// What an adversary sees when it picks the round's dynamism.
#[derive(Debug, Clone, Copy)]
pub struct AdversaryContext<'a> {
    pub config: &'a RingConfiguration,
    pub mode: Mode,
    pub round: usize,
    /// Global intents the robots have committed to; only supplied to
    /// adaptive adversaries.
    pub predicted_intents: Option<&'a [MoveIntent]>,
}

impl AdversaryContext<'_> {
    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub(crate) fn intents(&self, adversary: &'static str) -> Result<&[MoveIntent], AdversaryError> {
        self.predicted_intents
            .ok_or(AdversaryError::MissingIntents { adversary })
    }
}

pub trait Adversary: Send {
    /// Adaptive adversaries are shown the robots' intents before choosing.
    fn is_adaptive(&self) -> bool {
        false
    }

    fn choose(&mut self, ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError>;
}

/// No dynamism at all.
#[derive(Debug, Clone, Copy, Default)]
pub struct Benign;

impl Adversary for Benign {
    fn choose(&mut self, _ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError> {
        Ok(Dynamism::none())
    }
}

/// Replays a fixed sequence of dynamism, one entry per round.
#[derive(Debug, Clone, Default)]
pub struct Scripted {
    script: Vec<Dynamism>,
    next: usize,
}

impl Scripted {
    pub fn new(script: Vec<Dynamism>) -> Self {
        Self { script, next: 0 }
    }
}

impl Adversary for Scripted {
    fn choose(&mut self, _ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError> {
        let d = self
            .script
            .get(self.next)
            .cloned()
            .ok_or(AdversaryError::ScriptExhausted)?;
        self.next += 1;
        Ok(d)
    }
}

/// Adversaries selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    Benign,
    Random,
    VpKillerN3,
    VpKiller,
    OneIntervalKiller,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 5] = [
        AdversaryKind::Benign,
        AdversaryKind::Random,
        AdversaryKind::VpKillerN3,
        AdversaryKind::VpKiller,
        AdversaryKind::OneIntervalKiller,
    ];

    pub fn id(self) -> &'static str {
        match self {
            AdversaryKind::Benign => "benign",
            AdversaryKind::Random => "random",
            AdversaryKind::VpKillerN3 => "vp-killer-n3",
            AdversaryKind::VpKiller => "vp-killer",
            AdversaryKind::OneIntervalKiller => "one-interval-killer",
        }
    }

    pub fn build(self, seed: u64) -> Box<dyn Adversary> {
        match self {
            AdversaryKind::Benign => Box::new(Benign),
            AdversaryKind::Random => Box::new(RandomAdversary::new(seed)),
            AdversaryKind::VpKillerN3 => Box::new(VpKillerN3),
            AdversaryKind::VpKiller => Box::new(VpKiller),
            AdversaryKind::OneIntervalKiller => Box::new(OneIntervalKiller),
        }
    }

    pub fn is_adaptive(self) -> bool {
        matches!(
            self,
            AdversaryKind::VpKillerN3 | AdversaryKind::VpKiller | AdversaryKind::OneIntervalKiller
        )
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown adversary `{0}` (expected benign, random, vp-killer-n3, vp-killer or one-interval-killer)")]
pub struct UnknownAdversary(pub String);

impl FromStr for AdversaryKind {
    type Err = UnknownAdversary;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AdversaryKind::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| UnknownAdversary(s.into()))
    }
}
