//! Per-robot decision rules.
//!
//! A policy maps what one robot observes (always in its own frame) and its
//! private memory to a move in its own frame. The scheduler translates that
//! move to the ring's frame with the robot's orientation.

pub mod achiral_even4;
pub mod achiral_odd;
pub mod local;
pub mod preprocess;
pub mod vp_chain;
pub mod vp_one_interval;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ScenarioError;
use crate::ring::{Action, Label, Memory, Phase, RobotState};
use crate::view::{LocalRing, Observation};

pub use local::{LocalRule, MultiplicityClass, Rank};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    VpChain,
    VpOneInterval,
    /// Orientation unification followed by [`PolicyKind::VpOneInterval`].
    NoChirPreprocess,
    AchiralOdd,
    AchiralEven4,
    /// A member of the finite class of no-visibility rules.
    Local(LocalRule),
}

/// A policy's output for one robot: a move in the robot's own frame and the
/// robot's memory afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub action: Action,
    pub memory: Memory,
}

impl PolicyKind {
    pub const SHIPPED: [PolicyKind; 5] = [
        PolicyKind::VpChain,
        PolicyKind::VpOneInterval,
        PolicyKind::NoChirPreprocess,
        PolicyKind::AchiralOdd,
        PolicyKind::AchiralEven4,
    ];

    pub fn id(&self) -> String {
        match self {
            PolicyKind::VpChain => "vp-chain".into(),
            PolicyKind::VpOneInterval => "vp-1-interval-chain".into(),
            PolicyKind::NoChirPreprocess => "no-chir-preprocess".into(),
            PolicyKind::AchiralOdd => "achiral-odd".into(),
            PolicyKind::AchiralEven4 => "achiral-even4".into(),
            PolicyKind::Local(rule) => format!("local:{rule}"),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            PolicyKind::VpChain => "vp-chain",
            PolicyKind::VpOneInterval => "vp-1-interval-chain",
            PolicyKind::NoChirPreprocess => "no-chir-preprocess",
            PolicyKind::AchiralOdd => "achiral-odd",
            PolicyKind::AchiralEven4 => "achiral-even4",
            PolicyKind::Local(_) => "local rule",
        }
    }

    pub fn requires_chirality(&self) -> bool {
        matches!(self, PolicyKind::VpChain | PolicyKind::VpOneInterval)
    }

    pub fn needs_full_visibility(&self) -> bool {
        !matches!(self, PolicyKind::Local(_))
    }

    /// Whether decisions ever read or write robot memory.
    pub fn uses_memory(&self) -> bool {
        matches!(
            self,
            PolicyKind::NoChirPreprocess | PolicyKind::AchiralEven4
        )
    }

    /// Rejects a scenario before the first round.
    pub fn check_scenario(
        &self,
        robots: &[RobotState],
        n: usize,
        k: usize,
    ) -> Result<(), ScenarioError> {
        if self.needs_full_visibility() && !crate::view::is_full_visibility(k, n) {
            return Err(ScenarioError::NeedsFullVisibility {
                policy: self.name(),
            });
        }
        if self.requires_chirality() {
            if let Some(r) = robots
                .iter()
                .find(|r| r.orientation != crate::ring::Orientation::Aligned)
            {
                return Err(ScenarioError::NeedsChirality {
                    policy: self.name(),
                    robot: r.label,
                });
            }
        }
        if *self == PolicyKind::AchiralEven4 && n != 4 {
            return Err(ScenarioError::RingOfFourOnly(n));
        }
        Ok(())
    }

    pub fn decide(&self, obs: &Observation, me: &RobotState) -> Result<Decision, ScenarioError> {
        let memory = me.memory;
        let keep = |action| Decision { action, memory };
        if let PolicyKind::Local(rule) = self {
            return Ok(keep(rule.decide(&obs.view)));
        }
        let ring = self.full_ring(obs)?;
        let view = &obs.view;
        Ok(match self {
            PolicyKind::VpChain => keep(vp_chain::decide(ring, view)),
            PolicyKind::VpOneInterval => keep(vp_one_interval::decide(ring, view)),
            PolicyKind::AchiralOdd => keep(achiral_odd::decide(ring, view)),
            PolicyKind::NoChirPreprocess => {
                if !ring.has_multinode() {
                    keep(Action::Stay)
                } else if memory.phase == Phase::Chiral {
                    keep(vp_one_interval::decide(ring, view))
                } else if view.own_count == ring.n() {
                    let (action, memory) = preprocess::remember_and_move(view, memory);
                    Decision { action, memory }
                } else {
                    return Err(ScenarioError::PreprocessNotGathered);
                }
            }
            PolicyKind::AchiralEven4 => {
                if ring.n() != 4 {
                    return Err(ScenarioError::RingOfFourOnly(ring.n()));
                }
                let (action, memory) = achiral_even4::decide(ring, view, memory);
                Decision { action, memory }
            }
            PolicyKind::Local(_) => unreachable!(),
        })
    }

    /// End-of-round hook, run on every robot after moves resolve.
    pub fn settle(&self, me: &mut RobotState, least_here: Label) {
        if self.uses_memory() {
            preprocess::settle(me, least_here);
        }
    }

    fn full_ring<'a>(&self, obs: &'a Observation) -> Result<&'a LocalRing, ScenarioError> {
        obs.ring.as_ref().ok_or(ScenarioError::NeedsFullVisibility {
            policy: self.name(),
        })
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown policy `{0}` (expected vp-chain, vp-1-interval-chain, no-chir-preprocess, achiral-odd, achiral-even4 or local:<6 digits>)")]
pub struct UnknownPolicy(pub String);

impl FromStr for PolicyKind {
    type Err = UnknownPolicy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "vp-chain" => PolicyKind::VpChain,
            "vp-1-interval-chain" => PolicyKind::VpOneInterval,
            "no-chir-preprocess" => PolicyKind::NoChirPreprocess,
            "achiral-odd" => PolicyKind::AchiralOdd,
            "achiral-even4" => PolicyKind::AchiralEven4,
            other => match other.strip_prefix("local:") {
                Some(table) => {
                    PolicyKind::Local(table.parse().map_err(|_| UnknownPolicy(s.into()))?)
                }
                None => return Err(UnknownPolicy(s.into())),
            },
        })
    }
}

impl Serialize for PolicyKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.id())
    }
}

impl<'de> Deserialize<'de> for PolicyKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
