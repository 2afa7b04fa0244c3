//! Experiment descriptions shared by every subcommand.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CliError;
use crate::adversary::{AdversaryKind, Mode};
use crate::algorithms::PolicyKind;
use crate::ring::{Label, Orientation, RingConfiguration, World};
use crate::scheduler::default_max_rounds;
use crate::verifier::impossibility::killer_mode;

/// Visibility radius, or the whole ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Visibility {
    #[default]
    Full,
    Radius(usize),
}

impl Visibility {
    pub fn radius(self, n: usize) -> usize {
        match self {
            Visibility::Full => n,
            Visibility::Radius(k) => k,
        }
    }
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Visibility::Full => f.write_str("full"),
            Visibility::Radius(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for Visibility {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Visibility::Full),
            _ => s.parse().map(Visibility::Radius).map_err(|_| {
                CliError::Spec(format!("visibility must be `full` or a number, got `{s}`"))
            }),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumberOrWord<T> {
    Number(T),
    Word(String),
}

impl Serialize for Visibility {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Visibility::Full => s.serialize_str("full"),
            Visibility::Radius(k) => s.serialize_u64(*k as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Visibility {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match NumberOrWord::<usize>::deserialize(d)? {
            NumberOrWord::Number(k) => Ok(Visibility::Radius(k)),
            NumberOrWord::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// How robots are placed at the start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialConfig {
    /// Robots per node, clockwise from node 0.
    Explicit(Vec<usize>),
    AllOnOne,
    /// Every robot on a uniformly random node.
    Random,
}

impl fmt::Display for InitialConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialConfig::Explicit(m) => {
                write!(
                    f,
                    "{}",
                    m.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
            InitialConfig::AllOnOne => f.write_str("all-on-one"),
            InitialConfig::Random => f.write_str("random"),
        }
    }
}

impl FromStr for InitialConfig {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all-on-one" => Ok(InitialConfig::AllOnOne),
            "random" => Ok(InitialConfig::Random),
            _ => parse_list(s.trim_start_matches('[').trim_end_matches(']'))
                .map(InitialConfig::Explicit)
                .map_err(|_| {
                    CliError::Spec(format!(
                        "config must be a list like 2,1,0, `all-on-one` or `random`, got `{s}`"
                    ))
                }),
        }
    }
}

impl Serialize for InitialConfig {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            InitialConfig::Explicit(m) => m.serialize(s),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for InitialConfig {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match NumberOrWord::<Vec<usize>>::deserialize(d)? {
            NumberOrWord::Number(m) => Ok(InitialConfig::Explicit(m)),
            NumberOrWord::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

pub(crate) fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, T::Err> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

/// Everything needed to reproduce one simulation, or a family of trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub n: usize,
    pub policy: PolicyKind,
    pub adversary: AdversaryKind,
    pub mode: Mode,
    pub k: Visibility,
    pub config: InitialConfig,
    /// Labels in placement order, clockwise from node 0. Defaults to `1..=n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<u32>>,
    /// One bit per robot in ascending label order, `1` for reversed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientations: Option<String>,
    pub seed: u64,
    pub max_rounds: usize,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// The mode a policy is meant to face.
pub fn default_mode(policy: PolicyKind) -> Mode {
    match policy {
        PolicyKind::VpChain => Mode::Vp,
        PolicyKind::Local(_) => Mode::None,
        _ => Mode::Combined,
    }
}

impl ExperimentSpec {
    /// A spec with the usual pairing of mode, visibility and start for the
    /// policy and adversary.
    pub fn new(n: usize, policy: PolicyKind, adversary: AdversaryKind) -> Self {
        let mode = killer_mode(adversary).unwrap_or(default_mode(policy));
        let k = if adversary.is_adaptive() || matches!(policy, PolicyKind::Local(_)) {
            Visibility::Radius(0)
        } else {
            Visibility::Full
        };
        let config = if policy == PolicyKind::NoChirPreprocess {
            InitialConfig::AllOnOne
        } else {
            InitialConfig::Random
        };
        Self {
            n,
            policy,
            adversary,
            mode,
            k,
            config,
            labels: None,
            orientations: None,
            seed: 0,
            max_rounds: default_max_rounds(n),
            trials: 1,
            out: None,
        }
    }

    /// Checks everything that can be checked without building the ring.
    pub fn validate(&self) -> Result<(), CliError> {
        let n = self.n;
        if n == 0 {
            return Err(CliError::Spec("n must be at least 1".into()));
        }
        if let InitialConfig::Explicit(m) = &self.config {
            if m.len() != n || m.iter().sum::<usize>() != n {
                return Err(CliError::Spec(format!(
                    "config {} must list {n} nodes holding {n} robots in total",
                    self.config
                )));
            }
        }
        if let Some(labels) = &self.labels {
            let mut sorted = labels.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if labels.len() != n || sorted.len() != n || sorted[0] == 0 {
                return Err(CliError::Spec(format!(
                    "labels must be {n} distinct positive numbers"
                )));
            }
        }
        if let Some(bits) = &self.orientations {
            if bits.len() != n || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(CliError::Spec(format!(
                    "orientations must be a string of {n} bits"
                )));
            }
        }
        if let Visibility::Radius(k) = self.k {
            if k > n {
                return Err(CliError::Spec(format!(
                    "visibility {k} exceeds ring size {n}"
                )));
            }
        }
        if let Some(mode) = killer_mode(self.adversary) {
            if mode != self.mode {
                return Err(CliError::Spec(format!(
                    "{} plays in mode {}, not {}",
                    self.adversary,
                    mode.id(),
                    self.mode.id()
                )));
            }
        }
        Ok(())
    }

    /// Builds the starting world for a run seeded with `seed`. Random
    /// placements and default orientations are drawn from a stream separate
    /// from the adversary's.
    pub fn world(&self, seed: u64) -> Result<World, CliError> {
        self.validate()?;
        let n = self.n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        let labels: Vec<Label> = match &self.labels {
            Some(l) => l.iter().copied().map(Label).collect(),
            None => (1..=n as u32).map(Label).collect(),
        };
        let counts = match &self.config {
            InitialConfig::Explicit(m) => m.clone(),
            InitialConfig::AllOnOne => {
                let mut m = vec![0; n];
                m[0] = n;
                m
            }
            InitialConfig::Random => {
                let mut m = vec![0; n];
                for _ in 0..n {
                    m[rng.random_range(0..n)] += 1;
                }
                m
            }
        };
        let mut placed = labels;
        if self.config == InitialConfig::Random && self.labels.is_none() {
            placed.shuffle(&mut rng);
        }
        let config = RingConfiguration::with_labels(&counts, &placed)?;
        let orientations: Vec<Orientation> = match &self.orientations {
            Some(bits) => bits
                .chars()
                .map(|c| {
                    if c == '1' {
                        Orientation::Reversed
                    } else {
                        Orientation::Aligned
                    }
                })
                .collect(),
            None if self.policy.requires_chirality() => vec![Orientation::Aligned; n],
            None => (0..n)
                .map(|_| {
                    if rng.random::<bool>() {
                        Orientation::Reversed
                    } else {
                        Orientation::Aligned
                    }
                })
                .collect(),
        };
        Ok(World::new(config, &orientations)?)
    }
}

/// Renders orientations as a bit string, `1` for reversed.
pub fn orientation_bits(orientations: &[Orientation]) -> String {
    orientations
        .iter()
        .map(|o| {
            if *o == Orientation::Reversed {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}
