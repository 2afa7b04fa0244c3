use thiserror::Error;

use crate::ring::Label;

/// Malformed ring configurations and dynamism.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("a ring needs at least one node")]
    EmptyRing,
    #[error("ring has {nodes} nodes but holds {robots} robots")]
    RobotCountMismatch { nodes: usize, robots: usize },
    #[error("robot {0} appears more than once")]
    DuplicateLabel(Label),
    #[error("labels must be positive")]
    ZeroLabel,
    #[error("permutation of length {len} does not match ring size {n}")]
    PermutationLength { len: usize, n: usize },
    #[error("permutation is not a bijection: position {0} is hit twice")]
    NotABijection(usize),
    #[error("edge {edge} out of range for a ring of {n} nodes")]
    EdgeOutOfRange { edge: usize, n: usize },
    #[error("an edge is already missing this round")]
    EdgeAlreadyRemoved,
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("visibility {k} exceeds ring size {n}")]
    VisibilityOutOfRange { k: usize, n: usize },
}

/// A policy, adversary and scenario that cannot be combined, or a policy
/// precondition that does not hold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("{policy} needs full visibility")]
    NeedsFullVisibility { policy: &'static str },
    #[error("{policy} requires chirality but robot {robot} has a reversed orientation")]
    NeedsChirality { policy: &'static str, robot: Label },
    #[error("no-chirality preprocessing requires all robots on one node")]
    PreprocessNotGathered,
    #[error("the ring-of-four algorithm was given a ring of {0} nodes")]
    RingOfFourOnly(usize),
    #[error("adaptive adversaries require robots with no visibility")]
    AdaptiveNeedsNoVisibility,
    #[error("dynamism {0} is not legal for the selected mode")]
    IllegalDynamism(String),
    #[error("robot {robot} decided differently after dynamism than predicted")]
    PredictionMismatch { robot: Label },
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("{adversary} needs the robots' intents before choosing dynamism")]
    MissingIntents { adversary: &'static str },
    #[error("{adversary} applies to rings of {expected} nodes, not {n}")]
    RingSize {
        adversary: &'static str,
        expected: &'static str,
        n: usize,
    },
    #[error("the configuration is already dispersed")]
    AlreadyDispersed,
    #[error("all robots are gathered on one node; the three-node adversary has lost")]
    Gathered,
    #[error("the three-node adversary needs a neutral configuration")]
    NotNeutral,
    #[error("exhaustive branching is limited to rings of at most {limit} nodes (got {n})")]
    BranchingGuard { n: usize, limit: usize },
    #[error("{adversary} is not usable in mode {mode}")]
    ModeMismatch {
        adversary: &'static str,
        mode: String,
    },
    #[error("the {0} strategy failed to prevent dispersion")]
    StrategyFailed(&'static str),
    #[error("the scripted adversary ran out of rounds")]
    ScriptExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("exhaustive search is limited to rings of at most {limit} nodes (got {n}); use a sweep instead")]
    Guard { n: usize, limit: usize },
    #[error("search exceeded the state budget of {0}")]
    StateBudget(usize),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}
