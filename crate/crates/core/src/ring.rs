//! The dynamic ring: node occupancies, the per-round missing edge, robot
//! state and the simultaneous move rule.
//!
//! Positions are clockwise indices `0..n`. Edge `e` joins position `e` and
//! position `(e + 1) % n`, so a clockwise step out of `p` crosses edge `p` and
//! an anticlockwise step crosses edge `p - 1`. For `n = 2` the two edges are
//! distinct even though they join the same pair of nodes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A robot's private mapping from its own "clockwise" to the ring's.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Aligned,
    Reversed,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Aligned => Orientation::Reversed,
            Orientation::Reversed => Orientation::Aligned,
        }
    }

    /// Translates an action between the robot's frame and the ring's frame.
    /// The mapping is an involution, so it works in both directions.
    pub fn apply(self, action: Action) -> Action {
        match self {
            Orientation::Aligned => action,
            Orientation::Reversed => action.reversed(),
        }
    }
}

/// Stay, or step one edge. Whether the direction is global or robot-relative
/// depends on where the value comes from: policies speak in their own frame,
/// [`MoveIntent`]s are always global.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Action {
    #[serde(rename = "stay")]
    Stay,
    #[serde(rename = "cw")]
    Clockwise,
    #[serde(rename = "acw")]
    Anticlockwise,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Stay, Action::Clockwise, Action::Anticlockwise];

    pub fn reversed(self) -> Self {
        match self {
            Action::Stay => Action::Stay,
            Action::Clockwise => Action::Anticlockwise,
            Action::Anticlockwise => Action::Clockwise,
        }
    }
}

/// Phase flag for algorithms that run the orientation-unifying preprocessing
/// before a chirality-based algorithm.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    #[default]
    Initial,
    Chiral,
}

/// The small memory word a robot carries between stages and rounds.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Memory {
    /// Least label seen on the start node during preprocessing; only set
    /// between the compute stage and the end of that round.
    pub leader: Option<Label>,
    pub phase: Phase,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RobotState {
    pub label: Label,
    pub node: usize,
    pub orientation: Orientation,
    pub memory: Memory,
}

/// One robot's global move for a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveIntent {
    pub robot: Label,
    pub action: Action,
}

impl MoveIntent {
    pub fn new(robot: Label, action: Action) -> Self {
        Self { robot, action }
    }
}

/// Weak multiplicity of a node: what a robot can tell about nodes other than
/// its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Occupancy {
    Hole,
    Singleton,
    Multi,
}

impl Occupancy {
    pub fn of(count: usize) -> Self {
        match count {
            0 => Occupancy::Hole,
            1 => Occupancy::Singleton,
            _ => Occupancy::Multi,
        }
    }
}

/// Non-dispersed states of a four-node ring, by the shape of its occupancy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingOfFourState {
    /// One node holds all four robots.
    AllOnOne,
    /// A multinode of three and a singleton.
    TripleAndSingleton,
    /// A multinode of two and two singletons.
    PairAndTwoSingletons,
    /// Two multinodes of two.
    TwoPairs,
    Dispersed,
}

impl RingOfFourState {
    /// The 1–4 numbering used when discussing the four-node algorithm.
    pub fn number(self) -> Option<u8> {
        match self {
            RingOfFourState::AllOnOne => Some(1),
            RingOfFourState::TripleAndSingleton => Some(2),
            RingOfFourState::PairAndTwoSingletons => Some(3),
            RingOfFourState::TwoPairs => Some(4),
            RingOfFourState::Dispersed => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Metrics {
    pub holes: usize,
    pub singletons: usize,
    pub multinodes: usize,
    pub dispersed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring_of_four: Option<RingOfFourState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingConfiguration {
    slots: Vec<Vec<Label>>,
    missing_edge: Option<usize>,
}

impl RingConfiguration {
    /// Builds a configuration from explicit slot contents. Slot order is
    /// clockwise; robots within a slot are kept sorted by label.
    pub fn new(mut slots: Vec<Vec<Label>>) -> Result<Self, ConfigError> {
        if slots.is_empty() {
            return Err(ConfigError::EmptyRing);
        }
        let mut seen = BTreeSet::new();
        for slot in &mut slots {
            slot.sort_unstable();
            for &label in slot.iter() {
                if label.0 == 0 {
                    return Err(ConfigError::ZeroLabel);
                }
                if !seen.insert(label) {
                    return Err(ConfigError::DuplicateLabel(label));
                }
            }
        }
        if seen.len() != slots.len() {
            return Err(ConfigError::RobotCountMismatch {
                nodes: slots.len(),
                robots: seen.len(),
            });
        }
        Ok(Self {
            slots,
            missing_edge: None,
        })
    }

    /// Labels robots `1..=n` in clockwise slot order.
    pub fn from_multiplicities(counts: &[usize]) -> Result<Self, ConfigError> {
        let total: usize = counts.iter().sum();
        let labels = (1..=total as u32).map(Label).collect::<Vec<_>>();
        Self::with_labels(counts, &labels)
    }

    /// Places `labels` in clockwise slot order according to `counts`.
    pub fn with_labels(counts: &[usize], labels: &[Label]) -> Result<Self, ConfigError> {
        let total: usize = counts.iter().sum();
        if total != labels.len() {
            return Err(ConfigError::LengthMismatch {
                expected: total,
                got: labels.len(),
            });
        }
        let mut rest = labels;
        let mut slots = Vec::with_capacity(counts.len());
        for &c in counts {
            let (here, tail) = rest.split_at(c);
            slots.push(here.to_vec());
            rest = tail;
        }
        Self::new(slots)
    }

    #[cfg(test)]
    pub(crate) fn from_parts(slots: Vec<Vec<Label>>, missing_edge: Option<usize>) -> Self {
        Self {
            slots,
            missing_edge,
        }
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Vec<Label>] {
        &self.slots
    }

    pub fn slot(&self, position: usize) -> &[Label] {
        &self.slots[position]
    }

    pub fn count(&self, position: usize) -> usize {
        self.slots[position].len()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.slots.iter().map(Vec::len).collect()
    }

    pub fn occupancy(&self, position: usize) -> Occupancy {
        Occupancy::of(self.count(position))
    }

    pub fn missing_edge(&self) -> Option<usize> {
        self.missing_edge
    }

    pub fn without_missing_edge(mut self) -> Self {
        self.missing_edge = None;
        self
    }

    /// Position `steps` away from `from`, clockwise.
    pub fn offset(&self, from: usize, steps: isize) -> usize {
        (from as isize + steps).rem_euclid(self.n() as isize) as usize
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.slots.iter().flatten().copied()
    }

    pub fn position_of(&self, label: Label) -> Option<usize> {
        self.slots
            .iter()
            .position(|s| s.binary_search(&label).is_ok())
    }

    /// Edge crossed by a global step from `from`, if the step moves at all.
    pub fn edge_crossed(&self, from: usize, action: Action) -> Option<usize> {
        match action {
            Action::Stay => None,
            Action::Clockwise => Some(from),
            Action::Anticlockwise => Some(self.offset(from, -1)),
        }
    }

    /// Moves every node to a new position: the node at `i` ends up at
    /// `perm[i]`, robots riding along. Any missing edge is cleared, since the
    /// edge removal of a round is chosen after its permutation.
    pub fn apply_vertex_permutation(&self, perm: &[usize]) -> Result<Self, ConfigError> {
        let n = self.n();
        if perm.len() != n {
            return Err(ConfigError::PermutationLength { len: perm.len(), n });
        }
        let mut slots: Vec<Option<Vec<Label>>> = vec![None; n];
        for (i, &target) in perm.iter().enumerate() {
            if target >= n {
                return Err(ConfigError::NotABijection(target));
            }
            if slots[target].is_some() {
                return Err(ConfigError::NotABijection(target));
            }
            slots[target] = Some(self.slots[i].clone());
        }
        Ok(Self {
            slots: slots.into_iter().map(Option::unwrap).collect(),
            missing_edge: None,
        })
    }

    /// Removes `edge` for this round. At most one edge may be missing.
    pub fn apply_edge_removal(&self, edge: Option<usize>) -> Result<Self, ConfigError> {
        let Some(e) = edge else {
            return Ok(self.clone());
        };
        if e >= self.n() {
            return Err(ConfigError::EdgeOutOfRange {
                edge: e,
                n: self.n(),
            });
        }
        if self.missing_edge.is_some() {
            return Err(ConfigError::EdgeAlreadyRemoved);
        }
        Ok(Self {
            slots: self.slots.clone(),
            missing_edge: Some(e),
        })
    }

    /// Applies all intents simultaneously. A step across the missing edge
    /// leaves the robot where it is; robots without an intent stay. The
    /// result has no missing edge, as removals last one round.
    pub fn resolve_moves(&self, intents: &[MoveIntent]) -> Self {
        let actions: BTreeMap<Label, Action> =
            intents.iter().map(|i| (i.robot, i.action)).collect();
        let mut slots = vec![Vec::new(); self.n()];
        for (p, slot) in self.slots.iter().enumerate() {
            for &label in slot {
                let action = actions.get(&label).copied().unwrap_or(Action::Stay);
                let target = match self.edge_crossed(p, action) {
                    Some(e) if Some(e) == self.missing_edge => p,
                    Some(_) if action == Action::Clockwise => self.offset(p, 1),
                    Some(_) => self.offset(p, -1),
                    None => p,
                };
                slots[target].push(label);
            }
        }
        for slot in &mut slots {
            slot.sort_unstable();
        }
        Self {
            slots,
            missing_edge: None,
        }
    }

    pub fn is_dispersed(&self) -> bool {
        self.slots.iter().all(|s| s.len() == 1)
    }

    pub fn classify(&self) -> Metrics {
        let mut holes = 0;
        let mut singletons = 0;
        let mut multinodes = 0;
        for s in &self.slots {
            match s.len() {
                0 => holes += 1,
                1 => singletons += 1,
                _ => multinodes += 1,
            }
        }
        let dispersed = holes == 0 && multinodes == 0;
        let ring_of_four = (self.n() == 4).then(|| {
            let max = self.slots.iter().map(Vec::len).max().unwrap_or(0);
            match (max, multinodes) {
                (4, _) => RingOfFourState::AllOnOne,
                (3, _) => RingOfFourState::TripleAndSingleton,
                (2, 1) => RingOfFourState::PairAndTwoSingletons,
                (2, _) => RingOfFourState::TwoPairs,
                _ => RingOfFourState::Dispersed,
            }
        });
        Metrics {
            holes,
            singletons,
            multinodes,
            dispersed,
            ring_of_four,
        }
    }

    /// Rotates the ring so that position `r` becomes position 0.
    pub fn rotated(&self, r: usize) -> Self {
        let n = self.n();
        let mut slots = self.slots.clone();
        slots.rotate_left(r % n);
        let missing_edge = self.missing_edge.map(|e| (e + n - r % n) % n);
        Self {
            slots,
            missing_edge,
        }
    }
}

impl fmt::Display for RingConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s.len())?;
        }
        write!(f, "]")?;
        if let Some(e) = self.missing_edge {
            write!(f, " -e{e}")?;
        }
        Ok(())
    }
}

/// Ring configuration together with every robot's private state. Robots are
/// kept sorted by label and their `node` fields track the configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct World {
    config: RingConfiguration,
    robots: Vec<RobotState>,
}

impl World {
    /// `orientations` is indexed by robot in ascending label order.
    pub fn new(
        config: RingConfiguration,
        orientations: &[Orientation],
    ) -> Result<Self, ConfigError> {
        let mut labels: Vec<Label> = config.labels().collect();
        labels.sort_unstable();
        if orientations.len() != labels.len() {
            return Err(ConfigError::LengthMismatch {
                expected: labels.len(),
                got: orientations.len(),
            });
        }
        let robots = labels
            .into_iter()
            .zip(orientations)
            .map(|(label, &orientation)| RobotState {
                label,
                node: 0,
                orientation,
                memory: Memory::default(),
            })
            .collect();
        let mut world = Self { config, robots };
        world.sync_nodes();
        Ok(world)
    }

    pub fn aligned(config: RingConfiguration) -> Self {
        let n = config.n();
        Self::new(config, &vec![Orientation::Aligned; n]).expect("counts match by construction")
    }

    pub(crate) fn from_parts(config: RingConfiguration, robots: Vec<RobotState>) -> Self {
        let mut world = Self { config, robots };
        world.sync_nodes();
        world
    }

    pub fn config(&self) -> &RingConfiguration {
        &self.config
    }

    pub fn robots(&self) -> &[RobotState] {
        &self.robots
    }

    pub fn robots_mut(&mut self) -> &mut [RobotState] {
        &mut self.robots
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub fn robot(&self, label: Label) -> Option<&RobotState> {
        self.robots
            .binary_search_by_key(&label, |r| r.label)
            .ok()
            .map(|i| &self.robots[i])
    }

    pub fn orientations(&self) -> Vec<Orientation> {
        self.robots.iter().map(|r| r.orientation).collect()
    }

    /// Replaces the configuration (same robots, new placement).
    pub fn set_config(&mut self, config: RingConfiguration) {
        self.config = config;
        self.sync_nodes();
    }

    fn sync_nodes(&mut self) {
        for (p, slot) in self.config.slots().iter().enumerate() {
            for label in slot {
                if let Ok(i) = self.robots.binary_search_by_key(label, |r| r.label) {
                    self.robots[i].node = p;
                }
            }
        }
    }

    pub fn rotated(&self, r: usize) -> Self {
        Self::from_parts(self.config.rotated(r), self.robots.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[u32]) -> Vec<Label> {
        xs.iter().copied().map(Label).collect()
    }

    fn cfg(slots: &[&[u32]]) -> RingConfiguration {
        RingConfiguration::new(slots.iter().map(|s| labels(s)).collect()).unwrap()
    }

    fn intent(robot: u32, action: Action) -> MoveIntent {
        MoveIntent::new(Label(robot), action)
    }

    #[test]
    fn swap_permutation_moves_slot_contents() {
        let c = cfg(&[&[1, 2], &[3], &[]]);
        let p = c.apply_vertex_permutation(&[0, 2, 1]).unwrap();
        assert_eq!(p, cfg(&[&[1, 2], &[], &[3]]));
    }

    #[test]
    fn identity_permutation_is_a_no_op() {
        let c = cfg(&[&[1, 2], &[3], &[]]);
        assert_eq!(c.apply_vertex_permutation(&[0, 1, 2]).unwrap(), c);
    }

    #[test]
    fn rotation_by_one() {
        let c = cfg(&[&[1], &[2], &[3], &[4]]);
        let p = c.apply_vertex_permutation(&[1, 2, 3, 0]).unwrap();
        assert_eq!(p, cfg(&[&[4], &[1], &[2], &[3]]));
    }

    #[test]
    fn non_bijective_permutation_rejected() {
        let c = cfg(&[&[1, 2], &[3], &[]]);
        assert_eq!(
            c.apply_vertex_permutation(&[0, 0, 1]),
            Err(ConfigError::NotABijection(0))
        );
        assert!(matches!(
            c.apply_vertex_permutation(&[0, 1]),
            Err(ConfigError::PermutationLength { .. })
        ));
        assert!(matches!(
            c.apply_vertex_permutation(&[0, 1, 3]),
            Err(ConfigError::NotABijection(3))
        ));
    }

    #[test]
    fn permutation_clears_missing_edge() {
        let c = cfg(&[&[1, 2], &[3], &[]])
            .apply_edge_removal(Some(1))
            .unwrap();
        assert_eq!(
            c.apply_vertex_permutation(&[0, 1, 2])
                .unwrap()
                .missing_edge(),
            None
        );
    }

    #[test]
    fn edge_removal_rules() {
        let c = RingConfiguration::from_multiplicities(&[1, 1, 1, 1]).unwrap();
        assert_eq!(c.apply_edge_removal(None).unwrap(), c);
        let removed = c.apply_edge_removal(Some(3)).unwrap();
        assert_eq!(removed.missing_edge(), Some(3));
        // edge 3 joins positions 3 and 0
        assert_eq!(removed.edge_crossed(3, Action::Clockwise), Some(3));
        assert_eq!(removed.edge_crossed(0, Action::Anticlockwise), Some(3));
        assert_eq!(
            removed.apply_edge_removal(Some(1)),
            Err(ConfigError::EdgeAlreadyRemoved)
        );
        assert_eq!(
            c.apply_edge_removal(Some(4)),
            Err(ConfigError::EdgeOutOfRange { edge: 4, n: 4 })
        );
    }

    #[test]
    fn simultaneous_chain_fill() {
        let c = cfg(&[&[1, 2], &[3], &[]]);
        let next = c.resolve_moves(&[
            intent(1, Action::Clockwise),
            intent(2, Action::Stay),
            intent(3, Action::Clockwise),
        ]);
        assert_eq!(next.multiplicities(), vec![1, 1, 1]);
    }

    #[test]
    fn all_stay_is_identity() {
        let c = cfg(&[&[1, 2], &[3], &[]]);
        let stays: Vec<_> = (1..=3).map(|l| intent(l, Action::Stay)).collect();
        assert_eq!(c.resolve_moves(&stays), c);
    }

    #[test]
    fn blocked_step_stays_put() {
        let c = cfg(&[&[1, 2], &[]]).apply_edge_removal(Some(0)).unwrap();
        let next = c.resolve_moves(&[intent(1, Action::Clockwise), intent(2, Action::Stay)]);
        assert_eq!(next, cfg(&[&[1, 2], &[]]));
        // the parallel edge of a two-node ring is still there
        let next = c.resolve_moves(&[intent(1, Action::Anticlockwise), intent(2, Action::Stay)]);
        assert_eq!(next, cfg(&[&[2], &[1]]));
    }

    #[test]
    fn classification_counts() {
        let m = RingConfiguration::from_multiplicities(&[2, 1, 0])
            .unwrap()
            .classify();
        assert_eq!(
            (m.holes, m.singletons, m.multinodes, m.dispersed),
            (1, 1, 1, false)
        );
        assert!(
            RingConfiguration::from_multiplicities(&[1, 1, 1, 1])
                .unwrap()
                .classify()
                .dispersed
        );
        let four = RingConfiguration::from_multiplicities(&[3, 1, 0, 0])
            .unwrap()
            .classify();
        assert_eq!(four.ring_of_four, Some(RingOfFourState::TripleAndSingleton));
        assert_eq!(four.ring_of_four.unwrap().number(), Some(2));
    }

    #[test]
    fn ring_of_four_states() {
        let state = |m: &[usize]| {
            RingConfiguration::from_multiplicities(m)
                .unwrap()
                .classify()
                .ring_of_four
                .unwrap()
        };
        assert_eq!(state(&[4, 0, 0, 0]), RingOfFourState::AllOnOne);
        assert_eq!(state(&[2, 1, 0, 1]), RingOfFourState::PairAndTwoSingletons);
        assert_eq!(state(&[2, 0, 2, 0]), RingOfFourState::TwoPairs);
        assert_eq!(state(&[1, 1, 1, 1]), RingOfFourState::Dispersed);
    }

    #[test]
    fn invalid_configurations() {
        assert_eq!(RingConfiguration::new(vec![]), Err(ConfigError::EmptyRing));
        assert!(matches!(
            RingConfiguration::from_multiplicities(&[2, 0, 0]),
            Err(ConfigError::RobotCountMismatch {
                nodes: 3,
                robots: 2
            })
        ));
        assert_eq!(
            RingConfiguration::new(vec![labels(&[1, 1]), vec![]]),
            Err(ConfigError::DuplicateLabel(Label(1)))
        );
    }

    #[test]
    fn world_tracks_nodes() {
        let mut w = World::aligned(cfg(&[&[1, 2], &[3], &[]]));
        assert_eq!(w.robot(Label(3)).unwrap().node, 1);
        w.set_config(cfg(&[&[1], &[2], &[3]]));
        assert_eq!(w.robot(Label(2)).unwrap().node, 1);
        assert_eq!(w.robot(Label(3)).unwrap().node, 2);
    }
}
