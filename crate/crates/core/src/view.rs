//! What a robot perceives in the look stage, always in its own frame.
//!
//! [`View`] is the k-limited vector of distances. With full visibility a
//! robot additionally gets a [`LocalRing`]: the weak multiplicity of every
//! node and the missing edge, indexed by own-clockwise distance from its node.
//! Neither exposes absolute positions.

use std::hash::{DefaultHasher, Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::chain::{find_chains_in, Chain, Direction};
use crate::ring::{Label, Occupancy, Orientation, RingConfiguration, RobotState};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct View {
    /// Gaps between consecutive occupied nodes, walking own-clockwise.
    pub clockwise: Vec<usize>,
    pub anti_clockwise: Vec<usize>,
    /// Own-clockwise distances of multinodes within range, or `[-1]`.
    pub multiplicity: Vec<i64>,
    /// Own-clockwise distance to the nearer endpoint of the missing edge.
    pub missing_edge: Option<usize>,
    pub own_count: usize,
    pub least_label_here: Label,
    pub is_least: bool,
    pub is_second_least: bool,
}

impl View {
    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

/// Whether `k` gives full visibility on a ring of `n` nodes.
pub fn is_full_visibility(k: usize, n: usize) -> bool {
    2 * k >= n
}

fn global_position(
    cfg: &RingConfiguration,
    node: usize,
    orientation: Orientation,
    d: isize,
) -> usize {
    match orientation {
        Orientation::Aligned => cfg.offset(node, d),
        Orientation::Reversed => cfg.offset(node, -d),
    }
}

/// Own-clockwise distance from `node` to global position `target`.
fn own_distance(n: usize, node: usize, orientation: Orientation, target: usize) -> usize {
    match orientation {
        Orientation::Aligned => (target + n - node) % n,
        Orientation::Reversed => (node + n - target) % n,
    }
}

pub fn compute_view(cfg: &RingConfiguration, robot: &RobotState, k: usize) -> View {
    let n = cfg.n();
    let node = robot.node;
    let reach = k.min(n - 1);
    let gaps = |sign: isize| {
        let mut gaps = Vec::new();
        let mut last = 0;
        for d in 1..=reach {
            let p = global_position(cfg, node, robot.orientation, sign * d as isize);
            if cfg.count(p) > 0 {
                gaps.push(d - last);
                last = d;
            }
        }
        gaps
    };
    let clockwise = gaps(1);
    let anti_clockwise = gaps(-1);

    let mut multiplicity: Vec<i64> = (0..=reach)
        .filter(|&d| cfg.count(global_position(cfg, node, robot.orientation, d as isize)) >= 2)
        .map(|d| d as i64)
        .collect();
    if multiplicity.is_empty() {
        multiplicity.push(-1);
    }

    let missing_edge = cfg.missing_edge().and_then(|e| {
        let ends = [e, (e + 1) % n];
        let cw = ends.map(|x| own_distance(n, node, robot.orientation, x));
        let visible = cw.iter().any(|&d| d.min(n - d) <= k);
        visible.then(|| cw[0].min(cw[1]))
    });

    let here = cfg.slot(node);
    View {
        clockwise,
        anti_clockwise,
        multiplicity,
        missing_edge,
        own_count: here.len(),
        least_label_here: here[0],
        is_least: here[0] == robot.label,
        is_second_least: here.get(1) == Some(&robot.label),
    }
}

/// Full-visibility snapshot anchored at the observer's node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalRing {
    occupancy: Vec<Occupancy>,
    /// Local edge `d` joins local positions `d` and `d + 1`.
    missing_edge: Option<usize>,
}

impl LocalRing {
    pub fn observe(cfg: &RingConfiguration, node: usize, orientation: Orientation) -> Self {
        let n = cfg.n();
        let occupancy = (0..n)
            .map(|d| cfg.occupancy(global_position(cfg, node, orientation, d as isize)))
            .collect();
        let missing_edge = cfg.missing_edge().map(|e| match orientation {
            Orientation::Aligned => (e + n - node) % n,
            Orientation::Reversed => (2 * n + node - e - 1) % n,
        });
        Self {
            occupancy,
            missing_edge,
        }
    }

    pub fn n(&self) -> usize {
        self.occupancy.len()
    }

    pub fn occupancy(&self, d: usize) -> Occupancy {
        self.occupancy[d % self.n()]
    }

    pub fn own(&self) -> Occupancy {
        self.occupancy[0]
    }

    pub fn missing_edge(&self) -> Option<usize> {
        self.missing_edge
    }

    pub fn has_multinode(&self) -> bool {
        self.occupancy.contains(&Occupancy::Multi)
    }

    pub fn chains(&self) -> Vec<Chain> {
        find_chains_in(&self.occupancy, self.missing_edge)
    }

    /// Chains as seen from the observer's node.
    pub fn chains_here(&self) -> ChainsHere {
        let all = self.chains();
        let anchored = |dir| {
            all.iter()
                .find(|c| c.multinode == 0 && c.direction == dir)
                .cloned()
        };
        let clockwise = anchored(Direction::Clockwise);
        let anticlockwise = anchored(Direction::Anticlockwise);
        let through = all.iter().find(|c| c.singletons.contains(&0)).cloned();
        let partner = through.as_ref().and_then(|c| {
            all.iter()
                .find(|o| o.multinode == c.multinode && o.direction == c.direction.opposite())
                .cloned()
        });
        ChainsHere {
            clockwise,
            anticlockwise,
            through,
            partner,
        }
    }
}

/// The chains that involve the observer's node.
#[derive(Debug, Clone, Default)]
pub struct ChainsHere {
    /// Chains anchored at the observer's node, when it is a multinode.
    pub clockwise: Option<Chain>,
    pub anticlockwise: Option<Chain>,
    /// The chain passing through the observer's node, when it is a singleton.
    pub through: Option<Chain>,
    /// The other chain anchored at `through`'s multinode, if any.
    pub partner: Option<Chain>,
}

impl ChainsHere {
    pub fn good_anchored(&self) -> Vec<&Chain> {
        [&self.clockwise, &self.anticlockwise]
            .into_iter()
            .flatten()
            .filter(|c| c.good)
            .collect()
    }

    pub fn good_partner(&self) -> Option<&Chain> {
        self.partner.as_ref().filter(|c| c.good)
    }
}

/// Everything a robot gets from its look stage.
#[derive(Debug, Clone)]
pub struct Observation {
    pub view: View,
    /// Present only with full visibility.
    pub ring: Option<LocalRing>,
}

pub fn observe(cfg: &RingConfiguration, robot: &RobotState, k: usize) -> Observation {
    let view = compute_view(cfg, robot, k);
    let ring = is_full_visibility(k, cfg.n())
        .then(|| LocalRing::observe(cfg, robot.node, robot.orientation));
    Observation { view, ring }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Label, Memory, World};

    /// A snapshot that need not hold exactly `n` robots; views only read
    /// occupancy.
    fn snapshot(counts: &[usize]) -> RingConfiguration {
        let mut next = 0;
        let slots = counts
            .iter()
            .map(|&c| {
                next += c as u32;
                (next + 1 - c as u32..=next).map(Label).collect()
            })
            .collect();
        RingConfiguration::from_parts(slots, None)
    }

    fn robot_at(cfg: &RingConfiguration, node: usize, orientation: Orientation) -> RobotState {
        RobotState {
            label: cfg.slot(node)[0],
            node,
            orientation,
            memory: Memory::default(),
        }
    }

    #[test]
    fn view_distances() {
        let cfg = snapshot(&[1, 0, 2, 0, 0, 1]);
        let v = compute_view(&cfg, &robot_at(&cfg, 0, Orientation::Aligned), 3);
        assert_eq!(v.clockwise, vec![2]);
        assert_eq!(v.anti_clockwise, vec![1]);
        assert_eq!(v.multiplicity, vec![2]);
        assert_eq!(v.missing_edge, None);
    }

    #[test]
    fn no_visibility_view() {
        let cfg = RingConfiguration::from_multiplicities(&[1, 0, 2]).unwrap();
        let v = compute_view(&cfg, &robot_at(&cfg, 0, Orientation::Aligned), 0);
        assert!(v.clockwise.is_empty() && v.anti_clockwise.is_empty());
        assert_eq!(v.multiplicity, vec![-1]);
        assert_eq!(v.own_count, 1);
        assert!(v.is_least);
    }

    #[test]
    fn missing_edge_nearest_endpoint() {
        let cfg = RingConfiguration::from_multiplicities(&[1, 0, 1, 1, 1, 2])
            .unwrap()
            .apply_edge_removal(Some(4))
            .unwrap();
        let robot = robot_at(&cfg, 3, Orientation::Aligned);
        assert_eq!(compute_view(&cfg, &robot, 6).missing_edge, Some(1));
        // out of range at k = 0: both endpoints are at least one hop away
        assert_eq!(compute_view(&cfg, &robot, 0).missing_edge, None);
    }

    #[test]
    fn multinode_rank_flags() {
        let cfg = RingConfiguration::from_multiplicities(&[3, 0, 0]).unwrap();
        let w = World::aligned(cfg.clone());
        let views: Vec<_> = w
            .robots()
            .iter()
            .map(|r| compute_view(&cfg, r, 0))
            .collect();
        assert!(views[0].is_least && !views[0].is_second_least);
        assert!(!views[1].is_least && views[1].is_second_least);
        assert!(!views[2].is_least && !views[2].is_second_least);
        assert!(views
            .iter()
            .all(|v| v.own_count == 3 && v.multiplicity == vec![0]));
    }

    #[test]
    fn reversed_view_swaps_directions() {
        let cfg = snapshot(&[1, 0, 2, 0, 0, 1]);
        let a = compute_view(&cfg, &robot_at(&cfg, 0, Orientation::Aligned), 6);
        let r = compute_view(&cfg, &robot_at(&cfg, 0, Orientation::Reversed), 6);
        assert_eq!(a.clockwise, r.anti_clockwise);
        assert_eq!(a.anti_clockwise, r.clockwise);
        assert_eq!(r.multiplicity, vec![4]);
    }

    #[test]
    fn local_ring_reversed_edge_index() {
        let cfg = RingConfiguration::from_multiplicities(&[2, 1, 1, 0])
            .unwrap()
            .apply_edge_removal(Some(3))
            .unwrap();
        let aligned = LocalRing::observe(&cfg, 0, Orientation::Aligned);
        assert_eq!(aligned.missing_edge(), Some(3));
        let reversed = LocalRing::observe(&cfg, 0, Orientation::Reversed);
        // global edge 3 joins 3 and 0: locally that is the edge between 0 and 1
        assert_eq!(reversed.missing_edge(), Some(0));
        assert_eq!(reversed.occupancy(1), Occupancy::Hole);
        assert_eq!(reversed.occupancy(3), Occupancy::Singleton);
    }
}
