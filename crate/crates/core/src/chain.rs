//! Chains: a multinode, zero or more singletons, then a hole, walked in one
//! direction. A chain is good when none of its edges is the missing edge.

use serde::{Deserialize, Serialize};

use crate::ring::{Action, Occupancy, RingConfiguration};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Clockwise,
    Anticlockwise,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Clockwise => Direction::Anticlockwise,
            Direction::Anticlockwise => Direction::Clockwise,
        }
    }

    pub fn step(self) -> isize {
        match self {
            Direction::Clockwise => 1,
            Direction::Anticlockwise => -1,
        }
    }

    pub fn action(self) -> Action {
        match self {
            Direction::Clockwise => Action::Clockwise,
            Direction::Anticlockwise => Action::Anticlockwise,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chain {
    pub direction: Direction,
    pub multinode: usize,
    pub singletons: Vec<usize>,
    pub hole: usize,
    pub good: bool,
}

impl Chain {
    /// Number of singleton nodes between the multinode and the hole.
    pub fn len(&self) -> usize {
        self.singletons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singletons.is_empty()
    }

    pub fn contains(&self, position: usize) -> bool {
        self.multinode == position || self.hole == position || self.singletons.contains(&position)
    }
}

/// All chains of a ring given as weak multiplicities, in both directions.
/// Each multinode anchors at most one chain per direction.
pub fn find_chains_in(occupancy: &[Occupancy], missing_edge: Option<usize>) -> Vec<Chain> {
    let n = occupancy.len();
    let mut chains = Vec::new();
    for (m, occ) in occupancy.iter().enumerate() {
        if *occ != Occupancy::Multi {
            continue;
        }
        for direction in [Direction::Clockwise, Direction::Anticlockwise] {
            if let Some(chain) = walk(occupancy, missing_edge, m, direction, n) {
                chains.push(chain);
            }
        }
    }
    chains
}

fn walk(
    occupancy: &[Occupancy],
    missing_edge: Option<usize>,
    m: usize,
    direction: Direction,
    n: usize,
) -> Option<Chain> {
    let at = |steps: usize| {
        (m as isize + direction.step() * steps as isize).rem_euclid(n as isize) as usize
    };
    let mut singletons = Vec::new();
    for steps in 1..n {
        let p = at(steps);
        match occupancy[p] {
            Occupancy::Singleton => singletons.push(p),
            Occupancy::Multi => return None,
            Occupancy::Hole => {
                // edges between consecutive chain nodes
                let good = match missing_edge {
                    None => true,
                    Some(e) => (0..steps).all(|i| {
                        let edge = match direction {
                            Direction::Clockwise => at(i),
                            Direction::Anticlockwise => at(i + 1),
                        };
                        edge != e
                    }),
                };
                return Some(Chain {
                    direction,
                    multinode: m,
                    singletons,
                    hole: p,
                    good,
                });
            }
        }
    }
    None
}

impl RingConfiguration {
    pub fn find_chains(&self) -> Vec<Chain> {
        let occ: Vec<Occupancy> = (0..self.n()).map(|p| self.occupancy(p)).collect();
        find_chains_in(&occ, self.missing_edge())
    }
}
