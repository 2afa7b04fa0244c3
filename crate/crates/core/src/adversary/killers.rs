//! Adaptive adversaries that keep robots without visibility from ever
//! dispersing. A robot that sees nothing beyond its own node decides the same
//! way wherever its node is placed, so these adversaries read the committed
//! intents first and then arrange the ring (or cut an edge) against them.

use std::collections::HashMap;

use super::{Adversary, AdversaryContext, Dynamism, Mode};
use crate::error::AdversaryError;
use crate::ring::{Action, Label, MoveIntent, RingConfiguration};

/// How the robots of one node are about to move, in the ring's frame.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct NodeMoves {
    stay: usize,
    cw: usize,
    acw: usize,
}

impl NodeMoves {
    fn count(&self) -> usize {
        self.stay + self.cw + self.acw
    }

    /// Two robots leaving in opposite directions.
    fn splits(&self) -> bool {
        self.cw == 1 && self.acw == 1 && self.stay == 0
    }

    /// One robot leaving, one staying.
    fn sheds_one(&self) -> bool {
        self.stay == 1 && self.cw + self.acw == 1
    }
}

fn node_moves(cfg: &RingConfiguration, intents: &[MoveIntent]) -> Vec<NodeMoves> {
    let by_label: HashMap<Label, Action> = intents.iter().map(|i| (i.robot, i.action)).collect();
    cfg.slots()
        .iter()
        .map(|slot| {
            let mut m = NodeMoves::default();
            for label in slot {
                match by_label.get(label).copied().unwrap_or(Action::Stay) {
                    Action::Stay => m.stay += 1,
                    Action::Clockwise => m.cw += 1,
                    Action::Anticlockwise => m.acw += 1,
                }
            }
            m
        })
        .collect()
}

/// Robot counts after moves when the nodes are placed clockwise in the
/// order `arrangement` (entries are original positions).
fn counts_after(moves: &[NodeMoves], arrangement: &[usize]) -> Vec<usize> {
    let n = arrangement.len();
    (0..n)
        .map(|q| {
            let here = moves[arrangement[q]];
            let left = moves[arrangement[(q + n - 1) % n]];
            let right = moves[arrangement[(q + 1) % n]];
            if n == 1 {
                return here.count();
            }
            // on a two-node ring both neighbours are the same node
            here.stay + left.cw + right.acw
        })
        .collect()
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn permutation_of(arrangement: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; arrangement.len()];
    for (q, &i) in arrangement.iter().enumerate() {
        perm[i] = q;
    }
    perm
}

fn swapped(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut arrangement = identity(n);
    arrangement.swap(a, b);
    arrangement
}

/// Places `block` consecutively, starting at the position of `block[0]`, with
/// the remaining nodes following in their original clockwise order.
fn arrange_block(n: usize, block: &[usize]) -> Vec<usize> {
    let start = block[0];
    let rest = (1..=n)
        .map(|d| (start + d) % n)
        .filter(|i| !block.contains(i));
    let seq: Vec<usize> = block.iter().copied().chain(rest).collect();
    let mut arrangement = vec![0; n];
    for (d, &i) in seq.iter().enumerate() {
        arrangement[(start + d) % n] = i;
    }
    arrangement
}

fn is_dispersed(counts: &[usize]) -> bool {
    counts.iter().all(|&c| c == 1)
}

fn is_neutral(counts: &[usize]) -> bool {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    sorted == [0, 1, 2]
}

fn require_vp(ctx: &AdversaryContext<'_>, adversary: &'static str) -> Result<(), AdversaryError> {
    if ctx.mode.allows_permutation() {
        Ok(())
    } else {
        Err(AdversaryError::ModeMismatch {
            adversary,
            mode: ctx.mode.to_string(),
        })
    }
}

fn permutation(arrangement: Vec<usize>) -> Dynamism {
    if arrangement.iter().enumerate().all(|(q, &i)| q == i) {
        Dynamism::none()
    } else {
        Dynamism::permute(permutation_of(&arrangement))
    }
}

/// Keeps a three-node ring in a neutral configuration (one hole, one
/// multinode of two, one singleton) forever.
#[derive(Debug, Clone, Copy, Default)]
pub struct VpKillerN3;

impl VpKillerN3 {
    const NAME: &'static str = "vp-killer-n3";

    pub fn plan(ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError> {
        require_vp(ctx, Self::NAME)?;
        let cfg = ctx.config;
        let n = cfg.n();
        if n != 3 {
            return Err(AdversaryError::RingSize {
                adversary: Self::NAME,
                expected: "3",
                n,
            });
        }
        let intents = ctx.intents(Self::NAME)?;
        let counts = cfg.multiplicities();
        if counts.contains(&3) {
            return Err(AdversaryError::Gathered);
        }
        if cfg.is_dispersed() {
            return Err(AdversaryError::AlreadyDispersed);
        }
        let moves = node_moves(cfg, intents);
        let m = counts
            .iter()
            .position(|&c| c == 2)
            .ok_or(AdversaryError::NotNeutral)?;
        let s = counts
            .iter()
            .position(|&c| c == 1)
            .ok_or(AdversaryError::NotNeutral)?;
        let h = counts
            .iter()
            .position(|&c| c == 0)
            .ok_or(AdversaryError::NotNeutral)?;

        let plain = counts_after(&moves, &identity(n));
        let arrangement = if is_neutral(&plain) {
            identity(n)
        } else if plain.contains(&3) {
            swapped(n, m, s)
        } else if moves[m].sheds_one() && moves[s].stay == 1 {
            swapped(n, m, h)
        } else {
            swapped(n, s, h)
        };
        if !is_neutral(&counts_after(&moves, &arrangement)) {
            return Err(AdversaryError::StrategyFailed(Self::NAME));
        }
        Ok(permutation(arrangement))
    }
}

impl Adversary for VpKillerN3 {
    fn is_adaptive(&self) -> bool {
        true
    }

    fn choose(&mut self, ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError> {
        Self::plan(ctx)
    }
}

/// Vertex-permutation adversary for rings of four or more nodes: whenever
/// the robots' moves would disperse, it rearranges the nodes so that a hole or
/// a multinode survives the round.
#[derive(Debug, Clone, Copy, Default)]
pub struct VpKiller;

impl VpKiller {
    const NAME: &'static str = "vp-killer";

    pub fn plan(ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError> {
        require_vp(ctx, Self::NAME)?;
        let cfg = ctx.config;
        let n = cfg.n();
        if n < 4 {
            return Err(AdversaryError::RingSize {
                adversary: Self::NAME,
                expected: "4 or more",
                n,
            });
        }
        let intents = ctx.intents(Self::NAME)?;
        if cfg.is_dispersed() {
            return Err(AdversaryError::AlreadyDispersed);
        }
        let moves = node_moves(cfg, intents);
        if !is_dispersed(&counts_after(&moves, &identity(n))) {
            return Ok(Dynamism::none());
        }
        let counts = cfg.multiplicities();
        let holes: Vec<usize> = (0..n).filter(|&p| counts[p] == 0).collect();
        let multis: Vec<usize> = (0..n).filter(|&p| counts[p] >= 2).collect();
        let arrangement = match (holes.len(), multis.as_slice()) {
            (1, &[m]) => Self::one_hole(cfg, &moves, m, holes[0])?,
            (2, &[m]) => Self::triple(cfg, &moves, m, &holes),
            (2, &[m1, m2]) => Self::two_pairs(n, &moves, m1, m2, holes[0])?,
            (h, _) if h >= 3 => arrange_block(n, &holes),
            _ => return Err(AdversaryError::StrategyFailed(Self::NAME)),
        };
        if is_dispersed(&counts_after(&moves, &arrangement)) {
            return Err(AdversaryError::StrategyFailed(Self::NAME));
        }
        Ok(permutation(arrangement))
    }

    fn one_hole(
        cfg: &RingConfiguration,
        moves: &[NodeMoves],
        m: usize,
        h: usize,
    ) -> Result<Vec<usize>, AdversaryError> {
        let n = cfg.n();
        let (left, right) = (cfg.offset(m, -1), cfg.offset(m, 1));
        if moves[m].stay == 0 {
            // both robots leave and a neighbour refills the multinode
            let donor = if moves[left].cw > 0 { left } else { right };
            Ok(swapped(n, h, donor))
        } else if moves[m].sheds_one() {
            Ok(swapped(n, m, h))
        } else {
            Err(AdversaryError::StrategyFailed(Self::NAME))
        }
    }

    /// Two holes and a single multinode of three robots.
    fn triple(
        cfg: &RingConfiguration,
        moves: &[NodeMoves],
        m: usize,
        holes: &[usize],
    ) -> Vec<usize> {
        let n = cfg.n();
        let fed_by_singleton = holes.iter().copied().find(|&h| {
            let (left, right) = (cfg.offset(h, -1), cfg.offset(h, 1));
            (left != m && moves[left].cw > 0) || (right != m && moves[right].acw > 0)
        });
        swapped(n, m, fed_by_singleton.unwrap_or(holes[0]))
    }

    /// Two holes and two multinodes of two robots each.
    fn two_pairs(
        n: usize,
        moves: &[NodeMoves],
        m1: usize,
        m2: usize,
        hole: usize,
    ) -> Result<Vec<usize>, AdversaryError> {
        let (a, b) = (moves[m1], moves[m2]);
        let block = match (a.splits(), b.splits(), a.sheds_one(), b.sheds_one()) {
            (true, true, _, _) => vec![m1, hole, m2],
            (_, _, true, true) if a.cw == 1 => vec![m1, m2],
            (_, _, true, true) => vec![m2, m1],
            // the splitting pair feeds the pair that keeps a robot
            (true, _, _, true) => vec![m1, m2],
            (_, true, true, _) => vec![m2, m1],
            _ => return Err(AdversaryError::StrategyFailed(Self::NAME)),
        };
        Ok(arrange_block(n, &block))
    }
}

impl Adversary for VpKiller {
    fn is_adaptive(&self) -> bool {
        true
    }

    fn choose(&mut self, ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError> {
        Self::plan(ctx)
    }
}

/// Edge-removal adversary: when the robots' moves would disperse, it cuts the
/// edge the lowest-indexed hole would be filled through.
#[derive(Debug, Clone, Copy, Default)]
pub struct OneIntervalKiller;

impl OneIntervalKiller {
    const NAME: &'static str = "one-interval-killer";

    pub fn plan(ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError> {
        if !ctx.mode.allows_removal() {
            return Err(AdversaryError::ModeMismatch {
                adversary: Self::NAME,
                mode: ctx.mode.to_string(),
            });
        }
        let cfg = ctx.config;
        let n = cfg.n();
        if n < 2 {
            return Err(AdversaryError::RingSize {
                adversary: Self::NAME,
                expected: "2 or more",
                n,
            });
        }
        let intents = ctx.intents(Self::NAME)?;
        if cfg.is_dispersed() {
            return Err(AdversaryError::AlreadyDispersed);
        }
        let plain = cfg.clone().without_missing_edge();
        if !plain.resolve_moves(intents).is_dispersed() {
            return Ok(Dynamism::none());
        }
        let hole = (0..n)
            .find(|&p| cfg.count(p) == 0)
            .ok_or(AdversaryError::StrategyFailed(Self::NAME))?;
        let edge = intents
            .iter()
            .find_map(|i| {
                let from = cfg.position_of(i.robot)?;
                let target = match i.action {
                    Action::Stay => return None,
                    Action::Clockwise => cfg.offset(from, 1),
                    Action::Anticlockwise => cfg.offset(from, -1),
                };
                (target == hole)
                    .then(|| cfg.edge_crossed(from, i.action))
                    .flatten()
            })
            .ok_or(AdversaryError::StrategyFailed(Self::NAME))?;
        let cut = plain
            .apply_edge_removal(Some(edge))
            .expect("edge in range")
            .resolve_moves(intents);
        if cut.is_dispersed() {
            return Err(AdversaryError::StrategyFailed(Self::NAME));
        }
        Ok(Dynamism::remove(edge))
    }
}

impl Adversary for OneIntervalKiller {
    fn is_adaptive(&self) -> bool {
        true
    }

    fn choose(&mut self, ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError> {
        Self::plan(ctx)
    }
}

/// Every way of assigning one of the three actions to each robot of `cfg`.
pub fn all_intent_vectors(cfg: &RingConfiguration) -> impl Iterator<Item = Vec<MoveIntent>> + '_ {
    let mut labels: Vec<Label> = cfg.labels().collect();
    labels.sort_unstable();
    let total = 3usize.pow(labels.len() as u32);
    (0..total).map(move |mut code| {
        labels
            .iter()
            .map(|&robot| {
                let action = Action::ALL[code % 3];
                code /= 3;
                MoveIntent::new(robot, action)
            })
            .collect()
    })
}

/// The killer applicable to `n` under `mode`, if any.
pub fn killer_for(n: usize, mode: Mode) -> Option<Box<dyn Adversary>> {
    match mode {
        Mode::Vp | Mode::Combined if n == 3 => Some(Box::new(VpKillerN3)),
        Mode::Vp | Mode::Combined if n >= 4 => Some(Box::new(VpKiller)),
        Mode::OneInterval => Some(Box::new(OneIntervalKiller)),
        _ => None,
    }
}
