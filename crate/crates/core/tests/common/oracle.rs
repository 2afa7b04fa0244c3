//! A deliberately plain transcription of the dispersion pseudocode. It works
//! on global positions and global directions only: chains are found by
//! walking the multiplicity vector, and a robot's "clockwise" is resolved
//! through its orientation at the point of use.

use ring_dispersion::algorithms::PolicyKind;
use ring_dispersion::ring::{Action, Label, Memory, Orientation, Phase, World};

/// Global direction of travel, +1 clockwise or -1 anticlockwise.
type Dir = i64;

#[derive(Debug, Clone)]
pub struct Chain {
    pub multinode: usize,
    pub dir: Dir,
    pub singletons: Vec<usize>,
    pub hole: usize,
    pub good: bool,
}

impl Chain {
    fn len(&self) -> usize {
        self.singletons.len()
    }
}

fn step(n: usize, from: usize, dir: Dir) -> usize {
    (from as i64 + dir).rem_euclid(n as i64) as usize
}

/// The edge crossed when stepping from `from` in direction `dir`.
fn edge(n: usize, from: usize, dir: Dir) -> usize {
    if dir > 0 {
        from
    } else {
        (from + n - 1) % n
    }
}

fn global(dir: Dir) -> Action {
    if dir > 0 {
        Action::Clockwise
    } else {
        Action::Anticlockwise
    }
}

/// Every chain in the ring: from each multinode, walk each way over
/// singletons until a hole.
pub fn all_chains(counts: &[usize], missing: Option<usize>) -> Vec<Chain> {
    let n = counts.len();
    let mut out = Vec::new();
    for m in 0..n {
        if counts[m] < 2 {
            continue;
        }
        for dir in [1, -1] {
            let mut singletons = Vec::new();
            let mut edges = vec![edge(n, m, dir)];
            let mut p = step(n, m, dir);
            while counts[p] == 1 && singletons.len() < n {
                singletons.push(p);
                edges.push(edge(n, p, dir));
                p = step(n, p, dir);
            }
            if counts[p] == 0 {
                let good = missing.is_none_or(|e| !edges.contains(&e));
                out.push(Chain {
                    multinode: m,
                    dir,
                    singletons,
                    hole: p,
                    good,
                });
            }
        }
    }
    out
}

struct Ring<'a> {
    n: usize,
    counts: Vec<usize>,
    chains: Vec<Chain>,
    world: &'a World,
}

impl Ring<'_> {
    fn least_at(&self, node: usize) -> Label {
        *self
            .world
            .config()
            .slot(node)
            .iter()
            .min()
            .expect("occupied")
    }

    fn has_multinode(&self) -> bool {
        self.counts.iter().any(|&c| c >= 2)
    }

    fn good_chain_through(&self, node: usize) -> Option<&Chain> {
        self.chains
            .iter()
            .find(|c| c.good && c.singletons.contains(&node))
    }

    fn good_chains_of(&self, multinode: usize) -> Vec<&Chain> {
        self.chains
            .iter()
            .filter(|c| c.good && c.multinode == multinode)
            .collect()
    }

    fn other_good_chain(&self, chain: &Chain) -> Option<&Chain> {
        self.chains
            .iter()
            .find(|c| c.good && c.multinode == chain.multinode && c.dir != chain.dir)
    }
}

fn own_clockwise(o: Orientation) -> Dir {
    match o {
        Orientation::Aligned => 1,
        Orientation::Reversed => -1,
    }
}

/// Algorithm: VP-Chain.
fn vp_chain(r: &Ring, node: usize, me: Label, o: Orientation) -> Action {
    if !r.has_multinode() {
        return Action::Stay;
    }
    let cw = own_clockwise(o);
    let on_cw_chain = r
        .chains
        .iter()
        .any(|c| c.dir == cw && (c.multinode == node || c.singletons.contains(&node)));
    if on_cw_chain && r.least_at(node) == me {
        global(cw)
    } else {
        Action::Stay
    }
}

/// Algorithm: VP-1-Interval-Chain.
fn vp_one_interval(r: &Ring, node: usize, me: Label, o: Orientation) -> Action {
    if !r.has_multinode() {
        return Action::Stay;
    }
    let cw = own_clockwise(o);
    if r.counts[node] == 1 {
        if let Some(chain) = r.good_chain_through(node) {
            let other_is_clockwise = r.other_good_chain(chain).is_some_and(|c| c.dir == cw);
            return if other_is_clockwise {
                Action::Stay
            } else {
                global(chain.dir)
            };
        }
        return Action::Stay;
    }
    if r.counts[node] >= 2 && r.least_at(node) == me {
        let good = r.good_chains_of(node);
        return match good.len() {
            2 => global(cw),
            1 => global(good[0].dir),
            _ => Action::Stay,
        };
    }
    Action::Stay
}

/// Algorithm: Achiral-Odd-VP-1-Interval-Chain.
fn achiral_odd(r: &Ring, node: usize, me: Label, o: Orientation) -> Action {
    if !r.has_multinode() {
        return Action::Stay;
    }
    if r.counts[node] == 1 {
        if let Some(chain) = r.good_chain_through(node) {
            let blocked = r
                .other_good_chain(chain)
                .is_some_and(|c| c.len() <= chain.len());
            return if blocked {
                Action::Stay
            } else {
                global(chain.dir)
            };
        }
        return Action::Stay;
    }
    if r.counts[node] >= 2 && r.least_at(node) == me {
        let good = r.good_chains_of(node);
        return match good.as_slice() {
            [a, b] if a.len() == b.len() => global(own_clockwise(o)),
            [a, b] => global(if a.len() < b.len() { a.dir } else { b.dir }),
            [a] => global(a.dir),
            _ => Action::Stay,
        };
    }
    Action::Stay
}

/// Algorithm: Achiral-Even4-VP-1-Interval-Chain, before all robots meet.
fn achiral_even4(r: &Ring, node: usize, me: Label, o: Orientation) -> Action {
    if r.counts[node] == 1 {
        if let Some(chain) = r.good_chain_through(node) {
            return match r.other_good_chain(chain) {
                Some(other) if other.len() < chain.len() => Action::Stay,
                Some(other) if other.len() == chain.len() => global(-chain.dir),
                _ => global(chain.dir),
            };
        }
        return Action::Stay;
    }
    if r.counts[node] >= 2 && r.least_at(node) == me {
        let good = r.good_chains_of(node);
        return match good.as_slice() {
            [a, b] if a.len() != b.len() => global(if a.len() < b.len() { a.dir } else { b.dir }),
            [_, _] => {
                let holes_both_sides =
                    r.counts[step(r.n, node, 1)] == 0 && r.counts[step(r.n, node, -1)] == 0;
                if holes_both_sides {
                    global(own_clockwise(o))
                } else {
                    Action::Stay
                }
            }
            [a] => global(a.dir),
            _ => Action::Stay,
        };
    }
    Action::Stay
}

/// Algorithm: No-Chir-Preprocess, the move half. The orientation check
/// happens after moving.
fn preprocess(r: &Ring, node: usize, memory: Memory, o: Orientation) -> (Action, Memory) {
    (
        global(own_clockwise(o)),
        Memory {
            leader: Some(r.least_at(node)),
            ..memory
        },
    )
}

/// What each robot does in the world as it stands (dynamism already
/// applied): its global action and its memory afterwards, in label order.
/// `None` marks a robot for which the policy has no defined behaviour.
pub fn decide(world: &World, policy: PolicyKind) -> Vec<Option<(Action, Memory)>> {
    let cfg = world.config();
    let counts = cfg.multiplicities();
    let ring = Ring {
        n: cfg.n(),
        chains: all_chains(&counts, cfg.missing_edge()),
        counts,
        world,
    };
    world
        .robots()
        .iter()
        .map(|robot| {
            let (node, me, o, memory) = (robot.node, robot.label, robot.orientation, robot.memory);
            let keep = |a| Some((a, memory));
            match policy {
                PolicyKind::VpChain => keep(vp_chain(&ring, node, me, o)),
                PolicyKind::VpOneInterval => keep(vp_one_interval(&ring, node, me, o)),
                PolicyKind::AchiralOdd => keep(achiral_odd(&ring, node, me, o)),
                PolicyKind::NoChirPreprocess => {
                    if !ring.has_multinode() {
                        keep(Action::Stay)
                    } else if memory.phase == Phase::Chiral {
                        keep(vp_one_interval(&ring, node, me, o))
                    } else if ring.counts[node] == ring.n {
                        Some(preprocess(&ring, node, memory, o))
                    } else {
                        None
                    }
                }
                PolicyKind::AchiralEven4 => {
                    if !ring.has_multinode() {
                        keep(Action::Stay)
                    } else if memory.phase == Phase::Chiral {
                        keep(vp_one_interval(&ring, node, me, o))
                    } else if ring.counts[node] == 4 {
                        Some(preprocess(&ring, node, memory, o))
                    } else {
                        keep(achiral_even4(&ring, node, me, o))
                    }
                }
                PolicyKind::Local(_) => None,
            }
        })
        .collect()
}
