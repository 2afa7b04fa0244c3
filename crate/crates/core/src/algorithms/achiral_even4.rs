//! No chirality, ring of four. Like the odd-ring rule, except that a
//! multinode flanked by two singletons on equal good chains pulls the
//! singletons in; once all four robots share a node they unify orientation
//! and continue with the chirality-based one-interval algorithm.

use crate::ring::{Action, Memory, Occupancy, Phase};
use crate::view::{LocalRing, View};

use super::{preprocess, vp_one_interval};

pub fn decide(ring: &LocalRing, view: &View, memory: Memory) -> (Action, Memory) {
    if !ring.has_multinode() {
        return (Action::Stay, memory);
    }
    if memory.phase == Phase::Chiral {
        return (vp_one_interval::decide(ring, view), memory);
    }
    if view.own_count == 4 {
        return preprocess::remember_and_move(view, memory);
    }
    (decide_before_gathering(ring, view), memory)
}

fn decide_before_gathering(ring: &LocalRing, view: &View) -> Action {
    let here = ring.chains_here();
    match ring.own() {
        Occupancy::Singleton => match here.through.as_ref().filter(|c| c.good) {
            Some(chain) => match here.good_partner() {
                Some(p) if p.len() < chain.len() => Action::Stay,
                Some(p) if p.len() == chain.len() => chain.direction.opposite().action(),
                _ => chain.direction.action(),
            },
            None => Action::Stay,
        },
        Occupancy::Multi if view.is_least => {
            let good = here.good_anchored();
            match good.as_slice() {
                [a, b] if a.len() != b.len() => {
                    let shorter = if a.len() < b.len() { a } else { b };
                    shorter.direction.action()
                }
                [_, _] => {
                    let n = ring.n();
                    if ring.occupancy(1) == Occupancy::Hole
                        && ring.occupancy(n - 1) == Occupancy::Hole
                    {
                        Action::Clockwise
                    } else {
                        Action::Stay
                    }
                }
                [only] => only.direction.action(),
                _ => Action::Stay,
            }
        }
        _ => Action::Stay,
    }
}
