//! Chirality + vertex permutation + one missing edge: only good chains move,
//! and a multinode with two good chains fills its clockwise one.

use crate::chain::Direction;
use crate::ring::{Action, Occupancy};
use crate::view::{LocalRing, View};

pub fn decide(ring: &LocalRing, view: &View) -> Action {
    if !ring.has_multinode() {
        return Action::Stay;
    }
    let here = ring.chains_here();
    match ring.own() {
        Occupancy::Singleton => match here.through.as_ref().filter(|c| c.good) {
            Some(chain) => {
                if here
                    .good_partner()
                    .is_some_and(|p| p.direction == Direction::Clockwise)
                {
                    Action::Stay
                } else {
                    chain.direction.action()
                }
            }
            None => Action::Stay,
        },
        Occupancy::Multi if view.is_least => {
            let good = here.good_anchored();
            match good.as_slice() {
                [_, _] => Action::Clockwise,
                [only] => only.direction.action(),
                _ => Action::Stay,
            }
        }
        _ => Action::Stay,
    }
}
