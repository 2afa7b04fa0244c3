//! Chirality + vertex permutation: fill the hole of every clockwise chain.

use crate::chain::Direction;
use crate::ring::Action;
use crate::view::{LocalRing, View};

pub fn decide(ring: &LocalRing, view: &View) -> Action {
    if !ring.has_multinode() {
        return Action::Stay;
    }
    let here = ring.chains_here();
    let on_clockwise_chain = here.clockwise.is_some()
        || here
            .through
            .as_ref()
            .is_some_and(|c| c.direction == Direction::Clockwise);
    if on_clockwise_chain && view.is_least {
        Action::Clockwise
    } else {
        Action::Stay
    }
}
