//! No chirality, odd ring: ties between a multinode's two good chains are
//! broken by length first and only then by the robot's own clockwise.

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
                if here.good_partner().is_some_and(|p| p.len() <= chain.len()) {
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
                [a, b] if a.len() == b.len() => Action::Clockwise,
                [a, b] => {
                    let shorter = if a.len() < b.len() { a } else { b };
                    shorter.direction.action()
                }
                [only] => only.direction.action(),
                _ => Action::Stay,
            }
        }
        _ => Action::Stay,
    }
}
