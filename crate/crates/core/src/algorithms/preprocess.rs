//! Orientation unification for robots that start on a single node.
//!
//! Every robot remembers the least label `x` on the shared node and steps its
//! own clockwise. Robots that do not end the round next to `x` moved the
//! other way, so they flip their orientation.

use crate::ring::{Action, Label, Memory, Phase, RobotState};
use crate::view::View;

/// Look/compute stage: remember `x`, then step own-clockwise.
pub fn remember_and_move(view: &View, memory: Memory) -> (Action, Memory) {
    let memory = Memory {
        leader: Some(view.least_label_here),
        ..memory
    };
    (Action::Clockwise, memory)
}

/// End of the preprocessing round, after moves: compare against `x`.
pub fn settle(robot: &mut RobotState, least_here: Label) {
    if let Some(leader) = robot.memory.leader.take() {
        if least_here != leader {
            robot.orientation = robot.orientation.flipped();
        }
        robot.memory.phase = Phase::Chiral;
    }
}
