//! The finite class of deterministic no-visibility rules.
//!
//! Without visibility a robot only knows how many robots share its node and
//! whether it holds the least or second-least label there. A rule maps those
//! two facts to an action in the robot's own frame, so there are `3^6`
//! rules over the six reachable inputs.

use std::fmt;
use std::str::FromStr;

use crate::ring::Action;
use crate::view::View;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MultiplicityClass {
    One,
    Two,
    ThreeOrMore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Least,
    SecondLeast,
    Other,
}

/// Rule inputs in table order.
pub const INPUTS: [(MultiplicityClass, Rank); 6] = [
    (MultiplicityClass::One, Rank::Least),
    (MultiplicityClass::Two, Rank::Least),
    (MultiplicityClass::Two, Rank::SecondLeast),
    (MultiplicityClass::ThreeOrMore, Rank::Least),
    (MultiplicityClass::ThreeOrMore, Rank::SecondLeast),
    (MultiplicityClass::ThreeOrMore, Rank::Other),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalRule {
    table: [Action; 6],
}

impl LocalRule {
    pub const COUNT: usize = 729;

    pub fn new(table: [Action; 6]) -> Self {
        Self { table }
    }

    /// The `index`-th rule, reading `index` as six base-3 digits with the
    /// first input most significant.
    pub fn nth(mut index: usize) -> Self {
        let mut table = [Action::Stay; 6];
        for slot in table.iter_mut().rev() {
            *slot = Action::ALL[index % 3];
            index /= 3;
        }
        Self { table }
    }

    pub fn all() -> impl Iterator<Item = LocalRule> {
        (0..Self::COUNT).map(Self::nth)
    }

    pub fn table(&self) -> [Action; 6] {
        self.table
    }

    pub fn decide(&self, view: &View) -> Action {
        let class = match view.own_count {
            1 => MultiplicityClass::One,
            2 => MultiplicityClass::Two,
            _ => MultiplicityClass::ThreeOrMore,
        };
        let rank = if view.is_least {
            Rank::Least
        } else if view.is_second_least {
            Rank::SecondLeast
        } else {
            Rank::Other
        };
        let slot = INPUTS
            .iter()
            .position(|&i| i == (class, rank))
            .expect("rank fits the class");
        self.table[slot]
    }
}

fn digit(action: Action) -> char {
    match action {
        Action::Stay => '0',
        Action::Clockwise => '1',
        Action::Anticlockwise => '2',
    }
}

impl fmt::Display for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.table
            .iter()
            .try_for_each(|&a| write!(f, "{}", digit(a)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("a local rule is six digits from 0 (stay), 1 (cw), 2 (acw)")]
pub struct BadRule;

impl FromStr for LocalRule {
    type Err = BadRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 6 {
            return Err(BadRule);
        }
        let mut table = [Action::Stay; 6];
        for (slot, c) in table.iter_mut().zip(chars) {
            *slot = match c {
                '0' => Action::Stay,
                '1' => Action::Clockwise,
                '2' => Action::Anticlockwise,
                _ => return Err(BadRule),
            };
        }
        Ok(Self { table })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{RingConfiguration, World};
    use crate::view::compute_view;

    #[test]
    fn enumeration_is_a_bijection() {
        let all: std::collections::HashSet<_> = LocalRule::all().collect();
        assert_eq!(all.len(), 729);
        assert_eq!(LocalRule::nth(0).to_string(), "000000");
        assert_eq!(LocalRule::nth(728).to_string(), "222222");
        assert_eq!(LocalRule::nth(1).to_string(), "000001");
    }

    #[test]
    fn lookup_by_rank() {
        let rule: LocalRule = "012120".parse().unwrap();
        let w = World::aligned(RingConfiguration::from_multiplicities(&[3, 2, 0, 0, 0]).unwrap());
        let got: Vec<_> = w
            .robots()
            .iter()
            .map(|r| rule.decide(&compute_view(w.config(), r, 0)))
            .collect();
        use Action::*;
        // three on node 0: least, second, other; two on node 1: least, second
        assert_eq!(
            got,
            vec![Clockwise, Anticlockwise, Stay, Clockwise, Anticlockwise]
        );
    }
}
