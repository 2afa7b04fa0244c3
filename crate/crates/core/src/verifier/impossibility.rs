//! Runs every rule of the finite no-visibility class against a killer
//! adversary and reports any run that disperses.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::enumerate_initial_configs;
use crate::adversary::{AdversaryKind, Mode};
use crate::algorithms::{LocalRule, PolicyKind};
use crate::error::{ScenarioError, VerifyError};
use crate::ring::{RingConfiguration, World};
use crate::scheduler::Simulation;

/// A rule that beat the adversary, or made it give up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Escape {
    pub rule: String,
    pub start: Vec<usize>,
    pub rounds: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImpossibilityReport {
    pub killer: AdversaryKind,
    pub mode: Mode,
    pub n: usize,
    pub horizon: usize,
    pub policies: usize,
    pub starts: usize,
    pub escapes: Vec<Escape>,
    pub pass: bool,
}

/// The mode a killer plays in.
pub fn killer_mode(killer: AdversaryKind) -> Option<Mode> {
    match killer {
        AdversaryKind::VpKillerN3 | AdversaryKind::VpKiller => Some(Mode::Vp),
        AdversaryKind::OneIntervalKiller => Some(Mode::OneInterval),
        AdversaryKind::Benign | AdversaryKind::Random => None,
    }
}

/// Starting configurations the killer accepts: every non-dispersed one, or
/// only the neutral ones on three nodes.
pub fn killer_starts(
    killer: AdversaryKind,
    n: usize,
) -> Result<Vec<RingConfiguration>, VerifyError> {
    Ok(enumerate_initial_configs(n, true)?
        .into_iter()
        .filter(|c| !c.is_dispersed())
        .filter(|c| killer != AdversaryKind::VpKillerN3 || !c.multiplicities().contains(&n))
        .collect())
}

/// Runs until dispersion, the horizon, or a repeated configuration. Local
/// rules and killers are memoryless and deterministic, so a repeat means the
/// run cycles forever. Returns the rounds run and whether the ring dispersed.
fn run_until_cycle(
    world: World,
    policy: PolicyKind,
    killer: AdversaryKind,
    mode: Mode,
    horizon: usize,
) -> Result<(usize, bool), ScenarioError> {
    let mut sim = Simulation::new(world, policy, killer.build(0), 0, mode)?;
    let mut seen = HashSet::new();
    while sim.round() < horizon && !sim.is_dispersed() {
        if !seen.insert(sim.world().config().clone()) {
            break;
        }
        sim.step()?;
    }
    Ok((sim.round(), sim.is_dispersed()))
}

/// Checks that no rule in the class disperses within `horizon` rounds from
/// any accepted start.
pub fn verify_impossibility(
    killer: AdversaryKind,
    n: usize,
    horizon: usize,
) -> Result<ImpossibilityReport, VerifyError> {
    let mode = killer_mode(killer).ok_or_else(|| {
        ScenarioError::IllegalDynamism(format!("{killer} is not an impossibility adversary"))
    })?;
    let starts = killer_starts(killer, n)?;
    let escapes: Vec<Escape> = LocalRule::all()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|&rule| {
            let policy = PolicyKind::Local(rule);
            starts.iter().filter_map(move |cfg| {
                let world = World::aligned(cfg.clone());
                let escape = |rounds, detail: String| Escape {
                    rule: rule.to_string(),
                    start: cfg.multiplicities(),
                    rounds,
                    detail,
                };
                match run_until_cycle(world, policy, killer, mode, horizon) {
                    Ok((rounds, true)) => Some(escape(rounds, "dispersed".into())),
                    Ok(_) => None,
                    Err(e) => Some(escape(0, e.to_string())),
                }
            })
        })
        .collect();
    Ok(ImpossibilityReport {
        killer,
        mode,
        n,
        horizon,
        policies: LocalRule::COUNT,
        starts: starts.len(),
        pass: escapes.is_empty(),
        escapes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_cutting_on_two_nodes() {
        let r = verify_impossibility(AdversaryKind::OneIntervalKiller, 2, 50).unwrap();
        assert!(r.pass, "{:?}", r.escapes.first());
        assert_eq!(r.policies, 729);
        // [2,0] with either robot order, up to rotation
        assert_eq!(r.starts, 1);
    }

    #[test]
    fn three_node_starts_are_neutral() {
        let starts = killer_starts(AdversaryKind::VpKillerN3, 3).unwrap();
        assert!(starts.iter().all(|c| {
            let mut m = c.multiplicities();
            m.sort_unstable();
            m == [0, 1, 2]
        }));
    }

    #[test]
    fn random_is_not_a_killer() {
        assert!(verify_impossibility(AdversaryKind::Random, 3, 10).is_err());
    }
}
