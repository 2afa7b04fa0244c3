#![allow(dead_code)]

pub mod oracle;

use proptest::prelude::*;
use ring_dispersion::adversary::{branches, Dynamism, Mode};
use ring_dispersion::algorithms::PolicyKind;
use ring_dispersion::ring::{Label, Orientation, RingConfiguration, World};
use ring_dispersion::scheduler::decide_round;
use ring_dispersion::verifier::GameGraph;

/// Compares the policy with the oracle on `world` after `dynamism`. Returns a
/// description of the first disagreement.
pub fn oracle_disagreement(
    world: &World,
    policy: PolicyKind,
    dynamism: &Dynamism,
) -> Option<String> {
    let mut seen = world.clone();
    seen.set_config(dynamism.apply(world.config()).expect("legal dynamism"));
    let expected = oracle::decide(&seen, policy);
    match decide_round(&seen, policy, seen.n()) {
        Ok(decisions) => decisions.iter().zip(&expected).find_map(|(d, e)| {
            let got = (d.intent.action, d.memory);
            (Some(got) != *e).then(|| {
                format!(
                    "{} after {dynamism}: robot {} decided {got:?}, oracle {e:?}",
                    world.config(),
                    d.intent.robot
                )
            })
        }),
        Err(err) => expected.iter().all(Option::is_some).then(|| {
            format!(
                "{} after {dynamism}: policy failed ({err}) where the oracle decides",
                world.config()
            )
        }),
    }
}

/// Checks every state of a game graph under every adversary branch. Returns
/// the number of pairs checked and the first disagreement.
pub fn oracle_check_graph(graph: &GameGraph) -> (usize, Option<String>) {
    let mut pairs = 0;
    for world in graph.states() {
        if world.config().is_dispersed() {
            continue;
        }
        for d in branches(world.config(), graph.mode())
            .expect("graph sizes are within the branching guard")
        {
            pairs += 1;
            if let Some(m) = oracle_disagreement(world, graph.policy(), &d) {
                return (pairs, Some(m));
            }
        }
    }
    (pairs, None)
}

/// Labeled placements of `n` robots with shuffled labels.
pub fn arb_config(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = RingConfiguration> {
    n.prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(0..n, n),
            Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle(),
        )
    })
    .prop_map(|(n, nodes, labels)| {
        let mut slots = vec![Vec::new(); n];
        for (label, node) in labels.into_iter().zip(nodes) {
            slots[node].push(Label(label));
        }
        RingConfiguration::new(slots).expect("n labels placed")
    })
}

pub fn arb_orientations(n: usize) -> impl Strategy<Value = Vec<Orientation>> {
    prop::collection::vec(
        prop_oneof![Just(Orientation::Aligned), Just(Orientation::Reversed)],
        n,
    )
}

pub fn arb_world(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = World> {
    arb_config(n).prop_flat_map(|cfg| {
        let n = cfg.n();
        (Just(cfg), arb_orientations(n))
            .prop_map(|(cfg, o)| World::new(cfg, &o).expect("lengths match"))
    })
}

/// Dynamism legal in `mode` for a ring of `n` nodes.
pub fn arb_dynamism(n: usize, mode: Mode) -> impl Strategy<Value = Dynamism> {
    let perm = if mode.allows_permutation() {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(Some)
            .boxed()
    } else {
        Just(None).boxed()
    };
    let edge = if mode.allows_removal() {
        prop::option::of(0..n).boxed()
    } else {
        Just(None).boxed()
    };
    (perm, edge).prop_map(|(permutation, edge)| Dynamism { permutation, edge })
}
