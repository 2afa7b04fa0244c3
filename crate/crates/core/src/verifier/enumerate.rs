//! Initial configurations and robot assignments for exhaustive search.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use crate::algorithms::PolicyKind;
use crate::error::VerifyError;
use crate::ring::{Label, Orientation, RingConfiguration, World};

pub const ENUMERATION_LIMIT: usize = 8;

/// Which ring symmetries identify two configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Symmetry {
    #[default]
    Rotation,
    /// Rotations and reflections.
    Dihedral,
}

fn least_image<T: Ord + Clone>(items: &[T], symmetry: Symmetry) -> Vec<T> {
    let n = items.len();
    let mut best: Option<Vec<T>> = None;
    let mut consider = |candidate: Vec<T>| {
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    };
    for r in 0..n {
        consider(items[r..].iter().chain(&items[..r]).cloned().collect());
        if symmetry == Symmetry::Dihedral {
            consider((0..n).map(|i| items[(r + n - i) % n].clone()).collect());
        }
    }
    best.unwrap_or_default()
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, parts: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for c in (0..=left).rev() {
            acc.push(c);
            go(left - c, parts - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Multiplicity profiles of `n` robots on `n` nodes, one per symmetry class,
/// each given as its greatest representative, e.g. `[2, 1, 0]`.
pub fn multiplicity_profiles(n: usize, symmetry: Symmetry) -> Result<Vec<Vec<usize>>, VerifyError> {
    if n > ENUMERATION_LIMIT {
        return Err(VerifyError::Guard {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let set: BTreeSet<Vec<usize>> = compositions(n, n)
        .iter()
        .map(|c| {
            let flipped: Vec<Reverse<usize>> = c.iter().copied().map(Reverse).collect();
            least_image(&flipped, symmetry)
                .into_iter()
                .map(|Reverse(x)| x)
                .collect()
        })
        .collect();
    Ok(set.into_iter().rev().collect())
}

/// All placements of robots `1..=n` on `n` nodes up to rotation. With
/// `labeled = false` robots are interchangeable and each profile is labeled in
/// clockwise slot order.
pub fn enumerate_initial_configs(
    n: usize,
    labeled: bool,
) -> Result<Vec<RingConfiguration>, VerifyError> {
    enumerate_with(n, labeled, Symmetry::Rotation)
}

pub fn enumerate_with(
    n: usize,
    labeled: bool,
    symmetry: Symmetry,
) -> Result<Vec<RingConfiguration>, VerifyError> {
    if n > ENUMERATION_LIMIT {
        return Err(VerifyError::Guard {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    if !labeled {
        return Ok(multiplicity_profiles(n, symmetry)?
            .iter()
            .map(|m| RingConfiguration::from_multiplicities(m).expect("profiles sum to n"))
            .collect());
    }
    let mut seen = BTreeSet::new();
    let total = n.pow(n as u32);
    for mut code in 0..total {
        let mut slots = vec![Vec::new(); n];
        for label in 1..=n as u32 {
            slots[code % n].push(Label(label));
            code /= n;
        }
        seen.insert(least_image(&slots, symmetry));
    }
    Ok(seen
        .into_iter()
        .map(|slots| RingConfiguration::new(slots).expect("every label placed once"))
        .collect())
}

/// Every orientation assignment of `n` robots, or only the aligned one.
pub fn orientation_assignments(n: usize, all: bool) -> Vec<Vec<Orientation>> {
    if !all {
        return vec![vec![Orientation::Aligned; n]];
    }
    (0..1u32 << n)
        .map(|bits| {
            (0..n)
                .map(|i| {
                    if bits >> i & 1 == 1 {
                        Orientation::Reversed
                    } else {
                        Orientation::Aligned
                    }
                })
                .collect()
        })
        .collect()
}

/// The starting worlds a policy is verified from: every configuration it
/// accepts, with every orientation assignment unless it needs chirality.
pub fn initial_worlds(
    policy: PolicyKind,
    n: usize,
    labeled: bool,
) -> Result<Vec<World>, VerifyError> {
    let configs = if policy == PolicyKind::NoChirPreprocess {
        let mut m = vec![0; n];
        m[0] = n;
        vec![RingConfiguration::from_multiplicities(&m).expect("n robots")]
    } else {
        enumerate_initial_configs(n, labeled)?
    };
    let orientations = orientation_assignments(n, !policy.requires_chirality());
    Ok(configs
        .iter()
        .flat_map(|c| {
            orientations
                .iter()
                .map(move |o| World::new(c.clone(), o).expect("lengths match"))
        })
        .collect())
}
