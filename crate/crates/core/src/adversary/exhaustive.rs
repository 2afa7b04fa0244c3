use std::collections::HashSet;

use itertools::Itertools;

use super::{Dynamism, Mode};
use crate::error::AdversaryError;
use crate::ring::{Label, RingConfiguration};

/// Largest ring for which permutations are enumerated.
pub const VP_BRANCHING_LIMIT: usize = 7;

/// Slot contents of the lexicographically least rotation.
pub fn canonical_rotation(slots: &[Vec<Label>]) -> Vec<Vec<Label>> {
    let n = slots.len();
    (0..n)
        .map(|r| {
            slots[r..]
                .iter()
                .chain(&slots[..r])
                .cloned()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

/// Every distinct dynamism the mode allows on `cfg`.
///
/// Permutations are quotiented by their outcome up to rotation: robots cannot
/// tell rotated rings apart, so only one representative per arrangement of
/// node contents is kept. Each arrangement is paired with every edge choice.
pub fn branches(cfg: &RingConfiguration, mode: Mode) -> Result<Vec<Dynamism>, AdversaryError> {
    let n = cfg.n();
    let perms: Vec<Option<Vec<usize>>> = if mode.allows_permutation() {
        if n > VP_BRANCHING_LIMIT {
            return Err(AdversaryError::BranchingGuard {
                n,
                limit: VP_BRANCHING_LIMIT,
            });
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        // node 0 stays put; every rotation class has a member of that form
        for rest in (1..n).permutations(n - 1) {
            let arrangement: Vec<usize> = std::iter::once(0).chain(rest).collect();
            let slots: Vec<Vec<Label>> =
                arrangement.iter().map(|&i| cfg.slot(i).to_vec()).collect();
            if seen.insert(canonical_rotation(&slots)) {
                let mut perm = vec![0; n];
                for (q, &i) in arrangement.iter().enumerate() {
                    perm[i] = q;
                }
                out.push(if out.is_empty() { None } else { Some(perm) });
            }
        }
        out
    } else {
        vec![None]
    };
    let edges: Vec<Option<usize>> = if mode.allows_removal() {
        std::iter::once(None).chain((0..n).map(Some)).collect()
    } else {
        vec![None]
    };
    Ok(perms
        .into_iter()
        .cartesian_product(edges)
        .map(|(permutation, edge)| Dynamism { permutation, edge })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: &[usize]) -> RingConfiguration {
        RingConfiguration::from_multiplicities(m).unwrap()
    }

    #[test]
    fn one_interval_branches() {
        assert_eq!(
            branches(&cfg(&[2, 1, 1, 0]), Mode::OneInterval)
                .unwrap()
                .len(),
            5
        );
        assert_eq!(
            branches(&cfg(&[2, 1, 1, 0]), Mode::None).unwrap(),
            vec![Dynamism::none()]
        );
    }

    #[test]
    fn gathered_ring_has_one_permutation_class() {
        assert_eq!(branches(&cfg(&[3, 0, 0]), Mode::Vp).unwrap().len(), 1);
    }

    #[test]
    fn combined_branches_on_three_nodes() {
        // three distinct node contents have (3 - 1)! circular arrangements
        let b = branches(&cfg(&[2, 1, 0]), Mode::Combined).unwrap();
        assert_eq!(b.len(), 2 * 4);
        assert!(b.iter().all(|d| d.check(Mode::Combined).is_ok()));
    }

    #[test]
    fn identity_comes_first() {
        let b = branches(&cfg(&[2, 1, 0, 1]), Mode::Vp).unwrap();
        assert_eq!(b[0], Dynamism::none());
        // arrangements of {1,0,1} with labels: 3! = 6 distinct
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn guard() {
        let big = cfg(&[1; 8]);
        assert!(matches!(
            branches(&big, Mode::Vp),
            Err(AdversaryError::BranchingGuard { n: 8, .. })
        ));
        assert_eq!(branches(&big, Mode::OneInterval).unwrap().len(), 9);
    }
}
