use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Adversary, AdversaryContext, Dynamism};
use crate::error::AdversaryError;

/// Uniformly random dynamism. Each round's draw depends only on the seed and
/// the round index, so runs replay exactly.
#[derive(Debug, Clone, Copy)]
pub struct RandomAdversary {
    seed: u64,
}

impl RandomAdversary {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn draw(&self, ctx: &AdversaryContext<'_>) -> Dynamism {
        let n = ctx.n();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(ctx.round as u64);
        let permutation = ctx.mode.allows_permutation().then(|| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            perm
        });
        let edge = if ctx.mode.allows_removal() {
            // `n` stands for "no removal"
            let pick = rng.random_range(0..=n);
            (pick < n).then_some(pick)
        } else {
            None
        };
        Dynamism { permutation, edge }
    }
}

impl Adversary for RandomAdversary {
    fn choose(&mut self, ctx: &AdversaryContext<'_>) -> Result<Dynamism, AdversaryError> {
        Ok(self.draw(ctx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::Mode;
    use crate::ring::RingConfiguration;

    fn ctx(cfg: &RingConfiguration, mode: Mode, round: usize) -> AdversaryContext<'_> {
        AdversaryContext {
            config: cfg,
            mode,
            round,
            predicted_intents: None,
        }
    }

    #[test]
    fn no_dynamism_in_mode_none() {
        let cfg = RingConfiguration::from_multiplicities(&[1, 1, 1, 1]).unwrap();
        assert_eq!(
            RandomAdversary::new(7).draw(&ctx(&cfg, Mode::None, 3)),
            Dynamism::none()
        );
    }

    #[test]
    fn same_seed_same_draw() {
        let cfg = RingConfiguration::from_multiplicities(&[2, 1, 1, 0]).unwrap();
        let a = RandomAdversary::new(42);
        let first = a.draw(&ctx(&cfg, Mode::Combined, 5));
        for _ in 0..10 {
            assert_eq!(a.draw(&ctx(&cfg, Mode::Combined, 5)), first);
        }
        assert!(first.check(Mode::Combined).is_ok());
    }

    #[test]
    fn edge_choice_is_uniform() {
        // 5 options at n = 4; 10,000 draws give 2,000 expected per option
        // with a standard deviation of 40.
        let cfg = RingConfiguration::from_multiplicities(&[1, 1, 1, 1]).unwrap();
        let a = RandomAdversary::new(2024);
        let mut counts = [0usize; 5];
        for round in 0..10_000 {
            let d = a.draw(&ctx(&cfg, Mode::OneInterval, round));
            counts[d.edge.unwrap_or(4)] += 1;
        }
        for c in counts {
            assert!(c.abs_diff(2000) <= 200, "{counts:?}");
        }
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - 2000.0).powi(2) / 2000.0)
            .sum();
        // 99.9th percentile of chi-square with 4 degrees of freedom
        assert!(chi2 < 18.47, "chi2 = {chi2}");
    }

    #[test]
    fn permutations_are_bijections() {
        let cfg = RingConfiguration::from_multiplicities(&[3, 0, 0, 1, 1]).unwrap();
        let a = RandomAdversary::new(1);
        for round in 0..200 {
            let d = a.draw(&ctx(&cfg, Mode::Vp, round));
            let mut p = d.permutation.unwrap();
            p.sort_unstable();
            assert_eq!(p, vec![0, 1, 2, 3, 4]);
        }
    }
}
