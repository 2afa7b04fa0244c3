//! The synchronous round loop: dynamism, look, compute, move.

use serde::{Deserialize, Serialize};

use crate::adversary::{Adversary, AdversaryContext, Dynamism, Mode};
use crate::algorithms::PolicyKind;
use crate::error::{ConfigError, ScenarioError};
use crate::ring::{Memory, Metrics, MoveIntent, Phase, RingConfiguration, World};
use crate::verifier::lemmas::{check_step, LemmaViolation};
use crate::view::observe;

/// What stage of a composite policy a round belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundPhase {
    /// Robots are unifying their orientations.
    Preprocess,
    Main,
    /// Every robot runs the chirality-based algorithm.
    Chiral,
}

impl RoundPhase {
    /// Classifies a round from the robots' memories after they decided.
    pub fn of<'a>(memories: impl IntoIterator<Item = &'a Memory>) -> Self {
        let mut all_chiral = true;
        let mut any = false;
        for m in memories {
            any = true;
            if m.leader.is_some() {
                return RoundPhase::Preprocess;
            }
            all_chiral &= m.phase == Phase::Chiral;
        }
        if any && all_chiral {
            RoundPhase::Chiral
        } else {
            RoundPhase::Main
        }
    }
}

/// One robot's output for a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RobotDecision {
    /// In the ring's frame.
    pub intent: MoveIntent,
    pub memory: Memory,
    pub view_digest: u64,
}

/// Look and compute for every robot of `world`, in label order.
pub fn decide_round(
    world: &World,
    policy: PolicyKind,
    k: usize,
) -> Result<Vec<RobotDecision>, ScenarioError> {
    let cfg = world.config();
    world
        .robots()
        .iter()
        .map(|r| {
            let obs = observe(cfg, r, k);
            let d = policy.decide(&obs, r)?;
            Ok(RobotDecision {
                intent: MoveIntent::new(r.label, r.orientation.apply(d.action)),
                memory: d.memory,
                view_digest: obs.view.digest(),
            })
        })
        .collect()
}

/// Global intents only.
pub fn decide_intents(
    world: &World,
    policy: PolicyKind,
    k: usize,
) -> Result<Vec<MoveIntent>, ScenarioError> {
    Ok(decide_round(world, policy, k)?
        .into_iter()
        .map(|d| d.intent)
        .collect())
}

/// Everything one round produces, before any bookkeeping.
#[derive(Debug, Clone)]
pub struct Step {
    /// The ring robots observed, after dynamism.
    pub seen: RingConfiguration,
    pub decisions: Vec<RobotDecision>,
    pub phase: RoundPhase,
    pub next: World,
}

/// Applies `dynamism` to `world`, then lets every robot look, compute and
/// move. The adversary is not consulted.
pub fn advance(
    world: &World,
    policy: PolicyKind,
    k: usize,
    dynamism: &Dynamism,
) -> Result<Step, ScenarioError> {
    let seen = dynamism.apply(world.config())?;
    let mut next = world.clone();
    next.set_config(seen.clone());
    let decisions = decide_round(&next, policy, k)?;
    let phase = RoundPhase::of(decisions.iter().map(|d| &d.memory));
    let intents: Vec<MoveIntent> = decisions.iter().map(|d| d.intent).collect();
    let post = seen.resolve_moves(&intents);
    next.set_config(post);
    let cfg = next.config().clone();
    for (robot, d) in next.robots_mut().iter_mut().zip(&decisions) {
        robot.memory = d.memory;
        let least_here = cfg.slot(robot.node)[0];
        policy.settle(robot, least_here);
    }
    Ok(Step {
        seen,
        decisions,
        phase,
        next,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: usize,
    pub dynamism: Dynamism,
    /// The ring as robots saw it, after dynamism.
    pub seen: RingConfiguration,
    pub view_digests: Vec<u64>,
    pub intents: Vec<MoveIntent>,
    pub post: RingConfiguration,
    pub before: Metrics,
    pub after: Metrics,
    pub phase: RoundPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Dispersed,
    RoundLimitReached,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub outcome: Outcome,
    pub rounds: usize,
    pub trace: Vec<RoundTrace>,
    pub violations: Vec<LemmaViolation>,
    pub world: World,
}

/// Default round limit for a ring of `n` nodes, above every proven bound.
pub fn default_max_rounds(n: usize) -> usize {
    4 * n
}

/// One run of a policy against an adversary.
pub struct Simulation {
    world: World,
    policy: PolicyKind,
    adversary: Box<dyn Adversary>,
    k: usize,
    mode: Mode,
    round: usize,
    trace: Vec<RoundTrace>,
    violations: Vec<LemmaViolation>,
}

impl Simulation {
    pub fn new(
        world: World,
        policy: PolicyKind,
        adversary: Box<dyn Adversary>,
        k: usize,
        mode: Mode,
    ) -> Result<Self, ScenarioError> {
        let n = world.n();
        if k > n {
            return Err(ConfigError::VisibilityOutOfRange { k, n }.into());
        }
        policy.check_scenario(world.robots(), n, k)?;
        if adversary.is_adaptive() && k > 0 {
            return Err(ScenarioError::AdaptiveNeedsNoVisibility);
        }
        Ok(Self {
            world,
            policy,
            adversary,
            k,
            mode,
            round: 0,
            trace: Vec::new(),
            violations: Vec::new(),
        })
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn trace(&self) -> &[RoundTrace] {
        &self.trace
    }

    pub fn violations(&self) -> &[LemmaViolation] {
        &self.violations
    }

    pub fn is_dispersed(&self) -> bool {
        self.world.config().is_dispersed()
    }

    /// Runs one round. A dispersed ring is left as it is and no intents are
    /// recorded.
    pub fn step(&mut self) -> Result<&RoundTrace, ScenarioError> {
        self.round += 1;
        let cfg = self.world.config().clone();
        if cfg.is_dispersed() {
            let metrics = cfg.classify();
            self.trace.push(RoundTrace {
                round: self.round,
                dynamism: Dynamism::none(),
                seen: cfg.clone(),
                view_digests: Vec::new(),
                intents: Vec::new(),
                post: cfg,
                before: metrics,
                after: metrics,
                phase: RoundPhase::of(self.world.robots().iter().map(|r| &r.memory)),
            });
            return Ok(self.trace.last().expect("just pushed"));
        }

        let predicted = if self.adversary.is_adaptive() {
            Some(decide_intents(&self.world, self.policy, self.k)?)
        } else {
            None
        };
        let ctx = AdversaryContext {
            config: &cfg,
            mode: self.mode,
            round: self.round,
            predicted_intents: predicted.as_deref(),
        };
        let dynamism = self.adversary.choose(&ctx)?;
        dynamism.check(self.mode)?;

        let step = advance(&self.world, self.policy, self.k, &dynamism)?;
        let intents: Vec<MoveIntent> = step.decisions.iter().map(|d| d.intent).collect();
        if let Some(predicted) = &predicted {
            if let Some(i) = predicted.iter().zip(&intents).position(|(a, b)| a != b) {
                return Err(ScenarioError::PredictionMismatch {
                    robot: intents[i].robot,
                });
            }
        }
        let post = step.next.config().clone();
        self.violations.extend(check_step(
            self.policy,
            self.mode,
            step.phase,
            self.round,
            &step.seen,
            &post,
        ));
        self.trace.push(RoundTrace {
            round: self.round,
            dynamism,
            before: step.seen.classify(),
            after: post.classify(),
            view_digests: step.decisions.iter().map(|d| d.view_digest).collect(),
            intents,
            seen: step.seen,
            post,
            phase: step.phase,
        });
        self.world = step.next;
        Ok(self.trace.last().expect("just pushed"))
    }

    /// Steps until dispersion or until `max_rounds` rounds have run.
    pub fn run(mut self, max_rounds: usize) -> Result<RunResult, ScenarioError> {
        while !self.is_dispersed() && self.round < max_rounds {
            self.step()?;
        }
        Ok(self.finish())
    }

    pub fn finish(self) -> RunResult {
        let outcome = if self.is_dispersed() {
            Outcome::Dispersed
        } else {
            Outcome::RoundLimitReached
        };
        RunResult {
            outcome,
            rounds: self.round,
            trace: self.trace,
            violations: self.violations,
            world: self.world,
        }
    }
}

/// Convenience wrapper around [`Simulation`].
pub fn run_simulation(
    world: World,
    policy: PolicyKind,
    adversary: Box<dyn Adversary>,
    k: usize,
    mode: Mode,
    max_rounds: usize,
) -> Result<RunResult, ScenarioError> {
    Simulation::new(world, policy, adversary, k, mode)?.run(max_rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{AdversaryKind, Benign, RandomAdversary, VpKillerN3};
    use crate::ring::{Label, Orientation};

    fn world(m: &[usize]) -> World {
        World::aligned(RingConfiguration::from_multiplicities(m).unwrap())
    }

    #[test]
    fn chain_fills_in_one_round() {
        let r = run_simulation(
            world(&[2, 1, 0]),
            PolicyKind::VpChain,
            Box::new(Benign),
            3,
            Mode::None,
            10,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::Dispersed);
        assert_eq!(r.rounds, 1);
        assert_eq!(r.trace[0].post.multiplicities(), vec![1, 1, 1]);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn dispersed_input_is_left_alone() {
        let mut sim = Simulation::new(
            world(&[1, 1, 1]),
            PolicyKind::VpChain,
            Box::new(Benign),
            3,
            Mode::None,
        )
        .unwrap();
        let t = sim.step().unwrap();
        assert!(t.intents.is_empty());
        assert_eq!(t.post, t.seen);
        let r = run_simulation(
            world(&[1, 1]),
            PolicyKind::VpChain,
            Box::new(Benign),
            2,
            Mode::None,
            5,
        )
        .unwrap();
        assert_eq!((r.outcome, r.rounds), (Outcome::Dispersed, 0));
    }

    #[test]
    fn gathered_four_ring_unifies_orientation_first() {
        let cfg = RingConfiguration::from_multiplicities(&[4, 0, 0, 0]).unwrap();
        let orientations = [
            Orientation::Aligned,
            Orientation::Reversed,
            Orientation::Reversed,
            Orientation::Aligned,
        ];
        let w = World::new(cfg, &orientations).unwrap();
        let mut sim = Simulation::new(
            w,
            PolicyKind::AchiralEven4,
            Box::new(RandomAdversary::new(3)),
            4,
            Mode::Combined,
        )
        .unwrap();
        let phase = sim.step().unwrap().phase;
        assert_eq!(phase, RoundPhase::Preprocess);
        let o = sim.world().orientations();
        assert!(o.iter().all(|&x| x == o[0]));
        assert!(sim
            .world()
            .robots()
            .iter()
            .all(|r| r.memory.phase == Phase::Chiral && r.memory.leader.is_none()));
    }

    #[test]
    fn killer_holds_three_node_ring() {
        for rule in ["000000", "111111", "012012", "120210"] {
            let policy = PolicyKind::Local(rule.parse().unwrap());
            let r = run_simulation(
                world(&[2, 1, 0]),
                policy,
                Box::new(VpKillerN3),
                0,
                Mode::Vp,
                200,
            )
            .unwrap();
            assert_eq!(r.outcome, Outcome::RoundLimitReached, "{rule}");
            assert_eq!(r.rounds, 200);
        }
    }

    #[test]
    fn large_ring_random_adversary_within_bound() {
        let n = 64;
        let mut m = vec![0; n];
        m[0] = 20;
        m[5] = 30;
        m[40] = 14;
        let r = run_simulation(
            world(&m),
            PolicyKind::VpOneInterval,
            AdversaryKind::Random.build(11),
            n,
            Mode::Combined,
            n,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::Dispersed);
        assert!(r.rounds < n);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn adaptive_needs_blind_robots() {
        let e = Simulation::new(
            world(&[2, 1, 0]),
            PolicyKind::VpChain,
            Box::new(VpKillerN3),
            3,
            Mode::Vp,
        );
        assert!(matches!(e, Err(ScenarioError::AdaptiveNeedsNoVisibility)));
    }

    #[test]
    fn chirality_is_checked() {
        let cfg = RingConfiguration::from_multiplicities(&[2, 1, 0]).unwrap();
        let w = World::new(
            cfg,
            &[
                Orientation::Aligned,
                Orientation::Reversed,
                Orientation::Aligned,
            ],
        )
        .unwrap();
        let e = Simulation::new(w, PolicyKind::VpChain, Box::new(Benign), 3, Mode::None);
        assert!(matches!(
            e,
            Err(ScenarioError::NeedsChirality {
                robot: Label(2),
                ..
            })
        ));
    }

    #[test]
    fn illegal_dynamism_rejected() {
        let script = crate::adversary::Scripted::new(vec![Dynamism::remove(0)]);
        let mut sim = Simulation::new(
            world(&[2, 1, 0]),
            PolicyKind::VpChain,
            Box::new(script),
            3,
            Mode::Vp,
        )
        .unwrap();
        assert!(matches!(sim.step(), Err(ScenarioError::IllegalDynamism(_))));
    }

    #[test]
    fn identical_seeds_identical_runs() {
        let run = |seed| {
            let mut m = vec![0; 9];
            m[0] = 5;
            m[4] = 4;
            let cfg = RingConfiguration::from_multiplicities(&m).unwrap();
            let o: Vec<Orientation> = (0..9)
                .map(|i| {
                    if i % 3 == 0 {
                        Orientation::Reversed
                    } else {
                        Orientation::Aligned
                    }
                })
                .collect();
            let w = World::new(cfg, &o).unwrap();
            run_simulation(
                w,
                PolicyKind::AchiralOdd,
                AdversaryKind::Random.build(seed),
                9,
                Mode::Combined,
                36,
            )
            .unwrap()
            .trace
        };
        assert_eq!(run(5), run(5));
    }
}
