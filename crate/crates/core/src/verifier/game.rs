//! The robots-versus-adversary game on a small ring, solved exhaustively.
//!
//! States are worlds (placement, orientations, memories) up to rotation. From
//! each non-dispersed state every branch of the adversary is expanded; the
//! worst case from a state is the longest path to a dispersed state, or
//! unbounded when the adversary can reach a cycle.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::initial_worlds;
use super::lemmas::{check_step, LemmaViolation};
use crate::adversary::{branches, Dynamism, Mode, Scripted, VP_BRANCHING_LIMIT};
use crate::algorithms::PolicyKind;
use crate::error::{ScenarioError, VerifyError};
use crate::ring::World;
use crate::scheduler::{advance, run_simulation, Outcome};

/// Largest ring the exhaustive search accepts.
pub const SEARCH_LIMIT: usize = VP_BRANCHING_LIMIT;

/// The rotation that brings `world` to its canonical form, and that form.
pub fn canonical(world: &World) -> (usize, World) {
    let slots = world.config().slots();
    let n = slots.len();
    let r = (0..n)
        .min_by(|&a, &b| {
            let ra = slots[a..].iter().chain(&slots[..a]);
            let rb = slots[b..].iter().chain(&slots[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0);
    (r, world.rotated(r))
}

/// Re-expresses dynamism chosen for `world.rotated(r)` as dynamism for `world`.
fn conjugate(d: &Dynamism, r: usize, n: usize) -> Dynamism {
    let permutation = d
        .permutation
        .as_ref()
        .map(|p| (0..n).map(|i| (p[(i + n - r) % n] + r) % n).collect());
    Dynamism {
        permutation,
        edge: d.edge.map(|e| (e + r) % n),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub start: World,
    /// One entry per round, for a scripted adversary.
    pub script: Vec<Dynamism>,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub labeled: bool,
    /// Abort once this many states are discovered.
    pub state_budget: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            labeled: true,
            state_budget: 5_000_000,
        }
    }
}

/// The explored game graph.
pub struct GameGraph {
    policy: PolicyKind,
    mode: Mode,
    k: usize,
    states: Vec<World>,
    index: HashMap<World, usize>,
    successors: Vec<Vec<u32>>,
    starts: Vec<usize>,
    /// Longest path to dispersion; `None` when unbounded.
    worst: Vec<Option<usize>>,
    transitions: usize,
    violations: Vec<(usize, Dynamism, LemmaViolation)>,
}

struct Expansion {
    succ: Vec<World>,
    violations: Vec<(Dynamism, LemmaViolation)>,
    transitions: usize,
}

impl GameGraph {
    /// Explores every state reachable from `starts`.
    pub fn explore(
        policy: PolicyKind,
        mode: Mode,
        starts: &[World],
        state_budget: usize,
    ) -> Result<Self, VerifyError> {
        let n = starts.first().map_or(0, World::n);
        if n > SEARCH_LIMIT {
            return Err(VerifyError::Guard {
                n,
                limit: SEARCH_LIMIT,
            });
        }
        let k = n;
        let mut g = GameGraph {
            policy,
            mode,
            k,
            states: Vec::new(),
            index: HashMap::new(),
            successors: Vec::new(),
            starts: Vec::new(),
            worst: Vec::new(),
            transitions: 0,
            violations: Vec::new(),
        };
        for w in starts {
            policy.check_scenario(w.robots(), n, k)?;
            let (_, c) = canonical(w);
            let id = g.intern(c);
            g.starts.push(id);
        }
        g.starts.sort_unstable();
        g.starts.dedup();

        let mut frontier: Vec<usize> = (0..g.states.len()).collect();
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            let expanded: Vec<Result<Expansion, ScenarioError>> = frontier
                .par_iter()
                .map(|&s| Self::expand(policy, mode, k, &g.states[s], depth))
                .collect();
            let mut next = Vec::new();
            for (&s, e) in frontier.iter().zip(expanded) {
                let e = e?;
                g.transitions += e.transitions;
                g.violations
                    .extend(e.violations.into_iter().map(|(d, v)| (s, d, v)));
                let mut succ: Vec<u32> = Vec::with_capacity(e.succ.len());
                for w in e.succ {
                    let before = g.states.len();
                    let id = g.intern(w);
                    if id == before {
                        next.push(id);
                    }
                    succ.push(id as u32);
                }
                succ.sort_unstable();
                succ.dedup();
                g.successors[s] = succ;
            }
            if g.states.len() > state_budget {
                return Err(VerifyError::StateBudget(state_budget));
            }
            frontier = next;
        }
        g.solve();
        Ok(g)
    }

    fn intern(&mut self, w: World) -> usize {
        if let Some(&id) = self.index.get(&w) {
            return id;
        }
        let id = self.states.len();
        self.index.insert(w.clone(), id);
        self.states.push(w);
        self.successors.push(Vec::new());
        id
    }

    fn expand(
        policy: PolicyKind,
        mode: Mode,
        k: usize,
        w: &World,
        depth: usize,
    ) -> Result<Expansion, ScenarioError> {
        if w.config().is_dispersed() {
            return Ok(Expansion {
                succ: Vec::new(),
                violations: Vec::new(),
                transitions: 0,
            });
        }
        let all = branches(w.config(), mode)?;
        let mut succ = Vec::with_capacity(all.len());
        let mut violations = Vec::new();
        for d in &all {
            let step = advance(w, policy, k, d)?;
            for v in check_step(
                policy,
                mode,
                step.phase,
                depth,
                &step.seen,
                step.next.config(),
            ) {
                violations.push((d.clone(), v));
            }
            succ.push(canonical(&step.next).1);
        }
        Ok(Expansion {
            succ,
            violations,
            transitions: all.len(),
        })
    }

    /// Longest path to dispersion, by peeling states whose successors are
    /// all resolved. States left over can reach a cycle.
    fn solve(&mut self) {
        let count = self.states.len();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); count];
        let mut pending: Vec<usize> = vec![0; count];
        for (s, succ) in self.successors.iter().enumerate() {
            pending[s] = succ.len();
            for &t in succ {
                preds[t as usize].push(s as u32);
            }
        }
        let mut worst: Vec<Option<usize>> = vec![None; count];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (s, world) in self.states.iter().enumerate() {
            if world.config().is_dispersed() {
                worst[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(t) = queue.pop_front() {
            for &p in &preds[t] {
                let p = p as usize;
                pending[p] -= 1;
                if pending[p] == 0 {
                    let w = self.successors[p]
                        .iter()
                        .map(|&s| worst[s as usize].expect("resolved"))
                        .max();
                    worst[p] = w.map(|x| x + 1);
                    queue.push_back(p);
                }
            }
        }
        self.worst = worst;
    }

    pub fn policy(&self) -> PolicyKind {
        self.policy
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn states(&self) -> &[World] {
        &self.states
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn successors(&self, state: usize) -> &[u32] {
        &self.successors[state]
    }

    pub fn states_explored(&self) -> usize {
        self.states.len()
    }

    /// Number of (state, adversary branch) pairs evaluated.
    pub fn transitions(&self) -> usize {
        self.transitions
    }

    pub fn lemma_violations(&self) -> impl Iterator<Item = &LemmaViolation> {
        self.violations.iter().map(|(_, _, v)| v)
    }

    pub fn index_of(&self, world: &World) -> Option<usize> {
        self.index.get(&canonical(world).1).copied()
    }

    /// Worst-case rounds to dispersion from a state; `None` if unbounded.
    pub fn worst_case_from(&self, state: usize) -> Option<usize> {
        self.worst[state]
    }

    /// Worst case over all starting states; `None` if any is unbounded.
    pub fn worst_case(&self) -> Option<usize> {
        self.starts
            .iter()
            .map(|&s| self.worst[s])
            .try_fold(0, |acc, w| w.map(|w| acc.max(w)))
    }

    /// Dynamism, expressed for `from` as it actually is, that leads to a world
    /// whose canonical form is state `target`.
    fn branch_towards(
        &self,
        from: &World,
        target: usize,
    ) -> Result<(Dynamism, World), ScenarioError> {
        let n = from.n();
        let (r, c) = canonical(from);
        for d in branches(c.config(), self.mode)? {
            let step = advance(&c, self.policy, self.k, &d)?;
            if self.index.get(&canonical(&step.next).1) == Some(&target) {
                let real = conjugate(&d, r, n);
                let next = advance(from, self.policy, self.k, &real)?.next;
                return Ok((real, next));
            }
        }
        unreachable!("target is a recorded successor")
    }

    /// Shortest path of canonical states from some start to `target`.
    fn path_to(&self, target: usize) -> Vec<usize> {
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut queue: VecDeque<usize> = self.starts.iter().copied().collect();
        let mut seen: Vec<bool> = vec![false; self.states.len()];
        for &s in &self.starts {
            seen[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            if s == target {
                break;
            }
            for &t in &self.successors[s] {
                let t = t as usize;
                if !seen[t] {
                    seen[t] = true;
                    parent.insert(t, s);
                    queue.push_back(t);
                }
            }
        }
        let mut path = vec![target];
        while let Some(&p) = parent.get(path.last().expect("non-empty")) {
            path.push(p);
        }
        path.reverse();
        path
    }

    fn script_along(
        &self,
        path: &[usize],
        reason: String,
    ) -> Result<Counterexample, ScenarioError> {
        let start = self.states[path[0]].clone();
        let mut world = start.clone();
        let mut script = Vec::new();
        for &t in &path[1..] {
            let (d, next) = self.branch_towards(&world, t)?;
            script.push(d);
            world = next;
        }
        Ok(Counterexample {
            start,
            script,
            reason,
        })
    }

    /// A run that needs more than `bound` rounds, if there is one.
    pub fn bound_counterexample(
        &self,
        bound: usize,
    ) -> Result<Option<Counterexample>, ScenarioError> {
        let exceeds = |s: usize| self.worst[s].is_none_or(|w| w > bound);
        let Some(&start) = self.starts.iter().find(|&&s| exceeds(s)) else {
            return Ok(None);
        };
        // follow the adversary's best replies for `bound` rounds
        let mut path = vec![start];
        let mut s = start;
        for _ in 0..bound {
            let succ = &self.successors[s];
            let Some(&next) = succ
                .iter()
                .max_by_key(|&&t| self.worst[t as usize].map_or(usize::MAX, |w| w))
            else {
                break;
            };
            s = next as usize;
            path.push(s);
        }
        let reason = match self.worst[start] {
            Some(w) => format!("needs {w} rounds, bound is {bound}"),
            None => "the adversary can prevent dispersion forever".to_string(),
        };
        self.script_along(&path, reason).map(Some)
    }

    /// A run ending in the first recorded lemma violation, if any.
    pub fn lemma_counterexample(&self) -> Result<Option<Counterexample>, ScenarioError> {
        let Some((state, d, v)) = self.violations.first() else {
            return Ok(None);
        };
        let path = self.path_to(*state);
        let mut cx = self.script_along(&path, format!("{v}"))?;
        let mut world = cx.start.clone();
        for step in &cx.script {
            world = advance(&world, self.policy, self.k, step)?.next;
        }
        let (r, c) = canonical(&world);
        debug_assert_eq!(c, self.states[*state]);
        cx.script.push(conjugate(d, r, world.n()));
        Ok(Some(cx))
    }
}

/// Outcome of checking a round bound exhaustively.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub policy: PolicyKind,
    pub mode: Mode,
    pub n: usize,
    /// `None` when some run never disperses.
    pub worst_case: Option<usize>,
    pub bound: usize,
    pub pass: bool,
    pub states: usize,
    pub transitions: usize,
    pub lemma_violations: usize,
    pub counterexample: Option<Counterexample>,
}

/// Explores every start and every adversary branch, and checks that all runs
/// disperse within `bound` rounds without a lemma violation.
pub fn verify_worst_case(
    policy: PolicyKind,
    mode: Mode,
    n: usize,
    bound: usize,
    options: SearchOptions,
) -> Result<(BoundReport, GameGraph), VerifyError> {
    if n > SEARCH_LIMIT {
        return Err(VerifyError::Guard {
            n,
            limit: SEARCH_LIMIT,
        });
    }
    let starts = initial_worlds(policy, n, options.labeled)?;
    let graph = GameGraph::explore(policy, mode, &starts, options.state_budget)?;
    let worst_case = graph.worst_case();
    let bound_ok = worst_case.is_some_and(|w| w <= bound);
    let lemma_violations = graph.violations.len();
    let counterexample = if !bound_ok {
        graph.bound_counterexample(bound)?
    } else {
        graph.lemma_counterexample()?
    };
    let report = BoundReport {
        policy,
        mode,
        n,
        worst_case,
        bound,
        pass: bound_ok && lemma_violations == 0,
        states: graph.states_explored(),
        transitions: graph.transitions(),
        lemma_violations,
        counterexample,
    };
    Ok((report, graph))
}

/// Replays a counterexample through the scheduler. Returns the number of
/// rounds run, whether the ring dispersed, and the lemma violations seen.
pub fn replay_counterexample(
    policy: PolicyKind,
    mode: Mode,
    cx: &Counterexample,
) -> Result<(usize, bool, Vec<LemmaViolation>), ScenarioError> {
    let rounds = cx.script.len();
    let r = run_simulation(
        cx.start.clone(),
        policy,
        Box::new(Scripted::new(cx.script.clone())),
        cx.start.n(),
        mode,
        rounds,
    )?;
    Ok((r.rounds, r.outcome == Outcome::Dispersed, r.violations))
}
