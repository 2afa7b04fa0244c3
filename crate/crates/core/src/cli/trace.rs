//! Line-delimited trace records and their replay.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::spec::{orientation_bits, ExperimentSpec};
use super::CliError;
use crate::adversary::{Dynamism, Scripted};
use crate::ring::{Action, Label, Orientation, RingConfiguration, World};
use crate::scheduler::{Outcome, RunResult, Simulation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum TraceRecord {
    /// Round 0: the experiment and the labeled start.
    Start {
        round: usize,
        spec: ExperimentSpec,
        slots: Vec<Vec<Label>>,
        orientations: String,
        config: Vec<usize>,
        holes: usize,
        multinodes: usize,
    },
    Round {
        round: usize,
        perm: Option<Vec<usize>>,
        edge: Option<usize>,
        intents: Vec<(Label, Action)>,
        config: Vec<usize>,
        holes: usize,
        multinodes: usize,
    },
    Summary {
        outcome: Outcome,
        rounds: usize,
        slots: Vec<Vec<Label>>,
        config: Vec<usize>,
        holes: usize,
        multinodes: usize,
        violations: usize,
    },
}

/// Trace records for a finished run. `spec.seed` must be the seed the run
/// used. The output path is left out so a trace does not depend on where it
/// was written.
pub fn build_records(spec: &ExperimentSpec, start: &World, result: &RunResult) -> Vec<TraceRecord> {
    let spec = ExperimentSpec {
        out: None,
        ..spec.clone()
    };
    let cfg = start.config();
    let m = cfg.classify();
    let mut out = vec![TraceRecord::Start {
        round: 0,
        spec,
        slots: cfg.slots().to_vec(),
        orientations: orientation_bits(&start.orientations()),
        config: cfg.multiplicities(),
        holes: m.holes,
        multinodes: m.multinodes,
    }];
    out.extend(result.trace.iter().map(|t| TraceRecord::Round {
        round: t.round,
        perm: t.dynamism.permutation.clone(),
        edge: t.dynamism.edge,
        intents: t.intents.iter().map(|i| (i.robot, i.action)).collect(),
        config: t.post.multiplicities(),
        holes: t.after.holes,
        multinodes: t.after.multinodes,
    }));
    out.push(summary(result));
    out
}

fn summary(result: &RunResult) -> TraceRecord {
    let cfg = result.world.config();
    let m = cfg.classify();
    TraceRecord::Summary {
        outcome: result.outcome,
        rounds: result.rounds,
        slots: cfg.slots().to_vec(),
        config: cfg.multiplicities(),
        holes: m.holes,
        multinodes: m.multinodes,
        violations: result.violations.len(),
    }
}

pub fn write_records<W: Write>(mut w: W, records: &[TraceRecord]) -> Result<(), CliError> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: BufRead>(r: R) -> Result<Vec<TraceRecord>, CliError> {
    r.lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|l| Ok(serde_json::from_str(&l?)?))
        .collect()
}

/// What a replay reproduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub rounds: usize,
    pub summary: TraceRecord,
    /// The first record that came out differently, if any.
    pub mismatch: Option<String>,
}

/// Re-runs a trace's recorded dynamism from its start and compares every
/// round with the recording.
pub fn replay(records: &[TraceRecord]) -> Result<Replay, CliError> {
    let Some(TraceRecord::Start {
        spec,
        slots,
        orientations,
        ..
    }) = records.first()
    else {
        return Err(CliError::Replay(
            "trace does not begin with a start record".into(),
        ));
    };
    let config = RingConfiguration::new(slots.clone())?;
    let orientations: Vec<Orientation> = orientations
        .chars()
        .map(|c| {
            if c == '1' {
                Orientation::Reversed
            } else {
                Orientation::Aligned
            }
        })
        .collect();
    let start = World::new(config, &orientations)?;
    let recorded: Vec<&TraceRecord> = records[1..]
        .iter()
        .filter(|r| matches!(r, TraceRecord::Round { .. }))
        .collect();
    let script = recorded
        .iter()
        .map(|r| match r {
            TraceRecord::Round { perm, edge, .. } => Dynamism {
                permutation: perm.clone(),
                edge: *edge,
            },
            _ => unreachable!("filtered to rounds"),
        })
        .collect();
    let k = spec.k.radius(spec.n);
    let result = Simulation::new(
        start.clone(),
        spec.policy,
        Box::new(Scripted::new(script)),
        k,
        spec.mode,
    )?
    .run(recorded.len())?;
    let replayed = build_records(spec, &start, &result);
    let mismatch = records
        .iter()
        .zip(&replayed)
        .find(|(a, b)| a != b)
        .map(|(a, b)| {
            format!(
                "recorded {}\nreplayed {}",
                serde_json::json!(a),
                serde_json::json!(b)
            )
        })
        .or_else(|| {
            (records.len() != replayed.len()).then(|| {
                format!(
                    "recorded {} records, replay produced {}",
                    records.len(),
                    replayed.len()
                )
            })
        });
    Ok(Replay {
        rounds: result.rounds,
        summary: summary(&result),
        mismatch,
    })
}

/// Outcome of a run as recorded in its summary.
pub fn outcome_of(records: &[TraceRecord]) -> Option<Outcome> {
    records.iter().rev().find_map(|r| match r {
        TraceRecord::Summary { outcome, .. } => Some(*outcome),
        _ => None,
    })
}
