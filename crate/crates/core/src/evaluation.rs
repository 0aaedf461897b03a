//! Outcome scoring and arbitration.
//!
//! Each agent's predicted final distance to danger is mapped through a
//! sigmoid to a safety score q in (0, 1). Robot and human scores are combined
//! so that human safety outranks obedience, and obedience outranks the
//! robot's own safety. The governor intervenes only when the spread of the
//! combined scores is large enough.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prediction::PredictedOutcome;
use crate::scenario::{Params, Scenario};

/// `1 / (1 + exp(-beta (d - t_shift)))`.
pub fn sigmoid_q(d: f64, beta: f64, t_shift: f64) -> f64 {
    1.0 / (1.0 + (-beta * (d - t_shift)).exp())
}

/// Combined score of one alternative.
///
/// Without a command and with no human in danger the robot's own safety is
/// added; otherwise only human safety counts.
pub fn combine(q_e: f64, q_h: f64, command_issued: bool, danger_threshold: f64) -> f64 {
    if !command_issued && q_h > danger_threshold {
        q_e + q_h
    } else {
        q_h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Enforce(usize),
    NoAction,
}

/// Returns `(delta_q, decision)`. Exact ties at the maximum go to the lowest
/// index.
pub fn decide(q_t: &[f64], enforce_threshold: f64) -> (f64, Decision) {
    assert!(!q_t.is_empty(), "decide needs at least one alternative");
    let mut best = 0;
    let mut lo = q_t[0];
    for (i, &q) in q_t.iter().enumerate().skip(1) {
        if q > q_t[best] {
            best = i;
        }
        lo = lo.min(q);
    }
    let delta_q = q_t[best] - lo;
    let decision = if delta_q > enforce_threshold {
        Decision::Enforce(best)
    } else {
        Decision::NoAction
    };
    (delta_q, decision)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HumanScore {
    pub agent_id: String,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QRow {
    pub index: usize,
    pub q_e: f64,
    pub q_h_each: Vec<HumanScore>,
    pub q_h: f64,
    pub q_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationRecord {
    pub cycle: u64,
    pub rows: Vec<QRow>,
    pub delta_q: f64,
    pub decision: Decision,
}

/// Safety score for a distance to the nearest danger; `None` (no dangerous
/// site at all) scores exactly 1.
pub fn danger_score(distance: Option<f64>, params: &Params) -> f64 {
    match distance {
        Some(d) => sigmoid_q(d, params.beta, params.t_shift),
        None => 1.0,
    }
}

/// Scores one alternative from raw distances to the nearest danger.
pub fn score_alternative(
    index: usize,
    robot_distance: Option<f64>,
    human_distances: &[(String, Option<f64>)],
    params: &Params,
    command_issued: bool,
) -> QRow {
    let q_e = danger_score(robot_distance, params);
    let q_h_each: Vec<HumanScore> = human_distances
        .iter()
        .map(|(id, d)| HumanScore {
            agent_id: id.clone(),
            q: danger_score(*d, params),
        })
        .collect();
    let q_h = q_h_each.iter().map(|h| h.q).sum();
    QRow {
        index,
        q_e,
        q_h_each,
        q_h,
        q_t: combine(q_e, q_h, command_issued, params.danger_threshold),
    }
}

fn nearest_danger(scenario: &Scenario, p: crate::geom::Vec2) -> Option<f64> {
    scenario
        .dangerous_sites()
        .map(|g| g.position.distance(p))
        .min_by(f64::total_cmp)
}

/// Scores every predicted outcome and decides whether to intervene.
/// `outcomes[i]` must belong to alternative `i`.
pub fn evaluate_cycle(
    cycle: u64,
    outcomes: &[PredictedOutcome],
    scenario: &Scenario,
    command_issued: bool,
) -> Result<EvaluationRecord> {
    if outcomes.is_empty() {
        return Err(Error::OutcomeCount {
            expected: 1,
            actual: 0,
        });
    }
    if let Some(bad) = outcomes.iter().enumerate().find(|(i, o)| o.alternative != *i) {
        return Err(Error::OutcomeCount {
            expected: bad.0,
            actual: bad.1.alternative,
        });
    }
    let robot = scenario.robot_index();
    let humans: Vec<usize> = scenario.human_indices().collect();
    let rows: Vec<QRow> = outcomes
        .iter()
        .map(|o| {
            let robot_d = nearest_danger(scenario, o.finals[robot].position);
            let human_d: Vec<(String, Option<f64>)> = humans
                .iter()
                .map(|&h| {
                    (
                        o.finals[h].agent_id.clone(),
                        nearest_danger(scenario, o.finals[h].position),
                    )
                })
                .collect();
            score_alternative(o.alternative, robot_d, &human_d, &scenario.params, command_issued)
        })
        .collect();
    let q_t: Vec<f64> = rows.iter().map(|r| r.q_t).collect();
    let (delta_q, decision) = decide(&q_t, scenario.params.enforce_threshold);
    Ok(EvaluationRecord {
        cycle,
        rows,
        delta_q,
        decision,
    })
}
