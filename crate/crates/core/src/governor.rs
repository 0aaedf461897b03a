//! The ethical layer's cycle: infer human intents, generate alternatives,
//! predict each one, evaluate, then enforce or revert the robot's goal.

use serde::Serialize;

use crate::evaluation::{evaluate_cycle, Decision, EvaluationRecord, QRow};
use crate::generation::{generate, Alternative, Provenance};
use crate::geom::Vec2;
use crate::human_model::{build_intents, InferredIntent};
use crate::kinematics::WorldState;
use crate::parallel::{map_ordered, Execution};
use crate::prediction::{predict, PredictedOutcome};
use crate::scenario::{Arena, GoalId, GoalSite, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Override {
    pub target: Vec2,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GovernorState {
    pub cycle: u64,
    pub active_override: Option<Override>,
    /// The robot's own goal; `None` leaves it idle unless the governor acts.
    pub base_goal: Option<GoalId>,
    pub command_issued: bool,
}

impl GovernorState {
    pub fn new(scenario: &Scenario) -> Self {
        GovernorState {
            cycle: 0,
            active_override: None,
            base_goal: scenario.robot().base_goal,
            command_issued: false,
        }
    }
}

/// Captures the spoken command at start-up: it replaces the robot's base goal
/// and switches evaluation into obedience mode.
pub fn apply_command(gstate: GovernorState, scenario: &Scenario) -> GovernorState {
    match scenario.command {
        Some(goal) => GovernorState {
            base_goal: Some(goal),
            command_issued: true,
            ..gstate
        },
        None => gstate,
    }
}

/// One row of the per-cycle report stream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleReport {
    pub cycle: u64,
    pub t: f64,
    pub intents: Vec<InferredIntent>,
    pub alternatives: Vec<Alternative>,
    pub outcomes: Vec<PredictedOutcome>,
    pub q_table: Vec<QRow>,
    pub delta_q: f64,
    pub enforce_threshold: f64,
    pub decision: Decision,
    pub override_state: Option<Override>,
    pub arena: Arena,
    pub sites: Vec<GoalSite>,
}

#[derive(Debug, Clone)]
pub struct CycleOutput {
    pub state: GovernorState,
    /// New goal for the robot, when it differs from the current one.
    pub robot_goal: Option<Vec2>,
    pub record: EvaluationRecord,
    pub report: CycleReport,
}

/// Runs one governor cycle against `history` (oldest first; the last entry
/// is the current world).
pub fn governor_cycle(
    history: &[WorldState],
    gstate: &GovernorState,
    scenario: &Scenario,
    exec: Execution,
) -> CycleOutput {
    let world = history.last().expect("governor needs the current world state");
    let intents = build_intents(history, scenario);
    let alternatives = generate(&intents, scenario);
    let outcomes = map_ordered(&alternatives, exec, |alt| {
        predict(world, alt, &intents, scenario)
    });
    let cycle = gstate.cycle + 1;
    let record = evaluate_cycle(cycle, &outcomes, scenario, gstate.command_issued)
        .expect("one outcome per generated alternative");

    let mut state = gstate.clone();
    state.cycle = cycle;
    let robot = scenario.robot_index();
    let mut wanted = None;
    match record.decision {
        Decision::Enforce(i) => {
            let alt = &alternatives[i];
            state.active_override = Some(Override {
                target: alt.target,
                provenance: alt.provenance.clone(),
            });
            wanted = Some(alt.target);
        }
        Decision::NoAction => {
            if state.active_override.take().is_some() {
                // an idle robot reverts to standing still
                wanted = Some(match state.base_goal {
                    Some(g) => scenario.goal(g).position,
                    None => world.position(robot),
                });
            }
        }
    }
    let robot_goal = wanted.filter(|g| world.agents[robot].current_goal != Some(*g));

    let report = CycleReport {
        cycle,
        t: world.time,
        intents,
        alternatives,
        outcomes,
        q_table: record.rows.clone(),
        delta_q: record.delta_q,
        enforce_threshold: scenario.params.enforce_threshold,
        decision: record.decision,
        override_state: state.active_override.clone(),
        arena: scenario.arena,
        sites: scenario.goals.clone(),
    };
    CycleOutput {
        state,
        robot_goal,
        record,
        report,
    }
}

impl CycleOutput {
    /// Applies the cycle's goal mutation. Only the robot is ever touched.
    pub fn apply(&self, world: &mut WorldState, scenario: &Scenario) {
        if let Some(goal) = self.robot_goal {
            world.set_goal(scenario.robot_index(), goal);
        }
    }
}
