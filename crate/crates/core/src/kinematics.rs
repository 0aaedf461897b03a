//! Fixed-tick kinematic engine: straight-line motion toward each agent's
//! current goal, proximity halting and seeded multiplicative speed noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Result;
use crate::geom::{Pose, Vec2};
use crate::scenario::Scenario;

/// Length of the trailing window used to estimate agent speed.
pub const SPEED_WINDOW_S: f64 = 0.5;

/// Why an agent is halted. The halt is latched until its goal changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "agent")]
pub enum HaltCause {
    ReachedGoal,
    /// Stopped by proximity to the agent with this index.
    Proximity(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub pose: Pose,
    pub current_goal: Option<Vec2>,
    pub halted: Option<HaltCause>,
}

impl AgentState {
    pub fn is_halted(&self) -> bool {
        self.halted.is_some()
    }

    pub fn is_moving(&self) -> bool {
        self.current_goal.is_some() && self.halted.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub tick: u64,
    pub time: f64,
    pub agents: Vec<AgentState>,
    rng: ChaCha8Rng,
}

impl WorldState {
    /// Initial state: every agent at its start pose, aimed at its base goal.
    pub fn new(scenario: &Scenario) -> Self {
        let agents = scenario
            .agents
            .iter()
            .map(|spec| {
                let goal = spec.base_goal.map(|g| scenario.goal(g).position);
                let mut pose = spec.start;
                if let Some(dir) = goal.and_then(|g| (g - pose.position).normalized()) {
                    pose.heading = dir;
                }
                AgentState {
                    pose,
                    current_goal: goal,
                    halted: None,
                }
            })
            .collect();
        WorldState {
            tick: 0,
            time: 0.0,
            agents,
            rng: ChaCha8Rng::seed_from_u64(scenario.seed),
        }
    }

    pub fn position(&self, agent: usize) -> Vec2 {
        self.agents[agent].pose.position
    }

    /// Returns the successor state, leaving `self` untouched.
    pub fn step(&self, scenario: &Scenario) -> WorldState {
        let mut next = self.clone();
        next.advance(scenario);
        next
    }

    /// Advances one tick in place.
    ///
    /// All displacements are computed from the pre-step snapshot; halting is
    /// decided on post-move positions. A pair closer than the proximity radius
    /// halts both members unless the step increased their separation, which
    /// lets an agent walk away from someone it is already touching.
    pub fn advance(&mut self, scenario: &Scenario) {
        let dt = scenario.params.dt();
        let radius = scenario.params.proximity_radius;
        let before: Vec<Vec2> = self.agents.iter().map(|a| a.pose.position).collect();

        for (agent, spec) in self.agents.iter_mut().zip(&scenario.agents) {
            // one draw per agent per tick keeps the stream layout fixed
            let z: f64 = self.rng.sample(StandardNormal);
            let Some(goal) = agent.current_goal else { continue };
            if agent.halted.is_some() {
                continue;
            }
            let speed = (spec.nominal_speed * (1.0 + spec.speed_noise_sigma * z)).max(0.0);
            let to_goal = goal - agent.pose.position;
            let remaining = to_goal.norm();
            if let Some(dir) = to_goal.normalized() {
                agent.pose.heading = dir;
                agent.pose.position = if speed * dt >= remaining {
                    goal
                } else {
                    agent.pose.position + dir * (speed * dt)
                };
            }
        }

        let after: Vec<Vec2> = self.agents.iter().map(|a| a.pose.position).collect();
        let mut halts: Vec<Option<HaltCause>> = vec![None; after.len()];
        for i in 0..after.len() {
            if let Some(goal) = self.agents[i].current_goal {
                if after[i].distance(goal) < radius {
                    halts[i] = Some(HaltCause::ReachedGoal);
                }
            }
        }
        for i in 0..after.len() {
            for j in (i + 1)..after.len() {
                let d = after[i].distance(after[j]);
                if d < radius && d <= before[i].distance(before[j]) {
                    halts[i].get_or_insert(HaltCause::Proximity(j));
                    halts[j].get_or_insert(HaltCause::Proximity(i));
                }
            }
        }
        for (agent, halt) in self.agents.iter_mut().zip(halts) {
            if agent.halted.is_none() {
                agent.halted = halt;
            }
        }

        self.tick += 1;
        self.time = self.tick as f64 / scenario.params.tick_hz;
    }

    /// Replaces an agent's goal, releasing any latched halt and re-aiming it.
    pub fn set_goal(&mut self, agent: usize, goal: Vec2) {
        let a = &mut self.agents[agent];
        a.current_goal = Some(goal);
        a.halted = None;
        if let Some(dir) = (goal - a.pose.position).normalized() {
            a.pose.heading = dir;
        }
    }

    /// Label-addressed, value-returning form of [`WorldState::set_goal`].
    pub fn with_goal(&self, scenario: &Scenario, agent_id: &str, goal: Vec2) -> Result<WorldState> {
        let idx = scenario.agent_index(agent_id)?;
        let mut next = self.clone();
        next.set_goal(idx, goal);
        Ok(next)
    }
}

/// Mean speed (m/s) of `agent` over the trailing [`SPEED_WINDOW_S`] of
/// `history`, which must be ordered oldest first. Returns 0 with fewer than two
/// states.
pub fn observed_speed_at(history: &[WorldState], agent: usize) -> f64 {
    let Some(latest) = history.last() else { return 0.0 };
    let cutoff = latest.time - SPEED_WINDOW_S - 1e-9;
    let Some(oldest) = history.iter().find(|s| s.time >= cutoff) else {
        return 0.0;
    };
    let elapsed = latest.time - oldest.time;
    if elapsed <= 0.0 {
        return 0.0;
    }
    latest.position(agent).distance(oldest.position(agent)) / elapsed
}

pub fn observed_speed(history: &[WorldState], scenario: &Scenario, agent_id: &str) -> Result<f64> {
    let idx = scenario.agent_index(agent_id)?;
    Ok(observed_speed_at(history, idx))
}

/// Fixed-capacity trailing history of world states, enough to cover the
/// speed-estimation window.
#[derive(Debug, Clone)]
pub struct History {
    states: std::collections::VecDeque<WorldState>,
    capacity: usize,
}

impl History {
    pub fn new(scenario: &Scenario) -> Self {
        let capacity = (SPEED_WINDOW_S * scenario.params.tick_hz).ceil() as usize + 1;
        History {
            states: std::collections::VecDeque::with_capacity(capacity + 1),
            capacity: capacity.max(2),
        }
    }

    pub fn push(&mut self, state: WorldState) {
        if self.states.len() == self.capacity {
            self.states.pop_front();
        }
        self.states.push_back(state);
    }

    pub fn latest(&self) -> Option<&WorldState> {
        self.states.back()
    }

    pub fn as_slice(&mut self) -> &[WorldState] {
        self.states.make_contiguous()
    }
}
