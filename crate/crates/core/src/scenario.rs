//! Declarative scenario description: arena, goal sites, agents and governor
//! parameters. Scenarios are immutable once loaded.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Pose, Vec2};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GoalId {
    A,
    B,
}

impl fmt::Display for GoalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GoalId::A => "A",
            GoalId::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalSite {
    pub id: GoalId,
    pub position: Vec2,
    pub dangerous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Human,
    EthicalRobot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub id: String,
    pub role: Role,
    pub start: Pose,
    pub base_goal: Option<GoalId>,
    pub nominal_speed: f64,
    #[serde(default)]
    pub speed_noise_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arena {
    pub width: f64,
    pub height: f64,
}

impl Arena {
    pub fn contains(&self, p: Vec2) -> bool {
        p.is_finite() && (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }
}

/// Tunable constants of the engine and the governor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    /// Halting distance between agents, and between an agent and its goal (m).
    pub proximity_radius: f64,
    /// Observed speed at or above which a human counts as moving (m/s).
    pub motion_threshold: f64,
    /// Sigmoid steepness.
    pub beta: f64,
    /// Sigmoid midpoint distance (m).
    pub t_shift: f64,
    /// Summed human q above which no human is considered in danger.
    pub danger_threshold: f64,
    /// Minimum spread of combined scores before the governor intervenes.
    pub enforce_threshold: f64,
    pub tick_hz: f64,
    pub governor_period_ticks: u32,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            proximity_radius: 0.5,
            motion_threshold: 0.01,
            beta: 10.0,
            t_shift: 0.25,
            danger_threshold: 0.75,
            enforce_threshold: 0.2,
            tick_hz: 30.0,
            governor_period_ticks: 30,
        }
    }
}

impl Params {
    pub fn dt(&self) -> f64 {
        1.0 / self.tick_hz
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    #[serde(default = "default_name")]
    pub name: String,
    pub arena: Arena,
    pub goals: Vec<GoalSite>,
    pub agents: Vec<AgentSpec>,
    #[serde(default)]
    pub command: Option<GoalId>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub seed: u64,
    pub duration_s: f64,
}

fn default_name() -> String {
    "custom".to_owned()
}

impl Scenario {
    /// Parses and validates a JSON scenario document, applying defaults for
    /// omitted parameters.
    pub fn load(source: &str) -> Result<Scenario> {
        let doc: serde_json::Value =
            serde_json::from_str(source).map_err(|e| Error::schema("<document>", e.to_string()))?;
        match doc.get("schema_version") {
            None => return Err(Error::schema("schema_version", "missing")),
            Some(v) if v.as_u64() != Some(SCHEMA_VERSION as u64) => {
                return Err(Error::schema(
                    "schema_version",
                    format!("unsupported version {v}, expected {SCHEMA_VERSION}"),
                ))
            }
            Some(_) => {}
        }
        let scenario: Scenario =
            serde_json::from_value(doc).map_err(|e| Error::schema("<document>", e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Canonical pretty-printed JSON form; `load(to_json(s)) == s`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization is infallible")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::schema("schema_version", "unsupported version"));
        }
        let a = self.arena;
        if !(a.width.is_finite() && a.width > 0.0 && a.height.is_finite() && a.height > 0.0) {
            return Err(Error::schema("arena", "width and height must be positive"));
        }

        if self.goals.len() != 2 {
            return Err(Error::schema(
                "goals",
                format!("exactly two goal sites required, got {}", self.goals.len()),
            ));
        }
        if self.goals[0].id == self.goals[1].id {
            return Err(Error::DuplicateGoal(self.goals[0].id.to_string()));
        }
        for g in &self.goals {
            if !a.contains(g.position) {
                return Err(Error::Geometry(format!(
                    "goal {} at ({}, {}) lies outside the {} x {} arena",
                    g.id, g.position.x, g.position.y, a.width, a.height
                )));
            }
        }

        let robots = self
            .agents
            .iter()
            .filter(|s| s.role == Role::EthicalRobot)
            .count();
        if robots != 1 {
            return Err(Error::schema(
                "agents",
                format!("exactly one ethical-robot required, got {robots}"),
            ));
        }
        if !self.agents.iter().any(|s| s.role == Role::Human) {
            return Err(Error::schema("agents", "at least one human required"));
        }
        for (i, s) in self.agents.iter().enumerate() {
            if self.agents[..i].iter().any(|o| o.id == s.id) {
                return Err(Error::schema(
                    format!("agents[{i}].id"),
                    format!("duplicate agent id `{}`", s.id),
                ));
            }
            if !(s.nominal_speed.is_finite() && s.nominal_speed > 0.0) {
                return Err(Error::schema(
                    format!("agents[{i}].nominal_speed"),
                    "must be positive",
                ));
            }
            if !(s.speed_noise_sigma.is_finite() && s.speed_noise_sigma >= 0.0) {
                return Err(Error::schema(
                    format!("agents[{i}].speed_noise_sigma"),
                    "must be non-negative",
                ));
            }
            if (s.start.heading.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::schema(
                    format!("agents[{i}].start.heading"),
                    "must be a unit vector",
                ));
            }
            if !a.contains(s.start.position) {
                return Err(Error::Geometry(format!(
                    "agent `{}` starts at ({}, {}) outside the {} x {} arena",
                    s.id, s.start.position.x, s.start.position.y, a.width, a.height
                )));
            }
        }

        let p = &self.params;
        let positive = [
            ("params.proximity_radius", p.proximity_radius),
            ("params.motion_threshold", p.motion_threshold),
            ("params.beta", p.beta),
            ("params.t_shift", p.t_shift),
            ("params.danger_threshold", p.danger_threshold),
            ("params.enforce_threshold", p.enforce_threshold),
            ("params.tick_hz", p.tick_hz),
            ("duration_s", self.duration_s),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::schema(field, "must be positive"));
            }
        }
        if p.governor_period_ticks < 1 {
            return Err(Error::schema("params.governor_period_ticks", "must be >= 1"));
        }
        Ok(())
    }

    pub fn goal(&self, id: GoalId) -> &GoalSite {
        self.goals
            .iter()
            .find(|g| g.id == id)
            .expect("validated scenario holds both goal sites")
    }

    pub fn dangerous_sites(&self) -> impl Iterator<Item = &GoalSite> {
        self.goals.iter().filter(|g| g.dangerous)
    }

    pub fn robot_index(&self) -> usize {
        self.agents
            .iter()
            .position(|s| s.role == Role::EthicalRobot)
            .expect("validated scenario holds one ethical-robot")
    }

    pub fn robot(&self) -> &AgentSpec {
        &self.agents[self.robot_index()]
    }

    pub fn agent_index(&self, id: &str) -> Result<usize> {
        self.agents
            .iter()
            .position(|s| s.id == id)
            .ok_or_else(|| Error::UnknownAgent(id.to_owned()))
    }

    pub fn human_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.agents
            .iter()
            .enumerate()
            .filter(|(_, s)| s.role == Role::Human)
            .map(|(i, _)| i)
    }

    pub fn human_count(&self) -> usize {
        self.human_indices().count()
    }

    pub fn total_ticks(&self) -> u64 {
        (self.duration_s * self.params.tick_hz).floor() as u64
    }

    /// Number of governor cycles a full run performs.
    pub fn cycle_count(&self) -> u64 {
        self.total_ticks() / self.params.governor_period_ticks as u64
    }
}
