//! Per-tick trace rows: CSV persistence and the run summary derived from them.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::kinematics::WorldState;
use crate::scenario::{GoalId, Role, Scenario};

pub const TRACE_HEADER: [&str; 10] = [
    "tick", "t_s", "agent_id", "x_m", "y_m", "heading_x", "heading_y", "goal_x", "goal_y", "halted",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub tick: u64,
    pub t_s: f64,
    pub agent_id: String,
    pub position: Vec2,
    pub heading: Vec2,
    pub goal: Option<Vec2>,
    pub halted: bool,
}

pub fn rows_for<'a>(world: &'a WorldState, scenario: &'a Scenario) -> impl Iterator<Item = TraceRow> + 'a {
    world
        .agents
        .iter()
        .zip(&scenario.agents)
        .map(move |(a, spec)| TraceRow {
            tick: world.tick,
            t_s: world.time,
            agent_id: spec.id.clone(),
            position: a.pose.position,
            heading: a.pose.heading,
            goal: a.current_goal,
            halted: a.is_halted(),
        })
}

/// Formats like C's `%.9g`.
pub fn fmt_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_owned()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

pub fn write_trace<W: Write>(out: W, rows: &[TraceRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::MalformedTrace(e.to_string());
    w.write_record(TRACE_HEADER).map_err(io)?;
    for r in rows {
        let (gx, gy) = match r.goal {
            Some(g) => (fmt_sig9(g.x), fmt_sig9(g.y)),
            None => (String::new(), String::new()),
        };
        w.write_record([
            r.tick.to_string(),
            fmt_sig9(r.t_s),
            r.agent_id.clone(),
            fmt_sig9(r.position.x),
            fmt_sig9(r.position.y),
            fmt_sig9(r.heading.x),
            fmt_sig9(r.heading.y),
            gx,
            gy,
            r.halted.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::MalformedTrace(e.to_string()))?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let bad = |line: usize, what: &str| Error::MalformedTrace(format!("record {line}: {what}"));
    let header = rd
        .headers()
        .map_err(|e| Error::MalformedTrace(e.to_string()))?
        .clone();
    if header.iter().ne(TRACE_HEADER) {
        return Err(Error::MalformedTrace(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (n, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| Error::MalformedTrace(e.to_string()))?;
        let f = |i: usize| -> Result<f64> {
            rec[i].parse().map_err(|_| bad(n + 1, TRACE_HEADER[i]))
        };
        let goal = if rec[7].is_empty() && rec[8].is_empty() {
            None
        } else {
            Some(Vec2::new(f(7)?, f(8)?))
        };
        rows.push(TraceRow {
            tick: rec[0].parse().map_err(|_| bad(n + 1, "tick"))?,
            t_s: f(1)?,
            agent_id: rec[2].to_owned(),
            position: Vec2::new(f(3)?, f(4)?),
            heading: Vec2::new(f(5)?, f(6)?),
            goal,
            halted: rec[9].parse().map_err(|_| bad(n + 1, "halted"))?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoalDistances {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentSummary {
    pub agent_id: String,
    pub final_position: Vec2,
    pub final_goal_distance: GoalDistances,
    /// Closest approach to any dangerous site; `None` when nothing is dangerous.
    pub min_distance_to_danger: Option<f64>,
    pub halted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub agents: Vec<AgentSummary>,
    /// Humans that never came within the proximity radius of danger and were
    /// brought to a halt by the robot.
    pub humans_saved: Vec<String>,
}

impl RunSummary {
    pub fn agent(&self, id: &str) -> Option<&AgentSummary> {
        self.agents.iter().find(|a| a.agent_id == id)
    }
}

/// Derives the run summary from trace rows only.
pub fn summarize(scenario: &Scenario, rows: &[TraceRow]) -> Result<RunSummary> {
    let radius = scenario.params.proximity_radius;
    let robot_id = &scenario.robot().id;
    let per_agent = |id: &str| -> Vec<&TraceRow> { rows.iter().filter(|r| r.agent_id == id).collect() };
    let robot_rows = per_agent(robot_id);
    if robot_rows.is_empty() {
        return Err(Error::MalformedTrace(format!("no rows for `{robot_id}`")));
    }

    let mut agents = Vec::new();
    let mut saved = Vec::new();
    for spec in &scenario.agents {
        let mine = per_agent(&spec.id);
        let Some(last) = mine.last() else {
            return Err(Error::MalformedTrace(format!("no rows for `{}`", spec.id)));
        };
        let min_danger = mine
            .iter()
            .flat_map(|r| scenario.dangerous_sites().map(|g| g.position.distance(r.position)))
            .min_by(f64::total_cmp);
        agents.push(AgentSummary {
            agent_id: spec.id.clone(),
            final_position: last.position,
            final_goal_distance: GoalDistances {
                a: last.position.distance(scenario.goal(GoalId::A).position),
                b: last.position.distance(scenario.goal(GoalId::B).position),
            },
            min_distance_to_danger: min_danger,
            halted: last.halted,
        });

        if spec.role != Role::Human || !last.halted || min_danger.is_none_or(|d| d <= radius) {
            continue;
        }
        // start of the final halted streak
        let streak = mine.iter().rev().take_while(|r| r.halted).count();
        let first_halted = mine[mine.len() - streak];
        let robot_then = robot_rows.iter().find(|r| r.tick == first_halted.tick);
        if robot_then.is_some_and(|r| r.position.distance(first_halted.position) < radius) {
            saved.push((first_halted.tick, spec.id.clone()));
        }
    }
    saved.sort();
    Ok(RunSummary {
        agents,
        humans_saved: saved.into_iter().map(|(_, id)| id).collect(),
    })
}
