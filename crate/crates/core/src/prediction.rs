//! Low-fidelity consequence prediction: every agent is extrapolated along a
//! straight line at constant speed until it reaches its modelled destination,
//! comes into contact with another agent, or the horizon expires.
//!
//! Integration runs on the engine's tick, but arrivals and contacts are
//! resolved exactly inside each tick, so the result does not depend on where
//! tick boundaries fall.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generation::Alternative;
use crate::geom::Vec2;
use crate::human_model::InferredIntent;
use crate::kinematics::WorldState;
use crate::scenario::{GoalSite, Scenario};

pub const PREDICTION_HORIZON_S: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopCause {
    ReachedGoal,
    ProximityStop,
    Horizon,
    /// Not modelled as moving at all.
    Stationary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentFinal {
    pub agent_id: String,
    pub position: Vec2,
    pub stop_cause: StopCause,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictedOutcome {
    pub alternative: usize,
    /// One entry per scenario agent, in scenario order.
    pub finals: Vec<AgentFinal>,
}

impl PredictedOutcome {
    pub fn final_of(&self, agent_id: &str) -> Result<&AgentFinal> {
        self.finals
            .iter()
            .find(|f| f.agent_id == agent_id)
            .ok_or_else(|| Error::UnknownAgent(agent_id.to_owned()))
    }
}

/// Distance between an agent's predicted final position and a goal site.
pub fn final_distance(outcome: &PredictedOutcome, agent_id: &str, site: &GoalSite) -> Result<f64> {
    Ok(outcome.final_of(agent_id)?.position.distance(site.position))
}

/// A point agent moving in a straight line at constant speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Body {
    pub position: Vec2,
    pub destination: Option<Vec2>,
    pub speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictConfig {
    pub proximity_radius: f64,
    pub dt: f64,
    pub horizon_s: f64,
}

impl PredictConfig {
    pub fn from_scenario(scenario: &Scenario) -> Self {
        PredictConfig {
            proximity_radius: scenario.params.proximity_radius,
            dt: scenario.params.dt(),
            horizon_s: PREDICTION_HORIZON_S,
        }
    }
}

const EPS_T: f64 = 1e-12;

struct Track {
    pos: Vec2,
    dest: Vec2,
    vel: Vec2,
    stopped: Option<StopCause>,
}

impl Track {
    fn time_to_arrival(&self) -> f64 {
        let speed = self.vel.norm();
        if speed == 0.0 {
            f64::INFINITY
        } else {
            self.pos.distance(self.dest) / speed
        }
    }
}

/// Earliest time in `[0, ∞)` at which a pair separated by `p` with relative
/// velocity `v` is within `r` and closing, or `None` if that never happens.
fn contact_time(p: Vec2, v: Vec2, r: f64) -> Option<f64> {
    let c = p.dot(p) - r * r;
    let b = p.dot(v);
    if c < 0.0 {
        // already inside: contact now unless separating
        return (b <= 0.0).then_some(0.0);
    }
    let a = v.dot(v);
    if a == 0.0 || b >= 0.0 {
        return None;
    }
    let disc = b * b - a * c;
    if disc < 0.0 {
        return None;
    }
    // smaller root of a t^2 + 2 b t + c = 0, written to avoid cancellation
    Some(c / (-b + disc.sqrt()))
}

/// Runs the straight-line motion model and returns each body's final position
/// and why it stopped.
pub fn simulate_bodies(bodies: &[Body], cfg: &PredictConfig) -> Vec<(Vec2, StopCause)> {
    let r = cfg.proximity_radius;
    let mut tracks: Vec<Track> = bodies
        .iter()
        .map(|b| match b.destination {
            Some(dest) if b.speed > 0.0 => {
                let vel = (dest - b.position)
                    .normalized()
                    .map(|d| d * b.speed)
                    .unwrap_or(Vec2::ZERO);
                Track {
                    pos: b.position,
                    dest,
                    vel,
                    stopped: (vel == Vec2::ZERO).then_some(StopCause::ReachedGoal),
                }
            }
            _ => Track {
                pos: b.position,
                dest: b.position,
                vel: Vec2::ZERO,
                stopped: Some(StopCause::Stationary),
            },
        })
        .collect();

    let n = tracks.len();
    let mut t = 0.0;
    let steps = (cfg.horizon_s / cfg.dt).round() as u64;
    let mut tick = 0u64;
    loop {
        if tracks.iter().all(|k| k.stopped.is_some()) {
            break;
        }
        if tick >= steps {
            for k in tracks.iter_mut().filter(|k| k.stopped.is_none()) {
                k.stopped = Some(StopCause::Horizon);
            }
            break;
        }
        let tick_end = (tick + 1) as f64 * cfg.dt;

        // Resolve every event falling inside this tick.
        while t < tick_end - EPS_T && tracks.iter().any(|k| k.stopped.is_none()) {
            let mut next = tick_end - t;
            let arrivals: Vec<f64> = tracks
                .iter()
                .map(|k| if k.stopped.is_none() { k.time_to_arrival() } else { f64::INFINITY })
                .collect();
            for &a in &arrivals {
                next = next.min(a);
            }
            let mut contacts = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if tracks[i].stopped.is_some() && tracks[j].stopped.is_some() {
                        continue;
                    }
                    let p = tracks[j].pos - tracks[i].pos;
                    let v = tracks[j].vel - tracks[i].vel;
                    if let Some(tc) = contact_time(p, v, r) {
                        contacts.push((i, j, tc));
                        next = next.min(tc);
                    }
                }
            }

            for (k, &arr) in tracks.iter_mut().zip(&arrivals) {
                if k.stopped.is_none() {
                    k.pos = if arr <= next + EPS_T { k.dest } else { k.pos + k.vel * next };
                }
            }
            t += next;

            for (k, &arr) in tracks.iter_mut().zip(&arrivals) {
                if k.stopped.is_none() && arr <= next + EPS_T {
                    k.stopped = Some(StopCause::ReachedGoal);
                    k.vel = Vec2::ZERO;
                }
            }
            for &(i, j, tc) in &contacts {
                if tc <= next + EPS_T {
                    for m in [i, j] {
                        if tracks[m].stopped.is_none() {
                            tracks[m].stopped = Some(StopCause::ProximityStop);
                        }
                        tracks[m].vel = Vec2::ZERO;
                    }
                }
            }
        }
        t = t.max(tick_end);
        tick += 1;
    }

    tracks
        .into_iter()
        .map(|k| (k.pos, k.stopped.expect("all tracks stopped")))
        .collect()
}

/// Predicts the final positions of all agents if the robot were sent to
/// `alternative.target` now.
///
/// The robot moves at its nominal speed; moving humans follow their inferred
/// path at their observed speed; everyone else stays put.
pub fn predict(
    world: &WorldState,
    alternative: &Alternative,
    intents: &[InferredIntent],
    scenario: &Scenario,
) -> PredictedOutcome {
    let robot = scenario.robot_index();
    let bodies: Vec<Body> = scenario
        .agents
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let here = world.position(i);
            if i == robot {
                return Body {
                    position: here,
                    destination: Some(alternative.target),
                    speed: spec.nominal_speed,
                };
            }
            match intents.iter().find(|it| it.agent == i && it.moving) {
                Some(it) => Body {
                    position: it.predicted_path.0,
                    destination: Some(it.predicted_path.1),
                    speed: it.observed_speed,
                },
                None => Body {
                    position: here,
                    destination: None,
                    speed: 0.0,
                },
            }
        })
        .collect();

    let finals = simulate_bodies(&bodies, &PredictConfig::from_scenario(scenario))
        .into_iter()
        .zip(&scenario.agents)
        .map(|((position, stop_cause), spec)| AgentFinal {
            agent_id: spec.id.clone(),
            position,
            stop_cause,
        })
        .collect();
    PredictedOutcome {
        alternative: alternative.index,
        finals,
    }
}
