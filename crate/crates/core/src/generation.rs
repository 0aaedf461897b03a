//! Behavioural alternatives for the governed robot: both goal sites, plus
//! three points along the predicted path of every moving human.

use serde::Serialize;

use crate::geom::Vec2;
use crate::human_model::InferredIntent;
use crate::scenario::{GoalId, Scenario};

pub const PATH_FRACTIONS: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    Goal { goal: GoalId },
    PathPoint { human_id: String, k: usize },
}

impl Provenance {
    pub fn is_path_point(&self) -> bool {
        matches!(self, Provenance::PathPoint { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Alternative {
    pub index: usize,
    pub target: Vec2,
    pub provenance: Provenance,
}

pub fn generate(intents: &[InferredIntent], scenario: &Scenario) -> Vec<Alternative> {
    let mut out = Vec::with_capacity(2 + 3 * intents.len());
    for goal in [GoalId::A, GoalId::B] {
        out.push(Alternative {
            index: out.len(),
            target: scenario.goal(goal).position,
            provenance: Provenance::Goal { goal },
        });
    }
    for intent in intents.iter().filter(|i| i.moving) {
        let (from, to) = intent.predicted_path;
        for (k, f) in PATH_FRACTIONS.into_iter().enumerate() {
            out.push(Alternative {
                index: out.len(),
                target: from.lerp(to, f),
                provenance: Provenance::PathPoint {
                    human_id: intent.agent_id.clone(),
                    k,
                },
            });
        }
    }
    out
}
