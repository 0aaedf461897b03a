//! The governor's model of a human: goal inferred from gaze, path predicted
//! as a straight walk to that goal.
//!
//! Only observable state is consulted (pose and position history). The
//! human's private `base_goal` is never read here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Pose, Vec2};
use crate::kinematics::{observed_speed_at, WorldState};
use crate::scenario::{GoalId, GoalSite, Role, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InferredIntent {
    pub agent_id: String,
    #[serde(skip)]
    pub agent: usize,
    pub inferred_goal: GoalId,
    /// Straight line from the observed position to the inferred goal.
    pub predicted_path: (Vec2, Vec2),
    pub observed_speed: f64,
    pub moving: bool,
}

fn gaze_angle(pose: &Pose, target: Vec2) -> f64 {
    let bearing = target - pose.position;
    pose.heading.cross(bearing).atan2(pose.heading.dot(bearing)).abs()
}

/// Picks the goal whose bearing is angularly closest to the heading.
/// Exact ties go to goal A; a goal at the observer's own position wins outright.
pub fn infer_goal(pose: &Pose, goals: &[GoalSite]) -> GoalId {
    let mut sorted: Vec<&GoalSite> = goals.iter().collect();
    sorted.sort_by_key(|g| g.id);
    if let Some(g) = sorted
        .iter()
        .find(|g| g.position.distance(pose.position) < 1e-12)
    {
        return g.id;
    }
    let mut best = sorted[0];
    let mut best_angle = gaze_angle(pose, best.position);
    for g in &sorted[1..] {
        let a = gaze_angle(pose, g.position);
        if a < best_angle {
            best = g;
            best_angle = a;
        }
    }
    best.id
}

/// Builds the intent of one human from the trailing world history (oldest
/// first).
pub fn build_intent(history: &[WorldState], agent_id: &str, scenario: &Scenario) -> Result<InferredIntent> {
    let agent = scenario.agent_index(agent_id)?;
    build_intent_at(history, agent, scenario)
}

pub(crate) fn build_intent_at(history: &[WorldState], agent: usize, scenario: &Scenario) -> Result<InferredIntent> {
    let spec = &scenario.agents[agent];
    if spec.role != Role::Human {
        return Err(Error::WrongRole {
            id: spec.id.clone(),
            expected: "human",
        });
    }
    let latest = history
        .last()
        .expect("intent inference needs at least one world state");
    let pose = latest.agents[agent].pose;
    let inferred_goal = infer_goal(&pose, &scenario.goals);
    let speed = observed_speed_at(history, agent);
    Ok(InferredIntent {
        agent_id: spec.id.clone(),
        agent,
        inferred_goal,
        predicted_path: (pose.position, scenario.goal(inferred_goal).position),
        observed_speed: speed,
        moving: speed >= scenario.params.motion_threshold,
    })
}

/// Intents for every human in scenario order.
pub fn build_intents(history: &[WorldState], scenario: &Scenario) -> Vec<InferredIntent> {
    scenario
        .human_indices()
        .map(|i| build_intent_at(history, i, scenario).expect("index is a human"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;
    use proptest::prelude::*;

    fn sites(a: Vec2, b: Vec2) -> Vec<GoalSite> {
        vec![
            GoalSite { id: GoalId::A, position: a, dangerous: false },
            GoalSite { id: GoalId::B, position: b, dangerous: true },
        ]
    }

    #[test]
    fn zero_angle_goal() {
        let pose = Pose::new(Vec2::ZERO, Vec2::new(1.0, 0.0));
        let g = sites(Vec2::new(2.0, 0.0), Vec2::new(-2.0, 0.0));
        assert_eq!(infer_goal(&pose, &g), GoalId::A);
    }

    #[test]
    fn smaller_angle_wins() {
        // Heading +y; A at atan2(1,2) from +x, i.e. 63.4 deg off heading's
        // complement... angle to A = 90 - 26.57 = 63.43 deg, to B = 90 + 26.57.
        let pose = Pose::new(Vec2::ZERO, Vec2::new(0.0, 1.0));
        let g = sites(Vec2::new(2.0, 1.0), Vec2::new(2.0, -1.0));
        let to_a = (90.0f64 - 1.0f64.atan2(2.0).to_degrees()).to_radians();
        let to_b = (90.0f64 + 1.0f64.atan2(2.0).to_degrees()).to_radians();
        assert!((gaze_angle(&pose, g[0].position) - to_a).abs() < 1e-12);
        assert!((gaze_angle(&pose, g[1].position) - to_b).abs() < 1e-12);
        assert_eq!(infer_goal(&pose, &g), GoalId::A);
    }

    #[test]
    fn bisecting_heading_ties_to_a() {
        let pose = Pose::new(Vec2::ZERO, Vec2::new(1.0, 0.0));
        let g = sites(Vec2::new(2.0, 1.0), Vec2::new(2.0, -1.0));
        assert_eq!(infer_goal(&pose, &g), GoalId::A);
        let mut rev = g.clone();
        rev.reverse();
        assert_eq!(infer_goal(&pose, &rev), GoalId::A);
    }

    #[test]
    fn coincident_goal_wins() {
        let pose = Pose::new(Vec2::new(2.0, -1.0), Vec2::new(-1.0, 0.0));
        let g = sites(Vec2::new(2.0, 1.0), Vec2::new(2.0, -1.0));
        assert_eq!(infer_goal(&pose, &g), GoalId::B);
    }

    fn walked(name: &str, ticks: usize) -> (Scenario, Vec<WorldState>) {
        let s = preset(name).unwrap();
        let mut w = WorldState::new(&s);
        let mut h = vec![w.clone()];
        for _ in 0..ticks {
            w.advance(&s);
            h.push(w.clone());
        }
        (s, h)
    }

    #[test]
    fn walking_human_is_moving_toward_a() {
        let (s, h) = walked("exp3", 30);
        let intent = build_intent(&h, "human", &s).unwrap();
        assert!(intent.moving);
        assert_eq!(intent.inferred_goal, GoalId::A);
        assert_eq!(intent.predicted_path.0, h.last().unwrap().position(1));
        assert_eq!(intent.predicted_path.1, s.goal(GoalId::A).position);
    }

    #[test]
    fn stationary_human_not_moving() {
        let (s, h) = walked("exp1", 30);
        let intent = build_intent(&h, "human", &s).unwrap();
        assert!(!intent.moving);
        assert_eq!(intent.observed_speed, 0.0);
    }

    #[test]
    fn two_humans_two_intents() {
        let (s, h) = walked("multi-human-fast-A", 30);
        let intents = build_intents(&h, &s);
        assert_eq!(intents.len(), 2);
        assert_eq!(intents[0].inferred_goal, GoalId::A);
        assert_eq!(intents[1].inferred_goal, GoalId::B);
        assert!(intents.iter().all(|i| i.moving));
    }

    #[test]
    fn robot_is_not_a_human() {
        let (s, h) = walked("exp3", 2);
        assert!(matches!(
            build_intent(&h, "robot", &s),
            Err(Error::WrongRole { .. })
        ));
        assert!(matches!(
            build_intent(&h, "nobody", &s),
            Err(Error::UnknownAgent(_))
        ));
    }

    #[test]
    fn private_goal_is_not_consulted() {
        let (mut s, h) = walked("exp3", 30);
        let before = build_intent(&h, "human", &s).unwrap();
        s.agents[1].base_goal = Some(GoalId::B);
        let after = build_intent(&h, "human", &s).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn inferred_goal_stable_along_straight_walk() {
        let s = preset("exp3").unwrap();
        let mut w = WorldState::new(&s);
        let mut h = vec![w.clone()];
        for tick in 1..=s.total_ticks() {
            w.advance(&s);
            h.push(w.clone());
            if tick % 30 == 0 {
                let i = build_intent(&h[h.len().saturating_sub(16)..], "human", &s).unwrap();
                assert_eq!(i.inferred_goal, GoalId::A);
            }
        }
    }

    fn rotate(v: Vec2, th: f64) -> Vec2 {
        let (s, c) = th.sin_cos();
        Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
    }

    proptest! {
        #[test]
        fn rotation_invariant(
            px in -5.0..5.0f64, py in -5.0..5.0f64,
            hx in -1.0..1.0f64, hy in -1.0..1.0f64,
            ax in -5.0..5.0f64, ay in -5.0..5.0f64,
            bx in -5.0..5.0f64, by in -5.0..5.0f64,
            th in -std::f64::consts::PI..std::f64::consts::PI,
        ) {
            let heading = Vec2::new(hx, hy);
            prop_assume!(heading.norm() > 0.1);
            let pose = Pose::new(Vec2::new(px, py), heading);
            let (a, b) = (Vec2::new(ax, ay), Vec2::new(bx, by));
            prop_assume!(a.distance(pose.position) > 0.1 && b.distance(pose.position) > 0.1);
            let da = gaze_angle(&pose, a);
            let db = gaze_angle(&pose, b);
            // skip near-ties where rounding under rotation could flip the pick
            prop_assume!((da - db).abs() > 1e-9);
            let g = sites(a, b);
            let rpose = Pose::new(rotate(pose.position, th), rotate(pose.heading, th));
            let rg = sites(rotate(a, th), rotate(b, th));
            prop_assert_eq!(infer_goal(&pose, &g), infer_goal(&rpose, &rg));
        }
    }
}
