//! Helpers shared by the integration and acceptance targets.
#![allow(dead_code)]

use ethical_layer::evaluation::{decide, score_alternative};
use ethical_layer::prediction::{Body, PredictConfig};
use ethical_layer::scenario::{Params, Scenario};
use ethical_layer::Vec2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ORACLE_REFINE: u32 = 100;
pub const ORACLE_TOL_M: f64 = 0.02;

/// Fixed-step reference for the straight-line predictor: every step each
/// moving body advances `speed·h` (snapping onto its destination), then any
/// pair that ends the step inside the radius without having separated stops.
pub fn brute_force(bodies: &[Body], cfg: &PredictConfig, refine: u32) -> Vec<Vec2> {
    let h = cfg.dt / refine as f64;
    let steps = (cfg.horizon_s / h).round() as u64;
    let mut pos: Vec<Vec2> = bodies.iter().map(|b| b.position).collect();
    let mut moving: Vec<bool> = bodies
        .iter()
        .map(|b| b.speed > 0.0 && b.destination.is_some_and(|d| d != b.position))
        .collect();
    for _ in 0..steps {
        if !moving.iter().any(|&m| m) {
            break;
        }
        let before = pos.clone();
        for (i, b) in bodies.iter().enumerate() {
            if !moving[i] {
                continue;
            }
            let dest = b.destination.unwrap();
            let gap = dest - pos[i];
            let len = (gap.x * gap.x + gap.y * gap.y).sqrt();
            let stride = b.speed * h;
            if stride >= len {
                pos[i] = dest;
                moving[i] = false;
            } else {
                pos[i] = pos[i] + gap * (stride / len);
            }
        }
        let n = pos.len();
        let mut stop = vec![false; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if !(moving[i] || moving[j]) && before[i] == pos[i] && before[j] == pos[j] {
                    continue;
                }
                let d_pre = before[i].distance(before[j]);
                let d_post = pos[i].distance(pos[j]);
                if d_post < cfg.proximity_radius && d_post <= d_pre {
                    stop[i] = true;
                    stop[j] = true;
                }
            }
        }
        for i in 0..n {
            if stop[i] {
                moving[i] = false;
            }
        }
    }
    pos
}

/// Random point bodies in a 3 × 2.5 m arena, 2–4 per scene, with a mix of
/// stationary and moving agents at robot-to-human speeds.
pub fn random_bodies(rng: &mut ChaCha8Rng) -> Vec<Body> {
    let n = rng.random_range(2..=4);
    let point = |rng: &mut ChaCha8Rng| Vec2::new(rng.random_range(0.0..3.0), rng.random_range(0.0..2.5));
    let mut bodies: Vec<Body> = Vec::with_capacity(n);
    while bodies.len() < n {
        let position = point(rng);
        // start outside everyone's radius so the scene is not decided at t=0
        if bodies.iter().any(|b| b.position.distance(position) < 0.55) {
            continue;
        }
        let moving = bodies.is_empty() || rng.random_bool(0.75);
        bodies.push(Body {
            position,
            destination: moving.then(|| point(rng)),
            speed: if moving { rng.random_range(0.02..0.12) } else { 0.0 },
        });
    }
    bodies
}

pub fn oracle_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x0e7a_1a7e)
}

pub fn mirror_y(p: Vec2, axis: f64) -> Vec2 {
    Vec2::new(p.x, 2.0 * axis - p.y)
}

/// Reflects the whole scene across the arena's horizontal mid-line.
pub fn mirror_scenario(s: &Scenario) -> Scenario {
    let axis = s.arena.height / 2.0;
    let mut m = s.clone();
    for g in &mut m.goals {
        g.position = mirror_y(g.position, axis);
    }
    for a in &mut m.agents {
        a.start.position = mirror_y(a.start.position, axis);
        a.start.heading = Vec2::new(a.start.heading.x, -a.start.heading.y);
    }
    m
}

/// Draws random human and robot distances for one cycle and reports whether
/// the commanded decision survived an arbitrary perturbation of the robot's
/// distances.
pub fn law2_trial(rng: &mut ChaCha8Rng) -> bool {
    let params = Params::default();
    let n_alt = rng.random_range(2..=8);
    let n_h = rng.random_range(1..=2);
    let dist = |rng: &mut ChaCha8Rng| rng.random_range(0.0..3.5);
    let humans: Vec<Vec<(String, Option<f64>)>> = (0..n_alt)
        .map(|_| (0..n_h).map(|h| (format!("h{h}"), Some(dist(rng)))).collect())
        .collect();
    let decision = |robot: &[f64]| {
        let q_t: Vec<f64> = (0..n_alt)
            .map(|i| score_alternative(i, Some(robot[i]), &humans[i], &params, true).q_t)
            .collect();
        decide(&q_t, params.enforce_threshold).1
    };
    let a: Vec<f64> = (0..n_alt).map(|_| dist(rng)).collect();
    let b: Vec<f64> = (0..n_alt).map(|_| dist(rng)).collect();
    decision(&a) == decision(&b)
}
