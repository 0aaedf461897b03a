//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
//! criterion fails.

mod common;

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use ethical_layer::evaluation::{sigmoid_q, Decision};
use ethical_layer::kinematics::HaltCause;
use ethical_layer::prediction::{simulate_bodies, PredictConfig, PREDICTION_HORIZON_S};
use ethical_layer::presets::{preset, PRESET_NAMES};
use ethical_layer::runner::{run, simulate, sweep, Simulation};
use ethical_layer::trace::summarize;
use ethical_layer::{Execution, GoalId, Scenario};

const EXEC: Execution = Execution::Parallel;
const SCENARIO_BUDGET_S: f64 = 5.0;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Simulates a preset, failing if it exceeds the per-scenario time budget.
fn timed(name: &str) -> Result<(Scenario, Simulation), String> {
    let s = preset(name).map_err(|e| e.to_string())?;
    let t0 = Instant::now();
    let sim = simulate(&s, EXEC);
    let secs = t0.elapsed().as_secs_f64();
    ensure(secs < SCENARIO_BUDGET_S, format!("{name} took {secs:.2} s"))?;
    Ok((s, sim))
}

fn robot_final_to(s: &Scenario, sim: &Simulation, goal: GoalId) -> f64 {
    sim.final_world
        .position(s.robot_index())
        .distance(s.goal(goal).position)
}

fn exp1() -> Check {
    let (s, sim) = timed("exp1")?;
    let d = robot_final_to(&s, &sim, GoalId::A);
    ensure(d <= 0.5, format!("robot final {d:.3} m from A"))?;
    let b = s.goal(GoalId::B).position;
    let diverted = sim.reports.iter().find(|r| {
        matches!(r.decision, Decision::Enforce(_)) && r.override_state.as_ref().is_some_and(|o| o.target != b)
    });
    let c = diverted.ok_or("no override away from B")?;
    Ok(format!("robot ends {d:.3} m from A; first override away from B at cycle {}", c.cycle))
}

fn exp2() -> Check {
    let (s, sim) = timed("exp2")?;
    let worst = sim.reports.iter().map(|r| r.delta_q.abs()).fold(0.0, f64::max);
    ensure(worst <= 1e-12, format!("max Δq {worst:e}"))?;
    let d = robot_final_to(&s, &sim, GoalId::B);
    ensure(d <= 0.5, format!("robot final {d:.3} m from B"))?;
    Ok(format!("Δq = 0 over {} cycles; robot ends {d:.3} m from B", sim.reports.len()))
}

fn exp3() -> Check {
    let (s, sim) = timed("exp3")?;
    let sum = summarize(&s, &sim.trace).map_err(|e| e.to_string())?;
    let h = sum.agent("human").and_then(|a| a.min_distance_to_danger).ok_or("no human distance")?;
    let r = sum.agent("robot").and_then(|a| a.min_distance_to_danger).ok_or("no robot distance")?;
    ensure(h > 0.5, format!("human came within {h:.3} m of danger"))?;
    ensure(r < h, format!("robot min {r:.3} not below human min {h:.3}"))?;
    Ok(format!("human min {h:.3} m > 0.5; robot min {r:.3} m < human"))
}

fn exp4() -> Check {
    let (s, sim) = timed("exp4")?;
    let human = s.agent_index("human").map_err(|e| e.to_string())?;
    let robot = s.robot_index();
    let intercept = sim
        .reports
        .iter()
        .find(|r| r.override_state.as_ref().is_some_and(|o| o.provenance.is_path_point()))
        .ok_or("no interception override")?;
    let halt_tick = sim
        .trace
        .iter()
        .find(|r| r.agent_id == "human" && r.halted)
        .map(|r| r.tick)
        .ok_or("human never halted")?;
    ensure(
        sim.final_world.agents[human].halted == Some(HaltCause::Proximity(robot)),
        format!("human halt cause {:?}", sim.final_world.agents[human].halted),
    )?;
    let period = s.params.governor_period_ticks as u64;
    let halt_cycle = halt_tick.div_ceil(period);
    ensure(intercept.cycle <= halt_cycle, "human halted before any interception")?;
    let cleared = sim
        .reports
        .iter()
        .find(|r| r.cycle > halt_cycle.max(intercept.cycle) && r.override_state.is_none())
        .ok_or("override never cleared after the halt")?;
    let d = robot_final_to(&s, &sim, GoalId::B);
    ensure(d <= 0.5, format!("robot final {d:.3} m from B"))?;
    Ok(format!(
        "intercept override at cycle {}, human halted by robot at tick {halt_tick}, override cleared at cycle {}, robot ends {d:.3} m from B",
        intercept.cycle, cleared.cycle
    ))
}

fn exp4_alt() -> Check {
    let (s, sim) = timed("exp4-alt")?;
    ensure(
        sim.reports.iter().all(|r| r.override_state.is_none()),
        "an override was enforced",
    )?;
    let d = robot_final_to(&s, &sim, GoalId::B);
    ensure(d <= 0.5, format!("robot final {d:.3} m from B"))?;
    Ok(format!("no override; robot ends {d:.3} m from dangerous B"))
}

fn two_humans() -> Check {
    let seeds10: Vec<u64> = (0..10).collect();
    let seeds50: Vec<u64> = (0..50).collect();
    let mut parts = Vec::new();
    for (name, slow) in [("multi-human-fast-A", "human-B"), ("multi-human-fast-B", "human-A")] {
        let r = sweep(name, &seeds10, EXEC).map_err(|e| e.to_string())?;
        ensure(r.count(slow) == 10, format!("{name}: {:?}", r.tally))?;
        parts.push(format!("{name} saved {slow} 10/10"));
    }
    let r = sweep("multi-human-equal", &seeds50, EXEC).map_err(|e| e.to_string())?;
    let (a, b) = (r.count("human-A"), r.count("human-B"));
    ensure(a > 0 && b > 0, format!("multi-human-equal: {:?}", r.tally))?;
    parts.push(format!("multi-human-equal A {a} / B {b} / none {} of 50", r.count("none")));
    Ok(parts.join("; "))
}

fn eq1() -> Check {
    let q = |d| sigmoid_q(d, 10.0, 0.25);
    ensure(q(0.25) == 0.5, format!("q(0.25) = {}", q(0.25)))?;
    // beyond ~3.5 m q rounds to exactly 1.0 in f64
    let grid: Vec<f64> = (0..=3000).map(|i| i as f64 * 1e-3).collect();
    ensure(
        grid.windows(2).all(|w| q(w[1]) > q(w[0])),
        "not strictly increasing on [0, 3] at 1 mm",
    )?;
    // 1/(1+e^{2.5}) and 1/(1+e^{-7.5}) at 50 digits
    let (q0, q1) = (0.075_858_180_021_243_55, 0.999_447_221_363_076_3);
    ensure((q(0.0) - q0).abs() < 1e-9, format!("q(0) = {}", q(0.0)))?;
    ensure((q(1.0) - q1).abs() < 1e-9, format!("q(1) = {}", q(1.0)))?;
    Ok(format!("q(0.25)=0.5; increasing; q(0)={:.12}; q(1)={:.12}", q(0.0), q(1.0)))
}

fn oracle() -> Check {
    let cfg = PredictConfig {
        proximity_radius: 0.5,
        dt: 1.0 / 30.0,
        horizon_s: PREDICTION_HORIZON_S,
    };
    let mut rng = oracle_rng();
    let cases = 200;
    let mut worst = 0.0f64;
    for case in 0..cases {
        let bodies = random_bodies(&mut rng);
        let fast = simulate_bodies(&bodies, &cfg);
        let slow = brute_force(&bodies, &cfg, ORACLE_REFINE);
        for ((p, _), q) in fast.iter().zip(&slow) {
            let err = p.distance(*q);
            worst = worst.max(err);
            ensure(err <= ORACLE_TOL_M, format!("case {case}: error {err:.4} m"))?;
        }
    }
    Ok(format!("{cases} scenes, worst final-position error {worst:.2e} m"))
}

fn determinism() -> Check {
    for name in PRESET_NAMES {
        let s = preset(name).map_err(|e| e.to_string())?;
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let a = run(&s, d1.path(), EXEC).map_err(|e| e.to_string())?;
        let b = run(&s, d2.path(), EXEC).map_err(|e| e.to_string())?;
        for (x, y) in [(&a.trace_path, &b.trace_path), (&a.report_path, &b.report_path)] {
            let same = fs::read(x).map_err(|e| e.to_string())? == fs::read(y).map_err(|e| e.to_string())?;
            ensure(same, format!("{name}: {} differs", x.display()))?;
        }
    }
    Ok(format!("{} presets, trace and report byte-identical", PRESET_NAMES.len()))
}

fn law2() -> Check {
    let mut rng = oracle_rng();
    let trials = 1000;
    let flips = (0..trials).filter(|_| !law2_trial(&mut rng)).count();
    ensure(flips == 0, format!("{flips} of {trials} decisions changed"))?;
    Ok(format!("{trials} perturbations, decision unchanged"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Experiment 1 (self-preservation)", exp1),
        ("Experiment 2 (obedience)", exp2),
        ("Experiment 3 (human safety)", exp3),
        ("Experiment 4 (safety > obedience, then obedience)", exp4),
        ("Experiment 4-alt (obedience > self-preservation)", exp4_alt),
        ("Two-human pathology", two_humans),
        ("Sigmoid unit checks", eq1),
        ("Predictor oracle", oracle),
        ("Determinism", determinism),
        ("Command dominance", law2),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t0 = Instant::now();
        let outcome = check();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.2} s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} [{secs:.2} s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
