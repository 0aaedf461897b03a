//! Run loop, file persistence and multi-seed sweeps.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::governor::{apply_command, governor_cycle, CycleReport, GovernorState};
use crate::kinematics::{History, WorldState};
use crate::parallel::{map_ordered, Execution};
use crate::presets::{is_multi_human, preset};
use crate::scenario::Scenario;
use crate::trace::{rows_for, summarize, write_trace, RunSummary, TraceRow};

/// Everything a run produced, held in memory.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub trace: Vec<TraceRow>,
    pub reports: Vec<CycleReport>,
    pub final_world: WorldState,
    pub final_governor: GovernorState,
}

/// Executes the tick/governor loop for the scenario's full duration.
///
/// Every `governor_period_ticks` engine ticks the governor runs once on the
/// latest snapshot, and its goal change takes effect before the next tick.
pub fn simulate(scenario: &Scenario, exec: Execution) -> Simulation {
    let robot = scenario.robot_index();
    let mut gstate = apply_command(GovernorState::new(scenario), scenario);
    let mut world = WorldState::new(scenario);
    if let Some(goal) = gstate.base_goal {
        world.set_goal(robot, scenario.goal(goal).position);
    }

    let mut history = History::new(scenario);
    let mut trace: Vec<TraceRow> = rows_for(&world, scenario).collect();
    history.push(world.clone());

    let period = scenario.params.governor_period_ticks as u64;
    let mut reports = Vec::with_capacity(scenario.cycle_count() as usize);
    for tick in 1..=scenario.total_ticks() {
        world.advance(scenario);
        trace.extend(rows_for(&world, scenario));
        history.push(world.clone());
        if tick % period == 0 {
            let out = governor_cycle(history.as_slice(), &gstate, scenario, exec);
            out.apply(&mut world, scenario);
            gstate = out.state;
            reports.push(out.report);
        }
    }
    Simulation {
        trace,
        reports,
        final_world: world,
        final_governor: gstate,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub scenario: String,
    pub seed: u64,
    pub trace_path: PathBuf,
    pub report_path: PathBuf,
    pub summary: RunSummary,
}

pub fn output_stem(scenario: &Scenario) -> String {
    format!("{}-seed{}", scenario.name, scenario.seed)
}

pub fn write_reports<W: Write>(mut out: W, reports: &[CycleReport]) -> Result<()> {
    for r in reports {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::io("<report>", e))?;
    }
    Ok(())
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<fs::File>) -> Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Runs the scenario and writes `<stem>.trace.csv` and `<stem>.report.jsonl`
/// into `out_dir`.
pub fn run(scenario: &Scenario, out_dir: &Path, exec: Execution) -> Result<RunResult> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let sim = simulate(scenario, exec);
    let stem = output_stem(scenario);
    let trace_path = out_dir.join(format!("{stem}.trace.csv"));
    let report_path = out_dir.join(format!("{stem}.report.jsonl"));
    write_file(&trace_path, |w| write_trace(w, &sim.trace))?;
    write_file(&report_path, |w| write_reports(w, &sim.reports))?;
    Ok(RunResult {
        scenario: scenario.name.clone(),
        seed: scenario.seed,
        trace_path,
        report_path,
        summary: summarize(scenario, &sim.trace)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedOutcome {
    pub seed: u64,
    /// The human the robot saved, if any.
    pub saved: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub preset: String,
    pub seeds: Vec<u64>,
    pub per_seed: Vec<SeedOutcome>,
    /// Saved count per human, in scenario order, followed by `none`.
    pub tally: Vec<(String, usize)>,
}

impl SweepResult {
    pub fn count(&self, id: &str) -> usize {
        self.tally
            .iter()
            .find(|(k, _)| k == id)
            .map_or(0, |(_, n)| *n)
    }
}

pub const NO_HUMAN_SAVED: &str = "none";

/// Runs a multi-human preset once per seed and tallies who was saved.
/// Seeds are independent and may run in parallel.
pub fn sweep(preset_name: &str, seeds: &[u64], exec: Execution) -> Result<SweepResult> {
    if !is_multi_human(preset_name) {
        preset(preset_name)?;
        return Err(Error::NotMultiHuman(preset_name.to_owned()));
    }
    let base = preset(preset_name)?;
    let per_seed = map_ordered(seeds, exec, |&seed| -> Result<SeedOutcome> {
        let scenario = Scenario { seed, ..base.clone() };
        let sim = simulate(&scenario, Execution::Sequential);
        let summary = summarize(&scenario, &sim.trace)?;
        Ok(SeedOutcome {
            seed,
            saved: summary.humans_saved.first().cloned(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut tally: Vec<(String, usize)> = base
        .human_indices()
        .map(|i| (base.agents[i].id.clone(), 0))
        .chain(std::iter::once((NO_HUMAN_SAVED.to_owned(), 0)))
        .collect();
    for o in &per_seed {
        let key = o.saved.as_deref().unwrap_or(NO_HUMAN_SAVED);
        if let Some(slot) = tally.iter_mut().find(|(k, _)| k == key) {
            slot.1 += 1;
        }
    }
    Ok(SweepResult {
        preset: preset_name.to_owned(),
        seeds: seeds.to_vec(),
        per_seed,
        tally,
    })
}
