//! Headless SVG rendering of a finished run: an overhead view of the arena
//! with trajectories and enforced targets, above a Δq-per-cycle panel.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::scenario::{Arena, GoalSite};
use crate::trace::{read_trace, TraceRow};

const PX_PER_M: f64 = 180.0;
const MARGIN: f64 = 40.0;
const DQ_PANEL_H: f64 = 180.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

#[derive(Debug, Clone, Deserialize)]
struct OverrideRow {
    target: Vec2,
}

/// The slice of a report row the plot needs.
#[derive(Debug, Clone, Deserialize)]
pub struct CyclePoint {
    pub cycle: u64,
    pub delta_q: f64,
    #[serde(default)]
    pub enforce_threshold: Option<f64>,
    #[serde(default)]
    override_state: Option<OverrideRow>,
    pub arena: Arena,
    pub sites: Vec<GoalSite>,
}

impl CyclePoint {
    pub fn override_target(&self) -> Option<Vec2> {
        self.override_state.as_ref().map(|o| o.target)
    }
}

pub fn read_report<R: BufRead>(input: R) -> Result<Vec<CyclePoint>> {
    let mut out = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<report>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let point = serde_json::from_str(&line)
            .map_err(|e| Error::MalformedTrace(format!("report line {}: {e}", n + 1)))?;
        out.push(point);
    }
    Ok(out)
}

/// Renders the SVG document. Fails if the trace covers fewer than two ticks.
pub fn render_svg(rows: &[TraceRow], cycles: &[CyclePoint]) -> Result<String> {
    let mut tracks: BTreeMap<&str, (usize, Vec<Vec2>)> = BTreeMap::new();
    let mut ticks = rows.iter().map(|r| r.tick).collect::<Vec<_>>();
    ticks.dedup();
    if ticks.len() < 2 {
        return Err(Error::MalformedTrace(
            "trace spans fewer than two ticks; nothing to plot".into(),
        ));
    }
    for r in rows {
        if !r.position.is_finite() {
            return Err(Error::MalformedTrace(format!(
                "non-finite position for {} at tick {}",
                r.agent_id, r.tick
            )));
        }
        let order = tracks.len();
        tracks
            .entry(&r.agent_id)
            .or_insert_with(|| (order, Vec::new()))
            .1
            .push(r.position);
    }

    let arena = match cycles.first() {
        Some(c) => c.arena,
        None => {
            let (w, h) = rows.iter().fold((0.0f64, 0.0f64), |(w, h), r| {
                (w.max(r.position.x), h.max(r.position.y))
            });
            Arena {
                width: w.max(1.0),
                height: h.max(1.0),
            }
        }
    };
    let sites: &[GoalSite] = cycles.first().map_or(&[], |c| &c.sites);

    let map_w = arena.width * PX_PER_M;
    let map_h = arena.height * PX_PER_M;
    let width = map_w + 2.0 * MARGIN;
    let dq_top = map_h + 2.0 * MARGIN;
    let height = dq_top + DQ_PANEL_H + MARGIN;
    let to_px = |p: Vec2| (MARGIN + p.x * PX_PER_M, MARGIN + (arena.height - p.y) * PX_PER_M);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // overhead view
    let _ = writeln!(
        s,
        r#"<g id="arena"><rect x="{MARGIN}" y="{MARGIN}" width="{map_w:.1}" height="{map_h:.1}" fill="none" stroke="black"/></g>"#
    );
    let _ = writeln!(s, r#"<g id="sites">"#);
    for site in sites {
        let (x, y) = to_px(site.position);
        let fill = if site.dangerous { "#d62728" } else { "#7f7f7f" };
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="{fill}" fill-opacity="0.25" stroke="{fill}"/><text x="{:.2}" y="{:.2}" fill="{fill}">{}</text>"#,
            0.1 * PX_PER_M,
            x + 0.12 * PX_PER_M,
            y + 4.0,
            site.id
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="trajectories" fill="none" stroke-width="2">"#);
    for (id, (order, pts)) in &tracks {
        let color = PALETTE[order % PALETTE.len()];
        let path = pts
            .iter()
            .map(|p| {
                let (x, y) = to_px(*p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ");
        let (sx, sy) = to_px(pts[0]);
        let (ex, ey) = to_px(*pts.last().expect("non-empty track"));
        let _ = writeln!(
            s,
            r#"<polyline data-agent="{id}" stroke="{color}" points="{path}"/><circle cx="{sx:.2}" cy="{sy:.2}" r="4" fill="white" stroke="{color}"/><circle cx="{ex:.2}" cy="{ey:.2}" r="4" fill="{color}"/><text x="{:.2}" y="{:.2}" fill="{color}" stroke="none">{id}</text>"#,
            ex + 6.0,
            ey - 6.0
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="enforced-targets" stroke="black" stroke-width="1.5">"#);
    let mut last: Option<Vec2> = None;
    for target in cycles.iter().filter_map(CyclePoint::override_target) {
        if last == Some(target) {
            continue;
        }
        last = Some(target);
        let (x, y) = to_px(target);
        let _ = writeln!(
            s,
            r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}"/>"#,
            x - 5.0,
            y - 5.0,
            x + 5.0,
            y + 5.0,
            x - 5.0,
            y + 5.0,
            x + 5.0,
            y - 5.0
        );
    }
    let _ = writeln!(s, "</g>");

    // Δq panel: y axis fixed to [0, max(1, max Δq)]
    let dq_max = cycles.iter().map(|c| c.delta_q).fold(1.0f64, f64::max);
    let n_cycles = cycles.last().map_or(1, |c| c.cycle.max(1)) as f64;
    let px = |cycle: f64, dq: f64| {
        (
            MARGIN + cycle / n_cycles * map_w,
            dq_top + DQ_PANEL_H - dq / dq_max * DQ_PANEL_H,
        )
    };
    let _ = writeln!(
        s,
        r#"<g id="delta-q"><rect x="{MARGIN}" y="{dq_top:.1}" width="{map_w:.1}" height="{DQ_PANEL_H}" fill="none" stroke="black"/><text x="{MARGIN}" y="{:.1}">Δq per governor cycle</text>"#,
        dq_top - 6.0
    );
    if let Some(thr) = cycles.iter().find_map(|c| c.enforce_threshold) {
        let (x0, y) = px(0.0, thr);
        let (x1, _) = px(n_cycles, thr);
        let _ = writeln!(
            s,
            r##"<line class="threshold" x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#d62728" stroke-dasharray="6 4"/>"##
        );
    }
    let dq_points = cycles
        .iter()
        .map(|c| {
            let (x, y) = px(c.cycle as f64, c.delta_q);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(
        s,
        r#"<polyline class="delta-q" fill="none" stroke="black" stroke-width="1.5" points="{dq_points}"/></g>"#
    );
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

/// Reads a trace CSV and report JSONL and writes the SVG to `out`. Nothing is
/// written unless rendering succeeds.
pub fn plot(trace_path: &Path, report_path: &Path, out: &Path) -> Result<()> {
    let trace = fs::File::open(trace_path).map_err(|e| Error::io(trace_path, e))?;
    let rows = read_trace(trace)?;
    let report = fs::File::open(report_path).map_err(|e| Error::io(report_path, e))?;
    let cycles = read_report(BufReader::new(report))?;
    let svg = render_svg(&rows, &cycles)?;
    fs::write(out, svg).map_err(|e| Error::io(out, e))
}
