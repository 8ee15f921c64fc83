//! Seeded experiment sweeps with CSV and JSON reports.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::generate::{generate_scenario, GenParams};
use crate::allocation::AlgoParams;
use crate::auction::{auction_assign, AuctionParams, UtilityMatrix};
use crate::allocation::PlanContext;
use crate::iso::EmbeddingSearch;
use crate::sim::{run_planning_with, run_scenario_with, PlanResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    PlanningTime,
    Distance,
    Messages,
    CompletionProfile,
    Table1,
    AuctionCompare,
    McsTime,
}

impl SweepKind {
    pub const ALL: [SweepKind; 7] = [
        SweepKind::PlanningTime,
        SweepKind::Distance,
        SweepKind::Messages,
        SweepKind::CompletionProfile,
        SweepKind::Table1,
        SweepKind::AuctionCompare,
        SweepKind::McsTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepKind::PlanningTime => "planning_time",
            SweepKind::Distance => "distance",
            SweepKind::Messages => "messages",
            SweepKind::CompletionProfile => "completion_profile",
            SweepKind::Table1 => "table1",
            SweepKind::AuctionCompare => "auction_compare",
            SweepKind::McsTime => "mcs_time",
        }
    }

    /// Name of the independent variable.
    pub fn x_label(self) -> &'static str {
        match self {
            SweepKind::CompletionProfile => "elapsed_pct",
            SweepKind::Table1 => "config_size",
            SweepKind::McsTime => "config_size",
            _ => "n_modules",
        }
    }

    pub fn default_points(self) -> Vec<usize> {
        match self {
            SweepKind::CompletionProfile => (1..=10).map(|i| i * 10).collect(),
            SweepKind::Table1 => vec![10, 20, 25, 50],
            SweepKind::AuctionCompare => vec![25, 50, 100],
            SweepKind::McsTime => (2..=10).collect(),
            _ => (1..=10).map(|i| i * 10).collect(),
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.replace('-', "_");
        SweepKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| format!("unknown sweep kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub runs: usize,
    /// Master seed; each run derives its own seed from it.
    pub seed: u64,
    /// Overrides the kind's default sweep points.
    pub points: Option<Vec<usize>>,
    /// Target size for kinds that sweep something other than size.
    pub n_spots: Option<usize>,
    pub algo: AlgoParams,
    /// `table1` targets glued from configuration-shaped pieces.
    pub glued_targets: bool,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            runs: 50,
            seed: 0,
            points: None,
            n_spots: None,
            algo: AlgoParams::default(),
            glued_targets: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    pub metric: String,
    pub unit: String,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    /// Successful runs behind this row.
    pub runs: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub kind: SweepKind,
    pub x_label: String,
    pub runs: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    /// One entry per failed run: `x`, run index and the error.
    pub failures: Vec<String>,
}

pub const CSV_HEADER: &str = "kind,x_label,x,metric,unit,mean,std,median,runs,failed";

impl SweepReport {
    pub fn row(&self, x: f64, metric: &str) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.x == x && r.metric == metric)
    }

    /// Rows of one metric in sweep order.
    pub fn series(&self, metric: &str) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.metric == metric).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                self.kind, self.x_label, r.x, r.metric, r.unit, r.mean, r.std, r.median, r.runs, r.failed
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Mean, sample standard deviation and median.
pub fn summarize(samples: &[f64]) -> (f64, f64, f64) {
    if samples.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let std = if samples.len() > 1 {
        (samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 0 {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    };
    (mean, std, median)
}

pub fn run_seed(master: u64, point: usize, run: usize) -> u64 {
    master
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((point as u64) << 20)
        .wrapping_add(run as u64)
}

/// Collects named samples for one sweep point.
struct Point {
    x: f64,
    metrics: Vec<(&'static str, &'static str, Vec<f64>)>,
    failed: usize,
}

impl Point {
    fn new(x: f64, metrics: &[(&'static str, &'static str)]) -> Self {
        Self {
            x,
            metrics: metrics.iter().map(|&(m, u)| (m, u, Vec::new())).collect(),
            failed: 0,
        }
    }

    fn push(&mut self, values: &[f64]) {
        for (slot, &v) in self.metrics.iter_mut().zip(values) {
            slot.2.push(v);
        }
    }

    fn rows(self) -> impl Iterator<Item = SweepRow> {
        let (x, failed) = (self.x, self.failed);
        self.metrics.into_iter().map(move |(metric, unit, samples)| {
            let (mean, std, median) = summarize(&samples);
            SweepRow {
                x,
                metric: metric.into(),
                unit: unit.into(),
                mean,
                std,
                median,
                runs: samples.len(),
                failed,
            }
        })
    }
}

fn ms(seconds: f64) -> f64 {
    seconds * 1e3
}

fn metrics_for(kind: SweepKind) -> &'static [(&'static str, &'static str)] {
    match kind {
        SweepKind::PlanningTime => &[("planning_time", "ms")],
        SweepKind::Distance => &[("total_distance", "units")],
        SweepKind::Messages => &[("broadcasts", "messages"), ("point_to_point", "messages")],
        SweepKind::CompletionProfile => &[("events_completed", "pct")],
        SweepKind::Table1 => &[("disconnections", "modules"), ("planning_time", "ms")],
        SweepKind::AuctionCompare => &[
            ("spot_broadcasts", "messages"),
            ("auction_broadcasts", "messages"),
            ("spot_distance", "units"),
            ("auction_distance", "units"),
            ("spot_utility", "utility"),
            ("auction_utility", "utility"),
            ("spot_planning_time", "ms"),
            ("auction_time", "ms"),
        ],
        SweepKind::McsTime => &[("embedding_time", "ms"), ("embedding_size", "modules")],
    }
}

/// Runs `params.runs` seeded runs per sweep point.
pub fn run_sweep(kind: SweepKind, params: &SweepParams) -> SweepReport {
    let points = params.points.clone().unwrap_or_else(|| kind.default_points());
    let mut rows = Vec::new();
    let mut failures = Vec::new();

    if kind == SweepKind::CompletionProfile {
        let mut point_samples: Vec<Point> = points
            .iter()
            .map(|&p| Point::new(p as f64, metrics_for(kind)))
            .collect();
        let n = params.n_spots.unwrap_or(100);
        let mut failed = 0;
        for run in 0..params.runs {
            let mut g = GenParams::new(n, run_seed(params.seed, 0, run));
            g.algo_params = params.algo;
            match planned(&g) {
                Ok(result) => {
                    for p in point_samples.iter_mut() {
                        p.push(&[completed_pct(&result, p.x)]);
                    }
                }
                Err(e) => {
                    failed += 1;
                    failures.push(format!("run {run}: {e}"));
                }
            }
        }
        for mut p in point_samples {
            p.failed = failed;
            rows.extend(p.rows());
        }
    } else {
        for (pi, &x) in points.iter().enumerate() {
            let mut point = Point::new(x as f64, metrics_for(kind));
            for run in 0..params.runs {
                let seed = run_seed(params.seed, pi, run);
                match sample(kind, x, seed, params) {
                    Ok(values) => point.push(&values),
                    Err(e) => {
                        point.failed += 1;
                        failures.push(format!("x={x} run {run}: {e}"));
                    }
                }
            }
            rows.extend(point.rows());
        }
    }

    for f in &failures {
        log::warn!("{kind}: {f}");
    }
    SweepReport {
        kind,
        x_label: kind.x_label().into(),
        runs: params.runs,
        seed: params.seed,
        rows,
        failures,
    }
}

type RunError = Box<dyn std::error::Error>;

fn planned(g: &GenParams) -> Result<PlanResult, RunError> {
    let scenario = generate_scenario(g)?;
    Ok(run_planning_with(&scenario, g.algo_params)?)
}

fn complete_run(g: &GenParams) -> Result<PlanResult, RunError> {
    let scenario = generate_scenario(g)?;
    let result = run_scenario_with(&scenario, g.algo_params)?;
    if !result.complete {
        return Err(format!(
            "allocation incomplete: {} of {} spots",
            result.allocation.len(),
            scenario.target.len()
        )
        .into());
    }
    Ok(result)
}

/// Share of planning events broadcast by `pct` percent of planning time.
fn completed_pct(result: &PlanResult, pct: f64) -> f64 {
    let total_time = result.metrics.planning_wall_time;
    let total_events = result.progress.last().map_or(0, |p| p.events);
    if total_events == 0 {
        return 100.0;
    }
    let cutoff = total_time * pct / 100.0;
    let done = result
        .progress
        .iter()
        .take_while(|p| p.elapsed <= cutoff)
        .last()
        .map_or(0, |p| p.events);
    let done = if pct >= 100.0 { total_events } else { done };
    100.0 * done as f64 / total_events as f64
}

fn sample(kind: SweepKind, x: usize, seed: u64, params: &SweepParams) -> Result<Vec<f64>, RunError> {
    let mut g = GenParams::new(x, seed);
    g.algo_params = params.algo;
    match kind {
        SweepKind::PlanningTime => {
            let r = complete_run(&g)?;
            Ok(vec![ms(r.metrics.planning_wall_time)])
        }
        SweepKind::Distance => {
            let r = complete_run(&g)?;
            Ok(vec![r.metrics.total_distance])
        }
        SweepKind::Messages => {
            let r = complete_run(&g)?;
            Ok(vec![r.metrics.broadcast_count as f64, r.metrics.point_to_point_count as f64])
        }
        SweepKind::Table1 => {
            g.n_spots = params.n_spots.unwrap_or(100);
            g.equal_config_size = Some(x);
            g.target_from_configs = params.glued_targets;
            let r = complete_run(&g)?;
            Ok(vec![r.metrics.disconnection_count as f64, ms(r.metrics.planning_wall_time)])
        }
        SweepKind::AuctionCompare => auction_compare(g.singletons_only()),
        SweepKind::McsTime => {
            g.n_spots = params.n_spots.unwrap_or(100);
            g.n_modules = Some(x);
            g.equal_config_size = Some(x);
            let scenario = generate_scenario(&g)?;
            let ctx = PlanContext::new(&scenario)?;
            let config = &scenario.configurations[0];
            let start = Instant::now();
            let search = EmbeddingSearch::new(config, &scenario.target, &ctx.values);
            let mut found = search.full(params.algo.iso());
            if found.is_empty() {
                found = search.mcs(params.algo.iso())?;
            }
            let elapsed = start.elapsed().as_secs_f64();
            Ok(vec![ms(elapsed), found.first().map_or(0, |e| e.size()) as f64])
        }
        SweepKind::CompletionProfile => unreachable!("handled per run"),
    }
}

fn auction_compare(g: GenParams) -> Result<Vec<f64>, RunError> {
    let scenario = generate_scenario(&g)?;
    let planned = run_planning_with(&scenario, g.algo_params)?;
    let spot_broadcasts = planned.metrics.broadcast_count as f64;
    let spot_time = ms(planned.metrics.planning_wall_time);
    let spot = run_scenario_with(&scenario, g.algo_params)?;

    let start = Instant::now();
    let ctx = PlanContext::new(&scenario)?;
    let u = UtilityMatrix::for_scenario(&ctx);
    let auction = auction_assign(&u, AuctionParams::for_matrix(&u))?;
    let auction_time = ms(start.elapsed().as_secs_f64());
    let auction_distance: f64 = auction
        .assignment
        .iter()
        .map(|(&s, &m)| ctx.module(m).pose.distance(&ctx.spot(s).pose))
        .sum();

    Ok(vec![
        spot_broadcasts,
        auction.broadcast_count as f64,
        spot.metrics.total_distance,
        auction_distance,
        spot.metrics.total_utility,
        auction.total_utility,
        spot_time,
        auction_time,
    ])
}
