//! Measurement traces: CSV ingestion, validation, and seeded synthesis.
//!
//! A [`Trace`] holds one simulated day of one metric, with timestamps
//! relative to the day start. The CSV contract is one row per measurement
//! (`timestamp_s,node_id,metric,value`, header required) with absolute
//! timestamps; day boundaries fall every 86 400 s. The synthesizer stands in
//! for real deployments: a diurnal temperature curve with autoregressive
//! noise and occasional ramp events, and a humidity field coupled to
//! temperature changes with a one-window lag.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Length of one simulated day in seconds.
pub const DAY_SECONDS: u64 = 86_400;

/// What a measurement quantifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    /// Air temperature in °C.
    Temperature,
    /// Relative humidity in %.
    RelativeHumidity,
}

impl Metric {
    /// CSV token for this metric.
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Temperature => "temperature",
            Metric::RelativeHumidity => "relative_humidity",
        }
    }

    /// Parse the CSV token.
    pub fn parse(s: &str) -> Option<Metric> {
        match s {
            "temperature" => Some(Metric::Temperature),
            "relative_humidity" => Some(Metric::RelativeHumidity),
            _ => None,
        }
    }

    /// Plausible value range (inclusive) for this metric.
    pub fn valid_range(self) -> (f64, f64) {
        match self {
            Metric::Temperature => (-50.0, 100.0),
            Metric::RelativeHumidity => (0.0, 100.0),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifier of a sensing node. Cheap to clone; node ids repeat across
/// millions of measurements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(Arc<str>);

impl NodeId {
    pub fn new(id: &str) -> Self {
        NodeId(Arc::from(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::new(s)
    }
}

/// One observation by one node.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    /// Seconds since the start of the measurement's day.
    pub timestamp_s: u64,
    pub node_id: NodeId,
    pub metric: Metric,
    pub value: f64,
}

impl Measurement {
    /// Check the per-measurement invariants (value finite and inside the
    /// metric's plausible range).
    pub fn check(&self) -> Result<(), String> {
        let (lo, hi) = self.metric.valid_range();
        if !self.value.is_finite() {
            return Err(format!("non-finite {} value", self.metric));
        }
        if self.value < lo || self.value > hi {
            return Err(format!(
                "{} value {} outside [{}, {}]",
                self.metric, self.value, lo, hi
            ));
        }
        Ok(())
    }
}

/// Time-ordered measurements of one metric over one simulated day.
///
/// Timestamps are relative to the day start and strictly increasing per
/// node; all measurements carry the declared metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    metric: Metric,
    day_index: u32,
    measurements: Vec<Measurement>,
}

impl Trace {
    /// Build a trace, sorting measurements by `(timestamp, node_id)` and
    /// enforcing the invariants.
    pub fn new(
        metric: Metric,
        day_index: u32,
        mut measurements: Vec<Measurement>,
    ) -> Result<Self, TraceError> {
        if measurements.is_empty() {
            return Err(TraceError::EmptyTrace { metric, day_index });
        }
        measurements.sort_by(|a, b| {
            (a.timestamp_s, &a.node_id).cmp(&(b.timestamp_s, &b.node_id))
        });
        let mut last_per_node: HashMap<NodeId, u64> = HashMap::new();
        for m in &measurements {
            if m.metric != metric {
                return Err(TraceError::MixedMetricDay {
                    day_index,
                    node_id: m.node_id.clone(),
                });
            }
            if m.timestamp_s >= DAY_SECONDS {
                return Err(TraceError::TimestampOutOfDay {
                    day_index,
                    timestamp_s: m.timestamp_s,
                });
            }
            m.check().map_err(|reason| TraceError::InvalidValue {
                day_index,
                reason,
            })?;
            if let Some(&prev) = last_per_node.get(&m.node_id) {
                if m.timestamp_s <= prev {
                    return Err(TraceError::NonMonotonicNode {
                        day_index,
                        node_id: m.node_id.clone(),
                        timestamp_s: m.timestamp_s,
                    });
                }
            }
            last_per_node.insert(m.node_id.clone(), m.timestamp_s);
        }
        Ok(Trace {
            metric,
            day_index,
            measurements,
        })
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn day_index(&self) -> u32 {
        self.day_index
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    pub fn last_timestamp(&self) -> u64 {
        self.measurements.last().map(|m| m.timestamp_s).unwrap_or(0)
    }

    /// Distinct node ids, sorted.
    pub fn node_ids(&self) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = self
            .measurements
            .iter()
            .map(|m| m.node_id.clone())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        ids.sort();
        ids
    }
}

/// The two traces of one simulated day.
#[derive(Debug, Clone, PartialEq)]
pub struct DayPair {
    pub temperature: Trace,
    pub humidity: Trace,
}

impl DayPair {
    pub fn new(temperature: Trace, humidity: Trace) -> Result<Self, TraceError> {
        if temperature.metric() != Metric::Temperature
            || humidity.metric() != Metric::RelativeHumidity
        {
            return Err(TraceError::MetricMismatch);
        }
        if temperature.day_index() != humidity.day_index() {
            return Err(TraceError::DayIndexMismatch {
                temperature: temperature.day_index(),
                humidity: humidity.day_index(),
            });
        }
        Ok(DayPair {
            temperature,
            humidity,
        })
    }

    pub fn day_index(&self) -> u32 {
        self.temperature.day_index()
    }
}

/// A sequence of day pairs, ordered by day index.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub days: Vec<DayPair>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }
}

/// Errors raised while building, loading, or synthesizing traces.
#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("day {day_index}: node {node_id} carries more than one metric")]
    MixedMetricDay { day_index: u32, node_id: NodeId },
    #[error("no complete day pairs (each day needs temperature and humidity rows)")]
    EmptyDataset,
    #[error("day {day_index}: empty {metric} trace")]
    EmptyTrace { metric: Metric, day_index: u32 },
    #[error("day {day_index}: timestamp {timestamp_s} outside the day")]
    TimestampOutOfDay { day_index: u32, timestamp_s: u64 },
    #[error("day {day_index}: {reason}")]
    InvalidValue { day_index: u32, reason: String },
    #[error("day {day_index}: node {node_id} repeats or reorders timestamp {timestamp_s}")]
    NonMonotonicNode {
        day_index: u32,
        node_id: NodeId,
        timestamp_s: u64,
    },
    #[error("day pair mixes metrics")]
    MetricMismatch,
    #[error("day pair spans days {temperature} and {humidity}")]
    DayIndexMismatch { temperature: u32, humidity: u32 },
    #[error("invalid synthesis parameters: {0}")]
    InvalidParams(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

const CSV_HEADER: &str = "timestamp_s,node_id,metric,value";

struct ParsedRow {
    timestamp_s: u64,
    node_id: NodeId,
    metric: Metric,
    value: f64,
}

fn parse_row(line: &str) -> Result<ParsedRow, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 fields, found {}", fields.len()));
    }
    let timestamp_s: u64 = fields[0]
        .trim()
        .parse()
        .map_err(|_| format!("bad timestamp {:?}", fields[0]))?;
    let node = fields[1].trim();
    if node.is_empty() {
        return Err("empty node id".to_string());
    }
    let metric = Metric::parse(fields[2].trim())
        .ok_or_else(|| format!("unknown metric {:?}", fields[2]))?;
    let value: f64 = fields[3]
        .trim()
        .parse()
        .map_err(|_| format!("bad value {:?}", fields[3]))?;
    let row = ParsedRow {
        timestamp_s,
        node_id: NodeId::new(node),
        metric,
        value,
    };
    Measurement {
        timestamp_s: row.timestamp_s % DAY_SECONDS,
        node_id: row.node_id.clone(),
        metric: row.metric,
        value: row.value,
    }
    .check()?;
    Ok(row)
}

/// Load a dataset from the trace CSV contract, grouping rows by day and
/// metric. Days missing either metric are dropped; if none remain the file
/// is rejected as [`TraceError::EmptyDataset`].
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset, TraceError> {
    let text = fs::read_to_string(path)?;
    load_dataset_str(&text)
}

/// Same as [`load_dataset`], from an in-memory string.
pub fn load_dataset_str(text: &str) -> Result<Dataset, TraceError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        _ => {
            return Err(TraceError::MalformedRow {
                line: 1,
                reason: format!("missing header {:?}", CSV_HEADER),
            })
        }
    }

    let mut by_day: BTreeMap<(u32, Metric), Vec<Measurement>> = BTreeMap::new();
    let mut node_metric: HashMap<(u32, NodeId), Metric> = HashMap::new();
    let mut seen: HashSet<(u32, Metric, NodeId, u64)> = HashSet::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_row(line).map_err(|reason| TraceError::MalformedRow {
            line: line_no,
            reason,
        })?;
        let day = (row.timestamp_s / DAY_SECONDS) as u32;
        let rel = row.timestamp_s % DAY_SECONDS;
        match node_metric.get(&(day, row.node_id.clone())) {
            Some(&m) if m != row.metric => {
                return Err(TraceError::MixedMetricDay {
                    day_index: day,
                    node_id: row.node_id,
                })
            }
            Some(_) => {}
            None => {
                node_metric.insert((day, row.node_id.clone()), row.metric);
            }
        }
        if !seen.insert((day, row.metric, row.node_id.clone(), rel)) {
            return Err(TraceError::MalformedRow {
                line: line_no,
                reason: format!(
                    "duplicate timestamp {} for node {}",
                    row.timestamp_s, row.node_id
                ),
            });
        }
        by_day.entry((day, row.metric)).or_default().push(Measurement {
            timestamp_s: rel,
            node_id: row.node_id,
            metric: row.metric,
            value: row.value,
        });
    }

    let mut traces: BTreeMap<u32, (Option<Trace>, Option<Trace>)> = BTreeMap::new();
    for ((day, metric), measurements) in by_day {
        let trace = Trace::new(metric, day, measurements)?;
        let entry = traces.entry(day).or_insert((None, None));
        match metric {
            Metric::Temperature => entry.0 = Some(trace),
            Metric::RelativeHumidity => entry.1 = Some(trace),
        }
    }

    let mut days = Vec::new();
    for (_, (t, h)) in traces {
        if let (Some(t), Some(h)) = (t, h) {
            days.push(DayPair::new(t, h)?);
        }
    }
    if days.is_empty() {
        return Err(TraceError::EmptyDataset);
    }
    Ok(Dataset { days })
}

/// Serialize a dataset back to the trace CSV contract. Timestamps are made
/// absolute again using each trace's day index.
pub fn dataset_to_csv(dataset: &Dataset) -> String {
    let mut out = String::with_capacity(1 << 20);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for day in &dataset.days {
        for trace in [&day.temperature, &day.humidity] {
            let base = trace.day_index() as u64 * DAY_SECONDS;
            for m in trace.measurements() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    base + m.timestamp_s,
                    m.node_id,
                    m.metric,
                    m.value
                ));
            }
        }
    }
    out
}

/// Write a dataset as trace CSV.
pub fn write_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<(), TraceError> {
    fs::write(path, dataset_to_csv(dataset))?;
    Ok(())
}

/// One problem found while validating a trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct RowViolation {
    pub line: usize,
    pub message: String,
}

/// Per-day row counts inside a trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct DayReport {
    pub day_index: u32,
    pub temperature_rows: usize,
    pub humidity_rows: usize,
}

impl DayReport {
    pub fn is_complete(&self) -> bool {
        self.temperature_rows > 0 && self.humidity_rows > 0
    }
}

/// Lenient validation report for a trace file: violations are content, not
/// errors.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFileReport {
    pub rows: usize,
    pub violations: Vec<RowViolation>,
    pub days: Vec<DayReport>,
}

impl TraceFileReport {
    /// Number of days carrying both metrics.
    pub fn complete_day_pairs(&self) -> usize {
        self.days.iter().filter(|d| d.is_complete()).count()
    }
}

/// Scan a trace file row by row, collecting invariant violations with line
/// numbers instead of failing on the first one.
pub fn validate_csv(path: impl AsRef<Path>) -> Result<TraceFileReport, TraceError> {
    let text = fs::read_to_string(path)?;
    Ok(validate_csv_str(&text))
}

/// Same as [`validate_csv`], from an in-memory string.
pub fn validate_csv_str(text: &str) -> TraceFileReport {
    let mut violations = Vec::new();
    let mut day_rows: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    let mut node_metric: HashMap<(u32, NodeId), Metric> = HashMap::new();
    let mut seen: HashSet<(u32, Metric, NodeId, u64)> = HashSet::new();
    let mut rows = 0usize;

    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        _ => violations.push(RowViolation {
            line: 1,
            message: format!("missing header {:?}", CSV_HEADER),
        }),
    }
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        rows += 1;
        let row = match parse_row(line) {
            Ok(row) => row,
            Err(reason) => {
                violations.push(RowViolation {
                    line: line_no,
                    message: reason,
                });
                continue;
            }
        };
        let day = (row.timestamp_s / DAY_SECONDS) as u32;
        let rel = row.timestamp_s % DAY_SECONDS;
        let counts = day_rows.entry(day).or_insert((0, 0));
        match row.metric {
            Metric::Temperature => counts.0 += 1,
            Metric::RelativeHumidity => counts.1 += 1,
        }
        match node_metric.get(&(day, row.node_id.clone())) {
            Some(&m) if m != row.metric => violations.push(RowViolation {
                line: line_no,
                message: format!("node {} carries more than one metric on day {}", row.node_id, day),
            }),
            Some(_) => {}
            None => {
                node_metric.insert((day, row.node_id.clone()), row.metric);
            }
        }
        if !seen.insert((day, row.metric, row.node_id.clone(), rel)) {
            violations.push(RowViolation {
                line: line_no,
                message: format!("duplicate timestamp {} for node {}", row.timestamp_s, row.node_id),
            });
        }
    }

    let days = day_rows
        .into_iter()
        .map(|(day_index, (temperature_rows, humidity_rows))| DayReport {
            day_index,
            temperature_rows,
            humidity_rows,
        })
        .collect();
    TraceFileReport {
        rows,
        violations,
        days,
    }
}

/// Parameters of the synthetic environment.
///
/// Temperature is a diurnal sine plus AR(1) noise plus occasional linear
/// ramp events with alternating direction. The humidity network mean steps
/// once per window by `coupling_gain · coupling · ΔT̄` of the *previous*
/// window (the one-window lag) plus white noise; each node observes the
/// mean plus a per-node offset and per-sample noise.
#[derive(Debug, Clone)]
pub struct SynthesisParams {
    /// Seconds between consecutive measurements of one node. Must divide
    /// the day length.
    pub cadence_s: u32,
    /// Number of humidity nodes (Network B).
    pub rh_node_count: usize,
    pub temp_base_c: f64,
    pub temp_diurnal_amplitude_c: f64,
    /// AR(1) coefficient of the temperature noise, in [0, 1).
    pub temp_ar_coeff: f64,
    /// Standard deviation of the AR(1) innovations (°C per sample).
    pub temp_noise_sd_c: f64,
    /// Expected number of ramp events per day.
    pub ramp_rate_per_day: f64,
    /// Ramp duration bounds, in 300 s windows.
    pub ramp_min_windows: u32,
    pub ramp_max_windows: u32,
    /// Ramp slope magnitude bounds (°C per 300 s window).
    pub ramp_slope_min_c: f64,
    pub ramp_slope_max_c: f64,
    pub rh_base_pct: f64,
    /// Strength of the temperature→humidity coupling, in [−1, 0].
    pub coupling: f64,
    /// Humidity response per °C of lagged temperature change (%/°C).
    pub coupling_gain_pct_per_c: f64,
    /// White noise on the humidity network mean (% per window).
    pub rh_noise_sd_pct: f64,
    /// Per-node constant offset spread (%).
    pub rh_node_offset_sd_pct: f64,
    /// Per-sample observation noise per node (%).
    pub rh_sample_noise_sd_pct: f64,
}

impl Default for SynthesisParams {
    fn default() -> Self {
        SynthesisParams {
            cadence_s: 30,
            rh_node_count: 26,
            temp_base_c: 18.0,
            temp_diurnal_amplitude_c: 4.0,
            temp_ar_coeff: 0.8,
            temp_noise_sd_c: 0.04,
            ramp_rate_per_day: 26.0,
            ramp_min_windows: 3,
            ramp_max_windows: 4,
            ramp_slope_min_c: 0.8,
            ramp_slope_max_c: 2.0,
            rh_base_pct: 55.0,
            coupling: -0.9,
            coupling_gain_pct_per_c: 2.5,
            rh_noise_sd_pct: 0.35,
            rh_node_offset_sd_pct: 0.5,
            rh_sample_noise_sd_pct: 0.8,
        }
    }
}

impl SynthesisParams {
    fn validate(&self, days: u32) -> Result<(), TraceError> {
        let err = |msg: &str| Err(TraceError::InvalidParams(msg.to_string()));
        if days < 2 {
            return err("at least 2 days required");
        }
        if self.cadence_s == 0 || DAY_SECONDS % self.cadence_s as u64 != 0 {
            return err("cadence_s must divide the day length");
        }
        if self.rh_node_count == 0 {
            return err("rh_node_count must be at least 1");
        }
        if !(0.0..1.0).contains(&self.temp_ar_coeff) {
            return err("temp_ar_coeff must lie in [0, 1)");
        }
        for (name, v) in [
            ("temp_noise_sd_c", self.temp_noise_sd_c),
            ("rh_noise_sd_pct", self.rh_noise_sd_pct),
            ("rh_node_offset_sd_pct", self.rh_node_offset_sd_pct),
            ("rh_sample_noise_sd_pct", self.rh_sample_noise_sd_pct),
            ("ramp_rate_per_day", self.ramp_rate_per_day),
        ] {
            if !(v >= 0.0) {
                return Err(TraceError::InvalidParams(format!(
                    "{name} must be non-negative"
                )));
            }
        }
        if !(-1.0..=0.0).contains(&self.coupling) {
            return err("coupling must lie in [-1, 0]");
        }
        if self.ramp_min_windows == 0 || self.ramp_min_windows > self.ramp_max_windows {
            return err("ramp window bounds must satisfy 1 <= min <= max");
        }
        if self.ramp_slope_min_c > self.ramp_slope_max_c {
            return err("ramp slope bounds must satisfy min <= max");
        }
        Ok(())
    }
}

const WINDOW_S: u64 = 300;
const LANE_TEMP: u64 = 1;
const LANE_HUM: u64 = 2;

fn day_rng(seed: u64, day: u32, lane: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(((day as u64) << 8) | lane);
    rng
}

/// Synthesize a correlated temperature/humidity dataset. Pure function of
/// `(days, seed, params)`: repeated calls are bit-identical.
pub fn synthesize_dataset(
    days: u32,
    seed: u64,
    params: &SynthesisParams,
) -> Result<Dataset, TraceError> {
    params.validate(days)?;
    let mut pairs = Vec::with_capacity(days as usize);
    for day in 0..days {
        pairs.push(synthesize_day(day, seed, params)?);
    }
    Ok(Dataset { days: pairs })
}

fn synthesize_day(day: u32, seed: u64, params: &SynthesisParams) -> Result<DayPair, TraceError> {
    let cadence = params.cadence_s as u64;
    let samples = (DAY_SECONDS / cadence) as usize;
    let samples_per_window = (WINDOW_S / cadence).max(1) as usize;
    let windows = (DAY_SECONDS / WINDOW_S) as usize;

    // Temperature: diurnal sine + alternating ramp events + AR(1) noise.
    let mut rng = day_rng(seed, day, LANE_TEMP);
    let innovations = Normal::new(0.0, params.temp_noise_sd_c)
        .map_err(|e| TraceError::InvalidParams(e.to_string()))?;
    let event_p = params.ramp_rate_per_day / windows as f64;
    let mut ramp_step = vec![0.0f64; samples];
    let mut remaining = 0u32;
    let mut step = 0.0f64;
    let mut direction = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    for w in 0..windows {
        if remaining == 0 && rng.gen::<f64>() < event_p {
            remaining = rng.gen_range(params.ramp_min_windows..=params.ramp_max_windows);
            let slope = rng.gen_range(params.ramp_slope_min_c..=params.ramp_slope_max_c);
            step = direction * slope / samples_per_window as f64;
            direction = -direction;
        }
        if remaining > 0 {
            for s in 0..samples_per_window {
                ramp_step[w * samples_per_window + s] = step;
            }
            remaining -= 1;
        }
    }

    let (t_lo, t_hi) = Metric::Temperature.valid_range();
    let mut temp = Vec::with_capacity(samples);
    let mut ar = 0.0f64;
    let mut level = 0.0f64;
    for i in 0..samples {
        let t = i as u64 * cadence;
        ar = params.temp_ar_coeff * ar + innovations.sample(&mut rng);
        level += ramp_step[i];
        let diurnal = params.temp_diurnal_amplitude_c
            * (std::f64::consts::TAU * (t as f64 / DAY_SECONDS as f64) - 1.9).sin();
        temp.push((params.temp_base_c + diurnal + level + ar).clamp(t_lo, t_hi));
    }
    let t_means: Vec<f64> = (0..windows)
        .map(|w| {
            let chunk = &temp[w * samples_per_window..(w + 1) * samples_per_window];
            chunk.iter().sum::<f64>() / chunk.len() as f64
        })
        .collect();

    // Humidity network mean: steps with the previous window's temperature
    // change, scaled by the (negative) coupling, plus white noise.
    let mut rng = day_rng(seed, day, LANE_HUM);
    let eta = Normal::new(0.0, params.rh_noise_sd_pct)
        .map_err(|e| TraceError::InvalidParams(e.to_string()))?;
    let mut mean = Vec::with_capacity(windows);
    mean.push(params.rh_base_pct);
    for w in 1..windows {
        let coupled = if w >= 2 {
            params.coupling_gain_pct_per_c * params.coupling * (t_means[w - 1] - t_means[w - 2])
        } else {
            0.0
        };
        let next = mean[w - 1] + coupled + eta.sample(&mut rng);
        mean.push(next);
    }

    let offsets = Normal::new(0.0, params.rh_node_offset_sd_pct)
        .map_err(|e| TraceError::InvalidParams(e.to_string()))?;
    let sample_noise = Normal::new(0.0, params.rh_sample_noise_sd_pct)
        .map_err(|e| TraceError::InvalidParams(e.to_string()))?;
    let (rh_lo, rh_hi) = Metric::RelativeHumidity.valid_range();
    let mut rh_measurements = Vec::with_capacity(params.rh_node_count * samples);
    for n in 0..params.rh_node_count {
        let node = NodeId::new(&format!("b{:02}", n + 1));
        let offset = offsets.sample(&mut rng);
        for i in 0..samples {
            let w = i / samples_per_window;
            let value = (mean[w] + offset + sample_noise.sample(&mut rng)).clamp(rh_lo, rh_hi);
            rh_measurements.push(Measurement {
                timestamp_s: i as u64 * cadence,
                node_id: node.clone(),
                metric: Metric::RelativeHumidity,
                value,
            });
        }
    }

    let t_node = NodeId::new("a1");
    let t_measurements = temp
        .iter()
        .enumerate()
        .map(|(i, &value)| Measurement {
            timestamp_s: i as u64 * cadence,
            node_id: t_node.clone(),
            metric: Metric::Temperature,
            value,
        })
        .collect();

    DayPair::new(
        Trace::new(Metric::Temperature, day, t_measurements)?,
        Trace::new(Metric::RelativeHumidity, day, rh_measurements)?,
    )
}
