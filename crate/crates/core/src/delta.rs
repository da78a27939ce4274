//! Window averages, Δ values, percentile thresholds, and Δ labels.
//!
//! The system reasons about a metric through the absolute difference Δ
//! between the averages of two consecutive fixed-length window intervals.
//! A Δ above a percentile threshold θ is labeled high, with a `+`/`-`
//! direction depending on whether the average rose or fell; the same
//! machinery applied with a symptom threshold σ turns the most recent Δ
//! into a symptom of upcoming change.

use thiserror::Error;

use crate::trace::{Metric, Trace, DAY_SECONDS};

/// Default window length used throughout the scenario (5 minutes).
pub const DEFAULT_WINDOW_S: u32 = 300;

/// Direction of the change between two consecutive window averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Rising,
    Falling,
    Flat,
}

/// Label of a Δ (or of a symptom, or of a prediction — they share the same
/// alphabet): no significant change, or a high change upward/downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaLabel {
    Low,
    HighPlus,
    HighMinus,
}

impl DeltaLabel {
    pub fn is_high(self) -> bool {
        !matches!(self, DeltaLabel::Low)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DeltaLabel::Low => "low",
            DeltaLabel::HighPlus => "high+",
            DeltaLabel::HighMinus => "high-",
        }
    }

    /// All labels, in a fixed order (used by exhaustive enumerations).
    pub const ALL: [DeltaLabel; 3] = [DeltaLabel::Low, DeltaLabel::HighPlus, DeltaLabel::HighMinus];
}

impl std::fmt::Display for DeltaLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-interval averages of one metric plus the derived Δ sequence.
///
/// `deltas[i] = |averages[i+1] - averages[i]|`, and `signs[i]` records the
/// direction of that step.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSeries {
    pub metric: Metric,
    pub window_length_s: u32,
    pub averages: Vec<f64>,
    pub deltas: Vec<f64>,
    pub signs: Vec<Sign>,
}

impl WindowSeries {
    /// Derive the Δ sequence from a list of window averages.
    pub fn from_averages(metric: Metric, window_length_s: u32, averages: Vec<f64>) -> Self {
        let mut deltas = Vec::with_capacity(averages.len().saturating_sub(1));
        let mut signs = Vec::with_capacity(deltas.capacity());
        for pair in averages.windows(2) {
            let (step, sign) = delta_of(pair[0], pair[1]);
            deltas.push(step);
            signs.push(sign);
        }
        WindowSeries {
            metric,
            window_length_s,
            averages,
            deltas,
            signs,
        }
    }

    /// Label every Δ against a threshold. `labels()[i]` belongs to the step
    /// into window `i + 1`.
    pub fn labels(&self, theta: &Threshold) -> Vec<DeltaLabel> {
        self.deltas
            .iter()
            .zip(&self.signs)
            .map(|(&d, &s)| label_delta(d, s, theta))
            .collect()
    }
}

/// Δ and direction of the step from one window average to the next.
pub fn delta_of(previous: f64, current: f64) -> (f64, Sign) {
    let sign = if current > previous {
        Sign::Rising
    } else if current < previous {
        Sign::Falling
    } else {
        Sign::Flat
    };
    ((current - previous).abs(), sign)
}

/// A percentile-based cut over a Δ population. Stands for both θ (the label
/// threshold) and σ (the symptom threshold), which differ only in how the
/// percentile is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub percentile: u8,
    pub value: f64,
}

/// Errors of the windowing and threshold operations.
#[derive(Debug, Error)]
pub enum DeltaError {
    #[error("trace has no measurements")]
    EmptyTrace,
    #[error("window length must be positive and no longer than a day")]
    InvalidWindowLength,
    #[error("window {index} contains no measurements")]
    EmptyWindow { index: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("percentile {got} outside [0, 100]")]
    InvalidPercentile { got: u8 },
}

/// Average all measurements of a trace per window interval.
///
/// Windows start at the day origin. All nodes' measurements inside a window
/// are averaged together. Windows after the last populated one are trimmed
/// (a trailing window cut short by the day boundary is dropped with them);
/// an unpopulated window *before* the last populated one is an error.
pub fn window_averages(trace: &Trace, window_length_s: u32) -> Result<WindowSeries, DeltaError> {
    if trace.measurements().is_empty() {
        return Err(DeltaError::EmptyTrace);
    }
    if window_length_s == 0 || window_length_s as u64 > DAY_SECONDS {
        return Err(DeltaError::InvalidWindowLength);
    }
    let window = window_length_s as u64;
    let candidate = (DAY_SECONDS / window) as usize;
    let mut sums = vec![0.0f64; candidate];
    let mut counts = vec![0u64; candidate];
    for m in trace.measurements() {
        let w = (m.timestamp_s / window) as usize;
        if w < candidate {
            sums[w] += m.value;
            counts[w] += 1;
        }
        // measurements past the last full window boundary fall into the
        // trailing partial window and are dropped
    }
    let last_populated = match counts.iter().rposition(|&c| c > 0) {
        Some(idx) => idx,
        None => return Err(DeltaError::EmptyWindow { index: 0 }),
    };
    let mut averages = Vec::with_capacity(last_populated + 1);
    for w in 0..=last_populated {
        if counts[w] == 0 {
            return Err(DeltaError::EmptyWindow { index: w });
        }
        averages.push(sums[w] / counts[w] as f64);
    }
    Ok(WindowSeries::from_averages(
        trace.metric(),
        window_length_s,
        averages,
    ))
}

/// Nearest-rank percentile over a Δ population: rank `ceil(p/100 · n)`,
/// 1-based; percentile 0 yields the minimum. No interpolation.
pub fn percentile_threshold(deltas: &[f64], percentile: u8) -> Result<Threshold, DeltaError> {
    if deltas.is_empty() {
        return Err(DeltaError::EmptyInput);
    }
    if percentile > 100 {
        return Err(DeltaError::InvalidPercentile { got: percentile });
    }
    let mut sorted = deltas.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(Threshold {
        percentile,
        value: nearest_rank(&sorted, percentile),
    })
}

fn nearest_rank(sorted: &[f64], percentile: u8) -> f64 {
    let n = sorted.len();
    let rank = ((percentile as f64 / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Label one Δ against θ: high (directional) only on a strict exceedance,
/// low otherwise — a Δ exactly equal to the threshold stays low.
pub fn label_delta(delta: f64, sign: Sign, theta: &Threshold) -> DeltaLabel {
    debug_assert!(delta >= 0.0);
    if delta > theta.value {
        match sign {
            Sign::Rising => DeltaLabel::HighPlus,
            Sign::Falling => DeltaLabel::HighMinus,
            // a flat step has Δ = 0 and cannot exceed a non-negative σ/θ;
            // guard anyway
            Sign::Flat => DeltaLabel::Low,
        }
    } else {
        DeltaLabel::Low
    }
}

/// Turn the most recent Δ into a symptom of upcoming change. Identical
/// contract to [`label_delta`] with σ in place of θ.
pub fn detect_symptom(delta: f64, sign: Sign, sigma: &Threshold) -> DeltaLabel {
    label_delta(delta, sign, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{Measurement, NodeId, Trace};
    use proptest::prelude::*;

    fn single_node_trace(values: &[f64], cadence: u64) -> Trace {
        let node = NodeId::new("n1");
        let measurements = values
            .iter()
            .enumerate()
            .map(|(i, &value)| Measurement {
                timestamp_s: i as u64 * cadence,
                node_id: node.clone(),
                metric: Metric::Temperature,
                value,
            })
            .collect();
        Trace::new(Metric::Temperature, 0, measurements).unwrap()
    }

    #[test]
    fn averages_two_windows() {
        let trace = single_node_trace(&[10.0, 10.0, 12.0, 12.0], 150);
        let series = window_averages(&trace, 300).unwrap();
        assert_eq!(series.averages, vec![10.0, 12.0]);
        assert_eq!(series.deltas, vec![2.0]);
        assert_eq!(series.signs, vec![Sign::Rising]);
    }

    #[test]
    fn constant_trace_is_flat() {
        let trace = single_node_trace(&[5.0; 20], 60);
        let series = window_averages(&trace, 300).unwrap();
        assert!(series.deltas.iter().all(|&d| d == 0.0));
        assert!(series.signs.iter().all(|&s| s == Sign::Flat));
    }

    #[test]
    fn multi_node_day_matches_brute_force() {
        // 26 nodes at 30 s cadence for a full day, deterministic values
        let nodes: Vec<NodeId> = (0..26).map(|n| NodeId::new(&format!("b{n:02}"))).collect();
        let mut measurements = Vec::new();
        for (ni, node) in nodes.iter().enumerate() {
            for i in 0..(DAY_SECONDS / 30) {
                let value = 40.0
                    + (ni as f64) * 0.1
                    + ((i as f64) * 0.01).sin() * 5.0
                    + (i % 7) as f64 * 0.03;
                measurements.push(Measurement {
                    timestamp_s: i * 30,
                    node_id: node.clone(),
                    metric: Metric::RelativeHumidity,
                    value,
                });
            }
        }
        let trace = Trace::new(Metric::RelativeHumidity, 0, measurements).unwrap();
        let series = window_averages(&trace, 300).unwrap();
        assert_eq!(series.averages.len(), 288);
        assert_eq!(series.deltas.len(), 287);

        // independent brute-force pass over the raw measurements
        for w in 0..288usize {
            let lo = w as u64 * 300;
            let hi = lo + 300;
            let in_window: Vec<f64> = trace
                .measurements()
                .iter()
                .filter(|m| m.timestamp_s >= lo && m.timestamp_s < hi)
                .map(|m| m.value)
                .collect();
            let mean = in_window.iter().sum::<f64>() / in_window.len() as f64;
            assert!((series.averages[w] - mean).abs() < 1e-12, "window {w}");
        }
    }

    #[test]
    fn hole_in_coverage_is_empty_window() {
        let node = NodeId::new("n1");
        let measurements = [0u64, 60, 900]
            .iter()
            .map(|&ts| Measurement {
                timestamp_s: ts,
                node_id: node.clone(),
                metric: Metric::Temperature,
                value: 20.0,
            })
            .collect();
        let trace = Trace::new(Metric::Temperature, 0, measurements).unwrap();
        match window_averages(&trace, 300).unwrap_err() {
            DeltaError::EmptyWindow { index } => assert_eq!(index, 1),
            other => panic!("expected EmptyWindow, got {other:?}"),
        }
    }

    #[test]
    fn percentile_on_uniform_grid() {
        let mut deltas: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        deltas.reverse();
        let theta = percentile_threshold(&deltas, 75).unwrap();
        assert_eq!(theta.value, 75.0);
        assert_eq!(percentile_threshold(&deltas, 100).unwrap().value, 100.0);
        assert_eq!(percentile_threshold(&deltas, 0).unwrap().value, 1.0);
        assert!(matches!(
            percentile_threshold(&[], 50),
            Err(DeltaError::EmptyInput)
        ));
    }

    #[test]
    fn label_examples() {
        let theta = Threshold {
            percentile: 75,
            value: 1.5,
        };
        assert_eq!(label_delta(2.0, Sign::Rising, &theta), DeltaLabel::HighPlus);
        assert_eq!(label_delta(1.5, Sign::Rising, &theta), DeltaLabel::Low);
        assert_eq!(label_delta(2.0, Sign::Falling, &theta), DeltaLabel::HighMinus);
        let sigma = Threshold {
            percentile: 40,
            value: 2.5,
        };
        assert_eq!(detect_symptom(3.0, Sign::Rising, &sigma), DeltaLabel::HighPlus);
        assert_eq!(
            detect_symptom(0.0, Sign::Flat, &Threshold { percentile: 10, value: 0.5 }),
            DeltaLabel::Low
        );
    }

    #[test]
    fn interleaving_order_does_not_change_averages() {
        // same-timestamp measurements from different nodes, two insertion
        // orders
        let make = |order: &[usize]| {
            let mut measurements = Vec::new();
            for i in 0..10u64 {
                for &n in order {
                    measurements.push(Measurement {
                        timestamp_s: i * 30,
                        node_id: NodeId::new(&format!("n{n}")),
                        metric: Metric::Temperature,
                        value: n as f64 + i as f64 * 0.1,
                    });
                }
            }
            let trace = Trace::new(Metric::Temperature, 0, measurements).unwrap();
            window_averages(&trace, 300).unwrap()
        };
        assert_eq!(make(&[0, 1, 2]), make(&[2, 0, 1]));
    }

    proptest! {
        #[test]
        fn percentile_matches_sort_and_index_oracle(
            deltas in proptest::collection::vec(0.0f64..1e6, 1..1000),
            percentile in 0u8..=100,
        ) {
            let theta = percentile_threshold(&deltas, percentile).unwrap();
            let mut sorted = deltas.clone();
            sorted.sort_by(f64::total_cmp);
            let rank = ((percentile as f64 / 100.0) * sorted.len() as f64).ceil() as usize;
            let expected = sorted[rank.clamp(1, sorted.len()) - 1];
            prop_assert_eq!(theta.value, expected);
        }

        #[test]
        fn lowering_percentile_never_loses_high_labels(
            deltas in proptest::collection::vec(0.0f64..100.0, 2..200),
            lo in 0u8..=100,
            hi in 0u8..=100,
        ) {
            let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            let t_lo = percentile_threshold(&deltas, lo).unwrap();
            let t_hi = percentile_threshold(&deltas, hi).unwrap();
            let count = |t: &Threshold| {
                deltas
                    .iter()
                    .filter(|&&d| label_delta(d, Sign::Rising, t).is_high())
                    .count()
            };
            prop_assert!(count(&t_lo) >= count(&t_hi));
        }

        #[test]
        fn scaling_averages_scales_thresholds_and_keeps_labels(
            averages in proptest::collection::vec(0.0f64..100.0, 3..100),
            scale in 0.01f64..100.0,
            percentile in 0u8..=100,
        ) {
            let base = WindowSeries::from_averages(Metric::Temperature, 300, averages.clone());
            let scaled = WindowSeries::from_averages(
                Metric::Temperature,
                300,
                averages.iter().map(|&a| a * scale).collect(),
            );
            let t_base = percentile_threshold(&base.deltas, percentile).unwrap();
            let t_scaled = percentile_threshold(&scaled.deltas, percentile).unwrap();
            // nearest-rank picks an order statistic, so it scales exactly up
            // to float rounding of the delta products
            prop_assert!((t_scaled.value - t_base.value * scale).abs() <= 1e-9 * (1.0 + t_base.value * scale));
            for (i, (&d, &s)) in base.deltas.iter().zip(&base.signs).enumerate() {
                let l1 = label_delta(d, s, &t_base);
                let l2 = label_delta(scaled.deltas[i], scaled.signs[i], &t_scaled);
                // ties at the threshold can flip either way under rounding;
                // skip the knife-edge
                if (d - t_base.value).abs() > 1e-9 * (1.0 + d) {
                    prop_assert_eq!(l1, l2);
                }
            }
        }

        #[test]
        fn exactly_one_label_per_delta(delta in 0.0f64..10.0, theta in 0.0f64..10.0) {
            for sign in [Sign::Rising, Sign::Falling, Sign::Flat] {
                let label = label_delta(delta, sign, &Threshold { percentile: 50, value: theta });
                // exhaustive and exclusive: is_high xor low
                prop_assert!(label.is_high() ^ matches!(label, DeltaLabel::Low));
            }
        }

        #[test]
        fn symptom_equals_label_when_sigma_equals_theta(
            deltas in proptest::collection::vec(0.0f64..10.0, 1..50),
            cut in 0.0f64..10.0,
        ) {
            let t = Threshold { percentile: 50, value: cut };
            for &d in &deltas {
                prop_assert_eq!(
                    detect_symptom(d, Sign::Rising, &t),
                    label_delta(d, Sign::Rising, &t)
                );
            }
        }
    }
}
