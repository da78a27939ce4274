//! The three-factor change predictor and the OR combination of per-metric
//! predictions.
//!
//! A prediction is driven by three factors: the last two symptoms and the
//! last prediction. Whenever two factors agree on a direction, the
//! environment is predicted to follow it; when all three differ, no change
//! is predicted. The decision table used by the system lists nine rows with
//! `any` wildcards; rows are matched top to bottom and the first match
//! wins. Triples matched by no row resolve by the same two-agree principle
//! (the remaining agreeing pair is older symptom + last prediction) and
//! fall back to low when all three factors differ.
//!
//! The fully resolved 27-entry table is exported by [`resolved_table`] and
//! mirrored as a reviewable artifact in `docs/prediction-table.md`.

use thiserror::Error;

use crate::delta::DeltaLabel;
use crate::trace::Metric;

/// Memory of one per-metric predictor: the last two symptoms (older,
/// newer) and the last prediction. All three start low, so the cold-start
/// prediction is "no change".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredictorState {
    older: DeltaLabel,
    newer: DeltaLabel,
    last_prediction: DeltaLabel,
}

impl Default for PredictorState {
    fn default() -> Self {
        PredictorState {
            older: DeltaLabel::Low,
            newer: DeltaLabel::Low,
            last_prediction: DeltaLabel::Low,
        }
    }
}

impl PredictorState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Consume the newest symptom, emit the prediction for the next
    /// interval, and shift the memory.
    pub fn step(&mut self, symptom: DeltaLabel) -> DeltaLabel {
        let prediction = resolve(symptom, self.newer, self.last_prediction);
        self.older = self.newer;
        self.newer = symptom;
        self.last_prediction = prediction;
        prediction
    }

    pub fn last_prediction(&self) -> DeltaLabel {
        self.last_prediction
    }
}

/// A per-metric prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prediction {
    pub label: DeltaLabel,
    pub metric: Metric,
}

/// Direction-free combination of per-metric predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinedLabel {
    Low,
    High,
}

impl CombinedLabel {
    pub fn is_high(self) -> bool {
        matches!(self, CombinedLabel::High)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CombinedLabel::Low => "low",
            CombinedLabel::High => "high",
        }
    }
}

impl std::fmt::Display for CombinedLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum PredictorError {
    #[error("cannot combine zero predictions")]
    EmptyInput,
}

use DeltaLabel::{HighMinus as M, HighPlus as P, Low as L};

/// The literal decision table: (newer symptom, older symptom, last
/// prediction) → prediction, `None` meaning "any". First match wins.
const TABLE: [(Option<DeltaLabel>, Option<DeltaLabel>, Option<DeltaLabel>, DeltaLabel); 9] = [
    (Some(L), Some(L), None, L),
    (Some(P), Some(P), None, P),
    (Some(M), Some(M), None, M),
    (Some(P), None, Some(P), P),
    (Some(M), None, Some(M), M),
    (Some(L), None, Some(L), L),
    (Some(P), Some(M), Some(L), L),
    (Some(P), Some(L), Some(M), L),
    (Some(M), Some(L), Some(P), L),
];

fn matches_cell(cell: Option<DeltaLabel>, value: DeltaLabel) -> bool {
    cell.map_or(true, |c| c == value)
}

/// Resolve one factor triple to a prediction.
///
/// Rows of the table are tried in order; for the triples no row covers, the
/// only agreeing pair left is older symptom + last prediction (newer-symptom
/// agreements are always caught by a row), so their shared label wins; with
/// all three factors different the prediction is low.
pub fn resolve(newer: DeltaLabel, older: DeltaLabel, last_prediction: DeltaLabel) -> DeltaLabel {
    for &(n, o, p, out) in &TABLE {
        if matches_cell(n, newer) && matches_cell(o, older) && matches_cell(p, last_prediction) {
            return out;
        }
    }
    if older == last_prediction {
        older
    } else {
        DeltaLabel::Low
    }
}

/// OR-combine per-metric predictions: high if any member is high, in either
/// direction. Direction is dropped because plan selection is
/// direction-agnostic.
pub fn combine(predictions: &[Prediction]) -> Result<CombinedLabel, PredictorError> {
    if predictions.is_empty() {
        return Err(PredictorError::EmptyInput);
    }
    if predictions.iter().any(|p| p.label.is_high()) {
        Ok(CombinedLabel::High)
    } else {
        Ok(CombinedLabel::Low)
    }
}

/// The fully resolved table over all 27 factor combinations, in
/// enumeration order (newer, older, last prediction).
pub fn resolved_table() -> Vec<((DeltaLabel, DeltaLabel, DeltaLabel), DeltaLabel)> {
    let mut rows = Vec::with_capacity(27);
    for newer in DeltaLabel::ALL {
        for older in DeltaLabel::ALL {
            for last in DeltaLabel::ALL {
                rows.push(((newer, older, last), resolve(newer, older, last)));
            }
        }
    }
    rows
}

/// Render [`resolved_table`] as the markdown artifact checked in under
/// `docs/prediction-table.md`.
pub fn resolved_table_markdown() -> String {
    let mut out = String::new();
    out.push_str("# Resolved prediction table\n\n");
    out.push_str(
        "The decision table lists nine rows with `any` wildcards; rows are \
         matched top to bottom and the first match wins. Triples matched by \
         no row resolve by the two-agree principle (the remaining agreeing \
         pair is older symptom + last prediction); when all three factors \
         differ the prediction is `low`. The full expansion over all 27 \
         factor combinations:\n\n",
    );
    out.push_str("| newer symptom | older symptom | last prediction | prediction |\n");
    out.push_str("|---|---|---|---|\n");
    for ((newer, older, last), prediction) in resolved_table() {
        out.push_str(&format!(
            "| {newer} | {older} | {last} | {prediction} |\n"
        ));
    }
    out
}
