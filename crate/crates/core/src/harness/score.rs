//! Raw accuracy to the 120–180 scale and the weighted overall score.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Section weights AR : LR : RC.
pub const SECTION_WEIGHTS: [f64; 3] = [1.0, 2.0, 1.0];

pub const SCALE_MIN: f64 = 120.0;
pub const SCALE_MAX: f64 = 180.0;

#[derive(Debug, Error, PartialEq)]
pub enum ScaleError {
    #[error("score scale has no anchors")]
    Empty,
    #[error("score scale is not monotone at raw {0}")]
    NotMonotone(f64),
    #[error("scaled score {0} outside [120, 180]")]
    OutOfRange(f64),
    #[error("invalid score scale: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    /// Percent correct.
    pub raw: f64,
    pub scaled: f64,
}

/// Monotone table from percent correct to scaled score, read with linear
/// interpolation. Raw 0 maps to 120 and raw 100 to 180 unless the table
/// says otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreScale {
    anchors: Vec<Anchor>,
}

/// The bundled table.
pub const DEFAULT_SCALE: &str = include_str!("../../data/score_scale.json");

impl ScoreScale {
    pub fn new(mut anchors: Vec<Anchor>) -> Result<Self, ScaleError> {
        if anchors.is_empty() {
            return Err(ScaleError::Empty);
        }
        anchors.sort_by(|a, b| a.raw.total_cmp(&b.raw));
        for w in anchors.windows(2) {
            if w[1].scaled < w[0].scaled || w[1].raw == w[0].raw && w[1].scaled != w[0].scaled {
                return Err(ScaleError::NotMonotone(w[1].raw));
            }
        }
        if let Some(a) = anchors.iter().find(|a| !(SCALE_MIN..=SCALE_MAX).contains(&a.scaled)) {
            return Err(ScaleError::OutOfRange(a.scaled));
        }
        if anchors[0].raw > 0.0 {
            anchors.insert(
                0,
                Anchor {
                    raw: 0.0,
                    scaled: SCALE_MIN,
                },
            );
        }
        if anchors[anchors.len() - 1].raw < 100.0 {
            anchors.push(Anchor {
                raw: 100.0,
                scaled: SCALE_MAX,
            });
        }
        Ok(Self { anchors })
    }

    pub fn from_json(text: &str) -> Result<Self, ScaleError> {
        #[derive(Deserialize)]
        struct File {
            anchors: Vec<Anchor>,
        }
        let file: File = serde_json::from_str(text).map_err(|e| ScaleError::Syntax(e.to_string()))?;
        Self::new(file.anchors)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScaleError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScaleError::Syntax(e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn bundled() -> Self {
        Self::from_json(DEFAULT_SCALE).expect("bundled scale is valid")
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    /// Interpolated, unrounded scaled score.
    pub fn interpolate(&self, percent: f64) -> f64 {
        let p = percent.clamp(0.0, 100.0);
        let i = self.anchors.partition_point(|a| a.raw <= p);
        if i == 0 {
            return self.anchors[0].scaled;
        }
        if i == self.anchors.len() {
            return self.anchors[i - 1].scaled;
        }
        let (a, b) = (self.anchors[i - 1], self.anchors[i]);
        a.scaled + (b.scaled - a.scaled) * (p - a.raw) / (b.raw - a.raw)
    }
}

/// Scaled score rounded to the nearest integer.
pub fn scaled_score(percent: f64, scale: &ScoreScale) -> i64 {
    scale.interpolate(percent).round() as i64
}

/// Weighted mean of the section percentages, weights 1:2:1.
pub fn overall_score(ar: f64, lr: f64, rc: f64) -> f64 {
    let [w_ar, w_lr, w_rc] = SECTION_WEIGHTS;
    (w_ar * ar + w_lr * lr + w_rc * rc) / (w_ar + w_lr + w_rc)
}
