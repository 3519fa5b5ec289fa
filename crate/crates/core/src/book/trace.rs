use crate::rational::{serde_ratio, Rational};
use serde::{Deserialize, Serialize};

use super::params::BookParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    DegreeRegularise,
    BigBlue,
    Red,
    DensityBoost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HaltReason {
    /// `|X| ≤ x_min`.
    XSmall,
    /// `p ≤ p_floor`.
    PFloor,
    /// The next move would leave `X` or `Y` empty.
    XExhausted,
    /// `|A| = k`.
    RedClique,
    /// `|B| ≥ ℓ`.
    BlueClique,
    /// No vertex of `X` has blue degree at most `μ|X|`.
    NoCentralVertex,
}

impl HaltReason {
    pub const ALL: [HaltReason; 6] = [
        HaltReason::XSmall,
        HaltReason::PFloor,
        HaltReason::XExhausted,
        HaltReason::RedClique,
        HaltReason::BlueClique,
        HaltReason::NoCentralVertex,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            HaltReason::XSmall => "|X| <= x_min",
            HaltReason::PFloor => "p <= p_floor",
            HaltReason::XExhausted => "X exhausted",
            HaltReason::RedClique => "|A| = k",
            HaltReason::BlueClique => "|B| >= ell",
            HaltReason::NoCentralVertex => "no central vertex",
        }
    }
}

/// One update of `X`. `p` and `h` describe the state after the step; `alpha`
/// is `α_{h(p)}` for the density before it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub index: usize,
    pub kind: StepKind,
    pub x_size: usize,
    pub y_size: usize,
    #[serde(with = "serde_ratio")]
    pub p: Rational,
    pub h: u64,
    #[serde(with = "serde_ratio")]
    pub alpha: Rational,
    #[serde(with = "serde_ratio::option")]
    pub beta: Option<Rational>,
    pub central_vertex: Option<usize>,
    pub spine: Option<Vec<usize>>,
    pub pages: Option<usize>,
    pub removed_count: Option<usize>,
    /// Density-boost steps only: membership of the moderate set `S*`.
    pub moderate: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub t: usize,
    pub s: usize,
    pub big_blue_count: usize,
    #[serde(with = "serde_ratio")]
    pub beta_harmonic: Rational,
    pub halting_reason: HaltReason,
    #[serde(rename = "final_A")]
    pub final_a: Vec<usize>,
    #[serde(rename = "final_Y_size")]
    pub final_y_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub params: BookParams,
    pub n: usize,
    #[serde(with = "serde_ratio")]
    pub p0: Rational,
    pub x0_size: usize,
    pub y0_size: usize,
    pub x0: Vec<usize>,
    pub y0: Vec<usize>,
    pub steps: Vec<StepRecord>,
    pub summary: Summary,
}

impl Trace {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trace serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }
}
