use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a matched partial pair is weighted when accumulating scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WeightingMode {
    /// Each pair contributes `M(i)·M(j)·δf`, exactly as the published sums.
    Literal,
    /// Each pair contributes `M(i)·M(j)` scaled by its distance to the band edge,
    /// so perfect alignment weighs 1 and the band edge weighs 0.
    #[default]
    Proximity,
}

impl std::str::FromStr for WeightingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "literal" => Ok(Self::Literal),
            "proximity" => Ok(Self::Proximity),
            other => Err(Error::Usage(format!(
                "unknown weighting mode `{other}` (expected literal|proximity)"
            ))),
        }
    }
}

/// Parameters of the partial-matching model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub max_partials: usize,
    pub decay_rate: f64,
    /// Upper edge (exclusive) of the consonant gap band, Hz.
    pub f_c: f64,
    /// Upper edge (exclusive) of the dissonant gap band, Hz.
    pub f_d: f64,
    pub hearing_min: f64,
    pub hearing_max: f64,
    pub consonance_threshold: f64,
    pub dissonance_threshold: f64,
    pub weighting_mode: WeightingMode,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            max_partials: 50,
            decay_rate: 0.08,
            f_c: 10.0,
            f_d: 60.0,
            hearing_min: 20.0,
            hearing_max: 20_000.0,
            consonance_threshold: 5.0,
            dissonance_threshold: 4.0,
            weighting_mode: WeightingMode::Proximity,
        }
    }
}

impl ModelConfig {
    /// Same model with the audible band opened to `(0, ∞)`.
    pub fn without_hearing_band(mut self) -> Self {
        self.hearing_min = 0.0;
        self.hearing_max = f64::INFINITY;
        self
    }

    pub fn validate(&self) -> Result<()> {
        fn bad(key: &'static str, reason: impl Into<String>) -> Error {
            Error::InvalidConfig { key, reason: reason.into() }
        }
        if self.max_partials == 0 {
            return Err(bad("partials", "must be at least 1"));
        }
        if !(self.decay_rate.is_finite() && self.decay_rate > 0.0) {
            return Err(bad("decay", format!("must be a positive number, got {}", self.decay_rate)));
        }
        if !(self.f_c.is_finite() && self.f_c > 0.0) {
            return Err(bad("fc", format!("must be a positive number, got {}", self.f_c)));
        }
        if !(self.f_d.is_finite() && self.f_d > self.f_c) {
            return Err(bad(
                "fd",
                format!("must exceed fc = {}, got {}", self.f_c, self.f_d),
            ));
        }
        if self.hearing_min.is_nan() || self.hearing_min < 0.0 {
            return Err(bad("hearing_min", "must be nonnegative"));
        }
        if self.hearing_max.is_nan() || self.hearing_max <= self.hearing_min {
            return Err(bad("hearing_max", "must exceed hearing_min"));
        }
        if !self.consonance_threshold.is_finite() {
            return Err(bad("cons_threshold", "must be finite"));
        }
        if !self.dissonance_threshold.is_finite() {
            return Err(bad("diss_threshold", "must be finite"));
        }
        Ok(())
    }
}
