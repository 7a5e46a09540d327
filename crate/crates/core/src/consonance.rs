//! Partial matching between two spectra and the resulting consonance and
//! dissonance scores.
//!
//! The spectrum with the lower fundamental is the reference. Each of its
//! partials is matched to the nearest partial of the other spectrum; the gap
//! `δf` then falls in the consonant band `[0, f_c)`, the dissonant band
//! `[f_c, f_d)`, or is neutral. Matching is one-sided, so several reference
//! partials may land on the same partial of the other spectrum.

use serde::{Deserialize, Serialize};

use crate::config::{ModelConfig, WeightingMode};
use crate::spectral::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchBand {
    Consonant,
    Dissonant,
    Neutral,
}

impl MatchBand {
    pub fn of_gap(delta_f: f64, config: &ModelConfig) -> Self {
        if delta_f < config.f_c {
            Self::Consonant
        } else if delta_f < config.f_d {
            Self::Dissonant
        } else {
            Self::Neutral
        }
    }
}

/// Which argument of [`match_partials`] served as reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialMatch {
    /// `Partial::index` of the reference partial.
    pub ref_index: usize,
    /// `Partial::index` of the nearest partial in the other spectrum.
    pub other_index: usize,
    pub ref_frequency: f64,
    pub other_frequency: f64,
    /// `M(i)·M(j)`.
    pub magnitude_product: f64,
    pub delta_f: f64,
    pub band: MatchBand,
}

impl PartialMatch {
    /// Contribution of this match to its band's score under `mode`; zero for
    /// neutral matches.
    pub fn contribution(&self, config: &ModelConfig) -> f64 {
        let d = self.delta_f;
        let w = match (self.band, config.weighting_mode) {
            (MatchBand::Neutral, _) => return 0.0,
            (_, WeightingMode::Literal) => d,
            (MatchBand::Consonant, WeightingMode::Proximity) => (config.f_c - d) / config.f_c,
            (MatchBand::Dissonant, WeightingMode::Proximity) => {
                (config.f_d - d) / (config.f_d - config.f_c)
            }
        };
        self.magnitude_product * w
    }
}

/// Matches every reference partial to its nearest neighbour in the other
/// spectrum. Equidistant neighbours resolve to the lower frequency.
pub fn match_partials(
    a: &Spectrum,
    b: &Spectrum,
    config: &ModelConfig,
) -> (Reference, Vec<PartialMatch>) {
    let (side, reference, other) = if b.fundamental() < a.fundamental() {
        (Reference::Second, b, a)
    } else {
        (Reference::First, a, b)
    };
    let targets = other.partials();
    let matches = reference
        .partials()
        .iter()
        .map(|p| {
            let k = targets.partition_point(|q| q.frequency < p.frequency);
            let nearest = match (k.checked_sub(1), targets.get(k)) {
                (Some(lo), Some(hi)) => {
                    let below = p.frequency - targets[lo].frequency;
                    let above = hi.frequency - p.frequency;
                    if above < below {
                        hi
                    } else {
                        &targets[lo]
                    }
                }
                (Some(lo), None) => &targets[lo],
                (None, Some(hi)) => hi,
                (None, None) => unreachable!("spectra are never empty"),
            };
            let delta_f = (nearest.frequency - p.frequency).abs();
            PartialMatch {
                ref_index: p.index,
                other_index: nearest.index,
                ref_frequency: p.frequency,
                other_frequency: nearest.frequency,
                magnitude_product: p.magnitude * nearest.magnitude,
                delta_f,
                band: MatchBand::of_gap(delta_f, config),
            }
        })
        .collect();
    (side, matches)
}

/// Consonance and dissonance of a tone pair. Both flags may hold at once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalAssessment {
    pub consonance: f64,
    pub dissonance: f64,
    pub is_consonant: bool,
    pub is_dissonant: bool,
    pub matches: Vec<PartialMatch>,
}

impl IntervalAssessment {
    pub fn count(&self, band: MatchBand) -> usize {
        self.matches.iter().filter(|m| m.band == band).count()
    }
}

pub fn assess_interval(a: &Spectrum, b: &Spectrum, config: &ModelConfig) -> IntervalAssessment {
    let (_, matches) = match_partials(a, b, config);
    let (mut consonance, mut dissonance) = (0.0, 0.0);
    for m in &matches {
        match m.band {
            MatchBand::Consonant => consonance += m.contribution(config),
            MatchBand::Dissonant => dissonance += m.contribution(config),
            MatchBand::Neutral => {}
        }
    }
    IntervalAssessment {
        consonance,
        dissonance,
        is_consonant: consonance >= config.consonance_threshold,
        is_dissonant: dissonance >= config.dissonance_threshold,
        matches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{harmonic_spectrum, harmonic_magnitude};
    use approx::assert_relative_eq;

    fn spec(f0: f64) -> Spectrum {
        harmonic_spectrum(f0, &ModelConfig::default()).unwrap()
    }

    #[test]
    fn identical_spectra_self_match() {
        let s = spec(330.0);
        let (side, m) = match_partials(&s, &s, &ModelConfig::default());
        assert_eq!(side, Reference::First);
        assert_eq!(m.len(), s.len());
        assert!(m.iter().all(|x| x.delta_f == 0.0 && x.band == MatchBand::Consonant));
    }

    #[test]
    fn octave_matches_even_partials() {
        let cfg = ModelConfig::default();
        let lo = spec(261.6256);
        let hi = spec(523.2512);
        let (side, m) = match_partials(&hi, &lo, &cfg);
        assert_eq!(side, Reference::Second);
        assert_eq!(m.len(), 50);
        for x in &m {
            if x.ref_index % 2 == 0 {
                assert_eq!(x.other_index, x.ref_index / 2);
                assert!(x.delta_f < 1e-9);
                assert_eq!(x.band, MatchBand::Consonant);
            } else {
                assert_relative_eq!(x.delta_f, 261.6256, max_relative = 1e-12);
                assert_eq!(x.band, MatchBand::Neutral);
            }
        }
    }

    #[test]
    fn odd_partials_tie_to_lower_neighbour() {
        // 600 Hz is equidistant from 400 and 800 Hz.
        let cfg = ModelConfig::default();
        let (_, m) = match_partials(&spec(200.0), &spec(400.0), &cfg);
        let third = m.iter().find(|x| x.ref_index == 3).unwrap();
        assert_eq!(third.other_frequency, 400.0);
        assert_eq!(third.other_index, 1);
    }

    #[test]
    fn five_hz_mistuning_bands() {
        let cfg = ModelConfig::default();
        let (_, m) = match_partials(&spec(440.0), &spec(445.0), &cfg);
        assert_eq!(m.len(), 45);
        for x in &m {
            if x.ref_index == 45 {
                // 45·445 Hz is above the hearing band; nearest is 44·445 Hz.
                assert_eq!((x.other_index, x.band), (44, MatchBand::Neutral));
                continue;
            }
            assert_eq!(x.other_index, x.ref_index);
            assert_relative_eq!(x.delta_f, 5.0 * x.ref_index as f64, max_relative = 1e-12);
            let expected = match x.ref_index {
                1 => MatchBand::Consonant,
                2..=11 => MatchBand::Dissonant,
                _ => MatchBand::Neutral,
            };
            assert_eq!(x.band, expected, "partial {}", x.ref_index);
        }
    }

    #[test]
    fn unison_scores() {
        let s = spec(440.0);
        let prox = assess_interval(&s, &s, &ModelConfig::default());
        let closed = (1.0 - (-0.16f64 * 45.0).exp()) / (1.0 - (-0.16f64).exp());
        assert_relative_eq!(prox.consonance, closed, max_relative = 1e-12);
        assert_eq!(prox.dissonance, 0.0);
        assert!(prox.is_consonant && !prox.is_dissonant);

        let lit = ModelConfig { weighting_mode: WeightingMode::Literal, ..Default::default() };
        let l = assess_interval(&s, &s, &lit);
        assert_eq!((l.consonance, l.dissonance), (0.0, 0.0));
    }

    #[test]
    fn band_counts_partition_reference() {
        let cfg = ModelConfig::default();
        let r = assess_interval(&spec(300.0), &spec(410.0), &cfg);
        let total = r.count(MatchBand::Consonant) + r.count(MatchBand::Dissonant) + r.count(MatchBand::Neutral);
        assert_eq!(total, spec(300.0).len());
    }

    #[test]
    fn proximity_weight_vanishes_at_band_edges() {
        let cfg = ModelConfig::default();
        let near = |d: f64, band| PartialMatch {
            ref_index: 1,
            other_index: 1,
            ref_frequency: 100.0,
            other_frequency: 100.0 + d,
            magnitude_product: 1.0,
            delta_f: d,
            band,
        };
        assert!(near(10.0 - 1e-9, MatchBand::Consonant).contribution(&cfg) < 1e-9);
        assert!(near(60.0 - 1e-9, MatchBand::Dissonant).contribution(&cfg) < 1e-9);
        assert_eq!(near(10.0, MatchBand::Dissonant).contribution(&cfg), 1.0);
        assert_eq!(near(70.0, MatchBand::Neutral).contribution(&cfg), 0.0);
    }

    #[test]
    fn literal_mistuned_dissonance_closed_form() {
        let cfg = ModelConfig { weighting_mode: WeightingMode::Literal, ..Default::default() };
        let r = assess_interval(&spec(440.0), &spec(445.0), &cfg);
        let expected: f64 = (2..=11)
            .map(|i| harmonic_magnitude(i, 0.08).powi(2) * 5.0 * i as f64)
            .sum();
        assert_relative_eq!(r.dissonance, expected, max_relative = 1e-12);
        assert_relative_eq!(r.consonance, 5.0, max_relative = 1e-12);
    }
}
