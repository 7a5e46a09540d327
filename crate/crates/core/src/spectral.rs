//! Signal primitives: the cent measure, same-frequency phasor addition,
//! perceptual classification of frequency gaps, harmonic spectra with
//! exponentially decaying partials, and time-domain rendering.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::error::{Error, Result};

/// Interval size in cents from `f_low` up to `f_high` (negative when descending).
pub fn cents(f_low: f64, f_high: f64) -> Result<f64> {
    if !(f_low > 0.0 && f_high > 0.0) {
        return Err(Error::Domain(format!(
            "cents needs positive frequencies, got {f_low} and {f_high}"
        )));
    }
    Ok(1200.0 * (f_high / f_low).log2())
}

/// Amplitude and phase of one sinusoid at a shared angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasorComponent {
    pub amplitude: f64,
    /// Radians, normalized to `(-π, π]`.
    pub phase: f64,
}

impl PhasorComponent {
    pub fn new(amplitude: f64, phase: f64) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::Domain(format!(
                "phasor amplitude must be finite and nonnegative, got {amplitude}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::Domain(format!("phasor phase must be finite, got {phase}")));
        }
        Ok(Self { amplitude, phase: normalize_phase(phase) })
    }

    /// Value of `amplitude·cos(ωt + phase)` at angle `ωt`.
    pub fn eval(&self, omega_t: f64) -> f64 {
        self.amplitude * (omega_t + self.phase).cos()
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn normalize_phase(phase: f64) -> f64 {
    let mut p = phase.rem_euclid(TAU);
    if p > PI {
        p -= TAU;
    }
    p
}

/// Adds same-frequency sinusoids as vectors in the complex plane.
///
/// The result satisfies `Σ aᵢ·cos(ωt + θᵢ) = a·cos(ωt + θ)` for every `t`.
/// A sum that cancels (relative to the input amplitudes, down to rounding)
/// is reported as `(0, 0)`.
pub fn phasor_sum(components: &[PhasorComponent]) -> Result<PhasorComponent> {
    if components.is_empty() {
        return Err(Error::Usage("phasor_sum needs at least one component".into()));
    }
    let (x, y) = components.iter().fold((0.0, 0.0), |(x, y), c| {
        let (s, co) = c.phase.sin_cos();
        (x + c.amplitude * co, y + c.amplitude * s)
    });
    let amplitude = x.hypot(y);
    let scale: f64 = components.iter().map(|c| c.amplitude).sum();
    if amplitude <= scale * 4.0 * f64::EPSILON {
        return Ok(PhasorComponent { amplitude: 0.0, phase: 0.0 });
    }
    Ok(PhasorComponent { amplitude, phase: normalize_phase(y.atan2(x)) })
}

/// How a frequency gap between two simultaneous tones is heard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PerceptualClass {
    /// `[0, 2)` Hz: fuses into one tuned note.
    Tuned,
    /// `[2, 10)` Hz: one pitch with slowly varying loudness.
    SlowBeat,
    /// `[10, 60)` Hz: rough, unpleasant beating.
    Rough,
    /// `[60, ∞)` Hz: two distinct sounds.
    SeparateTones,
}

pub const TUNED_LIMIT_HZ: f64 = 2.0;
pub const SLOW_BEAT_LIMIT_HZ: f64 = 10.0;
pub const ROUGH_LIMIT_HZ: f64 = 60.0;

pub fn classify_gap(delta_f: f64) -> Result<PerceptualClass> {
    if delta_f.is_nan() || delta_f < 0.0 {
        return Err(Error::Domain(format!("frequency gap must be nonnegative, got {delta_f}")));
    }
    Ok(if delta_f < TUNED_LIMIT_HZ {
        PerceptualClass::Tuned
    } else if delta_f < SLOW_BEAT_LIMIT_HZ {
        PerceptualClass::SlowBeat
    } else if delta_f < ROUGH_LIMIT_HZ {
        PerceptualClass::Rough
    } else {
        PerceptualClass::SeparateTones
    })
}

/// One spectral component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Partial {
    pub frequency: f64,
    pub magnitude: f64,
    /// Harmonic number for harmonic spectra; 1-based rank otherwise.
    pub index: usize,
}

/// A non-empty set of partials, strictly ascending in frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    fundamental: f64,
    partials: Vec<Partial>,
}

impl Spectrum {
    pub fn new(fundamental: f64, partials: Vec<Partial>) -> Result<Self> {
        if !(fundamental > 0.0 && fundamental.is_finite()) {
            return Err(Error::Domain(format!("fundamental must be positive, got {fundamental}")));
        }
        if partials.is_empty() {
            return Err(Error::Usage("a spectrum needs at least one partial".into()));
        }
        for p in &partials {
            if !(p.frequency > 0.0 && p.frequency.is_finite()) {
                return Err(Error::Domain(format!(
                    "partial frequency must be positive, got {}",
                    p.frequency
                )));
            }
            if !(p.magnitude >= 0.0 && p.magnitude.is_finite()) {
                return Err(Error::Domain(format!(
                    "partial magnitude must be nonnegative, got {}",
                    p.magnitude
                )));
            }
        }
        if partials.windows(2).any(|w| w[0].frequency >= w[1].frequency) {
            return Err(Error::Usage(
                "partials must be strictly ascending in frequency".into(),
            ));
        }
        Ok(Self { fundamental, partials })
    }

    /// Builds a spectrum from `(frequency, magnitude)` pairs in any order,
    /// ranking partials by frequency.
    pub fn from_pairs(fundamental: f64, pairs: &[(f64, f64)]) -> Result<Self> {
        let mut sorted = pairs.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let partials = sorted
            .into_iter()
            .enumerate()
            .map(|(k, (frequency, magnitude))| Partial { frequency, magnitude, index: k + 1 })
            .collect();
        Self::new(fundamental, partials)
    }

    pub fn fundamental(&self) -> f64 {
        self.fundamental
    }

    pub fn partials(&self) -> &[Partial] {
        &self.partials
    }

    pub fn len(&self) -> usize {
        self.partials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partials.is_empty()
    }

    pub fn highest_frequency(&self) -> f64 {
        self.partials.last().map_or(0.0, |p| p.frequency)
    }

    /// Same partial grid with every magnitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let partials = self
            .partials
            .iter()
            .map(|p| Partial { magnitude: p.magnitude * factor, ..*p })
            .collect();
        Self::new(self.fundamental, partials)
    }
}

/// Magnitude of harmonic `index` (1-based): `exp(-decay_rate·(index-1))`.
pub fn harmonic_magnitude(index: usize, decay_rate: f64) -> f64 {
    (-decay_rate * (index as f64 - 1.0)).exp()
}

/// Harmonic series `i·f0` for `i = 1..=max_partials`, keeping only partials
/// inside the audible band. Surviving magnitudes are not rescaled.
pub fn harmonic_spectrum(f0: f64, config: &ModelConfig) -> Result<Spectrum> {
    if !(f0 > 0.0 && f0.is_finite()) {
        return Err(Error::Domain(format!("fundamental must be positive, got {f0}")));
    }
    let partials: Vec<Partial> = (1..=config.max_partials)
        .map(|i| Partial {
            frequency: i as f64 * f0,
            magnitude: harmonic_magnitude(i, config.decay_rate),
            index: i,
        })
        .filter(|p| p.frequency >= config.hearing_min && p.frequency <= config.hearing_max)
        .collect();
    if partials.is_empty() {
        return Err(Error::EmptySpectrum {
            fundamental: f0,
            min: config.hearing_min,
            max: config.hearing_max,
        });
    }
    Spectrum::new(f0, partials)
}

/// A rendered sample buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub sample_rate: f64,
    pub samples: Vec<f64>,
    /// Set when some partial sits at or above the Nyquist frequency.
    pub aliased: bool,
}

impl Waveform {
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 / self.sample_rate
    }
}

/// A spectrum with per-partial phase offsets; an empty phase slice means all zero.
#[derive(Debug, Clone, Copy)]
pub struct PhasedSpectrum<'a> {
    pub spectrum: &'a Spectrum,
    pub phases: &'a [f64],
}

impl<'a> PhasedSpectrum<'a> {
    pub fn zero_phase(spectrum: &'a Spectrum) -> Self {
        Self { spectrum, phases: &[] }
    }
}

/// Sums every partial of every source as a cosine, plus a constant offset.
///
/// Sample `k` is `dc_offset + Σ m·cos(2π·f·k/sample_rate + φ)`.
pub fn render_waveform(
    sources: &[PhasedSpectrum<'_>],
    duration: f64,
    sample_rate: f64,
    dc_offset: f64,
) -> Result<Waveform> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::Usage(format!("duration must be positive, got {duration}")));
    }
    if !(sample_rate > 0.0 && sample_rate.is_finite()) {
        return Err(Error::Usage(format!("sample rate must be positive, got {sample_rate}")));
    }
    let mut components = Vec::new();
    for src in sources {
        let n = src.spectrum.len();
        if !src.phases.is_empty() && src.phases.len() != n {
            return Err(Error::Usage(format!(
                "{} phase offsets given for {n} partials",
                src.phases.len()
            )));
        }
        for (k, p) in src.spectrum.partials().iter().enumerate() {
            let phase = src.phases.get(k).copied().unwrap_or(0.0);
            components.push((TAU * p.frequency, p.magnitude, phase));
        }
    }
    Ok(render_components(&components, duration, sample_rate, dc_offset))
}

/// Renders raw `(angular frequency, amplitude, phase)` cosines.
pub(crate) fn render_components(
    components: &[(f64, f64, f64)],
    duration: f64,
    sample_rate: f64,
    dc_offset: f64,
) -> Waveform {
    let highest = components.iter().map(|c| c.0 / TAU).fold(0.0, f64::max);
    let aliased = sample_rate <= 2.0 * highest;
    if aliased {
        log::warn!(
            "sample rate {sample_rate} Hz does not exceed twice the highest partial ({highest} Hz)"
        );
    }
    let len = (duration * sample_rate).round() as usize;
    let samples = (0..len)
        .map(|k| {
            let t = k as f64 / sample_rate;
            dc_offset
                + components
                    .iter()
                    .map(|&(omega, amp, phase)| amp * (omega * t + phase).cos())
                    .sum::<f64>()
        })
        .collect();
    Waveform { sample_rate, samples, aliased }
}

/// Sample indices of amplitude-envelope maxima.
///
/// The envelope is traced through the carrier peaks (local maxima of `|x|`);
/// its local maxima at or above `min_fraction` of the global peak are returned.
pub fn envelope_peaks(samples: &[f64], min_fraction: f64) -> Vec<usize> {
    let mag: Vec<f64> = samples.iter().map(|x| x.abs()).collect();
    let carrier = local_maxima(&mag);
    let envelope: Vec<f64> = carrier.iter().map(|&k| mag[k]).collect();
    let global = envelope.iter().copied().fold(0.0, f64::max);
    local_maxima(&envelope)
        .into_iter()
        .filter(|&e| envelope[e] >= min_fraction * global)
        .map(|e| carrier[e])
        .collect()
}

// Interior indices where a value is at least its left neighbour and strictly
// above its right one. Endpoints are skipped: a truncated buffer edge says
// nothing about a true maximum.
fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&k| values[k] >= values[k - 1] && values[k] > values[k + 1])
        .collect()
}
