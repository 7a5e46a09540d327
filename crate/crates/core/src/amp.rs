//! Quadratic amplification `y = (Σ aᵢ·cos(2π·fᵢ·t) + a)²` expanded exactly
//! into a line spectrum, and the bias sweep that re-assesses consonance of the
//! distorted tones.
//!
//! Product-to-sum expansion of the square:
//!
//! * dc: `a² + Σ aᵢ²/2`
//! * `2fᵢ`: `aᵢ²/2`
//! * `fᵢ`: `2·a·aᵢ`
//! * `fᵢ + fⱼ` and `|fᵢ − fⱼ|` (i < j): `aᵢ·aⱼ` each
//!
//! All terms are zero-phase cosines, so terms landing on the same frequency
//! merge by plain amplitude addition.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::analysis::{build_graph, GraphKind, PairwiseAnalysis, WeightedGraph};
use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::spectral::{render_components, Partial, Spectrum, Waveform};
use crate::temperament::{build_scale, ScaleKind};

/// Relative tolerance under which two product frequencies are the same line.
pub const FREQUENCY_MERGE_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_BIASES: [f64; 6] = [0.0, 1.0, 2.5, 4.0, 10.0, 50.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplifierConfig {
    pub bias: f64,
    /// Ascending.
    pub biases_sweep: Vec<f64>,
    pub sample_rate: f64,
    pub duration: f64,
}

impl Default for AmplifierConfig {
    fn default() -> Self {
        Self { bias: 0.0, biases_sweep: DEFAULT_BIASES.to_vec(), sample_rate: 44_100.0, duration: 1.0 }
    }
}

impl AmplifierConfig {
    pub fn validate(&self) -> Result<()> {
        if self.biases_sweep.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::InvalidConfig { key: "biases", reason: "biases must be finite and nonnegative".into() });
        }
        if self.biases_sweep.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidConfig { key: "biases", reason: "biases must be sorted ascending".into() });
        }
        if !(self.sample_rate > 0.0 && self.duration > 0.0) {
            return Err(Error::InvalidConfig { key: "sample_rate", reason: "rate and duration must be positive".into() });
        }
        Ok(())
    }
}

/// One input sinusoid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub label: String,
    pub frequency: f64,
    pub amplitude: f64,
}

impl Tone {
    pub fn new(label: impl Into<String>, frequency: f64, amplitude: f64) -> Self {
        Self { label: label.into(), frequency, amplitude }
    }
}

/// Just-major root, major third and fifth with amplitudes 1, 1/3, 1/5.
pub fn just_triad_input(base_frequency: f64) -> Result<Vec<Tone>> {
    let s = build_scale(ScaleKind::JustMajor, base_frequency)?;
    Ok(vec![
        Tone::new("C", s.frequencies[0], 1.0),
        Tone::new("E", s.frequencies[4], 1.0 / 3.0),
        Tone::new("G", s.frequencies[7], 1.0 / 5.0),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    Linear,
    Double,
    Sum,
    Difference,
}

/// One product term before merging. `parent` is the lower-frequency input
/// tone the term is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub frequency: f64,
    pub amplitude: f64,
    pub kind: TermKind,
    pub parent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandedSpectrum {
    pub dc: f64,
    /// Ascending, one entry per distinct frequency.
    pub partials: Vec<Partial>,
}

impl ExpandedSpectrum {
    pub fn component_count(&self) -> usize {
        self.partials.len() + usize::from(self.dc != 0.0)
    }

    pub fn amplitude_at(&self, frequency: f64) -> f64 {
        self.partials
            .iter()
            .find(|p| same_frequency(p.frequency, frequency))
            .map_or(0.0, |p| p.magnitude)
    }

    /// Mean power over whole periods: `dc² + Σ amplitude²/2`.
    pub fn mean_power(&self) -> f64 {
        self.dc * self.dc + self.partials.iter().map(|p| p.magnitude * p.magnitude / 2.0).sum::<f64>()
    }

    pub fn render(&self, duration: f64, sample_rate: f64) -> Result<Waveform> {
        check_render_args(duration, sample_rate)?;
        let comps: Vec<(f64, f64, f64)> =
            self.partials.iter().map(|p| (TAU * p.frequency, p.magnitude, 0.0)).collect();
        Ok(render_components(&comps, duration, sample_rate, self.dc))
    }
}

fn check_render_args(duration: f64, sample_rate: f64) -> Result<()> {
    if !(duration > 0.0 && sample_rate > 0.0) {
        return Err(Error::Usage(format!("duration and sample rate must be positive, got {duration} s at {sample_rate} Hz")));
    }
    Ok(())
}

fn same_frequency(a: f64, b: f64) -> bool {
    (a - b).abs() <= FREQUENCY_MERGE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Renders `Σ aᵢ·cos(2π·fᵢ·t) + bias`.
pub fn render_input(input: &[(f64, f64)], bias: f64, duration: f64, sample_rate: f64) -> Result<Waveform> {
    check_render_args(duration, sample_rate)?;
    let comps: Vec<(f64, f64, f64)> = input.iter().map(|&(f, a)| (TAU * f, a, 0.0)).collect();
    Ok(render_components(&comps, duration, sample_rate, bias))
}

fn check_input(input: &[(f64, f64)], bias: f64) -> Result<()> {
    if input.is_empty() {
        return Err(Error::Usage("amplifier input needs at least one tone".into()));
    }
    if !(bias.is_finite() && bias >= 0.0) {
        return Err(Error::Domain(format!("bias must be finite and nonnegative, got {bias}")));
    }
    for &(f, a) in input {
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::Domain(format!("tone frequency must be positive, got {f}")));
        }
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("tone amplitude must be nonnegative, got {a}")));
        }
    }
    for (i, &(fi, _)) in input.iter().enumerate() {
        if input[i + 1..].iter().any(|&(fj, _)| same_frequency(fi, fj)) {
            return Err(Error::Usage(format!("duplicate input frequency {fi} Hz; merge it upstream")));
        }
    }
    Ok(())
}

/// Every AC product term of the squared signal, plus the dc level.
pub fn expansion_terms(input: &[(f64, f64)], bias: f64) -> Result<(f64, Vec<ExpansionTerm>)> {
    check_input(input, bias)?;
    let mut dc = bias * bias;
    let mut terms = Vec::new();
    for (i, &(fi, ai)) in input.iter().enumerate() {
        dc += ai * ai / 2.0;
        terms.push(ExpansionTerm { frequency: 2.0 * fi, amplitude: ai * ai / 2.0, kind: TermKind::Double, parent: i });
        if bias > 0.0 {
            terms.push(ExpansionTerm { frequency: fi, amplitude: 2.0 * bias * ai, kind: TermKind::Linear, parent: i });
        }
        for (j, &(fj, aj)) in input.iter().enumerate().skip(i + 1) {
            let parent = if fi <= fj { i } else { j };
            terms.push(ExpansionTerm { frequency: fi + fj, amplitude: ai * aj, kind: TermKind::Sum, parent });
            terms.push(ExpansionTerm { frequency: (fi - fj).abs(), amplitude: ai * aj, kind: TermKind::Difference, parent });
        }
    }
    Ok((dc, terms))
}

// Sorts and merges coincident frequencies; zero-frequency lines fold into dc.
fn merge_terms(mut dc: f64, terms: impl IntoIterator<Item = (f64, f64)>) -> (f64, Vec<Partial>) {
    let mut lines: Vec<(f64, f64)> = Vec::new();
    let mut sorted: Vec<(f64, f64)> = terms.into_iter().collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (f, a) in sorted {
        if same_frequency(f, 0.0) {
            dc += a;
            continue;
        }
        match lines.last_mut() {
            Some(last) if same_frequency(last.0, f) => last.1 += a,
            _ => lines.push((f, a)),
        }
    }
    let partials = lines
        .into_iter()
        .enumerate()
        .map(|(k, (frequency, magnitude))| Partial { frequency, magnitude, index: k + 1 })
        .collect();
    (dc, partials)
}

pub fn square_expand(input: &[(f64, f64)], bias: f64) -> Result<ExpandedSpectrum> {
    let (dc, terms) = expansion_terms(input, bias)?;
    let (dc, partials) = merge_terms(dc, terms.iter().map(|t| (t.frequency, t.amplitude)));
    Ok(ExpandedSpectrum { dc, partials })
}

/// Mean-removed normalized cross-correlation at zero lag.
pub fn linearity_metric(input: &[f64], output: &[f64]) -> Result<f64> {
    if input.len() != output.len() {
        return Err(Error::Usage(format!("buffer lengths differ: {} vs {}", input.len(), output.len())));
    }
    if input.is_empty() {
        return Err(Error::UndefinedCorrelation("empty buffers".into()));
    }
    let n = input.len() as f64;
    let mx = input.iter().sum::<f64>() / n;
    let my = output.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in input.iter().zip(output) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("a buffer is constant".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Output of the amplifier at one bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub bias: f64,
    pub spectrum: ExpandedSpectrum,
    /// Per input tone: its output partials (own linear and doubled terms plus
    /// every product it is the lower-frequency parent of), normalized so the
    /// strongest AC line of the whole output has magnitude 1.
    pub tones: Vec<Spectrum>,
    pub assessment: PairwiseAnalysis,
    pub graph: WeightedGraph,
    pub linearity: f64,
}

impl SweepEntry {
    /// Σ product amplitudes (doubles, sums, differences) / Σ linear amplitudes.
    pub fn distortion_ratio(&self, input: &[Tone]) -> Result<f64> {
        let pairs: Vec<(f64, f64)> = input.iter().map(|t| (t.frequency, t.amplitude)).collect();
        let (_, terms) = expansion_terms(&pairs, self.bias)?;
        let (mut products, mut linear) = (0.0, 0.0);
        for t in terms {
            match t.kind {
                TermKind::Linear => linear += t.amplitude,
                _ => products += t.amplitude,
            }
        }
        Ok(if linear == 0.0 { f64::INFINITY } else { products / linear })
    }
}

fn tone_spectra(input: &[Tone], bias: f64, config: &ModelConfig) -> Result<Vec<Spectrum>> {
    let pairs: Vec<(f64, f64)> = input.iter().map(|t| (t.frequency, t.amplitude)).collect();
    let (_, terms) = expansion_terms(&pairs, bias)?;
    let peak = terms.iter().map(|t| t.amplitude).fold(0.0, f64::max);
    let norm = if peak > 0.0 { peak } else { 1.0 };
    input
        .iter()
        .enumerate()
        .map(|(k, tone)| {
            let own = terms
                .iter()
                .filter(|t| t.parent == k)
                .filter(|t| t.frequency >= config.hearing_min && t.frequency <= config.hearing_max)
                .map(|t| (t.frequency, t.amplitude / norm));
            let (_, partials) = merge_terms(0.0, own);
            if partials.is_empty() {
                return Err(Error::EmptySpectrum {
                    fundamental: tone.frequency,
                    min: config.hearing_min,
                    max: config.hearing_max,
                });
            }
            Spectrum::new(tone.frequency, partials)
        })
        .collect()
}

pub fn bias_sweep(input: &[Tone], amp: &AmplifierConfig, config: &ModelConfig) -> Result<Vec<SweepEntry>> {
    if input.is_empty() {
        return Err(Error::Usage("bias sweep needs at least one input tone".into()));
    }
    amp.validate()?;
    config.validate()?;
    let pairs: Vec<(f64, f64)> = input.iter().map(|t| (t.frequency, t.amplitude)).collect();
    let clean = render_input(&pairs, 0.0, amp.duration, amp.sample_rate)?;
    let labels: Vec<String> = input.iter().map(|t| t.label.clone()).collect();
    amp.biases_sweep
        .iter()
        .map(|&bias| {
            let spectrum = square_expand(&pairs, bias)?;
            let output = spectrum.render(amp.duration, amp.sample_rate)?;
            let linearity = linearity_metric(&clean.samples, &output.samples)?;
            let tones = tone_spectra(input, bias, config)?;
            let assessment = PairwiseAnalysis::from_spectra(labels.clone(), &tones, config)?;
            let graph = build_graph(&assessment, GraphKind::Consonance);
            Ok(SweepEntry { bias, spectrum, tones, assessment, graph, linearity })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_tone_no_bias() {
        let e = square_expand(&[(100.0, 1.0)], 0.0).unwrap();
        assert_eq!(e.dc, 0.5);
        assert_eq!(e.partials.len(), 1);
        assert_eq!((e.partials[0].frequency, e.partials[0].magnitude), (200.0, 0.5));
    }

    #[test]
    fn two_tones_no_bias() {
        let e = square_expand(&[(300.0, 1.0), (440.0, 1.0)], 0.0).unwrap();
        assert_eq!(e.dc, 1.0);
        let lines: Vec<(f64, f64)> = e.partials.iter().map(|p| (p.frequency, p.magnitude)).collect();
        assert_eq!(lines, vec![(140.0, 1.0), (600.0, 0.5), (740.0, 1.0), (880.0, 0.5)]);
    }

    #[test]
    fn octave_products_merge() {
        // 2·f1 coincides with f2.
        let e = square_expand(&[(200.0, 1.0), (400.0, 0.5)], 1.0).unwrap();
        // at 200: 2·a·a1 = 2 plus difference a1·a2 = 0.5
        assert_abs_diff_eq!(e.amplitude_at(200.0), 2.5, epsilon = 1e-15);
        // at 400: 2·a·a2 = 1 plus a1²/2 = 0.5
        assert_abs_diff_eq!(e.amplitude_at(400.0), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn term_count_for_generic_input() {
        let input = [(101.0, 0.7), (157.3, 0.2), (233.9, 1.1), (311.17, 0.4)];
        let n = input.len();
        let e = square_expand(&input, 2.0).unwrap();
        assert_eq!(e.component_count(), n * (n - 1) / 2 * 2 + 2 * n + 1);
    }

    #[test]
    fn zero_bias_has_no_linear_lines() {
        let input = just_triad_input(261.6256).unwrap();
        let pairs: Vec<(f64, f64)> = input.iter().map(|t| (t.frequency, t.amplitude)).collect();
        let e = square_expand(&pairs, 0.0).unwrap();
        for t in &input {
            assert_eq!(e.amplitude_at(t.frequency), 0.0, "{}", t.label);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(square_expand(&[], 1.0), Err(Error::Usage(_))));
        assert!(matches!(square_expand(&[(100.0, 1.0), (100.0, 2.0)], 1.0), Err(Error::Usage(_))));
        assert!(matches!(square_expand(&[(-1.0, 1.0)], 1.0), Err(Error::Domain(_))));
        assert!(matches!(square_expand(&[(1.0, 1.0)], -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn linearity_examples() {
        let x: Vec<f64> = (0..500).map(|k| (k as f64 * 0.1).sin() + 0.3 * (k as f64 * 0.37).cos()).collect();
        let affine: Vec<f64> = x.iter().map(|v| 3.0 * v + 7.0).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_abs_diff_eq!(linearity_metric(&x, &affine).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(linearity_metric(&x, &neg).unwrap(), -1.0, epsilon = 1e-12);
        assert!(matches!(linearity_metric(&x, &vec![2.0; 500]), Err(Error::UndefinedCorrelation(_))));
        assert!(matches!(linearity_metric(&x, &x[..10]), Err(Error::Usage(_))));
    }

    #[test]
    fn sweep_has_one_entry_per_bias() {
        let amp = AmplifierConfig { duration: 0.05, ..Default::default() };
        let input = just_triad_input(261.6256).unwrap();
        let sweep = bias_sweep(&input, &amp, &ModelConfig::default()).unwrap();
        let biases: Vec<f64> = sweep.iter().map(|e| e.bias).collect();
        assert_eq!(biases, DEFAULT_BIASES);
        assert!(sweep.last().unwrap().distortion_ratio(&input).unwrap() < 0.02);
        for e in &sweep {
            assert_eq!(e.tones.len(), 3);
            assert_eq!(e.graph.nodes, ["C", "E", "G"]);
        }
    }

    #[test]
    fn unsorted_sweep_rejected() {
        let amp = AmplifierConfig { biases_sweep: vec![1.0, 0.0], ..Default::default() };
        let input = just_triad_input(261.6256).unwrap();
        assert!(matches!(bias_sweep(&input, &amp, &ModelConfig::default()), Err(Error::InvalidConfig { .. })));
    }
}
