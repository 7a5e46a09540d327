//! Scale-wide pairwise assessment, triads, the five-temperament report, and
//! weighted consonance/dissonance graphs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::consonance::{assess_interval, IntervalAssessment};
use crate::error::{Error, Result};
use crate::spectral::{harmonic_spectrum, Spectrum};
use crate::temperament::{build_scale, pitch_frequency, Scale, ScaleKind, PITCH_NAMES};

/// Symmetric score matrices over a labelled set of tones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseAnalysis {
    pub labels: Vec<String>,
    pub consonance: Vec<Vec<f64>>,
    pub dissonance: Vec<Vec<f64>>,
    pub consonant: Vec<Vec<bool>>,
    pub dissonant: Vec<Vec<bool>>,
}

impl PairwiseAnalysis {
    /// Assesses every unordered pair (and each tone against itself).
    /// Pairs are independent and evaluated in parallel; results are placed
    /// by index so the outcome does not depend on scheduling.
    pub fn from_spectra(labels: Vec<String>, spectra: &[Spectrum], config: &ModelConfig) -> Result<Self> {
        let n = spectra.len();
        if labels.len() != n {
            return Err(Error::Usage(format!("{} labels for {n} spectra", labels.len())));
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let scored: Vec<(usize, usize, f64, f64)> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let r = assess_interval(&spectra[i], &spectra[j], config);
                (i, j, r.consonance, r.dissonance)
            })
            .collect();
        let mut consonance = vec![vec![0.0; n]; n];
        let mut dissonance = vec![vec![0.0; n]; n];
        for (i, j, c, d) in scored {
            consonance[i][j] = c;
            consonance[j][i] = c;
            dissonance[i][j] = d;
            dissonance[j][i] = d;
        }
        Ok(Self::from_matrices(labels, consonance, dissonance, config))
    }

    /// Wraps given matrices, deriving the flags from the configured thresholds.
    pub fn from_matrices(
        labels: Vec<String>,
        consonance: Vec<Vec<f64>>,
        dissonance: Vec<Vec<f64>>,
        config: &ModelConfig,
    ) -> Self {
        let flags = |m: &Vec<Vec<f64>>, t: f64| -> Vec<Vec<bool>> {
            m.iter().map(|row| row.iter().map(|&v| v >= t).collect()).collect()
        };
        let consonant = flags(&consonance, config.consonance_threshold);
        let dissonant = flags(&dissonance, config.dissonance_threshold);
        Self { labels, consonance, dissonance, consonant, dissonant }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Sum of the strict upper triangle of the consonance matrix.
    pub fn total_consonance(&self) -> f64 {
        upper_sum(&self.consonance)
    }

    pub fn total_dissonance(&self) -> f64 {
        upper_sum(&self.dissonance)
    }

    fn matrix(&self, kind: GraphKind) -> (&Vec<Vec<f64>>, &Vec<Vec<bool>>) {
        match kind {
            GraphKind::Consonance => (&self.consonance, &self.consonant),
            GraphKind::Dissonance => (&self.dissonance, &self.dissonant),
        }
    }
}

fn upper_sum(m: &[Vec<f64>]) -> f64 {
    m.iter().enumerate().flat_map(|(i, row)| &row[i + 1..]).fold(0.0, |acc, v| acc + v)
}

/// All pitch pairs of one scale under one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleAnalysis {
    pub scale: Scale,
    pub config: ModelConfig,
    pub pairs: PairwiseAnalysis,
}

impl ScaleAnalysis {
    pub fn graph(&self, kind: GraphKind) -> WeightedGraph {
        build_graph(&self.pairs, kind)
    }
}

pub fn scale_matrix(scale: &Scale, config: &ModelConfig) -> Result<ScaleAnalysis> {
    config.validate()?;
    let spectra = scale
        .frequencies
        .iter()
        .map(|&f| harmonic_spectrum(f, config))
        .collect::<Result<Vec<_>>>()?;
    let labels = PITCH_NAMES.iter().map(|s| s.to_string()).collect();
    let pairs = PairwiseAnalysis::from_spectra(labels, &spectra, config)?;
    Ok(ScaleAnalysis { scale: scale.clone(), config: *config, pairs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriadQuality {
    Minor,
    Major,
}

impl TriadQuality {
    pub const BOTH: [TriadQuality; 2] = [TriadQuality::Minor, TriadQuality::Major];

    pub fn third_steps(self) -> usize {
        match self {
            TriadQuality::Minor => 3,
            TriadQuality::Major => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TriadQuality::Minor => "minor",
            TriadQuality::Major => "major",
        }
    }
}

pub const FIFTH_STEPS: usize = 7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriadAssessment {
    pub root_index: usize,
    pub quality: TriadQuality,
    /// Root, third, fifth.
    pub frequencies: [f64; 3],
    /// Root–third, root–fifth, third–fifth.
    pub pair_scores: [IntervalAssessment; 3],
    pub total_consonance: f64,
    pub total_dissonance: f64,
}

impl TriadAssessment {
    pub fn root_name(&self) -> &'static str {
        PITCH_NAMES[self.root_index]
    }
}

// Chromatic position above C, wrapping past C2 into the next octave.
fn chromatic_frequency(scale: &Scale, position: usize) -> Result<f64> {
    if position <= 12 {
        pitch_frequency(scale, position, 0)
    } else {
        pitch_frequency(scale, position - 12, 1)
    }
}

pub fn triad_assessment(
    scale: &Scale,
    quality: TriadQuality,
    root_index: usize,
    config: &ModelConfig,
) -> Result<TriadAssessment> {
    if root_index > 11 {
        return Err(Error::Usage(format!("triad root {root_index} out of range 0..=11")));
    }
    config.validate()?;
    let positions = [root_index, root_index + quality.third_steps(), root_index + FIFTH_STEPS];
    let mut frequencies = [0.0; 3];
    for (f, &p) in frequencies.iter_mut().zip(&positions) {
        *f = chromatic_frequency(scale, p)?;
    }
    let spectra = frequencies
        .iter()
        .map(|&f| harmonic_spectrum(f, config))
        .collect::<Result<Vec<_>>>()?;
    let pair_scores = [
        assess_interval(&spectra[0], &spectra[1], config),
        assess_interval(&spectra[0], &spectra[2], config),
        assess_interval(&spectra[1], &spectra[2], config),
    ];
    let total_consonance = pair_scores.iter().map(|p| p.consonance).sum();
    let total_dissonance = pair_scores.iter().map(|p| p.dissonance).sum();
    Ok(TriadAssessment { root_index, quality, frequencies, pair_scores, total_consonance, total_dissonance })
}

/// One temperament's share of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperamentEntry {
    pub analysis: ScaleAnalysis,
    /// Minor triads on roots C..B, then major triads on roots C..B.
    pub triads: Vec<TriadAssessment>,
}

impl TemperamentEntry {
    pub fn triads_of(&self, quality: TriadQuality) -> impl Iterator<Item = &TriadAssessment> {
        self.triads.iter().filter(move |t| t.quality == quality)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperamentReport {
    pub base_frequency: f64,
    pub entries: Vec<TemperamentEntry>,
}

impl TemperamentReport {
    pub fn entry(&self, kind: ScaleKind) -> Option<&TemperamentEntry> {
        self.entries.iter().find(|e| e.analysis.scale.kind == kind)
    }

    pub fn triad_count(&self) -> usize {
        self.entries.iter().map(|e| e.triads.len()).sum()
    }

    /// One row per triad: `temperament,quality,root,consonance,dissonance`,
    /// temperaments in [`ScaleKind::ALL`] order, minor before major, roots ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("temperament,quality,root,consonance,dissonance\n");
        for e in &self.entries {
            for t in &e.triads {
                out.push_str(&format!(
                    "{},{},{},{:.6},{:.6}\n",
                    e.analysis.scale.kind.slug(),
                    t.quality.name(),
                    t.root_name(),
                    t.total_consonance,
                    t.total_dissonance
                ));
            }
        }
        out
    }
}

pub fn temperament_report(base_frequency: f64, config: &ModelConfig) -> Result<TemperamentReport> {
    let entries = ScaleKind::ALL
        .par_iter()
        .map(|&kind| {
            let scale = build_scale(kind, base_frequency)?;
            let analysis = scale_matrix(&scale, config)?;
            let triads = TriadQuality::BOTH
                .iter()
                .flat_map(|&q| (0..12).map(move |root| (q, root)))
                .map(|(q, root)| triad_assessment(&scale, q, root, config))
                .collect::<Result<Vec<_>>>()?;
            Ok(TemperamentEntry { analysis, triads })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TemperamentReport { base_frequency, entries })
}

/// `(max - min) / mean` of a set of positive values.
pub fn relative_spread(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Consonance,
    Dissonance,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Consonance => "consonance",
            GraphKind::Dissonance => "dissonance",
        }
    }
}

impl std::str::FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "consonance" => Ok(Self::Consonance),
            "dissonance" => Ok(Self::Dissonance),
            other => Err(Error::Parse(format!("unknown graph kind `{other}`"))),
        }
    }
}

/// Undirected edge between node indices `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub kind: GraphKind,
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().fold(0.0, |acc, e| acc + e.weight)
    }

    /// Weights rounded to the 6 decimals carried by the text exports.
    pub fn rounded(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { weight: round6(e.weight), ..*e })
            .collect();
        Self { kind: self.kind, nodes: self.nodes.clone(), edges }
    }
}

pub(crate) fn round6(x: f64) -> f64 {
    format!("{x:.6}").parse().expect("formatted float parses")
}

/// Edges wherever the flag of `kind` holds, weighted by the score; no self-loops.
pub fn build_graph(analysis: &PairwiseAnalysis, kind: GraphKind) -> WeightedGraph {
    let (scores, flags) = analysis.matrix(kind);
    let n = analysis.len();
    let edges = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| flags[a][b])
        .map(|(a, b)| Edge { a, b, weight: scores[a][b] })
        .collect();
    WeightedGraph { kind, nodes: analysis.labels.clone(), edges }
}
