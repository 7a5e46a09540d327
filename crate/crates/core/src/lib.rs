//! Partial-matching model of musical consonance and dissonance.
//!
//! Tones are harmonic spectra with exponentially decaying partials. Two tones
//! are compared by matching each partial of the lower tone to the nearest
//! partial of the higher one and scoring the frequency gaps. On top of that
//! sit the five classic temperaments, triad scoring, weighted interval graphs
//! and a quadratic amplifier model.

pub mod amp;
pub mod analysis;
pub mod config;
pub mod consonance;
pub mod error;
pub mod export;
pub mod spectral;
pub mod temperament;

pub use analysis::{
    build_graph, relative_spread, scale_matrix, temperament_report, triad_assessment, Edge, GraphKind,
    PairwiseAnalysis, ScaleAnalysis, TemperamentReport, TriadAssessment, TriadQuality, WeightedGraph,
};
pub use config::{ModelConfig, WeightingMode};
pub use consonance::{assess_interval, match_partials, IntervalAssessment, MatchBand, PartialMatch, Reference};
pub use error::{Error, Result};
pub use export::{export_graph, export_matrix_csv, parse_graph, parse_matrix_csv, GraphFormat, MatrixCsv};
pub use spectral::{
    cents, classify_gap, harmonic_spectrum, phasor_sum, render_waveform, Partial, PerceptualClass, PhasedSpectrum,
    PhasorComponent, Spectrum, Waveform,
};
pub use temperament::{build_scale, pitch_frequency, reference_intervals, Scale, ScaleKind, PITCH_NAMES};
