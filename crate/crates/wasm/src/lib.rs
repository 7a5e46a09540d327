//! Browser bindings. Each export takes plain numbers or strings and returns
//! JSON text or a sample buffer, so the page needs no generated glue types.

use consonoscope::export::fixed6;
use consonoscope::{
    assess_interval, build_scale, export_graph, harmonic_spectrum, render_waveform, scale_matrix, GraphFormat,
    GraphKind, MatchBand, ModelConfig, PhasedSpectrum, ScaleKind, Spectrum,
};
use serde::Serialize;
use serde_json::value::RawValue;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct MatchOut {
    band: MatchBand,
    delta_f: Box<RawValue>,
    other: Box<RawValue>,
    reference: Box<RawValue>,
    weight: Box<RawValue>,
}

#[derive(Serialize)]
struct IntervalOut {
    consonance: Box<RawValue>,
    dissonance: Box<RawValue>,
    is_consonant: bool,
    is_dissonant: bool,
    matches: Vec<MatchOut>,
}

fn model(decay: f64, partials: u32) -> Result<ModelConfig, String> {
    let cfg = ModelConfig { decay_rate: decay, max_partials: partials as usize, ..ModelConfig::default() };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Assessment of two harmonic tones, with every matched partial pair.
pub fn interval_report(f1: f64, f2: f64, decay: f64, partials: u32) -> Result<String, String> {
    let cfg = model(decay, partials)?;
    let a = harmonic_spectrum(f1, &cfg).map_err(|e| e.to_string())?;
    let b = harmonic_spectrum(f2, &cfg).map_err(|e| e.to_string())?;
    let r = assess_interval(&a, &b, &cfg);
    let out = IntervalOut {
        consonance: fixed6(r.consonance),
        dissonance: fixed6(r.dissonance),
        is_consonant: r.is_consonant,
        is_dissonant: r.is_dissonant,
        matches: r
            .matches
            .iter()
            .map(|m| MatchOut {
                band: m.band,
                delta_f: fixed6(m.delta_f),
                other: fixed6(m.other_frequency),
                reference: fixed6(m.ref_frequency),
                weight: fixed6(m.magnitude_product),
            })
            .collect(),
    };
    Ok(serde_json::to_string(&out).expect("serializable"))
}

/// Sum of two unit cosines.
pub fn beat_samples(f1: f64, f2: f64, duration: f64, sample_rate: f64) -> Result<Vec<f64>, String> {
    let a = Spectrum::from_pairs(f1, &[(f1, 1.0)]).map_err(|e| e.to_string())?;
    let b = Spectrum::from_pairs(f2, &[(f2, 1.0)]).map_err(|e| e.to_string())?;
    render_waveform(&[PhasedSpectrum::zero_phase(&a), PhasedSpectrum::zero_phase(&b)], duration, sample_rate, 0.0)
        .map(|w| w.samples)
        .map_err(|e| e.to_string())
}

/// Consonance or dissonance graph of a scale, in the JSON graph format.
pub fn scale_graph(scale: &str, kind: &str, threshold: f64, base_frequency: f64) -> Result<String, String> {
    let scale_kind: ScaleKind = scale.parse().map_err(|e: consonoscope::Error| e.to_string())?;
    let graph_kind: GraphKind = kind.parse().map_err(|e: consonoscope::Error| e.to_string())?;
    let cfg = ModelConfig { consonance_threshold: threshold, dissonance_threshold: threshold, ..ModelConfig::default() };
    cfg.validate().map_err(|e| e.to_string())?;
    let s = build_scale(scale_kind, base_frequency).map_err(|e| e.to_string())?;
    let analysis = scale_matrix(&s, &cfg).map_err(|e| e.to_string())?;
    Ok(export_graph(&analysis.graph(graph_kind), GraphFormat::Json))
}

#[wasm_bindgen(js_name = intervalReport)]
pub fn interval_report_js(f1: f64, f2: f64, decay: f64, partials: u32) -> Result<String, JsValue> {
    interval_report(f1, f2, decay, partials).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = beatSamples)]
pub fn beat_samples_js(f1: f64, f2: f64, duration: f64, sample_rate: f64) -> Result<Vec<f64>, JsValue> {
    beat_samples(f1, f2, duration, sample_rate).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = scaleGraph)]
pub fn scale_graph_js(scale: &str, kind: &str, threshold: f64, base_frequency: f64) -> Result<String, JsValue> {
    scale_graph(scale, kind, threshold, base_frequency).map_err(|e| JsValue::from_str(&e))
}
