//! One function per subcommand. Each writes its files under the configured
//! output directory and returns the paths it wrote, in write order.

use std::fs;
use std::path::{Path, PathBuf};

use consonoscope::amp::{bias_sweep, just_triad_input, AmplifierConfig, SweepEntry, Tone};
use consonoscope::export::fixed6;
use consonoscope::spectral::envelope_peaks;
use consonoscope::{
    assess_interval, build_scale, cents, export_graph, export_matrix_csv, harmonic_spectrum,
    render_waveform, scale_matrix, temperament_report, GraphFormat, GraphKind, MatchBand, PhasedSpectrum,
    ScaleKind, Spectrum, TriadQuality, WeightingMode, PITCH_NAMES,
};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::svg::{self, Series, Style, BLUE, RED};

/// Envelope maxima below this fraction of the loudest one are ignored.
const ENVELOPE_FLOOR: f64 = 0.5;
/// Amplifier waveform plots show only the start of the buffer.
const WAVEFORM_PLOT_SECONDS: f64 = 0.02;

pub struct Emitter<'a> {
    cfg: &'a RunConfig,
    written: Vec<PathBuf>,
}

impl<'a> Emitter<'a> {
    pub fn new(cfg: &'a RunConfig) -> Result<Self, CliError> {
        fs::create_dir_all(&cfg.out_dir)
            .map_err(|e| CliError::Compute(format!("cannot create {}: {e}", cfg.out_dir.display())))?;
        Ok(Self { cfg, written: Vec::new() })
    }

    fn emit(&mut self, format: OutputFormat, name: &str, body: impl FnOnce() -> Vec<u8>) -> Result<(), CliError> {
        if !self.cfg.wants(format) {
            return Ok(());
        }
        let path = self.cfg.out_dir.join(name);
        fs::write(&path, body()).map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    fn text(&mut self, format: OutputFormat, name: &str, body: impl FnOnce() -> String) -> Result<(), CliError> {
        self.emit(format, name, || body().into_bytes())
    }

    fn graph(&mut self, stem: &str, graph: &consonoscope::WeightedGraph) -> Result<(), CliError> {
        self.text(OutputFormat::Dot, &format!("{stem}.dot"), || export_graph(graph, GraphFormat::Dot))?;
        self.text(OutputFormat::Json, &format!("{stem}.json"), || export_graph(graph, GraphFormat::Json))
    }

    pub fn finish(self) -> Vec<PathBuf> {
        self.written
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn mode_name(mode: WeightingMode) -> &'static str {
    match mode {
        WeightingMode::Literal => "literal",
        WeightingMode::Proximity => "proximity",
    }
}

fn check_frequency(name: &str, f: f64) -> Result<(), CliError> {
    if f > 0.0 && f.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("invalid value for `{name}`: frequency must be positive, got {f}")))
    }
}

// ---------------------------------------------------------------- interval

#[derive(Serialize)]
struct IntervalJson {
    cents: Box<RawValue>,
    consonance: Box<RawValue>,
    consonant_matches: usize,
    dissonance: Box<RawValue>,
    dissonant_matches: usize,
    f1: Box<RawValue>,
    f2: Box<RawValue>,
    is_consonant: bool,
    is_dissonant: bool,
    mode: &'static str,
    neutral_matches: usize,
}

/// Returns the JSON document, which is also printed to stdout.
pub fn interval(cfg: &RunConfig, f1: f64, f2: f64, out: &mut Emitter<'_>) -> Result<String, CliError> {
    check_frequency("f1", f1)?;
    check_frequency("f2", f2)?;
    let a = harmonic_spectrum(f1, &cfg.model)?;
    let b = harmonic_spectrum(f2, &cfg.model)?;
    let r = assess_interval(&a, &b, &cfg.model);
    let doc = to_json(&IntervalJson {
        cents: fixed6(cents(f1.min(f2), f1.max(f2))?),
        consonance: fixed6(r.consonance),
        consonant_matches: r.count(MatchBand::Consonant),
        dissonance: fixed6(r.dissonance),
        dissonant_matches: r.count(MatchBand::Dissonant),
        f1: fixed6(f1),
        f2: fixed6(f2),
        is_consonant: r.is_consonant,
        is_dissonant: r.is_dissonant,
        mode: mode_name(cfg.model.weighting_mode),
        neutral_matches: r.count(MatchBand::Neutral),
    });
    out.text(OutputFormat::Json, "interval.json", || doc.clone())?;
    Ok(doc)
}

// ---------------------------------------------------------------- scale / graphs

pub fn scale(cfg: &RunConfig, kind: ScaleKind, out: &mut Emitter<'_>) -> Result<(), CliError> {
    let s = build_scale(kind, cfg.base_frequency)?;
    let analysis = scale_matrix(&s, &cfg.model)?;
    let slug = kind.slug();
    out.text(OutputFormat::Csv, &format!("scale-{slug}-matrix.csv"), || export_matrix_csv(&analysis.pairs))?;
    out.text(OutputFormat::Svg, &format!("scale-{slug}.svg"), || {
        svg::bipartite(&format!("{slug} scale: pairwise scores"), &analysis.pairs)
    })?;
    for gk in [GraphKind::Consonance, GraphKind::Dissonance] {
        out.graph(&format!("scale-{slug}-{}", gk.name()), &analysis.graph(gk))?;
    }
    Ok(())
}

pub fn graphs(cfg: &RunConfig, kind: ScaleKind, out: &mut Emitter<'_>) -> Result<(), CliError> {
    let s = build_scale(kind, cfg.base_frequency)?;
    let analysis = scale_matrix(&s, &cfg.model)?;
    let slug = kind.slug();
    for (gk, color) in [(GraphKind::Consonance, BLUE), (GraphKind::Dissonance, RED)] {
        let g = analysis.graph(gk);
        let stem = format!("graph-{slug}-{}", gk.name());
        out.graph(&stem, &g)?;
        out.text(OutputFormat::Svg, &format!("{stem}.svg"), || {
            svg::circle_graph(&format!("{slug} scale: {} graph", gk.name()), &g, color)
        })?;
    }
    Ok(())
}

// ---------------------------------------------------------------- triads

#[derive(Serialize)]
struct TriadJson {
    consonance: Box<RawValue>,
    dissonance: Box<RawValue>,
    quality: &'static str,
    root: &'static str,
    temperament: &'static str,
}

pub fn triads(cfg: &RunConfig, out: &mut Emitter<'_>) -> Result<(), CliError> {
    let report = temperament_report(cfg.base_frequency, &cfg.model)?;
    out.text(OutputFormat::Csv, "triads.csv", || report.to_csv())?;
    out.text(OutputFormat::Json, "triads.json", || {
        let rows: Vec<TriadJson> = report
            .entries
            .iter()
            .flat_map(|e| {
                e.triads.iter().map(|t| TriadJson {
                    consonance: fixed6(t.total_consonance),
                    dissonance: fixed6(t.total_dissonance),
                    quality: t.quality.name(),
                    root: t.root_name(),
                    temperament: e.analysis.scale.kind.slug(),
                })
            })
            .collect();
        to_json(&rows)
    })?;
    out.text(OutputFormat::Svg, "triads.svg", || {
        let rows: Vec<String> = PITCH_NAMES[..12].iter().map(|s| s.to_string()).collect();
        let groups: Vec<svg::HeatGroup<'_>> = TriadQuality::BOTH
            .iter()
            .map(|&q| {
                let cols: Vec<String> = report.entries.iter().map(|e| e.analysis.scale.kind.slug().to_string()).collect();
                let values: Vec<Vec<f64>> = (0..12)
                    .map(|root| {
                        report
                            .entries
                            .iter()
                            .map(|e| e.triads_of(q).find(|t| t.root_index == root).map_or(0.0, |t| t.total_consonance))
                            .collect()
                    })
                    .collect();
                (q.name(), cols, values)
            })
            .collect();
        svg::heatmap("Triad consonance by root and temperament", &rows, &groups)
    })
}

// ---------------------------------------------------------------- beats

#[derive(Serialize)]
struct BeatsJson {
    aliased: bool,
    expected_period: Box<RawValue>,
    f1: Box<RawValue>,
    f2: Box<RawValue>,
    measured_period: Option<Box<RawValue>>,
    peak_times: Vec<Box<RawValue>>,
    sample_rate: Box<RawValue>,
}

pub struct BeatsSummary {
    pub peak_times: Vec<f64>,
    pub measured_period: Option<f64>,
}

pub fn beats(f1: f64, f2: f64, duration: f64, sample_rate: f64, out: &mut Emitter<'_>) -> Result<BeatsSummary, CliError> {
    check_frequency("f1", f1)?;
    check_frequency("f2", f2)?;
    let a = Spectrum::from_pairs(f1, &[(f1, 1.0)])?;
    let b = Spectrum::from_pairs(f2, &[(f2, 1.0)])?;
    let wave = render_waveform(&[PhasedSpectrum::zero_phase(&a), PhasedSpectrum::zero_phase(&b)], duration, sample_rate, 0.0)?;
    let peaks = envelope_peaks(&wave.samples, ENVELOPE_FLOOR);
    let peak_times: Vec<f64> = peaks.iter().map(|&k| wave.time(k)).collect();
    let measured_period = (peaks.len() >= 2)
        .then(|| (peaks[peaks.len() - 1] - peaks[0]) as f64 / (peaks.len() - 1) as f64 / sample_rate);

    out.text(OutputFormat::Csv, "beats.csv", || {
        let mut s = String::from("time,amplitude\n");
        for (k, x) in wave.samples.iter().enumerate() {
            s.push_str(&format!("{:.6},{:.6}\n", wave.time(k), x));
        }
        s
    })?;
    out.text(OutputFormat::Svg, "beats.svg", || {
        let pts: Vec<(f64, f64)> = wave.samples.iter().enumerate().map(|(k, &x)| (wave.time(k), x)).collect();
        svg::plot(
            &format!("{f1} Hz + {f2} Hz"),
            "time (s)",
            "amplitude",
            &[Series { name: "sum", points: &pts, color: BLUE }],
            Style::Line,
        )
    })?;
    out.text(OutputFormat::Json, "beats.json", || {
        to_json(&BeatsJson {
            aliased: wave.aliased,
            expected_period: fixed6(if f1 == f2 { 0.0 } else { 1.0 / (f1 - f2).abs() }),
            f1: fixed6(f1),
            f2: fixed6(f2),
            measured_period: measured_period.map(fixed6),
            peak_times: peak_times.iter().map(|&t| fixed6(t)).collect(),
            sample_rate: fixed6(sample_rate),
        })
    })?;
    out.emit(OutputFormat::WavPcm, "beats.wav", || wav_bytes(&wave.samples, sample_rate))?;
    Ok(BeatsSummary { peak_times, measured_period })
}

/// 16-bit mono PCM, peak-normalized.
fn wav_bytes(samples: &[f64], sample_rate: f64) -> Vec<u8> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: sample_rate.round() as u32,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let peak = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = if peak > 0.0 { f64::from(i16::MAX) / peak } else { 0.0 };
    let mut cursor = std::io::Cursor::new(Vec::new());
    {
        let mut w = hound::WavWriter::new(&mut cursor, spec).expect("in-memory wav header");
        for &x in samples {
            w.write_sample((x * scale).round() as i16).expect("in-memory wav write");
        }
        w.finalize().expect("in-memory wav finalize");
    }
    cursor.into_inner()
}

// ---------------------------------------------------------------- amp

#[derive(Serialize)]
struct LineJson {
    amplitude: Box<RawValue>,
    frequency: Box<RawValue>,
}

#[derive(Serialize)]
struct SweepJson {
    bias: Box<RawValue>,
    consonance_weight: Box<RawValue>,
    dc: Box<RawValue>,
    distortion_ratio: Box<RawValue>,
    linearity: Box<RawValue>,
    partials: Vec<LineJson>,
}

#[derive(Serialize)]
struct AmpJson {
    input: Vec<ToneJson>,
    sweep: Vec<SweepJson>,
}

#[derive(Serialize)]
struct ToneJson {
    amplitude: Box<RawValue>,
    frequency: Box<RawValue>,
    label: String,
}

/// File-name token for a bias: `2.5` → `2.5`, `50` → `50`.
pub fn bias_token(b: f64) -> String {
    format!("{b}")
}

pub fn amp(cfg: &RunConfig, biases: Vec<f64>, out: &mut Emitter<'_>) -> Result<Vec<SweepEntry>, CliError> {
    let input = just_triad_input(cfg.base_frequency)?;
    let amp_cfg = AmplifierConfig { biases_sweep: biases, ..AmplifierConfig::default() };
    let sweep = bias_sweep(&input, &amp_cfg, &cfg.model)?;
    for e in &sweep {
        let tag = bias_token(e.bias);
        out.text(OutputFormat::Csv, &format!("amp-bias-{tag}-spectrum.csv"), || {
            let mut s = String::from("frequency,amplitude\n");
            s.push_str(&format!("{:.6},{:.6}\n", 0.0, e.spectrum.dc));
            for p in &e.spectrum.partials {
                s.push_str(&format!("{:.6},{:.6}\n", p.frequency, p.magnitude));
            }
            s
        })?;
        out.graph(&format!("amp-bias-{tag}-consonance"), &e.graph)?;
        out.text(OutputFormat::Svg, &format!("amp-bias-{tag}-waveform.svg"), || waveform_svg(&input, e, &amp_cfg))?;
    }
    out.text(OutputFormat::Json, "amp-sweep.json", || {
        let doc = AmpJson {
            input: input
                .iter()
                .map(|t| ToneJson { amplitude: fixed6(t.amplitude), frequency: fixed6(t.frequency), label: t.label.clone() })
                .collect(),
            sweep: sweep
                .iter()
                .map(|e| SweepJson {
                    bias: fixed6(e.bias),
                    consonance_weight: fixed6(e.graph.total_weight()),
                    dc: fixed6(e.spectrum.dc),
                    distortion_ratio: fixed6(e.distortion_ratio(&input).unwrap_or(f64::INFINITY)),
                    linearity: fixed6(e.linearity),
                    partials: e
                        .spectrum
                        .partials
                        .iter()
                        .map(|p| LineJson { amplitude: fixed6(p.magnitude), frequency: fixed6(p.frequency) })
                        .collect(),
                })
                .collect(),
        };
        to_json(&doc)
    })?;
    out.text(OutputFormat::Csv, "amp-linearity.csv", || {
        let mut s = String::from("bias,linearity,distortion_ratio\n");
        for e in &sweep {
            let d = e.distortion_ratio(&input).unwrap_or(f64::INFINITY);
            s.push_str(&format!("{:.6},{:.6},{:.6}\n", e.bias, e.linearity, d));
        }
        s
    })?;
    out.text(OutputFormat::Svg, "amp-linearity.svg", || {
        let pts: Vec<(f64, f64)> = sweep.iter().map(|e| (e.bias, e.linearity)).collect();
        svg::plot("Linearity against bias", "bias", "correlation with input", &[Series { name: "linearity", points: &pts, color: BLUE }], Style::Stem)
    })?;
    Ok(sweep)
}

// Input and squared output, each scaled to unit peak so the shapes compare.
fn waveform_svg(input: &[Tone], e: &SweepEntry, amp: &AmplifierConfig) -> String {
    let pairs: Vec<(f64, f64)> = input.iter().map(|t| (t.frequency, t.amplitude)).collect();
    let dur = WAVEFORM_PLOT_SECONDS.min(amp.duration);
    let clean = consonoscope::amp::render_input(&pairs, 0.0, dur, amp.sample_rate).expect("validated input");
    let output = e.spectrum.render(dur, amp.sample_rate).expect("validated input");
    let unit = |xs: &[f64]| -> Vec<(f64, f64)> {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let peak = xs.iter().fold(0.0f64, |m, x| m.max((x - mean).abs()));
        let k = if peak > 0.0 { 1.0 / peak } else { 0.0 };
        xs.iter().enumerate().map(|(i, x)| (i as f64 / amp.sample_rate, (x - mean) * k)).collect()
    };
    let (a, b) = (unit(&clean.samples), unit(&output.samples));
    svg::plot(
        &format!("bias {}: input and squared output", bias_token(e.bias)),
        "time (s)",
        "normalized amplitude",
        &[Series { name: "input", points: &a, color: BLUE }, Series { name: "output", points: &b, color: RED }],
        Style::Line,
    )
}

// ---------------------------------------------------------------- decay

pub fn decay(cfg: &RunConfig, out: &mut Emitter<'_>) -> Result<(), CliError> {
    let model = cfg.model.without_hearing_band();
    let s = harmonic_spectrum(1.0, &model)?;
    out.text(OutputFormat::Csv, "decay.csv", || {
        let mut t = String::from("index,frequency,magnitude\n");
        for p in s.partials() {
            t.push_str(&format!("{},{:.6},{:.6}\n", p.index, p.frequency, p.magnitude));
        }
        t
    })?;
    out.text(OutputFormat::Svg, "decay.svg", || {
        let pts: Vec<(f64, f64)> = s.partials().iter().map(|p| (p.frequency, p.magnitude)).collect();
        svg::plot(
            &format!("Harmonic magnitudes, decay {}", cfg.model.decay_rate),
            "frequency (multiples of f0)",
            "magnitude",
            &[Series { name: "partials", points: &pts, color: BLUE }],
            Style::Stem,
        )
    })?;
    out.text(OutputFormat::Json, "decay.json", || {
        let lines: Vec<LineJson> =
            s.partials().iter().map(|p| LineJson { amplitude: fixed6(p.magnitude), frequency: fixed6(p.frequency) }).collect();
        to_json(&lines)
    })
}

pub fn relative(dir: &Path, p: &Path) -> String {
    p.strip_prefix(dir).unwrap_or(p).display().to_string()
}
