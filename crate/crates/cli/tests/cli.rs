use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use consonoscope::{parse_graph, parse_matrix_csv, GraphFormat, GraphKind};
use serde_json::Value;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_consonoscope"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("CONSONOSCOPE_OUT")
        .output()
        .expect("binary runs")
}

fn ok(out: &Path, args: &[&str]) -> Output {
    let o = run(out, args);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    o
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn interval_prints_and_writes_the_assessment() {
    let dir = tempfile::tempdir().unwrap();
    let o = ok(dir.path(), &["interval", "440", "880"]);
    let stdout: Value = serde_json::from_slice(&o.stdout).unwrap();
    let file = json(dir.path(), "interval.json");
    assert_eq!(stdout, file);
    assert!((num(&file["cents"]) - 1200.0).abs() < 1e-6);
    assert!(num(&file["consonance"]) > 0.0);
    assert_eq!(num(&file["dissonance"]), 0.0);
    assert!(file["is_consonant"].is_boolean() && file["is_dissonant"].is_boolean());
    assert_eq!(file["mode"], "proximity");
}

#[test]
fn interval_octave_beats_tritone() {
    let dir = tempfile::tempdir().unwrap();
    let c = |f2: &str| {
        let o = ok(dir.path(), &["--format", "json", "interval", "440", f2]);
        num(&serde_json::from_slice::<Value>(&o.stdout).unwrap()["consonance"])
    };
    assert!(c("880") > c("622.254"));
}

#[test]
fn scale_emits_matrices_bipartite_chart_and_graphs() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["--fc", "20", "--fd", "80", "--cons-threshold", "0.5", "scale", "just"]);
    let m = parse_matrix_csv(&read(dir.path(), "scale-just-matrix.csv")).unwrap();
    assert_eq!(m.labels.len(), 13);
    for i in 0..13 {
        for j in 0..13 {
            assert_eq!(m.consonance[i][j], m.consonance[j][i]);
        }
    }
    // The fifth C–G outscores the semitone C–C#.
    assert!(m.consonance[0][7] > m.consonance[0][1]);
    let svg = read(dir.path(), "scale-just.svg");
    assert!(svg.starts_with("<svg") && svg.contains("<line"));
    let dot = parse_graph(&read(dir.path(), "scale-just-consonance.dot"), GraphFormat::Dot).unwrap();
    let js = parse_graph(&read(dir.path(), "scale-just-consonance.json"), GraphFormat::Json).unwrap();
    assert_eq!(dot, js);
    assert_eq!(dot.kind, GraphKind::Consonance);
    assert!(!dot.edges.is_empty());
    assert!(dir.path().join("scale-just-dissonance.dot").exists());
}

#[test]
fn graphs_emit_both_kinds_in_every_requested_format() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["--cons-threshold", "0.5", "--diss-threshold", "0.5", "graphs", "equal"]);
    for kind in ["consonance", "dissonance"] {
        let stem = format!("graph-equal-{kind}");
        let d = parse_graph(&read(dir.path(), &format!("{stem}.dot")), GraphFormat::Dot).unwrap();
        let j = parse_graph(&read(dir.path(), &format!("{stem}.json")), GraphFormat::Json).unwrap();
        assert_eq!(d, j);
        assert_eq!(d.nodes.len(), 13);
        assert!(read(dir.path(), &format!("{stem}.svg")).contains("</svg>"));
    }
}

#[test]
fn format_flag_limits_outputs() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["--format", "dot", "graphs", "pythagorean"]);
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["graph-pythagorean-consonance.dot", "graph-pythagorean-dissonance.dot"]);
}

#[test]
fn triads_csv_has_every_temperament_and_root() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["triads"]);
    let csv = read(dir.path(), "triads.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("temperament,quality,root,consonance,dissonance"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 120);
    for r in &rows {
        assert_eq!(r.len(), 5);
        assert!(r[3].parse::<f64>().unwrap() >= 0.0);
    }
    let score = |t: &str, q: &str, root: &str| {
        rows.iter().find(|r| r[0] == t && r[1] == q && r[2] == root).unwrap()[3].parse::<f64>().unwrap()
    };
    assert!(score("just", "major", "C") > score("meantone", "major", "C#"));
    let js = json(dir.path(), "triads.json");
    assert_eq!(js.as_array().unwrap().len(), 120);
    assert!(read(dir.path(), "triads.svg").contains("<rect"));
}

#[test]
fn beats_envelope_repeats_every_tenth_of_a_second() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["--format", "csv,json,svg,wav-pcm", "beats", "440", "450"]);
    let j = json(dir.path(), "beats.json");
    assert!((num(&j["measured_period"]) - 0.1).abs() <= 1.0 / 44_100.0);
    let times: Vec<f64> = j["peak_times"].as_array().unwrap().iter().map(num).collect();
    assert!(times.len() >= 8);
    for w in times.windows(2) {
        assert!((w[1] - w[0] - 0.1).abs() <= 1.0 / 44_100.0 + 1e-6);
    }
    let csv = read(dir.path(), "beats.csv");
    assert_eq!(csv.lines().count(), 44_101);
    assert_eq!(csv.lines().nth(1), Some("0.000000,2.000000"));
    let reader = hound::WavReader::open(dir.path().join("beats.wav")).unwrap();
    assert_eq!(reader.spec().sample_rate, 44_100);
    assert_eq!(reader.len(), 44_100);
    assert!(read(dir.path(), "beats.svg").contains("<polyline"));
}

#[test]
fn amp_writes_one_set_per_bias() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["amp"]);
    for tag in ["0", "1", "2.5", "4", "10", "50"] {
        let spectrum = read(dir.path(), &format!("amp-bias-{tag}-spectrum.csv"));
        assert!(spectrum.starts_with("frequency,amplitude\n"));
        let d = parse_graph(&read(dir.path(), &format!("amp-bias-{tag}-consonance.dot")), GraphFormat::Dot).unwrap();
        let j = parse_graph(&read(dir.path(), &format!("amp-bias-{tag}-consonance.json")), GraphFormat::Json).unwrap();
        assert_eq!(d, j);
        assert_eq!(d.nodes, ["C", "E", "G"]);
        assert!(read(dir.path(), &format!("amp-bias-{tag}-waveform.svg")).contains("<polyline"));
    }
    let sweep = json(dir.path(), "amp-sweep.json");
    let entries = sweep["sweep"].as_array().unwrap();
    assert_eq!(entries.len(), 6);
    let lin: Vec<f64> = entries.iter().map(|e| num(&e["linearity"])).collect();
    assert!(lin.windows(2).all(|w| w[0] <= w[1]));
    assert!(lin[5] > 0.999);
    // No linear term without bias: nothing at the input frequencies.
    let zero = read(dir.path(), "amp-bias-0-spectrum.csv");
    assert!(!zero.lines().any(|l| l.starts_with("261.625600,")));
    assert_eq!(read(dir.path(), "amp-linearity.csv").lines().count(), 7);
}

#[test]
fn amp_accepts_a_custom_bias_list() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["--format", "json", "amp", "--biases", "0.5,3"]);
    let sweep = json(dir.path(), "amp-sweep.json");
    let biases: Vec<f64> = sweep["sweep"].as_array().unwrap().iter().map(|e| num(&e["bias"])).collect();
    assert_eq!(biases, [0.5, 3.0]);
}

#[test]
fn decay_profile_follows_the_exponential() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["--decay", "0.1", "decay"]);
    let csv = read(dir.path(), "decay.csv");
    let rows: Vec<Vec<f64>> =
        csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 50);
    for r in &rows {
        assert_eq!(r[1], r[0]);
        assert!((r[2] - (-0.1 * (r[0] - 1.0)).exp()).abs() < 1e-6);
    }
    assert!(read(dir.path(), "decay.svg").contains("<circle"));
    assert_eq!(json(dir.path(), "decay.json").as_array().unwrap().len(), 50);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        ok(dir, &["scale", "werckmeister"]);
        ok(dir, &["triads"]);
        ok(dir, &["amp", "--biases", "1,10"]);
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() > 10);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["interval", "440"][..],
        &["scale", "lydian"],
        &["--mode", "loud", "decay"],
        &["--fc", "70", "decay"],
        &["--format", "png", "decay"],
        &["interval", "0", "440"],
        &["bogus"],
    ] {
        let o = run(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn computation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // 30 kHz has no partial inside the hearing band.
    let o = run(dir.path(), &["interval", "30000", "440"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    // The output directory cannot be created beneath a regular file.
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    let o = run(&file.join("sub"), &["decay"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "decay = 0.1\npartials = 10\nformat = \"csv\"\n").unwrap();
    ok(dir.path(), &["--config", cfg.to_str().unwrap(), "--decay", "0.05", "decay"]);
    let csv = read(dir.path(), "decay.csv");
    assert_eq!(csv.lines().count(), 11);
    let second: f64 = csv.lines().nth(2).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((second - (-0.05f64).exp()).abs() < 1e-6);
    assert!(!dir.path().join("decay.svg").exists());
}

#[test]
fn bad_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "fc = 50\nfd = 40\n").unwrap();
    let o = run(dir.path(), &["--config", cfg.to_str().unwrap(), "decay"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fd"));
    fs::write(&cfg, "loudness = 3\n").unwrap();
    let o = run(dir.path(), &["--config", cfg.to_str().unwrap(), "decay"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("loudness"));
}

#[test]
fn environment_supplies_the_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_consonoscope"))
        .args(["--format", "csv", "decay"])
        .env("CONSONOSCOPE_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("decay.csv").exists());
}
