//! Run configuration: defaults, then a TOML key/value file, then flags.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use consonoscope::temperament::DEFAULT_BASE_FREQUENCY;
use consonoscope::{ModelConfig, WeightingMode};
use serde::Deserialize;

use crate::error::CliError;

pub const OUT_ENV: &str = "CONSONOSCOPE_OUT";
pub const DEFAULT_OUT_DIR: &str = "consonoscope-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputFormat {
    Csv,
    Json,
    Dot,
    Svg,
    WavPcm,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "dot" => Ok(Self::Dot),
            "svg" => Ok(Self::Svg),
            "wav" | "wav-pcm" => Ok(Self::WavPcm),
            other => Err(CliError::Usage(format!(
                "invalid value for `format`: unknown output format `{other}` (expected csv,json,dot,svg,wav-pcm)"
            ))),
        }
    }
}

pub fn parse_formats(list: &str) -> Result<BTreeSet<OutputFormat>, CliError> {
    let formats = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(OutputFormat::from_str)
        .collect::<Result<BTreeSet<_>, _>>()?;
    if formats.is_empty() {
        return Err(CliError::Usage("invalid value for `format`: at least one output format is required".into()));
    }
    Ok(formats)
}

/// Keys accepted in a configuration file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub base_freq: Option<f64>,
    pub decay: Option<f64>,
    pub partials: Option<usize>,
    pub fc: Option<f64>,
    pub fd: Option<f64>,
    pub cons_threshold: Option<f64>,
    pub diss_threshold: Option<f64>,
    pub hearing_min: Option<f64>,
    pub hearing_max: Option<f64>,
    pub mode: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl Settings {
    /// Values set in `other` replace ours.
    pub fn overlay(self, other: Settings) -> Settings {
        Settings {
            base_freq: other.base_freq.or(self.base_freq),
            decay: other.decay.or(self.decay),
            partials: other.partials.or(self.partials),
            fc: other.fc.or(self.fc),
            fd: other.fd.or(self.fd),
            cons_threshold: other.cons_threshold.or(self.cons_threshold),
            diss_threshold: other.diss_threshold.or(self.diss_threshold),
            hearing_min: other.hearing_min.or(self.hearing_min),
            hearing_max: other.hearing_max.or(self.hearing_max),
            mode: other.mode.or(self.mode),
            out: other.out.or(self.out),
            format: other.format.or(self.format),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub base_frequency: f64,
    pub out_dir: PathBuf,
    pub formats: BTreeSet<OutputFormat>,
}

impl RunConfig {
    pub fn wants(&self, f: OutputFormat) -> bool {
        self.formats.contains(&f)
    }
}

pub fn read_settings(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| {
        let key = e.span().and_then(|sp| key_at(&text, sp.start));
        let place = key.map(|k| format!(" (key `{k}`)")).unwrap_or_default();
        CliError::Usage(format!("config file {}{place}: {}", path.display(), e.message()))
    })
}

// The `key` of the `key = value` line holding byte `offset`.
fn key_at(text: &str, offset: usize) -> Option<&str> {
    let start = text[..offset.min(text.len())].rfind('\n').map_or(0, |i| i + 1);
    let line = text[start..].lines().next()?;
    let key = line.split_once('=')?.0.trim();
    (!key.is_empty()).then_some(key)
}

/// Resolves the effective configuration. `env_out` is the fallback output
/// directory used when neither the file nor the flags name one.
pub fn load_config(path: Option<&Path>, flags: Settings, env_out: Option<PathBuf>) -> Result<RunConfig, CliError> {
    let file = match path {
        Some(p) => read_settings(p)?,
        None => Settings::default(),
    };
    let s = file.overlay(flags);
    let d = ModelConfig::default();
    let weighting_mode = match &s.mode {
        Some(m) => m
            .parse::<WeightingMode>()
            .map_err(|_| CliError::Usage(format!("invalid value for `mode`: `{m}` (expected literal|proximity)")))?,
        None => d.weighting_mode,
    };
    let model = ModelConfig {
        max_partials: s.partials.unwrap_or(d.max_partials),
        decay_rate: s.decay.unwrap_or(d.decay_rate),
        f_c: s.fc.unwrap_or(d.f_c),
        f_d: s.fd.unwrap_or(d.f_d),
        hearing_min: s.hearing_min.unwrap_or(d.hearing_min),
        hearing_max: s.hearing_max.unwrap_or(d.hearing_max),
        consonance_threshold: s.cons_threshold.unwrap_or(d.consonance_threshold),
        dissonance_threshold: s.diss_threshold.unwrap_or(d.dissonance_threshold),
        weighting_mode,
    };
    model.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let base_frequency = s.base_freq.unwrap_or(DEFAULT_BASE_FREQUENCY);
    if !(base_frequency > 0.0 && base_frequency.is_finite()) {
        return Err(CliError::Usage(format!("invalid value for `base_freq`: must be positive, got {base_frequency}")));
    }
    let formats = parse_formats(s.format.as_deref().unwrap_or("csv,json,dot,svg"))?;
    let out_dir = s.out.or(env_out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    Ok(RunConfig { model, base_frequency, out_dir, formats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn empty_file_gives_defaults() {
        let f = file("");
        let c = load_config(Some(f.path()), Settings::default(), None).unwrap();
        assert_eq!(c.model, ModelConfig::default());
        assert_eq!(c.base_frequency, DEFAULT_BASE_FREQUENCY);
        assert_eq!(c.out_dir, PathBuf::from(DEFAULT_OUT_DIR));
        assert_eq!(c.formats.len(), 4);
    }

    #[test]
    fn fd_not_above_fc_names_key() {
        let f = file("fc = 20.0\nfd = 15.0\n");
        let err = load_config(Some(f.path()), Settings::default(), None).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("`fd`")), "{err}");
    }

    #[test]
    fn flags_win_over_file() {
        let f = file("decay = 0.1\npartials = 20\n");
        let flags = Settings { decay: Some(0.05), ..Default::default() };
        let c = load_config(Some(f.path()), flags, None).unwrap();
        assert_eq!(c.model.decay_rate, 0.05);
        assert_eq!(c.model.max_partials, 20);
    }

    #[test]
    fn unknown_key_rejected_by_name() {
        let f = file("decay = 0.1\nloudness = 3\n");
        let err = load_config(Some(f.path()), Settings::default(), None).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("loudness")), "{err}");
    }

    #[test]
    fn malformed_value_names_key() {
        let f = file("decay = \"fast\"\n");
        let err = load_config(Some(f.path()), Settings::default(), None).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("decay")), "{err}");
        let f = file("mode = \"loud\"\n");
        let err = load_config(Some(f.path()), Settings::default(), None).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("`mode`")), "{err}");
    }

    #[test]
    fn output_directory_precedence() {
        let env = Some(PathBuf::from("from-env"));
        let c = load_config(None, Settings::default(), env.clone()).unwrap();
        assert_eq!(c.out_dir, PathBuf::from("from-env"));
        let f = file("out = \"from-file\"\n");
        let c = load_config(Some(f.path()), Settings::default(), env.clone()).unwrap();
        assert_eq!(c.out_dir, PathBuf::from("from-file"));
        let flags = Settings { out: Some("from-flag".into()), ..Default::default() };
        let c = load_config(Some(f.path()), flags, env).unwrap();
        assert_eq!(c.out_dir, PathBuf::from("from-flag"));
    }

    #[test]
    fn formats_parse() {
        let f = parse_formats("csv, svg,wav-pcm").unwrap();
        assert!(f.contains(&OutputFormat::WavPcm) && f.len() == 3);
        assert!(parse_formats("").is_err());
        assert!(parse_formats("csv,pdf").is_err());
    }
}
