//! The five tuning systems over one octave (C up to C2) and the reference
//! table of tonal intervals.
//!
//! | kind          | construction                                                  |
//! |---------------|---------------------------------------------------------------|
//! | equal         | `2^(k/12)`                                                    |
//! | pythagorean   | chain of pure 3/2 fifths, Eb..G#, tritone 729/512             |
//! | just major    | 5-limit ratios, minor seventh 9/5                             |
//! | mean-tone     | quarter-comma: fifth `5^(1/4)`, chain Eb..G#, wolf G#–Eb      |
//! | werckmeister  | Werckmeister III: C–G, G–D, D–A, B–F# narrowed by ¼ Pyth. comma |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PITCH_COUNT: usize = 13;

pub const PITCH_NAMES: [&str; PITCH_COUNT] =
    ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B", "C2"];

/// Equal-tempered C4 relative to A4 = 440 Hz.
pub const DEFAULT_BASE_FREQUENCY: f64 = 261.6256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleKind {
    EqualTemperament,
    Pythagorean,
    JustMajor,
    MeanTone,
    Werckmeister,
}

impl ScaleKind {
    pub const ALL: [ScaleKind; 5] = [
        ScaleKind::EqualTemperament,
        ScaleKind::Pythagorean,
        ScaleKind::JustMajor,
        ScaleKind::MeanTone,
        ScaleKind::Werckmeister,
    ];

    /// Short identifier used on the command line and in file names.
    pub fn slug(self) -> &'static str {
        match self {
            ScaleKind::EqualTemperament => "equal",
            ScaleKind::Pythagorean => "pythagorean",
            ScaleKind::JustMajor => "just",
            ScaleKind::MeanTone => "meantone",
            ScaleKind::Werckmeister => "werckmeister",
        }
    }

    /// Frequency ratios of the 13 pitches relative to C.
    pub fn ratios(self) -> [f64; PITCH_COUNT] {
        match self {
            ScaleKind::EqualTemperament => {
                std::array::from_fn(|k| if k == 12 { 2.0 } else { (k as f64 / 12.0).exp2() })
            }
            ScaleKind::Pythagorean => rational_table(&PYTHAGOREAN),
            ScaleKind::JustMajor => rational_table(&JUST_MAJOR),
            ScaleKind::MeanTone => meantone_ratios(),
            ScaleKind::Werckmeister => werckmeister_ratios(),
        }
    }

    /// Exact ratio as `(numerator, denominator)` for the rational tunings.
    pub fn exact_ratio(self, index: usize) -> Option<(u64, u64)> {
        match self {
            ScaleKind::Pythagorean => PYTHAGOREAN.get(index).copied(),
            ScaleKind::JustMajor => JUST_MAJOR.get(index).copied(),
            _ => None,
        }
    }
}

impl fmt::Display for ScaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for ScaleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', ' '], "-").as_str() {
            "equal" | "equal-temperament" | "et" => Ok(Self::EqualTemperament),
            "pythagorean" | "pyth" => Ok(Self::Pythagorean),
            "just" | "just-major" => Ok(Self::JustMajor),
            "meantone" | "mean-tone" => Ok(Self::MeanTone),
            "werckmeister" | "werckmeister-iii" => Ok(Self::Werckmeister),
            other => Err(Error::Usage(format!(
                "unknown scale `{other}` (expected equal|pythagorean|just|meantone|werckmeister)"
            ))),
        }
    }
}

const PYTHAGOREAN: [(u64, u64); PITCH_COUNT] = [
    (1, 1),
    (256, 243),
    (9, 8),
    (32, 27),
    (81, 64),
    (4, 3),
    (729, 512),
    (3, 2),
    (128, 81),
    (27, 16),
    (16, 9),
    (243, 128),
    (2, 1),
];

const JUST_MAJOR: [(u64, u64); PITCH_COUNT] = [
    (1, 1),
    (16, 15),
    (9, 8),
    (6, 5),
    (5, 4),
    (4, 3),
    (45, 32),
    (3, 2),
    (8, 5),
    (5, 3),
    (9, 5),
    (15, 8),
    (2, 1),
];

fn rational_table(table: &[(u64, u64); PITCH_COUNT]) -> [f64; PITCH_COUNT] {
    std::array::from_fn(|k| table[k].0 as f64 / table[k].1 as f64)
}

// Fifths from Eb (-3) up to G# (+8), folded into [1, 2).
fn meantone_ratios() -> [f64; PITCH_COUNT] {
    let fifth = 5f64.powf(0.25);
    let mut out = [0.0; PITCH_COUNT];
    for n in -3i32..=8 {
        let mut r = fifth.powi(n);
        while r >= 2.0 {
            r /= 2.0;
        }
        while r < 1.0 {
            r *= 2.0;
        }
        out[(7 * n).rem_euclid(12) as usize] = r;
    }
    out[0] = 1.0;
    out[12] = 2.0;
    out
}

fn werckmeister_ratios() -> [f64; PITCH_COUNT] {
    let q = 2f64.powf(0.25);
    [
        1.0,
        256.0 / 243.0,
        64.0 / 81.0 * 2f64.sqrt(),
        32.0 / 27.0,
        256.0 / 243.0 * q,
        4.0 / 3.0,
        1024.0 / 729.0,
        8.0 / 9.0 * q * q * q,
        128.0 / 81.0,
        1024.0 / 729.0 * q,
        16.0 / 9.0,
        128.0 / 81.0 * q,
        2.0,
    ]
}

/// A tuning system realized at a concrete base pitch for C.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    pub kind: ScaleKind,
    pub base_frequency: f64,
    pub frequencies: [f64; PITCH_COUNT],
}

impl Scale {
    pub fn pitch_names(&self) -> [&'static str; PITCH_COUNT] {
        PITCH_NAMES
    }
}

pub fn build_scale(kind: ScaleKind, base_frequency: f64) -> Result<Scale> {
    if !(base_frequency > 0.0 && base_frequency.is_finite()) {
        return Err(Error::Domain(format!("base frequency must be positive, got {base_frequency}")));
    }
    let ratios = kind.ratios();
    Ok(Scale { kind, base_frequency, frequencies: ratios.map(|r| base_frequency * r) })
}

/// Frequency of pitch `index` (0 = C .. 12 = C2) moved by whole octaves.
pub fn pitch_frequency(scale: &Scale, index: usize, octave_shift: i32) -> Result<f64> {
    let f = scale.frequencies.get(index).ok_or_else(|| {
        Error::Usage(format!("pitch index {index} out of range 0..={}", PITCH_COUNT - 1))
    })?;
    Ok(f * 2f64.powi(octave_shift))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsonanceClass {
    AbsoluteCons,
    PerfectCons,
    MediumCons,
    ImperfectCons,
    Dissonant,
}

/// A row of the tonal interval table, with the just ratio in ascending form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceInterval {
    pub name: &'static str,
    pub numerator: u64,
    pub denominator: u64,
    pub semitones: u8,
    pub class: ConsonanceClass,
}

impl ReferenceInterval {
    pub fn ratio(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    pub fn cents(&self) -> f64 {
        1200.0 * self.ratio().log2()
    }
}

pub fn reference_intervals() -> [ReferenceInterval; 13] {
    use ConsonanceClass::*;
    let row = |name, numerator, denominator, semitones, class| ReferenceInterval {
        name,
        numerator,
        denominator,
        semitones,
        class,
    };
    [
        row("unison", 1, 1, 0, AbsoluteCons),
        row("perfect octave", 2, 1, 12, AbsoluteCons),
        row("fifth", 3, 2, 7, PerfectCons),
        row("fourth", 4, 3, 5, MediumCons),
        row("major sixth", 5, 3, 9, MediumCons),
        row("major third", 5, 4, 4, MediumCons),
        row("minor third", 6, 5, 3, ImperfectCons),
        row("minor sixth", 8, 5, 8, ImperfectCons),
        row("major second", 9, 8, 2, Dissonant),
        row("major seventh", 15, 8, 11, Dissonant),
        row("minor seventh", 16, 9, 10, Dissonant),
        row("minor second", 16, 15, 1, Dissonant),
        row("tritone", 45, 32, 6, Dissonant),
    ]
}
