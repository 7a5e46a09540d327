//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the library's scoring or matching code.

#![allow(dead_code)]

pub struct OracleParams {
    pub max_partials: usize,
    pub decay: f64,
    pub f_c: f64,
    pub f_d: f64,
    pub band: (f64, f64),
    pub literal: bool,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self { max_partials: 50, decay: 0.08, f_c: 10.0, f_d: 60.0, band: (20.0, 20_000.0), literal: false }
    }
}

/// `(frequency, magnitude)` of every audible harmonic.
pub fn naive_harmonics(f0: f64, p: &OracleParams) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..=p.max_partials {
        let f = f0 * i as f64;
        if f >= p.band.0 && f <= p.band.1 {
            out.push((f, (-p.decay * (i as f64 - 1.0)).exp()));
        }
    }
    out
}

/// Full double loop over both partial sets.
pub fn naive_scores(x: &[(f64, f64)], y: &[(f64, f64)], p: &OracleParams) -> (f64, f64) {
    let (reference, other) = if y[0].0 < x[0].0 { (y, x) } else { (x, y) };
    let mut cons = 0.0;
    let mut diss = 0.0;
    for &(fi, mi) in reference {
        let mut best = f64::INFINITY;
        let mut best_m = 0.0;
        for &(fj, mj) in other {
            let d = (fj - fi).abs();
            if d < best {
                best = d;
                best_m = mj;
            }
        }
        let w = mi * best_m;
        if best < p.f_c {
            cons += w * if p.literal { best } else { (p.f_c - best) / p.f_c };
        } else if best < p.f_d {
            diss += w * if p.literal { best } else { (p.f_d - best) / (p.f_d - p.f_c) };
        }
    }
    (cons, diss)
}

pub fn naive_pair(f1: f64, f2: f64, p: &OracleParams) -> (f64, f64) {
    naive_scores(&naive_harmonics(f1, p), &naive_harmonics(f2, p), p)
}

/// `Σ aᵢ·cos(2π·fᵢ·t + φᵢ)` sampled directly.
pub fn sample_cosines(components: &[(f64, f64, f64)], t: f64) -> f64 {
    components.iter().map(|&(f, a, ph)| a * (std::f64::consts::TAU * f * t + ph).cos()).sum()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Prints one result line and reports whether the criterion held.
pub fn report(id: &str, title: &str, pass: bool, detail: impl AsRef<str>) -> bool {
    println!("[{}] {id}: {title} ({})", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    pass
}
