//! Exact relative spectrum of two anyons in a harmonic trap and the
//! quantities built from it (ħ = ω = 1, ℰ = E/ħω).

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Tolerance for grouping equal energies.
pub const LEVEL_GROUPING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactLine {
    pub n: u32,
    pub j: i64,
    pub alpha_q: f64,
    pub energy: f64,
}

fn check_alpha(alpha_q: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha_q) {
        return Err(invalid(format!("α_q must lie in [0, 1), got {alpha_q}")));
    }
    Ok(())
}

/// `2n + |j − α_q| + 1`.
pub fn exact_energy(n: u32, j: i64, alpha_q: f64) -> f64 {
    2.0 * f64::from(n) + (j as f64 - alpha_q).abs() + 1.0
}

pub fn exact_lines(e_max: f64, alpha_q: f64) -> Result<Vec<ExactLine>> {
    check_alpha(alpha_q)?;
    if !(e_max >= 1.0) {
        return Err(invalid(format!("E_max must be at least 1, got {e_max}")));
    }
    let reach = e_max - 1.0;
    let j_lo = (alpha_q - reach).ceil() as i64;
    let j_hi = (alpha_q + reach).floor() as i64;
    let mut out = Vec::new();
    for j in j_lo..=j_hi {
        let base = (j as f64 - alpha_q).abs() + 1.0;
        let mut n = 0u32;
        while base + 2.0 * f64::from(n) <= e_max + LEVEL_GROUPING_TOL {
            out.push(ExactLine {
                n,
                j,
                alpha_q,
                energy: exact_energy(n, j, alpha_q),
            });
            n += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralLevel {
    pub energy: f64,
    pub degeneracy: u64,
}

/// Brute-force spectrum up to `e_max`, equal energies merged.
pub fn enumerate_spectrum(e_max: f64, alpha_q: f64) -> Result<Vec<SpectralLevel>> {
    let mut energies: Vec<f64> = exact_lines(e_max, alpha_q)?
        .into_iter()
        .map(|l| l.energy)
        .collect();
    energies.sort_by(f64::total_cmp);
    let mut levels: Vec<SpectralLevel> = Vec::new();
    for e in energies {
        match levels.last_mut() {
            Some(last) if (e - last.energy).abs() <= LEVEL_GROUPING_TOL => last.degeneracy += 1,
            _ => levels.push(SpectralLevel {
                energy: e,
                degeneracy: 1,
            }),
        }
    }
    Ok(levels)
}

/// `[cosh(β(α−1)) + cosh(βα)] / (2 sinh²β)`.
pub fn partition_function(beta: f64, alpha_q: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(invalid(format!("β must be positive, got {beta}")));
    }
    let s = beta.sinh();
    Ok(((beta * (alpha_q - 1.0)).cosh() + (beta * alpha_q).cosh()) / (2.0 * s * s))
}

/// `Σ g_i e^{−βE_i}` over the enumerated spectrum.
pub fn partition_function_sum(beta: f64, alpha_q: f64, e_max: f64) -> Result<f64> {
    let levels = enumerate_spectrum(e_max, alpha_q)?;
    // Sum from the top so small terms are not swamped.
    Ok(levels
        .iter()
        .rev()
        .map(|l| l.degeneracy as f64 * (-beta * l.energy).exp())
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DosSeriesConfig {
    pub k_max: usize,
    pub eta: f64,
    pub grid: Vec<f64>,
    /// Drop the Thomas-Fermi term `ℰ` from the total.
    pub suppress_thomas_fermi: bool,
}

impl DosSeriesConfig {
    pub fn new(k_max: usize, eta: f64, grid: Vec<f64>) -> Result<Self> {
        let cfg = Self {
            k_max,
            eta,
            grid,
            suppress_thomas_fermi: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max < 1 {
            return Err(invalid("k_max must be at least 1"));
        }
        if !(self.eta > 0.0) {
            return Err(invalid(format!(
                "broadening η must be positive, got {}",
                self.eta
            )));
        }
        if self.grid.is_empty() {
            return Err(invalid("energy grid is empty"));
        }
        if let Some(bad) = self.grid.iter().find(|e| !(**e >= 1.0)) {
            return Err(invalid(format!("energy grid point {bad} lies below ℰ = 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DosSample {
    pub energy: f64,
    pub total: f64,
    pub thomas_fermi: f64,
    pub full_period: f64,
    pub half_period: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DosSeries {
    pub samples: Vec<DosSample>,
    /// Bound on the magnitude of the discarded `k > K` terms.
    pub tail_bound: f64,
}

/// Truncated traversal sums for g(ℰ), each δ-function smeared into a
/// Lorentzian of half-width η (damping `e^{−2πkη}` on full periods,
/// `e^{−πkη}` on half periods).
pub fn dos_series(config: &DosSeriesConfig, alpha_q: f64) -> Result<DosSeries> {
    config.validate()?;
    check_alpha(alpha_q)?;
    let d_full = (-TAU * config.eta).exp();
    let d_half = (-PI * config.eta).exp();
    let samples = config
        .grid
        .iter()
        .map(|&e| {
            let rot = |phase: f64, damp: f64| Complex64::from_polar(damp, phase);
            let (r_plus, r_minus) = (
                rot(TAU * (e + alpha_q), d_full),
                rot(TAU * (e - alpha_q), d_full),
            );
            let (h_plus, h_minus) = (
                rot(PI * (e + alpha_q + 1.0), d_half),
                rot(PI * (e - alpha_q + 1.0), d_half),
            );
            let (mut zp, mut zm, mut hp, mut hm) = (r_plus, r_minus, h_plus, h_minus);
            let (mut sp, mut sm, mut shp, mut shm) = (0.0, 0.0, 0.0, 0.0);
            for _ in 0..config.k_max {
                sp += zp.re;
                sm += zm.re;
                // (−1)^k cos(πk(ℰ ± α)) = cos(πk(ℰ ± α + 1)).
                shp += hp.re;
                shm += hm.re;
                zp *= r_plus;
                zm *= r_minus;
                hp *= h_plus;
                hm *= h_minus;
            }
            let full = (e + alpha_q) * sp + (e - alpha_q) * sm;
            let half = -0.5 * shp + 0.5 * shm;
            let tf = e;
            DosSample {
                energy: e,
                total: if config.suppress_thomas_fermi {
                    0.0
                } else {
                    tf
                } + full
                    + half,
                thomas_fermi: tf,
                full_period: full,
                half_period: half,
            }
        })
        .collect();
    let e_top = config.grid.iter().copied().fold(1.0, f64::max);
    let k1 = (config.k_max + 1) as i32;
    let tail_bound = 2.0 * (e_top + alpha_q) * d_full.powi(k1) / (1.0 - d_full)
        + d_half.powi(k1) / (1.0 - d_half);
    Ok(DosSeries {
        samples,
        tail_bound,
    })
}

/// Spectrum smeared by Lorentzians of half-width η.
pub fn lorentzian_density(levels: &[SpectralLevel], grid: &[f64], eta: f64) -> Vec<f64> {
    grid.iter()
        .map(|&e| {
            levels
                .iter()
                .map(|l| l.degeneracy as f64 * eta / PI / ((e - l.energy).powi(2) + eta * eta))
                .sum()
        })
        .collect()
}

pub fn relative_l2(approx: &[f64], reference: &[f64]) -> f64 {
    let num: f64 = approx
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let den: f64 = reference.iter().map(|b| b * b).sum();
    (num / den).sqrt()
}

/// Which propagator resummation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagatorForm {
    A,
    B,
}

impl fmt::Display for PropagatorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropagatorForm::A => "A",
            PropagatorForm::B => "B",
        })
    }
}

impl FromStr for PropagatorForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(PropagatorForm::A),
            "B" | "b" => Ok(PropagatorForm::B),
            other => Err(invalid(format!("unknown propagator form '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagatorTerm {
    pub label: &'static str,
    pub value: Complex64,
}

/// `(−2πi)^{-1} G(ℰ + iε)` with the Thomas-Fermi part suppressed, and its
/// individual terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagatorValue {
    pub total: Complex64,
    pub terms: Vec<PropagatorTerm>,
}

impl PropagatorValue {
    /// `G` itself.
    pub fn g(&self) -> Complex64 {
        self.total * Complex64::new(0.0, -TAU)
    }
}

fn geometric(q: Complex64) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) - q;
    if den.norm() < 1e-300 {
        return Err(invalid(
            "evaluation exactly at a pole; add an imaginary shift",
        ));
    }
    Ok(q / den)
}

fn check_shift(im_shift: f64) -> Result<()> {
    if !(im_shift >= 0.0) {
        return Err(invalid(format!(
            "imaginary shift must be non-negative, got {im_shift}"
        )));
    }
    Ok(())
}

fn expi(x: Complex64) -> Complex64 {
    (Complex64::i() * x).exp()
}

/// Two branches with complex amplitudes; full-period exponentials only.
pub fn propagator_form_a(energy: f64, alpha_q: f64, im_shift: f64) -> Result<PropagatorValue> {
    check_shift(im_shift)?;
    let z = Complex64::new(energy, im_shift);
    let one = Complex64::new(1.0, 0.0);
    let amp_plus = 0.5 * (z + alpha_q - 0.5 * (one - expi(-PI * (z + alpha_q))));
    let amp_minus = 0.5 * (z - alpha_q + 0.5 * (one - expi(-PI * (z - alpha_q))));
    let plus = amp_plus * geometric(expi(TAU * (z + alpha_q)))?;
    let minus = amp_minus * geometric(expi(TAU * (z - alpha_q)))?;
    Ok(PropagatorValue {
        total: plus + minus,
        terms: vec![
            PropagatorTerm {
                label: "full_plus",
                value: plus,
            },
            PropagatorTerm {
                label: "full_minus",
                value: minus,
            },
        ],
    })
}

/// Two full-period branches with amplitudes `½(ℰ ± α)` plus two
/// half-period geometric series.
pub fn propagator_form_b(energy: f64, alpha_q: f64, im_shift: f64) -> Result<PropagatorValue> {
    check_shift(im_shift)?;
    let z = Complex64::new(energy, im_shift);
    let plus = 0.5 * (z + alpha_q) * geometric(expi(TAU * (z + alpha_q)))?;
    let minus = 0.5 * (z - alpha_q) * geometric(expi(TAU * (z - alpha_q)))?;
    let half_1 = -0.25 * geometric(expi(PI * (z - 1.0 + alpha_q)))?;
    let half_2 = 0.25 * geometric(expi(PI * (z + 1.0 - alpha_q)))?;
    Ok(PropagatorValue {
        total: plus + minus + half_1 + half_2,
        terms: vec![
            PropagatorTerm {
                label: "full_plus",
                value: plus,
            },
            PropagatorTerm {
                label: "full_minus",
                value: minus,
            },
            PropagatorTerm {
                label: "half_1",
                value: half_1,
            },
            PropagatorTerm {
                label: "half_2",
                value: half_2,
            },
        ],
    })
}

/// Form B written as one traversal sum, with the half-period series merged
/// into a single term of amplitude `−i sin(kπα)/2` on `e^{iπk(ℰ−1)}`.
pub fn propagator_traversal_sum(
    energy: f64,
    alpha_q: f64,
    im_shift: f64,
    k_max: usize,
) -> Result<PropagatorValue> {
    if !(im_shift > 0.0) {
        return Err(invalid(
            "the traversal sum needs a positive imaginary shift",
        ));
    }
    let z = Complex64::new(energy, im_shift);
    let (mut full, mut half) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for k in 1..=k_max {
        let kf = k as f64;
        full += 0.5 * (energy + alpha_q) * expi(TAU * kf * (z + alpha_q))
            + 0.5 * (energy - alpha_q) * expi(TAU * kf * (z - alpha_q));
        half += Complex64::new(0.0, -0.5 * (kf * PI * alpha_q).sin()) * expi(PI * kf * (z - 1.0));
    }
    Ok(PropagatorValue {
        total: full + half,
        terms: vec![
            PropagatorTerm {
                label: "full",
                value: full,
            },
            PropagatorTerm {
                label: "half",
                value: half,
            },
        ],
    })
}

pub fn propagator(
    form: PropagatorForm,
    energy: f64,
    alpha_q: f64,
    im_shift: f64,
) -> Result<PropagatorValue> {
    match form {
        PropagatorForm::A => propagator_form_a(energy, alpha_q, im_shift),
        PropagatorForm::B => propagator_form_b(energy, alpha_q, im_shift),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `ℰ = n₊ − α`.
    Plus,
    /// `ℰ = n₋ + α`.
    Minus,
    /// Both branches coincide (α = ½).
    Both,
    /// Only the half-period terms are singular.
    HalfSeries,
    /// α ∈ {0, 1}: the plain oscillator.
    Oscillator,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleReport {
    pub location: f64,
    pub branch: Branch,
    pub residue: f64,
    pub brute_force_degeneracy: u64,
    /// `n` if even, `n − 1` if odd, with `n = n₊` or `n₋`; `None` where the
    /// rule does not apply.
    pub quoted_amplitude_factor: Option<u64>,
    /// Residue extraction failed to settle.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleAnalysis {
    pub form: PropagatorForm,
    pub alpha_q: f64,
    pub e_max: f64,
    pub poles: Vec<PoleReport>,
    /// Residue/degeneracy ratio, if it is the same for every pole.
    pub residue_ratio: Option<f64>,
}

const POLE_SCAN_STEP: f64 = 1e-3;
const POLE_SECANT_TOL: f64 = 1e-11;

fn inverse_g(form: PropagatorForm, e: f64, alpha_q: f64) -> Result<Complex64> {
    Ok(propagator(form, e, alpha_q, 0.0)?.g().inv())
}

fn secant(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    for _ in 0..100 {
        if (b - a).abs() < POLE_SECANT_TOL || fb == 0.0 {
            return Ok(b);
        }
        let c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = f(b)?;
    }
    Err(Error::NonConvergence(
        "secant refinement did not converge".into(),
    ))
}

/// Symmetric limit `(ℰ − ℰ₀) G` with Richardson extrapolation in h².
fn residue(form: PropagatorForm, pole: f64, alpha_q: f64) -> Result<(f64, bool)> {
    let h0 = 1e-2;
    let mut table: Vec<f64> = (0..4)
        .map(|k| {
            let h = h0 / f64::from(1 << k);
            let up = propagator(form, pole + h, alpha_q, 0.0)?.g() * h;
            let down = propagator(form, pole - h, alpha_q, 0.0)?.g() * (-h);
            Ok(0.5 * (up + down).re)
        })
        .collect::<Result<_>>()?;
    let mut last_change = f64::INFINITY;
    for level in 1..4 {
        let factor = 4f64.powi(level);
        let next: Vec<f64> = table
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        last_change = (next[next.len() - 1] - table[table.len() - 1]).abs();
        table = next;
    }
    let value = table[0];
    Ok((value, last_change > 1e-6 * value.abs().max(1.0)))
}

fn classify_branch(location: f64, alpha_q: f64) -> (Branch, Option<u64>) {
    let near_int = |x: f64| (x - x.round()).abs() < 1e-7;
    let plus = near_int(location + alpha_q) && (location + alpha_q).round() >= 2.0;
    let minus = near_int(location - alpha_q) && (location - alpha_q).round() >= 1.0;
    let rule = |n: f64| {
        let n = n.round() as u64;
        if n.is_multiple_of(2) {
            n
        } else {
            n - 1
        }
    };
    match (plus, minus) {
        (true, true) => (Branch::Both, None),
        (true, false) => (Branch::Plus, Some(rule(location + alpha_q))),
        (false, true) => (Branch::Minus, Some(rule(location - alpha_q))),
        (false, false) => (Branch::HalfSeries, None),
    }
}

/// Locates the real poles of G with `ℰ ≤ e_max` by scanning `Re(1/G)` on a
/// fine grid and refining sign changes, extracts residues and pairs each
/// pole with the brute-force degeneracy.
pub fn poles_and_residues(form: PropagatorForm, alpha_q: f64, e_max: f64) -> Result<PoleAnalysis> {
    check_alpha(alpha_q)?;
    if !(e_max >= 1.0) {
        return Err(invalid("E_max must be at least 1"));
    }
    let spectrum = enumerate_spectrum(e_max + 1.0, alpha_q)?;
    let degeneracy_at = |e: f64| {
        spectrum
            .iter()
            .find(|l| (l.energy - e).abs() < 1e-8)
            .map_or(0, |l| l.degeneracy)
    };

    let mut poles = Vec::new();
    if alpha_q == 0.0 {
        // Degenerate endpoint: the oscillator, poles at every integer ≥ 1.
        for m in 1..=(e_max.floor() as u64) {
            poles.push(PoleReport {
                location: m as f64,
                branch: Branch::Oscillator,
                residue: m as f64,
                brute_force_degeneracy: degeneracy_at(m as f64),
                quoted_amplitude_factor: None,
                flagged: false,
            });
        }
    } else {
        let re_inv = |e: f64| -> Result<f64> { Ok(inverse_g(form, e, alpha_q)?.re) };
        let start = 0.5 + 2f64.sqrt() * 1e-4;
        let steps = ((e_max + 0.5 - start) / POLE_SCAN_STEP).ceil() as usize;
        let mut prev = (start, re_inv(start)?);
        for k in 1..=steps {
            let e = start + k as f64 * POLE_SCAN_STEP;
            let cur = (e, re_inv(e)?);
            if prev.1.signum() != cur.1.signum() {
                let root = secant(re_inv, prev.0, cur.0)?;
                let inv = inverse_g(form, root, alpha_q)?;
                if inv.norm() < 1e-6 && root <= e_max + 1e-9 && root >= 1.0 - 1e-9 {
                    let (res, flagged) = residue(form, root, alpha_q)?;
                    let (branch, factor) = classify_branch(root, alpha_q);
                    poles.push(PoleReport {
                        location: root,
                        branch,
                        residue: res,
                        brute_force_degeneracy: degeneracy_at(root),
                        quoted_amplitude_factor: factor,
                        flagged,
                    });
                }
            }
            prev = cur;
        }
    }

    let ratios: Vec<f64> = poles
        .iter()
        .map(|p| p.residue / p.brute_force_degeneracy as f64)
        .collect();
    let residue_ratio = match ratios.first() {
        Some(&r0)
            if ratios
                .iter()
                .all(|r| (r - r0).abs() < 1e-6 * r0.abs().max(1.0)) =>
        {
            Some(r0)
        }
        _ => None,
    };
    Ok(PoleAnalysis {
        form,
        alpha_q,
        e_max,
        poles,
        residue_ratio,
    })
}

/// Pairs two sorted location lists; returns the largest mismatch, or `None`
/// if the lists differ in length.
pub fn match_locations(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    Some(
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    #[default]
    Hann,
    Rectangular,
}

impl Window {
    /// Periodic window of length `n`.
    pub fn weights(self, n: usize) -> Vec<f64> {
        match self {
            Window::Hann => (0..n)
                .map(|k| 0.5 - 0.5 * (TAU * k as f64 / n as f64).cos())
                .collect(),
            Window::Rectangular => vec![1.0; n],
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Window::Hann => "hann",
            Window::Rectangular => "rectangular",
        })
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hann" => Ok(Window::Hann),
            "rectangular" | "rect" => Ok(Window::Rectangular),
            other => Err(invalid(format!("unknown window '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub t: f64,
    pub amplitude: f64,
    /// Full width at half maximum.
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierSpectrum {
    pub t: Vec<f64>,
    pub magnitude: Vec<f64>,
    pub peaks: Vec<Peak>,
    pub bin_width: f64,
    pub noise_floor: f64,
    pub window: Window,
}

impl FourierSpectrum {
    /// Interpolated peak nearest `t`, searched within two bins.
    pub fn peak_near(&self, t: f64) -> Option<Peak> {
        let i = (t / self.bin_width).round() as usize;
        if i == 0 || i + 2 >= self.magnitude.len() {
            return None;
        }
        let j = (i - 1..=i + 1).max_by(|a, b| self.magnitude[*a].total_cmp(&self.magnitude[*b]))?;
        if j == 0 || j + 1 >= self.magnitude.len() {
            return None;
        }
        Some(self.interpolate(j))
    }

    /// Magnitude at the bin nearest `t`.
    pub fn magnitude_at(&self, t: f64) -> f64 {
        let i = ((t / self.bin_width).round() as usize).min(self.magnitude.len() - 1);
        self.magnitude[i]
    }

    fn interpolate(&self, j: usize) -> Peak {
        let (y0, y1, y2) = (
            self.magnitude[j - 1],
            self.magnitude[j],
            self.magnitude[j + 1],
        );
        let den = y0 - 2.0 * y1 + y2;
        let d = if den == 0.0 {
            0.0
        } else {
            0.5 * (y0 - y2) / den
        };
        let amplitude = y1 - 0.25 * (y0 - y2) * d;
        let half = 0.5 * amplitude;
        let crossing = |dir: isize| {
            let mut k = j as isize;
            while k + dir >= 0 && ((k + dir) as usize) < self.magnitude.len() {
                let (a, b) = (
                    self.magnitude[k as usize],
                    self.magnitude[(k + dir) as usize],
                );
                if b < half {
                    return self.t[k as usize] + dir as f64 * self.bin_width * (a - half) / (a - b);
                }
                k += dir;
            }
            self.t[k as usize]
        };
        Peak {
            t: self.t[j] + d * self.bin_width,
            amplitude,
            width: crossing(1) - crossing(-1),
        }
    }
}

/// Minimum span of the energy grid for the Fourier analysis.
pub const FOURIER_MIN_SPAN: f64 = 30.0;
/// Maximum spacing of the energy grid for the Fourier analysis.
pub const FOURIER_MAX_SPACING: f64 = 0.01;
/// Peaks are reported above this multiple of the median magnitude.
pub const PEAK_THRESHOLD: f64 = 10.0;

/// Discrete Fourier transform of `g(ℰ) − ℰ` on a uniform grid, with the
/// unitary angular convention `ĝ(t) = (2π)^{-1/2} ∫ g(ℰ) e^{−iℰt} dℰ`.
pub fn dos_fourier(
    alpha_q: f64,
    config: &DosSeriesConfig,
    window: Window,
) -> Result<FourierSpectrum> {
    config.validate()?;
    let grid = &config.grid;
    let n = grid.len();
    if n < 4 {
        return Err(invalid("energy grid is too short"));
    }
    let h = (grid[n - 1] - grid[0]) / (n - 1) as f64;
    if grid
        .windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1e-300))
    {
        return Err(invalid("energy grid must be uniform"));
    }
    if grid[n - 1] - grid[0] < FOURIER_MIN_SPAN {
        return Err(invalid(format!(
            "energy grid spans {} < {FOURIER_MIN_SPAN}; too short to resolve the periods",
            grid[n - 1] - grid[0]
        )));
    }
    if h > FOURIER_MAX_SPACING {
        return Err(invalid(format!(
            "energy spacing {h} exceeds {FOURIER_MAX_SPACING}; the half-period peak would alias"
        )));
    }
    let series = dos_series(config, alpha_q)?;
    let weights = window.weights(n);
    let mut buf: Vec<Complex64> = series
        .samples
        .iter()
        .zip(&weights)
        .map(|(s, w)| Complex64::new((s.full_period + s.half_period) * w, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let m = n / 2 + 1;
    let scale = h / TAU.sqrt();
    let magnitude: Vec<f64> = buf[..m].iter().map(|c| c.norm() * scale).collect();
    let bin_width = TAU / (n as f64 * h);
    let t: Vec<f64> = (0..m).map(|k| k as f64 * bin_width).collect();
    let mut sorted = magnitude.clone();
    sorted.sort_by(f64::total_cmp);
    let noise_floor = sorted[m / 2];
    let mut spectrum = FourierSpectrum {
        t,
        magnitude,
        peaks: Vec::new(),
        bin_width,
        noise_floor,
        window,
    };
    let mut peaks = Vec::new();
    for j in 1..m - 1 {
        let y = spectrum.magnitude[j];
        if y > PEAK_THRESHOLD * noise_floor
            && y >= spectrum.magnitude[j - 1]
            && y > spectrum.magnitude[j + 1]
        {
            peaks.push(spectrum.interpolate(j));
        }
    }
    spectrum.peaks = peaks;
    Ok(spectrum)
}

/// Uniform grid `start + k·step`, `k < count`.
pub fn uniform_grid(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start + step * k as f64).collect()
}

/// The default Fourier grid: ℰ = 1 + 0.01k over a span of 32.
pub fn default_fourier_grid() -> Vec<f64> {
    uniform_grid(1.0, 0.01, 3200)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_examples() {
        assert_eq!(exact_energy(0, 0, 0.0), 1.0);
        assert_eq!(exact_energy(1, 2, 0.5), 4.5);
        for j in -4..5 {
            assert!((exact_energy(2, j, 0.3) - exact_energy(2, 1 - j, 0.7)).abs() < 1e-14);
        }
    }

    #[test]
    fn oscillator_degeneracies() {
        let levels = enumerate_spectrum(4.0, 0.0).unwrap();
        let degs: Vec<(f64, u64)> = levels.iter().map(|l| (l.energy, l.degeneracy)).collect();
        assert_eq!(degs, vec![(1.0, 1), (2.0, 2), (3.0, 3), (4.0, 4)]);
    }

    #[test]
    fn quarter_alpha_degeneracies() {
        let levels = enumerate_spectrum(4.0, 0.25).unwrap();
        let at = |e: f64| {
            levels
                .iter()
                .find(|l| (l.energy - e).abs() < 1e-12)
                .unwrap()
                .degeneracy
        };
        assert_eq!(at(1.75), 1);
        assert_eq!(at(3.25), 2);
    }

    #[test]
    fn spectrum_rejects_bad_input() {
        assert!(enumerate_spectrum(0.5, 0.2).is_err());
        assert!(enumerate_spectrum(3.0, 1.0).is_err());
    }

    #[test]
    fn partition_function_oscillator_limit() {
        let beta = 20.0;
        let z = partition_function(beta, 0.0).unwrap();
        assert!((z * beta.exp() - 1.0).abs() < 1e-8);
        assert!(partition_function(0.0, 0.2).is_err());
    }

    #[test]
    fn form_a_at_zero_alpha_is_oscillator() {
        for e in [1.3, 2.71, 7.05] {
            let v = propagator_form_a(e, 0.0, 0.01).unwrap();
            let z = Complex64::new(e, 0.01);
            let q = expi(TAU * z);
            let expected = z * q / (1.0 - q);
            assert!((v.total - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn half_period_terms_vanish_at_zero_alpha() {
        let v = propagator_traversal_sum(2.4, 0.0, 0.05, 500).unwrap();
        assert!(v.terms[1].value.norm() < 1e-15);
    }

    #[test]
    fn pole_evaluation_is_rejected() {
        assert!(propagator_form_a(0.0, 0.0, 0.0).is_err());
        assert!(propagator_form_b(2.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn fourier_rejects_coarse_grid() {
        let cfg = DosSeriesConfig::new(100, 0.01, uniform_grid(1.0, 0.02, 2000)).unwrap();
        assert!(dos_fourier(0.3, &cfg, Window::Hann).is_err());
        let cfg = DosSeriesConfig::new(100, 0.01, uniform_grid(1.0, 0.01, 1000)).unwrap();
        assert!(dos_fourier(0.3, &cfg, Window::Hann).is_err());
    }

    #[test]
    fn dos_rejects_grid_below_one() {
        assert!(DosSeriesConfig::new(10, 0.01, vec![0.5, 1.5]).is_err());
        assert!(DosSeriesConfig::new(0, 0.01, vec![1.5]).is_err());
        assert!(DosSeriesConfig::new(10, 0.0, vec![1.5]).is_err());
    }

    #[test]
    fn thomas_fermi_term_alone() {
        let mut cfg = DosSeriesConfig::new(10, 0.01, vec![1.5, 4.0]).unwrap();
        let s = dos_series(&cfg, 0.3).unwrap();
        assert!(s.samples.iter().all(|x| x.thomas_fermi == x.energy));
        cfg.suppress_thomas_fermi = true;
        let s2 = dos_series(&cfg, 0.3).unwrap();
        for (a, b) in s.samples.iter().zip(&s2.samples) {
            assert!((a.total - b.total - a.energy).abs() < 1e-12);
        }
    }

    #[test]
    fn half_period_series_cancel_at_zero_alpha() {
        let cfg = DosSeriesConfig::new(200, 0.01, uniform_grid(1.0, 0.37, 30)).unwrap();
        let s = dos_series(&cfg, 0.0).unwrap();
        assert!(s.samples.iter().all(|x| x.half_period.abs() < 1e-12));
    }
}
