//! Leading-order periodic-orbit eigenvalues: each orientation class
//! contributes a line `E = n + α_q Σε_ij + offset` (ħ = ω = 1).

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::observables::OrientationSignature;

/// Constant term of the semiclassical energies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroPointConvention {
    /// `N(N−1)`, for the full N-particle system.
    #[default]
    FullSystem,
    /// `N(N−1) − 1`, with the centre-of-mass zero-point energy removed.
    RelativeOnly,
}

impl ZeroPointConvention {
    pub fn offset(self, n_particles: usize) -> f64 {
        let base = (n_particles * (n_particles - 1)) as f64;
        match self {
            ZeroPointConvention::FullSystem => base,
            ZeroPointConvention::RelativeOnly => base - 1.0,
        }
    }
}

impl fmt::Display for ZeroPointConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroPointConvention::FullSystem => "full",
            ZeroPointConvention::RelativeOnly => "relative",
        })
    }
}

impl FromStr for ZeroPointConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(ZeroPointConvention::FullSystem),
            "relative" => Ok(ZeroPointConvention::RelativeOnly),
            other => Err(invalid(format!("unknown zero-point convention '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiclassicalLine {
    pub n: u32,
    pub slope: i32,
    pub multiplicity: u64,
    pub energy: f64,
}

/// `2π α_c Σ_{i<j} ε_ij`.
pub fn action_alpha_term(signature: &OrientationSignature, alpha_c: f64) -> f64 {
    TAU * alpha_c * signature.slope() as f64
}

/// `2πE/ω`.
pub fn oscillator_action(energy: f64, omega: f64) -> f64 {
    TAU * energy / omega
}

fn pair_count(n_particles: usize) -> Result<u32> {
    if n_particles < 2 {
        return Err(invalid(format!(
            "need at least two particles, got {n_particles}"
        )));
    }
    u32::try_from(n_particles * (n_particles - 1) / 2).map_err(|_| invalid("too many particles"))
}

/// `−M, −M+2, …, M` with `M = N(N−1)/2`.
pub fn slope_set(n_particles: usize) -> Result<Vec<i32>> {
    let m = pair_count(n_particles)? as i32;
    Ok((0..=m).map(|k| -m + 2 * k).collect())
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / u64::from(i + 1))
}

/// Number of signatures with the given slope.
pub fn slope_multiplicity(n_particles: usize, slope: i32) -> Result<u64> {
    let m = pair_count(n_particles)? as i32;
    if slope.abs() > m || (slope + m) % 2 != 0 {
        return Ok(0);
    }
    Ok(binomial(m as u32, ((slope + m) / 2) as u32))
}

pub fn line_energy(n: u32, slope: i32, alpha_q: f64, offset: f64) -> f64 {
    f64::from(n) + alpha_q * f64::from(slope) + offset
}

pub fn semiclassical_levels(
    n_particles: usize,
    alpha_q: f64,
    n_max: u32,
) -> Result<Vec<SemiclassicalLine>> {
    semiclassical_levels_with(n_particles, alpha_q, n_max, ZeroPointConvention::FullSystem)
}

/// All lines for `n = 0..=n_max`, sorted by energy (ties by slope).
/// `α_q = 1` is accepted so the endpoint interpolation can be inspected.
pub fn semiclassical_levels_with(
    n_particles: usize,
    alpha_q: f64,
    n_max: u32,
    convention: ZeroPointConvention,
) -> Result<Vec<SemiclassicalLine>> {
    if !(0.0..=1.0).contains(&alpha_q) {
        return Err(invalid(format!("α_q must lie in [0, 1], got {alpha_q}")));
    }
    let slopes = slope_set(n_particles)?;
    let offset = convention.offset(n_particles);
    let mut lines = Vec::with_capacity(slopes.len() * (n_max as usize + 1));
    for n in 0..=n_max {
        for &slope in &slopes {
            lines.push(SemiclassicalLine {
                n,
                slope,
                multiplicity: slope_multiplicity(n_particles, slope)?,
                energy: line_energy(n, slope, alpha_q, offset),
            });
        }
    }
    lines.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.slope.cmp(&b.slope)));
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_term_examples() {
        let all_plus = OrientationSignature::from_signs(2, &[1]).unwrap();
        assert_eq!(action_alpha_term(&all_plus, 0.3), TAU * 0.3);
        assert_eq!(action_alpha_term(&all_plus, 0.0), 0.0);
        let mixed = OrientationSignature::from_signs(3, &[1, 1, -1]).unwrap();
        assert_eq!(action_alpha_term(&mixed, 0.2), TAU * 0.2);
    }

    #[test]
    fn oscillator_action_examples() {
        assert_eq!(oscillator_action(1.0, 1.0), TAU);
        assert_eq!(oscillator_action(0.0, 1.0), 0.0);
        assert_eq!(
            oscillator_action(2.0, 1.0),
            2.0 * oscillator_action(1.0, 1.0)
        );
    }

    #[test]
    fn slope_sets() {
        assert_eq!(slope_set(2).unwrap(), vec![-1, 1]);
        assert_eq!(slope_set(3).unwrap(), vec![-3, -1, 1, 3]);
        assert_eq!(slope_set(4).unwrap(), vec![-6, -4, -2, 0, 2, 4, 6]);
        assert!(slope_set(1).is_err());
    }

    #[test]
    fn two_particle_lines() {
        let lines = semiclassical_levels(2, 0.25, 2).unwrap();
        let energies: Vec<f64> = lines.iter().map(|l| l.energy).collect();
        assert_eq!(energies, vec![1.75, 2.25, 2.75, 3.25, 3.75, 4.25]);
        let rel = semiclassical_levels_with(2, 0.25, 0, ZeroPointConvention::RelativeOnly).unwrap();
        assert_eq!(rel[0].energy, 0.75);
    }

    #[test]
    fn zero_alpha_collapses() {
        let lines = semiclassical_levels(3, 0.0, 1).unwrap();
        let at_six: u64 = lines
            .iter()
            .filter(|l| l.energy == 6.0)
            .map(|l| l.multiplicity)
            .sum();
        assert_eq!(at_six, 8);
    }

    #[test]
    fn convention_round_trip() {
        for c in [
            ZeroPointConvention::FullSystem,
            ZeroPointConvention::RelativeOnly,
        ] {
            assert_eq!(c.to_string().parse::<ZeroPointConvention>().unwrap(), c);
        }
        assert!("com".parse::<ZeroPointConvention>().is_err());
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        assert!(semiclassical_levels(2, -0.1, 3).is_err());
        assert!(semiclassical_levels(2, 1.5, 3).is_err());
    }
}
