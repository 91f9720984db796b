//! Run configuration shared by every experiment, plus the two small text
//! formats the command line accepts: `key = value` config files and energy
//! or parameter grids.
//!
//! Config file format, one setting per line:
//!
//! ```text
//! # comment
//! seed = 7
//! tol.degeneracy = 1e-9
//! outdir = results
//! ```
//!
//! Keys: `hbar`, `omega`, `tol.orthosymplectic`, `tol.conservation`,
//! `tol.degeneracy`, `tol.integrator`, `k_max`, `n_max`, `e_max`, `seed`,
//! `outdir`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest grid the parser will materialize.
pub const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub orthosymplectic: f64,
    pub conservation: f64,
    pub degeneracy: f64,
    pub integrator: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orthosymplectic: crate::symplectic::ORTHOSYMPLECTIC_TOL,
            conservation: crate::regularized::CONSERVATION_TOL,
            degeneracy: crate::observables::DEGENERACY_TOL,
            integrator: crate::regularized::INTEGRATOR_RTOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncations {
    pub k_max: usize,
    pub n_max: u32,
    pub e_max: f64,
}

impl Default for Truncations {
    fn default() -> Self {
        Self {
            k_max: 2000,
            n_max: 20,
            e_max: 20.0,
        }
    }
}

/// Everything needed to reproduce an output table. Energies in every table
/// are in units of ħω; `hbar` and `omega` are recorded alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub hbar: f64,
    pub omega: f64,
    pub tolerances: Tolerances,
    pub truncations: Truncations,
    pub seed: u64,
    pub outdir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            omega: 1.0,
            tolerances: Tolerances::default(),
            truncations: Truncations::default(),
            seed: 7,
            outdir: PathBuf::from("out"),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        positive("hbar", self.hbar)?;
        positive("omega", self.omega)?;
        positive("tol.orthosymplectic", self.tolerances.orthosymplectic)?;
        positive("tol.conservation", self.tolerances.conservation)?;
        positive("tol.degeneracy", self.tolerances.degeneracy)?;
        positive("tol.integrator", self.tolerances.integrator)?;
        if self.truncations.k_max == 0 {
            return Err(invalid("k_max must be at least 1"));
        }
        if !(self.truncations.e_max >= 1.0) || !self.truncations.e_max.is_finite() {
            return Err(invalid("e_max must be a finite number >= 1"));
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| invalid(format!("cannot parse '{value}' for {key}")))
        }
        match key {
            "hbar" => self.hbar = num(key, value)?,
            "omega" => self.omega = num(key, value)?,
            "tol.orthosymplectic" => self.tolerances.orthosymplectic = num(key, value)?,
            "tol.conservation" => self.tolerances.conservation = num(key, value)?,
            "tol.degeneracy" => self.tolerances.degeneracy = num(key, value)?,
            "tol.integrator" => self.tolerances.integrator = num(key, value)?,
            "k_max" => self.truncations.k_max = num(key, value)?,
            "n_max" => self.truncations.n_max = num(key, value)?,
            "e_max" => self.truncations.e_max = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "outdir" => {
                if value.is_empty() {
                    return Err(invalid("outdir must not be empty"));
                }
                self.outdir = PathBuf::from(value)
            }
            other => return Err(invalid(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Parses a config file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply(text)?;
        Ok(cfg)
    }

    /// Applies a config file on top of `self`; later lines win.
    pub fn apply(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("expected 'key = value', found '{line}'"),
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: e.to_string(),
                })?;
        }
        self.validate().map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })
    }
}

/// Parses `a,b,c` or `start:stop:step` (stop included when it lies on the
/// grid, to within a millionth of a step).
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(invalid("empty grid"));
    }
    let number = |s: &str| -> Result<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| invalid(format!("cannot parse grid value '{}'", s.trim())))?;
        if !v.is_finite() {
            return Err(invalid("grid values must be finite"));
        }
        Ok(v)
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(invalid("range grids take the form start:stop:step"));
        };
        let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
        if !(step > 0.0) {
            return Err(invalid("grid step must be positive"));
        }
        if stop < start {
            return Err(invalid("grid stop lies below start"));
        }
        let count = ((stop - start) / step + 1e-6).floor() + 1.0;
        if !(count <= MAX_GRID_POINTS as f64) {
            return Err(invalid(format!(
                "grid would have more than {MAX_GRID_POINTS} points"
            )));
        }
        Ok((0..count as usize)
            .map(|k| start + step * k as f64)
            .collect())
    } else {
        let values: Vec<f64> = text.split(',').map(number).collect::<Result<_>>()?;
        if values.len() > MAX_GRID_POINTS {
            return Err(invalid("grid is too long"));
        }
        Ok(values)
    }
}
