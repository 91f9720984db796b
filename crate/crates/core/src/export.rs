//! CSV and JSON writers. Every file carries the run configuration: CSV files
//! as a leading `# ` comment line holding JSON, JSON files under a
//! `metadata` key.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;
use crate::exact::{DosSeries, FourierSpectrum};
use crate::regularized::TrajectorySample;
use crate::semiclassical::SemiclassicalLine;

#[derive(Debug, Clone, Serialize)]
pub struct Metadata<'a> {
    pub command: &'a str,
    pub config: &'a RunConfig,
    /// Command-specific parameters (grids, windows, ...).
    pub parameters: serde_json::Value,
}

pub fn metadata_line(meta: &Metadata<'_>) -> Result<String> {
    Ok(format!("# {}\n", serde_json::to_string(meta)?))
}

/// Writes `body` to `outdir/name` behind the metadata comment line.
pub fn write_csv(outdir: &Path, name: &str, meta: &Metadata<'_>, body: &str) -> Result<PathBuf> {
    fs::create_dir_all(outdir)?;
    let path = outdir.join(name);
    let mut text = metadata_line(meta)?;
    text.push_str(body);
    fs::write(&path, text)?;
    Ok(path)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    metadata: &'a Metadata<'a>,
    data: &'a T,
}

pub fn to_json<T: Serialize>(meta: &Metadata<'_>, data: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(&Envelope {
        metadata: meta,
        data,
    })?)
}

pub fn write_json<T: Serialize>(
    outdir: &Path,
    name: &str,
    meta: &Metadata<'_>,
    data: &T,
) -> Result<PathBuf> {
    fs::create_dir_all(outdir)?;
    let path = outdir.join(name);
    let mut text = to_json(meta, data)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

pub fn trajectory_csv(samples: &[TrajectorySample]) -> String {
    let mut out = String::from("t,r,theta,x,y,r_dot,theta_dot,region\n");
    for s in samples {
        let region = if s.inside { "in" } else { "out" };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{region}",
            s.t, s.r, s.theta, s.x, s.y, s.r_dot, s.theta_dot
        );
    }
    out
}

/// One block of lines per α_q.
pub fn semiclassical_csv(rows: &[(f64, Vec<SemiclassicalLine>)]) -> String {
    let mut out = String::from("alpha_q,n,slope,multiplicity,energy\n");
    for (alpha, lines) in rows {
        for l in lines {
            let _ = writeln!(
                out,
                "{alpha},{},{},{},{}",
                l.n, l.slope, l.multiplicity, l.energy
            );
        }
    }
    out
}

pub fn dos_csv(series: &DosSeries) -> String {
    let mut out = String::from("energy,g_total,g_thomas_fermi,g_full_period,g_half_period\n");
    for s in &series.samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.energy, s.total, s.thomas_fermi, s.full_period, s.half_period
        );
    }
    out
}

pub fn fourier_csv(spectrum: &FourierSpectrum) -> String {
    let mut out = String::from("t,magnitude\n");
    for (t, m) in spectrum.t.iter().zip(&spectrum.magnitude) {
        let _ = writeln!(out, "{t},{m}");
    }
    out
}
