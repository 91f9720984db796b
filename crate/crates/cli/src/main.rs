use std::path::PathBuf;
use std::process::ExitCode;

use anyon_orbits::acceptance::{self, CRITERIA};
use anyon_orbits::config::{parse_grid, RunConfig};
use anyon_orbits::error::Error;
use anyon_orbits::exact::{
    dos_fourier, dos_series, enumerate_spectrum, match_locations, poles_and_residues,
    DosSeriesConfig, PoleAnalysis, PropagatorForm, Window,
};
use anyon_orbits::export::{self, Metadata};
use anyon_orbits::families::enumerate_orientation_classes;
use anyon_orbits::regularized::{
    classify_limit, integrate_orbit, FluxProfile, PolarOrbitState, StepControl,
};
use anyon_orbits::semiclassical::{semiclassical_levels_with, ZeroPointConvention};
use anyon_orbits::symplectic::{
    basis_labels, basis_rank, build_generator, check_orthosymplectic, SymplecticForm,
};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

// stdout may be a closed pipe (`anyon ... | head`); drop the output rather than panic.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "anyon",
    version,
    about = "Periodic orbits and spectra of harmonically confined anyons"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` config file; flags given here override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config file).
    #[arg(long, global = true, env = "ANYON_OUTDIR")]
    outdir: Option<PathBuf>,
    /// Seed for random probes (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// List the OSp(4N,R) basis generators and their algebra residuals.
    Generators {
        #[arg(long)]
        n_particles: usize,
        /// Exit with status 2 if any residual exceeds the tolerance.
        #[arg(long)]
        check: bool,
    },
    /// Build one representative orbit per orientation signature.
    Families {
        #[arg(long)]
        n_particles: usize,
        /// Write the full catalog as JSON.
        #[arg(long)]
        export: bool,
    },
    /// Integrate a regularized relative orbit and classify it.
    Orbit {
        #[arg(long)]
        energy: f64,
        #[arg(long)]
        ell: f64,
        #[arg(long)]
        alpha: f64,
        /// Disc radius; repeat for a deflection sequence.
        #[arg(long, required = true)]
        epsilon: Vec<f64>,
        /// Trajectory CSV file name inside the output directory.
        #[arg(long, default_value = "orbit.csv")]
        out: String,
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        t_max: f64,
    },
    /// Semiclassical levels for a grid of α.
    Spectrum {
        #[arg(long)]
        n_particles: usize,
        #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
        alpha_grid: String,
        #[arg(long)]
        n_max: Option<u32>,
        /// Zero-point convention: `full` or `relative`.
        #[arg(long, default_value = "full")]
        convention: String,
    },
    /// Two-anyon density of states from the traversal series.
    Dos {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
        #[arg(long, default_value = "1.5:12:0.005")]
        grid: String,
        /// Also write the Lorentzian-broadened exact spectrum.
        #[arg(long)]
        reference: bool,
    },
    /// Poles and residues of the two-anyon propagator.
    Propagator {
        #[arg(long)]
        alpha: f64,
        /// `A`, `B` or `both`.
        #[arg(long, default_value = "both")]
        form: String,
        #[arg(long)]
        e_max: Option<f64>,
    },
    /// Fourier transform of the oscillating part of g(ℰ).
    Fourier {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "1:32.99:0.01")]
        grid: String,
        /// `hann` or `rectangular`.
        #[arg(long, default_value = "hann")]
        window: String,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Accept {
        /// Run only these criteria (1-9); repeatable.
        #[arg(long)]
        criterion: Vec<u8>,
    },
}

enum Failure {
    Usage(String),
    Check(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(EXIT_FAILED)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NonConvergence(_) => EXIT_NONCONVERGENCE,
                Error::Io(_) | Error::Json(_) => EXIT_FAILED,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(dir) = &common.outdir {
        cfg.outdir = dir.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn grid(text: &str) -> Result<Vec<f64>, Failure> {
    parse_grid(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    let cfg = load_config(&cli.common)?;
    match cli.command {
        Command::Generators { n_particles, check } => generators(&cfg, n_particles, check),
        Command::Families {
            n_particles,
            export,
        } => families(&cfg, n_particles, export),
        Command::Orbit {
            energy,
            ell,
            alpha,
            epsilon,
            out,
            t_max,
        } => orbit(&cfg, energy, ell, alpha, epsilon, &out, t_max),
        Command::Spectrum {
            n_particles,
            alpha_grid,
            n_max,
            convention,
        } => spectrum(&cfg, n_particles, &alpha_grid, n_max, &convention),
        Command::Dos {
            alpha,
            k_max,
            eta,
            grid: g,
            reference,
        } => dos(&cfg, alpha, k_max, eta, &g, reference),
        Command::Propagator { alpha, form, e_max } => propagator(&cfg, alpha, &form, e_max),
        Command::Fourier {
            alpha,
            grid: g,
            window,
            k_max,
            eta,
        } => fourier(&cfg, alpha, &g, &window, k_max, eta),
        Command::Accept { criterion } => accept(&cfg, criterion),
    }
}

fn generators(cfg: &RunConfig, n: usize, check: bool) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("--n-particles must be at least 1".into()));
    }
    if n > 16 {
        return Err(Failure::Usage(
            "--n-particles above 16 is not supported".into(),
        ));
    }
    let form = SymplecticForm::new(n)?;
    let tol = cfg.tolerances.orthosymplectic;
    let mut rows = Vec::new();
    let mut failures = 0;
    for label in basis_labels(n) {
        let t = build_generator(label, n)?;
        let c = check_orthosymplectic(t.matrix(), &form, tol)?;
        if !c.passed {
            failures += 1;
        }
        rows.push(json!({"label": label.to_string(), "residual": c.residual, "passed": c.passed}));
    }
    let rank = basis_rank(n)?;
    let data = json!({"n_particles": n, "count": rows.len(), "rank": rank, "generators": rows});
    let meta = Metadata {
        command: "generators",
        config: cfg,
        parameters: json!({"n_particles": n, "check": check}),
    };
    let path = export::write_json(&cfg.outdir, &format!("generators_n{n}.json"), &meta, &data)?;
    let worst = data["generators"]
        .as_array()
        .map(|g| {
            g.iter()
                .filter_map(|r| r["residual"].as_f64())
                .fold(0.0, f64::max)
        })
        .unwrap_or(0.0);
    say!(
        "{} basis generators, rank {rank}, max residual {worst:.3e}",
        4 * n * n
    );
    say!("wrote {}", path.display());
    if check && (failures > 0 || rank != 4 * n * n) {
        return Err(Failure::Check(format!(
            "{failures} generators exceed tolerance {tol:e}"
        )));
    }
    Ok(())
}

fn families(cfg: &RunConfig, n: usize, export_json: bool) -> Outcome {
    if !(2..=6).contains(&n) {
        return Err(Failure::Usage(format!(
            "--n-particles must lie in 2..=6, got {n}"
        )));
    }
    let catalog = enumerate_orientation_classes(n)?;
    let circles = catalog.count - catalog.not_realized_by_circles().len().min(catalog.count);
    say!(
        "N = {n}: {} orientation classes{} ({circles} by concentric circles)",
        catalog.count,
        if catalog.count_is_lower_bound {
            " (lower bound on the family count)"
        } else {
            ""
        }
    );
    if export_json {
        let meta = Metadata {
            command: "families",
            config: cfg,
            parameters: json!({"n_particles": n}),
        };
        let path =
            export::write_json(&cfg.outdir, &format!("families_n{n}.json"), &meta, &catalog)?;
        say!("wrote {}", path.display());
    }
    if !catalog.is_complete() {
        return Err(Failure::Check(format!(
            "{} signatures unrealized",
            catalog.unrealized.len()
        )));
    }
    Ok(())
}

fn orbit(
    cfg: &RunConfig,
    e: f64,
    ell: f64,
    alpha: f64,
    mut eps: Vec<f64>,
    out: &str,
    t_max: f64,
) -> Outcome {
    if eps.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Failure::Usage("--epsilon values must be positive".into()));
    }
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    let smallest = *eps.last().expect("clap requires one value");
    let profile = FluxProfile::new(smallest, alpha)?;
    let start = PolarOrbitState::outer_turning_point(e, ell, &profile)?;
    let control = StepControl {
        rtol: cfg.tolerances.integrator,
        ..StepControl::default()
    };
    let res = integrate_orbit(e, ell, &profile, &start, t_max, &control)?;
    let limit = classify_limit(e, ell, alpha, &eps)?;

    let meta = Metadata {
        command: "orbit",
        config: cfg,
        parameters: json!({"energy": e, "ell": ell, "alpha": alpha, "epsilon": smallest, "t_max": t_max}),
    };
    let path = export::write_csv(
        &cfg.outdir,
        out,
        &meta,
        &export::trajectory_csv(&res.samples),
    )?;

    if limit.degenerate_line {
        say!("classification: reflecting_radial (degenerate oscillator line through the origin)");
    } else {
        say!("classification: {}", limit.kind);
    }
    say!(
        "finite-ε orbit at ε = {smallest:e}: {}",
        res.classification.kind
    );
    say!(
        "period: {:.12} (elliptical {:.12})",
        limit.period,
        limit.elliptical_period
    );
    for (x, d) in &limit.deflections {
        say!("  ε = {x:e}: Δθ = {d:.6e}");
    }
    if let Some(p) = limit.power_law_exponent {
        say!("  Δθ ∝ ε^{p:.4}");
    }
    if limit.flagged {
        say!("warning: deflection sequence is not strictly decreasing");
    }
    say!(
        "drift: energy {:.2e}, exterior ℓ {:.2e}",
        res.drift.energy,
        res.drift.exterior_ell
    );
    say!("wrote {}", path.display());
    let summary = json!({"limit": limit, "finite_epsilon": res.classification, "drift": res.drift});
    let path = export::write_json(
        &cfg.outdir,
        &format!("{}.json", out.trim_end_matches(".csv")),
        &meta,
        &summary,
    )?;
    say!("wrote {}", path.display());
    Ok(())
}

fn spectrum(
    cfg: &RunConfig,
    n: usize,
    alphas: &str,
    n_max: Option<u32>,
    convention: &str,
) -> Outcome {
    if !(2..=12).contains(&n) {
        return Err(Failure::Usage(format!(
            "--n-particles must lie in 2..=12, got {n}"
        )));
    }
    let convention: ZeroPointConvention = convention
        .parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let n_max = n_max.unwrap_or(cfg.truncations.n_max);
    let mut rows = Vec::new();
    for a in grid(alphas)? {
        rows.push((a, semiclassical_levels_with(n, a, n_max, convention)?));
    }
    let meta = Metadata {
        command: "spectrum",
        config: cfg,
        parameters: json!({"n_particles": n, "alpha_grid": alphas, "n_max": n_max, "convention": convention}),
    };
    let path = export::write_csv(
        &cfg.outdir,
        &format!("semiclassical_n{n}.csv"),
        &meta,
        &export::semiclassical_csv(&rows),
    )?;
    let mut slopes: Vec<i32> = rows
        .iter()
        .flat_map(|(_, l)| l.iter().map(|x| x.slope))
        .collect();
    slopes.sort_unstable();
    slopes.dedup();
    say!("slopes: {slopes:?}");
    say!("wrote {}", path.display());
    Ok(())
}

fn dos(
    cfg: &RunConfig,
    alpha: f64,
    k_max: Option<usize>,
    eta: f64,
    g: &str,
    reference: bool,
) -> Outcome {
    let energies = grid(g)?;
    let config = DosSeriesConfig::new(
        k_max.unwrap_or(cfg.truncations.k_max),
        eta,
        energies.clone(),
    )?;
    let series = dos_series(&config, alpha)?;
    let meta = Metadata {
        command: "dos",
        config: cfg,
        parameters: json!({"alpha": alpha, "k_max": config.k_max, "eta": eta, "grid": g}),
    };
    let path = export::write_csv(&cfg.outdir, "dos.csv", &meta, &export::dos_csv(&series))?;
    say!(
        "{} points, tail bound {:.3e}",
        series.samples.len(),
        series.tail_bound
    );
    say!("wrote {}", path.display());
    if reference {
        let top = energies.iter().copied().fold(1.0, f64::max);
        let levels = enumerate_spectrum(top + 50.0, alpha)?;
        let broadened = anyon_orbits::exact::lorentzian_density(&levels, &energies, eta);
        let total: Vec<f64> = series.samples.iter().map(|s| s.total).collect();
        say!(
            "relative L² vs broadened spectrum: {:.3e}",
            anyon_orbits::exact::relative_l2(&total, &broadened)
        );
        let mut body = String::from("energy,g_reference\n");
        for (e, v) in energies.iter().zip(&broadened) {
            body.push_str(&format!("{e},{v}\n"));
        }
        let path = export::write_csv(&cfg.outdir, "dos_reference.csv", &meta, &body)?;
        say!("wrote {}", path.display());
    }
    Ok(())
}

fn propagator(cfg: &RunConfig, alpha: f64, form: &str, e_max: Option<f64>) -> Outcome {
    let e_max = e_max.unwrap_or(cfg.truncations.e_max);
    let forms: Vec<PropagatorForm> = match form {
        "both" => vec![PropagatorForm::A, PropagatorForm::B],
        f => vec![f
            .parse()
            .map_err(|e: Error| Failure::Usage(e.to_string()))?],
    };
    let analyses: Vec<PoleAnalysis> = forms
        .iter()
        .map(|f| poles_and_residues(*f, alpha, e_max))
        .collect::<Result<_, _>>()?;
    let levels: Vec<f64> = enumerate_spectrum(e_max, alpha)?
        .iter()
        .map(|l| l.energy)
        .collect();
    let locations = |p: &PoleAnalysis| p.poles.iter().map(|r| r.location).collect::<Vec<_>>();
    let tol = 1e-9;
    let mut agree = true;
    for a in &analyses {
        let gap = match_locations(&locations(a), &levels);
        say!(
            "form {}: {} poles, residue/degeneracy {:?}, max gap to spectrum {}",
            a.form,
            a.poles.len(),
            a.residue_ratio,
            gap.map_or("count mismatch".into(), |g| format!("{g:.2e}"))
        );
        agree &= gap.is_some_and(|g| g < tol);
    }
    let cross = if analyses.len() == 2 {
        let gap = match_locations(&locations(&analyses[0]), &locations(&analyses[1]));
        say!(
            "A vs B: {}",
            gap.map_or("pole counts differ".into(), |g| format!("max gap {g:.2e}"))
        );
        agree &= gap.is_some_and(|g| g < tol);
        gap
    } else {
        None
    };
    let meta = Metadata {
        command: "propagator",
        config: cfg,
        parameters: json!({"alpha": alpha, "form": form, "e_max": e_max}),
    };
    let data = json!({"analyses": analyses, "a_vs_b_gap": cross, "agree": agree});
    let path = export::write_json(&cfg.outdir, "poles.json", &meta, &data)?;
    say!("wrote {}", path.display());
    if !agree {
        return Err(Failure::Check(format!("pole sets disagree beyond {tol:e}")));
    }
    Ok(())
}

fn fourier(
    cfg: &RunConfig,
    alpha: f64,
    g: &str,
    window: &str,
    k_max: Option<usize>,
    eta: f64,
) -> Outcome {
    let window: Window = window
        .parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let config = DosSeriesConfig::new(k_max.unwrap_or(cfg.truncations.k_max), eta, grid(g)?)?;
    let spectrum = dos_fourier(alpha, &config, window)?;
    let meta = Metadata {
        command: "fourier",
        config: cfg,
        parameters: json!({"alpha": alpha, "grid": g, "window": window, "k_max": config.k_max, "eta": eta}),
    };
    for p in spectrum
        .peaks
        .iter()
        .filter(|p| p.t < 4.0 * std::f64::consts::PI)
    {
        say!(
            "peak t = {:.6} (t/π = {:.4}), amplitude {:.4e}, width {:.4}",
            p.t,
            p.t / std::f64::consts::PI,
            p.amplitude,
            p.width
        );
    }
    let csv = export::write_csv(
        &cfg.outdir,
        "fourier.csv",
        &meta,
        &export::fourier_csv(&spectrum),
    )?;
    let data = json!({
        "peaks": spectrum.peaks,
        "bin_width": spectrum.bin_width,
        "noise_floor": spectrum.noise_floor,
    });
    let js = export::write_json(&cfg.outdir, "fourier_peaks.json", &meta, &data)?;
    say!("wrote {} and {}", csv.display(), js.display());
    Ok(())
}

fn accept(cfg: &RunConfig, mut ids: Vec<u8>) -> Outcome {
    if ids.is_empty() {
        ids = CRITERIA.to_vec();
    }
    if let Some(bad) = ids.iter().find(|i| !CRITERIA.contains(i)) {
        return Err(Failure::Usage(format!(
            "no criterion {bad}; choose from 1-9"
        )));
    }
    let mut reports = Vec::new();
    for id in ids {
        let report = acceptance::run(id, cfg.seed);
        say!("{report}");
        reports.push(report);
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    say!(
        "{} of {} criteria passed",
        reports.len() - failed,
        reports.len()
    );
    let meta = Metadata {
        command: "accept",
        config: cfg,
        parameters: json!({}),
    };
    let path = export::write_json(&cfg.outdir, "acceptance.json", &meta, &reports)?;
    say!("wrote {}", path.display());
    if failed > 0 {
        return Err(Failure::Check(format!("{failed} criteria failed")));
    }
    Ok(())
}
