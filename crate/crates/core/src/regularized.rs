//! Relative motion of two anyons with the flux smeared over a disc of radius
//! ε, in the limit ε → 0.
//!
//! The motion is integrated in Cartesian coordinates: an isotropic
//! oscillator plus the Lorentz force of the uniform field `B = 2α/ε²` inside
//! the disc. Polar quantities are reconstructed from the Cartesian state.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::ode::{Direction, DormandPrince, Event};

/// Relative tolerance of the orbit integrator.
pub const INTEGRATOR_RTOL: f64 = 1e-11;
/// Conservation tolerance for energy and exterior angular momentum.
pub const CONSERVATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxProfile {
    epsilon: f64,
    alpha: f64,
}

impl FluxProfile {
    pub fn new(epsilon: f64, alpha: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(invalid(format!(
                "disc radius must be positive, got {epsilon}"
            )));
        }
        if !alpha.is_finite() {
            return Err(invalid("flux strength must be finite"));
        }
        Ok(Self { epsilon, alpha })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Enclosed flux Φ(r).
    pub fn flux(&self, r: f64) -> f64 {
        TAU * self.alpha * (r * r / (self.epsilon * self.epsilon)).min(1.0)
    }

    /// `r A_θ(r) = Φ(r) / 2π`.
    pub fn r_a_theta(&self, r: f64) -> f64 {
        self.flux(r) / TAU
    }

    /// Magnetic field, `2α/ε²` inside the disc and zero outside.
    pub fn field(&self, inside: bool) -> f64 {
        if inside {
            2.0 * self.alpha / (self.epsilon * self.epsilon)
        } else {
            0.0
        }
    }
}

/// `r² θ̇ = ℓ − r A_θ(r)`.
pub fn effective_angular_term(r: f64, profile: &FluxProfile, ell: f64) -> f64 {
    ell - profile.r_a_theta(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarOrbitState {
    pub r: f64,
    pub theta: f64,
    pub r_dot_sign: f64,
}

impl PolarOrbitState {
    /// Outer turning point of the orbit with energy `e` and canonical angular
    /// momentum `ell`, at angle zero.
    pub fn outer_turning_point(e: f64, ell: f64, profile: &FluxProfile) -> Result<Self> {
        let l = ell - profile.alpha;
        let disc = e * e - l * l;
        if disc < 0.0 {
            return Err(invalid(format!("|ℓ − α| = {} exceeds E = {e}", l.abs())));
        }
        let r = (e + disc.sqrt()).sqrt();
        if r <= profile.epsilon {
            return Err(invalid("outer turning point lies inside the disc"));
        }
        Ok(Self {
            r,
            theta: 0.0,
            r_dot_sign: -1.0,
        })
    }

    pub fn radicand(&self, e: f64, ell: f64, profile: &FluxProfile) -> f64 {
        let w = effective_angular_term(self.r, profile, ell);
        2.0 * e - self.r * self.r - w * w / (self.r * self.r)
    }

    /// Cartesian `(x, y, v_x, v_y)`.
    pub fn to_cartesian(&self, e: f64, ell: f64, profile: &FluxProfile) -> Result<[f64; 4]> {
        if !(self.r > 0.0) {
            return Err(invalid("initial radius must be positive"));
        }
        let rad = self.radicand(e, ell, profile);
        if rad < -1e-12 * (2.0 * e).max(1.0) {
            return Err(invalid(format!(
                "initial state violates the energy bound: 2E − r²θ̇² − r² = {rad}"
            )));
        }
        let r_dot = self.r_dot_sign.signum() * rad.max(0.0).sqrt();
        let theta_dot = effective_angular_term(self.r, profile, ell) / (self.r * self.r);
        let (s, c) = self.theta.sin_cos();
        Ok([
            self.r * c,
            self.r * s,
            r_dot * c - self.r * theta_dot * s,
            r_dot * s + self.r * theta_dot * c,
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    ExteriorEllipse,
    ReflectingRadial,
    Interior,
    Crossing,
}

impl fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitKind::ExteriorEllipse => "exterior_ellipse",
            OrbitKind::ReflectingRadial => "reflecting_radial",
            OrbitKind::Interior => "interior",
            OrbitKind::Crossing => "crossing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitClassification {
    pub kind: OrbitKind,
    /// Angular period for ellipses, radial period (between outer turning
    /// points) otherwise. NaN if not completed within `t_max`.
    pub period: f64,
    pub angular_period: Option<f64>,
    pub radial_period: Option<f64>,
    /// Angle swept per disc passage, reduced modulo π.
    pub delta_theta_interior: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub x: f64,
    pub y: f64,
    pub r_dot: f64,
    pub theta_dot: f64,
    pub inside: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Drift {
    pub energy: f64,
    pub exterior_ell: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitResult {
    pub samples: Vec<TrajectorySample>,
    pub classification: OrbitClassification,
    pub drift: Drift,
    /// Largest pointwise distance between exterior samples and the analytic
    /// oscillator ellipse through the start of each exterior segment.
    pub exterior_ellipse_deviation: f64,
    pub outer_turning_times: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub h_max: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: INTEGRATOR_RTOL,
            h_max: 0.05,
        }
    }
}

fn rhs(b: f64) -> impl Fn(f64, &[f64; 4]) -> [f64; 4] {
    move |_, s| [s[2], s[3], -s[0] + b * s[3], -s[1] - b * s[2]]
}

fn energy_of(s: &[f64; 4]) -> f64 {
    0.5 * (s[2] * s[2] + s[3] * s[3] + s[0] * s[0] + s[1] * s[1])
}

fn kinetic_ell(s: &[f64; 4]) -> f64 {
    s[0] * s[3] - s[1] * s[2]
}

/// Oscillator flow of `s` over time `t`.
fn oscillator_flow(s: &[f64; 4], t: f64) -> [f64; 4] {
    let (sn, cs) = t.sin_cos();
    [
        s[0] * cs + s[2] * sn,
        s[1] * cs + s[3] * sn,
        -s[0] * sn + s[2] * cs,
        -s[1] * sn + s[3] * cs,
    ]
}

fn sample(t: f64, s: &[f64; 4], theta: f64, inside: bool) -> TrajectorySample {
    let r2 = s[0] * s[0] + s[1] * s[1];
    let r = r2.sqrt();
    let (r_dot, theta_dot) = if r > 0.0 {
        ((s[0] * s[2] + s[1] * s[3]) / r, kinetic_ell(s) / r2)
    } else {
        (s[2].hypot(s[3]), 0.0)
    };
    TrajectorySample {
        t,
        r,
        theta,
        x: s[0],
        y: s[1],
        r_dot,
        theta_dot,
        inside,
    }
}

fn reduce_mod_pi(angle: f64) -> f64 {
    let a = angle.rem_euclid(PI);
    if a > PI / 2.0 {
        a - PI
    } else {
        a
    }
}

fn segment_solver(
    profile: &FluxProfile,
    inside: bool,
    control: &StepControl,
    e: f64,
) -> DormandPrince<4> {
    let v_scale = (2.0 * e).sqrt().max(1e-300);
    let mut solver = DormandPrince::<4>::new(control.rtol, 0.0);
    if inside {
        let eps = profile.epsilon;
        let b = profile.field(true).abs().max(1.0 / (eps * eps));
        // Resolve the cyclotron motion and the disc crossing time.
        let time_scale = (1.0 / b).min(eps / v_scale);
        solver.atol = [
            control.rtol * eps * 1e-2,
            control.rtol * eps * 1e-2,
            control.rtol * v_scale * 1e-2,
            control.rtol * v_scale * 1e-2,
        ];
        solver.h_init = 1e-3 * time_scale;
        solver.h_max = control.h_max.min(0.1 * time_scale);
    } else {
        let r_scale = v_scale;
        solver.atol = [
            control.rtol * r_scale * 1e-2,
            control.rtol * r_scale * 1e-2,
            control.rtol * v_scale * 1e-2,
            control.rtol * v_scale * 1e-2,
        ];
        solver.h_init = 1e-4;
        solver.h_max = control.h_max;
    }
    solver
}

/// Integrates the regularized relative orbit from `initial` up to `t_max`.
pub fn integrate_orbit(
    e: f64,
    ell: f64,
    profile: &FluxProfile,
    initial: &PolarOrbitState,
    t_max: f64,
    control: &StepControl,
) -> Result<OrbitResult> {
    if !(e > 0.0) {
        return Err(invalid(format!("energy must be positive, got {e}")));
    }
    if !(t_max > 0.0) {
        return Err(invalid("t_max must be positive"));
    }
    let start = initial.to_cartesian(e, ell, profile)?;
    let eps2 = profile.epsilon * profile.epsilon;
    let start_dir = (initial.theta.cos(), initial.theta.sin());
    let sense = if kinetic_ell(&start) >= 0.0 {
        1.0
    } else {
        -1.0
    };

    let mut samples = Vec::new();
    let mut outer_turning_times = Vec::new();
    let mut angular_period = None;
    let mut deflections = Vec::new();
    let mut entered = false;
    let mut exited = false;
    let mut max_de = 0.0_f64;
    let mut max_dl = 0.0_f64;
    let mut ellipse_dev = 0.0_f64;

    let (mut t, mut s) = (0.0, start);
    let mut inside = start[0] * start[0] + start[1] * start[1] < eps2;
    let mut theta = initial.theta;
    let mut entry_theta = None;
    samples.push(sample(t, &s, theta, inside));

    while t < t_max {
        let solver = segment_solver(profile, inside, control, e);
        let events = [
            // Disc boundary.
            Event::new(
                move |_, y: &[f64; 4]| y[0] * y[0] + y[1] * y[1] - eps2,
                if inside {
                    Direction::Rising
                } else {
                    Direction::Falling
                },
                true,
            ),
            // Outer turning points: r·v falls through zero.
            Event::new(
                |_, y: &[f64; 4]| y[0] * y[2] + y[1] * y[3],
                Direction::Falling,
                false,
            ),
            // Return to the starting ray in the sense of rotation.
            Event::new(
                move |_, y: &[f64; 4]| sense * (start_dir.0 * y[1] - start_dir.1 * y[0]),
                Direction::Rising,
                false,
            ),
        ];
        let segment_start = s;
        let eps = profile.epsilon;
        let cap = move |y: &[f64; 4]| {
            let r = y[0].hypot(y[1]);
            let speed = y[2].hypot(y[3]) + r;
            if inside {
                f64::INFINITY
            } else {
                (0.25 * (r - eps) / speed).max(1e-3 * eps / speed)
            }
        };
        let sol = solver.solve_capped(rhs(profile.field(inside)), t, s, t_max, &events, cap)?;
        for (k, (&tk, yk)) in sol.t.iter().zip(&sol.y).enumerate().skip(1) {
            let prev = &sol.y[k - 1];
            let mut dtheta = yk[1].atan2(yk[0]) - prev[1].atan2(prev[0]);
            dtheta -= TAU * (dtheta / TAU).round();
            theta += dtheta;
            samples.push(sample(tk, yk, theta, inside));
            max_de = max_de.max((energy_of(yk) - e).abs() / e);
            if !inside {
                let ell_now = kinetic_ell(yk) + profile.alpha;
                max_dl = max_dl.max((ell_now - ell).abs() / ell.abs().max(1.0));
                let analytic = oscillator_flow(&segment_start, tk - t);
                let dev = ((analytic[0] - yk[0]).powi(2) + (analytic[1] - yk[1]).powi(2)).sqrt();
                ellipse_dev = ellipse_dev.max(dev);
            }
        }
        for hit in &sol.events {
            match hit.index {
                1 if !inside && hit.y[0].hypot(hit.y[1]) > profile.epsilon => {
                    outer_turning_times.push(hit.t)
                }
                2 => {
                    let dot = start_dir.0 * hit.y[0] + start_dir.1 * hit.y[1];
                    if dot > 0.0 && angular_period.is_none() && !entered {
                        angular_period = Some(hit.t);
                    }
                }
                _ => {}
            }
        }
        let (t_end, s_end) = sol.last();
        t = t_end;
        s = s_end;
        match sol.stopped_by {
            Some(0) => {
                if inside {
                    exited = true;
                    if let Some(th0) = entry_theta.take() {
                        deflections.push(theta - th0);
                    }
                } else {
                    entered = true;
                    entry_theta = Some(theta);
                }
                inside = !inside;
            }
            _ => break,
        }
    }

    let radial_period = match outer_turning_times.as_slice() {
        [a, b, ..] => Some(b - a),
        [a] if initial_is_outer_turning(&start) => Some(*a),
        _ => None,
    };
    let delta_theta_interior = deflections.first().map(|d| reduce_mod_pi(*d));
    let starts_inside = start[0] * start[0] + start[1] * start[1] < eps2;
    let kind = if starts_inside && !exited {
        OrbitKind::Interior
    } else if !entered && !starts_inside {
        OrbitKind::ExteriorEllipse
    } else {
        OrbitKind::Crossing
    };
    let period = match kind {
        OrbitKind::ExteriorEllipse => angular_period.unwrap_or(f64::NAN),
        _ => radial_period.unwrap_or(f64::NAN),
    };
    Ok(OrbitResult {
        samples,
        classification: OrbitClassification {
            kind,
            period,
            angular_period,
            radial_period,
            delta_theta_interior,
        },
        drift: Drift {
            energy: max_de,
            exterior_ell: max_dl,
        },
        exterior_ellipse_deviation: ellipse_dev,
        outer_turning_times,
    })
}

fn initial_is_outer_turning(s: &[f64; 4]) -> bool {
    let rv = s[0] * s[2] + s[1] * s[3];
    rv.abs() <= 1e-12 * (s[0].hypot(s[1]) * s[2].hypot(s[3])).max(1e-300)
}

/// Angle swept across the disc by the `ℓ = α` orbit entering radially at
/// `r = ε`, reduced modulo π (relative angles of identical particles are
/// defined modulo π; at α = 0 the straight passage through the origin gives
/// exactly zero).
pub fn interior_deflection(e: f64, alpha: f64, epsilon: f64) -> Result<f64> {
    interior_deflection_with(e, alpha, epsilon, &StepControl::default())
}

pub fn interior_deflection_with(
    e: f64,
    alpha: f64,
    epsilon: f64,
    control: &StepControl,
) -> Result<f64> {
    let profile = FluxProfile::new(epsilon, alpha)?;
    if !(e > 0.0) {
        return Err(invalid("energy must be positive"));
    }
    if epsilon * epsilon >= 2.0 * e {
        return Err(invalid(
            "disc radius must lie inside the classical turning radius",
        ));
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let entry = PolarOrbitState {
        r: epsilon,
        theta: 0.0,
        r_dot_sign: -1.0,
    };
    let s0 = entry.to_cartesian(e, alpha, &profile)?;
    let eps2 = epsilon * epsilon;
    let solver = segment_solver(&profile, true, control, e);
    let events = [
        Event::new(
            move |_, y: &[f64; 4]| y[0] * y[0] + y[1] * y[1] - eps2,
            Direction::Rising,
            true,
        ),
        Event::new(
            |_, y: &[f64; 4]| y[0] * y[2] + y[1] * y[3],
            Direction::Rising,
            false,
        ),
    ];
    // The passage takes a few cyclotron periods at most.
    let t_max = 100.0 * (epsilon / (2.0 * e).sqrt()).max(TAU / profile.field(true).abs());
    let sol = solver.solve(rhs(profile.field(true)), 0.0, s0, t_max, &events)?;
    if !sol.events.iter().any(|h| h.index == 1) {
        return Err(Error::NonConvergence(format!(
            "no interior turning point for α = {alpha}, ε = {epsilon}; ℓ lies outside the \
             admissible window"
        )));
    }
    if sol.stopped_by != Some(0) {
        return Err(Error::NonConvergence("orbit did not leave the disc".into()));
    }
    let mut theta = 0.0;
    for w in sol.y.windows(2) {
        let mut d = w[1][1].atan2(w[1][0]) - w[0][1].atan2(w[0][0]);
        d -= TAU * (d / TAU).round();
        theta += d;
    }
    let exit = sol.last().1;
    if exit[0] * exit[2] + exit[1] * exit[3] <= 0.0 {
        return Err(Error::NonConvergence(
            "exit velocity is not outgoing".into(),
        ));
    }
    Ok(reduce_mod_pi(theta))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitClassification {
    pub kind: OrbitKind,
    /// Half-orbit period for reflecting orbits (extrapolated to ε → 0),
    /// elliptical period otherwise.
    pub period: f64,
    /// Period of a generic exterior ellipse at the same energy.
    pub elliptical_period: f64,
    pub deflections: Vec<(f64, f64)>,
    pub radial_periods: Vec<(f64, f64)>,
    pub monotone: bool,
    /// Least-squares exponent p in Δθ ∝ ε^p.
    pub power_law_exponent: Option<f64>,
    /// Set when the deflection sequence is not strictly decreasing.
    pub flagged: bool,
    /// α = 0: the orbit is the oscillator's straight line through the origin.
    pub degenerate_line: bool,
}

/// Polynomial extrapolation of `(ε, value)` pairs to ε = 0 (Neville).
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> f64 {
    let mut p: Vec<f64> = points.iter().map(|(_, v)| *v).collect();
    let x: Vec<f64> = points.iter().map(|(e, _)| *e).collect();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
        }
    }
    p[0]
}

fn power_law_exponent(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, d)| *d > 0.0)
        .map(|(e, d)| (e.ln(), d.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Reference elliptical period: an exterior orbit with `ℓ − α = E/2`.
pub fn elliptical_period(e: f64, alpha: f64, epsilon: f64) -> Result<f64> {
    let profile = FluxProfile::new(epsilon, alpha)?;
    let ell = alpha + 0.5 * e;
    let start = PolarOrbitState::outer_turning_point(e, ell, &profile)?;
    let res = integrate_orbit(e, ell, &profile, &start, 1.2 * TAU, &StepControl::default())?;
    if res.classification.kind != OrbitKind::ExteriorEllipse {
        return Err(Error::NonConvergence(
            "reference orbit entered the disc".into(),
        ));
    }
    res.classification
        .angular_period
        .ok_or_else(|| Error::NonConvergence("reference orbit did not close".into()))
}

/// Classifies the orbit `(E, ℓ)` in the limit of vanishing disc radius.
pub fn classify_limit(
    e: f64,
    ell: f64,
    alpha: f64,
    epsilons: &[f64],
) -> Result<LimitClassification> {
    if epsilons.is_empty() {
        return Err(invalid("ε sequence is empty"));
    }
    if epsilons.iter().any(|x| !(*x > 0.0)) || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid(
            "ε sequence must be positive and strictly decreasing",
        ));
    }
    let smallest = *epsilons.last().expect("non-empty");
    let elliptical = elliptical_period(e, alpha, smallest)?;
    let reflecting = (ell - alpha).abs() <= 1e-9 * alpha.abs().max(1.0);

    if !reflecting {
        let profile = FluxProfile::new(smallest, alpha)?;
        let start = PolarOrbitState::outer_turning_point(e, ell, &profile)?;
        let res = integrate_orbit(e, ell, &profile, &start, 1.2 * TAU, &StepControl::default())?;
        let period = res.classification.angular_period.unwrap_or(elliptical);
        return Ok(LimitClassification {
            kind: OrbitKind::ExteriorEllipse,
            period,
            elliptical_period: elliptical,
            deflections: Vec::new(),
            radial_periods: Vec::new(),
            monotone: true,
            power_law_exponent: None,
            flagged: false,
            degenerate_line: false,
        });
    }

    let mut deflections = Vec::with_capacity(epsilons.len());
    let mut radial = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        deflections.push((eps, interior_deflection(e, alpha, eps)?));
        radial.push((eps, reflecting_period(e, alpha, eps)?));
    }
    let degenerate_line = alpha == 0.0;
    let monotone = degenerate_line || deflections.windows(2).all(|w| w[1].1 < w[0].1);
    let exponent = power_law_exponent(&deflections);
    let tail = &radial[radial.len().saturating_sub(3)..];
    Ok(LimitClassification {
        kind: OrbitKind::ReflectingRadial,
        period: extrapolate_to_zero(tail),
        elliptical_period: elliptical,
        deflections,
        radial_periods: radial,
        monotone,
        power_law_exponent: exponent,
        flagged: !monotone,
        degenerate_line,
    })
}

/// Time between successive outer turning points of the `ℓ = α` orbit at
/// finite ε.
pub fn reflecting_period(e: f64, alpha: f64, epsilon: f64) -> Result<f64> {
    let profile = FluxProfile::new(epsilon, alpha)?;
    let start = PolarOrbitState::outer_turning_point(e, alpha, &profile)?;
    let res = integrate_orbit(
        e,
        alpha,
        &profile,
        &start,
        1.5 * PI,
        &StepControl::default(),
    )?;
    res.classification.radial_period.ok_or_else(|| {
        Error::NonConvergence(format!(
            "no return to the outer turning point at ε = {epsilon}"
        ))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowPoint {
    pub alpha: f64,
    pub ell: f64,
    pub reaches_disc: bool,
    pub interior_turning_point: bool,
}

impl WindowPoint {
    pub fn admissible(&self) -> bool {
        self.reaches_disc && self.interior_turning_point
    }
}

/// Scans an `(ℓ, α)` grid for orbits that have both an exterior turning
/// point and an interior one, by sampling the radicand of the radial
/// equation.
pub fn admissible_window_scan(
    e: f64,
    epsilon: f64,
    alphas: &[f64],
    ells: &[f64],
) -> Result<Vec<WindowPoint>> {
    let mut out = Vec::with_capacity(alphas.len() * ells.len());
    for &alpha in alphas {
        let profile = FluxProfile::new(epsilon, alpha)?;
        for &ell in ells {
            let at = |r: f64| {
                PolarOrbitState {
                    r,
                    theta: 0.0,
                    r_dot_sign: 1.0,
                }
                .radicand(e, ell, &profile)
            };
            let reaches_disc = at(epsilon) >= 0.0;
            let interior_turning_point =
                reaches_disc && (1..2000).any(|k| at(epsilon * f64::from(k) / 2000.0) < 0.0);
            out.push(WindowPoint {
                alpha,
                ell,
                reaches_disc,
                interior_turning_point,
            });
        }
    }
    Ok(out)
}

/// Largest `|ℓ − α|` among admissible grid points, per α.
pub fn observed_window(points: &[WindowPoint]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for p in points.iter().filter(|p| p.admissible()) {
        let w = (p.ell - p.alpha).abs();
        match out.iter_mut().find(|(a, _)| *a == p.alpha) {
            Some(entry) => entry.1 = entry.1.max(w),
            None => out.push((p.alpha, w)),
        }
    }
    out
}
