//! Conserved quantities, orientation signatures and angular-momentum flows.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::symplectic::{set_block, GeneratorMatrix, PhasePoint, UBlock, VBlock};

/// Relative tolerance for treating `J_ij` (relative to the pair energy) or
/// `r_ij` (relative to the radii) as zero.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// The 4×4 angular-momentum block `L = v₇`.
pub fn l_block() -> Matrix4<f64> {
    VBlock::V7.matrix()
}

/// Total energy `½ Σ ω_μ²`.
pub fn energy(omega: &PhasePoint) -> f64 {
    0.5 * omega.coords().norm_squared()
}

/// Energy `½|ω_i|²` of one particle block.
pub fn particle_energy(omega: &PhasePoint, i: usize) -> f64 {
    0.5 * omega.particle(i).norm_squared()
}

/// Energy `½|ω_i - ω_j|²` of the relative block.
pub fn pair_energy(omega: &PhasePoint, i: usize, j: usize) -> f64 {
    0.5 * omega.relative(i, j).norm_squared()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Particle(usize),
    Pair(usize, usize),
}

/// `J = x p_y - y p_x` of a single `(x, y, p_x, p_y)` block.
pub fn block_angular_momentum(w: &Vector4<f64>) -> f64 {
    w[0] * w[3] - w[1] * w[2]
}

/// `½ wᵀ L w` for a 4-component block.
fn half_quadratic(w: &Vector4<f64>, m: &Matrix4<f64>) -> f64 {
    0.5 * w.dot(&(m * w))
}

fn check_particle(omega: &PhasePoint, i: usize) -> Result<()> {
    if i >= omega.n_particles() {
        return Err(invalid(format!(
            "particle index {i} out of range for N = {}",
            omega.n_particles()
        )));
    }
    Ok(())
}

fn check_pair(omega: &PhasePoint, i: usize, j: usize) -> Result<()> {
    check_particle(omega, i)?;
    check_particle(omega, j)?;
    if i == j {
        return Err(invalid("pair selector needs i != j"));
    }
    Ok(())
}

/// `J_i = x_i p_iy - y_i p_ix` or `J_ij = ½ ω_ijᵀ L ω_ij`.
pub fn angular_momentum(omega: &PhasePoint, selector: Selector) -> Result<f64> {
    match selector {
        Selector::Particle(i) => {
            check_particle(omega, i)?;
            Ok(block_angular_momentum(&omega.particle(i)))
        }
        Selector::Pair(i, j) => {
            check_pair(omega, i, j)?;
            Ok(half_quadratic(&omega.relative(i, j), &l_block()))
        }
    }
}

/// The 4N×4N matrices `L_i` and `L_ij` with `J = ½ ωᵀ L ω`.
pub fn angular_momentum_matrix(n_particles: usize, selector: Selector) -> Result<DMatrix<f64>> {
    let l = l_block();
    let mut m = DMatrix::zeros(4 * n_particles, 4 * n_particles);
    match selector {
        Selector::Particle(i) => {
            if i >= n_particles {
                return Err(invalid("particle index out of range"));
            }
            set_block(&mut m, i, i, &l);
        }
        Selector::Pair(i, j) => {
            if i >= n_particles || j >= n_particles || i == j {
                return Err(invalid("invalid pair selector"));
            }
            set_block(&mut m, i, i, &l);
            set_block(&mut m, j, j, &l);
            set_block(&mut m, i, j, &-l);
            set_block(&mut m, j, i, &-l);
        }
    }
    Ok(m)
}

/// Signs `ε_ij` of all pairwise angular momenta, keyed by `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SignatureRepr", into = "SignatureRepr")]
pub struct OrientationSignature {
    n_particles: usize,
    signs: BTreeMap<(usize, usize), i8>,
}

/// Wire form: signs in lexicographic pair order.
#[derive(Serialize, Deserialize)]
struct SignatureRepr {
    n_particles: usize,
    signs: Vec<i8>,
}

impl TryFrom<SignatureRepr> for OrientationSignature {
    type Error = Error;

    fn try_from(r: SignatureRepr) -> Result<Self> {
        Self::from_signs(r.n_particles, &r.signs)
    }
}

impl From<OrientationSignature> for SignatureRepr {
    fn from(s: OrientationSignature) -> Self {
        Self {
            n_particles: s.n_particles,
            signs: s.signs(),
        }
    }
}

/// Pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn pairs(n_particles: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n_particles).flat_map(move |i| ((i + 1)..n_particles).map(move |j| (i, j)))
}

impl OrientationSignature {
    /// Builds a signature from signs listed in lexicographic pair order.
    pub fn from_signs(n_particles: usize, signs: &[i8]) -> Result<Self> {
        let expected = n_particles
            .checked_mul(n_particles.saturating_sub(1))
            .map_or(usize::MAX, |m| m / 2);
        if signs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: signs.len(),
            });
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(invalid("orientation signs must be +1 or -1"));
        }
        Ok(Self {
            n_particles,
            signs: pairs(n_particles).zip(signs.iter().copied()).collect(),
        })
    }

    /// The signature whose bits (lowest first, pair order) mark `-1` entries.
    pub fn from_index(n_particles: usize, index: u64) -> Result<Self> {
        if n_particles > 11 {
            return Err(invalid("signature indices cover at most 11 particles"));
        }
        let m = n_particles * n_particles.saturating_sub(1) / 2;
        let signs: Vec<i8> = (0..m)
            .map(|b| if b < 64 && index >> b & 1 == 1 { -1 } else { 1 })
            .collect();
        Self::from_signs(n_particles, &signs)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn sign(&self, i: usize, j: usize) -> Option<i8> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.signs.get(&key).copied()
    }

    /// Signs in lexicographic pair order.
    pub fn signs(&self) -> Vec<i8> {
        self.signs.values().copied().collect()
    }

    /// `Σ_{i<j} ε_ij`.
    pub fn slope(&self) -> i64 {
        self.signs.values().map(|s| i64::from(*s)).sum()
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// Membership of a phase point in `Δ` (coincident positions) and `Δ′`
/// (degenerate trajectories, some `J_ij = 0`). The two are reported
/// independently.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub in_delta: bool,
    pub in_delta_prime: bool,
    /// Pairs with `|J_ij|` at or below tolerance.
    pub offending_pairs: Vec<(usize, usize)>,
    /// Pairs with coincident positions.
    pub coincident_pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Orientation {
    Signature(OrientationSignature),
    Degenerate(DegeneracyReport),
}

/// `r_ij = 0` test with the scale-aware tolerance `tol·max(1, r_i, r_j)`.
pub fn positions_coincide(omega: &PhasePoint, i: usize, j: usize, tol: f64) -> bool {
    let (wi, wj) = (omega.particle(i), omega.particle(j));
    let ri = wi[0].hypot(wi[1]);
    let rj = wj[0].hypot(wj[1]);
    let rij = (wi[0] - wj[0]).hypot(wi[1] - wj[1]);
    rij < tol * 1f64.max(ri).max(rj)
}

/// For N = 1 (the relative system) Δ is `r = 0` itself.
pub fn at_origin(omega: &PhasePoint, i: usize, tol: f64) -> bool {
    let w = omega.particle(i);
    w[0].hypot(w[1]) < tol * 1f64.max(w.norm())
}

pub fn degeneracy_report(omega: &PhasePoint, tol: f64) -> DegeneracyReport {
    let n = omega.n_particles();
    let mut offending = Vec::new();
    let mut coincident = Vec::new();
    for (i, j) in pairs(n) {
        let jij = half_quadratic(&omega.relative(i, j), &l_block());
        if jij.abs() <= tol * pair_energy(omega, i, j) {
            offending.push((i, j));
        }
        if positions_coincide(omega, i, j, tol) {
            coincident.push((i, j));
        }
    }
    DegeneracyReport {
        in_delta: !coincident.is_empty(),
        in_delta_prime: !offending.is_empty(),
        offending_pairs: offending,
        coincident_pairs: coincident,
    }
}

/// Signs of all `J_ij`, or the degeneracy report when some `|J_ij| ≤ tol·E_ij`.
pub fn orientation_signature(omega: &PhasePoint, tol: f64) -> Orientation {
    let report = degeneracy_report(omega, tol);
    if report.in_delta_prime {
        return Orientation::Degenerate(report);
    }
    let signs: Vec<i8> = pairs(omega.n_particles())
        .map(|(i, j)| {
            if half_quadratic(&omega.relative(i, j), &l_block()) > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    // Length always matches the pair count.
    Orientation::Signature(
        OrientationSignature::from_signs(omega.n_particles(), &signs).expect("pair count"),
    )
}

/// Generators with a closed-form angular-momentum flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowGenerator {
    /// `T_i` with block `u`.
    Single { block: UBlock, particle: usize },
    /// `T_ij` with block `v`.
    Pair { block: VBlock, i: usize, j: usize },
    /// `u = cos β·u₃ + sin β·u₄` acting on the N = 1 relative system.
    Mixed { beta: f64 },
}

/// `u(β) = cos β·u₃ + sin β·u₄`.
pub fn mixed_u(beta: f64) -> Matrix4<f64> {
    UBlock::U3.matrix() * beta.cos() + UBlock::U4.matrix() * beta.sin()
}

/// `J_u(β) = ½ ωᵀ L u(β) ω` of a 4-component block.
fn j_u_block(w: &Vector4<f64>, beta: f64) -> f64 {
    0.5 * w.dot(&(l_block() * mixed_u(beta) * w))
}

/// Closed-form `J_m(σ)` along `exp(σT)` for the generators of
/// [`FlowGenerator`]. For `Mixed`, `m` must be 0 and the point must be the
/// N = 1 relative system; the flow is `√(J² + J_u²)·cos(2σ - δ)` with
/// `δ = atan2(J_u, J)`.
pub fn j_flow_closed_form(
    omega: &PhasePoint,
    generator: FlowGenerator,
    m: usize,
    sigma: f64,
) -> Result<f64> {
    check_particle(omega, m)?;
    let l = l_block();
    let (s, c) = sigma.sin_cos();
    let jm = block_angular_momentum(&omega.particle(m));
    match generator {
        FlowGenerator::Single { block, particle } => {
            check_particle(omega, particle)?;
            if particle != m {
                return Ok(jm);
            }
            let u = block.matrix();
            let wi = omega.particle(particle);
            let ulu = wi.dot(&(u.transpose() * l * u * wi));
            let mixed = wi.dot(&((u.transpose() * l + l * u) * wi));
            Ok(jm + 0.5 * (-s * s * (2.0 * jm - ulu) + s * c * mixed))
        }
        FlowGenerator::Pair { block, i, j } => {
            check_pair(omega, i, j)?;
            if i > j {
                return Err(invalid("pair generator needs i < j"));
            }
            let v = block.matrix();
            let (wi, wj) = (omega.particle(i), omega.particle(j));
            if m == i {
                let vlv = wj.dot(&(v.transpose() * l * v * wj));
                let cross = wi.dot(&(l * v * wj));
                Ok(jm + 0.5 * (-s * s * (2.0 * jm - vlv) + 2.0 * s * c * cross))
            } else if m == j {
                let vlv = wi.dot(&(v * l * v.transpose() * wi));
                let cross = wi.dot(&(v * l * wj));
                Ok(jm + 0.5 * (-s * s * (2.0 * jm - vlv) - 2.0 * s * c * cross))
            } else {
                Ok(jm)
            }
        }
        FlowGenerator::Mixed { beta } => {
            if omega.n_particles() != 1 {
                return Err(invalid(
                    "the mixed u₃/u₄ flow acts on the N = 1 relative system",
                ));
            }
            let w = omega.particle(0);
            let ju = j_u_block(&w, beta);
            let amplitude = jm.hypot(ju);
            let delta = ju.atan2(jm);
            Ok(amplitude * (2.0 * sigma - delta).cos())
        }
    }
}

/// `(J_u(β), (J_u)_max)` with `(J_u)_max = √(J_u(0)² + J_u′(0)²)`.
pub fn j_u_and_max(omega: &PhasePoint, beta: f64) -> Result<(f64, f64)> {
    if omega.n_particles() != 1 {
        return Err(invalid("J_u is defined for the N = 1 relative system"));
    }
    let w = omega.particle(0);
    let ju0 = j_u_block(&w, 0.0);
    // J_u is harmonic in β, so J_u′(0) = J_u(π/2).
    let dju0 = j_u_block(&w, std::f64::consts::FRAC_PI_2);
    Ok((j_u_block(&w, beta), ju0.hypot(dju0)))
}

/// The maximizing mixing angle `β̂ = atan2(J_u′(0), J_u(0))`.
pub fn maximizing_beta(omega: &PhasePoint) -> Result<f64> {
    if omega.n_particles() != 1 {
        return Err(invalid("J_u is defined for the N = 1 relative system"));
    }
    let w = omega.particle(0);
    Ok(j_u_block(&w, std::f64::consts::FRAC_PI_2).atan2(j_u_block(&w, 0.0)))
}

/// Infinitesimal variation `δJ_mn = Σ_j ω_mnᵀ L (T_mj - T_nj) ω_j` along `T`.
pub fn delta_j_mn(omega: &PhasePoint, t: &GeneratorMatrix, m: usize, n: usize) -> Result<f64> {
    check_pair(omega, m, n)?;
    if t.n_particles() != omega.n_particles() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            actual: t.dim(),
        });
    }
    let l = l_block();
    let wmn = omega.relative(m, n);
    let lw = l * wmn;
    let total = (0..omega.n_particles())
        .map(|j| lw.dot(&((t.block(m, j) - t.block(n, j)) * omega.particle(j))))
        .sum();
    Ok(total)
}
