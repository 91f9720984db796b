//! Orientation classes of periodic orbits and the symmetry that survives the
//! removal of coincident points.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::observables::{
    angular_momentum, energy, j_u_and_max, maximizing_beta, mixed_u, orientation_signature, pairs,
    Orientation, OrientationSignature, Selector, DEGENERACY_TOL,
};
use crate::symplectic::{group_element, GeneratorMatrix, PhasePoint, UBlock};

/// Minimum number of σ samples along a connection path.
pub const MIN_PATH_SAMPLES: usize = 200;
/// Endpoint accuracy of a connection path.
pub const PATH_ENDPOINT_TOL: f64 = 1e-8;

/// One-parameter path joining two same-sign trajectories of the relative
/// system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectionPath {
    pub beta_hat: f64,
    pub sigma_hat: f64,
    /// `(σ, J(σ))`, sorted by σ, measured by transporting the start point.
    pub samples: Vec<(f64, f64)>,
}

impl ConnectionPath {
    pub fn min_abs_j(&self) -> f64 {
        self.samples
            .iter()
            .map(|(_, j)| j.abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn single_signed(&self) -> bool {
        let positive = self.samples.iter().all(|(_, j)| *j > 0.0);
        let negative = self.samples.iter().all(|(_, j)| *j < 0.0);
        positive || negative
    }

    pub fn endpoint(&self) -> f64 {
        self.samples
            .iter()
            .min_by(|a, b| {
                (a.0 - self.sigma_hat)
                    .abs()
                    .total_cmp(&(b.0 - self.sigma_hat).abs())
            })
            .map(|s| s.1)
            .unwrap_or(f64::NAN)
    }
}

fn relative_generator(u: &Matrix4<f64>) -> Result<GeneratorMatrix> {
    GeneratorMatrix::from_matrix(1, DMatrix::from_iterator(4, 4, u.iter().copied()))
}

fn transported_j(g: &DMatrix<f64>, start: &PhasePoint) -> f64 {
    let moved = g * start.coords();
    moved[0] * moved[3] - moved[1] * moved[2]
}

/// Connects `start` (an N = 1 relative phase point) to the trajectory with
/// angular momentum `j_target` at the same energy, without crossing `J = 0`.
pub fn connect_same_sign(start: &PhasePoint, j_target: f64) -> Result<ConnectionPath> {
    if start.n_particles() != 1 {
        return Err(invalid(
            "connection paths live on the N = 1 relative system",
        ));
    }
    let e = energy(start);
    let j = angular_momentum(start, Selector::Particle(0))?;
    if j.abs() <= DEGENERACY_TOL * e {
        return Err(invalid("start trajectory is degenerate (J = 0)"));
    }
    if j_target == 0.0 || j_target.signum() != j.signum() {
        return Err(invalid(format!(
            "J = {j} and J_target = {j_target} differ in sign; any interpolating family must \
             contain a degenerate trajectory"
        )));
    }
    if j_target.abs() > e * (1.0 + 1e-12) {
        return Err(invalid(format!(
            "|J_target| = {} exceeds E = {e}",
            j_target.abs()
        )));
    }

    let beta_hat = maximizing_beta(start)?;
    let (ju, _) = j_u_and_max(start, beta_hat)?;
    let amplitude = j.hypot(ju);
    let delta = ju.atan2(j);

    // J(σ) = A cos(2σ - δ); keep the phase inside the interval where cos has
    // the sign of J.
    let centre = if j > 0.0 { 0.0 } else { PI };
    let wrap = |phi: f64| centre + (phi - centre + PI).rem_euclid(TAU) - PI;
    let phi0 = wrap(-delta);
    let c = (j_target / amplitude).clamp(-1.0, 1.0);
    let a = c.acos();
    let target_phi = [wrap(a), wrap(-a)]
        .into_iter()
        .filter(|p| (p - centre).abs() <= PI / 2.0)
        .min_by(|x, y| (x - phi0).abs().total_cmp(&(y - phi0).abs()))
        .ok_or_else(|| Error::NonConvergence("no admissible phase for the target".into()))?;
    let sigma_hat = 0.5 * (target_phi - phi0);

    let t = relative_generator(&mixed_u(beta_hat))?;
    let mut sigmas: Vec<f64> = (0..MIN_PATH_SAMPLES)
        .map(|k| sigma_hat * k as f64 / (MIN_PATH_SAMPLES - 1) as f64)
        .collect();
    let eval = |s: f64| transported_j(&group_element(&t, s).0, start);
    let mut samples: Vec<(f64, f64)> = sigmas.iter().map(|&s| (s, eval(s))).collect();

    // Refine around the smallest |J|.
    if sigma_hat != 0.0 {
        let (kmin, _) = samples
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.abs().total_cmp(&b.1 .1.abs()))
            .expect("non-empty");
        let lo = sigmas[kmin.saturating_sub(1)];
        let hi = sigmas[(kmin + 1).min(sigmas.len() - 1)];
        sigmas = (1..40)
            .map(|k| lo + (hi - lo) * f64::from(k) / 40.0)
            .collect();
        samples.extend(sigmas.iter().map(|&s| (s, eval(s))));
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let path = ConnectionPath {
        beta_hat,
        sigma_hat,
        samples,
    };
    let reached = eval(sigma_hat);
    if (reached - j_target).abs() > PATH_ENDPOINT_TOL * e.max(1.0) {
        return Err(Error::NonConvergence(format!(
            "path endpoint J = {reached} misses target {j_target}"
        )));
    }
    if !path.single_signed() {
        return Err(Error::NonConvergence(
            "connection path changed the sign of J".into(),
        ));
    }
    Ok(path)
}

/// How a catalog representative was constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// Concentric circles with the given radii and rotation senses.
    ConcentricCircles { radii: Vec<f64>, senses: Vec<i8> },
    /// General elliptical orbits found by sign-constrained local search.
    Ellipses,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyClass {
    pub signature: OrientationSignature,
    pub representative: PhasePoint,
    pub construction: Construction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCatalog {
    pub n_particles: usize,
    pub classes: Vec<FamilyClass>,
    pub count: usize,
    /// For N >= 3 the count is only a lower bound on the number of families.
    pub count_is_lower_bound: bool,
    /// Sign patterns neither construction realized.
    pub unrealized: Vec<OrientationSignature>,
}

impl FamilyCatalog {
    pub fn expected_count(n_particles: usize) -> usize {
        1 << (n_particles * (n_particles - 1) / 2)
    }

    pub fn is_complete(&self) -> bool {
        self.unrealized.is_empty() && self.count == Self::expected_count(self.n_particles)
    }

    /// Reads a catalog written by `families --export` and checks that it is
    /// consistent: sizes agree, labels are distinct and every representative
    /// actually has the signature it is filed under.
    pub fn from_json(text: &str) -> Result<Self> {
        let catalog: FamilyCatalog = serde_json::from_str(text)?;
        let n = catalog.n_particles;
        if !(2..=6).contains(&n) {
            return Err(invalid(format!("catalog N = {n} outside 2..=6")));
        }
        if catalog.count != catalog.classes.len() {
            return Err(invalid("catalog count does not match its class list"));
        }
        if catalog.count + catalog.unrealized.len() > Self::expected_count(n) {
            return Err(invalid("catalog lists more signatures than exist"));
        }
        let mut seen = std::collections::HashSet::new();
        for sig in catalog
            .classes
            .iter()
            .map(|c| &c.signature)
            .chain(&catalog.unrealized)
        {
            if sig.n_particles() != n {
                return Err(invalid("signature size does not match the catalog"));
            }
            if !seen.insert(sig.clone()) {
                return Err(invalid("signature listed twice"));
            }
        }
        for class in &catalog.classes {
            if class.representative.n_particles() != n {
                return Err(invalid("representative size does not match the catalog"));
            }
            if let Construction::ConcentricCircles { radii, senses } = &class.construction {
                if radii.len() != n || senses.len() != n {
                    return Err(invalid("circle construction has the wrong length"));
                }
            }
            match orientation_signature(&class.representative, DEGENERACY_TOL) {
                Orientation::Signature(found) if found == class.signature => {}
                _ => return Err(invalid("representative does not realize its signature")),
            }
        }
        Ok(catalog)
    }

    /// Classes that the concentric-circle construction could not realize.
    pub fn not_realized_by_circles(&self) -> Vec<&OrientationSignature> {
        self.classes
            .iter()
            .filter(|c| !matches!(c.construction, Construction::ConcentricCircles { .. }))
            .map(|c| &c.signature)
            .chain(self.unrealized.iter())
            .collect()
    }
}

fn signature_index(sig: &OrientationSignature) -> u64 {
    sig.signs()
        .iter()
        .enumerate()
        .map(|(b, s)| if *s < 0 { 1u64 << b } else { 0 })
        .sum()
}

/// Concentric circular orbits: particle k at `(r_k, 0)` with momentum
/// `(0, s_k r_k)`.
pub fn circle_point(radii: &[f64], senses: &[i8]) -> Result<PhasePoint> {
    let blocks: Vec<Vector4<f64>> = radii
        .iter()
        .zip(senses)
        .map(|(r, s)| Vector4::new(*r, 0.0, 0.0, f64::from(*s) * r))
        .collect();
    PhasePoint::from_particles(&blocks)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every signature reachable by concentric circles with radii
/// `1 + 0.5k` under all radius orderings and rotation senses.
fn circle_constructions(n: usize) -> HashMap<u64, (Vec<f64>, Vec<i8>)> {
    let mut found = HashMap::new();
    for perm in permutations(n) {
        let radii: Vec<f64> = perm.iter().map(|&k| 1.0 + 0.5 * k as f64).collect();
        for mask in 0..(1u32 << n) {
            let senses: Vec<i8> = (0..n)
                .map(|k| if mask >> k & 1 == 1 { -1 } else { 1 })
                .collect();
            let point = circle_point(&radii, &senses).expect("valid circle data");
            if let Orientation::Signature(sig) = orientation_signature(&point, DEGENERACY_TOL) {
                found
                    .entry(signature_index(&sig))
                    .or_insert((radii.clone(), senses));
            }
        }
    }
    found
}

/// Sign-constrained hill climbing over general phase points. The loss is the
/// total shortfall of `ε_ij J_ij / E_ij` below a fixed margin.
fn ellipse_search(target: &OrientationSignature, rng: &mut ChaCha8Rng) -> Option<PhasePoint> {
    const MARGIN: f64 = 0.05;
    let n = target.n_particles();
    let pair_list: Vec<(usize, usize)> = pairs(n).collect();
    let signs = target.signs();
    let loss = |p: &[Vector4<f64>]| -> f64 {
        pair_list
            .iter()
            .zip(&signs)
            .map(|(&(i, j), &s)| {
                let d = p[i] - p[j];
                let jij = d[0] * d[3] - d[1] * d[2];
                let eij = 0.5 * d.norm_squared();
                (MARGIN - f64::from(s) * jij / eij).max(0.0)
            })
            .sum()
    };
    let mut normal = || -> f64 {
        // Box-Muller keeps the dependency list to rand alone.
        let u1: f64 = rng.random_range(f64::EPSILON..1.0);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
    };
    for _restart in 0..50 {
        let mut p: Vec<Vector4<f64>> = (0..n)
            .map(|_| Vector4::new(normal(), normal(), normal(), normal()))
            .collect();
        let mut current = loss(&p);
        for _ in 0..20_000 {
            if current == 0.0 {
                break;
            }
            let k = (normal().abs() * 1e6) as usize % n;
            let mut q = p.clone();
            q[k] += Vector4::new(normal(), normal(), normal(), normal()) * 0.5;
            let lq = loss(&q);
            if lq <= current {
                p = q;
                current = lq;
            }
        }
        if current == 0.0 {
            return PhasePoint::from_particles(&p).ok();
        }
    }
    None
}

/// Builds one representative per orientation signature for `2 ≤ N ≤ 6`.
/// Concentric circles are tried first; signatures they cannot realize fall
/// back to a seeded search over general elliptical orbits.
pub fn enumerate_orientation_classes(n_particles: usize) -> Result<FamilyCatalog> {
    enumerate_orientation_classes_seeded(n_particles, 0x5eed)
}

pub fn enumerate_orientation_classes_seeded(
    n_particles: usize,
    seed: u64,
) -> Result<FamilyCatalog> {
    if !(2..=6).contains(&n_particles) {
        return Err(invalid(format!(
            "orientation classes are enumerated for 2 <= N <= 6, got {n_particles}"
        )));
    }
    let circles = circle_constructions(n_particles);
    let total = FamilyCatalog::expected_count(n_particles) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes = Vec::with_capacity(total as usize);
    let mut unrealized = Vec::new();
    for index in 0..total {
        let signature = OrientationSignature::from_index(n_particles, index)?;
        let (representative, construction) = match circles.get(&index) {
            Some((radii, senses)) => (
                circle_point(radii, senses)?,
                Construction::ConcentricCircles {
                    radii: radii.clone(),
                    senses: senses.clone(),
                },
            ),
            None => match ellipse_search(&signature, &mut rng) {
                Some(p) => (p, Construction::Ellipses),
                None => {
                    unrealized.push(signature);
                    continue;
                }
            },
        };
        match orientation_signature(&representative, DEGENERACY_TOL) {
            Orientation::Signature(found) if found == signature => {}
            _ => {
                unrealized.push(signature);
                continue;
            }
        }
        classes.push(FamilyClass {
            signature,
            representative,
            construction,
        });
    }
    Ok(FamilyCatalog {
        n_particles,
        count: classes.len(),
        classes,
        count_is_lower_bound: n_particles >= 3,
        unrealized,
    })
}

/// Generators whose flow keeps every `J_ij` invariant whenever it vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSubgroupBasis {
    pub generators: Vec<GeneratorMatrix>,
    pub dimension: usize,
}

/// The centre-of-mass OSp(4,R) (every block equal to `u_k`) plus the total
/// Hamiltonian and total angular momentum (block-diagonal `u₂`, `u₁`).
pub fn invariant_subgroup_basis(n_particles: usize) -> Result<InvariantSubgroupBasis> {
    if n_particles < 2 {
        return Err(invalid("the invariant subgroup is defined for N >= 2"));
    }
    let mut generators = Vec::with_capacity(6);
    for block in UBlock::ALL {
        let u = block.matrix();
        generators.push(GeneratorMatrix::uniform_blocks(n_particles, &u, &u)?);
    }
    for block in [UBlock::U1, UBlock::U2] {
        generators.push(GeneratorMatrix::uniform_blocks(
            n_particles,
            &block.matrix(),
            &Matrix4::zeros(),
        )?);
    }
    let dim = 4 * n_particles;
    let mut stacked = DMatrix::zeros(generators.len(), dim * dim);
    for (row, g) in generators.iter().enumerate() {
        for (col, x) in g.matrix().iter().enumerate() {
            stacked[(row, col)] = *x;
        }
    }
    let dimension = stacked.rank(1e-9);
    Ok(InvariantSubgroupBasis {
        generators,
        dimension,
    })
}

fn gaussian_block(rng: &mut impl Rng) -> Vector4<f64> {
    Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

/// A random phase point with `J_mn = 0` exactly: `ω_mn` is made radial
/// (momentum parallel to position).
pub fn degenerate_probe_point(
    n_particles: usize,
    m: usize,
    n: usize,
    rng: &mut impl Rng,
) -> Result<PhasePoint> {
    if m == n || m >= n_particles || n >= n_particles {
        return Err(invalid("probe pair must be two distinct particles"));
    }
    let mut blocks: Vec<Vector4<f64>> = (0..n_particles).map(|_| gaussian_block(rng)).collect();
    let x: f64 = rng.random_range(-1.0..1.0);
    let y: f64 = rng.random_range(-1.0..1.0);
    let lambda: f64 = rng.random_range(-2.0..2.0);
    let radial = Vector4::new(x, y, lambda * x, lambda * y);
    blocks[m] = blocks[n] + radial;
    PhasePoint::from_particles(&blocks)
}

/// Largest `|δJ_mn|` over `probes` random points per pair at which `J_mn = 0`.
pub fn invariance_violation(t: &GeneratorMatrix, probes: usize, rng: &mut impl Rng) -> Result<f64> {
    let n = t.n_particles();
    let mut worst = 0.0_f64;
    for (m, k) in pairs(n) {
        for _ in 0..probes {
            let w = degenerate_probe_point(n, m, k, rng)?;
            let d = crate::observables::delta_j_mn(&w, t, m, k)?;
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

/// Outcome of scanning an integral curve for coincident positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Completeness {
    Complete,
    /// The curve reaches `r_ij < tol` at `sigma` for `pair`. For N = 1 the
    /// pair is `(0, 0)` and the distance is to the origin.
    HitsDelta {
        sigma: f64,
        pair: (usize, usize),
    },
}

const PROBE_SCAN_POINTS: usize = 4096;

fn min_separation(point: &nalgebra::DVector<f64>, n: usize) -> (f64, (usize, usize)) {
    let pos = |i: usize| (point[4 * i], point[4 * i + 1]);
    if n == 1 {
        let (x, y) = pos(0);
        return (x.hypot(y), (0, 0));
    }
    pairs(n)
        .map(|(i, j)| {
            let (a, b) = (pos(i), pos(j));
            ((a.0 - b.0).hypot(a.1 - b.1), (i, j))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("N >= 2 has pairs")
}

fn golden_minimize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-15 * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Scans the integral curve of `T` through `omega0` over `σ ∈ [0, 2π)` and
/// reports the first σ at which two positions coincide (for N = 1: the
/// relative coordinate reaches the origin). `tol` is relative to
/// `max(1, √(2E))`.
pub fn completeness_probe(
    t: &GeneratorMatrix,
    omega0: &PhasePoint,
    tol: f64,
) -> Result<Completeness> {
    if t.n_particles() != omega0.n_particles() {
        return Err(Error::DimensionMismatch {
            expected: omega0.dim(),
            actual: t.dim(),
        });
    }
    let n = omega0.n_particles();
    let scale = 1f64.max((2.0 * energy(omega0)).sqrt());
    let sep = |s: f64| min_separation(&(group_element(t, s).0 * omega0.coords()), n);
    let h = TAU / PROBE_SCAN_POINTS as f64;
    let values: Vec<f64> = (0..=PROBE_SCAN_POINTS)
        .map(|k| sep(h * k as f64).0)
        .collect();
    for k in 0..PROBE_SCAN_POINTS {
        let left = if k == 0 { f64::INFINITY } else { values[k - 1] };
        if values[k] <= left && values[k] <= values[k + 1] {
            let lo = if k == 0 { 0.0 } else { h * (k - 1) as f64 };
            let sigma = golden_minimize(|s| sep(s).0, lo, h * (k + 1) as f64);
            let (d, pair) = sep(sigma);
            if d < tol * scale {
                return Ok(Completeness::HitsDelta { sigma, pair });
            }
        }
    }
    Ok(Completeness::Complete)
}

/// σ values in `[0, 2π)` where some `J_ij` (N = 1: `J`) changes sign along
/// the integral curve, located by bisection.
pub fn degenerate_crossings(
    t: &GeneratorMatrix,
    omega0: &PhasePoint,
) -> Result<Vec<(f64, (usize, usize))>> {
    let n = omega0.n_particles();
    let js = |s: f64| -> Result<Vec<f64>> {
        let p = PhasePoint::from_vector(n, group_element(t, s).0 * omega0.coords())?;
        if n == 1 {
            return Ok(vec![angular_momentum(&p, Selector::Particle(0))?]);
        }
        pairs(n)
            .map(|(i, j)| angular_momentum(&p, Selector::Pair(i, j)))
            .collect()
    };
    let labels: Vec<(usize, usize)> = if n == 1 {
        vec![(0, 0)]
    } else {
        pairs(n).collect()
    };
    let h = TAU / PROBE_SCAN_POINTS as f64;
    let mut prev = js(0.0)?;
    let mut out = Vec::new();
    for k in 1..=PROBE_SCAN_POINTS {
        let s1 = h * k as f64;
        let cur = js(s1)?;
        for (idx, (a, b)) in prev.iter().zip(&cur).enumerate() {
            if a.signum() != b.signum() && *a != 0.0 {
                let (mut lo, mut hi) = (s1 - h, s1);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if js(mid)?[idx].signum() == a.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push((0.5 * (lo + hi), labels[idx]));
            }
        }
        prev = cur;
    }
    Ok(out)
}

/// A start point whose integral curve under `T` passes through `Δ` (the
/// origin of the N = 1 relative system) at `sigma_star`: the point
/// `(0, 0, p_x, p_y)` transported backwards.
pub fn seed_through_delta(
    t: &GeneratorMatrix,
    sigma_star: f64,
    momentum: (f64, f64),
) -> Result<PhasePoint> {
    if t.n_particles() != 1 {
        return Err(invalid(
            "seed_through_delta targets the N = 1 relative system",
        ));
    }
    let on_delta = nalgebra::DVector::from_vec(vec![0.0, 0.0, momentum.0, momentum.1]);
    PhasePoint::from_vector(1, group_element(t, -sigma_star).0 * on_delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{build_generator, GeneratorLabel};

    fn relative(u: UBlock) -> GeneratorMatrix {
        build_generator(
            GeneratorLabel::Single {
                block: u,
                particle: 0,
            },
            1,
        )
        .unwrap()
    }

    #[test]
    fn connection_to_self_is_trivial() {
        let w = PhasePoint::new(1, vec![0.8, 0.1, -0.2, 0.9]).unwrap();
        let j = angular_momentum(&w, Selector::Particle(0)).unwrap();
        let path = connect_same_sign(&w, j).unwrap();
        assert!(path.sigma_hat.abs() < 1e-12);
        assert!(path.samples.len() >= MIN_PATH_SAMPLES);
    }

    #[test]
    fn connection_raises_small_j() {
        // E = 1, J = 0.2.
        let w = PhasePoint::new(1, vec![1.0, 0.0, (1.0f64 - 0.04).sqrt(), 0.2]).unwrap();
        assert!((energy(&w) - 1.0).abs() < 1e-14);
        let path = connect_same_sign(&w, 0.9).unwrap();
        assert!(path.single_signed());
        assert!(path.min_abs_j() > 0.0);
        assert!((path.endpoint() - 0.9).abs() < 1e-8);
        // Dense oracle on the closed form with the same β̂.
        let (ju, _) = j_u_and_max(&w, path.beta_hat).unwrap();
        let min_dense = (0..=10_000)
            .map(|k| {
                let s = path.sigma_hat * f64::from(k) / 10_000.0;
                0.2 * (2.0 * s).cos() + ju * (2.0 * s).sin()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(min_dense > 0.0);
    }

    #[test]
    fn opposite_sign_is_rejected() {
        let w = PhasePoint::new(1, vec![1.0, 0.0, 0.0, 0.5]).unwrap();
        assert!(connect_same_sign(&w, -0.5).is_err());
    }

    #[test]
    fn target_beyond_energy_is_rejected() {
        let w = PhasePoint::new(1, vec![1.0, 0.0, 0.0, 0.5]).unwrap();
        let e = energy(&w);
        assert!(connect_same_sign(&w, 1.01 * e).is_err());
    }

    #[test]
    fn negative_branch_connects() {
        let w = PhasePoint::new(1, vec![0.3, 0.7, 0.9, 0.1]).unwrap();
        let j = angular_momentum(&w, Selector::Particle(0)).unwrap();
        assert!(j < 0.0);
        let e = energy(&w);
        for target in [-0.999 * e, -0.05 * e, j * 0.5] {
            let path = connect_same_sign(&w, target).unwrap();
            assert!(path.samples.iter().all(|(_, v)| *v < 0.0));
            assert!((path.endpoint() - target).abs() < 1e-8);
        }
    }

    #[test]
    fn two_particle_catalog() {
        let cat = enumerate_orientation_classes(2).unwrap();
        assert_eq!(cat.count, 2);
        assert!(!cat.count_is_lower_bound);
        let signs: Vec<_> = cat.classes.iter().map(|c| c.signature.signs()).collect();
        assert_eq!(signs, vec![vec![1], vec![-1]]);
    }

    #[test]
    fn three_particle_catalog_uses_circles_only() {
        let cat = enumerate_orientation_classes(3).unwrap();
        assert_eq!(cat.count, 8);
        assert!(cat.not_realized_by_circles().is_empty());
    }

    #[test]
    fn catalog_rejects_out_of_range() {
        assert!(enumerate_orientation_classes(1).is_err());
        assert!(enumerate_orientation_classes(7).is_err());
    }

    #[test]
    fn four_cycle_pattern_needs_ellipses() {
        // Pairs (01, 02, 03, 12, 13, 23): cycle 0-1-2-3-0 positive, diagonals negative.
        let sig = OrientationSignature::from_signs(4, &[1, -1, 1, 1, -1, 1]).unwrap();
        let circles = circle_constructions(4);
        assert!(!circles.contains_key(&signature_index(&sig)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = ellipse_search(&sig, &mut rng).expect("general orbits realize it");
        assert_eq!(
            orientation_signature(&p, DEGENERACY_TOL),
            Orientation::Signature(sig)
        );
    }

    #[test]
    fn invariant_subgroup_has_dimension_six() {
        for n in 2..=4 {
            let basis = invariant_subgroup_basis(n).unwrap();
            assert_eq!(basis.dimension, 6);
        }
        assert!(invariant_subgroup_basis(1).is_err());
    }

    #[test]
    fn subgroup_members_pass_and_block_u3_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let basis = invariant_subgroup_basis(3).unwrap();
        for g in &basis.generators {
            assert!(invariance_violation(g, 50, &mut rng).unwrap() <= 1e-9);
        }
        let u3 = UBlock::U3.matrix();
        let diag_u3 = GeneratorMatrix::uniform_blocks(3, &u3, &Matrix4::zeros()).unwrap();
        assert!(invariance_violation(&diag_u3, 50, &mut rng).unwrap() > 1e-3);
    }

    #[test]
    fn rotation_and_time_evolution_are_complete() {
        let w = PhasePoint::new(1, vec![0.7, 0.2, -0.1, 0.8]).unwrap();
        for u in [UBlock::U1, UBlock::U2] {
            assert_eq!(
                completeness_probe(&relative(u), &w, DEGENERACY_TOL).unwrap(),
                Completeness::Complete
            );
        }
    }

    #[test]
    fn u3_curve_through_delta_is_detected() {
        let t = relative(UBlock::U3);
        let w = seed_through_delta(&t, 1.1, (0.6, -0.8)).unwrap();
        match completeness_probe(&t, &w, DEGENERACY_TOL).unwrap() {
            Completeness::HitsDelta { sigma, .. } => {
                assert!((sigma - 1.1).abs() < 1e-6, "{sigma}");
                let crossings = degenerate_crossings(&t, &w).unwrap();
                assert!(crossings.iter().any(|(s, _)| (s - sigma).abs() < 1e-6));
            }
            Completeness::Complete => panic!("u3 curve should reach the origin"),
        }
    }
}
