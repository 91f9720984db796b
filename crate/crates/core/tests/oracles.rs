//! Library results checked against independent computations done here.

use std::f64::consts::{PI, TAU};

use anyon_orbits::exact::*;
use anyon_orbits::families::*;
use anyon_orbits::observables::*;
use anyon_orbits::regularized::*;
use anyon_orbits::semiclassical::*;
use anyon_orbits::symplectic::*;
use nalgebra::{DMatrix, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(n: usize, rng: &mut impl Rng) -> PhasePoint {
    PhasePoint::new(n, (0..4 * n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

/// Taylor series for exp(σT), summed until the terms vanish.
fn taylor_exp(t: &DMatrix<f64>, sigma: f64) -> DMatrix<f64> {
    let n = t.nrows();
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..200 {
        term = &term * t * (sigma / k as f64);
        sum += &term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }
    sum
}

#[test]
fn u2_block_matches_its_printed_form() {
    let expected = Matrix4::new(
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, -1.0, 0.0, 0.0,
    );
    assert_eq!(UBlock::U2.matrix(), expected);
}

#[test]
fn pair_generator_blocks() {
    let t = build_generator(
        GeneratorLabel::Pair {
            block: VBlock::V1,
            i: 0,
            j: 1,
        },
        2,
    )
    .unwrap();
    assert_eq!(t.block(0, 1), Matrix4::identity());
    assert_eq!(t.block(1, 0), -Matrix4::identity());
    assert_eq!(t.block(0, 0), Matrix4::zeros());
}

#[test]
fn exponential_matches_taylor_series() {
    for n in 1..=3 {
        for label in basis_labels(n) {
            let t = build_generator(label, n).unwrap();
            let (g, route) = group_element(&t, 0.7);
            assert_eq!(route, ExpRoute::ClosedForm, "{label}");
            assert!(
                max_abs(&(&g - taylor_exp(t.matrix(), 0.7))) < 1e-10,
                "{label}"
            );
            assert!(
                max_abs(&(&g - generic_exp(t.matrix(), 0.7))) < 1e-10,
                "{label}"
            );
        }
    }
}

#[test]
fn random_combination_stays_in_the_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 3;
    let gens: Vec<GeneratorMatrix> = basis_labels(n)
        .into_iter()
        .map(|l| build_generator(l, n).unwrap())
        .collect();
    let coeffs: Vec<f64> = gens.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
    let terms: Vec<(f64, &GeneratorMatrix)> = coeffs.iter().copied().zip(gens.iter()).collect();
    let t = GeneratorMatrix::combination(&terms).unwrap();
    let form = SymplecticForm::new(n).unwrap();
    assert!(
        check_orthosymplectic(t.matrix(), &form, ORTHOSYMPLECTIC_TOL)
            .unwrap()
            .passed
    );
    let (g, route) = group_element(&t, 0.4);
    assert_eq!(route, ExpRoute::Generic);
    assert!(max_abs(&(&g - taylor_exp(t.matrix(), 0.4))) < 1e-10);
    assert!(check_group_element(&g, &form, 1e-10).unwrap().passed);
}

#[test]
fn hamiltonian_commutes_with_omega_invariant_quadratics() {
    let form = SymplecticForm::new(2).unwrap();
    let id = DMatrix::<f64>::identity(8, 8);
    // Symmetric B built to commute with Ω: B = S + ΩᵀSΩ for symmetric S.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = DMatrix::from_fn(8, 8, |_, _| rng.random_range(-1.0..1.0));
    let s = &s + s.transpose();
    let w = form.full();
    let b = &s + w.transpose() * &s * w;
    assert!(max_abs(&(&b * w - w * &b)) < 1e-12);
    let bracket = poisson_bracket_quadratic(&id, &b, &form).unwrap();
    assert!(max_abs(&bracket) < 1e-12);

    let a = &s * 0.5;
    let c = DMatrix::from_fn(8, 8, |i, j| ((i + 2 * j) % 5) as f64);
    let c = &c + c.transpose();
    let bracket = poisson_bracket_quadratic(&a, &c, &form).unwrap();
    assert!(max_abs(&(&bracket - bracket.transpose())) < 1e-12);
}

#[test]
fn pair_angular_momentum_matches_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let w = random_point(3, &mut rng);
        for (i, j) in pairs(3) {
            let c = w.as_slice();
            let (x, y) = (c[4 * i] - c[4 * j], c[4 * i + 1] - c[4 * j + 1]);
            let (px, py) = (c[4 * i + 2] - c[4 * j + 2], c[4 * i + 3] - c[4 * j + 3]);
            let direct = x * py - y * px;
            let via = angular_momentum(&w, Selector::Pair(i, j)).unwrap();
            assert!((direct - via).abs() < 1e-12);
            let l = angular_momentum_matrix(3, Selector::Pair(i, j)).unwrap();
            let quad = 0.5 * w.coords().dot(&(&l * w.coords()));
            assert!((direct - quad).abs() < 1e-12);
        }
    }
}

#[test]
fn oscillator_evolution_conserves_every_angular_momentum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = GeneratorMatrix::uniform_blocks(3, &UBlock::U2.matrix(), &Matrix4::zeros()).unwrap();
    for _ in 0..20 {
        let w = random_point(3, &mut rng);
        let moved = one_parameter_action(&h, rng.random_range(0.0..TAU), &w).unwrap();
        assert!((energy(&moved) - energy(&w)).abs() < 1e-10);
        for i in 0..3 {
            let sel = Selector::Particle(i);
            assert!(
                (angular_momentum(&moved, sel).unwrap() - angular_momentum(&w, sel).unwrap()).abs()
                    < 1e-10
            );
        }
        for (i, j) in pairs(3) {
            let sel = Selector::Pair(i, j);
            assert!(
                (angular_momentum(&moved, sel).unwrap() - angular_momentum(&w, sel).unwrap()).abs()
                    < 1e-10
            );
        }
    }
}

#[test]
fn rotation_and_time_flows_keep_j() {
    let w = PhasePoint::new(1, vec![0.3, -0.4, 0.9, 0.2]).unwrap();
    let j0 = angular_momentum(&w, Selector::Particle(0)).unwrap();
    for block in [UBlock::U1, UBlock::U2] {
        for k in 0..16 {
            let s = 0.4 * k as f64;
            let j =
                j_flow_closed_form(&w, FlowGenerator::Single { block, particle: 0 }, 0, s).unwrap();
            assert!((j - j0).abs() < 1e-12);
        }
    }
}

#[test]
fn ju_max_for_rescaled_point() {
    let raw = PhasePoint::new(1, vec![1.0, 0.0, 0.0, 0.6]).unwrap();
    let w = raw.scaled(energy(&raw).sqrt().recip());
    assert!((energy(&w) - 1.0).abs() < 1e-14);
    let j = angular_momentum(&w, Selector::Particle(0)).unwrap();
    let scan = (0..100_000)
        .map(|k| j_u_and_max(&w, TAU * k as f64 / 100_000.0).unwrap().0)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((scan - (1.0 - j * j).sqrt()).abs() < 1e-6);
}

#[test]
fn ju_is_harmonic_in_beta() {
    let w = PhasePoint::new(1, vec![0.2, 0.7, -0.5, 0.1]).unwrap();
    let j0 = j_u_and_max(&w, 0.0).unwrap().0;
    let jp = j_u_and_max(&w, PI / 2.0).unwrap().0;
    for k in 0..50 {
        let b = 0.13 * k as f64;
        assert!((j_u_and_max(&w, b).unwrap().0 - (j0 * b.cos() + jp * b.sin())).abs() < 1e-10);
    }
}

#[test]
fn delta_j_matches_finite_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 3;
    let gens: Vec<GeneratorMatrix> = basis_labels(n)
        .into_iter()
        .map(|l| build_generator(l, n).unwrap())
        .collect();
    for _ in 0..20 {
        let coeffs: Vec<f64> = gens.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        let terms: Vec<(f64, &GeneratorMatrix)> = coeffs.iter().copied().zip(gens.iter()).collect();
        let t = GeneratorMatrix::combination(&terms).unwrap();
        let w = random_point(n, &mut rng);
        let h = 1e-6;
        for (m, k) in pairs(n) {
            let at = |s: f64| {
                angular_momentum(
                    &one_parameter_action(&t, s, &w).unwrap(),
                    Selector::Pair(m, k),
                )
                .unwrap()
            };
            let fd = (at(h) - at(-h)) / (2.0 * h);
            assert!((fd - delta_j_mn(&w, &t, m, k).unwrap()).abs() < 1e-6);
        }
    }
}

/// Signs of x_ij p_ij,y − y_ij p_ij,x computed from raw coordinates.
fn signs_by_hand(w: &PhasePoint) -> Vec<i8> {
    let c = w.as_slice();
    let n = w.n_particles();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d: Vec<f64> = (0..4).map(|k| c[4 * i + k] - c[4 * j + k]).collect();
            out.push(if d[0] * d[3] - d[1] * d[2] > 0.0 {
                1
            } else {
                -1
            });
        }
    }
    out
}

#[test]
fn catalog_representatives_carry_their_labels() {
    for n in 2..=4 {
        let cat = enumerate_orientation_classes(n).unwrap();
        assert_eq!(cat.count, 1 << (n * (n - 1) / 2));
        for class in &cat.classes {
            assert_eq!(
                signs_by_hand(&class.representative),
                class.signature.signs()
            );
        }
    }
}

#[test]
fn two_counterclockwise_circles() {
    let w = circle_point(&[1.0, 1.5], &[1, 1]).unwrap();
    assert_eq!(signs_by_hand(&w), vec![1]);
    assert_eq!(
        orientation_signature(&w, DEGENERACY_TOL),
        Orientation::Signature(OrientationSignature::from_signs(2, &[1]).unwrap())
    );
}

#[test]
fn connection_never_crosses_zero_on_dense_sampling() {
    let w = PhasePoint::new(1, vec![1.0, 0.0, (1.0f64 - 0.04).sqrt(), 0.2]).unwrap();
    let path = connect_same_sign(&w, 0.9).unwrap();
    let ju = j_u_and_max(&w, path.beta_hat).unwrap().0;
    let min = (0..=20_000)
        .map(|k| {
            let s = path.sigma_hat * k as f64 / 20_000.0;
            0.2 * (2.0 * s).cos() + ju * (2.0 * s).sin()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(min > 0.0);
}

#[test]
fn all_blocks_u3_is_invariant_but_diagonal_u3_is_not() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u3 = UBlock::U3.matrix();
    let same = GeneratorMatrix::uniform_blocks(2, &u3, &u3).unwrap();
    let diag = GeneratorMatrix::uniform_blocks(2, &u3, &Matrix4::zeros()).unwrap();
    let rot = GeneratorMatrix::uniform_blocks(2, &UBlock::U1.matrix(), &Matrix4::zeros()).unwrap();
    assert!(invariance_violation(&same, 100, &mut rng).unwrap() < 1e-12);
    assert!(invariance_violation(&rot, 100, &mut rng).unwrap() < 1e-12);
    assert!(invariance_violation(&diag, 100, &mut rng).unwrap() > 1e-3);
}

#[test]
fn u3_hit_is_a_sign_change_of_j() {
    let t = build_generator(
        GeneratorLabel::Single {
            block: UBlock::U3,
            particle: 0,
        },
        1,
    )
    .unwrap();
    let w = seed_through_delta(&t, 0.9, (0.3, 0.8)).unwrap();
    let Completeness::HitsDelta { sigma, .. } = completeness_probe(&t, &w, DEGENERACY_TOL).unwrap()
    else {
        panic!("expected a hit");
    };
    let r = |s: f64| {
        let p = one_parameter_action(&t, s, &w).unwrap();
        p.as_slice()[0].hypot(p.as_slice()[1])
    };
    assert!(r(sigma) < 1e-8);
    let j = |s: f64| {
        angular_momentum(
            &one_parameter_action(&t, s, &w).unwrap(),
            Selector::Particle(0),
        )
        .unwrap()
    };
    assert!(j(sigma - 1e-3) * j(sigma + 1e-3) < 0.0);
}

#[test]
fn deflection_is_stable_under_tighter_tolerances() {
    let tight = StepControl {
        rtol: 5e-12,
        h_max: 0.025,
    };
    for eps in [1e-1, 1e-2, 1e-3] {
        let a = interior_deflection(1.0, 0.5, eps).unwrap();
        let b = interior_deflection_with(1.0, 0.5, eps, &tight).unwrap();
        assert!(
            (a - b).abs() < 1e-7 * a.abs().max(1e-3),
            "{eps}: {a} vs {b}"
        );
    }
}

#[test]
fn limits_of_the_two_orbit_kinds() {
    let eps = [1e-2, 1e-3, 1e-4];
    let refl = classify_limit(1.0, 0.5, 0.5, &eps).unwrap();
    assert_eq!(refl.kind, OrbitKind::ReflectingRadial);
    assert!((refl.period - PI).abs() < 1e-6);
    assert!(refl.power_law_exponent.unwrap() > 0.0);
    let ell = classify_limit(1.0, 1.0, 0.5, &eps).unwrap();
    assert_eq!(ell.kind, OrbitKind::ExteriorEllipse);
    assert!((ell.period - TAU).abs() < 1e-6);
}

#[test]
fn exterior_orbit_is_the_shifted_oscillator_ellipse() {
    // Outside the disc the motion is the free oscillator with ℓ − α: the
    // radius oscillates between the roots of r⁴ − 2Er² + (ℓ − α)² = 0.
    let (e, ell, alpha) = (1.0, 0.9, 0.3);
    let profile = FluxProfile::new(1e-3, alpha).unwrap();
    let start = PolarOrbitState::outer_turning_point(e, ell, &profile).unwrap();
    let res = integrate_orbit(e, ell, &profile, &start, TAU, &StepControl::default()).unwrap();
    assert_eq!(res.classification.kind, OrbitKind::ExteriorEllipse);
    let l = ell - alpha;
    let disc = (e * e - l * l).sqrt();
    let (r_min, r_max) = ((e - disc).sqrt(), (e + disc).sqrt());
    let lo = res
        .samples
        .iter()
        .map(|s| s.r)
        .fold(f64::INFINITY, f64::min);
    let hi = res.samples.iter().map(|s| s.r).fold(0.0, f64::max);
    assert!(lo >= r_min - 1e-6 && hi <= r_max + 1e-9);
    for s in &res.samples {
        assert!((s.r * s.r * s.theta_dot - l).abs() < 1e-8);
    }
}

#[test]
fn slope_multiplicities_by_enumeration() {
    for n in 2..=5 {
        let m = n * (n - 1) / 2;
        let mut counts = std::collections::BTreeMap::<i64, u64>::new();
        for idx in 0..(1u64 << m) {
            *counts
                .entry(OrientationSignature::from_index(n, idx).unwrap().slope())
                .or_default() += 1;
        }
        for (slope, count) in counts {
            assert_eq!(slope_multiplicity(n, slope as i32).unwrap(), count);
        }
    }
}

#[test]
fn unit_alpha_shift_equals_slope() {
    for n in 2..=4 {
        let lo = semiclassical_levels(n, 0.0, 3).unwrap();
        let hi = semiclassical_levels(n, 1.0, 3).unwrap();
        for l in &lo {
            let h = hi
                .iter()
                .find(|h| h.n == l.n && h.slope == l.slope)
                .unwrap();
            assert_eq!(h.energy - l.energy, f64::from(l.slope));
        }
    }
}

/// Degeneracy of ℰ from a direct double loop over (n, j).
fn degeneracy_by_hand(e: f64, alpha: f64) -> u64 {
    let mut count = 0;
    for n in 0..50u32 {
        for j in -100i64..=100 {
            if (2.0 * f64::from(n) + (j as f64 - alpha).abs() + 1.0 - e).abs() < 1e-9 {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn spectrum_degeneracies_by_hand() {
    for alpha in [0.0, 0.25, 0.3, 0.5] {
        for level in enumerate_spectrum(12.0, alpha).unwrap() {
            assert_eq!(
                level.degeneracy,
                degeneracy_by_hand(level.energy, alpha),
                "{alpha} {}",
                level.energy
            );
        }
    }
}

#[test]
fn partition_function_by_hand() {
    let (beta, alpha) = (2.0, 0.3);
    let mut z = 0.0;
    for n in 0..60u32 {
        for j in -130i64..=130 {
            z += (-beta * (2.0 * f64::from(n) + (j as f64 - alpha).abs() + 1.0)).exp();
        }
    }
    let closed = partition_function(beta, alpha).unwrap();
    assert!((z - closed).abs() / closed < 1e-10);
    assert!((partition_function_sum(beta, alpha, 60.0).unwrap() - closed).abs() / closed < 1e-10);
}

#[test]
fn quarter_alpha_low_poles() {
    let p = poles_and_residues(PropagatorForm::A, 0.25, 4.0).unwrap();
    for (loc, deg) in [(1.25, 1), (1.75, 1)] {
        let pole = p
            .poles
            .iter()
            .find(|q| (q.location - loc).abs() < 1e-9)
            .unwrap();
        assert_eq!(pole.brute_force_degeneracy, deg);
        assert_eq!(degeneracy_by_hand(loc, 0.25), deg);
    }
}

#[test]
fn pole_multiset_is_symmetric_under_alpha_reflection() {
    let a = poles_and_residues(PropagatorForm::B, 0.3, 10.0).unwrap();
    let b = poles_and_residues(PropagatorForm::B, 0.7, 10.0).unwrap();
    let locs = |p: &PoleAnalysis| {
        p.poles
            .iter()
            .map(|q| (q.location, q.brute_force_degeneracy))
            .collect::<Vec<_>>()
    };
    let (la, lb) = (locs(&a), locs(&b));
    assert_eq!(la.len(), lb.len());
    for ((x, dx), (y, dy)) in la.iter().zip(&lb) {
        assert!((x - y).abs() < 1e-9);
        assert_eq!(dx, dy);
    }
}

#[test]
fn dos_counts_states() {
    // Integrate g over [m + 0.5, m + 1.5) windows centred on integer shells.
    let alpha = 0.3;
    let h = 1e-3;
    let grid = uniform_grid(2.0, h, 8001);
    let cfg = DosSeriesConfig::new(2000, 0.01, grid.clone()).unwrap();
    let g: Vec<f64> = dos_series(&cfg, alpha)
        .unwrap()
        .samples
        .iter()
        .map(|s| s.total)
        .collect();
    let levels = enumerate_spectrum(20.0, alpha).unwrap();
    let integral: f64 = g.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum();
    let count: u64 = levels
        .iter()
        .filter(|l| l.energy > 2.0 && l.energy < 10.0)
        .map(|l| l.degeneracy)
        .sum();
    assert!(
        (integral - count as f64).abs() / (count as f64) < 0.02,
        "{integral} vs {count}"
    );
}

#[test]
fn dos_is_symmetric_under_alpha_reflection() {
    let cfg = DosSeriesConfig::new(500, 0.02, uniform_grid(1.5, 0.013, 600)).unwrap();
    let a = dos_series(&cfg, 0.2).unwrap();
    let b = dos_series(&cfg, 0.8).unwrap();
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert!((x.total - y.total).abs() < 1e-9 * x.total.abs().max(1.0));
    }
}

#[test]
fn half_period_peak_of_the_k1_term() {
    // Windowed transform of the k = 1 half-period term alone, −sin(πα) sin(πℰ),
    // done by direct summation at t = π.
    let alpha = 0.3;
    let cfg = DosSeriesConfig::new(2000, 0.01, default_fourier_grid()).unwrap();
    let spec = dos_fourier(alpha, &cfg, Window::Hann).unwrap();
    let grid = default_fourier_grid();
    let n = grid.len();
    let h = grid[1] - grid[0];
    let (mut re, mut im) = (0.0, 0.0);
    for (k, e) in grid.iter().enumerate() {
        let w = 0.5 - 0.5 * (TAU * k as f64 / n as f64).cos();
        let f = -(-PI * 0.01).exp() * (PI * alpha).sin() * (PI * e).sin() * w;
        re += f * (PI * (e - grid[0])).cos();
        im -= f * (PI * (e - grid[0])).sin();
    }
    let direct = re.hypot(im) * h / TAU.sqrt();
    let peak = spec.peak_near(PI).unwrap().amplitude;
    assert!((peak - direct).abs() / direct < 0.05, "{peak} vs {direct}");
}
