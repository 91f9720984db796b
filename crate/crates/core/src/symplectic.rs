//! OSp(4N,R) generators and their one-parameter group actions.
//!
//! Phase-space coordinates are blocked per particle as
//! `(x_i, y_i, p_ix, p_iy)`, so the symplectic form is block diagonal with N
//! copies of `Λ = ((0, I), (-I, 0))`. A generator `T` of OSp(4N,R) satisfies
//! `Tᵀ = -T` and `TᵀΩ = -ΩT`; its 4×4 diagonal blocks are spanned by
//! `u₁..u₄` and its off-diagonal blocks by `v₁..v₈`.
//!
//! Particle indices are zero-based in the API. Labels print one-based
//! (`T1[u2]`, `T12[v1]`) to match the usual notation.

use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

impl TryFrom<Vec<f64>> for PhasePoint {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::from_flat(coords)
    }
}

impl From<PhasePoint> for Vec<f64> {
    fn from(p: PhasePoint) -> Self {
        p.coords.as_slice().to_vec()
    }
}

/// Residual tolerance for the ortho-symplectic conditions.
pub const ORTHOSYMPLECTIC_TOL: f64 = 1e-10;
/// Tolerance for recognising `T² = -P` with `P` a commuting projector.
pub const PROJECTOR_TOL: f64 = 1e-12;

/// A point of the 4N-dimensional phase space. Serialized as the flat
/// coordinate list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PhasePoint {
    n_particles: usize,
    coords: DVector<f64>,
}

impl PhasePoint {
    pub fn new(n_particles: usize, coords: Vec<f64>) -> Result<Self> {
        Self::from_vector(n_particles, DVector::from_vec(coords))
    }

    pub fn from_vector(n_particles: usize, coords: DVector<f64>) -> Result<Self> {
        if n_particles == 0 {
            return Err(invalid("phase point needs at least one particle"));
        }
        let expected = n_particles
            .checked_mul(4)
            .ok_or_else(|| invalid("too many particles"))?;
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("phase point has non-finite coordinates"));
        }
        Ok(Self {
            n_particles,
            coords,
        })
    }

    /// Builds a point from per-particle `(x, y, p_x, p_y)` blocks.
    pub fn from_particles(blocks: &[Vector4<f64>]) -> Result<Self> {
        let coords = blocks.iter().flat_map(|b| b.iter().copied()).collect();
        Self::new(blocks.len(), coords)
    }

    /// Parses a flat coordinate list; the length fixes N.
    pub fn from_flat(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(4) {
            return Err(invalid(format!(
                "coordinate count {} is not a positive multiple of 4",
                coords.len()
            )));
        }
        Self::new(coords.len() / 4, coords)
    }

    pub fn zeros(n_particles: usize) -> Result<Self> {
        Self::new(n_particles, vec![0.0; 4 * n_particles])
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        4 * self.n_particles
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn as_slice(&self) -> &[f64] {
        self.coords.as_slice()
    }

    /// The `(x, y, p_x, p_y)` block of particle `i`.
    pub fn particle(&self, i: usize) -> Vector4<f64> {
        Vector4::from_iterator(self.coords.rows(4 * i, 4).iter().copied())
    }

    /// `ω_i - ω_j`.
    pub fn relative(&self, i: usize, j: usize) -> Vector4<f64> {
        self.particle(i) - self.particle(j)
    }

    /// Scales every coordinate by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n_particles: self.n_particles,
            coords: &self.coords * factor,
        }
    }
}

/// The 4×4 block `Λ` and the block-diagonal 4N×4N form `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_particles: usize,
    block: Matrix4<f64>,
    full: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n_particles: usize) -> Result<Self> {
        if n_particles == 0 {
            return Err(invalid("symplectic form needs N >= 1"));
        }
        let block = lambda();
        let mut full = DMatrix::zeros(4 * n_particles, 4 * n_particles);
        for i in 0..n_particles {
            set_block(&mut full, i, i, &block);
        }
        Ok(Self {
            n_particles,
            block,
            full,
        })
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn block(&self) -> &Matrix4<f64> {
        &self.block
    }

    pub fn full(&self) -> &DMatrix<f64> {
        &self.full
    }
}

/// `Λ = ((0, I₂), (-I₂, 0))`.
pub fn lambda() -> Matrix4<f64> {
    block4(
        &Matrix2::zeros(),
        &Matrix2::identity(),
        &-Matrix2::identity(),
        &Matrix2::zeros(),
    )
}

fn i_sigma2() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

fn sigma1() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, 1.0, 0.0)
}

fn sigma3() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

fn block4(a: &Matrix2<f64>, b: &Matrix2<f64>, c: &Matrix2<f64>, d: &Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Off-diagonal pattern `((0, s), (-s, 0))`.
fn skew_pair(s: &Matrix2<f64>) -> Matrix4<f64> {
    block4(&Matrix2::zeros(), s, &-s, &Matrix2::zeros())
}

/// Diagonal pattern `((s, 0), (0, s))`.
fn diag_pair(s: &Matrix2<f64>) -> Matrix4<f64> {
    block4(s, &Matrix2::zeros(), &Matrix2::zeros(), s)
}

/// Diagonal-block basis elements of OSp(4,R).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UBlock {
    U1,
    U2,
    U3,
    U4,
}

impl UBlock {
    pub const ALL: [UBlock; 4] = [UBlock::U1, UBlock::U2, UBlock::U3, UBlock::U4];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(k: usize) -> Result<Self> {
        Self::ALL
            .get(k.wrapping_sub(1))
            .copied()
            .ok_or_else(|| invalid(format!("u-index {k} outside 1..=4")))
    }

    pub fn matrix(self) -> Matrix4<f64> {
        match self {
            UBlock::U1 => diag_pair(&i_sigma2()),
            UBlock::U2 => skew_pair(&Matrix2::identity()),
            UBlock::U3 => skew_pair(&sigma1()),
            UBlock::U4 => skew_pair(&sigma3()),
        }
    }
}

/// Off-diagonal-block basis elements (4×4 matrices commuting with `Λ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VBlock {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    V8,
}

impl VBlock {
    pub const ALL: [VBlock; 8] = [
        VBlock::V1,
        VBlock::V2,
        VBlock::V3,
        VBlock::V4,
        VBlock::V5,
        VBlock::V6,
        VBlock::V7,
        VBlock::V8,
    ];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(k: usize) -> Result<Self> {
        Self::ALL
            .get(k.wrapping_sub(1))
            .copied()
            .ok_or_else(|| invalid(format!("v-index {k} outside 1..=8")))
    }

    pub fn matrix(self) -> Matrix4<f64> {
        match self {
            VBlock::V1 => diag_pair(&Matrix2::identity()),
            VBlock::V2 => diag_pair(&sigma1()),
            VBlock::V3 => diag_pair(&i_sigma2()),
            VBlock::V4 => diag_pair(&sigma3()),
            VBlock::V5 => skew_pair(&Matrix2::identity()),
            VBlock::V6 => skew_pair(&sigma1()),
            VBlock::V7 => skew_pair(&i_sigma2()),
            VBlock::V8 => skew_pair(&sigma3()),
        }
    }
}

/// The four `u` and eight `v` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisBlocks {
    pub u_blocks: [Matrix4<f64>; 4],
    pub v_blocks: [Matrix4<f64>; 8],
}

pub fn build_basis_blocks() -> BasisBlocks {
    BasisBlocks {
        u_blocks: UBlock::ALL.map(UBlock::matrix),
        v_blocks: VBlock::ALL.map(VBlock::matrix),
    }
}

/// Identifies a generator. Particle indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorLabel {
    /// `T_i`: block `u` on diagonal block `i`.
    Single {
        block: UBlock,
        particle: usize,
    },
    /// `T_ij`: `v` at block `(i, j)` and `-vᵀ` at `(j, i)`.
    Pair {
        block: VBlock,
        i: usize,
        j: usize,
    },
    Composite,
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorLabel::Single { block, particle } => {
                write!(f, "T{}[u{}]", particle + 1, block.index())
            }
            GeneratorLabel::Pair { block, i, j } => {
                write!(f, "T{}{}[v{}]", i + 1, j + 1, block.index())
            }
            GeneratorLabel::Composite => f.write_str("composite"),
        }
    }
}

/// All `4N²` basis labels, singles first then pairs in lexicographic order.
pub fn basis_labels(n_particles: usize) -> Vec<GeneratorLabel> {
    let mut labels = Vec::with_capacity(4 * n_particles * n_particles);
    for particle in 0..n_particles {
        for block in UBlock::ALL {
            labels.push(GeneratorLabel::Single { block, particle });
        }
    }
    for i in 0..n_particles {
        for j in (i + 1)..n_particles {
            for block in VBlock::ALL {
                labels.push(GeneratorLabel::Pair { block, i, j });
            }
        }
    }
    labels
}

/// An element of the OSp(4N,R) Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    n_particles: usize,
    matrix: DMatrix<f64>,
    label: GeneratorLabel,
}

impl GeneratorMatrix {
    /// Wraps an arbitrary matrix after checking the algebra conditions.
    pub fn from_matrix(n_particles: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let omega = SymplecticForm::new(n_particles)?;
        let check = check_orthosymplectic(&matrix, &omega, ORTHOSYMPLECTIC_TOL)?;
        if !check.passed {
            return Err(invalid(format!(
                "matrix is not in the OSp(4N,R) algebra (residual {:.3e})",
                check.residual
            )));
        }
        Ok(Self {
            n_particles,
            matrix,
            label: GeneratorLabel::Composite,
        })
    }

    /// Generator with the same 4×4 block `u` on every diagonal block and
    /// `v` on every off-diagonal block. Requires `u` antisymmetric and
    /// commuting with `Λ`, and `v` antisymmetric so that `-vᵀ = v`.
    pub fn uniform_blocks(n_particles: usize, u: &Matrix4<f64>, v: &Matrix4<f64>) -> Result<Self> {
        let mut m = DMatrix::zeros(4 * n_particles, 4 * n_particles);
        for i in 0..n_particles {
            for j in 0..n_particles {
                set_block(&mut m, i, j, if i == j { u } else { v });
            }
        }
        Self::from_matrix(n_particles, m)
    }

    /// `Σ cₖ Tₖ`.
    pub fn combination(terms: &[(f64, &GeneratorMatrix)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| invalid("empty generator combination"))?;
        let n = first.1.n_particles;
        let mut m = DMatrix::zeros(4 * n, 4 * n);
        for (c, g) in terms {
            if g.n_particles != n {
                return Err(Error::DimensionMismatch {
                    expected: 4 * n,
                    actual: g.dim(),
                });
            }
            m += &g.matrix * *c;
        }
        Ok(Self {
            n_particles: n,
            matrix: m,
            label: GeneratorLabel::Composite,
        })
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        4 * self.n_particles
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn label(&self) -> GeneratorLabel {
        self.label
    }

    /// The 4×4 block `(i, j)`.
    pub fn block(&self, i: usize, j: usize) -> Matrix4<f64> {
        Matrix4::from_iterator(self.matrix.view((4 * i, 4 * j), (4, 4)).iter().copied())
    }
}

pub(crate) fn set_block(m: &mut DMatrix<f64>, i: usize, j: usize, b: &Matrix4<f64>) {
    m.view_mut((4 * i, 4 * j), (4, 4)).copy_from(b);
}

pub fn build_generator(label: GeneratorLabel, n_particles: usize) -> Result<GeneratorMatrix> {
    if n_particles == 0 {
        return Err(invalid("generators need N >= 1"));
    }
    let dim = 4 * n_particles;
    let mut m = DMatrix::zeros(dim, dim);
    match label {
        GeneratorLabel::Single { block, particle } => {
            if particle >= n_particles {
                return Err(invalid(format!(
                    "particle index {particle} out of range for N = {n_particles}"
                )));
            }
            set_block(&mut m, particle, particle, &block.matrix());
        }
        GeneratorLabel::Pair { block, i, j } => {
            if i >= j || j >= n_particles {
                return Err(invalid(format!(
                    "pair ({i}, {j}) must satisfy i < j < N = {n_particles}"
                )));
            }
            let v = block.matrix();
            set_block(&mut m, i, j, &v);
            set_block(&mut m, j, i, &-v.transpose());
        }
        GeneratorLabel::Composite => {
            return Err(invalid("a composite label has no canonical matrix"));
        }
    }
    Ok(GeneratorMatrix {
        n_particles,
        matrix: m,
        label,
    })
}

/// Outcome of [`check_orthosymplectic`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthoSymplecticCheck {
    pub passed: bool,
    /// `max(‖Mᵀ + M‖∞, ‖MᵀΩ + ΩM‖∞)`.
    pub residual: f64,
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

fn check_square(m: &DMatrix<f64>, dim: usize) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: if m.nrows() != dim {
                m.nrows()
            } else {
                m.ncols()
            },
        });
    }
    Ok(())
}

/// Checks the Lie-algebra conditions `Mᵀ = -M` and `MᵀΩ = -ΩM`.
pub fn check_orthosymplectic(
    m: &DMatrix<f64>,
    omega: &SymplecticForm,
    tol: f64,
) -> Result<OrthoSymplecticCheck> {
    check_square(m, omega.full.nrows())?;
    let mt = m.transpose();
    let antisym = max_abs(&(&mt + m));
    let sympl = max_abs(&(&mt * &omega.full + &omega.full * m));
    let residual = antisym.max(sympl);
    Ok(OrthoSymplecticCheck {
        passed: residual <= tol,
        residual,
    })
}

/// Checks the group conditions `gᵀg = I` and `gᵀΩg = Ω`.
pub fn check_group_element(
    g: &DMatrix<f64>,
    omega: &SymplecticForm,
    tol: f64,
) -> Result<OrthoSymplecticCheck> {
    let dim = omega.full.nrows();
    check_square(g, dim)?;
    let gt = g.transpose();
    let orth = max_abs(&(&gt * g - DMatrix::identity(dim, dim)));
    let sympl = max_abs(&(&gt * &omega.full * g - &omega.full));
    let residual = orth.max(sympl);
    Ok(OrthoSymplecticCheck {
        passed: residual <= tol,
        residual,
    })
}

/// How `exp(σT)` was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExpRoute {
    /// `I - P + P[cos σ + sin σ·T]P` for `T² = -P`.
    ClosedForm,
    /// Padé scaling-and-squaring.
    Generic,
}

/// Returns `P = -T²` when it is a projector commuting with `T`.
pub fn commuting_projector(t: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let p = -(t * t);
    let idempotent = max_abs(&(&p * &p - &p));
    let commutes = max_abs(&(t * &p - &p * t));
    (idempotent <= PROJECTOR_TOL && commutes <= PROJECTOR_TOL).then_some(p)
}

/// `exp(σT)` by Padé scaling-and-squaring, independent of the closed form.
pub fn generic_exp(t: &DMatrix<f64>, sigma: f64) -> DMatrix<f64> {
    (t * sigma).exp()
}

fn closed_form_exp(t: &DMatrix<f64>, p: &DMatrix<f64>, sigma: f64) -> DMatrix<f64> {
    let dim = t.nrows();
    let id = DMatrix::<f64>::identity(dim, dim);
    let inner = &id * sigma.cos() + t * sigma.sin();
    &id - p + p * inner * p
}

/// `exp(σT)` and the route used to compute it.
pub fn group_element(t: &GeneratorMatrix, sigma: f64) -> (DMatrix<f64>, ExpRoute) {
    match commuting_projector(&t.matrix) {
        Some(p) => (closed_form_exp(&t.matrix, &p, sigma), ExpRoute::ClosedForm),
        None => (generic_exp(&t.matrix, sigma), ExpRoute::Generic),
    }
}

/// `exp(σT)·ω₀`.
pub fn one_parameter_action(
    t: &GeneratorMatrix,
    sigma: f64,
    omega0: &PhasePoint,
) -> Result<PhasePoint> {
    if t.n_particles != omega0.n_particles {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            actual: omega0.dim(),
        });
    }
    let (g, _) = group_element(t, sigma);
    PhasePoint::from_vector(omega0.n_particles, g * &omega0.coords)
}

/// Matrix of the Poisson bracket `{½ωᵀAω, ½ωᵀBω} = ½ωᵀ(AΩB - BΩA)ω`.
pub fn poisson_bracket_quadratic(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    omega: &SymplecticForm,
) -> Result<DMatrix<f64>> {
    let dim = omega.full.nrows();
    check_square(a, dim)?;
    check_square(b, dim)?;
    for (name, m) in [("A", a), ("B", b)] {
        if max_abs(&(m - m.transpose())) > ORTHOSYMPLECTIC_TOL {
            return Err(invalid(format!("{name} must be symmetric")));
        }
    }
    let w = &omega.full;
    Ok(a * w * b - b * w * a)
}

/// Numerical rank of the flattened basis generators.
pub fn basis_rank(n_particles: usize) -> Result<usize> {
    let labels = basis_labels(n_particles);
    let dim = 4 * n_particles;
    let mut stacked = DMatrix::zeros(labels.len(), dim * dim);
    for (row, label) in labels.iter().enumerate() {
        let g = build_generator(*label, n_particles)?;
        for (col, x) in g.matrix.iter().enumerate() {
            stacked[(row, col)] = *x;
        }
    }
    Ok(stacked.rank(1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_point(n: usize, rng: &mut impl Rng) -> PhasePoint {
        PhasePoint::new(n, (0..4 * n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn u2_matches_time_evolution_block() {
        let u2 = UBlock::U2.matrix();
        let expected = Matrix4::new(
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            -1.0, 0.0, 0.0, 0.0, //
            0.0, -1.0, 0.0, 0.0,
        );
        assert_eq!(u2, expected);
        assert_eq!(u2, lambda());
    }

    #[test]
    fn block_conditions() {
        let blocks = build_basis_blocks();
        let l = lambda();
        for u in &blocks.u_blocks {
            assert_eq!(u.transpose(), -u);
            assert_eq!(u * l, l * u);
        }
        for v in &blocks.v_blocks {
            assert_eq!(v * l - l * v, Matrix4::zeros());
        }
        assert_eq!(l * l, -Matrix4::identity());
    }

    #[test]
    fn symplectic_form_squares_to_minus_identity() {
        let omega = SymplecticForm::new(3).unwrap();
        let w = omega.full();
        assert_eq!(w * w, -DMatrix::identity(12, 12));
        assert_eq!(w.transpose(), -w);
    }

    #[test]
    fn single_block_generator() {
        let g = build_generator(
            GeneratorLabel::Single {
                block: UBlock::U2,
                particle: 0,
            },
            1,
        )
        .unwrap();
        assert_eq!(g.block(0, 0), UBlock::U2.matrix());
    }

    #[test]
    fn pair_generator_blocks() {
        let g = build_generator(
            GeneratorLabel::Pair {
                block: VBlock::V1,
                i: 0,
                j: 1,
            },
            2,
        )
        .unwrap();
        assert_eq!(g.block(0, 1), Matrix4::identity());
        assert_eq!(g.block(1, 0), -Matrix4::identity());
        assert_eq!(g.block(0, 0), Matrix4::zeros());
    }

    #[test]
    fn rejects_out_of_range_labels() {
        assert!(build_generator(
            GeneratorLabel::Single {
                block: UBlock::U1,
                particle: 2
            },
            2
        )
        .is_err());
        assert!(build_generator(
            GeneratorLabel::Pair {
                block: VBlock::V1,
                i: 1,
                j: 1
            },
            2
        )
        .is_err());
        assert!(build_generator(
            GeneratorLabel::Pair {
                block: VBlock::V1,
                i: 1,
                j: 0
            },
            2
        )
        .is_err());
        assert!(build_generator(
            GeneratorLabel::Pair {
                block: VBlock::V1,
                i: 0,
                j: 3
            },
            3
        )
        .is_err());
        assert!(UBlock::from_index(5).is_err());
        assert!(VBlock::from_index(0).is_err());
    }

    #[test]
    fn every_basis_generator_is_in_the_algebra() {
        for n in 1..=4 {
            let omega = SymplecticForm::new(n).unwrap();
            let labels = basis_labels(n);
            assert_eq!(labels.len(), 4 * n * n);
            for label in labels {
                let g = build_generator(label, n).unwrap();
                let check = check_orthosymplectic(g.matrix(), &omega, ORTHOSYMPLECTIC_TOL).unwrap();
                assert!(check.passed, "{label}: {}", check.residual);
                assert_eq!(check.residual, 0.0);
            }
        }
    }

    #[test]
    fn dimension_count_is_4n_squared() {
        for n in 1..=4 {
            assert_eq!(basis_rank(n).unwrap(), 4 * n * n);
        }
    }

    #[test]
    fn symmetric_perturbation_fails_check() {
        let omega = SymplecticForm::new(1).unwrap();
        let mut m = DMatrix::from_iterator(4, 4, UBlock::U2.matrix().iter().copied());
        m[(0, 1)] += 1e-3;
        m[(1, 0)] += 1e-3;
        let check = check_orthosymplectic(&m, &omega, ORTHOSYMPLECTIC_TOL).unwrap();
        assert!(!check.passed);
        assert!(check.residual >= 1e-3);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let omega = SymplecticForm::new(2).unwrap();
        let m = DMatrix::zeros(4, 4);
        assert!(matches!(
            check_orthosymplectic(&m, &omega, 1e-10),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_combination_is_in_the_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 3;
        let gens: Vec<_> = basis_labels(n)
            .into_iter()
            .map(|l| build_generator(l, n).unwrap())
            .collect();
        let terms: Vec<_> = gens
            .iter()
            .map(|g| (rng.random_range(-1.0..1.0), g))
            .collect();
        let combo = GeneratorMatrix::combination(&terms).unwrap();
        let omega = SymplecticForm::new(n).unwrap();
        assert!(
            check_orthosymplectic(combo.matrix(), &omega, ORTHOSYMPLECTIC_TOL)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn identity_at_zero_and_periodic_at_two_pi() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = build_generator(
            GeneratorLabel::Single {
                block: UBlock::U2,
                particle: 0,
            },
            1,
        )
        .unwrap();
        let w = random_point(1, &mut rng);
        let at0 = one_parameter_action(&t, 0.0, &w).unwrap();
        assert_eq!(at0, w);
        let at2pi = one_parameter_action(&t, 2.0 * PI, &w).unwrap();
        assert!((at2pi.coords() - w.coords()).amax() < 1e-10);
    }

    #[test]
    fn closed_form_agrees_with_generic_exponential() {
        let n = 3;
        for label in basis_labels(n) {
            let t = build_generator(label, n).unwrap();
            let (g, route) = group_element(&t, 0.7);
            assert_eq!(route, ExpRoute::ClosedForm, "{label}");
            let generic = generic_exp(t.matrix(), 0.7);
            assert!((g - generic).amax() < 1e-10, "{label}");
        }
    }

    #[test]
    fn composite_generators_use_the_generic_route() {
        let t1 = build_generator(
            GeneratorLabel::Single {
                block: UBlock::U1,
                particle: 0,
            },
            2,
        )
        .unwrap();
        let t2 = build_generator(
            GeneratorLabel::Pair {
                block: VBlock::V2,
                i: 0,
                j: 1,
            },
            2,
        )
        .unwrap();
        let combo = GeneratorMatrix::combination(&[(0.3, &t1), (1.1, &t2)]).unwrap();
        let (_, route) = group_element(&combo, 0.4);
        assert_eq!(route, ExpRoute::Generic);
    }

    #[test]
    fn poisson_bracket_properties() {
        let omega = SymplecticForm::new(1).unwrap();
        let id = DMatrix::<f64>::identity(4, 4);
        let zero = poisson_bracket_quadratic(&id, &id, &omega).unwrap();
        assert_eq!(zero.amax(), 0.0);

        // B = Ωᵀ·T is symmetric and commutes with Ω for any algebra element T.
        let t = build_generator(
            GeneratorLabel::Single {
                block: UBlock::U3,
                particle: 0,
            },
            1,
        )
        .unwrap();
        let b = omega.full().transpose() * t.matrix();
        assert!((&b - b.transpose()).amax() < 1e-14);
        let pb = poisson_bracket_quadratic(&id, &b, &omega).unwrap();
        assert!(pb.amax() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
        let s = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
        let a = &r + r.transpose();
        let b = &s + s.transpose();
        let pb = poisson_bracket_quadratic(&a, &b, &omega).unwrap();
        assert!((&pb - pb.transpose()).amax() < 1e-12);

        assert!(poisson_bracket_quadratic(&r, &b, &omega).is_err());
    }

    #[test]
    fn phase_point_validation() {
        assert!(PhasePoint::new(2, vec![0.0; 7]).is_err());
        assert!(PhasePoint::new(1, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(PhasePoint::new(0, vec![]).is_err());
        let w = PhasePoint::new(2, (0..8).map(f64::from).collect()).unwrap();
        assert_eq!(w.particle(1), Vector4::new(4.0, 5.0, 6.0, 7.0));
        assert_eq!(w.relative(0, 1), Vector4::new(-4.0, -4.0, -4.0, -4.0));
    }

    #[test]
    fn labels_display_one_based() {
        let l = GeneratorLabel::Pair {
            block: VBlock::V7,
            i: 0,
            j: 2,
        };
        assert_eq!(l.to_string(), "T13[v7]");
        let l = GeneratorLabel::Single {
            block: UBlock::U2,
            particle: 1,
        };
        assert_eq!(l.to_string(), "T2[u2]");
    }
}
