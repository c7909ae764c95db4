//! Finite-dimensional state vectors, observables and projective measurement.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::sampling;

/// Dense complex matrix used for observables and bipartite coefficients.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 64;
/// Largest observable handed to [`eigensystem`].
pub const MAX_EIGEN_DIM: usize = 8;
/// Boltzmann constant in J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Order of the Planck time quantum, in seconds. Documented only; no dynamics use it.
pub const PLANCK_TIME_ORDER: f64 = 1e-42;

pub const NORM_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const ORTHONORMAL_TOL: f64 = 1e-8;
pub const ZERO_TOL: f64 = 1e-12;
pub const SCHMIDT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantumError {
    #[error("dimension {0} outside 1..={1}")]
    InvalidDimension(usize, usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("amplitudes must be finite")]
    NonFinite,
    #[error("state is numerically zero")]
    ZeroVector,
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("basis is not orthonormal (max Gram deviation {0:e})")]
    NonOrthonormalBasis(f64),
    #[error("basis does not span the state (captured probability {0})")]
    IncompleteBasis(f64),
    #[error("{coeffs} coefficients for {states} states")]
    LengthMismatch { states: usize, coeffs: usize },
    #[error("temperature must be positive, got {0} K")]
    NonphysicalTemperature(f64),
    #[error("bit count must be finite and nonnegative, got {0}")]
    InvalidBits(f64),
}

type Result<T> = std::result::Result<T, QuantumError>;

fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(QuantumError::InvalidDimension(dim, MAX_DIM))
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A vector of complex amplitudes. Serialized as a list of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for StateVector {
    type Error = QuantumError;

    fn try_from(amps: Vec<Complex64>) -> Result<Self> {
        Self::new(amps)
    }
}

impl From<StateVector> for Vec<Complex64> {
    fn from(s: StateVector) -> Self {
        s.amps
    }
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        check_dim(amps.len())?;
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(QuantumError::NonFinite);
        }
        Ok(Self { amps })
    }

    /// Like [`Self::new`] but requires `Σ|c_i|² = 1` within [`NORM_TOL`].
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let s = Self::new(amps)?;
        s.require_normalized()?;
        Ok(s)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k >= dim {
            return Err(QuantumError::DimensionMismatch {
                expected: dim,
                found: k + 1,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// The standard basis of dimension `dim`.
    pub fn standard_basis(dim: usize) -> Result<Vec<Self>> {
        (0..dim).map(|k| Self::basis(dim, k)).collect()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(QuantumError::NotNormalized(self.norm_sqr()))
        }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_dim(other)?;
        Ok(inner(&self.amps, &other.amps))
    }

    /// Orthogonality test used to decide whether two states can be told apart.
    pub fn is_orthogonal(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.inner(other)?.norm() <= tol)
    }

    pub fn renormalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < ZERO_TOL {
            return Err(QuantumError::ZeroVector);
        }
        Ok(Self {
            amps: self.amps.iter().map(|c| c / n).collect(),
        })
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(QuantumError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }
}

/// A renormalized linear combination together with the norm of the raw sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    pub state: StateVector,
    /// `‖Σ c_i ψ_i‖` before renormalization.
    pub raw_norm: f64,
}

pub fn superpose(states: &[StateVector], coeffs: &[Complex64]) -> Result<Superposition> {
    if states.len() != coeffs.len() {
        return Err(QuantumError::LengthMismatch {
            states: states.len(),
            coeffs: coeffs.len(),
        });
    }
    let first = states.first().ok_or(QuantumError::ZeroVector)?;
    let mut sum = vec![Complex64::new(0.0, 0.0); first.dim()];
    for (s, c) in states.iter().zip(coeffs) {
        first.same_dim(s)?;
        sum.iter_mut()
            .zip(&s.amps)
            .for_each(|(acc, a)| *acc += c * a);
    }
    let raw = StateVector::new(sum)?;
    let raw_norm = raw.norm();
    Ok(Superposition {
        state: raw.renormalized()?,
        raw_norm,
    })
}

/// A Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: DMatrix<Complex64>,
}

impl Observable {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(QuantumError::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_dim(matrix.nrows())?;
        let deviation = (&matrix - matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if deviation > HERMITIAN_TOL {
            return Err(QuantumError::NotHermitian(deviation));
        }
        Ok(Self { matrix })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(QuantumError::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        check_dim(n)?;
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        check_dim(n)?;
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim() {
            return Err(QuantumError::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        let out = &self.matrix * nalgebra::DVector::from_column_slice(&v.amps);
        StateVector::new(out.iter().copied().collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: StateVector,
}

/// A group of numerically equal eigenvalues with the projector onto their span.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspace {
    pub value: f64,
    pub vectors: Vec<StateVector>,
    pub projector: DMatrix<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    /// Sorted by ascending eigenvalue.
    pub pairs: Vec<EigenPair>,
}

impl Eigensystem {
    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn vectors(&self) -> Vec<StateVector> {
        self.pairs.iter().map(|p| p.vector.clone()).collect()
    }

    /// Groups eigenvalues closer than `tol` into eigenspaces.
    pub fn eigenspaces(&self, tol: f64) -> Vec<Eigenspace> {
        let mut groups: Vec<Vec<&EigenPair>> = Vec::new();
        for pair in &self.pairs {
            match groups.last_mut() {
                Some(g) if (pair.value - g[0].value).abs() <= tol => g.push(pair),
                _ => groups.push(vec![pair]),
            }
        }
        groups
            .into_iter()
            .map(|g| {
                let dim = g[0].vector.dim();
                let value = g.iter().map(|p| p.value).sum::<f64>() / g.len() as f64;
                let mut projector = DMatrix::zeros(dim, dim);
                for p in &g {
                    let v = nalgebra::DVector::from_column_slice(p.vector.amplitudes());
                    projector += &v * v.adjoint();
                }
                Eigenspace {
                    value,
                    vectors: g.iter().map(|p| p.vector.clone()).collect(),
                    projector,
                }
            })
            .collect()
    }
}

/// Real spectrum and orthonormal eigenvectors of a Hermitian observable.
///
/// Each eigenvector is rotated so its first non-negligible component is real
/// and positive.
pub fn eigensystem(a: &Observable) -> Result<Eigensystem> {
    if a.dim() > MAX_EIGEN_DIM {
        return Err(QuantumError::InvalidDimension(a.dim(), MAX_EIGEN_DIM));
    }
    let eig = a.matrix.clone().symmetric_eigen();
    let mut pairs: Vec<EigenPair> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .map(|(&value, col)| {
            let mut amps: Vec<Complex64> = col.iter().copied().collect();
            if let Some(lead) = amps.iter().find(|c| c.norm() > 1e-9).copied() {
                let phase = lead.conj() / lead.norm();
                amps.iter_mut().for_each(|c| *c *= phase);
            }
            EigenPair {
                value,
                vector: StateVector { amps },
            }
        })
        .collect();
    pairs.sort_by(|x, y| x.value.total_cmp(&y.value));
    Ok(Eigensystem { pairs })
}

fn check_basis(dim: usize, basis: &[StateVector]) -> Result<()> {
    let mut deviation: f64 = 0.0;
    for (i, b) in basis.iter().enumerate() {
        if b.dim() != dim {
            return Err(QuantumError::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
        for (j, c) in basis.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((inner(&b.amps, &c.amps) - target).norm());
        }
    }
    if basis.is_empty() || deviation > ORTHONORMAL_TOL {
        return Err(QuantumError::NonOrthonormalBasis(deviation));
    }
    Ok(())
}

/// `p_i = |⟨basis_i|s⟩|²` for a normalized state and an orthonormal basis.
pub fn born_probabilities(s: &StateVector, basis: &[StateVector]) -> Result<Vec<f64>> {
    s.require_normalized()?;
    check_basis(s.dim(), basis)?;
    Ok(basis
        .iter()
        .map(|b| inner(&b.amps, &s.amps).norm_sqr())
        .collect())
}

fn complete_probabilities(s: &StateVector, basis: &[StateVector]) -> Result<Vec<f64>> {
    let probs = born_probabilities(s, basis)?;
    let total: f64 = probs.iter().sum();
    if total < 1.0 - ORTHONORMAL_TOL {
        return Err(QuantumError::IncompleteBasis(total));
    }
    Ok(probs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Collapse {
    pub outcome: usize,
    pub post_state: StateVector,
}

/// Projective measurement: samples an outcome by the Born rule and returns
/// the selected basis vector as the post-measurement state.
pub fn collapse(s: &StateVector, basis: &[StateVector], seed: u64) -> Result<Collapse> {
    let probs = complete_probabilities(s, basis)?;
    let outcome = sampling::sample_once(&probs, seed);
    Ok(Collapse {
        outcome,
        post_state: basis[outcome].clone(),
    })
}

/// Outcome counts over `trials` independent collapses of fresh copies of `s`.
pub fn collapse_counts(
    s: &StateVector,
    basis: &[StateVector],
    trials: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    let probs = complete_probabilities(s, basis)?;
    Ok(sampling::sample_counts(&probs, trials, seed))
}

/// A pure state of a two-part system, stored as its coefficient matrix
/// (`C[i][j]` is the amplitude of `|i⟩|j⟩`).
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    coeffs: DMatrix<Complex64>,
}

impl BipartiteState {
    pub fn new(coeffs: DMatrix<Complex64>) -> Result<Self> {
        check_dim(coeffs.nrows())?;
        check_dim(coeffs.ncols())?;
        let n = coeffs.norm_squared();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized(n));
        }
        Ok(Self { coeffs })
    }

    pub fn product(a: &StateVector, b: &StateVector) -> Result<Self> {
        let col = nalgebra::DVector::from_column_slice(&a.amps);
        let row = nalgebra::DVector::from_column_slice(&b.amps);
        Self::new(&col * row.transpose())
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.coeffs.nrows(), self.coeffs.ncols())
    }

    pub fn coefficients(&self) -> &DMatrix<Complex64> {
        &self.coeffs
    }

    /// Singular values of the coefficient matrix, descending.
    pub fn schmidt_coefficients(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .coeffs
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Number of Schmidt coefficients above `tol`; 1 means the state factorizes.
    pub fn schmidt_rank(&self, tol: f64) -> usize {
        self.schmidt_coefficients()
            .iter()
            .filter(|&&s| s > tol)
            .count()
    }

    /// Reduced density matrix of the first factor, `C C†`.
    pub fn reduced_first(&self) -> DMatrix<Complex64> {
        &self.coeffs * self.coeffs.adjoint()
    }

    /// Reduced density matrix of the second factor, `Cᵀ C*`.
    pub fn reduced_second(&self) -> DMatrix<Complex64> {
        self.coeffs.transpose() * self.coeffs.conjugate()
    }
}

pub fn schmidt_rank(b: &BipartiteState, tol: f64) -> usize {
    b.schmidt_rank(tol)
}

/// Correlates a two-level system with a pointer:
/// `(c₁|ψ₁⟩ + c₂|ψ₂⟩)|ready⟩ ↦ c₁|ψ₁⟩|φ₁⟩ + c₂|ψ₂⟩|φ₂⟩`.
///
/// The system amplitudes are taken in the standard basis. All inputs must be
/// normalized, so the output is too.
pub fn premeasure(
    system: &StateVector,
    pointer_ready: &StateVector,
    branches: [&StateVector; 2],
) -> Result<BipartiteState> {
    if system.dim() != 2 {
        return Err(QuantumError::DimensionMismatch {
            expected: 2,
            found: system.dim(),
        });
    }
    pointer_ready.same_dim(branches[0])?;
    pointer_ready.same_dim(branches[1])?;
    for s in [system, pointer_ready, branches[0], branches[1]] {
        s.require_normalized()?;
    }
    let d = pointer_ready.dim();
    let coeffs = DMatrix::from_fn(2, d, |i, j| system.amps[i] * branches[i].amps[j]);
    BipartiteState::new(coeffs)
}

/// Overlap of two pointer states made of `n_dof` independent subsystems
/// whose pairwise overlap is `g ∈ [0, 1]`: `g^n_dof`.
///
/// Evaluated as `exp(n ln g)`, which reproduces `e^(-n)` exactly for `g = e⁻¹`.
pub fn pointer_overlap(n_dof: u32, g: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&g), "overlap {g} outside [0, 1]");
    if n_dof == 0 {
        1.0
    } else if g == 0.0 {
        0.0
    } else {
        (f64::from(n_dof) * g.ln()).exp()
    }
}

/// Minimum heat, in joules, for erasing `bits` bits at `temperature` kelvin.
pub fn landauer_cost(temperature: f64, bits: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(QuantumError::NonphysicalTemperature(temperature));
    }
    if !(bits >= 0.0 && bits.is_finite()) {
        return Err(QuantumError::InvalidBits(bits));
    }
    Ok(BOLTZMANN * temperature * bits * LN_2)
}
