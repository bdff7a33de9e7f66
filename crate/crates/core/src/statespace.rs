//! Bipartite states and the structural maps on them: Kronecker products, the
//! flip operator, symmetrization, partial transposition, marginals, numerical
//! rank, and Schmidt decompositions.
//!
//! Everything works on the product basis `e_i ⊗ e_j ↦ i·m + j` (0-based,
//! row-major). That ordering makes the partial transpose a pure index
//! permutation and is also the on-disk layout of the CLI state files.
//! States are *not* normalized to unit trace; every operation here is
//! scale-covariant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix used throughout.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex vector used throughout.
pub type CVector = DVector<Complex64>;

/// Tolerances for rank thresholding, positivity checks, and reconstructions.
///
/// All three are dimensionless ratios in (0, 1). Rank cutoffs are relative to
/// the largest eigenvalue/singular value so that results are invariant under
/// rescaling of the state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative cutoff for numerical rank and Schmidt rank.
    pub rel_rank_tol: f64,
    /// Relative tolerance for Hermiticity and positive-semidefiniteness.
    pub psd_tol: f64,
    /// Relative tolerance for reconstruction checks.
    pub recon_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rel_rank_tol: 1e-10,
            psd_tol: 1e-10,
            recon_tol: 1e-10,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rel_rank_tol: f64, psd_tol: f64, recon_tol: f64) -> Result<Self> {
        for value in [rel_rank_tol, psd_tol, recon_tol] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::BadTolerance { value });
            }
        }
        Ok(Self {
            rel_rank_tol,
            psd_tol,
            recon_tol,
        })
    }

    /// One knob for all three tolerances (the CLI `--tol` flag).
    pub fn uniform(tol: f64) -> Result<Self> {
        Self::new(tol, tol, tol)
    }
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Sign selecting the symmetric (`Plus`) or antisymmetric (`Minus`) map
/// `γ ↦ (Id ± F) γ (Id ± F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A vector in the product space `C^k ⊗ C^m`, stored in the product basis
/// order `e_i ⊗ e_j ↦ i·m + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureVector {
    dim_left: usize,
    dim_right: usize,
    entries: CVector,
}

impl PureVector {
    pub fn new(dim_left: usize, dim_right: usize, entries: CVector) -> Result<Self> {
        if dim_left == 0 || dim_right == 0 {
            return Err(Error::BadDimensions(format!(
                "factor dimensions must be positive, got {dim_left}x{dim_right}"
            )));
        }
        if entries.len() != dim_left * dim_right {
            return Err(Error::BadDimensions(format!(
                "entry count {} does not match {dim_left}·{dim_right}",
                entries.len()
            )));
        }
        Ok(Self {
            dim_left,
            dim_right,
            entries,
        })
    }

    pub fn zero(dim_left: usize, dim_right: usize) -> Result<Self> {
        Self::new(dim_left, dim_right, CVector::zeros(dim_left * dim_right))
    }

    /// The product vector `a ⊗ b`.
    pub fn product(a: &CVector, b: &CVector) -> Self {
        Self {
            dim_left: a.len(),
            dim_right: b.len(),
            entries: kron_vec(a, b),
        }
    }

    /// The unnormalized maximally entangled vector `u = Σ_i e_i ⊗ e_i`.
    pub fn maximally_entangled(k: usize) -> Self {
        let mut entries = CVector::zeros(k * k);
        for i in 0..k {
            entries[i * k + i] = Complex64::new(1.0, 0.0);
        }
        Self {
            dim_left: k,
            dim_right: k,
            entries,
        }
    }

    pub fn dim_left(&self) -> usize {
        self.dim_left
    }

    pub fn dim_right(&self) -> usize {
        self.dim_right
    }

    pub fn entries(&self) -> &CVector {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Reshape into the `k×m` matrix `W` with `W[i,j] = entries[i·m + j]`.
    /// Its singular values are the Schmidt coefficients.
    pub fn reshaped(&self) -> CMatrix {
        CMatrix::from_fn(self.dim_left, self.dim_right, |i, j| {
            self.entries[i * self.dim_right + j]
        })
    }

    /// The rank-one projector `w w†`.
    pub fn outer(&self) -> CMatrix {
        &self.entries * self.entries.adjoint()
    }
}

/// A (non-normalized) bipartite state: a Hermitian positive-semidefinite
/// matrix of order `k·m` together with its factor dimensions.
///
/// The constructor enforces Hermiticity (symmetrizing small defects, erroring
/// on large ones) but not positivity; use [`check_state`] to validate a
/// candidate, e.g. a partial transpose that may fail the PPT test.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_left: usize,
    dim_right: usize,
    matrix: CMatrix,
}

impl BipartiteState {
    pub fn new(
        dim_left: usize,
        dim_right: usize,
        matrix: CMatrix,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        if dim_left == 0 || dim_right == 0 {
            return Err(Error::BadDimensions(format!(
                "factor dimensions must be positive, got {dim_left}x{dim_right}"
            )));
        }
        let order = dim_left * dim_right;
        if matrix.nrows() != order || matrix.ncols() != order {
            return Err(Error::BadDimensions(format!(
                "matrix is {}x{}, expected {order}x{order}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = hermitian_defect(&matrix);
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let tol = cfg.psd_tol * scale;
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        Ok(Self {
            dim_left,
            dim_right,
            matrix: hermitian_part(&matrix),
        })
    }

    /// Build `w w†` from a pure vector. Exactly Hermitian by construction.
    pub fn from_pure(w: &PureVector) -> Self {
        Self {
            dim_left: w.dim_left,
            dim_right: w.dim_right,
            matrix: w.outer(),
        }
    }

    /// The unnormalized identity state on `C^k ⊗ C^m`.
    pub fn identity(dim_left: usize, dim_right: usize) -> Self {
        let order = dim_left * dim_right;
        Self {
            dim_left,
            dim_right,
            matrix: CMatrix::identity(order, order),
        }
    }

    /// Trusted constructor for matrices that are Hermitian by construction.
    pub(crate) fn from_parts(dim_left: usize, dim_right: usize, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), dim_left * dim_right);
        debug_assert_eq!(matrix.ncols(), dim_left * dim_right);
        Self {
            dim_left,
            dim_right,
            matrix,
        }
    }

    pub fn dim_left(&self) -> usize {
        self.dim_left
    }

    pub fn dim_right(&self) -> usize {
        self.dim_right
    }

    /// Order of the underlying matrix, `k·m`.
    pub fn order(&self) -> usize {
        self.dim_left * self.dim_right
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Trace (real part; the imaginary part is zero for Hermitian matrices).
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// Schmidt decomposition of a pure vector: `w = Σ_t c_t · x_t ⊗ y_t` with
/// nonincreasing coefficients and orthonormal `x_t`, `y_t`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Nonincreasing, nonnegative Schmidt coefficients (all `min(k,m)` of
    /// them, including numerically-zero ones).
    pub coefficients: Vec<f64>,
    /// Orthonormal vectors in the left factor `C^k`.
    pub left_vectors: Vec<CVector>,
    /// Orthonormal vectors in the right factor `C^m`.
    pub right_vectors: Vec<CVector>,
    /// Number of coefficients above the relative rank threshold.
    pub numerical_rank: usize,
}

impl SchmidtDecomposition {
    /// Rebuild `Σ_t c_t · x_t ⊗ y_t`.
    pub fn reconstruct(&self, dim_left: usize, dim_right: usize) -> PureVector {
        let mut entries = CVector::zeros(dim_left * dim_right);
        for ((c, x), y) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            entries += kron_vec(x, y) * Complex64::new(*c, 0.0);
        }
        PureVector {
            dim_left,
            dim_right,
            entries,
        }
    }
}

/// Outcome of validating a candidate state (Hermiticity and positivity).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateValidation {
    pub hermitian: bool,
    pub hermitian_defect: f64,
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub trace: f64,
}

impl StateValidation {
    pub fn is_valid(&self) -> bool {
        self.hermitian && self.psd
    }

    /// Name of the first violated check, if any.
    pub fn violation(&self) -> Option<String> {
        if !self.hermitian {
            Some(format!(
                "not Hermitian (defect {:.3e})",
                self.hermitian_defect
            ))
        } else if !self.psd {
            Some(format!(
                "not positive semidefinite (min eigenvalue {:.6e})",
                self.min_eigenvalue
            ))
        } else {
            None
        }
    }
}

/// Kronecker product `A ⊗ B` in the product basis order used everywhere here.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of vectors, `(a ⊗ b)[i·m + j] = a_i b_j`.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let m = b.len();
    CVector::from_fn(a.len() * m, |idx, _| a[idx / m] * b[idx % m])
}

/// The flip (swap) operator `F` on `C^k ⊗ C^k`: `F(a ⊗ b) = b ⊗ a`.
///
/// `F = Σ_{i,j} E_ij ⊗ E_ji`; it is a Hermitian involution, and `Id ± F` are
/// twice the projectors onto the symmetric/antisymmetric subspaces.
pub fn flip_operator(k: usize) -> CMatrix {
    let mut f = CMatrix::zeros(k * k, k * k);
    for p in 0..k {
        for q in 0..k {
            f[(p * k + q, q * k + p)] = Complex64::new(1.0, 0.0);
        }
    }
    f
}

/// `(Id + sign·F) γ (Id + sign·F)`, i.e. `γ_S` for `Plus` and `γ_A` for
/// `Minus`. Requires equal factor dimensions.
pub fn symmetrize(state: &BipartiteState, sign: Sign) -> Result<BipartiteState> {
    let k = require_square(state)?;
    let mut p = flip_operator(k) * Complex64::new(sign.factor(), 0.0);
    for i in 0..k * k {
        p[(i, i)] += Complex64::new(1.0, 0.0);
    }
    let product = &p * state.matrix() * &p;
    Ok(BipartiteState::from_parts(k, k, hermitian_part(&product)))
}

/// Partial transpose `γ^Γ`: transpose of the right tensor factor.
///
/// A pure index permutation in the product basis; the result is Hermitian with
/// the same trace but need not be positive. Returns the raw matrix so the PPT
/// test can inspect its spectrum.
pub fn partial_transpose(state: &BipartiteState) -> CMatrix {
    partial_transpose_matrix(state.matrix(), state.dim_left(), state.dim_right())
}

pub(crate) fn partial_transpose_matrix(matrix: &CMatrix, k: usize, m: usize) -> CMatrix {
    CMatrix::from_fn(k * m, k * m, |row, col| {
        let (i, j) = (row / m, row % m);
        let (ip, jp) = (col / m, col % m);
        matrix[(i * m + jp, ip * m + j)]
    })
}

/// Partial trace over the opposite factor: `γ_L` for `Side::Left`, `γ_R` for
/// `Side::Right`. Preserves the trace and positivity.
pub fn marginal(state: &BipartiteState, side: Side) -> CMatrix {
    let (k, m) = (state.dim_left(), state.dim_right());
    let g = state.matrix();
    match side {
        Side::Left => CMatrix::from_fn(k, k, |i, ip| {
            (0..m).map(|j| g[(i * m + j, ip * m + j)]).sum()
        }),
        Side::Right => CMatrix::from_fn(m, m, |j, jp| {
            (0..k).map(|i| g[(i * m + j, i * m + jp)]).sum()
        }),
    }
}

/// Eigenvalues of a Hermitian matrix, ascending. The matrix is checked for
/// Hermiticity within `psd_tol` first.
pub fn hermitian_eigenvalues(h: &CMatrix, cfg: &ToleranceConfig) -> Result<Vec<f64>> {
    check_hermitian(h, cfg)?;
    Ok(crate::eigen::hermitian_eigenvalues_unchecked(&hermitian_part(h)))
}

/// Number of eigenvalues `λ` with `|λ| > rel_rank_tol · max_i |λ_i|`.
///
/// Returns 0 when every `|λ_i|` is at or below the absolute floor
/// `rel_rank_tol`, so the zero matrix has rank 0 regardless of scale.
pub fn numerical_rank(h: &CMatrix, cfg: &ToleranceConfig) -> Result<usize> {
    let values = hermitian_eigenvalues(h, cfg)?;
    Ok(rank_from_magnitudes(
        values.iter().map(|v| v.abs()),
        cfg.rel_rank_tol,
    ))
}

pub(crate) fn rank_from_magnitudes<I>(magnitudes: I, rel_tol: f64) -> usize
where
    I: IntoIterator<Item = f64>,
{
    let mags: Vec<f64> = magnitudes.into_iter().collect();
    let max = mags.iter().copied().fold(0.0_f64, f64::max);
    if max <= rel_tol {
        return 0;
    }
    mags.iter().filter(|m| **m > rel_tol * max).count()
}

/// Schmidt decomposition via SVD of the reshaped vector.
///
/// The zero vector yields all-zero coefficients and rank 0.
pub fn schmidt_decompose(w: &PureVector, cfg: &ToleranceConfig) -> SchmidtDecomposition {
    let reshaped = w.reshaped();
    let svd = reshaped.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let coefficients: Vec<f64> = svd.singular_values.iter().copied().collect();
    let left_vectors: Vec<CVector> = (0..u.ncols()).map(|t| u.column(t).into_owned()).collect();
    // w = Σ σ_t u_t ⊗ y_t requires the *plain* transpose of the t-th row of
    // v_t; conjugating here would reconstruct the wrong vector.
    let right_vectors: Vec<CVector> = (0..v_t.nrows())
        .map(|t| v_t.row(t).transpose())
        .collect();
    let numerical_rank = rank_from_magnitudes(coefficients.iter().copied(), cfg.rel_rank_tol);
    SchmidtDecomposition {
        coefficients,
        left_vectors,
        right_vectors,
        numerical_rank,
    }
}

/// Schmidt rank `SR(w)`: the numerical rank of the reshaped vector.
pub fn schmidt_rank(w: &PureVector, cfg: &ToleranceConfig) -> usize {
    let singular_values = w.reshaped().singular_values();
    rank_from_magnitudes(singular_values.iter().copied(), cfg.rel_rank_tol)
}

/// Validate Hermiticity and positive semidefiniteness of a candidate state.
///
/// Never errors; the verdict records the minimum eigenvalue so callers can
/// report exactly which check failed (a negative eigenvalue of `γ^Γ` is the
/// NPT entanglement signal, for instance).
pub fn check_state(state: &BipartiteState, cfg: &ToleranceConfig) -> StateValidation {
    let matrix = state.matrix();
    let defect = hermitian_defect(matrix);
    let entry_scale = matrix.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let hermitian = defect <= cfg.psd_tol * entry_scale;

    let eigenvalues = crate::eigen::hermitian_eigenvalues_unchecked(&hermitian_part(matrix));
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    let max_eigenvalue = eigenvalues.last().copied().unwrap_or(0.0);
    let spectral_scale = if eigenvalues.iter().all(|v| v.abs() <= cfg.psd_tol) {
        1.0
    } else {
        max_eigenvalue
    };
    let psd = min_eigenvalue >= -cfg.psd_tol * spectral_scale;

    StateValidation {
        hermitian,
        hermitian_defect: defect,
        psd,
        min_eigenvalue,
        max_eigenvalue,
        trace: state.trace(),
    }
}

pub(crate) fn require_square(state: &BipartiteState) -> Result<usize> {
    if state.dim_left() == state.dim_right() {
        Ok(state.dim_left())
    } else {
        Err(Error::NonSquareFactors {
            left: state.dim_left(),
            right: state.dim_right(),
        })
    }
}

pub(crate) fn check_hermitian(m: &CMatrix, cfg: &ToleranceConfig) -> Result<()> {
    let defect = hermitian_defect(m);
    let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let tol = cfg.psd_tol * scale;
    if defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }
    Ok(())
}

/// Largest entrywise magnitude of `M − M†`.
pub(crate) fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut defect = 0.0_f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect
}

/// `(M + M†)/2`.
pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}
