//! Constructions: the PPT family `γ = Id + F + ε·vv̄ᵗ` with certified Schmidt
//! number, the explicit product decomposition of `Id + F` that certifies its
//! separability, and seeded random-state generators for the test ensembles.
//!
//! All generators are deterministic functions of their seed and safe to call
//! concurrently.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::statespace::{
    flip_operator, hermitian_part, kron_vec, partial_transpose, schmidt_rank, BipartiteState,
    CMatrix, CVector, PureVector, ToleranceConfig,
};

/// Largest local dimension for which the `Id + F` product decomposition is
/// enumerated (4^k phase terms).
pub const MAX_DECOMPOSITION_DIM: usize = 8;

/// Parameters of the family `γ = Id + F + ε·vv̄ᵗ` with `v = Σ a_i ⊗ b_i`.
///
/// The 2n vectors `{a_1..a_n, b_1..b_n}` must be linearly independent, which
/// forces `2n ≤ k`; for every `ε > 0` the resulting state then has Schmidt
/// number exactly `n`, and a small enough `ε` (see [`auto_epsilon`]) keeps it
/// PPT.
#[derive(Debug, Clone)]
pub struct FamilyParams {
    k: usize,
    n: usize,
    a_vectors: Vec<CVector>,
    b_vectors: Vec<CVector>,
    epsilon: f64,
}

impl FamilyParams {
    pub fn new(
        k: usize,
        n: usize,
        a_vectors: Vec<CVector>,
        b_vectors: Vec<CVector>,
        epsilon: f64,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        if n == 0 || 2 * n > k {
            return Err(Error::BadRank { rank: n, max: k / 2 });
        }
        if a_vectors.len() != n || b_vectors.len() != n {
            return Err(Error::BadDimensions(format!(
                "expected {n} vectors per side, got {} and {}",
                a_vectors.len(),
                b_vectors.len()
            )));
        }
        if a_vectors
            .iter()
            .chain(&b_vectors)
            .any(|v| v.len() != k)
        {
            return Err(Error::BadDimensions(format!(
                "family vectors must live in dimension {k}"
            )));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::BadDimensions(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }

        // Independence: smallest singular value of the k×2n stack must clear
        // the relative rank threshold.
        let mut stack = CMatrix::zeros(k, 2 * n);
        for (col, v) in a_vectors.iter().chain(&b_vectors).enumerate() {
            stack.set_column(col, v);
        }
        let sv = stack.singular_values();
        let largest = sv.iter().copied().fold(0.0_f64, f64::max);
        let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
        let ratio = if largest > 0.0 { smallest / largest } else { 0.0 };
        if sv.len() < 2 * n || !(smallest > cfg.rel_rank_tol * largest) {
            return Err(Error::DependentVectors { ratio });
        }

        Ok(Self {
            k,
            n,
            a_vectors,
            b_vectors,
            epsilon,
        })
    }

    /// Canonical choice `a_i = e_i`, `b_i = e_{n+i}` (independent whenever
    /// `2n ≤ k`).
    pub fn canonical(k: usize, n: usize, epsilon: f64, cfg: &ToleranceConfig) -> Result<Self> {
        let basis = |i: usize| {
            let mut v = CVector::zeros(k);
            v[i] = Complex64::new(1.0, 0.0);
            v
        };
        if n == 0 || 2 * n > k {
            return Err(Error::BadRank { rank: n, max: k / 2 });
        }
        let a_vectors = (0..n).map(basis).collect();
        let b_vectors = (0..n).map(|i| basis(n + i)).collect();
        Self::new(k, n, a_vectors, b_vectors, epsilon, cfg)
    }

    /// Seeded random choice: the 2n vectors are the first columns of a Haar
    /// unitary, hence orthonormal and exactly independent.
    pub fn random(
        k: usize,
        n: usize,
        epsilon: f64,
        seed: u64,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        if n == 0 || 2 * n > k {
            return Err(Error::BadRank { rank: n, max: k / 2 });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = random_orthonormal(&mut rng, k, 2 * n);
        let a_vectors = (0..n).map(|i| frame.column(i).into_owned()).collect();
        let b_vectors = (0..n).map(|i| frame.column(n + i).into_owned()).collect();
        Self::new(k, n, a_vectors, b_vectors, epsilon, cfg)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self {
            epsilon,
            ..self.clone()
        }
    }

    pub fn a_vectors(&self) -> &[CVector] {
        &self.a_vectors
    }

    pub fn b_vectors(&self) -> &[CVector] {
        &self.b_vectors
    }

    /// The vector `v = Σ_i a_i ⊗ b_i` whose projector is added to `Id + F`.
    /// Its Schmidt rank is `n`.
    pub fn vector(&self) -> PureVector {
        let mut entries = CVector::zeros(self.k * self.k);
        for (a, b) in self.a_vectors.iter().zip(&self.b_vectors) {
            entries += kron_vec(a, b);
        }
        PureVector::new(self.k, self.k, entries).expect("dimensions fixed by construction")
    }
}

/// The family state `γ = Id + F + ε·vv̄ᵗ`. Positive semidefinite for every
/// `ε > 0` as a sum of PSD terms.
pub fn family_state(params: &FamilyParams) -> BipartiteState {
    let k = params.k;
    let mut matrix = flip_operator(k);
    for i in 0..k * k {
        matrix[(i, i)] += Complex64::new(1.0, 0.0);
    }
    matrix += params.vector().outer() * Complex64::new(params.epsilon, 0.0);
    BipartiteState::from_parts(k, k, matrix)
}

/// The antisymmetric vector `a = Σ_i a_i ⊗ b_i − b_i ⊗ a_i = (Id − F)v`.
/// Satisfies `F·a = −a` and has Schmidt rank `2n` by independence.
pub fn antisym_vector(params: &FamilyParams) -> PureVector {
    let k = params.k;
    let mut entries = CVector::zeros(k * k);
    for (a, b) in params.a_vectors.iter().zip(&params.b_vectors) {
        entries += kron_vec(a, b) - kron_vec(b, a);
    }
    PureVector::new(k, k, entries).expect("dimensions fixed by construction")
}

/// A certified `ε` that keeps `γ = Id + F + ε·vv̄ᵗ` positive under partial
/// transposition.
///
/// Since `(Id+F)^Γ = Id + uuᵗ` has minimum eigenvalue 1, any
/// `ε ≤ 1/|λ_min((vv̄ᵗ)^Γ)|` works; we take half that (or 1 when the partial
/// transpose is already PSD) and post-verify with the eigensolver, halving up
/// to 60 times if the margin check fails.
pub fn auto_epsilon(v: &PureVector, cfg: &ToleranceConfig) -> Result<f64> {
    if v.dim_left() != v.dim_right() {
        return Err(Error::NonSquareFactors {
            left: v.dim_left(),
            right: v.dim_right(),
        });
    }
    if v.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let k = v.dim_left();
    let projector = BipartiteState::from_pure(v);
    let transposed = partial_transpose(&projector);
    let lambda_min = min_eigenvalue(&transposed);
    let mut epsilon = if lambda_min >= 0.0 {
        1.0
    } else {
        1.0 / (2.0 * lambda_min.abs())
    };

    // (Id+F)^Γ = Id + uu^t.
    let u = PureVector::maximally_entangled(k);
    let base = CMatrix::identity(k * k, k * k) + u.outer();
    for _ in 0..=60 {
        let candidate = &base + &transposed * Complex64::new(epsilon, 0.0);
        if min_eigenvalue(&candidate) >= -cfg.psd_tol {
            return Ok(epsilon);
        }
        epsilon *= 0.5;
    }
    Err(Error::EpsilonSearchFailed { halvings: 60 })
}

fn min_eigenvalue(h: &CMatrix) -> f64 {
    crate::eigen::hermitian_eigenvalues_unchecked(h)
        .first()
        .copied()
        .unwrap_or(0.0)
}

/// One product term `weight · (left ⊗ right)(left ⊗ right)†` of a separable
/// decomposition.
#[derive(Debug, Clone)]
pub struct ProductTerm {
    pub weight: f64,
    pub left: CVector,
    pub right: CVector,
}

/// A nonnegative-weighted sum of product projectors reconstructing a target
/// operator; its existence certifies Schmidt number 1.
#[derive(Debug, Clone)]
pub struct ProductDecomposition {
    pub terms: Vec<ProductTerm>,
    pub target_label: String,
}

impl ProductDecomposition {
    /// `Σ weight · (l⊗r)(l⊗r)†`.
    pub fn reconstruct(&self, dim_left: usize, dim_right: usize) -> CMatrix {
        let order = dim_left * dim_right;
        let mut acc = CMatrix::zeros(order, order);
        for term in &self.terms {
            let w = kron_vec(&term.left, &term.right);
            accumulate_outer(&mut acc, &w, term.weight);
        }
        acc
    }

    /// Relative Frobenius error of the reconstruction against `target`.
    pub fn reconstruction_error(&self, target: &CMatrix, dim_left: usize, dim_right: usize) -> f64 {
        let rebuilt = self.reconstruct(dim_left, dim_right);
        let scale = target.norm().max(f64::MIN_POSITIVE);
        (rebuilt - target).norm() / scale
    }
}

/// `acc += weight · w w†` without allocating the outer product.
fn accumulate_outer(acc: &mut CMatrix, w: &CVector, weight: f64) {
    let n = w.len();
    for j in 0..n {
        let scaled = w[j].conj() * weight;
        for i in 0..n {
            acc[(i, j)] += w[i] * scaled;
        }
    }
}

/// Exact product decomposition of `Id + F` on `C^k ⊗ C^k`.
///
/// Averaging `(v_c ⊗ v_c)(v_c ⊗ v_c)†` over all fourth-root-of-unity phase
/// vectors `v_c = Σ_j c_j e_j` yields `Id + F − Σ_j (e_j⊗e_j)(e_j⊗e_j)†`;
/// adding the `k` diagonal product terms finishes the job. That is `4^k`
/// phase terms of weight `4^{−k}` plus `k` terms of weight 1, so the
/// enumeration is capped at `k ≤ 8`.
pub fn sym_separable_decomposition(k: usize) -> Result<ProductDecomposition> {
    if k == 0 {
        return Err(Error::BadDimensions("dimension must be positive".into()));
    }
    if k > MAX_DECOMPOSITION_DIM {
        return Err(Error::DimensionTooLarge {
            dim: k,
            max: MAX_DECOMPOSITION_DIM,
        });
    }
    const PHASES: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let count = 4_usize.pow(k as u32);
    let weight = 1.0 / count as f64;
    let mut terms = Vec::with_capacity(count + k);
    for code in 0..count {
        let v = CVector::from_fn(k, |j, _| PHASES[(code >> (2 * j)) & 3]);
        terms.push(ProductTerm {
            weight,
            left: v.clone(),
            right: v,
        });
    }
    for j in 0..k {
        let mut e = CVector::zeros(k);
        e[j] = Complex64::new(1.0, 0.0);
        terms.push(ProductTerm {
            weight: 1.0,
            left: e.clone(),
            right: e,
        });
    }
    Ok(ProductDecomposition {
        terms,
        target_label: "id_plus_flip".into(),
    })
}

/// Upper-bound certificate: an explicit decomposition of the family state
/// into pure projectors whose largest Schmidt rank is the certified value.
#[derive(Debug, Clone)]
pub struct SnUpperCertificate {
    /// `max(1, SR(v)) = n`.
    pub value: usize,
    /// Weighted pure terms: the `Id + F` product terms plus `ε·vv̄ᵗ`.
    pub terms: Vec<(f64, PureVector)>,
    /// Relative Frobenius error of `Σ w_j·(term_j)(term_j)†` against the
    /// family state.
    pub reconstruction_error: f64,
}

/// Certify `SN(γ) ≤ n` for the family state by exhibiting the decomposition
/// `γ = (Id + F product terms) + ε·vv̄ᵗ`; every product term has Schmidt rank
/// 1 and `SR(v) = n`. Verifies the reconstruction within `recon_tol`.
pub fn sn_upper_certificate(
    params: &FamilyParams,
    cfg: &ToleranceConfig,
) -> Result<SnUpperCertificate> {
    let k = params.k();
    let decomposition = sym_separable_decomposition(k)?;
    let v = params.vector();

    let target = family_state(params);
    let order = k * k;
    let mut rebuilt = CMatrix::zeros(order, order);
    let mut terms = Vec::with_capacity(decomposition.terms.len() + 1);
    for term in &decomposition.terms {
        let w = kron_vec(&term.left, &term.right);
        accumulate_outer(&mut rebuilt, &w, term.weight);
        terms.push((
            term.weight,
            PureVector::new(k, k, w).expect("product term has order k²"),
        ));
    }
    accumulate_outer(&mut rebuilt, v.entries(), params.epsilon());
    terms.push((params.epsilon(), v.clone()));

    let scale = target.matrix().norm().max(f64::MIN_POSITIVE);
    let reconstruction_error = (&rebuilt - target.matrix()).norm() / scale;
    if reconstruction_error > cfg.recon_tol {
        return Err(Error::ReconstructionFailed {
            error: reconstruction_error,
            tol: cfg.recon_tol,
        });
    }

    Ok(SnUpperCertificate {
        value: schmidt_rank(&v, cfg).max(1),
        terms,
        reconstruction_error,
    })
}

/// Columns form an orthonormal set: QR of a complex Gaussian matrix.
fn random_orthonormal(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> CMatrix {
    debug_assert!(count <= dim);
    let gaussian = random_gaussian_matrix(rng, dim, count);
    gaussian.qr().q()
}

fn random_gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = Complex64::new(
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
            );
        }
    }
    m
}

fn random_gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
    CVector::from_fn(dim, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

/// A random pure vector with exact Schmidt rank `target_sr`:
/// `w = Σ s_i · x_i ⊗ y_i` with orthonormal frames and `s_i ∈ [0.1, 1]`, so
/// the Schmidt coefficients are bounded away from zero and the numerical rank
/// is unambiguous. Deterministic per seed.
pub fn random_pure(k: usize, m: usize, target_sr: usize, seed: u64) -> Result<PureVector> {
    let max = k.min(m);
    if target_sr == 0 || target_sr > max {
        return Err(Error::BadRank {
            rank: target_sr,
            max,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left = random_orthonormal(&mut rng, k, target_sr);
    let right = random_orthonormal(&mut rng, m, target_sr);
    let mut entries = CVector::zeros(k * m);
    for t in 0..target_sr {
        let s: f64 = rng.random_range(0.1..=1.0);
        entries += kron_vec(&left.column(t).into_owned(), &right.column(t).into_owned())
            * Complex64::new(s, 0.0);
    }
    PureVector::new(k, m, entries)
}

/// A random separable state `Σ_t (x_t ⊗ y_t)(x_t ⊗ y_t)†` with Gaussian
/// product vectors; Schmidt number 1 by construction. Deterministic per seed.
pub fn random_separable(k: usize, m: usize, num_terms: usize, seed: u64) -> BipartiteState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = k * m;
    let mut acc = CMatrix::zeros(order, order);
    for _ in 0..num_terms {
        let x = random_gaussian_vector(&mut rng, k);
        let y = random_gaussian_vector(&mut rng, m);
        let w = kron_vec(&x, &y);
        accumulate_outer(&mut acc, &w, 1.0);
    }
    BipartiteState::from_parts(k, m, acc)
}

/// A random state of prescribed rank: `G·G†` for a `(km)×rank` complex
/// Gaussian factor (Wishart ensemble). Deterministic per seed.
pub fn random_density(k: usize, m: usize, rank: usize, seed: u64) -> Result<BipartiteState> {
    let order = k * m;
    if rank == 0 || rank > order {
        return Err(Error::BadRank { rank, max: order });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_gaussian_matrix(&mut rng, order, rank);
    let matrix = &g * g.adjoint();
    Ok(BipartiteState::from_parts(k, m, hermitian_part(&matrix)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{detect_ppt, sn_lower_prop1, Verdict};
    use crate::statespace::{
        check_state, numerical_rank, schmidt_decompose, symmetrize, Sign,
    };
    use approx::assert_relative_eq;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn basis(k: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(k);
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn family_params_reject_out_of_range_n() {
        assert!(matches!(
            FamilyParams::canonical(3, 2, 1.0, &cfg()),
            Err(Error::BadRank { rank: 2, max: 1 })
        ));
        assert!(FamilyParams::canonical(3, 0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn family_params_reject_dependent_vectors() {
        let a = vec![basis(4, 0)];
        let b = vec![basis(4, 0)];
        assert!(matches!(
            FamilyParams::new(4, 1, a, b, 1.0, &cfg()),
            Err(Error::DependentVectors { .. })
        ));
    }

    #[test]
    fn antisym_vector_canonical_pair() {
        // n=1, a=e1, b=e2 in k=2: a = e1⊗e2 − e2⊗e1 with SR 2.
        let params = FamilyParams::canonical(2, 1, 1.0, &cfg()).unwrap();
        let a = antisym_vector(&params);
        let mut expected = CVector::zeros(4);
        expected[1] = Complex64::new(1.0, 0.0);
        expected[2] = Complex64::new(-1.0, 0.0);
        assert_eq!(a.entries(), &expected);
        assert_eq!(schmidt_rank(&a, &cfg()), 2);
    }

    #[test]
    fn antisym_vector_lies_in_antisymmetric_subspace() {
        for (k, n) in [(2, 1), (5, 2), (7, 3)] {
            let params = FamilyParams::canonical(k, n, 1.0, &cfg()).unwrap();
            let a = antisym_vector(&params);
            let flipped = flip_operator(k) * a.entries();
            assert_relative_eq!(
                (flipped + a.entries()).norm(),
                0.0,
                epsilon = 1e-12 * a.norm()
            );
            assert_eq!(schmidt_rank(&a, &cfg()), 2 * n);
        }
    }

    #[test]
    fn family_antisymmetrizes_to_rank_one() {
        // (Id−F)γ(Id−F) = ε·aāᵗ for the k=2, n=1, ε=1 family.
        let params = FamilyParams::canonical(2, 1, 1.0, &cfg()).unwrap();
        let state = family_state(&params);
        let anti = symmetrize(&state, Sign::Minus).unwrap();
        let a = antisym_vector(&params);
        assert_relative_eq!(
            (anti.matrix() - a.outer()).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert_eq!(schmidt_rank(&a, &cfg()), 2);
    }

    #[test]
    fn auto_epsilon_for_product_vector_is_one() {
        // Product v: (vv̄ᵗ)^Γ is PSD, so ε = 1 and the family is PPT for all ε.
        let v = PureVector::product(&basis(3, 0), &basis(3, 1));
        assert_eq!(auto_epsilon(&v, &cfg()).unwrap(), 1.0);
    }

    #[test]
    fn auto_epsilon_for_symmetric_rank_two_vector() {
        // v = (e1⊗e2 + e2⊗e1)/√2: λ_min((vv̄ᵗ)^Γ) = −1/2 → ε = 1.
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let entries =
            (kron_vec(&basis(2, 0), &basis(2, 1)) + kron_vec(&basis(2, 1), &basis(2, 0))) * s;
        let v = PureVector::new(2, 2, entries).unwrap();
        let eps = auto_epsilon(&v, &cfg()).unwrap();
        assert_relative_eq!(eps, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn auto_epsilon_rejects_zero_vector() {
        let v = PureVector::zero(3, 3).unwrap();
        assert!(matches!(auto_epsilon(&v, &cfg()), Err(Error::ZeroVector)));
    }

    #[test]
    fn auto_epsilon_keeps_family_ppt() {
        for (k, n) in [(2, 1), (4, 2), (5, 2), (6, 3)] {
            let params = FamilyParams::canonical(k, n, 1.0, &cfg()).unwrap();
            let eps = auto_epsilon(&params.vector(), &cfg()).unwrap();
            let state = family_state(&params.with_epsilon(eps));
            let verdict = detect_ppt(&state, &cfg());
            assert_eq!(verdict.verdict, Verdict::Inconclusive, "k={k} n={n}");
        }
    }

    #[test]
    fn family_k5_n2_reproduces_certified_bounds() {
        let params = FamilyParams::canonical(5, 2, 1.0, &cfg()).unwrap();
        let eps = auto_epsilon(&params.vector(), &cfg()).unwrap();
        let state = family_state(&params.with_epsilon(eps));
        assert!(check_state(&state, &cfg()).is_valid());

        let anti = symmetrize(&state, Sign::Minus).unwrap();
        assert_eq!(numerical_rank(anti.matrix(), &cfg()).unwrap(), 1);

        let cert = sn_lower_prop1(&state, Sign::Minus, &cfg()).unwrap();
        assert_eq!(cert.value, 2);
        assert_eq!(cert.inputs["sr_of_pure_part"], 4);
    }

    #[test]
    fn decomposition_of_scalar_case() {
        // k=1: Id+F = [2]; one phase family of 4 terms (weight 1/4 each)
        // plus the diagonal term reconstructs it.
        let d = sym_separable_decomposition(1).unwrap();
        let target = CMatrix::from_element(1, 1, Complex64::new(2.0, 0.0));
        assert_relative_eq!(d.reconstruction_error(&target, 1, 1), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn decomposition_reconstructs_id_plus_flip() {
        for k in 1..=4 {
            let d = sym_separable_decomposition(k).unwrap();
            assert_eq!(d.terms.len(), 4_usize.pow(k as u32) + k);
            let target = flip_operator(k) + CMatrix::identity(k * k, k * k);
            let err = d.reconstruction_error(&target, k, k);
            assert!(err < 1e-12, "k={k}: error {err:.3e}");
        }
    }

    #[test]
    fn decomposition_terms_are_product_vectors() {
        let d = sym_separable_decomposition(3).unwrap();
        for term in &d.terms {
            let w = PureVector::product(&term.left, &term.right);
            assert_eq!(schmidt_rank(&w, &cfg()), 1);
            assert!(term.weight > 0.0);
        }
    }

    #[test]
    fn decomposition_trace_cross_check() {
        // tr(Id+F) = k² + k.
        let k = 3;
        let d = sym_separable_decomposition(k).unwrap();
        let rebuilt = d.reconstruct(k, k);
        assert_relative_eq!(rebuilt.trace().re, (k * k + k) as f64, epsilon = 1e-10);
    }

    #[test]
    fn decomposition_dimension_cap() {
        assert!(matches!(
            sym_separable_decomposition(9),
            Err(Error::DimensionTooLarge { dim: 9, max: 8 })
        ));
    }

    #[test]
    fn upper_certificate_matches_family_n() {
        for (k, n) in [(2, 1), (3, 1), (5, 2)] {
            let params = FamilyParams::canonical(k, n, 1.0, &cfg()).unwrap();
            let eps = auto_epsilon(&params.vector(), &cfg()).unwrap();
            let cert = sn_upper_certificate(&params.with_epsilon(eps), &cfg()).unwrap();
            assert_eq!(cert.value, n, "k={k}");
            assert!(cert.reconstruction_error <= 1e-10);
        }
    }

    #[test]
    fn upper_certificate_terms_cover_family() {
        let params = FamilyParams::canonical(4, 2, 0.5, &cfg()).unwrap();
        let cert = sn_upper_certificate(&params, &cfg()).unwrap();
        let state = family_state(&params);
        let order = 16;
        let mut acc = CMatrix::zeros(order, order);
        for (weight, term) in &cert.terms {
            acc += term.outer() * Complex64::new(*weight, 0.0);
        }
        assert_relative_eq!(
            (acc - state.matrix()).norm() / state.matrix().norm(),
            0.0,
            epsilon = 1e-10
        );
        let max_sr = cert
            .terms
            .iter()
            .map(|(_, t)| schmidt_rank(t, &cfg()))
            .max()
            .unwrap();
        assert_eq!(max_sr, cert.value);
    }

    #[test]
    fn random_pure_hits_target_rank() {
        for (k, m, sr) in [(3, 3, 1), (3, 3, 3), (4, 2, 2), (5, 4, 3)] {
            let w = random_pure(k, m, sr, 99).unwrap();
            assert_eq!(schmidt_rank(&w, &cfg()), sr, "k={k} m={m}");
            let d = schmidt_decompose(&w, &cfg());
            for c in d.coefficients.iter().take(sr) {
                assert!(*c >= 0.1 - 1e-12);
            }
        }
    }

    #[test]
    fn random_pure_rejects_bad_rank() {
        assert!(matches!(
            random_pure(3, 2, 3, 0),
            Err(Error::BadRank { rank: 3, max: 2 })
        ));
        assert!(random_pure(3, 2, 0, 0).is_err());
    }

    #[test]
    fn random_generators_are_deterministic() {
        let w1 = random_pure(4, 3, 2, 7).unwrap();
        let w2 = random_pure(4, 3, 2, 7).unwrap();
        assert_eq!(w1.entries(), w2.entries());

        let s1 = random_separable(3, 3, 5, 11);
        let s2 = random_separable(3, 3, 5, 11);
        assert_eq!(s1.matrix(), s2.matrix());

        let d1 = random_density(2, 3, 4, 13).unwrap();
        let d2 = random_density(2, 3, 4, 13).unwrap();
        assert_eq!(d1.matrix(), d2.matrix());
    }

    #[test]
    fn random_separable_single_term_is_pure_product() {
        let state = random_separable(3, 3, 1, 21);
        assert_eq!(numerical_rank(state.matrix(), &cfg()).unwrap(), 1);
        assert_eq!(
            numerical_rank(&crate::statespace::marginal(&state, crate::statespace::Side::Left), &cfg())
                .unwrap(),
            1
        );
    }

    #[test]
    fn random_separable_generic_full_rank() {
        let (k, m) = (3, 3);
        let state = random_separable(k, m, k * m, 23);
        assert_eq!(numerical_rank(state.matrix(), &cfg()).unwrap(), k * m);
        assert!(check_state(&state, &cfg()).is_valid());
    }

    #[test]
    fn random_density_rank_and_validity() {
        let state = random_density(2, 2, 4, 31).unwrap();
        assert_eq!(numerical_rank(state.matrix(), &cfg()).unwrap(), 4);
        assert!(check_state(&state, &cfg()).is_valid());
        let pure = random_density(2, 2, 1, 31).unwrap();
        assert_eq!(numerical_rank(pure.matrix(), &cfg()).unwrap(), 1);
        assert!(matches!(
            random_density(2, 2, 5, 0),
            Err(Error::BadRank { rank: 5, max: 4 })
        ));
    }
}
