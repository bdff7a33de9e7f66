//! Eigenvalues of Hermitian matrices.
//!
//! Householder tridiagonalization is delegated to nalgebra; the tridiagonal
//! eigenvalues are then computed by an implicit-shift QL iteration of our own.
//! The states this crate works with are built from projector algebra with
//! exact ±1 entries, which drives the off-diagonals of the tridiagonal form
//! through a cascade of progressively underflowing magnitudes; a shift
//! computed as `sqrt(p² + 1)` overflows to `inf` on such input (this is what
//! `nalgebra::SymmetricEigen` does, and it returns NaN eigenvalues for e.g.
//! rank-one `±1` Gram matrices of order 64). Using `hypot` and an absolute
//! deflation floor keeps the iteration finite on exactly these matrices.

use crate::statespace::CMatrix;

/// All eigenvalues of a Hermitian matrix, ascending. The upper triangle is
/// ignored, matching the Hermitian contract.
///
/// Infallible: the QL iteration deflates an eigenvalue per sweep and is
/// capped generously; the cap is unreachable for Hermitian input.
pub(crate) fn hermitian_eigenvalues_unchecked(h: &CMatrix) -> Vec<f64> {
    let n = h.nrows();
    debug_assert_eq!(n, h.ncols());
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![h[(0, 0)].re];
    }
    // Scale to unit max entry so the QL thresholds see an O(1) matrix.
    let scale = h.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return vec![0.0; n];
    }
    let scaled = h.map(|z| z / scale);
    let tri = scaled.symmetric_tridiagonalize();
    // A Hermitian tridiagonal matrix is diagonally unitarily equivalent to
    // the real symmetric one with |e_i| off-diagonals.
    let d: Vec<f64> = tri.diagonal().iter().copied().collect();
    let e: Vec<f64> = tri.off_diagonal().iter().copied().collect();
    let mut values = tridiagonal_eigenvalues(d, e);
    values.sort_by(|a, b| a.total_cmp(b));
    values.iter_mut().for_each(|v| *v *= scale);
    values
}

/// Eigenvalues of the real symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e` (`e.len() == d.len() - 1`), by implicit-shift QL.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Vec<f64> {
    let n = d.len();
    debug_assert_eq!(e.len(), n - 1);
    e.push(0.0);

    const MAX_SWEEPS: usize = 100;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Find the first negligible off-diagonal at or after l. The
            // absolute floor guarantees progress when the neighbouring
            // diagonal entries are exactly zero.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd + f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                // QL on a real symmetric tridiagonal converges; accept the
                // current iterate rather than abort.
                debug_assert!(false, "tridiagonal QL exceeded {MAX_SWEEPS} sweeps");
                break;
            }

            // Wilkinson-style shift, overflow-safe via hypot.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(if g == 0.0 { 1.0 } else { g }));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;

            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Recover from underflow: split the matrix here.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::CVector;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_spectra_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, b) in actual.iter().zip(expected) {
            assert!((a - b).abs() <= tol, "eigenvalue {a} vs {b}");
        }
    }

    #[test]
    fn diagonal_matrix() {
        let h = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(3.0, 0.0),
            c(-1.0, 0.0),
            c(0.0, 0.0),
        ]));
        let values = hermitian_eigenvalues_unchecked(&h);
        assert_spectra_close(&values, &[-1.0, 0.0, 3.0], 1e-14);
    }

    #[test]
    fn hermitian_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let h = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let values = hermitian_eigenvalues_unchecked(&h);
        assert_spectra_close(&values, &[1.0, 3.0], 1e-14);
    }

    #[test]
    fn zero_and_empty() {
        assert_eq!(hermitian_eigenvalues_unchecked(&CMatrix::zeros(5, 5)), vec![0.0; 5]);
        assert!(hermitian_eigenvalues_unchecked(&CMatrix::zeros(0, 0)).is_empty());
    }

    #[test]
    fn agrees_with_nalgebra_on_generic_matrices() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for n in [2, 3, 5, 8, 16, 33] {
            let g = CMatrix::from_fn(n, n, |_, _| {
                c(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            });
            let h = (&g + g.adjoint()).scale(0.5);
            let ours = hermitian_eigenvalues_unchecked(&h);
            let mut reference: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
            reference.sort_by(|a, b| a.total_cmp(b));
            let scale = reference
                .iter()
                .map(|v| v.abs())
                .fold(1.0_f64, f64::max);
            assert_spectra_close(&ours, &reference, 1e-12 * scale);
        }
    }

    #[test]
    fn rank_one_gram_of_signed_vector() {
        // The 64×64 matrix 0.5·aa† with a ∈ {0, ±1}^64 (8 nonzeros) makes
        // nalgebra's QL overflow; the spectrum is {4, 0×63}.
        let mut a = CVector::zeros(64);
        for (idx, sign) in [(4, 1.0), (32, -1.0), (13, 1.0), (41, -1.0), (22, 1.0), (50, -1.0), (31, 1.0), (59, -1.0)] {
            a[idx] = c(sign, 0.0);
        }
        let h = (&a * a.adjoint()).scale(0.5);
        let values = hermitian_eigenvalues_unchecked(&h);
        assert!(values.iter().all(|v| v.is_finite()));
        assert!((values[63] - 4.0).abs() < 1e-12);
        for v in &values[..63] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn projector_spectra_with_high_multiplicity() {
        // Id ± F have eigenvalues {2, 0} with multiplicities k(k±1)/2.
        for k in [2, 4, 8] {
            let f = crate::statespace::flip_operator(k);
            let id = CMatrix::identity(k * k, k * k);
            let sym = &id + &f;
            let values = hermitian_eigenvalues_unchecked(&sym);
            let twos = values.iter().filter(|v| (**v - 2.0).abs() < 1e-12).count();
            let zeros = values.iter().filter(|v| v.abs() < 1e-12).count();
            assert_eq!(twos, k * (k + 1) / 2);
            assert_eq!(zeros, k * (k - 1) / 2);
        }
    }

    #[test]
    fn scale_invariance_at_extreme_magnitudes() {
        let h = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        for exp in [-150, 150] {
            let s = 10f64.powi(exp);
            let values = hermitian_eigenvalues_unchecked(&h.map(|z| z * s));
            assert_spectra_close(&values, &[s, 3.0 * s], 1e-14 * s.abs() * 3.0);
        }
    }
}
