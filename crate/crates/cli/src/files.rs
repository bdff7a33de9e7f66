//! On-disk JSON formats: state files, analysis reports, construction
//! sidecars, and decomposition dumps.
//!
//! Matrices are stored row-major over the product basis `e_i ⊗ e_j ↦ i·m + j`
//! with every complex number as a `[re, im]` pair. serde_json prints floats
//! in shortest round-trip form, so write → read → write is byte-stable.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use schmidt_bounds::bounds::{BoundCertificate, BoundReport};
use schmidt_bounds::statespace::{CMatrix, CVector, StateValidation};
use schmidt_bounds::{BipartiteState, ToleranceConfig};

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A bipartite state on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dim_left: usize,
    pub dim_right: usize,
    /// `(k·m)²` numbers as row-major `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state(state: &BipartiteState) -> Self {
        let order = state.order();
        let m = state.matrix();
        let matrix = (0..order)
            .map(|i| (0..order).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self {
            dim_left: state.dim_left(),
            dim_right: state.dim_right(),
            matrix,
        }
    }

    /// Validate the schema and build the state (Hermiticity enforced by the
    /// library constructor).
    pub fn into_state(self, cfg: &ToleranceConfig) -> Result<BipartiteState, CliError> {
        if self.dim_left == 0 || self.dim_right == 0 {
            return Err(CliError::input("factor dimensions must be positive"));
        }
        let order = self.dim_left * self.dim_right;
        if self.matrix.len() != order {
            return Err(CliError::input(format!(
                "matrix has {} rows, expected {order}",
                self.matrix.len()
            )));
        }
        let mut data = CMatrix::zeros(order, order);
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != order {
                return Err(CliError::input(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for (j, [re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(CliError::input(format!(
                        "non-finite entry at ({i}, {j})"
                    )));
                }
                data[(i, j)] = Complex64::new(*re, *im);
            }
        }
        BipartiteState::new(self.dim_left, self.dim_right, data, cfg)
            .map_err(|e| CliError::input(format!("state validation failed: {e}")))
    }
}

/// Full analysis output: validation, ranks, certificates, detectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool_version: String,
    /// `sha256:<hex>` over the raw input bytes.
    pub input_digest: String,
    pub tolerance: f64,
    pub validation: StateValidation,
    #[serde(flatten)]
    pub report: BoundReport,
}

/// Upper-bound summary embedded in construction sidecars. The full product
/// decomposition is reproducible via `decompose-sym`; only its size and the
/// verified reconstruction error are recorded here.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UpperSummary {
    pub value: usize,
    pub num_terms: usize,
    pub reconstruction_error: f64,
}

/// Certificate sidecar written next to a constructed family state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SidecarFile {
    pub tool_version: String,
    pub k: usize,
    pub n: usize,
    pub epsilon: f64,
    /// "auto" when derived from the spectrum, "fixed" when user-supplied.
    pub epsilon_mode: String,
    /// Seed used for random family vectors; absent for the canonical basis
    /// choice.
    pub seed: Option<u64>,
    pub a_vectors: Vec<Vec<[f64; 2]>>,
    pub b_vectors: Vec<Vec<[f64; 2]>>,
    pub ppt: bool,
    pub min_eig_partial_transpose: f64,
    pub sn_lower: BoundCertificate,
    /// Omitted above the decomposition dimension cap (k > 8).
    pub sn_upper: Option<UpperSummary>,
}

/// `decompose-sym` output: the explicit product decomposition of `Id + F`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub tool_version: String,
    pub k: usize,
    pub target_label: String,
    pub reconstruction_error: f64,
    pub terms: Vec<DecompositionTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub weight: f64,
    pub left: Vec<[f64; 2]>,
    pub right: Vec<[f64; 2]>,
}

pub fn vector_to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn pairs_to_vector(pairs: &[[f64; 2]]) -> CVector {
    DVector::from_iterator(pairs.len(), pairs.iter().map(|[re, im]| Complex64::new(*re, *im)))
}

pub fn digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}

/// Pretty JSON with a trailing newline; deterministic for identical values.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::internal(format!("serialization failed: {e}")))?;
    out.push(b'\n');
    Ok(out)
}
