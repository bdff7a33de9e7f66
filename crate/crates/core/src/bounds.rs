//! Schmidt-number lower bounds and entanglement detectors, each returning a
//! machine-checkable certificate.
//!
//! The bounds come in three families:
//!
//! * the marginal-rank bound `SN(γ) ≥ max{rank γ_L, rank γ_R} / rank γ`,
//! * its corollaries through the symmetrized states,
//!   `SN(γ) ≥ rank((γ_X)_L) / (2·rank γ_X)` for `X ∈ {S, A}`, and
//! * the projector bound `SN(γ) ≥ SN(γ_X)/2`, made computable by certifying
//!   `SN(γ_X)` from below (exact Schmidt rank when `rank γ_X = 1`, the
//!   marginal-rank bound otherwise).
//!
//! Since the Schmidt number is an integer, every ratio is reported as a
//! ceiling. Detectors only claim entanglement on strict violations beyond
//! tolerance; ties are inconclusive.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statespace::{
    check_state, hermitian_eigenvalues, marginal, numerical_rank, partial_transpose,
    require_square, schmidt_rank, symmetrize, BipartiteState, PureVector, Side, Sign,
    ToleranceConfig,
};

/// Which lower bound a certificate was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    MarginalRank,
    SymCorollary,
    AsymCorollary,
    Prop1Sym,
    Prop1Asym,
}

/// A lower bound on the Schmidt number together with the named integer
/// quantities it was computed from, so the value can be replayed exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub bound_name: BoundName,
    /// Certified lower bound on `SN(γ)`; at least 1 for any nonzero state.
    pub value: usize,
    /// Named ranks and Schmidt ranks entering the formula.
    pub inputs: BTreeMap<String, u64>,
    /// Human-readable derivation.
    pub formula_trace: String,
    /// True when the selected symmetrized state vanished and the bound
    /// degenerates to the vacuous value 1.
    pub degenerate: bool,
}

impl BoundCertificate {
    /// Recompute `value` from `inputs` by re-applying the named formula.
    /// Returns `None` if a required input is missing.
    pub fn replay(&self) -> Option<usize> {
        let get = |key: &str| self.inputs.get(key).copied();
        match self.bound_name {
            BoundName::MarginalRank => {
                let rank = get("rank_gamma")?;
                if rank == 0 {
                    return None;
                }
                let left = get("rank_gamma_L")?;
                let right = get("rank_gamma_R")?;
                Some(ceil_div(left.max(right), rank).max(1) as usize)
            }
            BoundName::SymCorollary | BoundName::AsymCorollary => {
                if self.degenerate {
                    return Some(1);
                }
                let (rank_key, marg_key) = if self.bound_name == BoundName::SymCorollary {
                    ("rank_gamma_S", "rank_gamma_S_L")
                } else {
                    ("rank_gamma_A", "rank_gamma_A_L")
                };
                let rank = get(rank_key)?;
                let marg = get(marg_key)?;
                Some(ceil_div(marg, 2 * rank).max(1) as usize)
            }
            BoundName::Prop1Sym | BoundName::Prop1Asym => {
                if self.degenerate {
                    return Some(1);
                }
                let (rank_key, marg_l, marg_r) = if self.bound_name == BoundName::Prop1Sym {
                    ("rank_gamma_S", "rank_gamma_S_L", "rank_gamma_S_R")
                } else {
                    ("rank_gamma_A", "rank_gamma_A_L", "rank_gamma_A_R")
                };
                let rank = get(rank_key)?;
                let inner = if rank == 1 {
                    get("sr_of_pure_part")?
                } else {
                    ceil_div(get(marg_l)?.max(get(marg_r)?), rank)
                };
                Some(ceil_div(inner, 2).max(1) as usize)
            }
        }
    }
}

/// Entanglement detectors reported in a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detector {
    PptTest,
    SqrtRankTest,
    SnBoundExceedsOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

/// Outcome of a single detector, with the numeric evidence behind it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorVerdict {
    pub detector: Detector,
    pub verdict: Verdict,
    pub evidence: BTreeMap<String, f64>,
}

/// Numerical ranks of the state and its derived operators. The symmetrized
/// entries are present only for equal factor dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankSummary {
    pub gamma: usize,
    pub gamma_l: usize,
    pub gamma_r: usize,
    pub gamma_s: Option<usize>,
    pub gamma_a: Option<usize>,
    pub gamma_s_l: Option<usize>,
    pub gamma_a_l: Option<usize>,
}

/// Aggregate of every applicable bound and detector for one state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub ranks: RankSummary,
    /// Minimum eigenvalue of the partial transpose (the PPT evidence).
    pub min_eig_partial_transpose: f64,
    pub certificates: Vec<BoundCertificate>,
    pub detectors: Vec<DetectorVerdict>,
    /// Maximum over all certificate values.
    pub best_bound: usize,
    /// `Entangled` iff some detector fired (equivalently, best_bound ≥ 2 or
    /// a spectral/rank test failed).
    pub verdict: Verdict,
}

fn ceil_div(num: u64, den: u64) -> u64 {
    debug_assert!(den > 0);
    num.div_ceil(den)
}

/// Marginal-rank bound: `value = ⌈ max(rank γ_L, rank γ_R) / rank γ ⌉`.
///
/// Errors with [`Error::ZeroState`] when `rank γ = 0`.
pub fn sn_lower_marginal(state: &BipartiteState, cfg: &ToleranceConfig) -> Result<BoundCertificate> {
    let rank_gamma = numerical_rank(state.matrix(), cfg)?;
    if rank_gamma == 0 {
        return Err(Error::ZeroState);
    }
    let rank_left = numerical_rank(&marginal(state, Side::Left), cfg)?;
    let rank_right = numerical_rank(&marginal(state, Side::Right), cfg)?;
    let value = ceil_div(rank_left.max(rank_right) as u64, rank_gamma as u64).max(1) as usize;

    let mut inputs = BTreeMap::new();
    inputs.insert("rank_gamma".into(), rank_gamma as u64);
    inputs.insert("rank_gamma_L".into(), rank_left as u64);
    inputs.insert("rank_gamma_R".into(), rank_right as u64);
    Ok(BoundCertificate {
        bound_name: BoundName::MarginalRank,
        value,
        inputs,
        formula_trace: format!(
            "ceil(max(rank γ_L = {rank_left}, rank γ_R = {rank_right}) / rank γ = {rank_gamma}) = {value}"
        ),
        degenerate: false,
    })
}

/// Corollary bound through the symmetrized state:
/// `value = max(1, ⌈ rank((γ_X)_L) / (2·rank γ_X) ⌉)` with `X` selected by
/// `which` (`Plus` → `γ_S`, `Minus` → `γ_A`).
///
/// A vanishing `γ_X` yields the vacuous value 1, flagged `degenerate`.
pub fn sn_lower_corollary(
    state: &BipartiteState,
    which: Sign,
    cfg: &ToleranceConfig,
) -> Result<BoundCertificate> {
    require_square(state)?;
    let (bound_name, rank_key, marg_key, label) = match which {
        Sign::Plus => (BoundName::SymCorollary, "rank_gamma_S", "rank_gamma_S_L", "γ_S"),
        Sign::Minus => (BoundName::AsymCorollary, "rank_gamma_A", "rank_gamma_A_L", "γ_A"),
    };
    let projected = symmetrize(state, which)?;
    let rank_proj = numerical_rank(projected.matrix(), cfg)?;
    let mut inputs = BTreeMap::new();
    inputs.insert(rank_key.into(), rank_proj as u64);
    if rank_proj == 0 {
        return Ok(BoundCertificate {
            bound_name,
            value: 1,
            inputs,
            formula_trace: format!("{label} = 0: bound degenerates to 1"),
            degenerate: true,
        });
    }
    let rank_marg = numerical_rank(&marginal(&projected, Side::Left), cfg)?;
    inputs.insert(marg_key.into(), rank_marg as u64);
    let value = ceil_div(rank_marg as u64, 2 * rank_proj as u64).max(1) as usize;
    Ok(BoundCertificate {
        bound_name,
        value,
        inputs,
        formula_trace: format!(
            "max(1, ceil(rank(({label})_L) = {rank_marg} / (2·rank {label} = {rank_proj}))) = {value}"
        ),
        degenerate: false,
    })
}

/// Projector bound `SN(γ) ≥ SN(γ_X)/2`, certified from below.
///
/// When `rank γ_X = 1` the Schmidt number of `γ_X` is exactly the Schmidt
/// rank of its single pure component, extracted from the top eigenvector.
/// Otherwise the marginal-rank bound on `γ_X` stands in (recursion depth 1;
/// `γ_X` is not symmetrized again). The certified value is the ceiling of
/// half that inner bound.
pub fn sn_lower_prop1(
    state: &BipartiteState,
    which: Sign,
    cfg: &ToleranceConfig,
) -> Result<BoundCertificate> {
    require_square(state)?;
    let (bound_name, rank_key, marg_l_key, marg_r_key, label) = match which {
        Sign::Plus => (
            BoundName::Prop1Sym,
            "rank_gamma_S",
            "rank_gamma_S_L",
            "rank_gamma_S_R",
            "γ_S",
        ),
        Sign::Minus => (
            BoundName::Prop1Asym,
            "rank_gamma_A",
            "rank_gamma_A_L",
            "rank_gamma_A_R",
            "γ_A",
        ),
    };
    let projected = symmetrize(state, which)?;
    let rank_proj = numerical_rank(projected.matrix(), cfg)?;
    let mut inputs = BTreeMap::new();
    inputs.insert(rank_key.into(), rank_proj as u64);
    if rank_proj == 0 {
        return Ok(BoundCertificate {
            bound_name,
            value: 1,
            inputs,
            formula_trace: format!("{label} = 0: bound degenerates to 1"),
            degenerate: true,
        });
    }

    let (inner, inner_trace) = if rank_proj == 1 {
        let sr = schmidt_rank(&rank_one_component(&projected)?, cfg);
        inputs.insert("sr_of_pure_part".into(), sr as u64);
        (sr as u64, format!("SN({label}) = SR(pure part) = {sr}"))
    } else {
        let rank_l = numerical_rank(&marginal(&projected, Side::Left), cfg)?;
        let rank_r = numerical_rank(&marginal(&projected, Side::Right), cfg)?;
        inputs.insert(marg_l_key.into(), rank_l as u64);
        inputs.insert(marg_r_key.into(), rank_r as u64);
        let inner = ceil_div(rank_l.max(rank_r) as u64, rank_proj as u64);
        (
            inner,
            format!(
                "SN({label}) ≥ ceil(max({rank_l}, {rank_r}) / {rank_proj}) = {inner}"
            ),
        )
    };
    let value = ceil_div(inner, 2).max(1) as usize;
    Ok(BoundCertificate {
        bound_name,
        value,
        inputs,
        formula_trace: format!("{inner_trace}; ceil({inner}/2) = {value}"),
        degenerate: false,
    })
}

/// The pure component of a numerically rank-one state `λ·ww†`, read off from
/// its largest column (column `j` is `λ·w·conj(w_j)`, so the best-conditioned
/// one is the largest). Normalized; the overall phase is irrelevant to the
/// Schmidt rank.
fn rank_one_component(state: &BipartiteState) -> Result<PureVector> {
    let matrix = state.matrix();
    let best = (0..matrix.ncols())
        .max_by(|a, b| matrix.column(*a).norm().total_cmp(&matrix.column(*b).norm()))
        .expect("states are non-empty");
    let column = matrix.column(best).into_owned();
    let norm = column.norm();
    if norm == 0.0 {
        return Err(Error::ZeroState);
    }
    PureVector::new(
        state.dim_left(),
        state.dim_right(),
        column.unscale(norm),
    )
}

/// Peres test: entangled iff the partial transpose has an eigenvalue below
/// `−psd_tol · λ_max(γ^Γ)`.
pub fn detect_ppt(state: &BipartiteState, cfg: &ToleranceConfig) -> DetectorVerdict {
    let pt = partial_transpose(state);
    let eigenvalues = hermitian_eigenvalues(&pt, cfg).expect("partial transpose is Hermitian");
    let min = eigenvalues.first().copied().unwrap_or(0.0);
    let max = eigenvalues.last().copied().unwrap_or(0.0);
    let verdict = if min < -cfg.psd_tol * max {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };
    let mut evidence = BTreeMap::new();
    evidence.insert("min_eig_partial_transpose".into(), min);
    evidence.insert("max_eig_partial_transpose".into(), max);
    DetectorVerdict {
        detector: Detector::PptTest,
        verdict,
        evidence,
    }
}

/// Separability test from the rank correlation of the symmetrized states:
/// every separable state satisfies `rank γ_S ≥ √(rank γ_A)`, so
/// `rank γ_S < √(rank γ_A)` certifies entanglement. Compared as integers
/// (`rank_S² < rank_A`), so no floating-point tie-breaking is involved.
pub fn detect_sqrt_rank(state: &BipartiteState, cfg: &ToleranceConfig) -> Result<DetectorVerdict> {
    require_square(state)?;
    let rank_s = numerical_rank(symmetrize(state, Sign::Plus)?.matrix(), cfg)?;
    let rank_a = numerical_rank(symmetrize(state, Sign::Minus)?.matrix(), cfg)?;
    let verdict = if (rank_s * rank_s) < rank_a {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };
    let mut evidence = BTreeMap::new();
    evidence.insert("rank_gamma_S".into(), rank_s as f64);
    evidence.insert("rank_gamma_A".into(), rank_a as f64);
    Ok(DetectorVerdict {
        detector: Detector::SqrtRankTest,
        verdict,
        evidence,
    })
}

/// Run every applicable bound and detector on a validated state.
///
/// Fails on invalid or zero states; on rectangular factors the symmetrized
/// bounds and the √-rank test are skipped rather than reported degenerate.
pub fn analyze(state: &BipartiteState, cfg: &ToleranceConfig) -> Result<BoundReport> {
    let validation = check_state(state, cfg);
    if let Some(violation) = validation.violation() {
        return Err(Error::InvalidState(violation));
    }

    let square = state.dim_left() == state.dim_right();
    let mut certificates = vec![sn_lower_marginal(state, cfg)?];
    if square {
        certificates.push(sn_lower_corollary(state, Sign::Plus, cfg)?);
        certificates.push(sn_lower_corollary(state, Sign::Minus, cfg)?);
        certificates.push(sn_lower_prop1(state, Sign::Plus, cfg)?);
        certificates.push(sn_lower_prop1(state, Sign::Minus, cfg)?);
    }
    let best_bound = certificates.iter().map(|c| c.value).max().unwrap_or(1);

    let ppt = detect_ppt(state, cfg);
    let min_eig_pt = ppt.evidence["min_eig_partial_transpose"];
    let mut detectors = vec![ppt];
    if square {
        detectors.push(detect_sqrt_rank(state, cfg)?);
    }
    let mut bound_evidence = BTreeMap::new();
    bound_evidence.insert("best_bound".into(), best_bound as f64);
    detectors.push(DetectorVerdict {
        detector: Detector::SnBoundExceedsOne,
        verdict: if best_bound >= 2 {
            Verdict::Entangled
        } else {
            Verdict::Inconclusive
        },
        evidence: bound_evidence,
    });

    let verdict = if detectors.iter().any(|d| d.verdict == Verdict::Entangled) {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };

    let ranks = RankSummary {
        gamma: numerical_rank(state.matrix(), cfg)?,
        gamma_l: numerical_rank(&marginal(state, Side::Left), cfg)?,
        gamma_r: numerical_rank(&marginal(state, Side::Right), cfg)?,
        gamma_s: square
            .then(|| numerical_rank(symmetrize(state, Sign::Plus)?.matrix(), cfg))
            .transpose()?,
        gamma_a: square
            .then(|| numerical_rank(symmetrize(state, Sign::Minus)?.matrix(), cfg))
            .transpose()?,
        gamma_s_l: square
            .then(|| numerical_rank(&marginal(&symmetrize(state, Sign::Plus)?, Side::Left), cfg))
            .transpose()?,
        gamma_a_l: square
            .then(|| numerical_rank(&marginal(&symmetrize(state, Sign::Minus)?, Side::Left), cfg))
            .transpose()?,
    };

    Ok(BoundReport {
        ranks,
        min_eig_partial_transpose: min_eig_pt,
        certificates,
        detectors,
        best_bound,
        verdict,
    })
}
