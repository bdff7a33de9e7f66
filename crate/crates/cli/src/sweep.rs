//! Randomized sweep campaigns over seeded state ensembles.
//!
//! Each trial derives its own seed from the master seed via SplitMix64
//! (see [`crate::seeding`]), draws ensemble parameters from it, builds the
//! state, and evaluates the rank inequalities that are guaranteed for the
//! ensemble. Trials run in parallel; per-trial records are collected in trial
//! order and folded sequentially, so the aggregate is independent of the
//! worker count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use schmidt_bounds::bounds::{detect_ppt, Verdict};
use schmidt_bounds::statespace::{marginal, numerical_rank, schmidt_rank, symmetrize, Side, Sign};
use schmidt_bounds::constructions::{random_density, random_pure, random_separable};
use schmidt_bounds::{BipartiteState, ToleranceConfig};

use crate::files::TOOL_VERSION;
use crate::seeding::trial_seed;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Ensemble {
    /// Random mixtures of product projectors (Schmidt number 1).
    Separable,
    /// Random pure states of seeded Schmidt rank.
    Pure,
    /// Wishart states of seeded rank.
    Density,
}

impl Ensemble {
    fn name(self) -> &'static str {
        match self {
            Ensemble::Separable => "separable",
            Ensemble::Pure => "pure",
            Ensemble::Density => "density",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct CheckCounts {
    pub checked: u64,
    pub violations: u64,
}

/// Aggregate sweep results; serialized as the sweep's JSON output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub tool_version: String,
    pub ensemble: String,
    pub dim_left: usize,
    pub dim_right: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub seed_schedule: String,
    pub tolerance: f64,
    pub checks: BTreeMap<String, CheckCounts>,
    /// Value → occurrence count, per tracked rank quantity.
    pub rank_histograms: BTreeMap<String, BTreeMap<usize, u64>>,
    /// Trials where the PPT test certified entanglement.
    pub ppt_entangled_count: u64,
    /// Indices of the first violating trials (at most ten).
    pub violating_trials: Vec<u64>,
}

impl SweepReport {
    pub fn total_violations(&self) -> u64 {
        self.checks.values().map(|c| c.violations).sum()
    }
}

struct TrialRecord {
    ranks: Vec<(&'static str, usize)>,
    checks: Vec<(&'static str, bool)>,
    ppt_entangled: bool,
}

pub struct SweepConfig {
    pub ensemble: Ensemble,
    pub dim_left: usize,
    pub dim_right: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub jobs: Option<usize>,
}

pub fn run_sweep(config: &SweepConfig, cfg: &ToleranceConfig) -> Result<SweepReport, CliError> {
    if config.trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    if config.dim_left == 0 || config.dim_right == 0 {
        return Err(CliError::usage("dimensions must be positive"));
    }

    let run = || -> Result<Vec<TrialRecord>, CliError> {
        (0..config.trials)
            .into_par_iter()
            .map(|index| run_trial(config, cfg, index))
            .collect()
    };
    let records = match config.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| CliError::internal(format!("thread pool: {e}")))?;
            pool.install(run)?
        }
        None => run()?,
    };

    let mut checks: BTreeMap<String, CheckCounts> = BTreeMap::new();
    let mut rank_histograms: BTreeMap<String, BTreeMap<usize, u64>> = BTreeMap::new();
    let mut ppt_entangled_count = 0;
    let mut violating_trials = Vec::new();
    for (index, record) in records.iter().enumerate() {
        let mut violated = false;
        for (name, ok) in &record.checks {
            let entry = checks.entry(name.to_string()).or_default();
            entry.checked += 1;
            if !ok {
                entry.violations += 1;
                violated = true;
            }
        }
        if violated && violating_trials.len() < 10 {
            violating_trials.push(index as u64);
        }
        for (name, rank) in &record.ranks {
            *rank_histograms
                .entry(name.to_string())
                .or_default()
                .entry(*rank)
                .or_default() += 1;
        }
        if record.ppt_entangled {
            ppt_entangled_count += 1;
        }
    }

    Ok(SweepReport {
        tool_version: TOOL_VERSION.to_string(),
        ensemble: config.ensemble.name().to_string(),
        dim_left: config.dim_left,
        dim_right: config.dim_right,
        trials: config.trials,
        master_seed: config.master_seed,
        seed_schedule: "splitmix64".to_string(),
        tolerance: cfg.rel_rank_tol,
        checks,
        rank_histograms,
        ppt_entangled_count,
        violating_trials,
    })
}

fn run_trial(
    config: &SweepConfig,
    cfg: &ToleranceConfig,
    index: u64,
) -> Result<TrialRecord, CliError> {
    let (k, m) = (config.dim_left, config.dim_right);
    let seed = trial_seed(config.master_seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = k * m;

    let fail = |e: schmidt_bounds::Error| CliError::internal(format!("trial {index}: {e}"));

    match config.ensemble {
        Ensemble::Separable => {
            let num_terms = rng.random_range(1..=order);
            let state = random_separable(k, m, num_terms, rng.random());
            let mut record = rank_record(&state, cfg).map_err(fail)?;
            let rank = record.ranks[0].1;
            let (left, right) = (record.ranks[1].1, record.ranks[2].1);
            record
                .checks
                .push(("theorem_rank_marginal", rank >= left.max(right)));
            if k == m {
                let rank_s = record.ranks[3].1;
                let rank_a = record.ranks[4].1;
                record
                    .checks
                    .push(("sqrt_rank_inequality", rank_s * rank_s >= rank_a));
            }
            Ok(record)
        }
        Ensemble::Pure => {
            let target_sr = rng.random_range(1..=k.min(m));
            let w = random_pure(k, m, target_sr, rng.random()).map_err(fail)?;
            let sr = schmidt_rank(&w, cfg);
            let state = BipartiteState::from_pure(&w);
            let mut record = rank_record(&state, cfg).map_err(fail)?;
            let (left, right) = (record.ranks[1].1, record.ranks[2].1);
            record
                .checks
                .push(("pure_marginal_equality", left == sr && right == sr));
            record.ranks.push(("schmidt_rank", sr));
            Ok(record)
        }
        Ensemble::Density => {
            let rank = rng.random_range(1..=order);
            let state = random_density(k, m, rank, rng.random()).map_err(fail)?;
            rank_record(&state, cfg).map_err(fail)
        }
    }
}

fn rank_record(
    state: &BipartiteState,
    cfg: &ToleranceConfig,
) -> Result<TrialRecord, schmidt_bounds::Error> {
    let mut ranks = vec![
        ("rank_gamma", numerical_rank(state.matrix(), cfg)?),
        (
            "rank_gamma_l",
            numerical_rank(&marginal(state, Side::Left), cfg)?,
        ),
        (
            "rank_gamma_r",
            numerical_rank(&marginal(state, Side::Right), cfg)?,
        ),
    ];
    if state.dim_left() == state.dim_right() {
        ranks.push((
            "rank_gamma_s",
            numerical_rank(symmetrize(state, Sign::Plus)?.matrix(), cfg)?,
        ));
        ranks.push((
            "rank_gamma_a",
            numerical_rank(symmetrize(state, Sign::Minus)?.matrix(), cfg)?,
        ));
    }
    let ppt_entangled = detect_ppt(state, cfg).verdict == Verdict::Entangled;
    Ok(TrialRecord {
        ranks,
        checks: Vec::new(),
        ppt_entangled,
    })
}
