//! Fixture calibration. Each calibration runs an oracle that shares no code
//! with the engine it later checks, and freezes the numbers the acceptance
//! suite compares against.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use odl_core::circle_dyn::Schedule;
use odl_core::geometry::Space;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::RunError;
use crate::experiments::{
    counterexample_run, counterexample_windows, dyadic_set, glasner_set, median, par_map,
    rotation_alpha, VERSION,
};

/// How many orbit points (or exact set evaluations) an oracle may touch,
/// as a multiple of the orbit cap.
const ORACLE_BUDGET_FACTOR: u128 = 16;

/// A threshold fixture is this fraction of its null-model statistic.
pub const NULL_MODEL_FRACTION: f64 = 0.5;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Fixture<T> {
    pub experiment: String,
    pub odl_version: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub oracle: String,
    pub data: T,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RotationQdData {
    pub alphas: Vec<f64>,
    /// Oracle `min_n n * gap` for the dyadic set, per alpha.
    pub set_min: Vec<f64>,
    /// The same for the single point `{0}`.
    pub baseline_min: Vec<f64>,
    pub threshold: f64,
    pub threshold_rule: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GlasnerData {
    /// Least `m <= n_max` with `gap(mA) < eps`, by exact rational scan.
    pub min_m: Vec<Option<u64>>,
    /// Exact fraction of `m <= density_n_max` with `mA` `eps`-dense.
    pub density_fraction: Vec<f64>,
    /// `P(k iid uniform points are eps-dense)`, exact.
    pub null_probability: f64,
    pub threshold: f64,
    pub threshold_rule: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CounterexampleData {
    pub indices: Vec<usize>,
    pub denominators: Vec<String>,
    pub ns: Vec<u64>,
    /// Oracle `n * gap` at each scheduled `n`.
    pub scaled: Vec<f64>,
    pub min_scaled: f64,
    pub low_window: (u64, u64),
    pub low_window_min: f64,
    pub high_window: (u64, u64),
    pub high_window_min: f64,
    pub ratio: f64,
}

fn fixture<T>(cfg: &ExperimentConfig, oracle: &str, data: T) -> Fixture<T> {
    Fixture {
        experiment: cfg.experiment.to_string(),
        odl_version: VERSION.to_string(),
        seed: cfg.seed,
        config: cfg.params.clone(),
        oracle: oracle.to_string(),
        data,
    }
}

fn check_oracle_budget(cfg: &ExperimentConfig, needed: u128) -> Result<(), RunError> {
    let budget = cfg.budget.orbit_cap as u128 * ORACLE_BUDGET_FACTOR;
    if needed > budget {
        return Err(RunError::OracleBudgetExceeded {
            experiment: cfg.experiment,
            needed,
            budget,
        });
    }
    Ok(())
}

/// Runs the oracle for `cfg.experiment` and returns the fixture as JSON.
pub fn calibrate(cfg: &ExperimentConfig) -> Result<String, RunError> {
    let json = match cfg.experiment {
        Experiment::RotationQd => serde_json::to_string_pretty(&calibrate_rotation_qd(cfg)?),
        Experiment::GlasnerDilation => serde_json::to_string_pretty(&calibrate_glasner(cfg)?),
        Experiment::RotationCounterexample => serde_json::to_string_pretty(&calibrate_counterexample(cfg)?),
        other => return Err(RunError::NotCalibratable(other)),
    }?;
    Ok(json + "\n")
}

/// `n * (half the largest arc)` of `{x + i alpha : x in A, i < n}`, rebuilt
/// and sorted from scratch for each `n`.
pub fn direct_rotation_scaled(points: &[f64], alpha: f64, ns: &[u64]) -> Vec<f64> {
    ns.iter()
        .map(|&n| {
            let mut orbit: Vec<f64> = (0..n)
                .flat_map(|i| points.iter().map(move |x| (x + i as f64 * alpha).rem_euclid(1.0)))
                .collect();
            orbit.sort_by(f64::total_cmp);
            let wrap = orbit[0] + 1.0 - orbit[orbit.len() - 1];
            let largest = orbit.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
            n as f64 * largest / 2.0
        })
        .collect()
}

fn calibrate_rotation_qd(cfg: &ExperimentConfig) -> Result<Fixture<RotationQdData>, RunError> {
    let schedule = Schedule::geometric(cfg.int("n_max"), cfg.float("ratio")).map_err(RunError::module(cfg.experiment))?;
    let ns = schedule.values();
    let a = dyadic_set(cfg.int("terms") as usize, Space::Circle);
    let a = a.float_coords().expect("float set").to_vec();
    let alphas = cfg.int("alphas") as usize;
    let per_alpha: u128 = ns.iter().map(|&n| n as u128 * (a.len() as u128 + 1)).sum();
    check_oracle_budget(cfg, per_alpha)?;
    let mins = par_map(cfg.workers, alphas, |t| {
        let alpha = rotation_alpha(cfg.seed, t);
        let min = |v: Vec<f64>| v.into_iter().fold(f64::INFINITY, f64::min);
        (
            alpha,
            min(direct_rotation_scaled(&a, alpha, ns)),
            min(direct_rotation_scaled(&[0.0], alpha, ns)),
        )
    });
    let baseline_min: Vec<f64> = mins.iter().map(|m| m.2).collect();
    let threshold = NULL_MODEL_FRACTION * median(&baseline_min);
    Ok(fixture(
        cfg,
        "orbit union rebuilt and sorted at every scheduled n",
        RotationQdData {
            alphas: mins.iter().map(|m| m.0).collect(),
            set_min: mins.iter().map(|m| m.1).collect(),
            baseline_min,
            threshold,
            threshold_rule: format!("{NULL_MODEL_FRACTION} x median over alpha of the single-point baseline minimum"),
        },
    ))
}

fn exact_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Half the largest arc of `{m x}`, in exact arithmetic.
fn exact_dilated_gap(xs: &[BigRational], m: u64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let mut ys: Vec<BigRational> = xs
        .iter()
        .map(|x| {
            let y = x * &m;
            &y - y.floor()
        })
        .collect();
    ys.sort();
    let one = BigRational::from_integer(BigInt::from(1));
    let mut largest = &ys[0] + &one - &ys[ys.len() - 1];
    for w in ys.windows(2) {
        let d = &w[1] - &w[0];
        if d > largest {
            largest = d;
        }
    }
    largest / BigRational::from_integer(BigInt::from(2))
}

/// `P(max spacing <= x)` for `k` iid uniform points on the circle:
/// `sum_j (-1)^j C(k, j) (1 - j x)_+^{k-1}`, evaluated exactly.
pub fn null_dense_probability(k: u64, x: f64) -> f64 {
    let x = exact_from_f64(x);
    let one = BigRational::from_integer(BigInt::from(1));
    let mut total = BigRational::from_integer(BigInt::from(0));
    let mut binom = BigInt::from(1);
    for j in 0..=k {
        let base = &one - &x * BigRational::from_integer(BigInt::from(j));
        if base > BigRational::from_integer(BigInt::from(0)) {
            let term = num_traits::pow(base, (k - 1) as usize) * BigRational::from_integer(binom.clone());
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    num_traits::ToPrimitive::to_f64(&total).expect("probability")
}

fn calibrate_glasner(cfg: &ExperimentConfig) -> Result<Fixture<GlasnerData>, RunError> {
    let (sets, size) = (cfg.int("sets") as usize, cfg.int("size"));
    let (n_max, density_n_max) = (cfg.int("n_max"), cfg.int("density_n_max"));
    check_oracle_budget(cfg, sets as u128 * size as u128 * (n_max + density_n_max) as u128)?;
    let eps = exact_from_f64(cfg.float("eps"));
    let rows = par_map(cfg.workers, sets, |t| {
        let a = glasner_set(cfg.seed, t, size as usize);
        let xs: Vec<BigRational> = a.float_coords().expect("float set").iter().map(|&x| exact_from_f64(x)).collect();
        let dense: Vec<bool> = (1..=density_n_max).map(|m| exact_dilated_gap(&xs, m) < eps).collect();
        let min_m = (1..=n_max).find(|&m| match dense.get(m as usize - 1) {
            Some(&d) => d,
            None => exact_dilated_gap(&xs, m) < eps,
        });
        let fraction = dense.iter().filter(|&&d| d).count() as f64 / density_n_max as f64;
        (min_m, fraction)
    });
    let null_probability = null_dense_probability(size, 2.0 * cfg.float("eps"));
    Ok(fixture(
        cfg,
        "exact rational scan of every dilation m",
        GlasnerData {
            min_m: rows.iter().map(|r| r.0).collect(),
            density_fraction: rows.iter().map(|r| r.1).collect(),
            null_probability,
            threshold: NULL_MODEL_FRACTION * null_probability,
            threshold_rule: format!("{NULL_MODEL_FRACTION} x probability that k iid uniform points are eps-dense"),
        },
    ))
}

fn calibrate_counterexample(cfg: &ExperimentConfig) -> Result<Fixture<CounterexampleData>, RunError> {
    let run = counterexample_run(cfg)?;
    let ns = run.profile.records.iter().map(|r| r.n).collect::<Vec<_>>();
    let points = run.points.float_coords().expect("float set").to_vec();
    check_oracle_budget(cfg, ns.iter().map(|&n| n as u128 * points.len() as u128).sum())?;
    let alpha = match cfg.text("alpha") {
        "golden" => odl_core::cfrac::QuadraticIrrational::golden().to_f64(),
        _ => odl_core::cfrac::QuadraticIrrational::silver().to_f64(),
    };
    let scaled = direct_rotation_scaled(&points, alpha, &ns);
    let window_min = |(lo, hi): (u64, u64)| {
        ns.iter()
            .zip(&scaled)
            .filter(|(n, _)| (lo..=hi).contains(*n))
            .map(|(_, s)| *s)
            .fold(f64::INFINITY, f64::min)
    };
    let (low, high) = counterexample_windows(cfg.int("n_max"));
    let (low_min, high_min) = (window_min(low), window_min(high));
    Ok(fixture(
        cfg,
        "orbit union rebuilt and sorted at every scheduled n",
        CounterexampleData {
            indices: run.indices,
            denominators: run.denominators,
            min_scaled: scaled.iter().copied().fold(f64::INFINITY, f64::min),
            ns,
            scaled,
            low_window: low,
            low_window_min: low_min,
            high_window: high,
            high_window_min: high_min,
            ratio: high_min / low_min,
        },
    ))
}
