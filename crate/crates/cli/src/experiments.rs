use std::time::Instant;

use odl_core::cfrac::QuadraticIrrational;
use odl_core::circle_dyn::{
    build_counterexample, dilation_density_fraction, glasner_min_dilation, qd_pair_profile,
    qd_profile_capped, DensityProfile, GrowthRule, Rotation, Schedule,
};
use odl_core::geometry::{
    circle_gap, interval_gap, torus_gap_upper, Coords, GapOptions, Point, PointSet, Scalar, Space,
};
use odl_core::harmonic::{build_bump, ramanujan_verify, RamanujanRow};
use odl_core::iet::{iet_qd_profile, ThreeIET};
use odl_core::torus_group::{
    chi_density_search, enumerate_ball, lyapunov_data, search_eps_dense, standard_generators,
    subordinate_search_eps_dense, walk_equidistribution, AbelianAction, BallOptions, IntMatrix,
    LeafSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, Experiment, ExperimentConfig};
use crate::error::RunError;
use crate::report::RunReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Generator for one trial: stream id `(experiment index << 32) | trial`
/// under the run seed, so a trial's draws do not depend on scheduling.
pub fn stream(seed: u64, experiment: Experiment, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(experiment.index() << 32 | trial);
    rng
}

/// `f(0), .., f(n - 1)` on up to `workers` scoped threads, merged by index.
pub fn par_map<T: Send>(workers: usize, n: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return (0..n).map(f).collect();
    }
    let f = &f;
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| scope.spawn(move || (w..n).step_by(workers).map(|i| (i, f(i))).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            for (i, v) in h.join().expect("worker panicked") {
                slots[i] = Some(v);
            }
        }
    });
    slots.into_iter().map(|v| v.expect("every index computed")).collect()
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `{0} ∪ {2^-j : 1 <= j <= terms}` in float coordinates.
pub fn dyadic_set(terms: usize, space: Space) -> PointSet {
    let mut xs = vec![0.0];
    xs.extend((1..=terms as i32).map(|j| 2f64.powi(-j)));
    PointSet::float(space, xs).expect("points lie in [0, 1)")
}

pub fn rotation_alpha(seed: u64, trial: usize) -> f64 {
    stream(seed, Experiment::RotationQd, trial as u64).gen()
}

pub fn glasner_set(seed: u64, trial: usize, size: usize) -> PointSet {
    let mut rng = stream(seed, Experiment::GlasnerDilation, trial as u64);
    PointSet::float(Space::Circle, (0..size).map(|_| rng.gen()).collect()).expect("points in [0, 1)")
}

pub fn sl_set(seed: u64, trial: usize, size: usize) -> PointSet {
    let mut rng = stream(seed, Experiment::SlSearch, trial as u64);
    PointSet::float(Space::Torus(2), (0..2 * size).map(|_| rng.gen()).collect()).expect("points in [0, 1)")
}

/// Uniform `(alpha, beta - alpha)` as in [`ThreeIET::from_uniform`]; the
/// measure-zero degenerate draws are skipped.
pub fn iet_instance(seed: u64, trial: usize) -> ThreeIET {
    let mut rng = stream(seed, Experiment::IetQd, trial as u64);
    loop {
        if let Ok(p) = ThreeIET::from_uniform(rng.gen(), rng.gen()) {
            return p;
        }
    }
}

fn param_error(key: &str, message: impl Into<String>) -> RunError {
    RunError::Config(ConfigError {
        line: None,
        key: Some(key.to_string()),
        message: message.into(),
    })
}

/// Numbers separated by whitespace or commas; integers and `p/q` are exact. The
/// result is all exact if every token is, otherwise all float.
pub fn parse_scalars(cfg: &ExperimentConfig, key: &str) -> Result<Vec<Scalar>, RunError> {
    let values: Vec<Scalar> = cfg
        .text(key)
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<i64>() {
            Ok(k) => Ok(Scalar::integer(k)),
            Err(_) => t.parse::<Scalar>().map_err(|e| param_error(key, e.to_string())),
        })
        .collect::<Result<_, _>>()?;
    if values.iter().all(Scalar::is_exact) {
        Ok(values)
    } else {
        Ok(values.iter().map(Scalar::to_float).collect())
    }
}

fn coords_of(values: &[Scalar]) -> Coords {
    if values.iter().all(Scalar::is_exact) {
        Coords::Exact(values.iter().map(|s| s.as_exact().expect("exact").clone()).collect())
    } else {
        Coords::Float(values.iter().map(Scalar::to_f64).collect())
    }
}

fn schedule(cfg: &ExperimentConfig) -> Result<Schedule, RunError> {
    Schedule::geometric(cfg.int("n_max"), cfg.float("ratio")).map_err(RunError::module(cfg.experiment))
}

fn check_orbit_budget(cfg: &ExperimentConfig, points: u64) -> Result<(), RunError> {
    let requested = points as u128 * cfg.int("n_max") as u128;
    if requested > cfg.budget.orbit_cap as u128 {
        return Err(RunError::Budget {
            experiment: cfg.experiment,
            message: format!("orbit union of {requested} points exceeds the cap of {}", cfg.budget.orbit_cap),
        });
    }
    Ok(())
}

fn profile_rows(prefix: &str, p: &DensityProfile, rows: &mut Vec<String>) {
    for r in &p.records {
        rows.push(format!("{prefix}{},{},{}", r.n, r.gap.to_f64(), r.scaled.to_f64()));
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let mut report = match cfg.experiment {
        Experiment::Gap => gap(cfg),
        Experiment::GlasnerDilation => glasner(cfg),
        Experiment::RotationQd => rotation_qd(cfg),
        Experiment::RotationCounterexample => counterexample(cfg),
        Experiment::PairQd => pair_qd(cfg),
        Experiment::IetQd => iet_qd(cfg),
        Experiment::SlSearch => sl_search(cfg),
        Experiment::WalkEqui => walk(cfg),
        Experiment::AbelianSearch => abelian(cfg),
        Experiment::RamanujanVerify => ramanujan(cfg),
        Experiment::BumpDecay => bump(cfg),
    }?;
    report.header = vec![("odl_version".to_string(), VERSION.to_string())];
    report.header.extend(cfg.echo());
    report.wall_time = start.elapsed();
    Ok(report)
}

fn gap(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let err = RunError::module(cfg.experiment);
    let values = parse_scalars(cfg, "points")?;
    let space = match cfg.text("space") {
        "circle" => Space::Circle,
        "interval" => Space::Interval,
        _ => Space::Torus(cfg.int("dim") as usize),
    };
    let set = PointSet::new(space, coords_of(&values)).map_err(&err)?;
    let (gap, upper) = match space {
        Space::Circle => {
            let g = circle_gap(&set).map_err(&err)?;
            (g.clone(), g)
        }
        Space::Interval => {
            let g = interval_gap(&set).map_err(&err)?;
            (g.clone(), g)
        }
        Space::Torus(_) => {
            let opts = GapOptions::with_resolution(cfg.int("resolution") as usize);
            let g = torus_gap_upper(&set, &opts).map_err(&err)?;
            (Scalar::Float(g.estimate), Scalar::Float(g.certified_upper))
        }
    };
    let mut report = RunReport::new("space,k,gap,gap_exact,gap_upper");
    let exact = if gap.is_exact() { gap.to_string() } else { String::new() };
    report.rows.push(format!(
        "{},{},{},{exact},{}",
        cfg.text("space"),
        set.len(),
        gap.to_f64(),
        upper.to_f64()
    ));
    report.stat("points", set.len());
    Ok(report)
}

fn glasner(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let err = RunError::module(cfg.experiment);
    let (sets, size) = (cfg.int("sets") as usize, cfg.int("size") as usize);
    let eps = Scalar::float(cfg.float("eps")).map_err(&err)?;
    let results = par_map(cfg.workers, sets, |t| {
        let a = glasner_set(cfg.seed, t, size);
        let search = glasner_min_dilation(&a, &eps, cfg.int("n_max"))?;
        let density = dilation_density_fraction(&a, &eps, cfg.int("density_n_max"))?;
        Ok::<_, odl_core::Error>((search, density))
    });
    let mut report = RunReport::new("set,found,min_m,best_m,best_gap,density_fraction");
    let (mut found, mut densities) = (0, Vec::new());
    for (t, r) in results.into_iter().enumerate() {
        let (search, density) = r.map_err(&err)?;
        found += search.found.is_some() as usize;
        densities.push(density);
        report.rows.push(format!(
            "{t},{},{},{},{},{density}",
            search.found.is_some(),
            search.found.map_or(String::new(), |m| m.to_string()),
            search.best.0,
            search.best.1.to_f64()
        ));
    }
    report.stat("success_fraction", found as f64 / sets.max(1) as f64);
    report.stat("mean_density_fraction", densities.iter().sum::<f64>() / sets.max(1) as f64);
    report.stat("min_density_fraction", densities.iter().copied().fold(f64::INFINITY, f64::min));
    Ok(report)
}

/// Profile of the dyadic set and of the single point `{0}` for one `alpha`.
#[derive(Clone, Debug)]
pub struct AlphaRun {
    pub alpha: f64,
    pub profile: DensityProfile,
    pub baseline: DensityProfile,
}

pub fn rotation_runs(cfg: &ExperimentConfig) -> Result<Vec<AlphaRun>, RunError> {
    let err = RunError::module(cfg.experiment);
    let sched = schedule(cfg)?;
    let a = dyadic_set(cfg.int("terms") as usize, Space::Circle);
    let zero = dyadic_set(0, Space::Circle);
    let cap = cfg.budget.orbit_cap;
    par_map(cfg.workers, cfg.int("alphas") as usize, |t| {
        let alpha = rotation_alpha(cfg.seed, t);
        let rot = Rotation::new(Scalar::float(alpha)?);
        Ok(AlphaRun {
            alpha,
            profile: qd_profile_capped(&rot, &a, &sched, cap)?,
            baseline: qd_profile_capped(&rot, &zero, &sched, cap)?,
        })
    })
    .into_iter()
    .map(|r| r.map_err(&err))
    .collect()
}

fn rotation_qd(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let runs = rotation_runs(cfg)?;
    let mut report = RunReport::new("alpha_index,alpha,n,gap,scaled");
    for (t, r) in runs.iter().enumerate() {
        profile_rows(&format!("{t},{},", r.alpha), &r.profile, &mut report.rows);
    }
    summarize_profiles(&mut report, runs.iter().map(|r| (&r.profile, &r.baseline)));
    Ok(report)
}

fn summarize_profiles<'a>(
    report: &mut RunReport,
    runs: impl Iterator<Item = (&'a DensityProfile, &'a DensityProfile)>,
) {
    let (mut mins, mut base, mut monotone) = (Vec::new(), Vec::new(), 0);
    for (p, b) in runs {
        mins.push(p.min_scaled());
        base.push(b.min_scaled());
        monotone += p.is_non_increasing() as usize;
    }
    report.stat("runs", mins.len());
    report.stat("median_min_scaled", median(&mins));
    report.stat("median_baseline_min_scaled", median(&base));
    report.stat("non_increasing_fraction", monotone as f64 / mins.len().max(1) as f64);
}

pub fn parse_rule(text: &str) -> Option<GrowthRule> {
    match text {
        "square" => Some(GrowthRule::Square),
        "triple-exp" => Some(GrowthRule::TripleExp),
        _ => text
            .strip_prefix("power:")
            .and_then(|e| e.parse::<f64>().ok())
            .filter(|e| *e > 1.0)
            .map(GrowthRule::Power),
    }
}

/// Window bounds for the persistence ratio: `[1, n_max/100]` against `[n_max/10, n_max]`.
pub fn counterexample_windows(n_max: u64) -> ((u64, u64), (u64, u64)) {
    ((1, (n_max / 100).max(1)), ((n_max / 10).max(1), n_max))
}

#[derive(Clone, Debug)]
pub struct CounterexampleRun {
    pub indices: Vec<usize>,
    pub denominators: Vec<String>,
    pub points: PointSet,
    pub profile: DensityProfile,
}

pub fn counterexample_run(cfg: &ExperimentConfig) -> Result<CounterexampleRun, RunError> {
    let err = RunError::module(cfg.experiment);
    let alpha = match cfg.text("alpha") {
        "golden" => QuadraticIrrational::golden(),
        _ => QuadraticIrrational::silver(),
    };
    let rule = parse_rule(cfg.text("rule"))
        .ok_or_else(|| param_error("rule", "expected square, triple-exp or power:<e> with e > 1"))?;
    let set = build_counterexample(&alpha, rule, cfg.int("depth") as usize).map_err(&err)?;
    check_orbit_budget(cfg, set.points.len() as u64)?;
    let rot = Rotation::new(Scalar::float(alpha.to_f64()).map_err(&err)?);
    let profile = qd_profile_capped(&rot, &set.points, &schedule(cfg)?, cfg.budget.orbit_cap).map_err(&err)?;
    Ok(CounterexampleRun {
        indices: set.indices,
        denominators: set.denominators.iter().map(ToString::to_string).collect(),
        points: set.points,
        profile,
    })
}

fn counterexample(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let run = counterexample_run(cfg)?;
    let mut report = RunReport::new("n,gap,scaled");
    profile_rows("", &run.profile, &mut report.rows);
    let ((a, b), (c, d)) = counterexample_windows(cfg.int("n_max"));
    let low = run.profile.window_min(a, b).unwrap_or(f64::NAN);
    let high = run.profile.window_min(c, d).unwrap_or(f64::NAN);
    report.stat("indices", format!("{:?}", run.indices).replace(", ", " "));
    report.stat("denominators", run.denominators.join(" "));
    report.stat("min_scaled", run.profile.min_scaled());
    report.stat(&format!("window_min_{a}_{b}"), low);
    report.stat(&format!("window_min_{c}_{d}"), high);
    report.stat("window_ratio", high / low);
    Ok(report)
}

fn pair_qd(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let err = RunError::module(cfg.experiment);
    let alpha: Scalar = cfg.text("alpha").parse().map_err(|e: odl_core::Error| param_error("alpha", e.to_string()))?;
    let load = |key: &str| -> Result<PointSet, RunError> {
        let mut values = parse_scalars(cfg, key)?;
        if alpha.is_exact() && !values.iter().all(Scalar::is_exact) {
            return Err(param_error(key, "an exact alpha needs rational points"));
        }
        if !alpha.is_exact() {
            values = values.iter().map(Scalar::to_float).collect();
        }
        PointSet::new(Space::Circle, coords_of(&values)).map_err(&err)
    };
    let (a1, a2) = (load("set1")?, load("set2")?);
    check_orbit_budget(cfg, (a1.len() + a2.len()) as u64)?;
    let profile = qd_pair_profile(&Rotation::new(alpha), &a1, &a2, &schedule(cfg)?).map_err(&err)?;
    let mut report = RunReport::new("n,gap,scaled");
    profile_rows("", &profile, &mut report.rows);
    report.stat("min_scaled", profile.min_scaled());
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct IetRun {
    pub alpha: f64,
    pub beta: f64,
    pub profile: DensityProfile,
    pub baseline: DensityProfile,
}

pub fn iet_runs(cfg: &ExperimentConfig) -> Result<Vec<IetRun>, RunError> {
    let err = RunError::module(cfg.experiment);
    let terms = cfg.int("terms");
    check_orbit_budget(cfg, terms + 1)?;
    let sched = schedule(cfg)?;
    let a = dyadic_set(terms as usize, Space::Interval);
    let zero = dyadic_set(0, Space::Interval);
    par_map(cfg.workers, cfg.int("trials") as usize, |t| {
        let p = iet_instance(cfg.seed, t);
        Ok(IetRun {
            alpha: p.alpha().to_f64(),
            beta: p.beta().to_f64(),
            profile: iet_qd_profile(&p, &a, &sched)?,
            baseline: iet_qd_profile(&p, &zero, &sched)?,
        })
    })
    .into_iter()
    .map(|r| r.map_err(&err))
    .collect()
}

fn iet_qd(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let runs = iet_runs(cfg)?;
    let mut report = RunReport::new("trial,alpha,beta,n,gap,scaled");
    for (t, r) in runs.iter().enumerate() {
        profile_rows(&format!("{t},{},{},", r.alpha, r.beta), &r.profile, &mut report.rows);
    }
    summarize_profiles(&mut report, runs.iter().map(|r| (&r.profile, &r.baseline)));
    Ok(report)
}

fn sl_search(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let err = RunError::module(cfg.experiment);
    let opts = BallOptions {
        budget: cfg.budget.ball_budget,
        ..BallOptions::default()
    };
    let ball = enumerate_ball(&standard_generators(2), cfg.int("radius") as usize, &opts).map_err(&err)?;
    let gap_opts = GapOptions::with_resolution(cfg.int("resolution") as usize);
    let (sets, size, eps) = (cfg.int("sets") as usize, cfg.int("size") as usize, cfg.float("eps"));
    let results = par_map(cfg.workers, sets, |t| search_eps_dense(&sl_set(cfg.seed, t, size), eps, &ball, &gap_opts));
    let mut report = RunReport::new("set,found,index,word_length,gap,best_gap,checked");
    let mut found = 0;
    for (t, r) in results.into_iter().enumerate() {
        let s = r.map_err(&err)?;
        found += s.found.is_some() as usize;
        let (index, len, gap) = s
            .found
            .as_ref()
            .map_or((String::new(), String::new(), String::new()), |h| {
                (h.index.to_string(), h.word_length.to_string(), h.gap.to_string())
            });
        report.rows.push(format!(
            "{t},{},{index},{len},{gap},{},{}",
            s.found.is_some(),
            s.best.gap,
            s.checked
        ));
    }
    report.stat("ball_size", ball.len());
    report.stat("success_fraction", found as f64 / sets.max(1) as f64);
    Ok(report)
}

fn walk(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let err = RunError::module(cfg.experiment);
    let values = parse_scalars(cfg, "x")?;
    let n = values.len();
    let x = Point::new(Space::Torus(n), coords_of(&values)).map_err(&err)?;
    let mut gens = standard_generators(n);
    if n == 2 && cfg.text("generators") == "st" {
        gens.truncate(2);
    }
    let weights: Vec<f64> = if cfg.text("weights").is_empty() {
        vec![1.0; gens.len()]
    } else {
        parse_scalars(cfg, "weights")?.iter().map(Scalar::to_f64).collect()
    };
    let r = walk_equidistribution(&x, &gens, &weights, cfg.int("steps"), cfg.int("trials"), cfg.seed).map_err(&err)?;
    let mut report = RunReport::new("horizon,tv");
    report.rows.extend(r.tv_by_horizon.iter().map(|(h, tv)| format!("{h},{tv}")));
    report.stat("q", r.q);
    report.stat("orbit_size", r.orbit.len());
    report.stat("tv", r.tv);
    Ok(report)
}

/// Commuting generators of the named family.
pub fn abelian_family(name: &str) -> Vec<IntMatrix> {
    let m = |n, e: &[i64]| IntMatrix::from_i64(n, e).expect("unimodular");
    match name {
        "cat" => vec![m(2, &[2, 1, 1, 1])],
        // C^2 and C - I for the companion matrix C of x^3 - 3x + 1
        _ => vec![m(3, &[0, -1, 0, 0, 3, -1, 1, 0, 3]), m(3, &[-1, 0, -1, 1, -1, 3, 0, 1, -1])],
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn abelian(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let err = RunError::module(cfg.experiment);
    let action: AbelianAction = lyapunov_data(&abelian_family(cfg.text("family"))).map_err(&err)?;
    let mut report = RunReport::new("chi_index,exponent,multiplicity,found,m,chi_value");
    for (i, chi) in action.exponents.iter().enumerate() {
        let hit = if action.general_position {
            chi_density_search(&action, i, cfg.float("eps"), cfg.int("box_radius") as i64).map_err(&err)?
        } else {
            None
        };
        report.rows.push(format!(
            "{i},{},{},{},{},{}",
            join(chi),
            action.multiplicities[i],
            hit.is_some(),
            hit.as_deref().map_or(String::new(), join),
            hit.as_deref().map_or(String::new(), |m| action.chi(i, m).to_string())
        ));
    }
    report.stat("rank", action.rank());
    report.stat("dim", action.dim());
    report.stat("general_position", action.general_position);
    let leaf_index = cfg.int("leaf_index") as usize;
    if action.general_position && action.directions.get(leaf_index).is_some_and(Option::is_some) {
        let base: Vec<f64> = (0..action.dim()).map(|i| 0.1 * (i + 1) as f64).collect();
        let spacing = cfg.float("leaf_spacing");
        let params = (0..cfg.int("leaf_points")).map(|j| j as f64 * spacing).collect();
        let leaf = LeafSet::new(&action, leaf_index, base, params).map_err(&err)?;
        let opts = GapOptions::with_resolution(cfg.int("resolution") as usize);
        let s = subordinate_search_eps_dense(
            &action,
            &leaf,
            &leaf.points(),
            cfg.float("search_eps"),
            cfg.int("search_radius") as i64,
            &opts,
        )
        .map_err(&err)?;
        report.stat("subordinate_found", s.found.is_some());
        report.stat("subordinate_m", s.found.as_deref().map_or(String::new(), join));
        report.stat("subordinate_best_m", join(&s.best.0));
        report.stat("subordinate_best_gap", s.best.1);
        report.stat("subordinate_checked", s.checked);
    }
    Ok(report)
}

fn ramanujan(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let n = cfg.int("n") as usize;
    let all = cfg.text("emit") == "all";
    let mut report = RunReport::new(&RamanujanRow::csv_header(n));
    let rows = &mut report.rows;
    let summary = ramanujan_verify(n, cfg.int("q_max"), cfg.int("m_max") as i64, |row| {
        if all || !row.matches() || !row.within_bound() {
            rows.push(row.to_csv_line());
        }
    })
    .map_err(RunError::module(cfg.experiment))?;
    report.stat("rows", summary.rows);
    report.stat("evaluations", summary.evaluations);
    report.stat("mismatches", summary.mismatches);
    report.stat("bound_violations", summary.bound_violations);
    Ok(report)
}

fn bump(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let err = RunError::module(cfg.experiment);
    let (eps, grid) = (cfg.float("eps"), cfg.int("grid") as usize);
    let g = build_bump(eps, cfg.int("n") as usize, grid).map_err(&err)?;
    let decay = g.decay_profile(cfg.int("max_norm")).map_err(&err)?;
    let mut report = RunReport::new("m_norm,abs_coeff,decay_ratio");
    report
        .rows
        .extend(decay.iter().map(|r| format!("{},{:e},{:e}", r.m_norm, r.abs_coeff, r.decay_ratio)));
    let c0 = g.fourier_coeff(&vec![0; g.dim()]).map_err(&err)?;
    report.stat("half_width", g.half_width());
    report.stat("integral", g.integral());
    report.stat("integral_refined", g.integral_at(2 * grid + 1));
    report.stat("coeff_zero", c0.norm());
    report.stat("l2_mass", g.l2_mass());
    report.stat("eps_n_l2_mass", eps.powi(g.dim() as i32) * g.l2_mass());
    report.stat(
        "max_decay_ratio",
        decay.iter().map(|r| r.decay_ratio).fold(0.0, f64::max),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_keyed_by_experiment_and_trial() {
        let draw = |e, t| stream(5, e, t).gen::<u64>();
        assert_eq!(draw(Experiment::RotationQd, 3), draw(Experiment::RotationQd, 3));
        assert_ne!(draw(Experiment::RotationQd, 3), draw(Experiment::RotationQd, 4));
        assert_ne!(draw(Experiment::RotationQd, 3), draw(Experiment::IetQd, 3));
    }

    #[test]
    fn par_map_merges_by_index() {
        let one = par_map(1, 37, |i| i * i);
        for w in [2, 5, 64] {
            assert_eq!(par_map(w, 37, |i| i * i), one);
        }
        assert!(par_map(4, 0, |i| i).is_empty());
    }

    #[test]
    fn dyadic_set_shape() {
        let a = dyadic_set(3, Space::Circle);
        assert_eq!(a.float_coords().unwrap(), &[0.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn growth_rules() {
        assert_eq!(parse_rule("square"), Some(GrowthRule::Square));
        assert_eq!(parse_rule("power:3"), Some(GrowthRule::Power(3.0)));
        assert_eq!(parse_rule("power:1"), None);
        assert_eq!(parse_rule("cube"), None);
    }

    #[test]
    fn gap_of_quarter_points() {
        let cfg = ExperimentConfig::with_params(Experiment::Gap, 0, &[("points", "0 1/4 1/2 3/4")]).unwrap();
        let r = run(&cfg).unwrap();
        assert_eq!(r.columns, "space,k,gap,gap_exact,gap_upper");
        assert_eq!(r.rows, vec!["circle,4,0.125,1/8,0.125"]);
        let cfg = ExperimentConfig::with_params(Experiment::Gap, 0, &[("points", "0, 0.5"), ("space", "interval")]).unwrap();
        assert_eq!(run(&cfg).unwrap().rows, vec!["interval,2,0.5,,0.5"]);
    }

    #[test]
    fn budget_errors_exit_with_three() {
        let mut cfg = ExperimentConfig::with_params(Experiment::RotationQd, 1, &[("alphas", "1")]).unwrap();
        cfg.budget = crate::config::Budget::from_megabytes(1);
        let e = run(&cfg).unwrap_err();
        assert_eq!(e.exit_code(), 3, "{e}");
        let mut cfg = ExperimentConfig::with_params(Experiment::SlSearch, 1, &[("sets", "1")]).unwrap();
        cfg.budget.ball_budget = 100;
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn module_errors_carry_the_experiment() {
        let cfg = ExperimentConfig::with_params(Experiment::Gap, 0, &[("points", "0 3/2")]).unwrap();
        let e = run(&cfg).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().starts_with("gap: "), "{e}");
        let cfg = ExperimentConfig::with_params(Experiment::Gap, 0, &[("points", "0 x")]).unwrap();
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    }
}
