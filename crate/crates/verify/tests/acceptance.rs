//! The twelve acceptance criteria, one PASS/FAIL line each. Every threshold
//! below is pinned; fixture-backed criteria read their frozen oracle output
//! from the runner crate's `fixtures/` and never recompute it.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;

use odl::calibrate::{CounterexampleData, Fixture, GlasnerData, RotationQdData};
use odl::experiments::{counterexample_run, glasner_set, rotation_runs, sl_set};
use odl::{Experiment, ExperimentConfig};
use odl_core::cfrac::{convergents, expand, Alpha, ContinuedFraction, Dist, QuadraticIrrational};
use odl_core::circle_dyn::{dilation_density_fraction, distinct_gap_lengths, glasner_min_dilation, quadratic_orbit_gap};
use odl_core::geometry::{circle_arc, rat, GapOptions, PointSet, Scalar, Space};
use odl_core::harmonic::{abel_tail_bound, build_bump, ramanujan_verify, AdmissibleSequence};
use odl_core::iet::{first_return, SuspensionRotation, ThreeIET};
use odl_core::torus_group::{enumerate_ball, pair_stats, search_eps_dense, standard_generators, walk_equidistribution, BallOptions};

// 1
const RAMANUJAN_Q_MAX: u64 = 100;
const RAMANUJAN_M_MAX: i64 = 10;
const RAMANUJAN_DIMS: [usize; 3] = [1, 2, 3];
const RAMANUJAN_RUNTIME: Duration = Duration::from_secs(120);
// 2
const PAIR_SETS: usize = 100;
const PAIR_K_MAX: usize = 20;
const PAIR_DEN_MAX: i64 = 50;
const PAIR_M_MAX: usize = 50;
// 3
const SANDWICH_ALPHAS: usize = 20;
const SANDWICH_K_MAX: usize = 15;
// 4
const GAP_BOUND_K_MAX: usize = 12;
const THREE_DISTANCE_RUNS: usize = 1000;
const THREE_DISTANCE_N_MAX: u64 = 10_000;
const THREE_DISTANCE_TOL: f64 = 1e-9;
// 5
const IET_PAIRS: usize = 100;
const IET_POINTS: usize = 10_000;
const IET_TOL: f64 = 1e-12;
const IET_RATIONAL: usize = 100;
const IET_RUNTIME: Duration = Duration::from_secs(30);
// 6
const QD_PASS_FRACTION: f64 = 0.8;
// 7
const PERSISTENCE_RATIO: f64 = 0.25;
// 6, 7: engine against the rebuilt-orbit oracle, on n * gap; float orbit
// points differ by about n_max * 1e-16 between the two computations
const ENGINE_ORACLE_TOL: f64 = 1e-6;
// 8
const GLASNER_SUCCESS: f64 = 0.9;
const GLASNER_DENSITY_N_MAX: u64 = 2000;
// 9
const SL_SETS: usize = 10;
const SL_SIZE: usize = 10;
const SL_RADIUS: usize = 8;
const SL_EPS: f64 = 0.2;
const SL_RESOLUTION: usize = 64;
const SL_SUCCESS: f64 = 0.9;
const SL_SEED: u64 = 2024;
const SL_RUNTIME: Duration = Duration::from_secs(300);
// 10
const WALK_STEPS: u64 = 100_000;
const WALK_SEEDS: [u64; 3] = [1, 2, 3];
const WALK_TV: f64 = 0.05;
const WALK_ORBIT: usize = 24;
// 11
const BUMP_EPS: [f64; 3] = [0.05, 0.1, 0.2];
const BUMP_GRID: usize = 8192;
const BUMP_INTEGRAL_TOL: f64 = 1e-6;
const BUMP_COEFF_TOL: f64 = 1e-6;
const BUMP_FACTOR_TOL: f64 = 1e-8;
const BUMP_MAX_NORM: u64 = 200;
// 12
const ABEL_SEQUENCES: usize = 1000;
const ABEL_LEN: usize = 60;

struct Verdict {
    pass: bool,
    detail: String,
    info: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Verdict {
        Verdict {
            pass,
            detail: detail.into(),
            info: Vec::new(),
        }
    }

    fn with_info(mut self, line: impl Into<String>) -> Verdict {
        self.info.push(line.into());
        self
    }
}

fn load<T: DeserializeOwned>(name: &str) -> Fixture<T> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn fixture_config<T>(experiment: Experiment, f: &Fixture<T>) -> ExperimentConfig {
    let pairs: Vec<(&str, &str)> = f.config.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    ExperimentConfig::with_params(experiment, f.seed, &pairs).expect("fixture config parses")
}

fn ramanujan() -> Verdict {
    let start = Instant::now();
    let (mut rows, mut mismatches, mut violations) = (0, 0, 0);
    for n in RAMANUJAN_DIMS {
        let s = ramanujan_verify(n, RAMANUJAN_Q_MAX, RAMANUJAN_M_MAX, |_| {}).expect("verify runs");
        rows += s.rows;
        mismatches += s.mismatches;
        violations += s.bound_violations;
    }
    let elapsed = start.elapsed();
    Verdict::new(
        mismatches == 0 && violations == 0 && elapsed < RAMANUJAN_RUNTIME,
        format!("{rows} (q, m) pairs, {mismatches} mismatches, {violations} bound violations, {:.1} s", elapsed.as_secs_f64()),
    )
}

/// Ordered pairs `(i, j)` with `m (x_i - x_j)` integral in every coordinate.
fn pair_count_oracle(points: &[Vec<BigRational>], m: i64) -> u64 {
    let m = BigRational::from_integer(BigInt::from(m));
    let mut count = 0;
    for x in points {
        for y in points {
            if x.iter().zip(y).all(|(a, b)| ((a - b) * &m).is_integer()) {
                count += 1;
            }
        }
    }
    count
}

fn pair_statistics() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    for t in 0..PAIR_SETS {
        let n = 1 + t % 2;
        let k = rng.gen_range(1..=PAIR_K_MAX);
        let mut set = BTreeSet::new();
        while set.len() < k {
            let p: Vec<BigRational> = (0..n)
                .map(|_| {
                    let q = rng.gen_range(1..=PAIR_DEN_MAX);
                    rat(rng.gen_range(0..q), q)
                })
                .collect();
            set.insert(p);
        }
        let space = if n == 1 { Space::Circle } else { Space::Torus(2) };
        let a = PointSet::exact(space, set.into_iter().flatten().collect()).expect("reduced points");
        let stats = pair_stats(&a, PAIR_M_MAX).expect("exact set");
        violations += stats.bound_violation().is_some() as usize;
    }
    let example = PointSet::circle_rationals(&[(0, 1), (1, 2), (1, 3)]).unwrap();
    let stats = pair_stats(&example, 6).unwrap();
    let points: Vec<Vec<BigRational>> = vec![vec![rat(0, 1)], vec![rat(1, 2)], vec![rat(1, 3)]];
    let want = [(1, 3), (2, 5), (3, 5), (6, 9)];
    let example_ok = want
        .iter()
        .all(|&(m, h)| stats.h_at(m) == h && pair_count_oracle(&points, m as i64) == h);
    Verdict::new(
        violations == 0 && example_ok,
        format!(
            "{violations}/{PAIR_SETS} random sets exceed k m^(n+1); example h(1,2,3,6) = ({}, {}, {}, {})",
            stats.h_at(1),
            stats.h_at(2),
            stats.h_at(3),
            stats.h_at(6)
        ),
    )
}

fn sandwich_holds(cf: &ContinuedFraction, alpha: &Alpha) -> (usize, usize) {
    let table = convergents(cf, alpha);
    let (mut ok, mut total) = (0, 0);
    for k in 1..=SANDWICH_K_MAX {
        let (row, next) = (&table.rows[k], &table.rows[k + 1]);
        let lower = BigRational::new(BigInt::from(1), &next.q + &row.q);
        let upper = BigRational::new(BigInt::from(1), cf.coefficient(k + 1).expect("deep enough") * &row.q);
        total += 1;
        ok += (row.dist.cmp_rational(&lower).is_gt() && row.dist.cmp_rational(&upper).is_lt()) as usize;
    }
    (ok, total)
}

fn cfrac_sandwich() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut ok, mut total) = (0, 0);
    let mut drawn = 0;
    while drawn < SANDWICH_ALPHAS {
        // the double is an exact dyadic rational; its full expansion is exact
        let x = Scalar::from_f64_exact(rng.gen::<f64>()).unwrap();
        let cf = expand(&x, 64).unwrap();
        if cf.depth() < SANDWICH_K_MAX + 1 {
            continue;
        }
        drawn += 1;
        let (o, t) = sandwich_holds(&cf, &Alpha::from(x));
        ok += o;
        total += t;
    }
    let golden = QuadraticIrrational::golden();
    let cf = ContinuedFraction::from_quadratic(&golden, SANDWICH_K_MAX + 1);
    let (o, t) = sandwich_holds(&cf, &Alpha::Quadratic(golden));
    ok += o;
    total += t;
    Verdict::new(ok == total, format!("{ok}/{total} strict sandwiches hold (k = 1..={SANDWICH_K_MAX})"))
}

fn gap_lower_bound() -> Verdict {
    let (mut literal, mut doubled, mut total) = (0, 0, 0);
    for alpha in [QuadraticIrrational::golden(), QuadraticIrrational::silver()] {
        let cf = ContinuedFraction::from_quadratic(&alpha, GAP_BOUND_K_MAX + 1);
        let table = convergents(&cf, &Alpha::Quadratic(alpha.clone()));
        for k in 0..=GAP_BOUND_K_MAX {
            let Dist::Quadratic(dist) = &table.rows[k].dist else {
                unreachable!("quadratic input")
            };
            let n: u64 = table.rows[k + 1].q.to_string().parse().unwrap();
            let gap = quadratic_orbit_gap(&alpha, n).unwrap();
            total += 1;
            literal += (gap >= *dist) as usize;
            doubled += (gap.mul_int(&BigInt::from(2)) >= *dist) as usize;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut three = 0;
    for _ in 0..THREE_DISTANCE_RUNS {
        let alpha: f64 = rng.gen();
        let n = rng.gen_range(1..=THREE_DISTANCE_N_MAX);
        let xs = (0..n).map(|i| (i as f64 * alpha).rem_euclid(1.0)).collect();
        let set = PointSet::float(Space::Circle, xs).unwrap();
        three += (distinct_gap_lengths(&set, THREE_DISTANCE_TOL) <= 3) as usize;
    }
    Verdict::new(
        literal == total && three == THREE_DISTANCE_RUNS,
        format!(
            "d^H >= ||q_k alpha|| in {literal}/{total} cases; at most three gap lengths in {three}/{THREE_DISTANCE_RUNS} orbits"
        ),
    )
    .with_info(format!(
        "the largest arc (2 d^H) is >= ||q_k alpha|| in {doubled}/{total} cases; d^H here is half the largest arc"
    ))
}

fn induced_map() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..IET_PAIRS {
        let p = loop {
            if let Ok(p) = ThreeIET::from_uniform(rng.gen(), rng.gen()) {
                break p;
            }
        };
        let s = SuspensionRotation::from_iet(&p);
        for _ in 0..IET_POINTS {
            let x = Scalar::Float(rng.gen());
            let direct = p.apply(&x).unwrap().to_f64();
            let (ret, _) = first_return(&s, &x).unwrap();
            worst = worst.max((direct - ret.to_f64()).abs());
        }
    }
    let mut exact_ok = 0;
    for _ in 0..IET_RATIONAL {
        let d = rng.gen_range(3..=1000i64);
        let a = rng.gen_range(1..d - 1);
        let b = rng.gen_range(a + 1..d);
        let p = ThreeIET::new(Scalar::ratio(a, d), Scalar::ratio(b, d)).unwrap();
        let s = SuspensionRotation::from_iet(&p);
        let mut xs = vec![Scalar::ratio(0, 1), Scalar::ratio(a, d), Scalar::ratio(b, d)];
        xs.extend((0..97).map(|_| {
            let q = rng.gen_range(1..=997i64);
            Scalar::ratio(rng.gen_range(0..q), q)
        }));
        exact_ok += xs
            .iter()
            .all(|x| p.apply(x).unwrap() == first_return(&s, x).unwrap().0) as usize;
    }
    let elapsed = start.elapsed();
    Verdict::new(
        worst <= IET_TOL && exact_ok == IET_RATIONAL && elapsed < IET_RUNTIME,
        format!(
            "max |P x - first return| = {worst:e} over {} floats; {exact_ok}/{IET_RATIONAL} rational instances exact; {:.1} s",
            IET_PAIRS * IET_POINTS,
            elapsed.as_secs_f64()
        ),
    )
}

fn rotation_trend() -> Verdict {
    let f: Fixture<RotationQdData> = load("rotation_qd.json");
    let cfg = fixture_config(Experiment::RotationQd, &f);
    let runs = rotation_runs(&cfg).expect("profiles");
    let below = runs.iter().filter(|r| r.profile.min_scaled() < f.data.threshold).count();
    let monotone = runs.iter().filter(|r| r.profile.is_non_increasing()).count();
    let drift = runs
        .iter()
        .zip(&f.data.set_min)
        .map(|(r, m)| (r.profile.min_scaled() - m).abs())
        .fold(0.0, f64::max);
    let same_alphas = runs.iter().zip(&f.data.alphas).all(|(r, a)| r.alpha == *a);
    let fraction = below as f64 / runs.len() as f64;
    Verdict::new(
        fraction >= QD_PASS_FRACTION && monotone == runs.len() && same_alphas && drift <= ENGINE_ORACLE_TOL,
        format!(
            "{below}/{} alphas below threshold {}; {monotone}/{} profiles non-increasing; engine vs oracle {drift:e}",
            runs.len(),
            f.data.threshold,
            runs.len()
        ),
    )
}

fn counterexample_persistence() -> Verdict {
    let f: Fixture<CounterexampleData> = load("rotation_counterexample.json");
    let cfg = fixture_config(Experiment::RotationCounterexample, &f);
    let run = counterexample_run(&cfg).expect("profile");
    let d = &f.data;
    let low = run.profile.window_min(d.low_window.0, d.low_window.1).unwrap();
    let high = run.profile.window_min(d.high_window.0, d.high_window.1).unwrap();
    let min = run.profile.min_scaled();
    let agrees = run.indices == d.indices
        && (low - d.low_window_min).abs() <= ENGINE_ORACLE_TOL
        && (high - d.high_window_min).abs() <= ENGINE_ORACLE_TOL
        && (min - d.min_scaled).abs() <= ENGINE_ORACLE_TOL;
    Verdict::new(
        min > 0.0 && d.min_scaled > 0.0 && high / low >= PERSISTENCE_RATIO && d.ratio >= PERSISTENCE_RATIO && agrees,
        format!("min n*gap = {min:.6}, window ratio = {:.4}, fixture agreement {agrees}", high / low),
    )
}

fn glasner() -> Verdict {
    let f: Fixture<GlasnerData> = load("glasner_dilation.json");
    let cfg = fixture_config(Experiment::GlasnerDilation, &f);
    assert_eq!(cfg.int("density_n_max"), GLASNER_DENSITY_N_MAX);
    let eps = Scalar::float(cfg.float("eps")).unwrap();
    let (mut found, mut matched, mut dense_enough) = (0, 0, 0);
    let mut min_density = f64::INFINITY;
    for (t, want) in f.data.min_m.iter().enumerate() {
        let a = glasner_set(f.seed, t, cfg.int("size") as usize);
        let s = glasner_min_dilation(&a, &eps, cfg.int("n_max")).unwrap();
        found += s.found.is_some() as usize;
        matched += (s.found == *want) as usize;
        let density = dilation_density_fraction(&a, &eps, GLASNER_DENSITY_N_MAX).unwrap();
        min_density = min_density.min(density);
        dense_enough += (density > f.data.threshold) as usize;
    }
    let sets = f.data.min_m.len();
    Verdict::new(
        found as f64 / sets as f64 >= GLASNER_SUCCESS && matched == sets && dense_enough == sets,
        format!(
            "{found}/{sets} found, {matched}/{sets} minimal m match the exact scan, {dense_enough}/{sets} density fractions > {:.4} (min {min_density:.4})",
            f.data.threshold
        ),
    )
}

/// `max_y min_a |y - gamma a|_inf` over the grid, for every ball element.
fn ball_gap_oracle(gens_ball: &[Vec<f64>], a: &[f64]) -> Vec<f64> {
    let g = SL_RESOLUTION;
    gens_ball
        .iter()
        .map(|m| {
            let img: Vec<(f64, f64)> = a
                .chunks(2)
                .map(|p| {
                    let x = (m[0] * p[0] + m[1] * p[1]).rem_euclid(1.0);
                    let y = (m[2] * p[0] + m[3] * p[1]).rem_euclid(1.0);
                    (x, y)
                })
                .collect();
            let mut worst = 0.0f64;
            for i in 0..g {
                for j in 0..g {
                    let (u, v) = (i as f64 / g as f64, j as f64 / g as f64);
                    let near = img
                        .iter()
                        .map(|&(x, y)| circle_arc(u, x).max(circle_arc(v, y)))
                        .fold(f64::INFINITY, f64::min);
                    worst = worst.max(near);
                }
            }
            worst
        })
        .collect()
}

fn sl_search() -> Verdict {
    let start = Instant::now();
    let ball = enumerate_ball(&standard_generators(2), SL_RADIUS, &BallOptions::default()).unwrap();
    let mats: Vec<Vec<f64>> = ball.elements.iter().map(|m| m.to_f64()).collect();
    let opts = GapOptions::with_resolution(SL_RESOLUTION);
    let (mut found, mut agree) = (0, 0);
    let mut best = f64::INFINITY;
    for t in 0..SL_SETS {
        let a = sl_set(SL_SEED, t, SL_SIZE);
        let s = search_eps_dense(&a, SL_EPS, &ball, &opts).unwrap();
        let oracle = ball_gap_oracle(&mats, a.float_coords().unwrap());
        let oracle_min = oracle.iter().copied().fold(f64::INFINITY, f64::min);
        best = best.min(oracle_min);
        found += s.found.is_some() as usize;
        agree += (s.found.is_some() == (oracle_min < SL_EPS)) as usize;
    }
    let elapsed = start.elapsed();
    Verdict::new(
        found as f64 / SL_SETS as f64 >= SL_SUCCESS && agree == SL_SETS && elapsed < SL_RUNTIME,
        format!(
            "{found}/{SL_SETS} sets made {SL_EPS}-dense by the {}-element ball; {agree}/{SL_SETS} agree with the exhaustive oracle; {:.1} s",
            ball.len(),
            elapsed.as_secs_f64()
        ),
    )
    .with_info(format!("smallest grid gap over every set and ball element: {best:.4}"))
}

fn walk() -> Verdict {
    let x = odl_core::geometry::Point::exact(Space::Torus(2), vec![rat(1, 5), rat(2, 5)]).unwrap();
    let gens = &standard_generators(2)[..2];
    let mut ok = true;
    let mut tvs = Vec::new();
    for seed in WALK_SEEDS {
        let r = walk_equidistribution(&x, gens, &[1.0, 1.0], WALK_STEPS, 1, seed).unwrap();
        ok &= r.orbit.len() == WALK_ORBIT && r.tv < WALK_TV;
        tvs.push(format!("{:.4}", r.tv));
    }
    Verdict::new(ok, format!("orbit of {WALK_ORBIT}; TV at {WALK_STEPS} steps = [{}]", tvs.join(", ")))
}

fn bump() -> Verdict {
    let mut ok = true;
    let mut ratios = Vec::new();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for eps in BUMP_EPS {
        for n in [1usize, 2] {
            let g = build_bump(eps, n, BUMP_GRID).unwrap();
            let integral_err = (g.integral_at(2 * BUMP_GRID + 1) - 1.0).abs();
            // nonzero samples sit strictly inside the half-width on every axis,
            // so even the l1 distance to the identity stays below eps
            let reach = g
                .profile()
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0.0)
                .map(|(j, _)| circle_arc(j as f64 / BUMP_GRID as f64, 0.0))
                .fold(0.0, f64::max);
            let mut edge = vec![0.0; n];
            edge[0] = g.half_width();
            let contained = n as f64 * reach < eps && g.value(&edge) == 0.0;
            let coeff_err = (g.fourier_coeff(&vec![0; n]).unwrap() - 1.0).norm();
            let mut factor_err = 0.0f64;
            if n == 2 {
                for m in [[1i64, 0], [3, -5], [-17, 40], [100, 100]] {
                    let prod = g.fourier_coeff_1d(m[0]).unwrap() * g.fourier_coeff_1d(m[1]).unwrap();
                    factor_err = factor_err.max((g.fourier_coeff(&m).unwrap() - prod).norm());
                }
            }
            let decay = g.decay_profile(BUMP_MAX_NORM).unwrap();
            let finite = decay.iter().all(|r| r.decay_ratio.is_finite());
            let max_ratio = decay.iter().map(|r| r.decay_ratio).fold(0.0, f64::max);
            ratios.push(format!("eps {eps} n {n}: {max_ratio:.4}"));
            worst = (worst.0.max(integral_err), worst.1.max(coeff_err), worst.2.max(factor_err));
            ok &= integral_err <= BUMP_INTEGRAL_TOL
                && contained
                && coeff_err <= BUMP_COEFF_TOL
                && factor_err <= BUMP_FACTOR_TOL
                && finite;
        }
    }
    Verdict::new(
        ok,
        format!(
            "integral error {:e}, |g^(0) - 1| {:e}, factorization error {:e}, supports contained, decay ratios finite",
            worst.0, worst.1, worst.2
        ),
    )
    .with_info(format!("max |g^(m)| e^sqrt(eps |m|) over |m| <= {BUMP_MAX_NORM}: {}", ratios.join("; ")))
}

fn abel() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut held, mut literal) = (0, 0);
    for _ in 0..ABEL_SEQUENCES {
        let k = rng.gen_range(1..=100);
        let n = rng.gen_range(1..=3u32);
        let choices = [1.5, n as f64 + 2.0, (n as f64 - 1.0).max(1.25)];
        let r = choices[rng.gen_range(0..choices.len())];
        let seq = AdmissibleSequence::random(k, n, r, ABEL_LEN, &mut rng).unwrap();
        let b = abel_tail_bound(&seq);
        held += b.holds() as usize;
        literal += b.literal_holds() as usize;
    }
    Verdict::new(held == ABEL_SEQUENCES, format!("{held}/{ABEL_SEQUENCES} sequences under the proof-chain majorant"))
        .with_info(format!("without the mean-value factor r the chain holds for {literal}/{ABEL_SEQUENCES}"))
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--nocapture`; a filter
    // argument that matches no criterion name skips them all.
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("ramanujan sums", ramanujan),
        ("pair statistics", pair_statistics),
        ("continued-fraction sandwich", cfrac_sandwich),
        ("orbit gap lower bound", gap_lower_bound),
        ("induced map", induced_map),
        ("rotation density trend", rotation_trend),
        ("counterexample persistence", counterexample_persistence),
        ("glasner dilation", glasner),
        ("sl(2,z) dense search", sl_search),
        ("walk equidistribution", walk),
        ("bump function", bump),
        ("abel tail bound", abel),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let start = Instant::now();
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("AC{:<2} {status} {name}: {} [{:.1} s]", i + 1, v.detail, start.elapsed().as_secs_f64());
        for line in &v.info {
            println!("      info: {line}");
        }
        failed += !v.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
