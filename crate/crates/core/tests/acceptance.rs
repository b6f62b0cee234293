//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Runs as a plain binary (no libtest
//! harness) so the report is always visible.

use std::collections::BTreeSet;
use std::time::Instant;

use convex_approx::algorithms::{dual_benson_exact, filter_redundant, grid_algorithm, oaa, ConvexApproxResult};
use convex_approx::numeric::{ratio, solve_overdetermined, rank, to_f64, Rational};
use convex_approx::problem::{ObjectiveVector, ProblemInstance, Sense, WeightVector};
use convex_approx::quality::{brute_force_images, convex_indicator, verify_convex_approx};
use convex_approx::rounding::{
    boundary_round_traced, derive_parameters, grid_exponents, ApproxParams, GridStep,
};
use convex_approx::scalarization::{Bounds, Oracle, OracleKind};
use convex_approx::toolkit::generators::{gen_knapsack_conflicting, gen_knapsack_uniform, gen_tsp};
use convex_approx::toolkit::rng::SplitMix64;
use convex_approx::weightspace::{enumerate_extreme_points, envelope_value, in_compact_components, Constraint};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

// Pinned thresholds.
const KNAPSACK_SOFT_LIMIT: (i64, i64) = (6, 5); // 1.2
const TSP_SOFT_LIMIT: (i64, i64) = (5, 4); // 1.25
const SOFT_FRACTION: f64 = 0.9;
const SAMPLE_REL_GAP: f64 = 1e-3;
/// f64 evaluation of a sample may exceed the exact maximum by this much.
const SAMPLE_FLOAT_SLACK: f64 = 1e-9;
const ROUNDING_TRIALS: usize = 10_000;
/// Resolution of the diagnostic resampling for pairs over the gap limit.
const FINE_LATTICE: usize = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

/// One OAA run together with the GRID run on the same instance and ε.
struct Run {
    id: String,
    epsilon: Rational,
    alpha: Rational,
    oaa: ConvexApproxResult,
    indicator: Rational,
    grid: Option<(usize, u64, bool)>,
}

fn epsilons() -> Vec<Rational> {
    vec![ratio(1, 10), ratio(1, 4), ratio(1, 2)]
}

fn reference(instance: &ProblemInstance, exact: OracleKind) -> Vec<ObjectiveVector> {
    let sols = dual_benson_exact(instance, &Oracle::new(exact)).expect("reference run");
    let kept = filter_redundant(&sols, instance.sense()).expect("filter");
    kept.into_iter().map(|s| s.image).collect()
}

fn run_suite(instances: Vec<(String, ProblemInstance)>, approx: OracleKind, exact: OracleKind) -> Vec<Run> {
    let mut runs = Vec::new();
    for (id, inst) in instances {
        let started = Instant::now();
        let refs = reference(&inst, exact);
        let reference_time = started.elapsed();
        for eps in epsilons() {
            let oracle = Oracle::new(approx);
            let result = oaa(&inst, &oracle, &eps).expect("oaa run");
            let indicator = convex_indicator(&result.images(), &refs, inst.sense()).expect("indicator").value;
            let grid = grid_algorithm(&inst, &Oracle::new(approx), &eps).ok().map(|g| {
                let grid_images: BTreeSet<_> = g.images().into_iter().collect();
                let subset = result.images().iter().all(|y| grid_images.contains(y));
                (g.solutions.len(), g.oracle_calls, subset)
            });
            runs.push(Run { id: id.clone(), epsilon: eps, alpha: oracle.alpha(), oaa: result, indicator, grid });
        }
        eprintln!(
            "  {id}: reference {:.1}s, total {:.1}s",
            reference_time.as_secs_f64(),
            started.elapsed().as_secs_f64()
        );
    }
    runs
}

fn guarantee_outcome(runs: &[Run], soft: (i64, i64)) -> Outcome {
    let soft_limit = ratio(soft.0, soft.1);
    let mut hard_failures = Vec::new();
    let mut soft_ok = 0;
    let mut worst = Rational::zero();
    for r in runs {
        let bound = (Rational::one() + &r.epsilon) * &r.alpha;
        if r.indicator > bound {
            hard_failures.push(format!("{} eps={}: {}", r.id, r.epsilon, to_f64(&r.indicator)));
        }
        if r.indicator <= soft_limit {
            soft_ok += 1;
        }
        if r.indicator > worst {
            worst = r.indicator.clone();
        }
    }
    let frac = soft_ok as f64 / runs.len() as f64;
    Outcome {
        pass: hard_failures.is_empty() && frac >= SOFT_FRACTION,
        detail: format!(
            "{} runs, worst indicator {:.4}, {:.1}% within {:.2}, bound violations {:?}",
            runs.len(),
            to_f64(&worst),
            100.0 * frac,
            to_f64(&soft_limit),
            hard_failures
        ),
    }
}

fn knapsack_instances() -> Vec<(String, ProblemInstance)> {
    let mut out = Vec::new();
    for n in [10, 20, 30, 40, 50] {
        for seed in 1..=5u64 {
            out.push((format!("uniform-n{n}-s{seed}"), gen_knapsack_uniform(n, 3, seed).unwrap()));
            out.push((format!("conflicting-n{n}-s{seed}"), gen_knapsack_conflicting(n, seed).unwrap()));
        }
    }
    out
}

fn tsp_instances() -> Vec<(String, ProblemInstance)> {
    let mut out = Vec::new();
    for n in [6, 8, 10, 12] {
        for seed in 1..=5u64 {
            out.push((format!("tsp-n{n}-s{seed}"), gen_tsp(n, 3, seed).unwrap()));
        }
    }
    out
}

fn cardinality_outcome(runs: &[&Run]) -> Outcome {
    let mut violations = Vec::new();
    let mut not_subset = 0;
    for r in runs {
        match r.grid {
            None => violations.push(format!("{} eps={}: grid run failed", r.id, r.epsilon)),
            Some((count, calls, subset)) => {
                if r.oaa.solutions.len() > count || r.oaa.oracle_calls > calls {
                    violations.push(format!(
                        "{} eps={}: oaa {}/{} vs grid {}/{}",
                        r.id,
                        r.epsilon,
                        r.oaa.solutions.len(),
                        r.oaa.oracle_calls,
                        count,
                        calls
                    ));
                }
                if !subset {
                    not_subset += 1;
                }
            }
        }
    }
    let mean_ratio = runs
        .iter()
        .filter_map(|r| r.grid.map(|(c, _, _)| r.oaa.solutions.len() as f64 / c as f64))
        .sum::<f64>()
        / runs.len() as f64;
    Outcome {
        pass: violations.is_empty(),
        detail: format!(
            "{} runs, mean |OAA|/|GRID| {:.3}, OAA images outside GRID output: {}, violations {:?}",
            runs.len(),
            mean_ratio,
            not_subset,
            violations
        ),
    }
}

fn call_budget_outcome(results: &[&ConvexApproxResult]) -> Outcome {
    let mut violations = 0;
    let mut tightest = 0.0f64;
    for r in results {
        let cap = r.params.key_cap();
        if BigInt::from(r.oracle_calls) > cap || r.oracle_calls as usize != r.investigated_keys.len() {
            violations += 1;
        }
        tightest = tightest.max(r.oracle_calls as f64 / to_f64(&Rational::from_integer(cap)));
    }
    Outcome {
        pass: violations == 0,
        detail: format!(
            "{} runs, {} over the key cap, largest calls/cap {:.2e}",
            results.len(),
            violations,
            tightest
        ),
    }
}

/// Exhaustive verification on tiny instances.
fn micro_outcome(budget_runs: &mut Vec<ConvexApproxResult>) -> Outcome {
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut cases: Vec<(String, ProblemInstance, Vec<OracleKind>, OracleKind)> = Vec::new();
    for i in 0..50u64 {
        let n = 4 + (i % 9) as usize;
        let inst = if i % 2 == 0 {
            gen_knapsack_uniform(n, if i % 4 == 0 { 2 } else { 3 }, 1000 + i).unwrap()
        } else {
            gen_knapsack_conflicting(n, 1000 + i).unwrap()
        };
        cases.push((
            format!("knapsack#{i}"),
            inst,
            vec![OracleKind::KnapsackDp, OracleKind::ExtendedGreedy],
            OracleKind::KnapsackDp,
        ));
    }
    for i in 0..20u64 {
        let n = 3 + (i % 5) as usize;
        let inst = gen_tsp(n, if i % 3 == 0 { 2 } else { 3 }, 2000 + i).unwrap();
        cases.push((
            format!("tsp#{i}"),
            inst,
            vec![OracleKind::HeldKarp, OracleKind::Christofides, OracleKind::DoubleTree],
            OracleKind::HeldKarp,
        ));
    }
    for (id, inst, oracles, exact) in cases {
        let all = brute_force_images(&inst).expect("brute force");
        let sense = inst.sense();
        let benson = dual_benson_exact(&inst, &Oracle::new(exact)).expect("benson");
        let images: Vec<_> = benson.into_iter().map(|s| s.image).collect();
        checks += 1;
        if !verify_convex_approx(&images, &all, &Rational::one(), sense).unwrap() {
            failures.push(format!("{id}: exact reference"));
        }
        for kind in oracles {
            for eps in [ratio(1, 10), ratio(1, 2)] {
                let oracle = Oracle::new(kind);
                let r = oaa(&inst, &oracle, &eps).expect("oaa run");
                let beta = (Rational::one() + &eps) * oracle.alpha();
                checks += 1;
                if !verify_convex_approx(&r.images(), &all, &beta, sense).unwrap() {
                    failures.push(format!("{id}: {} eps={eps}", kind.name()));
                }
                budget_runs.push(r);
            }
        }
    }
    Outcome { pass: failures.is_empty(), detail: format!("{checks} checks, failures {failures:?}") }
}

fn random_weight(rng: &mut SplitMix64, d: usize) -> Vec<Rational> {
    let raw: Vec<u64> = match rng.uniform(0, 5) {
        // a vertex of the weight set
        0 => {
            let i = rng.uniform(0, d as u64 - 1) as usize;
            (0..d).map(|j| u64::from(j == i)).collect()
        }
        // some zero components
        1 => loop {
            let v: Vec<u64> = (0..d).map(|_| rng.uniform(0, 1) * rng.uniform(1, 1000)).collect();
            if v.iter().any(|&x| x > 0) {
                break v;
            }
        },
        // wildly different magnitudes
        2 => (0..d).map(|_| 1 + rng.uniform(0, 1_000_000) * rng.uniform(0, 1) * rng.uniform(0, 1_000_000)).collect(),
        _ => (0..d).map(|_| rng.uniform(1, 1_000_000)).collect(),
    };
    let total: u64 = raw.iter().sum();
    raw.iter().map(|&v| ratio(v as i64, total as i64)).collect()
}

fn rounding_configs() -> Vec<ApproxParams> {
    let mut out = Vec::new();
    for (eps, alpha, ub, d) in [
        (ratio(1, 10), ratio(2, 1), 10, 3),
        (ratio(1, 4), ratio(3, 2), 1000, 3),
        (ratio(1, 2), ratio(1, 1), 100, 2),
        (ratio(1, 2), ratio(2, 1), 50, 4),
    ] {
        let bounds = Bounds { lb: Rational::one(), ub: ratio(ub, 1) };
        out.push(derive_parameters(&eps, &alpha, &bounds, d).unwrap());
    }
    out
}

/// Five exact properties of the two rounding schemes, each over
/// `ROUNDING_TRIALS` random weights.
fn rounding_outcome() -> Outcome {
    let configs = rounding_configs();
    let mut rng = SplitMix64::new(77);
    let mut fails = [0usize; 5];
    let mut sandwich_trials = 0;
    while sandwich_trials < ROUNDING_TRIALS {
        let p = &configs[rng.uniform(0, configs.len() as u64 - 1) as usize];
        let lambda = random_weight(&mut rng, p.d);
        if lambda.iter().any(|l| *l < p.lb) {
            continue;
        }
        sandwich_trials += 1;
        let w = WeightVector::new(&lambda).unwrap();
        for step in [GridStep::EpsilonPrime, GridStep::EpsilonGrid] {
            let exps = grid_exponents(&w, step, p).unwrap();
            let base = Rational::one() + &p.epsilon_prime;
            let delta_base = Rational::one() + p.delta(step);
            let ok = lambda.iter().zip(&exps).all(|(l, &a)| {
                let hi = convex_approx::numeric::rational_pow(&base, a);
                *l <= hi && &hi / &delta_base <= *l
            });
            if !ok {
                fails[0] += 1;
            }
        }
    }
    for _ in 0..ROUNDING_TRIALS {
        let p = &configs[rng.uniform(0, configs.len() as u64 - 1) as usize];
        let lambda = random_weight(&mut rng, p.d);
        let trace = boundary_round_traced(&lambda, &p.c);
        if !in_compact_components(&trace.output, &p.c) {
            fails[1] += 1;
        }
        // exact equalities: every triggered k keeps Σ_{i<k} = c·λ̄_k in all later states
        let mut established: Vec<usize> = Vec::new();
        let mut eq_ok = true;
        let mut sorted_ok = true;
        let mut previous = trace.sorted_input.clone();
        for (k, state) in &trace.steps {
            established.push(*k);
            for &kk in &established {
                let prefix: Rational = state[..kk].iter().sum();
                eq_ok &= prefix == &p.c * &state[kk];
            }
            sorted_ok &= state.windows(2).all(|w| w[0] <= w[1]);
            sorted_ok &= state.iter().zip(&previous).all(|(now, before)| now >= before);
            sorted_ok &= state[*k..] == previous[*k..];
            previous = state.clone();
        }
        for &kk in &established {
            let prefix: Rational = trace.sorted_output[..kk].iter().sum();
            eq_ok &= prefix == &p.c * &trace.sorted_output[kk];
        }
        if !eq_ok {
            fails[2] += 1;
        }
        if !sorted_ok {
            fails[3] += 1;
        }
        if !reconstructs(&trace.sorted_input, &trace.sorted_output, &established) {
            fails[4] += 1;
        }
    }
    let names = ["grid sandwich", "compact membership", "prefix equalities", "sorting invariant", "convex reconstruction"];
    Outcome {
        pass: fails.iter().all(|&f| f == 0),
        detail: format!(
            "{ROUNDING_TRIALS} trials each; failures: {}",
            names.iter().zip(fails).map(|(n, f)| format!("{n}={f}")).collect::<Vec<_>>().join(", ")
        ),
    }
}

/// Solves for a convex combination of the final vector and its prefix
/// projections that reproduces the original sorted weight.
fn reconstructs(original: &[Rational], finished: &[Rational], triggered: &[usize]) -> bool {
    let d = original.len();
    let mut columns = vec![finished.to_vec()];
    for &k in triggered {
        let mut v = finished.to_vec();
        for x in &mut v[..k] {
            *x = Rational::zero();
        }
        columns.push(v);
    }
    let mut a: Vec<Vec<Rational>> = (0..d).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    a.push(vec![Rational::one(); columns.len()]);
    let mut b = original.to_vec();
    b.push(Rational::one());
    // duplicate columns (a projection equal to the final vector) make the
    // system rank deficient; drop them, they add nothing to the hull
    let mut keep: Vec<usize> = Vec::new();
    for j in 0..columns.len() {
        let mut trial = keep.clone();
        trial.push(j);
        let sub: Vec<Vec<Rational>> = a.iter().map(|row| trial.iter().map(|&t| row[t].clone()).collect()).collect();
        if rank(&sub) == trial.len() {
            keep = trial;
        }
    }
    let sub: Vec<Vec<Rational>> = a.iter().map(|row| keep.iter().map(|&t| row[t].clone()).collect()).collect();
    match solve_overdetermined(&sub, &b) {
        Some(mu) => mu.iter().all(|m| !m.is_negative()),
        None => false,
    }
}

fn random_images(rng: &mut SplitMix64, d: usize, max: usize) -> Vec<ObjectiveVector> {
    let count = rng.uniform(1, max as u64) as usize;
    (0..count)
        .map(|_| ObjectiveVector::from_integers(&(0..d).map(|_| rng.uniform(1, 20) as i64).collect::<Vec<_>>()).unwrap())
        .collect()
}

fn envelope_f64(images: &[ObjectiveVector], sense: Sense, lambda: &[f64]) -> f64 {
    let values = images.iter().map(|y| y.values().iter().zip(lambda).map(|(v, l)| to_f64(v) * l).sum::<f64>());
    match sense {
        Sense::Minimize => values.fold(f64::INFINITY, f64::min),
        Sense::Maximize => values.fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Points `i/m` on the weight simplex for `d ∈ {2, 3}`.
fn lattice(d: usize, m: usize) -> Vec<Vec<f64>> {
    let f = |i: usize| i as f64 / m as f64;
    if d == 2 {
        (0..=m).map(|i| vec![f(i), f(m - i)]).collect()
    } else {
        let mut out = Vec::new();
        for a in 0..=m {
            for b in 0..=m - a {
                out.push(vec![f(a), f(b), f(m - a - b)]);
            }
        }
        out
    }
}

/// About 10^4 points: 10,000 on the segment, 10,011 on the triangle.
fn dense_samples(d: usize) -> Vec<Vec<f64>> {
    lattice(d, if d == 2 { 9999 } else { 140 })
}

fn sample_max(measured: &[ObjectiveVector], reference: &[ObjectiveVector], sense: Sense, points: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .map(|l| {
            let m = envelope_f64(measured, sense, l);
            let r = envelope_f64(reference, sense, l);
            match sense {
                Sense::Minimize => m / r,
                Sense::Maximize => r / m,
            }
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn exact_ratio(measured: &[ObjectiveVector], reference: &[ObjectiveVector], sense: Sense, lambda: &[Rational]) -> Rational {
    let m = envelope_value(measured, sense, lambda);
    let r = envelope_value(reference, sense, lambda);
    match sense {
        Sense::Minimize => m / r,
        Sense::Maximize => r / m,
    }
}

fn indicator_outcome() -> Outcome {
    let mut rng = SplitMix64::new(4242);
    let mut below = 0;
    let mut gap_fail = 0;
    let mut witness_fail = 0;
    let mut worst_gap = 0.0f64;
    let mut worst_gap_d2 = 0.0f64;
    let mut worst_fine_gap = 0.0f64;
    for trial in 0..100 {
        let d = 2 + trial % 2;
        let sense = if rng.uniform(0, 1) == 0 { Sense::Minimize } else { Sense::Maximize };
        let measured = random_images(&mut rng, d, 10);
        let reference = random_images(&mut rng, d, 10);
        let report = convex_indicator(&measured, &reference, sense).unwrap();
        if exact_ratio(&measured, &reference, sense, &report.argmax_weight.components()) != report.value {
            witness_fail += 1;
        }
        let exact = to_f64(&report.value);
        let sampled = sample_max(&measured, &reference, sense, &dense_samples(d));
        if sampled > exact * (1.0 + SAMPLE_FLOAT_SLACK) {
            below += 1;
        }
        let gap = (exact - sampled) / exact;
        if d == 2 {
            worst_gap_d2 = worst_gap_d2.max(gap);
        }
        worst_gap = worst_gap.max(gap);
        if gap > SAMPLE_REL_GAP {
            gap_fail += 1;
            // diagnostic only: does the gap close on a much finer lattice?
            let fine = sample_max(&measured, &reference, sense, &lattice(d, FINE_LATTICE));
            worst_fine_gap = worst_fine_gap.max((exact - fine) / exact);
        }
    }
    Outcome {
        pass: below == 0 && gap_fail == 0 && witness_fail == 0,
        detail: format!(
            "100 pairs; sample above exact: {below}; relative gap > {SAMPLE_REL_GAP:e}: {gap_fail} \
             (worst {worst_gap:.2e}, worst with d=2 {worst_gap_d2:.2e}, \
             worst of those on a {FINE_LATTICE}-step lattice {worst_fine_gap:.2e}); witness mismatches: {witness_fail}"
        ),
    }
}

/// Envelope breakpoints on the segment `λ = (t, 1−t)` found directly from
/// pairwise line intersections, plus both endpoints.
fn breakpoints_2d(images: &[ObjectiveVector], sense: Sense) -> BTreeSet<(Vec<Rational>, Rational)> {
    let mut ts: BTreeSet<Rational> = [Rational::zero(), Rational::one()].into_iter().collect();
    // λᵀy = y2 + t·(y1 − y2)
    let line = |y: &ObjectiveVector| (y.get(1).clone(), y.get(0) - y.get(1));
    for a in images {
        for b in images {
            let (ia, sa) = line(a);
            let (ib, sb) = line(b);
            if sa != sb {
                let t = (&ib - &ia) / (&sa - &sb);
                if t > Rational::zero() && t < Rational::one() {
                    ts.insert(t);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for t in ts {
        let lambda = vec![t.clone(), Rational::one() - &t];
        let z = envelope_value(images, sense, &lambda);
        let slopes: BTreeSet<Rational> = images
            .iter()
            .filter(|y| {
                let (i, s) = line(y);
                i + &s * &t == z
            })
            .map(|y| line(y).1)
            .collect();
        if t.is_zero() || t.is_one() || slopes.len() > 1 {
            out.insert((lambda, z));
        }
    }
    out
}

fn vertex_outcome() -> Outcome {
    let mut rng = SplitMix64::new(99);
    let mut mismatch_2d = 0;
    let mut bad_3d = 0;
    let mut vertices_3d = 0;
    for trial in 0..300 {
        let sense = if trial % 2 == 0 { Sense::Minimize } else { Sense::Maximize };
        let images = random_images(&mut rng, 2, 6);
        let got: BTreeSet<_> = enumerate_extreme_points(&images, sense)
            .unwrap()
            .into_iter()
            .map(|v| (v.lambda().to_vec(), v.z.clone()))
            .collect();
        if got != breakpoints_2d(&images, sense) {
            mismatch_2d += 1;
        }

        let images = random_images(&mut rng, 3, 5);
        for v in enumerate_extreme_points(&images, sense).unwrap() {
            vertices_3d += 1;
            let l = v.lambda();
            let in_simplex = l.iter().all(|x| !x.is_negative()) && l.iter().sum::<Rational>().is_one();
            let coherent = v.z == envelope_value(&images, sense, l);
            let slack = |y: &ObjectiveVector| {
                let value: Rational = y.values().iter().zip(l).map(|(a, b)| a * b).sum();
                match sense {
                    Sense::Minimize => value - &v.z,
                    Sense::Maximize => &v.z - value,
                }
            };
            let feasible = images.iter().all(|y| !slack(y).is_negative());
            let mut tight = BTreeSet::new();
            for (i, x) in l.iter().enumerate() {
                if x.is_zero() {
                    tight.insert(Constraint::Coordinate(i));
                }
            }
            for (j, y) in images.iter().enumerate() {
                if slack(y).is_zero() {
                    tight.insert(Constraint::Image(j));
                }
            }
            // rows over (λ₁, λ₂, λ₃, z): tight constraints plus Σλ = 1
            let mut rows = vec![vec![Rational::one(), Rational::one(), Rational::one(), Rational::zero()]];
            for c in &tight {
                rows.push(match c {
                    Constraint::Coordinate(i) => {
                        let mut r = vec![Rational::zero(); 4];
                        r[*i] = Rational::one();
                        r
                    }
                    Constraint::Image(j) => {
                        let mut r: Vec<Rational> = images[*j].values().to_vec();
                        r.push(-Rational::one());
                        r
                    }
                });
            }
            let extreme = rank(&rows) == 4;
            if !(in_simplex && coherent && feasible && tight == v.tight && extreme) {
                bad_3d += 1;
            }
        }
    }
    Outcome {
        pass: mismatch_2d == 0 && bad_3d == 0,
        detail: format!(
            "300 sets with d=2: {mismatch_2d} differ from the breakpoint oracle; \
             300 sets with d=3: {vertices_3d} vertices, {bad_3d} fail re-verification"
        ),
    }
}

fn report(name: &str, started: Instant, outcome: Outcome, all_pass: &mut bool) {
    *all_pass &= outcome.pass;
    println!(
        "{} {name} ({:.1}s): {}",
        if outcome.pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64(),
        outcome.detail
    );
}

const BENCHMARK_CRITERIA: [&str; 5] =
    ["knapsack-guarantee", "tsp-guarantee", "cardinality-ordering", "micro-exhaustive", "call-budget"];

fn main() {
    // Positional arguments select criteria by substring; flags such as
    // `--nocapture` are ignored. The five benchmark criteria share their
    // runs and always execute together.
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected = |name: &str| filters.is_empty() || filters.iter().any(|f| name.contains(f.as_str()));
    let mut all_pass = true;

    if BENCHMARK_CRITERIA.iter().any(|c| selected(c)) {
        let t = Instant::now();
        let knapsack = run_suite(knapsack_instances(), OracleKind::ExtendedGreedy, OracleKind::KnapsackDp);
        report("knapsack-guarantee", t, guarantee_outcome(&knapsack, KNAPSACK_SOFT_LIMIT), &mut all_pass);

        let t = Instant::now();
        let tsp = run_suite(tsp_instances(), OracleKind::Christofides, OracleKind::HeldKarp);
        report("tsp-guarantee", t, guarantee_outcome(&tsp, TSP_SOFT_LIMIT), &mut all_pass);

        let t = Instant::now();
        let all_runs: Vec<&Run> = knapsack.iter().chain(&tsp).collect();
        report("cardinality-ordering", t, cardinality_outcome(&all_runs), &mut all_pass);

        let t = Instant::now();
        let mut micro_runs = Vec::new();
        let micro = micro_outcome(&mut micro_runs);
        report("micro-exhaustive", t, micro, &mut all_pass);

        let t = Instant::now();
        let results: Vec<&ConvexApproxResult> = all_runs.iter().map(|r| &r.oaa).chain(&micro_runs).collect();
        report("call-budget", t, call_budget_outcome(&results), &mut all_pass);
    }

    let standalone: [(&str, fn() -> Outcome); 3] = [
        ("rounding-properties", rounding_outcome),
        ("indicator-equivalence", indicator_outcome),
        ("vertex-enumeration", vertex_outcome),
    ];
    for (name, run) in standalone {
        if selected(name) {
            let t = Instant::now();
            report(name, t, run(), &mut all_pass);
        }
    }

    if !all_pass {
        std::process::exit(1);
    }
}
