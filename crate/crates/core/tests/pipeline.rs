use convex_approx::algorithms::{dual_benson_exact, filter_redundant, grid_algorithm, oaa};
use convex_approx::numeric::ratio;
use convex_approx::quality::{brute_force_images, convex_indicator, verify_convex_approx};
use convex_approx::scalarization::{Oracle, OracleKind};
use convex_approx::toolkit::bench::{run_bench_records, to_csv, BenchConfig, CSV_HEADER};
use convex_approx::toolkit::generators::{gen_knapsack_conflicting, gen_knapsack_uniform, gen_tsp};
use convex_approx::toolkit::io::{parse_instance, parse_solutions, write_instance, write_solutions};
use convex_approx::{ProblemInstance, Rational};
use num_traits::One;

fn check_all_algorithms(instance: &ProblemInstance, approx: OracleKind, exact: OracleKind) {
    let all = brute_force_images(instance).unwrap();
    let sense = instance.sense();
    let eps = ratio(1, 4);
    let oracle = Oracle::new(approx);
    let beta = (Rational::one() + &eps) * oracle.alpha();

    let o = oaa(instance, &oracle, &eps).unwrap();
    assert!(verify_convex_approx(&o.images(), &all, &beta, sense).unwrap());
    assert!(o.images().iter().all(|y| all.contains(y)));

    let g = grid_algorithm(instance, &Oracle::new(approx), &eps).unwrap();
    assert!(verify_convex_approx(&g.images(), &all, &beta, sense).unwrap());
    assert!(o.oracle_calls <= g.oracle_calls);

    let reference = dual_benson_exact(instance, &Oracle::new(exact)).unwrap();
    let images: Vec<_> = reference.iter().map(|s| s.image.clone()).collect();
    assert!(verify_convex_approx(&images, &all, &Rational::one(), sense).unwrap());
    // filtering keeps an exact convex approximation
    let kept: Vec<_> = filter_redundant(&reference, sense).unwrap().into_iter().map(|s| s.image).collect();
    assert!(kept.len() <= images.len());
    assert!(verify_convex_approx(&kept, &all, &Rational::one(), sense).unwrap());

    let report = convex_indicator(&o.images(), &kept, sense).unwrap();
    assert!(report.value >= Rational::one() && report.value <= beta);
}

#[test]
fn knapsack_end_to_end() {
    check_all_algorithms(&gen_knapsack_uniform(9, 3, 5).unwrap(), OracleKind::ExtendedGreedy, OracleKind::KnapsackDp);
    check_all_algorithms(&gen_knapsack_conflicting(8, 6).unwrap(), OracleKind::ExtendedGreedy, OracleKind::KnapsackDp);
    check_all_algorithms(&gen_knapsack_uniform(7, 2, 7).unwrap(), OracleKind::KnapsackDp, OracleKind::KnapsackDp);
}

#[test]
fn tsp_end_to_end() {
    check_all_algorithms(&gen_tsp(6, 3, 5).unwrap(), OracleKind::Christofides, OracleKind::HeldKarp);
    check_all_algorithms(&gen_tsp(6, 2, 8).unwrap(), OracleKind::DoubleTree, OracleKind::HeldKarp);
}

#[test]
fn results_survive_a_file_round_trip() {
    for instance in [gen_knapsack_conflicting(15, 2).unwrap(), gen_tsp(7, 3, 2).unwrap()] {
        let parsed = parse_instance(&write_instance(&instance).unwrap()).unwrap();
        assert_eq!(parsed, instance);
        let oracle = Oracle::new(if instance.problem_name() == "tsp" {
            OracleKind::Christofides
        } else {
            OracleKind::ExtendedGreedy
        });
        let result = oaa(&parsed, &oracle, &ratio(1, 2)).unwrap();
        let text = write_solutions(&parsed, &result.solutions);
        let back = parse_solutions(&text, &parsed).unwrap();
        // files carry encodings only; images are re-evaluated on parse
        let strip = |v: &[convex_approx::SolutionRecord]| -> Vec<_> {
            v.iter().map(|s| (s.encoding.clone(), s.image.clone())).collect()
        };
        assert_eq!(strip(&back), strip(&result.solutions));
    }
}

#[test]
fn bench_rows_cover_every_cell() {
    let config = BenchConfig::from_toml(
        r#"
out_dir = "unused"
algorithms = ["oaa", "grid", "benson-exact"]
epsilons = ["1/2", 0.25]

[[instances]]
generator = "knapsack-uniform"
n = [6, 8]
seeds = [1]

[[instances]]
generator = "tsp"
n = [5]
seeds = [3]
"#,
    )
    .unwrap();
    let records = run_bench_records(&config).unwrap();
    // three instances, each with two approximate algorithms at two ε and one exact run
    assert_eq!(records.len(), 3 * (2 * 2 + 1));
    for r in &records {
        assert!(!r.timeout);
        assert!(r.indicator.as_ref().unwrap() >= &Rational::one());
        assert!(r.reference_count.unwrap() > 0);
    }
    let csv = to_csv(&records);
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    assert_eq!(csv.lines().count(), records.len() + 1);
}
