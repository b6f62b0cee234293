//! Weighted-sum oracles and instance bounds.
//!
//! An oracle receives a weight vector, aggregates the instance's objectives
//! into a single integer-valued objective and runs a single-objective
//! algorithm on it. Aggregation uses the weight's integer direction, so no
//! oracle ever touches fractions; small instances run on `i128`, huge TSP
//! weights on [`form::LinearForm`], everything else on `BigInt`.

pub mod form;
pub mod knapsack;
pub mod matching;
pub mod tsp;

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{ratio, Rational};
use crate::problem::{Encoding, Payload, ProblemInstance, SolutionRecord, WeightVector};

/// Integer type the single-objective algorithms are generic over.
pub trait Scalar:
    Clone + Ord + Zero + Debug + From<u64> + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    /// Exact half of an even value.
    fn half(&self) -> Self;
}

impl Scalar for i128 {
    fn half(&self) -> Self {
        self / 2
    }
}

impl Scalar for BigInt {
    fn half(&self) -> Self {
        self / 2
    }
}

/// Aggregated values fit `i128` comfortably when their total stays below this
/// many bits, leaving headroom for the products the algorithms form.
const I128_BITS: u64 = 60;

pub(crate) fn narrow(values: &[BigInt]) -> Option<Vec<i128>> {
    let total: BigInt = values.iter().map(|v| BigInt::from(v.magnitude().clone())).sum();
    if total.bits() > I128_BITS {
        return None;
    }
    values.iter().map(ToPrimitive::to_i128).collect()
}

/// Lower and upper bounds on every nonzero objective value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lb: Rational,
    pub ub: Rational,
}

/// Knapsack: LB is the smallest positive item profit, UB the largest
/// per-objective total profit. TSP: LB is the smallest positive edge cost,
/// UB is `n` times the largest edge cost.
pub fn compute_bounds(instance: &ProblemInstance) -> Result<Bounds> {
    let d = instance.objectives();
    let mut min_positive: Option<u64> = None;
    let mut any_positive = vec![false; d];
    let ub: u128 = match instance.payload() {
        Payload::Knapsack(k) => {
            let mut totals = vec![0u128; d];
            for row in &k.profits {
                for (i, &p) in row.iter().enumerate() {
                    totals[i] += p as u128;
                    if p > 0 {
                        any_positive[i] = true;
                        min_positive = Some(min_positive.map_or(p, |m| m.min(p)));
                    }
                }
            }
            totals.into_iter().max().unwrap_or(0)
        }
        Payload::Tsp(t) => {
            let mut max_edge = 0u64;
            for (i, m) in t.costs.iter().enumerate() {
                for row in m {
                    for &c in row {
                        max_edge = max_edge.max(c);
                        if c > 0 {
                            any_positive[i] = true;
                            min_positive = Some(min_positive.map_or(c, |m| m.min(c)));
                        }
                    }
                }
            }
            t.cities() as u128 * max_edge as u128
        }
    };
    let lb = min_positive.ok_or_else(|| {
        Error::Configuration("degenerate instance: every objective value is zero".into())
    })?;
    for (i, positive) in any_positive.iter().enumerate() {
        if !positive {
            log::warn!("degenerate instance: objective {} is identically zero", i + 1);
        }
    }
    Ok(Bounds {
        lb: Rational::from_integer(lb.into()),
        ub: Rational::from_integer(ub.into()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleKind {
    ExtendedGreedy,
    KnapsackDp,
    Christofides,
    DoubleTree,
    HeldKarp,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::ExtendedGreedy => "greedy",
            OracleKind::KnapsackDp => "dp",
            OracleKind::Christofides => "christofides",
            OracleKind::DoubleTree => "double-tree",
            OracleKind::HeldKarp => "held-karp",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "greedy" => OracleKind::ExtendedGreedy,
            "dp" => OracleKind::KnapsackDp,
            "christofides" => OracleKind::Christofides,
            "double-tree" => OracleKind::DoubleTree,
            "held-karp" => OracleKind::HeldKarp,
            other => return Err(Error::Configuration(format!("unknown oracle {other:?}"))),
        })
    }

    fn for_knapsack(self) -> bool {
        matches!(self, OracleKind::ExtendedGreedy | OracleKind::KnapsackDp)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest knapsack capacity the DP oracle accepts.
    pub dp_capacity_limit: u64,
    /// Largest city count Held-Karp accepts.
    pub held_karp_limit: usize,
    /// When false, Christofides skips the matching and runs the double-tree
    /// shortcut instead (declared factor 2).
    pub christofides_matching: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            dp_capacity_limit: 200_000,
            held_karp_limit: 13,
            christofides_matching: true,
        }
    }
}

/// A weighted-sum oracle with a declared approximation factor and a call
/// counter that is safe to share between threads.
#[derive(Debug)]
pub struct Oracle {
    kind: OracleKind,
    config: OracleConfig,
    calls: AtomicU64,
}

impl Oracle {
    pub fn new(kind: OracleKind) -> Self {
        Self::with_config(kind, OracleConfig::default())
    }

    pub fn with_config(kind: OracleKind, config: OracleConfig) -> Self {
        Oracle { kind, config, calls: AtomicU64::new(0) }
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    fn effective_kind(&self) -> OracleKind {
        if self.kind == OracleKind::Christofides && !self.config.christofides_matching {
            OracleKind::DoubleTree
        } else {
            self.kind
        }
    }

    /// Guaranteed approximation factor.
    pub fn alpha(&self) -> Rational {
        match self.effective_kind() {
            OracleKind::ExtendedGreedy | OracleKind::DoubleTree => ratio(2, 1),
            OracleKind::Christofides => ratio(3, 2),
            OracleKind::KnapsackDp | OracleKind::HeldKarp => ratio(1, 1),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.kind, OracleKind::KnapsackDp | OracleKind::HeldKarp)
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Rejects oracle/instance pairs of different problem types.
    pub fn check_compatible(&self, instance: &ProblemInstance) -> Result<()> {
        let knapsack = matches!(instance.payload(), Payload::Knapsack(_));
        if self.kind.for_knapsack() != knapsack {
            return Err(Error::Configuration(format!(
                "oracle {} cannot solve {} instances",
                self.kind.name(),
                instance.problem_name()
            )));
        }
        Ok(())
    }

    /// Solves the weighted-sum problem for `weight`, counting the call.
    pub fn solve(&self, instance: &ProblemInstance, weight: &WeightVector) -> Result<SolutionRecord> {
        self.check_compatible(instance)?;
        if weight.dim() != instance.objectives() {
            return Err(Error::Contract("weight dimension differs from objective count".into()));
        }
        self.calls.fetch_add(1, Ordering::Relaxed);
        let encoding = match instance.payload() {
            Payload::Knapsack(k) => {
                let items = match self.kind {
                    OracleKind::ExtendedGreedy => knapsack::extended_greedy(k, weight),
                    _ => knapsack::exact_dp(k, weight, self.config.dp_capacity_limit)?,
                };
                Encoding::Items(items)
            }
            Payload::Tsp(t) => {
                let tour = match self.effective_kind() {
                    OracleKind::Christofides => tsp::christofides(t, weight)?,
                    OracleKind::DoubleTree => tsp::double_tree(t, weight)?,
                    _ => tsp::held_karp(t, weight, self.config.held_karp_limit)?,
                };
                Encoding::Tour(tour)
            }
        };
        let image = instance.evaluate(&encoding)?;
        Ok(SolutionRecord { encoding, image, origin_weight: Some(weight.clone()) })
    }
}

/// Free-function form of [`Oracle::solve`].
pub fn solve_weighted_sum(
    oracle: &Oracle,
    instance: &ProblemInstance,
    weight: &WeightVector,
) -> Result<SolutionRecord> {
    oracle.solve(instance, weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    #[test]
    fn knapsack_bounds() {
        let inst = ProblemInstance::knapsack(vec![2, 3], 5, vec![vec![3, 1], vec![1, 4]]).unwrap();
        assert_eq!(compute_bounds(&inst).unwrap(), Bounds { lb: int(1), ub: int(5) });
        let single = ProblemInstance::knapsack(vec![1], 1, vec![vec![5, 5]]).unwrap();
        assert_eq!(compute_bounds(&single).unwrap(), Bounds { lb: int(5), ub: int(5) });
    }

    #[test]
    fn tsp_bounds() {
        let m = vec![vec![0, 7, 7, 7], vec![7, 0, 7, 7], vec![7, 7, 0, 7], vec![7, 7, 7, 0]];
        let inst = ProblemInstance::tsp_from_costs(vec![m.clone(), m]).unwrap();
        assert_eq!(compute_bounds(&inst).unwrap(), Bounds { lb: int(7), ub: int(28) });
    }

    #[test]
    fn all_zero_instance_is_rejected() {
        let inst = ProblemInstance::knapsack(vec![1], 1, vec![vec![0, 0]]).unwrap();
        assert!(matches!(compute_bounds(&inst), Err(Error::Configuration(_))));
        let partial = ProblemInstance::knapsack(vec![1], 1, vec![vec![0, 3]]).unwrap();
        assert_eq!(compute_bounds(&partial).unwrap().lb, int(3));
    }

    #[test]
    fn oracle_counts_calls_and_checks_types() {
        let inst = ProblemInstance::knapsack(vec![1], 1, vec![vec![1, 2]]).unwrap();
        let oracle = Oracle::new(OracleKind::ExtendedGreedy);
        let w = WeightVector::uniform(2);
        for _ in 0..3 {
            let rec = oracle.solve(&inst, &w).unwrap();
            assert_eq!(rec.origin_weight.as_ref(), Some(&w));
        }
        assert_eq!(oracle.calls(), 3);
        let tsp = Oracle::new(OracleKind::HeldKarp);
        assert!(matches!(tsp.solve(&inst, &w), Err(Error::Configuration(_))));
        assert_eq!(tsp.calls(), 0);
    }

    #[test]
    fn declared_factors() {
        assert_eq!(Oracle::new(OracleKind::Christofides).alpha(), ratio(3, 2));
        let cfg = OracleConfig { christofides_matching: false, ..OracleConfig::default() };
        assert_eq!(Oracle::with_config(OracleKind::Christofides, cfg).alpha(), int(2));
        assert_eq!(Oracle::new(OracleKind::ExtendedGreedy).alpha(), int(2));
        assert!(Oracle::new(OracleKind::HeldKarp).is_exact());
        for k in ["greedy", "dp", "christofides", "double-tree", "held-karp"] {
            assert_eq!(OracleKind::parse(k).unwrap().name(), k);
        }
    }
}
