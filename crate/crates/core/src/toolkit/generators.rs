//! Random benchmark instances.

use super::rng::SplitMix64;
use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    KnapsackUniform,
    KnapsackConflicting,
    Tsp,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::KnapsackUniform => "knapsack-uniform",
            GeneratorKind::KnapsackConflicting => "knapsack-conflicting",
            GeneratorKind::Tsp => "tsp",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "knapsack-uniform" => GeneratorKind::KnapsackUniform,
            "knapsack-conflicting" => GeneratorKind::KnapsackConflicting,
            "tsp" => GeneratorKind::Tsp,
            other => return Err(Error::Configuration(format!("unknown generator {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, seed: u64) -> Self {
        GeneratorSpec { kind, n, d: 3, seed }
    }

    pub fn generate(&self) -> Result<ProblemInstance> {
        match self.kind {
            GeneratorKind::KnapsackUniform => gen_knapsack_uniform(self.n, self.d, self.seed),
            GeneratorKind::KnapsackConflicting => {
                if self.d != 3 {
                    return Err(Error::Configuration(
                        "the conflicting knapsack generator is defined for 3 objectives".into(),
                    ));
                }
                gen_knapsack_conflicting(self.n, self.seed)
            }
            GeneratorKind::Tsp => gen_tsp(self.n, self.d, self.seed),
        }
    }
}

const MAX_VALUE: u64 = 1000;

fn half_rounded_up(weights: &[u64]) -> u64 {
    weights.iter().sum::<u64>().div_ceil(2)
}

fn check_size(n: usize, min: usize, d: usize) -> Result<()> {
    if n < min {
        return Err(Error::Configuration(format!("instance size must be at least {min}, got {n}")));
    }
    if d < 2 {
        return Err(Error::Configuration("at least two objectives are required".into()));
    }
    Ok(())
}

/// Item weights and all `d` profits uniform in `[0, 1000]`; capacity is half
/// the total weight, rounded up.
pub fn gen_knapsack_uniform(n: usize, d: usize, seed: u64) -> Result<ProblemInstance> {
    check_size(n, 1, d)?;
    let mut rng = SplitMix64::new(seed);
    let mut weights = Vec::with_capacity(n);
    let mut profits = Vec::with_capacity(n);
    for _ in 0..n {
        weights.push(rng.uniform(0, MAX_VALUE));
        profits.push((0..d).map(|_| rng.uniform(0, MAX_VALUE)).collect());
    }
    let capacity = half_rounded_up(&weights);
    ProblemInstance::knapsack(weights, capacity, profits)
}

/// Three negatively correlated profits per item: `f1` uniform in
/// `[0, 1000]`, `f2` uniform in `[0, 1000 − f1]`, `f3` uniform in
/// `[max(900 − f1 − f2, 0), min(1100 − f1 − f2, 1000 − f1)]`.
pub fn gen_knapsack_conflicting(n: usize, seed: u64) -> Result<ProblemInstance> {
    check_size(n, 1, 3)?;
    let mut rng = SplitMix64::new(seed);
    let mut weights = Vec::with_capacity(n);
    let mut profits = Vec::with_capacity(n);
    for _ in 0..n {
        weights.push(rng.uniform(0, MAX_VALUE));
        let f1 = rng.uniform(0, MAX_VALUE);
        let f2 = rng.uniform(0, MAX_VALUE - f1);
        let lo = 900u64.saturating_sub(f1 + f2);
        let hi = (1100 - f1 - f2).min(MAX_VALUE - f1);
        assert!(lo <= hi, "empty third-profit interval");
        let f3 = rng.uniform(lo, hi);
        profits.push(vec![f1, f2, f3]);
    }
    let capacity = half_rounded_up(&weights);
    ProblemInstance::knapsack(weights, capacity, profits)
}

/// Per objective, `n` integer city positions in `[0, 1000]²`; costs are the
/// rounded Euclidean distances.
pub fn gen_tsp(n: usize, d: usize, seed: u64) -> Result<ProblemInstance> {
    check_size(n, 3, d)?;
    let mut rng = SplitMix64::new(seed);
    let coords = (0..d)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let x = rng.uniform(0, MAX_VALUE) as i64;
                    let y = rng.uniform(0, MAX_VALUE) as i64;
                    (x, y)
                })
                .collect()
        })
        .collect();
    ProblemInstance::tsp_from_coordinates(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Payload;

    #[test]
    fn uniform_knapsack_ranges_and_capacity() {
        let inst = gen_knapsack_uniform(40, 3, 11).unwrap();
        let Payload::Knapsack(k) = inst.payload() else { panic!() };
        assert_eq!(k.capacity, k.weights.iter().sum::<u64>().div_ceil(2));
        assert!(k.weights.iter().all(|&w| w <= 1000));
        assert!(k.profits.iter().flatten().all(|&p| p <= 1000));
        assert_eq!(inst, gen_knapsack_uniform(40, 3, 11).unwrap());
        assert_ne!(inst, gen_knapsack_uniform(40, 3, 12).unwrap());
    }

    #[test]
    fn conflicting_profits_stay_in_their_intervals() {
        let inst = gen_knapsack_conflicting(500, 3).unwrap();
        let Payload::Knapsack(k) = inst.payload() else { panic!() };
        for p in &k.profits {
            let (f1, f2, f3) = (p[0], p[1], p[2]);
            assert!(f1 <= 1000 && f2 <= 1000 - f1);
            assert!(f3 >= 900u64.saturating_sub(f1 + f2));
            assert!(f3 <= (1100 - f1 - f2).min(1000 - f1));
            if f1 + f2 <= 900 {
                assert!((900..=1100).contains(&(f1 + f2 + f3)));
            }
            if f1 == 1000 {
                assert_eq!((f2, f3), (0, 0));
            }
        }
    }

    #[test]
    fn tsp_costs_are_symmetric() {
        let inst = gen_tsp(12, 3, 5).unwrap();
        let Payload::Tsp(t) = inst.payload() else { panic!() };
        for m in &t.costs {
            for u in 0..12 {
                assert_eq!(m[u][u], 0);
                for v in 0..12 {
                    assert_eq!(m[u][v], m[v][u]);
                }
            }
        }
        assert!(gen_tsp(2, 3, 5).is_err());
    }
}
