//! Knapsack oracles: Extended Greedy (factor 2) and a capacity-indexed DP
//! (exact).

use std::cmp::Ordering;

use num_bigint::BigInt;

use super::{narrow, Scalar};
use crate::error::{Error, Result};
use crate::problem::{KnapsackData, WeightVector};

/// Aggregated item profits `Σ_i w_i · f_i(e)` on the weight's integer
/// direction (a positive multiple of `λᵀf(e)`).
pub fn aggregate_profits(data: &KnapsackData, weight: &WeightVector) -> Vec<BigInt> {
    data.profits
        .iter()
        .map(|row| {
            row.iter()
                .zip(weight.direction())
                .map(|(&p, w)| w * p)
                .sum()
        })
        .collect()
}

/// Extended Greedy on the aggregated profits; returns ascending item indices.
pub fn extended_greedy(data: &KnapsackData, weight: &WeightVector) -> Vec<usize> {
    if let Some(bracketed) = Bracketed::new(data, weight) {
        return bracketed.greedy();
    }
    let profits = aggregate_profits(data, weight);
    match narrow(&profits) {
        Some(small) => greedy_on(&data.weights, data.capacity, &small),
        None => greedy_on(&data.weights, data.capacity, &profits),
    }
}

/// Packs items by decreasing profit/weight ratio (zero-weight items first,
/// ties by smaller index), skipping items that no longer fit, then returns
/// the better of that packing and the best single fitting item.
pub fn greedy_on<T: Scalar>(weights: &[u64], capacity: u64, profits: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| ratio_cmp(weights, profits, a, b));

    let (packed, value) = pack(weights, capacity, &order, |e| profits[e].clone());
    let mut best_single: Option<usize> = None;
    for (e, &w) in weights.iter().enumerate() {
        if w <= capacity && best_single.is_none_or(|b| profits[e] > profits[b]) {
            best_single = Some(e);
        }
    }
    finish(packed, best_single.filter(|&e| profits[e] > value))
}

/// Greedy order: `Less` means `a` is packed before `b`.
fn ratio_cmp<T: Scalar>(weights: &[u64], profits: &[T], a: usize, b: usize) -> Ordering {
    let by_ratio = match (weights[a] == 0, weights[b] == 0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => {
            let lhs = profits[b].clone() * T::from(weights[a]);
            let rhs = profits[a].clone() * T::from(weights[b]);
            lhs.cmp(&rhs)
        }
    };
    by_ratio.then(a.cmp(&b))
}

fn pack<T: Scalar>(weights: &[u64], capacity: u64, order: &[usize], profit: impl Fn(usize) -> T) -> (Vec<usize>, T) {
    let mut load = 0u64;
    let mut packed = Vec::new();
    let mut value = T::zero();
    for &e in order {
        if weights[e] <= capacity - load {
            load += weights[e];
            value = value + profit(e);
            packed.push(e);
        }
    }
    (packed, value)
}

fn finish(mut packed: Vec<usize>, better_single: Option<usize>) -> Vec<usize> {
    if let Some(e) = better_single {
        return vec![e];
    }
    packed.sort_unstable();
    packed
}

/// Extended Greedy for weights with huge integer directions. Every
/// aggregated profit `P = Σ_i w_i p_i` is bracketed as
/// `lo·2^s ≤ P ≤ hi·2^s` from the top 62 bits `t_i = w_i >> s` of the
/// direction (`lo = Σ t_i p_i`, `hi = lo + Σ p_i`). Comparisons whose
/// brackets separate are decided from them; the rest use the exact profit,
/// computed on first use. The result equals [`greedy_on`] on exact profits.
struct Bracketed<'a> {
    data: &'a KnapsackData,
    weight: &'a WeightVector,
    lo: Vec<u128>,
    hi: Vec<u128>,
    exact: Vec<std::cell::OnceCell<BigInt>>,
}

impl<'a> Bracketed<'a> {
    /// `None` when the direction is small (the plain path is cheaper) or a
    /// bracket would overflow.
    fn new(data: &'a KnapsackData, weight: &'a WeightVector) -> Option<Self> {
        use num_traits::ToPrimitive;
        let top = weight.direction().iter().map(|w| w.bits()).max().unwrap_or(0);
        if top <= 62 {
            return None;
        }
        let shift = top - 62;
        let t: Vec<u128> = weight.direction().iter().map(|w| (w >> shift).to_u128()).collect::<Option<_>>()?;
        let n = data.weights.len();
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for row in &data.profits {
            let mut l = 0u128;
            let mut width = 0u128;
            for (&p, &ti) in row.iter().zip(&t) {
                l = l.checked_add(ti.checked_mul(p as u128)?)?;
                width = width.checked_add(p as u128)?;
            }
            lo.push(l);
            hi.push(l.checked_add(width)?);
        }
        // sums over all items must not overflow either
        hi.iter().try_fold(0u128, |acc, &h| acc.checked_add(h))?;
        let exact = (0..n).map(|_| std::cell::OnceCell::new()).collect();
        Some(Bracketed { data, weight, lo, hi, exact })
    }

    fn exact(&self, e: usize) -> &BigInt {
        self.exact[e].get_or_init(|| {
            self.data.profits[e].iter().zip(self.weight.direction()).map(|(&p, w)| w * p).sum()
        })
    }

    fn ratio_cmp(&self, a: usize, b: usize) -> Ordering {
        let w = &self.data.weights;
        if a == b || w[a] == 0 || w[b] == 0 {
            // zero-weight items go first; no profits needed
            return (w[a] != 0).cmp(&(w[b] != 0)).then(a.cmp(&b));
        }
        let (wa, wb) = (w[a] as u128, w[b] as u128);
        if let (Some(l), Some(h)) = (self.lo[a].checked_mul(wb), self.hi[b].checked_mul(wa)) {
            if l > h {
                return Ordering::Less;
            }
        }
        if let (Some(l), Some(h)) = (self.lo[b].checked_mul(wa), self.hi[a].checked_mul(wb)) {
            if l > h {
                return Ordering::Greater;
            }
        }
        let lhs = self.exact(b) * w[a];
        let rhs = self.exact(a) * w[b];
        lhs.cmp(&rhs).then(a.cmp(&b))
    }

    fn greedy(&self) -> Vec<usize> {
        let weights = &self.data.weights;
        let capacity = self.data.capacity;
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| self.ratio_cmp(a, b));
        let (packed, _) = pack(weights, capacity, &order, |_| 0i128);
        let value_lo: u128 = packed.iter().map(|&e| self.lo[e]).sum();
        let value_hi: u128 = packed.iter().map(|&e| self.hi[e]).sum();

        let fitting: Vec<usize> = (0..weights.len()).filter(|&e| weights[e] <= capacity).collect();
        let best_single = match fitting.iter().map(|&e| self.lo[e]).max() {
            None => None,
            Some(floor) => {
                // items whose bracket lies below another item's floor cannot be the maximum
                let candidates: Vec<usize> = fitting.into_iter().filter(|&e| self.hi[e] >= floor).collect();
                if candidates.len() == 1 {
                    Some(candidates[0])
                } else {
                    let mut best: Option<usize> = None;
                    for e in candidates {
                        if best.is_none_or(|b| self.exact(e) > self.exact(b)) {
                            best = Some(e);
                        }
                    }
                    best
                }
            }
        };
        let better = best_single.filter(|&e| {
            if self.lo[e] > value_hi {
                true
            } else if self.hi[e] <= value_lo {
                false
            } else {
                let value: BigInt = packed.iter().map(|&e| self.exact(e)).sum();
                *self.exact(e) > value
            }
        });
        finish(packed, better)
    }
}

/// Exact weighted-sum optimum by dynamic programming over capacities.
pub fn exact_dp(data: &KnapsackData, weight: &WeightVector, capacity_limit: u64) -> Result<Vec<usize>> {
    if data.capacity > capacity_limit {
        return Err(Error::Resource(format!(
            "capacity {} exceeds the DP table limit {capacity_limit}; use a smaller instance",
            data.capacity
        )));
    }
    let profits = aggregate_profits(data, weight);
    Ok(match narrow(&profits) {
        Some(small) => dp_on(&data.weights, data.capacity, &small),
        None => dp_on(&data.weights, data.capacity, &profits),
    })
}

pub fn dp_on<T: Scalar>(weights: &[u64], capacity: u64, profits: &[T]) -> Vec<usize> {
    let cap = capacity as usize;
    let n = weights.len();
    let mut best = vec![T::zero(); cap + 1];
    // take[e * (cap+1) + c]: item e improved the table entry for capacity c
    let mut take = vec![false; n * (cap + 1)];
    for e in 0..n {
        let w = weights[e] as usize;
        if w > cap || profits[e].is_zero() {
            continue;
        }
        for c in (w..=cap).rev() {
            let candidate = best[c - w].clone() + profits[e].clone();
            if candidate > best[c] {
                best[c] = candidate;
                take[e * (cap + 1) + c] = true;
            }
        }
    }
    let mut items = Vec::new();
    let mut c = cap;
    for e in (0..n).rev() {
        if take[e * (cap + 1) + c] {
            items.push(e);
            c -= weights[e] as usize;
        }
    }
    items.reverse();
    items
}
