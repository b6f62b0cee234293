//! Symmetric TSP oracles on aggregated cost matrices: Christofides (factor
//! 3/2 on metric costs), double tree (factor 2) and Held-Karp (exact).

use num_bigint::BigInt;

use super::form::{FormBasis, LinearForm};
use super::matching::min_cost_perfect_matching;
use super::{narrow, Scalar};
use crate::error::{Error, Result};
use crate::problem::{TspData, WeightVector};

/// Row-major `n × n` aggregated costs `Σ_i w_i · cost_i(u, v)`.
pub fn aggregate_costs(data: &TspData, weight: &WeightVector) -> Vec<BigInt> {
    let n = data.cities();
    let mut out = vec![BigInt::from(0); n * n];
    for (m, w) in data.costs.iter().zip(weight.direction()) {
        if w.sign() == num_bigint::Sign::NoSign {
            continue;
        }
        for u in 0..n {
            for v in 0..n {
                out[u * n + v] += w * m[u][v];
            }
        }
    }
    out
}

fn require_cities(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain(format!("a tour needs at least 3 cities, got {n}")));
    }
    Ok(())
}

/// A single-objective tour algorithm, generic over the cost type.
trait TourAlgorithm {
    fn run<T: Scalar>(&self, n: usize, cost: &[T]) -> Vec<usize>;
}

struct Christofides;
struct DoubleTree;
struct HeldKarp;

impl TourAlgorithm for Christofides {
    fn run<T: Scalar>(&self, n: usize, cost: &[T]) -> Vec<usize> {
        christofides_on(n, cost)
    }
}

impl TourAlgorithm for DoubleTree {
    fn run<T: Scalar>(&self, n: usize, cost: &[T]) -> Vec<usize> {
        double_tree_on(n, cost)
    }
}

impl TourAlgorithm for HeldKarp {
    fn run<T: Scalar>(&self, n: usize, cost: &[T]) -> Vec<usize> {
        held_karp_on(n, cost)
    }
}

fn dispatch(data: &TspData, weight: &WeightVector, algorithm: impl TourAlgorithm) -> Vec<usize> {
    let n = data.cities();
    let huge = weight.direction().iter().any(|w| w.bits() > 62);
    if let Some(basis) = FormBasis::new(weight.direction()).filter(|_| huge) {
        // keep costs symbolic in the direction
        let mut c = vec![0i128; data.costs.len()];
        let costs: Vec<LinearForm> = (0..n * n)
            .map(|uv| {
                for (slot, m) in c.iter_mut().zip(&data.costs) {
                    *slot = m[uv / n][uv % n] as i128;
                }
                basis.form(&c)
            })
            .collect();
        return algorithm.run(n, &costs);
    }
    let costs = aggregate_costs(data, weight);
    // The narrowing check bounds the sum of all entries, which also bounds
    // any tour or matching the algorithms add up.
    match narrow(&costs) {
        Some(c) => algorithm.run(n, &c),
        None => algorithm.run(n, &costs),
    }
}

pub fn christofides(data: &TspData, weight: &WeightVector) -> Result<Vec<usize>> {
    require_cities(data.cities())?;
    Ok(dispatch(data, weight, Christofides))
}

pub fn double_tree(data: &TspData, weight: &WeightVector) -> Result<Vec<usize>> {
    require_cities(data.cities())?;
    Ok(dispatch(data, weight, DoubleTree))
}

pub fn held_karp(data: &TspData, weight: &WeightVector, limit: usize) -> Result<Vec<usize>> {
    let n = data.cities();
    require_cities(n)?;
    if n > limit {
        return Err(Error::Resource(format!(
            "Held-Karp is limited to {limit} cities, instance has {n}"
        )));
    }
    Ok(dispatch(data, weight, HeldKarp))
}

/// Prim's algorithm on the complete graph; returns `parent[v]` with
/// `parent[0] = None`. Ties go to the smaller index.
pub fn minimum_spanning_tree<T: Scalar>(n: usize, cost: &[T]) -> Vec<Option<usize>> {
    let mut parent = vec![None; n];
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<T>> = vec![None; n];
    best[0] = Some(T::zero());
    for _ in 0..n {
        let mut pick: Option<usize> = None;
        for v in 0..n {
            if in_tree[v] || best[v].is_none() {
                continue;
            }
            if pick.is_none_or(|p| best[v] < best[p]) {
                pick = Some(v);
            }
        }
        let u = pick.expect("complete graph is connected");
        in_tree[u] = true;
        for v in 0..n {
            if !in_tree[v] {
                let c = &cost[u * n + v];
                if best[v].as_ref().is_none_or(|b| c < b) {
                    best[v] = Some(c.clone());
                    parent[v] = Some(u);
                }
            }
        }
    }
    parent
}

fn tree_edges(parent: &[Option<usize>]) -> Vec<(usize, usize)> {
    parent
        .iter()
        .enumerate()
        .filter_map(|(v, p)| p.map(|u| (u, v)))
        .collect()
}

/// Vertices of odd degree in an edge multiset.
pub fn odd_vertices(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut degree = vec![0usize; n];
    for &(u, v) in edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    (0..n).filter(|&v| degree[v] % 2 == 1).collect()
}

/// Hierholzer's algorithm on a connected multigraph with even degrees.
pub fn euler_circuit(n: usize, edges: &[(usize, usize)], start: usize) -> Vec<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    for list in &mut adj {
        list.reverse();
    }
    let mut used = vec![false; edges.len()];
    let mut stack = vec![start];
    let mut circuit = Vec::with_capacity(edges.len() + 1);
    while let Some(&u) = stack.last() {
        while let Some(&(_, id)) = adj[u].last() {
            if used[id] {
                adj[u].pop();
            } else {
                break;
            }
        }
        match adj[u].pop() {
            Some((v, id)) => {
                used[id] = true;
                stack.push(v);
            }
            None => {
                circuit.push(u);
                stack.pop();
            }
        }
    }
    circuit.reverse();
    circuit
}

/// Keeps the first occurrence of every city.
pub fn shortcut(walk: &[usize], n: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    walk.iter()
        .copied()
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect()
}

pub fn christofides_on<T: Scalar>(n: usize, cost: &[T]) -> Vec<usize> {
    let parent = minimum_spanning_tree(n, cost);
    let mut edges = tree_edges(&parent);
    let odd = odd_vertices(n, &edges);
    debug_assert!(odd.len().is_multiple_of(2));
    let pairs = min_cost_perfect_matching(odd.len(), |a, b| cost[odd[a] * n + odd[b]].clone());
    edges.extend(pairs.into_iter().map(|(a, b)| (odd[a], odd[b])));
    let circuit = euler_circuit(n, &edges, 0);
    let tour = shortcut(&circuit, n);
    debug_assert_eq!(tour.len(), n);
    tour
}

pub fn double_tree_on<T: Scalar>(n: usize, cost: &[T]) -> Vec<usize> {
    let parent = minimum_spanning_tree(n, cost);
    let mut children = vec![Vec::new(); n];
    for (v, p) in parent.iter().enumerate() {
        if let Some(u) = p {
            children[*u].push(v);
        }
    }
    // preorder walk = shortcut of the doubled-tree Euler tour
    let mut tour = Vec::with_capacity(n);
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        tour.push(u);
        stack.extend(children[u].iter().rev());
    }
    tour
}

pub fn held_karp_on<T: Scalar>(n: usize, cost: &[T]) -> Vec<usize> {
    // dp[mask][v]: cheapest path from city 0 through the cities of mask
    // (subsets of 1..n, bit v-1) ending in v
    let m = n - 1;
    let states = 1usize << m;
    let mut dp: Vec<Option<T>> = vec![None; states * m];
    let mut from = vec![usize::MAX; states * m];
    for v in 0..m {
        dp[(1 << v) * m + v] = Some(cost[v + 1].clone());
    }
    for mask in 1..states {
        for last in 0..m {
            let Some(base) = dp[mask * m + last].clone() else { continue };
            for next in 0..m {
                if mask >> next & 1 == 1 {
                    continue;
                }
                let nm = mask | 1 << next;
                let cand = base.clone() + cost[(last + 1) * n + next + 1].clone();
                let slot = &mut dp[nm * m + next];
                if slot.as_ref().is_none_or(|s| cand < *s) {
                    *slot = Some(cand);
                    from[nm * m + next] = last;
                }
            }
        }
    }
    let full = states - 1;
    let mut best: Option<(T, usize)> = None;
    for last in 0..m {
        let total = dp[full * m + last].clone().unwrap() + cost[(last + 1) * n].clone();
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, last));
        }
    }
    let (_, mut last) = best.unwrap();
    let mut mask = full;
    let mut rev = Vec::with_capacity(n);
    while mask != 0 {
        rev.push(last + 1);
        let prev = from[mask * m + last];
        mask &= !(1 << last);
        last = prev;
    }
    let mut tour = vec![0];
    tour.extend(rev.into_iter().rev());
    tour
}
