//! Approximation parameters and the two rounding schemes that confine oracle
//! calls to a finite multiplicative grid of weight vectors.
//!
//! Grid weights are normalized vectors whose components are integer powers
//! of `1 + ε′`. `boundary_round` first pulls a weight away from the boundary
//! of the weight set (into the compact region), then `grid_round` snaps it up
//! to the grid.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{factorial, rational_pow, Rational};
use crate::problem::WeightVector;
use crate::scalarization::Bounds;

/// Integer powers of a rational base `p/q > 1` (lowest terms) with cached
/// powers of `p` and `q`.
#[derive(Clone, Debug)]
pub struct PowerTable {
    p: BigInt,
    q: BigInt,
    p_pows: Vec<BigInt>,
    q_pows: Vec<BigInt>,
}

impl PowerTable {
    pub fn new(base: &Rational, max_exponent: usize) -> Self {
        assert!(*base > Rational::one(), "power table base must exceed 1");
        let (p, q) = (base.numer().clone(), base.denom().clone());
        let pows = |b: &BigInt| {
            let mut v = Vec::with_capacity(max_exponent + 1);
            v.push(BigInt::one());
            for k in 1..=max_exponent {
                let next = &v[k - 1] * b;
                v.push(next);
            }
            v
        };
        PowerTable { p_pows: pows(&p), q_pows: pows(&q), p, q }
    }

    pub fn base(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }

    fn p_pow(&self, k: usize) -> BigInt {
        self.p_pows.get(k).cloned().unwrap_or_else(|| num_traits::pow(self.p.clone(), k))
    }

    fn q_pow(&self, k: usize) -> BigInt {
        self.q_pows.get(k).cloned().unwrap_or_else(|| num_traits::pow(self.q.clone(), k))
    }

    /// `num/den ≤ base^a`, exactly.
    pub fn le_power(&self, num: &BigInt, den: &BigInt, a: i64) -> bool {
        let k = a.unsigned_abs() as usize;
        if a >= 0 {
            num * self.q_pow(k) <= den * self.p_pow(k)
        } else {
            num * self.p_pow(k) <= den * self.q_pow(k)
        }
    }

    /// `base^a` as a rational.
    pub fn power(&self, a: i64) -> Rational {
        let k = a.unsigned_abs() as usize;
        if a >= 0 {
            Rational::new(self.p_pow(k), self.q_pow(k))
        } else {
            Rational::new(self.q_pow(k), self.p_pow(k))
        }
    }

    /// Smallest `a` in `(lo, hi]` with `num/den ≤ base^(stride·a)`, given
    /// that the inequality fails at `lo` and holds at `hi`.
    fn ceil_exponent(&self, num: &BigInt, den: &BigInt, stride: i64, mut lo: i64, mut hi: i64) -> i64 {
        debug_assert!(!self.le_power(num, den, stride * lo) && self.le_power(num, den, stride * hi));
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.le_power(num, den, stride * mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Canonical exponent tuple of a grid weight: raw exponents shifted so the
/// smallest is zero. Shifted tuples describe the same normalized weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridKey(Vec<i64>);

impl GridKey {
    pub fn new(raw: &[i64]) -> Self {
        let min = raw.iter().copied().min().unwrap_or(0);
        GridKey(raw.iter().map(|a| a - min).collect())
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn zero(d: usize) -> Self {
        GridKey(vec![0; d])
    }
}

impl std::fmt::Display for GridKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Which base `grid_round` rounds with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridStep {
    /// `1 + ε′`, used after a boundary rounding.
    EpsilonPrime,
    /// `(1 + ε′)²`, used for weights that were already compact.
    EpsilonGrid,
}

impl GridStep {
    fn stride(self) -> i64 {
        match self {
            GridStep::EpsilonPrime => 1,
            GridStep::EpsilonGrid => 2,
        }
    }
}

/// Every constant the approximation algorithms derive from `ε`, `α`, the
/// instance bounds and `d`.
#[derive(Clone, Debug)]
pub struct ApproxParams {
    pub epsilon: Rational,
    pub epsilon_prime: Rational,
    pub epsilon_grid: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub c: Rational,
    pub lb: Rational,
    pub a_min: i64,
    pub a_max: i64,
    pub d: usize,
    pub bounds: Bounds,
    powers: PowerTable,
}

/// Bits of granularity in the rational stand-in for `√(1+ε) − 1`.
const EPSILON_PRIME_BITS: u32 = 32;

/// Largest `q / 2^bits − 1` with `(q / 2^bits)² ≤ 1 + ε`.
pub fn epsilon_prime_for(epsilon: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << (2 * bits);
    let scaled = ((Rational::one() + epsilon) * Rational::from_integer(scale)).floor().to_integer();
    let q = scaled.sqrt();
    Rational::new(q, BigInt::one() << bits) - Rational::one()
}

pub fn derive_parameters(epsilon: &Rational, alpha: &Rational, bounds: &Bounds, d: usize) -> Result<ApproxParams> {
    if !(epsilon.is_positive() && *epsilon < Rational::one()) {
        return Err(Error::Contract(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let eps_prime = epsilon_prime_for(epsilon, EPSILON_PRIME_BITS);
    if !eps_prime.is_positive() {
        return Err(Error::Contract(format!("epsilon {epsilon} is too small to resolve")));
    }
    ApproxParams::from_parts(epsilon, &eps_prime, alpha, bounds, d)
}

impl ApproxParams {
    /// Builds the parameters for an explicitly chosen `ε′`.
    pub fn from_parts(
        epsilon: &Rational,
        epsilon_prime: &Rational,
        alpha: &Rational,
        bounds: &Bounds,
        d: usize,
    ) -> Result<ApproxParams> {
        if d < 2 {
            return Err(Error::Contract("at least two objectives are required".into()));
        }
        if *alpha < Rational::one() {
            return Err(Error::Contract(format!("alpha must be at least 1, got {alpha}")));
        }
        if !bounds.lb.is_positive() || bounds.lb > bounds.ub {
            return Err(Error::Contract("bounds must satisfy 0 < LB <= UB".into()));
        }
        if !(epsilon_prime.is_positive() && *epsilon_prime < Rational::one()) {
            return Err(Error::Contract("epsilon' must lie in (0, 1)".into()));
        }
        let one = Rational::one();
        let base = &one + epsilon_prime;
        let epsilon_grid = &base * &base - &one;
        let beta = &base * alpha;
        let c = epsilon_prime * &bounds.lb / (&beta * &bounds.ub);
        let lb = rational_pow(&c, d as i64 - 1) / Rational::from_integer(factorial(d));

        // a_min: largest a with base^a ≤ lb (negative since lb < 1)
        let le = |a: i64, x: &Rational| rational_pow(&base, a) <= *x;
        let mut lo = -1i64;
        while !le(lo, &lb) {
            lo *= 2;
        }
        let mut hi = lo / 2; // base^hi > lb
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if le(mid, &lb) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a_min = lo;

        // a_max: smallest a with base^a ≥ 1 − (d−1)·lb (at most 0)
        let top = &one - Rational::from_integer(BigInt::from(d - 1)) * &lb;
        let mut a_max = 0i64;
        while rational_pow(&base, a_max - 1) >= top {
            a_max -= 1;
        }

        let range = (a_max + 1 - a_min) as usize;
        let powers = PowerTable::new(&base, range.max(a_min.unsigned_abs() as usize + 1) + 1);
        Ok(ApproxParams {
            epsilon: epsilon.clone(),
            epsilon_prime: epsilon_prime.clone(),
            epsilon_grid,
            alpha: alpha.clone(),
            beta,
            c,
            lb,
            a_min,
            a_max,
            d,
            bounds: bounds.clone(),
            powers,
        })
    }

    /// The final guarantee `(1 + ε) · α`.
    pub fn guarantee(&self) -> Rational {
        (Rational::one() + &self.epsilon) * &self.alpha
    }

    pub fn delta(&self, step: GridStep) -> Rational {
        match step {
            GridStep::EpsilonPrime => self.epsilon_prime.clone(),
            GridStep::EpsilonGrid => self.epsilon_grid.clone(),
        }
    }

    pub fn powers(&self) -> &PowerTable {
        &self.powers
    }

    /// Largest canonical key component, `a_max + 1 − a_min`.
    pub fn key_range(&self) -> i64 {
        self.a_max + 1 - self.a_min
    }

    /// Number of canonical keys with components in `[0, key_range]`.
    pub fn grid_key_count(&self) -> BigInt {
        let r = BigInt::from(self.key_range());
        num_traits::pow(&r + 1, self.d) - num_traits::pow(r, self.d)
    }

    /// The cap `(a_max − a_min + 2)^d` on distinct keys.
    pub fn key_cap(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.a_max - self.a_min + 2), self.d)
    }

    /// The normalized weight whose components are `(1+ε′)^{b_i}` for the
    /// key's exponents `b`.
    pub fn grid_weight(&self, key: &GridKey) -> WeightVector {
        let top = key.0.iter().copied().max().unwrap_or(0);
        let dir = key
            .0
            .iter()
            .map(|&b| self.powers.p_pow(b as usize) * self.powers.q_pow((top - b) as usize))
            .collect();
        // min exponent 0 and max exponent `top` make the direction primitive
        WeightVector::from_primitive_direction(dir)
    }
}

/// Rounds every component up to the next power of `1 + δ`: finds the integer
/// `a_i` with `(1+δ)^{a_i − 1} < λ_i ≤ (1+δ)^{a_i}`. Returns the exponents and
/// the normalized rounded vector. Components must be positive.
pub fn round_to_powers(weight: &WeightVector, delta: &Rational) -> Result<(Vec<i64>, WeightVector)> {
    if !delta.is_positive() {
        return Err(Error::Contract("delta must be positive".into()));
    }
    if weight.direction().iter().any(Zero::is_zero) {
        return Err(Error::Contract("cannot round a zero component to a power".into()));
    }
    let base = Rational::one() + delta;
    let table = PowerTable::new(&base, 64);
    let total = weight.total();
    let exps: Vec<i64> = weight
        .direction()
        .iter()
        .map(|num| {
            let mut lo = -1i64;
            while table.le_power(num, total, lo) {
                lo *= 2;
            }
            table.ceil_exponent(num, total, 1, lo, 0)
        })
        .collect();
    let rounded: Vec<Rational> = exps.iter().map(|&a| table.power(a)).collect();
    let sum: Rational = rounded.iter().sum();
    let normalized: Vec<Rational> = rounded.iter().map(|r| r / &sum).collect();
    Ok((exps, WeightVector::new(&normalized)?))
}

/// Rounds a compact weight up to the grid with base `1+ε′` or `(1+ε′)²`.
/// Returns the grid weight and its key on the common `1+ε′` lattice.
pub fn grid_round(weight: &WeightVector, step: GridStep, params: &ApproxParams) -> Result<(WeightVector, GridKey)> {
    let raw = grid_exponents(weight, step, params)?;
    let key = GridKey::new(&raw);
    Ok((params.grid_weight(&key), key))
}

/// Raw lattice exponents (already multiplied by the step's stride).
pub fn grid_exponents(weight: &WeightVector, step: GridStep, params: &ApproxParams) -> Result<Vec<i64>> {
    if weight.dim() != params.d {
        return Err(Error::Contract("weight dimension differs from the parameters'".into()));
    }
    let total = weight.total();
    let (lb_num, lb_den) = (params.lb.numer(), params.lb.denom());
    let stride = step.stride();
    // base^(stride·lo) ≤ base^(a_min − 1) < lb ≤ λ_i
    let lo = (params.a_min - 1).div_euclid(stride);
    weight
        .direction()
        .iter()
        .map(|num| {
            if num * lb_den < total * lb_num {
                return Err(Error::Contract(
                    "weight component below lb; boundary-round the weight first".into(),
                ));
            }
            Ok(stride * params.powers.ceil_exponent(num, total, stride, lo, 0))
        })
        .collect()
}

/// The intermediate states of a boundary rounding, in sorted coordinates.
#[derive(Clone, Debug)]
pub struct BoundaryTrace {
    /// `order[j]` is the original index of the `j`-th smallest component.
    pub order: Vec<usize>,
    pub sorted_input: Vec<Rational>,
    /// The working vector after each rescaling step, with the step's `k`.
    pub steps: Vec<(usize, Vec<Rational>)>,
    /// Final unnormalized working vector (sorted coordinates).
    pub sorted_output: Vec<Rational>,
    /// Normalized output in original coordinates.
    pub output: Vec<Rational>,
}

impl BoundaryTrace {
    pub fn rounded(&self) -> bool {
        !self.steps.is_empty()
    }
}

/// Boundary rounding on raw components (any nonnegative, nonzero vector).
pub fn boundary_round_traced(lambda: &[Rational], c: &Rational) -> BoundaryTrace {
    let d = lambda.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| lambda[a].cmp(&lambda[b]).then(a.cmp(&b)));
    let sorted_input: Vec<Rational> = order.iter().map(|&i| lambda[i].clone()).collect();
    let mut work = sorted_input.clone();
    let mut steps = Vec::new();
    let mut prefix = Rational::zero();
    for k in 1..d {
        prefix += &work[k - 1];
        let target = c * &work[k];
        if prefix < target {
            if prefix.is_positive() {
                let scale = &target / &prefix;
                for v in &mut work[..k] {
                    *v = &*v * &scale;
                }
            } else {
                let share = &target / Rational::from_integer(BigInt::from(k));
                for v in &mut work[..k] {
                    *v = share.clone();
                }
            }
            prefix = target;
            steps.push((k, work.clone()));
        }
    }
    let sum: Rational = work.iter().sum();
    let mut output = vec![Rational::zero(); d];
    for (j, &i) in order.iter().enumerate() {
        output[i] = &work[j] / &sum;
    }
    BoundaryTrace { order, sorted_input, steps, sorted_output: work, output }
}

/// Pulls `weight` into the compact region. Returns the weight unchanged
/// (and `false`) when it already lies there.
pub fn boundary_round(weight: &WeightVector, params: &ApproxParams) -> (WeightVector, bool) {
    boundary_round_with(weight, &params.c)
}

pub fn boundary_round_with(weight: &WeightVector, c: &Rational) -> (WeightVector, bool) {
    let trace = boundary_round_traced(&weight.components(), c);
    if !trace.rounded() {
        return (weight.clone(), false);
    }
    let rounded = WeightVector::new(&trace.output).expect("normalized output lies in the weight set");
    (rounded, true)
}

/// Zeroes the components whose indices are in `set`.
pub fn project(lambda: &[Rational], set: &[usize]) -> Result<Vec<Rational>> {
    let d = lambda.len();
    let mut hit = vec![false; d];
    for &i in set {
        if i >= d {
            return Err(Error::Contract(format!("index {i} out of range")));
        }
        hit[i] = true;
    }
    let count = hit.iter().filter(|&&h| h).count();
    if count == 0 || count == d {
        return Err(Error::Contract("projection set must be nonempty and proper".into()));
    }
    Ok(lambda
        .iter()
        .zip(hit)
        .map(|(v, h)| if h { Rational::zero() } else { v.clone() })
        .collect())
}
