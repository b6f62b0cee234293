//! Domain types shared by every other module: optimization sense, objective
//! and weight vectors, problem instances and solution records.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// True when `a` is at least as good as `b` under this sense.
    pub fn at_least_as_good(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Sense::Minimize => a <= b,
            Sense::Maximize => a >= b,
        }
    }

    /// Picks the better of two values (the first one on ties).
    pub fn best<'a>(self, a: &'a Rational, b: &'a Rational) -> &'a Rational {
        if self.at_least_as_good(a, b) {
            a
        } else {
            b
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        }
    }

    pub fn parse(s: &str) -> Result<Sense> {
        match s {
            "minimize" | "min" => Ok(Sense::Minimize),
            "maximize" | "max" => Ok(Sense::Maximize),
            other => Err(Error::Parse(format!("unknown sense {other:?}"))),
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The image `f(x)` of a solution: one nonnegative exact value per objective.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectiveVector(Vec<Rational>);

impl ObjectiveVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.iter().any(Signed::is_negative) {
            return Err(Error::Contract("objective values must be nonnegative".into()));
        }
        Ok(ObjectiveVector(values))
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    /// Componentwise multiplication by a positive scalar.
    pub fn scaled(&self, t: &Rational) -> ObjectiveVector {
        ObjectiveVector(self.0.iter().map(|v| v * t).collect())
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A point of the weight set: nonnegative components summing to one.
///
/// Stored as a primitive nonnegative integer direction `w` (gcd 1) together
/// with its sum, so `λ_i = w_i / Σw`. The representation is canonical, which
/// makes equality and hashing exact, and it keeps grid weights (whose
/// components are large powers) free of per-component gcd reductions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    direction: Vec<BigInt>,
    total: BigInt,
}

impl WeightVector {
    /// Builds a weight vector from components that already sum to one.
    pub fn new(components: &[Rational]) -> Result<Self> {
        let sum: Rational = components.iter().sum();
        if !sum.is_one() {
            return Err(Error::Contract(format!("weight components sum to {sum}, not 1")));
        }
        Self::normalized(components)
    }

    /// Normalizes any nonnegative, nonzero vector onto the weight set.
    pub fn normalized(components: &[Rational]) -> Result<Self> {
        let lcm = crate::numeric::common_denominator(components);
        let direction: Vec<BigInt> = components
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        Self::from_direction(direction)
    }

    /// Normalizes a nonnegative, nonzero integer direction.
    pub fn from_direction(mut direction: Vec<BigInt>) -> Result<Self> {
        if direction.is_empty() {
            return Err(Error::Contract("weight vector must have at least one component".into()));
        }
        if direction.iter().any(Signed::is_negative) {
            return Err(Error::Contract("weight components must be nonnegative".into()));
        }
        let g = direction.iter().fold(BigInt::zero(), |acc, w| acc.gcd(w));
        if g.is_zero() {
            return Err(Error::Contract("weight vector must not be zero".into()));
        }
        if !g.is_one() {
            for w in &mut direction {
                *w /= &g;
            }
        }
        let total = direction.iter().sum();
        Ok(WeightVector { direction, total })
    }

    /// Wraps a direction the caller knows to be nonnegative, nonzero and
    /// primitive (gcd 1). Not checked: the gcd of grid-sized integers costs
    /// more than the oracle call that follows.
    pub(crate) fn from_primitive_direction(direction: Vec<BigInt>) -> Self {
        let total = direction.iter().sum();
        WeightVector { direction, total }
    }

    pub fn uniform(d: usize) -> Self {
        WeightVector::from_primitive_direction(vec![BigInt::one(); d])
    }

    /// The `i`-th unit vector.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut dir = vec![BigInt::zero(); d];
        dir[i] = BigInt::one();
        WeightVector::from_primitive_direction(dir)
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn direction(&self) -> &[BigInt] {
        &self.direction
    }

    pub fn total(&self) -> &BigInt {
        &self.total
    }

    pub fn component(&self, i: usize) -> Rational {
        Rational::new(self.direction[i].clone(), self.total.clone())
    }

    pub fn components(&self) -> Vec<Rational> {
        (0..self.dim()).map(|i| self.component(i)).collect()
    }

    /// Lossy view for rendering.
    pub fn to_f64s(&self) -> Vec<f64> {
        self.components().iter().map(crate::numeric::to_f64).collect()
    }

    /// `Σ w_i · y_i` on the unnormalized direction, i.e. `Σw · λᵀy`.
    pub fn scaled_value(&self, y: &ObjectiveVector) -> Rational {
        self.direction
            .iter()
            .zip(y.values())
            .filter(|(w, _)| !w.is_zero())
            .map(|(w, v)| v * w)
            .sum()
    }
}

impl Ord for WeightVector {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.direction.iter().zip(&other.direction) {
            let ord = (a * &other.total).cmp(&(b * &self.total));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl PartialOrd for WeightVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.component(i))?;
        }
        write!(f, ")")
    }
}

/// The exact weighted sum `λᵀy`.
pub fn weighted_value(weight: &WeightVector, y: &ObjectiveVector) -> Result<Rational> {
    if weight.dim() != y.dim() {
        return Err(Error::Contract(format!(
            "weight has dimension {} but objective vector has {}",
            weight.dim(),
            y.dim()
        )));
    }
    Ok(weight.scaled_value(y) / Rational::from_integer(weight.total.clone()))
}

/// Pareto dominance under `sense`: `y` is at least as good everywhere and
/// differs somewhere.
pub fn dominates(y: &ObjectiveVector, other: &ObjectiveVector, sense: Sense) -> Result<bool> {
    if y.dim() != other.dim() {
        return Err(Error::Contract("objective vectors differ in dimension".into()));
    }
    Ok(y != other
        && y.values()
            .iter()
            .zip(other.values())
            .all(|(a, b)| sense.at_least_as_good(a, b)))
}

/// Knapsack data: `profits[e][i]` is the `i`-th profit of item `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackData {
    pub weights: Vec<u64>,
    pub capacity: u64,
    pub profits: Vec<Vec<u64>>,
}

/// Symmetric TSP data with one cost matrix per objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TspData {
    /// `coordinates[i][v]`: position of city `v` in objective `i`, if the
    /// costs were derived from coordinates.
    pub coordinates: Option<Vec<Vec<(i64, i64)>>>,
    /// `costs[i][u][v]`.
    pub costs: Vec<Vec<Vec<u64>>>,
}

impl TspData {
    pub fn cities(&self) -> usize {
        self.costs.first().map_or(0, Vec::len)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Knapsack(KnapsackData),
    Tsp(TspData),
}

/// A multiobjective instance; the feasible set is implicit in the payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    sense: Sense,
    objectives: usize,
    payload: Payload,
}

/// Nearest-integer Euclidean distance, computed without floating point.
pub fn rounded_distance(a: (i64, i64), b: (i64, i64)) -> u64 {
    let dx = (a.0 - b.0).unsigned_abs() as u128;
    let dy = (a.1 - b.1).unsigned_abs() as u128;
    let sq = dx * dx + dy * dy;
    let k = sq.isqrt();
    // round(sqrt(sq)) is k + 1 exactly when sq > k² + k (since sq is integral)
    if sq > k * k + k {
        (k + 1) as u64
    } else {
        k as u64
    }
}

impl ProblemInstance {
    /// A maximization knapsack instance with `profits[e].len()` objectives.
    pub fn knapsack(weights: Vec<u64>, capacity: u64, profits: Vec<Vec<u64>>) -> Result<Self> {
        if weights.len() != profits.len() {
            return Err(Error::Contract("one profit row per item is required".into()));
        }
        let d = profits.first().map_or(0, Vec::len);
        if !profits.is_empty() && d < 2 {
            return Err(Error::Contract("at least two objectives are required".into()));
        }
        if profits.iter().any(|p| p.len() != d) {
            return Err(Error::Contract("all items need the same number of profits".into()));
        }
        if profits.is_empty() {
            return Err(Error::Contract("knapsack instance needs at least one item".into()));
        }
        Ok(ProblemInstance {
            sense: Sense::Maximize,
            objectives: d,
            payload: Payload::Knapsack(KnapsackData { weights, capacity, profits }),
        })
    }

    /// A minimization TSP instance whose `i`-th cost is the rounded
    /// Euclidean distance between the cities' `i`-th coordinates.
    pub fn tsp_from_coordinates(coordinates: Vec<Vec<(i64, i64)>>) -> Result<Self> {
        let costs = coordinates
            .iter()
            .map(|pts| {
                pts.iter()
                    .map(|&a| pts.iter().map(|&b| rounded_distance(a, b)).collect())
                    .collect()
            })
            .collect();
        let n = coordinates.first().map_or(0, Vec::len);
        if coordinates.iter().any(|c| c.len() != n) {
            return Err(Error::Contract("every objective needs coordinates for all cities".into()));
        }
        let mut inst = Self::tsp_from_costs(costs)?;
        if let Payload::Tsp(t) = &mut inst.payload {
            t.coordinates = Some(coordinates);
        }
        Ok(inst)
    }

    /// A minimization TSP instance from explicit cost matrices.
    pub fn tsp_from_costs(costs: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        let d = costs.len();
        if d < 2 {
            return Err(Error::Contract("at least two objectives are required".into()));
        }
        let n = costs[0].len();
        for m in &costs {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::Contract("cost matrices must be n×n".into()));
            }
            for u in 0..n {
                if m[u][u] != 0 {
                    return Err(Error::Contract("cost matrices need a zero diagonal".into()));
                }
                for v in 0..u {
                    if m[u][v] != m[v][u] {
                        return Err(Error::Contract("cost matrices must be symmetric".into()));
                    }
                }
            }
        }
        Ok(ProblemInstance {
            sense: Sense::Minimize,
            objectives: d,
            payload: Payload::Tsp(TspData { coordinates: None, costs }),
        })
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objectives(&self) -> usize {
        self.objectives
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    /// Number of items or cities.
    pub fn size(&self) -> usize {
        match &self.payload {
            Payload::Knapsack(k) => k.weights.len(),
            Payload::Tsp(t) => t.cities(),
        }
    }

    pub fn problem_name(&self) -> &'static str {
        match self.payload {
            Payload::Knapsack(_) => "knapsack",
            Payload::Tsp(_) => "tsp",
        }
    }

    /// Exact objective vector of a feasible encoding.
    pub fn evaluate(&self, encoding: &Encoding) -> Result<ObjectiveVector> {
        match (&self.payload, encoding) {
            (Payload::Knapsack(k), Encoding::Items(items)) => {
                let n = k.weights.len();
                let mut seen = vec![false; n];
                let mut load: u128 = 0;
                let mut value = vec![0u128; self.objectives];
                for &e in items {
                    if e >= n {
                        return Err(Error::Feasibility(format!("item {e} does not exist")));
                    }
                    if std::mem::replace(&mut seen[e], true) {
                        return Err(Error::Feasibility(format!("item {e} packed twice")));
                    }
                    load += k.weights[e] as u128;
                    for (acc, &p) in value.iter_mut().zip(&k.profits[e]) {
                        *acc += p as u128;
                    }
                }
                if load > k.capacity as u128 {
                    return Err(Error::Feasibility(format!(
                        "capacity exceeded: load {load} > capacity {}",
                        k.capacity
                    )));
                }
                Ok(ObjectiveVector(
                    value.into_iter().map(|v| Rational::from_integer(v.into())).collect(),
                ))
            }
            (Payload::Tsp(t), Encoding::Tour(tour)) => {
                let n = t.cities();
                if tour.len() != n {
                    return Err(Error::Feasibility(format!(
                        "tour visits {} cities, instance has {n}",
                        tour.len()
                    )));
                }
                let mut seen = vec![false; n];
                for &v in tour {
                    if v >= n || std::mem::replace(&mut seen[v], true) {
                        return Err(Error::Feasibility("tour is not a Hamiltonian cycle".into()));
                    }
                }
                let value = t
                    .costs
                    .iter()
                    .map(|m| {
                        let total: u128 = (0..n)
                            .map(|i| m[tour[i]][tour[(i + 1) % n]] as u128)
                            .sum();
                        Rational::from_integer(total.into())
                    })
                    .collect();
                Ok(ObjectiveVector(value))
            }
            _ => Err(Error::Feasibility("encoding does not match the problem type".into())),
        }
    }

    /// Checks that a record's cached image matches a fresh evaluation.
    pub fn check_record(&self, record: &SolutionRecord) -> Result<()> {
        let image = self.evaluate(&record.encoding)?;
        if image != record.image {
            return Err(Error::Internal(format!(
                "cached image {} differs from evaluation {}",
                record.image, image
            )));
        }
        Ok(())
    }
}

/// Problem-specific solution encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// Indices of packed knapsack items (ascending).
    Items(Vec<usize>),
    /// A city permutation; the tour returns to its first city.
    Tour(Vec<usize>),
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self {
            Encoding::Items(v) | Encoding::Tour(v) => v,
        };
        let parts: Vec<String> = v.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A solution with its cached image and the weight that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionRecord {
    pub encoding: Encoding,
    pub image: ObjectiveVector,
    pub origin_weight: Option<WeightVector>,
}

impl SolutionRecord {
    pub fn new(instance: &ProblemInstance, encoding: Encoding) -> Result<Self> {
        let image = instance.evaluate(&encoding)?;
        Ok(SolutionRecord { encoding, image, origin_weight: None })
    }
}

/// Converts a small integer image to `i64` components when possible.
pub fn integral_components(y: &ObjectiveVector) -> Option<Vec<i64>> {
    y.values()
        .iter()
        .map(|v| if v.is_integer() { v.to_integer().to_i64() } else { None })
        .collect()
}
