//! The approximate outer-approximation loop, the full-grid baseline, the
//! exact dual Benson reference, redundancy filtering and the termination
//! certificate.

use std::collections::{BTreeSet, HashMap};
use std::time::Duration;
#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;
// std's clock panics in the browser
#[cfg(target_arch = "wasm32")]
use web_time::Instant;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::problem::{weighted_value, ObjectiveVector, ProblemInstance, Sense, SolutionRecord, WeightVector};
use crate::rounding::{boundary_round, derive_parameters, grid_round, ApproxParams, GridKey, GridStep};
use crate::scalarization::{compute_bounds, Oracle};
use crate::weightspace::{envelope_value, EnvelopePolyhedron, LiftedVertex};

/// Limits for a single run.
#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Abort with [`Error::Timeout`] once this instant has passed.
    pub deadline: Option<Instant>,
    /// Largest number of grid keys the grid baseline may enumerate.
    pub grid_key_budget: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { deadline: None, grid_key_budget: 5_000_000 }
    }
}

impl RunOptions {
    pub fn with_time_limit(limit: Duration) -> Self {
        RunOptions { deadline: Some(Instant::now() + limit), ..RunOptions::default() }
    }

    fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(t) if Instant::now() >= t => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}

/// Output of [`oaa`] and [`grid_algorithm`].
#[derive(Clone, Debug)]
pub struct ConvexApproxResult {
    /// One record per distinct image, in discovery order.
    pub solutions: Vec<SolutionRecord>,
    /// For each solution, every grid key whose oracle call returned it.
    pub provenance: Vec<Vec<GridKey>>,
    pub oracle_calls: u64,
    pub investigated_keys: BTreeSet<GridKey>,
    pub params: ApproxParams,
    pub wall_time: Duration,
    pub sense: Sense,
}

impl ConvexApproxResult {
    pub fn images(&self) -> Vec<ObjectiveVector> {
        self.solutions.iter().map(|s| s.image.clone()).collect()
    }
}

/// Solutions deduplicated by image, remembering which keys produced each.
struct SolutionSet {
    records: Vec<SolutionRecord>,
    provenance: Vec<Vec<GridKey>>,
    index: HashMap<ObjectiveVector, usize>,
}

impl SolutionSet {
    fn new() -> Self {
        SolutionSet { records: Vec::new(), provenance: Vec::new(), index: HashMap::new() }
    }

    /// Returns true when the image was not seen before.
    fn insert(&mut self, record: SolutionRecord, key: GridKey) -> bool {
        if let Some(&i) = self.index.get(&record.image) {
            self.provenance[i].push(key);
            return false;
        }
        self.index.insert(record.image.clone(), self.records.len());
        self.records.push(record);
        self.provenance.push(vec![key]);
        true
    }
}

fn setup(instance: &ProblemInstance, oracle: &Oracle, epsilon: &Rational) -> Result<ApproxParams> {
    oracle.check_compatible(instance)?;
    let bounds = compute_bounds(instance)?;
    derive_parameters(epsilon, &oracle.alpha(), &bounds, instance.objectives())
}

/// The grid key a vertex weight is rounded to: boundary rounding, then grid
/// rounding with base `1+ε′` if the boundary step moved the weight and
/// `(1+ε′)²` otherwise.
pub fn round_vertex_weight(weight: &WeightVector, params: &ApproxParams) -> Result<GridKey> {
    let (compact, rounded) = boundary_round(weight, params);
    let step = if rounded { GridStep::EpsilonPrime } else { GridStep::EpsilonGrid };
    Ok(grid_round(&compact, step, params)?.1)
}

/// Approximate dual outer approximation: returns a `(1+ε)·α`-convex
/// approximation set while calling the oracle only on grid weights.
pub fn oaa(instance: &ProblemInstance, oracle: &Oracle, epsilon: &Rational) -> Result<ConvexApproxResult> {
    oaa_with(instance, oracle, epsilon, &RunOptions::default())
}

pub fn oaa_with(
    instance: &ProblemInstance,
    oracle: &Oracle,
    epsilon: &Rational,
    options: &RunOptions,
) -> Result<ConvexApproxResult> {
    let start = Instant::now();
    let params = setup(instance, oracle, epsilon)?;
    let d = instance.objectives();
    let sense = instance.sense();

    let first_key = GridKey::zero(d);
    let first = oracle.solve(instance, &params.grid_weight(&first_key))?;
    let mut investigated = BTreeSet::new();
    investigated.insert(first_key.clone());
    let mut poly = EnvelopePolyhedron::new(first.image.clone(), sense)?;
    let mut solutions = SolutionSet::new();
    solutions.insert(first, first_key);

    // Vertex weights recur after every reset, so remember their keys.
    let mut keys: HashMap<WeightVector, GridKey> = HashMap::new();
    let mut queue: Vec<LiftedVertex> = poly.vertices().to_vec();
    let mut pos = 0;
    while pos < queue.len() {
        options.check_deadline()?;
        let weight = &queue[pos].weight;
        pos += 1;
        let key = match keys.get(weight) {
            Some(k) => k.clone(),
            None => {
                let k = round_vertex_weight(weight, &params)?;
                keys.insert(weight.clone(), k.clone());
                k
            }
        };
        if investigated.contains(&key) {
            continue;
        }
        let record = oracle.solve(instance, &params.grid_weight(&key))?;
        investigated.insert(key.clone());
        let image = record.image.clone();
        if solutions.insert(record, key) {
            poly.add_image(image)?;
            queue = poly.vertices().to_vec();
            pos = 0;
        }
    }

    // Exit condition: every vertex of the final D(S) rounds to a known key.
    for v in poly.vertices() {
        let key = match keys.get(&v.weight) {
            Some(k) => k.clone(),
            None => round_vertex_weight(&v.weight, &params)?,
        };
        if !investigated.contains(&key) {
            return Err(Error::Internal(format!("vertex {} rounds to an uninvestigated key", v.weight)));
        }
    }
    if BigInt::from(investigated.len()) > params.key_cap() {
        return Err(Error::Internal("more oracle calls than grid keys".into()));
    }

    Ok(ConvexApproxResult {
        oracle_calls: investigated.len() as u64,
        solutions: solutions.records,
        provenance: solutions.provenance,
        investigated_keys: investigated,
        params,
        wall_time: start.elapsed(),
        sense,
    })
}

/// Every canonical key with components in `[0, range]`, in lexicographic
/// order.
pub fn enumerate_grid_keys(d: usize, range: i64) -> Vec<GridKey> {
    let mut out = Vec::new();
    let mut tuple = vec![0i64; d];
    loop {
        if tuple.contains(&0) {
            out.push(GridKey::new(&tuple));
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if tuple[i] < range {
                tuple[i] += 1;
                for t in &mut tuple[i + 1..] {
                    *t = 0;
                }
                break;
            }
        }
    }
}

/// Calls the oracle on every grid weight.
pub fn grid_algorithm(instance: &ProblemInstance, oracle: &Oracle, epsilon: &Rational) -> Result<ConvexApproxResult> {
    grid_algorithm_with(instance, oracle, epsilon, &RunOptions::default())
}

pub fn grid_algorithm_with(
    instance: &ProblemInstance,
    oracle: &Oracle,
    epsilon: &Rational,
    options: &RunOptions,
) -> Result<ConvexApproxResult> {
    let start = Instant::now();
    let params = setup(instance, oracle, epsilon)?;
    let count = params.grid_key_count();
    if count > BigInt::from(options.grid_key_budget) {
        return Err(Error::Resource(format!(
            "the grid has {count} weights, over the budget of {}; use a larger epsilon",
            options.grid_key_budget
        )));
    }
    let keys = enumerate_grid_keys(instance.objectives(), params.key_range());
    debug_assert_eq!(BigInt::from(keys.len()), count);

    let mut solutions = SolutionSet::new();
    const CHUNK: usize = 2048;
    for chunk in keys.chunks(CHUNK) {
        options.check_deadline()?;
        let records: Vec<Result<SolutionRecord>> = chunk
            .par_iter()
            .map(|key| {
                let mut r = oracle.solve(instance, &params.grid_weight(key))?;
                // grid weights can be huge; keep them only via the key
                r.origin_weight = None;
                Ok(r)
            })
            .collect();
        for (key, record) in chunk.iter().zip(records) {
            let mut record = record?;
            if !solutions.index.contains_key(&record.image) {
                record.origin_weight = Some(params.grid_weight(key));
            }
            solutions.insert(record, key.clone());
        }
    }
    Ok(ConvexApproxResult {
        oracle_calls: keys.len() as u64,
        solutions: solutions.records,
        provenance: solutions.provenance,
        investigated_keys: keys.into_iter().collect(),
        params,
        wall_time: start.elapsed(),
        sense: instance.sense(),
    })
}

/// Exact dual Benson: an optimal solution set for the weighted-sum
/// problem, found with an exact oracle.
pub fn dual_benson_exact(instance: &ProblemInstance, oracle: &Oracle) -> Result<Vec<SolutionRecord>> {
    dual_benson_exact_with(instance, oracle, &RunOptions::default())
}

pub fn dual_benson_exact_with(
    instance: &ProblemInstance,
    oracle: &Oracle,
    options: &RunOptions,
) -> Result<Vec<SolutionRecord>> {
    if !oracle.is_exact() {
        return Err(Error::Configuration(format!(
            "the exact reference needs an exact oracle, {} has factor {}",
            oracle.kind().name(),
            oracle.alpha()
        )));
    }
    oracle.check_compatible(instance)?;
    let sense = instance.sense();
    let first = oracle.solve(instance, &WeightVector::uniform(instance.objectives()))?;
    let mut poly = EnvelopePolyhedron::new(first.image.clone(), sense)?;
    let mut solutions = vec![first];
    // The oracle is deterministic, so a weight never needs solving twice.
    let mut solved: HashMap<WeightVector, SolutionRecord> = HashMap::new();
    let mut queue: Vec<LiftedVertex> = poly.vertices().to_vec();
    let mut pos = 0;
    while pos < queue.len() {
        options.check_deadline()?;
        let vertex = &queue[pos];
        pos += 1;
        let record = match solved.get(&vertex.weight) {
            Some(r) => r.clone(),
            None => {
                let r = oracle.solve(instance, &vertex.weight)?;
                solved.insert(vertex.weight.clone(), r.clone());
                r
            }
        };
        let value = weighted_value(&vertex.weight, &record.image)?;
        if value == vertex.z {
            continue;
        }
        if !sense.at_least_as_good(&value, &vertex.z) {
            return Err(Error::Internal(format!(
                "exact oracle returned value {value} worse than the envelope {} at {}",
                vertex.z, vertex.weight
            )));
        }
        poly.add_image(record.image.clone())?;
        solutions.push(record);
        queue = poly.vertices().to_vec();
        pos = 0;
    }
    Ok(solutions)
}

/// Deduplicates by image and drops every solution whose halfspace does not
/// define a facet of `D(S)`, i.e. whose removal leaves the envelope
/// unchanged. Keeps the order of first occurrence.
pub fn filter_redundant(solutions: &[SolutionRecord], sense: Sense) -> Result<Vec<SolutionRecord>> {
    let unique = dedupe(solutions);
    if unique.is_empty() {
        return Err(Error::Contract("solution set must not be empty".into()));
    }
    let images: Vec<ObjectiveVector> = unique.iter().map(|s| s.image.clone()).collect();
    let d = images[0].dim();
    let poly = EnvelopePolyhedron::from_images(&images, sense)?;
    let mut keep = vec![false; unique.len()];
    let mut points: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); unique.len()];
    for v in poly.vertices() {
        for j in v.tight_images() {
            let mut p = v.lambda().to_vec();
            p.push(v.z.clone());
            p.push(Rational::one());
            points[j].push(p);
        }
    }
    for (j, pts) in points.iter().enumerate() {
        keep[j] = !pts.is_empty() && crate::numeric::rank(pts) == d;
    }
    Ok(unique
        .into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect())
}

fn dedupe(solutions: &[SolutionRecord]) -> Vec<SolutionRecord> {
    let mut seen = std::collections::HashSet::new();
    solutions
        .iter()
        .filter(|s| seen.insert(s.image.clone()))
        .cloned()
        .collect()
}

/// [`filter_redundant`] by direct recomputation: a solution is dropped when
/// the envelope without it agrees with the envelope with it at every vertex
/// of `D(S∖{x})`. Solutions are tried in lexicographic image order.
pub fn filter_redundant_by_recompute(solutions: &[SolutionRecord], sense: Sense) -> Result<Vec<SolutionRecord>> {
    let mut current = dedupe(solutions);
    if current.is_empty() {
        return Err(Error::Contract("solution set must not be empty".into()));
    }
    let mut order: Vec<ObjectiveVector> = current.iter().map(|s| s.image.clone()).collect();
    order.sort();
    for image in order {
        if current.len() == 1 {
            break;
        }
        let rest: Vec<ObjectiveVector> = current
            .iter()
            .filter(|s| s.image != image)
            .map(|s| s.image.clone())
            .collect();
        let all: Vec<ObjectiveVector> = current.iter().map(|s| s.image.clone()).collect();
        let vertices = crate::weightspace::enumerate_extreme_points(&rest, sense)?;
        let unchanged = vertices
            .iter()
            .all(|v| envelope_value(&all, sense, v.lambda()) == v.z);
        if unchanged {
            current.retain(|s| s.image != image);
        }
    }
    Ok(current)
}

/// What the certificate compares each vertex against.
pub enum Reference<'a> {
    /// The complete image set of the instance.
    Images(&'a [ObjectiveVector]),
    /// An exact oracle on the instance.
    Oracle(&'a Oracle, &'a ProblemInstance),
}

/// True when every vertex `(λ, z)` is within factor `β` of the true
/// weighted-sum optimum at `λ`.
pub fn check_termination_certificate(
    vertices: &[LiftedVertex],
    reference: Reference<'_>,
    beta: &Rational,
    sense: Sense,
) -> Result<bool> {
    if let Reference::Oracle(oracle, _) = &reference {
        if !oracle.is_exact() {
            return Err(Error::Configuration("the certificate needs an exact oracle".into()));
        }
    }
    for v in vertices {
        let opt = match &reference {
            Reference::Images(images) => envelope_value(images, sense, v.lambda()),
            Reference::Oracle(oracle, instance) => {
                let r = oracle.solve(instance, &v.weight)?;
                weighted_value(&v.weight, &r.image)?
            }
        };
        let ok = match sense {
            Sense::Minimize => v.z <= beta * &opt,
            Sense::Maximize => beta * &v.z >= opt,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Grid size as a plain number, saturating for reports.
pub fn grid_size(params: &ApproxParams) -> u64 {
    params.grid_key_count().to_u64().unwrap_or(u64::MAX)
}
