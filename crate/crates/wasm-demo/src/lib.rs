//! Browser bindings for the demo page in `www/`. Every export returns a JSON
//! string, or throws the error message as a string.

use convex_approx::algorithms::{dual_benson_exact, enumerate_grid_keys, filter_redundant, oaa, round_vertex_weight};
use convex_approx::numeric::{to_f64, Rational};
use convex_approx::quality::convex_indicator;
use convex_approx::rounding::{boundary_round_traced, derive_parameters, ApproxParams};
use convex_approx::scalarization::{Bounds, Oracle, OracleKind};
use convex_approx::toolkit::bench::NumberText;
use convex_approx::toolkit::generators::{GeneratorKind, GeneratorSpec};
use convex_approx::weightspace::enumerate_extreme_points;
use convex_approx::{Error, Result, WeightVector};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn floats(values: &[Rational]) -> Vec<f64> {
    values.iter().map(to_f64).collect()
}

fn number(text: &str) -> Result<Rational> {
    NumberText::Text(text.trim().to_string()).to_rational()
}

/// Parameters for an exact oracle on objective values in `[1, ub]`.
fn params(epsilon: &str, ub: u32, d: usize) -> Result<ApproxParams> {
    let bounds = Bounds { lb: Rational::from_integer(1.into()), ub: Rational::from_integer(ub.max(1).into()) };
    derive_parameters(&number(epsilon)?, &Rational::from_integer(1.into()), &bounds, d)
}

pub fn round_weight_json(weights: &str, epsilon: &str, ub: u32) -> Result<Value> {
    let raw = weights
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(number)
        .collect::<Result<Vec<_>>>()?;
    let weight = WeightVector::normalized(&raw)?;
    let p = params(epsilon, ub, weight.dim())?;
    let trace = boundary_round_traced(&weight.components(), &p.c);
    let key = round_vertex_weight(&weight, &p)?;
    let steps: Vec<Value> = trace.steps.iter().map(|(k, v)| json!({ "k": k, "state": floats(v) })).collect();
    Ok(json!({
        "input": floats(&weight.components()),
        "c": to_f64(&p.c),
        "lb": to_f64(&p.lb),
        "order": trace.order,
        "steps": steps,
        "compact": floats(&trace.output),
        "rounded": trace.rounded(),
        "key": key.exponents(),
        "grid_weight": p.grid_weight(&key).to_f64s(),
    }))
}

pub fn grid_weights_json(epsilon: &str, ub: u32, max_points: u32) -> Result<Value> {
    let p = params(epsilon, ub, 3)?;
    let count = p.grid_key_count();
    if count > u64::from(max_points).into() {
        return Err(Error::Resource(format!("{count} grid weights, more than the limit of {max_points}")));
    }
    let points: Vec<Vec<f64>> =
        enumerate_grid_keys(3, p.key_range()).iter().map(|k| p.grid_weight(k).to_f64s()).collect();
    Ok(json!({ "key_range": p.key_range(), "points": points }))
}

pub fn run_oaa_json(generator: &str, n: usize, seed: u64, epsilon: &str, oracle: &str) -> Result<Value> {
    let kind = GeneratorKind::parse(generator)?;
    let instance = GeneratorSpec { kind, n, d: 3, seed }.generate()?;
    let oracle = Oracle::new(OracleKind::parse(oracle)?);
    let result = oaa(&instance, &oracle, &number(epsilon)?)?;
    let images = result.images();
    let exact = Oracle::new(if kind == GeneratorKind::Tsp { OracleKind::HeldKarp } else { OracleKind::KnapsackDp });
    let reference: Vec<_> = filter_redundant(&dual_benson_exact(&instance, &exact)?, instance.sense())?
        .into_iter()
        .map(|s| s.image)
        .collect();
    let indicator = convex_indicator(&images, &reference, instance.sense())?;
    let vertices: Vec<Value> = enumerate_extreme_points(&images, instance.sense())?
        .iter()
        .map(|v| json!({ "lambda": floats(v.lambda()), "z": to_f64(&v.z) }))
        .collect();
    let called: Vec<Vec<f64>> =
        result.investigated_keys.iter().map(|k| result.params.grid_weight(k).to_f64s()).collect();
    Ok(json!({
        "sense": instance.sense().name(),
        "images": images.iter().map(|y| floats(y.values())).collect::<Vec<_>>(),
        "oracle_calls": result.oracle_calls,
        "called_weights": called,
        "vertices": vertices,
        "reference_count": reference.len(),
        "indicator": to_f64(&indicator.value),
        "guarantee": to_f64(&result.params.guarantee()),
    }))
}

fn export(value: Result<Value>) -> Result<String, JsValue> {
    value.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Boundary and grid rounding of one weight, with every intermediate state.
#[wasm_bindgen]
pub fn round_weight(weights: &str, epsilon: &str, ub: u32) -> Result<String, JsValue> {
    export(round_weight_json(weights, epsilon, ub))
}

/// All grid weights for three objectives.
#[wasm_bindgen]
pub fn grid_weights(epsilon: &str, ub: u32, max_points: u32) -> Result<String, JsValue> {
    export(grid_weights_json(epsilon, ub, max_points))
}

/// A small approximation run on a generated three-objective instance.
#[wasm_bindgen]
pub fn run_oaa(generator: &str, n: usize, seed: u64, epsilon: &str, oracle: &str) -> Result<String, JsValue> {
    export(run_oaa_json(generator, n, seed, epsilon, oracle))
}
