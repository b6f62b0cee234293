//! A-posteriori quality: the convex epsilon-indicator of a solution set
//! against a reference set, and exhaustive verification on tiny instances.
//!
//! Minimization: `max_λ min_S λᵀy / min_ref λᵀy`.
//! Maximization: `max_λ max_ref λᵀy / max_S λᵀy`.
//!
//! On every cell of the subdivision of `Λ` induced by the measured set, the
//! measured envelope is linear and the reference envelope is concave
//! (minimization) or convex (maximization). The ratio's superlevel sets are
//! then cut out by convex functions, so its maximum over the cell sits at a
//! cell vertex. Evaluating the ratio at the extreme points of `D(S)` is
//! therefore exact for any `d`.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{solve, Rational};
use crate::problem::{Encoding, ObjectiveVector, Payload, ProblemInstance, Sense, WeightVector};
use crate::weightspace::{envelope_value, EnvelopePolyhedron};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorReport {
    pub value: Rational,
    pub argmax_weight: WeightVector,
    pub candidate_count: usize,
}

/// How weights where both envelopes vanish are scored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZeroPolicy {
    /// `0/0` counts as ratio 1.
    #[default]
    One,
    /// `0/0` is reported as an unbounded indicator.
    Error,
}

fn ratio_at(
    measured: &[ObjectiveVector],
    reference: &[ObjectiveVector],
    sense: Sense,
    lambda: &[Rational],
    policy: ZeroPolicy,
) -> Result<Rational> {
    let m = envelope_value(measured, sense, lambda);
    let r = envelope_value(reference, sense, lambda);
    let (num, den) = match sense {
        Sense::Minimize => (m, r),
        Sense::Maximize => (r, m),
    };
    if den.is_zero() {
        if num.is_zero() && policy == ZeroPolicy::One {
            return Ok(Rational::one());
        }
        return Err(Error::UnboundedIndicator(format!(
            "reference and measured envelopes give {num}/{den} at a weight on the boundary"
        )));
    }
    Ok(num / den)
}

fn check_sets(measured: &[ObjectiveVector], reference: &[ObjectiveVector]) -> Result<usize> {
    let d = measured
        .first()
        .or(reference.first())
        .map(ObjectiveVector::dim)
        .unwrap_or(0);
    if measured.is_empty() || reference.is_empty() {
        return Err(Error::Contract("indicator needs nonempty solution and reference sets".into()));
    }
    if measured.iter().chain(reference).any(|y| y.dim() != d) {
        return Err(Error::Contract("images differ in dimension".into()));
    }
    Ok(d)
}

fn best_of(
    candidates: impl Iterator<Item = Vec<Rational>>,
    measured: &[ObjectiveVector],
    reference: &[ObjectiveVector],
    sense: Sense,
    policy: ZeroPolicy,
) -> Result<IndicatorReport> {
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut count = 0;
    for lambda in candidates {
        count += 1;
        let value = ratio_at(measured, reference, sense, &lambda, policy)?;
        let better = match &best {
            None => true,
            Some((v, l)) => value > *v || (value == *v && lambda < *l),
        };
        if better {
            best = Some((value, lambda));
        }
    }
    let (value, lambda) = best.ok_or_else(|| Error::Internal("no candidate weights".into()))?;
    Ok(IndicatorReport { value, argmax_weight: WeightVector::new(&lambda)?, candidate_count: count })
}

/// Exact indicator of `measured` against `reference`.
pub fn convex_indicator(
    measured: &[ObjectiveVector],
    reference: &[ObjectiveVector],
    sense: Sense,
) -> Result<IndicatorReport> {
    convex_indicator_with(measured, reference, sense, ZeroPolicy::One)
}

pub fn convex_indicator_with(
    measured: &[ObjectiveVector],
    reference: &[ObjectiveVector],
    sense: Sense,
    policy: ZeroPolicy,
) -> Result<IndicatorReport> {
    check_sets(measured, reference)?;
    let poly = EnvelopePolyhedron::from_images(measured, sense)?;
    let candidates = poly.vertices().iter().map(|v| v.lambda().to_vec());
    best_of(candidates, measured, reference, sense, policy)
}

/// The same indicator computed from every weight that lies on `d − 1`
/// hyperplanes of the arrangement `{λᵀ(y − y′) = 0} ∪ {λ_i = 0}` over
/// both sets. Only for `d ∈ {2, 3}`; used to cross-check
/// [`convex_indicator`].
pub fn convex_indicator_by_arrangement(
    measured: &[ObjectiveVector],
    reference: &[ObjectiveVector],
    sense: Sense,
) -> Result<IndicatorReport> {
    let d = check_sets(measured, reference)?;
    if !(2..=3).contains(&d) {
        return Err(Error::Contract("the arrangement method supports d = 2 and d = 3 only".into()));
    }
    let mut all: Vec<&ObjectiveVector> = measured.iter().chain(reference).collect();
    all.sort();
    all.dedup();
    let mut planes: Vec<Vec<Rational>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut seen: HashSet<Vec<Rational>> = HashSet::new();
    for (a, y) in all.iter().enumerate() {
        for y2 in &all[a + 1..] {
            let row: Vec<Rational> = y.values().iter().zip(y2.values()).map(|(p, q)| p - q).collect();
            if seen.insert(row.clone()) {
                planes.push(row);
            }
        }
    }
    let ones = vec![Rational::one(); d];
    let mut candidates: Vec<Vec<Rational>> = Vec::new();
    let mut push = |rows: Vec<Vec<Rational>>| {
        let mut a = rows;
        a.push(ones.clone());
        let mut b = vec![Rational::zero(); d];
        b[d - 1] = Rational::one();
        if let Some(x) = solve(a, b) {
            if x.iter().all(|v| !v.is_negative()) {
                candidates.push(x);
            }
        }
    };
    for i in 0..planes.len() {
        if d == 2 {
            push(vec![planes[i].clone()]);
        } else {
            for j in i + 1..planes.len() {
                push(vec![planes[i].clone(), planes[j].clone()]);
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    best_of(candidates.into_iter(), measured, reference, sense, ZeroPolicy::One)
}

/// True when `measured` contains a `β`-approximation for every weight, given
/// the complete image set of the instance.
pub fn verify_convex_approx(
    measured: &[ObjectiveVector],
    all_images: &[ObjectiveVector],
    beta: &Rational,
    sense: Sense,
) -> Result<bool> {
    Ok(convex_indicator(measured, all_images, sense)?.value <= *beta)
}

pub const KNAPSACK_BRUTE_FORCE_LIMIT: usize = 20;
pub const TSP_BRUTE_FORCE_LIMIT: usize = 8;

/// Every tour starting at city 0, one per cycle (`tour[1] < tour[n-1]`
/// removes reflections).
pub fn enumerate_tours(n: usize) -> Vec<Vec<usize>> {
    fn go(tour: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if tour.len() == n {
            if tour[1] < tour[n - 1] {
                out.push(tour.clone());
            }
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                tour.push(v);
                go(tour, used, out);
                tour.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut used = vec![false; n];
    used[0] = true;
    go(&mut vec![0], &mut used, &mut out);
    out
}

/// All distinct images of feasible solutions, sorted.
pub fn brute_force_images(instance: &ProblemInstance) -> Result<Vec<ObjectiveVector>> {
    let d = instance.objectives();
    let mut images: HashSet<Vec<u64>> = HashSet::new();
    match instance.payload() {
        Payload::Knapsack(k) => {
            let n = k.weights.len();
            if n > KNAPSACK_BRUTE_FORCE_LIMIT {
                return Err(Error::Resource(format!(
                    "brute force is limited to {KNAPSACK_BRUTE_FORCE_LIMIT} items, instance has {n}"
                )));
            }
            // Gray-code walk: each step toggles one item
            let mut load = 0u64;
            let mut value = vec![0u64; d];
            let mut inside = vec![false; n];
            images.insert(value.clone());
            for step in 1u64..1 << n {
                let e = step.trailing_zeros() as usize;
                inside[e] = !inside[e];
                if inside[e] {
                    load += k.weights[e];
                    for (v, p) in value.iter_mut().zip(&k.profits[e]) {
                        *v += p;
                    }
                } else {
                    load -= k.weights[e];
                    for (v, p) in value.iter_mut().zip(&k.profits[e]) {
                        *v -= p;
                    }
                }
                if load <= k.capacity {
                    images.insert(value.clone());
                }
            }
        }
        Payload::Tsp(t) => {
            let n = t.cities();
            if n > TSP_BRUTE_FORCE_LIMIT {
                return Err(Error::Resource(format!(
                    "brute force is limited to {TSP_BRUTE_FORCE_LIMIT} cities, instance has {n}"
                )));
            }
            if n < 3 {
                return Err(Error::Domain(format!("a tour needs at least 3 cities, got {n}")));
            }
            for tour in enumerate_tours(n) {
                let y = instance.evaluate(&Encoding::Tour(tour))?;
                images.insert(y.values().iter().map(|v| v.to_integer().try_into().unwrap()).collect());
            }
        }
    }
    let mut out: Vec<ObjectiveVector> = images
        .into_iter()
        .map(|v| ObjectiveVector::new(v.into_iter().map(|x| Rational::from_integer(x.into())).collect()))
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    fn ov(v: &[i64]) -> ObjectiveVector {
        ObjectiveVector::from_integers(v).unwrap()
    }

    #[test]
    fn identical_sets_score_one() {
        let s = [ov(&[1, 3]), ov(&[3, 1])];
        assert_eq!(convex_indicator(&s, &s, Sense::Minimize).unwrap().value, int(1));
        assert_eq!(convex_indicator(&s, &s, Sense::Maximize).unwrap().value, int(1));
    }

    #[test]
    fn single_compromise_against_two_extremes() {
        let reference = [ov(&[1, 3]), ov(&[3, 1])];
        let s = [ov(&[2, 2])];
        let rep = convex_indicator(&s, &reference, Sense::Minimize).unwrap();
        assert_eq!(rep.value, int(2));
        assert_eq!(rep.argmax_weight, WeightVector::unit(2, 1));
        let arr = convex_indicator_by_arrangement(&s, &reference, Sense::Minimize).unwrap();
        assert_eq!(arr.value, int(2));
        // candidates (1,0), (0,1) and the crossing (1/2,1/2)
        assert_eq!(arr.candidate_count, 3);
        let scaled: Vec<_> = s.iter().map(|y| y.scaled(&ratio(3, 2))).collect();
        assert_eq!(convex_indicator(&scaled, &reference, Sense::Minimize).unwrap().value, int(3));
    }

    #[test]
    fn verification_thresholds() {
        let reference = [ov(&[1, 3]), ov(&[3, 1])];
        let s = [ov(&[2, 2])];
        assert!(verify_convex_approx(&s, &reference, &int(2), Sense::Minimize).unwrap());
        assert!(!verify_convex_approx(&s, &reference, &ratio(3, 2), Sense::Minimize).unwrap());
        assert!(verify_convex_approx(&reference, &reference, &int(1), Sense::Minimize).unwrap());
        let ideal = [ov(&[1, 1])];
        assert!(verify_convex_approx(&ideal, &[ov(&[1, 1]), ov(&[2, 1]), ov(&[1, 5])], &int(1), Sense::Minimize).unwrap());
    }

    #[test]
    fn zero_reference_is_unbounded() {
        let r = convex_indicator(&[ov(&[1, 1])], &[ov(&[0, 1])], Sense::Minimize);
        assert!(matches!(r, Err(Error::UnboundedIndicator(_))));
        let both_zero = convex_indicator(&[ov(&[0, 1])], &[ov(&[0, 1])], Sense::Minimize).unwrap();
        assert_eq!(both_zero.value, int(1));
        let strict = convex_indicator_with(&[ov(&[0, 1])], &[ov(&[0, 1])], Sense::Minimize, ZeroPolicy::Error);
        assert!(strict.is_err());
    }

    #[test]
    fn small_brute_force_sets() {
        let both_fit = ProblemInstance::knapsack(vec![1, 1], 2, vec![vec![1, 2], vec![3, 5]]).unwrap();
        assert_eq!(brute_force_images(&both_fit).unwrap().len(), 4);
        let m = vec![vec![0, 1, 2], vec![1, 0, 3], vec![2, 3, 0]];
        let tsp3 = ProblemInstance::tsp_from_costs(vec![m.clone(), m]).unwrap();
        assert_eq!(brute_force_images(&tsp3).unwrap(), vec![ov(&[6, 6])]);
        assert_eq!(enumerate_tours(5).len(), 12);
        assert_eq!(enumerate_tours(4).len(), 3);
    }

    fn images(d: usize, max: usize) -> impl proptest::strategy::Strategy<Value = Vec<ObjectiveVector>> {
        use proptest::prelude::*;
        proptest::collection::vec(proptest::collection::vec(1i64..20, d), 1..=max)
            .prop_map(|rows| rows.iter().map(|r| ObjectiveVector::from_integers(r).unwrap()).collect())
    }

    proptest::proptest! {
        #[test]
        fn vertex_and_arrangement_methods_agree(
            (s, r) in proptest::prop_oneof![
                (images(2, 6), images(2, 6)),
                (images(3, 5), images(3, 5)),
            ],
            maximize in proptest::bool::ANY,
        ) {
            let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
            let fast = convex_indicator(&s, &r, sense).unwrap();
            let slow = convex_indicator_by_arrangement(&s, &r, sense).unwrap();
            proptest::prop_assert_eq!(&fast.value, &slow.value);
            let w = fast.argmax_weight.components();
            let m = envelope_value(&s, sense, &w);
            let rv = envelope_value(&r, sense, &w);
            let at = if maximize { rv / m } else { m / rv };
            proptest::prop_assert_eq!(at, fast.value);
        }
    }
}
