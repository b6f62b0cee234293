//! The lifted weight set: halfspaces `H(x)`, the polyhedron `D(S)` and its
//! extreme points, and the compact-region membership test.
//!
//! For a minimization problem `D(S) = {(λ, z) : λ ∈ Λ, z ≤ λᵀy ∀y ∈ S}`, the
//! region under the lower envelope; for maximization the inequalities flip
//! and `D(S)` lies above the upper envelope. Either way the extreme points are
//! the lifted vertices of the subdivision of `Λ` the envelope induces.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{dot, rank, solve, Rational};
use crate::problem::{ObjectiveVector, Sense, WeightVector};

/// The halfspace of `(λ, z)` pairs that one image supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub image: ObjectiveVector,
    pub sense: Sense,
}

impl HalfSpace {
    /// Nonnegative exactly when `(λ, z)` lies in the halfspace.
    pub fn slack(&self, lambda: &[Rational], z: &Rational) -> Rational {
        let value = dot(lambda, self.image.values());
        match self.sense {
            Sense::Minimize => value - z,
            Sense::Maximize => z - value,
        }
    }

    pub fn contains(&self, lambda: &[Rational], z: &Rational) -> bool {
        !self.slack(lambda, z).is_negative()
    }
}

pub fn build_halfspace(image: ObjectiveVector, sense: Sense) -> HalfSpace {
    HalfSpace { image, sense }
}

/// A constraint of `D(S)` other than `Σλ = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// `λ_i ≥ 0`
    Coordinate(usize),
    /// The halfspace of the `j`-th image.
    Image(usize),
}

/// An extreme point `(λ, z)` of `D(S)` with every constraint tight at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedVertex {
    pub weight: WeightVector,
    pub z: Rational,
    pub tight: BTreeSet<Constraint>,
    lambda: Vec<Rational>,
}

impl LiftedVertex {
    fn new(lambda: Vec<Rational>, z: Rational, tight: BTreeSet<Constraint>) -> Self {
        let weight = WeightVector::new(&lambda).expect("vertex weight lies in the weight set");
        LiftedVertex { weight, z, tight, lambda }
    }

    /// The weight components `λ_i`.
    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    /// Indices of the images whose halfspaces are tight here.
    pub fn tight_images(&self) -> impl Iterator<Item = usize> + '_ {
        self.tight.iter().filter_map(|c| match c {
            Constraint::Image(j) => Some(*j),
            Constraint::Coordinate(_) => None,
        })
    }

    fn key(&self) -> (Vec<Rational>, Rational) {
        (self.lambda.clone(), self.z.clone())
    }
}

impl Ord for LiftedVertex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lambda
            .cmp(&other.lambda)
            .then_with(|| self.z.cmp(&other.z))
    }
}

impl PartialOrd for LiftedVertex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `min_y λᵀy` (minimization) or `max_y λᵀy` (maximization) over `images`.
pub fn envelope_value(images: &[ObjectiveVector], sense: Sense, lambda: &[Rational]) -> Rational {
    let mut values = images.iter().map(|y| dot(lambda, y.values()));
    let first = values.next().expect("envelope of an empty image set");
    values.fold(first, |best, v| match sense {
        Sense::Minimize if v < best => v,
        Sense::Maximize if v > best => v,
        _ => best,
    })
}

/// Row of the constraint's defining hyperplane in `(λ, z)` coordinates.
fn constraint_row(c: Constraint, images: &[ObjectiveVector], d: usize) -> Vec<Rational> {
    match c {
        Constraint::Coordinate(i) => {
            let mut row = vec![Rational::zero(); d + 1];
            row[i] = Rational::one();
            row
        }
        Constraint::Image(j) => {
            let mut row = images[j].values().to_vec();
            row.push(-Rational::one());
            row
        }
    }
}

fn normalization_row(d: usize) -> Vec<Rational> {
    let mut row = vec![Rational::one(); d];
    row.push(Rational::zero());
    row
}

/// All constraints tight at `(λ, z)`.
fn tight_set(images: &[ObjectiveVector], sense: Sense, lambda: &[Rational], z: &Rational) -> BTreeSet<Constraint> {
    let mut tight: BTreeSet<Constraint> = lambda
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_zero())
        .map(|(i, _)| Constraint::Coordinate(i))
        .collect();
    for (j, y) in images.iter().enumerate() {
        if build_halfspace(y.clone(), sense).slack(lambda, z).is_zero() {
            tight.insert(Constraint::Image(j));
        }
    }
    tight
}

/// `D(S)` maintained under insertion of images: each new halfspace cuts the
/// current polyhedron, keeping the vertices it satisfies and adding one new
/// vertex on every edge it crosses.
#[derive(Clone, Debug)]
pub struct EnvelopePolyhedron {
    d: usize,
    sense: Sense,
    images: Vec<ObjectiveVector>,
    vertices: Vec<LiftedVertex>,
}

impl EnvelopePolyhedron {
    pub fn new(first: ObjectiveVector, sense: Sense) -> Result<Self> {
        let d = first.dim();
        if d == 0 {
            return Err(Error::Contract("objective vectors need at least one component".into()));
        }
        let mut vertices: Vec<LiftedVertex> = (0..d)
            .map(|i| {
                let mut lambda = vec![Rational::zero(); d];
                lambda[i] = Rational::one();
                let mut tight: BTreeSet<Constraint> =
                    (0..d).filter(|&j| j != i).map(Constraint::Coordinate).collect();
                tight.insert(Constraint::Image(0));
                LiftedVertex::new(lambda, first.get(i).clone(), tight)
            })
            .collect();
        vertices.sort();
        Ok(EnvelopePolyhedron { d, sense, images: vec![first], vertices })
    }

    pub fn from_images(images: &[ObjectiveVector], sense: Sense) -> Result<Self> {
        let (first, rest) = images
            .split_first()
            .ok_or_else(|| Error::Contract("image set must not be empty".into()))?;
        let mut poly = EnvelopePolyhedron::new(first.clone(), sense)?;
        for y in rest {
            poly.add_image(y.clone())?;
        }
        Ok(poly)
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn images(&self) -> &[ObjectiveVector] {
        &self.images
    }

    /// Extreme points in lexicographic `(λ, z)` order.
    pub fn vertices(&self) -> &[LiftedVertex] {
        &self.vertices
    }

    pub fn envelope(&self, lambda: &[Rational]) -> Rational {
        envelope_value(&self.images, self.sense, lambda)
    }

    /// Cuts `D(S)` with the halfspace of `image`.
    pub fn add_image(&mut self, image: ObjectiveVector) -> Result<()> {
        if image.dim() != self.d {
            return Err(Error::Contract("image dimension differs from the polyhedron's".into()));
        }
        let d = self.d;
        let id = self.images.len();
        self.images.push(image.clone());
        let half = build_halfspace(image, self.sense);
        let slacks: Vec<Rational> = self
            .vertices
            .iter()
            .map(|v| half.slack(&v.lambda, &v.z))
            .collect();
        if slacks.iter().all(|s| s.is_positive()) {
            return Ok(());
        }

        let mut next: BTreeMap<(Vec<Rational>, Rational), LiftedVertex> = BTreeMap::new();
        let mut cut_off = Vec::new();
        let mut kept = Vec::new();
        for (idx, (v, s)) in self.vertices.iter().zip(&slacks).enumerate() {
            if s.is_negative() {
                cut_off.push(idx);
            } else {
                let mut v = v.clone();
                if s.is_zero() {
                    v.tight.insert(Constraint::Image(id));
                }
                kept.push(idx);
                next.insert(v.key(), v);
            }
        }

        // New vertices where the cut crosses a bounded edge.
        let eq = normalization_row(d);
        for &u in &kept {
            if slacks[u].is_zero() {
                continue;
            }
            for &w in &cut_off {
                let (vu, vw) = (&self.vertices[u], &self.vertices[w]);
                let common: BTreeSet<Constraint> = vu.tight.intersection(&vw.tight).copied().collect();
                if common.len() + 1 < d {
                    continue;
                }
                let mut rows: Vec<Vec<Rational>> = common
                    .iter()
                    .map(|&c| constraint_row(c, &self.images, d))
                    .collect();
                rows.push(eq.clone());
                if rank(&rows) < d {
                    continue;
                }
                let t = &slacks[u] / (&slacks[u] - &slacks[w]);
                let lambda: Vec<Rational> = vu
                    .lambda
                    .iter()
                    .zip(&vw.lambda)
                    .map(|(a, b)| a + &t * (b - a))
                    .collect();
                let z = &vu.z + &t * (&vw.z - &vu.z);
                let mut tight = common;
                tight.insert(Constraint::Image(id));
                let v = LiftedVertex::new(lambda, z, tight);
                next.entry(v.key()).or_insert(v);
            }
        }

        // New vertices on the vertical rays below (above) the corners of Λ.
        for &w in &cut_off {
            let vw = &self.vertices[w];
            let zeros = vw.tight.iter().filter(|c| matches!(c, Constraint::Coordinate(_))).count();
            if zeros + 1 == d {
                let z = dot(&vw.lambda, self.images[id].values());
                let mut tight: BTreeSet<Constraint> = vw
                    .tight
                    .iter()
                    .filter(|c| matches!(c, Constraint::Coordinate(_)))
                    .copied()
                    .collect();
                tight.insert(Constraint::Image(id));
                let v = LiftedVertex::new(vw.lambda.clone(), z, tight);
                next.entry(v.key()).or_insert(v);
            }
        }

        self.vertices = next.into_values().collect();
        Ok(())
    }
}

/// Extreme points of `D(S)`, deduplicated and sorted lexicographically by
/// `(λ, z)`.
pub fn enumerate_extreme_points(images: &[ObjectiveVector], sense: Sense) -> Result<Vec<LiftedVertex>> {
    check_images(images)?;
    Ok(EnvelopePolyhedron::from_images(images, sense)?.vertices)
}

fn check_images(images: &[ObjectiveVector]) -> Result<()> {
    let first = images
        .first()
        .ok_or_else(|| Error::Contract("image set must not be empty".into()))?;
    if images.iter().any(|y| y.dim() != first.dim()) {
        return Err(Error::Contract("images differ in dimension".into()));
    }
    Ok(())
}

/// Same result as [`enumerate_extreme_points`], computed by solving every
/// `d`-subset of constraints together with `Σλ = 1`. Exponential in `d` and
/// quadratic-or-worse in `|S|`; kept as an independent check.
pub fn enumerate_extreme_points_by_subsets(
    images: &[ObjectiveVector],
    sense: Sense,
) -> Result<Vec<LiftedVertex>> {
    check_images(images)?;
    let d = images[0].dim();
    let pool: Vec<Constraint> = (0..d)
        .map(Constraint::Coordinate)
        .chain((0..images.len()).map(Constraint::Image))
        .collect();
    let mut found: BTreeMap<(Vec<Rational>, Rational), LiftedVertex> = BTreeMap::new();
    let mut subset: Vec<usize> = (0..d).collect();
    if pool.len() < d {
        return Ok(Vec::new());
    }
    loop {
        let chosen: Vec<Constraint> = subset.iter().map(|&i| pool[i]).collect();
        if chosen.iter().any(|c| matches!(c, Constraint::Image(_))) {
            let mut a: Vec<Vec<Rational>> = chosen.iter().map(|&c| constraint_row(c, images, d)).collect();
            a.push(normalization_row(d));
            let mut b: Vec<Rational> = chosen
                .iter()
                .map(|_| Rational::zero())
                .collect();
            b.push(Rational::one());
            if let Some(x) = solve(a, b) {
                let z = x[d].clone();
                let lambda = x[..d].to_vec();
                let feasible = lambda.iter().all(|l| !l.is_negative())
                    && images
                        .iter()
                        .all(|y| build_halfspace(y.clone(), sense).contains(&lambda, &z));
                if feasible {
                    let tight = tight_set(images, sense, &lambda, &z);
                    let v = LiftedVertex::new(lambda, z, tight);
                    found.entry(v.key()).or_insert(v);
                }
            }
        }
        // next combination in lexicographic order
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(found.into_values().collect());
            }
            i -= 1;
            if subset[i] < pool.len() - d + i {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..d {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Sorted-prefix test for the compact region: after sorting ascending,
/// `Σ_{i≤k} λ_(i) ≥ c · λ_(k+1)` for every `k = 1..d-1`.
pub fn in_compact_components(lambda: &[Rational], c: &Rational) -> bool {
    let mut sorted = lambda.to_vec();
    sorted.sort();
    let mut prefix = Rational::zero();
    for k in 1..sorted.len() {
        prefix += &sorted[k - 1];
        if prefix < c * &sorted[k] {
            return false;
        }
    }
    true
}

pub fn in_compact(weight: &WeightVector, c: &Rational) -> bool {
    in_compact_components(&weight.components(), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    fn ov(v: &[i64]) -> ObjectiveVector {
        ObjectiveVector::from_integers(v).unwrap()
    }

    fn summary(vs: &[LiftedVertex]) -> Vec<(Vec<Rational>, Rational)> {
        vs.iter().map(|v| (v.lambda().to_vec(), v.z.clone())).collect()
    }

    #[test]
    fn halfspaces() {
        let h = build_halfspace(ov(&[1, 2, 3]), Sense::Minimize);
        let l = [ratio(1, 3), ratio(1, 3), ratio(1, 3)];
        assert!(h.contains(&l, &int(2)));
        assert!(!h.contains(&l, &ratio(201, 100)));
        let h = build_halfspace(ov(&[1, 2, 3]), Sense::Maximize);
        assert!(h.contains(&l, &int(2)));
        assert!(!h.contains(&l, &ratio(199, 100)));
        let zero = build_halfspace(ov(&[0, 0]), Sense::Minimize);
        assert!(zero.contains(&[int(1), int(0)], &int(0)));
        assert!(!zero.contains(&[int(1), int(0)], &ratio(1, 10)));
    }

    #[test]
    fn single_image_lifts_the_corners() {
        let vs = enumerate_extreme_points(&[ov(&[1, 2, 3])], Sense::Minimize).unwrap();
        let want = vec![
            (vec![int(0), int(0), int(1)], int(3)),
            (vec![int(0), int(1), int(0)], int(2)),
            (vec![int(1), int(0), int(0)], int(1)),
        ];
        assert_eq!(summary(&vs), want);
    }

    #[test]
    fn two_crossing_images() {
        let images = [ov(&[1, 3]), ov(&[3, 1])];
        let min = enumerate_extreme_points(&images, Sense::Minimize).unwrap();
        assert_eq!(
            summary(&min),
            vec![
                (vec![int(0), int(1)], int(1)),
                (vec![ratio(1, 2), ratio(1, 2)], int(2)),
                (vec![int(1), int(0)], int(1)),
            ]
        );
        let max = enumerate_extreme_points(&images, Sense::Maximize).unwrap();
        assert_eq!(
            summary(&max),
            vec![
                (vec![int(0), int(1)], int(3)),
                (vec![ratio(1, 2), ratio(1, 2)], int(2)),
                (vec![int(1), int(0)], int(3)),
            ]
        );
        for vs in [&min, &max] {
            let middle = &vs[1];
            assert_eq!(middle.tight_images().collect::<Vec<_>>(), vec![0, 1]);
        }
        assert_eq!(summary(&enumerate_extreme_points_by_subsets(&images, Sense::Minimize).unwrap()), summary(&min));
    }

    #[test]
    fn empty_or_mixed_images_are_rejected() {
        assert!(enumerate_extreme_points(&[], Sense::Minimize).is_err());
        assert!(enumerate_extreme_points(&[ov(&[1, 2]), ov(&[1, 2, 3])], Sense::Minimize).is_err());
    }

    #[test]
    fn compact_membership() {
        let c = ratio(1, 10);
        let third = [ratio(1, 3), ratio(1, 3), ratio(1, 3)];
        assert!(in_compact_components(&third, &ratio(99, 100)));
        assert!(!in_compact_components(&[int(0), ratio(1, 5), ratio(4, 5)], &c));
        assert!(in_compact_components(&[ratio(1, 51), ratio(10, 51), ratio(40, 51)], &c));
        assert!(!in_compact_components(&[ratio(1, 52), ratio(11, 52), ratio(40, 52)], &c));
    }

    fn image_strategy(d: usize, max: usize) -> impl proptest::strategy::Strategy<Value = Vec<ObjectiveVector>> {
        use proptest::prelude::*;
        proptest::collection::vec(proptest::collection::vec(0i64..12, d), 1..=max)
            .prop_map(|rows| rows.iter().map(|r| ObjectiveVector::from_integers(r).unwrap()).collect())
    }

    fn check_vertex(images: &[ObjectiveVector], sense: Sense, v: &LiftedVertex) {
        let d = images[0].dim();
        assert!(v.lambda().iter().all(|l| !l.is_negative()));
        assert_eq!(v.lambda().iter().sum::<Rational>(), int(1));
        assert_eq!(v.z, envelope_value(images, sense, v.lambda()));
        assert_eq!(v.tight, tight_set(images, sense, v.lambda(), &v.z));
        assert!(v.tight_images().next().is_some());
        let mut rows: Vec<Vec<Rational>> = v.tight.iter().map(|&c| constraint_row(c, images, d)).collect();
        rows.push(normalization_row(d));
        assert_eq!(rank(&rows), d + 1);
    }

    proptest::proptest! {
        #[test]
        fn incremental_matches_subset_enumeration(
            images in proptest::prop_oneof![image_strategy(2, 6), image_strategy(3, 6), image_strategy(4, 4)],
            maximize in proptest::bool::ANY,
        ) {
            let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
            let fast = enumerate_extreme_points(&images, sense).unwrap();
            let slow = enumerate_extreme_points_by_subsets(&images, sense).unwrap();
            proptest::prop_assert_eq!(summary(&fast), summary(&slow));
            for (a, b) in fast.iter().zip(&slow) {
                proptest::prop_assert_eq!(&a.tight, &b.tight);
                check_vertex(&images, sense, a);
            }
            let bound = num_integer::binomial(images.len() + images[0].dim(), images[0].dim());
            proptest::prop_assert!(fast.len() <= bound);
        }

        #[test]
        fn adding_images_lowers_the_envelope(images in image_strategy(3, 6)) {
            let (last, rest) = images.split_last().unwrap();
            if rest.is_empty() {
                return Ok(());
            }
            let before = enumerate_extreme_points(rest, Sense::Minimize).unwrap();
            let mut all = rest.to_vec();
            all.push(last.clone());
            for v in &before {
                proptest::prop_assert!(envelope_value(&all, Sense::Minimize, v.lambda()) <= v.z);
            }
        }
    }
}
