//! Candidate self-similar subsets of a ring, realized as orbit closures of
//! base points under finitely many similarity maps.
//!
//! A similarity map is a polynomial c_0 + c_1 x + ... + c_n x^n over the
//! ambient ring. Linear maps need Norm(c_1) > 1; maps of degree >= 2 are
//! supported over Z only. Verification of the disjoint-union property is
//! windowed: disjointness and coverage are checked up to a safe bound Y
//! below which every image point's preimage provably lies inside the
//! generation window, and no claim is made beyond Y.

use crate::rings::{elements_of_norm_at_most, RingElement, RingError, RingSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IfsError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("similarity map needs degree >= 1 and a nonzero leading coefficient")]
    DegenerateMap,
    #[error("linear similarity map must have Norm(leading coefficient) > 1")]
    NonExpandingLinearMap,
    #[error("polynomial similarity maps (degree >= 2) are supported over Z only")]
    PolynomialOverQuadratic,
    #[error("spec needs at least one map and one base point, all over the same ring")]
    MalformedSpec,
    #[error("window {window} is below the largest base-point norm {base_norm}")]
    WindowBelowBasePoints { window: BigInt, base_norm: BigInt },
    #[error("window too small: safe verification bound {safe} does not exceed the base-point norm {base_norm}")]
    WindowTooSmall { safe: BigInt, base_norm: BigInt },
    #[error("membership requires all maps affine")]
    MembershipNeedsAffine,
    #[error("thresholds must be nonempty and strictly ascending")]
    BadThresholds,
}

/// One similarity map phi(x) = c_0 + c_1 x + ... + c_n x^n, stored with
/// coefficients little-endian (constant term first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityMap {
    ring: RingSpec,
    coeffs: Vec<RingElement>,
}

impl SimilarityMap {
    pub fn new(ring: RingSpec, coeffs: Vec<RingElement>) -> Result<Self, IfsError> {
        if coeffs.len() < 2 {
            return Err(IfsError::DegenerateMap);
        }
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(RingError::RingMismatch.into());
        }
        let lead = coeffs.last().unwrap();
        if lead.is_zero() {
            return Err(IfsError::DegenerateMap);
        }
        let degree = coeffs.len() - 1;
        if degree == 1 {
            if lead.norm() <= BigInt::one() {
                return Err(IfsError::NonExpandingLinearMap);
            }
        } else if ring.is_quadratic() {
            return Err(IfsError::PolynomialOverQuadratic);
        }
        Ok(SimilarityMap { ring, coeffs })
    }

    /// Affine map x -> a*x + b.
    pub fn affine(a: RingElement, b: RingElement) -> Result<Self, IfsError> {
        let ring = a.ring();
        SimilarityMap::new(ring, vec![b, a])
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &RingElement {
        self.coeffs.last().unwrap()
    }

    pub fn constant(&self) -> &RingElement {
        &self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    /// Exact Horner evaluation.
    pub fn apply(&self, x: &RingElement) -> Result<RingElement, IfsError> {
        let mut acc = RingElement::zero(self.ring);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }
}

/// Defining data of a candidate self-similar set: the orbit closure of the
/// base points under the maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractalSpec {
    ring: RingSpec,
    maps: Vec<SimilarityMap>,
    base_points: Vec<RingElement>,
}

impl FractalSpec {
    pub fn new(
        ring: RingSpec,
        maps: Vec<SimilarityMap>,
        base_points: Vec<RingElement>,
    ) -> Result<Self, IfsError> {
        if maps.is_empty() || base_points.is_empty() {
            return Err(IfsError::MalformedSpec);
        }
        if maps.iter().any(|m| m.ring() != ring)
            || base_points.iter().any(|b| b.ring() != ring)
        {
            return Err(IfsError::MalformedSpec);
        }
        Ok(FractalSpec { ring, maps, base_points })
    }

    /// Digit system in base `beta` over Z: maps x -> beta*x + digit.
    pub fn digit_system(beta: i64, digits: &[i64]) -> Result<Self, IfsError> {
        let maps = digits
            .iter()
            .map(|&dg| {
                SimilarityMap::affine(RingElement::integer(beta), RingElement::integer(dg))
            })
            .collect::<Result<Vec<_>, _>>()?;
        FractalSpec::new(RingSpec::Integers, maps, vec![RingElement::integer(0)])
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn maps(&self) -> &[SimilarityMap] {
        &self.maps
    }

    pub fn base_points(&self) -> &[RingElement] {
        &self.base_points
    }

    fn max_base_norm(&self) -> BigInt {
        self.base_points.iter().map(|b| b.norm()).max().unwrap()
    }
}

/// Finite truncation of the orbit closure: exactly the reachable elements of
/// norm <= window, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractalSample {
    pub window: BigInt,
    pub elements: Vec<RingElement>,
}

/// Breadth-first closure of the base points under all maps, pruned at the
/// norm window. Deterministic: the result is the sorted element set.
pub fn generate(spec: &FractalSpec, window: &BigInt) -> Result<FractalSample, IfsError> {
    let base_norm = spec.max_base_norm();
    if *window < base_norm {
        return Err(IfsError::WindowBelowBasePoints {
            window: window.clone(),
            base_norm,
        });
    }
    let mut seen: BTreeSet<RingElement> = BTreeSet::new();
    let mut queue: VecDeque<RingElement> = VecDeque::new();
    for b in &spec.base_points {
        if seen.insert(b.clone()) {
            queue.push_back(b.clone());
        }
    }
    while let Some(e) = queue.pop_front() {
        for m in &spec.maps {
            let y = m.apply(&e)?;
            if y.norm() <= *window && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(FractalSample {
        window: window.clone(),
        elements: seen.into_iter().collect(),
    })
}

/// Value of the box equation's left side at s = 1:
/// sum over maps of Norm(a_i)^(-1/n_i). Exact when every map is affine.
#[derive(Clone, Debug, PartialEq)]
pub enum DensitySum {
    Exact(BigRational),
    Real(f64),
}

impl DensitySum {
    pub fn to_f64(&self) -> f64 {
        match self {
            DensitySum::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            DensitySum::Real(x) => *x,
        }
    }

    pub fn render(&self) -> String {
        match self {
            DensitySum::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
            DensitySum::Real(x) => format!("{}", x),
        }
    }
}

pub fn density_sum(spec: &FractalSpec) -> DensitySum {
    if spec.maps.iter().all(|m| m.degree() == 1) {
        let mut acc = BigRational::zero();
        for m in &spec.maps {
            acc += BigRational::new(BigInt::one(), m.leading().norm());
        }
        DensitySum::Exact(acc)
    } else {
        let mut acc = 0.0;
        for m in &spec.maps {
            let n = m.leading().norm().to_f64().unwrap_or(f64::INFINITY);
            acc += n.powf(-1.0 / m.degree() as f64);
        }
        DensitySum::Real(acc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyStatus {
    Verified,
    Overlap,
    Gap,
    SeedNotCovered,
}

impl VerifyStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerifyStatus::Verified => "verified",
            VerifyStatus::Overlap => "overlap",
            VerifyStatus::Gap => "gap",
            VerifyStatus::SeedNotCovered => "seed-not-covered",
        }
    }
}

/// Overlap witness: `element` lies in the images of maps `map_i` and `map_j`
/// (0-based indices, lowest pair first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapWitness {
    pub element: RingElement,
    pub map_i: usize,
    pub map_j: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub status: VerifyStatus,
    /// Generation window X.
    pub window: BigInt,
    /// Safe verification bound Y: norm(y) <= Y and y = phi_i(x) force
    /// norm(x) <= X, so images restricted to Y are complete.
    pub safe_window: BigInt,
    pub element_count: usize,
    /// Elements of norm <= Y actually checked.
    pub checked_count: usize,
    pub overlap_witnesses: Vec<OverlapWitness>,
    pub gap_witnesses: Vec<RingElement>,
    pub uncovered_seeds: Vec<RingElement>,
    /// Base points that are not fixed points of any map.
    pub seed_only: Vec<RingElement>,
    pub density_sum: DensitySum,
}

/// Conservative bound Y such that any image point of norm <= Y has its
/// preimage inside the generation window X.
fn safe_window(spec: &FractalSpec, window: &BigInt) -> Result<BigInt, IfsError> {
    let mut y_min: Option<BigInt> = None;
    for m in &spec.maps {
        let y_i = match spec.ring {
            RingSpec::Integers => {
                let abs: Vec<BigInt> = m.coeffs().iter().map(|c| c.norm()).collect();
                let n = m.degree();
                if n == 1 {
                    // |a| X - |b|
                    &abs[1] * window - &abs[0]
                } else {
                    // g(t) = |a| t^n - sum_{j<n} |c_j| t^j must be increasing
                    // for t >= X+1: n |a| t >= sum_{j>=1} j |c_j| suffices.
                    let t: BigInt = window + 1;
                    let mut weighted = BigInt::zero();
                    for (j, c) in abs.iter().enumerate().take(n).skip(1) {
                        weighted += BigInt::from(j) * c;
                    }
                    if BigInt::from(n) * &abs[n] * &t < weighted {
                        return Err(IfsError::WindowTooSmall {
                            safe: BigInt::zero(),
                            base_norm: spec.max_base_norm(),
                        });
                    }
                    let mut g = &abs[n] * t.clone().pow(n as u32);
                    let mut tp = BigInt::one();
                    for c in abs.iter().take(n) {
                        g -= c * &tp;
                        tp *= &t;
                    }
                    g - 1
                }
            }
            RingSpec::Quadratic { .. } => {
                // affine only here (validated at construction)
                let a_norm = m.leading().norm();
                let b_norm = m.constant().norm();
                let p = (a_norm * (window + BigInt::one())).sqrt(); // floor
                let q = if b_norm.is_zero() {
                    BigInt::zero()
                } else {
                    let s = b_norm.sqrt();
                    if &s * &s < b_norm {
                        s + 1
                    } else {
                        s
                    }
                };
                if p <= q {
                    return Err(IfsError::WindowTooSmall {
                        safe: BigInt::zero(),
                        base_norm: spec.max_base_norm(),
                    });
                }
                let diff = p - q;
                &diff * &diff - 1
            }
        };
        y_min = Some(match y_min {
            None => y_i,
            Some(cur) => cur.min(y_i),
        });
    }
    Ok(y_min.unwrap())
}

/// Windowed check of the disjoint-union property: images of the generated
/// sample are pairwise disjoint and cover every sample element of norm <= Y,
/// and every base point lies in some image.
pub fn verify_self_similar(
    spec: &FractalSpec,
    window: &BigInt,
) -> Result<VerificationReport, IfsError> {
    let base_norm = spec.max_base_norm();
    let safe = safe_window(spec, window)?;
    if safe <= base_norm {
        return Err(IfsError::WindowTooSmall { safe, base_norm });
    }
    let sample = generate(spec, window)?;
    let images: Vec<BTreeSet<RingElement>> = spec
        .maps
        .iter()
        .map(|m| {
            sample
                .elements
                .iter()
                .map(|e| m.apply(e))
                .collect::<Result<BTreeSet<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let bases: BTreeSet<&RingElement> = spec.base_points.iter().collect();
    let mut overlap_witnesses = Vec::new();
    let mut gap_witnesses = Vec::new();
    let mut uncovered_seeds = Vec::new();
    let mut checked_count = 0usize;
    for e in &sample.elements {
        if e.norm() > safe {
            continue;
        }
        checked_count += 1;
        let covering: Vec<usize> = images
            .iter()
            .enumerate()
            .filter(|(_, img)| img.contains(e))
            .map(|(i, _)| i)
            .collect();
        if covering.len() >= 2 {
            overlap_witnesses.push(OverlapWitness {
                element: e.clone(),
                map_i: covering[0],
                map_j: covering[1],
            });
        } else if covering.is_empty() {
            if bases.contains(e) {
                uncovered_seeds.push(e.clone());
            } else {
                gap_witnesses.push(e.clone());
            }
        }
    }
    // base points above the safe bound cannot occur (safe > base_norm), but
    // coverage of every seed is still required explicitly
    for b in &spec.base_points {
        if b.norm() <= safe {
            continue;
        }
        if !images.iter().any(|img| img.contains(b)) {
            uncovered_seeds.push(b.clone());
        }
    }

    let seed_only: Vec<RingElement> = spec
        .base_points
        .iter()
        .filter(|b| {
            !spec
                .maps
                .iter()
                .any(|m| m.apply(b).map(|y| &y == *b).unwrap_or(false))
        })
        .cloned()
        .collect();

    let status = if !overlap_witnesses.is_empty() {
        VerifyStatus::Overlap
    } else if !gap_witnesses.is_empty() {
        VerifyStatus::Gap
    } else if !uncovered_seeds.is_empty() {
        VerifyStatus::SeedNotCovered
    } else {
        VerifyStatus::Verified
    };

    Ok(VerificationReport {
        status,
        window: window.clone(),
        safe_window: safe,
        element_count: sample.elements.len(),
        checked_count,
        overlap_witnesses,
        gap_witnesses,
        uncovered_seeds,
        seed_only,
        density_sum: density_sum(spec),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

/// Backward-recursion membership test for affine specs: x belongs to the
/// orbit closure iff some chain of exact divisions (x - b_i)/a_i reaches a
/// base point. The frontier lives in the ball of norm
/// max(norm(x), max_i Norm-scale bound of b_i/(a_i - 1)), so the search is
/// finite; `depth_cap` bounds the number of backward steps.
pub fn member(
    spec: &FractalSpec,
    x: &RingElement,
    depth_cap: usize,
) -> Result<Membership, IfsError> {
    if spec.maps.iter().any(|m| m.degree() != 1) {
        return Err(IfsError::MembershipNeedsAffine);
    }
    if x.ring() != spec.ring {
        return Err(RingError::RingMismatch.into());
    }
    let bases: BTreeSet<&RingElement> = spec.base_points.iter().collect();
    let mut visited: BTreeSet<RingElement> = BTreeSet::new();
    let mut frontier = vec![x.clone()];
    visited.insert(x.clone());
    let mut steps = 0usize;
    loop {
        if frontier.iter().any(|e| bases.contains(e)) {
            return Ok(Membership::Yes);
        }
        if frontier.is_empty() {
            return Ok(Membership::No);
        }
        if steps >= depth_cap {
            return Ok(Membership::Unknown);
        }
        steps += 1;
        let mut next = Vec::new();
        for e in &frontier {
            for m in &spec.maps {
                let shifted = e.sub(m.constant())?;
                if let Some(z) = shifted.try_divide(m.leading())? {
                    if visited.insert(z.clone()) {
                        next.push(z);
                    }
                }
            }
        }
        frontier = next;
    }
}

/// Exact counts N(F, x_k) at ascending thresholds; the last threshold doubles
/// as the generation window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    pub thresholds: Vec<BigInt>,
    pub counts: Vec<u64>,
}

pub fn count_series(spec: &FractalSpec, thresholds: &[BigInt]) -> Result<CountSeries, IfsError> {
    if thresholds.is_empty() || thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(IfsError::BadThresholds);
    }
    let sample = generate(spec, thresholds.last().unwrap())?;
    let mut norms: Vec<BigInt> = sample.elements.iter().map(|e| e.norm()).collect();
    norms.sort();
    let counts = thresholds
        .iter()
        .map(|t| norms.partition_point(|n| n <= t) as u64)
        .collect();
    Ok(CountSeries {
        thresholds: thresholds.to_vec(),
        counts,
    })
}

/// Sanity scan used by tests: the sample is closed under every map within
/// the window.
pub fn closed_under_maps(spec: &FractalSpec, sample: &FractalSample) -> Result<bool, IfsError> {
    let set: BTreeSet<&RingElement> = sample.elements.iter().collect();
    for e in &sample.elements {
        for m in &spec.maps {
            let y = m.apply(e)?;
            if y.norm() <= sample.window && !set.contains(&y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Brute-force membership over a small window by scanning the whole norm
/// ball with `member`. Test oracle helper.
pub fn window_elements_by_member(
    spec: &FractalSpec,
    window: &BigInt,
    depth_cap: usize,
) -> Result<Vec<RingElement>, IfsError> {
    let mut out = Vec::new();
    for e in elements_of_norm_at_most(spec.ring, window) {
        if member(spec, &e, depth_cap)? == Membership::Yes {
            out.push(e);
        }
    }
    Ok(out)
}

/// Map each element of the sample to the set of map indices covering it.
/// Exposed for report rendering and tests.
pub fn coverage_map(
    spec: &FractalSpec,
    sample: &FractalSample,
) -> Result<BTreeMap<RingElement, Vec<usize>>, IfsError> {
    let images: Vec<BTreeSet<RingElement>> = spec
        .maps
        .iter()
        .map(|m| {
            sample
                .elements
                .iter()
                .map(|e| m.apply(e))
                .collect::<Result<BTreeSet<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = BTreeMap::new();
    for e in &sample.elements {
        let covering: Vec<usize> = images
            .iter()
            .enumerate()
            .filter(|(_, img)| img.contains(e))
            .map(|(i, _)| i)
            .collect();
        out.insert(e.clone(), covering);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digits_037() -> FractalSpec {
        FractalSpec::digit_system(10, &[0, 3, 7]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| RingElement::integer(x)).collect()
    }

    /// Independent oracle for digit systems: integers in [0, window] whose
    /// base-beta digits all lie in the digit set.
    fn digit_filter(beta: u64, digits: &[u64], window: u64) -> Vec<RingElement> {
        (0..=window)
            .filter(|&m| {
                let mut m = m;
                loop {
                    if !digits.contains(&(m % beta)) {
                        return false;
                    }
                    m /= beta;
                    if m == 0 {
                        return true;
                    }
                }
            })
            .map(|m| RingElement::integer(m as i64))
            .collect()
    }

    #[test]
    fn linear_map_must_expand() {
        let e = SimilarityMap::affine(RingElement::integer(1), RingElement::integer(3));
        assert_eq!(e.unwrap_err(), IfsError::NonExpandingLinearMap);
    }

    #[test]
    fn polynomial_maps_rejected_over_quadratic() {
        let ring = RingSpec::quadratic(-1).unwrap();
        let c = |u: i64, v: i64| RingElement::quadratic(ring, u, v).unwrap();
        let e = SimilarityMap::new(ring, vec![c(0, 0), c(0, 0), c(1, 0)]);
        assert_eq!(e.unwrap_err(), IfsError::PolynomialOverQuadratic);
    }

    #[test]
    fn generate_digit_spec_small() {
        let sample = generate(&digits_037(), &BigInt::from(100)).unwrap();
        assert_eq!(sample.elements, ints(&[0, 3, 7, 30, 33, 37, 70, 73, 77]));
    }

    #[test]
    fn generate_matches_digit_filter_oracle() {
        for (beta, digits) in [
            (10u64, vec![0u64, 3, 7]),
            (10, vec![0, 3]),
            (2, vec![0, 1]),
            (7, vec![0, 2, 5]),
        ] {
            let spec = FractalSpec::digit_system(
                beta as i64,
                &digits.iter().map(|&d| d as i64).collect::<Vec<_>>(),
            )
            .unwrap();
            let window = 1_000_000u64;
            let sample = generate(&spec, &BigInt::from(window)).unwrap();
            assert_eq!(sample.elements, digit_filter(beta, &digits, window));
        }
    }

    #[test]
    fn generate_doubling_fixed_point() {
        let spec = FractalSpec::new(
            RingSpec::Integers,
            vec![SimilarityMap::affine(RingElement::integer(2), RingElement::integer(0)).unwrap()],
            vec![RingElement::integer(0)],
        )
        .unwrap();
        let sample = generate(&spec, &BigInt::from(1_000_000)).unwrap();
        assert_eq!(sample.elements, ints(&[0]));
    }

    fn gauss_binary() -> FractalSpec {
        let ring = RingSpec::quadratic(-1).unwrap();
        let c = |u: i64, v: i64| RingElement::quadratic(ring, u, v).unwrap();
        FractalSpec::new(
            ring,
            vec![
                SimilarityMap::affine(c(2, 0), c(0, 0)).unwrap(),
                SimilarityMap::affine(c(2, 0), c(1, 0)).unwrap(),
            ],
            vec![c(0, 0)],
        )
        .unwrap()
    }

    #[test]
    fn generate_gaussian_binary() {
        // base-2 digit expansions of the nonnegative integers inside Z[i]
        let sample = generate(&gauss_binary(), &BigInt::from(20)).unwrap();
        let ring = RingSpec::quadratic(-1).unwrap();
        let want: Vec<RingElement> = (0..=4)
            .map(|u| RingElement::quadratic(ring, u, 0).unwrap())
            .collect();
        assert_eq!(sample.elements, want);
    }

    #[test]
    fn closure_invariant_holds() {
        for spec in [digits_037(), gauss_binary()] {
            let sample = generate(&spec, &BigInt::from(10_000)).unwrap();
            assert!(closed_under_maps(&spec, &sample).unwrap());
        }
    }

    #[test]
    fn verify_digit_spec() {
        let report = verify_self_similar(&digits_037(), &BigInt::from(1_000_000)).unwrap();
        assert_eq!(report.status, VerifyStatus::Verified);
        assert!(report.overlap_witnesses.is_empty());
        assert!(report.gap_witnesses.is_empty());
        assert_eq!(report.density_sum.render(), "3/10");
    }

    #[test]
    fn verify_overlap_at_shared_fixed_point() {
        let spec = FractalSpec::new(
            RingSpec::Integers,
            vec![
                SimilarityMap::affine(RingElement::integer(2), RingElement::integer(0)).unwrap(),
                SimilarityMap::affine(RingElement::integer(3), RingElement::integer(0)).unwrap(),
            ],
            vec![RingElement::integer(0)],
        )
        .unwrap();
        let report = verify_self_similar(&spec, &BigInt::from(1000)).unwrap();
        assert_eq!(report.status, VerifyStatus::Overlap);
        let w = &report.overlap_witnesses[0];
        assert_eq!(w.element, RingElement::integer(0));
        assert_eq!((w.map_i, w.map_j), (0, 1));
    }

    #[test]
    fn verify_binary_partition() {
        let spec = FractalSpec::digit_system(2, &[0, 1]).unwrap();
        let report = verify_self_similar(&spec, &BigInt::from(1_000_000)).unwrap();
        assert_eq!(report.status, VerifyStatus::Verified);
        assert_eq!(report.density_sum.render(), "1/1");
    }

    #[test]
    fn verify_seed_not_covered() {
        // base point 1 is fixed by no map and lies in no image
        let spec = FractalSpec::new(
            RingSpec::Integers,
            vec![SimilarityMap::affine(RingElement::integer(2), RingElement::integer(0)).unwrap()],
            vec![RingElement::integer(1)],
        )
        .unwrap();
        let report = verify_self_similar(&spec, &BigInt::from(1000)).unwrap();
        assert_eq!(report.status, VerifyStatus::SeedNotCovered);
        assert_eq!(report.uncovered_seeds, ints(&[1]));
        assert_eq!(report.seed_only, ints(&[1]));
    }

    #[test]
    fn member_digit_examples() {
        let spec = digits_037();
        assert_eq!(
            member(&spec, &RingElement::integer(3037), 10_000).unwrap(),
            Membership::Yes
        );
        assert_eq!(
            member(&spec, &RingElement::integer(12), 10_000).unwrap(),
            Membership::No
        );
        let all = FractalSpec::digit_system(2, &[0, 1]).unwrap();
        assert_eq!(
            member(&all, &RingElement::integer(5), 10_000).unwrap(),
            Membership::Yes
        );
    }

    #[test]
    fn member_agrees_with_generate_on_window() {
        for spec in [
            digits_037(),
            FractalSpec::digit_system(2, &[0, 1]).unwrap(),
            FractalSpec::digit_system(5, &[0, 2]).unwrap(),
        ] {
            let window = BigInt::from(2000);
            let sample = generate(&spec, &window).unwrap();
            let by_member = window_elements_by_member(&spec, &window, 10_000).unwrap();
            assert_eq!(sample.elements, by_member);
        }
    }

    #[test]
    fn member_depth_cap_unknown() {
        let spec = digits_037();
        assert_eq!(
            member(&spec, &RingElement::integer(3037), 1).unwrap(),
            Membership::Unknown
        );
    }

    #[test]
    fn count_series_digit_powers() {
        let thresholds: Vec<BigInt> = (1..=8).map(|k| BigInt::from(10u64.pow(k))).collect();
        let series = count_series(&digits_037(), &thresholds).unwrap();
        let want: Vec<u64> = (1..=8).map(|k| 3u64.pow(k)).collect();
        assert_eq!(series.counts, want);
    }

    #[test]
    fn count_series_singleton() {
        let spec = FractalSpec::new(
            RingSpec::Integers,
            vec![SimilarityMap::affine(RingElement::integer(2), RingElement::integer(0)).unwrap()],
            vec![RingElement::integer(0)],
        )
        .unwrap();
        let thresholds: Vec<BigInt> = vec![10.into(), 100.into(), 1000.into()];
        let series = count_series(&spec, &thresholds).unwrap();
        assert_eq!(series.counts, vec![1, 1, 1]);
    }

    #[test]
    fn count_series_gaussian_binary() {
        let thresholds: Vec<BigInt> = (1..=6).map(|k| BigInt::from(4u64.pow(k))).collect();
        let series = count_series(&gauss_binary(), &thresholds).unwrap();
        let want: Vec<u64> = (1..=6).map(|k| 2u64.pow(k) + 1).collect();
        assert_eq!(series.counts, want);
    }

    #[test]
    fn density_sums() {
        assert_eq!(density_sum(&digits_037()).render(), "3/10");
        assert_eq!(
            density_sum(&FractalSpec::digit_system(2, &[0, 1]).unwrap()).render(),
            "1/1"
        );
        // Z[i], maps 2z and 2z+1: Norm(2) = 4, so 2 * (1/4) = 1/2
        assert_eq!(density_sum(&gauss_binary()).render(), "1/2");
    }

    #[test]
    fn count_series_rejects_bad_thresholds() {
        let e = count_series(&digits_037(), &[BigInt::from(10), BigInt::from(10)]);
        assert_eq!(e.unwrap_err(), IfsError::BadThresholds);
    }
}
