//! Points of P^n(Q) with Weil heights, homogeneous polynomial endomorphisms
//! as similarity maps, orbit-generated projective fractals with windowed
//! verification, height-scaling probes, and preperiodic-point search on P^1.

use crate::ifs::VerifyStatus;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProjError {
    #[error("zero tuple is not a projective point")]
    ZeroPoint,
    #[error("monomial exponent tuple has wrong arity")]
    BadArity,
    #[error("endomorphism components must be homogeneous of a common degree >= 1")]
    NotHomogeneous,
    #[error("endomorphism has no nonzero component")]
    ZeroEndomorphism,
    #[error("dimension mismatch between point/endomorphism")]
    DimensionMismatch,
    #[error("indeterminacy: all components vanish at {0}")]
    Indeterminacy(String),
    #[error("height bound {bound} is below the largest base-point height {base}")]
    BoundBelowBasePoints { bound: BigInt, base: BigInt },
    #[error("window too small: safe height bound {0} does not reach the base points")]
    WindowTooSmall(BigInt),
    #[error("preperiodic search requires P^1 and degree >= 2")]
    PreperiodicUnsupported,
}

/// Canonical representative of a point of P^n(Q): integer coordinates with
/// gcd 1 and positive first nonzero coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    /// Divide by the gcd and fix the sign convention. Idempotent and
    /// invariant under nonzero scalar multiples.
    pub fn normalize(coords: Vec<BigInt>) -> Result<Self, ProjError> {
        if coords.is_empty() || coords.iter().all(|c| c.is_zero()) {
            return Err(ProjError::ZeroPoint);
        }
        let mut g = BigInt::zero();
        for c in &coords {
            g = g.gcd(c);
        }
        let mut reduced: Vec<BigInt> = coords.into_iter().map(|c| c / &g).collect();
        let first = reduced.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            for c in &mut reduced {
                *c = -&*c;
            }
        }
        Ok(ProjPoint { coords: reduced })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self, ProjError> {
        ProjPoint::normalize(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Multiplicative Weil height: max |coordinate| of the canonical
    /// representative.
    pub fn height(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().unwrap()
    }

    /// Logarithmic height log H.
    pub fn log_height(&self) -> f64 {
        bigint_ln(&self.height())
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Natural log of a positive BigInt, safe for values beyond f64 range.
fn bigint_ln(x: &BigInt) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v.ln();
        }
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(53);
    let mantissa = (x >> shift).to_f64().unwrap();
    mantissa.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigInt,
    pub exps: Vec<u32>,
}

/// A polynomial endomorphism of P^n: n+1 homogeneous integer polynomials of
/// common degree m >= 1 in n+1 variables, one per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyEndo {
    components: Vec<Vec<Monomial>>,
    degree: u32,
}

impl PolyEndo {
    pub fn new(components: Vec<Vec<Monomial>>) -> Result<Self, ProjError> {
        let nvars = components.len();
        if nvars < 2 {
            return Err(ProjError::DimensionMismatch);
        }
        let mut degree: Option<u32> = None;
        let mut any_nonzero = false;
        for comp in &components {
            for mono in comp {
                if mono.exps.len() != nvars {
                    return Err(ProjError::BadArity);
                }
                if mono.coeff.is_zero() {
                    continue;
                }
                any_nonzero = true;
                let total: u32 = mono.exps.iter().sum();
                match degree {
                    None => degree = Some(total),
                    Some(d) if d != total => return Err(ProjError::NotHomogeneous),
                    _ => {}
                }
            }
        }
        if !any_nonzero {
            return Err(ProjError::ZeroEndomorphism);
        }
        let degree = degree.unwrap();
        if degree == 0 {
            return Err(ProjError::NotHomogeneous);
        }
        Ok(PolyEndo { components, degree })
    }

    /// Map on P^1 given by coordinate polynomials in (x, y).
    /// Convenience for tests: f(x) homogenized.
    pub fn p1_from_monomials(
        numer: &[(i64, u32, u32)],
        denom: &[(i64, u32, u32)],
    ) -> Result<Self, ProjError> {
        let build = |terms: &[(i64, u32, u32)]| {
            terms
                .iter()
                .map(|&(c, ex, ey)| Monomial {
                    coeff: BigInt::from(c),
                    exps: vec![ex, ey],
                })
                .collect::<Vec<_>>()
        };
        PolyEndo::new(vec![build(numer), build(denom)])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Monomial>] {
        &self.components
    }

    /// Max over coordinates of the sum of absolute coefficient values;
    /// bounds the pre-reduction coordinate growth H(f(P)) <= C_f H(P)^m.
    pub fn coeff_bound(&self) -> BigInt {
        self.components
            .iter()
            .map(|comp| comp.iter().map(|m| m.coeff.abs()).sum::<BigInt>())
            .max()
            .unwrap()
    }

    /// Exact evaluation followed by mandatory gcd normalization.
    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint, ProjError> {
        if p.coords.len() != self.nvars() {
            return Err(ProjError::DimensionMismatch);
        }
        let values: Vec<BigInt> = self
            .components
            .iter()
            .map(|comp| {
                let mut acc = BigInt::zero();
                for mono in comp {
                    if mono.coeff.is_zero() {
                        continue;
                    }
                    let mut term = mono.coeff.clone();
                    for (c, &e) in p.coords.iter().zip(&mono.exps) {
                        for _ in 0..e {
                            term *= c;
                        }
                    }
                    acc += term;
                }
                acc
            })
            .collect();
        if values.iter().all(|v| v.is_zero()) {
            return Err(ProjError::Indeterminacy(p.to_string()));
        }
        ProjPoint::normalize(values)
    }
}

/// BFS closure of the base points under all endomorphisms, pruning points of
/// height above the bound. Canonically sorted.
pub fn orbit_generate(
    endos: &[PolyEndo],
    base: &[ProjPoint],
    h_max: &BigInt,
) -> Result<Vec<ProjPoint>, ProjError> {
    if endos.is_empty() || base.is_empty() {
        return Err(ProjError::DimensionMismatch);
    }
    let nvars = endos[0].nvars();
    if endos.iter().any(|e| e.nvars() != nvars) || base.iter().any(|p| p.coords.len() != nvars) {
        return Err(ProjError::DimensionMismatch);
    }
    let max_base = base.iter().map(|p| p.height()).max().unwrap();
    if *h_max < max_base {
        return Err(ProjError::BoundBelowBasePoints {
            bound: h_max.clone(),
            base: max_base,
        });
    }
    let mut seen: BTreeSet<ProjPoint> = BTreeSet::new();
    let mut queue: Vec<ProjPoint> = Vec::new();
    for p in base {
        if seen.insert(p.clone()) {
            queue.push(p.clone());
        }
    }
    while let Some(p) = queue.pop() {
        for f in endos {
            let q = f.apply(&p)?;
            if q.height() <= *h_max && seen.insert(q.clone()) {
                queue.push(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjVerification {
    pub status: VerifyStatus,
    /// Generation height bound.
    pub h_max: BigInt,
    /// Heights up to which unique coverage was checked:
    /// floor((H_max / C_f)^(1/m_max) / margin).
    pub window_y: BigInt,
    pub coeff_bound: BigInt,
    pub margin: f64,
    pub orbit_size: usize,
    pub checked_count: usize,
    pub overlap_witnesses: Vec<(ProjPoint, usize, usize)>,
    pub gap_witnesses: Vec<ProjPoint>,
    pub uncovered_seeds: Vec<ProjPoint>,
}

/// Windowed disjoint-union check in projective space. Image sets are
/// computed from the generated orbit; disjointness and unique coverage are
/// checked for orbit points of height <= Y, where Y is conservative because
/// gcd cancellation can shrink image heights unpredictably.
pub fn verify_projective_self_similar(
    endos: &[PolyEndo],
    base: &[ProjPoint],
    h_max: &BigInt,
    margin: f64,
) -> Result<ProjVerification, ProjError> {
    let c_f = endos.iter().map(|f| f.coeff_bound()).max().unwrap();
    let m_max = endos.iter().map(|f| f.degree()).max().unwrap();
    let hf = bigint_ln(h_max);
    let cf = bigint_ln(&c_f);
    let y = (((hf - cf) / m_max as f64).exp() / margin).floor();
    let window_y = BigInt::from(y.max(0.0) as u64);
    let max_base = base.iter().map(|p| p.height()).max().unwrap();
    if window_y < max_base || window_y.is_zero() {
        return Err(ProjError::WindowTooSmall(window_y));
    }
    let orbit = orbit_generate(endos, base, h_max)?;
    let images: Vec<BTreeSet<ProjPoint>> = endos
        .iter()
        .map(|f| {
            orbit
                .iter()
                .map(|p| f.apply(p))
                .collect::<Result<BTreeSet<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let bases: BTreeSet<&ProjPoint> = base.iter().collect();
    let mut overlap_witnesses = Vec::new();
    let mut gap_witnesses = Vec::new();
    let mut uncovered_seeds = Vec::new();
    let mut checked_count = 0usize;
    for p in &orbit {
        if p.height() > window_y {
            continue;
        }
        checked_count += 1;
        let covering: Vec<usize> = images
            .iter()
            .enumerate()
            .filter(|(_, img)| img.contains(p))
            .map(|(i, _)| i)
            .collect();
        if covering.len() >= 2 {
            overlap_witnesses.push((p.clone(), covering[0], covering[1]));
        } else if covering.is_empty() {
            if bases.contains(p) {
                uncovered_seeds.push(p.clone());
            } else {
                gap_witnesses.push(p.clone());
            }
        }
    }
    for b in base {
        if b.height() <= window_y {
            continue;
        }
        if !images.iter().any(|img| img.contains(b)) {
            uncovered_seeds.push(b.clone());
        }
    }
    let status = if !overlap_witnesses.is_empty() {
        VerifyStatus::Overlap
    } else if !gap_witnesses.is_empty() {
        VerifyStatus::Gap
    } else if !uncovered_seeds.is_empty() {
        VerifyStatus::SeedNotCovered
    } else {
        VerifyStatus::Verified
    };
    Ok(ProjVerification {
        status,
        h_max: h_max.clone(),
        window_y,
        coeff_bound: c_f,
        margin,
        orbit_size: orbit.len(),
        checked_count,
        overlap_witnesses,
        gap_witnesses,
        uncovered_seeds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightScaling {
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub sample_size: usize,
}

/// Empirical probe of |h(f(P)) - m h(P)| over a sample. Bounded deviations
/// support, but do not prove, the O(1) height-scaling hypothesis.
pub fn check_height_scaling(f: &PolyEndo, sample: &[ProjPoint]) -> Result<HeightScaling, ProjError> {
    if sample.is_empty() {
        return Err(ProjError::DimensionMismatch);
    }
    let m = f.degree() as f64;
    let mut max_dev = 0.0f64;
    let mut sum = 0.0f64;
    for p in sample {
        let q = f.apply(p)?;
        let dev = (q.log_height() - m * p.log_height()).abs();
        max_dev = max_dev.max(dev);
        sum += dev;
    }
    Ok(HeightScaling {
        max_deviation: max_dev,
        mean_deviation: sum / sample.len() as f64,
        sample_size: sample.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitClass {
    Preperiodic { tail: usize, cycle: usize },
    Escaped,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreperiodicPoint {
    pub point: ProjPoint,
    pub tail: usize,
    pub cycle: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreperiodicReport {
    pub preperiodic: Vec<PreperiodicPoint>,
    pub escaped: usize,
    pub unresolved: Vec<ProjPoint>,
    pub seeds_scanned: usize,
    pub h_search: u64,
    pub iteration_cap: usize,
    pub h_escape: u64,
}

/// All canonical points of P^1(Q) of height <= bound, sorted.
pub fn p1_points_of_height_at_most(bound: u64) -> Vec<ProjPoint> {
    let mut out = BTreeSet::new();
    out.insert(ProjPoint::from_i64(&[0, 1]).unwrap());
    let b = bound as i64;
    for p in 1..=b {
        for q in -b..=b {
            if p.gcd(&q) == 1 {
                out.insert(ProjPoint::from_i64(&[p, q]).unwrap());
            }
        }
    }
    out.into_iter().collect()
}

/// Classify a single forward orbit under the caps.
pub fn classify_orbit(
    f: &PolyEndo,
    seed: &ProjPoint,
    iteration_cap: usize,
    h_escape: u64,
) -> Result<OrbitClass, ProjError> {
    let escape = BigInt::from(h_escape);
    let mut seen: HashMap<ProjPoint, usize> = HashMap::new();
    let mut current = seed.clone();
    for step in 0..=iteration_cap {
        if let Some(&first) = seen.get(&current) {
            return Ok(OrbitClass::Preperiodic {
                tail: first,
                cycle: step - first,
            });
        }
        if current.height() > escape {
            return Ok(OrbitClass::Escaped);
        }
        seen.insert(current.clone(), step);
        current = f.apply(&current)?;
    }
    Ok(OrbitClass::Unresolved)
}

/// Exhaustive seed scan of P^1(Q) up to the search height; every orbit is
/// iterated with cycle detection. "Escaped" is a classification under the
/// caps, not a theorem.
pub fn find_preperiodic(
    f: &PolyEndo,
    h_search: u64,
    iteration_cap: usize,
    h_escape: u64,
) -> Result<PreperiodicReport, ProjError> {
    if f.nvars() != 2 || f.degree() < 2 {
        return Err(ProjError::PreperiodicUnsupported);
    }
    let seeds = p1_points_of_height_at_most(h_search);
    let mut preperiodic = Vec::new();
    let mut escaped = 0usize;
    let mut unresolved = Vec::new();
    for seed in &seeds {
        match classify_orbit(f, seed, iteration_cap, h_escape)? {
            OrbitClass::Preperiodic { tail, cycle } => preperiodic.push(PreperiodicPoint {
                point: seed.clone(),
                tail,
                cycle,
            }),
            OrbitClass::Escaped => escaped += 1,
            OrbitClass::Unresolved => unresolved.push(seed.clone()),
        }
    }
    Ok(PreperiodicReport {
        preperiodic,
        escaped,
        unresolved,
        seeds_scanned: seeds.len(),
        h_search,
        iteration_cap,
        h_escape,
    })
}
