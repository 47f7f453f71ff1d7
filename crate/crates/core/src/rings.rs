//! Exact arithmetic for the ambient rings: the rational integers and
//! imaginary-quadratic orders Z[sqrt(d)] with d < 0 squarefree.
//!
//! Elements carry their ring tag so mixed-ring arithmetic is rejected at
//! runtime. The norm is |x| on Z and u^2 + |d| v^2 on Z[sqrt(d)]; it is
//! nonnegative, vanishes only at zero, and is multiplicative in the
//! quadratic case. Half-integer maximal orders (d = 1 mod 4) are not
//! supported.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid discriminant {0}: must be negative and squarefree")]
    InvalidDiscriminant(i64),
    #[error("element does not belong to ring {0}")]
    WrongKind(&'static str),
}

/// Ambient ring: Z, or the order Z[sqrt(d)] for a negative squarefree d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Integers,
    Quadratic { d: i64 },
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl RingSpec {
    /// The order Z[sqrt(d)]. Rejects d >= 0 and non-squarefree d.
    pub fn quadratic(d: i64) -> Result<Self, RingError> {
        if d >= 0 || !is_squarefree(d.unsigned_abs()) {
            return Err(RingError::InvalidDiscriminant(d));
        }
        Ok(RingSpec::Quadratic { d })
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self, RingSpec::Quadratic { .. })
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Quadratic { d } => write!(f, "Z[sqrt({})]", d),
        }
    }
}

/// Coordinates of a ring element. `Quad(u, v)` represents u + v*sqrt(d).
///
/// The derived order is the canonical one used everywhere downstream:
/// numeric on Z, lexicographic on (u, v) in the quadratic case.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coords {
    Int(BigInt),
    Quad(BigInt, BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    ring: RingSpec,
    coords: Coords,
}

impl RingElement {
    pub fn integer(value: impl Into<BigInt>) -> Self {
        RingElement {
            ring: RingSpec::Integers,
            coords: Coords::Int(value.into()),
        }
    }

    pub fn quadratic(
        ring: RingSpec,
        u: impl Into<BigInt>,
        v: impl Into<BigInt>,
    ) -> Result<Self, RingError> {
        if !ring.is_quadratic() {
            return Err(RingError::WrongKind("expected a quadratic ring"));
        }
        Ok(RingElement {
            ring,
            coords: Coords::Quad(u.into(), v.into()),
        })
    }

    pub fn zero(ring: RingSpec) -> Self {
        match ring {
            RingSpec::Integers => RingElement::integer(0),
            RingSpec::Quadratic { .. } => RingElement {
                ring,
                coords: Coords::Quad(BigInt::zero(), BigInt::zero()),
            },
        }
    }

    pub fn one(ring: RingSpec) -> Self {
        match ring {
            RingSpec::Integers => RingElement::integer(1),
            RingSpec::Quadratic { .. } => RingElement {
                ring,
                coords: Coords::Quad(BigInt::from(1), BigInt::zero()),
            },
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        match &self.coords {
            Coords::Int(x) => x.is_zero(),
            Coords::Quad(u, v) => u.is_zero() && v.is_zero(),
        }
    }

    fn check_same_ring(&self, other: &Self) -> Result<(), RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same_ring(other)?;
        let coords = match (&self.coords, &other.coords) {
            (Coords::Int(a), Coords::Int(b)) => Coords::Int(a + b),
            (Coords::Quad(u1, v1), Coords::Quad(u2, v2)) => Coords::Quad(u1 + u2, v1 + v2),
            _ => return Err(RingError::RingMismatch),
        };
        Ok(RingElement { ring: self.ring, coords })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same_ring(other)?;
        let coords = match (&self.coords, &other.coords) {
            (Coords::Int(a), Coords::Int(b)) => Coords::Int(a - b),
            (Coords::Quad(u1, v1), Coords::Quad(u2, v2)) => Coords::Quad(u1 - u2, v1 - v2),
            _ => return Err(RingError::RingMismatch),
        };
        Ok(RingElement { ring: self.ring, coords })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same_ring(other)?;
        let coords = match (&self.coords, &other.coords) {
            (Coords::Int(a), Coords::Int(b)) => Coords::Int(a * b),
            (Coords::Quad(u1, v1), Coords::Quad(u2, v2)) => {
                let d = match self.ring {
                    RingSpec::Quadratic { d } => BigInt::from(d),
                    RingSpec::Integers => unreachable!(),
                };
                // (u1 + v1 s)(u2 + v2 s) = (u1 u2 + d v1 v2) + (u1 v2 + v1 u2) s
                Coords::Quad(u1 * u2 + &d * v1 * v2, u1 * v2 + v1 * u2)
            }
            _ => return Err(RingError::RingMismatch),
        };
        Ok(RingElement { ring: self.ring, coords })
    }

    pub fn neg(&self) -> Self {
        let coords = match &self.coords {
            Coords::Int(a) => Coords::Int(-a),
            Coords::Quad(u, v) => Coords::Quad(-u, -v),
        };
        RingElement { ring: self.ring, coords }
    }

    /// |x| on Z; u^2 + |d| v^2 on Z[sqrt(d)].
    pub fn norm(&self) -> BigInt {
        match &self.coords {
            Coords::Int(x) => x.abs(),
            Coords::Quad(u, v) => {
                let d = match self.ring {
                    RingSpec::Quadratic { d } => d,
                    RingSpec::Integers => unreachable!(),
                };
                u * u + BigInt::from(d.unsigned_abs()) * v * v
            }
        }
    }

    /// Exact division: `Some(q)` with `q * divisor == self`, or `None` when
    /// no such element exists. Quotients are unique (integral domains).
    pub fn try_divide(&self, divisor: &Self) -> Result<Option<Self>, RingError> {
        self.check_same_ring(divisor)?;
        if divisor.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        match (&self.coords, &divisor.coords) {
            (Coords::Int(a), Coords::Int(b)) => {
                let (q, r) = a.div_rem(b);
                if r.is_zero() {
                    Ok(Some(RingElement::integer(q)))
                } else {
                    Ok(None)
                }
            }
            (Coords::Quad(_, _), Coords::Quad(yu, yv)) => {
                // x / y = x * conj(y) / Norm(y)
                let conj = RingElement {
                    ring: self.ring,
                    coords: Coords::Quad(yu.clone(), -yv),
                };
                let num = self.mul(&conj)?;
                let n = divisor.norm();
                match num.coords {
                    Coords::Quad(nu, nv) => {
                        let (qu, ru) = nu.div_rem(&n);
                        let (qv, rv) = nv.div_rem(&n);
                        if ru.is_zero() && rv.is_zero() {
                            Ok(Some(RingElement {
                                ring: self.ring,
                                coords: Coords::Quad(qu, qv),
                            }))
                        } else {
                            Ok(None)
                        }
                    }
                    Coords::Int(_) => unreachable!(),
                }
            }
            _ => Err(RingError::RingMismatch),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.coords {
            Coords::Int(x) => write!(f, "{}", x),
            Coords::Quad(u, v) => write!(f, "({}, {})", u, v),
        }
    }
}

/// All elements of norm at most `bound`, in canonical order: ascending on Z,
/// lexicographic on (u, v) in the quadratic case. Empty for negative bounds.
pub fn elements_of_norm_at_most(ring: RingSpec, bound: &BigInt) -> Vec<RingElement> {
    let mut out = Vec::new();
    if bound.sign() == num_bigint::Sign::Minus {
        return out;
    }
    match ring {
        RingSpec::Integers => {
            let mut x = -bound.clone();
            while &x <= bound {
                out.push(RingElement::integer(x.clone()));
                x += 1;
            }
        }
        RingSpec::Quadratic { d } => {
            let abs_d = BigInt::from(d.unsigned_abs());
            let u_max = bound.sqrt();
            let mut u = -u_max.clone();
            while u <= u_max {
                let rem = bound - &u * &u;
                let v_max = (&rem / &abs_d).sqrt();
                let mut v = -v_max.clone();
                while v <= v_max {
                    // floor(sqrt) can overshoot by rounding of rem/|d|
                    if &u * &u + &abs_d * &v * &v <= *bound {
                        out.push(RingElement {
                            ring,
                            coords: Coords::Quad(u.clone(), v.clone()),
                        });
                    }
                    v += 1;
                }
                u += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zi() -> RingSpec {
        RingSpec::quadratic(-1).unwrap()
    }

    fn gauss(u: i64, v: i64) -> RingElement {
        RingElement::quadratic(zi(), u, v).unwrap()
    }

    #[test]
    fn integer_arithmetic() {
        let a = RingElement::integer(7);
        let b = RingElement::integer(-3);
        assert_eq!(a.add(&b).unwrap(), RingElement::integer(4));
        assert_eq!(a.sub(&b).unwrap(), RingElement::integer(10));
        assert_eq!(a.mul(&b).unwrap(), RingElement::integer(-21));
        assert_eq!(a.neg(), RingElement::integer(-7));
    }

    #[test]
    fn gaussian_square_of_one_plus_i() {
        let x = gauss(1, 1);
        assert_eq!(x.mul(&x).unwrap(), gauss(0, 2));
    }

    #[test]
    fn sqrt_minus_two_addition() {
        let ring = RingSpec::quadratic(-2).unwrap();
        let a = RingElement::quadratic(ring, 1, 2).unwrap();
        let b = RingElement::quadratic(ring, 0, -2).unwrap();
        assert_eq!(a.add(&b).unwrap(), RingElement::quadratic(ring, 1, 0).unwrap());
    }

    #[test]
    fn ring_mismatch_rejected() {
        let a = RingElement::integer(1);
        let b = gauss(1, 0);
        assert_eq!(a.add(&b), Err(RingError::RingMismatch));
    }

    #[test]
    fn norms() {
        assert_eq!(RingElement::integer(-7).norm(), BigInt::from(7));
        assert_eq!(gauss(3, 4).norm(), BigInt::from(25));
        let ring = RingSpec::quadratic(-2).unwrap();
        let e = RingElement::quadratic(ring, 1, 2).unwrap();
        assert_eq!(e.norm(), BigInt::from(9));
    }

    #[test]
    fn norm_zero_iff_zero() {
        assert!(RingElement::zero(zi()).norm().is_zero());
        assert!(!gauss(0, 1).norm().is_zero());
    }

    #[test]
    fn discriminant_validation() {
        assert!(RingSpec::quadratic(-1).is_ok());
        assert!(RingSpec::quadratic(-2).is_ok());
        assert!(RingSpec::quadratic(-5).is_ok());
        assert_eq!(RingSpec::quadratic(1), Err(RingError::InvalidDiscriminant(1)));
        assert_eq!(RingSpec::quadratic(0), Err(RingError::InvalidDiscriminant(0)));
        assert_eq!(RingSpec::quadratic(-4), Err(RingError::InvalidDiscriminant(-4)));
        assert_eq!(RingSpec::quadratic(-12), Err(RingError::InvalidDiscriminant(-12)));
    }

    #[test]
    fn try_divide_integers() {
        let q = RingElement::integer(15)
            .try_divide(&RingElement::integer(5))
            .unwrap();
        assert_eq!(q, Some(RingElement::integer(3)));
        let q = RingElement::integer(7)
            .try_divide(&RingElement::integer(2))
            .unwrap();
        assert_eq!(q, None);
    }

    #[test]
    fn try_divide_gaussian() {
        // (5 + 5i) / (1 + 2i) = 3 - i; multiply-back: (3 - i)(1 + 2i) = 5 + 5i
        let q = gauss(5, 5).try_divide(&gauss(1, 2)).unwrap();
        assert_eq!(q, Some(gauss(3, -1)));
        assert_eq!(gauss(3, -1).mul(&gauss(1, 2)).unwrap(), gauss(5, 5));
    }

    #[test]
    fn divide_by_zero_rejected() {
        let e = gauss(1, 1).try_divide(&RingElement::zero(zi()));
        assert_eq!(e, Err(RingError::DivisionByZero));
    }

    #[test]
    fn enumeration_integers() {
        let got = elements_of_norm_at_most(RingSpec::Integers, &BigInt::from(3));
        let want: Vec<_> = (-3..=3).map(RingElement::integer).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn enumeration_gaussian() {
        let got = elements_of_norm_at_most(zi(), &BigInt::from(2));
        assert_eq!(got.len(), 9);
        for e in &got {
            assert!(e.norm() <= BigInt::from(2));
        }
        assert!(got.contains(&gauss(1, 1)));
        assert!(got.contains(&gauss(-1, -1)));
        // lexicographic on (u, v)
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(got, sorted);
    }

    #[test]
    fn enumeration_gaussian_zero_bound() {
        let got = elements_of_norm_at_most(zi(), &BigInt::from(0));
        assert_eq!(got, vec![RingElement::zero(zi())]);
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(u1 in -100i64..100, v1 in -100i64..100,
                                  u2 in -100i64..100, v2 in -100i64..100,
                                  d in prop::sample::select(vec![-1i64, -2, -3, -5, -7])) {
            let ring = RingSpec::quadratic(d).unwrap();
            let x = RingElement::quadratic(ring, u1, v1).unwrap();
            let y = RingElement::quadratic(ring, u2, v2).unwrap();
            prop_assert_eq!(x.mul(&y).unwrap().norm(), x.norm() * y.norm());
        }

        #[test]
        fn try_divide_round_trip(u1 in -50i64..50, v1 in -50i64..50,
                                 u2 in -50i64..50, v2 in -50i64..50) {
            let x = gauss(u1, v1);
            let y = gauss(u2, v2);
            prop_assume!(!y.is_zero());
            if let Some(q) = x.try_divide(&y).unwrap() {
                prop_assert_eq!(q.mul(&y).unwrap(), x);
            } else if x.norm() <= BigInt::from(400) {
                // no quotient exists: scan the finite ball that could hold one
                for cand in elements_of_norm_at_most(zi(), &x.norm()) {
                    prop_assert_ne!(cand.mul(&y).unwrap(), x.clone());
                }
            }
        }

        #[test]
        fn integer_ball_size(x in 0u64..500) {
            let got = elements_of_norm_at_most(RingSpec::Integers, &BigInt::from(x));
            prop_assert_eq!(got.len() as u64, 2 * x + 1);
        }
    }
}
