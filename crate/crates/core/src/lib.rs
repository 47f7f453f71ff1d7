//! Arithmetic self-similar sets at desk scale: exact arithmetic over Z and
//! imaginary-quadratic orders, orbit-closure generation and windowed
//! verification of the disjoint-union property, box-dimension solving and
//! empirical estimation, projective dynamics with Weil heights, and
//! point-counting censuses against Schanuel and Serre-Wan predictions.

pub mod census;
pub mod dimension;
pub mod ifs;
pub mod projective;
pub mod rings;

pub use ifs::{FractalSpec, SimilarityMap, VerifyStatus};
pub use rings::{RingElement, RingSpec};
