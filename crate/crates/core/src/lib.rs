//! Exact nonpathological hulls, degrees of pathology and the supporting
//! constructions (covering submeasures, direct sums, regular matrices,
//! summable weights, van der Waerden submeasures) for finite submeasures
//! and finite pattern quotients of submeasures on ω.

pub mod error;
pub mod gallery;
pub mod hull;
pub mod json;
pub mod lp;
pub mod mask;
pub mod pathology;
pub mod pattern;
pub mod prefix;
pub mod rational;
pub mod submeasure;
pub mod validate;
pub mod vdw;

pub use error::{Error, Result};
pub use hull::{hull, hull_all, sigma_hull, verify_witness, HullWitness};
pub use mask::SubsetMask;
pub use pattern::{PatternPoint, PatternSubmeasure};
pub use rational::{ExtendedRational, Rational};
pub use submeasure::FiniteSubmeasure;
