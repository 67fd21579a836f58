//! Finite-quotient equivalence for torsion-free nilpotent groups of Hirsch
//! length at most five.
//!
//! Groups are given by power-commutator presentations
//! `[g_j, g_i] = g_{j+1}^{t_{i,j,j+1}} ... g_n^{t_{i,j,n}}` whose structure
//! constants are collected in a [`ParamTuple`]. Four isolator types are
//! supported: `(2,1,1)`, `(3,1,1)`, `(2,1,1,1)` and `(2,1,2)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] and [`params`]: valuations, gcd profiles, tuple validation.
//! * [`collection`]: exact group arithmetic by collection and the
//!   candidate-map checker for generator images.
//! * [`local`]: per-prime solvability and the same-finite-quotients decider.
//! * [`orbits`]: the finite sets `L(a,b,c)` and the congruence-subgroup action.
//! * [`genus`]: canonical forms, isomorphism tests and genus enumeration.
//! * [`oracles`] and [`selfcheck`]: brute-force reference implementations and
//!   the suites that compare them against the fast paths.

pub mod arith;
pub mod collection;
mod error;
pub mod genus;
pub mod local;
pub mod oracles;
pub mod orbits;
pub mod params;
pub mod selfcheck;
mod unionfind;

pub use collection::{CandidateMatrix, GroupElement, MapReport, PcPresentation};
pub use error::{Error, Result};
pub use genus::{canonicalize, enumerate_genus, genus_size_table, z_equivalent, GenusResult};
pub use local::{decide_same_finite_quotients, Decision, LocalWitness, PrimeCheck};
pub use orbits::{OrbitSpace, OrbitWitness};
pub use params::{
    modulus_profile, validate_membership, GroupType, ModulusProfile, ParamTuple, Triple,
    TypeDescriptor, ValidationReport,
};
