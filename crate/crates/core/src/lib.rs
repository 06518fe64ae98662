//! Exact Seshadri and Frobenius-Seshadri constants of ample line bundles at
//! torus-fixed points of smooth projective toric varieties.
//!
//! The crate is organized bottom-up:
//!
//! * [`lattice`]: exact integer/rational linear algebra (determinants,
//!   unimodular inverses, rational solves).
//! * [`toric`]: fans, torus-invariant divisors, their polytopes and the local
//!   chart at a fixed point, plus nef/ample/globally-generated checks.
//! * [`seshadri`]: closed forms for the inscribed simplex and cube scalings and
//!   the jet numbers derived from them.
//! * [`jetoracle`]: brute-force jet separation over a prime field, used as an
//!   independent check of the closed forms.
//! * [`cartier`]: the trace map on monomial differential forms over `F_p`.

pub mod arith;
pub mod cartier;
pub mod error;
pub mod jetoracle;
pub mod lattice;
pub mod seshadri;
pub mod serde_num;
pub mod toric;

pub use error::{Error, Result};
