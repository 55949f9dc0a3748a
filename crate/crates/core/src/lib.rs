//! Construction, verification and auditing of r-ample simplicial complexes.
//!
//! A complex `X` is *r-ample* when for every vertex set `U` with `|U| <= r` and every
//! subcomplex `A` of the induced complex `X_U` some vertex `v` outside `U` has
//! `lk(v) ∩ X_U = A`.
//!
//! * [`simplex`]: explicit complexes, the [`ComplexView`](simplex::ComplexView) trait and
//!   set-level operations (induced subcomplex, link, join, removal of simplex families).
//! * [`ampleness`]: the verifier, witness search, embedding extension, Dedekind counts and
//!   resilience guarantees.
//! * [`random`]: the skeleton-by-skeleton random complex, explicit and as a hash oracle.
//! * [`field`]: prime field arithmetic and the `Q_{n,p}` coset machinery.
//! * [`paley`]: Paley graphs, the 13-vertex example and the Iterated Paley complex with its
//!   certified witness solver.
//! * [`charsum`]: multiplicative characters, Weil sums and coset intersection audits.
//! * [`topo`]: disc filling, cone points, GF(2) Betti numbers and sphere triangulations.

pub mod ampleness;
pub mod charsum;
pub mod error;
pub mod field;
pub mod paley;
pub mod random;
pub mod seed;
pub mod simplex;
pub mod topo;

pub use error::{Error, Result};
