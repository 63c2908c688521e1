//! Exact computations in rank 2 quantum cluster algebras `A_v(b,c)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`laurent`]: the coefficient ring `Z[v^{±1}]`, bar-involution and
//!   quantum binomials;
//! * [`qtorus`]: the quantum torus, exact division and re-expansion in other
//!   clusters;
//! * [`greedy`]: quantum and commutative greedy elements and their axioms;
//! * [`clusters`]: cluster variables by mutation, cluster and standard monomials;
//! * [`bases`]: standard-monomial expansions and the triangular basis;
//! * [`scan`]: batch checks over grids of pointing vectors;
//! * [`verify`]: named verification suites.

pub mod bases;
pub mod clusters;
pub mod error;
pub mod greedy;
pub mod laurent;
pub mod qtorus;
pub mod scan;
pub mod verify;

pub use error::{Error, Result};
pub use greedy::PointedElement;
pub use laurent::LaurentV;
pub use qtorus::{ClusterIndex, TorusElement};
