//! Parameterized entanglement measures for multipartite qudit pure states,
//! the polygon, triangle and bipartition inequalities among them, and
//! seeded searches for violations.
//!
//! Site 0 is the leftmost tensor factor and the most significant digit of
//! a flattened index. Rényi and von Neumann quantities are in bits.

pub mod density;
pub mod entropy;
mod error;
pub mod inequalities;
pub mod measures;
pub mod reproduce;
pub mod search;
pub mod states;
pub mod tensor;

pub use density::DensityMatrix;
pub use entropy::EntropyParams;
pub use error::{Error, Result};
pub use inequalities::{InequalityResult, IndicatorResult};
pub use measures::{Bipartition, MarginalVector, MeasureSpec};
pub use search::{SearchConfig, ViolationReport};
pub use states::{MultiQuditState, NetworkSpec, NetworkState};
pub use tensor::{ComplexMatrix, Dims, SiteSet, C64};
