//! Exact irregularity data for A-hypergeometric (GKZ) systems and their
//! modified variants: slope detection along coordinate hyperplanes, at
//! infinity and along `t = 0` / `t = infinity`, Gevrey indices, truncated
//! divergent series solutions, and Borel-Laplace summation numerics.
//!
//! Combinatorics and series coefficients are computed in exact rational
//! (or Gaussian rational) arithmetic throughout; floating point enters only
//! in the `borel` module, at a tracked working precision.

pub mod exactla;
pub mod geometry;
pub mod slopes;
pub mod weyl;
pub mod series;
pub mod borel;
