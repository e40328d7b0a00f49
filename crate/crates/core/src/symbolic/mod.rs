//! Exact symbolic machinery: sparse polynomials, truncated series, Hensel
//! lifting of branches, and order sequences.

pub mod hensel;
pub mod poly;
pub mod series;

pub use hensel::{hensel_branch, hensel_lift};
pub use poly::{Monomial, MultiPoly};
pub use series::{pivot_order_sequence, substitute_branch, Series};
