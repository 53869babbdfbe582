//! Exact L-polynomials of `E` and its symmetric square, and the data at the centre.

mod center;
mod lpoly;
mod surd;

pub use center::{center_derivative, center_report, delta, normalized_root_moduli, CenterReport, EULER_GAMMA};
pub use lpoly::{
    analytic_rank, default_trunc, euler_product_series, expected_degree, functional_equation_check,
    l_polynomial, l_polynomial_from_table, local_factor, LPolynomial,
};
pub use surd::{Surd, SurdRing};
