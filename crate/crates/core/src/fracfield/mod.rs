//! Generalized polynomials with exact fractional partial derivatives, plus
//! the special functions (gamma, generalized binomial, Mittag-Leffler) the
//! rest of the crate consumes.
//!
//! Everything here is pure and immutable after construction; values may be
//! shared freely across threads.

mod calculus;
mod parse;
mod poly;
mod special;

pub use calculus::{
    classical_partial, frac_deriv_order, frac_partial, frac_product_series, fractional_taylor,
    taylor_reconstruct, ProductSeries,
};
pub use parse::parse_expr;
pub use poly::{GenMonomial, GenPolynomial, COEFF_TOL, EXP_TOL};
pub use special::{gamma, gen_binomial, mittag_leffler, mittag_leffler_with, MittagLefflerParams};

use thiserror::Error;

/// Errors from symbolic construction, parsing and evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FieldError {
    /// Gamma is undefined at zero and the negative integers.
    #[error("gamma pole at z = {z}")]
    GammaPole { z: f64 },
    /// A series evaluation hit its term cap before meeting the tolerance.
    #[error("series did not converge within {max_terms} terms (|z| = {z_abs})")]
    SeriesDiverged { max_terms: usize, z_abs: f64 },
    /// Argument outside the configured series radius.
    #[error("argument {z} outside series radius {radius}")]
    RadiusExceeded { z: f64, radius: f64 },
    /// Fractional orders are restricted to (0, 1].
    #[error("fractional order {value} outside (0, 1]")]
    InvalidOrder { value: f64 },
    /// Monomial exponents must stay nonnegative.
    #[error("exponent {gamma} on `{var}` would drop below zero under order {order}")]
    NegativeExponent { var: String, gamma: f64, order: f64 },
    /// The classical derivative factor needs integer exponents.
    #[error("non-integer exponent {gamma} on `{var}` where an integer is required")]
    NonIntegerExponent { var: String, gamma: f64 },
    /// Fractional Taylor data must use exponents that are multiples of the order.
    #[error("exponent {exponent} is not an integer multiple of {alpha} within tolerance")]
    NotMultipleOfOrder { exponent: f64, alpha: f64 },
    /// Fractional Taylor operates on single-variable polynomials.
    #[error("expected a polynomial in at most one variable, found {count}")]
    NotUnivariate { count: usize },
    /// Evaluation point misses a variable.
    #[error("variable `{var}` is not bound at the evaluation point")]
    UnboundVariable { var: String },
    /// Non-integer powers of negative coordinates are undefined.
    #[error("negative coordinate {value} for `{var}` under non-integer exponent {exponent}")]
    NegativeCoordinate {
        var: String,
        value: f64,
        exponent: f64,
    },
    /// Expression text rejected; offset is a byte position into the input.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    /// Shape mismatch in matrix/vector data.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A declared symmetry tag failed verification.
    #[error("symmetry violation for tag `{tag}` at entry ({i}, {j})")]
    SymmetryViolation { tag: String, i: usize, j: usize },
}

/// A fractional differentiation order restricted to `(0, 1]`.
///
/// Order one is admitted and reduces every operation to its classical
/// counterpart (the power rule coefficient collapses to the integer one).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(value: f64) -> Result<Self, FieldError> {
        if value.is_finite() && value > 0.0 && value <= 1.0 {
            Ok(FractionalOrder(value))
        } else {
            Err(FieldError::InvalidOrder { value })
        }
    }

    /// The classical order.
    pub const ONE: FractionalOrder = FractionalOrder(1.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl std::fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_range() {
        assert!(FractionalOrder::new(0.5).is_ok());
        assert!(FractionalOrder::new(1.0).is_ok());
        assert_eq!(
            FractionalOrder::new(0.0),
            Err(FieldError::InvalidOrder { value: 0.0 })
        );
        assert!(FractionalOrder::new(1.2).is_err());
        assert!(FractionalOrder::new(-0.3).is_err());
        assert!(FractionalOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn order_one_is_classical() {
        assert!(FractionalOrder::ONE.is_classical());
        assert!(!FractionalOrder::new(0.999).unwrap().is_classical());
    }
}
