//! Symbolic and numerical toolkit for fractional dynamical systems.
//!
//! The crate is organised around a small closed symbolic class
//! ([`fracfield::GenPolynomial`]: finite sums of real-coefficient monomials
//! with real nonnegative exponents) on which the modified Riemann-Liouville
//! fractional partial derivative acts exactly through the power rule.
//! On top of that sit bracket structures on `R^n` ([`brackets`]), Leibniz
//! algebroid structures with their dual-bundle tensors ([`algebroid`]),
//! an independent Grunwald-Letnikov numerical oracle ([`gloracle`]),
//! fixed-step fractional initial-value solvers ([`fracsolve`]), a registry
//! of built-in example systems ([`systems`]) and a property-check driver
//! ([`verify`]).

pub mod algebroid;
pub mod brackets;
pub mod fracfield;
pub mod fracsolve;
pub mod gloracle;
pub mod systems;
pub mod verify;

pub use fracfield::{FieldError, FractionalOrder, GenMonomial, GenPolynomial};
