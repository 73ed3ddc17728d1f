//! Exact rationals, quadratic-radical constants, error-bounded big floats and
//! the π oracle everything numeric is measured against.

pub mod approx;
pub mod pi;
pub mod radconst;
pub mod rational;
pub mod trig;

pub use approx::BigApprox;
pub use pi::{machin_pi, pi_oracle};
pub use radconst::RadConst;
pub use rational::{int, parse_rational, rat, Rational};
pub use trig::{sin_pi, SinValue};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("incompatible radicals: {left} + {right}")]
    IncompatibleRadicals { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unrepresentable constant: {0}")]
    Unrepresentable(String),
    #[error("domain error: {0}")]
    Domain(String),
}
