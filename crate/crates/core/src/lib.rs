//! Exact symbolic computation in free Lie algebras over `Z` and `Q`.
//!
//! The crate covers the Lyndon realization of the Hall basis, bracket
//! arithmetic with an associative-envelope cross-check, the shifted-product
//! calculus `u(v+α) = uv + αu` with exact division and divisibility witnesses,
//! semantic evaluators for the defining predicates of scalar lines and of the
//! naturals, and the maximal ring of scalars of finite bilinear maps over prime
//! fields.

pub mod assoc;
pub mod coeff;
pub mod element;
pub mod error;
pub mod expr;
pub mod formula;
pub mod hall;
pub mod interp;
pub mod json;
pub mod lexer;
pub mod linalg;
pub mod random;
pub mod scalars;
pub mod shifted;
pub mod suite;

pub use assoc::{to_associative, AssocPoly};
pub use coeff::{Coefficient, Ring};
pub use element::{proportional, Algebra, LieElement};
pub use error::{Error, Result};
pub use hall::{lyndon_words, standard_factorization, witt_dimension, Alphabet, BasisElement, Bracketing, LyndonWord};
pub use expr::{normal_form, parse_element, parse_expr, Expr};
pub use shifted::{decompose_l2, divide_shifted, main_lemma_witness, shifted_chain, Summand, WitnessGammaW};
