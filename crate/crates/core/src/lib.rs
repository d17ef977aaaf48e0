//! Exact-arithmetic engine for a generalized cluster structure on GL(n)
//! compatible with a pair of Cremmer-Gervais type Poisson brackets, together
//! with its two building blocks: the dual structure on GL(n-1) and the
//! Hankel/Toda structure on rational functions.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere. Identities are certified by exact evaluation at
//! random integer points (Schwartz-Zippel style), mutation sequences are
//! validated step by step against predicted determinantal functions, and the
//! three Poisson brackets are realized as exact bilinear forms on gradients.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod scalar;
pub mod matrix;
pub mod dual;
pub mod expr;
pub mod sym;
pub mod builders;
pub mod words;
pub mod rf;
pub mod catalog;
pub mod quiver;
pub mod structures;
pub mod bd;
pub mod bracket;
pub mod maps;
pub mod plans;
pub mod pit;
pub mod suites;

pub use scalar::Scalar;
pub use matrix::Matrix;
pub use expr::Expr;
