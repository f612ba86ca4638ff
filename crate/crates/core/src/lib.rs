//! Slices over monads in `Span(Cat)`, computed on finite categories.
//!
//! Two instances are provided: composition of simple-game strategies through
//! the clock double category, and Day convolution of presheaves over finite
//! strict monoidal categories. Each construction has a second, independent
//! route that it is checked against.

pub mod check;
pub mod clock;
pub mod day;
pub mod error;
pub mod factorisation;
pub mod fincat;
pub mod games;
pub mod io;
pub mod quotient;
pub mod slice;

pub use error::{Error, Result, Violation};
