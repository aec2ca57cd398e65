pub mod density;
pub mod ensembles;
pub mod experiments;
pub mod error;
pub mod poly;
pub mod quadrature;
pub mod root_count;

pub use error::{Error, Result};
pub use poly::{Dyadic, DyadicInterval, IntPolynomial};
