//! Exact real-root counting and isolation.
//!
//! Two independent exact backends (Sturm chains and Descartes bisection) plus
//! a certified floating-point front end, [`FastAnalysis`], that resolves the
//! easy parts of a polynomial with rigorous error bounds and hands anything it
//! cannot certify to the exact code. All counts are of distinct roots.

mod descartes;
mod filtered;
mod isolate;
mod range;
mod sturm;

pub use descartes::count_roots_descartes;
pub use filtered::FastAnalysis;
pub use isolate::{isolate_roots, RootReport};
pub use range::{Bound, RootRange};
pub use sturm::{count_roots, sturm_chain, SturmChain};
