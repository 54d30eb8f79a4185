//! Exact symbolic engine for the Pohlmeyer–Rehren quasi-Lie bialgebra on the free Lie
//! algebra L(V), the Poisson algebra of cyclic traces it induces, and its quasi-Hopf
//! quantizations over ℚ[h]/(h^N).

pub mod cli;
pub mod coalgebra;
pub mod error;
pub mod freealg;
pub mod lie;
pub mod linalg;
pub mod qlba;
pub mod quant;
pub mod scalars;
pub mod traces;

pub use error::{Error, Result};
pub use freealg::{MultiTensor, Word};
pub use scalars::{HSeries, Rational};
