//! Matrix elements of the single-mode squeeze operator in the Fock basis.

pub mod error;
pub mod figures;
pub mod oracle;
pub mod specfun;
pub mod squeeze;
pub mod superpose;
pub mod validate;

pub use error::{Error, Result};
