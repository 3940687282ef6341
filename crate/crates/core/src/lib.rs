//! Adic completion and local cohomology for finitely presented modules over
//! computable Noetherian rings.

pub mod cli;
pub mod coeff;
pub mod complex;
pub mod error;
pub mod functors;
pub mod groebner;
pub mod hermite;
pub mod koszul;
pub mod module;
pub mod oracle;
pub mod poly;
pub mod ring;
pub mod theorems;
pub mod tower;

pub use error::{Error, Result};
