//! Exact computation engine for the Drinfeld double quantum group `Ũ` and its
//! universal ıquantum subalgebra `Ũ^ı`.

pub mod braid;
pub mod cartan;
pub mod coeff;
pub mod error;
pub mod iqg;
pub mod ncalg;
pub mod parse;
pub mod scalars;
pub mod udouble;
pub mod verify;

pub use error::{Error, Result};
