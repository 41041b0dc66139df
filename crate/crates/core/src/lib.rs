pub mod certificate;
pub mod cli;
pub mod complex;
pub mod error;
pub mod exactalg;
pub mod fracture;
pub mod hofib;
pub mod holimcalc;
pub mod sections;
pub mod trunc;

pub use error::{Error, Result};
