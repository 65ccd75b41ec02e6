//! Exact character-sum workbench for the Dwork family and hypergeometric
//! trace functions over small finite fields.

pub mod arith;
pub mod chars;
pub mod cyclo;
pub mod dwork;
pub mod error;
pub mod ff;
pub mod harness;
pub mod hyper;
pub mod signs;
pub mod weights;

pub use cyclo::CycloElem;
pub use error::{Error, Result};
pub use ff::{FqElem, FqField};
