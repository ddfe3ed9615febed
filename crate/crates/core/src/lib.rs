//! Exact computations with Brauer-type centralizer algebras on tensor powers
//! of the defining representations of `gl_n`, `so_n` and `sp_n`.

pub mod linalg;
pub mod error;
pub mod forms;
pub mod nilpotent;
pub mod normality;
pub mod tensor;
pub mod engine;

pub use error::{Error, Result};
