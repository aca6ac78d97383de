//! Construction, verification, bounds and search for asymmetric
//! all-or-nothing transforms over small finite fields.

pub mod aont;
pub mod array;
pub mod bounds;
pub mod catalog;
pub mod gf;
pub mod matrix;
pub mod search;

pub use aont::{verify_linear_aont, AontError, AontParams, LinearAont, VerificationReport, Verdict, Witness};
pub use gf::{build_field, field_of_order, Fe, Field, FieldError};
pub use matrix::{Matrix, MatrixError, Selector};
