//! Exact desk-scale simulator of the S3 quantum double.

pub mod anyon;
pub mod circuit;
pub mod error;
pub mod gates;
pub mod group;
pub mod lattice;
pub mod linalg;
pub mod logical;
pub mod mc;
pub mod measure;
pub mod register;
pub mod ribbon;
pub mod state;
pub mod verify;
pub mod ypool;

pub use error::{Error, Result};
pub use group::{AnyonType, ClassLabel, Elem, Irrep, IrrepGroup};
