pub mod cover;
pub mod equivariant;
pub mod error;
pub mod fq;
pub mod hypertoric;
pub mod linalg;
pub mod sample;
pub mod weyl;

pub use error::{Error, Result};
