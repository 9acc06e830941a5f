//! Exact A(∞) toolkit: homotopy transfer of A(∞)-algebra and module structure
//! to homology, the B̃ (bar) construction, Massey products, twisting cochains
//! and twisted tensor products, all over `Q` or `Z/p` on finite models.

pub mod ainf;
pub mod bar;
pub mod cobar;
pub mod commands;
pub mod dg;
pub mod error;
pub mod graded;
pub mod homology;
pub mod linalg;
pub mod model;
pub mod report;
pub mod transfer;
pub mod twisting;

pub use error::{Error, Result};
