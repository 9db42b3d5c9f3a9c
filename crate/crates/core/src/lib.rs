pub mod dual;
pub mod error;
pub mod geometry;
pub mod io;
pub mod jet;
pub mod matrix;
pub mod poly;
pub mod presets;
pub mod scalar;
pub mod singular_basis;
pub mod smoothness;
pub mod spline;
pub mod transform;
pub mod triangular;

pub use error::{Error, Result};
