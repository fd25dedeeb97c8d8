//! Verification engine for biharmonic hypersurfaces in L^m(c) x R.

pub mod ambient;
pub mod error;
pub mod jet;
pub mod ode;
pub mod oracle;
pub mod poly;
pub mod profiles;
pub mod report;
pub mod residual;
pub mod suites;

pub use ambient::{AmbientSpace, AmbientVector, NormalDecomposition};
pub use error::{GeometryError, Result};
pub use jet::Series;
