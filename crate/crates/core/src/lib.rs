pub mod curvealg;
pub mod error;
pub mod golden;
pub mod hierarchy;
pub mod jet;
pub mod report;
pub mod solutions;
pub mod spectral;

pub use error::{Error, Result};
pub use jet::{Jet, Scalar, C64};
pub use solutions::{SolutionSpec, Variant};
