pub mod algebra;
pub mod curve;
pub mod error;
pub mod inversion;
pub mod sigma;
pub mod theta;
pub mod symbolic;
