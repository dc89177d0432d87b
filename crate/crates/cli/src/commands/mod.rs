pub mod analyze;
pub mod chunk;
pub mod fit;
pub mod overlap;
pub mod predict;
