pub mod bodies;
pub mod checks;
pub mod cli;
pub mod error;
pub mod funk;
pub mod projective;
pub mod sampling;
pub mod spaces;
pub mod trig;
