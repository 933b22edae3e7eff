pub mod permgroup;
pub mod admissibility;
pub mod hurwitz;
pub mod existence;
pub mod ffcover;
pub mod cli;
