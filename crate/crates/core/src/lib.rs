pub mod catalog;
pub mod cocycle;
pub mod error;
pub mod freeprod;
pub mod grading;
pub mod group;
pub mod io;
pub mod lagrangian;
pub mod mackey;
pub mod par;
pub mod suite;
pub mod twisted;
pub mod zmod;

pub use error::{Error, Result};
