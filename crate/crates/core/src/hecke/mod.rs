//! Right modules over the toroidal Hecke algebra, word evaluation and the
//! relation suite.

mod module;
mod relations;
mod word;

pub use module::*;
pub use relations::*;
pub use word::*;
