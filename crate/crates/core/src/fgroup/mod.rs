//! Free group algebra: reduced words, trailing/leading power decompositions,
//! the associated norms and the three-term trace split.

mod decompose;
mod element;
mod split;
mod random;
mod word;

pub use decompose::*;
pub use element::*;
pub use split::*;
pub use random::*;
pub use word::*;
