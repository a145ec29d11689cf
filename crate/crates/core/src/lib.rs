pub mod cli;
pub mod error;
pub mod exact;
pub mod finite;
pub mod index;
pub mod number;
pub mod numeric;
pub mod poly;
pub mod relation;
pub mod report;
pub mod suite;
pub mod symmetric;
pub mod truncated;
pub mod word;

pub use error::{Error, Result};
pub use index::{Arg, Index, VarIndex};
pub use number::CRational;
pub use word::{Letter, Word, WordCombination};
