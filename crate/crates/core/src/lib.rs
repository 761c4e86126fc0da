//! Exact root-system computations for nubs of straight elements in Weyl
//! groups of Kac-Moody root data.

pub mod error;
pub mod gcm;
pub mod nodeset;
pub mod nub;
pub mod oracle;
pub mod orbit;
pub mod roots;
pub mod scale;
pub mod vector;
pub mod weyl;

pub use error::{Error, Result};
pub use gcm::{ComponentType, Gcm, Sense, TypeClass};
pub use nodeset::NodeSet;
pub use roots::{Nature, RootSlice};
pub use vector::{RootVector, Sign};
pub use weyl::WeylElement;
