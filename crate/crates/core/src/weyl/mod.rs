//! Weyl group elements as integer matrices, reduced words, straightness,
//! cyclic reduction and standard conjugates.

mod element;
mod standard;
mod straight;

pub use element::WeylElement;
pub use standard::{component_factors, standardize, StandardForm, StandardizeOptions};
pub use straight::{
    cyclically_reduce, essential_support, is_straight, parabolic_closure_straight,
    EssentialSupport, StraightCertificate, StraightVerdict,
};
