//! Bunches of chains, their representations by stripe-divided matrices, and
//! the bunch attached to a gentle datum.

mod chains;
mod gentle;
mod rep;
mod word;

pub use chains::{BunchOfChains, Letter, Side};
pub use gentle::{bunch_of_datum, DatumBunch};
pub use rep::{
    apply_transformation, band_rep, identity_transform, random_transform, rep_end, rep_hom,
    rep_is_indecomposable, rep_isomorphic, string_rep, validate_transform, AdmissibleTransform, RepEnd,
    RepMorphism, RepX,
};
pub use word::{FullWord, Rel};

#[cfg(test)]
mod tests;
