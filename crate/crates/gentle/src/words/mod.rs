//! Reduced string and band words, their gluing diagrams and complexes,
//! word equivalence, enumeration, and truncations of infinite strings.

mod enumerate;
mod glue;
mod infinite;
mod word;

pub use enumerate::{enumerate_bands, enumerate_strings};
pub use glue::{
    band_complex, band_gluing_diagram, jordan_block, string_complex, string_gluing_diagram, GluingDiagram,
    GluingNode, WordContext,
};
pub use infinite::{projective_resolution, truncated_infinite_string, ResolutionComplex, Truncation};
pub use word::{
    word_equivalent_bands, word_equivalent_strings, BandDatum, BandWord, EndPoint, Orientation, Segment,
    StringDatum, StringShape, Word,
};

#[cfg(test)]
pub(crate) mod tests;
