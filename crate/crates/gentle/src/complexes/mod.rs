//! Bounded complexes of projectives, the homotopy category, and triples.

mod complex;
mod hom;
mod json;
mod triple;

pub use complex::{compose, local_inverse, scale_matrix, MorphMatrix, ProjComplex, Verification};
pub use hom::{
    chain_maps, compose_maps, decompose, end_algebra, hom_homotopy, is_homotopy_iso, is_indecomposable,
    top_invertible, EndAlgebra, GradedMap, HomSpace,
};
pub use triple::{
    decorated_matrices, reconstruct, split_h_complex, triple_of, DecoratedMatrices, End, HSplit, StripeLabel,
    Theta, Transformation, Triple, TripleContext, WSummand,
};
pub(crate) use triple::{extend_to_h, YPositions};
