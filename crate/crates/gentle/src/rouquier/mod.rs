//! The generator `Z` and certificates that a complex lies in `⟨Z⟩₂`.

mod certificate;
mod generator;

pub use certificate::{
    fat_point_probe, generation_certificate, DegreeCheck, EulerCheck, FatPointProbe, GenerationCertificate,
    SimpleMatch, ZTerm,
};
pub use generator::{build_generator, GeneratorZ, ZMember};

#[cfg(test)]
mod tests;
