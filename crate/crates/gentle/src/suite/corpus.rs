use std::sync::Arc;

use serde::Serialize;

use crate::complexes::{ProjComplex, TripleContext};
use crate::datum::fixtures::gentle_corpus;
use crate::datum::Datum;
use crate::error::Result;
use crate::scalar::Field;
use crate::words::{
    band_complex, enumerate_bands, enumerate_strings, string_complex, BandDatum, Word, WordContext,
};
use crate::Q;

/// How much of the corpus to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusSize {
    Small,
    Full,
}

impl std::str::FromStr for CorpusSize {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "small" => Ok(CorpusSize::Small),
            "full" => Ok(CorpusSize::Full),
            _ => Err(format!("unknown corpus {s:?} (expected small or full)")),
        }
    }
}

/// Enumeration bounds for one corpus size.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bounds {
    pub string_segments: usize,
    pub window: (i64, i64),
    pub band_segments: usize,
    pub multiplicities: &'static [usize],
    pub eigenvalues: &'static [i64],
}

impl CorpusSize {
    pub fn bounds(self) -> Bounds {
        match self {
            CorpusSize::Full => Bounds {
                string_segments: 5,
                window: (-4, 0),
                band_segments: 4,
                multiplicities: &[1, 2],
                eigenvalues: &[1, 2, 3],
            },
            CorpusSize::Small => Bounds {
                string_segments: 3,
                window: (-2, 0),
                band_segments: 4,
                multiplicities: &[1],
                eigenvalues: &[2],
            },
        }
    }
}

pub struct CorpusItem {
    pub word: Word<Q>,
    pub complex: ProjComplex<Q>,
}

/// The complexes of one datum, sharing one algebra.
pub struct DatumCorpus {
    pub name: &'static str,
    pub datum: Datum,
    pub words: WordContext,
    pub triples: TripleContext,
    pub items: Vec<CorpusItem>,
}

/// One representative per word class: enumerated strings, and bands with
/// every multiplicity and eigenvalue of the bounds.
pub fn build_corpus(size: CorpusSize) -> Result<Vec<DatumCorpus>> {
    let b = size.bounds();
    let mut out = Vec::new();
    for (name, d) in gentle_corpus() {
        let words = WordContext::new(&d)?;
        let triples = TripleContext::with_algebra(&d, Arc::clone(&words.alg))?;
        let mut items = Vec::new();
        for v in enumerate_strings(&d, b.string_segments, b.window) {
            let complex = string_complex(&words, &v)?;
            items.push(CorpusItem { word: Word::String(v), complex });
        }
        for w in enumerate_bands(&d, b.band_segments) {
            for &m in b.multiplicities {
                for &pi in b.eigenvalues {
                    let bd = BandDatum::new(w.clone(), m, Q::from_i64(pi));
                    let complex = band_complex(&words, &bd)?;
                    items.push(CorpusItem { word: Word::Band(bd), complex });
                }
            }
        }
        out.push(DatumCorpus { name, datum: d, words, triples, items });
    }
    Ok(out)
}
