use std::sync::Arc;

use super::glue::{glue, WordContext};
use super::word::{Orientation, Segment, StringDatum};
use crate::algebra::{simple_resolution, BasedAlgebra};
use crate::complexes::ProjComplex;
use crate::datum::{fmt_elem, Elem};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// A finite piece of an infinite string complex.
#[derive(Clone, Debug)]
pub struct Truncation<F> {
    pub complex: ProjComplex<F>,
    pub segments: Vec<Segment>,
    /// Degree of the open tied end left by the cut, if the word was cut.
    /// Cohomology there is not meaningful.
    pub cut: Option<i64>,
}

/// Extends `seed` downwards along `cycle` (a cycle of τ) and keeps the part
/// lying in the degree window `lo..=hi`.
pub fn truncated_infinite_string<F: Field>(
    ctx: &WordContext,
    seed: &StringDatum,
    cycle: &[Elem],
    (lo, hi): (i64, i64),
) -> Result<Truncation<F>> {
    let d = &ctx.datum;
    for (k, &e) in cycle.iter().enumerate() {
        if d.tau(e) != Some(cycle[(k + 1) % cycle.len()]) {
            return Err(Error::InvalidWord(format!("{} does not continue the τ-cycle", fmt_elem(e))));
        }
    }
    let mut segs = seed.segments.clone();
    let Some(last) = segs.last() else {
        return Err(Error::InvalidWord("empty seed".into()));
    };
    let Some(mut exit) = last.exit(d) else {
        return Err(Error::InvalidWord("seed ends in a stalk".into()));
    };
    if d.partner(exit.0).is_none_or(|p| !cycle.contains(&p)) {
        return Err(Error::InvalidWord("seed's trailing end does not lead into the cycle".into()));
    }
    seed.validate_with(d, true)?;
    let (slo, shi) = seed.degree_range(d);
    if slo < lo || shi > hi {
        return Err(Error::InvalidWord("seed leaves the window".into()));
    }
    let mut cut = None;
    loop {
        let (i, j) = d.partner(exit.0).expect("cycle elements are tied");
        let next = Segment::new(i, j + 1, j, exit.1, Orientation::LowFirst);
        if next.r - 1 < lo {
            cut = Some(exit.1);
            break;
        }
        exit = next.high_end();
        segs.push(next);
        if !d.is_tied(exit.0) {
            break;
        }
    }
    let complex = glue(ctx, &segs, false, 1, &|_| vec![vec![F::one()]])?;
    Ok(Truncation { complex, segments: segs, cut })
}

/// Minimal projective resolution of the simple at vertex `v`, truncated at
/// `n` syzygies and placed in degrees `-n..=0`.
#[derive(Clone, Debug)]
pub struct ResolutionComplex<F> {
    pub complex: ProjComplex<F>,
    pub terminated: bool,
}

pub fn projective_resolution<F: Field>(
    alg: &Arc<BasedAlgebra>,
    v: usize,
    n: usize,
) -> Result<ResolutionComplex<F>> {
    let res = simple_resolution::<F>(alg, v, n);
    let len = res.terms.len();
    let comps: Vec<Vec<usize>> = res.terms.iter().rev().cloned().collect();
    let diffs = (0..len.saturating_sub(1)).map(|k| res.maps[len - 2 - k].clone()).collect();
    let complex = ProjComplex::new(alg.clone(), -(len as i64 - 1), comps, diffs)?;
    Ok(ResolutionComplex { complex: complex.trimmed(), terminated: res.terminated })
}
