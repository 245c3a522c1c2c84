use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::corpus::{build_corpus, CorpusSize, DatumCorpus};
use super::{CriterionReport, SuiteConfig};
use crate::algebra::{
    gentle_algebra, global_dimension_probe, radical_matches, resolution_algebra, simple_resolution,
    BasedAlgebra, Element,
};
use crate::bunch::{band_rep, BunchOfChains, FullWord, Rel};
use crate::complexes::{
    decompose, decorated_matrices, is_homotopy_iso, is_indecomposable, reconstruct, triple_of, ProjComplex,
    Transformation,
};
use crate::datum::fixtures::{dual_numbers, gentle_corpus, two_cycle, two_paths};
use crate::datum::Datum;
use crate::error::Result;
use crate::exactla::{rank, Matrix};
use crate::rouquier::{fat_point_probe, generation_certificate};
use crate::scalar::Field;
use crate::words::{
    band_complex, enumerate_bands, jordan_block, string_complex, word_equivalent_bands,
    word_equivalent_strings, BandDatum, BandWord, Orientation, Segment, StringDatum, Word, WordContext,
};
use crate::Q;

pub const NAMES: [&str; 11] = [
    "golden algebra dimensions",
    "resolution algebra is gentle with the expected radical",
    "resolution algebra has global dimension 2",
    "worked band and string complexes",
    "classification over the two-paths datum",
    "triple round trip and decorated matrices",
    "admissible transformations preserve the class",
    "special cycles detect infinite global dimension",
    "dual numbers decompose into chains of epsilon maps",
    "generation certificates",
    "two-point bunch band representation",
];

/// Time limits in seconds, applied to the full corpus only.
pub const LIMITS: [Option<f64>; 11] =
    [Some(1.0), None, Some(30.0), None, Some(300.0), None, None, Some(120.0), None, None, None];

struct Outcome {
    checked: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, other: Outcome) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

fn report(id: usize, cfg: &SuiteConfig, start: Instant, out: Result<Outcome>) -> CriterionReport {
    let seconds = start.elapsed().as_secs_f64();
    let limit = if cfg.corpus == CorpusSize::Full { LIMITS[id - 1] } else { None };
    let (passed, checked, detail) = match out {
        Ok(o) => {
            let mut detail = format!("{} checks, {} failures", o.checked, o.failures.len());
            for f in o.failures.iter().take(5) {
                detail.push_str("; ");
                detail.push_str(f);
            }
            (o.failures.is_empty(), o.checked, detail)
        }
        Err(e) => (false, 0, format!("error: {e}")),
    };
    let in_time = limit.is_none_or(|l| seconds < l);
    let detail =
        if in_time { detail } else { format!("{detail}; took {seconds:.1}s, limit {}s", limit.unwrap()) };
    CriterionReport {
        id,
        name: NAMES[id - 1].to_string(),
        passed: passed && in_time,
        checked,
        seconds,
        limit_seconds: limit,
        detail,
    }
}

/// Runs a single criterion, `1..=11`.
pub fn run_criterion(id: usize, cfg: &SuiteConfig, corpus: &[DatumCorpus]) -> CriterionReport {
    let start = Instant::now();
    let out = match id {
        1 => golden_dimensions(),
        2 => resolution_radical(),
        3 => resolution_global_dimension(),
        4 => worked_complexes(),
        5 => classification(cfg),
        6 => round_trip(corpus),
        7 => transformations(cfg, corpus),
        8 => special_cycles(),
        9 => dual_numbers_completeness(cfg),
        10 => certificates(corpus),
        11 => bunch_fixture(),
        _ => panic!("criteria are numbered 1 to 11"),
    };
    report(id, cfg, start, out)
}

pub fn load_corpus(cfg: &SuiteConfig) -> Result<Vec<DatumCorpus>> {
    build_corpus(cfg.corpus)
}

fn golden_dimensions() -> Result<Outcome> {
    let mut o = Outcome::new();
    for (d, want) in [(dual_numbers(), 2), (two_cycle(), 5), (two_paths(), 9)] {
        let a = gentle_algebra(&d);
        // independent count: lower-triangular units minus one per relation
        let units: usize = d.lengths().iter().map(|m| m * (m + 1) / 2).sum::<usize>() - d.relations().len();
        o.check(a.dim() == want && units == want, || format!("{d}: dim {} (expected {want})", a.dim()));
        o.check(a.check_axioms().is_ok(), || format!("{d}: multiplication table is not an algebra"));
    }
    Ok(o)
}

fn resolution_radical() -> Result<Outcome> {
    let mut o = Outcome::new();
    for (name, d) in gentle_corpus() {
        let b = resolution_algebra(&d);
        o.check(b.witness.is_gentle() && b.witness_matches(), || {
            format!("{name}: witness datum does not match")
        });
        o.check(radical_matches::<Q>(&b.alg, &b.l_span())?, || format!("{name}: radical differs from L"));
    }
    Ok(o)
}

fn resolution_global_dimension() -> Result<Outcome> {
    let mut o = Outcome::new();
    for (name, d) in gentle_corpus() {
        let start = Instant::now();
        let b = resolution_algebra(&d);
        let (gd, _) = global_dimension_probe::<Q>(&b.alg, 5);
        o.check(gd == Some(2), || format!("{name}: global dimension {gd:?}"));
        let secs = start.elapsed().as_secs_f64();
        o.check(secs < 10.0, || format!("{name}: took {secs:.1}s"));
    }
    Ok(o)
}

fn path(ctx: &WordContext, i: usize, a: usize, b: usize, c: i64) -> Element<Q> {
    Element::scaled_basis(ctx.path(i, a, b), Q::from_i64(c))
}

/// The band word of the worked example over the two-paths datum.
pub fn worked_band() -> BandWord {
    use Orientation::{HighFirst as H, LowFirst as L};
    BandWord::new(vec![
        Segment::new(2, 3, 2, -1, H),
        Segment::new(1, 2, 1, 0, H),
        Segment::new(2, 2, 1, 0, L),
        Segment::new(1, 3, 2, -1, L),
    ])
}

/// The string word of the worked example over the two-paths datum.
pub fn worked_string() -> StringDatum {
    use Orientation::{HighFirst as H, LowFirst as L};
    StringDatum::new(vec![
        Segment::new(2, 4, 3, -1, H),
        Segment::new(1, 3, 1, 0, H),
        Segment::new(2, 2, 1, 0, L),
        Segment::new(1, 3, 2, -1, L),
        Segment::new(2, 4, 3, -2, L),
    ])
}

fn worked_complexes() -> Result<Outcome> {
    let mut o = Outcome::new();
    let ctx = WordContext::new(&two_paths())?;
    let (p1, p2, p3) = (0, 1, 2);
    let x: ProjComplex<Q> = string_complex(&ctx, &worked_string())?;
    o.check(x.lo() == -2 && x.components() == [vec![p3], vec![p3, p2], vec![p1]], || {
        format!("string components {:?}", x.components())
    });
    let (b, ba, c) = (path(&ctx, 1, 3, 2, 1), path(&ctx, 1, 3, 1, 1), path(&ctx, 2, 2, 1, 1));
    o.check(x.diff(-2) == vec![vec![Element::zero()], vec![b]], || "string differential (0;b)".into());
    o.check(x.diff(-1) == vec![vec![ba, c]], || "string differential (ba,c)".into());
    for m in 1..=3 {
        let pi = Q::from_i64(2);
        let x = band_complex(&ctx, &BandDatum::new(worked_band(), m, pi.clone()))?;
        o.check(x.lo() == -2 && x.components() == [vec![p3; m], vec![p2; 2 * m], vec![p1; m]], || {
            format!("band components for m = {m}")
        });
        let j = jordan_block(m, &pi);
        let (d0, d1) = (x.diff(-2), x.diff(-1));
        let mut ok = true;
        for q in 0..m {
            for p in 0..m {
                let id = i64::from(p == q);
                ok &= d0[q][p] == path(&ctx, 2, 3, 2, id);
                ok &= d0[m + q][p] == Element::scaled_basis(ctx.path(1, 3, 2), j[q][p].clone());
                ok &= d1[q][p] == path(&ctx, 1, 2, 1, id);
                ok &= d1[q][m + p] == path(&ctx, 2, 2, 1, id);
            }
        }
        o.check(ok, || format!("band differentials (dI;bJ), (aI,cI) for m = {m}"));
    }
    Ok(o)
}

fn classification(cfg: &SuiteConfig) -> Result<Outcome> {
    let b = cfg.corpus.bounds();
    let d = two_paths();
    let ctx = WordContext::new(&d)?;
    let mut items: Vec<(Word<Q>, ProjComplex<Q>, bool)> = Vec::new();
    for v in crate::words::enumerate_strings(&d, b.string_segments, b.window) {
        items.push((Word::String(v.clone()), string_complex(&ctx, &v)?, true));
        let r = v.reversed();
        items.push((Word::String(r.clone()), string_complex(&ctx, &r)?, false));
    }
    for w in enumerate_bands(&d, b.band_segments) {
        for &m in b.multiplicities {
            for &pi in b.eigenvalues {
                let pi = Q::from_i64(pi);
                let variants = [
                    (w.clone(), pi.clone(), true),
                    (w.rotated(1), pi.clone(), false),
                    (w.reversed(), pi.inv(), false),
                ];
                for (word, p, primary) in variants {
                    let bd = BandDatum::new(word, m, p);
                    let x = band_complex(&ctx, &bd)?;
                    items.push((Word::Band(bd), x, primary));
                }
            }
        }
    }
    let mut o = Outcome::new();
    let indec: Vec<(usize, Result<bool>)> = items
        .par_iter()
        .enumerate()
        .filter(|(_, it)| it.2)
        .map(|(k, it)| (k, is_indecomposable(&it.1)))
        .collect();
    for (k, r) in indec {
        o.check(r?, || format!("{} is decomposable", items[k].0.to_json()));
    }
    let equivalent = |x: &Word<Q>, y: &Word<Q>| match (x, y) {
        (Word::String(v), Word::String(w)) => word_equivalent_strings(v, w),
        (Word::Band(v), Word::Band(w)) => word_equivalent_bands(v, w),
        _ => false,
    };
    let pairs: Vec<(usize, usize)> =
        (0..items.len()).flat_map(|i| (i + 1..items.len()).map(move |j| (i, j))).collect();
    let results: Vec<Result<Outcome>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut o = Outcome::new();
            let (x, y) = (&items[i], &items[j]);
            let eq = equivalent(&x.0, &y.0);
            let iso = x.1.shape() == y.1.shape() && is_homotopy_iso(&x.1, &y.1, cfg.seed)?;
            o.check(iso == eq, || {
                format!("{} vs {}: iso {iso}, words equivalent {eq}", x.0.to_json(), y.0.to_json())
            });
            Ok(o)
        })
        .collect();
    for r in results {
        o.absorb(r?);
    }
    Ok(o)
}

fn round_trip(corpus: &[DatumCorpus]) -> Result<Outcome> {
    let mut o = Outcome::new();
    for dc in corpus {
        let results: Vec<Result<Outcome>> = dc
            .items
            .par_iter()
            .map(|it| {
                let mut o = Outcome::new();
                let t = triple_of(&dc.triples, &it.complex)?;
                o.check(decorated_matrices(&dc.triples, &t).is_ok(), || {
                    format!(
                        "{}: decorated matrices of {} are not square and invertible",
                        dc.name,
                        it.word.to_json()
                    )
                });
                let y = reconstruct(&dc.triples, &t)?;
                o.check(is_homotopy_iso(&it.complex, &y, 1)?, || {
                    format!("{}: reconstruction of {} differs", dc.name, it.word.to_json())
                });
                Ok(o)
            })
            .collect();
        for r in results {
            o.absorb(r?);
        }
    }
    Ok(o)
}

fn transformations(cfg: &SuiteConfig, corpus: &[DatumCorpus]) -> Result<Outcome> {
    let trials = match cfg.corpus {
        CorpusSize::Full => 100,
        CorpusSize::Small => 10,
    };
    let mut o = Outcome::new();
    for (n, dc) in corpus.iter().enumerate() {
        let results: Vec<Result<Outcome>> = dc
            .items
            .par_iter()
            .enumerate()
            .map(|(k, it)| {
                let mut o = Outcome::new();
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((n as u64) << 32 | k as u64));
                let t = triple_of(&dc.triples, &it.complex)?;
                for trial in 0..trials {
                    let tr = Transformation::random(&t, &dc.triples, &mut rng);
                    let y = tr.apply(&t, &dc.triples).and_then(|t2| reconstruct(&dc.triples, &t2));
                    let ok = match y {
                        Ok(y) => is_homotopy_iso(&it.complex, &y, cfg.seed)?,
                        Err(_) => false,
                    };
                    o.check(ok, || format!("{}: trial {trial} on {}", dc.name, it.word.to_json()));
                }
                Ok(o)
            })
            .collect();
        for r in results {
            o.absorb(r?);
        }
    }
    Ok(o)
}

fn special_cycles() -> Result<Outcome> {
    let mut o = Outcome::new();
    let datums = Datum::enumerate_gentle(2, &[2, 3]);
    let results: Vec<Outcome> = datums
        .par_iter()
        .map(|d| {
            let mut o = Outcome::new();
            let a = gentle_algebra(d);
            let bound = d.index_sets().omega_tilde.len() + 3;
            let stuck = (0..a.vertex_count()).any(|v| !simple_resolution::<Q>(&a, v, bound).terminated);
            let cycles = !d.special_cycles().is_empty();
            o.check(stuck == cycles, || {
                format!("{d}: special cycles {cycles}, unbounded resolution {stuck}")
            });
            o
        })
        .collect();
    for r in results {
        o.absorb(r);
    }
    Ok(o)
}

/// Multiplicity of each interval `[i, j]` in a representation of the
/// linearly oriented quiver with maps `maps[k]: V_k → V_{k+1}`.
fn interval_multiplicities(dims: &[usize], maps: &[Matrix<Q>]) -> Vec<(usize, usize, usize)> {
    let l = dims.len();
    let composite = |i: usize, j: usize| {
        let mut m = Matrix::identity(dims[i]);
        for map in &maps[i..j] {
            m = map.mul(&m);
        }
        m
    };
    let rk = |i: Option<usize>, j: usize| -> i64 {
        match i {
            Some(i) if j < l => rank(&composite(i, j)) as i64,
            _ => 0,
        }
    };
    let mut out = Vec::new();
    for i in 0..l {
        for j in i..l {
            let mult =
                rk(Some(i), j) - rk(i.checked_sub(1), j) - rk(Some(i), j + 1) + rk(i.checked_sub(1), j + 1);
            if mult > 0 {
                out.push((i, j, mult as usize));
            }
        }
    }
    out
}

fn dual_numbers_completeness(cfg: &SuiteConfig) -> Result<Outcome> {
    let (lo, max_gens) = match cfg.corpus {
        CorpusSize::Full => (-3i64, 2usize),
        CorpusSize::Small => (-2, 2),
    };
    let d = dual_numbers();
    let alg: Arc<BasedAlgebra> = Arc::new(gentle_algebra(&d));
    let eps = alg.radical_basis()[0];
    let len = (1 - lo) as usize;
    let mut shapes: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..len {
        shapes = shapes
            .into_iter()
            .flat_map(|s| (0..=max_gens).map(move |n| [s.clone(), vec![n]].concat()))
            .collect();
    }
    let mut jobs = Vec::new();
    for dims in shapes {
        let entries: usize = dims.windows(2).map(|w| w[0] * w[1]).sum();
        for mask in 0..1u64 << entries {
            jobs.push((dims.clone(), mask));
        }
    }
    let results: Vec<Result<Outcome>> = jobs
        .par_iter()
        .map(|(dims, mask)| {
            let mut bit = 0;
            let mut maps = Vec::new();
            let mut diffs = Vec::new();
            for w in dims.windows(2) {
                let mut m = Matrix::zeros(w[1], w[0]);
                let mut dm = vec![vec![Element::<Q>::zero(); w[0]]; w[1]];
                for q in 0..w[1] {
                    for p in 0..w[0] {
                        if mask >> bit & 1 == 1 {
                            m[(q, p)] = Q::one();
                            dm[q][p] = Element::basis(eps);
                        }
                        bit += 1;
                    }
                }
                maps.push(m);
                diffs.push(dm);
            }
            let comps = dims.iter().map(|&n| vec![0; n]).collect();
            let x = ProjComplex::new(alg.clone(), lo, comps, diffs)?;
            let mut want = interval_multiplicities(dims, &maps);
            want.sort();
            let mut got = Vec::new();
            let mut shaped = true;
            for s in decompose(&x)? {
                let chain = s.components().iter().all(|c| c == &vec![0])
                    && s.differentials().iter().all(|m| !m[0][0].is_zero());
                shaped &= chain;
                let i = (s.lo() - lo) as usize;
                got.push((i, i + s.components().len() - 1));
            }
            got.sort();
            let mut got_mult: Vec<(usize, usize, usize)> = Vec::new();
            for (i, j) in got {
                match got_mult.last_mut() {
                    Some(last) if (last.0, last.1) == (i, j) => last.2 += 1,
                    _ => got_mult.push((i, j, 1)),
                }
            }
            let mut o = Outcome::new();
            o.check(shaped && got_mult == want, || {
                format!("dims {dims:?} mask {mask:b}: {got_mult:?} vs {want:?}")
            });
            Ok(o)
        })
        .collect();
    let mut o = Outcome::new();
    for r in results {
        o.absorb(r?);
    }
    o.check(enumerate_bands(&d, 6).is_empty(), || "band words exist over the dual numbers".into());
    Ok(o)
}

fn certificates(corpus: &[DatumCorpus]) -> Result<Outcome> {
    let mut o = Outcome::new();
    for dc in corpus {
        let results: Vec<Result<Outcome>> = dc
            .items
            .par_iter()
            .map(|it| {
                let mut o = Outcome::new();
                let c = generation_certificate(&dc.triples, &it.complex)?;
                o.check(c.holds(), || format!("{}: certificate of {} fails", dc.name, it.word.to_json()));
                Ok(o)
            })
            .collect();
        for r in results {
            o.absorb(r?);
        }
    }
    for n in 1..=3 {
        let p = fat_point_probe::<Q>(n)?;
        o.check(p.holds(), || format!("fat point n = {n}"));
    }
    Ok(o)
}

fn bunch_fixture() -> Result<Outcome> {
    let mut o = Outcome::new();
    let b = BunchOfChains::two_point();
    let letters = ["a1", "a2", "c2", "c1", "a1", "a2", "d2", "d1", "a1", "a2", "c2", "c1"];
    let w =
        FullWord::alternating(letters.iter().map(|s| b.find(s).expect("letter")).collect(), Rel::Tie, true);
    w.validate(&b)?;
    for m in 1..=3 {
        let pi = Q::from_i64(3);
        let j = Matrix::from_rows(jordan_block(m, &pi));
        let rep = band_rep(&b, &w, m, &pi)?;
        let t1 = block_pattern(&[&[0, 2, 0], &[1, 0, 0], &[0, 0, 1]], m, &j);
        let t2 = block_pattern(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]], m, &j);
        o.check(rep.blocks[&0] == t1, || format!("first block matrix for m = {m}"));
        o.check(rep.blocks[&1] == t2, || format!("second block matrix for m = {m}"));
    }
    Ok(o)
}

/// An `m`-blocked matrix from a pattern of 0, I (1) and J (2).
fn block_pattern(pattern: &[&[u8]], m: usize, j: &Matrix<Q>) -> Matrix<Q> {
    let (rows, cols) = (pattern.len(), pattern[0].len());
    let mut out = Matrix::zeros(rows * m, cols * m);
    for (r, row) in pattern.iter().enumerate() {
        for (c, &p) in row.iter().enumerate() {
            for a in 0..m {
                for bb in 0..m {
                    out[(r * m + a, c * m + bb)] = match p {
                        1 if a == bb => Q::one(),
                        2 => j[(a, bb)].clone(),
                        _ => Q::zero(),
                    };
                }
            }
        }
    }
    out
}
