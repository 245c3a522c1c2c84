use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use gentle::algebra::{gentle_algebra, normalization};
use gentle::complexes::{decompose, is_homotopy_iso, is_indecomposable, ProjComplex, TripleContext};
use gentle::datum::fixtures::{dual_numbers, two_paths};
use gentle::datum::Datum;
use gentle::rouquier::generation_certificate;
use gentle::words::{
    band_complex, enumerate_bands, enumerate_strings, string_complex, word_equivalent_bands, BandDatum,
    BandWord, GluingDiagram, WordContext,
};
use gentle::{Field, Q};

struct Pool {
    ctx: WordContext,
    complexes: Vec<ProjComplex<Q>>,
    bands: Vec<BandWord>,
}

fn pool() -> &'static Pool {
    static POOL: OnceLock<Pool> = OnceLock::new();
    POOL.get_or_init(|| {
        let d = two_paths();
        let ctx = WordContext::new(&d).unwrap();
        let complexes =
            enumerate_strings(&d, 3, (-2, 0)).iter().map(|v| string_complex(&ctx, v).unwrap()).collect();
        let bands = enumerate_bands(&d, 4);
        Pool { ctx, complexes, bands }
    })
}

fn datum_strategy() -> impl Strategy<Value = Option<Datum>> {
    (prop::collection::vec(1usize..=3, 1..=2), prop::collection::vec((0usize..6, 0usize..6), 0..4)).prop_map(
        |(m, pairs)| {
            let omega: Vec<(usize, usize)> =
                m.iter().enumerate().flat_map(|(i, &l)| (1..=l).map(move |j| (i + 1, j))).collect();
            let rels: Vec<_> =
                pairs.iter().map(|&(x, y)| (omega[x % omega.len()], omega[y % omega.len()])).collect();
            Datum::new(m, &rels).ok()
        },
    )
}

fn multiset(x: &ProjComplex<Q>) -> BTreeMap<(i64, usize), usize> {
    let mut out = BTreeMap::new();
    for r in x.degrees() {
        for &v in x.comp(r) {
            *out.entry((r, v)).or_default() += 1;
        }
    }
    out
}

fn add_cohomology(a: &mut BTreeMap<i64, Vec<usize>>, b: &BTreeMap<i64, Vec<usize>>) {
    for (r, v) in b {
        let e = a.entry(*r).or_insert_with(|| vec![0; v.len()]);
        for (x, y) in e.iter_mut().zip(v) {
            *x += y;
        }
    }
}

fn nonzero(c: BTreeMap<i64, Vec<usize>>) -> BTreeMap<i64, Vec<usize>> {
    c.into_iter().filter(|(_, v)| v.iter().any(|&x| x > 0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn index_set_counts(d in datum_strategy()) {
        let Some(d) = d else { return Ok(()) };
        let s = d.index_sets();
        let selfs = d.omega().into_iter().filter(|&e| d.is_self_paired(e)).count();
        let pairs = d.relations().len() - selfs;
        prop_assert_eq!(s.omega.len(), d.lengths().iter().sum::<usize>());
        prop_assert_eq!(s.omega_bar.len(), s.omega.len() + selfs);
        prop_assert_eq!(s.omega_hat.len(), s.omega.len() - pairs);
        prop_assert_eq!(s.omega_tilde.len(), s.omega.len() - pairs + selfs);
        for e in d.omega() {
            if let Some(t) = d.tau(e) {
                prop_assert!(d.in_range(t));
            }
        }
    }

    #[test]
    fn algebras_satisfy_the_axioms(d in datum_strategy()) {
        let Some(d) = d else { return Ok(()) };
        let a = gentle_algebra(&d);
        prop_assert!(a.check_axioms().is_ok());
        let total: usize = (0..a.vertex_count()).map(|v| a.projective_basis(v).len()).sum();
        prop_assert_eq!(total, a.dim());
        prop_assert!(normalization(&d).check_axioms().is_ok());
    }

    #[test]
    fn sums_are_additive(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in -1i64..=1) {
        let p = pool();
        let x = &p.complexes[i.index(p.complexes.len())];
        let y = p.complexes[j.index(p.complexes.len())].shift(k);
        let s = x.direct_sum(&y);
        let mut want = x.cohomology_dims();
        add_cohomology(&mut want, &y.cohomology_dims());
        prop_assert_eq!(nonzero(s.cohomology_dims()), nonzero(want));
        let parts = decompose(&s).unwrap();
        prop_assert_eq!(parts.len(), 2);
        let mut got = BTreeMap::new();
        for part in &parts {
            prop_assert!(is_indecomposable(part).unwrap());
            for (key, n) in multiset(part) {
                *got.entry(key).or_insert(0) += n;
            }
        }
        prop_assert_eq!(got, multiset(&s));
    }

    #[test]
    fn minimize_keeps_cohomology(i in any::<prop::sample::Index>()) {
        let p = pool();
        let x = &p.complexes[i.index(p.complexes.len())].trimmed();
        // glue on a contractible cone on the top vertex of x
        let top = x.hi() - 1;
        let v = x.comp(top)[0];
        let one = gentle::algebra::Element::basis(p.ctx.alg.idempotent(v));
        let cone = ProjComplex::new(Arc::clone(&p.ctx.alg), top, vec![vec![v], vec![v]], vec![vec![vec![one]]]).unwrap();
        let s = x.direct_sum(&cone);
        let m = s.minimize().unwrap();
        prop_assert!(m.verify().is_minimal);
        prop_assert_eq!(nonzero(m.cohomology_dims()), nonzero(s.cohomology_dims()));
        prop_assert_eq!(m.rank(), x.rank());
    }

    #[test]
    fn json_round_trips(i in any::<prop::sample::Index>(), k in -2i64..=2) {
        let p = pool();
        let x = p.complexes[i.index(p.complexes.len())].shift(k);
        let text = x.to_json();
        let back = ProjComplex::<Q>::from_json(Arc::clone(&p.ctx.alg), &text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn band_rotations_are_equivalent(i in any::<prop::sample::Index>(), k in 0usize..4, pi in 1i64..=3) {
        let p = pool();
        let w = &p.bands[i.index(p.bands.len())];
        let b = BandDatum::new(w.clone(), 1, Q::from_i64(pi));
        let r = BandDatum::new(w.rotated(k % w.segments.len()), 1, Q::from_i64(pi));
        let rev = BandDatum::new(w.reversed(), 1, Q::from_i64(pi).inv());
        for other in [&r, &rev] {
            prop_assert!(word_equivalent_bands(&b, other));
            prop_assert!(word_equivalent_bands(other, &b));
            let (x, y): (ProjComplex<Q>, ProjComplex<Q>) =
                (band_complex(&p.ctx, &b).unwrap(), band_complex(&p.ctx, other).unwrap());
            prop_assert!(is_homotopy_iso(&x, &y, 7).unwrap());
        }
    }
}

#[test]
fn outputs_are_deterministic() {
    let d = dual_numbers();
    let ctx = TripleContext::new(&d).unwrap();
    let wctx = WordContext::new(&d).unwrap();
    for v in enumerate_strings(&d, 3, (-2, 0)) {
        let a: ProjComplex<Q> = string_complex(&wctx, &v).unwrap();
        let b: ProjComplex<Q> = string_complex(&wctx, &v).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let ca = generation_certificate(&ctx, &a).unwrap().to_json_value().to_string();
        let cb = generation_certificate(&ctx, &b).unwrap().to_json_value().to_string();
        assert_eq!(ca, cb);
    }
}

#[test]
fn empty_gluing_diagram_is_an_empty_digraph() {
    let g =
        GluingDiagram { segments: vec![], nodes: vec![], solid: vec![], dotted: vec![], m: 1, jordan: None };
    let dot = g.to_dot();
    assert!(dot.starts_with("digraph gluing {"));
    assert!(!dot.contains("->") && !dot.contains(" n0"));
}
