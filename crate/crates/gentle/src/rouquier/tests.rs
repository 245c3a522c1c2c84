use std::sync::Arc;

use super::*;
use crate::algebra::{BasedAlgebra, Element};
use crate::complexes::{ProjComplex, TripleContext};
use crate::datum::fixtures::*;
use crate::datum::Datum;
use crate::error::Error;
use crate::scalar::Field;
use crate::words::tests::{fav_band, fav_string};
use crate::words::{band_complex, enumerate_strings, string_complex, BandDatum, WordContext};
use crate::Q;

/// `A → A → ⋯ → A` with `n` differentials ε, ending in degree 0.
fn eps_chain(a: &Arc<BasedAlgebra>, n: usize) -> ProjComplex<Q> {
    let eps = Element::basis(a.radical_basis()[0]);
    ProjComplex::new(a.clone(), -(n as i64), vec![vec![0]; n + 1], vec![vec![vec![eps]]; n]).unwrap()
}

fn term(member: usize, degree: i64, multiplicity: usize) -> ZTerm {
    ZTerm { member, degree, multiplicity }
}

#[test]
fn generator_members() {
    let z = build_generator(&dual_numbers());
    let labels: Vec<&str> = z.members.iter().map(|m| m.label.as_str()).collect();
    assert_eq!(labels, ["W(1,(2,1))", "W(1,(3,1))", "W(1,(3,2))"]);
    assert_eq!(z.dims(), [1, 2, 1]);
    let z3 = build_generator(&Datum::new(vec![3], &[]).unwrap());
    assert_eq!(z3.dims(), [1, 2, 3, 1, 2, 1]);
    for (name, d) in gentle_corpus() {
        let want: usize = d.lengths().iter().map(|m| m * (m + 1) / 2).sum();
        assert_eq!(build_generator(&d).len(), want, "{name}");
    }
}

#[test]
fn simples_are_matched_inside_the_generator() {
    for (name, d) in gentle_corpus() {
        let ctx = TripleContext::new(&d).unwrap();
        let wctx = WordContext::new(&d).unwrap();
        for v in 0..ctx.a.vertex_count() {
            let c = generation_certificate(&ctx, &ProjComplex::<Q>::stalk(wctx.alg.clone(), v, 0)).unwrap();
            assert!(c.holds(), "{name} vertex {v}");
            for s in &c.simples {
                let z = &c.generator.members[s.member];
                assert!(z.is_simple());
                assert_eq!(ctx.a_vertex((z.chain, z.b)), s.vertex, "{name}");
            }
        }
    }
}

#[test]
fn dual_numbers_eps_chain_certificates() {
    // members: 0 = W(1,(2,1)), 1 = W(1,(3,1)), 2 = W(1,(3,2))
    let ctx = TripleContext::new(&dual_numbers()).unwrap();
    for n in 0..=3usize {
        let lo = -(n as i64);
        let c = generation_certificate(&ctx, &eps_chain(&ctx.a, n)).unwrap();
        assert!(c.holds(), "n={n}");
        // Y: the segments Q_2 → Q_1 give the simple at (1,1) in the upper
        // degrees, plus Q_1 at the bottom and Q_2 at the top
        let mut y = vec![term(1, lo, 1)];
        y.extend((lo + 1..=0).map(|r| term(0, r, 1)));
        y.push(term(2, 0, 1));
        y.sort_by_key(|t| (t.degree, t.member));
        if n == 0 {
            y = vec![term(1, 0, 1), term(2, 0, 1)];
        }
        assert_eq!(c.y, y, "n={n}");
        assert_eq!(c.v, (lo..=0).map(|r| term(0, r, 1)).collect::<Vec<_>>());
        let ybar: Vec<ZTerm> = (lo..=0).flat_map(|r| [term(0, r, 1), term(2, r, 1)]).collect();
        assert_eq!(c.y_bar, ybar);
        assert_eq!(c.left.iter().map(|t| t.degree).min(), Some(lo + 1));
        let total = |ts: &[ZTerm]| ts.iter().map(|t| t.multiplicity).sum::<usize>();
        assert_eq!(total(&c.right), total(&c.y) + n + 1);
        assert_eq!(c.euler.x, vec![if n % 2 == 0 { 2 } else { 0 }]);
        for dc in &c.degrees {
            assert_eq!((dc.dim_x, dc.dim_y, dc.dim_v, dc.dim_y_bar), (2, 3, 1, 2));
        }
    }
}

#[test]
fn stalks_and_worked_complexes_are_certified() {
    let d = two_paths();
    let ctx = TripleContext::new(&d).unwrap();
    let wctx = WordContext::new(&d).unwrap();
    let band: ProjComplex<Q> = band_complex(&wctx, &BandDatum::new(fav_band(), 1, Q::from_i64(2))).unwrap();
    let c = generation_certificate(&ctx, &band).unwrap();
    assert!(c.holds());
    assert!(c.degrees.iter().all(|dc| dc.is_exact()));
    let s: ProjComplex<Q> = string_complex(&wctx, &fav_string()).unwrap();
    assert!(generation_certificate(&ctx, &s).unwrap().holds());
}

#[test]
fn corpus_strings_are_certified() {
    for (name, d) in gentle_corpus() {
        let ctx = TripleContext::new(&d).unwrap();
        let wctx = WordContext::new(&d).unwrap();
        for v in enumerate_strings(&d, 3, (-2, 0)) {
            let x: ProjComplex<Q> = string_complex(&wctx, &v).unwrap();
            let c = generation_certificate(&ctx, &x).unwrap();
            assert!(c.holds(), "{name}: {v:?}");
        }
    }
}

#[test]
fn non_minimal_complexes_are_rejected() {
    let ctx = TripleContext::new(&dual_numbers()).unwrap();
    let cone =
        ProjComplex::<Q>::new(ctx.a.clone(), -1, vec![vec![0], vec![0]], vec![vec![vec![Element::basis(0)]]])
            .unwrap();
    assert_eq!(generation_certificate(&ctx, &cone), Err(Error::NotMinimal));
}

#[test]
fn zero_complex_has_an_empty_certificate() {
    let ctx = TripleContext::new(&dual_numbers()).unwrap();
    let c = generation_certificate(&ctx, &ProjComplex::<Q>::zero(ctx.a.clone())).unwrap();
    assert!(c.holds());
    assert!(c.left.is_empty() && c.right.is_empty());
}

#[test]
fn fat_point_probes() {
    for n in 1..=3 {
        let p = fat_point_probe::<Q>(n).unwrap();
        assert_eq!((p.dim_a, p.dim_h), (n + 1, 3 * n));
        assert!(p.holds(), "n={n}");
        assert_eq!(p.certificates.len(), 3);
        // ranks n^k of the resolution of k
        let last = &p.certificates[2];
        let dims: Vec<usize> = last.degrees.iter().map(|dc| dc.dim_v).collect();
        assert_eq!(dims, [n * n, n, 1]);
    }
}

#[test]
fn fat_point_of_one_variable_is_the_dual_numbers() {
    let p = fat_point_probe::<Q>(1).unwrap();
    let ctx = TripleContext::new(&dual_numbers()).unwrap();
    for (k, c) in p.certificates.iter().enumerate() {
        let d = generation_certificate(&ctx, &eps_chain(&ctx.a, k)).unwrap();
        assert_eq!((&c.y, &c.v, &c.y_bar, &c.degrees), (&d.y, &d.v, &d.y_bar, &d.degrees), "k={k}");
    }
}
