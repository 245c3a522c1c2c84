use super::*;
use crate::algebra::Element;
use crate::complexes::{is_homotopy_iso, is_indecomposable, ProjComplex};
use crate::datum::fixtures::*;
use crate::datum::Datum;
use crate::scalar::Field;
use crate::Q;
use num_traits::One;

use Orientation::{HighFirst as H, LowFirst as L};

fn seg(i: usize, a: usize, b: usize, r: i64, o: Orientation) -> Segment {
    Segment::new(i, a, b, r, o)
}

pub(crate) fn fav_band() -> BandWord {
    BandWord::new(vec![seg(2, 3, 2, -1, H), seg(1, 2, 1, 0, H), seg(2, 2, 1, 0, L), seg(1, 3, 2, -1, L)])
}

pub(crate) fn fav_string() -> StringDatum {
    StringDatum::new(vec![
        seg(2, 4, 3, -1, H),
        seg(1, 3, 1, 0, H),
        seg(2, 2, 1, 0, L),
        seg(1, 3, 2, -1, L),
        seg(2, 4, 3, -2, L),
    ])
}

fn entry(ctx: &WordContext, i: usize, a: usize, b: usize, c: i64) -> Element<Q> {
    Element::scaled_basis(ctx.path(i, a, b), Q::from_i64(c))
}

#[test]
fn string_of_the_worked_example() {
    let ctx = WordContext::new(&two_paths()).unwrap();
    let v = fav_string();
    assert_eq!(v.validate(&ctx.datum).unwrap(), StringShape::BothStalk);
    let x: ProjComplex<Q> = string_complex(&ctx, &v).unwrap();
    let (p1, p2, p3) = (0, 1, 2);
    assert_eq!(x.lo(), -2);
    assert_eq!(x.components(), &[vec![p3], vec![p3, p2], vec![p1]]);
    let b = entry(&ctx, 1, 3, 2, 1);
    let ba = entry(&ctx, 1, 3, 1, 1);
    let c = entry(&ctx, 2, 2, 1, 1);
    assert_eq!(x.diff(-2), vec![vec![Element::zero()], vec![b]]);
    assert_eq!(x.diff(-1), vec![vec![ba, c]]);
    let ver = x.verify();
    assert!(ver.is_complex && ver.is_minimal);
    assert_eq!(x.cohomology_totals().values().cloned().collect::<Vec<_>>(), vec![0, 0, 2]);
}

#[test]
fn band_of_the_worked_example() {
    let ctx = WordContext::new(&two_paths()).unwrap();
    for m in 1..=3 {
        let pi = Q::from_i64(5);
        let w = BandDatum::new(fav_band(), m, pi.clone());
        let x = band_complex(&ctx, &w).unwrap();
        assert_eq!(x.lo(), -2);
        assert_eq!(x.components(), &[vec![2; m], vec![1; 2 * m], vec![0; m]]);
        let j = jordan_block(m, &pi);
        let d0 = x.diff(-2);
        let d1 = x.diff(-1);
        for q in 0..m {
            for p in 0..m {
                let id = if p == q { 1 } else { 0 };
                assert_eq!(d0[q][p], entry(&ctx, 2, 3, 2, id));
                let jb = Element::scaled_basis(ctx.path(1, 3, 2), j[q][p].clone());
                assert_eq!(d0[m + q][p], jb);
                assert_eq!(d1[q][p], entry(&ctx, 1, 2, 1, id));
                assert_eq!(d1[q][m + p], entry(&ctx, 2, 2, 1, id));
            }
        }
        assert!(x.verify().is_minimal);
    }
}

#[test]
fn gluing_diagram_of_the_band() {
    let ctx = WordContext::new(&two_paths()).unwrap();
    let g = band_gluing_diagram(&ctx, &BandDatum::new(fav_band(), 1, Q::one())).unwrap();
    assert_eq!((g.nodes.len(), g.solid.len(), g.dotted.len()), (8, 4, 4));
    for &(s, t) in &g.dotted {
        let (x, y) = (g.nodes[s], g.nodes[t]);
        assert_eq!(x.degree, y.degree);
        assert_eq!(ctx.datum.partner(x.elem), Some(y.elem));
    }
    let dot = g.to_dot();
    assert_eq!(dot.matches("style=dotted").count(), 4);
    assert!(dot.contains("J\"]"));
    let s = string_gluing_diagram(&ctx, &fav_string()).unwrap();
    assert_eq!((s.nodes.len(), s.solid.len(), s.dotted.len()), (8, 3, 4));
}

#[test]
fn validation_errors() {
    let d = two_paths();
    assert!(fav_string().validate(&d).is_ok());
    let mut bad = fav_string();
    bad.segments[1].r = 1;
    assert!(matches!(bad.validate(&d), Err(crate::Error::InvalidWord(m)) if m.contains("degree")));
    // a lone stalk on a tied position has a tied free end
    assert!(StringDatum::new(vec![seg(1, 4, 1, 0, L)]).validate(&d).is_err());
    let h = Datum::new(vec![3], &[]).unwrap();
    assert_eq!(StringDatum::new(vec![seg(1, 4, 2, 0, L)]).validate(&h).unwrap(), StringShape::RightStalk);
    let periodic = BandWord::new([fav_band().segments, fav_band().segments].concat());
    assert!(periodic.validate(&d).is_err());
    let zero = BandDatum::new(fav_band(), 1, Q::from_i64(0));
    assert!(zero.validate(&d).is_err());
}

#[test]
fn single_stalk_is_a_shifted_projective() {
    let h = Datum::new(vec![3], &[]).unwrap();
    let ctx = WordContext::new(&h).unwrap();
    let x: ProjComplex<Q> = string_complex(&ctx, &StringDatum::new(vec![seg(1, 4, 2, 3, L)])).unwrap();
    assert_eq!(x, ProjComplex::stalk(ctx.alg.clone(), ctx.vertex((1, 2)), 3));
}

fn eps_chain_word(n: usize) -> StringDatum {
    let mut segs = vec![seg(1, 3, 2, 0, H)];
    for k in 0..n as i64 {
        segs.push(seg(1, 2, 1, -k, L));
    }
    segs.push(seg(1, 3, 1, -(n as i64), L));
    StringDatum::new(segs)
}

#[test]
fn dual_number_strings_are_the_x_complexes() {
    let ctx = WordContext::new(&dual_numbers()).unwrap();
    for n in 0..4 {
        let x: ProjComplex<Q> = string_complex(&ctx, &eps_chain_word(n)).unwrap();
        assert_eq!(x.lo(), -(n as i64));
        assert_eq!(x.components().len(), n + 1);
        let cohom = x.cohomology_totals();
        let nonzero: Vec<i64> = cohom.iter().filter(|(_, &c)| c > 0).map(|(&r, _)| r).collect();
        assert_eq!(nonzero, if n == 0 { vec![0] } else { vec![-(n as i64), 0] });
    }
}

#[test]
fn string_enumeration_over_dual_numbers() {
    let d = dual_numbers();
    let found = enumerate_strings(&d, 5, (-3, 0));
    for v in &found {
        v.validate(&d).unwrap();
        assert_eq!(*v, v.canonical());
    }
    let mut expect: Vec<StringDatum> = Vec::new();
    for n in 0..=3usize {
        for top in (n as i64 - 3)..=0 {
            expect.push(eps_chain_word(n).translated(top).canonical());
        }
    }
    expect.sort();
    assert_eq!(found, expect);
    assert!(enumerate_bands(&d, 6).is_empty());
}

#[test]
fn enumeration_without_ties() {
    let h = Datum::new(vec![3], &[]).unwrap();
    for v in enumerate_strings(&h, 2, (-1, 0)) {
        assert_eq!(v.segments.len(), 1);
    }
    assert!(enumerate_bands(&h, 4).is_empty());
}

#[test]
fn worked_words_are_enumerated() {
    let d = two_paths();
    let bands = enumerate_bands(&d, 4);
    assert!(bands.contains(&fav_band().canonical()));
    for b in &bands {
        b.validate(&d).unwrap();
    }
    let strings = enumerate_strings(&d, 5, (-2, 0));
    assert!(strings.contains(&fav_string().canonical()));
    let short = enumerate_strings(&d, 2, (-1, 0));
    // every position is tied, so the short strings are the stalk pairs P_γ[-r]
    assert_eq!(short.len(), 6);
    assert!(short.iter().all(|v| v.shape(&d) == StringShape::BothStalk));
}

#[test]
fn equivalence_of_words() {
    let v = fav_string();
    assert!(word_equivalent_strings(&v, &v.reversed()));
    let mut w = v.clone();
    w.segments[2].r -= 1;
    assert!(!word_equivalent_strings(&v, &w));
    let swapped = StringDatum::new(v.segments.iter().map(|s| Segment { i: 3 - s.i, ..*s }).collect());
    assert!(!word_equivalent_strings(&v, &swapped));
    let b = BandDatum::new(fav_band(), 1, Q::from_i64(2));
    let rot = BandDatum::new(fav_band().rotated(1), 1, Q::from_i64(2));
    let rev = BandDatum::new(fav_band().reversed(), 1, Q::new(1, 2));
    let other = BandDatum::new(fav_band(), 1, Q::from_i64(3));
    assert!(word_equivalent_bands(&b, &rot));
    assert!(word_equivalent_bands(&b, &rev));
    assert!(!word_equivalent_bands(&b, &other));
}

#[test]
fn band_isomorphisms_follow_the_words() {
    let ctx = WordContext::new(&two_paths()).unwrap();
    let mk = |w: BandWord, pi: Q| band_complex(&ctx, &BandDatum::new(w, 1, pi)).unwrap();
    let x = mk(fav_band(), Q::from_i64(2));
    assert!(is_indecomposable(&x).unwrap());
    for k in 1..4 {
        assert!(is_homotopy_iso(&x, &mk(fav_band().rotated(k), Q::from_i64(2)), 7).unwrap());
    }
    assert!(is_homotopy_iso(&x, &mk(fav_band().reversed(), Q::new(1, 2)), 7).unwrap());
    assert!(!is_homotopy_iso(&x, &mk(fav_band(), Q::from_i64(3)), 7).unwrap());
    assert!(!is_homotopy_iso(&x, &mk(fav_band().reversed(), Q::from_i64(2)), 7).unwrap());
    let x2 = band_complex(&ctx, &BandDatum::new(fav_band(), 2, Q::from_i64(2))).unwrap();
    let y2 = band_complex(&ctx, &BandDatum::new(fav_band().rotated(2), 2, Q::from_i64(2))).unwrap();
    assert!(is_indecomposable(&x2).unwrap());
    assert!(is_homotopy_iso(&x2, &y2, 3).unwrap());
}

#[test]
fn word_json_round_trip() {
    let w: Word<Q> = Word::Band(BandDatum::new(fav_band(), 2, Q::new(3, 2)));
    let text = w.to_json();
    assert!(text.contains("\"orient\":\"high-first\""));
    assert_eq!(Word::<Q>::from_json(&text).unwrap(), w);
    let s: Word<Q> = Word::String(fav_string());
    assert_eq!(Word::<Q>::from_json(&s.to_json()).unwrap(), s);
    assert!(Word::<Q>::from_json("{\"kind\":\"loop\",\"segments\":[]}").is_err());
}

#[test]
fn truncations_along_the_dual_number_cycle() {
    let ctx = WordContext::new(&dual_numbers()).unwrap();
    let seed = StringDatum::new(vec![seg(1, 3, 2, 0, H)]);
    for size in 1..5i64 {
        let t: Truncation<Q> = truncated_infinite_string(&ctx, &seed, &[(1, 1)], (-(size - 1), 0)).unwrap();
        let x: ProjComplex<Q> = string_complex(&ctx, &eps_chain_word(size as usize - 1)).unwrap();
        assert_eq!(t.complex.components(), x.components());
        assert_eq!(t.cut, Some(-(size - 1)));
        let cohom = t.complex.cohomology_totals();
        for r in -(size - 1) + 1..0 {
            assert_eq!(cohom.get(&r).copied().unwrap_or(0), 0);
        }
    }
    assert!(truncated_infinite_string::<Q>(&ctx, &seed, &[(1, 2)], (-2, 0)).is_err());
}

#[test]
fn resolutions_and_special_cycles() {
    let ctx = WordContext::new(&dual_numbers()).unwrap();
    let r: ResolutionComplex<Q> = projective_resolution(&ctx.alg, 0, 5).unwrap();
    assert!(!r.terminated);
    assert_eq!(r.complex.components().len(), 6);
    let ctx = WordContext::new(&two_paths()).unwrap();
    for v in 0..3 {
        let r: ResolutionComplex<Q> = projective_resolution(&ctx.alg, v, 5).unwrap();
        assert!(r.terminated);
        assert!(r.complex.lo() >= -2);
        let cohom = r.complex.cohomology_totals();
        assert_eq!(cohom.iter().filter(|(_, &c)| c > 0).count(), 1);
    }
    for d in Datum::enumerate_gentle(2, &[2, 3]) {
        let ctx = WordContext::new(&d).unwrap();
        let bound = d.vertices().len() + 2;
        let all = (0..ctx.alg.vertex_count())
            .all(|v| projective_resolution::<Q>(&ctx.alg, v, bound).unwrap().terminated);
        assert_eq!(all, d.special_cycles().is_empty(), "{d}");
    }
}

#[test]
fn corpus_complexes_are_minimal() {
    for (_, d) in gentle_corpus() {
        let ctx = WordContext::new(&d).unwrap();
        for v in enumerate_strings(&d, 4, (-2, 0)) {
            let x: ProjComplex<Q> = string_complex(&ctx, &v).unwrap();
            let ver = x.verify();
            assert!(ver.is_complex && ver.is_minimal, "{v:?}");
        }
        for w in enumerate_bands(&d, 4) {
            let x = band_complex(&ctx, &BandDatum::new(w, 2, Q::from_i64(3))).unwrap();
            let ver = x.verify();
            assert!(ver.is_complex && ver.is_minimal);
        }
    }
}
