use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::complexes::{is_homotopy_iso, reconstruct, triple_of, TripleContext};
use crate::datum::fixtures::*;
use crate::datum::Datum;
use crate::exactla::Matrix;
use crate::scalar::Field;
use crate::words::tests::{fav_band, fav_string};
use crate::words::{
    band_complex, enumerate_bands, enumerate_strings, string_complex, BandDatum, Orientation, Segment,
    StringDatum, WordContext,
};
use crate::Q;
use num_traits::{One, Zero};

fn word(b: &BunchOfChains, labels: &[&str], first: Rel, cyclic: bool) -> FullWord {
    FullWord::alternating(labels.iter().map(|s| b.find(s).unwrap()).collect(), first, cyclic)
}

fn example_band(b: &BunchOfChains) -> FullWord {
    word(b, &["a1", "a2", "c2", "c1", "a1", "a2", "d2", "d1", "a1", "a2", "c2", "c1"], Rel::Tie, true)
}

fn labels(b: &BunchOfChains, w: &FullWord) -> Vec<String> {
    w.letters.iter().map(|x| b.label(*x).to_string()).collect()
}

/// Assembles an `m`-blocked matrix from a pattern of 0, I and J.
fn blocks(pattern: &[&[u8]], m: usize, j: &Matrix<Q>) -> Matrix<Q> {
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

#[test]
fn two_point_bunch_structure() {
    let b = BunchOfChains::two_point();
    assert_eq!(b.len(), 2);
    let (a1, a2, c1, d2) =
        (b.find("a1").unwrap(), b.find("a2").unwrap(), b.find("c1").unwrap(), b.find("d2").unwrap());
    assert_eq!(b.tie(a1), Some(a2));
    assert!(b.dash(a1, c1));
    assert!(!b.dash(a1, d2));
    assert!(!b.is_semi());
    assert!(BunchOfChains::two_point_semi().is_semi());
    assert_eq!(b.ties().len(), 3);
    let dup = BunchOfChains::new(
        vec!["1".into()],
        vec![vec!["x".into()]],
        vec![vec!["y".into(), "z".into()]],
        &[(a(0, Side::E, 0), a(0, Side::F, 0)), (a(0, Side::E, 0), a(0, Side::F, 1))],
    );
    assert!(dup.is_err());
}

fn a(index: usize, side: Side, pos: usize) -> Letter {
    Letter { index, side, pos }
}

#[test]
fn example_band_reproduces_the_displayed_blocks() {
    let b = BunchOfChains::two_point();
    let w = example_band(&b);
    w.validate(&b).unwrap();
    assert_eq!(w.positions().len(), 6);
    for m in 1..=3 {
        let pi = Q::from_i64(3);
        let j = Matrix::from_rows(crate::words::jordan_block(m, &pi));
        let rep: RepX<Q> = band_rep(&b, &w, m, &pi).unwrap();
        // rows: a at positions 1, 3, 5; columns: c at 2, 6, then d at 4
        let t1 = blocks(&[&[0, 2, 0], &[1, 0, 0], &[0, 0, 1]], m, &j);
        let t2 = blocks(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]], m, &j);
        assert_eq!(rep.blocks[&0], t1, "m = {m}");
        assert_eq!(rep.blocks[&1], t2, "m = {m}");
        assert_eq!(rep.size(b.find("c1").unwrap()), 2 * m);
        assert_eq!(rep.size(b.find("d2").unwrap()), m);
    }
}

#[test]
fn single_letter_word_is_an_empty_matrix() {
    let b =
        BunchOfChains::new(vec!["1".into()], vec![vec!["x".into()]], vec![vec!["y".into()]], &[]).unwrap();
    let w = word(&b, &["y"], Rel::Tie, false);
    let rep: RepX<Q> = string_rep(&b, &w).unwrap();
    assert_eq!(rep.size(b.find("y").unwrap()), 1);
    assert_eq!((rep.blocks[&0].rows(), rep.blocks[&0].cols()), (1, 0));
    assert!(rep_is_indecomposable(&b, &rep).unwrap());
}

#[test]
fn invalid_words_are_rejected() {
    let b = BunchOfChains::two_point();
    // a tied end letter must be followed by its tie
    assert!(word(&b, &["a1", "c1"], Rel::Dash, false).validate(&b).is_err());
    // a1 and c2 live at different indices
    assert!(word(&b, &["a2", "a1", "c2"], Rel::Tie, false).validate(&b).is_err());
    // odd cyclic word
    assert!(word(&b, &["a1", "a2", "c2"], Rel::Tie, true).validate(&b).is_err());
    let periodic = word(&b, &["a1", "a2", "c2", "c1", "a1", "a2", "c2", "c1"], Rel::Tie, true);
    assert!(band_rep::<Q>(&b, &periodic, 1, &Q::one()).is_err());
    assert!(band_rep::<Q>(&b, &example_band(&b), 1, &Q::zero()).is_err());
}

#[test]
fn datum_bunch_sizes_and_ties() {
    let db = bunch_of_datum(&dual_numbers(), (-1, 0));
    assert_eq!(db.bunch.len(), 4);
    for i in 0..4 {
        assert_eq!(db.bunch.chain_len(i, Side::F), 2);
        assert_eq!(db.bunch.chain_len(i, Side::E), 1);
    }
    assert!(!db.bunch.is_semi());
    for (_, d) in gentle_corpus() {
        assert!(!bunch_of_datum(&d, (-2, 1)).bunch.is_semi());
    }
    let skew = bunch_of_datum(&skew_tubular(), (-1, 1));
    let selfs: Vec<String> = skew
        .bunch
        .ties()
        .into_iter()
        .filter(|(x, y)| x == y)
        .map(|(x, _)| skew.bunch.label(x).to_string())
        .collect();
    let mut expect = Vec::new();
    for r in -1..=1 {
        for e in ["(1,2)", "(2,2)"] {
            expect.push(format!("u({e},{r})"));
        }
    }
    let mut got = selfs.clone();
    got.sort();
    expect.sort();
    assert_eq!(got, expect);
}

#[test]
fn datum_bunch_order_matches_decorated_matrices() {
    let d = two_paths();
    let ctx = TripleContext::new(&d).unwrap();
    let wc = WordContext::new(&d).unwrap();
    let db = bunch_of_datum(&d, (-3, 1));
    for v in enumerate_strings(&d, 5, (-2, 0)) {
        let x: crate::complexes::ProjComplex<Q> = string_complex(&wc, &v).unwrap();
        let t = triple_of(&ctx, &x).unwrap();
        for th in t.theta.blocks.values() {
            let pos: Vec<usize> = th.labels.iter().map(|l| db.q(l.summand, l.high).unwrap().pos).collect();
            assert!(pos.windows(2).all(|p| p[0] <= p[1]), "{pos:?}");
        }
        let rep = db.rep_of_triple(&t).unwrap();
        for m in rep.blocks.values() {
            assert!(m.is_square() && m.is_invertible());
        }
    }
}

#[test]
fn unreduce_worked_band() {
    let db = bunch_of_datum(&two_paths(), (-2, 0));
    let w = db.unreduce_band(&fav_band()).unwrap();
    w.validate(&db.bunch).unwrap();
    let expect = [
        "q((2,3),-2)^((2,2),-1)",
        "q((2,2),-1)^((2,3),-2)",
        "u((2,2),-1)",
        "u((1,2),-1)",
        "q((1,2),-1)^((1,1),0)",
        "q((1,1),0)^((1,2),-1)",
        "u((1,1),0)",
        "u((2,1),0)",
        "q((2,1),0)^((2,2),-1)",
        "q((2,2),-1)^((2,1),0)",
        "u((2,2),-1)",
        "u((1,2),-1)",
        "q((1,2),-1)^((1,3),-2)",
        "q((1,3),-2)^((1,2),-1)",
        "u((1,3),-2)",
        "u((2,3),-2)",
    ];
    assert_eq!(labels(&db.bunch, &w), expect);
    assert!(w.cyclic && w.rels[0] == Rel::Tie);
}

#[test]
fn unreduce_worked_string() {
    let db = bunch_of_datum(&two_paths(), (-3, 0));
    let w = db.unreduce_string(&fav_string()).unwrap();
    w.validate(&db.bunch).unwrap();
    let expect = [
        "q((2,3),-1)^((2,4),-2)",
        "u((2,3),-1)",
        "u((1,3),-1)",
        "q((1,3),-1)^((1,1),0)",
        "q((1,1),0)^((1,3),-1)",
        "u((1,1),0)",
        "u((2,1),0)",
        "q((2,1),0)^((2,2),-1)",
        "q((2,2),-1)^((2,1),0)",
        "u((2,2),-1)",
        "u((1,2),-1)",
        "q((1,2),-1)^((1,3),-2)",
        "q((1,3),-2)^((1,2),-1)",
        "u((1,3),-2)",
        "u((2,3),-2)",
        "q((2,3),-2)^((2,4),-3)",
    ];
    assert_eq!(labels(&db.bunch, &w), expect);
    assert_eq!(w.rels[0], Rel::Dash);
}

#[test]
fn unreduce_single_stalk() {
    let d = Datum::new(vec![3], &[]).unwrap();
    let db = bunch_of_datum(&d, (-1, 0));
    let v = StringDatum::new(vec![Segment::new(1, 4, 2, 0, Orientation::HighFirst)]);
    let w = db.unreduce_string(&v).unwrap();
    assert_eq!(labels(&db.bunch, &w), ["q((1,2),0)^((1,4),-1)", "u((1,2),0)"]);
    let rep: RepX<Q> = string_rep(&db.bunch, &w).unwrap();
    let i = db.index_of((1, 2), 0).unwrap();
    assert_eq!(rep.blocks[&i], Matrix::identity(1));
}

#[test]
fn reversal_commutes_with_unreduce() {
    let d = two_paths();
    let db = bunch_of_datum(&d, (-3, 1));
    for v in enumerate_strings(&d, 5, (-2, 0)).into_iter().chain([fav_string()]) {
        assert_eq!(db.unreduce_string(&v.reversed()).unwrap(), db.unreduce_string(&v).unwrap().reversed());
    }
    // for bands the reversed word starts one tie pair later
    for w in enumerate_bands(&d, 4) {
        let full = db.unreduce_band(&w).unwrap();
        assert_eq!(db.unreduce_band(&w.reversed()).unwrap(), full.reversed().shift(1));
    }
}

#[test]
fn string_reps_match_decorated_matrices() {
    let mut count = 0;
    for (_, d) in gentle_corpus() {
        let ctx = TripleContext::new(&d).unwrap();
        let wc = WordContext::new(&d).unwrap();
        let db = bunch_of_datum(&d, (-4, 1));
        for v in enumerate_strings(&d, 5, (-3, 0)) {
            let x: crate::complexes::ProjComplex<Q> = string_complex(&wc, &v).unwrap();
            let from_complex = db.rep_of_triple(&triple_of(&ctx, &x).unwrap()).unwrap();
            let from_word: RepX<Q> = string_rep(&db.bunch, &db.unreduce_string(&v).unwrap()).unwrap();
            assert_eq!(from_word.sizes, from_complex.sizes, "{v:?}");
            assert!(rep_isomorphic(&db.bunch, &from_word, &from_complex), "{v:?}");
            count += 1;
        }
    }
    assert!(count > 20);
}

#[test]
fn band_reps_match_decorated_matrices_with_inverse_eigenvalue() {
    let d = two_paths();
    let ctx = TripleContext::new(&d).unwrap();
    let wc = WordContext::new(&d).unwrap();
    let pi = Q::from_i64(3);
    for w0 in enumerate_bands(&d, 4) {
        for k in 0..w0.segments.len() {
            for w in [w0.rotated(k), w0.rotated(k).reversed()] {
                let (lo, hi) = w.degree_range(&d);
                let db = bunch_of_datum(&d, (lo - 1, hi + 1));
                let full = db.unreduce_band(&w).unwrap();
                let x = band_complex(&wc, &BandDatum::new(w.clone(), 2, pi.clone())).unwrap();
                let rt = db.rep_of_triple(&triple_of(&ctx, &x).unwrap()).unwrap();
                assert!(rep_isomorphic(&db.bunch, &rt, &band_rep(&db.bunch, &full, 2, &pi.inv()).unwrap()));
                assert!(!rep_isomorphic(&db.bunch, &rt, &band_rep(&db.bunch, &full, 2, &pi).unwrap()));
            }
        }
    }
}

#[test]
fn band_isomorphisms_under_shift_and_reversal() {
    let b = BunchOfChains::two_point();
    let w = example_band(&b);
    let pi = Q::from_i64(3);
    let r0: RepX<Q> = band_rep(&b, &w, 2, &pi).unwrap();
    for k in 0..6i64 {
        // every tie joins equal chains, so σ vanishes and only the parity
        // of the shift decides the eigenvalue
        assert_eq!(w.sigma(&b, k as usize), 0);
        let expect = if k % 2 == 0 { pi.clone() } else { pi.inv() };
        for w2 in [w.shift(k), w.reversed().shift(k)] {
            assert!(rep_isomorphic(&b, &r0, &band_rep(&b, &w2, 2, &expect).unwrap()), "k = {k}");
            assert!(!rep_isomorphic(&b, &r0, &band_rep(&b, &w2, 2, &expect.inv()).unwrap()), "k = {k}");
        }
    }
    // the same holds for the full words of a gentle datum
    let d = two_paths();
    let db = bunch_of_datum(&d, (-3, 1));
    for wb in enumerate_bands(&d, 4) {
        let full = db.unreduce_band(&wb).unwrap();
        assert!((0..full.len() / 2).all(|k| full.sigma(&db.bunch, k) == 0));
    }
}

#[test]
fn chessboard_ties_cross_chains() {
    let b = BunchOfChains::chessboard(2);
    let w = word(&b, &["x1", "y1"], Rel::Tie, false);
    w.validate(&b).unwrap();
    let cyc = word(&b, &["x2", "y2", "x1", "y1"], Rel::Tie, true);
    assert_eq!(cyc.sigma(&b, 2), 2);
}

#[test]
fn string_and_band_reps_are_indecomposable() {
    let b = BunchOfChains::two_point();
    let strings = [
        word(&b, &["a1", "a2", "c2", "c1", "a1", "a2"], Rel::Tie, false),
        word(&b, &["c1", "c2", "a2", "a1", "d1", "d2"], Rel::Tie, false),
        word(&b, &["a1", "a2", "d2", "d1"], Rel::Tie, false),
    ];
    for w in &strings {
        let r: RepX<Q> = string_rep(&b, w).unwrap();
        assert!(rep_is_indecomposable(&b, &r).unwrap(), "{}", w.display(&b));
        assert!(rep_isomorphic(&b, &r, &string_rep(&b, &w.reversed()).unwrap()));
    }
    let w = example_band(&b);
    for m in 1..=3 {
        let r: RepX<Q> = band_rep(&b, &w, m, &Q::from_i64(2)).unwrap();
        assert!(rep_is_indecomposable(&b, &r).unwrap());
    }
    let r1: RepX<Q> = string_rep(&b, &strings[0]).unwrap();
    let r2: RepX<Q> = string_rep(&b, &strings[1]).unwrap();
    assert!(!rep_is_indecomposable(&b, &r1.direct_sum(&r2, &b)).unwrap());
    assert!(!rep_isomorphic(&b, &r1, &r2));
    let bands: Vec<RepX<Q>> = [2, 5].iter().map(|p| band_rep(&b, &w, 1, &Q::from_i64(*p)).unwrap()).collect();
    assert!(!rep_isomorphic(&b, &bands[0], &bands[1]));
}

#[test]
fn semi_chain_decorations() {
    let b = BunchOfChains::two_point_semi();
    let a = b.find("a").unwrap();
    let c1 = b.find("c1").unwrap();
    let c2 = b.find("c2").unwrap();
    let mut rep: RepX<Q> = RepX::with_sizes(&b, [(a, 2), (c1, 2), (c2, 2)].into_iter().collect());
    rep.signs.insert(a, vec![1, -1]);
    rep.blocks.insert(0, Matrix::identity(2));
    rep.check(&b).unwrap();
    let id = identity_transform(&b, &rep);
    assert_eq!(apply_transformation(&b, &rep, &id).unwrap(), rep);
    let mut mix = id.clone();
    mix.phi.get_mut(&0).unwrap()[(0, 1)] = Q::one();
    assert!(apply_transformation(&b, &rep, &mix).is_err());
    // only sign-preserving diagonal maps survive on a
    let end = rep_end(&b, &rep).unwrap();
    assert_eq!(end.algebra.dim(), 2);
    // words through a self-tie are out of scope
    let w = FullWord { letters: vec![a, a], rels: vec![Rel::Tie], cyclic: false };
    assert!(matches!(w.validate(&b), Err(crate::Error::Unsupported(_))));
}

#[test]
fn transformation_rules() {
    let b = BunchOfChains::two_point();
    let w = example_band(&b);
    let rep: RepX<Q> = band_rep(&b, &w, 1, &Q::from_i64(2)).unwrap();
    let id = identity_transform(&b, &rep);
    assert_eq!(apply_transformation(&b, &rep, &id).unwrap(), rep);
    // swap the two basis vectors of the tied c-stripes at both indices
    let mut t = id.clone();
    for i in [0usize, 1] {
        let m = t.psi.get_mut(&i).unwrap();
        m[(0, 0)] = Q::zero();
        m[(1, 1)] = Q::zero();
        m[(0, 1)] = Q::one();
        m[(1, 0)] = Q::one();
    }
    let out = apply_transformation(&b, &rep, &t).unwrap();
    assert_ne!(out.blocks[&0], rep.blocks[&0]);
    assert_ne!(out.blocks[&1], rep.blocks[&1]);
    // swapping at one index only breaks the tie
    let mut half = id.clone();
    *half.psi.get_mut(&0).unwrap() = t.psi[&0].clone();
    assert!(apply_transformation(&b, &rep, &half).is_err());
    // columns go from d to c, not back
    let (c1, d1) = (b.find("c1").unwrap(), b.find("d1").unwrap());
    let mut up = id.clone();
    up.psi.get_mut(&0).unwrap()[(rep.stripe(&b, d1).start, rep.stripe(&b, c1).start)] = Q::one();
    assert!(apply_transformation(&b, &rep, &up).is_ok());
    let mut down = id.clone();
    down.psi.get_mut(&0).unwrap()[(rep.stripe(&b, c1).start, rep.stripe(&b, d1).start)] = Q::one();
    assert!(apply_transformation(&b, &rep, &down).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let t = random_transform(&b, &rep, &mut rng);
        let out = apply_transformation(&b, &rep, &t).unwrap();
        assert!(rep_isomorphic(&b, &rep, &out));
    }
}

#[test]
fn stalk_rows_move_up_in_weight_only() {
    let d = two_paths();
    let db = bunch_of_datum(&d, (-1, 1));
    let i = db.index_of((1, 2), 0).unwrap();
    let f = |pos| Letter { index: i, side: Side::F, pos };
    // chain at (1,2): the high end over (1,1), the stalk, the low end under (1,3)
    assert_eq!(db.bunch.chain(i, Side::F).len(), 3);
    assert_eq!(db.stripe_label(f(1)).unwrap().summand.a, 4);
    let u = Letter { index: i, side: Side::E, pos: 0 };
    let sizes = [(f(1), 1), (f(2), 1), (u, 2)];
    let mut all: std::collections::BTreeMap<Letter, usize> = sizes.into_iter().collect();
    // conjugates so that the stripe sizes are consistent
    for x in [f(2), u] {
        all.insert(db.bunch.tie(x).unwrap(), all[&x]);
    }
    let rep: RepX<Q> = RepX::with_sizes(&db.bunch, all);
    let id = identity_transform(&db.bunch, &rep);
    let (stalk, low) = (rep.stripe(&db.bunch, f(1)).start, rep.stripe(&db.bunch, f(2)).start);
    let mut ok = id.clone();
    ok.phi.get_mut(&i).unwrap()[(low, stalk)] = Q::from_i64(5);
    assert!(apply_transformation(&db.bunch, &rep, &ok).is_ok());
    let mut bad = id.clone();
    bad.phi.get_mut(&i).unwrap()[(stalk, low)] = Q::from_i64(5);
    assert!(matches!(apply_transformation(&db.bunch, &rep, &bad), Err(crate::Error::Inadmissible(_))));
}

#[test]
fn transformations_are_sound_through_triples() {
    let d = two_paths();
    let ctx = TripleContext::new(&d).unwrap();
    let wc = WordContext::new(&d).unwrap();
    let db = bunch_of_datum(&d, (-3, 1));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x: crate::complexes::ProjComplex<Q> = string_complex(&wc, &fav_string()).unwrap();
    let band = band_complex(&wc, &BandDatum::new(fav_band(), 2, Q::from_i64(-2))).unwrap();
    for x in [x, band] {
        let rep = db.rep_of_triple(&triple_of(&ctx, &x).unwrap()).unwrap();
        for _ in 0..3 {
            let t = random_transform(&db.bunch, &rep, &mut rng);
            let moved = apply_transformation(&db.bunch, &rep, &t).unwrap();
            let y = reconstruct(&ctx, &db.triple_of_rep(&ctx, &moved).unwrap()).unwrap();
            assert!(is_homotopy_iso(&x, &y, 3).unwrap());
        }
    }
}

#[test]
fn square_invertible_reps_lift_to_complexes() {
    let d = two_paths();
    let ctx = TripleContext::new(&d).unwrap();
    let wc = WordContext::new(&d).unwrap();
    let db = bunch_of_datum(&d, (-3, 1));
    let pieces: Vec<RepX<Q>> = [fav_string(), fav_string().translated(1)]
        .iter()
        .map(|v| db.rep_of_triple(&triple_of(&ctx, &string_complex::<Q>(&wc, v).unwrap()).unwrap()).unwrap())
        .collect();
    let shape = pieces[0].direct_sum(&pieces[1], &db.bunch);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let mut rep = shape.clone();
        for m in rep.blocks.values_mut() {
            let n = m.rows();
            *m = loop {
                let cand = Matrix::from_rows(
                    (0..n)
                        .map(|_| {
                            (0..n).map(|_| Q::from_i64(rand::Rng::gen_range(&mut rng, -2..=2))).collect()
                        })
                        .collect(),
                );
                if cand.is_invertible() {
                    break cand;
                }
            };
        }
        let x = reconstruct(&ctx, &db.triple_of_rep(&ctx, &rep).unwrap()).unwrap();
        let back = db.rep_of_triple(&triple_of(&ctx, &x.minimize().unwrap()).unwrap()).unwrap();
        assert!(rep_isomorphic(&db.bunch, &rep, &back));
    }
    // a stripe whose conjugate leaves the window cannot be lifted
    let narrow = bunch_of_datum(&d, (-1, 0));
    let i = narrow.index_of((1, 1), 0).unwrap();
    let x = Letter { index: i, side: Side::F, pos: 0 };
    let rep: RepX<Q> = RepX::with_sizes(&narrow.bunch, [(x, 1)].into_iter().collect());
    assert!(narrow.bunch.tie(x).is_none() || narrow.triple_of_rep(&ctx, &rep).is_err());
}
