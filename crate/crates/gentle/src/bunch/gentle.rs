use std::collections::BTreeMap;

use super::chains::{BunchOfChains, Letter, Side};
use super::rep::RepX;
use super::word::{FullWord, Rel};
use crate::complexes::{DecoratedMatrices, End, StripeLabel, Theta, Triple, TripleContext, WSummand};
use crate::datum::{Datum, Elem};
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::words::{BandWord, EndPoint, Segment, StringDatum};

/// The bunch of chains attached to a datum, restricted to the degrees of a
/// window, with lookups between its elements and ends of two-term complexes.
#[derive(Clone, Debug)]
pub struct DatumBunch {
    pub bunch: BunchOfChains,
    pub datum: Datum,
    pub window: (i64, i64),
    keys: Vec<(Elem, i64)>,
    index: BTreeMap<(Elem, i64), usize>,
    ends: BTreeMap<StripeLabel, Letter>,
}

fn fmt_key((i, j): Elem, r: i64) -> String {
    format!("(({i},{j}),{r})")
}

/// The F-chain at position `(i, j)` in degree `r`: ends of two-term
/// complexes lying there, in increasing weight.
fn f_chain(d: &Datum, (i, j): Elem, r: i64) -> Vec<StripeLabel> {
    let m = d.len(i);
    let mut out = Vec::new();
    for b in (1..j).rev() {
        out.push(StripeLabel { summand: WSummand { chain: i, a: j, b, r: r + 1 }, high: true });
    }
    for a in (j + 1..=m + 1).rev() {
        out.push(StripeLabel { summand: WSummand { chain: i, a, b: j, r }, high: false });
    }
    out
}

/// The bunch on positions times the degrees `lo..=hi`. Ties whose other
/// half falls outside the window are dropped.
pub fn bunch_of_datum(d: &Datum, (lo, hi): (i64, i64)) -> DatumBunch {
    let mut keys = Vec::new();
    for r in lo..=hi {
        for e in d.omega() {
            keys.push((e, r));
        }
    }
    let index: BTreeMap<(Elem, i64), usize> = keys.iter().enumerate().map(|(k, key)| (*key, k)).collect();
    let mut labels = Vec::new();
    let mut e_sets = Vec::new();
    let mut f_sets = Vec::new();
    let mut ends = BTreeMap::new();
    for (k, &(e, r)) in keys.iter().enumerate() {
        labels.push(fmt_key(e, r));
        e_sets.push(vec![format!("u{}", fmt_key(e, r))]);
        let chain = f_chain(d, e, r);
        f_sets.push(
            chain
                .iter()
                .map(|l| {
                    let s = l.summand;
                    let (other, deg) = if l.high { ((s.chain, s.b), s.r) } else { ((s.chain, s.a), s.r - 1) };
                    format!("q{}^{}", fmt_key(e, r), fmt_key(other, deg))
                })
                .collect(),
        );
        for (pos, l) in chain.into_iter().enumerate() {
            ends.insert(l, Letter { index: k, side: Side::F, pos });
        }
    }
    let mut ties = Vec::new();
    for (k, &(e, r)) in keys.iter().enumerate() {
        if let Some(p) = d.partner(e) {
            if let Some(&k2) = index.get(&(p, r)) {
                if k <= k2 {
                    ties.push((
                        Letter { index: k, side: Side::E, pos: 0 },
                        Letter { index: k2, side: Side::E, pos: 0 },
                    ));
                }
            }
        }
    }
    for (l, &x) in &ends {
        if l.high && !l.summand.is_stalk(d) {
            if let Some(&y) = ends.get(&StripeLabel { summand: l.summand, high: false }) {
                ties.push((x, y));
            }
        }
    }
    let bunch = BunchOfChains::new(labels, e_sets, f_sets, &ties).expect("ties of a datum are an involution");
    DatumBunch { bunch, datum: d.clone(), window: (lo, hi), keys, index, ends }
}

impl DatumBunch {
    pub fn index_of(&self, e: Elem, r: i64) -> Result<usize> {
        self.index
            .get(&(e, r))
            .copied()
            .ok_or_else(|| Error::InvalidWord(format!("degree {r} is outside the window {:?}", self.window)))
    }

    pub fn key(&self, index: usize) -> (Elem, i64) {
        self.keys[index]
    }

    pub fn u(&self, (e, r): EndPoint) -> Result<Letter> {
        Ok(Letter { index: self.index_of(e, r)?, side: Side::E, pos: 0 })
    }

    /// The F-element of one end of a two-term complex.
    pub fn q(&self, s: WSummand, high: bool) -> Result<Letter> {
        self.ends.get(&StripeLabel { summand: s, high }).copied().ok_or_else(|| {
            Error::InvalidWord(format!(
                "end of W({},({},{}))[{}] is outside the window",
                s.chain, s.a, s.b, -s.r
            ))
        })
    }

    pub fn stripe_label(&self, x: Letter) -> Option<StripeLabel> {
        if x.side != Side::F {
            return None;
        }
        let ((e, r), pos) = (self.keys[x.index], x.pos);
        f_chain(&self.datum, e, r).get(pos).copied()
    }

    fn segment_letters(&self, s: &Segment) -> Result<Vec<Letter>> {
        let w = WSummand { chain: s.i, a: s.a, b: s.b, r: s.r };
        let d = &self.datum;
        let mut out = Vec::new();
        for end in [s.entry(d), s.exit(d)].into_iter().flatten() {
            out.push(self.q(w, end == s.high_end())?);
        }
        Ok(out)
    }

    fn junction(&self, exit: EndPoint) -> Result<[Letter; 2]> {
        let p = self
            .datum
            .partner(exit.0)
            .ok_or_else(|| Error::InvalidWord("junction at an untied position".into()))?;
        Ok([self.u(exit)?, self.u((p, exit.1))?])
    }

    /// The full word of a reduced string: E-elements are put back at every
    /// junction and at untied free ends.
    pub fn unreduce_string(&self, v: &StringDatum) -> Result<FullWord> {
        let d = &self.datum;
        v.validate(d)?;
        let mut letters = Vec::new();
        let mut rels = Vec::new();
        let segs = &v.segments;
        if let Some(e) = segs[0].entry(d) {
            letters.push(self.u(e)?);
            rels.push(Rel::Dash);
        }
        for (k, s) in segs.iter().enumerate() {
            if k > 0 {
                let [x, y] = self.junction(segs[k - 1].exit(d).expect("validated"))?;
                letters.extend([x, y]);
                rels.extend([Rel::Tie, Rel::Dash]);
            }
            let q = self.segment_letters(s)?;
            letters.extend(q.iter().copied());
            if q.len() == 2 {
                rels.push(Rel::Tie);
            }
            if k + 1 < segs.len() {
                rels.push(Rel::Dash);
            }
        }
        if let Some(e) = segs.last().unwrap().exit(d) {
            rels.push(Rel::Dash);
            letters.push(self.u(e)?);
        }
        Ok(FullWord { letters, rels, cyclic: false })
    }

    pub fn unreduce_band(&self, w: &BandWord) -> Result<FullWord> {
        let d = &self.datum;
        w.validate(d)?;
        let mut letters = Vec::new();
        for s in &w.segments {
            letters.extend(self.segment_letters(s)?);
            letters.extend(self.junction(s.exit(d).expect("bands have no stalks"))?);
        }
        Ok(FullWord::alternating(letters, Rel::Tie, true))
    }

    /// The decorated matrices of a triple as a representation.
    pub fn rep_of_triple<F: Field>(&self, t: &Triple<F>) -> Result<RepX<F>> {
        let mut sizes = BTreeMap::new();
        for (&(r, pos), th) in &t.theta.blocks {
            *sizes.entry(self.u((pos, r))?).or_insert(0) += th.cols.len();
            for l in &th.labels {
                *sizes.entry(self.q(l.summand, l.high)?).or_insert(0) += 1;
            }
        }
        let mut rep = RepX::with_sizes(&self.bunch, sizes);
        for (&(r, pos), th) in &t.theta.blocks {
            let i = self.index_of(pos, r)?;
            if let Some(m) = rep.blocks.get_mut(&i) {
                *m = th.matrix.clone();
            }
        }
        rep.check(&self.bunch)?;
        Ok(rep)
    }

    /// A triple with the given decorated matrices. Every non-stalk stripe
    /// needs its conjugate inside the window.
    pub fn triple_of_rep<F: Field>(&self, ctx: &TripleContext, rep: &RepX<F>) -> Result<Triple<F>> {
        rep.check(&self.bunch)?;
        let d = &self.datum;
        // one summand per basis vector of each F-class
        let mut summands = Vec::new();
        let mut first: BTreeMap<Letter, usize> = BTreeMap::new();
        for (&x, &n) in &rep.sizes {
            if x.side != Side::F {
                continue;
            }
            let l = self.stripe_label(x).expect("F-element");
            let conj = if l.summand.is_stalk(d) {
                None
            } else {
                Some(StripeLabel { summand: l.summand, high: !l.high })
            };
            if conj.is_some() && !self.bunch.is_tied(x) {
                return Err(Error::InvalidTriple(format!(
                    "stripe {} has its conjugate outside the window",
                    self.bunch.label(x)
                )));
            }
            let c = self.bunch.class(x);
            if let std::collections::btree_map::Entry::Vacant(e) = first.entry(c) {
                e.insert(summands.len());
                summands.extend(std::iter::repeat_n(l.summand, n));
            }
        }
        let mut ends: BTreeMap<i64, Vec<End>> = BTreeMap::new();
        let mut v: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut vcols: BTreeMap<Letter, Vec<usize>> = BTreeMap::new();
        let mut rows_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut labels_of: BTreeMap<usize, Vec<StripeLabel>> = BTreeMap::new();
        for (&x, &n) in &rep.sizes {
            let ((pos, r), c) = (self.keys[x.index], self.bunch.class(x));
            match x.side {
                Side::E => {
                    vcols.entry(c).or_insert_with(|| {
                        let vs = v.entry(r).or_default();
                        let cols: Vec<usize> = (vs.len()..vs.len() + n).collect();
                        vs.extend(std::iter::repeat_n(ctx.a_vertex(pos), n));
                        cols
                    });
                }
                Side::F => {
                    let l = self.stripe_label(x).unwrap();
                    let es = ends.entry(r).or_default();
                    for k in 0..n {
                        rows_of.entry(x.index).or_default().push(es.len());
                        labels_of.entry(x.index).or_default().push(l);
                        es.push(End { summand: first[&c] + k, high: l.high });
                    }
                }
            }
        }
        let mut blocks = BTreeMap::new();
        for (&i, m) in &rep.blocks {
            let (pos, r) = self.keys[i];
            let u = Letter { index: i, side: Side::E, pos: 0 };
            let cols = vcols.get(&self.bunch.class(u)).cloned().unwrap_or_default();
            let th = Theta {
                rows: rows_of.get(&i).cloned().unwrap_or_default(),
                labels: labels_of.get(&i).cloned().unwrap_or_default(),
                cols,
                matrix: m.clone(),
            };
            blocks.insert((r, pos), th);
        }
        for r in ends.keys().chain(v.keys()).copied().collect::<Vec<_>>() {
            ends.entry(r).or_default();
            v.entry(r).or_default();
        }
        Ok(Triple { summands, ends, v, theta: DecoratedMatrices { blocks } })
    }
}
