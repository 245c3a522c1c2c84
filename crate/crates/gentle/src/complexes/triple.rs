use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::complex::{MorphMatrix, ProjComplex};
use crate::algebra::{embedding, fat_point, gentle_algebra, normalization, BasedAlgebra, Element};
use crate::datum::{Datum, Elem};
use crate::error::{Error, Result};
use crate::exactla::{solve_linear, Matrix};
use crate::scalar::Field;

/// The two-term complex `Q_(i,a) → Q_(i,b)` placed in degrees `r-1, r`.
/// `a = m_i + 1` is the stalk `Q_(i,b)[-r]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WSummand {
    pub chain: usize,
    pub a: usize,
    pub b: usize,
    pub r: i64,
}

impl WSummand {
    pub fn is_stalk(&self, d: &Datum) -> bool {
        self.a == d.len(self.chain) + 1
    }

    /// Position and degree of the end that is not the stalk end.
    pub fn high_end(&self) -> (Elem, i64) {
        ((self.chain, self.a), self.r - 1)
    }

    pub fn low_end(&self) -> (Elem, i64) {
        ((self.chain, self.b), self.r)
    }
}

/// One end of a summand of `Y`, as seen in a single degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct End {
    pub summand: usize,
    pub high: bool,
}

/// Algebras and index maps shared by the triple constructions.
pub struct TripleContext {
    pub datum: Datum,
    pub a: Arc<BasedAlgebra>,
    pub h: Arc<BasedAlgebra>,
    emb: Vec<Vec<usize>>,
    slot_vertex: HashMap<Elem, usize>,
    vertex_slot: Vec<Elem>,
    members: Vec<Vec<Elem>>,
    owner: HashMap<Elem, usize>,
}

impl TripleContext {
    pub fn new(d: &Datum) -> Result<Self> {
        Self::with_algebra(d, Arc::new(gentle_algebra(d)))
    }

    /// Reuses an already built algebra `A` of the datum.
    pub fn with_algebra(d: &Datum, a: Arc<BasedAlgebra>) -> Result<Self> {
        if !d.is_gentle() {
            return Err(Error::Unsupported("triples are implemented for gentle datums".into()));
        }
        Self::glued(d, a)
    }

    /// The context for `k[ε_1, …, ε_n]/(ε_1, …, ε_n)²` inside `T_2^n`.
    pub fn fat_point(n: usize) -> Result<Self> {
        let (a, _) = fat_point(n)?;
        Self::glued(&Datum::new(vec![2; n], &[])?, Arc::new(a))
    }

    /// `a` must be glued from the radical of the normalization of `d`, with
    /// no doubled positions. Vertex membership is read off its idempotents.
    fn glued(d: &Datum, a: Arc<BasedAlgebra>) -> Result<Self> {
        if d.relations().iter().any(|(x, y)| x == y) {
            return Err(Error::Unsupported("triples are implemented for gentle datums".into()));
        }
        let h = Arc::new(normalization(d));
        let emb = embedding(&a, &h);
        let mut slot_vertex = HashMap::new();
        let mut vertex_slot = Vec::new();
        for (v, info) in h.vertices().iter().enumerate() {
            let (c, s, _) = h.basis_elem(info.idempotent).units[0];
            slot_vertex.insert((c + 1, s + 1), v);
            vertex_slot.push((c + 1, s + 1));
        }
        let mut members = Vec::new();
        let mut owner = HashMap::new();
        for (v, info) in a.vertices().iter().enumerate() {
            let ms: Vec<Elem> =
                a.basis_elem(info.idempotent).units.iter().map(|&(c, s, _)| (c + 1, s + 1)).collect();
            for &m in &ms {
                owner.insert(m, v);
            }
            members.push(ms);
        }
        Ok(TripleContext { datum: d.clone(), a, h, emb, slot_vertex, vertex_slot, members, owner })
    }

    pub fn h_vertex(&self, x: Elem) -> usize {
        self.slot_vertex[&x]
    }

    pub fn slot(&self, h_vertex: usize) -> Elem {
        self.vertex_slot[h_vertex]
    }

    /// Members of an `A`-vertex as positions.
    pub fn members(&self, v: usize) -> Vec<Elem> {
        self.members[v].clone()
    }

    pub fn a_vertex(&self, x: Elem) -> usize {
        self.owner[&x]
    }

    pub(crate) fn embed<F: Field>(&self, x: &Element<F>) -> Element<F> {
        let mut terms = Vec::new();
        for (b, c) in x.terms() {
            for &k in &self.emb[*b] {
                terms.push((k, c.clone()));
            }
        }
        Element::from_terms(terms)
    }

    fn unit<F: Field>(&self, chain: usize, a: usize, b: usize) -> Element<F> {
        Element::basis(self.h.basis_of_unit((chain - 1, a - 1, b - 1)).expect("unit of H"))
    }

    /// Row order inside a decorated matrix: high ends with `b` descending,
    /// then the stalk, then low ends with `a` descending.
    fn weight(&self, s: &WSummand, high: bool) -> (usize, usize) {
        if high {
            (0, s.a - s.b)
        } else {
            (1, self.datum.len(s.chain) + 1 - s.a)
        }
    }
}

/// Decomposition of a minimal complex over the normalization into
/// two-term summands, with the change of basis on tops.
#[derive(Clone, Debug)]
pub struct HSplit<F> {
    pub summands: Vec<WSummand>,
    /// For each degree, the end carried by each position of `Y^r`.
    pub ends: BTreeMap<i64, Vec<End>>,
    /// For each degree, the scalar matrix taking old tops to new ones.
    pub change: BTreeMap<i64, Matrix<F>>,
}

impl<F> HSplit<F> {
    pub fn multiplicities(&self) -> BTreeMap<WSummand, usize> {
        let mut out = BTreeMap::new();
        for s in &self.summands {
            *out.entry(*s).or_insert(0) += 1;
        }
        out
    }
}

/// Splits a minimal complex over the normalization by Gaussian elimination
/// along the order of the chains.
pub fn split_h_complex<F: Field>(ctx: &TripleContext, y: &ProjComplex<F>) -> Result<HSplit<F>> {
    let v = y.verify();
    if !v.is_complex {
        return Err(Error::NotComplex("d² ≠ 0".into()));
    }
    if !v.is_minimal {
        return Err(Error::NotMinimal);
    }
    let slots: BTreeMap<i64, Vec<Elem>> =
        y.degrees().map(|r| (r, y.comp(r).iter().map(|&w| ctx.slot(w)).collect())).collect();
    let mut d: BTreeMap<i64, Matrix<F>> = BTreeMap::new();
    for r in y.degrees() {
        let (src, tgt) = (&slots[&r], slots.get(&(r + 1)).cloned().unwrap_or_default());
        let mut m: Matrix<F> = Matrix::zeros(tgt.len(), src.len());
        if let Some(dr) = y.diff_ref(r) {
            for (q, row) in dr.iter().enumerate() {
                for (p, x) in row.iter().enumerate() {
                    let (i, a) = src[p];
                    let (_, b) = tgt[q];
                    if !x.is_zero() {
                        m[(q, p)] = x.coeff(ctx.h.basis_of_unit((i - 1, a - 1, b - 1)).expect("unit"));
                    }
                }
            }
        }
        d.insert(r, m);
    }
    let mut g: BTreeMap<i64, Matrix<F>> =
        slots.iter().map(|(&r, s)| (r, Matrix::identity(s.len()))).collect();
    let mut done: BTreeMap<i64, Vec<bool>> = slots.iter().map(|(&r, s)| (r, vec![false; s.len()])).collect();
    let mut summands = Vec::new();
    let mut ends: BTreeMap<i64, Vec<Option<End>>> =
        slots.iter().map(|(&r, s)| (r, vec![None; s.len()])).collect();
    let degrees: Vec<i64> = y.degrees().collect();
    for &r in &degrees {
        loop {
            let m = &d[&r];
            let src = &slots[&r];
            let tgt = slots.get(&(r + 1)).cloned().unwrap_or_default();
            // highest target position, then lowest source position, per chain
            let mut best: Option<(usize, usize)> = None;
            for q in 0..m.rows() {
                for p in 0..m.cols() {
                    if m[(q, p)].is_zero() {
                        continue;
                    }
                    best = match best {
                        None => Some((q, p)),
                        Some((bq, bp)) => {
                            let better = tgt[q].0 < tgt[bq].0
                                || tgt[q].0 == tgt[bq].0
                                    && (tgt[q].1 > tgt[bq].1
                                        || tgt[q].1 == tgt[bq].1 && src[p].1 < src[bp].1);
                            Some(if better { (q, p) } else { (bq, bp) })
                        }
                    };
                }
            }
            let Some((q, p)) = best else { break };
            let pivot = d[&r][(q, p)].clone();
            let pinv = pivot.inv();
            // clear row q with column operations on Y^r
            for p2 in 0..src.len() {
                let c = d[&r][(q, p2)].clone();
                if p2 == p || c.is_zero() {
                    continue;
                }
                let c = c * pinv.clone();
                col_axpy(d.get_mut(&r).unwrap(), p2, p, &-c.clone());
                row_axpy(g.get_mut(&r).unwrap(), p, p2, &c);
                if let Some(dm) = d.get_mut(&(r - 1)) {
                    row_axpy(dm, p, p2, &c);
                }
            }
            // clear column p with row operations on Y^{r+1}
            for q2 in 0..tgt.len() {
                let c = d[&r][(q2, p)].clone();
                if q2 == q || c.is_zero() {
                    continue;
                }
                let c = c * pinv.clone();
                row_axpy(d.get_mut(&r).unwrap(), q2, q, &-c.clone());
                row_axpy(g.get_mut(&(r + 1)).unwrap(), q2, q, &-c.clone());
                if let Some(dm) = d.get_mut(&(r + 1)) {
                    col_axpy(dm, q, q2, &c);
                }
            }
            // normalize the pivot to one
            scale_row(g.get_mut(&r).unwrap(), p, &pivot);
            if let Some(dm) = d.get_mut(&(r - 1)) {
                scale_row(dm, p, &pivot);
            }
            let dm = d.get_mut(&r).unwrap();
            dm[(q, p)] = F::zero();
            let (i, a) = src[p];
            let k = summands.len();
            summands.push(WSummand { chain: i, a, b: tgt[q].1, r: r + 1 });
            ends.get_mut(&r).unwrap()[p] = Some(End { summand: k, high: true });
            ends.get_mut(&(r + 1)).unwrap()[q] = Some(End { summand: k, high: false });
            done.get_mut(&r).unwrap()[p] = true;
            done.get_mut(&(r + 1)).unwrap()[q] = true;
        }
    }
    for (&r, s) in &slots {
        for (p, &(i, j)) in s.iter().enumerate() {
            if !done[&r][p] {
                let k = summands.len();
                summands.push(WSummand { chain: i, a: ctx.datum.len(i) + 1, b: j, r });
                ends.get_mut(&r).unwrap()[p] = Some(End { summand: k, high: false });
            }
        }
    }
    let ends = ends
        .into_iter()
        .map(|(r, e)| (r, e.into_iter().map(|x| x.expect("every end assigned")).collect()))
        .collect();
    Ok(HSplit { summands, ends, change: g })
}

fn row_axpy<F: Field>(m: &mut Matrix<F>, dst: usize, src: usize, c: &F) {
    for j in 0..m.cols() {
        let v = m[(src, j)].clone() * c.clone();
        if !v.is_zero() {
            m[(dst, j)] = m[(dst, j)].clone() + v;
        }
    }
}

fn col_axpy<F: Field>(m: &mut Matrix<F>, dst: usize, src: usize, c: &F) {
    for i in 0..m.rows() {
        let v = m[(i, src)].clone() * c.clone();
        if !v.is_zero() {
            m[(i, dst)] = m[(i, dst)].clone() + v;
        }
    }
}

fn scale_row<F: Field>(m: &mut Matrix<F>, row: usize, c: &F) {
    for j in 0..m.cols() {
        m[(row, j)] = m[(row, j)].clone() * c.clone();
    }
}

/// Label of a horizontal stripe: a summand type and which of its ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StripeLabel {
    pub summand: WSummand,
    pub high: bool,
}

/// One decorated matrix: rows are ends of summands of `Y^r` at a position,
/// columns are summands of `V^r` at the vertex containing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Theta<F> {
    pub rows: Vec<usize>,
    pub labels: Vec<StripeLabel>,
    pub cols: Vec<usize>,
    pub matrix: Matrix<F>,
}

impl<F: Field> Theta<F> {
    /// Consecutive runs of equal labels as `(label, first row, row count)`.
    pub fn stripes(&self) -> Vec<(StripeLabel, usize, usize)> {
        let mut out: Vec<(StripeLabel, usize, usize)> = Vec::new();
        for (k, l) in self.labels.iter().enumerate() {
            match out.last_mut() {
                Some(last) if last.0 == *l => last.2 += 1,
                _ => out.push((*l, k, 1)),
            }
        }
        out
    }
}

/// The collection of decorated matrices keyed by degree and position.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoratedMatrices<F> {
    pub blocks: BTreeMap<(i64, Elem), Theta<F>>,
}

/// `(Y, V, θ)` with `Y` split into two-term summands and `θ` stored as
/// decorated matrices.
#[derive(Clone, Debug)]
pub struct Triple<F> {
    pub summands: Vec<WSummand>,
    pub ends: BTreeMap<i64, Vec<End>>,
    /// Vertices of `A` labelling the summands of `V^r`.
    pub v: BTreeMap<i64, Vec<usize>>,
    pub theta: DecoratedMatrices<F>,
}

impl<F: Field> Triple<F> {
    fn end_slot(&self, e: &End) -> Elem {
        let s = &self.summands[e.summand];
        if e.high {
            s.high_end().0
        } else {
            s.low_end().0
        }
    }

    /// `Y` as a complex over the normalization.
    pub fn y_complex(&self, ctx: &TripleContext) -> ProjComplex<F> {
        let Some((&lo, _)) = self.ends.first_key_value() else {
            return ProjComplex::zero(ctx.h.clone());
        };
        let hi = *self.ends.last_key_value().unwrap().0 + 1;
        let comps: Vec<Vec<usize>> = (lo..hi)
            .map(|r| {
                self.ends
                    .get(&r)
                    .map_or(Vec::new(), |e| e.iter().map(|x| ctx.h_vertex(self.end_slot(x))).collect())
            })
            .collect();
        let mut pos: HashMap<End, (i64, usize)> = HashMap::new();
        for (&r, es) in &self.ends {
            for (k, e) in es.iter().enumerate() {
                pos.insert(*e, (r, k));
            }
        }
        let mut diffs: Vec<MorphMatrix<F>> = (lo..hi - 1)
            .map(|r| {
                vec![
                    vec![Element::zero(); comps[(r - lo) as usize].len()];
                    comps[(r - lo + 1) as usize].len()
                ]
            })
            .collect();
        for (k, s) in self.summands.iter().enumerate() {
            if s.is_stalk(&ctx.datum) {
                continue;
            }
            let (r, p) = pos[&End { summand: k, high: true }];
            let (_, q) = pos[&End { summand: k, high: false }];
            diffs[(r - lo) as usize][q][p] = ctx.unit(s.chain, s.a, s.b);
        }
        ProjComplex::new(ctx.h.clone(), lo, comps, diffs).expect("summands assemble to a complex")
    }

    /// Checks the decoration: squares, invertibility, equal column counts
    /// across tied positions, and matching conjugate stripes.
    pub fn check(&self, ctx: &TripleContext) -> Result<()> {
        for (&(r, x), t) in &self.theta.blocks {
            if !t.matrix.is_square() || !t.matrix.is_invertible() {
                return Err(Error::InvalidTriple(format!(
                    "decorated matrix at ({},{}) in degree {r} is not square and invertible",
                    x.0, x.1
                )));
            }
            if let Some(y) = ctx.datum.partner(x) {
                if y != x {
                    let other = self.theta.blocks.get(&(r, y)).map_or(0, |t| t.cols.len());
                    if other != t.cols.len() {
                        return Err(Error::InvalidTriple(format!(
                            "tied positions ({},{}) and ({},{}) differ in degree {r}",
                            x.0, x.1, y.0, y.1
                        )));
                    }
                }
            }
        }
        let mut rows: HashMap<StripeLabel, usize> = HashMap::new();
        for t in self.theta.blocks.values() {
            for l in &t.labels {
                *rows.entry(*l).or_insert(0) += 1;
            }
        }
        for (l, n) in &rows {
            if l.summand.is_stalk(&ctx.datum) {
                continue;
            }
            let conj = StripeLabel { summand: l.summand, high: !l.high };
            if rows.get(&conj) != Some(n) {
                return Err(Error::InvalidTriple(format!(
                    "conjugate stripes of {:?} differ in size",
                    l.summand
                )));
            }
        }
        Ok(())
    }
}

pub(crate) type YPositions = BTreeMap<i64, Vec<(usize, Elem)>>;

/// `H ⊗_A X` over the normalization, with each summand of `Y^r` recorded as
/// (summand of `X^r`, member position).
pub(crate) fn extend_to_h<F: Field>(
    ctx: &TripleContext,
    x: &ProjComplex<F>,
) -> Result<(ProjComplex<F>, YPositions)> {
    // summands of Y^r: (summand of X^r, member position)
    let ypos: BTreeMap<i64, Vec<(usize, Elem)>> = x
        .degrees()
        .map(|r| {
            let mut out = Vec::new();
            for (p, &g) in x.comp(r).iter().enumerate() {
                for m in ctx.members(g) {
                    out.push((p, m));
                }
            }
            (r, out)
        })
        .collect();
    let comps: Vec<Vec<usize>> =
        x.degrees().map(|r| ypos[&r].iter().map(|e| ctx.h_vertex(e.1)).collect()).collect();
    let mut diffs = Vec::new();
    for r in x.lo()..x.hi() - 1 {
        let d = x.diff(r);
        let (src, tgt) = (&ypos[&r], &ypos[&(r + 1)]);
        let mut m = vec![vec![Element::zero(); src.len()]; tgt.len()];
        for (q2, &(q, t)) in tgt.iter().enumerate() {
            for (p2, &(p, s)) in src.iter().enumerate() {
                let (hs, ht) = (ctx.h_vertex(s), ctx.h_vertex(t));
                let e = ctx.embed(&d[q][p]);
                let terms: Vec<(usize, F)> = e
                    .terms()
                    .iter()
                    .filter(|(b, _)| ctx.h.basis_elem(*b).left == hs && ctx.h.basis_elem(*b).right == ht)
                    .cloned()
                    .collect();
                m[q2][p2] = Element::from_terms(terms);
            }
        }
        diffs.push(m);
    }
    let y = ProjComplex::new(ctx.h.clone(), x.lo(), comps, diffs)?;
    Ok((y, ypos))
}

/// The functor from minimal complexes over `A` to triples.
pub fn triple_of<F: Field>(ctx: &TripleContext, x: &ProjComplex<F>) -> Result<Triple<F>> {
    let v = x.verify();
    if !v.is_complex {
        return Err(Error::NotComplex("d² ≠ 0".into()));
    }
    if !v.is_minimal {
        return Err(Error::NotMinimal);
    }
    let x = x.trimmed();
    if x.is_zero() {
        return Ok(Triple {
            summands: Vec::new(),
            ends: BTreeMap::new(),
            v: BTreeMap::new(),
            theta: DecoratedMatrices { blocks: BTreeMap::new() },
        });
    }
    let (y, ypos) = extend_to_h(ctx, &x)?;
    let split = split_h_complex(ctx, &y)?;
    let mut blocks = BTreeMap::new();
    for r in x.degrees() {
        let ends = &split.ends[&r];
        let g = &split.change[&r];
        let mut positions: Vec<Elem> = ypos[&r].iter().map(|e| e.1).collect();
        positions.sort();
        positions.dedup();
        for pos in positions {
            let mut rows: Vec<usize> = (0..ends.len())
                .filter(|&k| {
                    let s = &split.summands[ends[k].summand];
                    (if ends[k].high { s.high_end().0 } else { s.low_end().0 }) == pos
                })
                .collect();
            rows.sort_by_key(|&k| {
                (ctx.weight(&split.summands[ends[k].summand], ends[k].high), ends[k].summand)
            });
            let old: Vec<(usize, usize)> =
                ypos[&r].iter().enumerate().filter(|(_, e)| e.1 == pos).map(|(k, e)| (k, e.0)).collect();
            let cols: Vec<usize> = old.iter().map(|o| o.1).collect();
            let matrix = Matrix::from_rows(
                rows.iter().map(|&k| old.iter().map(|o| g[(k, o.0)].clone()).collect()).collect(),
            );
            let labels = rows
                .iter()
                .map(|&k| StripeLabel { summand: split.summands[ends[k].summand], high: ends[k].high })
                .collect();
            blocks.insert((r, pos), Theta { rows, labels, cols, matrix });
        }
    }
    let v = x.degrees().map(|r| (r, x.comp(r).to_vec())).collect();
    Ok(Triple { summands: split.summands, ends: split.ends, v, theta: DecoratedMatrices { blocks } })
}

/// The decorated matrices of a triple, after checking the decoration.
pub fn decorated_matrices<'a, F: Field>(
    ctx: &TripleContext,
    t: &'a Triple<F>,
) -> Result<&'a DecoratedMatrices<F>> {
    t.check(ctx)?;
    Ok(&t.theta)
}

/// Rebuilds the complex over `A` as the pullback of `Y → Ȳ ← H̄ ⊗ V`.
pub fn reconstruct<F: Field>(ctx: &TripleContext, t: &Triple<F>) -> Result<ProjComplex<F>> {
    t.check(ctx)?;
    let Some((&lo, _)) = t.v.first_key_value() else {
        return Ok(ProjComplex::zero(ctx.a.clone()));
    };
    let hi = *t.v.last_key_value().unwrap().0 + 1;
    let y = t.y_complex(ctx);
    let h = &ctx.h;
    // ι^r: V^r-generators inside Y^r
    let iota = |r: i64| -> MorphMatrix<F> {
        let ny = t.ends.get(&r).map_or(0, |e| e.len());
        let nv = t.v.get(&r).map_or(0, |v| v.len());
        let mut m = vec![vec![Element::zero(); nv]; ny];
        for ((rr, pos), th) in &t.theta.blocks {
            if *rr != r {
                continue;
            }
            let e = h.idempotent(ctx.h_vertex(*pos));
            for (ri, &k) in th.rows.iter().enumerate() {
                for (ci, &c) in th.cols.iter().enumerate() {
                    let s = th.matrix[(ri, ci)].clone();
                    if !s.is_zero() {
                        m[k][c] = Element::scaled_basis(e, s);
                    }
                }
            }
        }
        m
    };
    let mut comps = Vec::new();
    let mut diffs = Vec::new();
    for r in lo..hi {
        comps.push(t.v.get(&r).cloned().unwrap_or_default());
    }
    for r in lo..hi - 1 {
        let (src, tgt) = (&comps[(r - lo) as usize], &comps[(r - lo + 1) as usize]);
        let (i0, i1) = (iota(r), iota(r + 1));
        let dy = y.diff(r);
        let mut vars = Vec::new();
        for (p, &sv) in src.iter().enumerate() {
            for (q, &tv) in tgt.iter().enumerate() {
                for b in ctx.a.hom_basis(sv, tv) {
                    vars.push((q, p, b));
                }
            }
        }
        let mut rows: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let mut row = |key| {
            let n = rows.len();
            *rows.entry(key).or_insert(n)
        };
        let mut cols: Vec<Vec<(usize, F)>> = Vec::new();
        for &(q, p, b) in &vars {
            let eb = ctx.embed(&Element::<F>::basis(b));
            let mut col = Vec::new();
            for (l, irow) in i1.iter().enumerate() {
                for (z, c) in h.mul(&eb, &irow[q]).terms() {
                    col.push((row((l, p, *z)), c.clone()));
                }
            }
            cols.push(col);
        }
        let mut rhs_terms = Vec::new();
        for l in 0..i1.len() {
            for p in 0..src.len() {
                let mut acc = Element::zero();
                for (k, irow) in i0.iter().enumerate() {
                    if !irow[p].is_zero() && !dy[l][k].is_zero() {
                        acc = acc.add(&h.mul(&irow[p], &dy[l][k]));
                    }
                }
                for (z, c) in acc.terms() {
                    rhs_terms.push((row((l, p, *z)), c.clone()));
                }
            }
        }
        let n = rows.len();
        let mut a: Matrix<F> = Matrix::zeros(n, vars.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col {
                a[(*i, j)] = a[(*i, j)].clone() + c.clone();
            }
        }
        let mut b: Matrix<F> = Matrix::zeros(n, 1);
        for (i, c) in rhs_terms {
            b[(i, 0)] = b[(i, 0)].clone() + c;
        }
        let sol = solve_linear(&a, &b)?.ok_or_else(|| {
            Error::InvalidTriple(format!("differential of Y does not restrict in degree {r}"))
        })?;
        let mut m = vec![vec![Element::zero(); src.len()]; tgt.len()];
        let mut acc: HashMap<(usize, usize), Vec<(usize, F)>> = HashMap::new();
        for (i, &(q, p, bb)) in vars.iter().enumerate() {
            if !sol[(i, 0)].is_zero() {
                acc.entry((q, p)).or_default().push((bb, sol[(i, 0)].clone()));
            }
        }
        for ((q, p), terms) in acc {
            m[q][p] = Element::from_terms(terms);
        }
        diffs.push(m);
    }
    ProjComplex::new(ctx.a.clone(), lo, comps, diffs)
}

/// An admissible change of the decorated matrices: `Θ ↦ Φ Θ Ψ⁻¹`.
///
/// `psi` is keyed by degree and vertex of `A`, so tied positions share it.
/// `phi` is keyed like the matrices and must be block lower triangular in
/// the stripe order, with equal diagonal blocks on conjugate stripes.
#[derive(Clone, Debug)]
pub struct Transformation<F> {
    pub phi: BTreeMap<(i64, Elem), Matrix<F>>,
    pub psi: BTreeMap<(i64, usize), Matrix<F>>,
}

impl<F: Field> Transformation<F> {
    pub fn identity(t: &Triple<F>, ctx: &TripleContext) -> Self {
        let phi = t.theta.blocks.iter().map(|(k, th)| (*k, Matrix::identity(th.rows.len()))).collect();
        let mut psi = BTreeMap::new();
        for (&(r, pos), th) in &t.theta.blocks {
            psi.entry((r, ctx.a_vertex(pos))).or_insert_with(|| Matrix::identity(th.cols.len()));
        }
        Transformation { phi, psi }
    }

    /// A random admissible transformation with small integer entries.
    pub fn random(t: &Triple<F>, ctx: &TripleContext, rng: &mut impl Rng) -> Self {
        let mut diag: HashMap<WSummand, Matrix<F>> = HashMap::new();
        let mut psi = BTreeMap::new();
        for (&(r, pos), th) in &t.theta.blocks {
            psi.entry((r, ctx.a_vertex(pos))).or_insert_with(|| random_invertible(th.cols.len(), rng));
            for (l, _, n) in th.stripes() {
                diag.entry(l.summand).or_insert_with(|| random_invertible(n, rng));
            }
        }
        let mut phi = BTreeMap::new();
        for (key, th) in &t.theta.blocks {
            let n = th.rows.len();
            let mut m = Matrix::zeros(n, n);
            let stripes = th.stripes();
            for (u, (lu, su, nu)) in stripes.iter().enumerate() {
                for (v, (_, sv, nv)) in stripes.iter().enumerate() {
                    if u == v {
                        let d = &diag[&lu.summand];
                        for i in 0..*nu {
                            for j in 0..*nu {
                                m[(su + i, su + j)] = d[(i, j)].clone();
                            }
                        }
                    } else if u > v {
                        for i in 0..*nu {
                            for j in 0..*nv {
                                m[(su + i, sv + j)] = F::from_i64(rng.gen_range(-3..=3));
                            }
                        }
                    }
                }
            }
            phi.insert(*key, m);
        }
        Transformation { phi, psi }
    }

    /// Rejects changes that break the stripe order or the pairings.
    pub fn validate(&self, t: &Triple<F>, ctx: &TripleContext) -> Result<()> {
        let mut diag: HashMap<WSummand, Matrix<F>> = HashMap::new();
        for (key, th) in &t.theta.blocks {
            let m =
                self.phi.get(key).ok_or_else(|| Error::Inadmissible("missing row transformation".into()))?;
            if m.rows() != th.rows.len() || !m.is_square() || !m.is_invertible() {
                return Err(Error::Inadmissible(
                    "row transformation is not invertible of the right size".into(),
                ));
            }
            let stripes = th.stripes();
            for (u, (lu, su, nu)) in stripes.iter().enumerate() {
                for (v, (_, sv, nv)) in stripes.iter().enumerate() {
                    let block: Vec<usize> = (0..*nu).collect();
                    let cols: Vec<usize> = (0..*nv).collect();
                    let sub = m.submatrix(
                        &block.iter().map(|i| su + i).collect::<Vec<_>>(),
                        &cols.iter().map(|j| sv + j).collect::<Vec<_>>(),
                    );
                    if u < v && !sub.is_zero() {
                        return Err(Error::Inadmissible(format!(
                            "row addition from a higher stripe into {:?} in degree {}",
                            lu.summand, key.0
                        )));
                    }
                    if u == v {
                        if let Some(prev) = diag.get(&lu.summand) {
                            if *prev != sub {
                                return Err(Error::Inadmissible(format!(
                                    "conjugate stripes of {:?} transformed differently",
                                    lu.summand
                                )));
                            }
                        } else {
                            diag.insert(lu.summand, sub);
                        }
                    }
                }
            }
        }
        for (&(r, pos), th) in &t.theta.blocks {
            let m = self
                .psi
                .get(&(r, ctx.a_vertex(pos)))
                .ok_or_else(|| Error::Inadmissible("missing column transformation".into()))?;
            if m.rows() != th.cols.len() || !m.is_invertible() {
                return Err(Error::Inadmissible(
                    "column transformation is not invertible of the right size".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn apply(&self, t: &Triple<F>, ctx: &TripleContext) -> Result<Triple<F>> {
        self.validate(t, ctx)?;
        let mut out = t.clone();
        for (key, th) in out.theta.blocks.iter_mut() {
            let phi = &self.phi[key];
            let psi_inv = self.psi[&(key.0, ctx.a_vertex(key.1))].inverse().expect("validated");
            th.matrix = phi.mul(&th.matrix).mul(&psi_inv);
        }
        Ok(out)
    }
}

fn random_invertible<F: Field>(n: usize, rng: &mut impl Rng) -> Matrix<F> {
    loop {
        let m = Matrix::from_rows(
            (0..n).map(|_| (0..n).map(|_| F::from_i64(rng.gen_range(-3..=3))).collect()).collect(),
        );
        if m.is_invertible() {
            return m;
        }
    }
}
