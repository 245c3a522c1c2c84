use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::chains::{BunchOfChains, Letter, Side};
use super::word::FullWord;
use crate::error::{Error, Result};
use crate::exactla::{kernel_vectors, solve_linear, Matrix, StructureConstantAlgebra};
use crate::scalar::Field;
use crate::words::jordan_block;

/// A representation of a bunch: one matrix per index, with rows split into
/// stripes by the F-chain and columns by the E-chain, both in chain order.
///
/// A stripe of size `n` means `n` consecutive rows (or columns). Tied
/// stripes are conjugate and have equal sizes.
#[derive(Clone, Debug, PartialEq)]
pub struct RepX<F> {
    pub sizes: BTreeMap<Letter, usize>,
    pub blocks: BTreeMap<usize, Matrix<F>>,
    /// ± labels of the basis vectors of self-tied stripes.
    pub signs: BTreeMap<Letter, Vec<i8>>,
}

fn offsets(b: &BunchOfChains, sizes: &BTreeMap<Letter, usize>, index: usize, side: Side) -> Vec<usize> {
    let mut out = vec![0];
    for pos in 0..b.chain_len(index, side) {
        let n = sizes.get(&Letter { index, side, pos }).copied().unwrap_or(0);
        out.push(out.last().unwrap() + n);
    }
    out
}

impl<F: Field> RepX<F> {
    pub fn zero() -> Self {
        RepX { sizes: BTreeMap::new(), blocks: BTreeMap::new(), signs: BTreeMap::new() }
    }

    /// Zero matrices of the right shapes for the given stripe sizes.
    pub fn with_sizes(b: &BunchOfChains, sizes: BTreeMap<Letter, usize>) -> Self {
        let sizes: BTreeMap<Letter, usize> = sizes.into_iter().filter(|(_, n)| *n > 0).collect();
        let indices: BTreeSet<usize> = sizes.keys().map(|x| x.index).collect();
        let blocks = indices
            .into_iter()
            .map(|i| {
                let rows = *offsets(b, &sizes, i, Side::F).last().unwrap();
                let cols = *offsets(b, &sizes, i, Side::E).last().unwrap();
                (i, Matrix::zeros(rows, cols))
            })
            .collect();
        RepX { sizes, blocks, signs: BTreeMap::new() }
    }

    pub fn size(&self, x: Letter) -> usize {
        self.sizes.get(&x).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.sizes.values().sum()
    }

    /// Row or column range of the stripe of `x` inside its matrix.
    pub fn stripe(&self, b: &BunchOfChains, x: Letter) -> std::ops::Range<usize> {
        let off = offsets(b, &self.sizes, x.index, x.side);
        off[x.pos]..off[x.pos + 1]
    }

    pub fn block(&self, i: usize) -> Option<&Matrix<F>> {
        self.blocks.get(&i)
    }

    /// The part of the matrix of `y.index` with rows in stripe `y` and
    /// columns in stripe `x`.
    pub fn cell(&self, b: &BunchOfChains, y: Letter, x: Letter) -> Matrix<F> {
        let (rows, cols) = (self.stripe(b, y), self.stripe(b, x));
        match self.blocks.get(&y.index) {
            Some(m) => m.submatrix(&rows.collect::<Vec<_>>(), &cols.collect::<Vec<_>>()),
            None => Matrix::zeros(rows.len(), cols.len()),
        }
    }

    pub fn check(&self, b: &BunchOfChains) -> Result<()> {
        for (&x, &n) in &self.sizes {
            if !b.contains(x) {
                return Err(Error::Dimension(format!("stripe {x:?} is not in the bunch")));
            }
            if let Some(y) = b.tie(x) {
                if self.size(y) != n {
                    return Err(Error::Dimension(format!(
                        "conjugate stripes {} and {} differ in size",
                        b.label(x),
                        b.label(y)
                    )));
                }
            }
        }
        for (&x, s) in &self.signs {
            if b.tie(x) != Some(x) || s.len() != self.size(x) || s.iter().any(|v| v.abs() != 1) {
                return Err(Error::Dimension(format!("bad sign decoration on {}", b.label(x))));
            }
        }
        for (&i, m) in &self.blocks {
            let rows = *offsets(b, &self.sizes, i, Side::F).last().unwrap();
            let cols = *offsets(b, &self.sizes, i, Side::E).last().unwrap();
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::Dimension(format!(
                    "matrix of index {} has the wrong shape",
                    b.index_label(i)
                )));
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &RepX<F>, b: &BunchOfChains) -> RepX<F> {
        let mut sizes = self.sizes.clone();
        for (x, n) in &other.sizes {
            *sizes.entry(*x).or_insert(0) += n;
        }
        let mut out = RepX::with_sizes(b, sizes);
        for part in [(self, true), (other, false)] {
            let (r, first) = part;
            for (&i, m) in &r.blocks {
                let big = out.blocks.get_mut(&i).unwrap();
                for y in (0..b.chain_len(i, Side::F)).map(|pos| Letter { index: i, side: Side::F, pos }) {
                    for x in (0..b.chain_len(i, Side::E)).map(|pos| Letter { index: i, side: Side::E, pos }) {
                        let (sr, sc) = (r.stripe(b, y), r.stripe(b, x));
                        let shift_r = if first { 0 } else { self.size(y) };
                        let shift_c = if first { 0 } else { self.size(x) };
                        let (br, bc) = (
                            offsets(b, &out.sizes, i, Side::F)[y.pos],
                            offsets(b, &out.sizes, i, Side::E)[x.pos],
                        );
                        for (a, rr) in sr.enumerate() {
                            for (c, cc) in sc.clone().enumerate() {
                                big[(br + shift_r + a, bc + shift_c + c)] = m[(rr, cc)].clone();
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn to_json_value(&self, b: &BunchOfChains) -> serde_json::Value {
        let stripes: Vec<_> =
            self.sizes.iter().map(|(x, n)| json!({"element": b.label(*x), "size": n})).collect();
        let blocks: serde_json::Map<String, serde_json::Value> = self
            .blocks
            .iter()
            .map(|(i, m)| {
                let rows: Vec<Vec<String>> =
                    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)].to_string()).collect()).collect();
                (b.index_label(*i).to_string(), json!(rows))
            })
            .collect();
        json!({"stripes": stripes, "blocks": blocks})
    }
}

/// Places one `m×m` block per dash; the closing dash of a cyclic word gets
/// `closing` instead of the identity.
fn word_rep<F: Field>(b: &BunchOfChains, w: &FullWord, m: usize, closing: &Matrix<F>) -> Result<RepX<F>> {
    w.validate(b)?;
    let positions = w.positions();
    let mut pos_of = vec![0; w.len()];
    for (p, group) in positions.iter().enumerate() {
        for &k in group {
            pos_of[k] = p;
        }
    }
    // occurrences of each element, by position
    let mut occ: BTreeMap<Letter, Vec<usize>> = BTreeMap::new();
    for (k, &x) in w.letters.iter().enumerate() {
        occ.entry(x).or_default().push(pos_of[k]);
    }
    let sizes = occ.iter().map(|(x, ps)| (*x, ps.len() * m)).collect();
    let mut rep = RepX::with_sizes(b, sizes);
    let slot = |rep: &RepX<F>, k: usize| -> usize {
        let x = w.letters[k];
        let rank = occ[&x].iter().position(|&p| p == pos_of[k]).unwrap();
        rep.stripe(b, x).start + rank * m
    };
    let dashes = w.dashes();
    let ident = Matrix::identity(m);
    for (n, &(k1, k2)) in dashes.iter().enumerate() {
        let (ky, kx) = if w.letters[k1].side == Side::F { (k1, k2) } else { (k2, k1) };
        let (r0, c0) = (slot(&rep, ky), slot(&rep, kx));
        let block = if w.cyclic && n + 1 == dashes.len() { closing } else { &ident };
        let mat = rep.blocks.get_mut(&w.letters[ky].index).unwrap();
        for a in 0..m {
            for c in 0..m {
                mat[(r0 + a, c0 + c)] = block[(a, c)].clone();
            }
        }
    }
    Ok(rep)
}

/// The string representation of a word.
pub fn string_rep<F: Field>(b: &BunchOfChains, w: &FullWord) -> Result<RepX<F>> {
    if w.cyclic {
        return Err(Error::InvalidWord("string words are not cyclic".into()));
    }
    word_rep(b, w, 1, &Matrix::identity(1))
}

/// The band representation of a cyclic word with an `m×m` Jordan block of
/// eigenvalue `pi` on the closing dash.
pub fn band_rep<F: Field>(b: &BunchOfChains, w: &FullWord, m: usize, pi: &F) -> Result<RepX<F>> {
    if !w.cyclic {
        return Err(Error::InvalidWord("band words are cyclic".into()));
    }
    if m == 0 || pi.is_zero() {
        return Err(Error::InvalidWord("a band needs m ≥ 1 and a nonzero eigenvalue".into()));
    }
    if w.is_periodic() {
        return Err(Error::InvalidWord("band word is periodic".into()));
    }
    let j = Matrix::from_rows(jordan_block(m, pi));
    word_rep(b, w, m, &j)
}

/// A pair of stripe-respecting matrices per index: `phi` acts on F-stripes,
/// `psi` on E-stripes. Blocks only go from a stripe to one of equal or
/// higher weight, and tied stripes share their diagonal blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMorphism<F> {
    pub phi: BTreeMap<usize, Matrix<F>>,
    pub psi: BTreeMap<usize, Matrix<F>>,
}

/// An invertible stripe-respecting change of basis, acting by `Θ ↦ Φ Θ Ψ⁻¹`.
pub type AdmissibleTransform<F> = RepMorphism<F>;

impl<F: Field> RepMorphism<F> {
    pub fn compose(&self, first: &RepMorphism<F>) -> RepMorphism<F> {
        let mul = |a: &BTreeMap<usize, Matrix<F>>, b: &BTreeMap<usize, Matrix<F>>| {
            a.iter().filter_map(|(i, m)| b.get(i).map(|n| (*i, m.mul(n)))).collect()
        };
        RepMorphism { phi: mul(&self.phi, &first.phi), psi: mul(&self.psi, &first.psi) }
    }

    pub fn is_invertible(&self) -> bool {
        self.phi.values().chain(self.psi.values()).all(|m| m.is_square() && m.is_invertible())
    }
}

/// One free block of a morphism: the same `rows×cols` matrix placed at
/// every `(target, source)` listed.
struct FreeBlock {
    rows: usize,
    cols: usize,
    at: Vec<(Letter, Letter)>,
    /// Entries forced to vanish by ± decorations.
    skip: Vec<(usize, usize)>,
}

/// The unknowns of a stripe-respecting map `src → tgt`.
struct Layout {
    blocks: Vec<FreeBlock>,
    /// First variable of each block; entries are numbered row-major.
    start: Vec<usize>,
    len: usize,
    indices: BTreeSet<usize>,
}

impl Layout {
    fn new<F: Field>(b: &BunchOfChains, src: &RepX<F>, tgt: &RepX<F>) -> Self {
        let mut blocks = Vec::new();
        let mut seen = BTreeSet::new();
        let sizes: BTreeSet<Letter> = src.sizes.keys().chain(tgt.sizes.keys()).copied().collect();
        for &x in &sizes {
            let c = b.class(x);
            if !seen.insert(c) {
                continue;
            }
            let (rows, cols) = (tgt.size(x), src.size(x));
            let mut at = vec![(x, x)];
            if let Some(y) = b.tie(x) {
                if y != x {
                    at.push((y, y));
                }
            }
            let mut skip = Vec::new();
            if let (Some(st), Some(ss)) = (tgt.signs.get(&x), src.signs.get(&x)) {
                for (r, sr) in st.iter().enumerate() {
                    for (c, sc) in ss.iter().enumerate() {
                        if sr != sc {
                            skip.push((r, c));
                        }
                    }
                }
            }
            blocks.push(FreeBlock { rows, cols, at, skip });
        }
        for &u in &sizes {
            for &v in &sizes {
                if u.index == v.index && u.side == v.side && u.pos < v.pos {
                    blocks.push(FreeBlock {
                        rows: tgt.size(v),
                        cols: src.size(u),
                        at: vec![(v, u)],
                        skip: Vec::new(),
                    });
                }
            }
        }
        let mut start = Vec::new();
        let mut len = 0;
        for fb in &blocks {
            start.push(len);
            len += fb.rows * fb.cols;
        }
        let indices = sizes.iter().map(|x| x.index).collect();
        Layout { blocks, start, len, indices }
    }

    fn assemble<F: Field>(&self, b: &BunchOfChains, src: &RepX<F>, tgt: &RepX<F>, v: &[F]) -> RepMorphism<F> {
        let mut phi = BTreeMap::new();
        let mut psi = BTreeMap::new();
        for &i in &self.indices {
            let (fr, fc) = (offsets(b, &tgt.sizes, i, Side::F), offsets(b, &src.sizes, i, Side::F));
            let (er, ec) = (offsets(b, &tgt.sizes, i, Side::E), offsets(b, &src.sizes, i, Side::E));
            phi.insert(i, Matrix::zeros(*fr.last().unwrap(), *fc.last().unwrap()));
            psi.insert(i, Matrix::zeros(*er.last().unwrap(), *ec.last().unwrap()));
        }
        for (k, fb) in self.blocks.iter().enumerate() {
            for &(t, s) in &fb.at {
                let m = match t.side {
                    Side::F => phi.get_mut(&t.index).unwrap(),
                    Side::E => psi.get_mut(&t.index).unwrap(),
                };
                let (r0, c0) = (tgt.stripe(b, t).start, src.stripe(b, s).start);
                for r in 0..fb.rows {
                    for c in 0..fb.cols {
                        m[(r0 + r, c0 + c)] = v[self.start[k] + r * fb.cols + c].clone();
                    }
                }
            }
        }
        RepMorphism { phi, psi }
    }

    /// Variables fixed to zero by the sign decorations.
    fn frozen(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, fb) in self.blocks.iter().enumerate() {
            for &(r, c) in &fb.skip {
                out.push(self.start[k] + r * fb.cols + c);
            }
        }
        out
    }

    /// Reads the variables back from assembled matrices.
    fn coordinates<F: Field>(
        &self,
        b: &BunchOfChains,
        src: &RepX<F>,
        tgt: &RepX<F>,
        f: &RepMorphism<F>,
    ) -> Vec<F> {
        let mut v = vec![F::zero(); self.len];
        for (k, fb) in self.blocks.iter().enumerate() {
            let (t, s) = fb.at[0];
            let m = match t.side {
                Side::F => &f.phi[&t.index],
                Side::E => &f.psi[&t.index],
            };
            let (r0, c0) = (tgt.stripe(b, t).start, src.stripe(b, s).start);
            for r in 0..fb.rows {
                for c in 0..fb.cols {
                    v[self.start[k] + r * fb.cols + c] = m[(r0 + r, c0 + c)].clone();
                }
            }
        }
        v
    }
}

/// Checks the shape rules of a transformation of `rep`.
pub fn validate_transform<F: Field>(
    b: &BunchOfChains,
    rep: &RepX<F>,
    t: &AdmissibleTransform<F>,
) -> Result<()> {
    let layout = Layout::new(b, rep, rep);
    let indices: BTreeSet<usize> = rep.sizes.keys().map(|x| x.index).collect();
    for &i in &indices {
        for (side, map) in [(Side::F, &t.phi), (Side::E, &t.psi)] {
            let n = *offsets(b, &rep.sizes, i, side).last().unwrap();
            let m = map
                .get(&i)
                .ok_or_else(|| Error::Inadmissible(format!("no matrix for {}", b.index_label(i))))?;
            if m.rows() != n || m.cols() != n {
                return Err(Error::Inadmissible(format!(
                    "matrix for {} has the wrong size",
                    b.index_label(i)
                )));
            }
            for u in 0..b.chain_len(i, side) {
                for v in 0..u {
                    let (hi, lo) = (Letter { index: i, side, pos: u }, Letter { index: i, side, pos: v });
                    let (rr, cc) = (rep.stripe(b, lo), rep.stripe(b, hi));
                    if rr.clone().any(|r| cc.clone().any(|c| !m[(r, c)].is_zero())) {
                        return Err(Error::Inadmissible(format!(
                            "{} may not be added to the lower weight {}",
                            b.label(hi),
                            b.label(lo)
                        )));
                    }
                }
            }
        }
    }
    // the read-back must reproduce the matrices: this checks the shared
    // diagonals on conjugate stripes and the sign decorations
    let mut v = layout.coordinates(b, rep, rep, t);
    for k in layout.frozen() {
        v[k] = F::zero();
    }
    let again = layout.assemble(b, rep, rep, &v);
    for &i in &indices {
        if again.phi[&i] != t.phi[&i] || again.psi[&i] != t.psi[&i] {
            return Err(Error::Inadmissible(format!(
                "conjugate stripes at {} are not transformed simultaneously",
                b.index_label(i)
            )));
        }
    }
    if !t.is_invertible() {
        return Err(Error::Inadmissible("transformation is not invertible".into()));
    }
    Ok(())
}

pub fn apply_transformation<F: Field>(
    b: &BunchOfChains,
    rep: &RepX<F>,
    t: &AdmissibleTransform<F>,
) -> Result<RepX<F>> {
    validate_transform(b, rep, t)?;
    let mut out = rep.clone();
    for (i, m) in out.blocks.iter_mut() {
        let psi_inv = t.psi[i].inverse().expect("validated");
        *m = t.phi[i].mul(m).mul(&psi_inv);
    }
    Ok(out)
}

pub fn identity_transform<F: Field>(b: &BunchOfChains, rep: &RepX<F>) -> AdmissibleTransform<F> {
    let layout = Layout::new(b, rep, rep);
    let mut v = vec![F::zero(); layout.len];
    for (k, fb) in layout.blocks.iter().enumerate() {
        if fb.at[0].0 == fb.at[0].1 {
            for r in 0..fb.rows {
                v[layout.start[k] + r * fb.cols + r] = F::one();
            }
        }
    }
    layout.assemble(b, rep, rep, &v)
}

/// A random admissible transformation with small integer entries.
pub fn random_transform<F: Field>(
    b: &BunchOfChains,
    rep: &RepX<F>,
    rng: &mut impl Rng,
) -> AdmissibleTransform<F> {
    let layout = Layout::new(b, rep, rep);
    let frozen = layout.frozen();
    loop {
        let mut v: Vec<F> = (0..layout.len).map(|_| F::from_i64(rng.gen_range(-3..=3))).collect();
        for &k in &frozen {
            v[k] = F::zero();
        }
        let t = layout.assemble(b, rep, rep, &v);
        if t.is_invertible() {
            return t;
        }
    }
}

/// A basis of the morphisms `src → tgt`: stripe-respecting pairs with
/// `Φ Θ_src = Θ_tgt Ψ` at every index.
pub fn rep_hom<F: Field>(b: &BunchOfChains, src: &RepX<F>, tgt: &RepX<F>) -> Vec<RepMorphism<F>> {
    let layout = Layout::new(b, src, tgt);
    let mut eqs: Vec<Vec<F>> = Vec::new();
    let basis_map = |k: usize| {
        let mut v = vec![F::zero(); layout.len];
        v[k] = F::one();
        layout.assemble(b, src, tgt, &v)
    };
    let residual = |f: &RepMorphism<F>| -> Vec<F> {
        let mut out = Vec::new();
        for &i in &layout.indices {
            let zero_s = Matrix::zeros(f.phi[&i].cols(), f.psi[&i].cols());
            let zero_t = Matrix::zeros(f.phi[&i].rows(), f.psi[&i].rows());
            let ts = src.blocks.get(&i).unwrap_or(&zero_s);
            let tt = tgt.blocks.get(&i).unwrap_or(&zero_t);
            let lhs = f.phi[&i].mul(ts);
            let rhs = tt.mul(&f.psi[&i]);
            for r in 0..lhs.rows() {
                for c in 0..lhs.cols() {
                    out.push(lhs[(r, c)].clone() - rhs[(r, c)].clone());
                }
            }
        }
        out
    };
    let frozen: BTreeSet<usize> = layout.frozen().into_iter().collect();
    let cols: Vec<Vec<F>> = (0..layout.len).map(|k| residual(&basis_map(k))).collect();
    let n_eq = cols.first().map_or(0, |c| c.len());
    for r in 0..n_eq {
        eqs.push(cols.iter().map(|c| c[r].clone()).collect());
    }
    for &k in &frozen {
        let mut row = vec![F::zero(); layout.len];
        row[k] = F::one();
        eqs.push(row);
    }
    let system = if eqs.is_empty() { Matrix::zeros(0, layout.len) } else { Matrix::from_rows(eqs) };
    kernel_vectors(&system).into_iter().map(|v| layout.assemble(b, src, tgt, &v)).collect()
}

/// The endomorphism algebra of a representation, with its basis.
pub struct RepEnd<F> {
    pub algebra: StructureConstantAlgebra<F>,
    pub basis: Vec<RepMorphism<F>>,
}

pub fn rep_end<F: Field>(b: &BunchOfChains, rep: &RepX<F>) -> Result<RepEnd<F>> {
    let basis = rep_hom(b, rep, rep);
    let layout = Layout::new(b, rep, rep);
    let n = basis.len();
    let cols: Vec<Vec<F>> = basis.iter().map(|f| layout.coordinates(b, rep, rep, f)).collect();
    let bm = Matrix::from_columns(layout.len, &cols);
    let mut products = Vec::with_capacity(n * n);
    for x in &basis {
        for y in &basis {
            // x·y is "y then x"
            products.push(layout.coordinates(b, rep, rep, &x.compose(y)));
        }
    }
    let sol = solve_linear(&bm, &Matrix::from_columns(layout.len, &products))?
        .ok_or_else(|| Error::Dimension("endomorphisms are not closed under composition".into()))?;
    let table = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let col = x * n + y;
                    (0..n).filter(|&k| !sol[(k, col)].is_zero()).map(|k| (k, sol[(k, col)].clone())).collect()
                })
                .collect()
        })
        .collect();
    let id = layout.coordinates(b, rep, rep, &identity_transform(b, rep));
    let unit_sol = solve_linear(&bm, &Matrix::from_columns(layout.len, &[id]))?
        .ok_or_else(|| Error::Dimension("identity is not an endomorphism".into()))?;
    let unit = (0..n).map(|k| unit_sol[(k, 0)].clone()).collect();
    Ok(RepEnd { algebra: StructureConstantAlgebra::new_unchecked(n, table, unit)?, basis })
}

/// Indecomposability by locality of the endomorphism algebra.
pub fn rep_is_indecomposable<F: Field>(b: &BunchOfChains, rep: &RepX<F>) -> Result<bool> {
    if rep.dim() == 0 {
        return Ok(false);
    }
    rep_end(b, rep)?.algebra.is_local()
}

/// Isomorphism test by random elements of `Hom(src, tgt)`. A negative answer
/// after all trials is exact only when the field is large; trials are
/// seeded so the answer is reproducible.
pub fn rep_isomorphic<F: Field>(b: &BunchOfChains, src: &RepX<F>, tgt: &RepX<F>) -> bool {
    let classes = |r: &RepX<F>| -> BTreeMap<Letter, usize> {
        r.sizes.iter().filter(|(_, n)| **n > 0).map(|(x, n)| (*x, *n)).collect()
    };
    if classes(src) != classes(tgt) {
        return false;
    }
    let basis = rep_hom(b, src, tgt);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..12 {
        let mut f: Option<RepMorphism<F>> = None;
        for g in &basis {
            let c = F::from_i64(rng.gen_range(-7..=7));
            let scaled = RepMorphism {
                phi: g.phi.iter().map(|(i, m)| (*i, m.scale(&c))).collect(),
                psi: g.psi.iter().map(|(i, m)| (*i, m.scale(&c))).collect(),
            };
            f = Some(match f {
                None => scaled,
                Some(acc) => RepMorphism {
                    phi: acc.phi.iter().map(|(i, m)| (*i, m.add(&scaled.phi[i]))).collect(),
                    psi: acc.psi.iter().map(|(i, m)| (*i, m.add(&scaled.psi[i]))).collect(),
                },
            });
        }
        match f {
            Some(f) if f.is_invertible() => return true,
            None if src.dim() == 0 => return true,
            _ => {}
        }
    }
    false
}
