use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::{compose, MorphMatrix, ProjComplex};
use crate::algebra::{BasedAlgebra, Element};
use crate::error::{Error, Result};
use crate::exactla::{kernel_vectors, solve_linear, Echelon, Matrix, StructureConstantAlgebra};
use crate::scalar::Field;

/// Degreewise morphism `X^r → Y^{r+shift}` for `r` in the window of `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap<F> {
    pub shift: i64,
    pub lo: i64,
    pub blocks: Vec<MorphMatrix<F>>,
}

impl<F: Field> GradedMap<F> {
    pub fn block(&self, r: i64) -> Option<&MorphMatrix<F>> {
        if r < self.lo {
            return None;
        }
        self.blocks.get((r - self.lo) as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().flatten().all(|x| x.is_zero())
    }

    pub fn identity(x: &ProjComplex<F>) -> Self {
        let blocks = x
            .degrees()
            .map(|r| {
                let c = x.comp(r);
                (0..c.len())
                    .map(|q| {
                        (0..c.len())
                            .map(|p| {
                                if p == q {
                                    Element::basis(x.algebra().idempotent(c[p]))
                                } else {
                                    Element::zero()
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GradedMap { shift: 0, lo: x.lo(), blocks }
    }

    pub fn add(&self, other: &Self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect()).collect()
            })
            .collect();
        GradedMap { shift: self.shift, lo: self.lo, blocks }
    }

    pub fn scale(&self, c: &F) -> Self {
        let blocks = self.blocks.iter().map(|m| super::complex::scale_matrix(m, c)).collect();
        GradedMap { shift: self.shift, lo: self.lo, blocks }
    }
}

/// `g ∘ f` for `f: X → Y` and `g: Y → Z`.
pub fn compose_maps<F: Field>(
    alg: &BasedAlgebra,
    x: &ProjComplex<F>,
    f: &GradedMap<F>,
    g: &GradedMap<F>,
) -> GradedMap<F> {
    let blocks = x
        .degrees()
        .map(|r| {
            let n = x.comp(r).len();
            match (f.block(r), g.block(r + f.shift)) {
                (Some(a), Some(b)) => compose(alg, a, b, n),
                _ => Vec::new(),
            }
        })
        .collect();
    GradedMap { shift: f.shift + g.shift, lo: x.lo(), blocks }
}

/// Coordinates of graded maps `X → Y` of a fixed shift: one per
/// (degree, target summand, source summand, basis element).
struct MapCoords {
    keys: Vec<(i64, usize, usize, usize)>,
    index: HashMap<(i64, usize, usize, usize), usize>,
}

impl MapCoords {
    fn new<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>, shift: i64) -> Self {
        let alg = x.algebra();
        let mut keys = Vec::new();
        for r in x.degrees() {
            for (p, &sv) in x.comp(r).iter().enumerate() {
                for (q, &tv) in y.comp(r + shift).iter().enumerate() {
                    for b in alg.hom_basis(sv, tv) {
                        keys.push((r, q, p, b));
                    }
                }
            }
        }
        let index = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        MapCoords { keys, index }
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn to_map<F: Field>(&self, x: &ProjComplex<F>, y: &ProjComplex<F>, shift: i64, v: &[F]) -> GradedMap<F> {
        let mut blocks: Vec<MorphMatrix<F>> = x
            .degrees()
            .map(|r| vec![vec![Element::zero(); x.comp(r).len()]; y.comp(r + shift).len()])
            .collect();
        let mut terms: HashMap<(i64, usize, usize), Vec<(usize, F)>> = HashMap::new();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (r, q, p, b) = self.keys[i];
                terms.entry((r, q, p)).or_default().push((b, c.clone()));
            }
        }
        for ((r, q, p), t) in terms {
            blocks[(r - x.lo()) as usize][q][p] = Element::from_terms(t);
        }
        GradedMap { shift, lo: x.lo(), blocks }
    }

    fn to_vector<F: Field>(&self, f: &GradedMap<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.len()];
        for (k, m) in f.blocks.iter().enumerate() {
            let r = f.lo + k as i64;
            for (q, row) in m.iter().enumerate() {
                for (p, x) in row.iter().enumerate() {
                    for (b, c) in x.terms() {
                        v[self.index[&(r, q, p, *b)]] = c.clone();
                    }
                }
            }
        }
        v
    }
}

/// Sparse linear system assembled column by column.
struct Assembler<F> {
    rows: HashMap<(i64, usize, usize, usize), usize>,
    cols: Vec<Vec<(usize, F)>>,
}

impl<F: Field> Assembler<F> {
    fn new() -> Self {
        Assembler { rows: HashMap::new(), cols: Vec::new() }
    }

    fn row(&mut self, key: (i64, usize, usize, usize)) -> usize {
        let n = self.rows.len();
        *self.rows.entry(key).or_insert(n)
    }

    fn matrix(&self) -> Matrix<F> {
        let mut m: Matrix<F> = Matrix::zeros(self.rows.len(), self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                m[(*i, j)] = m[(*i, j)].clone() + c.clone();
            }
        }
        m
    }
}

/// Basis of the space of chain maps `X → Y`.
pub fn chain_maps<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> Vec<GradedMap<F>> {
    let coords = MapCoords::new(x, y, 0);
    chain_map_vectors(x, y, &coords).iter().map(|v| coords.to_map(x, y, 0, v)).collect()
}

fn chain_map_vectors<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>, coords: &MapCoords) -> Vec<Vec<F>> {
    let alg = x.algebra().clone();
    let mut asm = Assembler::<F>::new();
    for &(r, q, p, b) in &coords.keys {
        let mut col = Vec::new();
        // d_Y ∘ f in degree r
        if let Some(dy) = y.diff_ref(r) {
            for (q2, row) in dy.iter().enumerate() {
                for (t, c) in row[q].terms() {
                    if let Some(z) = alg.mul_basis(b, *t) {
                        col.push((asm.row((r, q2, p, z)), c.clone()));
                    }
                }
            }
        }
        // − f ∘ d_X in degree r − 1
        if let Some(dx) = x.diff_ref(r - 1) {
            for (p2, e) in dx[p].iter().enumerate() {
                for (t, c) in e.terms() {
                    if let Some(z) = alg.mul_basis(*t, b) {
                        col.push((asm.row((r - 1, q, p2, z)), -c.clone()));
                    }
                }
            }
        }
        asm.cols.push(col);
    }
    if asm.rows.is_empty() {
        return (0..coords.len())
            .map(|i| {
                let mut v = vec![F::zero(); coords.len()];
                v[i] = F::one();
                v
            })
            .collect();
    }
    kernel_vectors(&asm.matrix())
}

/// Spanning set of null-homotopic maps `dh + hd`, in chain-map coordinates.
fn null_homotopic<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>, coords: &MapCoords) -> Echelon<F> {
    let alg = x.algebra().clone();
    let hcoords = MapCoords::new(x, y, -1);
    let mut ech = Echelon::new(coords.len());
    for &(r, q, p, b) in &hcoords.keys {
        let mut v = vec![F::zero(); coords.len()];
        // d_Y^{r−1} ∘ h^r lands in f^r
        if let Some(dy) = y.diff_ref(r - 1) {
            for (q2, row) in dy.iter().enumerate() {
                for (t, c) in row[q].terms() {
                    if let Some(z) = alg.mul_basis(b, *t) {
                        let i = coords.index[&(r, q2, p, z)];
                        v[i] = v[i].clone() + c.clone();
                    }
                }
            }
        }
        // h^r ∘ d_X^{r−1} lands in f^{r−1}
        if let Some(dx) = x.diff_ref(r - 1) {
            for (p2, e) in dx[p].iter().enumerate() {
                for (t, c) in e.terms() {
                    if let Some(z) = alg.mul_basis(*t, b) {
                        let i = coords.index[&(r - 1, q, p2, z)];
                        v[i] = v[i].clone() + c.clone();
                    }
                }
            }
        }
        ech.insert(&v);
    }
    ech
}

/// `Hom` in the homotopy category: representatives of a basis of chain maps
/// modulo null-homotopic ones.
#[derive(Clone, Debug)]
pub struct HomSpace<F> {
    pub dim: usize,
    pub basis: Vec<GradedMap<F>>,
    pub null_dim: usize,
}

pub fn hom_homotopy<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> HomSpace<F> {
    let (x, y) = align(x, y);
    let coords = MapCoords::new(&x, &y, 0);
    let chain = chain_map_vectors(&x, &y, &coords);
    let mut ech = null_homotopic(&x, &y, &coords);
    let null_dim = ech.dim();
    let reps: Vec<Vec<F>> = chain.into_iter().filter(|c| ech.insert(c)).collect();
    HomSpace { dim: reps.len(), basis: reps.iter().map(|v| coords.to_map(&x, &y, 0, v)).collect(), null_dim }
}

/// Pads both complexes to a common window.
fn align<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> (ProjComplex<F>, ProjComplex<F>) {
    let lo = x.lo().min(y.lo());
    let hi = x.hi().max(y.hi());
    (x.padded(lo, hi), y.padded(lo, hi))
}

/// `End` in the homotopy category as a structure-constant algebra, with
/// chain-map representatives of its basis. Multiplication is `a·b = a ∘ b`.
pub struct EndAlgebra<F> {
    pub algebra: StructureConstantAlgebra<F>,
    pub reps: Vec<GradedMap<F>>,
}

pub fn end_algebra<F: Field>(x: &ProjComplex<F>) -> Result<EndAlgebra<F>> {
    let alg = x.algebra().clone();
    let coords = MapCoords::new(x, x, 0);
    let chain = chain_map_vectors(x, x, &coords);
    let mut ech = null_homotopic(x, x, &coords);
    let null: Vec<Vec<F>> = ech.basis().to_vec();
    let reps_v: Vec<Vec<F>> = chain.into_iter().filter(|c| ech.insert(c)).collect();
    let n = reps_v.len();
    let reps: Vec<GradedMap<F>> = reps_v.iter().map(|v| coords.to_map(x, x, 0, v)).collect();
    let mut cols = reps_v.clone();
    cols.extend(null.iter().cloned());
    let basis_m = Matrix::from_columns(coords.len(), &cols);
    let mut products = Vec::with_capacity(n * n);
    for a in &reps {
        for b in &reps {
            products.push(coords.to_vector(&compose_maps(&alg, x, b, a)));
        }
    }
    let rhs = Matrix::from_columns(coords.len(), &products);
    let sol = solve_linear(&basis_m, &rhs)?
        .ok_or_else(|| Error::NotComplex("composition of chain maps left the chain-map space".into()))?;
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let col = i * n + j;
            table[i][j] =
                (0..n).filter(|&k| !sol[(k, col)].is_zero()).map(|k| (k, sol[(k, col)].clone())).collect();
        }
    }
    let id = coords.to_vector(&GradedMap::identity(x));
    let unit_sol = solve_linear(&basis_m, &Matrix::from_columns(coords.len(), &[id]))?
        .ok_or_else(|| Error::NotComplex("identity is not a chain map".into()))?;
    let unit = (0..n).map(|k| unit_sol[(k, 0)].clone()).collect();
    Ok(EndAlgebra { algebra: StructureConstantAlgebra::new_unchecked(n, table, unit)?, reps })
}

/// Whether a chain map between minimal complexes of equal shape is an
/// isomorphism, i.e. its top is invertible in every degree.
pub fn top_invertible<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>, f: &GradedMap<F>) -> bool {
    let alg = x.algebra();
    for r in x.degrees() {
        let (src, tgt) = (x.comp(r), y.comp(r));
        if src.len() != tgt.len() {
            return false;
        }
        if src.is_empty() {
            continue;
        }
        let Some(m) = f.block(r) else { return false };
        for v in 0..alg.vertex_count() {
            let cols: Vec<usize> = (0..src.len()).filter(|&p| src[p] == v).collect();
            let rows: Vec<usize> = (0..tgt.len()).filter(|&q| tgt[q] == v).collect();
            if cols.len() != rows.len() {
                return false;
            }
            if cols.is_empty() {
                continue;
            }
            let e = alg.idempotent(v);
            let t = Matrix::from_rows(
                rows.iter().map(|&q| cols.iter().map(|&p| m[q][p].coeff(e)).collect()).collect(),
            );
            if !t.is_invertible() {
                return false;
            }
        }
    }
    true
}

/// Splits `X` along an idempotent chain map, returning the image complex.
fn image_of_idempotent<F: Field>(x: &ProjComplex<F>, f: &GradedMap<F>) -> Result<ProjComplex<F>> {
    let alg = x.algebra().clone();
    let mut sections: Vec<(Vec<usize>, MorphMatrix<F>, MorphMatrix<F>)> = Vec::new();
    for r in x.degrees() {
        let comp = x.comp(r);
        let fr = f.block(r).expect("block in window");
        let mut chosen = Vec::new();
        for v in 0..alg.vertex_count() {
            let idx: Vec<usize> = (0..comp.len()).filter(|&p| comp[p] == v).collect();
            if idx.is_empty() {
                continue;
            }
            let e = alg.idempotent(v);
            let t = Matrix::from_rows(
                idx.iter().map(|&q| idx.iter().map(|&p| fr[q][p].coeff(e)).collect()).collect(),
            );
            let (_, piv) = t.rref();
            chosen.extend(piv.into_iter().map(|k| idx[k]));
        }
        chosen.sort();
        let verts: Vec<usize> = chosen.iter().map(|&p| comp[p]).collect();
        // S: ⊕ P_w → X^r, columns of f at the chosen summands
        let s: MorphMatrix<F> =
            (0..comp.len()).map(|q| chosen.iter().map(|&p| fr[q][p].clone()).collect()).collect();
        let rinv = left_inverse(&alg, comp, &verts, &s)?;
        sections.push((verts, s, rinv));
    }
    let comps: Vec<Vec<usize>> = sections.iter().map(|s| s.0.clone()).collect();
    let mut diffs = Vec::new();
    for k in 0..sections.len().saturating_sub(1) {
        let r = x.lo() + k as i64;
        let d = x.diff(r);
        let ds = compose(&alg, &sections[k].1, &d, comps[k].len());
        diffs.push(compose(&alg, &ds, &sections[k + 1].2, comps[k].len()));
    }
    ProjComplex::new(alg, x.lo(), comps, diffs)
}

/// Solves `R ∘ S = id` for a split monomorphism `S: ⊕P_w → ⊕P_c`.
fn left_inverse<F: Field>(
    alg: &BasedAlgebra,
    comp: &[usize],
    verts: &[usize],
    s: &MorphMatrix<F>,
) -> Result<MorphMatrix<F>> {
    let mut vars = Vec::new();
    for (l2, &w) in verts.iter().enumerate() {
        for (q, &c) in comp.iter().enumerate() {
            for b in alg.hom_basis(c, w) {
                vars.push((l2, q, b));
            }
        }
    }
    let mut asm = Assembler::<F>::new();
    // rows for the identity first so the right-hand side is well defined
    for (l, &w) in verts.iter().enumerate() {
        asm.row((0, l, l, alg.idempotent(w)));
    }
    for &(l2, q, b) in &vars {
        let mut col = Vec::new();
        for l in 0..verts.len() {
            for (t, c) in s[q][l].terms() {
                if let Some(z) = alg.mul_basis(*t, b) {
                    col.push((asm.row((0, l2, l, z)), c.clone()));
                }
            }
        }
        asm.cols.push(col);
    }
    let a = asm.matrix();
    let mut rhs = Matrix::zeros(a.rows(), 1);
    for (l, &w) in verts.iter().enumerate() {
        rhs[(asm.rows[&(0, l, l, alg.idempotent(w))], 0)] = F::one();
    }
    let sol = solve_linear(&a, &rhs)?.ok_or_else(|| Error::SplitFailure("summand is not split".into()))?;
    let mut out = vec![vec![Element::zero(); comp.len()]; verts.len()];
    let mut terms: HashMap<(usize, usize), Vec<(usize, F)>> = HashMap::new();
    for (i, &(l2, q, b)) in vars.iter().enumerate() {
        if !sol[(i, 0)].is_zero() {
            terms.entry((l2, q)).or_default().push((b, sol[(i, 0)].clone()));
        }
    }
    for ((l2, q), t) in terms {
        out[l2][q] = Element::from_terms(t);
    }
    Ok(out)
}

/// Lifts a homotopy idempotent to an idempotent chain map.
fn lift_idempotent<F: Field>(x: &ProjComplex<F>, f: GradedMap<F>) -> Result<GradedMap<F>> {
    let alg = x.algebra().clone();
    let three = F::from_i64(3);
    let minus_two = F::from_i64(-2);
    let mut e = f;
    for _ in 0..64 {
        let e2 = compose_maps(&alg, x, &e, &e);
        if e2 == e {
            return Ok(e);
        }
        let e3 = compose_maps(&alg, x, &e2, &e);
        e = e2.scale(&three).add(&e3.scale(&minus_two));
    }
    Err(Error::SplitFailure("idempotent lifting did not converge".into()))
}

/// Splits off one nontrivial summand when `End(X)` is not local.
fn split_once<F: Field>(x: &ProjComplex<F>) -> Result<Option<(ProjComplex<F>, ProjComplex<F>)>> {
    let end = end_algebra(x)?;
    let Some(e) = end.algebra.find_nontrivial_idempotent()? else {
        return Ok(None);
    };
    let mut f = GradedMap::identity(x).scale(&F::zero());
    for (c, rep) in e.iter().zip(&end.reps) {
        if !c.is_zero() {
            f = f.add(&rep.scale(c));
        }
    }
    let f = lift_idempotent(x, f)?;
    let g = GradedMap::identity(x).add(&f.scale(&-F::one()));
    let a = image_of_idempotent(x, &f)?.minimize()?;
    let b = image_of_idempotent(x, &g)?.minimize()?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::SplitFailure("idempotent split off a contractible summand".into()));
    }
    Ok(Some((a, b)))
}

/// Krull–Schmidt decomposition in the homotopy category. Summands are
/// minimal, indecomposable, and ordered by lowest degree then shape.
pub fn decompose<F: Field>(x: &ProjComplex<F>) -> Result<Vec<ProjComplex<F>>> {
    if !x.algebra().is_basic() {
        return Err(Error::Unsupported("decomposition over a non-basic algebra".into()));
    }
    let x = x.minimize()?;
    if x.is_zero() {
        return Ok(Vec::new());
    }
    let mut stack = vec![x];
    let mut out = Vec::new();
    while let Some(y) = stack.pop() {
        match split_once(&y)? {
            None => out.push(y),
            Some((a, b)) => {
                stack.push(b);
                stack.push(a);
            }
        }
    }
    out.sort_by_key(|c| (c.lo(), c.shape()));
    Ok(out)
}

/// Whether `End` in the homotopy category is local.
pub fn is_indecomposable<F: Field>(x: &ProjComplex<F>) -> Result<bool> {
    let x = x.minimize()?;
    if x.is_zero() {
        return Ok(false);
    }
    end_algebra(&x)?.algebra.is_local()
}

const ISO_TRIALS: usize = 8;

/// Homotopy equivalence test: random chain maps first, then an exact
/// comparison of indecomposable summands.
pub fn is_homotopy_iso<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>, seed: u64) -> Result<bool> {
    let (x, y) = (x.minimize()?, y.minimize()?);
    if x.shape() != y.shape() {
        return Ok(false);
    }
    if x.is_zero() {
        return Ok(true);
    }
    let (xa, ya) = align(&x, &y);
    let maps = chain_maps(&xa, &ya);
    if maps.is_empty() {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ISO_TRIALS {
        let mut f = maps[0].scale(&F::zero());
        for m in &maps {
            f = f.add(&m.scale(&F::from_i64(rng.gen_range(-64..=64))));
        }
        if top_invertible(&xa, &ya, &f) {
            return Ok(true);
        }
    }
    let (dx, dy) = (decompose(&x)?, decompose(&y)?);
    if dx.len() != dy.len() {
        return Ok(false);
    }
    let mut used = vec![false; dy.len()];
    'next: for a in &dx {
        for (k, b) in dy.iter().enumerate() {
            if !used[k] && indecomposables_iso(a, b) {
                used[k] = true;
                continue 'next;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Exact test for minimal indecomposables: some composite `Y → X → Y`
/// of basis chain maps is an automorphism.
fn indecomposables_iso<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> bool {
    if x.shape() != y.shape() {
        return false;
    }
    let (xa, ya) = align(x, y);
    let alg = xa.algebra().clone();
    let fs = chain_maps(&xa, &ya);
    let gs = chain_maps(&ya, &xa);
    for f in &fs {
        for g in &gs {
            if top_invertible(&xa, &xa, &compose_maps(&alg, &xa, f, g)) {
                return true;
            }
        }
    }
    false
}
