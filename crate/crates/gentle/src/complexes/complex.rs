use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{BasedAlgebra, Element};
use crate::error::{Error, Result};
use crate::exactla::{rank, Matrix};
use crate::scalar::Field;

/// Matrix of morphisms between sums of indecomposable projectives.
/// Entry `[q][p]` maps summand `p` of the source to summand `q` of the target.
pub type MorphMatrix<F> = Vec<Vec<Element<F>>>;

/// `g ∘ f` for composable morphism matrices.
pub fn compose<F: Field>(
    alg: &BasedAlgebra,
    f: &MorphMatrix<F>,
    g: &MorphMatrix<F>,
    src_len: usize,
) -> MorphMatrix<F> {
    let rows = g.len();
    let mid = f.len();
    let mut out = vec![vec![Element::zero(); src_len]; rows];
    for q in 0..rows {
        for p in 0..src_len {
            let mut acc = Element::zero();
            for k in 0..mid {
                if f[k][p].is_zero() || g[q][k].is_zero() {
                    continue;
                }
                acc = acc.add(&alg.mul(&f[k][p], &g[q][k]));
            }
            out[q][p] = acc;
        }
    }
    out
}

/// Bounded complex of finitely generated projectives. Summands are named by
/// vertex; `diffs[k]` is the differential from degree `lo + k` to `lo + k + 1`.
#[derive(Clone, Debug)]
pub struct ProjComplex<F> {
    alg: Arc<BasedAlgebra>,
    lo: i64,
    comps: Vec<Vec<usize>>,
    diffs: Vec<MorphMatrix<F>>,
}

impl<F: Field> PartialEq for ProjComplex<F> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.trimmed(), other.trimmed());
        same_algebra(&a.alg, &b.alg) && a.lo == b.lo && a.comps == b.comps && a.diffs == b.diffs
            || (a.is_zero() && b.is_zero())
    }
}

fn same_algebra(a: &Arc<BasedAlgebra>, b: &Arc<BasedAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || (a.name() == b.name() && a.basis() == b.basis())
}

/// Result of [`ProjComplex::verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Verification {
    pub is_complex: bool,
    pub is_minimal: bool,
}

impl<F: Field> ProjComplex<F> {
    /// Checks shapes and that each entry lies in the right Hom-space.
    pub fn new(
        alg: Arc<BasedAlgebra>,
        lo: i64,
        comps: Vec<Vec<usize>>,
        diffs: Vec<MorphMatrix<F>>,
    ) -> Result<Self> {
        if diffs.len() != comps.len().saturating_sub(1) {
            return Err(Error::Dimension(format!(
                "{} components need {} differentials, got {}",
                comps.len(),
                comps.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for c in comps.iter().flatten() {
            if *c >= alg.vertex_count() {
                return Err(Error::Dimension(format!("vertex index {c} out of range")));
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            let (src, tgt) = (&comps[k], &comps[k + 1]);
            if d.len() != tgt.len() || d.iter().any(|row| row.len() != src.len()) {
                return Err(Error::Dimension(format!(
                    "differential in degree {} is not {}x{}",
                    lo + k as i64,
                    tgt.len(),
                    src.len()
                )));
            }
            for (q, row) in d.iter().enumerate() {
                for (p, x) in row.iter().enumerate() {
                    for (b, _) in x.terms() {
                        let be = alg.basis_elem(*b);
                        if be.left != src[p] || be.right != tgt[q] {
                            return Err(Error::Dimension(format!(
                                "entry ({q},{p}) of the differential in degree {} is not a map {} -> {}",
                                lo + k as i64,
                                alg.vertex_label(src[p]),
                                alg.vertex_label(tgt[q])
                            )));
                        }
                    }
                }
            }
        }
        Ok(ProjComplex { alg, lo, comps, diffs })
    }

    pub fn zero(alg: Arc<BasedAlgebra>) -> Self {
        ProjComplex { alg, lo: 0, comps: Vec::new(), diffs: Vec::new() }
    }

    /// `P_v` placed in one degree.
    pub fn stalk(alg: Arc<BasedAlgebra>, v: usize, degree: i64) -> Self {
        ProjComplex { alg, lo: degree, comps: vec![vec![v]], diffs: Vec::new() }
    }

    pub fn algebra(&self) -> &Arc<BasedAlgebra> {
        &self.alg
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// One past the top degree.
    pub fn hi(&self) -> i64 {
        self.lo + self.comps.len() as i64
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..self.hi()
    }

    pub fn comp(&self, r: i64) -> &[usize] {
        if r < self.lo || r >= self.hi() {
            &[]
        } else {
            &self.comps[(r - self.lo) as usize]
        }
    }

    /// Differential leaving degree `r`, or an empty matrix of the right shape.
    pub fn diff(&self, r: i64) -> MorphMatrix<F> {
        if r >= self.lo && r + 1 < self.hi() {
            self.diffs[(r - self.lo) as usize].clone()
        } else {
            vec![vec![Element::zero(); self.comp(r).len()]; self.comp(r + 1).len()]
        }
    }

    pub fn diff_ref(&self, r: i64) -> Option<&MorphMatrix<F>> {
        if r >= self.lo && r + 1 < self.hi() {
            Some(&self.diffs[(r - self.lo) as usize])
        } else {
            None
        }
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.comps
    }

    pub fn differentials(&self) -> &[MorphMatrix<F>] {
        &self.diffs
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_empty())
    }

    pub fn rank(&self) -> usize {
        self.comps.iter().map(|c| c.len()).sum()
    }

    /// Drops empty components at both ends.
    pub fn trimmed(&self) -> Self {
        let first = self.comps.iter().position(|c| !c.is_empty());
        let Some(first) = first else {
            return Self::zero(self.alg.clone());
        };
        let last = self.comps.iter().rposition(|c| !c.is_empty()).unwrap();
        ProjComplex {
            alg: self.alg.clone(),
            lo: self.lo + first as i64,
            comps: self.comps[first..=last].to_vec(),
            diffs: self.diffs[first..last].to_vec(),
        }
    }

    /// Extends the window to cover `[lo, hi)` with zero components.
    pub fn padded(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let comps: Vec<Vec<usize>> = (lo..hi).map(|r| self.comp(r).to_vec()).collect();
        let diffs = (lo..hi - 1).map(|r| self.diff(r)).collect();
        ProjComplex { alg: self.alg.clone(), lo, comps, diffs }
    }

    /// `(X[n])^r = X^{r+n}` with the differential multiplied by `(-1)^n`.
    pub fn shift(&self, n: i64) -> Self {
        let sign = if n.rem_euclid(2) == 1 { -F::one() } else { F::one() };
        ProjComplex {
            alg: self.alg.clone(),
            lo: self.lo - n,
            comps: self.comps.clone(),
            diffs: self.diffs.iter().map(|d| scale_matrix(d, &sign)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.trimmed();
        }
        if other.is_zero() {
            return self.trimmed();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let comps: Vec<Vec<usize>> =
            (lo..hi).map(|r| self.comp(r).iter().chain(other.comp(r)).copied().collect()).collect();
        let diffs = (lo..hi - 1)
            .map(|r| {
                let (a, b) = (self.diff(r), other.diff(r));
                let (ac, bc) = (self.comp(r).len(), other.comp(r).len());
                let mut m = Vec::new();
                for row in a {
                    let mut row = row;
                    row.extend(std::iter::repeat_with(Element::zero).take(bc));
                    m.push(row);
                }
                for row in b {
                    let mut r2: Vec<Element<F>> = std::iter::repeat_with(Element::zero).take(ac).collect();
                    r2.extend(row);
                    m.push(r2);
                }
                m
            })
            .collect();
        ProjComplex { alg: self.alg.clone(), lo, comps, diffs }
    }

    /// `d² = 0` and radical entries.
    pub fn verify(&self) -> Verification {
        let mut is_complex = true;
        for k in 0..self.diffs.len().saturating_sub(1) {
            let dd = compose(&self.alg, &self.diffs[k], &self.diffs[k + 1], self.comps[k].len());
            if dd.iter().flatten().any(|x| !x.is_zero()) {
                is_complex = false;
            }
        }
        let is_minimal = self.diffs.iter().flatten().flatten().all(|x| x.in_radical(&self.alg));
        Verification { is_complex, is_minimal }
    }

    /// The scalar matrix of `d^r` on the `k`-basis of the projectives,
    /// restricted to elements with left vertex `v` when given.
    pub fn expanded_diff(&self, r: i64, v: Option<usize>) -> Matrix<F> {
        let src = self.expanded_basis(r, v);
        let tgt = self.expanded_basis(r + 1, v);
        let index: std::collections::HashMap<(usize, usize), usize> =
            tgt.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut m: Matrix<F> = Matrix::zeros(tgt.len(), src.len());
        if let Some(d) = self.diff_ref(r) {
            for (j, &(p, b)) in src.iter().enumerate() {
                for (q, row) in d.iter().enumerate() {
                    for (y, c) in row[p].terms() {
                        if let Some(k) = self.alg.mul_basis(b, *y) {
                            let i = index[&(q, k)];
                            m[(i, j)] = m[(i, j)].clone() + c.clone();
                        }
                    }
                }
            }
        }
        m
    }

    /// Pairs (summand, basis element) spanning degree `r` over the field.
    pub fn expanded_basis(&self, r: i64, v: Option<usize>) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (p, &w) in self.comp(r).iter().enumerate() {
            for b in self.alg.projective_basis(w) {
                if v.is_none_or(|v| self.alg.basis_elem(b).left == v) {
                    out.push((p, b));
                }
            }
        }
        out
    }

    /// For each degree, the dimension of `e_γ H^r(X)` for every vertex γ.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out = BTreeMap::new();
        for r in self.degrees() {
            let dims = (0..self.alg.vertex_count())
                .map(|v| {
                    let n = self.expanded_basis(r, Some(v)).len();
                    let out_rank = rank(&self.expanded_diff(r, Some(v)));
                    let in_rank = rank(&self.expanded_diff(r - 1, Some(v)));
                    n - out_rank - in_rank
                })
                .collect();
            out.insert(r, dims);
        }
        out
    }

    /// Total cohomology dimension per degree.
    pub fn cohomology_totals(&self) -> BTreeMap<i64, usize> {
        self.cohomology_dims().into_iter().map(|(r, v)| (r, v.iter().sum())).collect()
    }

    /// Sorted vertex multiset per degree, ignoring empty degrees.
    pub fn shape(&self) -> Vec<(i64, Vec<usize>)> {
        self.degrees()
            .filter(|&r| !self.comp(r).is_empty())
            .map(|r| {
                let mut c = self.comp(r).to_vec();
                c.sort();
                (r, c)
            })
            .collect()
    }

    /// Removes contractible summands by Gaussian elimination on
    /// differential entries with invertible top.
    pub fn minimize(&self) -> Result<Self> {
        let mut x = self.clone();
        'outer: loop {
            for k in 0..x.diffs.len() {
                for q in 0..x.diffs[k].len() {
                    for p in 0..x.comps[k].len() {
                        let e = &x.diffs[k][q][p];
                        let top = e.top(&x.alg);
                        if top.is_zero() {
                            continue;
                        }
                        let (sv, tv) = (x.comps[k][p], x.comps[k + 1][q]);
                        if sv != tv {
                            return Err(Error::Unsupported(
                                "minimization across isomorphic distinct vertices".into(),
                            ));
                        }
                        let inv = local_inverse(&x.alg, sv, e)?;
                        x = x.eliminate(k, q, p, &inv);
                        continue 'outer;
                    }
                }
            }
            return Ok(x.trimmed());
        }
    }

    fn eliminate(&self, k: usize, q: usize, p: usize, inv: &Element<F>) -> Self {
        let alg = &self.alg;
        let d = &self.diffs[k];
        let mut comps = self.comps.clone();
        comps[k].remove(p);
        comps[k + 1].remove(q);
        let mut diffs = self.diffs.clone();
        // middle differential: δ − γ x⁻¹ β
        let mut mid = Vec::new();
        for (q2, row) in d.iter().enumerate() {
            if q2 == q {
                continue;
            }
            let mut new_row = Vec::new();
            for (p2, entry) in row.iter().enumerate() {
                if p2 == p {
                    continue;
                }
                let corr = alg.mul(&alg.mul(&d[q][p2], inv), &d[q2][p]);
                new_row.push(entry.sub(&corr));
            }
            mid.push(new_row);
        }
        diffs[k] = mid;
        if k > 0 {
            diffs[k - 1].remove(p);
        }
        if k + 1 < diffs.len() {
            for row in diffs[k + 1].iter_mut() {
                row.remove(q);
            }
        }
        ProjComplex { alg: self.alg.clone(), lo: self.lo, comps, diffs }
    }

    /// The complex with each differential replaced by `f(r, d^r)`.
    pub fn map_diffs(&self, mut f: impl FnMut(i64, &MorphMatrix<F>) -> MorphMatrix<F>) -> Self {
        let diffs = self.diffs.iter().enumerate().map(|(k, d)| f(self.lo + k as i64, d)).collect();
        ProjComplex { alg: self.alg.clone(), lo: self.lo, comps: self.comps.clone(), diffs }
    }
}

pub fn scale_matrix<F: Field>(m: &MorphMatrix<F>, c: &F) -> MorphMatrix<F> {
    m.iter().map(|row| row.iter().map(|x| x.scale(c)).collect()).collect()
}

/// Inverse of `x ∈ e_v A e_v` with invertible top.
pub fn local_inverse<F: Field>(alg: &BasedAlgebra, v: usize, x: &Element<F>) -> Result<Element<F>> {
    let e = alg.idempotent(v);
    let c = x.coeff(e);
    let Some(ci) = c.try_inv() else {
        return Err(Error::SplitFailure("element is not invertible".into()));
    };
    // x = c(e + n) with n radical, so x⁻¹ = c⁻¹ Σ (−n)^i
    let n = x.scale(&ci).sub(&Element::basis(e));
    let minus_n = n.neg();
    let mut term = Element::basis(e);
    let mut sum = Element::basis(e);
    for _ in 0..=alg.dim() {
        term = alg.mul(&term, &minus_n);
        if term.is_zero() {
            return Ok(sum.scale(&ci));
        }
        sum = sum.add(&term);
    }
    Err(Error::SplitFailure("radical part is not nilpotent".into()))
}
