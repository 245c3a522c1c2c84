use super::matrix::{kernel_vectors, rank, solve_linear, Echelon, Matrix};
use super::poly;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Sparse product of two basis elements.
pub type Product<F> = Vec<(usize, F)>;

/// Finite-dimensional unital algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct StructureConstantAlgebra<F> {
    dim: usize,
    table: Vec<Vec<Product<F>>>,
    unit: Vec<F>,
}

impl<F: Field> StructureConstantAlgebra<F> {
    /// Builds the algebra, checking associativity on all basis triples and
    /// that `unit` is a two-sided identity.
    pub fn new(dim: usize, table: Vec<Vec<Product<F>>>, unit: Vec<F>) -> Result<Self> {
        let alg = Self::new_unchecked(dim, table, unit)?;
        alg.check_axioms()?;
        Ok(alg)
    }

    /// Builds the algebra checking only shapes.
    pub fn new_unchecked(dim: usize, table: Vec<Vec<Product<F>>>, unit: Vec<F>) -> Result<Self> {
        if table.len() != dim || table.iter().any(|r| r.len() != dim) || unit.len() != dim {
            return Err(Error::Dimension(format!("structure table is not {dim}x{dim}")));
        }
        if table.iter().flatten().flatten().any(|(k, _)| *k >= dim) {
            return Err(Error::Dimension("product refers to a basis index out of range".into()));
        }
        Ok(StructureConstantAlgebra { dim, table, unit })
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.dim;
        for x in 0..n {
            let bx = self.basis_vector(x);
            if self.mul(&self.unit, &bx) != bx || self.mul(&bx, &self.unit) != bx {
                return Err(Error::InvalidDatum(format!("unit does not fix basis element {x}")));
            }
            for y in 0..n {
                let xy = self.product_vector(x, y);
                for z in 0..n {
                    let left = self.mul_basis_right(&xy, z);
                    let yz = self.product_vector(y, z);
                    let right = self.mul_basis_left(x, &yz);
                    if left != right {
                        return Err(Error::InvalidDatum(format!(
                            "multiplication is not associative on ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[F] {
        &self.unit
    }

    pub fn table(&self) -> &[Vec<Product<F>>] {
        &self.table
    }

    pub fn basis_vector(&self, k: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim];
        v[k] = F::one();
        v
    }

    fn product_vector(&self, x: usize, y: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim];
        for (k, c) in &self.table[x][y] {
            v[*k] = v[*k].clone() + c.clone();
        }
        v
    }

    fn mul_basis_right(&self, a: &[F], z: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim];
        for (x, ax) in a.iter().enumerate() {
            if ax.is_zero() {
                continue;
            }
            for (k, c) in &self.table[x][z] {
                v[*k] = v[*k].clone() + ax.clone() * c.clone();
            }
        }
        v
    }

    fn mul_basis_left(&self, x: usize, a: &[F]) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim];
        for (y, ay) in a.iter().enumerate() {
            if ay.is_zero() {
                continue;
            }
            for (k, c) in &self.table[x][y] {
                v[*k] = v[*k].clone() + ay.clone() * c.clone();
            }
        }
        v
    }

    pub fn mul(&self, a: &[F], b: &[F]) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim];
        for (x, ax) in a.iter().enumerate() {
            if ax.is_zero() {
                continue;
            }
            for (y, by) in b.iter().enumerate() {
                if by.is_zero() {
                    continue;
                }
                let s = ax.clone() * by.clone();
                for (k, c) in &self.table[x][y] {
                    v[*k] = v[*k].clone() + s.clone() * c.clone();
                }
            }
        }
        v
    }

    /// Matrix of `x ↦ a·x` in the basis.
    pub fn left_mul_matrix(&self, a: &[F]) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim).map(|y| self.mul_basis_right(a, y)).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    pub fn is_unit(&self, a: &[F]) -> bool {
        rank(&self.left_mul_matrix(a)) == self.dim
    }

    pub fn is_idempotent(&self, a: &[F]) -> bool {
        self.mul(a, a) == a
    }

    /// Jacobson radical by the trace-form method.
    pub fn radical(&self) -> Result<Vec<Vec<F>>> {
        let p = F::characteristic();
        if p != 0 && p <= self.dim as u64 {
            return Err(Error::Characteristic(format!(
                "radical over F_{p} needs p > {} (the algebra dimension)",
                self.dim
            )));
        }
        let n = self.dim;
        // traces of left multiplication by basis elements
        let traces: Vec<F> = (0..n)
            .map(|k| {
                let mut t = F::zero();
                for y in 0..n {
                    for (j, c) in &self.table[k][y] {
                        if *j == y {
                            t = t + c.clone();
                        }
                    }
                }
                t
            })
            .collect();
        let mut gram = Matrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                let mut s = F::zero();
                for (k, c) in &self.table[x][y] {
                    s = s + c.clone() * traces[*k].clone();
                }
                gram[(x, y)] = s;
            }
        }
        Ok(kernel_vectors(&gram))
    }

    /// Quotient by a two-sided ideal spanned by `ideal`. Returns the quotient
    /// and the indices of the basis elements of `self` whose classes form its basis.
    pub fn quotient(&self, ideal: &[Vec<F>]) -> (Self, Vec<usize>) {
        let mut ech = Echelon::new(self.dim);
        for v in ideal {
            ech.insert(v);
        }
        let kept: Vec<usize> = (0..self.dim).filter(|k| !ech.pivots().contains(k)).collect();
        let project = |v: &[F]| -> Vec<F> {
            let r = ech.reduce(v);
            kept.iter().map(|&k| r[k].clone()).collect()
        };
        let table: Vec<Vec<Product<F>>> = kept
            .iter()
            .map(|&x| {
                kept.iter()
                    .map(|&y| {
                        project(&self.product_vector(x, y))
                            .into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let unit = project(&self.unit);
        let q = StructureConstantAlgebra { dim: kept.len(), table, unit };
        (q, kept)
    }

    /// True iff the algebra is local, i.e. the semisimple quotient is one-dimensional.
    pub fn is_local(&self) -> Result<bool> {
        let rad = self.radical()?;
        Ok(self.dim > 0 && self.dim - rad.len() == 1)
    }

    /// An idempotent other than 0 and 1, or `None` when the algebra is local.
    pub fn find_nontrivial_idempotent(&self) -> Result<Option<Vec<F>>> {
        if self.dim == 0 {
            return Ok(None);
        }
        let rad = self.radical()?;
        let (semi, kept) = self.quotient(&rad);
        if semi.dim == 1 {
            return Ok(None);
        }
        let s = semi.find_non_unit().ok_or_else(|| {
            Error::SplitFailure(format!(
                "no zero divisor found in a semisimple quotient of dimension {}",
                semi.dim
            ))
        })?;
        let e_bar = semi.left_identity_of_right_ideal(&s)?;
        // lift along the radical
        let mut e = vec![F::zero(); self.dim];
        for (c, &k) in e_bar.iter().zip(&kept) {
            e[k] = c.clone();
        }
        for _ in 0..64 {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return Ok(Some(e));
            }
            let e3 = self.mul(&e2, &e);
            e = e2
                .iter()
                .zip(&e3)
                .map(|(a, b)| F::from_i64(3) * a.clone() - F::from_i64(2) * b.clone())
                .collect();
        }
        Err(Error::SplitFailure("idempotent lifting did not converge".into()))
    }

    /// A nonzero non-unit of a semisimple algebra, searched over basis
    /// elements, their eigenvalue shifts, and small combinations.
    fn find_non_unit(&self) -> Option<Vec<F>> {
        let n = self.dim;
        let mut candidates: Vec<Vec<F>> = (0..n).map(|k| self.basis_vector(k)).collect();
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    let mut v = self.basis_vector(x);
                    v[y] = F::from_i64(2);
                    candidates.push(v);
                }
            }
        }
        for c in &candidates {
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            if !self.is_unit(c) {
                return Some(c.clone());
            }
            let minpoly = poly::minimal_polynomial(self.unit.clone(), |v| self.mul(c, v));
            if minpoly.len() <= 2 {
                continue;
            }
            if let Some(lambda) = poly::roots(&minpoly).into_iter().next() {
                let shifted: Vec<F> =
                    c.iter().zip(&self.unit).map(|(a, u)| a.clone() - lambda.clone() * u.clone()).collect();
                return Some(shifted);
            }
        }
        None
    }

    /// Idempotent `e` with `sA = eA`, valid in a semisimple algebra.
    fn left_identity_of_right_ideal(&self, s: &[F]) -> Result<Vec<F>> {
        let n = self.dim;
        let mut ech = Echelon::new(n);
        for y in 0..n {
            ech.insert(&self.mul_basis_right(s, y));
        }
        let gens: Vec<Vec<F>> = ech.basis().to_vec();
        let k = gens.len();
        // unknown coefficients c with e = Σ c_a g_a and e·g_b = g_b for all b
        let mut a = Matrix::zeros(n * k, k);
        let mut rhs = Matrix::zeros(n * k, 1);
        for (b, gb) in gens.iter().enumerate() {
            for (col, ga) in gens.iter().enumerate() {
                let prod = self.mul(ga, gb);
                for (row, v) in prod.into_iter().enumerate() {
                    a[(b * n + row, col)] = v;
                }
            }
            for (row, v) in gb.iter().enumerate() {
                rhs[(b * n + row, 0)] = v.clone();
            }
        }
        let c = solve_linear(&a, &rhs)?
            .ok_or_else(|| Error::SplitFailure("right ideal has no left identity".into()))?;
        let mut e = vec![F::zero(); n];
        for (col, g) in gens.iter().enumerate() {
            let ca = c[(col, 0)].clone();
            if ca.is_zero() {
                continue;
            }
            for (x, gx) in e.iter_mut().zip(g) {
                *x = x.clone() + ca.clone() * gx.clone();
            }
        }
        Ok(e)
    }

    /// Matrix algebra M_n as structure constants on matrix units (row-major).
    pub fn full_matrix_algebra(n: usize) -> Self {
        let idx = |i: usize, j: usize| i * n + j;
        let mut table = vec![vec![Vec::new(); n * n]; n * n];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[idx(i, j)][idx(j, l)] = vec![(idx(i, l), F::one())];
                }
            }
        }
        let mut unit = vec![F::zero(); n * n];
        for i in 0..n {
            unit[idx(i, i)] = F::one();
        }
        StructureConstantAlgebra { dim: n * n, table, unit }
    }
}
