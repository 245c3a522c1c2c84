use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactla::{Matrix, StructureConstantAlgebra};
use crate::scalar::Field;

/// A matrix unit: (block, row slot, column slot), all 0-based.
pub type Unit = (usize, usize, usize);

/// One basis element: a set of matrix units with coefficient 1 each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    pub units: Vec<Unit>,
    /// Vertex `v` with `e_v · b = b`.
    pub left: usize,
    /// Vertex `w` with `b · e_w = b`.
    pub right: usize,
    pub radical: bool,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexInfo {
    pub label: String,
    /// Basis index of the primitive idempotent.
    pub idempotent: usize,
    /// Vertices with isomorphic projectives share a class.
    pub iso_class: usize,
}

/// Input to [`BasedAlgebra::from_units`].
#[derive(Clone, Debug)]
pub struct BasisSpec {
    pub units: Vec<Unit>,
    pub radical: bool,
    pub label: String,
}

/// A finite-dimensional algebra whose basis elements are disjoint sums of
/// matrix units, so that every product of basis elements is a basis element or 0.
#[derive(Clone, Debug)]
pub struct BasedAlgebra {
    name: String,
    basis: Vec<BasisElem>,
    table: Vec<Vec<Option<usize>>>,
    vertices: Vec<VertexInfo>,
    /// Names of the slots of each block, used for path labels.
    slot_names: Vec<Vec<String>>,
    unit_index: HashMap<Unit, usize>,
}

impl BasedAlgebra {
    /// Builds the algebra from unit sets. `idempotents` lists, in vertex order,
    /// the basis indices of the primitive idempotents together with labels.
    pub fn from_units(
        name: &str,
        slot_names: Vec<Vec<String>>,
        specs: Vec<BasisSpec>,
        idempotents: Vec<(usize, String)>,
    ) -> Result<Self> {
        let mut unit_index = HashMap::new();
        let mut by_set: HashMap<Vec<Unit>, usize> = HashMap::new();
        for (k, s) in specs.iter().enumerate() {
            let mut u = s.units.clone();
            u.sort();
            for &x in &u {
                if unit_index.insert(x, k).is_some() {
                    return Err(Error::InvalidDatum(format!("unit {x:?} used twice")));
                }
            }
            by_set.insert(u, k);
        }
        let n = specs.len();
        let mut table = vec![vec![None; n]; n];
        for x in 0..n {
            for y in 0..n {
                let mut prod: Vec<Unit> = Vec::new();
                for &(c, r, t) in &specs[x].units {
                    for &(c2, t2, s) in &specs[y].units {
                        if c == c2 && t == t2 {
                            prod.push((c, r, s));
                        }
                    }
                }
                if prod.is_empty() {
                    continue;
                }
                prod.sort();
                match by_set.get(&prod) {
                    Some(&k) => table[x][y] = Some(k),
                    None => {
                        return Err(Error::InvalidDatum(format!(
                            "product of {} and {} leaves the basis",
                            specs[x].label, specs[y].label
                        )))
                    }
                }
            }
        }
        let idem: Vec<usize> = idempotents.iter().map(|(k, _)| *k).collect();
        let mut basis = Vec::with_capacity(n);
        for (k, s) in specs.into_iter().enumerate() {
            let left = idem.iter().position(|&e| table[e][k] == Some(k));
            let right = idem.iter().position(|&e| table[k][e] == Some(k));
            let (Some(left), Some(right)) = (left, right) else {
                return Err(Error::InvalidDatum(format!("{} has no vertex", s.label)));
            };
            let mut units = s.units;
            units.sort();
            basis.push(BasisElem { units, left, right, radical: s.radical, label: s.label });
        }
        // isomorphic projectives: joined by non-radical elements
        let nv = idem.len();
        let mut class: Vec<usize> = (0..nv).collect();
        fn find(c: &mut Vec<usize>, x: usize) -> usize {
            if c[x] != x {
                let r = find(c, c[x]);
                c[x] = r;
            }
            c[x]
        }
        for b in &basis {
            if !b.radical && b.left != b.right {
                let (a, c) = (find(&mut class, b.left), find(&mut class, b.right));
                class[a.max(c)] = a.min(c);
            }
        }
        let roots: Vec<usize> = (0..nv).map(|v| find(&mut class, v)).collect();
        let mut reps: Vec<usize> = roots.clone();
        reps.sort();
        reps.dedup();
        let vertices = idempotents
            .into_iter()
            .enumerate()
            .map(|(v, (k, label))| VertexInfo {
                label,
                idempotent: k,
                iso_class: reps.iter().position(|&r| r == roots[v]).unwrap(),
            })
            .collect();
        Ok(BasedAlgebra { name: name.to_string(), basis, table, vertices, slot_names, unit_index })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn basis_elem(&self, k: usize) -> &BasisElem {
        &self.basis[k]
    }

    pub fn vertices(&self) -> &[VertexInfo] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v].label
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.vertices[v].idempotent
    }

    pub fn is_basic(&self) -> bool {
        self.vertices.iter().enumerate().all(|(v, x)| x.iso_class == v)
    }

    pub fn slot_names(&self) -> &[Vec<String>] {
        &self.slot_names
    }

    /// Basis element containing a matrix unit.
    pub fn basis_of_unit(&self, u: Unit) -> Option<usize> {
        self.unit_index.get(&u).copied()
    }

    #[inline]
    pub fn mul_basis(&self, x: usize, y: usize) -> Option<usize> {
        self.table[x][y]
    }

    pub fn radical_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].radical).collect()
    }

    /// Basis of `e_γ A e_δ`, i.e. of `Hom(P_γ, P_δ)` acting by right multiplication.
    pub fn hom_basis(&self, from: usize, to: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].left == from && self.basis[k].right == to).collect()
    }

    /// Basis of the projective `P_γ = A e_γ`.
    pub fn projective_basis(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].right == v).collect()
    }

    pub fn one<F: Field>(&self) -> Element<F> {
        Element::from_terms(self.vertices.iter().map(|v| (v.idempotent, F::one())).collect())
    }

    pub fn mul<F: Field>(&self, a: &Element<F>, b: &Element<F>) -> Element<F> {
        let mut acc: Vec<(usize, F)> = Vec::new();
        for (x, cx) in &a.terms {
            for (y, cy) in &b.terms {
                if let Some(k) = self.table[*x][*y] {
                    acc.push((k, cx.clone() * cy.clone()));
                }
            }
        }
        Element::from_terms(acc)
    }

    /// Structure constants over a field.
    pub fn to_sca<F: Field>(&self) -> StructureConstantAlgebra<F> {
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|p| p.map(|k| vec![(k, F::one())]).unwrap_or_default()).collect())
            .collect();
        let mut unit = vec![F::zero(); self.dim()];
        for v in &self.vertices {
            unit[v.idempotent] = F::one();
        }
        StructureConstantAlgebra::new_unchecked(self.dim(), table, unit).expect("table is square")
    }

    /// Checks associativity on all basis triples and that the vertex
    /// idempotents sum to a two-sided unit.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.dim();
        for x in 0..n {
            for y in 0..n {
                let xy = self.table[x][y];
                for z in 0..n {
                    let l = xy.and_then(|k| self.table[k][z]);
                    let r = self.table[y][z].and_then(|k| self.table[x][k]);
                    if l != r {
                        return Err(Error::InvalidDatum(format!(
                            "{} is not associative on basis elements {x},{y},{z}",
                            self.name
                        )));
                    }
                }
            }
        }
        for k in 0..n {
            let b = &self.basis[k];
            let lefts = self.vertices.iter().filter(|v| self.table[v.idempotent][k].is_some()).count();
            let rights = self.vertices.iter().filter(|v| self.table[k][v.idempotent].is_some()).count();
            if lefts != 1 || rights != 1 {
                return Err(Error::InvalidDatum(format!("unit does not fix {}", b.label)));
            }
        }
        Ok(())
    }

    /// Elements that are radical but not products of two radical elements,
    /// drawn as quiver arrows from the right vertex to the left vertex.
    pub fn arrows(&self) -> Vec<usize> {
        let rad = self.radical_basis();
        let mut in_square = vec![false; self.dim()];
        for &x in &rad {
            for &y in &rad {
                if let Some(k) = self.table[x][y] {
                    in_square[k] = true;
                }
            }
        }
        rad.into_iter().filter(|&k| !in_square[k]).collect()
    }

    /// Quiver in DOT syntax.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph quiver {{");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{}\";", v.label);
        }
        for k in self.arrows() {
            let b = &self.basis[k];
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertices[b.right].label, self.vertices[b.left].label, b.label
            );
        }
        s.push_str("}\n");
        s
    }

    /// Multiplication by a fixed element on the right, as a matrix from the
    /// basis of `P_from` to the basis of `P_to`. Columns follow
    /// `projective_basis(from)`, rows follow `projective_basis(to)`.
    pub fn right_mul_matrix<F: Field>(&self, from: usize, to: usize, a: &Element<F>) -> Matrix<F> {
        let src = self.projective_basis(from);
        let tgt = self.projective_basis(to);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut m: Matrix<F> = Matrix::zeros(tgt.len(), src.len());
        for (j, &x) in src.iter().enumerate() {
            for (y, c) in a.terms() {
                if let Some(k) = self.table[x][*y] {
                    let i = pos[&k];
                    m[(i, j)] = m[(i, j)].clone() + c.clone();
                }
            }
        }
        m
    }
}

/// Sparse algebra element: sorted basis indices with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element<F> {
    terms: Vec<(usize, F)>,
}

impl<F: Field> Element<F> {
    pub fn zero() -> Self {
        Element { terms: Vec::new() }
    }

    pub fn basis(k: usize) -> Self {
        Element { terms: vec![(k, F::one())] }
    }

    pub fn scaled_basis(k: usize, c: F) -> Self {
        Self::from_terms(vec![(k, c)])
    }

    /// Normalizes arbitrary terms: merges duplicates and drops zeros.
    pub fn from_terms(mut terms: Vec<(usize, F)>) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(usize, F)> = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            match out.last_mut() {
                Some((j, d)) if *j == k => *d = d.clone() + c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Element { terms: out }
    }

    pub fn terms(&self) -> &[(usize, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: usize) -> F {
        self.terms.iter().find(|t| t.0 == k).map(|t| t.1.clone()).unwrap_or_else(F::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Self::from_terms(t)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Element { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Element { terms: self.terms.iter().map(|(k, d)| (*k, d.clone() * c.clone())).collect() }
    }

    /// True when every term is a radical basis element.
    pub fn in_radical(&self, alg: &BasedAlgebra) -> bool {
        self.terms.iter().all(|(k, _)| alg.basis[*k].radical)
    }

    /// The non-radical part.
    pub fn top(&self, alg: &BasedAlgebra) -> Self {
        Element { terms: self.terms.iter().filter(|(k, _)| !alg.basis[*k].radical).cloned().collect() }
    }

    pub fn display(&self, alg: &BasedAlgebra) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(k, c)| {
                let l = &alg.basis[*k].label;
                if c.is_one() {
                    l.clone()
                } else {
                    format!("{c}*{l}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
