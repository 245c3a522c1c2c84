use std::collections::HashMap;

use super::based::{BasedAlgebra, Element};
use crate::exactla::{kernel_vectors, Echelon, Matrix};
use crate::scalar::Field;

/// Minimal projective resolution of a simple module, possibly truncated.
///
/// `terms[n]` lists the vertices of the projective summands of `P_n`;
/// `maps[n]` is the matrix of `P_{n+1} → P_n` with entry `(row k, col l)`
/// the element of `Hom(P_{terms[n+1][l]}, P_{terms[n][k]})`.
#[derive(Clone, Debug)]
pub struct Resolution<F> {
    pub vertex: usize,
    pub terms: Vec<Vec<usize>>,
    pub maps: Vec<Vec<Vec<Element<F>>>>,
    pub terminated: bool,
}

impl<F> Resolution<F> {
    /// Index of the last nonzero term.
    pub fn length(&self) -> usize {
        self.terms.iter().rposition(|t| !t.is_empty()).unwrap_or(0)
    }
}

/// Coordinates of `⊕_k A e_{comps[k]}`: one per (summand, basis element).
struct Coords {
    index: HashMap<(usize, usize), usize>,
    entries: Vec<(usize, usize)>,
}

impl Coords {
    fn new(alg: &BasedAlgebra, comps: &[usize]) -> Self {
        let mut entries = Vec::new();
        for (k, &v) in comps.iter().enumerate() {
            for b in alg.projective_basis(v) {
                entries.push((k, b));
            }
        }
        let index = entries.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Coords { index, entries }
    }

    fn len(&self) -> usize {
        self.entries.len()
    }

    /// Left multiplication by a basis element.
    fn left_mul<F: Field>(&self, alg: &BasedAlgebra, a: usize, v: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.len()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (k, b) = self.entries[i];
            if let Some(p) = alg.mul_basis(a, b) {
                let j = self.index[&(k, p)];
                out[j] = out[j].clone() + c.clone();
            }
        }
        out
    }
}

/// Resolves the simple module at vertex `v` up to `max_len` syzygies.
pub fn simple_resolution<F: Field>(alg: &BasedAlgebra, v: usize, max_len: usize) -> Resolution<F> {
    let reps: Vec<usize> = {
        let mut seen = Vec::new();
        let mut reps = Vec::new();
        for (w, x) in alg.vertices().iter().enumerate() {
            if !seen.contains(&x.iso_class) {
                seen.push(x.iso_class);
                reps.push(w);
            }
        }
        reps
    };
    let radical = alg.radical_basis();
    let mut terms = vec![vec![v]];
    let mut maps = Vec::new();
    let mut coords = Coords::new(alg, &terms[0]);
    // the first syzygy is the radical of P_v
    let mut kernel: Vec<Vec<F>> = (0..coords.len())
        .filter(|&i| alg.basis_elem(coords.entries[i].1).radical)
        .map(|i| {
            let mut e = vec![F::zero(); coords.len()];
            e[i] = F::one();
            e
        })
        .collect();
    loop {
        if kernel.is_empty() {
            return Resolution { vertex: v, terms, maps, terminated: true };
        }
        if terms.len() > max_len {
            return Resolution { vertex: v, terms, maps, terminated: false };
        }
        let mut rad_k = Echelon::new(coords.len());
        for k in &kernel {
            for &r in &radical {
                rad_k.insert(&coords.left_mul(alg, r, k));
            }
        }
        let mut gens: Vec<(usize, Vec<F>)> = Vec::new();
        for &w in &reps {
            let e = alg.idempotent(w);
            let mut span = Echelon::new(coords.len());
            for x in rad_k.basis() {
                span.insert(&coords.left_mul(alg, e, x));
            }
            for k in &kernel {
                let ek = coords.left_mul(alg, e, k);
                if span.insert(&ek) {
                    gens.push((w, ek));
                }
            }
        }
        let next: Vec<usize> = gens.iter().map(|g| g.0).collect();
        let next_coords = Coords::new(alg, &next);
        // map P_next → P_current sending e_w to the generator
        let mut cols = Vec::with_capacity(next_coords.len());
        for &(l, b) in &next_coords.entries {
            cols.push(coords.left_mul(alg, b, &gens[l].1));
        }
        let m = Matrix::from_columns(coords.len(), &cols);
        let mut entries = vec![vec![Element::zero(); next.len()]; terms.last().unwrap().len()];
        for (l, (_, g)) in gens.iter().enumerate() {
            let mut per: Vec<Vec<(usize, F)>> = vec![Vec::new(); entries.len()];
            for (i, c) in g.iter().enumerate() {
                if !c.is_zero() {
                    let (k, b) = coords.entries[i];
                    per[k].push((b, c.clone()));
                }
            }
            for (k, t) in per.into_iter().enumerate() {
                entries[k][l] = Element::from_terms(t);
            }
        }
        maps.push(entries);
        terms.push(next);
        kernel = kernel_vectors(&m);
        coords = next_coords;
    }
}

/// Resolutions of all simples (one per isomorphism class of vertices);
/// returns the maximal length if all terminate within `max_len`.
pub fn global_dimension_probe<F: Field>(
    alg: &BasedAlgebra,
    max_len: usize,
) -> (Option<usize>, Vec<Resolution<F>>) {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for (w, x) in alg.vertices().iter().enumerate() {
        if seen.contains(&x.iso_class) {
            continue;
        }
        seen.push(x.iso_class);
        out.push(simple_resolution::<F>(alg, w, max_len));
    }
    let gd = out.iter().all(|r| r.terminated).then(|| out.iter().map(|r| r.length()).max().unwrap_or(0));
    (gd, out)
}
