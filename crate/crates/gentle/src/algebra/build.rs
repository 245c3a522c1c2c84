use std::collections::BTreeSet;

use serde::Serialize;

use super::based::{BasedAlgebra, BasisSpec, Unit};
use crate::datum::{BarElem, Datum, Sign};
use crate::error::{Error, Result};
use crate::exactla::StructureConstantAlgebra;
use crate::scalar::Field;

/// Slots of one chain: one per position, two for a self-paired position.
fn chain_slots(d: &Datum, i: usize) -> Vec<BarElem> {
    d.omega_bar().into_iter().filter(|b| b.elem.0 == i).collect()
}

fn slot_name(b: &BarElem) -> String {
    match b.sign {
        None => b.elem.1.to_string(),
        Some(s) => format!("{}{}", b.elem.1, s.symbol()),
    }
}

fn slot_index(d: &Datum, b: BarElem) -> usize {
    chain_slots(d, b.elem.0).iter().position(|x| *x == b).expect("slot of the chain")
}

/// Label of a single matrix unit `(i, a, b)`.
fn unit_label(slots: &[BarElem], i: usize, r: usize, s: usize) -> String {
    format!("({},{},{})", i, slot_name(&slots[r]), slot_name(&slots[s]))
}

/// Units of the normalization: lower triangular in positions, full 2×2
/// blocks at doubled positions.
fn h_units(d: &Datum) -> Vec<(Unit, bool, String)> {
    let mut out = Vec::new();
    for i in 1..=d.t() {
        let slots = chain_slots(d, i);
        for r in 0..slots.len() {
            for s in 0..slots.len() {
                let (pr, ps) = (slots[r].elem.1, slots[s].elem.1);
                if pr >= ps {
                    out.push(((i - 1, r, s), pr > ps, unit_label(&slots, i, r, s)));
                }
            }
        }
    }
    out
}

fn slot_table(d: &Datum) -> Vec<Vec<String>> {
    (1..=d.t()).map(|i| chain_slots(d, i).iter().map(slot_name).collect()).collect()
}

/// The hereditary normalization `H = T_{m_1,Σ_1} × ⋯ × T_{m_t,Σ_t}`.
pub fn normalization(d: &Datum) -> BasedAlgebra {
    let units = h_units(d);
    let mut idem = Vec::new();
    let mut specs = Vec::new();
    for (k, (u, rad, label)) in units.into_iter().enumerate() {
        if u.1 == u.2 {
            let b = chain_slots(d, u.0 + 1)[u.1];
            idem.push((b, k));
        }
        specs.push(BasisSpec { units: vec![u], radical: rad, label });
    }
    idem.sort();
    let idem = idem.into_iter().map(|(b, k)| (k, b.to_string())).collect();
    BasedAlgebra::from_units("H", slot_table(d), specs, idem).expect("normalization is closed")
}

/// Algebra glued from the radical of the normalization and one idempotent
/// per class of doubled positions.
pub fn glued_algebra(name: &str, d: &Datum, classes: &[(String, Vec<BarElem>)]) -> Result<BasedAlgebra> {
    let mut specs = Vec::new();
    let mut idem = Vec::new();
    for (label, members) in classes {
        let units: Vec<Unit> = members
            .iter()
            .map(|b| {
                let s = slot_index(d, *b);
                (b.elem.0 - 1, s, s)
            })
            .collect();
        idem.push((specs.len(), label.clone()));
        specs.push(BasisSpec { units, radical: false, label: format!("e[{label}]") });
    }
    for (u, rad, label) in h_units(d) {
        if rad {
            specs.push(BasisSpec { units: vec![u], radical: true, label });
        }
    }
    BasedAlgebra::from_units(name, slot_table(d), specs, idem)
}

/// The skew-gentle algebra `A` of a datum. Vertices are labelled `g1, g2, …`.
pub fn gentle_algebra(d: &Datum) -> BasedAlgebra {
    let classes: Vec<(String, Vec<BarElem>)> =
        d.vertices().into_iter().enumerate().map(|(k, v)| (format!("g{}", k + 1), v.members)).collect();
    glued_algebra("A", d, &classes).expect("datum algebra is closed")
}

/// For each basis element of `A`, the basis elements of `H` whose sum it is.
pub fn embedding(a: &BasedAlgebra, h: &BasedAlgebra) -> Vec<Vec<usize>> {
    a.basis()
        .iter()
        .map(|b| b.units.iter().map(|&u| h.basis_of_unit(u).expect("unit of H")).collect())
        .collect()
}

/// Which block of `B` a basis element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Block {
    AA,
    AH,
    HA,
    HH,
}

/// The resolution algebra `B = [[A, H], [I, H]]` with a witness datum.
#[derive(Clone, Debug)]
pub struct ResolutionAlgebra {
    pub alg: BasedAlgebra,
    pub blocks: Vec<Block>,
    pub witness: Datum,
}

impl ResolutionAlgebra {
    pub fn block_dims(&self) -> [usize; 4] {
        let c = |b| self.blocks.iter().filter(|&&x| x == b).count();
        [c(Block::AA), c(Block::AH), c(Block::HA), c(Block::HH)]
    }

    /// Basis indices spanning `L = [[I, H], [I, I]]`.
    pub fn l_span(&self) -> Vec<usize> {
        (0..self.alg.dim())
            .filter(|&k| match self.blocks[k] {
                Block::AH | Block::HA => true,
                Block::AA | Block::HH => self.alg.basis_elem(k).radical,
            })
            .collect()
    }

    /// Compares `B` with the algebra of its witness datum. For gentle input
    /// the matrix-unit sets must agree exactly; otherwise the basic algebras
    /// are compared by dimension and vertex count.
    pub fn witness_matches(&self) -> bool {
        let a2 = gentle_algebra(&self.witness);
        if self.witness.is_gentle() {
            let sets = |alg: &BasedAlgebra| -> BTreeSet<Vec<Unit>> {
                alg.basis().iter().map(|b| b.units.clone()).collect()
            };
            sets(&self.alg) == sets(&a2)
        } else {
            basic_dim(&self.alg) == basic_dim(&a2) && iso_classes(&self.alg) == iso_classes(&a2)
        }
    }
}

fn iso_classes(a: &BasedAlgebra) -> usize {
    a.vertices().iter().map(|v| v.iso_class).max().map_or(0, |m| m + 1)
}

/// Dimension of `eAe` for `e` the sum of one idempotent per isomorphism class.
fn basic_dim(a: &BasedAlgebra) -> usize {
    let mut rep = vec![None; iso_classes(a)];
    for (v, x) in a.vertices().iter().enumerate() {
        rep[x.iso_class].get_or_insert(v);
    }
    let reps: Vec<usize> = rep.into_iter().flatten().collect();
    a.basis().iter().filter(|b| reps.contains(&b.left) && reps.contains(&b.right)).count()
}

pub fn resolution_algebra(d: &Datum) -> ResolutionAlgebra {
    let a = gentle_algebra(d);
    let h = normalization(d);
    // slot r of H sits at 2r on the H side and 2r+1 on the A side
    let hs = |u: Unit| (u.0, 2 * u.1, 2 * u.2);
    let aa = |u: Unit| (u.0, 2 * u.1 + 1, 2 * u.2 + 1);
    let ah = |u: Unit| (u.0, 2 * u.1 + 1, 2 * u.2);
    let ha = |u: Unit| (u.0, 2 * u.1, 2 * u.2 + 1);
    let mut specs = Vec::new();
    let mut blocks = Vec::new();
    let mut idem = Vec::new();
    for b in a.basis() {
        specs.push(BasisSpec {
            units: b.units.iter().map(|&u| aa(u)).collect(),
            radical: b.radical,
            label: format!("AA:{}", b.label),
        });
        blocks.push(Block::AA);
    }
    for v in a.vertices() {
        idem.push((v.idempotent, format!("A:{}", v.label)));
    }
    for b in h.basis() {
        let u = b.units[0];
        specs.push(BasisSpec { units: vec![ah(u)], radical: true, label: format!("AH:{}", b.label) });
        blocks.push(Block::AH);
    }
    for b in h.basis().iter().filter(|b| b.radical) {
        let u = b.units[0];
        specs.push(BasisSpec { units: vec![ha(u)], radical: true, label: format!("HA:{}", b.label) });
        blocks.push(Block::HA);
    }
    let hh_start = specs.len();
    for b in h.basis() {
        let u = b.units[0];
        specs.push(BasisSpec { units: vec![hs(u)], radical: b.radical, label: format!("HH:{}", b.label) });
        blocks.push(Block::HH);
    }
    for v in h.vertices() {
        idem.push((hh_start + v.idempotent, format!("H:{}", v.label)));
    }
    let slot_names = h
        .slot_names()
        .iter()
        .map(|row| row.iter().flat_map(|s| [format!("H{s}"), format!("A{s}")]).collect())
        .collect();
    let alg = BasedAlgebra::from_units("B", slot_names, specs, idem).expect("B is closed");
    let mut rels = Vec::new();
    for &(x, y) in d.relations() {
        rels.push(((x.0, 2 * x.1), (y.0, 2 * y.1)));
    }
    let m2: Vec<usize> = d.lengths().iter().map(|m| 2 * m).collect();
    let witness = Datum::new(m2, &rels).expect("doubled datum is valid");
    ResolutionAlgebra { alg, blocks, witness }
}

/// `k[ε_1, …, ε_n]/(ε_1, …, ε_n)²` glued from `T_2^n`, with its normalization.
pub fn fat_point(n: usize) -> Result<(BasedAlgebra, BasedAlgebra)> {
    if n == 0 {
        return Err(Error::InvalidDatum("fat point needs n >= 1".into()));
    }
    let d = Datum::new(vec![2; n], &[])?;
    let members: Vec<BarElem> = d.omega_bar();
    let a = glued_algebra("A", &d, &[("g1".to_string(), members)])?;
    Ok((a, normalization(&d)))
}

/// Checks that the flagged radical agrees with the trace-form radical.
pub fn radical_matches<F: Field>(alg: &BasedAlgebra, flagged: &[usize]) -> Result<bool> {
    let sca: StructureConstantAlgebra<F> = alg.to_sca();
    let rad = sca.radical()?;
    if rad.len() != flagged.len() {
        return Ok(false);
    }
    Ok(rad.iter().all(|v| v.iter().enumerate().all(|(k, c)| c.is_zero() || flagged.contains(&k))))
}

/// Summary used by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraInfo {
    pub dim_a: usize,
    pub dim_h: usize,
    pub dim_i: usize,
    pub vertices: Vec<String>,
    pub vertex_members: Vec<Vec<String>>,
    pub basis_paths: usize,
    pub gentle: bool,
}

pub fn info(d: &Datum) -> AlgebraInfo {
    let a = gentle_algebra(d);
    let h = normalization(d);
    AlgebraInfo {
        dim_a: a.dim(),
        dim_h: h.dim(),
        dim_i: h.radical_basis().len(),
        vertices: a.vertices().iter().map(|v| v.label.clone()).collect(),
        vertex_members: d
            .vertices()
            .iter()
            .map(|v| v.members.iter().map(|b| b.to_string()).collect())
            .collect(),
        basis_paths: a.radical_basis().len(),
        gentle: d.is_gentle(),
    }
}

/// Vertex of `A` containing a doubled position.
pub fn vertex_of_slot(d: &Datum, i: usize, slot: usize) -> usize {
    d.vertex_of(chain_slots(d, i)[slot])
}

/// Slot index of position `j` of chain `i` (the `+` slot when doubled).
pub fn slot_of(d: &Datum, i: usize, j: usize, sign: Option<Sign>) -> Option<usize> {
    let slots = chain_slots(d, i);
    let sign = if d.is_self_paired((i, j)) { Some(sign.unwrap_or(Sign::Plus)) } else { None };
    slots.iter().position(|b| b.elem == (i, j) && b.sign == sign)
}
