use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use super::word::{BandDatum, EndPoint, Orientation, Segment, StringDatum};
use crate::algebra::{gentle_algebra, slot_of, BasedAlgebra, Element};
use crate::complexes::{MorphMatrix, ProjComplex};
use crate::datum::{fmt_elem, BarElem, Datum, Elem};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// A datum together with its algebra, shared by all word constructions so
/// that the complexes they produce live over one algebra.
#[derive(Clone, Debug)]
pub struct WordContext {
    pub datum: Datum,
    pub alg: Arc<BasedAlgebra>,
}

impl WordContext {
    pub fn new(d: &Datum) -> Result<Self> {
        if !d.is_gentle() {
            return Err(Error::Unsupported("words are implemented for gentle datums".into()));
        }
        Ok(WordContext { datum: d.clone(), alg: Arc::new(gentle_algebra(d)) })
    }

    pub fn vertex(&self, x: Elem) -> usize {
        self.datum.vertex_of(BarElem { elem: x, sign: None })
    }

    /// Basis index of the path `(i, a, b)` of the algebra.
    pub fn path(&self, i: usize, a: usize, b: usize) -> usize {
        let s = slot_of(&self.datum, i, a, None).expect("position in range");
        let t = slot_of(&self.datum, i, b, None).expect("position in range");
        self.alg.basis_of_unit((i - 1, s, t)).expect("path of the algebra")
    }
}

/// A node of a gluing diagram: one end of one segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GluingNode {
    pub segment: usize,
    pub high: bool,
    pub elem: Elem,
    pub degree: i64,
}

/// Segments laid out one per row, with dotted edges joining tied ends.
#[derive(Clone, Debug, Serialize)]
pub struct GluingDiagram {
    pub segments: Vec<Segment>,
    pub nodes: Vec<GluingNode>,
    /// Differentials as (source node, target node, path label).
    pub solid: Vec<(usize, usize, String)>,
    pub dotted: Vec<(usize, usize)>,
    /// Multiplicity of every node; 1 for strings.
    pub m: usize,
    /// Segment carrying the Jordan block, for bands.
    pub jordan: Option<usize>,
}

fn node_of(nodes: &[GluingNode], seg: usize, end: EndPoint) -> usize {
    nodes
        .iter()
        .position(|n| n.segment == seg && n.elem == end.0 && n.degree == end.1)
        .expect("end of the segment")
}

fn diagram(ctx: &WordContext, segs: &[Segment], cyclic: bool, m: usize) -> GluingDiagram {
    let d = &ctx.datum;
    let mut nodes = Vec::new();
    let mut solid = Vec::new();
    for (k, s) in segs.iter().enumerate() {
        if !s.is_stalk(d) {
            let (e, r) = s.high_end();
            nodes.push(GluingNode { segment: k, high: true, elem: e, degree: r });
        }
        let (e, r) = s.low_end();
        nodes.push(GluingNode { segment: k, high: false, elem: e, degree: r });
        if !s.is_stalk(d) {
            let label = ctx.alg.basis_elem(ctx.path(s.i, s.a, s.b)).label.clone();
            solid.push((nodes.len() - 2, nodes.len() - 1, label));
        }
    }
    let mut dotted = Vec::new();
    let n = segs.len();
    let joins = if cyclic { n } else { n.saturating_sub(1) };
    for k in 0..joins {
        let l = (k + 1) % n;
        if let (Some(x), Some(y)) = (segs[k].exit(d), segs[l].entry(d)) {
            dotted.push((node_of(&nodes, k, x), node_of(&nodes, l, y)));
        }
    }
    GluingDiagram { segments: segs.to_vec(), nodes, solid, dotted, m, jordan: cyclic.then(|| n - 1) }
}

pub fn string_gluing_diagram(ctx: &WordContext, v: &StringDatum) -> Result<GluingDiagram> {
    v.validate(&ctx.datum)?;
    Ok(diagram(ctx, &v.segments, false, 1))
}

pub fn band_gluing_diagram<F: Field>(ctx: &WordContext, w: &BandDatum<F>) -> Result<GluingDiagram> {
    w.validate(&ctx.datum)?;
    Ok(diagram(ctx, &w.word.segments, true, w.m))
}

impl GluingDiagram {
    /// Graphviz rendering: one row per segment, one column per degree,
    /// solid edges for differentials and dotted edges for ties.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph gluing {\n  rankdir=LR;\n  node [shape=plaintext];\n");
        let power = if self.m == 1 { String::new() } else { format!("^{}", self.m) };
        for (k, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{k} [label=\"Q{}{power} @{}\"];", fmt_elem(n.elem), n.degree);
        }
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (k, n) in self.nodes.iter().enumerate() {
            by_degree.entry(n.degree).or_default().push(k);
        }
        for ks in by_degree.values() {
            let names: Vec<String> = ks.iter().map(|k| format!("n{k}")).collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }}", names.join("; "));
        }
        for &(s, t, ref label) in &self.solid {
            let block = match self.jordan {
                Some(j) if self.nodes[s].segment == j => " J",
                _ if self.m > 1 || self.jordan.is_some() => " I",
                _ => "",
            };
            let _ = writeln!(out, "  n{s} -> n{t} [label=\"{label}{block}\"];");
        }
        for &(s, t) in &self.dotted {
            let _ = writeln!(out, "  n{s} -> n{t} [style=dotted, dir=none];");
        }
        out.push_str("}\n");
        out
    }
}

/// A projective summand group of the glued complex: either two tied ends
/// merged, or one free end.
struct Group {
    degree: i64,
    vertex: usize,
}

/// Lower triangular Jordan block with `pi` on the diagonal.
pub fn jordan_block<F: Field>(m: usize, pi: &F) -> Vec<Vec<F>> {
    let mut j = vec![vec![F::zero(); m]; m];
    for k in 0..m {
        j[k][k] = pi.clone();
        if k + 1 < m {
            j[k + 1][k] = F::one();
        }
    }
    j
}

/// Assembles the complex of a segment sequence. Junctions are not checked
/// here; `block` gives the `m × m` scalar block put on a segment.
pub(crate) fn glue<F: Field>(
    ctx: &WordContext,
    segs: &[Segment],
    cyclic: bool,
    m: usize,
    block: &dyn Fn(usize) -> Vec<Vec<F>>,
) -> Result<ProjComplex<F>> {
    let d = &ctx.datum;
    let n = segs.len();
    let mut groups: Vec<Group> = Vec::new();
    // group of each (segment, high) end
    let mut end_group: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    let is_high = |s: &Segment, e: EndPoint| s.high_end() == e && !s.is_stalk(d);
    if let Some(first) = segs.first() {
        if !cyclic {
            if let Some(e) = first.entry(d) {
                end_group.insert((0, is_high(first, e)), groups.len());
                groups.push(Group { degree: e.1, vertex: ctx.vertex(e.0) });
            }
        }
    }
    for k in 0..n {
        let Some(x) = segs[k].exit(d) else { continue };
        let next = (k + 1 < n || cyclic).then(|| (k + 1) % n);
        end_group.insert((k, is_high(&segs[k], x)), groups.len());
        if let Some(l) = next {
            let y = segs[l].entry(d).ok_or_else(|| Error::InvalidWord("stalk end inside the word".into()))?;
            end_group.insert((l, is_high(&segs[l], y)), groups.len());
        }
        groups.push(Group { degree: x.1, vertex: ctx.vertex(x.0) });
    }
    if groups.is_empty() {
        return Ok(ProjComplex::zero(ctx.alg.clone()));
    }
    let lo = groups.iter().map(|g| g.degree).min().unwrap();
    let hi = groups.iter().map(|g| g.degree).max().unwrap();
    let len = (hi - lo + 1) as usize;
    let mut comps: Vec<Vec<usize>> = vec![Vec::new(); len];
    // offset of each group inside its degree
    let mut offset = vec![0; groups.len()];
    for (g, grp) in groups.iter().enumerate() {
        let c = &mut comps[(grp.degree - lo) as usize];
        offset[g] = c.len();
        c.extend(std::iter::repeat_n(grp.vertex, m));
    }
    let mut diffs: Vec<MorphMatrix<F>> = (0..len.saturating_sub(1))
        .map(|k| vec![vec![Element::zero(); comps[k].len()]; comps[k + 1].len()])
        .collect();
    for (k, s) in segs.iter().enumerate() {
        if s.is_stalk(d) {
            continue;
        }
        let src = end_group[&(k, true)];
        let tgt = end_group[&(k, false)];
        let path = ctx.path(s.i, s.a, s.b);
        let blk = block(k);
        let dm = &mut diffs[(groups[src].degree - lo) as usize];
        for q in 0..m {
            for p in 0..m {
                if !blk[q][p].is_zero() {
                    let e = Element::scaled_basis(path, blk[q][p].clone());
                    let cell = &mut dm[offset[tgt] + q][offset[src] + p];
                    *cell = cell.add(&e);
                }
            }
        }
    }
    ProjComplex::new(ctx.alg.clone(), lo, comps, diffs)
}

/// The string complex of a valid string word.
pub fn string_complex<F: Field>(ctx: &WordContext, v: &StringDatum) -> Result<ProjComplex<F>> {
    v.validate(&ctx.datum)?;
    glue(ctx, &v.segments, false, 1, &|_| vec![vec![F::one()]])
}

/// The band complex: identity blocks everywhere except the last segment,
/// which carries `J_m(π)` when read low-first and `J_m(π⁻¹)` otherwise.
pub fn band_complex<F: Field>(ctx: &WordContext, w: &BandDatum<F>) -> Result<ProjComplex<F>> {
    w.validate(&ctx.datum)?;
    let segs = &w.word.segments;
    let last = segs.len() - 1;
    let pi = match segs[last].orient {
        Orientation::LowFirst => w.pi.clone(),
        Orientation::HighFirst => w.pi.inv(),
    };
    let m = w.m;
    glue(ctx, segs, true, m, &|k| if k == last { jordan_block(m, &pi) } else { identity_block(m) })
}

fn identity_block<F: Field>(m: usize) -> Vec<Vec<F>> {
    (0..m).map(|q| (0..m).map(|p| if p == q { F::one() } else { F::zero() }).collect()).collect()
}
