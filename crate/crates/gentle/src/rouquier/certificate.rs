use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::generator::{build_generator, GeneratorZ};
use crate::algebra::Element;
use crate::complexes::{extend_to_h, triple_of, ProjComplex, TripleContext, YPositions};
use crate::error::{Error, Result};
use crate::exactla::{rank, Matrix};
use crate::scalar::Field;
use crate::words::projective_resolution;

/// `multiplicity` copies of a member of `Z` placed in homological degree
/// `degree`, i.e. `Z_member[-degree]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ZTerm {
    pub member: usize,
    pub degree: i64,
    pub multiplicity: usize,
}

/// A simple module of `A/rad A` and the member of `Z` restricting to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleMatch {
    pub vertex: usize,
    pub label: String,
    pub member: usize,
}

/// Ranks behind the exactness of `0 → X → Y ⊕ V → Ȳ → 0` in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: i64,
    pub dim_x: usize,
    pub dim_y: usize,
    pub dim_v: usize,
    pub dim_y_bar: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub composite_zero: bool,
    pub chain_map: bool,
}

impl DegreeCheck {
    pub fn is_exact(&self) -> bool {
        self.rank_in == self.dim_x
            && self.rank_out == self.dim_y_bar
            && self.composite_zero
            && self.chain_map
            && self.dim_x + self.dim_y_bar == self.dim_y + self.dim_v
    }
}

/// Alternating sums of dimension vectors over the vertices of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub x: Vec<i64>,
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    pub consistent: bool,
}

/// A triangle `Ȳ[-1] → X → Y ⊕ V → Ȳ` with both outer terms written as
/// sums of shifted members of `Z`, together with the rank checks of the
/// underlying short exact sequence of complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationCertificate {
    pub shape: Vec<(i64, Vec<usize>)>,
    pub generator: GeneratorZ,
    pub simples: Vec<SimpleMatch>,
    pub y: Vec<ZTerm>,
    pub v: Vec<ZTerm>,
    pub y_bar: Vec<ZTerm>,
    /// `Ȳ[-1]`.
    pub left: Vec<ZTerm>,
    /// `Y ⊕ V`.
    pub right: Vec<ZTerm>,
    pub degrees: Vec<DegreeCheck>,
    pub euler: EulerCheck,
    pub exact: bool,
}

impl GenerationCertificate {
    /// Every listed term names a member of `Z`, and every check passed.
    pub fn holds(&self) -> bool {
        let n = self.generator.len();
        self.exact && self.euler.consistent && self.left.iter().chain(&self.right).all(|t| t.member < n)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}

fn collect(terms: impl IntoIterator<Item = (usize, i64)>) -> Vec<ZTerm> {
    let mut counts: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for (member, degree) in terms {
        *counts.entry((degree, member)).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|((degree, member), multiplicity)| ZTerm { member, degree, multiplicity })
        .collect()
}

fn merge(a: &[ZTerm], b: &[ZTerm]) -> Vec<ZTerm> {
    let mut counts: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for t in a.iter().chain(b) {
        *counts.entry((t.degree, t.member)).or_insert(0) += t.multiplicity;
    }
    counts
        .into_iter()
        .map(|((degree, member), multiplicity)| ZTerm { member, degree, multiplicity })
        .collect()
}

fn euler_of(ctx: &TripleContext, z: &GeneratorZ, terms: &[ZTerm]) -> Vec<i64> {
    let mut out = vec![0i64; ctx.a.vertex_count()];
    for t in terms {
        let sign = if t.degree.rem_euclid(2) == 0 { 1 } else { -1 };
        for pos in z.members[t.member].positions() {
            out[ctx.a_vertex(pos)] += sign * t.multiplicity as i64;
        }
    }
    out
}

/// Linear maps of one degree, on the bases of `X^r`, `Y^r`, `V^r`, `Ȳ^r`.
struct DegreeMaps<F> {
    iota: Matrix<F>,
    proj: Matrix<F>,
    pi: Matrix<F>,
    theta: Matrix<F>,
}

fn degree_maps<F: Field>(
    ctx: &TripleContext,
    x: &ProjComplex<F>,
    y: &ProjComplex<F>,
    ypos: &YPositions,
    r: i64,
) -> DegreeMaps<F> {
    let xb = x.expanded_basis(r, None);
    let yb = y.expanded_basis(r, None);
    let yidx: HashMap<(usize, usize), usize> = yb.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let yp = ypos.get(&r).cloned().unwrap_or_default();
    let nv = x.comp(r).len();
    let mut iota: Matrix<F> = Matrix::zeros(yb.len(), xb.len());
    let mut proj = Matrix::zeros(nv, xb.len());
    for (col, &(p, b)) in xb.iter().enumerate() {
        for (k, coef) in ctx.embed::<F>(&Element::basis(b)).terms() {
            let target = ctx.h.basis_elem(*k).right;
            let q = yp
                .iter()
                .enumerate()
                .position(|(q, &(src, m))| {
                    src == p && ctx.h_vertex(m) == target && yidx.contains_key(&(q, *k))
                })
                .expect("every unit lands in a member");
            let row = yidx[&(q, *k)];
            iota[(row, col)] = iota[(row, col)].clone() + coef.clone();
        }
        if b == ctx.a.idempotent(x.comp(r)[p]) {
            proj[(p, col)] = F::one();
        }
    }
    let mut pi = Matrix::zeros(yp.len(), yb.len());
    for (col, &(q, k)) in yb.iter().enumerate() {
        if k == ctx.h.idempotent(y.comp(r)[q]) {
            pi[(q, col)] = F::one();
        }
    }
    let mut theta = Matrix::zeros(yp.len(), nv);
    for (q, &(p, _)) in yp.iter().enumerate() {
        theta[(q, p)] = F::one();
    }
    DegreeMaps { iota, proj, pi, theta }
}

/// Builds the certificate for a minimal complex `X` over `A`.
pub fn generation_certificate<F: Field>(
    ctx: &TripleContext,
    x: &ProjComplex<F>,
) -> Result<GenerationCertificate> {
    if x.algebra().dim() != ctx.a.dim() || x.algebra().vertex_count() != ctx.a.vertex_count() {
        return Err(Error::Dimension("complex is not over the algebra of the context".into()));
    }
    let x = x.trimmed();
    let t = triple_of(ctx, &x)?;
    let z = build_generator(&ctx.datum);
    let simples = (0..ctx.a.vertex_count())
        .map(|v| {
            let first = ctx.members(v)[0];
            let member = z.simple_at(first).expect("simple member of Z");
            SimpleMatch { vertex: v, label: ctx.a.vertex_label(v).to_string(), member }
        })
        .collect::<Vec<_>>();
    let y_terms = collect(t.summands.iter().map(|s| (z.index(s.chain, s.a, s.b).expect("member of Z"), s.r)));
    let v_terms = collect(
        t.v.iter().flat_map(|(&r, vs)| vs.iter().map(move |&g| (g, r))).map(|(g, r)| (simples[g].member, r)),
    );
    let (y, ypos) = extend_to_h(ctx, &x)?;
    let y_bar = collect(
        ypos.iter()
            .flat_map(|(&r, es)| es.iter().map(move |&(_, m)| (m, r)))
            .map(|(m, r)| (z.simple_at(m).expect("simple"), r)),
    );
    let left: Vec<ZTerm> = y_bar.iter().map(|t| ZTerm { degree: t.degree + 1, ..t.clone() }).collect();
    let right = merge(&y_terms, &v_terms);

    let mut degrees = Vec::new();
    let mut maps = BTreeMap::new();
    for r in x.degrees() {
        maps.insert(r, degree_maps(ctx, &x, &y, &ypos, r));
    }
    for r in x.degrees() {
        let m = &maps[&r];
        let (dim_x, dim_y, dim_v, dim_y_bar) = (m.iota.cols(), m.iota.rows(), m.proj.rows(), m.pi.rows());
        let into = m.iota.vstack(&m.proj);
        let out = m.pi.scale(&-F::one()).hstack(&m.theta);
        let composite_zero = out.mul(&into).is_zero();
        // ι commutes with the differentials, and p kills them
        let chain_map = match maps.get(&(r + 1)) {
            Some(next) => {
                let dx = x.expanded_diff(r, None);
                let dy = y.expanded_diff(r, None);
                dy.mul(&m.iota) == next.iota.mul(&dx) && next.proj.mul(&dx).is_zero()
            }
            None => true,
        };
        degrees.push(DegreeCheck {
            degree: r,
            dim_x,
            dim_y,
            dim_v,
            dim_y_bar,
            rank_in: rank(&into),
            rank_out: rank(&out),
            composite_zero,
            chain_map,
        });
    }
    let exact = degrees.iter().all(DegreeCheck::is_exact);

    let mut ex = vec![0i64; ctx.a.vertex_count()];
    for r in x.degrees() {
        let sign = if r.rem_euclid(2) == 0 { 1 } else { -1 };
        for (v, e) in ex.iter_mut().enumerate() {
            *e += sign * x.expanded_basis(r, Some(v)).len() as i64;
        }
    }
    let el = euler_of(ctx, &z, &left);
    let er = euler_of(ctx, &z, &right);
    let consistent = ex.iter().zip(el.iter().zip(&er)).all(|(a, (b, c))| *a == b + c);

    Ok(GenerationCertificate {
        shape: x.shape(),
        generator: z,
        simples,
        y: y_terms,
        v: v_terms,
        y_bar,
        left,
        right,
        degrees,
        euler: EulerCheck { x: ex, left: el, right: er, consistent },
        exact,
    })
}

/// Certificates for `k[ε_1, …, ε_n]/(ε_1, …, ε_n)²` inside `T_2^n`.
#[derive(Clone, Debug, Serialize)]
pub struct FatPointProbe {
    pub n: usize,
    pub dim_a: usize,
    pub dim_h: usize,
    /// Certificates for the resolution of `k` truncated after 0, 1, 2 syzygies.
    pub certificates: Vec<GenerationCertificate>,
}

impl FatPointProbe {
    pub fn holds(&self) -> bool {
        self.certificates.iter().all(GenerationCertificate::holds)
    }
}

pub fn fat_point_probe<F: Field>(n: usize) -> Result<FatPointProbe> {
    let ctx = TripleContext::fat_point(n)?;
    let mut certificates = Vec::new();
    for len in 0..3 {
        let res = projective_resolution::<F>(&ctx.a, 0, len)?;
        certificates.push(generation_certificate(&ctx, &res.complex)?);
    }
    Ok(FatPointProbe { n, dim_a: ctx.a.dim(), dim_h: ctx.h.dim(), certificates })
}
