use serde::Serialize;

use crate::datum::{Datum, Elem};

/// The indecomposable module `W(i,(a,b)) = Q_(i,b)/Q_(i,a)` of the
/// normalization. It has composition factors at positions `b..a` of chain `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZMember {
    pub chain: usize,
    pub a: usize,
    pub b: usize,
    pub dim: usize,
    pub label: String,
}

impl ZMember {
    pub fn positions(&self) -> impl Iterator<Item = Elem> + '_ {
        (self.b..self.a).map(|j| (self.chain, j))
    }

    pub fn is_simple(&self) -> bool {
        self.a == self.b + 1
    }
}

/// All indecomposable modules of the normalization, viewed over `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorZ {
    pub members: Vec<ZMember>,
}

impl GeneratorZ {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index(&self, chain: usize, a: usize, b: usize) -> Option<usize> {
        self.members.iter().position(|z| (z.chain, z.a, z.b) == (chain, a, b))
    }

    /// The simple module at position `(i, j)`.
    pub fn simple_at(&self, (i, j): Elem) -> Option<usize> {
        self.index(i, j + 1, j)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(|z| z.dim).collect()
    }
}

/// Members are listed chain by chain, by `b` then `a`.
pub fn build_generator(d: &Datum) -> GeneratorZ {
    let mut members = Vec::new();
    for i in 1..=d.t() {
        let m = d.len(i);
        for b in 1..=m {
            for a in b + 1..=m + 1 {
                members.push(ZMember { chain: i, a, b, dim: a - b, label: format!("W({i},({a},{b}))") });
            }
        }
    }
    GeneratorZ { members }
}
