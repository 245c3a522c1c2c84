use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Which of the two chains of an index an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    E,
    F,
}

/// An element of a bunch: its index, its chain and its place in that chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub index: usize,
    pub side: Side,
    pub pos: usize,
}

/// A bunch of semi-chains: for every index two totally ordered chains and a
/// partial involution on all elements.
#[derive(Clone, Debug, PartialEq)]
pub struct BunchOfChains {
    indices: Vec<String>,
    e: Vec<Vec<String>>,
    f: Vec<Vec<String>>,
    tie: BTreeMap<Letter, Letter>,
}

impl BunchOfChains {
    /// Chains are listed in increasing order. Ties are given once per pair;
    /// `(x, x)` makes `x` self-tied.
    pub fn new(
        indices: Vec<String>,
        e: Vec<Vec<String>>,
        f: Vec<Vec<String>>,
        ties: &[(Letter, Letter)],
    ) -> Result<Self> {
        if e.len() != indices.len() || f.len() != indices.len() {
            return Err(Error::Dimension("one E-chain and one F-chain per index".into()));
        }
        let mut b = BunchOfChains { indices, e, f, tie: BTreeMap::new() };
        for &(x, y) in ties {
            for z in [x, y] {
                if !b.contains(z) {
                    return Err(Error::InvalidDatum(format!("tie refers to a missing element {z:?}")));
                }
            }
            for (p, q) in [(x, y), (y, x)] {
                if let Some(old) = b.tie.insert(p, q) {
                    if old != q {
                        return Err(Error::InvalidDatum(format!("{} is tied twice", b.label(p))));
                    }
                }
            }
        }
        Ok(b)
    }

    pub fn contains(&self, x: Letter) -> bool {
        x.index < self.indices.len() && x.pos < self.chain_len(x.index, x.side)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn index_label(&self, i: usize) -> &str {
        &self.indices[i]
    }

    pub fn chain(&self, i: usize, side: Side) -> &[String] {
        match side {
            Side::E => &self.e[i],
            Side::F => &self.f[i],
        }
    }

    pub fn chain_len(&self, i: usize, side: Side) -> usize {
        self.chain(i, side).len()
    }

    pub fn label(&self, x: Letter) -> &str {
        &self.chain(x.index, x.side)[x.pos]
    }

    pub fn find(&self, label: &str) -> Option<Letter> {
        self.elements().find(|&x| self.label(x) == label)
    }

    pub fn elements(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).flat_map(move |index| {
            [Side::E, Side::F].into_iter().flat_map(move |side| {
                (0..self.chain_len(index, side)).map(move |pos| Letter { index, side, pos })
            })
        })
    }

    pub fn tie(&self, x: Letter) -> Option<Letter> {
        self.tie.get(&x).copied()
    }

    pub fn is_tied(&self, x: Letter) -> bool {
        self.tie.contains_key(&x)
    }

    /// True when some element is tied to itself.
    pub fn is_semi(&self) -> bool {
        self.tie.iter().any(|(x, y)| x == y)
    }

    /// The relation `x − y`: same index, opposite chains.
    pub fn dash(&self, x: Letter, y: Letter) -> bool {
        x.index == y.index && x.side != y.side
    }

    /// Representative of the class of `x` after identifying tied pairs.
    pub fn class(&self, x: Letter) -> Letter {
        self.tie(x).map_or(x, |y| x.min(y))
    }

    /// Pairs `(x, y)` with `x ∼ y`, each listed once, self-ties included.
    pub fn ties(&self) -> Vec<(Letter, Letter)> {
        self.tie.iter().filter(|(x, y)| x <= y).map(|(x, y)| (*x, *y)).collect()
    }

    /// Σ = {1, 2}, E_i = {c_i < d_i}, F_i = {a_i}, with a, c and d tied
    /// across the two indices.
    pub fn two_point() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let l = |index, side, pos| Letter { index, side, pos };
        BunchOfChains::new(
            s(&["1", "2"]),
            vec![s(&["c1", "d1"]), s(&["c2", "d2"])],
            vec![s(&["a1"]), s(&["a2"])],
            &[
                (l(0, Side::F, 0), l(1, Side::F, 0)),
                (l(0, Side::E, 0), l(1, Side::E, 0)),
                (l(0, Side::E, 1), l(1, Side::E, 1)),
            ],
        )
        .expect("fixture")
    }

    /// The semi-chain variant: F_1 = {a}, F_2 = {b}, both self-tied.
    pub fn two_point_semi() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let l = |index, side, pos| Letter { index, side, pos };
        BunchOfChains::new(
            s(&["1", "2"]),
            vec![s(&["c1", "d1"]), s(&["c2", "d2"])],
            vec![s(&["a"]), s(&["b"])],
            &[
                (l(0, Side::F, 0), l(0, Side::F, 0)),
                (l(1, Side::F, 0), l(1, Side::F, 0)),
                (l(0, Side::E, 0), l(1, Side::E, 0)),
                (l(0, Side::E, 1), l(1, Side::E, 1)),
            ],
        )
        .expect("fixture")
    }

    /// The chessboard bunch: one index, x_1 < … < x_n, y_n < … < y_1, x_i ∼ y_i.
    pub fn chessboard(n: usize) -> Self {
        let e = (1..=n).map(|k| format!("x{k}")).collect();
        let f = (1..=n).rev().map(|k| format!("y{k}")).collect();
        let ties: Vec<_> = (0..n)
            .map(|k| {
                (
                    Letter { index: 0, side: Side::E, pos: k },
                    Letter { index: 0, side: Side::F, pos: n - 1 - k },
                )
            })
            .collect();
        BunchOfChains::new(vec!["*".into()], vec![e], vec![f], &ties).expect("fixture")
    }
}

impl fmt::Display for BunchOfChains {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            writeln!(
                f,
                "{}: E = [{}], F = [{}]",
                self.indices[i],
                self.e[i].join(" < "),
                self.f[i].join(" < ")
            )?;
        }
        for (x, y) in self.ties() {
            writeln!(f, "{} ~ {}", self.label(x), self.label(y))?;
        }
        Ok(())
    }
}
