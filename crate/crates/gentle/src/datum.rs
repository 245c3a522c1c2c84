//! The combinatorial datum: chain lengths and a partial pairing of positions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A position `(i, j)`: chain `i`, place `j`, both 1-based.
pub type Elem = (usize, usize);

pub fn fmt_elem(e: Elem) -> String {
    format!("({},{})", e.0, e.1)
}

/// Wire form of a datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDatum {
    pub m: Vec<usize>,
    #[serde(default)]
    pub relations: Vec<[[usize; 2]; 2]>,
}

/// A validated datum. Relations are stored as ordered pairs `x <= y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Datum {
    m: Vec<usize>,
    relations: Vec<(Elem, Elem)>,
    partner: BTreeMap<Elem, Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Element of the set where self-paired positions are doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarElem {
    pub elem: Elem,
    pub sign: Option<Sign>,
}

impl fmt::Display for BarElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            None => write!(f, "{}", fmt_elem(self.elem)),
            Some(s) => write!(f, "({},{})", fmt_elem(self.elem), s.symbol()),
        }
    }
}

/// How a vertex arises from the pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    /// Two distinct paired positions glued together.
    First,
    /// One sign of a self-paired position.
    Second,
    /// An unpaired position.
    Third,
}

/// A vertex of the algebra: a class of `BarElem`s sharing one primitive idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub members: Vec<BarElem>,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSets {
    pub omega: Vec<Elem>,
    pub omega_bar: Vec<BarElem>,
    pub omega_tilde: Vec<Vertex>,
    pub omega_hat: Vec<Vec<Elem>>,
}

impl Datum {
    pub fn new(m: Vec<usize>, relations: &[(Elem, Elem)]) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidDatum("at least one chain is required".into()));
        }
        if let Some(i) = m.iter().position(|&x| x < 2) {
            return Err(Error::InvalidDatum(format!("chain {} has length {} < 2", i + 1, m[i])));
        }
        let in_range = |e: Elem| e.0 >= 1 && e.0 <= m.len() && e.1 >= 1 && e.1 <= m[e.0 - 1];
        let mut partner = BTreeMap::new();
        let mut rels = Vec::new();
        for &(x, y) in relations {
            for e in [x, y] {
                if !in_range(e) {
                    return Err(Error::InvalidDatum(format!("{} is out of range", fmt_elem(e))));
                }
            }
            for e in [x, y] {
                if partner.contains_key(&e) {
                    return Err(Error::InvalidDatum(format!("{} is related more than once", fmt_elem(e))));
                }
            }
            partner.insert(x, y);
            partner.insert(y, x);
            rels.push((x.min(y), x.max(y)));
        }
        rels.sort();
        Ok(Datum { m, relations: rels, partner })
    }

    pub fn from_raw(raw: &RawDatum) -> Result<Self> {
        let rels: Vec<(Elem, Elem)> =
            raw.relations.iter().map(|[a, b]| ((a[0], a[1]), (b[0], b[1]))).collect();
        Self::new(raw.m.clone(), &rels)
    }

    pub fn to_raw(&self) -> RawDatum {
        RawDatum {
            m: self.m.clone(),
            relations: self.relations.iter().map(|&(a, b)| [[a.0, a.1], [b.0, b.1]]).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDatum = serde_json::from_str(text).map_err(|e| Error::Parse(format!("datum: {e}")))?;
        Self::from_raw(&raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("datum serializes")
    }

    /// Number of chains.
    pub fn t(&self) -> usize {
        self.m.len()
    }

    /// Length of chain `i` (1-based).
    pub fn len(&self, i: usize) -> usize {
        self.m[i - 1]
    }

    pub fn lengths(&self) -> &[usize] {
        &self.m
    }

    pub fn relations(&self) -> &[(Elem, Elem)] {
        &self.relations
    }

    pub fn partner(&self, e: Elem) -> Option<Elem> {
        self.partner.get(&e).copied()
    }

    pub fn is_tied(&self, e: Elem) -> bool {
        self.partner.contains_key(&e)
    }

    pub fn is_self_paired(&self, e: Elem) -> bool {
        self.partner(e) == Some(e)
    }

    pub fn is_gentle(&self) -> bool {
        self.relations.iter().all(|(a, b)| a != b)
    }

    /// True when some position is paired, i.e. the algebra is not hereditary.
    pub fn has_relations(&self) -> bool {
        !self.relations.is_empty()
    }

    pub fn omega(&self) -> Vec<Elem> {
        (1..=self.t()).flat_map(|i| (1..=self.len(i)).map(move |j| (i, j))).collect()
    }

    pub fn in_range(&self, e: Elem) -> bool {
        e.0 >= 1 && e.0 <= self.t() && e.1 >= 1 && e.1 <= self.len(e.0)
    }

    /// Positions with self-paired ones doubled by sign.
    pub fn omega_bar(&self) -> Vec<BarElem> {
        let mut out = Vec::new();
        for e in self.omega() {
            if self.is_self_paired(e) {
                out.push(BarElem { elem: e, sign: Some(Sign::Plus) });
                out.push(BarElem { elem: e, sign: Some(Sign::Minus) });
            } else {
                out.push(BarElem { elem: e, sign: None });
            }
        }
        out
    }

    /// Vertices ordered by their least position, `+` before `-`.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        for e in self.omega() {
            match self.partner(e) {
                Some(p) if p == e => {
                    for s in [Sign::Plus, Sign::Minus] {
                        out.push(Vertex {
                            members: vec![BarElem { elem: e, sign: Some(s) }],
                            kind: VertexKind::Second,
                        });
                    }
                }
                Some(p) if p > e => out.push(Vertex {
                    members: vec![BarElem { elem: e, sign: None }, BarElem { elem: p, sign: None }],
                    kind: VertexKind::First,
                }),
                Some(_) => {}
                None => out
                    .push(Vertex { members: vec![BarElem { elem: e, sign: None }], kind: VertexKind::Third }),
            }
        }
        out
    }

    /// Index of the vertex containing a `BarElem`.
    pub fn vertex_of(&self, b: BarElem) -> usize {
        self.vertices().iter().position(|v| v.members.contains(&b)).expect("element of the doubled set")
    }

    pub fn index_sets(&self) -> IndexSets {
        let mut hat: Vec<Vec<Elem>> = Vec::new();
        for e in self.omega() {
            match self.partner(e) {
                Some(p) if p > e => hat.push(vec![e, p]),
                Some(p) if p < e => {}
                _ => hat.push(vec![e]),
            }
        }
        IndexSets {
            omega: self.omega(),
            omega_bar: self.omega_bar(),
            omega_tilde: self.vertices(),
            omega_hat: hat,
        }
    }

    /// `τ(i,j)`: the partner of `(i, j+1)`, if any.
    pub fn tau(&self, e: Elem) -> Option<Elem> {
        if e.1 < self.len(e.0) {
            self.partner((e.0, e.1 + 1))
        } else {
            None
        }
    }

    /// All cycles of τ, each rotated to start at its least element.
    pub fn special_cycles(&self) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        for start in self.omega() {
            let mut cyc = vec![start];
            let mut x = start;
            let mut closed = false;
            while let Some(y) = self.tau(x) {
                if y == start {
                    closed = true;
                    break;
                }
                if cyc.contains(&y) || cyc.len() > self.omega().len() {
                    break;
                }
                cyc.push(y);
                x = y;
            }
            if closed && cyc.iter().min() == Some(&start) {
                out.push(cyc);
            }
        }
        out
    }

    /// Every gentle datum with `1..=max_t` chains of lengths in `lengths`,
    /// with every admissible set of relations between distinct positions.
    pub fn enumerate_gentle(max_t: usize, lengths: &[usize]) -> Vec<Datum> {
        let mut out = Vec::new();
        for t in 1..=max_t {
            let mut ms: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..t {
                ms = ms
                    .into_iter()
                    .flat_map(|m| {
                        lengths.iter().map(move |&l| {
                            let mut m = m.clone();
                            m.push(l);
                            m
                        })
                    })
                    .collect();
            }
            for m in ms {
                let probe = Datum::new(m.clone(), &[]).expect("lengths >= 2");
                let omega = probe.omega();
                let mut matchings = Vec::new();
                partial_matchings(&omega, &mut Vec::new(), &mut matchings);
                for rels in matchings {
                    out.push(Datum::new(m.clone(), &rels).expect("matching is admissible"));
                }
            }
        }
        out
    }
}

fn partial_matchings(rest: &[Elem], acc: &mut Vec<(Elem, Elem)>, out: &mut Vec<Vec<(Elem, Elem)>>) {
    let Some((&first, tail)) = rest.split_first() else {
        out.push(acc.clone());
        return;
    };
    partial_matchings(tail, acc, out);
    for (k, &other) in tail.iter().enumerate() {
        let remaining: Vec<Elem> =
            tail.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, &e)| e).collect();
        acc.push((first, other));
        partial_matchings(&remaining, acc, out);
        acc.pop();
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Fixtures used across tests, examples and the acceptance suite.
pub mod fixtures {
    use super::Datum;

    /// `k[ε]/(ε²)`: one chain of length 2 with its two positions paired.
    pub fn dual_numbers() -> Datum {
        Datum::new(vec![2], &[((1, 1), (1, 2))]).unwrap()
    }

    /// Two vertices with arrows both ways and one zero relation.
    pub fn two_cycle() -> Datum {
        Datum::new(vec![3], &[((1, 1), (1, 3))]).unwrap()
    }

    /// Two parallel length-two paths `ba`, `dc` with `bc = da = 0`.
    pub fn two_paths() -> Datum {
        Datum::new(vec![3, 3], &[((1, 1), (2, 1)), ((1, 2), (2, 2)), ((1, 3), (2, 3))]).unwrap()
    }

    /// Skew-gentle datum with two self-paired positions.
    pub fn skew_tubular() -> Datum {
        Datum::new(vec![3, 3], &[((1, 1), (2, 1)), ((1, 3), (2, 3)), ((1, 2), (1, 2)), ((2, 2), (2, 2))])
            .unwrap()
    }

    /// The three gentle datums used by the acceptance corpus.
    pub fn gentle_corpus() -> Vec<(&'static str, Datum)> {
        vec![("dual", dual_numbers()), ("two-cycle", two_cycle()), ("two-paths", two_paths())]
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn validation() {
        let d = dual_numbers();
        assert!(d.is_gentle());
        let h = Datum::new(vec![3], &[]).unwrap();
        assert!(h.is_gentle() && !h.has_relations());
        let err = Datum::new(vec![2], &[((1, 1), (1, 2)), ((1, 1), (1, 1))]);
        assert!(matches!(err, Err(Error::InvalidDatum(_))));
        assert!(Datum::new(vec![2], &[((1, 3), (1, 1))]).is_err());
        assert!(Datum::new(vec![1], &[]).is_err());
        assert!(!skew_tubular().is_gentle());
    }

    #[test]
    fn index_set_sizes() {
        let s = two_cycle().index_sets();
        assert_eq!(s.omega.len(), 3);
        assert_eq!(s.omega_tilde.len(), 2);
        assert_eq!(s.omega_tilde[0].kind, VertexKind::First);
        assert_eq!(s.omega_tilde[1].kind, VertexKind::Third);

        let s = two_paths().index_sets();
        assert_eq!(s.omega_tilde.len(), 3);
        assert!(s.omega_tilde.iter().all(|v| v.kind == VertexKind::First));

        let s = skew_tubular().index_sets();
        assert_eq!(s.omega_bar.len(), 8);
        assert_eq!(s.omega_tilde.len(), 6);
        let count = |k| s.omega_tilde.iter().filter(|v| v.kind == k).count();
        assert_eq!((count(VertexKind::First), count(VertexKind::Second)), (2, 4));
        assert_eq!(s.omega_hat.len(), 4);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(dual_numbers().tau((1, 1)), Some((1, 1)));
        assert_eq!(dual_numbers().tau((1, 2)), None);
        assert_eq!(two_paths().tau((1, 1)), Some((2, 2)));
        assert_eq!(two_paths().tau((2, 3)), None);
    }

    #[test]
    fn special_cycle_examples() {
        assert_eq!(dual_numbers().special_cycles(), vec![vec![(1, 1)]]);
        assert!(two_paths().special_cycles().is_empty());
        assert!(two_cycle().special_cycles().is_empty());
        // a length-two cycle across chains
        let d = Datum::new(vec![2, 2], &[((1, 2), (2, 1)), ((2, 2), (1, 1))]).unwrap();
        assert_eq!(d.special_cycles(), vec![vec![(1, 1), (2, 1)]]);
    }

    #[test]
    fn json_round_trip() {
        let d = skew_tubular();
        assert_eq!(Datum::from_json(&d.to_json()).unwrap(), d);
        let d = Datum::from_json(r#"{"m":[3,3],"relations":[[[1,1],[2,1]],[[1,3],[2,3]]]}"#).unwrap();
        assert_eq!(d.relations().len(), 2);
        assert!(matches!(Datum::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn counting_identities_hold_on_small_corpus() {
        for d in Datum::enumerate_gentle(2, &[2, 3]) {
            let s = d.index_sets();
            let pairs = d.relations().len();
            let selfs = d.relations().iter().filter(|(a, b)| a == b).count();
            assert_eq!(s.omega.len(), d.lengths().iter().sum::<usize>());
            assert_eq!(s.omega_bar.len(), s.omega.len() + selfs);
            assert_eq!(s.omega_hat.len(), s.omega.len() - (pairs - selfs));
            for x in d.omega() {
                if let Some(y) = d.tau(x) {
                    assert!(d.in_range(y));
                }
            }
        }
        // partial matchings on 6 points: 76; on 5: 26; on 4: 10
        assert_eq!(Datum::enumerate_gentle(2, &[3]).len(), 4 + 76);
    }
}
