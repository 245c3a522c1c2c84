use std::fmt;

use serde::Serialize;

use super::chains::{BunchOfChains, Letter, Side};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rel {
    Tie,
    Dash,
}

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Tie => "~",
            Rel::Dash => "-",
        }
    }
}

/// A word `x₁ ρ₁ x₂ … ρ_{l−1} x_l` in the elements of a bunch. A cyclic
/// word closes with an implicit `x_l − x₁`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FullWord {
    pub letters: Vec<Letter>,
    pub rels: Vec<Rel>,
    pub cyclic: bool,
}

impl FullWord {
    /// Builds a word whose relations alternate, starting with `first`.
    pub fn alternating(letters: Vec<Letter>, first: Rel, cyclic: bool) -> Self {
        let rels = (0..letters.len().saturating_sub(1))
            .map(|k| if (k % 2 == 0) == (first == Rel::Tie) { Rel::Tie } else { Rel::Dash })
            .collect();
        FullWord { letters, rels, cyclic }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn validate(&self, b: &BunchOfChains) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidWord(s));
        if self.letters.is_empty() {
            return bad("empty word".into());
        }
        if self.rels.len() + 1 != self.letters.len() {
            return bad("one relation between consecutive letters".into());
        }
        for &x in &self.letters {
            if !b.contains(x) {
                return bad(format!("letter {x:?} is not in the bunch"));
            }
        }
        for (k, rel) in self.rels.iter().enumerate() {
            let (x, y) = (self.letters[k], self.letters[k + 1]);
            match rel {
                Rel::Tie if x == y => {
                    return Err(Error::Unsupported("words through self-tied elements".into()));
                }
                Rel::Tie if b.tie(x) != Some(y) => {
                    return bad(format!("{} and {} are not tied", b.label(x), b.label(y)));
                }
                Rel::Dash if !b.dash(x, y) => {
                    return bad(format!("{} - {} is not a relation", b.label(x), b.label(y)));
                }
                _ => {}
            }
            if k > 0 && self.rels[k - 1] == *rel {
                return bad(format!("relations do not alternate at letter {}", k + 1));
            }
        }
        let l = self.letters.len();
        if self.cyclic {
            if !l.is_multiple_of(2)
                || self.rels.first() != Some(&Rel::Tie)
                || self.rels.last() != Some(&Rel::Tie)
            {
                return bad("a cyclic word starts and ends with a tie and has even length".into());
            }
            if !b.dash(self.letters[l - 1], self.letters[0]) {
                return bad("a cyclic word must close with a dash".into());
            }
        } else {
            let first_tied = b.is_tied(self.letters[0]);
            let last_tied = b.is_tied(self.letters[l - 1]);
            if (first_tied && self.rels.first() != Some(&Rel::Tie))
                || (last_tied && self.rels.last() != Some(&Rel::Tie))
            {
                return bad("a tied end letter must be followed by its tie".into());
            }
        }
        Ok(())
    }

    pub fn reversed(&self) -> Self {
        FullWord {
            letters: self.letters.iter().rev().copied().collect(),
            rels: self.rels.iter().rev().copied().collect(),
            cyclic: self.cyclic,
        }
    }

    /// The `k`-shift of a cyclic word: it starts at `x_{2k+1}`.
    pub fn shift(&self, k: i64) -> Self {
        let l = self.letters.len() as i64;
        let start = (2 * k).rem_euclid(l) as usize;
        let mut letters = self.letters.clone();
        letters.rotate_left(start);
        FullWord::alternating(letters, Rel::Tie, true)
    }

    /// The number of tie pairs among the first `k` that join opposite chains.
    pub fn sigma(&self, b: &BunchOfChains, k: usize) -> usize {
        (0..k)
            .filter(|&j| {
                let (x, y) = (self.letters[(2 * j) % self.len()], self.letters[(2 * j + 1) % self.len()]);
                b.tie(x) == Some(y) && x.side != y.side
            })
            .count()
    }

    pub fn is_periodic(&self) -> bool {
        self.cyclic && (1..self.len() / 2).any(|k| self.shift(k as i64) == *self)
    }

    /// Groups of letters that become one object: tied pairs and lone letters.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut k = 0;
        while k < self.letters.len() {
            if k < self.rels.len() && self.rels[k] == Rel::Tie {
                out.push(vec![k, k + 1]);
                k += 2;
            } else {
                out.push(vec![k]);
                k += 1;
            }
        }
        out
    }

    /// Dashes as pairs of letter indices, the closing one last for cyclic words.
    pub fn dashes(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> =
            self.rels.iter().enumerate().filter(|(_, r)| **r == Rel::Dash).map(|(k, _)| (k, k + 1)).collect();
        if self.cyclic {
            out.push((self.letters.len() - 1, 0));
        }
        out
    }

    pub fn display<'a>(&'a self, b: &'a BunchOfChains) -> impl fmt::Display + 'a {
        WordDisplay { w: self, b }
    }

    /// Counts of letters from each chain, for quick sanity checks.
    pub fn side_counts(&self) -> (usize, usize) {
        let e = self.letters.iter().filter(|x| x.side == Side::E).count();
        (e, self.letters.len() - e)
    }
}

struct WordDisplay<'a> {
    w: &'a FullWord,
    b: &'a BunchOfChains,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.w.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " {} ", self.w.rels[k - 1].symbol())?;
            }
            write!(f, "{}", self.b.label(*x))?;
        }
        if self.w.cyclic {
            write!(f, " -")?;
        }
        Ok(())
    }
}
