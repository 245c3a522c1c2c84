use std::fmt;

use serde::{Deserialize, Serialize};

use crate::datum::{fmt_elem, Datum, Elem};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Reading direction of a segment inside a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    /// Entered through the low end `((i,b), r)`, left through the high end.
    #[serde(rename = "low-first")]
    LowFirst,
    /// Entered through the high end `((i,a), r-1)`, left through the low end.
    #[serde(rename = "high-first")]
    HighFirst,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::LowFirst => Orientation::HighFirst,
            Orientation::HighFirst => Orientation::LowFirst,
        }
    }
}

/// The two-term complex `Q_(i,a) → Q_(i,b)` in degrees `r-1, r`, read in a
/// given direction. `a = m_i + 1` is the stalk `Q_(i,b)` in degree `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub i: usize,
    pub a: usize,
    pub b: usize,
    pub r: i64,
    pub orient: Orientation,
}

/// One end of a segment: a position and the degree it sits in.
pub type EndPoint = (Elem, i64);

impl Segment {
    pub fn new(i: usize, a: usize, b: usize, r: i64, orient: Orientation) -> Self {
        Segment { i, a, b, r, orient }
    }

    pub fn is_stalk(&self, d: &Datum) -> bool {
        self.a == d.len(self.i) + 1
    }

    pub fn high_end(&self) -> EndPoint {
        ((self.i, self.a), self.r - 1)
    }

    pub fn low_end(&self) -> EndPoint {
        ((self.i, self.b), self.r)
    }

    /// The end the word enters through; `None` for the missing end of a stalk.
    pub fn entry(&self, d: &Datum) -> Option<EndPoint> {
        match self.orient {
            Orientation::LowFirst => Some(self.low_end()),
            Orientation::HighFirst => (!self.is_stalk(d)).then(|| self.high_end()),
        }
    }

    /// The end the word leaves through; `None` for the missing end of a stalk.
    pub fn exit(&self, d: &Datum) -> Option<EndPoint> {
        match self.orient {
            Orientation::HighFirst => Some(self.low_end()),
            Orientation::LowFirst => (!self.is_stalk(d)).then(|| self.high_end()),
        }
    }

    pub fn reversed(&self) -> Self {
        Segment { orient: self.orient.flipped(), ..*self }
    }

    /// Moves the segment `k` degrees up.
    pub fn translated(&self, k: i64) -> Self {
        Segment { r: self.r + k, ..*self }
    }

    fn check_range(&self, d: &Datum) -> Result<()> {
        if self.i == 0 || self.i > d.t() {
            return Err(Error::InvalidWord(format!("chain {} does not exist", self.i)));
        }
        let m = d.len(self.i);
        if self.a < 2 || self.a > m + 1 || self.b < 1 || self.b >= self.a {
            return Err(Error::InvalidWord(format!("segment {self} is out of range")));
        }
        Ok(())
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.orient {
            Orientation::LowFirst => "low-first",
            Orientation::HighFirst => "high-first",
        };
        write!(f, "W({},({},{}))[{}] {o}", self.i, self.a, self.b, -self.r)
    }
}

/// Which ends of a string are stalks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StringShape {
    BothUntied,
    LeftStalk,
    RightStalk,
    BothStalk,
}

/// A reduced string word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StringDatum {
    pub segments: Vec<Segment>,
}

/// A non-periodic cyclic word without stalks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BandWord {
    pub segments: Vec<Segment>,
}

/// A band word with multiplicity and eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BandDatum<F> {
    pub word: BandWord,
    pub m: usize,
    pub pi: F,
}

fn reverse_segments(s: &[Segment]) -> Vec<Segment> {
    s.iter().rev().map(Segment::reversed).collect()
}

fn require_gentle(d: &Datum) -> Result<()> {
    if d.is_gentle() {
        Ok(())
    } else {
        Err(Error::Unsupported("words are implemented for gentle datums".into()))
    }
}

/// Checks the junction between a segment's exit and the next one's entry.
fn check_junction(d: &Datum, left: &Segment, right: &Segment) -> Result<()> {
    let (Some((x, r)), Some((y, s))) = (left.exit(d), right.entry(d)) else {
        return Err(Error::InvalidWord(format!("stalk end of {left} or {right} is inside the word")));
    };
    if r != s {
        return Err(Error::InvalidWord(format!(
            "degree mismatch between {left} (degree {r}) and {right} (degree {s})"
        )));
    }
    if d.partner(x) != Some(y) || x == y {
        return Err(Error::InvalidWord(format!("{} and {} are not tied", fmt_elem(x), fmt_elem(y))));
    }
    Ok(())
}

impl StringDatum {
    pub fn new(segments: Vec<Segment>) -> Self {
        StringDatum { segments }
    }

    pub fn validate(&self, d: &Datum) -> Result<StringShape> {
        self.validate_with(d, false)
    }

    /// As [`validate`](Self::validate), but a tied trailing end is allowed
    /// when `open_tail` is set.
    pub(crate) fn validate_with(&self, d: &Datum, open_tail: bool) -> Result<StringShape> {
        require_gentle(d)?;
        let segs = &self.segments;
        let Some((first, last)) = segs.first().zip(segs.last()) else {
            return Err(Error::InvalidWord("empty string".into()));
        };
        for s in segs {
            s.check_range(d)?;
        }
        for w in segs.windows(2) {
            check_junction(d, &w[0], &w[1])?;
        }
        let tail = if open_tail { None } else { last.exit(d) };
        for end in [first.entry(d), tail].into_iter().flatten() {
            if d.is_tied(end.0) {
                return Err(Error::InvalidWord(format!("free end {} is tied", fmt_elem(end.0))));
            }
        }
        Ok(self.shape(d))
    }

    pub fn shape(&self, d: &Datum) -> StringShape {
        let left = self.segments.first().is_some_and(|s| s.entry(d).is_none());
        let right = self.segments.last().is_some_and(|s| s.exit(d).is_none());
        match (left, right) {
            (false, false) => StringShape::BothUntied,
            (true, false) => StringShape::LeftStalk,
            (false, true) => StringShape::RightStalk,
            (true, true) => StringShape::BothStalk,
        }
    }

    pub fn reversed(&self) -> Self {
        StringDatum { segments: reverse_segments(&self.segments) }
    }

    pub fn translated(&self, k: i64) -> Self {
        StringDatum { segments: self.segments.iter().map(|s| s.translated(k)).collect() }
    }

    /// The smaller of the word and its reversal.
    pub fn canonical(&self) -> Self {
        let r = self.reversed();
        if r < *self {
            r
        } else {
            self.clone()
        }
    }

    /// Lowest and highest degree carrying a projective.
    pub fn degree_range(&self, d: &Datum) -> (i64, i64) {
        end_range(d, &self.segments)
    }
}

fn end_range(d: &Datum, segs: &[Segment]) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for s in segs {
        hi = hi.max(s.r);
        lo = lo.min(if s.is_stalk(d) { s.r } else { s.r - 1 });
    }
    (lo, hi)
}

impl BandWord {
    pub fn new(segments: Vec<Segment>) -> Self {
        BandWord { segments }
    }

    pub fn validate(&self, d: &Datum) -> Result<()> {
        require_gentle(d)?;
        let segs = &self.segments;
        if segs.is_empty() {
            return Err(Error::InvalidWord("empty band".into()));
        }
        for s in segs {
            s.check_range(d)?;
            if s.is_stalk(d) {
                return Err(Error::InvalidWord(format!("band contains the stalk {s}")));
            }
        }
        let n = segs.len();
        for k in 0..n {
            check_junction(d, &segs[k], &segs[(k + 1) % n])?;
        }
        if self.is_periodic() {
            return Err(Error::InvalidWord("band word is periodic".into()));
        }
        Ok(())
    }

    pub fn is_periodic(&self) -> bool {
        let n = self.segments.len();
        (1..n).any(|k| n.is_multiple_of(k) && self.rotated(k).segments == self.segments)
    }

    /// Starts the cycle at segment `k`.
    pub fn rotated(&self, k: usize) -> Self {
        let n = self.segments.len();
        BandWord { segments: (0..n).map(|j| self.segments[(j + k) % n]).collect() }
    }

    pub fn reversed(&self) -> Self {
        BandWord { segments: reverse_segments(&self.segments) }
    }

    pub fn translated(&self, k: i64) -> Self {
        BandWord { segments: self.segments.iter().map(|s| s.translated(k)).collect() }
    }

    /// Least rotation of the word or of its reversal, shifted so that the
    /// top degree is 0.
    pub fn canonical(&self) -> Self {
        let top = self.segments.iter().map(|s| s.r).max().unwrap_or(0);
        let w = self.translated(-top);
        let rev = w.reversed();
        (0..w.segments.len()).flat_map(|k| [w.rotated(k), rev.rotated(k)]).min().unwrap_or(w)
    }

    pub fn degree_range(&self, d: &Datum) -> (i64, i64) {
        end_range(d, &self.segments)
    }
}

impl<F: Field> BandDatum<F> {
    pub fn new(word: BandWord, m: usize, pi: F) -> Self {
        BandDatum { word, m, pi }
    }

    pub fn validate(&self, d: &Datum) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidWord("multiplicity must be at least 1".into()));
        }
        if self.pi.is_zero() {
            return Err(Error::InvalidWord("eigenvalue must be nonzero".into()));
        }
        self.word.validate(d)
    }
}

/// Equal up to reversal.
pub fn word_equivalent_strings(v: &StringDatum, w: &StringDatum) -> bool {
    v == w || *v == w.reversed()
}

/// Equal up to rotation, or up to rotation of the reversal with inverted eigenvalue.
pub fn word_equivalent_bands<F: Field>(x: &BandDatum<F>, y: &BandDatum<F>) -> bool {
    if x.m != y.m || x.word.segments.len() != y.word.segments.len() {
        return false;
    }
    let n = x.word.segments.len();
    let rotation_of = |w: &BandWord| (0..n).any(|k| w.rotated(k) == y.word);
    (x.pi == y.pi && rotation_of(&x.word)) || (x.pi.inv() == y.pi && rotation_of(&x.word.reversed()))
}

/// Either kind of word, as read from or written to JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word<F> {
    String(StringDatum),
    Band(BandDatum<F>),
}

#[derive(Serialize, Deserialize)]
struct WireWord {
    kind: String,
    segments: Vec<Segment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pi: Option<String>,
}

impl<F: Field> Word<F> {
    pub fn from_json(text: &str) -> Result<Self> {
        let w: WireWord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match w.kind.as_str() {
            "string" => Ok(Word::String(StringDatum::new(w.segments))),
            "band" => {
                let pi = match &w.pi {
                    Some(p) => F::parse(p)?,
                    None => F::one(),
                };
                Ok(Word::Band(BandDatum::new(BandWord::new(w.segments), w.m.unwrap_or(1), pi)))
            }
            k => Err(Error::Parse(format!("unknown word kind {k:?}"))),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let w = match self {
            Word::String(s) => {
                WireWord { kind: "string".into(), segments: s.segments.clone(), m: None, pi: None }
            }
            Word::Band(b) => WireWord {
                kind: "band".into(),
                segments: b.word.segments.clone(),
                m: Some(b.m),
                pi: Some(b.pi.to_string()),
            },
        };
        serde_json::to_value(w).expect("word serializes")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn validate(&self, d: &Datum) -> Result<()> {
        match self {
            Word::String(s) => s.validate(d).map(|_| ()),
            Word::Band(b) => b.validate(d),
        }
    }
}
