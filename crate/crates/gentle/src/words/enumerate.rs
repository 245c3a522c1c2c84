use std::collections::BTreeSet;

use super::word::{BandWord, EndPoint, Orientation, Segment, StringDatum};
use crate::datum::Datum;

/// Every segment that can follow an exit at `end`: those entering through
/// the partner of the exit position in the same degree.
fn successors(d: &Datum, end: EndPoint) -> Vec<Segment> {
    let Some((i, j)) = d.partner(end.0) else { return Vec::new() };
    if (i, j) == end.0 {
        return Vec::new();
    }
    let r = end.1;
    let m = d.len(i);
    let mut out = Vec::new();
    for a in j + 1..=m + 1 {
        out.push(Segment::new(i, a, j, r, Orientation::LowFirst));
    }
    for b in 1..j {
        out.push(Segment::new(i, j, b, r + 1, Orientation::HighFirst));
    }
    out
}

fn all_segments(d: &Datum, r: i64) -> Vec<Segment> {
    let mut out = Vec::new();
    for i in 1..=d.t() {
        let m = d.len(i);
        for a in 2..=m + 1 {
            for b in 1..a {
                for o in [Orientation::LowFirst, Orientation::HighFirst] {
                    out.push(Segment::new(i, a, b, r, o));
                }
            }
        }
    }
    out
}

/// All string words with at most `max_segments` segments whose projectives
/// sit in degrees `lo..=hi`, one per reversal class.
pub fn enumerate_strings(d: &Datum, max_segments: usize, (lo, hi): (i64, i64)) -> Vec<StringDatum> {
    if !d.is_gentle() {
        return Vec::new();
    }
    let fits = |s: &Segment| s.r <= hi && (if s.is_stalk(d) { s.r } else { s.r - 1 }) >= lo;
    let mut found = BTreeSet::new();
    let mut stack: Vec<Vec<Segment>> = Vec::new();
    for r in lo..=hi {
        for s in all_segments(d, r) {
            let open = match s.entry(d) {
                None => true,
                Some(e) => !d.is_tied(e.0),
            };
            if open && fits(&s) {
                stack.push(vec![s]);
            }
        }
    }
    while let Some(word) = stack.pop() {
        let last = *word.last().unwrap();
        match last.exit(d) {
            Some(e) if d.is_tied(e.0) => {
                if word.len() < max_segments {
                    for s in successors(d, e) {
                        if fits(&s) {
                            let mut w = word.clone();
                            w.push(s);
                            stack.push(w);
                        }
                    }
                }
            }
            _ => {
                let v = StringDatum::new(word);
                if v.canonical() == v {
                    found.insert(v);
                }
            }
        }
    }
    found.into_iter().collect()
}

/// All band words with at most `max_segments` segments, one per class under
/// rotation, reversal and degree shift, normalized to top degree 0.
pub fn enumerate_bands(d: &Datum, max_segments: usize) -> Vec<BandWord> {
    if !d.is_gentle() {
        return Vec::new();
    }
    let mut found = BTreeSet::new();
    let mut stack: Vec<Vec<Segment>> = Vec::new();
    for s in all_segments(d, 0) {
        if !s.is_stalk(d) && s.entry(d).is_some_and(|e| d.is_tied(e.0)) {
            stack.push(vec![s]);
        }
    }
    while let Some(word) = stack.pop() {
        let first = word[0];
        let exit = word.last().unwrap().exit(d).expect("no stalks in a band");
        if d.partner(exit.0) == first.entry(d).map(|e| e.0) && first.entry(d).map(|e| e.1) == Some(exit.1) {
            let w = BandWord::new(word.clone());
            if !w.is_periodic() {
                found.insert(w.canonical());
            }
        }
        if word.len() < max_segments {
            for s in successors(d, exit) {
                if !s.is_stalk(d) {
                    let mut w = word.clone();
                    w.push(s);
                    stack.push(w);
                }
            }
        }
    }
    found.into_iter().collect()
}
