//! Dowker–Thistlethwaite codes: parsing, validation, serialization,
//! knot reconstruction and verification-script export.
//!
//! Positions along the link are numbered `1..=2N`; component `k` owns a
//! contiguous block of `2 * len_k` positions. Entry `i` of a component pairs
//! the component's `i`-th odd position with an even position. A negative
//! entry means the strand passes under at the odd visit.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Crossing, DiagramError, EdgeId, LinkDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("entry {0} is odd")]
    OddEntry(i64),
    #[error("entry 0 is not allowed")]
    ZeroEntry,
    #[error("entry {0} repeats an absolute value")]
    Duplicate(i64),
    #[error("entry {0} is out of range 2..={1}")]
    OutOfRange(i64, i64),
    #[error("even label {0} is missing")]
    Gap(i64),
    #[error("crossing_count {count} does not match {entries} entries")]
    CountMismatch { count: usize, entries: usize },
    #[error("entry {0} pairs a position with its neighbour (a kink)")]
    Nugatory(i64),
    #[error("a component must have at least one entry")]
    EmptyComponent,
    #[error("reconstruction needs a knot code, got {0} components")]
    NotAKnot(usize),
    #[error("reconstruction needs at least one crossing")]
    Empty,
    #[error("code is not realizable as a planar diagram")]
    NotRealizable,
    #[error("planar realization search gave up after {0} steps")]
    SearchBudget(usize),
    #[error("diagram has no DT code: {0}")]
    NoCode(&'static str),
    #[error("label {0:?} is not a valid script identifier")]
    BadLabel(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDt")]
pub struct DtCode {
    components: Vec<Vec<i64>>,
    crossing_count: usize,
}

#[derive(Deserialize)]
struct RawDt {
    components: Vec<Vec<i64>>,
    crossing_count: usize,
}

impl TryFrom<RawDt> for DtCode {
    type Error = CodecError;

    fn try_from(r: RawDt) -> Result<Self, CodecError> {
        let total: usize = r.components.iter().map(Vec::len).sum();
        if total != r.crossing_count {
            return Err(CodecError::CountMismatch {
                count: r.crossing_count,
                entries: total,
            });
        }
        DtCode::new(r.components)
    }
}

impl DtCode {
    pub fn new(components: Vec<Vec<i64>>) -> Result<Self, CodecError> {
        let n = components.iter().map(Vec::len).sum::<usize>();
        let top = 2 * n as i64;
        let mut seen = BTreeSet::new();
        for &e in components.iter().flatten() {
            if e == 0 {
                return Err(CodecError::ZeroEntry);
            }
            if e % 2 != 0 {
                return Err(CodecError::OddEntry(e));
            }
            if e.abs() > top {
                return Err(CodecError::OutOfRange(e, top));
            }
            if !seen.insert(e.abs()) {
                return Err(CodecError::Duplicate(e));
            }
        }
        if let Some(missing) = (1..=n as i64).map(|k| 2 * k).find(|v| !seen.contains(v)) {
            return Err(CodecError::Gap(missing));
        }
        let mut start = 1i64;
        for comp in &components {
            if comp.is_empty() {
                return Err(CodecError::EmptyComponent);
            }
            let len = 2 * comp.len() as i64;
            let last = start + len - 1;
            for (k, &e) in comp.iter().enumerate() {
                let odd = start + 2 * k as i64;
                let even = e.abs();
                if even == odd + 1 || even == odd - 1 || (odd == start && even == last) {
                    return Err(CodecError::Nugatory(e));
                }
            }
            start += len;
        }
        Ok(DtCode {
            crossing_count: n,
            components,
        })
    }

    pub fn components(&self) -> &[Vec<i64>] {
        &self.components
    }

    pub fn crossing_count(&self) -> usize {
        self.crossing_count
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn parse(text: &str) -> Result<Self, CodecError> {
        Parser { s: text.as_bytes(), i: 0 }.dt()
    }

    /// Knot diagram realizing this code.
    pub fn to_diagram(&self) -> Result<LinkDiagram, CodecError> {
        if self.components.len() != 1 {
            return Err(CodecError::NotAKnot(self.components.len()));
        }
        realize(&self.components[0])
    }

    /// Code of a knot diagram read from the start of its edge list.
    pub fn from_diagram(d: &LinkDiagram) -> Result<Self, CodecError> {
        if d.component_count() != 1 {
            return Err(CodecError::NotAKnot(d.component_count()));
        }
        let n = d.crossing_count();
        if n == 0 {
            return Err(CodecError::Empty);
        }
        let ends = d.edge_ends();
        // visits in order: position p is the head of the p-th edge
        let mut visits: Vec<Vec<(i64, bool)>> = vec![Vec::new(); n];
        for (k, &e) in d.components()[0].iter().enumerate() {
            let head = ends[e as usize - 1].1;
            visits[head.crossing].push((k as i64 + 1, head.slot == 0));
        }
        let mut entries = vec![0i64; n];
        for v in &visits {
            let (odd, even) = match (v[0].0 % 2, v[1].0 % 2) {
                (1, 0) => (v[0], v[1]),
                (0, 1) => (v[1], v[0]),
                _ => return Err(CodecError::NoCode("crossing visited twice at equal parity")),
            };
            entries[(odd.0 as usize - 1) / 2] = if odd.1 { -even.0 } else { even.0 };
        }
        Ok(DtCode::new(vec![entries])?)
    }
}

impl fmt::Display for DtCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DT:[")?;
        for (k, comp) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str("(")?;
            for (i, e) in comp.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("]")
    }
}

impl std::str::FromStr for DtCode {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, CodecError> {
        DtCode::parse(s)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, CodecError> {
        Err(CodecError::Syntax {
            pos: self.i,
            msg: msg.to_string(),
        })
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, tok: &[u8]) -> Result<(), CodecError> {
        self.ws();
        if self.s[self.i..].starts_with(tok) {
            self.i += tok.len();
            Ok(())
        } else {
            self.err(&format!("expected {:?}", String::from_utf8_lossy(tok)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn int(&mut self) -> Result<i64, CodecError> {
        self.ws();
        let start = self.i;
        if matches!(self.s.get(self.i), Some(b'-' | b'+')) {
            self.i += 1;
        }
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        let tok = std::str::from_utf8(&self.s[start..self.i]).unwrap_or("");
        match tok.parse::<i64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.i = start;
                self.err("expected an integer")
            }
        }
    }

    fn dt(mut self) -> Result<DtCode, CodecError> {
        self.eat(b"DT:")?;
        self.eat(b"[")?;
        let mut comps = Vec::new();
        loop {
            self.eat(b"(")?;
            let mut comp = vec![self.int()?];
            while self.peek() == Some(b',') {
                self.i += 1;
                comp.push(self.int()?);
            }
            self.eat(b")")?;
            comps.push(comp);
            match self.peek() {
                Some(b',') => self.i += 1,
                Some(b']') => break,
                _ => return self.err("expected ',' or ']'"),
            }
        }
        self.eat(b"]")?;
        self.ws();
        if self.i != self.s.len() {
            return self.err("trailing input");
        }
        DtCode::new(comps)
    }
}

/// Plain-text script that checks hyperbolicity and computes the symmetry
/// group order of the code's complement in an external tool.
pub fn verification_script(code: &DtCode, label: &str) -> Result<String, CodecError> {
    let ok = label
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ok {
        return Err(CodecError::BadLabel(label.to_string()));
    }
    let r = if label == "R" { "R_" } else { "R" };
    Ok(format!(
        "import snappy\n\
         {label} = snappy.Manifold('{code}')\n\
         {label}.verify_hyperbolicity()\n\
         {r} = {label}.canonical_retriangulation(verified = True)\n\
         len({r}.isomorphisms_to({r}))\n"
    ))
}

const SEARCH_BUDGET: usize = 2_000_000;

/// Rotation-system embedding grown along the curve. Vertex 0 is an extra
/// point on the edge entering position 1; crossing `k` is vertex `k + 1`.
#[derive(Clone)]
struct Embedding {
    rot: Vec<Vec<usize>>,
    twin: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl Embedding {
    fn vertex(d: usize) -> usize {
        if d < 2 {
            0
        } else {
            (d - 2) / 4 + 1
        }
    }

    fn cw(&self, d: usize) -> usize {
        let r = &self.rot[Self::vertex(d)];
        let i = r.iter().position(|&x| x == d).unwrap();
        r[(i + r.len() - 1) % r.len()]
    }

    /// Darts left from while walking the face beside the dangling dart.
    fn face_of(&self, start: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut x = start;
        loop {
            out.insert(x);
            let t = if self.twin[x] == NONE { x } else { self.twin[x] };
            x = self.cw(t);
            if x == start {
                return out;
            }
        }
    }

    fn link(&mut self, a: usize, b: usize) {
        self.twin[a] = b;
        self.twin[b] = a;
    }
}

// dart offsets within a crossing
const IN1: usize = 0;
const OUT1: usize = 1;
const IN2: usize = 2;
const OUT2: usize = 3;

fn realize(entries: &[i64]) -> Result<LinkDiagram, CodecError> {
    let n = entries.len();
    if n == 0 {
        return Err(CodecError::Empty);
    }
    let m = 2 * n;
    let mut crossing_at = vec![0usize; m + 1];
    let mut first_visit = vec![false; m + 1];
    for (k, &e) in entries.iter().enumerate() {
        let odd = 2 * k + 1;
        let even = e.unsigned_abs() as usize;
        crossing_at[odd] = k;
        crossing_at[even] = k;
        first_visit[odd.min(even)] = true;
    }
    let mut emb = Embedding {
        rot: vec![Vec::new(); n + 1],
        twin: vec![NONE; 2 + 4 * n],
    };
    emb.rot[0] = vec![0];
    let mut steps = 0;
    let mut search = Search {
        crossing_at: &crossing_at,
        first_visit: &first_visit,
        m,
        steps: &mut steps,
        branched: false,
    };
    let emb = search.run(1, emb, 0)?.ok_or(CodecError::NotRealizable)?;
    build_diagram(entries, &emb, &crossing_at, &first_visit)
}

struct Search<'a> {
    crossing_at: &'a [usize],
    first_visit: &'a [bool],
    m: usize,
    steps: &'a mut usize,
    branched: bool,
}

impl Search<'_> {
    fn run(&mut self, start: usize, mut emb: Embedding, mut dangling: usize) -> Result<Option<Embedding>, CodecError> {
        let mut p = start;
        loop {
            *self.steps += 1;
            if *self.steps > SEARCH_BUDGET {
                return Err(CodecError::SearchBudget(SEARCH_BUDGET));
            }
            if p > self.m {
                if !emb.face_of(dangling).contains(&0) {
                    return Ok(None);
                }
                emb.rot[0].push(1);
                emb.link(dangling, 1);
                return Ok(Some(emb));
            }
            let k = self.crossing_at[p];
            let base = 2 + 4 * k;
            if self.first_visit[p] {
                emb.rot[k + 1] = vec![base + IN1, base + OUT1];
                emb.link(dangling, base + IN1);
                dangling = base + OUT1;
                p += 1;
                continue;
            }
            let face = emb.face_of(dangling);
            // corner after in1 or after out1
            let mut options: Vec<bool> = [true, false]
                .into_iter()
                .filter(|&after_in| face.contains(&(base + if after_in { IN1 } else { OUT1 })))
                .collect();
            if options.len() == 2 && !self.branched {
                // the two choices are reflections of each other
                self.branched = true;
                options.truncate(1);
            }
            let apply = |mut e: Embedding, after_in: bool| {
                e.rot[k + 1] = if after_in {
                    vec![base + IN1, base + IN2, base + OUT1, base + OUT2]
                } else {
                    vec![base + IN1, base + OUT2, base + OUT1, base + IN2]
                };
                e.link(dangling, base + IN2);
                e
            };
            match options.as_slice() {
                [] => return Ok(None),
                [only] => {
                    emb = apply(emb, *only);
                    dangling = base + OUT2;
                    p += 1;
                }
                _ => {
                    for &choice in &options {
                        let next = apply(emb.clone(), choice);
                        if let Some(done) = self.run(p + 1, next, base + OUT2)? {
                            return Ok(Some(done));
                        }
                    }
                    return Ok(None);
                }
            }
        }
    }
}

fn build_diagram(
    entries: &[i64],
    emb: &Embedding,
    crossing_at: &[usize],
    first_visit: &[bool],
) -> Result<LinkDiagram, CodecError> {
    let n = entries.len();
    let m = 2 * n;
    // edge p runs from position p to p + 1; edge m closes up to position 1
    let in_edge = |p: usize| if p == 1 { m } else { p - 1 } as EdgeId;
    let mut crossings = Vec::with_capacity(n);
    for (k, &e) in entries.iter().enumerate() {
        let odd = 2 * k + 1;
        let even = e.unsigned_abs() as usize;
        debug_assert_eq!(crossing_at[odd], k);
        let (first, second) = (odd.min(even), odd.max(even));
        debug_assert!(first_visit[first]);
        let base = 2 + 4 * k;
        let edge_of = |d: usize| -> (EdgeId, bool) {
            match d - base {
                IN1 => (in_edge(first), true),
                OUT1 => (first as EdgeId, false),
                IN2 => (in_edge(second), true),
                _ => (second as EdgeId, false),
            }
        };
        let under_pos = if e < 0 { odd } else { even };
        let under_in = if under_pos == first { base + IN1 } else { base + IN2 };
        let rot = &emb.rot[k + 1];
        let i = rot.iter().position(|&d| d == under_in).unwrap();
        let ccw: Vec<usize> = (0..4).map(|t| rot[(i + t) % 4]).collect();
        let ends = [0, 1, 2, 3].map(|t| edge_of(ccw[t]).0);
        let sign = if edge_of(ccw[3]).1 { 1 } else { -1 };
        crossings.push(Crossing { ends, sign });
    }
    let mut comp = vec![m as EdgeId];
    comp.extend(1..m as EdgeId);
    Ok(LinkDiagram::new(crossings, vec![comp])?)
}
