//! `PD[X(a,b,c,d), ...]` text form.
//!
//! Each `X` lists labels counterclockwise from the incoming under strand.
//! Over-strand direction is inferred from the rest of the code; strands
//! that never pass under anything fall back to the increasing-label
//! convention. `O()` entries stand for crossingless circles.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use super::{Crossing, DiagramError, EdgeId, LinkDiagram};

impl LinkDiagram {
    pub fn to_pd_text(&self) -> String {
        let mut s = String::from("PD[");
        let mut first = true;
        for c in &self.crossings {
            if !first {
                s.push(',');
            }
            first = false;
            let [a, b, cc, d] = c.ends;
            let _ = write!(s, "X({a},{b},{cc},{d})");
        }
        for comp in &self.components {
            if comp.is_empty() {
                if !first {
                    s.push(',');
                }
                first = false;
                s.push_str("O()");
            }
        }
        s.push(']');
        s
    }

    pub fn from_pd_text(text: &str) -> Result<LinkDiagram, DiagramError> {
        let (tuples, loops) = parse_pd(text)?;
        let crossings = orient(&tuples)?;
        LinkDiagram::from_crossings(crossings, loops)
    }
}

fn perr(msg: impl Into<String>) -> DiagramError {
    DiagramError::Pd(msg.into())
}

fn parse_pd(text: &str) -> Result<(Vec<[EdgeId; 4]>, usize), DiagramError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact
        .strip_prefix("PD[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| perr("expected PD[...]"))?;
    let mut tuples = Vec::new();
    let mut loops = 0;
    let mut rest = body;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("O()") {
            loops += 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix("X(") {
            let close = r.find(')').ok_or_else(|| perr("unclosed X("))?;
            let nums: Vec<&str> = r[..close].split(',').collect();
            if nums.len() != 4 {
                return Err(perr(format!("X({}) needs 4 labels", &r[..close])));
            }
            let mut t = [0; 4];
            for (k, n) in nums.iter().enumerate() {
                t[k] = n
                    .parse::<EdgeId>()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| perr(format!("bad label {n:?}")))?;
            }
            tuples.push(t);
            rest = &r[close + 1..];
        } else {
            return Err(perr(format!("unexpected text at {rest:?}")));
        }
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(perr("trailing comma"));
            }
            rest = r;
        } else if !rest.is_empty() {
            return Err(perr(format!("expected ',' at {rest:?}")));
        }
    }
    Ok((tuples, loops))
}

/// Decides which odd slot of each crossing is the incoming over end.
fn orient(tuples: &[[EdgeId; 4]]) -> Result<Vec<Crossing>, DiagramError> {
    // occurrences of each label as (crossing, slot)
    let mut occ: BTreeMap<EdgeId, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, t) in tuples.iter().enumerate() {
        for (s, &e) in t.iter().enumerate() {
            occ.entry(e).or_default().push((x, s));
        }
    }
    for (&e, v) in &occ {
        if v.len() != 2 {
            return Err(perr(format!("label {e} appears {} times", v.len())));
        }
    }
    // incoming[(x, s)] for odd slots
    let mut incoming: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    let other = |x: usize, s: usize| -> (usize, usize) {
        let v = &occ[&tuples[x][s]];
        if v[0] == (x, s) {
            v[1]
        } else {
            v[0]
        }
    };
    let mut queue: VecDeque<((usize, usize), bool)> = VecDeque::new();
    for (x, _) in tuples.iter().enumerate() {
        for s in [0usize, 2] {
            let o = other(x, s);
            if o.1 % 2 == 0 && o.1 == s {
                return Err(perr(format!("label {} is under-incoming or under-outgoing twice", tuples[x][s])));
            }
            if o.1 % 2 == 1 {
                queue.push_back((o, s == 2));
            }
        }
    }
    let assign = |start: ((usize, usize), bool),
                      incoming: &mut BTreeMap<(usize, usize), bool>,
                      queue: &mut VecDeque<((usize, usize), bool)>|
     -> Result<(), DiagramError> {
        queue.push_back(start);
        while let Some((p, val)) = queue.pop_front() {
            if let Some(&old) = incoming.get(&p) {
                if old != val {
                    return Err(perr("inconsistent strand orientation"));
                }
                continue;
            }
            incoming.insert(p, val);
            queue.push_back(((p.0, (p.1 + 2) % 4), !val));
            let o = other(p.0, p.1);
            if o.1 % 2 == 1 {
                queue.push_back((o, !val));
            } else if (o.1 == 0) == val {
                return Err(perr("inconsistent strand orientation"));
            }
        }
        Ok(())
    };
    let seeds: Vec<_> = queue.drain(..).collect();
    for s in seeds {
        assign(s, &mut incoming, &mut queue)?;
    }
    for (x, t) in tuples.iter().enumerate() {
        if incoming.contains_key(&(x, 1)) {
            continue;
        }
        let (b, d) = (t[1], t[3]);
        let d_to_b = b == d + 1 || d > b + 1;
        assign(((x, 3), d_to_b), &mut incoming, &mut queue)?;
    }
    Ok(tuples
        .iter()
        .enumerate()
        .map(|(x, &ends)| Crossing {
            ends,
            sign: if incoming[&(x, 3)] { 1 } else { -1 },
        })
        .collect())
}
