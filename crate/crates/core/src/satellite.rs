//! Bing and Whitehead doubles of one component.
//!
//! The component is first given `|w|` kinks of sign `-sign(w)` so its
//! writhe vanishes, then replaced by its blackboard 2-cable. The two
//! parallels are closed up by a clasp tangle placed on the edge right
//! after the kinks. Crossing count of the result is
//! `others + 2 * mixed + 4 * (self + |w|) + t` with `t = 4` for Bing and
//! `t = 2` for Whitehead.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::diagram::{DiagramError, EdgeId, LinkDiagram, PdBuilder, Port, Seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DoublingKind {
    Bing,
    WhiteheadPositive,
    WhiteheadNegative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DoublingPattern {
    pub kind: DoublingKind,
    pub framing: i64,
}

impl DoublingPattern {
    pub fn bing() -> Self {
        DoublingPattern {
            kind: DoublingKind::Bing,
            framing: 0,
        }
    }

    pub fn whitehead(sign: i8) -> Self {
        DoublingPattern {
            kind: if sign > 0 {
                DoublingKind::WhiteheadPositive
            } else {
                DoublingKind::WhiteheadNegative
            },
            framing: 0,
        }
    }
}

/// Replaces component `c` by two unlinked components clasped in the Bing
/// pattern. They occupy positions `c` and `c + 1`; later components shift.
pub fn bing_double(d: &LinkDiagram, c: usize) -> Result<LinkDiagram, DiagramError> {
    apply(d, c, DoublingPattern::bing())
}

/// Bing doubles the first component `n` times.
pub fn iterated_bing_double(d: &LinkDiagram, n: usize) -> Result<LinkDiagram, DiagramError> {
    let mut out = d.clone();
    for _ in 0..n {
        out = bing_double(&out, 0)?;
    }
    Ok(out)
}

/// Untwisted Whitehead double of component `c` with a clasp of sign `sign`.
pub fn whitehead_double(d: &LinkDiagram, c: usize, sign: i8) -> Result<LinkDiagram, DiagramError> {
    apply(d, c, DoublingPattern::whitehead(sign))
}

pub fn apply(d: &LinkDiagram, c: usize, pattern: DoublingPattern) -> Result<LinkDiagram, DiagramError> {
    if c >= d.component_count() {
        return Err(DiagramError::ComponentIndex(c, d.component_count()));
    }
    let w = d.writhe(c) - pattern.framing;
    let kinks = w.unsigned_abs() as usize;
    let straight = add_kinks(d, c, kinks, if w > 0 { -1 } else { 1 })?;
    let tangle_edge = straight.components()[c].get(2 * kinks).copied();
    cable(&straight, c, tangle_edge, pattern.kind)
}

/// Adds `count` kinks of the given sign on the first edge of component `c`.
fn add_kinks(d: &LinkDiagram, c: usize, count: usize, sign: i8) -> Result<LinkDiagram, DiagramError> {
    if count == 0 {
        return Ok(d.clone());
    }
    let e = d.components()[c][0];
    let (te, he) = d.edge_ends()[e as usize - 1];
    let mut b = d.to_builder(&[e].into_iter().collect());
    let mut prev = te;
    for _ in 0..count {
        // first pass W -> E, loop E -> S, second pass S -> N
        let x = if sign > 0 {
            b.add_crossing(0, 3)
        } else {
            b.add_crossing(3, 0)
        };
        b.connect(prev, x[3]);
        b.connect(x[1], x[0]);
        prev = x[2];
    }
    b.connect(prev, he);
    b.finish(&d.seeds())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Tag {
    Single,
    /// Parallel on the left, same direction.
    P,
    /// Parallel on the right, reversed.
    Q,
}

struct Line {
    pos: i8,
    forward: bool,
    tag: Tag,
}

struct Tangle {
    p_in: Port,
    p_out: Port,
    q_in: Port,
    q_out: Port,
    /// Out-port on the ring, for Bing.
    ring: Option<Port>,
}

fn bing_tangle(b: &mut PdBuilder) -> Tangle {
    // left hairpin tip at x = -1 heading south, right tip at x = 1 heading
    // north, ring is the rectangle |y| = 1/2 running counterclockwise
    let c1 = b.add_crossing(2, 1);
    let c2 = b.add_crossing(3, 2);
    let c3 = b.add_crossing(0, 1);
    let c4 = b.add_crossing(3, 0);
    b.connect(c1[0], c2[2]);
    b.connect(c4[2], c3[0]);
    b.connect(c1[3], c2[3]);
    b.connect(c2[1], c4[3]);
    b.connect(c4[1], c3[1]);
    b.connect(c3[3], c1[1]);
    Tangle {
        p_in: c1[2],
        q_out: c2[0],
        q_in: c4[0],
        p_out: c3[2],
        ring: Some(c1[3]),
    }
}

fn clasp_tangle(b: &mut PdBuilder, sign: i8) -> Tangle {
    // left hairpin runs east along y = 1 and back west along y = -1; the
    // right hairpin's tip climbs x = -1 through both
    let (x1, x2) = if sign > 0 {
        (b.add_crossing(0, 3), b.add_crossing(1, 0))
    } else {
        (b.add_crossing(3, 0), b.add_crossing(0, 1))
    };
    b.connect(x1[1], x2[1]);
    b.connect(x2[2], x1[0]);
    Tangle {
        p_in: x1[3],
        p_out: x1[2],
        q_in: x2[0],
        q_out: x2[3],
        ring: None,
    }
}

fn cable(d: &LinkDiagram, c: usize, tangle_edge: Option<EdgeId>, kind: DoublingKind) -> Result<LinkDiagram, DiagramError> {
    let comp = d.edge_components();
    let mut b = PdBuilder::new();
    let mut ext: BTreeMap<(usize, usize, Tag), Port> = BTreeMap::new();
    for (x, cr) in d.crossings().iter().enumerate() {
        let cu = comp[cr.ends[0] as usize - 1];
        let co = comp[cr.ends[cr.over_in_slot()] as usize - 1];
        let east = cr.sign > 0;
        let verticals = if cu == c {
            vec![
                Line { pos: -1, forward: true, tag: Tag::P },
                Line { pos: 1, forward: false, tag: Tag::Q },
            ]
        } else {
            vec![Line { pos: 0, forward: true, tag: Tag::Single }]
        };
        let mut horizontals = if co == c {
            let (py, qy) = if east { (1, -1) } else { (-1, 1) };
            vec![
                Line { pos: py, forward: east, tag: Tag::P },
                Line { pos: qy, forward: !east, tag: Tag::Q },
            ]
        } else {
            vec![Line { pos: 0, forward: east, tag: Tag::Single }]
        };
        horizontals.sort_by_key(|h| h.pos);
        let grid: Vec<Vec<[Port; 4]>> = verticals
            .iter()
            .map(|v| {
                horizontals
                    .iter()
                    .map(|h| b.add_crossing(if v.forward { 0 } else { 2 }, if h.forward { 3 } else { 1 }))
                    .collect()
            })
            .collect();
        let (nv, nh) = (verticals.len(), horizontals.len());
        for (a, v) in verticals.iter().enumerate() {
            for k in 1..nh {
                let (lo, hi) = (grid[a][k - 1], grid[a][k]);
                if v.forward {
                    b.connect(lo[2], hi[0]);
                } else {
                    b.connect(hi[0], lo[2]);
                }
            }
            ext.insert((x, 0, v.tag), grid[a][0][0]);
            ext.insert((x, 2, v.tag), grid[a][nh - 1][2]);
        }
        for (k, h) in horizontals.iter().enumerate() {
            for a in 1..nv {
                let (l, r) = (grid[a - 1][k], grid[a][k]);
                if h.forward {
                    b.connect(l[1], r[3]);
                } else {
                    b.connect(r[3], l[1]);
                }
            }
            ext.insert((x, 3, h.tag), grid[0][k][3]);
            ext.insert((x, 1, h.tag), grid[nv - 1][k][1]);
        }
    }
    let tangle = match kind {
        DoublingKind::Bing => bing_tangle(&mut b),
        DoublingKind::WhiteheadPositive => clasp_tangle(&mut b, 1),
        DoublingKind::WhiteheadNegative => clasp_tangle(&mut b, -1),
    };
    let ends = d.edge_ends();
    let port = |p: Port, tag: Tag| ext[&(p.crossing, p.slot, tag)];
    for (i, &(t, h)) in ends.iter().enumerate() {
        let e = i as EdgeId + 1;
        if comp[i] != c {
            b.connect(port(t, Tag::Single), port(h, Tag::Single));
        } else if Some(e) == tangle_edge {
            b.connect(port(t, Tag::P), tangle.p_in);
            b.connect(tangle.p_out, port(h, Tag::P));
            b.connect(port(h, Tag::Q), tangle.q_in);
            b.connect(tangle.q_out, port(t, Tag::Q));
        } else {
            b.connect(port(t, Tag::P), port(h, Tag::P));
            b.connect(port(h, Tag::Q), port(t, Tag::Q));
        }
    }
    if tangle_edge.is_none() {
        b.connect(tangle.p_out, tangle.p_in);
        b.connect(tangle.q_out, tangle.q_in);
    }
    let mut seeds = Vec::new();
    for (k, edges) in d.components().iter().enumerate() {
        if k == c {
            seeds.push(Seed::Port(tangle.p_out));
            if let Some(r) = tangle.ring {
                seeds.push(Seed::Port(r));
            }
        } else if let Some(&e) = edges.first() {
            seeds.push(Seed::Port(port(ends[e as usize - 1].0, Tag::Single)));
        } else {
            seeds.push(Seed::Loop);
        }
    }
    b.finish(&seeds)
}

/// Crossing count a doubling of component `c` produces.
pub fn expected_crossings(d: &LinkDiagram, c: usize, pattern: DoublingPattern) -> usize {
    let mut own = 0;
    let mut mixed = 0;
    for x in 0..d.crossing_count() {
        let (u, o) = d.crossing_components(x);
        match (u == c, o == c) {
            (true, true) => own += 1,
            (false, false) => {}
            _ => mixed += 1,
        }
    }
    let others = d.crossing_count() - own - mixed;
    let kinks = (d.writhe(c) - pattern.framing).unsigned_abs() as usize;
    let clasp = if pattern.kind == DoublingKind::Bing { 4 } else { 2 };
    others + 2 * mixed + 4 * (own + kinks) + clasp
}

/// Components carried over unchanged by a doubling of `c`.
pub fn untouched(d: &LinkDiagram, c: usize) -> BTreeSet<usize> {
    (0..d.component_count()).filter(|&k| k != c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bing_of_unknot() {
        let d = bing_double(&LinkDiagram::unknot(), 0).unwrap();
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.linking_matrix(), vec![vec![0, 0], vec![0, 0]]);
        for k in 0..2 {
            let s = d.sublink(&[k].into_iter().collect()).unwrap().simplify();
            assert_eq!(s, LinkDiagram::unknot());
        }
    }

    #[test]
    fn whitehead_of_unknot_simplifies() {
        for s in [1, -1] {
            let d = whitehead_double(&LinkDiagram::unknot(), 0, s).unwrap();
            assert_eq!(d.crossing_count(), 2);
            assert_eq!(d.writhe(0), 2 * s as i64);
            assert_eq!(d.simplify(), LinkDiagram::unknot());
        }
    }

    #[test]
    fn iterated_unknot() {
        let d = iterated_bing_double(&LinkDiagram::unknot(), 2).unwrap();
        assert_eq!(d.component_count(), 3);
        assert!(d.linking_matrix().iter().flatten().all(|&v| v == 0));
        assert_eq!(iterated_bing_double(&d, 0).unwrap(), d);
    }

    #[test]
    fn bad_index() {
        assert!(bing_double(&LinkDiagram::unknot(), 1).is_err());
    }
}
