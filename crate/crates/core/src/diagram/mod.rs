//! Oriented planar link diagrams in PD form.
//!
//! A crossing lists its four edge labels counterclockwise starting from the
//! incoming under strand, so slots 0 and 2 carry the under strand (in, out).
//! The over strand enters at slot 3 for a positive crossing and at slot 1
//! for a negative one. Edges are labelled `1..=2n` consecutively along the
//! components in order; crossingless components are empty edge lists.

pub(crate) mod builder;
mod ops;
mod pd_text;
mod simplify;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use builder::{PdBuilder, Port, Seed};

pub type EdgeId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("crossing {0} has sign {1}, expected +1 or -1")]
    BadSign(usize, i8),
    #[error("edge {0} must appear once as an incoming and once as an outgoing end")]
    EdgeUse(EdgeId),
    #[error("component list does not match the strand cycles: {0}")]
    ComponentMismatch(String),
    #[error("diagram is not planar (piece with {crossings} crossings has {faces} faces)")]
    NonPlanar { crossings: usize, faces: usize },
    #[error("component index {0} out of range ({1} components)")]
    ComponentIndex(usize, usize),
    #[error("sublink must keep at least one component")]
    EmptyKeep,
    #[error("band sum needs two distinct components")]
    SelfBand,
    #[error("PD parse error: {0}")]
    Pd(String),
    #[error("internal construction error: {0}")]
    Construction(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub ends: [EdgeId; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn over_in_slot(&self) -> usize {
        if self.sign > 0 {
            3
        } else {
            1
        }
    }

    pub fn over_out_slot(&self) -> usize {
        if self.sign > 0 {
            1
        } else {
            3
        }
    }

    pub fn is_in_slot(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_in_slot()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DiagramJson", try_from = "DiagramJson")]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    components: Vec<Vec<EdgeId>>,
}

#[derive(Serialize, Deserialize)]
struct ArcJson {
    label: EdgeId,
    component: usize,
    from: [usize; 2],
    to: [usize; 2],
}

/// Wire format. `arcs` is derived data and ignored on input.
#[derive(Serialize, Deserialize)]
struct DiagramJson {
    crossings: Vec<[EdgeId; 4]>,
    signs: Vec<i8>,
    components: Vec<Vec<EdgeId>>,
    #[serde(default)]
    arcs: Vec<ArcJson>,
}

impl From<LinkDiagram> for DiagramJson {
    fn from(d: LinkDiagram) -> Self {
        let comp = d.edge_components();
        let arcs = d
            .edge_ends()
            .iter()
            .enumerate()
            .map(|(i, (t, h))| ArcJson {
                label: i as EdgeId + 1,
                component: comp[i],
                from: [t.crossing, t.slot],
                to: [h.crossing, h.slot],
            })
            .collect();
        DiagramJson {
            crossings: d.crossings.iter().map(|c| c.ends).collect(),
            signs: d.crossings.iter().map(|c| c.sign).collect(),
            components: d.components,
            arcs,
        }
    }
}

impl TryFrom<DiagramJson> for LinkDiagram {
    type Error = DiagramError;

    fn try_from(j: DiagramJson) -> Result<Self, DiagramError> {
        if j.crossings.len() != j.signs.len() {
            return Err(DiagramError::ComponentMismatch(
                "crossings and signs differ in length".into(),
            ));
        }
        let crossings = j
            .crossings
            .into_iter()
            .zip(j.signs)
            .map(|(ends, sign)| Crossing { ends, sign })
            .collect();
        LinkDiagram::new(crossings, j.components)
    }
}

impl LinkDiagram {
    /// Validates and relabels edges consecutively along `components`.
    pub fn new(crossings: Vec<Crossing>, components: Vec<Vec<EdgeId>>) -> Result<Self, DiagramError> {
        for (i, c) in crossings.iter().enumerate() {
            if c.sign != 1 && c.sign != -1 {
                return Err(DiagramError::BadSign(i, c.sign));
            }
        }
        let ends = occurrences(&crossings)?;
        let mut seen = BTreeSet::new();
        for comp in &components {
            for (k, &e) in comp.iter().enumerate() {
                let Some(&(_, head)) = ends.get(&e) else {
                    return Err(DiagramError::ComponentMismatch(format!("unknown edge {e}")));
                };
                if !seen.insert(e) {
                    return Err(DiagramError::ComponentMismatch(format!("edge {e} listed twice")));
                }
                let next = crossings[head.crossing].ends[(head.slot + 2) % 4];
                if next != comp[(k + 1) % comp.len()] {
                    return Err(DiagramError::ComponentMismatch(format!(
                        "edge {e} is followed by {next}"
                    )));
                }
            }
        }
        if seen.len() != ends.len() {
            return Err(DiagramError::ComponentMismatch(
                "some edges belong to no component".into(),
            ));
        }
        let mut relabel = BTreeMap::new();
        for &e in components.iter().flatten() {
            let fresh = relabel.len() as EdgeId + 1;
            relabel.insert(e, fresh);
        }
        let crossings = crossings
            .into_iter()
            .map(|c| Crossing {
                ends: c.ends.map(|e| relabel[&e]),
                sign: c.sign,
            })
            .collect();
        let components = components
            .into_iter()
            .map(|c| c.into_iter().map(|e| relabel[&e]).collect())
            .collect();
        let d = LinkDiagram {
            crossings,
            components,
        };
        d.check_planar()?;
        Ok(d)
    }

    /// Builds a diagram whose components are discovered by following strands,
    /// ordered by smallest edge label, plus `loops` crossingless circles.
    pub fn from_crossings(crossings: Vec<Crossing>, loops: usize) -> Result<Self, DiagramError> {
        let ends = occurrences(&crossings)?;
        let mut visited = BTreeSet::new();
        let mut components = Vec::new();
        for &start in ends.keys() {
            if visited.contains(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut e = start;
            while visited.insert(e) {
                comp.push(e);
                let head = ends[&e].1;
                e = crossings[head.crossing].ends[(head.slot + 2) % 4];
            }
            components.push(comp);
        }
        components.extend(std::iter::repeat_with(Vec::new).take(loops));
        Self::new(crossings, components)
    }

    pub fn unknot() -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            components: vec![Vec::new()],
        }
    }

    /// `n` crossingless circles.
    pub fn unlink(n: usize) -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            components: vec![Vec::new(); n],
        }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn components(&self) -> &[Vec<EdgeId>] {
        &self.components
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    /// Component index of each edge, indexed by `label - 1`.
    pub fn edge_components(&self) -> Vec<usize> {
        let mut out = vec![0; self.edge_count()];
        for (i, comp) in self.components.iter().enumerate() {
            for &e in comp {
                out[e as usize - 1] = i;
            }
        }
        out
    }

    /// (tail, head) of each edge, indexed by `label - 1`.
    pub(crate) fn edge_ends(&self) -> Vec<(Port, Port)> {
        let blank = Port {
            crossing: usize::MAX,
            slot: 0,
        };
        let mut out = vec![(blank, blank); self.edge_count()];
        for (x, c) in self.crossings.iter().enumerate() {
            for (s, &e) in c.ends.iter().enumerate() {
                let p = Port { crossing: x, slot: s };
                if c.is_in_slot(s) {
                    out[e as usize - 1].1 = p;
                } else {
                    out[e as usize - 1].0 = p;
                }
            }
        }
        out
    }

    /// Components of the under and over strand at crossing `x`.
    pub fn crossing_components(&self, x: usize) -> (usize, usize) {
        let comp = self.edge_components();
        let c = &self.crossings[x];
        (
            comp[c.ends[0] as usize - 1],
            comp[c.ends[c.over_in_slot()] as usize - 1],
        )
    }

    fn strand_pairs(&self) -> Vec<(usize, usize, i8)> {
        let comp = self.edge_components();
        self.crossings
            .iter()
            .map(|c| {
                (
                    comp[c.ends[0] as usize - 1],
                    comp[c.ends[c.over_in_slot()] as usize - 1],
                    c.sign,
                )
            })
            .collect()
    }

    /// Sum of signs of the self-crossings of component `c`.
    pub fn writhe(&self, c: usize) -> i64 {
        self.strand_pairs()
            .into_iter()
            .filter(|&(u, o, _)| u == c && o == c)
            .map(|(_, _, s)| s as i64)
            .sum()
    }

    pub fn total_writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// Writhes on the diagonal, linking numbers off it.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.components.len();
        let mut m = vec![vec![0i64; n]; n];
        let mut twice = vec![vec![0i64; n]; n];
        for (u, o, s) in self.strand_pairs() {
            if u == o {
                m[u][u] += s as i64;
            } else {
                twice[u][o] += s as i64;
                twice[o][u] += s as i64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[i][j] = twice[i][j] / 2;
                }
            }
        }
        m
    }

    pub fn linking_number(&self, i: usize, j: usize) -> i64 {
        self.linking_matrix()[i][j]
    }

    pub(crate) fn check_component(&self, c: usize) -> Result<(), DiagramError> {
        if c >= self.components.len() {
            Err(DiagramError::ComponentIndex(c, self.components.len()))
        } else {
            Ok(())
        }
    }

    /// Faces as cycles of half-edges. A half-edge is the slot an edge is left
    /// from; each face lies to the left of its half-edges.
    pub(crate) fn faces(&self) -> Vec<Vec<Port>> {
        let partner = self.partners();
        let mut seen = BTreeSet::new();
        let mut faces = Vec::new();
        for x in 0..self.crossings.len() {
            for s in 0..4 {
                let start = Port { crossing: x, slot: s };
                if seen.contains(&start) {
                    continue;
                }
                let mut face = Vec::new();
                let mut p = start;
                while seen.insert(p) {
                    face.push(p);
                    let q = partner[&p];
                    p = Port {
                        crossing: q.crossing,
                        slot: (q.slot + 3) % 4,
                    };
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Other end of the edge at each slot.
    pub(crate) fn partners(&self) -> BTreeMap<Port, Port> {
        let mut m = BTreeMap::new();
        for (t, h) in self.edge_ends() {
            m.insert(t, h);
            m.insert(h, t);
        }
        m
    }

    /// Connected pieces of the crossing graph, as a piece id per crossing.
    pub(crate) fn pieces(&self) -> Vec<usize> {
        let n = self.crossings.len();
        let mut uf = UnionFind::new(n);
        for (t, h) in self.edge_ends() {
            uf.union(t.crossing, h.crossing);
        }
        (0..n).map(|x| uf.find(x)).collect()
    }

    fn check_planar(&self) -> Result<(), DiagramError> {
        let piece = self.pieces();
        let mut crossings: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in &piece {
            *crossings.entry(p).or_default() += 1;
        }
        let mut faces: BTreeMap<usize, usize> = BTreeMap::new();
        for f in self.faces() {
            *faces.entry(piece[f[0].crossing]).or_default() += 1;
        }
        for (p, &n) in &crossings {
            let f = faces.get(p).copied().unwrap_or(0);
            if f != n + 2 {
                return Err(DiagramError::NonPlanar { crossings: n, faces: f });
            }
        }
        Ok(())
    }

    /// Deletes the given crossings, joining the strands through each one.
    /// Components listed in `drop` are removed from the result.
    pub(crate) fn remove_crossings(
        &self,
        gone: &BTreeSet<usize>,
        drop: &BTreeSet<usize>,
    ) -> Result<LinkDiagram, DiagramError> {
        let mut uf = UnionFind::new(self.edge_count() + 1);
        for &x in gone {
            let c = &self.crossings[x];
            uf.union(c.ends[0] as usize, c.ends[2] as usize);
            uf.union(c.ends[1] as usize, c.ends[3] as usize);
        }
        let crossings: Vec<Crossing> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|(x, _)| !gone.contains(x))
            .map(|(_, c)| Crossing {
                ends: c.ends.map(|e| uf.find(e as usize) as EdgeId),
                sign: c.sign,
            })
            .collect();
        let present: BTreeSet<EdgeId> = crossings.iter().flat_map(|c| c.ends).collect();
        let mut components = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            if drop.contains(&i) {
                continue;
            }
            let mut out: Vec<EdgeId> = comp.iter().map(|&e| uf.find(e as usize) as EdgeId).collect();
            out.dedup();
            while out.len() > 1 && out.first() == out.last() {
                out.pop();
            }
            if out.len() == 1 && !present.contains(&out[0]) {
                out.clear();
            }
            components.push(out);
        }
        LinkDiagram::new(crossings, components)
    }

    /// Re-creates every crossing in a builder and links all edges except
    /// `skip`. Crossing `x` keeps index `x` and its slot layout.
    pub(crate) fn to_builder(&self, skip: &BTreeSet<EdgeId>) -> PdBuilder {
        let mut b = PdBuilder::new();
        for c in &self.crossings {
            b.copy_crossing(c);
        }
        for (i, (t, h)) in self.edge_ends().into_iter().enumerate() {
            if !skip.contains(&(i as EdgeId + 1)) {
                b.connect(t, h);
            }
        }
        b
    }

    /// Seeds reproducing the current components, in order.
    pub(crate) fn seeds(&self) -> Vec<Seed> {
        let ends = self.edge_ends();
        self.components
            .iter()
            .map(|c| match c.first() {
                Some(&e) => Seed::Port(ends[e as usize - 1].0),
                None => Seed::Loop,
            })
            .collect()
    }
}

/// (tail, head) slot of every label, checking one of each.
fn occurrences(crossings: &[Crossing]) -> Result<BTreeMap<EdgeId, (Port, Port)>, DiagramError> {
    let mut tails: BTreeMap<EdgeId, Port> = BTreeMap::new();
    let mut heads: BTreeMap<EdgeId, Port> = BTreeMap::new();
    for (x, c) in crossings.iter().enumerate() {
        for (s, &e) in c.ends.iter().enumerate() {
            let p = Port { crossing: x, slot: s };
            let slot_map = if c.is_in_slot(s) { &mut heads } else { &mut tails };
            if slot_map.insert(e, p).is_some() {
                return Err(DiagramError::EdgeUse(e));
            }
        }
    }
    let mut out = BTreeMap::new();
    for (&e, &t) in &tails {
        let h = heads.get(&e).ok_or(DiagramError::EdgeUse(e))?;
        out.insert(e, (t, *h));
    }
    if let Some(e) = heads.keys().find(|e| !tails.contains_key(e)) {
        return Err(DiagramError::EdgeUse(*e));
    }
    Ok(out)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
