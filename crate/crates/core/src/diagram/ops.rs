use std::collections::{BTreeSet, VecDeque};

use super::{Crossing, DiagramError, EdgeId, LinkDiagram, Port, Seed};

impl LinkDiagram {
    /// Keeps the listed components, in their original order.
    pub fn sublink(&self, keep: &BTreeSet<usize>) -> Result<LinkDiagram, DiagramError> {
        if keep.is_empty() {
            return Err(DiagramError::EmptyKeep);
        }
        for &k in keep {
            self.check_component(k)?;
        }
        let drop: BTreeSet<usize> = (0..self.component_count()).filter(|i| !keep.contains(i)).collect();
        let gone: BTreeSet<usize> = (0..self.crossing_count())
            .filter(|&x| {
                let (u, o) = self.crossing_components(x);
                drop.contains(&u) || drop.contains(&o)
            })
            .collect();
        self.remove_crossings(&gone, &drop)
    }

    /// Places `other` beside `self`; its components follow ours.
    pub fn split_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let shift = self.edge_count() as EdgeId;
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| Crossing {
            ends: c.ends.map(|e| e + shift),
            sign: c.sign,
        }));
        let mut components = self.components.clone();
        components.extend(
            other
                .components
                .iter()
                .map(|c| c.iter().map(|e| e + shift).collect()),
        );
        LinkDiagram {
            crossings,
            components,
        }
    }

    /// Changes every crossing, giving the mirror image.
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.ends;
                if c.sign > 0 {
                    Crossing {
                        ends: [d, a, b, cc],
                        sign: -1,
                    }
                } else {
                    Crossing {
                        ends: [b, cc, d, a],
                        sign: 1,
                    }
                }
            })
            .collect();
        LinkDiagram {
            crossings,
            components: self.components.clone(),
        }
    }

    pub fn reverse_component(&self, c: usize) -> Result<LinkDiagram, DiagramError> {
        self.check_component(c)?;
        let comp = self.edge_components();
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let ru = comp[x.ends[0] as usize - 1] == c;
                let ro = comp[x.ends[x.over_in_slot()] as usize - 1] == c;
                let mut over_in = x.over_in_slot();
                let mut ends = x.ends;
                if ro {
                    over_in = (over_in + 2) % 4;
                }
                if ru {
                    ends = [ends[2], ends[3], ends[0], ends[1]];
                    over_in = (over_in + 2) % 4;
                }
                Crossing {
                    ends,
                    sign: if over_in == 3 { 1 } else { -1 },
                }
            })
            .collect();
        let mut components = self.components.clone();
        components[c].reverse();
        LinkDiagram::new(crossings, components)
    }

    /// Joins components `i` and `j` by an untwisted band. The merged
    /// component sits at `min(i, j)` and follows the orientation of `i`.
    pub fn band_sum(&self, i: usize, j: usize) -> Result<LinkDiagram, DiagramError> {
        if i == j {
            return Err(DiagramError::SelfBand);
        }
        self.check_component(i)?;
        self.check_component(j)?;
        let mut d = self.clone();
        if d.components[j].is_empty() || d.components[i].is_empty() {
            let mut components = d.components.clone();
            if components[i].is_empty() {
                components.swap(i, j);
            }
            components.remove(j);
            let (lo, hi) = (i.min(j), i.max(j));
            if i > j {
                // merged component was left at i, shifted down by one
                let merged = components.remove(hi - 1);
                components.insert(lo, merged);
            }
            return LinkDiagram::new(d.crossings, components);
        }
        loop {
            let piece = d.pieces();
            let ends = d.edge_ends();
            let pi = piece[ends[d.components[i][0] as usize - 1].0.crossing];
            let pj = piece[ends[d.components[j][0] as usize - 1].0.crossing];
            if pi != pj {
                let e = d.components[i][0];
                let f = d.components[j][0];
                return d.splice(i, j, e, f);
            }
            match d.common_face(i, j) {
                Some((e, fe, f, ff)) if fe == ff => return d.splice(i, j, e, f),
                Some(_) => d = d.reverse_component(j)?,
                None => d = d.push_toward(i, j)?,
            }
        }
    }

    /// First face (by edge positions in `i`, then `j`) touching both
    /// components, with each edge's direction relative to the face.
    /// Pairs running the same way around the face win.
    fn common_face(&self, i: usize, j: usize) -> Option<(EdgeId, bool, EdgeId, bool)> {
        let comp = self.edge_components();
        let pos = |e: EdgeId, c: usize| self.components[c].iter().position(|&x| x == e).unwrap();
        let mut best: Option<((bool, usize, usize), (EdgeId, bool, EdgeId, bool))> = None;
        for face in self.faces() {
            let halves: Vec<(EdgeId, bool)> = face
                .iter()
                .map(|p| {
                    let c = &self.crossings[p.crossing];
                    (c.ends[p.slot], !c.is_in_slot(p.slot))
                })
                .collect();
            for &(e, fe) in halves.iter().filter(|h| comp[h.0 as usize - 1] == i) {
                for &(f, ff) in halves.iter().filter(|h| comp[h.0 as usize - 1] == j) {
                    let key = (fe != ff, pos(e, i), pos(f, j));
                    if best.as_ref().is_none_or(|(k, _)| key < *k) {
                        best = Some((key, (e, fe, f, ff)));
                    }
                }
            }
        }
        best.map(|(_, v)| v)
    }

    /// Cuts edges `e` (in `i`) and `f` (in `j`) and reconnects them crosswise.
    fn splice(&self, i: usize, j: usize, e: EdgeId, f: EdgeId) -> Result<LinkDiagram, DiagramError> {
        let ends = self.edge_ends();
        let (te, he) = ends[e as usize - 1];
        let (tf, hf) = ends[f as usize - 1];
        let mut b = self.to_builder(&[e, f].into_iter().collect());
        b.connect(te, hf);
        b.connect(tf, he);
        let mut seeds = self.seeds();
        seeds[i] = Seed::Port(self.seed_for(i, e, te));
        seeds.remove(j);
        if i > j {
            let merged = seeds.remove(i - 1);
            seeds.insert(j, merged);
        }
        b.finish(&seeds)
    }

    /// Start port of component `i` after edge `e` (leaving `te`) is cut.
    fn seed_for(&self, i: usize, e: EdgeId, te: Port) -> Port {
        let first = self.components[i][0];
        if first == e {
            te
        } else {
            self.edge_ends()[first as usize - 1].0
        }
    }

    /// One finger move of component `i` across the first edge of a shortest
    /// dual path toward component `j`. The finger passes over.
    fn push_toward(&self, i: usize, j: usize) -> Result<LinkDiagram, DiagramError> {
        let comp = self.edge_components();
        let faces = self.faces();
        let partner = self.partners();
        let mut face_of = std::collections::BTreeMap::new();
        for (k, f) in faces.iter().enumerate() {
            for &p in f {
                face_of.insert(p, k);
            }
        }
        let label = |p: &Port| self.crossings[p.crossing].ends[p.slot];
        let touches = |f: &Vec<Port>, c: usize| f.iter().any(|p| comp[label(p) as usize - 1] == c);
        let mut prev: Vec<Option<(usize, Port)>> = vec![None; faces.len()];
        let mut dist = vec![usize::MAX; faces.len()];
        let mut queue = VecDeque::new();
        for (k, f) in faces.iter().enumerate() {
            if touches(f, i) {
                dist[k] = 0;
                queue.push_back(k);
            }
        }
        let mut target = None;
        while let Some(k) = queue.pop_front() {
            if touches(&faces[k], j) {
                target = Some(k);
                break;
            }
            for &p in &faces[k] {
                // the face across this edge is left of the opposite half-edge
                let q = partner[&p];
                let other = face_of[&q];
                if dist[other] == usize::MAX {
                    dist[other] = dist[k] + 1;
                    prev[other] = Some((k, p));
                    queue.push_back(other);
                }
            }
        }
        let mut k = target.ok_or(DiagramError::Construction("components not connected"))?;
        let mut step = None;
        while let Some((from, p)) = prev[k] {
            step = Some((from, p));
            k = from;
        }
        let (f0, g_half) = step.ok_or(DiagramError::Construction("no push needed"))?;
        let e_half = *faces[f0]
            .iter()
            .find(|p| comp[label(p) as usize - 1] == i)
            .ok_or(DiagramError::Construction("source face lost"))?;
        self.r2_push(e_half, g_half)
    }

    /// Pushes a finger of the edge at half-edge `e_half` over the edge at
    /// `g_half`; both half-edges bound the same face.
    pub(crate) fn r2_push(&self, e_half: Port, g_half: Port) -> Result<LinkDiagram, DiagramError> {
        let ce = &self.crossings[e_half.crossing];
        let cg = &self.crossings[g_half.crossing];
        let e = ce.ends[e_half.slot];
        let g = cg.ends[g_half.slot];
        if e == g {
            return Err(DiagramError::Construction("finger across its own edge"));
        }
        let e_fwd = !ce.is_in_slot(e_half.slot);
        let g_fwd = !cg.is_in_slot(g_half.slot);
        let ends = self.edge_ends();
        let (te, he) = ends[e as usize - 1];
        let (tg, hg) = ends[g as usize - 1];
        let mut b = self.to_builder(&[e, g].into_iter().collect());
        // arms: 0 = S (finger tip side), 1 = E, 2 = N, 3 = W; g runs W-E
        let g_in = if g_fwd { 3 } else { 1 };
        let x1 = b.add_crossing(g_in, if e_fwd { 0 } else { 2 });
        let x2 = b.add_crossing(g_in, if e_fwd { 2 } else { 0 });
        if e_fwd {
            b.connect(te, x2[2]);
            b.connect(x2[0], x1[0]);
            b.connect(x1[2], he);
        } else {
            b.connect(te, x1[2]);
            b.connect(x1[0], x2[0]);
            b.connect(x2[2], he);
        }
        if g_fwd {
            b.connect(tg, x1[3]);
            b.connect(x1[1], x2[3]);
            b.connect(x2[1], hg);
        } else {
            b.connect(tg, x2[1]);
            b.connect(x2[3], x1[1]);
            b.connect(x1[3], hg);
        }
        let mut seeds = self.seeds();
        let ce_idx = self.edge_components();
        let (ci, cgi) = (ce_idx[e as usize - 1], ce_idx[g as usize - 1]);
        seeds[ci] = Seed::Port(self.seed_for(ci, e, te));
        seeds[cgi] = Seed::Port(self.seed_for(cgi, g, tg));
        b.finish(&seeds)
    }
}
