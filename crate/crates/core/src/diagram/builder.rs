//! Port-level assembly of planar diagrams.
//!
//! Crossings are placed with their four arms listed counterclockwise, and
//! arms are then wired together with directed links. `finish` walks the
//! links to recover components, labels edges consecutively along each
//! component and produces a validated [`LinkDiagram`].

use std::collections::BTreeMap;

use super::{Crossing, DiagramError, EdgeId, LinkDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Port {
    pub crossing: usize,
    pub slot: usize,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Seed {
    /// Component passing through this out-port.
    Port(Port),
    /// Crossingless circle.
    Loop,
}

#[derive(Default)]
pub(crate) struct PdBuilder {
    signs: Vec<i8>,
    links: BTreeMap<Port, Port>,
    incoming: BTreeMap<Port, Port>,
}

impl PdBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a crossing whose arms `0..4` are listed counterclockwise.
    /// Arms `a` and `a + 2` form one strand. `under_in` is the arm where the
    /// under strand enters, `over_in` the arm where the over strand enters.
    /// Returns the port of each arm, indexed by arm.
    pub fn add_crossing(&mut self, under_in: usize, over_in: usize) -> [Port; 4] {
        assert!(under_in < 4 && over_in < 4 && (under_in + over_in) % 2 == 1);
        let crossing = self.signs.len();
        let over_slot = (over_in + 4 - under_in) % 4;
        self.signs.push(if over_slot == 3 { 1 } else { -1 });
        let mut ports = [Port { crossing, slot: 0 }; 4];
        for (arm, p) in ports.iter_mut().enumerate() {
            p.slot = (arm + 4 - under_in) % 4;
        }
        ports
    }

    /// Re-creates an existing crossing with identical slot layout.
    pub fn copy_crossing(&mut self, c: &Crossing) -> [Port; 4] {
        self.add_crossing(0, c.over_in_slot())
    }

    pub fn is_out(&self, p: Port) -> bool {
        let over_in = if self.signs[p.crossing] > 0 { 3 } else { 1 };
        !(p.slot == 0 || p.slot == over_in)
    }

    pub fn connect(&mut self, from: Port, to: Port) {
        debug_assert!(self.is_out(from), "link must leave through an out-port");
        debug_assert!(!self.is_out(to), "link must enter through an in-port");
        let prev = self.links.insert(from, to);
        debug_assert!(prev.is_none(), "out-port {from:?} linked twice");
        let prev = self.incoming.insert(to, from);
        debug_assert!(prev.is_none(), "in-port {to:?} linked twice");
    }

    pub fn finish(self, seeds: &[Seed]) -> Result<LinkDiagram, DiagramError> {
        let n = self.signs.len();
        let mut ends = vec![[0 as EdgeId; 4]; n];
        let mut components = Vec::with_capacity(seeds.len());
        let mut label: EdgeId = 0;
        let mut used = 0usize;
        for seed in seeds {
            match *seed {
                Seed::Loop => components.push(Vec::new()),
                Seed::Port(start) => {
                    let mut comp = Vec::new();
                    let mut p = start;
                    loop {
                        let q = *self
                            .links
                            .get(&p)
                            .ok_or(DiagramError::Construction("dangling out-port"))?;
                        label += 1;
                        used += 1;
                        if ends[p.crossing][p.slot] != 0 {
                            return Err(DiagramError::Construction("component seeded twice"));
                        }
                        ends[p.crossing][p.slot] = label;
                        ends[q.crossing][q.slot] = label;
                        comp.push(label);
                        p = Port {
                            crossing: q.crossing,
                            slot: (q.slot + 2) % 4,
                        };
                        if p == start {
                            break;
                        }
                        if used > self.links.len() {
                            return Err(DiagramError::Construction("component walk did not close"));
                        }
                    }
                    components.push(comp);
                }
            }
        }
        if used != self.links.len() || used != 2 * n {
            return Err(DiagramError::Construction("unseeded component or unlinked port"));
        }
        let crossings = ends
            .into_iter()
            .zip(self.signs)
            .map(|(ends, sign)| Crossing { ends, sign })
            .collect();
        LinkDiagram::new(crossings, components)
    }
}
