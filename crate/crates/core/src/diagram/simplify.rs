//! Greedy Reidemeister I/II reduction. Never adds crossings.

use std::collections::BTreeSet;

use super::LinkDiagram;

impl LinkDiagram {
    /// Removes kinks and bigons until none remain.
    pub fn simplify(&self) -> LinkDiagram {
        self.simplify_counted().0
    }

    /// As [`simplify`](Self::simplify), also returning the number of moves.
    pub fn simplify_counted(&self) -> (LinkDiagram, usize) {
        let mut d = self.clone();
        let mut moves = 0;
        loop {
            let gone = match d.find_r1().or_else(|| d.find_r2()) {
                Some(g) => g,
                None => return (d, moves),
            };
            match d.remove_crossings(&gone, &BTreeSet::new()) {
                Ok(next) => {
                    d = next;
                    moves += 1;
                }
                Err(_) => return (d, moves),
            }
        }
    }

    fn find_r1(&self) -> Option<BTreeSet<usize>> {
        self.edge_ends()
            .into_iter()
            .find(|(t, h)| t.crossing == h.crossing && (t.slot + h.slot) % 2 == 1)
            .map(|(t, _)| [t.crossing].into_iter().collect())
    }

    fn find_r2(&self) -> Option<BTreeSet<usize>> {
        for face in self.faces() {
            if face.len() != 2 {
                continue;
            }
            let partner = self.partners();
            let (p, q) = (face[0], face[1]);
            if p.crossing == q.crossing {
                continue;
            }
            let (pe, qe) = (partner[&p], partner[&q]);
            let over_p = p.slot % 2 == 1 && pe.slot % 2 == 1;
            let under_p = p.slot % 2 == 0 && pe.slot % 2 == 0;
            let over_q = q.slot % 2 == 1 && qe.slot % 2 == 1;
            let under_q = q.slot % 2 == 0 && qe.slot % 2 == 0;
            if (over_p && under_q) || (under_p && over_q) {
                return Some([p.crossing, q.crossing].into_iter().collect());
            }
        }
        None
    }
}
