//! The (n,k)-Brunnian construction and its sublink collapse checker.
//!
//! `C(n,k)` split copies of `BD^{k-1}(D)` are colored by distinct k-subsets
//! of `n` colors and the components of each color are banded into a chain,
//! each band running to the next copy to the right that uses the color.
//! Colors are 0-based internally and printed as `C1..Cn`.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, LinkDiagram};
use crate::satellite;
use crate::surfacecalc::{BaseSpec, BrunnianStatus, Step, SurfaceError, SurfaceLinkDescriptor};

pub const SHARED_BOUNDARY: &str = "shares its boundary with the partner disk";
pub const TOP_ISOTOPIC: &str = "topologically isotopic rel boundary to the partner disk";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NkError {
    #[error("need n >= 2 and 1 <= k <= n, got n = {n}, k = {k}")]
    Range { n: usize, k: usize },
    #[error("the base must be a single disk")]
    NotADisk,
    #[error("the base disk must have nontrivial boundary")]
    TrivialBoundary,
    #[error("the two bases must share their boundary and be topologically isotopic rel boundary")]
    MismatchedBases,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NkBand {
    pub copy: usize,
    pub color: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NkConstruction {
    pub n: usize,
    pub k: usize,
    /// `BD^{k-1}(D)`, the content of every copy.
    pub pattern: SurfaceLinkDescriptor,
    /// Colors of each copy, listed in component order.
    pub copies: Vec<Vec<usize>>,
    pub bands: Vec<NkBand>,
}

pub fn color_name(c: usize) -> String {
    format!("C{}", c + 1)
}

pub fn generate_nk(n: usize, k: usize, base: &SurfaceLinkDescriptor) -> Result<NkConstruction, NkError> {
    if n < 2 || k == 0 || k > n {
        return Err(NkError::Range { n, k });
    }
    if base.component_count() != 1 || !base.components()[0].is_disk() {
        return Err(NkError::NotADisk);
    }
    if !base.nontrivial_boundary() {
        return Err(NkError::TrivialBoundary);
    }
    let pattern = base.bing_double_first_n(k - 1)?;
    let copies: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let mut bands = Vec::new();
    for (i, colors) in copies.iter().enumerate() {
        for &color in colors {
            if let Some(target) = (i + 1..copies.len()).find(|&s| copies[s].contains(&color)) {
                bands.push(NkBand { copy: i, color, target });
            }
        }
    }
    Ok(NkConstruction {
        n,
        k,
        pattern,
        copies,
        bands,
    })
}

/// Tracks which (copy, color) pieces each current component contains
/// while bands merge them.
struct Merger {
    owners: Vec<BTreeSet<(usize, usize)>>,
}

impl Merger {
    fn new(c: &NkConstruction) -> Self {
        Merger {
            owners: c
                .copies
                .iter()
                .enumerate()
                .flat_map(|(i, cols)| cols.iter().map(move |&col| BTreeSet::from([(i, col)])))
                .collect(),
        }
    }

    /// Indices to band for `b`, smaller first; updates the bookkeeping.
    fn band(&mut self, b: &NkBand) -> (usize, usize) {
        let find = |o: &Vec<BTreeSet<(usize, usize)>>, key| o.iter().position(|s| s.contains(&key)).unwrap();
        let x = find(&self.owners, (b.copy, b.color));
        let y = find(&self.owners, (b.target, b.color));
        let (lo, hi) = (x.min(y), x.max(y));
        let moved = self.owners.remove(hi);
        self.owners[lo].extend(moved);
        (lo, hi)
    }
}

impl NkConstruction {
    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }

    /// Pairwise distinct subsets, injective coloring of each copy, the
    /// min rule for bands and one chain per color.
    pub fn validate(&self) -> bool {
        let distinct = self.copies.iter().map(|c| c.iter().sorted().collect_vec()).all_unique();
        let injective = self.copies.iter().all(|c| c.iter().all_unique() && c.len() == self.k);
        let rule = self.bands.iter().all(|b| {
            self.copies[b.copy].contains(&b.color)
                && (b.copy + 1..self.copies.len()).find(|&s| self.copies[s].contains(&b.color)) == Some(b.target)
        });
        let chains = (0..self.n).all(|col| {
            let users = self.copies.iter().filter(|c| c.contains(&col)).count();
            let bands = self.bands.iter().filter(|b| b.color == col).count();
            users >= 1 && bands == users - 1
        });
        distinct && injective && rule && chains
    }

    /// The merged surface link: a split union of the copies, colored, then
    /// banded. Symbolic only; boundary diagrams are dropped.
    pub fn merged(&self) -> Result<SurfaceLinkDescriptor, NkError> {
        let spec = BaseSpec {
            name: format!("BD^{}(D)", self.k - 1),
            components: self.pattern.components().to_vec(),
            boundary: None,
            brunnian_status: self.pattern.brunnian_status(),
            omega: None,
            nontrivial_boundary: true,
            assumptions: self.pattern.assumptions().clone(),
        };
        let mut d = SurfaceLinkDescriptor::new(spec.clone())?;
        for _ in 1..self.copies.len() {
            d = d.apply(Step::Adjoin(spec.clone()))?;
        }
        let mut at = 0;
        for cols in &self.copies {
            for &col in cols {
                d = d.apply(Step::Color {
                    component: at,
                    color: color_name(col),
                })?;
                at += 1;
            }
        }
        let mut m = Merger::new(self);
        for b in &self.bands {
            let (lo, hi) = m.band(b);
            d = d.band_join(lo, hi)?;
        }
        Ok(d)
    }

    /// Diagram of the boundary for a base knot, by satellites and band sums
    /// on split copies placed left to right.
    pub fn realize(&self, knot: &LinkDiagram) -> Result<LinkDiagram, NkError> {
        let piece = satellite::iterated_bing_double(knot, self.k - 1)?;
        let mut d = piece.clone();
        for _ in 1..self.copies.len() {
            d = d.split_union(&piece);
        }
        let mut m = Merger::new(self);
        for b in &self.bands {
            let (lo, hi) = m.band(b);
            d = d.band_sum(lo, hi)?;
        }
        Ok(d)
    }

    /// Checks every nonempty proper set of kept colors, in parallel.
    pub fn check(&self) -> NkReport {
        let subsets: Vec<Vec<usize>> = (1..self.n)
            .flat_map(|size| (0..self.n).combinations(size))
            .collect();
        let mut cases: Vec<SubsetCase> = subsets.into_par_iter().map(|kept| self.collapse(kept)).collect();
        cases.sort_by(|a, b| a.kept.cmp(&b.kept));
        NkReport {
            n: self.n,
            k: self.k,
            all_passed: cases.iter().all(|c| c.passed),
            cases,
        }
    }

    fn sweep(&self, kept: &BTreeSet<usize>, order: impl Iterator<Item = usize>, dir: Direction) -> (Vec<TraceStep>, bool) {
        let mut trace = Vec::new();
        let mut ok = true;
        for i in order {
            let deleted: Vec<usize> = self.copies[i].iter().copied().filter(|c| !kept.contains(c)).collect();
            let remaining = self.copies[i].len() - deleted.len();
            // a copy may only collapse once at least one of its components is gone
            ok &= !deleted.is_empty();
            trace.push(TraceStep {
                copy: i,
                direction: dir,
                deleted: deleted.iter().map(|&c| color_name(c)).collect(),
                trivial_disks: remaining,
            });
        }
        (trace, ok)
    }

    fn collapse(&self, kept: Vec<usize>) -> SubsetCase {
        let set: BTreeSet<usize> = kept.iter().copied().collect();
        let names = kept.iter().map(|&c| color_name(c)).collect();
        if kept.len() < self.k {
            let (trace, ok) = self.sweep(&set, 0..self.copies.len(), Direction::Rightward);
            return SubsetCase {
                kept,
                colors: names,
                expected: Expected::Unlink,
                reduction: Reduction::Unlink,
                trace,
                passed: ok,
            };
        }
        if kept.len() > self.k {
            // contains the k-color sublink on its first k colors
            let witness: Vec<usize> = kept[..self.k].to_vec();
            let inner = self.collapse(witness.clone());
            return SubsetCase {
                kept,
                colors: names,
                expected: Expected::Nontrivial,
                passed: inner.passed && matches!(inner.reduction, Reduction::BingDouble { .. }),
                reduction: Reduction::ContainsNontrivial {
                    witness: witness.iter().map(|&c| color_name(c)).collect(),
                },
                trace: inner.trace,
            };
        }
        let full: Vec<usize> = (0..self.copies.len())
            .filter(|&i| self.copies[i].iter().all(|c| set.contains(c)))
            .collect();
        let [m] = full[..] else {
            return SubsetCase {
                kept,
                colors: names,
                expected: Expected::Nontrivial,
                reduction: Reduction::NoDistinguishedCopy { candidates: full },
                trace: Vec::new(),
                passed: false,
            };
        };
        let (mut trace, left) = self.sweep(&set, 0..m, Direction::Rightward);
        let (right_trace, right) = self.sweep(&set, (m + 1..self.copies.len()).rev(), Direction::Leftward);
        trace.extend(right_trace);
        SubsetCase {
            kept,
            colors: names,
            expected: Expected::Nontrivial,
            reduction: Reduction::BingDouble { copy: m, depth: self.k - 1 },
            trace,
            passed: left && right,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Rightward,
    Leftward,
}

/// One ball: the listed colors are deleted and what remains is isotoped
/// to trivial disks with trivial bands leaving the ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub copy: usize,
    pub direction: Direction,
    pub deleted: Vec<String>,
    pub trivial_disks: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Unlink,
    Nontrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "token", rename_all = "snake_case")]
pub enum Reduction {
    Unlink,
    /// `BD^depth(D)`, carried by copy `copy`.
    BingDouble { copy: usize, depth: usize },
    /// Nontrivial because the named sublink is.
    ContainsNontrivial { witness: Vec<String> },
    NoDistinguishedCopy { candidates: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetCase {
    pub kept: Vec<usize>,
    pub colors: Vec<String>,
    pub expected: Expected,
    pub reduction: Reduction,
    pub trace: Vec<TraceStep>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NkReport {
    pub n: usize,
    pub k: usize,
    pub cases: Vec<SubsetCase>,
    pub all_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairLedger {
    pub topological: Vec<String>,
    pub smooth: Vec<String>,
}

/// The same construction on two bases that differ only in the interior.
pub fn pair_nk(
    n: usize,
    k: usize,
    base1: &SurfaceLinkDescriptor,
    base2: &SurfaceLinkDescriptor,
) -> Result<(NkConstruction, NkConstruction, PairLedger), NkError> {
    let tagged = |b: &SurfaceLinkDescriptor| {
        b.assumptions().contains(SHARED_BOUNDARY) && b.assumptions().contains(TOP_ISOTOPIC)
    };
    if !tagged(base1) || !tagged(base2) || base1.boundary() != base2.boundary() {
        return Err(NkError::MismatchedBases);
    }
    let a = generate_nk(n, k, base1)?;
    let b = generate_nk(n, k, base2)?;
    let mut topological = vec!["D1 and D2 are topologically isotopic rel boundary (assumed)".to_string()];
    let mut smooth = Vec::new();
    if k == 1 {
        topological.push("split unions of copies of isotopic disks are isotopic".into());
        smooth.push(format!(
            "any diffeomorphism carries a component to a component, each a copy of D1 or D2; a split union of {n} copies of D1 is not one of D2 (assumed for the base pair)"
        ));
    } else {
        topological.push(format!("Bing doubling preserves topological isotopy, so BD^{}(D1) and BD^{}(D2) are", k - 1, k - 1));
        topological.push("identical colors and bands then give topologically isotopic links".into());
        smooth.push(format!(
            "every {k}-component sublink is smoothly isotopic to BD^{}(Di) by the collapse checker",
            k - 1
        ));
        smooth.push(format!(
            "BD^{}(D1) and BD^{}(D2) are not smoothly equivalent (assumed for the base pair), so neither are the two links",
            k - 1,
            k - 1
        ));
    }
    Ok((a, b, PairLedger { topological, smooth }))
}

/// A base disk flagged for pairing.
pub fn paired_base(name: &str, boundary: Option<LinkDiagram>) -> Result<SurfaceLinkDescriptor, NkError> {
    Ok(SurfaceLinkDescriptor::new(BaseSpec {
        name: name.into(),
        components: vec![crate::surfacecalc::SurfaceComponent::disk()],
        boundary,
        brunnian_status: BrunnianStatus::Brunnian,
        omega: None,
        nontrivial_boundary: true,
        assumptions: [SHARED_BOUNDARY, TOP_ISOTOPIC].iter().map(|s| s.to_string()).collect(),
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SurfaceLinkDescriptor {
        SurfaceLinkDescriptor::base_disk("D", None, true)
    }

    #[test]
    fn three_two() {
        let c = generate_nk(3, 2, &base()).unwrap();
        assert_eq!(c.copies, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(c.bands.len(), 3);
        assert!(c.validate());
        let m = c.merged().unwrap();
        assert_eq!(m.component_count(), 3);
        assert!(m.components().iter().all(|x| x.is_disk()));
        let r = c.check();
        assert_eq!(r.cases.len(), 6);
        assert!(r.all_passed);
        let single = &r.cases[0];
        assert_eq!(single.kept, vec![0]);
        assert_eq!(single.reduction, Reduction::Unlink);
        assert_eq!(single.trace.len(), 3);
        let pair = r.cases.iter().find(|c| c.kept == vec![0, 2]).unwrap();
        assert_eq!(pair.reduction, Reduction::BingDouble { copy: 1, depth: 1 });
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(generate_nk(1, 1, &base()).unwrap_err(), NkError::Range { n: 1, k: 1 });
        assert_eq!(generate_nk(3, 4, &base()).unwrap_err(), NkError::Range { n: 3, k: 4 });
        let trivial = SurfaceLinkDescriptor::base_disk("U", None, false);
        assert_eq!(generate_nk(3, 2, &trivial).unwrap_err(), NkError::TrivialBoundary);
        let two = base().bing_double_first().unwrap();
        assert_eq!(generate_nk(3, 2, &two).unwrap_err(), NkError::NotADisk);
        assert_eq!(pair_nk(2, 2, &base(), &base()).unwrap_err(), NkError::MismatchedBases);
    }
}
