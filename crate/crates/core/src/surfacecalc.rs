//! Symbolic ordered surface links in the 4-ball.
//!
//! A descriptor is determined by its history: the first step is a base,
//! every later step is replayed through [`SurfaceLinkDescriptor::apply`].
//! Deserialization replays the history and rejects descriptors whose stored
//! state disagrees with it.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alexpoly::LaurentPolynomial;
use crate::diagram::{DiagramError, LinkDiagram};
use crate::satellite;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("component {0} is not a disk")]
    NotADisk(usize),
    #[error("component index {0} out of range")]
    ComponentIndex(usize),
    #[error("cannot band a component to itself")]
    SelfBand,
    #[error("history does not end with a Bing double of the first component")]
    NotABingDouble,
    #[error("only 2-fold covers are supported, got {0}")]
    UnsupportedDegree(u32),
    #[error("covering degree must be positive")]
    ZeroDegree,
    #[error("lk(component {component}, first component) = {lk} is not divisible by {k}")]
    NotLiftable { component: usize, lk: i64, k: u32 },
    #[error("the history must start with a base and contain no other base")]
    BadHistory,
    #[error("stored state disagrees with the replayed history")]
    HistoryMismatch,
    #[error("descriptors do not share a base up to rim surgeries")]
    MismatchedBases,
    #[error("rim surgery needs a nonzero Alexander polynomial")]
    ZeroAlexander,
    #[error("boundary diagram has {0} components but the base lists {1}")]
    BoundaryMismatch(usize, usize),
    #[error("genus (r, s) needs s >= 1")]
    GenusRange,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceComponent {
    pub genus: u32,
    pub is_trivial_disk: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
}

impl SurfaceComponent {
    pub fn disk() -> Self {
        SurfaceComponent {
            genus: 0,
            is_trivial_disk: false,
            color: None,
        }
    }

    pub fn trivial_disk() -> Self {
        SurfaceComponent {
            is_trivial_disk: true,
            ..Self::disk()
        }
    }

    pub fn surface(genus: u32) -> Self {
        SurfaceComponent {
            genus,
            ..Self::disk()
        }
    }

    /// Every component has one boundary circle, so genus 0 means disk.
    pub fn is_disk(&self) -> bool {
        self.genus == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BrunnianStatus {
    Brunnian,
    Unknown,
    NotBrunnian,
}

/// A nonnegative integer or the absorbing bottom element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "OmegaRepr", try_from = "OmegaRepr")]
pub enum OmegaValue {
    Finite(u64),
    Bottom,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OmegaRepr {
    Finite(u64),
    Text(String),
}

impl From<OmegaValue> for OmegaRepr {
    fn from(o: OmegaValue) -> Self {
        match o {
            OmegaValue::Finite(n) => OmegaRepr::Finite(n),
            OmegaValue::Bottom => OmegaRepr::Text("-inf".into()),
        }
    }
}

impl TryFrom<OmegaRepr> for OmegaValue {
    type Error = String;

    fn try_from(r: OmegaRepr) -> Result<Self, String> {
        match r {
            OmegaRepr::Finite(n) => Ok(OmegaValue::Finite(n)),
            OmegaRepr::Text(s) if s == "-inf" => Ok(OmegaValue::Bottom),
            OmegaRepr::Text(s) => Err(format!("bad omega value {s:?}")),
        }
    }
}

impl OmegaValue {
    pub fn add(self, k: u64) -> OmegaValue {
        match self {
            OmegaValue::Finite(n) => OmegaValue::Finite(n + k),
            OmegaValue::Bottom => OmegaValue::Bottom,
        }
    }
}

impl fmt::Display for OmegaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaValue::Finite(n) => write!(f, "{n}"),
            OmegaValue::Bottom => f.write_str("-inf"),
        }
    }
}

/// Effect of one-twist rim surgery with a knot whose Alexander polynomial
/// has `j_factor_count` irreducible factors.
pub fn rim_surgery_omega(omega: OmegaValue, j_factor_count: u64) -> OmegaValue {
    omega.add(j_factor_count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseSpec {
    pub name: String,
    pub components: Vec<SurfaceComponent>,
    #[serde(default)]
    pub boundary: Option<LinkDiagram>,
    pub brunnian_status: BrunnianStatus,
    #[serde(default)]
    pub omega: Option<OmegaValue>,
    /// The boundary of the first component is a nontrivial knot.
    #[serde(default)]
    pub nontrivial_boundary: bool,
    #[serde(default)]
    pub assumptions: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RimSurgery {
    pub component: usize,
    pub curve: String,
    pub knot: String,
    pub twist: i64,
    pub alexander: LaurentPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Base(BaseSpec),
    /// Split union with another base, appended after the current components.
    Adjoin(BaseSpec),
    BingDoubleFirst,
    Band { i: usize, j: usize },
    RimSurgery(RimSurgery),
    Color { component: usize, color: String },
    /// Records an externally justified value of the invariant.
    AssertOmega { value: OmegaValue, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor")]
pub struct SurfaceLinkDescriptor {
    components: Vec<SurfaceComponent>,
    history: Vec<Step>,
    boundary: Option<LinkDiagram>,
    brunnian_status: BrunnianStatus,
    omega: Option<OmegaValue>,
    nontrivial_boundary: bool,
    assumptions: BTreeSet<String>,
}

#[derive(Deserialize)]
struct RawDescriptor {
    components: Vec<SurfaceComponent>,
    history: Vec<Step>,
    boundary: Option<LinkDiagram>,
    brunnian_status: BrunnianStatus,
    omega: Option<OmegaValue>,
    nontrivial_boundary: bool,
    assumptions: BTreeSet<String>,
}

impl TryFrom<RawDescriptor> for SurfaceLinkDescriptor {
    type Error = SurfaceError;

    fn try_from(r: RawDescriptor) -> Result<Self, SurfaceError> {
        let d = SurfaceLinkDescriptor::replay(&r.history)?;
        let stored = SurfaceLinkDescriptor {
            components: r.components,
            history: r.history,
            boundary: r.boundary,
            brunnian_status: r.brunnian_status,
            omega: r.omega,
            nontrivial_boundary: r.nontrivial_boundary,
            assumptions: r.assumptions,
        };
        if stored == d {
            Ok(d)
        } else {
            Err(SurfaceError::HistoryMismatch)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Liftability {
    /// Checked on the boundary diagram.
    Verified,
    /// No diagram attached; recorded as an assumption.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringLift {
    pub descriptor: SurfaceLinkDescriptor,
    pub liftability: Liftability,
    /// Two split copies of the boundary with their first components banded.
    pub cover_diagram: Option<LinkDiagram>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DistinguishedByOmega,
    DistinguishedUpToUnits,
    Undistinguished,
}

impl SurfaceLinkDescriptor {
    pub fn new(base: BaseSpec) -> Result<Self, SurfaceError> {
        Self::replay(&[Step::Base(base)])
    }

    /// A single disk, Brunnian in the vacuous sense.
    pub fn base_disk(name: &str, boundary: Option<LinkDiagram>, nontrivial_boundary: bool) -> Self {
        Self::new(BaseSpec {
            name: name.into(),
            components: vec![SurfaceComponent::disk()],
            boundary,
            brunnian_status: BrunnianStatus::Brunnian,
            omega: None,
            nontrivial_boundary,
            assumptions: BTreeSet::new(),
        })
        .expect("a single base step always replays")
    }

    pub fn replay(history: &[Step]) -> Result<Self, SurfaceError> {
        let Some((Step::Base(b), rest)) = history.split_first() else {
            return Err(SurfaceError::BadHistory);
        };
        if let Some(ref d) = b.boundary {
            if d.component_count() != b.components.len() {
                return Err(SurfaceError::BoundaryMismatch(d.component_count(), b.components.len()));
            }
        }
        let mut d = SurfaceLinkDescriptor {
            components: b.components.clone(),
            history: vec![Step::Base(b.clone())],
            boundary: b.boundary.clone(),
            brunnian_status: b.brunnian_status,
            omega: b.omega,
            nontrivial_boundary: b.nontrivial_boundary,
            assumptions: b.assumptions.clone(),
        };
        for s in rest {
            d = d.apply(s.clone())?;
        }
        Ok(d)
    }

    pub fn components(&self) -> &[SurfaceComponent] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn history(&self) -> &[Step] {
        &self.history
    }

    pub fn boundary(&self) -> Option<&LinkDiagram> {
        self.boundary.as_ref()
    }

    pub fn brunnian_status(&self) -> BrunnianStatus {
        self.brunnian_status
    }

    pub fn omega(&self) -> Option<OmegaValue> {
        self.omega
    }

    pub fn nontrivial_boundary(&self) -> bool {
        self.nontrivial_boundary
    }

    pub fn assumptions(&self) -> &BTreeSet<String> {
        &self.assumptions
    }

    pub fn genera(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.genus).collect()
    }

    fn index(&self, i: usize) -> Result<(), SurfaceError> {
        if i < self.components.len() {
            Ok(())
        } else {
            Err(SurfaceError::ComponentIndex(i))
        }
    }

    /// Applies one step and appends it to the history.
    pub fn apply(&self, step: Step) -> Result<Self, SurfaceError> {
        let mut d = self.clone();
        match &step {
            Step::Base(_) => return Err(SurfaceError::BadHistory),
            Step::Adjoin(b) => {
                let other = Self::new(b.clone())?;
                d.components.extend(other.components);
                d.boundary = match (&self.boundary, &other.boundary) {
                    (Some(x), Some(y)) => Some(x.split_union(y)),
                    _ => None,
                };
                d.brunnian_status = BrunnianStatus::Unknown;
                d.omega = None;
                d.assumptions.extend(other.assumptions);
            }
            Step::BingDoubleFirst => {
                if !self.components[0].is_disk() {
                    return Err(SurfaceError::NotADisk(0));
                }
                d.components.splice(0..1, [SurfaceComponent::trivial_disk(), SurfaceComponent::trivial_disk()]);
                if let Some(ref b) = self.boundary {
                    d.boundary = Some(satellite::bing_double(b, 0)?);
                }
                if self.brunnian_status != BrunnianStatus::Brunnian {
                    d.brunnian_status = BrunnianStatus::Unknown;
                }
                d.omega = None;
            }
            &Step::Band { i, j } => {
                self.index(i)?;
                self.index(j)?;
                if i == j {
                    return Err(SurfaceError::SelfBand);
                }
                let (lo, hi) = (i.min(j), i.max(j));
                let (a, b) = (&self.components[lo], &self.components[hi]);
                let merged = SurfaceComponent {
                    genus: a.genus + b.genus,
                    is_trivial_disk: false,
                    color: if a.color == b.color { a.color.clone() } else { None },
                };
                d.components[lo] = merged;
                d.components.remove(hi);
                if let Some(ref bd) = self.boundary {
                    d.boundary = Some(bd.band_sum(lo, hi)?);
                }
                d.brunnian_status = BrunnianStatus::Unknown;
                d.omega = None;
            }
            Step::RimSurgery(r) => {
                self.index(r.component)?;
                let count = r.alexander.factor_count().map_err(|_| SurfaceError::ZeroAlexander)? as u64;
                d.components[r.component].is_trivial_disk = false;
                d.omega = match self.omega {
                    Some(o) if r.twist == 1 => Some(rim_surgery_omega(o, count)),
                    _ => None,
                };
                d.assumptions.insert(format!(
                    "curve {} bounds a framed disk, so rim surgery is a topological isotopy",
                    r.curve
                ));
            }
            Step::Color { component, color } => {
                self.index(*component)?;
                d.components[*component].color = Some(color.clone());
            }
            Step::AssertOmega { value, reason } => {
                d.omega = Some(*value);
                d.assumptions.insert(reason.clone());
            }
        }
        d.history.push(step);
        Ok(d)
    }

    pub fn bing_double_first(&self) -> Result<Self, SurfaceError> {
        self.apply(Step::BingDoubleFirst)
    }

    pub fn bing_double_first_n(&self, n: usize) -> Result<Self, SurfaceError> {
        let mut d = self.clone();
        for _ in 0..n {
            d = d.bing_double_first()?;
        }
        Ok(d)
    }

    pub fn band_join(&self, i: usize, j: usize) -> Result<Self, SurfaceError> {
        self.apply(Step::Band { i, j })
    }

    pub fn rim_surgery(&self, r: RimSurgery) -> Result<Self, SurfaceError> {
        self.apply(Step::RimSurgery(r))
    }

    /// Whether every other component links the first a multiple of `k`
    /// times along the boundary.
    pub fn liftability(&self, k: u32) -> Result<Liftability, SurfaceError> {
        if k == 0 {
            return Err(SurfaceError::ZeroDegree);
        }
        let Some(ref d) = self.boundary else {
            return Ok(Liftability::Assumed);
        };
        for i in 1..d.component_count() {
            let lk = d.linking_number(0, i);
            if lk % k as i64 != 0 {
                return Err(SurfaceError::NotLiftable { component: i, lk, k });
            }
        }
        Ok(Liftability::Verified)
    }

    /// Undoes the last Bing double by passing to the 2-fold branched cover
    /// over the first component and keeping one lift of the others.
    pub fn covering_lift(&self, k: u32) -> Result<CoveringLift, SurfaceError> {
        if !matches!(self.history.last(), Some(Step::BingDoubleFirst)) {
            return Err(SurfaceError::NotABingDouble);
        }
        let liftability = self.liftability(k)?;
        if k != 2 {
            return Err(SurfaceError::UnsupportedDegree(k));
        }
        let descriptor = Self::replay(&self.history[..self.history.len() - 1])?;
        let cover_diagram = match descriptor.boundary {
            Some(ref l) => Some(l.split_union(l).band_sum(0, l.component_count())?),
            None => None,
        };
        Ok(CoveringLift {
            descriptor,
            liftability,
            cover_diagram,
        })
    }

    fn strip_rim_surgeries(&self) -> Vec<&Step> {
        self.history.iter().filter(|s| !matches!(s, Step::RimSurgery(_))).collect()
    }

    fn rim_product(&self) -> (usize, LaurentPolynomial) {
        let mut count = 0;
        let mut p = LaurentPolynomial::one();
        for s in &self.history {
            if let Step::RimSurgery(r) = s {
                count += r.alexander.factor_count().unwrap_or(0);
                p = p.multiply(&r.alexander);
            }
        }
        (count, p)
    }
}

/// Pairwise verdicts for descriptors that differ only by rim surgeries.
pub fn distinctness_ledger(family: &[SurfaceLinkDescriptor]) -> Result<Vec<Vec<Verdict>>, SurfaceError> {
    if let Some(first) = family.first() {
        let base = first.strip_rim_surgeries();
        if family.iter().any(|d| d.strip_rim_surgeries() != base) {
            return Err(SurfaceError::MismatchedBases);
        }
    }
    let data: Vec<(usize, LaurentPolynomial)> = family.iter().map(|d| d.rim_product()).collect();
    Ok(data
        .iter()
        .map(|(ci, pi)| {
            data.iter()
                .map(|(cj, pj)| {
                    if ci != cj {
                        Verdict::DistinguishedByOmega
                    } else if !pi.equivalent_up_to_units(pj) {
                        Verdict::DistinguishedUpToUnits
                    } else {
                        Verdict::Undistinguished
                    }
                })
                .collect()
        })
        .collect())
}

/// An unknotted disk and an unknotted genus `g` surface.
pub fn r_link(g: u32) -> BaseSpec {
    BaseSpec {
        name: format!("R^{g}"),
        components: vec![SurfaceComponent::trivial_disk(), SurfaceComponent::surface(g)],
        boundary: None,
        brunnian_status: BrunnianStatus::Unknown,
        omega: None,
        nontrivial_boundary: false,
        assumptions: BTreeSet::new(),
    }
}

/// The Brunnian pair (disk, genus one) from which the genus `(r, s)`
/// links are assembled.
pub fn sigma0() -> BaseSpec {
    BaseSpec {
        name: "Sigma_0".into(),
        components: vec![SurfaceComponent::disk(), SurfaceComponent::surface(1)],
        boundary: None,
        brunnian_status: BrunnianStatus::Brunnian,
        omega: None,
        nontrivial_boundary: true,
        assumptions: BTreeSet::new(),
    }
}

/// Bands copies of `R^r` and `R^(s-1)` onto `sigma0` to reach genus `(r, s)`.
pub fn sigma_rs(r: u32, s: u32) -> Result<SurfaceLinkDescriptor, SurfaceError> {
    if s == 0 {
        return Err(SurfaceError::GenusRange);
    }
    let mut d = SurfaceLinkDescriptor::new(sigma0())?;
    if r > 0 {
        // disk of R to the second component, genus part to the first
        d = d.apply(Step::Adjoin(r_link(r)))?.band_join(1, 2)?.band_join(0, 2)?;
    }
    if s > 1 {
        d = d.apply(Step::Adjoin(r_link(s - 1)))?.band_join(0, 2)?.band_join(1, 2)?;
    }
    d.apply(Step::AssertOmega {
        value: OmegaValue::Finite(0),
        reason: "gluing the components along b gives a quasipositive Seifert surface".into(),
    })
}

impl fmt::Display for SurfaceLinkDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3}  {:>5}  {:>4}  {:>12}  color", "#", "genus", "disk", "trivial disk")?;
        for (i, c) in self.components.iter().enumerate() {
            writeln!(
                f,
                "{:>3}  {:>5}  {:>4}  {:>12}  {}",
                i,
                c.genus,
                if c.is_disk() { "yes" } else { "no" },
                if c.is_trivial_disk { "yes" } else { "no" },
                c.color.as_deref().unwrap_or("-")
            )?;
        }
        writeln!(f, "brunnian: {:?}", self.brunnian_status)?;
        match self.omega {
            Some(o) => writeln!(f, "omega: {o}")?,
            None => writeln!(f, "omega: unrecorded")?,
        }
        for s in &self.history {
            if let Step::RimSurgery(r) = s {
                writeln!(
                    f,
                    "rim surgery on {} along {} with {} (twist {}): delta = {}",
                    r.component,
                    r.curve,
                    r.knot,
                    r.twist,
                    r.alexander
                )?;
            }
        }
        let n = self.history.len();
        writeln!(f, "history: {n} step{}", if n == 1 { "" } else { "s" })?;
        if let Some(ref d) = self.boundary {
            let (c, x) = (d.component_count(), d.crossing_count());
            let s = |n: usize| if n == 1 { "" } else { "s" };
            writeln!(f, "boundary: {c} component{}, {x} crossing{}", s(c), s(x))?;
        }
        for a in &self.assumptions {
            writeln!(f, "assumes: {a}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_arithmetic() {
        assert_eq!(rim_surgery_omega(OmegaValue::Finite(0), 1), OmegaValue::Finite(1));
        assert_eq!(rim_surgery_omega(OmegaValue::Bottom, 7), OmegaValue::Bottom);
        assert_eq!(rim_surgery_omega(OmegaValue::Finite(4), 0), OmegaValue::Finite(4));
        assert_eq!(serde_json::to_string(&OmegaValue::Bottom).unwrap(), "\"-inf\"");
        assert_eq!(serde_json::from_str::<OmegaValue>("3").unwrap(), OmegaValue::Finite(3));
    }

    #[test]
    fn bing_double_relabels() {
        let d = SurfaceLinkDescriptor::base_disk("D", None, true);
        let bd = d.bing_double_first().unwrap();
        assert_eq!(bd.component_count(), 2);
        assert!(bd.components().iter().all(|c| c.is_trivial_disk));
        assert_eq!(bd.brunnian_status(), BrunnianStatus::Brunnian);
        let lift = bd.covering_lift(2).unwrap();
        assert_eq!(lift.descriptor, d);
        assert_eq!(lift.liftability, Liftability::Assumed);
        assert_eq!(d.covering_lift(2).unwrap_err(), SurfaceError::NotABingDouble);
        assert_eq!(bd.covering_lift(3).unwrap_err(), SurfaceError::UnsupportedDegree(3));
        assert_eq!(bd.liftability(3), Ok(Liftability::Assumed));
    }

    #[test]
    fn genus_bookkeeping() {
        let g = SurfaceLinkDescriptor::new(sigma0()).unwrap();
        assert_eq!(g.bing_double_first().unwrap().component_count(), 3);
        let swapped = g.apply(Step::Band { i: 0, j: 1 }).unwrap();
        assert_eq!(swapped.genera(), vec![1]);
        assert_eq!(swapped.brunnian_status(), BrunnianStatus::Unknown);
        assert_eq!(swapped.bing_double_first().unwrap_err(), SurfaceError::NotADisk(0));
        assert_eq!(g.band_join(1, 1).unwrap_err(), SurfaceError::SelfBand);
        for (r, s) in [(0, 1), (2, 1), (0, 3), (2, 5)] {
            let d = sigma_rs(r, s).unwrap();
            assert_eq!(d.genera(), vec![r, s]);
            assert_eq!(d.omega(), Some(OmegaValue::Finite(0)));
        }
    }
}
