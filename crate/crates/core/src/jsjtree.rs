//! Labeled JSJ trees of link exteriors.
//!
//! Each vertex is a piece with `boundary_count` boundary tori, numbered by
//! slot. Marked slots are boundary components of the whole exterior; the
//! remaining slots are consumed by tree edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest tree the automorphism search accepts.
pub const MAX_VERTICES: usize = 20;
/// Largest automorphism group the search will list.
pub const MAX_AUTOMORPHISMS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsjError {
    #[error("the graph is not a tree")]
    NotATree,
    #[error("edge ({0}, {1}) references a missing vertex")]
    VertexRange(usize, usize),
    #[error("vertex {0}: degree {1} plus {2} external boundaries differs from boundary count {3}")]
    BoundaryMismatch(usize, usize, usize, usize),
    #[error("vertex {0}: {1} pieces have exactly 3 boundary tori")]
    ThreeBoundaries(usize, &'static str),
    #[error("vertex {0}: marked slot {1} out of range")]
    SlotRange(usize, usize),
    #[error("no distinguished vertex")]
    NoDistinguished,
    #[error("distinguished vertex {0} has no external boundary left")]
    NoExternal(usize),
    #[error("tree has {0} vertices, above the limit of {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("more than {MAX_AUTOMORPHISMS} automorphisms")]
    TooManyAutomorphisms,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "name")]
pub enum PieceKind {
    HyperbolicKnotExterior(String),
    BorromeanExterior,
    KeychainExterior,
    HyperbolicLinkExterior(String),
    Other(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PieceLabel {
    pub kind: PieceKind,
    pub boundary_count: usize,
    pub marked_boundaries: BTreeSet<usize>,
}

impl PieceLabel {
    /// A piece whose first `external` slots are marked.
    pub fn new(kind: PieceKind, boundary_count: usize, external: usize) -> Self {
        PieceLabel {
            kind,
            boundary_count,
            marked_boundaries: (0..external).collect(),
        }
    }

    pub fn knot_exterior(name: &str) -> Self {
        Self::new(PieceKind::HyperbolicKnotExterior(name.into()), 1, 1)
    }

    pub fn external_count(&self) -> usize {
        self.marked_boundaries.len()
    }

    /// The data an automorphism has to preserve.
    fn signature(&self) -> (&PieceKind, usize, usize) {
        (&self.kind, self.boundary_count, self.external_count())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rigidity {
    ConditionI,
    ConditionII,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTree")]
pub struct JsjTree {
    vertices: Vec<PieceLabel>,
    edges: Vec<(usize, usize)>,
    distinguished: Option<usize>,
}

#[derive(Deserialize)]
struct RawTree {
    vertices: Vec<PieceLabel>,
    edges: Vec<(usize, usize)>,
    distinguished: Option<usize>,
}

impl TryFrom<RawTree> for JsjTree {
    type Error = JsjError;

    fn try_from(r: RawTree) -> Result<Self, JsjError> {
        JsjTree::new(r.vertices, r.edges, r.distinguished)
    }
}

/// A vertex permutation: `p[v]` is the image of `v`.
pub type Permutation = Vec<usize>;

impl JsjTree {
    pub fn new(
        vertices: Vec<PieceLabel>,
        edges: Vec<(usize, usize)>,
        distinguished: Option<usize>,
    ) -> Result<Self, JsjError> {
        let n = vertices.len();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(JsjError::VertexRange(a, b));
            }
        }
        if let Some(v) = distinguished {
            if v >= n {
                return Err(JsjError::VertexRange(v, v));
            }
        }
        let t = JsjTree {
            vertices,
            edges,
            distinguished,
        };
        if n == 0 || t.edges.len() != n - 1 || !t.connected() {
            return Err(JsjError::NotATree);
        }
        let deg = t.degrees();
        for (v, l) in t.vertices.iter().enumerate() {
            if let Some(&s) = l.marked_boundaries.iter().find(|&&s| s >= l.boundary_count) {
                return Err(JsjError::SlotRange(v, s));
            }
            if deg[v] + l.external_count() != l.boundary_count {
                return Err(JsjError::BoundaryMismatch(v, deg[v], l.external_count(), l.boundary_count));
            }
            match l.kind {
                PieceKind::BorromeanExterior if l.boundary_count != 3 => {
                    return Err(JsjError::ThreeBoundaries(v, "Borromean"))
                }
                PieceKind::KeychainExterior if l.boundary_count != 3 => {
                    return Err(JsjError::ThreeBoundaries(v, "keychain"))
                }
                _ => {}
            }
        }
        Ok(t)
    }

    /// One piece, every boundary external, marked as distinguished.
    pub fn single(label: PieceLabel) -> Result<Self, JsjError> {
        JsjTree::new(vec![label], Vec::new(), Some(0))
    }

    pub fn vertices(&self) -> &[PieceLabel] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    fn connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Attaches a Borromean piece to the distinguished vertex along the
    /// boundary torus of the first link component. The two new components
    /// are external boundaries of the new piece, which becomes distinguished.
    pub fn bing_extend(&self) -> Result<JsjTree, JsjError> {
        let y = self.distinguished.ok_or(JsjError::NoDistinguished)?;
        let mut t = self.clone();
        take_external(&mut t.vertices[y]).ok_or(JsjError::NoExternal(y))?;
        let e = t.vertices.len();
        t.vertices.push(PieceLabel {
            kind: PieceKind::BorromeanExterior,
            boundary_count: 3,
            marked_boundaries: BTreeSet::from([1, 2]),
        });
        t.edges.push((y, e));
        t.distinguished = Some(e);
        Ok(t)
    }

    pub fn bing_extend_n(&self, n: usize) -> Result<JsjTree, JsjError> {
        let mut t = self.clone();
        for _ in 0..n {
            t = t.bing_extend()?;
        }
        Ok(t)
    }

    /// Two copies joined through a keychain piece at their distinguished
    /// vertices. The keychain keeps one external boundary and is the new
    /// distinguished vertex.
    pub fn covering_tree(&self) -> Result<JsjTree, JsjError> {
        let y = self.distinguished.ok_or(JsjError::NoDistinguished)?;
        let n = self.vertices.len();
        let mut vertices = self.vertices.clone();
        take_external(&mut vertices[y]).ok_or(JsjError::NoExternal(y))?;
        let half = vertices.clone();
        vertices.extend(half);
        let c = vertices.len();
        vertices.push(PieceLabel {
            kind: PieceKind::KeychainExterior,
            boundary_count: 3,
            marked_boundaries: BTreeSet::from([2]),
        });
        let mut edges = self.edges.clone();
        edges.extend(self.edges.iter().map(|&(a, b)| (a + n, b + n)));
        edges.push((y, c));
        edges.push((c, y + n));
        Ok(JsjTree {
            vertices,
            edges,
            distinguished: Some(c),
        })
    }

    pub fn rigidity(&self) -> Rigidity {
        let count = |k: &PieceKind| self.vertices.iter().filter(|l| &l.kind == k).count();
        let borromean: Vec<&PieceLabel> = self
            .vertices
            .iter()
            .filter(|l| l.kind == PieceKind::BorromeanExterior)
            .collect();
        let keychain = count(&PieceKind::KeychainExterior);
        if keychain == 0 && borromean.is_empty() {
            Rigidity::ConditionI
        } else if keychain == 0 && borromean.len() == 1 && borromean[0].external_count() == 2 {
            Rigidity::ConditionII
        } else {
            Rigidity::Neither
        }
    }

    /// Whether `p` is a label-preserving graph automorphism.
    pub fn is_automorphism(&self, p: &[usize]) -> bool {
        let n = self.vertices.len();
        if p.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &x in p {
            if x >= n || hit[x] {
                return false;
            }
            hit[x] = true;
        }
        if (0..n).any(|v| self.vertices[v].signature() != self.vertices[p[v]].signature()) {
            return false;
        }
        let edges: BTreeSet<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        self.edges.iter().all(|&(a, b)| {
            let (x, y) = (p[a], p[b]);
            edges.contains(&(x.min(y), x.max(y)))
        })
    }

    /// All label-preserving automorphisms, sorted.
    pub fn automorphisms(&self) -> Result<Vec<Permutation>, JsjError> {
        let n = self.vertices.len();
        if n > MAX_VERTICES {
            return Err(JsjError::TooLarge(n));
        }
        let adj = self.adjacency();
        let colour = self.refined_colours(&adj);
        // visit order: BFS from 0, each later vertex has an earlier neighbour
        let mut order = vec![0];
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    order.push(w);
                }
            }
            i += 1;
        }
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend(&adj, &colour, &order, &parent, 0, &mut image, &mut used, &mut out)?;
        out.sort();
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        adj: &[Vec<usize>],
        colour: &[usize],
        order: &[usize],
        parent: &[usize],
        depth: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Permutation>,
    ) -> Result<(), JsjError> {
        if depth == order.len() {
            if out.len() >= MAX_AUTOMORPHISMS {
                return Err(JsjError::TooManyAutomorphisms);
            }
            out.push(image.clone());
            return Ok(());
        }
        let v = order[depth];
        let candidates: Vec<usize> = if depth == 0 {
            (0..adj.len()).collect()
        } else {
            adj[image[parent[v]]].clone()
        };
        for x in candidates {
            if used[x] || colour[x] != colour[v] || adj[x].len() != adj[v].len() {
                continue;
            }
            image[v] = x;
            used[x] = true;
            self.extend(adj, colour, order, parent, depth + 1, image, used, out)?;
            used[x] = false;
            image[v] = usize::MAX;
        }
        Ok(())
    }

    /// Colour refinement starting from labels: stable classes are unions of
    /// automorphism orbits, so they prune the search without losing any map.
    fn refined_colours(&self, adj: &[Vec<usize>]) -> Vec<usize> {
        let mut classes: BTreeMap<(&PieceKind, usize, usize), usize> = BTreeMap::new();
        for l in &self.vertices {
            let k = classes.len();
            classes.entry(l.signature()).or_insert(k);
        }
        let mut colour: Vec<usize> = self.vertices.iter().map(|l| classes[&l.signature()]).collect();
        loop {
            let keys: Vec<(usize, Vec<usize>)> = (0..adj.len())
                .map(|v| {
                    let mut nb: Vec<usize> = adj[v].iter().map(|&w| colour[w]).collect();
                    nb.sort_unstable();
                    (colour[v], nb)
                })
                .collect();
            let mut ids: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
            for k in &keys {
                let next = ids.len();
                ids.entry(k).or_insert(next);
            }
            let next: Vec<usize> = keys.iter().map(|k| ids[k]).collect();
            let before = colour.iter().collect::<BTreeSet<_>>().len();
            if ids.len() == before {
                return next;
            }
            colour = next;
        }
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph jsj {\n");
        for (v, l) in self.vertices.iter().enumerate() {
            let name = match &l.kind {
                PieceKind::HyperbolicKnotExterior(n) => format!("{n} (hyperbolic knot)"),
                PieceKind::BorromeanExterior => "Borromean".into(),
                PieceKind::KeychainExterior => "keychain".into(),
                PieceKind::HyperbolicLinkExterior(n) => format!("{n} (hyperbolic link)"),
                PieceKind::Other(n) => n.clone(),
            };
            let shape = if Some(v) == self.distinguished { "doublecircle" } else { "circle" };
            let _ = writeln!(
                s,
                "  v{v} [label=\"{name}\\n{} external\", shape={shape}];",
                l.external_count()
            );
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  v{a} -- v{b};");
        }
        s.push_str("}\n");
        s
    }
}

fn take_external(l: &mut PieceLabel) -> Option<usize> {
    let s = *l.marked_boundaries.iter().next()?;
    l.marked_boundaries.remove(&s);
    Some(s)
}
