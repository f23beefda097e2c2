//! Finitely presented groups: Wirtinger presentations, greedy Tietze
//! simplification and abelianization.
//!
//! A word is a sequence of nonzero integers: `k` stands for generator
//! `x_k` (1-based) and `-k` for its inverse. In text, `x3` is `3` and `X3`
//! is `-3`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{EdgeId, LinkDiagram, UnionFind};

pub type Word = Vec<i32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator index {0} out of range 1..={1}")]
    GeneratorRange(i32, usize),
    #[error("a presentation needs at least one generator")]
    NoGenerators,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct GroupPresentation {
    generator_count: usize,
    relators: Vec<Word>,
}

#[derive(Deserialize)]
struct RawPresentation {
    generator_count: usize,
    relators: Vec<Word>,
}

impl TryFrom<RawPresentation> for GroupPresentation {
    type Error = GroupError;

    fn try_from(r: RawPresentation) -> Result<Self, GroupError> {
        GroupPresentation::new(r.generator_count, r.relators)
    }
}

/// Invariant factors of an abelian group: `Z^free_rank + sum Z/torsion_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abelianization {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl Abelianization {
    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TietzeOutcome {
    pub presentation: GroupPresentation,
    pub moves: usize,
    /// Stopped because the move budget ran out.
    pub exhausted: bool,
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &g in w {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn invert(w: &[i32]) -> Word {
    w.iter().rev().map(|g| -g).collect()
}

/// Smallest rotation of the word or its inverse, identifying relators that
/// define the same normal closure trivially.
fn canonical(w: &[i32]) -> Word {
    let inv = invert(w);
    (0..w.len().max(1))
        .flat_map(|k| {
            let mut a = w.to_vec();
            a.rotate_left(k.min(w.len()));
            let mut b = inv.clone();
            b.rotate_left(k.min(inv.len()));
            [a, b]
        })
        .min()
        .unwrap_or_default()
}

impl GroupPresentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self, GroupError> {
        if generator_count == 0 {
            return Err(GroupError::NoGenerators);
        }
        for &g in relators.iter().flatten() {
            if g == 0 || g.unsigned_abs() as usize > generator_count {
                return Err(GroupError::GeneratorRange(g, generator_count));
            }
        }
        Ok(GroupPresentation {
            generator_count,
            relators: relators.iter().map(|r| free_reduce(r)).collect(),
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// One generator per arc and one conjugation relator per crossing.
    /// Crossingless components contribute a free generator each.
    pub fn wirtinger(d: &LinkDiagram) -> GroupPresentation {
        let m = d.edge_count();
        let mut uf = UnionFind::new(m + 1);
        for c in d.crossings() {
            uf.union(c.ends[c.over_in_slot()] as usize, c.ends[c.over_out_slot()] as usize);
        }
        let mut arc: BTreeMap<usize, i32> = BTreeMap::new();
        for e in 1..=m {
            let r = uf.find(e);
            let next = arc.len() as i32 + 1;
            arc.entry(r).or_insert(next);
        }
        let mut arc_of = |e: EdgeId| arc[&uf.find(e as usize)];
        let relators: Vec<Word> = d
            .crossings()
            .iter()
            .map(|c| {
                let k = arc_of(c.ends[c.over_in_slot()]);
                let i = arc_of(c.ends[0]);
                let j = arc_of(c.ends[2]);
                let s = c.sign as i32;
                vec![k * s, i, -k * s, -j]
            })
            .collect();
        let loops = d.components().iter().filter(|c| c.is_empty()).count();
        let count = arc.len() + loops;
        GroupPresentation {
            generator_count: count,
            relators: relators.iter().map(|r| free_reduce(r)).collect(),
        }
    }

    /// Exponent sums of each relator, one row per relator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i128>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0i128; self.generator_count];
                for &g in r {
                    row[g.unsigned_abs() as usize - 1] += g.signum() as i128;
                }
                row
            })
            .collect()
    }

    pub fn abelianization(&self) -> Abelianization {
        let diag = smith_diagonal(self.exponent_matrix(), self.generator_count);
        let rank = diag.iter().filter(|&&d| d != 0).count();
        Abelianization {
            free_rank: self.generator_count - rank,
            torsion: diag
                .into_iter()
                .filter(|&d| d > 1)
                .map(|d| d as u64)
                .collect(),
        }
    }

    /// Greedy Tietze simplification, at most `budget` moves.
    pub fn tietze_simplify(&self, budget: usize) -> TietzeOutcome {
        let mut g = self.clone();
        let mut moves = 0;
        loop {
            if moves >= budget {
                let exhausted = g.next_move().is_some();
                return TietzeOutcome {
                    presentation: g,
                    moves,
                    exhausted,
                };
            }
            match g.next_move() {
                Some(next) => {
                    g = next;
                    moves += 1;
                }
                None => {
                    return TietzeOutcome {
                        presentation: g,
                        moves,
                        exhausted: false,
                    }
                }
            }
        }
    }

    /// True only when simplification reaches a single free generator and
    /// the abelianization is `Z`. False means "not certified".
    pub fn is_infinite_cyclic_certificate(&self, budget: usize) -> bool {
        let out = self.tietze_simplify(budget);
        out.presentation.generator_count == 1
            && out.presentation.relators.is_empty()
            && self.abelianization().is_infinite_cyclic()
    }

    fn next_move(&self) -> Option<GroupPresentation> {
        self.tidy()
            .or_else(|| self.eliminate())
            .or_else(|| self.substitute())
    }

    /// Cyclic reduction, then removal of empty and repeated relators.
    fn tidy(&self) -> Option<GroupPresentation> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for r in &self.relators {
            let c = cyclic_reduce(r);
            if c.is_empty() || !seen.insert(canonical(&c)) {
                continue;
            }
            out.push(c);
        }
        if out == self.relators {
            None
        } else {
            Some(GroupPresentation {
                generator_count: self.generator_count,
                relators: out,
            })
        }
    }

    /// Removes a generator that occurs exactly once in some relator, using
    /// that relator to express it through the others.
    fn eliminate(&self) -> Option<GroupPresentation> {
        if self.generator_count <= 1 {
            return None;
        }
        let mut order: Vec<usize> = (0..self.relators.len()).collect();
        order.sort_by_key(|&i| (self.relators[i].len(), i));
        for ri in order {
            let r = &self.relators[ri];
            let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
            for g in r {
                *counts.entry(g.abs()).or_default() += 1;
            }
            let Some((&x, _)) = counts.iter().find(|(_, &n)| n == 1) else {
                continue;
            };
            let pos = r.iter().position(|g| g.abs() == x).unwrap();
            let (u, v) = (&r[..pos], &r[pos + 1..]);
            // u x v = 1  gives  x = u^-1 v^-1 ; u x^-1 v = 1 gives x = v u
            let value: Word = if r[pos] > 0 {
                [invert(u), invert(v)].concat()
            } else {
                [v, u].concat()
            };
            let value_inv = invert(&value);
            let rename = |g: i32| -> i32 {
                if g.abs() > x {
                    g - g.signum()
                } else {
                    g
                }
            };
            let relators = self
                .relators
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != ri)
                .map(|(_, w)| {
                    let mut out = Vec::new();
                    for &g in w {
                        if g == x {
                            out.extend(value.iter().copied());
                        } else if g == -x {
                            out.extend(value_inv.iter().copied());
                        } else {
                            out.push(g);
                        }
                    }
                    free_reduce(&out).into_iter().map(rename).collect()
                })
                .collect();
            return Some(GroupPresentation {
                generator_count: self.generator_count - 1,
                relators,
            });
        }
        None
    }

    /// Replaces a long piece of one relator occurring inside another by the
    /// inverse of the short remainder.
    fn substitute(&self) -> Option<GroupPresentation> {
        let mut order: Vec<usize> = (0..self.relators.len()).collect();
        order.sort_by_key(|&i| (self.relators[i].len(), i));
        for &ri in &order {
            let r = &self.relators[ri];
            let l = r.len();
            if l == 0 {
                continue;
            }
            let mut forms = Vec::new();
            for k in 0..l {
                let mut a = r.clone();
                a.rotate_left(k);
                forms.push(a.clone());
                forms.push(invert(&a));
            }
            for (si, s) in self.relators.iter().enumerate() {
                if si == ri {
                    continue;
                }
                for len in (l / 2 + 1..=l).rev() {
                    for f in &forms {
                        let (piece, rest) = f.split_at(len);
                        if let Some(at) = find_cyclic(s, piece) {
                            let mut rotated = s.clone();
                            rotated.rotate_left(at);
                            let mut out = invert(rest);
                            out.extend_from_slice(&rotated[len..]);
                            let out = cyclic_reduce(&out);
                            if out.len() >= s.len() {
                                continue;
                            }
                            let mut relators = self.relators.clone();
                            relators[si] = out;
                            return Some(GroupPresentation {
                                generator_count: self.generator_count,
                                relators,
                            });
                        }
                    }
                }
            }
        }
        None
    }
}

/// Start of `piece` inside the cyclic word `s`.
fn find_cyclic(s: &[i32], piece: &[i32]) -> Option<usize> {
    if piece.is_empty() || piece.len() > s.len() {
        return None;
    }
    (0..s.len()).find(|&at| (0..piece.len()).all(|k| s[(at + k) % s.len()] == piece[k]))
}

/// Diagonal of the Smith normal form, nonnegative, length `min(rows, cols)`.
fn smith_diagonal(mut a: Vec<Vec<i128>>, cols: usize) -> Vec<i128> {
    let rows = a.len();
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        // find a nonzero entry in the remaining block
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| a[r][c] != 0)
            .min_by_key(|&(r, c)| a[r][c].abs())
        else {
            diag.extend(std::iter::repeat_n(0, n - t));
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut done = true;
            for r in t + 1..rows {
                let q = a[r][t] / a[t][t];
                if q != 0 {
                    for c in t..cols {
                        a[r][c] -= q * a[t][c];
                    }
                }
                if a[r][t] != 0 {
                    done = false;
                }
            }
            for c in t + 1..cols {
                let q = a[t][c] / a[t][t];
                if q != 0 {
                    for r in t..rows {
                        a[r][c] -= q * a[r][t];
                    }
                }
                if a[t][c] != 0 {
                    done = false;
                }
            }
            if done {
                // the pivot must divide the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                    .find(|&(r, c)| a[r][c] % a[t][t] != 0);
                match bad {
                    None => break,
                    Some((r, _)) => {
                        for c in t..cols {
                            a[t][c] += a[r][c];
                        }
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/column t to the pivot
            let mut best = (t, t);
            for r in t..rows {
                if a[r][t] != 0 && a[r][t].abs() < a[best.0][best.1].abs() {
                    best = (r, t);
                }
            }
            for c in t..cols {
                if a[t][c] != 0 && a[t][c].abs() < a[best.0][best.1].abs() {
                    best = (t, c);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

pub fn format_word(w: &[i32]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&g| {
            if g > 0 {
                format!("x{g}")
            } else {
                format!("X{}", -g)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_word(s: &str) -> Result<Word, GroupError> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split_whitespace()
        .map(|tok| {
            let (sign, rest) = if let Some(r) = tok.strip_prefix('x') {
                (1, r)
            } else if let Some(r) = tok.strip_prefix('X') {
                (-1, r)
            } else {
                return Err(GroupError::Parse(tok.into()));
            };
            match rest.parse::<i32>() {
                Ok(k) if k > 0 => Ok(sign * k),
                _ => Err(GroupError::Parse(tok.into())),
            }
        })
        .collect()
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (1..=self.generator_count).map(|k| format!("x{k}")).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| format_word(r)).collect();
        if rels.is_empty() {
            write!(f, "< {} | >", gens.join(", "))
        } else {
            write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
        }
    }
}

/// Parses `< x1, x2 | x1 X2, x2 x2 >`.
impl FromStr for GroupPresentation {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('<')
            .and_then(|t| t.strip_suffix('>'))
            .ok_or_else(bad)?;
        let (gens, rels) = inner.split_once('|').ok_or_else(bad)?;
        let gens: Vec<&str> = gens.split(',').map(str::trim).filter(|g| !g.is_empty()).collect();
        for (k, g) in gens.iter().enumerate() {
            if *g != format!("x{}", k + 1) {
                return Err(GroupError::Parse(g.to_string()));
            }
        }
        let relators = rels
            .split(',')
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(parse_word)
            .collect::<Result<Vec<_>, _>>()?;
        GroupPresentation::new(gens.len(), relators)
    }
}
