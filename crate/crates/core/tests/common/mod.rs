#![allow(dead_code)]

use brunnel::{DtCode, LinkDiagram};

pub fn dt(s: &str) -> LinkDiagram {
    DtCode::parse(s).unwrap().to_diagram().unwrap()
}

pub fn trefoil() -> LinkDiagram {
    dt("DT:[(4,6,2)]")
}

/// Connected sum of `n` copies of the trefoil, `n >= 1`.
pub fn trefoil_sum(n: usize) -> LinkDiagram {
    let mut d = trefoil();
    for _ in 1..n {
        d = d.split_union(&trefoil()).band_sum(0, 1).unwrap();
    }
    d
}

pub fn granny() -> LinkDiagram {
    trefoil_sum(2)
}

pub fn square() -> LinkDiagram {
    trefoil().split_union(&trefoil().mirror()).band_sum(0, 1).unwrap()
}

pub type Matrix = Vec<Vec<i64>>;

fn direct_sum(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len() + b.len();
    let mut m = vec![vec![0; n]; n];
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m[i][j] = x;
        }
    }
    for (i, row) in b.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m[a.len() + i][a.len() + j] = x;
        }
    }
    m
}

fn neg_transpose(a: &Matrix) -> Matrix {
    (0..a.len()).map(|i| (0..a.len()).map(|j| -a[j][i]).collect()).collect()
}

/// Named knots with a diagram and a Seifert matrix.
pub fn corpus() -> Vec<(&'static str, LinkDiagram, Matrix)> {
    let v3 = vec![vec![-1, 1], vec![0, -1]];
    let v51 = vec![
        vec![-1, 1, 0, 0],
        vec![0, -1, 1, 0],
        vec![0, 0, -1, 1],
        vec![0, 0, 0, -1],
    ];
    vec![
        ("3_1", trefoil(), v3.clone()),
        ("4_1", dt("DT:[(4,6,8,2)]"), vec![vec![-1, 1], vec![0, 1]]),
        ("5_1", dt("DT:[(6,8,10,2,4)]"), v51),
        ("5_2", dt("DT:[(4,8,10,2,6)]"), vec![vec![-1, 1], vec![0, -2]]),
        ("granny", granny(), direct_sum(&v3, &v3)),
        ("square", square(), direct_sum(&v3, &neg_transpose(&v3))),
    ]
}

/// Polynomials as coefficient vectors, lowest degree first.
fn pmul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn padd(a: &mut Vec<i64>, b: &[i64], s: i64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, y) in b.iter().enumerate() {
        a[i] += s * y;
    }
}

fn laplace(m: &[Vec<Vec<i64>>]) -> Vec<i64> {
    if m.is_empty() {
        return vec![1];
    }
    let mut out = Vec::new();
    for j in 0..m.len() {
        let minor: Vec<Vec<Vec<i64>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = pmul(&m[0][j], &laplace(&minor));
        padd(&mut out, &term, if j % 2 == 0 { 1 } else { -1 });
    }
    out
}

/// `det(V - t V^T)` by cofactor expansion, lowest degree first.
pub fn seifert_alexander(v: &Matrix) -> Vec<i64> {
    let n = v.len();
    let m: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|i| (0..n).map(|j| vec![v[i][j], -v[j][i]]).collect())
        .collect();
    let mut p = laplace(&m);
    while p.last() == Some(&0) {
        p.pop();
    }
    let low = p.iter().position(|&c| c != 0).unwrap_or(0);
    let mut p = p[low..].to_vec();
    if p.last().is_some_and(|&c| c < 0) {
        p.iter_mut().for_each(|c| *c = -*c);
    }
    p
}

pub fn hopf() -> LinkDiagram {
    LinkDiagram::from_pd_text("PD[X(4,1,3,2),X(2,3,1,4)]").unwrap()
}

/// Small diagrams to start random operation sequences from.
pub fn seeds() -> Vec<LinkDiagram> {
    let mut v: Vec<LinkDiagram> = corpus().into_iter().take(4).map(|(_, d, _)| d).collect();
    v.push(hopf());
    v.push(LinkDiagram::unknot());
    v.push(LinkDiagram::unlink(2));
    v
}

/// Applies operation `op` with parameters drawn from `a`, `b`; returns
/// `None` when the operation does not apply.
pub fn step(d: &LinkDiagram, op: u8, a: usize, b: usize) -> Option<LinkDiagram> {
    let n = d.component_count();
    let (i, j) = (a % n, b % n);
    match op % 7 {
        0 => Some(d.split_union(&seeds()[a % seeds().len()])),
        1 if i != j => d.band_sum(i, j).ok(),
        2 => Some(d.mirror()),
        3 => d.reverse_component(i).ok(),
        4 if d.crossing_count() < 40 => brunnel::satellite::bing_double(d, i).ok(),
        5 if d.crossing_count() < 40 => brunnel::satellite::whitehead_double(d, i, if b % 2 == 0 { 1 } else { -1 }).ok(),
        6 => Some(d.simplify()),
        _ => None,
    }
}

pub fn build(start: usize, ops: &[(u8, usize, usize)]) -> LinkDiagram {
    let s = seeds();
    let mut d = s[start % s.len()].clone();
    for &(op, a, b) in ops {
        if let Some(next) = step(&d, op, a, b) {
            d = next;
        }
    }
    d
}
