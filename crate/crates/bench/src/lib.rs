//! Fixtures shared by the benchmarks.

use brunnel::{DtCode, LinkDiagram};

pub const PUBLISHED_KNOT: &str = include_str!("../../../data/k.dt");

pub fn knot(code: &str) -> LinkDiagram {
    DtCode::parse(code).unwrap().to_diagram().unwrap()
}

pub fn trefoil_sum(n: usize) -> LinkDiagram {
    let t = knot("DT:[(4,6,2)]");
    (1..n).fold(t.clone(), |d, _| d.split_union(&t).band_sum(0, 1).unwrap())
}
