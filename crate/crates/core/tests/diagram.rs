mod common;

use std::collections::BTreeSet;

use brunnel::{DtCode, LinkDiagram};
use common::*;
use proptest::prelude::*;

fn random_link() -> impl Strategy<Value = LinkDiagram> {
    (0usize..7, prop::collection::vec((0u8..7, 0usize..8, 0usize..8), 0..5)).prop_map(|(s, ops)| build(s, &ops))
}

fn block(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len() + b.len();
    let mut m = vec![vec![0; n]; n];
    for (i, r) in a.iter().enumerate() {
        m[i][..r.len()].copy_from_slice(r);
    }
    for (i, r) in b.iter().enumerate() {
        m[a.len() + i][a.len()..].copy_from_slice(r);
    }
    m
}

#[test]
fn hopf_and_split_examples() {
    let h = hopf();
    assert_eq!(h.linking_matrix(), vec![vec![0, -1], vec![-1, 0]]);
    assert_eq!(h.mirror().linking_number(0, 1), 1);
    let u = LinkDiagram::unknot().split_union(&LinkDiagram::unknot());
    assert_eq!((u.component_count(), u.crossing_count()), (2, 0));
    assert_eq!(u.linking_matrix(), vec![vec![0, 0], vec![0, 0]]);
    let th = trefoil().split_union(&h);
    assert_eq!((th.crossing_count(), th.component_count()), (5, 3));
    assert_eq!(th.sublink(&BTreeSet::from([0])).unwrap(), trefoil());
    assert_eq!(h.sublink(&BTreeSet::from([0])).unwrap().crossing_count(), 0);
    assert_eq!(h.sublink(&BTreeSet::from([0, 1])).unwrap(), h);
    assert!(h.sublink(&BTreeSet::new()).is_err());
}

#[test]
fn band_sums() {
    let u = LinkDiagram::unlink(2).band_sum(0, 1).unwrap();
    assert_eq!(u.component_count(), 1);
    assert_eq!(u.simplify().crossing_count(), 0);
    let g = granny();
    assert_eq!((g.crossing_count(), g.component_count()), (6, 1));
    assert_eq!(hopf().band_sum(0, 1).unwrap().component_count(), 1);
    assert!(hopf().band_sum(1, 1).is_err());
}

#[test]
fn pd_examples() {
    let t = trefoil();
    let back = LinkDiagram::from_pd_text(&t.to_pd_text()).unwrap();
    assert_eq!(back, t);
    let u = LinkDiagram::unknot();
    assert_eq!(LinkDiagram::from_pd_text(&u.to_pd_text()).unwrap(), u);
    assert_eq!(LinkDiagram::from_pd_text("PD[]").unwrap().component_count(), 0);
}

#[test]
fn dt_knots_reconstruct() {
    let d = DtCode::parse("DT:[(4,6,2)]").unwrap().to_diagram().unwrap();
    assert_eq!((d.crossing_count(), d.component_count()), (3, 1));
    assert_eq!(d.writhe(0).abs(), 3);
    assert!(DtCode::parse("DT:[]").is_err() || DtCode::parse("DT:[]").unwrap().to_diagram().is_err());
    for (name, k, _) in corpus() {
        if let Ok(code) = DtCode::from_diagram(&k) {
            let again = code.to_diagram().unwrap();
            assert_eq!(again.crossing_count(), k.crossing_count(), "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linking_matrix_is_symmetric(d in random_link()) {
        let m = d.linking_matrix();
        for i in 0..m.len() {
            for j in 0..m.len() {
                prop_assert_eq!(m[i][j], m[j][i]);
            }
            prop_assert_eq!(m[i][i], d.writhe(i));
        }
    }

    #[test]
    fn split_union_is_block_diagonal(a in random_link(), b in random_link()) {
        let u = a.split_union(&b);
        prop_assert_eq!(u.linking_matrix(), block(&a.linking_matrix(), &b.linking_matrix()));
        prop_assert_eq!(u.crossing_count(), a.crossing_count() + b.crossing_count());
        let first: BTreeSet<usize> = (0..a.component_count()).collect();
        prop_assert_eq!(u.sublink(&first).unwrap(), a);
    }

    #[test]
    fn sublink_takes_principal_submatrix(d in random_link(), mask in 1u32..256) {
        let n = d.component_count();
        let keep: BTreeSet<usize> = (0..n).filter(|&c| mask & (1 << (c % 8)) != 0).collect();
        prop_assume!(!keep.is_empty());
        let s = d.sublink(&keep).unwrap();
        let m = d.linking_matrix();
        let idx: Vec<usize> = keep.iter().copied().collect();
        let expect: Vec<Vec<i64>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j]).collect()).collect();
        prop_assert_eq!(s.linking_matrix(), expect);
    }

    #[test]
    fn band_sum_keeps_other_linking(d in random_link(), a in 0usize..8, b in 0usize..8) {
        let n = d.component_count();
        let (i, j) = (a % n, b % n);
        prop_assume!(i != j);
        let s = d.band_sum(i, j).unwrap();
        prop_assert_eq!(s.component_count(), n - 1);
        let others: Vec<usize> = (0..n).filter(|&c| c != i && c != j).collect();
        // survivors keep their order after the merged component is removed
        let pos = |c: usize| if c > i.max(j) { c - 1 } else { c };
        for &x in &others {
            for &y in &others {
                prop_assert_eq!(s.linking_number(pos(x), pos(y)), d.linking_number(x, y));
            }
        }
    }

    #[test]
    fn simplifier_never_adds_crossings(d in random_link()) {
        let (s, moves) = d.simplify_counted();
        prop_assert!(s.crossing_count() <= d.crossing_count());
        prop_assert_eq!(s.component_count(), d.component_count());
        prop_assert_eq!(s.linking_matrix().iter().enumerate().map(|(i, r)| r.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| *x).sum::<i64>()).collect::<Vec<_>>(),
            d.linking_matrix().iter().enumerate().map(|(i, r)| r.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| *x).sum::<i64>()).collect::<Vec<_>>());
        prop_assert_eq!(moves == 0, s == d);
    }

    #[test]
    fn pd_round_trip(d in random_link()) {
        let text = d.to_pd_text();
        let back = LinkDiagram::from_pd_text(&text).unwrap();
        prop_assert_eq!(back.component_count(), d.component_count());
        prop_assert_eq!(back.crossing_count(), d.crossing_count());
        prop_assert_eq!(back.to_pd_text(), text);
    }

    #[test]
    fn json_round_trip(d in random_link()) {
        let s = serde_json::to_string(&d).unwrap();
        prop_assert_eq!(serde_json::from_str::<LinkDiagram>(&s).unwrap(), d);
    }
}
