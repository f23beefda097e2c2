mod common;

use std::collections::BTreeSet;

use brunnel::satellite::{bing_double, expected_crossings, iterated_bing_double, whitehead_double, DoublingPattern};
use brunnel::LinkDiagram;
use common::*;

fn keep(d: &LinkDiagram, comps: &[usize]) -> LinkDiagram {
    d.sublink(&comps.iter().copied().collect::<BTreeSet<_>>()).unwrap()
}

fn hopf() -> LinkDiagram {
    LinkDiagram::from_pd_text("PD[X(4,1,3,2),X(2,3,1,4)]").unwrap()
}

#[test]
fn bing_double_of_corpus_knots() {
    for (name, k, _) in corpus() {
        let bd = bing_double(&k, 0).unwrap();
        assert_eq!(bd.component_count(), 2, "{name}");
        assert_eq!(bd.linking_number(0, 1), 0, "{name}");
        assert_eq!(bd.writhe(0), 0, "{name}");
        assert_eq!(bd.writhe(1), 0, "{name}");
        assert_eq!(bd.crossing_count(), expected_crossings(&k, 0, DoublingPattern::bing()), "{name}");
        for c in 0..2 {
            let rest = keep(&bd, &[c]).simplify();
            assert_eq!((rest.crossing_count(), rest.component_count()), (0, 1), "{name} keep {c}");
        }
    }
}

#[test]
fn bing_double_inside_a_link() {
    // trefoil split from a Hopf link, doubling the Hopf component
    let d = hopf().split_union(&trefoil());
    let bd = bing_double(&d, 1).unwrap();
    assert_eq!(bd.component_count(), 4);
    let lk = bd.linking_matrix();
    assert_eq!(lk[1][2], 0);
    assert_eq!(lk[0][1], 0);
    assert_eq!(lk[0][2], 0);
    assert_eq!(lk[0][3], 0);
    for drop in [1, 2] {
        let kept: Vec<usize> = (0..4).filter(|&c| c != drop).collect();
        let s = keep(&bd, &kept).simplify();
        // Hopf partner, the surviving new component, the trefoil
        assert_eq!(s.component_count(), 3);
        assert_eq!(s.linking_matrix()[0][1], 0);
        let old = keep(&s, &[0, 2]);
        assert_eq!(old.crossing_count(), 3);
        let unknot = keep(&s, &[1]).simplify();
        assert_eq!(unknot.crossing_count(), 0);
        assert_eq!(s.crossing_count(), 3, "the unknot splits off");
    }
}

#[test]
fn ordering_follows_doubled_component() {
    let d = trefoil().split_union(&hopf());
    let bd = bing_double(&d, 0).unwrap();
    assert_eq!(bd.component_count(), 4);
    assert_eq!(bd.linking_number(2, 3).abs(), 1);
    assert_eq!(keep(&bd, &[2, 3]).crossing_count(), 2);
}

#[test]
fn iterated_doubles() {
    let d = iterated_bing_double(&LinkDiagram::unknot(), 2).unwrap();
    assert_eq!(d.component_count(), 3);
    assert!(d.linking_matrix().iter().flatten().all(|&x| x == 0));
    assert_eq!(iterated_bing_double(&trefoil(), 0).unwrap(), trefoil());
    let k = iterated_bing_double(&trefoil(), 1).unwrap();
    assert_eq!(k.component_count(), 2);
}

#[test]
fn whitehead_doubles() {
    let w = whitehead_double(&LinkDiagram::unknot(), 0, 1).unwrap().simplify();
    assert_eq!(w.crossing_count(), 0);
    for (name, k, _) in corpus() {
        for sign in [1, -1] {
            let w = whitehead_double(&k, 0, sign).unwrap();
            assert_eq!(w.component_count(), 1, "{name}");
            assert_eq!(w.crossing_count(), expected_crossings(&k, 0, DoublingPattern::whitehead(sign)), "{name}");
        }
    }
    let ww = whitehead_double(&whitehead_double(&trefoil(), 0, 1).unwrap(), 0, 1).unwrap();
    assert_eq!(ww.component_count(), 1);
    assert!(bing_double(&trefoil(), 1).is_err());
}
