//! Acceptance criteria 1 to 10, one line each. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use brunnel::alexpoly::alexander_of_knot;
use brunnel::brunnian::{generate_nk, Reduction};
use brunnel::codec::DtCode;
use brunnel::jsjtree::{JsjTree, PieceKind, PieceLabel, Permutation, Rigidity};
use brunnel::satellite::{bing_double, whitehead_double};
use brunnel::surfacecalc::{
    distinctness_ledger, rim_surgery_omega, sigma0, BrunnianStatus, OmegaValue, RimSurgery, Step,
    SurfaceLinkDescriptor, Verdict,
};
use brunnel::{GroupPresentation, LaurentPolynomial, LinkDiagram};
use itertools::Itertools;

type Check = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn read(rel: &str) -> String {
    std::fs::read_to_string(root().join(rel)).unwrap()
}

fn dt(s: &str) -> LinkDiagram {
    DtCode::parse(s).unwrap().to_diagram().unwrap()
}

fn trefoil() -> LinkDiagram {
    dt("DT:[(4,6,2)]")
}

fn trefoil_sum(n: usize) -> LinkDiagram {
    (1..n).fold(trefoil(), |d, _| d.split_union(&trefoil()).band_sum(0, 1).unwrap())
}

fn lp(c: &[i64]) -> LaurentPolynomial {
    LaurentPolynomial::from_coeffs(0, c)
}

type Matrix = Vec<Vec<i64>>;

fn direct_sum(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len() + b.len();
    let mut m = vec![vec![0; n]; n];
    for (i, row) in a.iter().enumerate() {
        m[i][..row.len()].copy_from_slice(row);
    }
    for (i, row) in b.iter().enumerate() {
        m[a.len() + i][a.len()..].copy_from_slice(row);
    }
    m
}

/// `det(V - t V^T)` by cofactor expansion; entries are coefficient vectors.
fn seifert_det(m: &[Vec<Vec<i64>>]) -> Vec<i64> {
    if m.is_empty() {
        return vec![1];
    }
    let mut out = vec![0i64; 2 * m.len() + 1];
    for j in 0..m.len() {
        let minor: Vec<Vec<Vec<i64>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let sub = seifert_det(&minor);
        let sign = if j % 2 == 0 { 1 } else { -1 };
        for (a, x) in m[0][j].iter().enumerate() {
            for (b, y) in sub.iter().enumerate() {
                out[a + b] += sign * x * y;
            }
        }
    }
    out
}

fn seifert_alexander(v: &Matrix) -> LaurentPolynomial {
    let n = v.len();
    let m: Vec<Vec<Vec<i64>>> = (0..n).map(|i| (0..n).map(|j| vec![v[i][j], -v[j][i]]).collect()).collect();
    lp(&seifert_det(&m)).normalize()
}

fn corpus() -> Vec<(&'static str, LinkDiagram, Matrix)> {
    let v3 = vec![vec![-1, 1], vec![0, -1]];
    let v3_mirror: Matrix = vec![vec![1, 0], vec![-1, 1]];
    let v51 = (0..4)
        .map(|i| (0..4).map(|j| if i == j { -1 } else if j == i + 1 { 1 } else { 0 }).collect())
        .collect();
    vec![
        ("3_1", trefoil(), v3.clone()),
        ("4_1", dt("DT:[(4,6,8,2)]"), vec![vec![-1, 1], vec![0, 1]]),
        ("5_1", dt("DT:[(6,8,10,2,4)]"), v51),
        ("5_2", dt("DT:[(4,8,10,2,6)]"), vec![vec![-1, 1], vec![0, -2]]),
        ("granny", trefoil_sum(2), direct_sum(&v3, &v3)),
        (
            "square",
            trefoil().split_union(&trefoil().mirror()).band_sum(0, 1).unwrap(),
            direct_sum(&v3, &v3_mirror),
        ),
    ]
}

fn published_codes() -> Check {
    let (k_text, l_text) = (read("data/k.dt"), read("data/l.dt"));
    let k = DtCode::parse(&k_text).map_err(|e| e.to_string())?;
    ensure(k.component_count() == 1 && k.crossing_count() == 42, || "knot code size".into())?;
    let l = DtCode::parse(&l_text).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = l.components().iter().map(Vec::len).collect();
    ensure(sizes == [16, 15, 4] && l.crossing_count() == 35, || format!("link sizes {sizes:?}"))?;
    for (code, text) in [(&k, &k_text), (&l, &l_text)] {
        let s = code.to_string();
        ensure(s == text.trim(), || format!("serialization differs: {s}"))?;
        ensure(DtCode::parse(&s).as_ref() == Ok(code), || "re-parse differs".into())?;
    }
    Ok(())
}

fn printed_presentations() -> Check {
    for text in ["< x1, x2 | X1 x1 X2 X1 x2 >", "< x1, x2 | x1 X1 X1 x1 x2 X1 X2 >"] {
        let g: GroupPresentation = text.parse().map_err(|e: brunnel::grouppres::GroupError| e.to_string())?;
        ensure(g.is_infinite_cyclic_certificate(50), || format!("{text} not certified"))?;
        let ab = g.abelianization();
        ensure(ab.free_rank == 1 && ab.torsion.is_empty(), || format!("{text}: abelianization {ab}"))?;
    }
    Ok(())
}

fn alexander_suite() -> Check {
    let unknot = alexander_of_knot(&LinkDiagram::unknot()).map_err(|e| e.to_string())?;
    ensure(unknot == lp(&[1]) && unknot.factor_count() == Ok(0), || "unknot".into())?;
    let t = alexander_of_knot(&trefoil()).map_err(|e| e.to_string())?;
    ensure(t == lp(&[1, -1, 1]) && t.factor_count() == Ok(1), || format!("trefoil gave {t}"))?;
    for n in 1..=4 {
        let p = alexander_of_knot(&trefoil_sum(n)).map_err(|e| e.to_string())?;
        ensure(p.factor_count() == Ok(n), || format!("#{n} trefoils gave {p}"))?;
    }
    let wh = whitehead_double(&trefoil(), 0, 1).map_err(|e| e.to_string())?;
    let w = alexander_of_knot(&wh).map_err(|e| e.to_string())?;
    ensure(w == lp(&[1]), || format!("Whitehead double gave {w}"))?;
    for (name, d, v) in corpus() {
        let fox = alexander_of_knot(&d).map_err(|e| e.to_string())?;
        let oracle = seifert_alexander(&v);
        ensure(fox == oracle, || format!("{name}: fox {fox}, oracle {oracle}"))?;
    }
    Ok(())
}

fn bing_double_properties() -> Check {
    let figure_eight = dt("DT:[(4,6,8,2)]");
    for (name, k, _) in corpus() {
        let bd = bing_double(&k, 0).map_err(|e| e.to_string())?;
        ensure(bd.component_count() == 2, || format!("{name}: component count"))?;
        ensure(bd.linking_number(0, 1) == 0, || format!("{name}: linking"))?;
        ensure(bd.writhe(0) == 0 && bd.writhe(1) == 0, || format!("{name}: framing"))?;
        for keep in [0, 1] {
            let s = bd.sublink(&BTreeSet::from([keep])).unwrap().simplify();
            ensure(s.crossing_count() == 0 && s.component_count() == 1, || {
                format!("{name}: component {keep} left {} crossings", s.crossing_count())
            })?;
        }
        // inside a link: the untouched component survives unchanged
        let l = k.split_union(&figure_eight);
        let bl = bing_double(&l, 0).map_err(|e| e.to_string())?;
        let m = bl.linking_matrix();
        ensure(m[0][1] == 0 && m[0][2] == 0 && m[1][2] == 0, || format!("{name}: link linking"))?;
        for keep in [0, 1] {
            let s = bl.sublink(&BTreeSet::from([keep, 2])).unwrap().simplify();
            let rest = s.sublink(&BTreeSet::from([1])).unwrap();
            let new = s.sublink(&BTreeSet::from([0])).unwrap().simplify();
            ensure(new.crossing_count() == 0, || format!("{name}: new component not unknotted"))?;
            ensure(
                alexander_of_knot(&rest).ok() == alexander_of_knot(&figure_eight).ok(),
                || format!("{name}: old component changed"),
            )?;
            ensure(s.linking_number(0, 1) == 0, || format!("{name}: split part links"))?;
        }
    }
    Ok(())
}

fn brute_force(t: &JsjTree) -> Vec<Permutation> {
    let n = t.vertex_count();
    (0..n).permutations(n).filter(|p| t.is_automorphism(p)).sorted().collect()
}

/// Canonical string of a rooted subtree, children sorted.
fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let kids: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| rooted_code(adj, w, v)).sorted().collect();
    format!("({})", kids.concat())
}

/// Canonical string of an unrooted tree: the smallest code over its centres.
fn tree_code(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|&c| rooted_code(&adj, c, usize::MAX)).min().unwrap()
}

/// Every tree shape on `n` vertices, one edge list each.
fn tree_shapes(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut shapes: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for m in 1..n {
        let mut seen = BTreeSet::new();
        shapes = shapes
            .iter()
            .flat_map(|e| (0..m).map(move |v| e.iter().copied().chain([(v, m)]).collect::<Vec<_>>()))
            .filter(|e| seen.insert(tree_code(m + 1, e)))
            .collect();
    }
    shapes
}

/// All shapes up to `max` vertices, each with uniform labels and with one
/// deterministic mixed labelling.
fn all_small_trees(max: usize) -> Vec<JsjTree> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move |m: usize| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % m as u64) as usize
    };
    let mut out = Vec::new();
    for n in 1..=max {
        for edges in tree_shapes(n) {
            let mut d = vec![0; n];
            for &(a, b) in &edges {
                d[a] += 1;
                d[b] += 1;
            }
            let uniform = (0..n).map(|v| PieceLabel::new(PieceKind::Other("B".into()), d[v], 0)).collect();
            let mixed = (0..n)
                .map(|v| match next(3) {
                    0 if d[v] <= 3 => PieceLabel::new(PieceKind::BorromeanExterior, 3, 3 - d[v]),
                    1 => PieceLabel::new(PieceKind::Other("A".into()), d[v] + 1, 1),
                    _ => PieceLabel::new(PieceKind::Other("B".into()), d[v], 0),
                })
                .collect();
            out.push(JsjTree::new(uniform, edges.clone(), None).unwrap());
            out.push(JsjTree::new(mixed, edges, None).unwrap());
        }
    }
    out
}

fn jsj_calculus() -> Check {
    let k = JsjTree::single(PieceLabel::knot_exterior("K")).map_err(|e| e.to_string())?;
    let mut small = Vec::new();
    for n in 0..=6 {
        let t = k.bing_extend_n(n + 1).map_err(|e| e.to_string())?;
        ensure(t.vertex_count() == n + 2, || format!("n={n}: {} vertices", t.vertex_count()))?;
        ensure(t.degrees().iter().all(|&d| d <= 2) && t.edges().len() == n + 1, || format!("n={n}: not a path"))?;
        let borromean = t.vertices().iter().filter(|l| l.kind == PieceKind::BorromeanExterior).count();
        ensure(borromean == n + 1, || format!("n={n}: {borromean} Borromean pieces"))?;
        let aut = t.automorphisms().map_err(|e| e.to_string())?;
        ensure(aut.len() == 1, || format!("n={n}: |Aut| = {}", aut.len()))?;
        let c = t.covering_tree().map_err(|e| e.to_string())?;
        let caut = c.automorphisms().map_err(|e| e.to_string())?;
        ensure(caut.len() == 2, || format!("n={n}: cover |Aut| = {}", caut.len()))?;
        small.extend([t, c].into_iter().filter(|x| x.vertex_count() <= 9));
    }
    let shapes = all_small_trees(9);
    ensure(shapes.len() == 2 * 95, || format!("{} tree shapes up to 9 vertices", shapes.len() / 2))?;
    small.extend(shapes);
    for t in &small {
        let fast = t.automorphisms().map_err(|e| e.to_string())?;
        ensure(fast == brute_force(t), || format!("enumerators disagree on {} vertices", t.vertex_count()))?;
    }
    Ok(())
}

fn rigidity_checker() -> Check {
    let k = JsjTree::single(PieceLabel::knot_exterior("K")).unwrap();
    let c1 = k.bing_extend().unwrap().rigidity();
    ensure(c1 == Rigidity::ConditionII, || format!("single extension gave {c1:?}"))?;
    let satellite: JsjTree = serde_json::from_str(&read("data/satellite_tree.json")).map_err(|e| e.to_string())?;
    let c2 = satellite.rigidity();
    ensure(c2 == Rigidity::ConditionI, || format!("satellite tree gave {c2:?}"))?;
    let two = JsjTree::new(
        vec![
            PieceLabel::new(PieceKind::BorromeanExterior, 3, 2),
            PieceLabel::new(PieceKind::BorromeanExterior, 3, 2),
        ],
        vec![(0, 1)],
        None,
    )
    .unwrap();
    let c3 = two.rigidity();
    ensure(c3 == Rigidity::Neither, || format!("two Borromean pieces gave {c3:?}"))?;
    let c4 = k.bing_extend_n(2).unwrap().rigidity();
    ensure(c4 == Rigidity::Neither, || format!("double extension gave {c4:?}"))
}

fn random_history(seed: u64) -> SurfaceLinkDescriptor {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move |m: u64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % m) as usize
    };
    let boundary = [None, Some(LinkDiagram::unknot()), Some(trefoil())][next(3)].clone();
    let nontrivial = boundary.as_ref().is_some_and(|b| b.crossing_count() > 0);
    let mut d = if next(4) == 0 {
        SurfaceLinkDescriptor::new(sigma0()).unwrap()
    } else {
        SurfaceLinkDescriptor::base_disk("D", boundary, nontrivial)
    };
    for _ in 0..next(5) {
        let n = d.component_count();
        let step = match next(4) {
            0 => Step::BingDoubleFirst,
            1 if n > 2 => Step::Band { i: 1, j: 2 },
            2 => Step::Color {
                component: next(n as u64),
                color: format!("C{}", next(3)),
            },
            _ => Step::RimSurgery(RimSurgery {
                component: next(n as u64),
                curve: "C".into(),
                knot: "3_1".into(),
                twist: 1,
                alexander: lp(&[1, -1, 1]),
            }),
        };
        if let Ok(x) = d.apply(step) {
            d = x;
        }
    }
    d
}

fn descriptor_round_trip() -> Check {
    for seed in 0..100 {
        let d = random_history(seed);
        if !d.components()[0].is_disk() {
            return Err(format!("seed {seed}: first component not a disk"));
        }
        let bd = d.bing_double_first().map_err(|e| e.to_string())?;
        let lift = bd.covering_lift(2).map_err(|e| e.to_string())?;
        ensure(lift.descriptor == d, || format!("seed {seed}: lift differs"))?;
        if d.brunnian_status() == BrunnianStatus::Brunnian {
            ensure(bd.brunnian_status() == BrunnianStatus::Brunnian, || format!("seed {seed}: lost Brunnian"))?;
        }
    }
    let two = SurfaceLinkDescriptor::new(sigma0()).unwrap();
    for n in 2..=10 {
        let d = two.bing_double_first_n(n - 2).map_err(|e| e.to_string())?;
        ensure(d.component_count() == n, || format!("BD^{} has {} components", n - 2, d.component_count()))?;
        ensure(d.brunnian_status() == BrunnianStatus::Brunnian, || format!("BD^{} not Brunnian", n - 2))?;
    }
    Ok(())
}

fn omega_ledger(js: &[LaurentPolynomial]) -> Check {
    for (i, j) in js.iter().enumerate() {
        let n = i as u64 + 1;
        let count = j.factor_count().map_err(|e| e.to_string())? as u64;
        let o = rim_surgery_omega(OmegaValue::Finite(0), count);
        ensure(o == OmegaValue::Finite(n), || format!("n={n}: omega {o}"))?;
        ensure(rim_surgery_omega(OmegaValue::Bottom, count) == OmegaValue::Bottom, || "bottom".into())?;
    }
    let start = SurfaceLinkDescriptor::base_disk("D", None, true)
        .apply(Step::AssertOmega {
            value: OmegaValue::Finite(0),
            reason: "base".into(),
        })
        .unwrap();
    let mut family = Vec::new();
    for (i, j) in js.iter().enumerate() {
        let d = start
            .rim_surgery(RimSurgery {
                component: 0,
                curve: "C".into(),
                knot: format!("J_{}", i + 1),
                twist: 1,
                alexander: j.clone(),
            })
            .map_err(|e| e.to_string())?;
        ensure(d.omega() == Some(OmegaValue::Finite(i as u64 + 1)), || format!("J_{}: omega {:?}", i + 1, d.omega()))?;
        family.push(d);
    }
    let ledger = distinctness_ledger(&family).map_err(|e| e.to_string())?;
    for (i, row) in ledger.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                ensure(*v == Verdict::DistinguishedByOmega, || format!("pair ({i},{j}) is {v:?}"))?;
            }
        }
    }
    Ok(())
}

fn nk_brunnian() -> Check {
    let base = SurfaceLinkDescriptor::base_disk("D", None, true);
    for n in 2..=5 {
        let full = generate_nk(n, n, &base).map_err(|e| e.to_string())?;
        let merged = full.merged().map_err(|e| e.to_string())?;
        let bd = base.bing_double_first_n(n - 1).unwrap();
        ensure(full.copies.len() == 1 && full.bands.is_empty(), || format!("({n},{n}) has extra copies"))?;
        ensure(merged.genera() == bd.genera() && merged.component_count() == n, || format!("({n},{n}) differs"))?;
        let one = generate_nk(n, 1, &base).map_err(|e| e.to_string())?;
        let split = one.merged().map_err(|e| e.to_string())?;
        let adjoins = split.history().iter().filter(|s| matches!(s, Step::Adjoin(_))).count();
        ensure(one.bands.is_empty() && adjoins == n - 1, || format!("({n},1) is not a split union"))?;
        for k in 1..=n {
            let c = generate_nk(n, k, &base).map_err(|e| e.to_string())?;
            ensure(c.validate(), || format!("({n},{k}) invalid"))?;
            let r = c.check();
            ensure(r.all_passed && r.cases.len() == (1 << n) - 2, || format!("({n},{k}) failed"))?;
            for case in r.cases.iter().filter(|c| c.kept.len() == k) {
                ensure(matches!(case.reduction, Reduction::BingDouble { depth, .. } if depth == k - 1), || {
                    format!("({n},{k}) {:?}", case.kept)
                })?;
            }
            let again = serde_json::to_string(&c.check()).unwrap();
            ensure(serde_json::to_string(&r).unwrap() == again, || format!("({n},{k}) nondeterministic"))?;
        }
    }
    Ok(())
}

fn cli_determinism() -> Check {
    let bin = Path::new(env!("CARGO_BIN_EXE_brunnel"));
    let dir = bin.parent().unwrap();
    let path = format!("{}:{}", dir.display(), std::env::var("PATH").unwrap_or_default());
    let examples = read("docs/cli-examples.txt");
    let lines: Vec<&str> = examples.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).collect();
    ensure(!lines.is_empty(), || "no documented examples".into())?;
    let run = |line: &str| {
        Command::new("sh")
            .arg("-c")
            .arg(format!("set -e; {line}"))
            .env("PATH", &path)
            .current_dir(root())
            .output()
            .unwrap()
    };
    for line in lines {
        let (a, b) = (run(line), run(line));
        ensure(a.status.success(), || {
            format!("`{line}` failed: {}", String::from_utf8_lossy(&a.stderr).trim())
        })?;
        ensure(a.stdout == b.stdout && a.status == b.status, || format!("`{line}` differs between runs"))?;
    }
    Ok(())
}

fn main() {
    let mut failures = 0;
    let mut report = |id: usize, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(()), Some(l)) if took > l => Err(format!("took {:.2} s, limit {} s", took.as_secs_f64(), l.as_secs())),
            (r, _) => r,
        };
        let limit_text = limit.map_or(String::new(), |l| format!(" < {} s", l.as_secs()));
        match result {
            Ok(()) => println!("criterion {id:>2}  PASS  {name} ({:.3} s{limit_text})", took.as_secs_f64()),
            Err(why) => {
                failures += 1;
                println!("criterion {id:>2}  FAIL  {name} ({:.3} s{limit_text}): {why}", took.as_secs_f64());
            }
        }
    };
    let secs = |s| Some(Duration::from_secs(s));
    report(1, "published DT codes parse and round-trip", secs(1), &mut published_codes);
    report(2, "printed presentations certified infinite cyclic", secs(1), &mut printed_presentations);
    report(3, "Alexander polynomials match the Seifert oracle", secs(10), &mut alexander_suite);
    report(4, "Bing doubles: zero linking and framing, unknotted halves", secs(5), &mut bing_double_properties);
    report(5, "JSJ extension, covering tree and automorphisms", secs(30), &mut jsj_calculus);
    report(6, "rigidity condition classifier", secs(1), &mut rigidity_checker);
    let js: Vec<LaurentPolynomial> = (1..=4).map(|n| alexander_of_knot(&trefoil_sum(n)).unwrap()).collect();
    report(7, "descriptor covering lift and Bing doubling", secs(1), &mut descriptor_round_trip);
    report(8, "rim-surgery ledger for trefoil sums", secs(1), &mut || omega_ledger(&js));
    report(9, "(n,k)-Brunnian constructions for n <= 5", secs(60), &mut nk_brunnian);
    report(10, "documented CLI examples are deterministic", None, &mut cli_determinism);
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
