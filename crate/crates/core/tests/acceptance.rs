//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always show.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use attenuata::autsearch::{graph_aut, scheme_aut, ColoredGraph};
use attenuata::matrix::enumerate_rref;
use attenuata::pgroup::SemilinearMap;
use attenuata::pgroup::{induced_perm_group, verify_automorphism, verify_class_transitivity};
use attenuata::relgraph::{
    build_relation_graph, class_graph, clique_family, complete_components, connected_components, subconstituents,
    verify_cliques, verify_distance_lemma, verify_neighbor_counts, RelationGraph,
};
use attenuata::scheme::{
    admissible_classes, distinctness_symbolic, f_poly_of, g_poly_of, gaussian_binomial, predicted_root1_multiplicity,
    valency, verify_scheme_axioms,
};
use attenuata::{
    enumerate_type_m0, AmbientParams, Budget, ClassIndex, ClassMatrix, Field, FieldElement, Matrix, Subspace, TypeM0Set,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const DESK: [(u32, usize, usize, usize); 4] = [(2, 4, 1, 2), (3, 4, 1, 2), (2, 5, 1, 2), (2, 4, 2, 2)];

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Instance {
    params: AmbientParams,
    field: Field,
    x: TypeM0Set,
}

fn instance(q: u32, n: usize, l: usize, m: usize) -> Instance {
    let params = AmbientParams::new(q, n, l, m).unwrap();
    let field = params.field().unwrap();
    let x = enumerate_type_m0(&params, &field).unwrap();
    Instance { params, field, x }
}

impl Instance {
    fn classes(&self) -> ClassMatrix {
        ClassMatrix::build(&self.x, &self.field, &Budget::unlimited()).unwrap()
    }

    fn graph(&self) -> RelationGraph {
        build_relation_graph(&self.params, &Budget::unlimited()).unwrap()
    }
}

fn within(limit_secs: u64, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    if took > Duration::from_secs(limit_secs) {
        return Err(format!("took {:.1} s, limit {limit_secs} s", took.as_secs_f64()));
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (q, n, l, m) in DESK {
        let inst = instance(q, n, l, m);
        let cm = inst.classes();
        let formula: Vec<BigUint> = cm.classes().iter().map(|&c| valency(&inst.params, c).unwrap()).collect();
        ensure!(
            admissible_classes(&inst.params) == cm.classes(),
            "({q},{n},{l},{m}): enumerated classes differ from admissible classes"
        );
        for u in 0..cm.size() {
            let counted = cm.degree_counts(u);
            for (k, c) in cm.classes().iter().enumerate() {
                ensure!(
                    BigUint::from(counted[k]) == formula[k],
                    "({q},{n},{l},{m}) vertex {u} class {c}: counted {} vs formula {}",
                    counted[k],
                    formula[k]
                );
            }
        }
        if (q, n, l, m) == (2, 4, 1, 2) {
            let expected: Vec<BigUint> = [1u32, 3, 36, 36, 64].map(BigUint::from).to_vec();
            ensure!(formula == expected, "(2,4,1,2) table {formula:?}");
            ensure!(cm.size() == 140, "(2,4,1,2) has {} vertices", cm.size());
        }
        notes.push(format!("({q},{n},{l},{m}) {} vertices x {} classes", cm.size(), cm.classes().len()));
    }
    within(30, start)?;
    Ok(format!("{}; table at (2,4,1,2) = {{1,3,36,36,64}}", notes.join(", ")))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (q, n, l, m) in [(2, 4, 1, 2), (2, 4, 1, 1)] {
        let inst = instance(q, n, l, m);
        let r = verify_scheme_axioms(&inst.classes(), &Budget::unlimited()).unwrap();
        ensure!(r.passed(), "({q},{n},{l},{m}) violations: {:?}", r.violations);
        notes.push(format!("({q},{n},{l},{m}) {} intersection numbers", r.intersection_numbers.len()));
    }
    within(120, start)?;
    Ok(notes.join(", "))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (q, n, l, m) in DESK {
        let inst = instance(q, n, l, m);
        let r = verify_distance_lemma(&inst.graph(), &inst.classes());
        ensure!(r.passed(), "({q},{n},{l},{m}) {} violations", r.violation_count);
        notes.push(format!("({q},{n},{l},{m}) {} pairs", r.pairs_checked));
    }
    within(120, start)?;
    Ok(format!("0 violations: {}", notes.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for ((q, n, l, m), expected) in [((2, 4, 1, 2), [12u64, 4, 9]), ((3, 4, 1, 2), [36, 9, 16])] {
        let inst = instance(q, n, l, m);
        let g = inst.graph();
        let cm = inst.classes();
        // every base vertex, since the counts must not depend on M
        for base in 0..g.vertex_count() as u32 {
            let r = verify_neighbor_counts(&g, &subconstituents(&g, &cm, base)).unwrap();
            ensure!(r.partition_ok, "({q},{n},{l},{m}) base {base}: second sphere not split into three classes");
            for (cell, want) in r.cells.iter().zip(expected) {
                ensure!(
                    cell.observed == [want],
                    "({q},{n},{l},{m}) base {base} class {}: observed {:?}, expected {want}",
                    cell.class,
                    cell.observed
                );
            }
        }
        notes.push(format!("({q},{n},{l},{m}) {}/{}/{}", expected[0], expected[1], expected[2]));
    }
    Ok(format!("all base vertices: {}", notes.join(", ")))
}

fn criterion_5() -> Outcome {
    let inst = instance(2, 4, 1, 2);
    let g = inst.graph();
    let family = clique_family(&g).unwrap();
    let r = verify_cliques(&g, &family).unwrap();
    ensure!(family.len() == 30, "{} cliques, |X_1| = 30", family.len());
    ensure!(r.clique_size == 14 && r.parts == 7 && r.part_size == 2, "shape {}x{}", r.parts, r.part_size);
    ensure!(r.bad_cliques.is_empty(), "cliques not K_7(2): {:?}", r.bad_cliques);
    ensure!(r.distinct_member_sets, "two W share a member set");
    ensure!(
        r.edges == 2520 && r.edges_not_in_exactly_one == 0,
        "{} of {} edges not in exactly one C(W)",
        r.edges_not_in_exactly_one,
        r.edges
    );
    Ok(format!("{} sets C(W), each 14 vertices = K_7(2); {} edges each in exactly one", family.len(), r.edges))
}

fn criterion_6() -> Outcome {
    let inst = instance(2, 4, 1, 1);
    let cm = inst.classes();
    let r01 = class_graph(&cm, ClassIndex::new(0, 1)).unwrap();
    let comps = connected_components(&r01);
    ensure!(comps.len() == 15, "{} components", comps.len());
    ensure!(complete_components(&r01) == Some(vec![2; 15]), "components are not all K_2");

    let expected = BigUint::from(2u32).pow(15) * (1..=15u32).map(BigUint::from).product::<BigUint>();
    let deadline = Budget::default().deadline();
    let aut01 = graph_aut(&ColoredGraph::from_adjacency(&r01).unwrap(), &deadline).unwrap();
    ensure!(aut01.order == expected, "search order {} vs {expected}", aut01.order);

    // Γ^(1) is the complement, the complete multipartite K_15(2)
    let g = inst.graph();
    ensure!(g.regular_degree() == Some(28), "Gamma^(1) degree {:?}", g.regular_degree());
    let aut = graph_aut(&ColoredGraph::from_adjacency(g.adjacency()).unwrap(), &deadline).unwrap();
    ensure!(aut.order == expected, "Gamma^(1) search order {}", aut.order);
    Ok(format!("15 components, each K_2; |Aut| = 2^15 * 15! = {expected} by search"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let inst = instance(2, 4, 1, 2);
    let cm = inst.classes();
    let induced = induced_perm_group(&inst.x, &inst.field).unwrap();
    for (k, s) in induced.maps.iter().enumerate() {
        ensure!(verify_automorphism(s, &inst.x, &cm, &inst.field), "generator {k} breaks a class");
    }
    let orbits = verify_class_transitivity(&cm, &induced.perms, &Budget::unlimited()).unwrap();
    for o in &orbits {
        let want = BigUint::from(140u32) * valency(&inst.params, o.class).unwrap();
        ensure!(BigUint::from(o.orbit_size) == want, "class {}: orbit {} vs {want}", o.class, o.orbit_size);
    }
    within(120, start)?;
    let sizes: Vec<String> = orbits.iter().map(|o| format!("{}:{}", o.class, o.orbit_size)).collect();
    Ok(format!("{} generators preserve every class; orbits {}", induced.maps.len(), sizes.join(" ")))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let inst = instance(2, 4, 1, 2);
    let cm = inst.classes();
    let g = inst.graph();
    let deadline = Budget::default().deadline();
    let induced = induced_perm_group(&inst.x, &inst.field).unwrap().group.order();
    let graph = graph_aut(&ColoredGraph::from_adjacency(g.adjacency()).unwrap(), &deadline).unwrap();
    ensure!(graph.order == induced, "|Aut(Gamma)| = {} vs induced {induced}", graph.order);
    ensure!(induced == BigUint::from(322560u32), "induced order {induced}");

    let colored = ColoredGraph::from_class_matrix(&cm).unwrap();
    let scheme = scheme_aut(&colored, &deadline).unwrap();
    ensure!(scheme.order == induced, "|Aut(X)| = {} vs {induced}", scheme.order);
    ensure!(scheme.inner_order == induced, "|Inn(X)| = {}", scheme.inner_order);
    let a = cm.class_id(ClassIndex::new(1, 0)).unwrap() as usize;
    let b = cm.class_id(ClassIndex::new(1, 1)).unwrap() as usize;
    let swap = scheme.candidates.iter().find(|c| c.sigma[a] as usize == b && c.sigma[b] as usize == a);
    let Some(swap) = swap else {
        return Err("the (1,0)/(1,1) swap was never considered".into());
    };
    ensure!(!swap.realized, "the (1,0)/(1,1) swap is realized");
    ensure!(scheme.color_group_order == 1, "color action of order {}", scheme.color_group_order);
    within(600, start)?;
    Ok(format!("|Aut(Gamma)| = |induced| = |Aut(X)| = {induced}; (1,0)<->(1,1) swap refuted, color action trivial"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let (mut pairs, mut params_seen) = (0u64, 0u64);
    for n in 1..=6 {
        for m in 0..=n {
            for l in 0..=6 {
                let params = AmbientParams::new(2, n, l, m).unwrap();
                params_seen += 1;
                let classes = admissible_classes(&params);
                for &c in &classes {
                    for &d in &classes {
                        if c == d {
                            continue;
                        }
                        pairs += 1;
                        let mult = (&f_poly_of(c) * &g_poly_of(d, &params)).root1_multiplicity().unwrap();
                        ensure!(
                            mult == predicted_root1_multiplicity(c, d),
                            "(n,m,l)=({n},{m},{l}) f{c} g{d}: multiplicity {mult}"
                        );
                        let sym = distinctness_symbolic(&params, c, d).unwrap();
                        ensure!(
                            sym.exponents_equal == sym.simplified_holds,
                            "(n,m,l)=({n},{m},{l}) {c},{d}: exponent equality {} but identity {}",
                            sym.exponents_equal,
                            sym.simplified_holds
                        );
                    }
                }
            }
        }
    }
    within(10, start)?;
    Ok(format!("{pairs} ordered class pairs over {params_seen} (n,m,l)"))
}

fn random_matrix(rows: usize, cols: usize, q: u32, rng: &mut StdRng) -> Matrix {
    Matrix::new(rows, cols, (0..rows * cols).map(|_| FieldElement(rng.gen_range(0..q) as u8)).collect())
}

/// Random invertible `d x d` matrix with `zero(r, c)` entries forced to 0.
fn random_invertible(d: usize, field: &Field, rng: &mut StdRng, zero: impl Fn(usize, usize) -> bool) -> Matrix {
    loop {
        let mut t = random_matrix(d, d, field.order(), rng);
        for r in 0..d {
            for c in 0..d {
                if zero(r, c) {
                    t.set(r, c, FieldElement(0));
                }
            }
        }
        if t.rank(field) == d {
            return t;
        }
    }
}

const QS: [u32; 8] = [2, 3, 4, 5, 7, 8, 9, 16];

fn pascal() -> Result<u64, String> {
    let mut checked = 0;
    for q in [2u32, 3, 4, 5] {
        for a in 0..=12usize {
            ensure!(gaussian_binomial(a, 0, q) == BigUint::from(1u32), "[{a},0]_{q}");
            ensure!(gaussian_binomial(a, a, q) == BigUint::from(1u32), "[{a},{a}]_{q}");
            for b in 1..a {
                let lhs = gaussian_binomial(a, b, q);
                let rhs = gaussian_binomial(a - 1, b - 1, q)
                    + BigUint::from(q).pow(b as u32) * gaussian_binomial(a - 1, b, q);
                ensure!(lhs == rhs, "[{a},{b}]_{q}: {lhs} vs {rhs}");
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn canonicalize_cases() -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    runner
        .run(&any::<u64>(), |seed| {
            let mut rng = StdRng::seed_from_u64(seed);
            let field = Field::new(QS[rng.gen_range(0..QS.len())]).unwrap();
            let (n, l) = (rng.gen_range(1..=4), rng.gen_range(0..=3));
            let k = rng.gen_range(0..=n + l + 1);
            let m = random_matrix(k, n + l, field.order(), &mut rng);
            let p = Subspace::from_matrix(&m, n, l, &field).unwrap();
            prop_assert_eq!(&Subspace::from_matrix(p.basis(), n, l, &field).unwrap(), &p);
            let r = random_invertible(k, &field, &mut rng, |_, _| false);
            let moved = Subspace::from_matrix(&r.mul(&m, &field), n, l, &field).unwrap();
            prop_assert_eq!(&moved, &p);
            prop_assert_eq!(p.dim(), m.rank(&field));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn modular_law() -> Result<u64, String> {
    let params = AmbientParams::new(2, 4, 1, 2).unwrap();
    let field = params.field().unwrap();
    let all: Vec<Subspace> = (0..=params.dim())
        .flat_map(|k| enumerate_rref(k, params.dim(), &field))
        .map(|b| Subspace::from_matrix(&b, 4, 1, &field).unwrap())
        .collect();
    ensure!(all.len() == 374, "{} subspaces of F_2^5", all.len());
    let mut pairs = 0;
    for p in &all {
        for q in &all {
            let sum = p.sum(q, &field).unwrap();
            let meet = p.intersection(q, &field).unwrap();
            ensure!(sum.dim() + meet.dim() == p.dim() + q.dim(), "{p:?} {q:?}");
            ensure!(p.contains(&meet, &field).unwrap() && sum.contains(p, &field).unwrap(), "{p:?} {q:?} containment");
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn composition_cases() -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    runner
        .run(&any::<u64>(), |seed| {
            let mut rng = StdRng::seed_from_u64(seed);
            let field = Field::new(QS[rng.gen_range(0..QS.len())]).unwrap();
            let (n, l) = (rng.gen_range(1..=3), rng.gen_range(0..=2));
            let d = n + l;
            let lower_left = |r: usize, c: usize| r >= n && c < n;
            let map = |rng: &mut StdRng| {
                let t = random_invertible(d, &field, rng, lower_left);
                SemilinearMap::new(t, rng.gen_range(0..field.e()), n, l, &field).unwrap()
            };
            let (s1, s2) = (map(&mut rng), map(&mut rng));
            let k = rng.gen_range(0..=d);
            let p = Subspace::from_matrix(&random_matrix(k, d, field.order(), &mut rng), n, l, &field).unwrap();
            let stepwise = s2.act(&s1.act(&p, &field).unwrap(), &field).unwrap();
            let composed = s1.compose(&s2, &field).act(&p, &field).unwrap();
            prop_assert_eq!(stepwise, composed);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn criterion_10() -> Outcome {
    let pascal = pascal()?;
    canonicalize_cases()?;
    let modular = modular_law()?;
    composition_cases()?;
    Ok(format!(
        "Pascal {pascal} cases; canonicalization 1000 cases; modular law {modular} pairs; composition 1000 triples"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("valency formula vs brute force", criterion_1),
        ("scheme axioms", criterion_2),
        ("distance formula", criterion_3),
        ("subconstituent neighbor counts", criterion_4),
        ("clique structure", criterion_5),
        ("Gamma^(1) at (2,4,1,1)", criterion_6),
        ("group action", criterion_7),
        ("automorphism groups at (2,4,1,2)", criterion_8),
        ("root multiplicity and exponent identity", criterion_9),
        ("property suites", criterion_10),
    ];
    let mut failed = 0;
    let mut by_status = BTreeMap::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (label, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        *by_status.entry(label).or_insert(0) += 1;
        println!("{label} criterion {:>2} {name} [{secs:.2} s]: {detail}", k + 1);
    }
    println!("acceptance: {by_status:?}");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
