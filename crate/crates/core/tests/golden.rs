use freewill_core::coloring::{
    Verdict, export_cnf, min_violations, search_101, validate_101, verify_lemma_trace,
};
use freewill_core::exactgeom::{
    SignedPerm, build_peres33, extended_configuration, rayset_from_json, rayset_to_json,
};
use freewill_core::{OrthGraph, RaySet};
use num_bigint::BigInt;

const GOLDEN: &str = include_str!("golden/peres33.json");

/// Minimum number of the 40 triples any 0/1 assignment gets wrong.
const MIN_VIOLATIONS_40: usize = 1;

fn peres() -> (RaySet, OrthGraph) {
    let s = build_peres33::<i64>();
    let g = OrthGraph::from_rays(&s);
    (s, g)
}

fn varisat_solve(dimacs: &str) -> Option<Vec<u8>> {
    let formula = varisat::dimacs::DimacsParser::parse(dimacs.as_bytes()).expect("valid DIMACS");
    let mut solver = varisat::Solver::new();
    solver.add_formula(&formula);
    if !solver.solve().expect("solver runs") {
        return None;
    }
    let mut values = vec![1u8; formula.var_count()];
    for lit in solver.model().expect("model") {
        // positive literal means value 0
        values[lit.var().index()] = if lit.is_positive() { 0 } else { 1 };
    }
    Some(values)
}

#[test]
fn construction_matches_frozen_coordinates() {
    let (s, _) = peres();
    let frozen: RaySet = rayset_from_json("peres33", GOLDEN).unwrap();
    assert_eq!(s.rays(), frozen.rays(), "same rays in the same order");
    let round = rayset_to_json(&s).unwrap();
    let again: RaySet = rayset_from_json("peres33", &round).unwrap();
    assert_eq!(again.rays(), s.rays());
}

#[test]
fn bigint_backing_agrees() {
    let big = build_peres33::<BigInt>();
    let g_big = OrthGraph::from_rays(&big);
    let (s, g) = peres();
    assert_eq!(g_big.triples(), g.triples());
    assert_eq!(g_big.edges(), g.edges());
    for (a, b) in s.rays().iter().zip(big.rays()) {
        assert_eq!(a.convert::<BigInt>().as_ref(), Some(b));
    }
}

#[test]
fn census() {
    let (_, g) = peres();
    assert_eq!(g.triples().len(), 16);
    assert_eq!(g.lone_pairs().len(), 24);
    assert_eq!(g.edges().len(), 72);
    let cnf = export_cnf(&g);
    assert_eq!((cnf.num_vars, cnf.clauses.len()), (33, 16 * 4 + 24));
}

#[test]
fn external_solver_agrees_on_peres() {
    let (_, g) = peres();
    assert!(varisat_solve(&export_cnf(&g).to_dimacs()).is_none());
    assert_eq!(search_101(&g, None).verdict, Verdict::Unsat);

    let basis = OrthGraph::from_constraints(3, &[], &[[0, 1, 2]]);
    let model = varisat_solve(&export_cnf(&basis).to_dimacs()).expect("satisfiable");
    assert!(validate_101(&basis, &model).is_ok());
}

#[test]
fn every_single_deletion_is_colorable() {
    // Removing any one ray leaves a 101-colorable configuration, so the set
    // is critical. Frozen from 33 runs of the search and checked against an
    // external solver.
    let (_, g) = peres();
    for i in 0..33 {
        let keep: Vec<usize> = (0..33).filter(|&j| j != i).collect();
        let sub = g.induced(&keep);
        let ours = search_101(&sub, None);
        assert_eq!(ours.verdict, Verdict::Sat, "deleting ray {i}");
        let witness = ours.witness.expect("SAT carries a witness");
        assert!(validate_101(&sub, &witness).is_ok());
        let theirs = varisat_solve(&export_cnf(&sub).to_dimacs()).expect("external SAT");
        assert!(validate_101(&sub, &theirs).is_ok());
    }
}

#[test]
fn forty_triple_minimum() {
    let (s, _) = peres();
    let ext = extended_configuration(&s);
    assert_eq!(ext.rays.len(), 57);
    assert_eq!(ext.triples.len(), 40);
    let v = min_violations(ext.rays.len(), &ext.triples);
    assert_eq!(v.minimum, MIN_VIOLATIONS_40);
    let naive = ext
        .triples
        .iter()
        .filter(|t| t.iter().map(|&i| v.argmin[i] as u32).sum::<u32>() != 2)
        .count();
    assert_eq!(naive, v.minimum);

    // independent check that zero is impossible: every triple right means a
    // 101-function on the extended set, which the external solver refutes
    let g_ext = OrthGraph::from_constraints(ext.rays.len(), &[], &ext.triples);
    assert!(varisat_solve(&export_cnf(&g_ext).to_dimacs()).is_none());
}

#[test]
fn minimum_on_reduced_subconfiguration_matches_exhaustion() {
    // the triples among the first 18 rays, small enough for 2^18 enumeration
    let (s, _) = peres();
    let ext = extended_configuration(&s);
    let n = 18;
    let triples: Vec<[usize; 3]> = ext
        .triples
        .iter()
        .copied()
        .filter(|t| t.iter().all(|&i| i < n))
        .collect();
    assert!(!triples.is_empty());
    let brute = (0u32..1 << n)
        .map(|bits| {
            triples
                .iter()
                .filter(|t| t.iter().map(|&i| bits >> i & 1).sum::<u32>() != 2)
                .count()
        })
        .min()
        .unwrap();
    assert_eq!(min_violations(n, &triples).minimum, brute);
}

#[test]
fn lemma_skeleton_has_the_figure_geometry() {
    let (s, g) = peres();
    let report = verify_lemma_trace(&g).unwrap();
    let ray = |label: &str| {
        let n = report.labels.iter().find(|(l, _)| l == label).unwrap().1;
        s.rays()[n].clone()
    };
    assert!(ray("B").is_orthogonal(&ray("C")));
    assert!(ray("U").is_orthogonal(&ray("V")));
    // a quarter turn about Z takes D and G to E and C
    let z = ray("Z");
    let axis = z.coords().iter().position(|q| !q.is_zero()).unwrap();
    assert_eq!(z.coords().iter().filter(|q| q.is_zero()).count(), 2);
    let quarter_turns: Vec<SignedPerm> = SignedPerm::all()
        .into_iter()
        .filter(|p| p.perm[axis] == axis && p.signs[axis] == 1)
        .collect();
    let hit = quarter_turns.iter().any(|p| {
        let others: Vec<usize> = (0..3).filter(|&i| i != axis).collect();
        // swaps the other two axes with exactly one sign flip: a rotation
        let quarter = p.perm[others[0]] == others[1] && p.signs[others[0]] != p.signs[others[1]];
        quarter
            && p.apply(&ray("D")).is_parallel(&ray("E"))
            && p.apply(&ray("G")).is_parallel(&ray("C"))
    });
    assert!(hit);
}
