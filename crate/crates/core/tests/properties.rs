mod common;

use std::collections::BTreeSet;

use gms_core::element::ModOp;
use gms_core::enumeration::{enumerate_supersets, EnumerationRequest};
use gms_core::format::{parse_instance, parse_solution, serialize_instance, serialize_solution};
use gms_core::kernels::{
    build_temporal_kernel, buss_kernel, path_contraction_kernel, vc_edge_bound, vc_vertex_bound,
    TemporalKernelOutcome, Verdict,
};
use gms_core::oracle::{oracle_solve_with, CandidatePolicy, OracleConfig, SingleSetMethod};
use gms_core::problems::{
    apply_modifications, element_universe, find_induced_p3, satisfies, verify_solution,
};
use gms_core::{
    solve, Algorithm, Answer, Edge, Element, ElementSet, ProblemAttrs, ProblemInstance,
    ProblemKind, SolutionSequence, SolveError, SolveOptions, StaticGraph, TemporalGraph, Vertex,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

use common::*;

fn graph_from_mask(n: usize, mask: &[bool]) -> StaticGraph {
    let edges = all_pairs(n)
        .into_iter()
        .zip(mask)
        .filter(|(_, &keep)| keep)
        .map(|(e, _)| e);
    StaticGraph::new(n, edges).unwrap()
}

/// A static graph on 2..=max_n vertices.
fn arb_graph(max_n: usize) -> impl Strategy<Value = StaticGraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.4), n * (n - 1) / 2)
            .prop_map(move |m| graph_from_mask(n, &m))
    })
}

fn arb_temporal(max_n: usize, max_tau: usize) -> impl Strategy<Value = TemporalGraph> {
    (2..=max_n, 1..=max_tau).prop_flat_map(|(n, tau)| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(
            proptest::collection::vec(proptest::bool::weighted(0.35), pairs),
            tau,
        )
        .prop_map(move |masks| {
            let layers = masks
                .iter()
                .map(|m| graph_from_mask(n, m).into_edges())
                .collect();
            TemporalGraph::new(n, layers).unwrap()
        })
    })
}

fn arb_instance(kinds: &'static [ProblemKind]) -> impl Strategy<Value = ProblemInstance> {
    (
        arb_temporal(7, 4),
        proptest::sample::select(kinds),
        0..=3usize,
        0..=3usize,
    )
        .prop_map(|(g, kind, k, ell)| {
            let n = g.n() as Vertex;
            let attrs = if kind.needs_terminals() {
                ProblemAttrs::terminals(0, n - 1)
            } else {
                ProblemAttrs::default()
            };
            let ell = if kind.is_single_set() { 0 } else { ell };
            ProblemInstance::new(g, kind, k, ell, None, attrs).unwrap()
        })
}

const SEQUENCE_KINDS: &[ProblemKind] = &[
    ProblemKind::VertexCover,
    ProblemKind::PathContraction,
    ProblemKind::ClusterEditing,
    ProblemKind::ClusterEdgeDeletion,
];
const MONOTONE_KINDS: &[ProblemKind] = &[
    ProblemKind::VertexCover,
    ProblemKind::PathContraction,
    ProblemKind::DominatingSet,
    ProblemKind::EdgeDominatingSet,
];
const SINGLE_SET_KINDS: &[ProblemKind] = &[
    ProblemKind::StPath,
    ProblemKind::StCut,
    ProblemKind::Matching,
];

fn recount_insertions(sets: &[ElementSet]) -> usize {
    sets.windows(2)
        .map(|w| w[1].iter().filter(|e| !w[0].contains(e)).count())
        .sum()
}

fn pick(universe: &[Element], mask: &[bool]) -> ElementSet {
    universe
        .iter()
        .zip(mask.iter().cycle())
        .filter(|(_, &b)| b)
        .map(|(&e, _)| e)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn edges_are_stored_normalized(n in 2usize..12, raw in proptest::collection::vec((0u32..12, 0u32..12), 0..30), tau in 1usize..4) {
        let pairs: Vec<(u32, u32)> = raw.into_iter().filter(|&(a, b)| a != b && (a as usize) < n && (b as usize) < n).collect();
        let layers: Vec<Vec<Edge>> = (0..tau)
            .map(|i| pairs.iter().skip(i).step_by(tau).map(|&(a, b)| Edge::new(b, a)).collect())
            .collect();
        let g = TemporalGraph::new(n, layers).unwrap();
        let mut union = BTreeSet::new();
        for layer in g.layers() {
            for e in layer.edges() {
                prop_assert!(e.u() < e.v());
                union.insert(*e);
            }
        }
        prop_assert!(g.underlying().edges().iter().all(|e| e.u() < e.v()));
        prop_assert_eq!(g.underlying().edges().to_vec(), union.into_iter().collect::<Vec<_>>());
        prop_assert!(g.check_union());
    }

    #[test]
    fn serialization_is_a_fixpoint(inst in arb_instance(&[
        ProblemKind::VertexCover, ProblemKind::PathContraction, ProblemKind::ClusterEditing,
        ProblemKind::ClusterEdgeDeletion, ProblemKind::DominatingSet, ProblemKind::EdgeDominatingSet,
        ProblemKind::StPath, ProblemKind::StCut, ProblemKind::Matching,
    ]), q in proptest::option::of(1usize..3)) {
        let mut inst = inst;
        inst.q = q;
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn solution_text_round_trips(inst in arb_instance(SEQUENCE_KINDS), masks in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 1..8), 1..5)) {
        let universe = element_universe(inst.kind, &inst.graph);
        let sets: Vec<ElementSet> = (0..inst.tau()).map(|i| pick(&universe, &masks[i % masks.len()])).collect();
        let sol = SolutionSequence::new(sets);
        let text = serialize_solution(&sol);
        prop_assert_eq!(parse_solution(&text, Some(inst.tau())).unwrap(), sol);
    }

    #[test]
    fn cluster_checks_agree(g in arb_graph(7), mods in proptest::collection::vec((0u32..7, 0u32..7, any::<bool>()), 0..6)) {
        let n = g.n() as u32;
        let set: ElementSet = mods
            .into_iter()
            .filter(|&(a, b, _)| a != b && a < n && b < n)
            .map(|(a, b, add)| Element::Mod(Edge::new(a, b), if add { ModOp::Add } else { ModOp::Del }))
            .collect();
        let edited = apply_modifications(g.view(), &set);
        let verdict = satisfies(ProblemKind::ClusterEditing, g.view(), &set, &ProblemAttrs::default()).unwrap();
        prop_assert_eq!(verdict, find_induced_p3(&edited).is_none());
        prop_assert_eq!(verdict, is_cluster_ref(g.n(), &edit(g.edges(), &set)));
        let deletions: ElementSet = set.iter().filter(|e| matches!(e, Element::Mod(_, ModOp::Del))).copied().collect();
        let ced = satisfies(ProblemKind::ClusterEdgeDeletion, g.view(), &deletions, &ProblemAttrs::default()).unwrap();
        prop_assert_eq!(ced, is_cluster_ref(g.n(), &edit(g.edges(), &deletions)));
    }

    #[test]
    fn path_contraction_check_matches_quotient(g in arb_graph(8), mask in proptest::collection::vec(proptest::bool::weighted(0.3), 28)) {
        let chosen: BTreeSet<Edge> = g.edges().iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e).collect();
        let set: ElementSet = chosen.iter().map(|&e| Element::Edge(e)).collect();
        let verdict = satisfies(ProblemKind::PathContraction, g.view(), &set, &ProblemAttrs::default()).unwrap();
        prop_assert_eq!(verdict, contracts_to_paths_ref(g.n(), g.edges(), &chosen));
    }

    #[test]
    fn buss_kernel_is_idempotent(g in arb_graph(10), k in 0usize..4) {
        let first = buss_kernel(g.view(), k);
        if first.verdict == Verdict::Kernelized {
            prop_assert!(first.kept_vertices.len() <= vc_vertex_bound(k));
            prop_assert!(first.graph.edges().len() <= vc_edge_bound(k));
            let again = buss_kernel(first.graph.view(), k);
            prop_assert_eq!(again.verdict, Verdict::Kernelized);
            prop_assert_eq!(again.graph.edges(), first.graph.edges());
            prop_assert_eq!(again.kept_vertices, first.kept_vertices);
        }
    }

    #[test]
    fn path_contraction_kernel_is_idempotent(g in arb_graph(10), k in 0usize..3) {
        let first = path_contraction_kernel(g.view(), k);
        let n = g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        for e in &first.contracted {
            let (a, b) = (find(&mut parent, e.u() as usize), find(&mut parent, e.v() as usize));
            parent[a] = b;
        }
        let quotient: BTreeSet<Edge> = first.graph.edges().iter().filter_map(|e| {
            let (a, b) = (find(&mut parent, e.u() as usize), find(&mut parent, e.v() as usize));
            (a != b).then(|| Edge::new(a as u32, b as u32))
        }).collect();
        let contracted = StaticGraph::new(n, quotient).unwrap();
        let again = path_contraction_kernel(contracted.view(), k);
        prop_assert!(again.contracted.is_empty(), "second pass contracted {:?}", again.contracted);
        prop_assert_eq!(again.verdict, first.verdict);
        if first.verdict == Verdict::Kernelized {
            prop_assert!(first.component_sizes.iter().all(|&c| c <= 5 * k + 3));
        }
    }

    #[test]
    fn temporal_kernel_is_idempotent(inst in arb_instance(&[ProblemKind::VertexCover])) {
        if let TemporalKernelOutcome::Kernel(tk) = build_temporal_kernel(&inst).unwrap() {
            prop_assert!(tk.vertex_map.windows(2).all(|w| w[0] < w[1]));
            match build_temporal_kernel(&tk.instance).unwrap() {
                TemporalKernelOutcome::Kernel(again) => {
                    prop_assert_eq!(&again.instance, &tk.instance);
                    prop_assert_eq!(again.vertex_map, (0..tk.instance.graph.n() as u32).collect::<Vec<_>>());
                }
                TemporalKernelOutcome::No { layer, reason } => prop_assert!(false, "kernel rejected at {layer}: {reason}"),
            }
        }
    }

    #[test]
    fn enumeration_is_sound_and_deterministic(
        g in arb_graph(7),
        kind in proptest::sample::select(SEQUENCE_KINDS),
        k in 0usize..4,
        seed in proptest::collection::vec(any::<bool>(), 1..10),
    ) {
        let universe = layer_universe(kind, g.n(), g.edges());
        let forced: ElementSet = pick(&universe, &seed).into_iter().take(2.min(k)).collect();
        let req = EnumerationRequest::new(kind, g.view(), k, &forced);
        let first = enumerate_supersets(&req).unwrap();
        prop_assert_eq!(&first, &enumerate_supersets(&req).unwrap());
        for s in &first {
            prop_assert!(s.is_superset(&forced) && s.len() <= k);
            prop_assert!(satisfies_ref(kind, g.n(), g.edges(), s));
            prop_assert!(!first.iter().any(|t| t != s && t.is_subset(s)), "{:?} is not minimal", s);
        }
        for want in minimal_solutions(kind, g.n(), g.edges(), k, &forced) {
            prop_assert!(first.contains(&want), "missed {:?}", want);
        }
    }

    #[test]
    fn backward_answers_are_in_normal_form(inst in arb_instance(SEQUENCE_KINDS)) {
        let r = solve(&inst, Algorithm::Backward, &SolveOptions::default()).unwrap();
        if let Answer::Yes { solution, guesses, .. } = &r.answer {
            let report = verify_solution(&inst, solution).unwrap();
            prop_assert!(report.accepted, "{:?}", report.failures);
            prop_assert_eq!(report.insertion_total, recount_insertions(&solution.sets));
            prop_assert_eq!(solution.insertion_total(), recount_insertions(&solution.sets));
            for i in 1..solution.len() {
                let carried = satisfies(inst.kind, inst.graph.layer(i - 1), &solution.sets[i], &inst.attrs).unwrap();
                if carried {
                    prop_assert_eq!(&solution.sets[i - 1], &solution.sets[i], "layer {} breaks the normal form", i);
                }
            }
            let guesses = guesses.as_ref().expect("backward reports its guesses");
            prop_assert!(guesses.is_well_formed());
            prop_assert!(guesses.len() <= 2 * inst.ell + inst.k);
        }
    }

    #[test]
    fn forward_charge_and_repair(inst in arb_instance(&[ProblemKind::VertexCover, ProblemKind::PathContraction])) {
        let r = solve(&inst, Algorithm::Forward, &SolveOptions::default()).unwrap();
        if let Answer::Yes { solution, charge, .. } = &r.answer {
            let report = verify_solution(&inst, solution).unwrap();
            prop_assert!(report.accepted, "{:?}", report.failures);
            prop_assert!(solution.insertion_total() <= inst.ell);
            let charge = charge.expect("forward reports its charge");
            prop_assert!(charge <= inst.k + inst.ell);
            prop_assert!(solution.charge() <= charge, "repair increased the charge");
        }
    }

    #[test]
    fn candidate_policies_agree(inst in arb_instance(MONOTONE_KINDS)) {
        let opts = SolveOptions::default();
        let all = oracle_solve_with(&inst, &opts, OracleConfig { policy: CandidatePolicy::AllFeasible, ..OracleConfig::default() }).unwrap();
        let closure = oracle_solve_with(&inst, &opts, OracleConfig { policy: CandidatePolicy::MinimalClosure, ..OracleConfig::default() }).unwrap();
        prop_assert_eq!(all.answer.is_yes(), closure.answer.is_yes());
        for r in [&all, &closure] {
            if let Some(sol) = r.answer.solution() {
                let report = verify_solution(&inst, sol).unwrap();
                prop_assert!(report.accepted, "{:?}", report.failures);
                prop_assert_eq!(report.insertion_total, recount_insertions(&sol.sets));
            }
        }
    }

    #[test]
    fn single_set_methods_agree(inst in arb_instance(SINGLE_SET_KINDS)) {
        let opts = SolveOptions::default();
        let run = |single_set| oracle_solve_with(&inst, &opts, OracleConfig { single_set, ..OracleConfig::default() }).unwrap();
        let (ex, br) = (run(SingleSetMethod::Exhaustive), run(SingleSetMethod::Branching));
        prop_assert_eq!(ex.answer.is_yes(), br.answer.is_yes(), "{}", serialize_instance(&inst));
        for r in [&ex, &br] {
            if let Some(sol) = r.answer.solution() {
                prop_assert!(verify_solution(&inst, sol).unwrap().accepted);
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_answers(inst in arb_instance(SEQUENCE_KINDS)) {
        let one = solve(&inst, Algorithm::Backward, &SolveOptions::default()).unwrap();
        let again = solve(&inst, Algorithm::Backward, &SolveOptions::default()).unwrap();
        prop_assert_eq!(&one.answer, &again.answer);
        let four = solve(&inst, Algorithm::Backward, &SolveOptions { threads: 4, ..SolveOptions::default() }).unwrap();
        prop_assert_eq!(one.answer.is_yes(), four.answer.is_yes());
        if let Some(sol) = four.answer.solution() {
            prop_assert!(verify_solution(&inst, sol).unwrap().accepted);
        }
        if matches!(inst.kind, ProblemKind::VertexCover | ProblemKind::PathContraction) {
            let f1 = solve(&inst, Algorithm::Forward, &SolveOptions::default()).unwrap();
            let f4 = solve(&inst, Algorithm::Forward, &SolveOptions { threads: 4, ..SolveOptions::default() }).unwrap();
            prop_assert_eq!(f1.answer.is_yes(), f4.answer.is_yes());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Supersets of satisfying sets still satisfy, for every monotone kind.
    #[test]
    fn monotone_kinds_are_upward_closed(
        g in arb_graph(7),
        kind in proptest::sample::select(MONOTONE_KINDS),
        base in proptest::collection::vec(proptest::bool::weighted(0.6), 21),
        extra in subsequence((0..21usize).collect::<Vec<_>>(), 0..5),
    ) {
        let tg = TemporalGraph::from_static(&g, 1);
        let universe = element_universe(kind, &tg);
        let attrs = ProblemAttrs::default();
        let mut set = pick(&universe, &base);
        if !satisfies(kind, g.view(), &set, &attrs).unwrap() {
            set = universe.iter().copied().collect();
        }
        prop_assert!(satisfies(kind, g.view(), &set, &attrs).unwrap());
        let mut bigger = set.clone();
        bigger.extend(extra.iter().filter_map(|&i| universe.get(i)).copied());
        prop_assert!(satisfies(kind, g.view(), &bigger, &attrs).unwrap(), "{:?} satisfies but {:?} does not", set, bigger);
    }
}

#[test]
fn frameworks_refuse_out_of_scope_kinds() {
    let g = TemporalGraph::from_static(&StaticGraph::path(3), 2);
    let ce = ProblemInstance::simple(g.clone(), ProblemKind::ClusterEditing, 1, 0);
    assert!(matches!(
        solve(&ce, Algorithm::Forward, &SolveOptions::default()),
        Err(SolveError::Unsupported { .. })
    ));
    let ds = ProblemInstance::simple(g, ProblemKind::DominatingSet, 1, 0);
    assert!(matches!(
        solve(&ds, Algorithm::Backward, &SolveOptions::default()),
        Err(SolveError::Unsupported { .. })
    ));
    assert!(solve(&ds, Algorithm::Oracle, &SolveOptions::default())
        .unwrap()
        .answer
        .is_yes());
}
