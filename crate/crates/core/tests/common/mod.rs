//! Independent reference checks and brute-force searches shared by the
//! integration tests. Nothing here calls the library's own verifiers.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gms_core::element::ModOp;
use gms_core::{Edge, Element, ElementSet, ProblemKind, StaticGraph, Vertex};
use itertools::Itertools;

/// All pairs `a < b` of `0..n`.
pub fn all_pairs(n: usize) -> Vec<Edge> {
    (0..n as Vertex)
        .tuple_combinations()
        .map(|(a, b)| Edge::new(a, b))
        .collect()
}

pub fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

pub fn is_vertex_cover(edges: &[Edge], cover: &BTreeSet<Vertex>) -> bool {
    edges
        .iter()
        .all(|e| cover.contains(&e.u()) || cover.contains(&e.v()))
}

/// Contracting `chosen` (restricted to `edges`) leaves a disjoint union of
/// paths: the simple quotient graph has degree at most two and no cycle.
pub fn contracts_to_paths_ref(n: usize, edges: &[Edge], chosen: &BTreeSet<Edge>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    for e in chosen.iter().filter(|e| edges.contains(e)) {
        let (a, b) = (
            find(&mut parent, e.u() as usize),
            find(&mut parent, e.v() as usize),
        );
        parent[a] = b;
    }
    let mut quotient = BTreeSet::new();
    for e in edges.iter().filter(|e| !chosen.contains(e)) {
        let (a, b) = (
            find(&mut parent, e.u() as usize),
            find(&mut parent, e.v() as usize),
        );
        if a != b {
            quotient.insert((a.min(b), a.max(b)));
        }
    }
    let mut degree = vec![0usize; n];
    let mut forest: Vec<usize> = (0..n).collect();
    for &(a, b) in &quotient {
        degree[a] += 1;
        degree[b] += 1;
        if degree[a] > 2 || degree[b] > 2 {
            return false;
        }
        let (ra, rb) = (find(&mut forest, a), find(&mut forest, b));
        if ra == rb {
            return false;
        }
        forest[ra] = rb;
    }
    true
}

/// Every connected component induces a clique.
pub fn is_cluster_ref(n: usize, edges: &BTreeSet<Edge>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    for e in edges {
        let (a, b) = (
            find(&mut parent, e.u() as usize),
            find(&mut parent, e.v() as usize),
        );
        parent[a] = b;
    }
    all_pairs(n).into_iter().all(|e| {
        let same = find(&mut parent, e.u() as usize) == find(&mut parent, e.v() as usize);
        !same || edges.contains(&e)
    })
}

/// Edge set after applying modifications; an addition wins over a
/// deletion of the same pair.
pub fn edit(edges: &[Edge], set: &ElementSet) -> BTreeSet<Edge> {
    let mut out: BTreeSet<Edge> = edges.iter().copied().collect();
    for el in set {
        if let Element::Mod(e, ModOp::Del) = el {
            out.remove(e);
        }
    }
    for el in set {
        if let Element::Mod(e, ModOp::Add) = el {
            out.insert(*e);
        }
    }
    out
}

/// Reference satisfaction test for the four enumerable kinds.
pub fn satisfies_ref(kind: ProblemKind, n: usize, edges: &[Edge], set: &ElementSet) -> bool {
    match kind {
        ProblemKind::VertexCover => {
            let cover = set.iter().filter_map(|e| e.as_vertex()).collect();
            is_vertex_cover(edges, &cover)
        }
        ProblemKind::PathContraction => {
            let chosen = set.iter().filter_map(|e| e.as_edge()).collect();
            contracts_to_paths_ref(n, edges, &chosen)
        }
        ProblemKind::ClusterEditing | ProblemKind::ClusterEdgeDeletion => {
            is_cluster_ref(n, &edit(edges, set))
        }
        other => panic!("no reference check for {other}"),
    }
}

/// Elements that can matter in this layer.
pub fn layer_universe(kind: ProblemKind, n: usize, edges: &[Edge]) -> Vec<Element> {
    match kind {
        ProblemKind::VertexCover => (0..n as Vertex).map(Element::Vertex).collect(),
        ProblemKind::PathContraction => edges.iter().map(|&e| Element::Edge(e)).collect(),
        ProblemKind::ClusterEdgeDeletion => {
            edges.iter().map(|&e| Element::Mod(e, ModOp::Del)).collect()
        }
        // Additions of present pairs are kept: they can undo a forced deletion.
        ProblemKind::ClusterEditing => edges
            .iter()
            .map(|&e| Element::Mod(e, ModOp::Del))
            .chain(
                all_pairs(n)
                    .into_iter()
                    .map(|e| Element::Mod(e, ModOp::Add)),
            )
            .collect(),
        other => panic!("no universe for {other}"),
    }
}

/// Every subset of `universe` of size at most `k` that contains `forced`.
pub fn supersets_up_to(universe: &[Element], forced: &ElementSet, k: usize) -> Vec<ElementSet> {
    let free: Vec<Element> = universe
        .iter()
        .copied()
        .filter(|e| !forced.contains(e))
        .collect();
    let room = k.saturating_sub(forced.len());
    if forced.len() > k {
        return Vec::new();
    }
    (0..=room.min(free.len()))
        .flat_map(|size| free.iter().copied().combinations(size))
        .map(|extra| forced.iter().copied().chain(extra).collect())
        .collect()
}

/// Solutions `S ⊇ forced` with `|S| ≤ k` such that no `S'` with
/// `forced ⊆ S' ⊊ S` is a solution.
pub fn minimal_solutions(
    kind: ProblemKind,
    n: usize,
    edges: &[Edge],
    k: usize,
    forced: &ElementSet,
) -> Vec<ElementSet> {
    let universe = layer_universe(kind, n, edges);
    let solutions: Vec<ElementSet> = supersets_up_to(&universe, forced, k)
        .into_iter()
        .filter(|s| satisfies_ref(kind, n, edges, s))
        .collect();
    solutions
        .iter()
        .filter(|s| {
            !solutions
                .iter()
                .any(|t| t.len() < s.len() && t.is_subset(s))
        })
        .cloned()
        .collect()
}

// ---------------------------------------------------------------------------
// source problems

pub fn adjacent(h: &StaticGraph, a: Vertex, b: Vertex) -> bool {
    a != b && h.contains(Edge::new(a, b))
}

pub fn is_clique(h: &StaticGraph, vs: &[Vertex]) -> bool {
    vs.iter()
        .tuple_combinations()
        .all(|(&a, &b)| adjacent(h, a, b))
}

pub fn cliques(h: &StaticGraph, size: usize) -> Vec<Vec<Vertex>> {
    (0..h.n() as Vertex)
        .combinations(size)
        .filter(|c| is_clique(h, c))
        .collect()
}

/// Clique with exactly one vertex of every colour `0..classes`.
pub fn has_multicolored_clique(h: &StaticGraph, colors: &[u32], classes: usize) -> bool {
    (0..h.n() as Vertex).combinations(classes).any(|c| {
        is_clique(h, &c)
            && c.iter()
                .map(|&v| colors[v as usize])
                .collect::<BTreeSet<_>>()
                .len()
                == classes
    })
}

pub fn has_dominating_set(h: &StaticGraph, k: usize) -> bool {
    let n = h.n();
    (0..=k.min(n))
        .flat_map(|s| (0..n as Vertex).combinations(s))
        .any(|d| (0..n as Vertex).all(|v| d.contains(&v) || d.iter().any(|&x| adjacent(h, v, x))))
}

pub fn has_independent_set(h: &StaticGraph, k: usize) -> bool {
    (0..h.n() as Vertex).combinations(k).any(|c| {
        c.iter()
            .tuple_combinations()
            .all(|(&a, &b)| !adjacent(h, a, b))
    })
}

pub fn has_set_cover(universe: usize, family: &[Vec<u32>], k: usize) -> bool {
    (0..=k.min(family.len()))
        .flat_map(|s| (0..family.len()).combinations(s))
        .any(|pick| {
            let covered: BTreeSet<u32> = pick
                .iter()
                .flat_map(|&j| family[j].iter().copied())
                .collect();
            covered.len() == universe
        })
}

pub fn has_hitting_set(universe: usize, family: &[Vec<u32>], k: usize) -> bool {
    (0..=k.min(universe))
        .flat_map(|s| (0..universe as u32).combinations(s))
        .any(|hit| family.iter().all(|set| set.iter().any(|x| hit.contains(x))))
}
