//! Problem kinds, per-layer property checks and sequence verification.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::element::{Element, ElementKind, ElementSet, ModOp};
use crate::graph::{Edge, Layer, LocalIds, TemporalGraph, UnionFind, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    VertexCover,
    PathContraction,
    ClusterEditing,
    ClusterEdgeDeletion,
    DominatingSet,
    EdgeDominatingSet,
    StPath,
    StCut,
    Matching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    AtMost,
    AtLeast,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 9] = [
        ProblemKind::VertexCover,
        ProblemKind::PathContraction,
        ProblemKind::ClusterEditing,
        ProblemKind::ClusterEdgeDeletion,
        ProblemKind::DominatingSet,
        ProblemKind::EdgeDominatingSet,
        ProblemKind::StPath,
        ProblemKind::StCut,
        ProblemKind::Matching,
    ];

    /// Short code used in instance files.
    pub fn code(self) -> &'static str {
        match self {
            ProblemKind::VertexCover => "vc",
            ProblemKind::PathContraction => "pc",
            ProblemKind::ClusterEditing => "ce",
            ProblemKind::ClusterEdgeDeletion => "ced",
            ProblemKind::DominatingSet => "ds",
            ProblemKind::EdgeDominatingSet => "eds",
            ProblemKind::StPath => "stpath",
            ProblemKind::StCut => "stcut",
            ProblemKind::Matching => "matching",
        }
    }

    pub fn element_kind(self) -> ElementKind {
        match self {
            ProblemKind::VertexCover | ProblemKind::DominatingSet => ElementKind::Vertex,
            ProblemKind::ClusterEditing | ProblemKind::ClusterEdgeDeletion => {
                ElementKind::Modification
            }
            _ => ElementKind::Edge,
        }
    }

    pub fn is_monotone(self) -> bool {
        matches!(
            self,
            ProblemKind::VertexCover
                | ProblemKind::PathContraction
                | ProblemKind::DominatingSet
                | ProblemKind::EdgeDominatingSet
        )
    }

    pub fn objective(self) -> Objective {
        match self {
            ProblemKind::Matching => Objective::AtLeast,
            _ => Objective::AtMost,
        }
    }

    /// Kinds asking for one set shared by every layer.
    pub fn is_single_set(self) -> bool {
        matches!(
            self,
            ProblemKind::StPath | ProblemKind::StCut | ProblemKind::Matching
        )
    }

    pub fn needs_terminals(self) -> bool {
        matches!(self, ProblemKind::StPath | ProblemKind::StCut)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown problem `{0}`")]
pub struct UnknownProblem(pub String);

impl FromStr for ProblemKind {
    type Err = UnknownProblem;

    fn from_str(s: &str) -> Result<ProblemKind, UnknownProblem> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.code() == s)
            .ok_or_else(|| UnknownProblem(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("element {element} does not belong to the universe of {kind}")]
    OutsideUniverse { kind: ProblemKind, element: Element },
    #[error("expected {expected} sets, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("forced set is not a subset of the candidate")]
    ForcedNotSubset,
    #[error("{0} free elements exceed the exact minimality limit of {MINIMALITY_LIMIT}")]
    TooManyFree(usize),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

/// Problem-specific attributes carried alongside the graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemAttrs {
    pub s: Option<Vertex>,
    pub t: Option<Vertex>,
    pub colors: Option<Vec<u32>>,
}

impl ProblemAttrs {
    pub fn terminals(s: Vertex, t: Vertex) -> ProblemAttrs {
        ProblemAttrs {
            s: Some(s),
            t: Some(t),
            colors: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProblemInstance {
    pub graph: TemporalGraph,
    pub kind: ProblemKind,
    pub k: usize,
    pub ell: usize,
    pub q: Option<usize>,
    pub attrs: ProblemAttrs,
}

impl ProblemInstance {
    pub fn new(
        graph: TemporalGraph,
        kind: ProblemKind,
        k: usize,
        ell: usize,
        q: Option<usize>,
        attrs: ProblemAttrs,
    ) -> Result<ProblemInstance, ProblemError> {
        let inst = ProblemInstance {
            graph,
            kind,
            k,
            ell,
            q,
            attrs,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn simple(
        graph: TemporalGraph,
        kind: ProblemKind,
        k: usize,
        ell: usize,
    ) -> ProblemInstance {
        ProblemInstance::new(graph, kind, k, ell, None, ProblemAttrs::default())
            .expect("kind without required attributes")
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        let bad = |m: String| Err(ProblemError::InvalidInstance(m));
        let n = self.graph.n();
        if self.q == Some(0) {
            return bad("q must be at least 1".into());
        }
        match (self.kind.needs_terminals(), self.attrs.s, self.attrs.t) {
            (true, Some(s), Some(t)) => {
                if s == t {
                    return bad("s and t must differ".into());
                }
                if s as usize >= n || t as usize >= n {
                    return bad("terminal vertex out of range".into());
                }
            }
            (true, _, _) => return bad(format!("{} needs both s and t", self.kind)),
            (false, None, None) => {}
            (false, _, _) => return bad(format!("{} takes no terminals", self.kind)),
        }
        if let Some(colors) = &self.attrs.colors {
            if colors.len() != n {
                return bad(format!("expected {n} colors, got {}", colors.len()));
            }
        }
        Ok(())
    }

    pub fn tau(&self) -> usize {
        self.graph.tau()
    }

    pub fn with_graph(&self, graph: TemporalGraph) -> ProblemInstance {
        ProblemInstance {
            graph,
            ..self.clone()
        }
    }
}

/// One element set per layer.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SolutionSequence {
    pub sets: Vec<ElementSet>,
}

impl SolutionSequence {
    pub fn new(sets: Vec<ElementSet>) -> SolutionSequence {
        SolutionSequence { sets }
    }

    pub fn constant(set: ElementSet, tau: usize) -> SolutionSequence {
        SolutionSequence {
            sets: vec![set; tau],
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `|S_{i+1} \ S_i|` for each consecutive pair.
    pub fn step_insertions(&self) -> Vec<usize> {
        self.sets
            .windows(2)
            .map(|w| w[1].difference(&w[0]).count())
            .collect()
    }

    pub fn insertion_total(&self) -> usize {
        self.step_insertions().iter().sum()
    }

    /// `|S_1|` plus all insertions: the relaxed charge bound.
    pub fn charge(&self) -> usize {
        self.sets.first().map_or(0, |s| s.len()) + self.insertion_total()
    }
}

pub fn in_universe(kind: ProblemKind, graph: &TemporalGraph, element: Element) -> bool {
    let n = graph.n();
    match (kind.element_kind(), element) {
        (ElementKind::Vertex, Element::Vertex(v)) => (v as usize) < n,
        (ElementKind::Edge, Element::Edge(e)) => graph.underlying().contains(e),
        (ElementKind::Modification, Element::Mod(e, ModOp::Del)) => graph.underlying().contains(e),
        (ElementKind::Modification, Element::Mod(e, ModOp::Add)) => {
            kind == ProblemKind::ClusterEditing && (e.v() as usize) < n
        }
        _ => false,
    }
}

/// All elements a solution may draw from, in canonical order.
pub fn element_universe(kind: ProblemKind, graph: &TemporalGraph) -> Vec<Element> {
    let under = graph.underlying();
    match kind.element_kind() {
        ElementKind::Vertex => (0..graph.n() as Vertex).map(Element::Vertex).collect(),
        ElementKind::Edge => under.edges().iter().map(|&e| Element::Edge(e)).collect(),
        ElementKind::Modification => {
            let mut out: Vec<Element> = under
                .edges()
                .iter()
                .map(|&e| Element::Mod(e, ModOp::Del))
                .collect();
            if kind == ProblemKind::ClusterEditing {
                let n = graph.n() as Vertex;
                for a in 0..n {
                    for b in a + 1..n {
                        out.push(Element::Mod(Edge::new(a, b), ModOp::Add));
                    }
                }
            }
            out.sort_unstable();
            out
        }
    }
}

fn check_kind(kind: ProblemKind, layer: Layer<'_>, set: &ElementSet) -> Result<(), ProblemError> {
    for &element in set {
        let ok = element.kind() == kind.element_kind()
            && (element.max_vertex() as usize) < layer.n()
            && !(kind == ProblemKind::ClusterEdgeDeletion
                && matches!(element, Element::Mod(_, ModOp::Add)));
        if !ok {
            return Err(ProblemError::OutsideUniverse { kind, element });
        }
    }
    Ok(())
}

/// Whether `set` solves `kind` on one static layer.
///
/// Edge elements not present in the layer are ignored; so are deletions of
/// absent pairs and additions of present ones.
pub fn satisfies(
    kind: ProblemKind,
    layer: Layer<'_>,
    set: &ElementSet,
    attrs: &ProblemAttrs,
) -> Result<bool, ProblemError> {
    check_kind(kind, layer, set)?;
    Ok(match kind {
        ProblemKind::VertexCover => layer.edges().iter().all(|e| {
            set.contains(&Element::Vertex(e.u())) || set.contains(&Element::Vertex(e.v()))
        }),
        ProblemKind::DominatingSet => is_dominating(layer, set),
        ProblemKind::EdgeDominatingSet => is_edge_dominating(layer, set),
        ProblemKind::PathContraction => contracts_to_paths(layer, &layer_edges_of(layer, set)),
        ProblemKind::ClusterEditing | ProblemKind::ClusterEdgeDeletion => {
            is_cluster_graph(&apply_modifications(layer, set))
        }
        ProblemKind::StPath => {
            let (s, t) = terminals(attrs)?;
            let chosen = layer_edges_of(layer, set);
            reachable(&chosen, s, t)
        }
        ProblemKind::StCut => {
            let (s, t) = terminals(attrs)?;
            let rest: Vec<Edge> = layer
                .edges()
                .iter()
                .copied()
                .filter(|&e| !set.contains(&Element::Edge(e)))
                .collect();
            !reachable(&rest, s, t)
        }
        ProblemKind::Matching => {
            let chosen = layer_edges_of(layer, set);
            let mut seen = HashSet::with_capacity(chosen.len() * 2);
            chosen
                .iter()
                .all(|e| seen.insert(e.u()) && seen.insert(e.v()))
        }
    })
}

/// Checks each layer in `layers` (0-based indices).
pub fn satisfies_slice(
    inst: &ProblemInstance,
    layers: std::ops::Range<usize>,
    set: &ElementSet,
) -> Result<bool, ProblemError> {
    for i in layers {
        if !satisfies(inst.kind, inst.graph.layer(i), set, &inst.attrs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn terminals(attrs: &ProblemAttrs) -> Result<(Vertex, Vertex), ProblemError> {
    match (attrs.s, attrs.t) {
        (Some(s), Some(t)) => Ok((s, t)),
        _ => Err(ProblemError::InvalidInstance("missing s or t".into())),
    }
}

/// `S ∩ E(layer)` for edge-element sets.
fn layer_edges_of(layer: Layer<'_>, set: &ElementSet) -> Vec<Edge> {
    set.iter()
        .filter_map(|e| e.as_edge())
        .filter(|&e| layer.contains(e))
        .collect()
}

fn is_dominating(layer: Layer<'_>, set: &ElementSet) -> bool {
    let mut dominated = vec![false; layer.n()];
    for v in set.iter().filter_map(|e| e.as_vertex()) {
        dominated[v as usize] = true;
    }
    for e in layer.edges() {
        if set.contains(&Element::Vertex(e.u())) {
            dominated[e.v() as usize] = true;
        }
        if set.contains(&Element::Vertex(e.v())) {
            dominated[e.u() as usize] = true;
        }
    }
    dominated.iter().all(|&d| d)
}

fn is_edge_dominating(layer: Layer<'_>, set: &ElementSet) -> bool {
    let covered: HashSet<Vertex> = layer_edges_of(layer, set)
        .iter()
        .flat_map(|e| [e.u(), e.v()])
        .collect();
    layer
        .edges()
        .iter()
        .all(|e| covered.contains(&e.u()) || covered.contains(&e.v()))
}

/// Contracts `contracted` inside `layer` (loops and parallel edges dropped)
/// and tests whether every component of the result is a simple path.
pub fn contracts_to_paths(layer: Layer<'_>, contracted: &[Edge]) -> bool {
    let ids = LocalIds::new(layer.touched_vertices());
    let mut uf = UnionFind::new(ids.len());
    let local = |v: Vertex| ids.get(v).expect("touched vertex");
    for &e in contracted {
        uf.union(local(e.u()), local(e.v()));
    }
    let mut quotient: Vec<(u32, u32)> = layer
        .edges()
        .iter()
        .filter_map(|e| {
            let (a, b) = (uf.find(local(e.u())), uf.find(local(e.v())));
            (a != b).then(|| (a.min(b), a.max(b)))
        })
        .collect();
    quotient.sort_unstable();
    quotient.dedup();
    let mut degree = vec![0u8; ids.len()];
    let mut forest = UnionFind::new(ids.len());
    for &(a, b) in &quotient {
        for x in [a, b] {
            degree[x as usize] += 1;
            if degree[x as usize] > 2 {
                return false;
            }
        }
        if !forest.union(a, b) {
            return false;
        }
    }
    true
}

/// The edge set of a layer after applying edge modifications.
/// A pair carrying both a deletion and an addition ends up present.
pub fn apply_modifications(layer: Layer<'_>, set: &ElementSet) -> Vec<Edge> {
    let mut out: Vec<Edge> = layer
        .edges()
        .iter()
        .copied()
        .filter(|&e| {
            !set.contains(&Element::Mod(e, ModOp::Del))
                || set.contains(&Element::Mod(e, ModOp::Add))
        })
        .collect();
    out.extend(set.iter().filter_map(|el| match *el {
        Element::Mod(e, ModOp::Add) => Some(e),
        _ => None,
    }));
    out.sort_unstable();
    out.dedup();
    out
}

/// Every component is a clique. `edges` must be sorted and duplicate-free.
pub fn is_cluster_graph(edges: &[Edge]) -> bool {
    let ids = LocalIds::new(edges.iter().flat_map(|e| [e.u(), e.v()]).collect());
    let mut uf = UnionFind::new(ids.len());
    for e in edges {
        uf.union(ids.get(e.u()).unwrap(), ids.get(e.v()).unwrap());
    }
    let mut edge_count: HashMap<u32, usize> = HashMap::new();
    for e in edges {
        *edge_count
            .entry(uf.find(ids.get(e.u()).unwrap()))
            .or_default() += 1;
    }
    edge_count.into_iter().all(|(root, m)| {
        let c = uf.set_size(root);
        m == c * (c - 1) / 2
    })
}

/// First induced path `u - v - w` (with `u < w`, no edge `uw`), scanning
/// centres `v` ascending and then pairs of neighbours lexicographically.
pub fn find_induced_p3(edges: &[Edge]) -> Option<(Vertex, Vertex, Vertex)> {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for e in edges {
        adj.entry(e.u()).or_default().push(e.v());
        adj.entry(e.v()).or_default().push(e.u());
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    let mut centres: Vec<Vertex> = adj.keys().copied().collect();
    centres.sort_unstable();
    for v in centres {
        let nb = &adj[&v];
        for (i, &u) in nb.iter().enumerate() {
            for &w in &nb[i + 1..] {
                if adj[&u].binary_search(&w).is_err() {
                    return Some((u, v, w));
                }
            }
        }
    }
    None
}

fn reachable(edges: &[Edge], s: Vertex, t: Vertex) -> bool {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for e in edges {
        adj.entry(e.u()).or_default().push(e.v());
        adj.entry(e.v()).or_default().push(e.u());
    }
    let mut seen = HashSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if x == t {
            return true;
        }
        for &y in adj.get(&x).into_iter().flatten() {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerCheck {
    pub layer: usize,
    pub satisfied: bool,
    pub size: usize,
    pub size_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub layers: Vec<LayerCheck>,
    pub insertion_total: usize,
    pub ell: usize,
    pub budget_ok: bool,
    pub max_step: usize,
    pub q_ok: Option<bool>,
    pub universe_ok: bool,
    pub single_set_ok: bool,
    pub failures: Vec<String>,
    pub accepted: bool,
}

impl VerifyReport {
    /// 1-based indices of layers whose property check failed.
    pub fn failing_layers(&self) -> Vec<usize> {
        self.layers
            .iter()
            .filter(|c| !c.satisfied || !c.size_ok)
            .map(|c| c.layer)
            .collect()
    }
}

pub fn verify_solution(
    inst: &ProblemInstance,
    sol: &SolutionSequence,
) -> Result<VerifyReport, ProblemError> {
    let tau = inst.tau();
    if sol.len() != tau {
        return Err(ProblemError::LengthMismatch {
            expected: tau,
            got: sol.len(),
        });
    }
    let mut failures = Vec::new();
    let mut universe_ok = true;
    let mut layers = Vec::with_capacity(tau);
    for (i, set) in sol.sets.iter().enumerate() {
        let outside: Vec<&Element> = set
            .iter()
            .filter(|&&e| !in_universe(inst.kind, &inst.graph, e))
            .collect();
        if !outside.is_empty() {
            universe_ok = false;
            failures.push(format!(
                "layer {}: element {} outside the universe",
                i + 1,
                outside[0]
            ));
        }
        let satisfied = outside.is_empty()
            && satisfies(inst.kind, inst.graph.layer(i), set, &inst.attrs).unwrap_or(false);
        if outside.is_empty() && !satisfied {
            failures.push(format!("layer {}: property not satisfied", i + 1));
        }
        let size = set.len();
        let size_ok = match inst.kind.objective() {
            Objective::AtMost => size <= inst.k,
            Objective::AtLeast => size >= inst.k,
        };
        if !size_ok {
            let rel = if inst.kind.objective() == Objective::AtMost {
                ">"
            } else {
                "<"
            };
            failures.push(format!("layer {}: size {size} {rel} {}", i + 1, inst.k));
        }
        layers.push(LayerCheck {
            layer: i + 1,
            satisfied,
            size,
            size_ok,
        });
    }
    let steps = sol.step_insertions();
    let insertion_total: usize = steps.iter().sum();
    let max_step = steps.iter().copied().max().unwrap_or(0);
    let budget_ok = insertion_total <= inst.ell;
    if !budget_ok {
        failures.push(format!("budget exceeded: {insertion_total} > {}", inst.ell));
    }
    let q_ok = inst.q.map(|q| {
        let ok = max_step <= q;
        if !ok {
            failures.push(format!("local budget exceeded: {max_step} > {q}"));
        }
        ok
    });
    let single_set_ok = !inst.kind.is_single_set() || sol.sets.windows(2).all(|w| w[0] == w[1]);
    if !single_set_ok {
        failures.push(format!("{} needs one set shared by all layers", inst.kind));
    }
    let accepted = failures.is_empty();
    Ok(VerifyReport {
        layers,
        insertion_total,
        ell: inst.ell,
        budget_ok,
        max_step,
        q_ok,
        universe_ok,
        single_set_ok,
        failures,
        accepted,
    })
}

pub const MINIMALITY_LIMIT: usize = 12;

/// True iff `set` satisfies the property and no `S'` with
/// `forced ⊆ S' ⊊ set` does. Exact, by subset enumeration.
pub fn is_minimal(
    kind: ProblemKind,
    layer: Layer<'_>,
    set: &ElementSet,
    forced: &ElementSet,
    attrs: &ProblemAttrs,
) -> Result<bool, ProblemError> {
    if !forced.is_subset(set) {
        return Err(ProblemError::ForcedNotSubset);
    }
    let free: Vec<Element> = set.difference(forced).copied().collect();
    if free.len() > MINIMALITY_LIMIT {
        return Err(ProblemError::TooManyFree(free.len()));
    }
    if !satisfies(kind, layer, set, attrs)? {
        return Ok(false);
    }
    let full = (1u32 << free.len()) - 1;
    for mask in 0..full {
        let mut candidate = forced.clone();
        candidate.extend(
            free.iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e),
        );
        if satisfies(kind, layer, &candidate, attrs)? {
            return Ok(false);
        }
    }
    Ok(true)
}
