//! Full kernels for vertex cover and path contraction, and the temporal
//! kernel assembled from them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::element::{Element, ElementSet};
use crate::graph::{Edge, Layer, LocalIds, StaticGraph, TemporalGraph, UnionFind, Vertex};
use crate::problems::{contracts_to_paths, ProblemInstance, ProblemKind, SolutionSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Kernelized,
    NoInstance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RuleApplication {
    DropIsolated { count: usize },
    TrimHighDegree { vertex: Vertex, removed: usize },
    ContractBridge { edge: Edge, sides: (usize, usize) },
    Reject { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelResult {
    pub kind: ProblemKind,
    /// Surviving edges, on the original vertex ids.
    pub graph: StaticGraph,
    pub kept_vertices: Vec<Vertex>,
    /// Edges contracted by the bridge rule (path contraction only).
    pub contracted: Vec<Edge>,
    /// Vertex counts of the components after contraction (path contraction only).
    pub component_sizes: Vec<usize>,
    pub verdict: Verdict,
    pub trace: Vec<RuleApplication>,
}

impl KernelResult {
    /// Elements a minimal solution may use.
    pub fn universe(&self) -> Vec<Element> {
        match self.kind {
            ProblemKind::VertexCover => self
                .kept_vertices
                .iter()
                .map(|&v| Element::Vertex(v))
                .collect(),
            _ => self
                .graph
                .edges()
                .iter()
                .map(|&e| Element::Edge(e))
                .collect(),
        }
    }

    /// Whether `set` solves the kernelized layer.
    pub fn accepts(&self, set: &ElementSet) -> bool {
        if self.verdict == Verdict::NoInstance {
            return false;
        }
        match self.kind {
            ProblemKind::VertexCover => self.graph.edges().iter().all(|e| {
                set.contains(&Element::Vertex(e.u())) || set.contains(&Element::Vertex(e.v()))
            }),
            _ => {
                let mut merged: Vec<Edge> = self.contracted.clone();
                merged.extend(
                    set.iter()
                        .filter_map(|e| e.as_edge())
                        .filter(|&e| self.graph.contains(e)),
                );
                let mut all = self.graph.edges().to_vec();
                all.extend_from_slice(&self.contracted);
                all.sort_unstable();
                let layer = StaticGraph::new(self.graph.n(), all).expect("edges in range");
                contracts_to_paths(layer.view(), &merged)
            }
        }
    }
}

pub fn vc_vertex_bound(k: usize) -> usize {
    k * k + 2 * k
}

pub fn vc_edge_bound(k: usize) -> usize {
    k * k + k
}

pub fn pc_component_bound(k: usize) -> usize {
    5 * k + 3
}

/// Drops isolated vertices and trims every vertex of degree above `k + 1`
/// to its `k + 1` canonically smallest incident edges, until stable; then
/// rejects if more than `k² + 2k` vertices or `k² + k` edges remain.
pub fn buss_kernel(layer: Layer<'_>, k: usize) -> KernelResult {
    let mut edges: BTreeSet<Edge> = layer.edges().iter().copied().collect();
    let mut trace = Vec::new();
    let isolated = layer.n() - layer.touched_vertices().len();
    if isolated > 0 {
        trace.push(RuleApplication::DropIsolated { count: isolated });
    }
    loop {
        let mut incident: BTreeMap<Vertex, Vec<Edge>> = BTreeMap::new();
        for &e in &edges {
            incident.entry(e.u()).or_default().push(e);
            incident.entry(e.v()).or_default().push(e);
        }
        let Some((&vertex, list)) = incident.iter().find(|(_, l)| l.len() > k + 1) else {
            break;
        };
        let before = incident.len();
        let removed = list.len() - (k + 1);
        for e in &list[k + 1..] {
            edges.remove(e);
        }
        trace.push(RuleApplication::TrimHighDegree { vertex, removed });
        let after: BTreeSet<Vertex> = edges.iter().flat_map(|e| [e.u(), e.v()]).collect();
        if after.len() < before {
            trace.push(RuleApplication::DropIsolated {
                count: before - after.len(),
            });
        }
    }
    let graph = StaticGraph::new(layer.n(), edges).expect("subgraph stays in range");
    let kept_vertices = graph.view().touched_vertices();
    let mut verdict = Verdict::Kernelized;
    if kept_vertices.len() > vc_vertex_bound(k) || graph.edges().len() > vc_edge_bound(k) {
        verdict = Verdict::NoInstance;
        trace.push(RuleApplication::Reject {
            reason: format!(
                "{} vertices / {} edges exceed {} / {}",
                kept_vertices.len(),
                graph.edges().len(),
                vc_vertex_bound(k),
                vc_edge_bound(k)
            ),
        });
    }
    KernelResult {
        kind: ProblemKind::VertexCover,
        graph,
        kept_vertices,
        contracted: Vec::new(),
        component_sizes: Vec::new(),
        verdict,
        trace,
    }
}

/// Quotient of a layer under a set of contracted edges, on local ids.
struct Quotient {
    /// Distinct roots, ascending.
    nodes: Vec<u32>,
    /// Adjacency over positions in `nodes`, each entry with its original edge.
    adj: Vec<Vec<(usize, Edge)>>,
}

impl Quotient {
    fn build(layer: Layer<'_>, ids: &LocalIds, uf: &mut UnionFind) -> Quotient {
        let roots: Vec<u32> = (0..ids.len() as u32).map(|x| uf.find(x)).collect();
        let mut nodes = roots.clone();
        nodes.sort_unstable();
        nodes.dedup();
        let pos = |r: u32| nodes.binary_search(&r).expect("root present");
        let mut adj = vec![Vec::new(); nodes.len()];
        for &e in layer.edges() {
            let a = roots[ids.get(e.u()).unwrap() as usize];
            let b = roots[ids.get(e.v()).unwrap() as usize];
            if a != b {
                let (pa, pb) = (pos(a), pos(b));
                adj[pa].push((pb, e));
                adj[pb].push((pa, e));
            }
        }
        Quotient { nodes, adj }
    }

    /// Bridges as `(original edge, nodes below, nodes in component)`, plus
    /// the node count of every component.
    fn bridges(&self) -> (Vec<(Edge, usize, usize)>, Vec<usize>) {
        let n = self.nodes.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut below = vec![0usize; n];
        let mut timer = 0;
        let mut found = Vec::new();
        let mut components = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            let start = found.len();
            let mut pending: Vec<(usize, Edge)> = Vec::new();
            // (node, edge used to enter it, next neighbour index)
            let mut stack: Vec<(usize, Option<Edge>, usize)> = vec![(root, None, 0)];
            disc[root] = timer;
            low[root] = timer;
            below[root] = 1;
            timer += 1;
            while let Some(frame) = stack.last_mut() {
                let (x, via, next) = (frame.0, frame.1, frame.2);
                if next < self.adj[x].len() {
                    frame.2 += 1;
                    let (y, e) = self.adj[x][next];
                    if Some(e) == via {
                        continue;
                    }
                    if disc[y] == usize::MAX {
                        disc[y] = timer;
                        low[y] = timer;
                        below[y] = 1;
                        timer += 1;
                        stack.push((y, Some(e), 0));
                    } else {
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    stack.pop();
                    if let (Some(parent), Some(e)) = (stack.last().map(|f| f.0), via) {
                        low[parent] = low[parent].min(low[x]);
                        below[parent] += below[x];
                        if low[x] > disc[parent] {
                            pending.push((x, e));
                        }
                    }
                }
            }
            let total = below[root];
            components.push(total);
            found.extend(pending.into_iter().map(|(x, e)| (e, below[x], total)));
            debug_assert!(found[start..].iter().all(|b| b.2 == total));
        }
        (found, components)
    }
}

/// Contracts bridges whose two sides both keep at least `k + 2` vertices,
/// one at a time in canonical edge order, then rejects when a component
/// has more than `5k + 3` vertices. Kept edges retain their original ids.
pub fn path_contraction_kernel(layer: Layer<'_>, k: usize) -> KernelResult {
    let ids = LocalIds::new(layer.touched_vertices());
    let mut uf = UnionFind::new(ids.len());
    let mut contracted: Vec<Edge> = Vec::new();
    let mut trace = Vec::new();
    let isolated = layer.n() - ids.len();
    if isolated > 0 {
        trace.push(RuleApplication::DropIsolated { count: isolated });
    }
    let component_sizes = loop {
        let quotient = Quotient::build(layer, &ids, &mut uf);
        let (bridges, components) = quotient.bridges();
        let pick = bridges
            .iter()
            .filter(|&&(_, side, total)| side >= k + 2 && total - side >= k + 2)
            .min_by_key(|b| b.0);
        match pick {
            Some(&(edge, side, total)) => {
                uf.union(ids.get(edge.u()).unwrap(), ids.get(edge.v()).unwrap());
                contracted.push(edge);
                trace.push(RuleApplication::ContractBridge {
                    edge,
                    sides: (side, total - side),
                });
            }
            None => break components,
        }
    };
    contracted.sort_unstable();
    let kept = layer
        .edges()
        .iter()
        .copied()
        .filter(|e| contracted.binary_search(e).is_err());
    let graph = StaticGraph::new(layer.n(), kept).expect("subgraph stays in range");
    let mut verdict = Verdict::Kernelized;
    if let Some(&big) = component_sizes.iter().find(|&&c| c > pc_component_bound(k)) {
        verdict = Verdict::NoInstance;
        trace.push(RuleApplication::Reject {
            reason: format!(
                "component of {big} vertices exceeds {}",
                pc_component_bound(k)
            ),
        });
    }
    KernelResult {
        kind: ProblemKind::PathContraction,
        graph,
        kept_vertices: ids_to_vec(&ids),
        contracted,
        component_sizes,
        verdict,
        trace,
    }
}

fn ids_to_vec(ids: &LocalIds) -> Vec<Vertex> {
    (0..ids.len() as u32).map(|i| ids.global(i)).collect()
}

/// Kernel of one layer for a kind that has one.
pub fn layer_kernel(
    kind: ProblemKind,
    layer: Layer<'_>,
    k: usize,
) -> Result<KernelResult, KernelError> {
    match kind {
        ProblemKind::VertexCover => Ok(buss_kernel(layer, k)),
        ProblemKind::PathContraction => Ok(path_contraction_kernel(layer, k)),
        other => Err(KernelError::Unsupported(other)),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("no full kernel is available for {0}")]
    Unsupported(ProblemKind),
}

/// Kernelized instance over the dense vertex set `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalKernel {
    pub instance: ProblemInstance,
    /// `vertex_map[new_id]` is the original id; ascending.
    pub vertex_map: Vec<Vertex>,
    /// Per layer, the bridges contracted by the path-contraction rule, in new ids.
    pub contracted: Vec<Vec<Edge>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelMap {
    pub problem: String,
    pub vertex_map: Vec<Vertex>,
    pub contracted: Vec<Vec<[Vertex; 2]>>,
}

impl TemporalKernel {
    pub fn id_map(&self) -> KernelMap {
        KernelMap {
            problem: self.instance.kind.code().to_string(),
            vertex_map: self.vertex_map.clone(),
            contracted: self
                .contracted
                .iter()
                .map(|l| l.iter().map(|e| [e.u(), e.v()]).collect())
                .collect(),
        }
    }

    fn lift_vertex(&self, v: Vertex) -> Vertex {
        self.vertex_map[v as usize]
    }

    /// Translates a kernel solution back to original ids.
    pub fn lift(&self, sol: &SolutionSequence) -> SolutionSequence {
        let lift_edge = |e: Edge| Edge::new(self.lift_vertex(e.u()), self.lift_vertex(e.v()));
        SolutionSequence::new(
            sol.sets
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|&el| match el {
                            Element::Vertex(v) => Element::Vertex(self.lift_vertex(v)),
                            Element::Edge(e) => Element::Edge(lift_edge(e)),
                            Element::Mod(e, op) => Element::Mod(lift_edge(e), op),
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemporalKernelOutcome {
    Kernel(TemporalKernel),
    /// Some layer has no solution of size at most `k`; `layer` is 1-based.
    No {
        layer: usize,
        reason: String,
    },
}

/// Kernelizes every layer, takes `W` as the union of kept vertices and
/// renumbers `W` densely in ascending order. Budgets are unchanged.
///
/// Vertex cover layers keep only kernel edges. Path contraction layers keep
/// their original edges: contracting would rename vertices differently in
/// each layer, so the contracted bridges are reported alongside instead.
pub fn build_temporal_kernel(inst: &ProblemInstance) -> Result<TemporalKernelOutcome, KernelError> {
    let kernels = (0..inst.tau())
        .map(|i| layer_kernel(inst.kind, inst.graph.layer(i), inst.k))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, kr) in kernels.iter().enumerate() {
        if kr.verdict == Verdict::NoInstance {
            let reason = match kr.trace.last() {
                Some(RuleApplication::Reject { reason }) => reason.clone(),
                _ => "kernel rejected".to_string(),
            };
            return Ok(TemporalKernelOutcome::No {
                layer: i + 1,
                reason,
            });
        }
    }
    let mut w: Vec<Vertex> = kernels
        .iter()
        .flat_map(|kr| kr.kept_vertices.iter().copied())
        .collect();
    w.sort_unstable();
    w.dedup();
    let ids = LocalIds::new(w.clone());
    let remap = |e: Edge| Edge::new(ids.get(e.u()).unwrap(), ids.get(e.v()).unwrap());
    let mut layers = Vec::with_capacity(inst.tau());
    let mut contracted = Vec::with_capacity(inst.tau());
    for (i, kr) in kernels.iter().enumerate() {
        let source = match inst.kind {
            ProblemKind::VertexCover => kr.graph.edges(),
            _ => inst.graph.layer(i).edges(),
        };
        layers.push(source.iter().map(|&e| remap(e)).collect());
        contracted.push(kr.contracted.iter().map(|&e| remap(e)).collect());
    }
    let graph = TemporalGraph::new(w.len(), layers).expect("remapped ids are dense");
    let instance = ProblemInstance {
        graph,
        ..inst.clone()
    };
    Ok(TemporalKernelOutcome::Kernel(TemporalKernel {
        instance,
        vertex_map: w,
        contracted,
    }))
}
