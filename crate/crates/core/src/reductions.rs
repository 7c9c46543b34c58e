//! Instance generators for hardness gadgets. Each generator returns the
//! target instance, structural counts, a legend naming the vertex blocks,
//! and a witness builder that maps a source certificate to a solution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::element::{Element, ElementSet};
use crate::graph::{Edge, GraphError, StaticGraph, TemporalGraph, Vertex};
use crate::problems::{ProblemAttrs, ProblemError, ProblemInstance, ProblemKind, SolutionSequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("invalid source: {0}")]
    InvalidSource(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("source line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown reduction `{0}`")]
    UnknownReduction(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ReductionError> {
    Err(ReductionError::InvalidSource(msg.into()))
}

fn bad_cert<T>(msg: impl Into<String>) -> Result<T, ReductionError> {
    Err(ReductionError::InvalidCertificate(msg.into()))
}

pub fn choose2(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

/// Generated target plus bookkeeping.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub instance: ProblemInstance,
    /// Structural counts: `tau`, `n`, `k`, `ell` and per-reduction extras.
    pub meta: BTreeMap<String, usize>,
    /// Human-readable description of the vertex blocks.
    pub legend: Vec<String>,
    plan: WitnessPlan,
}

impl ReductionOutput {
    fn new(
        instance: ProblemInstance,
        extra: &[(&str, usize)],
        legend: Vec<String>,
        plan: WitnessPlan,
    ) -> ReductionOutput {
        let mut meta = BTreeMap::new();
        meta.insert("tau".to_string(), instance.tau());
        meta.insert("n".to_string(), instance.graph.n());
        meta.insert("k".to_string(), instance.k);
        meta.insert("ell".to_string(), instance.ell);
        for &(key, value) in extra {
            meta.insert(key.to_string(), value);
        }
        ReductionOutput {
            instance,
            meta,
            legend,
            plan,
        }
    }

    pub fn meta(&self, key: &str) -> Option<usize> {
        self.meta.get(key).copied()
    }

    /// Maps a source certificate to a target solution. The certificate is
    /// a list of source ids: clique, dominating set, independent set or
    /// hitting set members, or indices into a set family.
    pub fn build_witness(&self, certificate: &[u32]) -> Result<SolutionSequence, ReductionError> {
        self.plan.build(&self.instance, certificate)
    }

    /// Text form: header comments carry the legend and counts.
    pub fn to_text(&self) -> String {
        let mut comments = self.legend.clone();
        comments.push(
            self.meta
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" "),
        );
        crate::format::serialize_with_comments(&self.instance, &comments)
    }
}

/// Which generator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    CliqueToVertexCover,
    CliqueToPathContraction,
    CliqueToClusterEdgeDeletion,
    DominatingSetToPlanar,
    SetCoverToEdgeDomination,
    MulticoloredCliqueToStPath,
    CliqueToStPath,
    HittingSetToStCut,
    IndependentSetToMatching,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 9] = [
        ReductionKind::CliqueToVertexCover,
        ReductionKind::CliqueToPathContraction,
        ReductionKind::CliqueToClusterEdgeDeletion,
        ReductionKind::DominatingSetToPlanar,
        ReductionKind::SetCoverToEdgeDomination,
        ReductionKind::MulticoloredCliqueToStPath,
        ReductionKind::CliqueToStPath,
        ReductionKind::HittingSetToStCut,
        ReductionKind::IndependentSetToMatching,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::CliqueToVertexCover => "clique-vc",
            ReductionKind::CliqueToPathContraction => "clique-pc",
            ReductionKind::CliqueToClusterEdgeDeletion => "clique-ced",
            ReductionKind::DominatingSetToPlanar => "ds-planar-ds",
            ReductionKind::SetCoverToEdgeDomination => "setcover-eds",
            ReductionKind::MulticoloredCliqueToStPath => "mcc-stpath",
            ReductionKind::CliqueToStPath => "clique-stpath",
            ReductionKind::HittingSetToStCut => "hs-stcut",
            ReductionKind::IndependentSetToMatching => "is-matching",
        }
    }

    /// Whether the source is a set system rather than a graph.
    pub fn takes_set_system(self) -> bool {
        matches!(
            self,
            ReductionKind::SetCoverToEdgeDomination | ReductionKind::HittingSetToStCut
        )
    }

    pub fn run(self, source: &Source, param: usize) -> Result<ReductionOutput, ReductionError> {
        let graph = || {
            source
                .graph
                .as_ref()
                .ok_or_else(|| ReductionError::InvalidSource("graph source expected".into()))
        };
        let system = || {
            source
                .universe
                .map(|u| (u, source.sets.as_slice()))
                .ok_or_else(|| ReductionError::InvalidSource("set-system source expected".into()))
        };
        match self {
            ReductionKind::CliqueToVertexCover => clique_to_gm_vertex_cover(graph()?, param),
            ReductionKind::CliqueToPathContraction => {
                clique_to_gm_path_contraction(graph()?, param)
            }
            ReductionKind::CliqueToClusterEdgeDeletion => {
                clique_to_gm_cluster_edge_deletion(graph()?, param)
            }
            ReductionKind::DominatingSetToPlanar => dominating_set_to_gm_planar_ds(graph()?, param),
            ReductionKind::SetCoverToEdgeDomination => {
                let (u, sets) = system()?;
                set_cover_to_gm_planar_eds(u, sets, param)
            }
            ReductionKind::MulticoloredCliqueToStPath => {
                let colors = source.colors.as_ref().ok_or_else(|| {
                    ReductionError::InvalidSource("coloring expected (`c` line)".into())
                })?;
                mcc_to_gm_st_path(graph()?, colors, param)
            }
            ReductionKind::CliqueToStPath => clique_to_gm_st_path(graph()?, param),
            ReductionKind::HittingSetToStCut => {
                let (u, sets) = system()?;
                hitting_set_to_gm_st_cut(u, sets, param)
            }
            ReductionKind::IndependentSetToMatching => {
                independent_set_to_gm_matching(graph()?, param)
            }
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionKind {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<ReductionKind, ReductionError> {
        ReductionKind::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| ReductionError::UnknownReduction(s.to_string()))
    }
}

/// A parsed source instance.
///
/// ```text
/// g 4          # graph on vertices 0..4
/// e 0 1
/// c 0 1 0 1    # optional coloring
/// u 5          # or: set system over elements 0..5
/// s 0 1 4
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Source {
    pub graph: Option<StaticGraph>,
    pub colors: Option<Vec<u32>>,
    pub universe: Option<usize>,
    pub sets: Vec<Vec<u32>>,
}

impl Source {
    pub fn parse(text: &str) -> Result<Source, ReductionError> {
        let err = |line: usize, message: String| ReductionError::Parse { line, message };
        let mut n: Option<usize> = None;
        let mut pairs = Vec::new();
        let mut out = Source::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = body.split_whitespace();
            let Some(tag) = tokens.next() else { continue };
            let nums: Vec<u32> = tokens
                .map(|t| {
                    t.parse()
                        .map_err(|_| err(line, format!("invalid number `{t}`")))
                })
                .collect::<Result<_, _>>()?;
            match tag {
                "g" | "u" if nums.len() != 1 => {
                    return Err(err(line, format!("`{tag}` takes one count")))
                }
                "g" => n = Some(nums[0] as usize),
                "u" => out.universe = Some(nums[0] as usize),
                "e" => {
                    let [a, b] = nums[..] else {
                        return Err(err(line, "`e` takes two vertices".into()));
                    };
                    pairs.push((line, a, b));
                }
                "c" => out.colors = Some(nums),
                "s" => {
                    let Some(u) = out.universe else {
                        return Err(err(line, "set before `u` line".into()));
                    };
                    if let Some(&x) = nums.iter().find(|&&x| x as usize >= u) {
                        return Err(err(
                            line,
                            format!("element {x} outside universe of size {u}"),
                        ));
                    }
                    out.sets.push(nums);
                }
                other => return Err(err(line, format!("unknown tag `{other}`"))),
            }
        }
        if let Some(n) = n {
            let mut edges = Vec::with_capacity(pairs.len());
            for (line, a, b) in pairs {
                edges.push(Edge::try_new(a, b).map_err(|e| err(line, e.to_string()))?);
            }
            out.graph = Some(StaticGraph::new(n, edges).map_err(|e| err(0, e.to_string()))?);
            if let Some(c) = &out.colors {
                if c.len() != n {
                    return Err(err(0, format!("expected {n} colors, got {}", c.len())));
                }
            }
        } else if !pairs.is_empty() {
            return Err(err(pairs[0].0, "edge before `g` line".into()));
        }
        if out.graph.is_none() && out.universe.is_none() {
            return Err(err(0, "no `g` or `u` line".into()));
        }
        Ok(out)
    }

    pub fn from_graph(graph: StaticGraph) -> Source {
        Source {
            graph: Some(graph),
            ..Source::default()
        }
    }

    pub fn from_sets(universe: usize, sets: Vec<Vec<u32>>) -> Source {
        Source {
            universe: Some(universe),
            sets,
            ..Source::default()
        }
    }
}

/// Parses a whitespace or comma separated list of ids.
pub fn parse_certificate(text: &str) -> Result<Vec<u32>, ReductionError> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| ReductionError::InvalidCertificate(format!("invalid id `{t}`")))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// certificate checks

fn distinct_in_range(cert: &[u32], n: usize, what: &str) -> Result<BTreeSet<u32>, ReductionError> {
    let set: BTreeSet<u32> = cert.iter().copied().collect();
    if set.len() != cert.len() {
        return bad_cert(format!("repeated {what}"));
    }
    if let Some(&x) = set.iter().find(|&&x| x as usize >= n) {
        return bad_cert(format!("{what} {x} out of range"));
    }
    Ok(set)
}

fn check_clique(h: &StaticGraph, cert: &[u32], size: usize) -> Result<Vec<u32>, ReductionError> {
    let set = distinct_in_range(cert, h.n(), "vertex")?;
    if set.len() != size {
        return bad_cert(format!("expected {size} vertices, got {}", set.len()));
    }
    let members: Vec<u32> = set.into_iter().collect();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if !h.contains(Edge::new(a, b)) {
                return bad_cert(format!("{a} and {b} are not adjacent"));
            }
        }
    }
    Ok(members)
}

// ---------------------------------------------------------------------------
// clique gadgets

/// Vertex ids shared by the three clique reductions.
#[derive(Debug, Clone)]
struct CliqueLayout {
    target: ProblemKind,
    source: StaticGraph,
    kt: usize,
    first_vertices: u32,
    copy_base: u32,
    copy_stride: u32,
    gadget_base: u32,
    gadget_stride: u32,
}

impl CliqueLayout {
    fn n(&self) -> usize {
        self.source.n()
    }

    /// Star layers per gadget, `8·kt²·n`.
    fn star_layers(&self) -> usize {
        8 * self.kt * self.kt * self.n()
    }

    fn gadget_layers(&self) -> usize {
        self.star_layers() + 1
    }

    fn block(&self, i: usize) -> u32 {
        self.copy_base + self.copy_stride * i as u32
    }

    fn gadget(&self, g: usize) -> u32 {
        self.gadget_base + self.gadget_stride * g as u32
    }

    /// Path endpoints `s_i`, `t_i` (path contraction) or the special vertex `u_i`.
    fn anchor(&self, i: usize) -> u32 {
        self.block(i)
    }

    fn path_end(&self, i: usize) -> u32 {
        self.block(i) + self.copy_stride - 1
    }

    fn copy_set(&self, i: usize) -> Vec<Element> {
        let base = self.block(i);
        let size = 4 * self.kt as u32;
        match self.target {
            ProblemKind::VertexCover => (base..base + size).map(Element::Vertex).collect(),
            ProblemKind::PathContraction => (base..base + size)
                .map(|v| Element::edge(v, v + 1))
                .collect(),
            _ => (base + 1..=base + size)
                .map(|v| Element::del(base, v))
                .collect(),
        }
    }

    /// Edges present in every layer.
    fn background(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        let size = 4 * self.kt as u32;
        for i in 0..self.n() {
            let base = self.block(i);
            match self.target {
                ProblemKind::PathContraction => {
                    out.extend((base..base + size).map(|v| Edge::new(v, v + 1)))
                }
                ProblemKind::ClusterEdgeDeletion => {
                    for a in base..=base + size {
                        out.extend((a + 1..=base + size).map(|b| Edge::new(a, b)));
                    }
                }
                _ => {}
            }
        }
        out
    }

    fn first_layer(&self) -> Vec<Edge> {
        let q = self.first_vertices;
        match self.target {
            ProblemKind::ClusterEdgeDeletion => (0..q / 3)
                .flat_map(|p| [Edge::new(3 * p, 3 * p + 1), Edge::new(3 * p + 1, 3 * p + 2)])
                .collect(),
            _ => StaticGraph::complete(q as usize).into_edges(),
        }
    }

    fn first_set(&self) -> ElementSet {
        let q = self.first_vertices;
        match self.target {
            ProblemKind::VertexCover => (0..q - 1).map(Element::Vertex).collect(),
            // two spanning stars leave a single edge
            ProblemKind::PathContraction => {
                let h = q / 2;
                (1..h)
                    .map(|j| Element::edge(0, j))
                    .chain((h + 1..q).map(|j| Element::edge(h, j)))
                    .collect()
            }
            _ => (0..q / 3).map(|p| Element::del(3 * p, 3 * p + 1)).collect(),
        }
    }

    fn source_edge(&self, g: usize) -> (usize, usize) {
        let e = self.source.edges()[g];
        (e.u() as usize, e.v() as usize)
    }

    /// Source vertex whose copy set the `r`-th star layer (1-based) touches.
    fn star_vertex(&self, r: usize) -> usize {
        (r - 1) % self.n()
    }

    /// Edges specific to layer `r` (1-based) of gadget `g`.
    fn gadget_edges(&self, g: usize, r: usize) -> Vec<Edge> {
        let base = self.gadget(g);
        let last = r == self.gadget_layers();
        let (p, q) = self.source_edge(g);
        match (self.target, last) {
            (ProblemKind::VertexCover, false) => {
                let w = base + (r - 1) as u32;
                self.copy_set(self.star_vertex(r))
                    .iter()
                    .map(|e| Edge::new(w, e.as_vertex().unwrap()))
                    .collect()
            }
            (ProblemKind::VertexCover, true) => {
                let w = base + self.star_layers() as u32;
                let mut out: Vec<Edge> = Vec::new();
                for i in [p, q] {
                    out.extend(
                        self.copy_set(i)
                            .iter()
                            .map(|e| Edge::new(w, e.as_vertex().unwrap())),
                    );
                }
                out
            }
            (ProblemKind::PathContraction, false) => {
                let w = base + 2 * (r - 1) as u32;
                let s = self.anchor(self.star_vertex(r));
                vec![Edge::new(w, s), Edge::new(s, w + 1)]
            }
            (ProblemKind::PathContraction, true) => {
                let y1 = base + 2 * self.star_layers() as u32;
                let (y2, z1, z2) = (y1 + 1, y1 + 2, y1 + 3);
                let sp = self.anchor(p);
                vec![
                    Edge::new(self.path_end(p), self.path_end(q)),
                    Edge::new(sp, y1),
                    Edge::new(y1, y2),
                    Edge::new(sp, z1),
                    Edge::new(z1, z2),
                ]
            }
            (_, false) => vec![Edge::new(
                base + (r - 1) as u32,
                self.anchor(self.star_vertex(r)),
            )],
            (_, true) => vec![Edge::new(self.anchor(p), self.anchor(q))],
        }
    }

    /// Extra elements layer `r` of gadget `g` needs beyond the copy sets in `chosen`.
    fn jumpers(&self, g: usize, r: usize, chosen: &BTreeSet<usize>) -> Vec<Element> {
        let base = self.gadget(g);
        if r < self.gadget_layers() {
            let i = self.star_vertex(r);
            if chosen.contains(&i) {
                return Vec::new();
            }
            return match self.target {
                ProblemKind::VertexCover => vec![Element::Vertex(base + (r - 1) as u32)],
                ProblemKind::PathContraction => {
                    vec![Element::edge(base + 2 * (r - 1) as u32, self.anchor(i))]
                }
                _ => vec![Element::del(base + (r - 1) as u32, self.anchor(i))],
            };
        }
        let (p, q) = self.source_edge(g);
        let good = chosen.contains(&p) && chosen.contains(&q);
        match (self.target, good) {
            (ProblemKind::VertexCover, true) => Vec::new(),
            (ProblemKind::VertexCover, false) => {
                vec![Element::Vertex(base + self.star_layers() as u32)]
            }
            (ProblemKind::PathContraction, true) => {
                vec![Element::edge(self.path_end(p), self.path_end(q))]
            }
            (ProblemKind::PathContraction, false) => {
                let y1 = base + 2 * self.star_layers() as u32;
                vec![Element::edge(self.anchor(p), y1), Element::edge(y1, y1 + 1)]
            }
            (_, true) => Vec::new(),
            (_, false) => vec![Element::del(self.anchor(p), self.anchor(q))],
        }
    }

    fn build_graph(&self, total: usize) -> Result<TemporalGraph, ReductionError> {
        let background = self.background();
        let mut layers = Vec::with_capacity(1 + self.source.edges().len() * self.gadget_layers());
        let mut first = self.first_layer();
        first.extend_from_slice(&background);
        layers.push(first);
        for g in 0..self.source.edges().len() {
            for r in 1..=self.gadget_layers() {
                let mut layer = background.clone();
                layer.extend(self.gadget_edges(g, r));
                layers.push(layer);
            }
        }
        Ok(TemporalGraph::new(total, layers)?)
    }

    fn witness(&self, cert: &[u32]) -> Result<SolutionSequence, ReductionError> {
        let members = check_clique(&self.source, cert, self.kt)?;
        let chosen: BTreeSet<usize> = members.iter().map(|&v| v as usize).collect();
        let copies: ElementSet = chosen.iter().flat_map(|&i| self.copy_set(i)).collect();
        let mut sets = Vec::with_capacity(1 + self.source.edges().len() * self.gadget_layers());
        sets.push(self.first_set());
        for g in 0..self.source.edges().len() {
            for r in 1..=self.gadget_layers() {
                let mut s = copies.clone();
                s.extend(self.jumpers(g, r, &chosen));
                sets.push(s);
            }
        }
        Ok(SolutionSequence::new(sets))
    }

    fn legend(&self) -> Vec<String> {
        let mut out = vec![format!("first layer: vertices 0..{}", self.first_vertices)];
        let what = match self.target {
            ProblemKind::VertexCover => "copy set",
            ProblemKind::PathContraction => "copy path s..t",
            _ => "copy clique (u first)",
        };
        for i in 0..self.n() {
            let b = self.block(i);
            out.push(format!(
                "{what} of source vertex {i}: vertices {b}..{}",
                b + self.copy_stride
            ));
        }
        for (g, e) in self.source.edges().iter().enumerate() {
            let start = 2 + g * self.gadget_layers();
            let b = self.gadget(g);
            out.push(format!(
                "gadget for source edge {e}: layers {start}..={}, vertices {b}..{}",
                start + self.gadget_layers() - 1,
                b + self.gadget_stride
            ));
        }
        out
    }
}

fn check_clique_source(h: &StaticGraph, kt: usize) -> Result<(), ReductionError> {
    if kt < 2 {
        return invalid("clique size must be at least 2");
    }
    if kt > h.n() {
        return invalid(format!("clique size {kt} exceeds {} vertices", h.n()));
    }
    if h.edges().is_empty() {
        return invalid("source graph has no edges");
    }
    Ok(())
}

fn clique_reduction(
    target: ProblemKind,
    h: &StaticGraph,
    kt: usize,
) -> Result<ReductionOutput, ReductionError> {
    check_clique_source(h, kt)?;
    let n = h.n();
    let m = h.edges().len();
    let sq = 4 * kt * kt;
    let star_layers = 2 * sq * n;
    let (first_vertices, copy_stride, gadget_stride, k) = match target {
        ProblemKind::VertexCover => (sq + 2, 4 * kt, star_layers + 1, sq + 1),
        ProblemKind::PathContraction => (sq + 4, 4 * kt + 1, 2 * star_layers + 4, sq + 2),
        _ => (3 * (sq + 1), 4 * kt + 1, star_layers, sq + 1),
    };
    let copy_base = first_vertices;
    let gadget_base = copy_base + copy_stride * n;
    let total = gadget_base + gadget_stride * m;
    let layout = CliqueLayout {
        target,
        source: h.clone(),
        kt,
        first_vertices: first_vertices as u32,
        copy_base: copy_base as u32,
        copy_stride: copy_stride as u32,
        gadget_base: gadget_base as u32,
        gadget_stride: gadget_stride as u32,
    };
    let per_gadget = if target == ProblemKind::PathContraction {
        2
    } else {
        1
    };
    let ell = sq + 2 * sq * m * (n - kt) + per_gadget * m - choose2(kt);
    let graph = layout.build_graph(total)?;
    let instance = ProblemInstance::simple(graph, target, k, ell);
    let extra = [
        ("source_n", n),
        ("source_m", m),
        ("source_k", kt),
        ("gadget_layers", layout.gadget_layers()),
        ("copy_set_size", 4 * kt),
        ("first_layer_vertices", first_vertices),
    ];
    let legend = layout.legend();
    Ok(ReductionOutput::new(
        instance,
        &extra,
        legend,
        WitnessPlan::Clique(Box::new(layout)),
    ))
}

/// Vertex cover target with `k = 4kt²+1`.
pub fn clique_to_gm_vertex_cover(
    h: &StaticGraph,
    kt: usize,
) -> Result<ReductionOutput, ReductionError> {
    clique_reduction(ProblemKind::VertexCover, h, kt)
}

/// Path contraction target with `k = 4kt²+2`.
pub fn clique_to_gm_path_contraction(
    h: &StaticGraph,
    kt: usize,
) -> Result<ReductionOutput, ReductionError> {
    clique_reduction(ProblemKind::PathContraction, h, kt)
}

/// Cluster edge deletion target with `k = 4kt²+1`.
pub fn clique_to_gm_cluster_edge_deletion(
    h: &StaticGraph,
    kt: usize,
) -> Result<ReductionOutput, ReductionError> {
    clique_reduction(ProblemKind::ClusterEdgeDeletion, h, kt)
}

// ---------------------------------------------------------------------------
// zero-budget reductions

/// Layer `i` joins `v_i` to its neighbours and a hub `w` to every other
/// source vertex; `w` also has a pendant `w'`.
pub fn dominating_set_to_gm_planar_ds(
    h: &StaticGraph,
    k: usize,
) -> Result<ReductionOutput, ReductionError> {
    let n = h.n();
    if n == 0 {
        return invalid("source graph has no vertices");
    }
    let (w, pendant) = (n as Vertex, n as Vertex + 1);
    let adj = h.view().adjacency();
    let layers = (0..n)
        .map(|i| {
            let mut layer: Vec<Edge> = adj[i].iter().map(|&x| Edge::new(i as Vertex, x)).collect();
            layer.extend(
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| Edge::new(w, j as Vertex)),
            );
            layer.push(Edge::new(w, pendant));
            layer
        })
        .collect();
    let graph = TemporalGraph::new(n + 2, layers)?;
    let instance = ProblemInstance::simple(graph, ProblemKind::DominatingSet, k + 1, 0);
    let legend = vec![format!(
        "source vertices 0..{n}, hub {w}, pendant {pendant}"
    )];
    let extra = [("source_n", n), ("source_k", k)];
    Ok(ReductionOutput::new(
        instance,
        &extra,
        legend,
        WitnessPlan::Dominating {
            source: h.clone(),
            k,
        },
    ))
}

/// Star-shaped target: centre `0`, element `x` at `1+x`, set `j` at `1+n+j`.
pub fn set_cover_to_gm_planar_eds(
    n: usize,
    family: &[Vec<u32>],
    k: usize,
) -> Result<ReductionOutput, ReductionError> {
    if n == 0 {
        return invalid("empty universe");
    }
    if family.iter().any(Vec::is_empty) {
        return invalid("family contains the empty set");
    }
    if let Some(x) = family.iter().flatten().find(|&&x| x as usize >= n) {
        return invalid(format!("element {x} outside universe of size {n}"));
    }
    let covered: BTreeSet<u32> = family.iter().flatten().copied().collect();
    if covered.len() != n {
        return invalid("family does not cover the universe");
    }
    let set_vertex = |j: usize| (1 + n + j) as Vertex;
    let layers = (0..n as u32)
        .map(|x| {
            let mut layer = vec![Edge::new(0, 1 + x)];
            layer.extend(
                family
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.contains(&x))
                    .map(|(j, _)| Edge::new(0, set_vertex(j))),
            );
            layer
        })
        .collect();
    let graph = TemporalGraph::new(1 + n + family.len(), layers)?;
    let instance = ProblemInstance::simple(graph, ProblemKind::EdgeDominatingSet, k, 0);
    let legend = vec![format!(
        "centre 0, elements 1..={n}, sets {}..{}",
        1 + n,
        1 + n + family.len()
    )];
    let extra = [
        ("source_n", n),
        ("source_sets", family.len()),
        ("source_k", k),
    ];
    let plan = WitnessPlan::SetCover {
        universe: n,
        family: family.to_vec(),
    };
    Ok(ReductionOutput::new(instance, &extra, legend, plan))
}

/// One layer per colour class, then one per pair of classes in
/// lexicographic order; `s = n`, `t = n+1`.
pub fn mcc_to_gm_st_path(
    h: &StaticGraph,
    colors: &[u32],
    classes: usize,
) -> Result<ReductionOutput, ReductionError> {
    let n = h.n();
    if colors.len() != n {
        return invalid(format!("expected {n} colors, got {}", colors.len()));
    }
    if classes == 0 {
        return invalid("need at least one colour class");
    }
    if let Some(c) = colors.iter().find(|&&c| c as usize >= classes) {
        return invalid(format!("colour {c} outside 0..{classes}"));
    }
    let (s, t) = (n as Vertex, n as Vertex + 1);
    let class = |c: usize| (0..n as Vertex).filter(move |&v| colors[v as usize] as usize == c);
    let mut layers: Vec<Vec<Edge>> = (0..classes)
        .map(|c| {
            class(c)
                .flat_map(|v| [Edge::new(s, v), Edge::new(v, t)])
                .collect()
        })
        .collect();
    for i in 0..classes {
        for j in i + 1..classes {
            let mut layer: Vec<Edge> = class(i).map(|v| Edge::new(s, v)).collect();
            layer.extend(h.edges().iter().copied().filter(|e| {
                let (a, b) = (
                    colors[e.u() as usize] as usize,
                    colors[e.v() as usize] as usize,
                );
                (a == i || a == j) && (b == i || b == j)
            }));
            layer.extend(class(j).map(|v| Edge::new(v, t)));
            layers.push(layer);
        }
    }
    let graph = TemporalGraph::new(n + 2, layers)?;
    let k = 2 * classes + choose2(classes);
    let instance = ProblemInstance::new(
        graph,
        ProblemKind::StPath,
        k,
        0,
        None,
        ProblemAttrs::terminals(s, t),
    )?;
    let legend = vec![format!("source vertices 0..{n}, s = {s}, t = {t}")];
    let extra = [("source_n", n), ("source_k", classes)];
    let plan = WitnessPlan::StPath {
        source: h.clone(),
        colors: colors.to_vec(),
        classes,
        copies_of: None,
    };
    Ok(ReductionOutput::new(instance, &extra, legend, plan))
}

/// Colour-copy construction: vertex `(v, c)` gets id `c·n + v` and colour
/// `c`; copies of adjacent vertices in different classes are adjacent.
pub fn clique_to_multicolored(h: &StaticGraph, classes: usize) -> (StaticGraph, Vec<u32>) {
    let n = h.n();
    let mut edges = Vec::new();
    for e in h.edges() {
        for c in 0..classes {
            for d in 0..classes {
                if c != d {
                    edges.push(Edge::new(
                        (c * n) as Vertex + e.u(),
                        (d * n) as Vertex + e.v(),
                    ));
                }
            }
        }
    }
    let colors = (0..classes as u32)
        .flat_map(|c| std::iter::repeat(c).take(n))
        .collect();
    (
        StaticGraph::new(n * classes, edges).expect("ids in range"),
        colors,
    )
}

/// Plain clique source through [`clique_to_multicolored`]; the witness
/// builder takes a clique of the original graph.
pub fn clique_to_gm_st_path(h: &StaticGraph, kt: usize) -> Result<ReductionOutput, ReductionError> {
    let (colored, colors) = clique_to_multicolored(h, kt);
    let mut out = mcc_to_gm_st_path(&colored, &colors, kt)?;
    out.plan = WitnessPlan::StPath {
        source: colored,
        colors,
        classes: kt,
        copies_of: Some(h.clone()),
    };
    Ok(out)
}

/// `s = 0`, `t = 1`, element `i` becomes the edge `v_i w_i` with
/// `v_i = 2+2i`, `w_i = 3+2i`; set `j` becomes a single path.
pub fn hitting_set_to_gm_st_cut(
    universe: usize,
    family: &[Vec<u32>],
    k: usize,
) -> Result<ReductionOutput, ReductionError> {
    if family.is_empty() {
        return invalid("empty family");
    }
    if family.iter().any(Vec::is_empty) {
        return invalid("family contains the empty set");
    }
    if let Some(x) = family.iter().flatten().find(|&&x| x as usize >= universe) {
        return invalid(format!("element {x} outside universe of size {universe}"));
    }
    let layers = family
        .iter()
        .map(|set| {
            let members: BTreeSet<u32> = set.iter().copied().collect();
            let mut walk = vec![0];
            for i in members {
                walk.extend([2 + 2 * i, 3 + 2 * i]);
            }
            walk.push(1);
            walk.windows(2).map(|p| Edge::new(p[0], p[1])).collect()
        })
        .collect();
    let graph = TemporalGraph::new(2 * universe + 2, layers)?;
    let instance = ProblemInstance::new(
        graph,
        ProblemKind::StCut,
        k,
        0,
        None,
        ProblemAttrs::terminals(0, 1),
    )?;
    let legend = vec!["s = 0, t = 1, element i is the edge (2+2i)-(3+2i)".to_string()];
    let extra = [
        ("source_universe", universe),
        ("source_sets", family.len()),
        ("source_k", k),
    ];
    Ok(ReductionOutput::new(
        instance,
        &extra,
        legend,
        WitnessPlan::HittingSet {
            universe,
            family: family.to_vec(),
        },
    ))
}

/// Layer `i` holds the two edges from the endpoints of the `i`-th source
/// edge to a shared vertex `c = n`. Isolated source vertices are refused:
/// their edge to `c` would appear in no layer.
pub fn independent_set_to_gm_matching(
    h: &StaticGraph,
    k: usize,
) -> Result<ReductionOutput, ReductionError> {
    if h.edges().is_empty() {
        return invalid("source graph has no edges");
    }
    let adj = h.view().adjacency();
    if let Some(v) = adj.iter().position(Vec::is_empty) {
        return invalid(format!("source vertex {v} is isolated"));
    }
    let c = h.n() as Vertex;
    let layers = h
        .edges()
        .iter()
        .map(|e| vec![Edge::new(e.u(), c), Edge::new(e.v(), c)])
        .collect();
    let graph = TemporalGraph::new(h.n() + 1, layers)?;
    let instance = ProblemInstance::simple(graph, ProblemKind::Matching, k, 0);
    let legend = vec![format!("source vertices 0..{c}, shared vertex {c}")];
    let extra = [
        ("source_n", h.n()),
        ("source_m", h.edges().len()),
        ("source_k", k),
    ];
    Ok(ReductionOutput::new(
        instance,
        &extra,
        legend,
        WitnessPlan::Independent {
            source: h.clone(),
            k,
        },
    ))
}

// ---------------------------------------------------------------------------
// witness builders

#[derive(Debug, Clone)]
enum WitnessPlan {
    Clique(Box<CliqueLayout>),
    Dominating {
        source: StaticGraph,
        k: usize,
    },
    SetCover {
        universe: usize,
        family: Vec<Vec<u32>>,
    },
    StPath {
        source: StaticGraph,
        colors: Vec<u32>,
        classes: usize,
        copies_of: Option<StaticGraph>,
    },
    HittingSet {
        universe: usize,
        family: Vec<Vec<u32>>,
    },
    Independent {
        source: StaticGraph,
        k: usize,
    },
}

impl WitnessPlan {
    fn build(
        &self,
        inst: &ProblemInstance,
        cert: &[u32],
    ) -> Result<SolutionSequence, ReductionError> {
        let tau = inst.tau();
        match self {
            WitnessPlan::Clique(layout) => layout.witness(cert),
            WitnessPlan::Dominating { source, k } => {
                let set = distinct_in_range(cert, source.n(), "vertex")?;
                if set.len() > *k {
                    return bad_cert(format!("{} vertices exceed {k}", set.len()));
                }
                let adj = source.view().adjacency();
                if let Some(v) = (0..source.n()).find(|&v| {
                    !set.contains(&(v as u32)) && !adj[v].iter().any(|x| set.contains(x))
                }) {
                    return bad_cert(format!("vertex {v} is not dominated"));
                }
                let mut elems: ElementSet = set.into_iter().map(Element::Vertex).collect();
                elems.insert(Element::Vertex(source.n() as u32));
                Ok(SolutionSequence::constant(elems, tau))
            }
            WitnessPlan::SetCover { universe, family } => {
                let chosen = distinct_in_range(cert, family.len(), "set index")?;
                if chosen.len() > inst.k {
                    return bad_cert(format!("{} sets exceed {}", chosen.len(), inst.k));
                }
                let covered: BTreeSet<u32> = chosen
                    .iter()
                    .flat_map(|&j| family[j as usize].iter().copied())
                    .collect();
                if covered.len() != *universe {
                    return bad_cert("chosen sets miss an element");
                }
                let elems = chosen
                    .into_iter()
                    .map(|j| Element::edge(0, 1 + *universe as u32 + j))
                    .collect();
                Ok(SolutionSequence::constant(elems, tau))
            }
            WitnessPlan::StPath {
                source,
                colors,
                classes,
                copies_of,
            } => {
                let picked: Vec<u32> = match copies_of {
                    Some(h) => {
                        let members = check_clique(h, cert, *classes)?;
                        members
                            .iter()
                            .enumerate()
                            .map(|(c, &v)| (c * h.n()) as u32 + v)
                            .collect()
                    }
                    None => check_clique(source, cert, *classes)?,
                };
                let mut seen = vec![false; *classes];
                for &v in &picked {
                    let c = colors[v as usize] as usize;
                    if std::mem::replace(&mut seen[c], true) {
                        return bad_cert(format!("colour {c} used twice"));
                    }
                }
                let (s, t) = (source.n() as u32, source.n() as u32 + 1);
                let mut elems = ElementSet::new();
                for (i, &a) in picked.iter().enumerate() {
                    elems.insert(Element::edge(s, a));
                    elems.insert(Element::edge(a, t));
                    for &b in &picked[i + 1..] {
                        elems.insert(Element::edge(a, b));
                    }
                }
                Ok(SolutionSequence::constant(elems, tau))
            }
            WitnessPlan::HittingSet { universe, family } => {
                let chosen = distinct_in_range(cert, *universe, "element")?;
                if chosen.len() > inst.k {
                    return bad_cert(format!("{} elements exceed {}", chosen.len(), inst.k));
                }
                if let Some(j) = family
                    .iter()
                    .position(|f| !f.iter().any(|x| chosen.contains(x)))
                {
                    return bad_cert(format!("set {j} is not hit"));
                }
                let elems = chosen
                    .into_iter()
                    .map(|i| Element::edge(2 + 2 * i, 3 + 2 * i))
                    .collect();
                Ok(SolutionSequence::constant(elems, tau))
            }
            WitnessPlan::Independent { source, k } => {
                let chosen = distinct_in_range(cert, source.n(), "vertex")?;
                if chosen.len() < *k {
                    return bad_cert(format!("{} vertices are fewer than {k}", chosen.len()));
                }
                if let Some(e) = source
                    .edges()
                    .iter()
                    .find(|e| chosen.contains(&e.u()) && chosen.contains(&e.v()))
                {
                    return bad_cert(format!("edge {e} inside the set"));
                }
                let c = source.n() as u32;
                Ok(SolutionSequence::constant(
                    chosen.into_iter().map(|v| Element::edge(v, c)).collect(),
                    tau,
                ))
            }
        }
    }
}
