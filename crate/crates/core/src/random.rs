//! Seeded random instances for tests, benchmarks and the `suite` command.

use rand::Rng;

use crate::graph::{Edge, StaticGraph, TemporalGraph, Vertex};
use crate::problems::{ProblemAttrs, ProblemInstance, ProblemKind};

/// Inclusive upper bounds for random instances; lower bounds are
/// `n ≥ 2`, `tau ≥ 1`, `k ≥ 0`, `ell ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteParams {
    pub n_max: usize,
    pub tau_max: usize,
    pub k_max: usize,
    pub ell_max: usize,
    /// Edge probability per pair and layer.
    pub density: f64,
}

impl Default for SuiteParams {
    fn default() -> SuiteParams {
        SuiteParams {
            n_max: 8,
            tau_max: 5,
            k_max: 3,
            ell_max: 3,
            density: 0.3,
        }
    }
}

pub fn random_edges<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Vec<Edge> {
    let mut out = Vec::new();
    for a in 0..n as Vertex {
        for b in a + 1..n as Vertex {
            if rng.gen_bool(density) {
                out.push(Edge::new(a, b));
            }
        }
    }
    out
}

pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> StaticGraph {
    StaticGraph::new(n, random_edges(rng, n, density)).expect("ids below n")
}

pub fn random_temporal<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    tau: usize,
    density: f64,
) -> TemporalGraph {
    let layers = (0..tau.max(1))
        .map(|_| random_edges(rng, n, density))
        .collect();
    TemporalGraph::new(n, layers).expect("ids below n")
}

pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    kind: ProblemKind,
    params: &SuiteParams,
) -> ProblemInstance {
    let n = rng.gen_range(2..=params.n_max.max(2));
    let tau = rng.gen_range(1..=params.tau_max.max(1));
    let k = rng.gen_range(0..=params.k_max);
    let ell = if kind.is_single_set() {
        0
    } else {
        rng.gen_range(0..=params.ell_max)
    };
    let graph = random_temporal(rng, n, tau, params.density);
    let attrs = if kind.needs_terminals() {
        ProblemAttrs::terminals(0, n as Vertex - 1)
    } else {
        ProblemAttrs::default()
    };
    ProblemInstance::new(graph, kind, k, ell, None, attrs).expect("valid by construction")
}
