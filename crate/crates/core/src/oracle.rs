//! Exhaustive reference solver for small instances of every problem kind.
//!
//! Sequence problems: list every feasible set of size at most `k` per layer
//! and run a shortest-path sweep over the layers, where moving from `S` to
//! `T` costs `|T \ S|`. Single-set problems: search for one edge set that
//! works in every layer.

use std::collections::HashMap;

use itertools::Itertools;

use crate::element::{Element, ElementSet};
use crate::graph::Edge;
use crate::problems::{
    element_universe, satisfies, ProblemInstance, ProblemKind, SolutionSequence,
};
use crate::solve::{Algorithm, Answer, Counters, SolveError, SolveOptions, SolveResult};

pub const DEFAULT_CAP: usize = 2_000_000;
pub const CAP_ENV: &str = "GMS_ORACLE_CAP";

/// Which per-layer sets enter the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidatePolicy {
    #[default]
    AllFeasible,
    /// Minimal feasible sets and all their supersets of size at most `k`.
    /// Only meaningful for monotone kinds, where it equals `AllFeasible`.
    MinimalClosure,
}

/// How single-set problems are searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingleSetMethod {
    /// Exhaustive when within the cap, branching otherwise.
    #[default]
    Auto,
    Exhaustive,
    Branching,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleConfig {
    pub policy: CandidatePolicy,
    pub single_set: SingleSetMethod,
}

pub fn resolve_cap(opts: &SolveOptions) -> usize {
    opts.oracle_cap
        .or_else(|| std::env::var(CAP_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_CAP)
}

/// `Σ_{j ≤ k} C(m, j)`, saturating.
pub fn subsets_up_to(m: usize, k: usize) -> usize {
    let mut total: usize = 0;
    let mut term: u128 = 1;
    for j in 0..=k.min(m) {
        total = total.saturating_add(term.min(usize::MAX as u128) as usize);
        term = term * (m - j) as u128 / (j + 1) as u128;
        if term > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    total
}

fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    let mut term: u128 = 1;
    for j in 0..k {
        term = term * (m - j) as u128 / (j + 1) as u128;
        if term > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    term as usize
}

pub fn oracle_solve(
    inst: &ProblemInstance,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    oracle_solve_with(inst, opts, OracleConfig::default())
}

pub fn oracle_solve_with(
    inst: &ProblemInstance,
    opts: &SolveOptions,
    config: OracleConfig,
) -> Result<SolveResult, SolveError> {
    let counters = Counters::default();
    let cap = resolve_cap(opts);
    let answer = if inst.kind.is_single_set() {
        single_set(inst, opts, cap, config.single_set, &counters)?
    } else {
        sequence(inst, opts, cap, config.policy, &counters)?
    };
    Ok(SolveResult {
        algorithm: Algorithm::Oracle,
        answer,
        stats: counters.snapshot(),
    })
}

type IndexSet = Vec<u32>;

fn to_elements(universe: &[Element], set: &IndexSet) -> ElementSet {
    set.iter().map(|&i| universe[i as usize]).collect()
}

/// Feasible index sets of one layer, canonically ordered.
fn feasible_sets(
    inst: &ProblemInstance,
    layer: usize,
    universe: &[Element],
    policy: CandidatePolicy,
    opts: &SolveOptions,
    counters: &Counters,
) -> Result<Vec<IndexSet>, SolveError> {
    let view = inst.graph.layer(layer);
    let mut out = Vec::new();
    for size in 0..=inst.k.min(universe.len()) {
        opts.cancel.check()?;
        for combo in (0..universe.len() as u32).combinations(size) {
            counters.node();
            if satisfies(inst.kind, view, &to_elements(universe, &combo), &inst.attrs)? {
                out.push(combo);
            }
        }
    }
    if policy == CandidatePolicy::MinimalClosure {
        let minimal: Vec<&IndexSet> = out
            .iter()
            .filter(|s| {
                !out.iter()
                    .any(|o| o.len() < s.len() && o.iter().all(|x| s.contains(x)))
            })
            .collect();
        let mut closure: Vec<IndexSet> = Vec::new();
        for m in minimal {
            let rest: Vec<u32> = (0..universe.len() as u32)
                .filter(|x| !m.contains(x))
                .collect();
            for extra in 0..=inst.k - m.len() {
                for add in rest.iter().copied().combinations(extra) {
                    let mut s = m.clone();
                    s.extend(add);
                    s.sort_unstable();
                    closure.push(s);
                }
            }
        }
        closure.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        closure.dedup();
        out = closure;
    }
    Ok(out)
}

fn sequence(
    inst: &ProblemInstance,
    opts: &SolveOptions,
    cap: usize,
    policy: CandidatePolicy,
    counters: &Counters,
) -> Result<Answer, SolveError> {
    let universe = element_universe(inst.kind, &inst.graph);
    let work = subsets_up_to(universe.len(), inst.k);
    if work > cap {
        return Err(SolveError::TooLarge(format!(
            "{work} candidate sets per layer over {} elements exceed the cap of {cap}",
            universe.len()
        )));
    }
    let tau = inst.tau();
    let mut layers: Vec<Vec<IndexSet>> = Vec::with_capacity(tau);
    // dist[i][j]: least insertions to reach layers[i][j]; pred[i][j]: index into layers[i-1]
    let mut dist: Vec<Vec<usize>> = Vec::with_capacity(tau);
    let mut pred: Vec<Vec<usize>> = Vec::with_capacity(tau);
    for i in 0..tau {
        let cands = feasible_sets(inst, i, &universe, policy, opts, counters)?;
        if i == 0 {
            dist.push(vec![0; cands.len()]);
            pred.push(vec![usize::MAX; cands.len()]);
        } else {
            let (d, p) = relax(&layers[i - 1], &dist[i - 1], &cands, inst.q, inst.ell);
            dist.push(d);
            pred.push(p);
        }
        if cands.is_empty() {
            return Ok(Answer::No {
                reason: Some(format!(
                    "layer {} has no solution of size at most {}",
                    i + 1,
                    inst.k
                )),
            });
        }
        layers.push(cands);
    }
    let last = tau - 1;
    let best = (0..layers[last].len())
        .filter(|&j| dist[last][j] <= inst.ell)
        .min_by_key(|&j| (dist[last][j], j));
    let Some(mut j) = best else {
        return Ok(Answer::No { reason: None });
    };
    let mut sets = vec![ElementSet::new(); tau];
    for i in (0..tau).rev() {
        sets[i] = to_elements(&universe, &layers[i][j]);
        j = pred[i][j];
    }
    Ok(Answer::Yes {
        solution: SolutionSequence::new(sets),
        guesses: None,
        charge: None,
    })
}

const UNREACHED: usize = usize::MAX;

/// One sweep step via subset relaxation: the best predecessor of `T` is
/// found through `X = S ∩ T`, using the least distance of any feasible
/// `S ⊇ X`. Distances above `ell` are dropped.
fn relax(
    prev: &[IndexSet],
    prev_dist: &[usize],
    next: &[IndexSet],
    q: Option<usize>,
    ell: usize,
) -> (Vec<usize>, Vec<usize>) {
    let mut best_below: HashMap<IndexSet, (usize, usize)> = HashMap::new();
    for (j, s) in prev.iter().enumerate() {
        let d = prev_dist[j];
        if d > ell {
            continue;
        }
        for size in 0..=s.len() {
            for x in s.iter().copied().combinations(size) {
                let slot = best_below.entry(x).or_insert((UNREACHED, usize::MAX));
                if (d, j) < *slot {
                    *slot = (d, j);
                }
            }
        }
    }
    let mut dist = vec![UNREACHED; next.len()];
    let mut pred = vec![usize::MAX; next.len()];
    for (t_idx, t) in next.iter().enumerate() {
        for size in 0..=t.len() {
            let step = t.len() - size;
            if q.is_some_and(|q| step > q) {
                continue;
            }
            for x in t.iter().copied().combinations(size) {
                if let Some(&(d, j)) = best_below.get(&x) {
                    let total = d + step;
                    if total <= ell && (total, j) < (dist[t_idx], pred[t_idx]) {
                        dist[t_idx] = total;
                        pred[t_idx] = j;
                    }
                }
            }
        }
    }
    (dist, pred)
}

/// Reference relaxation over all pairs; used to test [`relax`].
#[cfg(test)]
fn relax_pairwise(
    prev: &[IndexSet],
    prev_dist: &[usize],
    next: &[IndexSet],
    q: Option<usize>,
    ell: usize,
) -> Vec<usize> {
    next.iter()
        .map(|t| {
            prev.iter()
                .zip(prev_dist)
                .filter(|(_, &d)| d <= ell)
                .filter_map(|(s, &d)| {
                    let step = t.iter().filter(|x| !s.contains(x)).count();
                    (q.map_or(true, |q| step <= q) && d + step <= ell).then_some(d + step)
                })
                .min()
                .unwrap_or(UNREACHED)
        })
        .collect()
}

fn single_set(
    inst: &ProblemInstance,
    opts: &SolveOptions,
    cap: usize,
    method: SingleSetMethod,
    counters: &Counters,
) -> Result<Answer, SolveError> {
    let edges = inst.graph.underlying().edges().to_vec();
    let work = match inst.kind {
        ProblemKind::Matching => binomial(edges.len(), inst.k),
        _ => subsets_up_to(edges.len(), inst.k),
    };
    let exhaustive = match method {
        SingleSetMethod::Exhaustive => {
            if work > cap {
                return Err(SolveError::TooLarge(format!(
                    "{work} edge sets exceed the cap of {cap}"
                )));
            }
            true
        }
        SingleSetMethod::Branching => false,
        SingleSetMethod::Auto => work <= cap,
    };
    let found = if exhaustive {
        exhaustive_single(inst, &edges, opts, counters)?
    } else {
        match inst.kind {
            ProblemKind::StPath => BranchSearch::new(inst, opts, counters).st_path()?,
            ProblemKind::StCut => BranchSearch::new(inst, opts, counters).st_cut()?,
            _ => matching_backtrack(inst, &edges, opts, counters)?,
        }
    };
    Ok(match found {
        Some(set) => Answer::Yes {
            solution: SolutionSequence::constant(set, inst.tau()),
            guesses: None,
            charge: None,
        },
        None => Answer::No { reason: None },
    })
}

fn works_everywhere(inst: &ProblemInstance, set: &ElementSet) -> Result<bool, SolveError> {
    for layer in inst.graph.layers() {
        if !satisfies(inst.kind, layer, set, &inst.attrs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn exhaustive_single(
    inst: &ProblemInstance,
    edges: &[Edge],
    opts: &SolveOptions,
    counters: &Counters,
) -> Result<Option<ElementSet>, SolveError> {
    // the matching property is hereditary, so exactly k edges suffice
    let sizes = match inst.kind {
        ProblemKind::Matching => inst.k..=inst.k,
        _ => 0..=inst.k,
    };
    for size in sizes {
        if size > edges.len() {
            break;
        }
        opts.cancel.check()?;
        for combo in edges.iter().combinations(size) {
            counters.node();
            let set: ElementSet = combo.into_iter().map(|&e| Element::Edge(e)).collect();
            if works_everywhere(inst, &set)? {
                return Ok(Some(set));
            }
        }
    }
    Ok(None)
}

/// Pairs of edges that share an endpoint and appear together in a layer.
fn matching_backtrack(
    inst: &ProblemInstance,
    edges: &[Edge],
    opts: &SolveOptions,
    counters: &Counters,
) -> Result<Option<ElementSet>, SolveError> {
    let m = edges.len();
    let mut conflict = vec![vec![false; m]; m];
    for layer in inst.graph.layers() {
        let present: Vec<usize> = (0..m).filter(|&i| layer.contains(edges[i])).collect();
        for (a, &i) in present.iter().enumerate() {
            for &j in &present[a + 1..] {
                if edges[i].shares_endpoint(edges[j]) {
                    conflict[i][j] = true;
                    conflict[j][i] = true;
                }
            }
        }
    }
    fn extend(
        start: usize,
        chosen: &mut Vec<usize>,
        k: usize,
        conflict: &[Vec<bool>],
        opts: &SolveOptions,
        counters: &Counters,
    ) -> Result<bool, SolveError> {
        if chosen.len() == k {
            return Ok(true);
        }
        opts.cancel.check()?;
        counters.node();
        let m = conflict.len();
        for i in start..m {
            if m - i < k - chosen.len() {
                break;
            }
            if chosen.iter().all(|&c| !conflict[c][i]) {
                chosen.push(i);
                if extend(i + 1, chosen, k, conflict, opts, counters)? {
                    return Ok(true);
                }
                chosen.pop();
            }
        }
        Ok(false)
    }
    let mut chosen = Vec::new();
    Ok(extend(0, &mut chosen, inst.k, &conflict, opts, counters)?
        .then(|| chosen.iter().map(|&i| Element::Edge(edges[i])).collect()))
}

/// Exact bounded search trees for the terminal problems.
struct BranchSearch<'a> {
    inst: &'a ProblemInstance,
    opts: &'a SolveOptions,
    counters: &'a Counters,
    s: u32,
    t: u32,
}

impl<'a> BranchSearch<'a> {
    fn new(
        inst: &'a ProblemInstance,
        opts: &'a SolveOptions,
        counters: &'a Counters,
    ) -> BranchSearch<'a> {
        let s = inst.attrs.s.expect("validated instance");
        let t = inst.attrs.t.expect("validated instance");
        BranchSearch {
            inst,
            opts,
            counters,
            s,
            t,
        }
    }

    /// Every layer must get a whole `s`-`t` path from the chosen set; the
    /// first unserved layer branches over its simple paths.
    fn st_path(&self) -> Result<Option<ElementSet>, SolveError> {
        let mut chosen = ElementSet::new();
        Ok(self.path_step(&mut chosen)?.then_some(chosen))
    }

    fn path_step(&self, chosen: &mut ElementSet) -> Result<bool, SolveError> {
        self.opts.cancel.check()?;
        self.counters.node();
        let pending = self.inst.graph.layers().position(|l| {
            !satisfies(ProblemKind::StPath, l, chosen, &self.inst.attrs).unwrap_or(false)
        });
        let Some(layer) = pending else {
            return Ok(true);
        };
        for path in simple_paths(self.inst.graph.layer(layer).edges(), self.s, self.t) {
            let fresh: Vec<Element> = path
                .iter()
                .map(|&e| Element::Edge(e))
                .filter(|e| !chosen.contains(e))
                .collect();
            if fresh.is_empty() || chosen.len() + fresh.len() > self.inst.k {
                continue;
            }
            chosen.extend(fresh.iter().copied());
            if self.path_step(chosen)? {
                return Ok(true);
            }
            for e in &fresh {
                chosen.remove(e);
            }
        }
        Ok(false)
    }

    /// Some edge of any surviving `s`-`t` path must be cut.
    fn st_cut(&self) -> Result<Option<ElementSet>, SolveError> {
        let mut chosen = ElementSet::new();
        Ok(self.cut_step(&mut chosen)?.then_some(chosen))
    }

    fn cut_step(&self, chosen: &mut ElementSet) -> Result<bool, SolveError> {
        self.opts.cancel.check()?;
        self.counters.node();
        let survivor = self.inst.graph.layers().find_map(|l| {
            let rest: Vec<Edge> = l
                .edges()
                .iter()
                .copied()
                .filter(|&e| !chosen.contains(&Element::Edge(e)))
                .collect();
            simple_paths(&rest, self.s, self.t).next()
        });
        let Some(path) = survivor else {
            return Ok(true);
        };
        if chosen.len() >= self.inst.k {
            return Ok(false);
        }
        for e in path {
            let el = Element::Edge(e);
            chosen.insert(el);
            if self.cut_step(chosen)? {
                return Ok(true);
            }
            chosen.remove(&el);
        }
        Ok(false)
    }
}

/// Simple `s`-`t` paths as edge lists, in DFS order over sorted neighbours.
fn simple_paths(edges: &[Edge], s: u32, t: u32) -> impl Iterator<Item = Vec<Edge>> {
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for e in edges {
        adj.entry(e.u()).or_default().push(e.v());
        adj.entry(e.v()).or_default().push(e.u());
    }
    for l in adj.values_mut() {
        l.sort_unstable();
    }
    let mut out = Vec::new();
    let mut stack = vec![s];
    let mut on_path = std::collections::HashSet::from([s]);
    fn dfs(
        adj: &HashMap<u32, Vec<u32>>,
        t: u32,
        stack: &mut Vec<u32>,
        on_path: &mut std::collections::HashSet<u32>,
        out: &mut Vec<Vec<Edge>>,
    ) {
        let x = *stack.last().unwrap();
        if x == t {
            out.push(stack.windows(2).map(|w| Edge::new(w[0], w[1])).collect());
            return;
        }
        for &y in adj.get(&x).into_iter().flatten() {
            if on_path.insert(y) {
                stack.push(y);
                dfs(adj, t, stack, on_path, out);
                stack.pop();
                on_path.remove(&y);
            }
        }
    }
    dfs(&adj, t, &mut stack, &mut on_path, &mut out);
    out.into_iter()
}
