//! Forward search over per-layer full kernels under the relaxed charge
//! bound `|S_1| + insertions ≤ k + ell`, followed by a repair pass that
//! restores the plain insertion budget.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::element::{Element, ElementSet};
use crate::kernels::{layer_kernel, KernelResult, RuleApplication, Verdict};
use crate::problems::{verify_solution, ProblemInstance, ProblemKind, SolutionSequence};
use crate::solve::{
    thread_pool, Algorithm, Answer, Counters, SolveError, SolveOptions, SolveResult,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepairError {
    #[error("charge {charge} exceeds k + ell = {limit}")]
    ChargeTooHigh { charge: usize, limit: usize },
}

/// Moves inserted elements forward in time until at most `ell` insertions
/// remain: the canonically least element inserted at the first step with
/// an insertion is added to every earlier set. Feasibility is kept for
/// monotone properties and sizes stay within `k` because `|S_1| < k`
/// whenever the budget is still exceeded.
pub fn repair_budget(
    sol: &SolutionSequence,
    k: usize,
    ell: usize,
) -> Result<SolutionSequence, RepairError> {
    let charge = sol.charge();
    if charge > k + ell {
        return Err(RepairError::ChargeTooHigh {
            charge,
            limit: k + ell,
        });
    }
    let mut sets = sol.sets.clone();
    let mut total = sol.insertion_total();
    while total > ell {
        let (step, element) = (0..sets.len() - 1)
            .find_map(|i| sets[i + 1].difference(&sets[i]).next().map(|&e| (i, e)))
            .expect("positive insertion total has an insertion");
        for set in &mut sets[..=step] {
            set.insert(element);
        }
        total -= 1;
    }
    Ok(SolutionSequence::new(sets))
}

#[derive(Clone)]
struct Searcher<'a> {
    inst: &'a ProblemInstance,
    opts: &'a SolveOptions,
    kernels: &'a [KernelResult],
    universes: &'a [Vec<Element>],
    limit: usize,
    /// Least charge already known to fail from `(layer, set)`.
    memo: HashMap<(usize, ElementSet), usize>,
    counters: Counters,
    path: Vec<ElementSet>,
    fork: bool,
}

impl<'a> Searcher<'a> {
    fn branches(&self, layer: usize, set: &ElementSet) -> Vec<ElementSet> {
        let fresh: Vec<Element> = self.universes[layer]
            .iter()
            .copied()
            .filter(|e| !set.contains(e))
            .collect();
        let mut out = Vec::new();
        if set.len() < self.inst.k {
            for &y in &fresh {
                let mut s = set.clone();
                s.insert(y);
                out.push(s);
            }
        }
        for x in set {
            for &y in &fresh {
                let mut s = set.clone();
                s.remove(x);
                s.insert(y);
                out.push(s);
            }
        }
        out
    }

    fn search(
        &mut self,
        mut layer: usize,
        set: ElementSet,
        charge: usize,
    ) -> Result<bool, SolveError> {
        let base = self.path.len();
        let tau = self.inst.tau();
        while self.kernels[layer].accepts(&set) {
            self.path.push(set.clone());
            layer += 1;
            if layer == tau {
                return Ok(true);
            }
        }
        self.opts.cancel.check()?;
        self.counters.node();
        if charge >= self.limit {
            self.path.truncate(base);
            return Ok(false);
        }
        let key = (layer, set.clone());
        if self.opts.memo && self.memo.get(&key).is_some_and(|&c| c <= charge) {
            self.counters.memo_hit();
            self.path.truncate(base);
            return Ok(false);
        }
        let branches = self.branches(layer, &set);
        if self.fork && branches.len() > 1 {
            let mut template = self.clone();
            template.fork = false;
            template.path.clear();
            let hit = branches
                .into_par_iter()
                .find_map_first(|b| {
                    let mut worker = template.clone();
                    match worker.search(layer, b, charge + 1) {
                        Ok(true) => Some(Ok(worker.path)),
                        Ok(false) => None,
                        Err(e) => Some(Err(e)),
                    }
                })
                .transpose()?;
            if let Some(tail) = hit {
                self.path.extend(tail);
                return Ok(true);
            }
        } else {
            for b in branches {
                if self.search(layer, b, charge + 1)? {
                    return Ok(true);
                }
            }
        }
        if self.opts.memo {
            let entry = self.memo.entry(key).or_insert(usize::MAX);
            *entry = (*entry).min(charge);
        }
        self.path.truncate(base);
        Ok(false)
    }
}

/// Decides vertex cover and path contraction instances by the forward
/// framework. The property is tested on each layer's kernel during the
/// search; the repaired answer is verified on the original layers.
pub fn solve_forward(
    inst: &ProblemInstance,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    if !matches!(
        inst.kind,
        ProblemKind::VertexCover | ProblemKind::PathContraction
    ) {
        return Err(SolveError::Unsupported {
            algorithm: Algorithm::Forward,
            kind: inst.kind,
        });
    }
    if inst.q.is_some() {
        return Err(SolveError::LocalBudgetUnsupported(Algorithm::Forward));
    }
    let kernels: Vec<KernelResult> = (0..inst.tau())
        .map(|i| layer_kernel(inst.kind, inst.graph.layer(i), inst.k).expect("kind checked above"))
        .collect();
    let counters = Counters::default();
    if let Some((i, kr)) = kernels
        .iter()
        .enumerate()
        .find(|(_, kr)| kr.verdict == Verdict::NoInstance)
    {
        let why = match kr.trace.last() {
            Some(RuleApplication::Reject { reason }) => reason.clone(),
            _ => "kernel rejected".into(),
        };
        let answer = Answer::No {
            reason: Some(format!("layer {}: {why}", i + 1)),
        };
        return Ok(SolveResult {
            algorithm: Algorithm::Forward,
            answer,
            stats: counters.snapshot(),
        });
    }
    let universes: Vec<Vec<Element>> = kernels.iter().map(KernelResult::universe).collect();
    let mut searcher = Searcher {
        inst,
        opts,
        kernels: &kernels,
        universes: &universes,
        limit: inst.k + inst.ell,
        memo: HashMap::new(),
        counters,
        path: Vec::new(),
        fork: opts.threads > 1,
    };
    let found = if opts.threads > 1 {
        thread_pool(opts.threads)?.install(|| searcher.search(0, ElementSet::new(), 0))?
    } else {
        searcher.search(0, ElementSet::new(), 0)?
    };
    let stats = searcher.counters.snapshot();
    if !found {
        return Ok(SolveResult {
            algorithm: Algorithm::Forward,
            answer: Answer::No { reason: None },
            stats,
        });
    }
    let relaxed = SolutionSequence::new(std::mem::take(&mut searcher.path));
    let charge = relaxed.charge();
    let solution = repair_budget(&relaxed, inst.k, inst.ell)
        .map_err(|e| SolveError::Internal(e.to_string()))?;
    let report = verify_solution(inst, &solution)?;
    if !report.accepted {
        return Err(SolveError::Internal(format!(
            "repaired sequence rejected: {}",
            report.failures.join("; ")
        )));
    }
    let answer = Answer::Yes {
        solution,
        guesses: None,
        charge: Some(charge),
    };
    Ok(SolveResult {
        algorithm: Algorithm::Forward,
        answer,
        stats,
    })
}
