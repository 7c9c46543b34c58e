//! Backward search: sweep layers from last to first, carrying the running
//! set while it still works and otherwise repairing it by deleting single
//! elements or jumping to an enumerated minimal superset.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::element::ElementSet;
use crate::enumeration::{enumerate_supersets, supports, EnumerationRequest};
use crate::problems::{satisfies, ProblemInstance, SolutionSequence};
use crate::solve::{
    thread_pool, Algorithm, Answer, Counters, GuessSequence, SolveError, SolveOptions, SolveResult,
};

type MemoKey = (usize, ElementSet, Option<ElementSet>);

/// A pending branch at a failing layer.
#[derive(Clone)]
struct Branch {
    guess: (usize, usize),
    set: ElementSet,
}

#[derive(Clone)]
struct Searcher<'a> {
    inst: &'a ProblemInstance,
    opts: &'a SolveOptions,
    move_cap: usize,
    memo: HashMap<MemoKey, Vec<(usize, usize)>>,
    supersets: HashMap<(usize, ElementSet), Arc<Vec<ElementSet>>>,
    counters: Counters,
    /// Finalized sets, last layer first.
    path: Vec<ElementSet>,
    guesses: GuessSequence,
    /// Fan the next branching node out over the thread pool.
    fork: bool,
}

struct Found {
    path: Vec<ElementSet>,
    guesses: GuessSequence,
}

impl<'a> Searcher<'a> {
    fn satisfied(&self, layer: usize, set: &ElementSet) -> Result<bool, SolveError> {
        Ok(satisfies(
            self.inst.kind,
            self.inst.graph.layer(layer),
            set,
            &self.inst.attrs,
        )?)
    }

    fn supersets_of(
        &mut self,
        layer: usize,
        set: &ElementSet,
    ) -> Result<Arc<Vec<ElementSet>>, SolveError> {
        let key = (layer, set.clone());
        if let Some(hit) = self.supersets.get(&key) {
            return Ok(hit.clone());
        }
        let req = EnumerationRequest::new(
            self.inst.kind,
            self.inst.graph.layer(layer),
            self.inst.k,
            set,
        );
        let list = Arc::new(enumerate_supersets(&req)?);
        self.supersets.insert(key, list.clone());
        Ok(list)
    }

    fn dominated(&self, key: &MemoKey, moves: usize, spent: usize) -> bool {
        self.memo
            .get(key)
            .is_some_and(|failed| failed.iter().any(|&(m, s)| m <= moves && s <= spent))
    }

    fn record_failure(&mut self, key: MemoKey, moves: usize, spent: usize) {
        let entry = self.memo.entry(key).or_default();
        entry.retain(|&(m, s)| !(moves <= m && spent <= s));
        entry.push((moves, spent));
    }

    fn branches(
        &mut self,
        layer: usize,
        set: &ElementSet,
        moves: usize,
    ) -> Result<Vec<Branch>, SolveError> {
        let mut out = Vec::new();
        for (y, sup) in self.supersets_of(layer, set)?.iter().enumerate() {
            out.push(Branch {
                guess: (0, y + 1),
                set: sup.clone(),
            });
        }
        // a deletion never repairs a monotone property, so it needs a later move
        let deletion_room = if self.inst.kind.is_monotone() {
            moves + 1 < self.move_cap
        } else {
            true
        };
        if deletion_room {
            for (x, element) in set.iter().enumerate() {
                let mut smaller = set.clone();
                smaller.remove(element);
                out.push(Branch {
                    guess: (x + 1, 0),
                    set: smaller,
                });
            }
        }
        Ok(out)
    }

    /// Explores from layer `layer` with running set `set`. On success the
    /// finalized sets are in `self.path`.
    fn search(
        &mut self,
        mut layer: usize,
        set: ElementSet,
        mut next: Option<ElementSet>,
        moves: usize,
        mut spent: usize,
    ) -> Result<bool, SolveError> {
        let base = self.path.len();
        while self.satisfied(layer, &set)? {
            let cost = next.as_ref().map_or(0, |n| n.difference(&set).count());
            spent += cost;
            if spent > self.inst.ell {
                self.path.truncate(base);
                return Ok(false);
            }
            self.path.push(set.clone());
            if layer == 0 {
                return Ok(true);
            }
            layer -= 1;
            next = Some(set.clone());
        }
        self.opts.cancel.check()?;
        self.counters.node();
        if moves >= self.move_cap {
            self.path.truncate(base);
            return Ok(false);
        }
        let key = (layer, set.clone(), next.clone());
        if self.opts.memo && self.dominated(&key, moves, spent) {
            self.counters.memo_hit();
            self.path.truncate(base);
            return Ok(false);
        }
        let branches = self.branches(layer, &set, moves)?;
        if self.fork && branches.len() > 1 {
            if let Some(found) = self.fan_out(layer, &next, moves, spent, branches)? {
                self.path.extend(found.path);
                self.guesses = found.guesses;
                return Ok(true);
            }
        } else {
            for b in branches {
                self.guesses.pairs.push(b.guess);
                self.guesses.layers.push(layer + 1);
                if self.search(layer, b.set, next.clone(), moves + 1, spent)? {
                    return Ok(true);
                }
                self.guesses.pairs.pop();
                self.guesses.layers.pop();
            }
        }
        if self.opts.memo {
            self.record_failure(key, moves, spent);
        }
        self.path.truncate(base);
        Ok(false)
    }

    /// Tries the branches on worker clones; the first branch in order that
    /// succeeds wins, so the answer matches the sequential one.
    fn fan_out(
        &mut self,
        layer: usize,
        next: &Option<ElementSet>,
        moves: usize,
        spent: usize,
        branches: Vec<Branch>,
    ) -> Result<Option<Found>, SolveError> {
        let mut template = self.clone();
        template.fork = false;
        template.path.clear();
        let hit = branches.into_par_iter().find_map_first(|b| {
            let mut worker = template.clone();
            worker.guesses.pairs.push(b.guess);
            worker.guesses.layers.push(layer + 1);
            match worker.search(layer, b.set, next.clone(), moves + 1, spent) {
                Ok(true) => Some(Ok(Found {
                    path: worker.path,
                    guesses: worker.guesses,
                })),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        });
        hit.transpose()
    }
}

/// Decides the instance by the backward framework. Moves are capped at
/// `2·ell + k`; insertions are charged when a layer is finalized.
pub fn solve_backward(
    inst: &ProblemInstance,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    if !supports(inst.kind) {
        return Err(SolveError::Unsupported {
            algorithm: Algorithm::Backward,
            kind: inst.kind,
        });
    }
    if inst.q.is_some() {
        return Err(SolveError::LocalBudgetUnsupported(Algorithm::Backward));
    }
    let mut searcher = Searcher {
        inst,
        opts,
        move_cap: 2 * inst.ell + inst.k,
        memo: HashMap::new(),
        supersets: HashMap::new(),
        counters: Counters::default(),
        path: Vec::new(),
        guesses: GuessSequence::default(),
        fork: opts.threads > 1,
    };
    let last = inst.tau() - 1;
    let found = if opts.threads > 1 {
        thread_pool(opts.threads)?
            .install(|| searcher.search(last, ElementSet::new(), None, 0, 0))?
    } else {
        searcher.search(last, ElementSet::new(), None, 0, 0)?
    };
    let answer = if found {
        let mut sets = std::mem::take(&mut searcher.path);
        sets.reverse();
        Answer::Yes {
            solution: SolutionSequence::new(sets),
            guesses: Some(searcher.guesses.clone()),
            charge: None,
        }
    } else {
        Answer::No { reason: None }
    };
    Ok(SolveResult {
        algorithm: Algorithm::Backward,
        answer,
        stats: searcher.counters.snapshot(),
    })
}
