//! Enumeration of minimal solutions that contain a forced set.

use itertools::Itertools;
use thiserror::Error;

use crate::element::{Element, ElementSet, ModOp};
use crate::graph::{Edge, Layer};
use crate::kernels::{layer_kernel, Verdict};
use crate::problems::{
    apply_modifications, find_induced_p3, satisfies, ProblemAttrs, ProblemError, ProblemKind,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("{0} has no superset enumerator")]
    Unsupported(ProblemKind),
    #[error("forced set has {forced} elements but k = {k}")]
    ForcedTooLarge { forced: usize, k: usize },
    #[error("more than {cap} candidate sets")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Ask for every minimal solution `S ⊇ forced` of the layer with `|S| ≤ k`.
#[derive(Debug, Clone)]
pub struct EnumerationRequest<'a> {
    pub kind: ProblemKind,
    pub layer: Layer<'a>,
    pub k: usize,
    pub forced: &'a ElementSet,
    /// Upper bound on the number of sets returned; `None` picks a per-kind default.
    pub cap: Option<usize>,
}

impl<'a> EnumerationRequest<'a> {
    pub fn new(
        kind: ProblemKind,
        layer: Layer<'a>,
        k: usize,
        forced: &'a ElementSet,
    ) -> EnumerationRequest<'a> {
        EnumerationRequest {
            kind,
            layer,
            k,
            forced,
            cap: None,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        self
    }
}

pub fn supports(kind: ProblemKind) -> bool {
    matches!(
        kind,
        ProblemKind::VertexCover
            | ProblemKind::PathContraction
            | ProblemKind::ClusterEditing
            | ProblemKind::ClusterEdgeDeletion
    )
}

fn saturating_pow(base: usize, exp: usize) -> usize {
    (0..exp).fold(1usize, |acc, _| acc.saturating_mul(base))
}

/// Canonically ordered list containing every minimal solution above the
/// forced set. Each returned set solves the layer, contains the forced set
/// and has at most `k` elements; no returned set strictly contains another.
pub fn enumerate_supersets(
    req: &EnumerationRequest<'_>,
) -> Result<Vec<ElementSet>, EnumerationError> {
    if !supports(req.kind) {
        return Err(EnumerationError::Unsupported(req.kind));
    }
    if req.forced.len() > req.k {
        return Err(EnumerationError::ForcedTooLarge {
            forced: req.forced.len(),
            k: req.k,
        });
    }
    // rejects elements of the wrong kind before any search
    satisfies(req.kind, req.layer, req.forced, &ProblemAttrs::default())?;
    let mut found = match req.kind {
        ProblemKind::ClusterEditing | ProblemKind::ClusterEdgeDeletion => conflict_tree(req)?,
        _ => kernel_subsets(req)?,
    };
    found.sort();
    found.dedup();
    let minimal: Vec<ElementSet> = found
        .iter()
        .filter(|s| !found.iter().any(|o| o.len() < s.len() && o.is_subset(s)))
        .cloned()
        .collect();
    Ok(minimal)
}

/// Monotone minimality: no single free element can be dropped. Exact for
/// monotone properties, where any satisfying subset extends to one that
/// misses exactly one element.
fn is_minimal_monotone(
    kind: ProblemKind,
    layer: Layer<'_>,
    set: &ElementSet,
    forced: &ElementSet,
) -> bool {
    let attrs = ProblemAttrs::default();
    set.difference(forced).all(|x| {
        let mut smaller = set.clone();
        smaller.remove(x);
        !satisfies(kind, layer, &smaller, &attrs).unwrap_or(false)
    })
}

/// Every `X ⊆ kernel \ F` with `|X ∪ F| ≤ k`, kept when `X ∪ F` is a
/// minimal solution of the original layer.
fn kernel_subsets(req: &EnumerationRequest<'_>) -> Result<Vec<ElementSet>, EnumerationError> {
    let kernel = layer_kernel(req.kind, req.layer, req.k)
        .map_err(|_| EnumerationError::Unsupported(req.kind))?;
    if kernel.verdict == Verdict::NoInstance {
        return Ok(Vec::new());
    }
    let pool: Vec<Element> = kernel
        .universe()
        .into_iter()
        .filter(|e| !req.forced.contains(e))
        .collect();
    let cap = req
        .cap
        .unwrap_or_else(|| saturating_pow(2, pool.len().min(62)));
    let room = req.k - req.forced.len();
    let attrs = ProblemAttrs::default();
    let mut out = Vec::new();
    for size in 0..=room.min(pool.len()) {
        for chosen in (0..pool.len()).combinations(size) {
            let mut candidate = req.forced.clone();
            candidate.extend(chosen.iter().map(|&i| pool[i]));
            if satisfies(req.kind, req.layer, &candidate, &attrs)?
                && is_minimal_monotone(req.kind, req.layer, &candidate, req.forced)
            {
                out.push(candidate);
                if out.len() > cap {
                    return Err(EnumerationError::CapExceeded { cap });
                }
            }
        }
    }
    Ok(out)
}

/// Branching on induced `P3`s `u - v - w`: delete `uv`, delete `vw`, or
/// (editing only) add `uw`. Deleting a pair whose addition is already
/// chosen would have no effect and is skipped.
fn conflict_tree(req: &EnumerationRequest<'_>) -> Result<Vec<ElementSet>, EnumerationError> {
    let base = if req.kind == ProblemKind::ClusterEditing {
        3
    } else {
        2
    };
    let cap = req.cap.unwrap_or_else(|| saturating_pow(base, req.k));
    let mut out = Vec::new();
    let mut current = req.forced.clone();
    branch(req, &mut current, &mut out, cap)?;
    Ok(out)
}

fn branch(
    req: &EnumerationRequest<'_>,
    current: &mut ElementSet,
    out: &mut Vec<ElementSet>,
    cap: usize,
) -> Result<(), EnumerationError> {
    let edited = apply_modifications(req.layer, current);
    let Some((u, v, w)) = find_induced_p3(&edited) else {
        out.push(current.clone());
        if out.len() > cap {
            return Err(EnumerationError::CapExceeded { cap });
        }
        return Ok(());
    };
    if current.len() >= req.k {
        return Ok(());
    }
    let mut options = Vec::with_capacity(3);
    for pair in [Edge::new(u, v), Edge::new(v, w)] {
        if req.layer.contains(pair) && !current.contains(&Element::Mod(pair, ModOp::Add)) {
            options.push(Element::Mod(pair, ModOp::Del));
        }
    }
    if req.kind == ProblemKind::ClusterEditing {
        options.push(Element::Mod(Edge::new(u, w), ModOp::Add));
    }
    for element in options {
        current.insert(element);
        let result = branch(req, current, out, cap);
        current.remove(&element);
        result?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::StaticGraph;

    fn run(kind: ProblemKind, g: &StaticGraph, k: usize, forced: &[Element]) -> Vec<ElementSet> {
        let forced: ElementSet = forced.iter().copied().collect();
        enumerate_supersets(&EnumerationRequest::new(kind, g.view(), k, &forced)).unwrap()
    }

    fn sets(items: &[&[Element]]) -> Vec<ElementSet> {
        items.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn vc_single_edge() {
        let g = StaticGraph::path(2);
        assert_eq!(
            run(ProblemKind::VertexCover, &g, 1, &[]),
            sets(&[&[Element::Vertex(0)], &[Element::Vertex(1)]])
        );
        assert_eq!(
            run(ProblemKind::VertexCover, &g, 1, &[Element::Vertex(1)]),
            sets(&[&[Element::Vertex(1)]])
        );
        assert!(run(ProblemKind::VertexCover, &StaticGraph::complete(3), 1, &[]).is_empty());
    }

    #[test]
    fn ced_on_p3() {
        let g = StaticGraph::path(3);
        assert_eq!(
            run(ProblemKind::ClusterEdgeDeletion, &g, 1, &[]),
            sets(&[&[Element::del(0, 1)], &[Element::del(1, 2)]])
        );
        assert_eq!(
            run(ProblemKind::ClusterEditing, &g, 1, &[]),
            sets(&[
                &[Element::del(0, 1)],
                &[Element::add(0, 2)],
                &[Element::del(1, 2)]
            ])
        );
    }

    #[test]
    fn editing_may_undo_a_forced_deletion() {
        let g = StaticGraph::complete(3);
        let out = run(ProblemKind::ClusterEditing, &g, 2, &[Element::del(0, 2)]);
        assert!(out.contains(
            &[Element::del(0, 2), Element::add(0, 2)]
                .into_iter()
                .collect()
        ));
    }

    #[test]
    fn errors() {
        let g = StaticGraph::path(2);
        let forced: ElementSet = [Element::Vertex(0), Element::Vertex(1)]
            .into_iter()
            .collect();
        let req = EnumerationRequest::new(ProblemKind::VertexCover, g.view(), 1, &forced);
        assert!(matches!(
            enumerate_supersets(&req),
            Err(EnumerationError::ForcedTooLarge { .. })
        ));
        let empty = ElementSet::new();
        let req = EnumerationRequest::new(ProblemKind::DominatingSet, g.view(), 1, &empty);
        assert!(matches!(
            enumerate_supersets(&req),
            Err(EnumerationError::Unsupported(_))
        ));
        let p3 = StaticGraph::path(3);
        let req =
            EnumerationRequest::new(ProblemKind::ClusterEditing, p3.view(), 1, &empty).with_cap(1);
        assert!(matches!(
            enumerate_supersets(&req),
            Err(EnumerationError::CapExceeded { cap: 1 })
        ));
    }

    #[test]
    fn pc_enumeration_on_triangle() {
        let out = run(
            ProblemKind::PathContraction,
            &StaticGraph::complete(3),
            1,
            &[],
        );
        assert_eq!(out.len(), 3);
    }
}
