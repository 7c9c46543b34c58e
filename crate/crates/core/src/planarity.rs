//! Planarity testing. Each biconnected block is embedded path by path
//! (Demoucron, Malgrange and Pertuiset); a block fails as soon as some
//! fragment fits no face.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::{Edge, LocalIds};

/// Whether the graph formed by `edges` is planar.
pub fn is_planar(edges: &[Edge]) -> bool {
    let ids = LocalIds::new(edges.iter().flat_map(|e| [e.u(), e.v()]).collect());
    let local: BTreeSet<(usize, usize)> = edges
        .iter()
        .map(|e| {
            (
                ids.get(e.u()).unwrap() as usize,
                ids.get(e.v()).unwrap() as usize,
            )
        })
        .collect();
    let n = ids.len();
    if n >= 3 && local.len() > 3 * n - 6 {
        return false;
    }
    let local: Vec<(usize, usize)> = local.into_iter().collect();
    blocks(n, &local)
        .iter()
        .all(|block| block.len() < 3 || block_is_planar(block))
}

/// Edge lists of the biconnected components.
fn blocks(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (id, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, id));
        adj[b].push((a, id));
    }
    let unseen = usize::MAX;
    let mut disc = vec![unseen; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != unseen {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, edge to parent, next neighbour index)
        let mut frames = vec![(root, usize::MAX, 0usize)];
        while let Some(frame) = frames.last_mut() {
            let (v, parent_edge, i) = *frame;
            if i < adj[v].len() {
                frame.2 += 1;
                let (w, id) = adj[v][i];
                if id == parent_edge {
                    continue;
                }
                if disc[w] == unseen {
                    edge_stack.push(id);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, id, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(id);
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(u, _, _)) = frames.last() {
                low[u] = low[u].min(low[v]);
                if low[v] >= disc[u] {
                    let mut block = Vec::new();
                    while let Some(id) = edge_stack.pop() {
                        block.push(edges[id]);
                        if id == parent_edge {
                            break;
                        }
                    }
                    out.push(block);
                }
            }
        }
    }
    out
}

struct Fragment {
    attachments: Vec<usize>,
    /// Vertices outside the embedded part; empty for a single chord.
    inner: Vec<usize>,
}

fn block_is_planar(block: &[(usize, usize)]) -> bool {
    let ids = LocalIds::new(
        block
            .iter()
            .flat_map(|&(a, b)| [a as u32, b as u32])
            .collect(),
    );
    let n = ids.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in block {
        let (a, b) = (
            ids.get(a as u32).unwrap() as usize,
            ids.get(b as u32).unwrap() as usize,
        );
        adj[a].push(b);
        adj[b].push(a);
    }
    if block.len() > 3 * n - 6 {
        return false;
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));

    // initial cycle: the edge 0-x closed by a shortest x..0 path avoiding it
    let x = adj[0][0];
    let Some(path) = bfs_path(&adj, x, |v| v == 0, |a, b| key(a, b) != key(0, x)) else {
        return true;
    };
    let mut embedded = vec![false; n];
    let mut embedded_edges = BTreeSet::new();
    for w in path.windows(2) {
        embedded_edges.insert(key(w[0], w[1]));
    }
    embedded_edges.insert(key(0, x));
    for &v in &path {
        embedded[v] = true;
    }
    let mut faces = vec![path.clone(), path];

    loop {
        let fragments = fragments(&adj, &embedded, &embedded_edges);
        if fragments.is_empty() {
            return true;
        }
        let mut best: Option<(usize, usize, usize)> = None; // (count, fragment, face)
        for (fi, frag) in fragments.iter().enumerate() {
            let fits: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attachments.iter().all(|a| faces[f].contains(a)))
                .collect();
            match fits.first() {
                None => return false,
                Some(&face) => {
                    if best.is_none_or(|(c, _, _)| fits.len() < c) {
                        best = Some((fits.len(), fi, face));
                    }
                }
            }
        }
        let (_, fi, face) = best.expect("at least one fragment");
        let frag = &fragments[fi];
        let route = if frag.inner.is_empty() {
            frag.attachments.clone()
        } else {
            fragment_path(&adj, &embedded, frag)
        };
        for w in route.windows(2) {
            embedded_edges.insert(key(w[0], w[1]));
        }
        for &v in &route {
            embedded[v] = true;
        }
        let old = faces.swap_remove(face);
        let (one, two) = split_face(&old, &route);
        faces.push(one);
        faces.push(two);
    }
}

/// Shortest path from `start` to the first vertex satisfying `goal`, using
/// edges allowed by `usable`.
fn bfs_path(
    adj: &[Vec<usize>],
    start: usize,
    goal: impl Fn(usize) -> bool,
    usable: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if goal(v) && v != start {
            let mut out = vec![v];
            let mut cur = v;
            while cur != start {
                cur = parent[cur];
                out.push(cur);
            }
            out.reverse();
            return Some(out);
        }
        for &w in &adj[v] {
            if parent[w] == usize::MAX && usable(v, w) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

fn fragments(
    adj: &[Vec<usize>],
    embedded: &[bool],
    embedded_edges: &BTreeSet<(usize, usize)>,
) -> Vec<Fragment> {
    let n = adj.len();
    let mut out = Vec::new();
    for a in 0..n {
        for &b in &adj[a] {
            if a < b && embedded[a] && embedded[b] && !embedded_edges.contains(&(a, b)) {
                out.push(Fragment {
                    attachments: vec![a, b],
                    inner: Vec::new(),
                });
            }
        }
    }
    let mut seen = vec![false; n];
    for start in 0..n {
        if embedded[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut inner = vec![start];
        let mut attachments = BTreeSet::new();
        let mut i = 0;
        while i < inner.len() {
            let v = inner[i];
            i += 1;
            for &w in &adj[v] {
                if embedded[w] {
                    attachments.insert(w);
                } else if !seen[w] {
                    seen[w] = true;
                    inner.push(w);
                }
            }
        }
        out.push(Fragment {
            attachments: attachments.into_iter().collect(),
            inner,
        });
    }
    out
}

/// A path through the fragment joining two distinct attachments.
fn fragment_path(adj: &[Vec<usize>], embedded: &[bool], frag: &Fragment) -> Vec<usize> {
    let a = frag.attachments[0];
    let first = *adj[a]
        .iter()
        .find(|w| frag.inner.contains(w))
        .expect("attachment touches the fragment");
    let leads_out = |v: usize| adj[v].iter().any(|&w| w != a && embedded[w]);
    let mut inner_path = if leads_out(first) {
        vec![first]
    } else {
        bfs_path(adj, first, leads_out, |_, w| !embedded[w]).expect("block has a second attachment")
    };
    let end = *inner_path.last().unwrap();
    let b = *adj[end].iter().find(|&&w| w != a && embedded[w]).unwrap();
    let mut route = vec![a];
    route.append(&mut inner_path);
    route.push(b);
    route
}

/// Splits a face (cyclic vertex list) along a path between two of its vertices.
fn split_face(face: &[usize], route: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let len = face.len();
    let (a, b) = (route[0], route[route.len() - 1]);
    let ia = face.iter().position(|&v| v == a).unwrap();
    let ib = face.iter().position(|&v| v == b).unwrap();
    let walk = |from: usize, to: usize| {
        let mut out = vec![face[from]];
        let mut i = from;
        while i != to {
            i = (i + 1) % len;
            out.push(face[i]);
        }
        out
    };
    let interior = &route[1..route.len() - 1];
    let mut one = walk(ia, ib);
    one.extend(interior.iter().rev());
    let mut two = walk(ib, ia);
    two.extend(interior.iter());
    (one, two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::StaticGraph;

    fn pairs(list: &[(u32, u32)]) -> Vec<Edge> {
        list.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    fn k33() -> Vec<Edge> {
        let mut out = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                out.push(Edge::new(a, b));
            }
        }
        out
    }

    #[test]
    fn classic_graphs() {
        assert!(is_planar(StaticGraph::complete(4).edges()));
        assert!(!is_planar(StaticGraph::complete(5).edges()));
        assert!(!is_planar(&k33()));
        let mut k5_minus = StaticGraph::complete(5).into_edges();
        k5_minus.pop();
        assert!(is_planar(&k5_minus));
        let petersen = pairs(&[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (0, 4),
            (0, 5),
            (1, 6),
            (2, 7),
            (3, 8),
            (4, 9),
            (5, 7),
            (7, 9),
            (9, 6),
            (6, 8),
            (8, 5),
        ]);
        assert!(!is_planar(&petersen));
        let cube = pairs(&[
            (0, 1),
            (1, 2),
            (2, 3),
            (0, 3),
            (4, 5),
            (5, 6),
            (6, 7),
            (4, 7),
            (0, 4),
            (1, 5),
            (2, 6),
            (3, 7),
        ]);
        assert!(is_planar(&cube));
        let mut octahedron = StaticGraph::complete(6).into_edges();
        octahedron.retain(|e| !matches!(e.endpoints(), (0, 1) | (2, 3) | (4, 5)));
        assert!(is_planar(&octahedron));
        assert!(is_planar(&[]));
    }

    #[test]
    fn subdivided_k33_with_extras() {
        // every K3,3 edge subdivided once, plus a planar pendant block
        let mut edges = Vec::new();
        let mut next = 6;
        for e in k33() {
            edges.push(Edge::new(e.u(), next));
            edges.push(Edge::new(next, e.v()));
            next += 1;
        }
        edges.extend(pairs(&[(0, 30), (30, 31), (31, 0)]));
        assert!(!is_planar(&edges));
    }

    #[test]
    fn blocks_split_at_cut_vertices() {
        // two triangles sharing vertex 2 and a bridge
        let g = pairs(&[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5)]);
        let local: Vec<(usize, usize)> =
            g.iter().map(|e| (e.u() as usize, e.v() as usize)).collect();
        let mut sizes: Vec<usize> = blocks(6, &local).iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 3]);
    }

    fn triangulated_grid(w: u32, h: u32) -> Vec<Edge> {
        let id = |x: u32, y: u32| y * w + x;
        let mut out = Vec::new();
        for y in 0..h {
            for x in 0..w {
                if x + 1 < w {
                    out.push(Edge::new(id(x, y), id(x + 1, y)));
                }
                if y + 1 < h {
                    out.push(Edge::new(id(x, y), id(x, y + 1)));
                }
                if x + 1 < w && y + 1 < h {
                    out.push(Edge::new(id(x, y), id(x + 1, y + 1)));
                }
            }
        }
        out
    }

    #[test]
    fn random_grid_subgraphs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        let grid = triangulated_grid(5, 5);
        for _ in 0..200 {
            let sub: Vec<Edge> = grid.iter().copied().filter(|_| rng.gen_bool(0.8)).collect();
            assert!(is_planar(&sub));
            // a disjoint subdivided K3,3 spoils any of them
            let mut spoiled = sub.clone();
            let mut next = 100;
            for e in k33() {
                spoiled.push(Edge::new(e.u() + 60, next));
                spoiled.push(Edge::new(next, e.v() + 60));
                next += 1;
            }
            assert!(!is_planar(&spoiled));
        }
        assert!(is_planar(&grid));
    }
}
