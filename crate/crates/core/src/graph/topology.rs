use std::collections::{BTreeMap, BTreeSet};

use super::{Edge, GraphError, MetricGraph};

/// Replaces every pair of distinct edges meeting at a degree-two vertex by a
/// single edge of the summed length, until no such vertex remains.
///
/// Vertices are eliminated largest identifier first, so a pure cycle collapses
/// onto a loop at its smallest identifier. The merged edge is named
/// `"{e1}+{e2}"`, runs from the far end of the earlier-listed edge to the far
/// end of the later one and takes the earlier edge's position.
pub fn suppress_degree_two(g: &MetricGraph) -> MetricGraph {
    let (mut vertices, mut edges, dirichlet) = g.clone().into_parts();
    loop {
        let candidate = vertices
            .iter()
            .filter(|v| {
                let incident: Vec<&Edge> = edges
                    .iter()
                    .filter(|e| e.from == **v || e.to == **v)
                    .collect();
                incident.len() == 2 && incident.iter().all(|e| !e.is_loop())
            })
            .max()
            .cloned();
        let Some(v) = candidate else { break };
        let mut positions = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.from == v || e.to == v)
            .map(|(i, _)| i);
        let (i1, i2) = (positions.next().unwrap(), positions.next().unwrap());
        let far = |e: &Edge| {
            if e.from == v {
                e.to.clone()
            } else {
                e.from.clone()
            }
        };
        let (e1, e2) = (&edges[i1], &edges[i2]);
        let merged = Edge::new(
            format!("{}+{}", e1.id, e2.id),
            far(e1),
            far(e2),
            e1.length.concat(e2.length),
        );
        edges[i1] = merged;
        edges.remove(i2);
        vertices.retain(|x| *x != v);
    }
    MetricGraph::new_possibly_disconnected(vertices, edges, dirichlet)
        .expect("degree-two suppression preserves validity")
}

/// Indices (into `g.edges()`) of all bridges, ascending. Loops and parallel
/// edges are never bridges.
pub fn bridges(g: &MetricGraph) -> Vec<usize> {
    let index = g.vertex_index();
    let n = g.vertices().len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (ei, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        let (a, b) = (index[e.from.as_str()], index[e.to.as_str()]);
        adj[a].push((b, ei));
        adj[b].push((a, ei));
    }

    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, edge used to enter it, next neighbour position)
        let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(top) = stack.last_mut() {
            let (u, parent_edge) = (top.0, top.1);
            if top.2 < adj[u].len() {
                let (w, ei) = adj[u][top.2];
                top.2 += 1;
                if Some(ei) == parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, Some(ei), 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let (Some(ei), Some(&(p, _, _))) = (parent_edge, stack.last()) {
                    low[p] = low[p].min(low[u]);
                    if low[u] > disc[p] {
                        out.push(ei);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// The tree obtained by contracting every cycle of a graph to a vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractedTree {
    pub tree: MetricGraph,
    /// Vertices of degree at most one in `tree`. A single-vertex tree counts
    /// as one pendant.
    pub pendant_count: usize,
}

/// Contracts each maximal 2-edge-connected component to one vertex, named
/// after the smallest identifier it contains. The bridges become the tree's
/// edges.
pub fn contract_cycles(g: &MetricGraph) -> ContractedTree {
    let bridge_set: BTreeSet<usize> = bridges(g).into_iter().collect();
    let index = g.vertex_index();
    let n = g.vertices().len();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (ei, e) in g.edges().iter().enumerate() {
        if !bridge_set.contains(&ei) {
            let (a, b) = (
                find(&mut parent, index[e.from.as_str()]),
                find(&mut parent, index[e.to.as_str()]),
            );
            parent[a] = b;
        }
    }

    let mut name: BTreeMap<usize, &String> = BTreeMap::new();
    for (i, v) in g.vertices().iter().enumerate() {
        let r = find(&mut parent, i);
        name.entry(r)
            .and_modify(|cur| {
                if v < *cur {
                    *cur = v;
                }
            })
            .or_insert(v);
    }
    let mut rep = |v: &str| name[&find(&mut parent, index[v])].clone();

    let mut vertices: Vec<String> = Vec::new();
    for v in g.vertices() {
        let r = rep(v);
        if !vertices.contains(&r) {
            vertices.push(r);
        }
    }
    let edges: Vec<Edge> = bridge_set
        .iter()
        .map(|&ei| {
            let e = &g.edges()[ei];
            Edge::new(e.id.clone(), rep(&e.from), rep(&e.to), e.length)
        })
        .collect();
    let tree =
        MetricGraph::new_possibly_disconnected(vertices, edges, g.dirichlet().iter().cloned())
            .expect("contraction keeps Dirichlet pendants pendant");
    let pendant_count = if tree.vertices().len() == 1 {
        1
    } else {
        tree.degrees().values().filter(|&&d| d <= 1).count()
    };
    ContractedTree {
        tree,
        pendant_count,
    }
}

/// True iff degree-two suppression reduces the graph to a single loop.
pub fn is_loop_graph(g: &MetricGraph) -> bool {
    let s = suppress_degree_two(g);
    s.edges().len() == 1 && s.edges()[0].is_loop()
}

/// True iff degree-two suppression reduces the graph to a single interval.
pub fn is_interval(g: &MetricGraph) -> bool {
    let s = suppress_degree_two(g);
    s.edges().len() == 1 && !s.edges()[0].is_loop()
}

/// Lasso-tree test on the suppressed graph: the graph left after deleting
/// every loop is a tree and every loop sits at a vertex of degree three.
/// Loop graphs are not lasso trees.
pub fn is_lasso_tree(g: &MetricGraph) -> bool {
    let s = suppress_degree_two(g);
    if is_loop_graph(&s) {
        return false;
    }
    let degree = s.degrees();
    let loops: Vec<&Edge> = s.edges().iter().filter(|e| e.is_loop()).collect();
    if loops.iter().any(|e| degree[e.from.as_str()] != 3) {
        return false;
    }
    let non_loop = s.edges().len() - loops.len();
    non_loop + s.component_count() == s.vertices().len()
}

/// Disjoint union with identifiers of the i-th graph prefixed by `g{i}.`.
/// The result may be disconnected.
pub fn disjoint_union(gs: &[MetricGraph]) -> Result<MetricGraph, GraphError> {
    if gs.is_empty() {
        return Err(GraphError::EmptyUnion);
    }
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut dirichlet = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        let (v, e, d) = g.prefixed(&format!("g{i}.")).into_parts();
        vertices.extend(v);
        edges.extend(e);
        dirichlet.extend(d);
    }
    MetricGraph::new_possibly_disconnected(vertices, edges, dirichlet)
}
