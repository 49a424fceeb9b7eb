//! Weighted undirected global min-cut: cut values, the exact minimum,
//! enumeration of all cuts under a weight budget, and the inclusion-minimal
//! optimal solutions.
//!
//! A solution is a vertex set X with ∅ ⊊ X ⊊ V; a cut corresponds to the
//! two solutions X and V∖X, and enumeration reports both. All lists are in
//! canonical order: cardinality first, then mask value.

use crate::subset::{self, canonical_cmp};
use crate::value::Value;
use crate::{Error, Result};

/// A weighted undirected graph. Construction normalises the edge list:
/// parallel edges are merged by weight addition, zero-weight edges are
/// dropped, and infinite-weight edges are eliminated by identifying their
/// endpoints (the merge map is retained for callers).
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    original_n: usize,
    merged_n: usize,
    /// original vertex -> merged vertex
    vertex_map: Vec<usize>,
    /// merged, finite, positive, u < v
    edges: Vec<(usize, usize, Value)>,
    /// input edges after parallel-merging only (may contain ∞)
    original_edges: Vec<(usize, usize, Value)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize, Value)]) -> Result<Self> {
        if n < 1 {
            return Err(Error::argument("graph needs at least one vertex"));
        }
        if n > 63 {
            return Err(Error::resource("graphs are limited to 63 vertices"));
        }
        // Merge parallel edges (∞ absorbs), reject loops and bad weights.
        let mut acc: std::collections::BTreeMap<(usize, usize), Value> =
            std::collections::BTreeMap::new();
        for (u, v, w) in edges {
            if *u >= n || *v >= n {
                return Err(Error::argument("edge endpoint out of range"));
            }
            if u == v {
                return Err(Error::argument("self-loops are not allowed"));
            }
            if *w < Value::zero() {
                return Err(Error::argument("edge weights must be non-negative"));
            }
            let key = (*u.min(v), *u.max(v));
            let entry = acc.entry(key).or_insert_with(Value::zero);
            *entry += *w;
        }
        let original_edges: Vec<(usize, usize, Value)> = acc
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|((u, v), w)| (*u, *v, *w))
            .collect();

        // Contract infinite edges with a union-find.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for (u, v, w) in &original_edges {
            if w.is_infinite() {
                let (a, b) = (find(&mut parent, *u), find(&mut parent, *v));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut vertex_map = vec![usize::MAX; n];
        let mut merged_n = 0;
        for v in 0..n {
            let root = find(&mut parent, v);
            if vertex_map[root] == usize::MAX {
                vertex_map[root] = merged_n;
                merged_n += 1;
            }
            vertex_map[v] = vertex_map[root];
        }
        let mut merged: std::collections::BTreeMap<(usize, usize), Value> =
            std::collections::BTreeMap::new();
        for (u, v, w) in &original_edges {
            if w.is_infinite() {
                continue;
            }
            let (a, b) = (vertex_map[*u], vertex_map[*v]);
            if a == b {
                continue; // swallowed by a contraction
            }
            let key = (a.min(b), a.max(b));
            let entry = merged.entry(key).or_insert_with(Value::zero);
            *entry += *w;
        }
        Ok(Graph {
            original_n: n,
            merged_n,
            vertex_map,
            edges: merged
                .into_iter()
                .map(|((u, v), w)| (u, v, w))
                .collect(),
            original_edges,
        })
    }

    /// Vertex count after contracting infinite edges.
    pub fn vertex_count(&self) -> usize {
        self.merged_n
    }

    pub fn original_vertex_count(&self) -> usize {
        self.original_n
    }

    /// Maps each original vertex to its merged vertex.
    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// Normalised edges over merged vertices: finite, positive, u < v.
    pub fn edges(&self) -> &[(usize, usize, Value)] {
        &self.edges
    }

    /// Input edges after parallel-merging, before contraction.
    pub fn original_edges(&self) -> &[(usize, usize, Value)] {
        &self.original_edges
    }

    /// Sum of the weights of the edges crossing X; g(∅) = g(V) = 0.
    pub fn cut_value(&self, x: u64) -> Value {
        let mut total = Value::zero();
        for (u, v, w) in &self.edges {
            if subset::contains(x, *u) != subset::contains(x, *v) {
                total += *w;
            }
        }
        total
    }

    /// Connected components (positive edges only), canonically sorted.
    pub fn components(&self) -> Vec<u64> {
        let n = self.merged_n;
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut mask = 0u64;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                mask |= 1 << v;
                for (a, b, _) in &self.edges {
                    let other = if *a == v {
                        *b
                    } else if *b == v {
                        *a
                    } else {
                        continue;
                    };
                    if !seen[other] {
                        seen[other] = true;
                        stack.push(other);
                    }
                }
            }
            comps.push(mask);
        }
        subset::sort_canonical(&mut comps);
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    fn adjacency(&self) -> Vec<Vec<Value>> {
        let n = self.merged_n;
        let mut adj = vec![vec![Value::zero(); n]; n];
        for (u, v, w) in &self.edges {
            adj[*u][*v] += *w;
            adj[*v][*u] += *w;
        }
        adj
    }
}

/// One solution: the vertex set and its cut value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSolution {
    pub vertices: u64,
    pub value: Value,
}

/// Exact global minimum cut value by deterministic maximum-adjacency
/// contraction (ties broken towards the smallest vertex index).
fn min_cut_value(graph: &Graph) -> Value {
    let n = graph.vertex_count();
    debug_assert!(n >= 2);
    let mut adj = graph.adjacency();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best = Value::infinity();
    while alive.len() > 1 {
        // Maximum-adjacency ordering of the surviving supervertices.
        let mut in_a = vec![false; n];
        let mut weight_to_a = vec![Value::zero(); n];
        let mut order = Vec::with_capacity(alive.len());
        for _ in 0..alive.len() {
            let pick = *alive
                .iter()
                .filter(|v| !in_a[**v])
                .max_by(|a, b| {
                    weight_to_a[**a]
                        .cmp(&weight_to_a[**b])
                        .then(b.cmp(a)) // prefer the smaller index on ties
                })
                .expect("some vertex remains");
            in_a[pick] = true;
            order.push(pick);
            for v in &alive {
                if !in_a[*v] {
                    weight_to_a[*v] += adj[pick][*v];
                }
            }
        }
        let last = *order.last().unwrap();
        best = best.min(weight_to_a[last]);
        // Merge the last two vertices of the ordering.
        let prev = order[order.len() - 2];
        for v in &alive {
            if *v != last && *v != prev {
                adj[prev][*v] = adj[prev][*v] + adj[last][*v];
                adj[*v][prev] = adj[prev][*v];
            }
        }
        alive.retain(|v| *v != last);
    }
    best
}

/// Exact minimum over all solutions, with the canonically least optimal
/// vertex set. Disconnected graphs return value 0 with a connected
/// component as the witness.
pub fn global_min_cut(graph: &Graph) -> Result<(Value, CutSolution)> {
    if graph.vertex_count() < 2 {
        return Err(Error::argument("min cut needs at least two vertices"));
    }
    let comps = graph.components();
    if comps.len() > 1 {
        // All optimal solutions are unions of components; the canonically
        // least one is a single smallest component.
        let vertices = comps[0];
        return Ok((
            Value::zero(),
            CutSolution {
                vertices,
                value: Value::zero(),
            },
        ));
    }
    let value = min_cut_value(graph);
    let optimal = enumerate_cuts_below(graph, &value)?;
    let least = optimal
        .iter()
        .min_by(|a, b| canonical_cmp(a.vertices, b.vertices))
        .expect("an optimal cut exists");
    Ok((value, least.clone()))
}

/// Exactly the solutions X with g(X) ≤ budget, canonically sorted.
///
/// Implemented as branch and bound over contraction: each vertex joins
/// either the side of vertex 0 or the opposite side, and a branch dies as
/// soon as the weight already forced across exceeds the budget. Both sides
/// of every qualifying cut are reported. Disconnected graphs would make
/// the output exponential, so they fall back to brute force for n ≤ 20 and
/// are rejected otherwise.
pub fn enumerate_cuts_below(graph: &Graph, budget: &Value) -> Result<Vec<CutSolution>> {
    let n = graph.vertex_count();
    if n < 2 {
        return Ok(Vec::new());
    }
    if budget.is_infinite() {
        return Err(Error::argument("cut enumeration needs a finite budget"));
    }
    if !graph.is_connected() {
        if n > 20 {
            return Err(Error::resource(
                "cut enumeration on a disconnected graph is limited to 20 vertices",
            ));
        }
        let mut out = Vec::new();
        for x in subset::proper_nonempty(n) {
            let value = graph.cut_value(x);
            if value <= *budget {
                out.push(CutSolution { vertices: x, value });
            }
        }
        out.sort_by(|a, b| canonical_cmp(a.vertices, b.vertices));
        return Ok(out);
    }
    let adj = graph.adjacency();
    let mut out = Vec::new();
    // Explicit stack of (next vertex, side-of-vertex-0 mask, other mask,
    // weight forced across so far).
    let mut stack = vec![(1usize, 1u64, 0u64, Value::zero())];
    while let Some((next, side_a, side_b, crossing)) = stack.pop() {
        if crossing > *budget {
            continue;
        }
        if next == n {
            if side_b != 0 {
                out.push(CutSolution {
                    vertices: side_b,
                    value: crossing,
                });
                out.push(CutSolution {
                    vertices: side_a,
                    value: crossing,
                });
            }
            continue;
        }
        let mut to_a = Value::zero();
        let mut to_b = Value::zero();
        for v in 0..next {
            if subset::contains(side_a, v) {
                to_a += adj[next][v];
            } else {
                to_b += adj[next][v];
            }
        }
        // Joining side A cuts the edges into B and vice versa.
        stack.push((next + 1, side_a | 1 << next, side_b, crossing + to_b));
        stack.push((next + 1, side_a, side_b | 1 << next, crossing + to_a));
    }
    out.sort_by(|a, b| canonical_cmp(a.vertices, b.vertices));
    Ok(out)
}

/// All inclusion-minimal optimal solutions, pairwise disjoint. For a
/// disconnected graph these are exactly the connected components.
pub fn minimal_optimal_solutions(graph: &Graph) -> Result<Vec<u64>> {
    if graph.vertex_count() < 2 {
        return Err(Error::argument("min cut needs at least two vertices"));
    }
    let comps = graph.components();
    if comps.len() > 1 {
        return Ok(comps);
    }
    let value = min_cut_value(graph);
    let optimal = enumerate_cuts_below(graph, &value)?;
    let mut minimal: Vec<u64> = Vec::new();
    for sol in &optimal {
        let is_minimal = optimal
            .iter()
            .all(|other| other.vertices == sol.vertices || other.vertices & !sol.vertices != 0);
        if is_minimal {
            minimal.push(sol.vertices);
        }
    }
    subset::sort_canonical(&mut minimal);
    Ok(minimal)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn unit(n: usize, pairs: &[(usize, usize)]) -> Graph {
        let edges: Vec<(usize, usize, Value)> =
            pairs.iter().map(|(u, v)| (*u, *v, Value::one())).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn triangle() -> Graph {
        unit(3, &[(0, 1), (1, 2), (0, 2)])
    }

    pub fn cycle(n: usize) -> Graph {
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        unit(n, &pairs)
    }

    pub fn path(n: usize) -> Graph {
        let pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        unit(n, &pairs)
    }
}
