//! Weighted multigraph representation with deletion, contraction, standard
//! graph families, and spanning-structure predicates.
//!
//! Vertices are dense indices in `[0, vertex_count)`. Edge ids are assigned
//! from list position at build time and stay stable under deletion and
//! contraction, so a caller can track an edge through a whole
//! deletion/contraction recursion by id alone.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::{rat_int, Error, Rat, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Set of edge ids, always a subset of some graph's ids.
pub type EdgeSet = BTreeSet<EdgeId>;

/// An undirected edge. `u == v` is a legal self-edge; parallel edges are
/// distinct ids with the same endpoints. The weight is a conductance
/// (dimensionless, positive); the edge's resistance is its reciprocal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Rat,
}

impl Edge {
    pub fn is_self_edge(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint other than `x` (for a self-edge, `x` itself).
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// An edge plus a traversal direction: `forward` means from the stored `u`
/// endpoint to the stored `v` endpoint. Reversing flips the sign of every
/// current and impedance computed from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub edge: EdgeId,
    pub forward: bool,
}

impl OrientedEdge {
    pub fn new(edge: EdgeId, forward: bool) -> Self {
        OrientedEdge { edge, forward }
    }

    pub fn reversed(self) -> Self {
        OrientedEdge {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

/// How vertex and edge ids of a graph map onto those of its contraction.
///
/// Edge ids are stable across contraction (the contracted edge survives as a
/// self-edge), so `edge_map` is the identity on every id; it is kept explicit
/// so callers can compose maps without special cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    pub vertex_map: Vec<VertexId>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
}

/// A finite weighted multigraph.
///
/// Immutable after construction: every operation returns a new graph, so
/// values can be shared freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(EdgeId, VertexId)>>,
}

impl Graph {
    /// Builds a graph from `(u, v, weight)` triples; edge id = list position.
    pub fn build(vertex_count: usize, edge_list: &[(VertexId, VertexId, Rat)]) -> Result<Graph> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for (index, (u, v, weight)) in edge_list.iter().enumerate() {
            for &endpoint in &[*u, *v] {
                if endpoint >= vertex_count {
                    return Err(Error::EndpointOutOfRange {
                        index,
                        vertex: endpoint,
                        vertex_count,
                    });
                }
            }
            if *weight <= Rat::zero() {
                return Err(Error::NonPositiveWeight { index });
            }
            edges.push(Edge {
                id: index,
                u: *u,
                v: *v,
                weight: weight.clone(),
            });
        }
        Ok(Graph::from_parts(vertex_count, edges))
    }

    /// Builds an unweighted (all weights one) graph from endpoint pairs.
    pub fn unweighted(vertex_count: usize, pairs: &[(VertexId, VertexId)]) -> Result<Graph> {
        let list: Vec<_> = pairs.iter().map(|&(u, v)| (u, v, rat_int(1))).collect();
        Graph::build(vertex_count, &list)
    }

    /// Internal constructor: assumes endpoints valid and weights positive,
    /// edges sorted by ascending id.
    fn from_parts(vertex_count: usize, edges: Vec<Edge>) -> Graph {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for edge in &edges {
            adjacency[edge.u].push((edge.id, edge.v));
            // A self-edge has both of its ends at the same vertex, so it is
            // listed twice: it counts double toward the walk degree.
            adjacency[edge.v].push((edge.id, edge.u));
        }
        Graph {
            vertex_count,
            edges,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Looks an edge up by its stable id.
    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        // Ids stay sorted ascending through every operation.
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .map(|slot| &self.edges[slot])
            .map_err(|_| Error::UnknownEdge { edge: id })
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    /// Incident `(edge id, other endpoint)` pairs in ascending id order;
    /// self-edges appear twice.
    pub fn adjacency(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adjacency[v]
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::UnknownVertex { vertex: v })
        }
    }

    /// Walk degree d(v): the sum of incident weights with self-edges counted
    /// twice. This is the normalizer for random-walk transitions.
    pub fn degree(&self, v: VertexId) -> Rat {
        self.adjacency[v]
            .iter()
            .map(|&(id, _)| self.edge(id).expect("adjacency id").weight.clone())
            .fold(Rat::zero(), |acc, w| acc + w)
    }

    /// Degree with self-edges ignored: the diagonal of the Laplacian.
    pub fn harmonic_degree(&self, v: VertexId) -> Rat {
        self.adjacency[v]
            .iter()
            .filter(|&&(_, other)| other != v)
            .map(|&(id, _)| self.edge(id).expect("adjacency id").weight.clone())
            .fold(Rat::zero(), |acc, w| acc + w)
    }

    /// True when every non-self edge has weight one. Self-edge weights are
    /// irrelevant to tree probabilities, so they are not constrained.
    pub fn is_unweighted(&self) -> bool {
        self.edges
            .iter()
            .filter(|e| !e.is_self_edge())
            .all(|e| e.weight.is_one())
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &(_, next) in &self.adjacency[v] {
                if !seen[next] {
                    seen[next] = true;
                    reached += 1;
                    stack.push(next);
                }
            }
        }
        reached == self.vertex_count
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Removes edge `e`, keeping every other edge's id. Errors if the removal
    /// disconnects the graph.
    pub fn delete(&self, e: EdgeId) -> Result<Graph> {
        self.edge(e)?;
        let remaining: Vec<Edge> = self.edges.iter().filter(|x| x.id != e).cloned().collect();
        let graph = Graph::from_parts(self.vertex_count, remaining);
        if !graph.is_connected() {
            return Err(Error::DeletionDisconnects { edge: e });
        }
        Ok(graph)
    }

    /// Whether deleting `e` would disconnect the graph.
    pub fn is_bridge(&self, e: EdgeId) -> Result<bool> {
        let edge = self.edge(e)?;
        if edge.is_self_edge() {
            return Ok(false);
        }
        let remaining: Vec<Edge> = self.edges.iter().filter(|x| x.id != e).cloned().collect();
        Ok(!Graph::from_parts(self.vertex_count, remaining).is_connected())
    }

    /// Contracts non-self edge `e`: its endpoints merge into one vertex and
    /// `e` itself survives as a self-edge there, so the edge correspondence
    /// is total. Parallel edges may arise.
    pub fn contract(&self, e: EdgeId) -> Result<(Graph, ContractionMap)> {
        let edge = self.edge(e)?;
        if edge.is_self_edge() {
            return Err(Error::ContractSelfEdge { edge: e });
        }
        let keep = edge.u.min(edge.v);
        let gone = edge.u.max(edge.v);
        let vertex_map: Vec<VertexId> = (0..self.vertex_count)
            .map(|v| {
                if v == gone {
                    keep
                } else if v > gone {
                    v - 1
                } else {
                    v
                }
            })
            .collect();
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|x| Edge {
                id: x.id,
                u: vertex_map[x.u],
                v: vertex_map[x.v],
                weight: x.weight.clone(),
            })
            .collect();
        let edge_map = self.edges.iter().map(|x| (x.id, x.id)).collect();
        Ok((
            Graph::from_parts(self.vertex_count - 1, edges),
            ContractionMap {
                vertex_map,
                edge_map,
            },
        ))
    }

    /// Pads every vertex up to the maximum degree D with self-edge mass
    /// (a self-edge of weight w adds 2w to the walk degree), leaving the
    /// spanning-tree set and all harmonic solutions unchanged.
    pub fn regularize(&self) -> Graph {
        if self.vertex_count == 0 {
            return self.clone();
        }
        let max_degree = (0..self.vertex_count)
            .map(|v| self.degree(v))
            .max()
            .expect("nonempty");
        let mut edges = self.edges.clone();
        let mut next_id = self.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
        for v in 0..self.vertex_count {
            let deficit = &max_degree - self.degree(v);
            if deficit > Rat::zero() {
                edges.push(Edge {
                    id: next_id,
                    u: v,
                    v,
                    weight: deficit / rat_int(2),
                });
                next_id += 1;
            }
        }
        Graph::from_parts(self.vertex_count, edges)
    }

    /// True iff `s` is a spanning tree: |V|-1 edges, acyclic, connected.
    /// Unknown ids make the predicate false.
    pub fn is_spanning_tree(&self, s: &EdgeSet) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        if s.len() != self.vertex_count - 1 {
            return false;
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for &id in s {
            let edge = match self.edge(id) {
                Ok(edge) => edge,
                Err(_) => return false,
            };
            if !uf.union(edge.u, edge.v) {
                // Self-edges and repeated components both land here.
                return false;
            }
        }
        // |V|-1 successful unions on |V| vertices leave one component.
        true
    }

    /// Product of the weights of the edges in `s`.
    pub fn edge_set_weight(&self, s: &EdgeSet) -> Result<Rat> {
        let mut product = rat_int(1);
        for &id in s {
            product *= self.edge(id)?.weight.clone();
        }
        Ok(product)
    }
}

/// Plain union-find over dense vertex ids.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both endpoints were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[rb] = ra;
        true
    }
}

/// The standard graph families used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Complete,
    Torus,
    Hypercube,
    Path,
    Cycle,
    Grid,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Torus => "torus",
            Family::Hypercube => "hypercube",
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Grid => "grid",
        }
    }

    pub fn parse(name: &str) -> Option<Family> {
        match name {
            "complete" => Some(Family::Complete),
            "torus" => Some(Family::Torus),
            "hypercube" => Some(Family::Hypercube),
            "path" => Some(Family::Path),
            "cycle" => Some(Family::Cycle),
            "grid" => Some(Family::Grid),
            _ => None,
        }
    }
}

/// Vertex id of torus point `(i, j)` on the n-torus: row-major from the
/// bottom row, `j * n + i`.
pub fn torus_vertex(n: usize, i: usize, j: usize) -> VertexId {
    j * n + i
}

/// Vertex id of grid point `(x, y)` on the n-by-n grid: `y * n + x`.
pub fn grid_vertex(n: usize, x: usize, y: usize) -> VertexId {
    y * n + x
}

/// Generates an unweighted graph of the named family.
///
/// The torus requires n >= 3 so that wraparound creates neither self-edges
/// nor parallel pairs; the hypercube is capped to keep vertex counts sane.
pub fn generate_family(family: Family, n: usize) -> Result<Graph> {
    let invalid = |family: Family, n: usize| Error::InvalidFamily {
        family: family.name(),
        n,
    };
    match family {
        Family::Complete => {
            if n < 1 {
                return Err(invalid(family, n));
            }
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    pairs.push((i, j));
                }
            }
            Graph::unweighted(n, &pairs)
        }
        Family::Torus => {
            if n < 3 {
                return Err(invalid(family, n));
            }
            let mut pairs = Vec::new();
            for j in 0..n {
                for i in 0..n {
                    pairs.push((torus_vertex(n, i, j), torus_vertex(n, (i + 1) % n, j)));
                    pairs.push((torus_vertex(n, i, j), torus_vertex(n, i, (j + 1) % n)));
                }
            }
            Graph::unweighted(n * n, &pairs)
        }
        Family::Hypercube => {
            if n < 1 || n > 20 {
                return Err(invalid(family, n));
            }
            let count = 1usize << n;
            let mut pairs = Vec::new();
            for v in 0..count {
                for b in 0..n {
                    let w = v ^ (1 << b);
                    if v < w {
                        pairs.push((v, w));
                    }
                }
            }
            Graph::unweighted(count, &pairs)
        }
        Family::Path => {
            if n < 1 {
                return Err(invalid(family, n));
            }
            let pairs: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
            Graph::unweighted(n, &pairs)
        }
        Family::Cycle => {
            if n < 1 {
                return Err(invalid(family, n));
            }
            let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::unweighted(n, &pairs)
        }
        Family::Grid => {
            if n < 1 {
                return Err(invalid(family, n));
            }
            let mut pairs = Vec::new();
            for y in 0..n {
                for x in 0..n {
                    if x + 1 < n {
                        pairs.push((grid_vertex(n, x, y), grid_vertex(n, x + 1, y)));
                    }
                    if y + 1 < n {
                        pairs.push((grid_vertex(n, x, y), grid_vertex(n, x, y + 1)));
                    }
                }
            }
            Graph::unweighted(n * n, &pairs)
        }
    }
}

/// The five-vertex, six-edge example graph used all over the test suite:
/// vertices A..E = 0..4, edges e0=AB, e1=BC, e2=CD, e3=DE, e4=AE, e5=AD,
/// all of weight one. It has exactly eleven spanning trees.
pub fn example_house_graph() -> Graph {
    Graph::unweighted(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 3)])
        .expect("static example is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn build_example_graph() {
        let g = example_house_graph();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_connected());
        assert!(g.is_unweighted());
    }

    #[test]
    fn build_single_vertex() {
        let g = Graph::unweighted(1, &[]).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert!(g.is_connected());
    }

    #[test]
    fn build_parallel_edges() {
        let g = Graph::unweighted(3, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.adjacency(0).len(), 2);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            Graph::build(2, &[(0, 1, rat_int(0))]),
            Err(Error::NonPositiveWeight { index: 0 })
        );
        assert_eq!(
            Graph::unweighted(2, &[(0, 2)]),
            Err(Error::EndpointOutOfRange {
                index: 0,
                vertex: 2,
                vertex_count: 2
            })
        );
    }

    #[test]
    fn delete_keeps_ids_and_checks_connectivity() {
        let g = example_house_graph();
        let cycle = g.delete(5).unwrap();
        assert_eq!(cycle.edge_count(), 5);
        assert!(cycle.edge(5).is_err());
        assert_eq!(cycle.edge(4).unwrap().id, 4);

        let path = Graph::unweighted(2, &[(0, 1)]).unwrap();
        assert_eq!(path.delete(0), Err(Error::DeletionDisconnects { edge: 0 }));

        let triangle = Graph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        for e in 0..3 {
            assert!(triangle.delete(e).is_ok());
        }
    }

    #[test]
    fn contract_merges_endpoints_and_keeps_all_edges() {
        let g = example_house_graph();
        // e3 = DE: D and E merge, e3 becomes a self-edge, e4 parallels e5.
        let (h, map) = g.contract(3).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(h.edge_count(), 6);
        let e3 = h.edge(3).unwrap();
        assert!(e3.is_self_edge());
        let e4 = h.edge(4).unwrap();
        let e5 = h.edge(5).unwrap();
        assert_eq!(
            (e4.u.min(e4.v), e4.u.max(e4.v)),
            (e5.u.min(e5.v), e5.u.max(e5.v))
        );
        assert_eq!(map.vertex_map[3], map.vertex_map[4]);
        assert_eq!(map.edge_map.len(), 6);
    }

    #[test]
    fn contract_rejects_self_edge() {
        let g = Graph::unweighted(2, &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(g.contract(1), Err(Error::ContractSelfEdge { edge: 1 }));
    }

    #[test]
    fn contract_triangle() {
        let g = Graph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let (h, _) = g.contract(0).unwrap();
        assert_eq!(h.vertex_count(), 2);
        let selfs = h.edges().iter().filter(|e| e.is_self_edge()).count();
        assert_eq!(selfs, 1);
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn regularize_tops_up_degrees() {
        let g = example_house_graph();
        let r = g.regularize();
        let target = rat_int(3);
        for v in 0..r.vertex_count() {
            assert_eq!(r.degree(v), target, "vertex {v}");
        }
        // A and D already had degree 3; B, C, E gain weight-1/2 self-edges.
        assert_eq!(r.edge_count(), 9);
        assert!(r
            .edges()
            .iter()
            .skip(6)
            .all(|e| e.is_self_edge() && e.weight == rat(1, 2)));
    }

    #[test]
    fn regularize_leaves_regular_graphs_alone() {
        let cycle = generate_family(Family::Cycle, 5).unwrap();
        assert_eq!(cycle.regularize(), cycle);
        let single = Graph::unweighted(1, &[]).unwrap();
        assert_eq!(single.regularize(), single);
    }

    #[test]
    fn family_sizes() {
        let k4 = generate_family(Family::Complete, 4).unwrap();
        assert_eq!(k4.edge_count(), 6);
        let t3 = generate_family(Family::Torus, 3).unwrap();
        assert_eq!(t3.vertex_count(), 9);
        assert_eq!(t3.edge_count(), 18);
        let b3 = generate_family(Family::Hypercube, 3).unwrap();
        assert_eq!(b3.vertex_count(), 8);
        assert_eq!(b3.edge_count(), 12);
        assert!(generate_family(Family::Torus, 2).is_err());
    }

    #[test]
    fn torus_is_four_regular() {
        for n in [3, 4, 5] {
            let t = generate_family(Family::Torus, n).unwrap();
            for v in 0..t.vertex_count() {
                assert_eq!(t.degree(v), rat_int(4));
            }
        }
    }

    #[test]
    fn spanning_tree_predicate() {
        let g = example_house_graph();
        let yes: EdgeSet = [0, 1, 2, 3].into_iter().collect();
        assert!(g.is_spanning_tree(&yes));
        // e0,e1,e2,e5 closes the cycle A-B-C-D-A and strands E.
        let no: EdgeSet = [0, 1, 2, 5].into_iter().collect();
        assert!(!g.is_spanning_tree(&no));
        let all: EdgeSet = g.edge_ids().collect();
        assert!(!g.is_spanning_tree(&all));
        let unknown: EdgeSet = [0, 1, 2, 9].into_iter().collect();
        assert!(!g.is_spanning_tree(&unknown));
    }

    #[test]
    fn degree_counts_self_edges_twice() {
        let g = Graph::build(2, &[(0, 1, rat_int(1)), (0, 0, rat(1, 2))]).unwrap();
        assert_eq!(g.degree(0), rat_int(2));
        assert_eq!(g.harmonic_degree(0), rat_int(1));
    }
}
