//! Transfer impedances and determinantal spanning-tree probabilities.
//!
//! For oriented edges e = (x -> y) and f = (z -> w) of an unweighted
//! connected graph, the transfer impedance `H(e, f) = phi_xy(z) - phi_xy(w)`
//! is the voltage read across f when one unit of current is driven across e.
//! The determinant of the matrix `[H(e_i, e_j)]` is the probability that all
//! the `e_i` lie in a uniform random spanning tree, and exclusions are
//! handled by flipping the excluded rows through the identity.
//!
//! The determinant route is only justified for unit weights (via the
//! self-edge regularization, which changes neither trees nor potentials),
//! so weighted cylinder queries go through an explicit deletion/contraction
//! recursion instead: contract each included edge after multiplying by its
//! inclusion probability, delete each excluded edge after multiplying by
//! the complement. The two paths agree on unweighted graphs and both match
//! the brute-force oracle.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::graph::{EdgeId, EdgeSet, Graph, OrientedEdge, UnionFind, VertexId};
use crate::harmonic::{unit_current_potential, unit_current_potential_f64};
use crate::linalg::{det_f64, det_rational, Matrix};
use crate::{rat_int, Error, Rat, Result};

/// Transfer-impedance matrix over an ordered list of oriented edges.
/// Symmetric, with diagonal entries equal to the edges' tree probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub edges: Vec<OrientedEdge>,
    pub entries: Matrix<Rat>,
}

/// The event that every `include` edge is in the tree and no `exclude`
/// edge is. The two sets must be disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderEvent {
    pub include: EdgeSet,
    pub exclude: EdgeSet,
}

impl CylinderEvent {
    pub fn new(
        include: impl IntoIterator<Item = EdgeId>,
        exclude: impl IntoIterator<Item = EdgeId>,
    ) -> Result<CylinderEvent> {
        let include: EdgeSet = include.into_iter().collect();
        let exclude: EdgeSet = exclude.into_iter().collect();
        if include.intersection(&exclude).next().is_some() {
            return Err(Error::OverlappingEvent);
        }
        Ok(CylinderEvent { include, exclude })
    }

    /// Checks every referenced id against the graph.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for &id in self.include.iter().chain(self.exclude.iter()) {
            g.edge(id)?;
        }
        Ok(())
    }
}

fn require_unweighted(g: &Graph) -> Result<()> {
    if g.is_unweighted() {
        Ok(())
    } else {
        Err(Error::RequiresUnweighted)
    }
}

fn oriented_endpoints(g: &Graph, e: OrientedEdge) -> Result<(VertexId, VertexId)> {
    let edge = g.edge(e.edge)?;
    if edge.is_self_edge() {
        return Err(Error::SelfEdgeInput { edge: e.edge });
    }
    Ok(if e.forward {
        (edge.u, edge.v)
    } else {
        (edge.v, edge.u)
    })
}

/// Canonical orientation used by the probability operations: from the lower
/// vertex id to the higher. Determinants are invariant under any choice.
pub fn canonical_orientation(g: &Graph, id: EdgeId) -> Result<OrientedEdge> {
    let edge = g.edge(id)?;
    if edge.is_self_edge() {
        return Err(Error::SelfEdgeInput { edge: id });
    }
    Ok(OrientedEdge::new(id, edge.u < edge.v))
}

/// Transfer impedance H(e, f) of an unweighted connected graph.
pub fn transfer_impedance(g: &Graph, e: OrientedEdge, f: OrientedEdge) -> Result<Rat> {
    require_unweighted(g)?;
    let (x, y) = oriented_endpoints(g, e)?;
    let (z, w) = oriented_endpoints(g, f)?;
    let phi = unit_current_potential(g, x, y)?;
    Ok(phi.values[z].clone() - phi.values[w].clone())
}

/// Matrix of pairwise transfer impedances, one potential solve per row.
/// Symmetry is asserted exactly.
pub fn impedance_matrix(g: &Graph, edges: &[OrientedEdge]) -> Result<TransferMatrix> {
    require_unweighted(g)?;
    assert!(!edges.is_empty(), "impedance matrix needs at least one edge");
    let mut seen = EdgeSet::new();
    for oe in edges {
        if !seen.insert(oe.edge) {
            return Err(Error::DuplicateEdge { edge: oe.edge });
        }
    }
    let k = edges.len();
    let mut rows = Vec::with_capacity(k);
    for &e in edges {
        let (x, y) = oriented_endpoints(g, e)?;
        let phi = unit_current_potential(g, x, y)?;
        let row: Result<Vec<Rat>> = edges
            .iter()
            .map(|&f| {
                let (z, w) = oriented_endpoints(g, f)?;
                Ok(phi.values[z].clone() - phi.values[w].clone())
            })
            .collect();
        rows.push(row?);
    }
    let entries = Matrix::from_rows(rows);
    for i in 0..k {
        for j in (i + 1)..k {
            assert_eq!(
                entries.get(i, j),
                entries.get(j, i),
                "transfer impedances must be symmetric"
            );
        }
    }
    Ok(TransferMatrix {
        edges: edges.to_vec(),
        entries,
    })
}

/// Floating-point impedance matrix for graphs too large for the exact path.
pub fn impedance_matrix_f64(g: &Graph, edges: &[OrientedEdge]) -> Result<Matrix<f64>> {
    require_unweighted(g)?;
    assert!(!edges.is_empty(), "impedance matrix needs at least one edge");
    let k = edges.len();
    let mut rows = Vec::with_capacity(k);
    for &e in edges {
        let (x, y) = oriented_endpoints(g, e)?;
        let phi = unit_current_potential_f64(g, x, y)?;
        let row: Result<Vec<f64>> = edges
            .iter()
            .map(|&f| {
                let (z, w) = oriented_endpoints(g, f)?;
                Ok(phi.values[z] - phi.values[w])
            })
            .collect();
        rows.push(row?);
    }
    Ok(Matrix::from_rows(rows))
}

/// True when the edge ids contain a cycle (including any self-edge).
fn contains_cycle(g: &Graph, ids: &EdgeSet) -> Result<bool> {
    let mut uf = UnionFind::new(g.vertex_count());
    for &id in ids {
        let edge = g.edge(id)?;
        if !uf.union(edge.u, edge.v) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// P(all of `ids` in the tree) = det of the impedance matrix over the
/// canonically oriented edges. Edge sets containing a cycle short-circuit
/// to zero before any determinant work.
pub fn prob_edges_in(g: &Graph, ids: &[EdgeId]) -> Result<Rat> {
    require_unweighted(g)?;
    g.require_connected()?;
    let set: EdgeSet = ids.iter().copied().collect();
    for &id in &set {
        if g.edge(id)?.is_self_edge() {
            return Ok(Rat::zero());
        }
    }
    if set.is_empty() {
        return Ok(rat_int(1));
    }
    if contains_cycle(g, &set)? {
        return Ok(Rat::zero());
    }
    let oriented: Result<Vec<OrientedEdge>> = set
        .iter()
        .map(|&id| canonical_orientation(g, id))
        .collect();
    let matrix = impedance_matrix(g, &oriented?)?;
    Ok(det_rational(&matrix.entries))
}

/// Probability of a cylinder event for an unweighted graph: determinant of
/// the impedance matrix with each excluded edge's row replaced by
/// (identity row - impedance row).
pub fn prob_cylinder(g: &Graph, event: &CylinderEvent) -> Result<Rat> {
    require_unweighted(g)?;
    g.require_connected()?;
    event.validate(g)?;
    // Self-edges are never in any tree: an included one kills the event,
    // an excluded one is vacuous.
    for &id in &event.include {
        if g.edge(id)?.is_self_edge() {
            return Ok(Rat::zero());
        }
    }
    let exclude: Vec<EdgeId> = event
        .exclude
        .iter()
        .copied()
        .filter(|&id| !g.edge(id).map(|e| e.is_self_edge()).unwrap_or(false))
        .collect();
    if contains_cycle(g, &event.include)? {
        return Ok(Rat::zero());
    }
    let include: Vec<EdgeId> = event.include.iter().copied().collect();
    if include.is_empty() && exclude.is_empty() {
        return Ok(rat_int(1));
    }
    let ordered: Vec<EdgeId> = include.iter().chain(exclude.iter()).copied().collect();
    let oriented: Result<Vec<OrientedEdge>> = ordered
        .iter()
        .map(|&id| canonical_orientation(g, id))
        .collect();
    let matrix = impedance_matrix(g, &oriented?)?;
    let k = ordered.len();
    let r = include.len();
    let flipped = Matrix::from_fn(k, |i, j| {
        if i < r {
            matrix.entries.get(i, j).clone()
        } else {
            let identity = if i == j { rat_int(1) } else { Rat::zero() };
            identity - matrix.entries.get(i, j).clone()
        }
    });
    Ok(det_rational(&flipped))
}

/// Floating-point cylinder probability; tiny negative determinants from
/// roundoff are clamped to zero.
pub fn prob_cylinder_f64(g: &Graph, event: &CylinderEvent) -> Result<f64> {
    require_unweighted(g)?;
    g.require_connected()?;
    event.validate(g)?;
    for &id in &event.include {
        if g.edge(id)?.is_self_edge() {
            return Ok(0.0);
        }
    }
    let exclude: Vec<EdgeId> = event
        .exclude
        .iter()
        .copied()
        .filter(|&id| !g.edge(id).map(|e| e.is_self_edge()).unwrap_or(false))
        .collect();
    if contains_cycle(g, &event.include)? {
        return Ok(0.0);
    }
    let include: Vec<EdgeId> = event.include.iter().copied().collect();
    if include.is_empty() && exclude.is_empty() {
        return Ok(1.0);
    }
    let ordered: Vec<EdgeId> = include.iter().chain(exclude.iter()).copied().collect();
    let oriented: Result<Vec<OrientedEdge>> = ordered
        .iter()
        .map(|&id| canonical_orientation(g, id))
        .collect();
    let entries = impedance_matrix_f64(g, &oriented?)?;
    let k = ordered.len();
    let r = include.len();
    let flipped = Matrix::from_fn(k, |i, j| {
        if i < r {
            *entries.get(i, j)
        } else {
            let identity = if i == j { 1.0 } else { 0.0 };
            identity - entries.get(i, j)
        }
    });
    let det = det_f64(&flipped);
    Ok(if det < 0.0 && det > -1e-12 { 0.0 } else { det })
}

/// P(e in T) for a weighted graph: the conductance times the voltage drop
/// across e under a unit current between its endpoints.
pub fn prob_edge_weighted(g: &Graph, id: EdgeId) -> Result<Rat> {
    g.require_connected()?;
    let edge = g.edge(id)?;
    if edge.is_self_edge() {
        return Ok(Rat::zero());
    }
    let (x, y) = (edge.u, edge.v);
    let weight = edge.weight.clone();
    let phi = unit_current_potential(g, x, y)?;
    Ok(weight * (phi.values[x].clone() - phi.values[y].clone()))
}

/// Probability of a cylinder event for an arbitrary weighted graph, by
/// deletion/contraction: includes are contracted first (they shrink the
/// graph fastest), excludes are deleted. Degenerate branches (an included
/// cycle, an excluded bridge) terminate with factor zero.
pub fn prob_cylinder_weighted(g: &Graph, event: &CylinderEvent) -> Result<Rat> {
    g.require_connected()?;
    event.validate(g)?;
    let include: Vec<EdgeId> = event.include.iter().copied().collect();
    let exclude: Vec<EdgeId> = event.exclude.iter().copied().collect();
    cylinder_rec(g, &include, &exclude)
}

fn cylinder_rec(g: &Graph, include: &[EdgeId], exclude: &[EdgeId]) -> Result<Rat> {
    if let Some((&id, rest)) = include.split_first() {
        if g.edge(id)?.is_self_edge() {
            // Contraction of an earlier include edge closed a cycle here.
            return Ok(Rat::zero());
        }
        let p = prob_edge_weighted(g, id)?;
        if p.is_zero() {
            return Ok(Rat::zero());
        }
        let (contracted, _) = g.contract(id)?;
        return Ok(p * cylinder_rec(&contracted, rest, exclude)?);
    }
    if let Some((&id, rest)) = exclude.split_first() {
        if g.edge(id)?.is_self_edge() {
            // Never in a tree, so the exclusion is vacuous.
            let deleted = g.delete(id)?;
            return cylinder_rec(&deleted, include, rest);
        }
        let p = prob_edge_weighted(g, id)?;
        if p.is_one() {
            // Bridge: the edge is in every spanning tree.
            return Ok(Rat::zero());
        }
        let deleted = g.delete(id)?;
        return Ok((rat_int(1) - p) * cylinder_rec(&deleted, include, rest)?);
    }
    Ok(rat_int(1))
}

/// Exact distribution of the tree-degree of `v`: the number of spanning
/// tree edges incident to v. Computed by summing cylinder determinants over
/// every subset of the non-self edges at v, all sharing one impedance
/// matrix.
pub fn degree_pmf(g: &Graph, v: VertexId) -> Result<BTreeMap<usize, Rat>> {
    require_unweighted(g)?;
    g.require_connected()?;
    g.check_vertex(v)?;
    let mut star: Vec<EdgeId> = g
        .adjacency(v)
        .iter()
        .filter(|&&(_, other)| other != v)
        .map(|&(id, _)| id)
        .collect();
    star.dedup();
    let m = star.len();
    if m > 20 {
        return Err(Error::TooLarge {
            op: "degree_pmf",
            limit: 20,
            actual: m,
        });
    }
    let oriented: Result<Vec<OrientedEdge>> = star
        .iter()
        .map(|&id| canonical_orientation(g, id))
        .collect();
    let matrix = impedance_matrix(g, &oriented?)?;
    let mut pmf: BTreeMap<usize, Rat> = (0..=m).map(|k| (k, Rat::zero())).collect();
    if m == 0 {
        // Isolated vertex in a one-vertex graph: the empty tree has degree 0.
        pmf.insert(0, rat_int(1));
        return Ok(pmf);
    }
    for mask in 0u32..(1 << m) {
        let size = mask.count_ones() as usize;
        // Order: included slots first, excluded after; symmetric permutation
        // of the base matrix leaves determinants unchanged.
        let mut order: Vec<usize> = Vec::with_capacity(m);
        order.extend((0..m).filter(|slot| mask & (1 << slot) != 0));
        let r = order.len();
        order.extend((0..m).filter(|slot| mask & (1 << slot) == 0));
        let flipped = Matrix::from_fn(m, |i, j| {
            let value = matrix.entries.get(order[i], order[j]).clone();
            if i < r {
                value
            } else {
                let identity = if i == j { rat_int(1) } else { Rat::zero() };
                identity - value
            }
        });
        let p = det_rational(&flipped);
        *pmf.get_mut(&size).expect("initialized") += p;
    }
    debug_assert_eq!(pmf.values().cloned().sum::<Rat>(), rat_int(1));
    Ok(pmf)
}
