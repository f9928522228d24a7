//! Desk-scale embodiments of the limit theory: exact complete-graph degree
//! laws against the one-plus-Poisson law, factorial and tree moments,
//! critical Galton–Watson and incipient-cluster simulation, spanning-tree
//! entropy, and the tree/domino correspondence.

mod domino;
mod entropy;
mod tree;

pub use domino::{temperley_matching, Cell, DominoTiling};
pub use entropy::{spanning_tree_entropy_finite, spanning_tree_entropy_integral};
pub use tree::{
    galton_watson_sample, gw_tree_moment, incipient_cluster_sample, incipient_tree_moment,
    poisson_plus_one_pmf, poisson_plus_one_truncated, tree_map_count, MonteCarloEstimate,
    RootedTree,
};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::graph::{generate_family, EdgeId, Family, Graph, VertexId};
use crate::transfer::{prob_edges_in, prob_cylinder, CylinderEvent};
use crate::{rat_int, Error, Rat, Result};

/// Exact distribution of the tree-degree of a vertex of the complete graph
/// on n vertices, for 3 <= n <= 12 (the determinants stay at size n-1).
///
/// All k-subsets of the star at a vertex are equivalent by symmetry, so
/// P(k) = C(n-1, k) * P(a fixed k-subset in, the rest out).
pub fn kn_degree_pmf(n: usize) -> Result<BTreeMap<usize, Rat>> {
    if !(3..=12).contains(&n) {
        return Err(Error::InvalidFamily {
            family: "complete (degree pmf)",
            n,
        });
    }
    let g = generate_family(Family::Complete, n)?;
    // The first n-1 edges of the build order are exactly the star at 0.
    let star: Vec<EdgeId> = (0..n - 1).collect();
    let mut pmf = BTreeMap::new();
    let mut binomial = rat_int(1);
    for k in 0..=(n - 1) {
        let event = CylinderEvent::new(
            star[..k].iter().copied(),
            star[k..].iter().copied(),
        )?;
        let single = prob_cylinder(&g, &event)?;
        pmf.insert(k, binomial.clone() * single);
        // C(n-1, k+1) from C(n-1, k).
        binomial = binomial * rat_int((n - 1 - k) as i64) / rat_int((k + 1) as i64);
    }
    debug_assert_eq!(pmf.values().cloned().sum::<Rat>(), rat_int(1));
    debug_assert_eq!(pmf[&0], Rat::zero());
    Ok(pmf)
}

/// r-th falling factorial `k (k-1) ... (k-r+1)` as a rational.
fn falling_factorial_rat(k: usize, r: usize) -> Rat {
    let mut acc = rat_int(1);
    for step in 0..r {
        if step > k {
            return Rat::zero();
        }
        acc *= rat_int(k as i64 - step as i64);
    }
    acc
}

/// Exact r-th factorial moment `E (X)_r` of a finite-support distribution.
pub fn falling_factorial_moment_exact(dist: &BTreeMap<usize, Rat>, r: usize) -> Rat {
    dist.iter()
        .map(|(&k, p)| p.clone() * falling_factorial_rat(k, r))
        .fold(Rat::zero(), |acc, t| acc + t)
}

/// Floating-point r-th factorial moment of a finite-support distribution.
pub fn falling_factorial_moment(dist: &BTreeMap<usize, f64>, r: usize) -> f64 {
    dist.iter()
        .map(|(&k, p)| {
            let mut f = 1.0;
            for step in 0..r {
                f *= k as f64 - step as f64;
            }
            p * f
        })
        .sum()
}

/// Exact expected number of tree-maps of a small rooted tree `t` into the
/// uniform spanning tree of `g`, rooted at `v`: the sum over injective
/// images of `t` (vertices adjacent where `t` is, one connecting edge
/// chosen per tree edge) of the probability that the whole image lies in
/// the tree.
pub fn ust_tree_moment(g: &Graph, v: VertexId, t: &RootedTree) -> Result<Rat> {
    g.check_vertex(v)?;
    if t.size() > 4 {
        return Err(Error::TooLarge {
            op: "ust_tree_moment",
            limit: 4,
            actual: t.size(),
        });
    }
    // Flatten t in preorder with parent slots.
    let mut parents: Vec<usize> = Vec::new();
    flatten_preorder(t, usize::MAX, &mut parents);
    let slots = parents.len();

    let mut images: BTreeMap<Vec<EdgeId>, u64> = BTreeMap::new();
    let mut assigned_vertex = vec![usize::MAX; slots];
    let mut assigned_edge = vec![0usize; slots];
    assigned_vertex[0] = v;
    enumerate_images(
        g,
        &parents,
        1,
        &mut assigned_vertex,
        &mut assigned_edge,
        &mut images,
    )?;
    let mut total = Rat::zero();
    for (edges, multiplicity) in images {
        total += prob_edges_in(g, &edges)? * rat_int(multiplicity as i64);
    }
    Ok(total)
}

fn flatten_preorder(t: &RootedTree, parent: usize, parents: &mut Vec<usize>) {
    let slot = parents.len();
    parents.push(parent);
    for child in &t.children {
        flatten_preorder(child, slot, parents);
    }
}

fn enumerate_images(
    g: &Graph,
    parents: &[usize],
    slot: usize,
    assigned_vertex: &mut Vec<usize>,
    assigned_edge: &mut Vec<usize>,
    images: &mut BTreeMap<Vec<EdgeId>, u64>,
) -> Result<()> {
    if slot == parents.len() {
        let mut edges: Vec<EdgeId> = assigned_edge[1..].to_vec();
        edges.sort_unstable();
        *images.entry(edges).or_insert(0) += 1;
        if images.len() > 200_000 {
            return Err(Error::TooLarge {
                op: "ust_tree_moment images",
                limit: 200_000,
                actual: images.len(),
            });
        }
        return Ok(());
    }
    let anchor = assigned_vertex[parents[slot]];
    for &(edge, other) in g.adjacency(anchor) {
        if other == anchor {
            continue; // self-edges never lie in a tree
        }
        if assigned_vertex[..slot].contains(&other) {
            continue; // tree-maps are injective on vertices
        }
        assigned_vertex[slot] = other;
        assigned_edge[slot] = edge;
        enumerate_images(g, parents, slot + 1, assigned_vertex, assigned_edge, images)?;
        assigned_vertex[slot] = usize::MAX;
    }
    Ok(())
}
