//! Brute-force and classical-determinant ground truth: spanning-tree
//! enumeration, weighted counts, bitree sums and the matrix-tree
//! determinant. Everything here is exact rational; this module defines the
//! reference answers every probabilistic formula is checked against.

use num_traits::{One, Zero};

use crate::graph::{EdgeSet, Graph, UnionFind, VertexId};
use crate::harmonic::laplacian;
use crate::linalg::{det_rational, Matrix};
use crate::transfer::CylinderEvent;
use crate::{Error, Rat, Result};

/// Guard on edge count for the exponential-ish enumerations.
const MAX_EDGES: usize = 25;

/// Complete list of spanning trees plus the total tree weight
/// `sum over trees of (product of edge weights)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeEnumeration {
    pub trees: Vec<EdgeSet>,
    pub total_weight: Rat,
}

impl TreeEnumeration {
    pub fn count(&self) -> usize {
        self.trees.len()
    }

    pub fn contains(&self, tree: &EdgeSet) -> bool {
        self.trees.binary_search(tree).is_ok()
    }
}

fn check_guard(g: &Graph, op: &'static str) -> Result<()> {
    if g.edge_count() > MAX_EDGES {
        return Err(Error::TooLarge {
            op,
            limit: MAX_EDGES,
            actual: g.edge_count(),
        });
    }
    Ok(())
}

/// Enumerates every spanning tree by deletion/contraction backtracking:
/// branch on the lowest-id non-self edge, contract for "in the tree",
/// delete for "out", and prune the delete branch at bridges.
pub fn enumerate_spanning_trees(g: &Graph) -> Result<TreeEnumeration> {
    check_guard(g, "enumerate_spanning_trees")?;
    let mut trees = Vec::new();
    if g.is_connected() {
        let mut chosen = EdgeSet::new();
        enumerate_rec(g, &mut chosen, &mut trees);
    }
    trees.sort();
    debug_assert!(trees.windows(2).all(|w| w[0] != w[1]));
    let mut total_weight = Rat::zero();
    for tree in &trees {
        total_weight += g.edge_set_weight(tree)?;
    }
    Ok(TreeEnumeration {
        trees,
        total_weight,
    })
}

fn enumerate_rec(g: &Graph, chosen: &mut EdgeSet, out: &mut Vec<EdgeSet>) {
    if g.vertex_count() == 1 {
        out.push(chosen.clone());
        return;
    }
    let edge = match g.edges().iter().find(|e| !e.is_self_edge()) {
        Some(edge) => edge,
        None => return, // several vertices, only self-edges left: no tree
    };
    let id = edge.id;
    let (contracted, _) = g.contract(id).expect("non-self edge");
    chosen.insert(id);
    enumerate_rec(&contracted, chosen, out);
    chosen.remove(&id);
    if let Ok(deleted) = g.delete(id) {
        enumerate_rec(&deleted, chosen, out);
    }
}

/// Total spanning-tree weight via the matrix-tree theorem: the determinant
/// of the weighted Laplacian with `drop`'s row and column removed.
pub fn matrix_tree_count_at(g: &Graph, drop: VertexId) -> Result<Rat> {
    g.check_vertex(drop)?;
    g.require_connected()?;
    let lap = laplacian(g);
    let kept: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| v != drop).collect();
    let minor = Matrix::from_fn(kept.len(), |i, j| lap.get(kept[i], kept[j]).clone());
    Ok(det_rational(&minor))
}

/// Matrix-tree count with the conventional choice of dropped vertex 0.
/// The result is independent of that choice.
pub fn matrix_tree_count(g: &Graph) -> Result<Rat> {
    matrix_tree_count_at(g, 0)
}

/// Sum of forest weights over a,b-spanning bitrees: spanning forests with
/// exactly two components, one holding a and the other b. Direct
/// enumeration over (|V|-2)-subsets of non-self edges.
pub fn bitree_weight_sum(g: &Graph, a: VertexId, b: VertexId) -> Result<Rat> {
    check_guard(g, "bitree_weight_sum")?;
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Err(Error::SameVertex);
    }
    let n = g.vertex_count();
    let candidates: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| !e.is_self_edge())
        .map(|e| e.id)
        .collect();
    let want = n - 2;
    let mut total = Rat::zero();
    let mut subset = Vec::with_capacity(want);
    // n - 2 acyclic edges on n vertices leave exactly two components, so a
    // subset qualifies iff it is a forest that separates a from b.
    combinations(&candidates, want, 0, &mut subset, &mut |edges| {
        let mut uf = UnionFind::new(n);
        let mut weight = Rat::one();
        for &id in edges {
            let e = g.edge(id).expect("candidate id");
            if !uf.union(e.u, e.v) {
                return;
            }
            weight *= e.weight.clone();
        }
        if uf.find(a) != uf.find(b) {
            total += weight;
        }
    });
    Ok(total)
}

fn combinations(
    items: &[usize],
    want: usize,
    start: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if current.len() == want {
        visit(current);
        return;
    }
    let needed = want - current.len();
    for slot in start..items.len() {
        if items.len() - slot < needed {
            break;
        }
        current.push(items[slot]);
        combinations(items, want, slot + 1, current, visit);
        current.pop();
    }
}

/// Exact probability of a cylinder event under the weight-selected
/// spanning-tree measure, by filtering the full enumeration.
pub fn brute_cylinder_prob(g: &Graph, event: &CylinderEvent) -> Result<Rat> {
    event.validate(g)?;
    let enumeration = enumerate_spanning_trees(g)?;
    let mut hit = Rat::zero();
    for tree in &enumeration.trees {
        let includes = event.include.iter().all(|id| tree.contains(id));
        let excludes = event.exclude.iter().all(|id| !tree.contains(id));
        if includes && excludes {
            hit += g.edge_set_weight(tree)?;
        }
    }
    Ok(hit / enumeration.total_weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{example_house_graph, generate_family, Family};
    use crate::{rat, rat_int};

    #[test]
    fn example_graph_has_the_eleven_trees() {
        let g = example_house_graph();
        let e = enumerate_spanning_trees(&g).unwrap();
        assert_eq!(e.count(), 11);
        // 1-based edge labels from the worked example, as 0-based ids.
        let expected: Vec<EdgeSet> = [
            vec![1, 2, 3, 4],
            vec![1, 2, 3, 5],
            vec![1, 2, 4, 5],
            vec![1, 3, 4, 5],
            vec![2, 3, 4, 5],
            vec![1, 2, 4, 6],
            vec![1, 3, 4, 6],
            vec![2, 3, 4, 6],
            vec![1, 2, 5, 6],
            vec![1, 3, 5, 6],
            vec![2, 3, 5, 6],
        ]
        .iter()
        .map(|ids| ids.iter().map(|i| i - 1).collect())
        .collect();
        for tree in &expected {
            assert!(e.contains(tree), "missing {tree:?}");
        }
        assert_eq!(e.total_weight, rat_int(11));
    }

    #[test]
    fn complete_graph_counts() {
        for (n, expect) in [(3usize, 3i64), (4, 16), (5, 125)] {
            let g = generate_family(Family::Complete, n).unwrap();
            let e = enumerate_spanning_trees(&g).unwrap();
            assert_eq!(e.count() as i64, expect);
            assert_eq!(matrix_tree_count(&g).unwrap(), rat_int(expect));
        }
    }

    #[test]
    fn tree_input_enumerates_itself() {
        let g = generate_family(Family::Path, 4).unwrap();
        let e = enumerate_spanning_trees(&g).unwrap();
        assert_eq!(e.count(), 1);
        assert_eq!(e.trees[0], g.edge_ids().collect());
    }

    #[test]
    fn matrix_tree_independent_of_dropped_vertex() {
        let g = example_house_graph();
        let reference = matrix_tree_count(&g).unwrap();
        for v in 1..g.vertex_count() {
            assert_eq!(matrix_tree_count_at(&g, v).unwrap(), reference);
        }
        assert_eq!(reference, rat_int(11));
    }

    #[test]
    fn weighted_counts() {
        // Triangle with w(ab) = 2: tree weights 2, 2, 1.
        let g = Graph::build(
            3,
            &[(0, 1, rat_int(2)), (1, 2, rat_int(1)), (2, 0, rat_int(1))],
        )
        .unwrap();
        let e = enumerate_spanning_trees(&g).unwrap();
        assert_eq!(e.count(), 3);
        assert_eq!(e.total_weight, rat_int(5));
        assert_eq!(matrix_tree_count(&g).unwrap(), rat_int(5));
    }

    #[test]
    fn deletion_contraction_recurrence() {
        let g = example_house_graph();
        let total = enumerate_spanning_trees(&g).unwrap().count();
        let deleted = enumerate_spanning_trees(&g.delete(3).unwrap())
            .unwrap()
            .count();
        let contracted = enumerate_spanning_trees(&g.contract(3).unwrap().0)
            .unwrap()
            .count();
        assert_eq!(total, deleted + contracted);
        assert_eq!(contracted, 7); // trees of G containing e3
    }

    #[test]
    fn contraction_bijects_with_containing_trees() {
        let g = example_house_graph();
        let all = enumerate_spanning_trees(&g).unwrap();
        let (contracted, map) = g.contract(3).unwrap();
        let sub = enumerate_spanning_trees(&contracted).unwrap();
        let projected: Vec<EdgeSet> = all
            .trees
            .iter()
            .filter(|t| t.contains(&3))
            .map(|t| {
                t.iter()
                    .filter(|&&id| id != 3)
                    .map(|id| map.edge_map[id])
                    .collect()
            })
            .collect();
        assert_eq!(projected.len(), sub.count());
        for tree in projected {
            assert!(sub.contains(&tree));
        }
    }

    #[test]
    fn regularize_preserves_tree_set() {
        let g = example_house_graph();
        let r = g.regularize();
        let a = enumerate_spanning_trees(&g).unwrap();
        let b = enumerate_spanning_trees(&r).unwrap();
        assert_eq!(a.trees, b.trees);
    }

    #[test]
    fn bitree_examples() {
        let triangle = Graph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(bitree_weight_sum(&triangle, 0, 1).unwrap(), rat_int(2));

        let single = Graph::unweighted(2, &[(0, 1)]).unwrap();
        assert_eq!(bitree_weight_sum(&single, 0, 1).unwrap(), rat_int(1));
    }

    #[test]
    fn bitree_over_count_is_effective_resistance() {
        let g = example_house_graph();
        let d = matrix_tree_count(&g).unwrap();
        for a in 0..5 {
            for b in (a + 1)..5 {
                let n = bitree_weight_sum(&g, a, b).unwrap();
                let r = crate::harmonic::effective_resistance(&g, a, b).unwrap();
                assert_eq!(n / d.clone(), r, "pair ({a},{b})");
            }
        }
    }

    #[test]
    fn brute_cylinder_on_example_graph() {
        let g = example_house_graph();
        let both = CylinderEvent::new([0, 3], []).unwrap();
        // Trees containing both e0 and e3, straight off the eleven-tree
        // list: e0e1e2e3, e0e1e3e4, e0e2e3e4, e0e1e3e5, e0e2e3e5.
        assert_eq!(brute_cylinder_prob(&g, &both).unwrap(), rat(5, 11));
        let cycle = CylinderEvent::new([0, 1, 2, 5], []).unwrap();
        assert_eq!(brute_cylinder_prob(&g, &cycle).unwrap(), rat_int(0));
    }

    #[test]
    fn guard_rejects_large_graphs() {
        let g = generate_family(Family::Complete, 8).unwrap();
        assert!(matches!(
            enumerate_spanning_trees(&g),
            Err(Error::TooLarge { .. })
        ));
    }
}
