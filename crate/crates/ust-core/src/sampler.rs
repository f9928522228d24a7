//! Random generation of uniform and weight-selected spanning trees by the
//! random-walk (Aldous–Broder) construction: walk the weighted graph from a
//! start vertex and keep, for every other vertex, the edge along which it
//! was first entered. The kept edges form a spanning tree directed toward
//! the start, distributed exactly as the weight-selected spanning tree.
//!
//! Determinism contract: all randomness comes from [`SplitMix64`] (the
//! constants are spelled out on the type), so a given (graph, start, seed)
//! triple reproduces the same tree bit-for-bit on any platform. Batch runs
//! derive per-trial seeds with [`split_seed`].

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::graph::{EdgeId, EdgeSet, Graph, OrientedEdge, VertexId};
use crate::oracle::matrix_tree_count;
use crate::{Error, Result};

/// SplitMix64 (Steele, Lea, Flood 2014): the state advances by the
/// golden-gamma constant 0x9E3779B97F4A7C15 and each output is the
/// finalizer `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
/// z *= 0x94D049BB133111EB; z ^= z >> 31`. Five documented constants are
/// enough to reproduce the stream exactly in any language.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

pub const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(SPLITMIX_GAMMA);
        splitmix_finalize(self.state)
    }

    /// Uniform double in [0, 1) with 53 significant bits.
    pub fn next_unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn splitmix_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a batch: output number `index` of the
/// SplitMix64 stream started at `seed`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    splitmix_finalize(seed.wrapping_add(SPLITMIX_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

/// A spanning tree directed toward its root: every non-root vertex stores
/// the edge (and predecessor) along which it was first reached, so
/// following parents from any vertex always leads to the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedSpanningTree {
    pub root: VertexId,
    /// `parent[v] = Some((edge id, predecessor))` for every v != root.
    pub parent: Vec<Option<(EdgeId, VertexId)>>,
}

impl DirectedSpanningTree {
    /// The undirected edge set of the tree.
    pub fn edge_set(&self) -> EdgeSet {
        self.parent
            .iter()
            .flatten()
            .map(|&(edge, _)| edge)
            .collect()
    }

    /// Oriented parent edge of `v`, pointing from v toward its predecessor.
    pub fn parent_edge(&self, g: &Graph, v: VertexId) -> Option<OrientedEdge> {
        self.parent[v].map(|(id, _)| {
            let edge = g.edge(id).expect("tree edge");
            OrientedEdge::new(id, edge.u == v)
        })
    }

    /// Checks the directedness invariant: parent pointers are acyclic and
    /// every vertex reaches the root.
    pub fn arrows_reach_root(&self) -> bool {
        let n = self.parent.len();
        for start in 0..n {
            let mut v = start;
            let mut steps = 0;
            while v != self.root {
                match self.parent[v] {
                    Some((_, up)) => v = up,
                    None => return false,
                }
                steps += 1;
                if steps > n {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical census key: the sorted edge ids joined by commas.
    pub fn canonical_encoding(&self) -> String {
        let ids: Vec<String> = self.edge_set().iter().map(|id| id.to_string()).collect();
        ids.join(",")
    }
}

/// Per-vertex cumulative weights over the adjacency list. Self-edges appear
/// twice in the list, so their mass counts double, matching d(v).
fn cumulative_weights(g: &Graph) -> Vec<Vec<f64>> {
    (0..g.vertex_count())
        .map(|v| {
            let mut acc = 0.0;
            g.adjacency(v)
                .iter()
                .map(|&(id, _)| {
                    acc += g
                        .edge(id)
                        .expect("adjacency id")
                        .weight
                        .to_f64()
                        .expect("weight fits f64");
                    acc
                })
                .collect()
        })
        .collect()
}

/// One weighted random-walk step from `v`: cumulative-weight inversion over
/// the incident list in id order, so the choice is deterministic in the
/// drawn uniform.
fn walk_step(
    g: &Graph,
    cumulative: &[Vec<f64>],
    rng: &mut SplitMix64,
    v: VertexId,
) -> (EdgeId, VertexId) {
    let cum = &cumulative[v];
    let total = *cum.last().expect("connected graph vertex has edges");
    let r = rng.next_unit_f64() * total;
    let slot = cum.partition_point(|&c| c <= r).min(cum.len() - 1);
    g.adjacency(v)[slot]
}

/// Runs the weighted random walk from `start` until every vertex has been
/// visited, recording first-entry edges. Self-edges are legal lazy steps
/// that never add a tree edge.
pub fn aldous_broder(g: &Graph, start: VertexId, seed: u64) -> Result<DirectedSpanningTree> {
    g.check_vertex(start)?;
    g.require_connected()?;
    let n = g.vertex_count();
    let mut tree = DirectedSpanningTree {
        root: start,
        parent: vec![None; n],
    };
    if n == 1 {
        return Ok(tree);
    }
    let cumulative = cumulative_weights(g);
    let mut rng = SplitMix64::new(seed);
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut remaining = n - 1;
    let mut current = start;
    while remaining > 0 {
        let (edge, next) = walk_step(g, &cumulative, &mut rng, current);
        if !visited[next] {
            visited[next] = true;
            tree.parent[next] = Some((edge, current));
            remaining -= 1;
        }
        current = next;
    }
    debug_assert!(tree.arrows_reach_root());
    Ok(tree)
}

/// Applies the first-entry rule to an explicit walk given as a vertex
/// sequence (for simple graphs, where consecutive vertices determine the
/// edge). Errors if a step uses a missing edge or the walk ends before
/// covering the graph.
pub fn tree_from_walk(g: &Graph, walk: &[VertexId]) -> Result<DirectedSpanningTree> {
    let (&start, rest) = walk.split_first().ok_or(Error::WalkIncomplete)?;
    g.check_vertex(start)?;
    let n = g.vertex_count();
    let mut tree = DirectedSpanningTree {
        root: start,
        parent: vec![None; n],
    };
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut remaining = n - 1;
    if remaining == 0 {
        return Ok(tree);
    }
    let mut current = start;
    for &next in rest {
        g.check_vertex(next)?;
        let edge = g
            .adjacency(current)
            .iter()
            .find(|&&(_, other)| other == next)
            .map(|&(id, _)| id)
            .ok_or(Error::NoConnectingEdge {
                from: current,
                to: next,
            })?;
        if !visited[next] {
            visited[next] = true;
            tree.parent[next] = Some((edge, current));
            remaining -= 1;
        }
        current = next;
        if remaining == 0 {
            return Ok(tree);
        }
    }
    Err(Error::WalkIncomplete)
}

/// Per-edge inclusion frequencies over `trials` independent samples, all
/// started at vertex 0, with trial seeds derived by [`split_seed`].
pub fn sample_frequencies(g: &Graph, trials: u64, seed: u64) -> Result<BTreeMap<EdgeId, f64>> {
    assert!(trials >= 1, "need at least one trial");
    let mut counts: BTreeMap<EdgeId, u64> = g.edge_ids().map(|id| (id, 0)).collect();
    for trial in 0..trials {
        let tree = aldous_broder(g, 0, split_seed(seed, trial))?;
        for id in tree.edge_set() {
            *counts.get_mut(&id).expect("edge id") += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(id, c)| (id, c as f64 / trials as f64))
        .collect())
}

/// Whole-tree census over `trials` samples keyed by the canonical sorted
/// edge-id encoding. Guarded by the oracle's exact tree count.
pub fn sample_tree_census(g: &Graph, trials: u64, seed: u64) -> Result<BTreeMap<String, u64>> {
    sample_tree_census_from(g, 0, trials, seed)
}

/// [`sample_tree_census`] with an explicit start vertex; the sampled law
/// does not depend on the start, which the tests exploit.
pub fn sample_tree_census_from(
    g: &Graph,
    start: VertexId,
    trials: u64,
    seed: u64,
) -> Result<BTreeMap<String, u64>> {
    assert!(trials >= 1, "need at least one trial");
    let count = matrix_tree_count(g)?.to_integer();
    if count > 100u32.into() {
        return Err(Error::TooLarge {
            op: "sample_tree_census",
            limit: 100,
            actual: count.to_usize().unwrap_or(usize::MAX),
        });
    }
    let mut census: BTreeMap<String, u64> = BTreeMap::new();
    for trial in 0..trials {
        let tree = aldous_broder(g, start, split_seed(seed, trial))?;
        *census.entry(tree.canonical_encoding()).or_insert(0) += 1;
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{example_house_graph, generate_family, Family, Graph};
    use crate::{rat, rat_int};

    /// The 3-regular six-vertex graph behind the walk-trace fixture:
    /// A,B,C,D outer square, E,F inner bar.
    fn walk_example_graph() -> (Graph, [VertexId; 6]) {
        let (a, b, c, d, e, f) = (0, 1, 2, 3, 4, 5);
        let g = Graph::unweighted(
            6,
            &[
                (a, b), // 0
                (a, d), // 1
                (a, e), // 2
                (b, c), // 3
                (b, f), // 4
                (c, d), // 5
                (c, f), // 6
                (d, e), // 7
                (e, f), // 8
            ],
        )
        .unwrap();
        (g, [a, b, c, d, e, f])
    }

    #[test]
    fn splitmix_reference_stream() {
        // Published test vector for seed 1234567.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
        let mut zero = SplitMix64::new(0);
        assert_eq!(zero.next_u64(), 16294208416658607535);
        // split_seed(s, i) is output i of the stream from s.
        assert_eq!(split_seed(1234567, 0), 6457827717110365317);
        assert_eq!(split_seed(1234567, 2), 9817491932198370423);
    }

    #[test]
    fn unit_interval_bounds() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..1000 {
            let u = rng.next_unit_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn path_graph_has_unique_tree() {
        let g = generate_family(Family::Path, 3).unwrap();
        for seed in [0, 1, 42] {
            let tree = aldous_broder(&g, 0, seed).unwrap();
            assert_eq!(tree.edge_set(), g.edge_ids().collect());
        }
    }

    #[test]
    fn single_vertex_tree() {
        let g = Graph::unweighted(1, &[]).unwrap();
        let tree = aldous_broder(&g, 0, 7).unwrap();
        assert!(tree.edge_set().is_empty());
        assert!(tree.arrows_reach_root());
    }

    #[test]
    fn disconnected_graph_detected_up_front() {
        let g = Graph::unweighted(3, &[(0, 1)]).unwrap();
        assert_eq!(aldous_broder(&g, 0, 1), Err(Error::Disconnected));
    }

    #[test]
    fn walk_trace_reproduces_documented_tree() {
        let (g, [a, b, c, d, e, f]) = walk_example_graph();
        let tree = tree_from_walk(&g, &[a, b, f, b, c, d, a, e]).unwrap();
        // First-entry edges: BA, FB, CB, DC, EA.
        assert_eq!(tree.parent[b], Some((0, a)));
        assert_eq!(tree.parent[f], Some((4, b)));
        assert_eq!(tree.parent[c], Some((3, b)));
        assert_eq!(tree.parent[d], Some((5, c)));
        assert_eq!(tree.parent[e], Some((2, a)));
        assert!(tree.arrows_reach_root());
        let expected: EdgeSet = [0, 2, 3, 4, 5].into_iter().collect();
        assert_eq!(tree.edge_set(), expected);
    }

    #[test]
    fn walk_trace_errors() {
        let (g, [a, b, ..]) = walk_example_graph();
        assert_eq!(tree_from_walk(&g, &[a, b]), Err(Error::WalkIncomplete));
        assert!(matches!(
            tree_from_walk(&g, &[a, 1, 4]), // B and E are not adjacent
            Err(Error::NoConnectingEdge { .. })
        ));
    }

    #[test]
    fn samples_are_spanning_trees() {
        let g = example_house_graph();
        for seed in 0..200u64 {
            let tree = aldous_broder(&g, (seed % 5) as usize, seed).unwrap();
            assert!(g.is_spanning_tree(&tree.edge_set()), "seed {seed}");
            assert!(tree.arrows_reach_root());
        }
    }

    #[test]
    fn fixed_seed_is_bit_stable() {
        let g = example_house_graph();
        let one = aldous_broder(&g, 0, 42).unwrap();
        let two = aldous_broder(&g, 0, 42).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn lazy_self_edges_keep_tree_support() {
        let g = example_house_graph();
        let r = g.regularize();
        for seed in 0..100 {
            let tree = aldous_broder(&r, 0, seed).unwrap();
            // Trees of the regularized graph are trees of the original.
            assert!(g.is_spanning_tree(&tree.edge_set()), "seed {seed}");
        }
    }

    #[test]
    fn frequencies_match_exact_probabilities() {
        let g = Graph::build(
            3,
            &[(0, 1, rat_int(2)), (1, 2, rat_int(1)), (2, 0, rat_int(1))],
        )
        .unwrap();
        let trials = 30_000u64;
        let freq = sample_frequencies(&g, trials, 2024).unwrap();
        // P(ab in T) = 4/5 by weighted enumeration.
        let p = 0.8;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq[&0] - p).abs() < 3.0 * sigma, "freq {}", freq[&0]);
    }

    #[test]
    fn uniform_triangle_frequencies() {
        let g = Graph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let trials = 30_000u64;
        let freq = sample_frequencies(&g, trials, 7).unwrap();
        let sigma = (2.0 / 3.0 * (1.0 / 3.0) / trials as f64).sqrt();
        for id in 0..3 {
            assert!((freq[&id] - 2.0 / 3.0).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn census_covers_all_trees() {
        let g = Graph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let census = sample_tree_census(&g, 6000, 5).unwrap();
        assert_eq!(census.len(), 3);
        let total: u64 = census.values().sum();
        assert_eq!(total, 6000);
    }

    #[test]
    fn census_guard() {
        let g = generate_family(Family::Torus, 3).unwrap();
        assert!(matches!(
            sample_tree_census(&g, 10, 5),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn weighted_census_frequencies() {
        use num_traits::ToPrimitive;
        let g = Graph::build(
            3,
            &[(0, 1, rat_int(2)), (1, 2, rat_int(1)), (2, 0, rat_int(1))],
        )
        .unwrap();
        let trials = 50_000u64;
        let census = sample_tree_census(&g, trials, 31).unwrap();
        // Trees {0,1}, {0,2}, {1,2} have probabilities 2/5, 2/5, 1/5.
        for (key, p) in [("0,1", rat(2, 5)), ("0,2", rat(2, 5)), ("1,2", rat(1, 5))] {
            let p = p.to_f64().unwrap();
            let got = census[key] as f64 / trials as f64;
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((got - p).abs() < 4.0 * sigma, "{key}: {got} vs {p}");
        }
    }
}
