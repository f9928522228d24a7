//! Rooted trees, tree-maps, and critical branching-process samplers.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::sampler::{split_seed, SplitMix64};

/// A finite rooted tree up to labeled embedding: just the recursive list of
/// child subtrees. Parsed from and rendered to a parenthesis encoding in
/// which every balanced group is a vertex and nested groups are its
/// children: `()` is a single vertex, `(()())` a root with two leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub children: Vec<RootedTree>,
}

impl RootedTree {
    pub fn leaf() -> RootedTree {
        RootedTree {
            children: Vec::new(),
        }
    }

    /// Root with `n` leaf children.
    pub fn star(n: usize) -> RootedTree {
        RootedTree {
            children: vec![RootedTree::leaf(); n],
        }
    }

    /// Path with `edges` edges hanging off the root (so `edges + 1` vertices).
    pub fn path(edges: usize) -> RootedTree {
        let mut tree = RootedTree::leaf();
        for _ in 0..edges {
            tree = RootedTree {
                children: vec![tree],
            };
        }
        tree
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(RootedTree::size).sum::<usize>()
    }

    /// Maximum distance from the root.
    pub fn height(&self) -> usize {
        self.children
            .iter()
            .map(|c| 1 + c.height())
            .max()
            .unwrap_or(0)
    }

    /// Number of children of the root.
    pub fn root_degree(&self) -> usize {
        self.children.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        out.push('(');
        for child in &self.children {
            child.render_into(out);
        }
        out.push(')');
    }

    /// Parses the parenthesis encoding; the input must be one balanced
    /// group containing only parentheses.
    pub fn parse(text: &str) -> Option<RootedTree> {
        let bytes = text.trim().as_bytes();
        let (tree, used) = parse_group(bytes)?;
        if used == bytes.len() {
            Some(tree)
        } else {
            None
        }
    }
}

fn parse_group(bytes: &[u8]) -> Option<(RootedTree, usize)> {
    if bytes.first() != Some(&b'(') {
        return None;
    }
    let mut children = Vec::new();
    let mut pos = 1;
    loop {
        match bytes.get(pos)? {
            b')' => return Some((RootedTree { children }, pos + 1)),
            b'(' => {
                let (child, used) = parse_group(&bytes[pos..])?;
                children.push(child);
                pos += used;
            }
            _ => return None,
        }
    }
}

/// pmf of one plus a Poisson of mean one: `e^-1 / (k-1)!` for k >= 1,
/// zero at k = 0. The mean is 2.
pub fn poisson_plus_one_pmf(k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        poisson1_pmf(k - 1)
    }
}

/// pmf table of [`poisson_plus_one_pmf`] up to `k_max` inclusive.
pub fn poisson_plus_one_truncated(k_max: usize) -> BTreeMap<usize, f64> {
    (0..=k_max).map(|k| (k, poisson_plus_one_pmf(k))).collect()
}

fn poisson1_pmf(j: usize) -> f64 {
    let mut factorial = 1.0;
    for i in 1..=j {
        factorial *= i as f64;
    }
    (-1.0f64).exp() / factorial
}

/// Cumulative Poisson(1) table to k = 40; the remaining tail mass is below
/// 1e-48, unreachable with a 53-bit uniform draw.
const POISSON_TABLE_LEN: usize = 41;

fn poisson1_cumulative() -> &'static [f64; POISSON_TABLE_LEN] {
    static TABLE: OnceLock<[f64; POISSON_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; POISSON_TABLE_LEN];
        let mut acc = 0.0;
        for (j, slot) in table.iter_mut().enumerate() {
            acc += poisson1_pmf(j);
            *slot = acc;
        }
        table
    })
}

/// Poisson(1) draw by inversion of the cumulative table.
fn sample_poisson1(rng: &mut SplitMix64) -> usize {
    let u = rng.next_unit_f64();
    let table = poisson1_cumulative();
    table.partition_point(|&c| c <= u).min(POISSON_TABLE_LEN - 1)
}

/// Tree of a critical Galton–Watson process with Poisson(1) offspring,
/// truncated at `max_depth` (vertices at that depth get no children).
/// Offspring counts are drawn depth-first in child order, so the sample is
/// a deterministic function of the seed.
pub fn galton_watson_sample(seed: u64, max_depth: usize) -> RootedTree {
    let mut rng = SplitMix64::new(seed);
    gw_rec(&mut rng, 0, max_depth)
}

fn gw_rec(rng: &mut SplitMix64, depth: usize, max_depth: usize) -> RootedTree {
    if depth == max_depth {
        return RootedTree::leaf();
    }
    let offspring = sample_poisson1(rng);
    let children = (0..offspring)
        .map(|_| gw_rec(rng, depth + 1, max_depth))
        .collect();
    RootedTree { children }
}

/// Truncation to height `r` of the incipient infinite cluster: a backbone
/// of `r` edges with an independent critical Poisson(1) tree pasted onto
/// every backbone vertex, everything cut at depth `r` from the root. At
/// each backbone vertex the backbone child is generated first, then the
/// pasted tree, depth-first.
pub fn incipient_cluster_sample(r: usize, seed: u64) -> RootedTree {
    let mut rng = SplitMix64::new(seed);
    backbone_rec(&mut rng, 0, r)
}

fn backbone_rec(rng: &mut SplitMix64, level: usize, r: usize) -> RootedTree {
    let mut children = Vec::new();
    if level < r {
        children.push(backbone_rec(rng, level + 1, r));
    }
    let pasted = gw_rec(rng, level, r);
    children.extend(pasted.children);
    RootedTree { children }
}

/// Number of tree-maps of `t` into `w`: injective maps sending root to root
/// and, level by level, children of a vertex into distinct children of its
/// image. For an n-star this is the falling factorial `(deg root)_n`, so
/// tree-maps generalize factorial moments.
pub fn tree_map_count(w: &RootedTree, t: &RootedTree) -> u64 {
    // Cheap pruning: an embedding preserves depth and cardinality.
    if t.height() > w.height() || t.size() > w.size() {
        return 0;
    }
    count_child_maps(&w.children, &t.children)
}

fn count_child_maps(w_children: &[RootedTree], t_children: &[RootedTree]) -> u64 {
    if t_children.len() > w_children.len() {
        return 0;
    }
    let mut used = vec![false; w_children.len()];
    assign(w_children, t_children, 0, &mut used)
}

fn assign(
    w_children: &[RootedTree],
    t_children: &[RootedTree],
    slot: usize,
    used: &mut Vec<bool>,
) -> u64 {
    if slot == t_children.len() {
        return 1;
    }
    let mut total = 0;
    for (w_slot, w_child) in w_children.iter().enumerate() {
        if used[w_slot] {
            continue;
        }
        let below = count_child_maps(&w_child.children, &t_children[slot].children);
        if below == 0 {
            continue;
        }
        used[w_slot] = true;
        total += below * assign(w_children, t_children, slot + 1, used);
        used[w_slot] = false;
    }
    total
}

/// Mean and standard error of a Monte Carlo estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl MonteCarloEstimate {
    fn from_counts(values: impl Iterator<Item = f64>, samples: u64) -> MonteCarloEstimate {
        let mut mean = 0.0;
        let mut m2 = 0.0;
        let mut n = 0.0;
        for value in values {
            n += 1.0;
            let delta = value - mean;
            mean += delta / n;
            m2 += delta * (value - mean);
        }
        let variance = if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
        MonteCarloEstimate {
            mean,
            std_error: (variance / n).sqrt(),
            samples,
        }
    }

    /// |estimate - target| measured in standard errors.
    pub fn sigmas_from(&self, target: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == target {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - target).abs() / self.std_error
        }
    }
}

/// Monte Carlo mean of `tree_map_count(U, t)` over Galton–Watson samples
/// truncated just beyond the height of `t` (truncation at height(t) + 1
/// cannot remove any map image).
pub fn gw_tree_moment(t: &RootedTree, samples: u64, seed: u64) -> MonteCarloEstimate {
    assert!(samples >= 1, "need at least one sample");
    assert!(t.height() <= 6, "tree too tall for the sampler guard");
    let depth = t.height() + 1;
    MonteCarloEstimate::from_counts(
        (0..samples).map(|i| {
            let u = galton_watson_sample(split_seed(seed, i), depth);
            tree_map_count(&u, t) as f64
        }),
        samples,
    )
}

/// Monte Carlo mean of `tree_map_count` against the truncated incipient
/// cluster; for `height(t) < r` the expectation is exactly `|t|`.
pub fn incipient_tree_moment(
    t: &RootedTree,
    r: usize,
    samples: u64,
    seed: u64,
) -> MonteCarloEstimate {
    assert!(samples >= 1, "need at least one sample");
    MonteCarloEstimate::from_counts(
        (0..samples).map(|i| {
            let w = incipient_cluster_sample(r, split_seed(seed, i));
            tree_map_count(&w, t) as f64
        }),
        samples,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for text in ["()", "(()())", "((()))", "(()()())", "((()())())"] {
            let tree = RootedTree::parse(text).unwrap();
            assert_eq!(tree.render(), text);
        }
        assert!(RootedTree::parse("").is_none());
        assert!(RootedTree::parse("()()").is_none());
        assert!(RootedTree::parse("(()").is_none());
        assert!(RootedTree::parse("(a)").is_none());
    }

    #[test]
    fn size_and_height() {
        let two_star = RootedTree::star(2);
        assert_eq!(two_star.size(), 3);
        assert_eq!(two_star.height(), 1);
        let path = RootedTree::path(2);
        assert_eq!(path.size(), 3);
        assert_eq!(path.height(), 2);
    }

    #[test]
    fn pmf_values() {
        let e_inv = (-1.0f64).exp();
        assert_eq!(poisson_plus_one_pmf(0), 0.0);
        assert!((poisson_plus_one_pmf(1) - e_inv).abs() < 1e-15);
        assert!((poisson_plus_one_pmf(2) - e_inv).abs() < 1e-15);
        assert!((poisson_plus_one_pmf(3) - e_inv / 2.0).abs() < 1e-15);
        let total: f64 = poisson_plus_one_truncated(40).values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mean: f64 = poisson_plus_one_truncated(40)
            .iter()
            .map(|(&k, p)| k as f64 * p)
            .sum();
        assert!((mean - 2.0).abs() < 1e-12);
    }

    #[test]
    fn worked_tree_map_example() {
        // t: root with children A (two leaves below) and B.
        // W: root with children E (two leaves), F, G (one leaf).
        // Four maps: C,D onto E's leaves in either order, B onto F or G.
        let t = RootedTree::parse("((()())())").unwrap();
        let w = RootedTree::parse("((()())()(()))").unwrap();
        assert_eq!(tree_map_count(&w, &t), 4);
    }

    #[test]
    fn star_maps_are_falling_factorials() {
        let w = RootedTree::star(3);
        assert_eq!(tree_map_count(&w, &RootedTree::star(2)), 6);
        assert_eq!(tree_map_count(&w, &RootedTree::star(3)), 6);
        assert_eq!(tree_map_count(&w, &RootedTree::star(4)), 0);
        assert_eq!(tree_map_count(&w, &RootedTree::leaf()), 1);
    }

    #[test]
    fn tree_map_respects_height_and_size() {
        let w = RootedTree::star(2);
        assert_eq!(tree_map_count(&w, &RootedTree::path(2)), 0);
        let w = RootedTree::path(3);
        assert_eq!(tree_map_count(&w, &RootedTree::path(4)), 0);
    }

    #[test]
    fn galton_watson_is_deterministic() {
        let a = galton_watson_sample(99, 8);
        let b = galton_watson_sample(99, 8);
        assert_eq!(a, b);
        assert!(a.height() <= 8);
    }

    #[test]
    fn galton_watson_root_offspring_mean() {
        let samples = 100_000u64;
        let total: u64 = (0..samples)
            .map(|i| galton_watson_sample(split_seed(4, i), 1).root_degree() as u64)
            .sum();
        let mean = total as f64 / samples as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean offspring {mean}");
    }

    #[test]
    fn critical_process_dies_out() {
        let samples = 20_000u64;
        let extinct = (0..samples)
            .filter(|&i| galton_watson_sample(split_seed(11, i), 50).height() < 50)
            .count();
        let rate = extinct as f64 / samples as f64;
        assert!(rate >= 0.95, "extinction rate {rate}");
    }

    #[test]
    fn incipient_base_cases() {
        assert_eq!(incipient_cluster_sample(0, 5), RootedTree::leaf());
        let t = incipient_cluster_sample(3, 5);
        assert!(t.height() <= 3);
        assert!(t.root_degree() >= 1); // the backbone child is always there
    }

    #[test]
    fn gw_moment_of_single_vertex_is_exactly_one() {
        let est = gw_tree_moment(&RootedTree::leaf(), 100, 3);
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn gw_moments_are_one() {
        for t in [RootedTree::path(2), RootedTree::star(3)] {
            let est = gw_tree_moment(&t, 50_000, 17);
            assert!(
                est.sigmas_from(1.0) < 3.0,
                "{}: mean {} se {}",
                t.render(),
                est.mean,
                est.std_error
            );
        }
    }

    #[test]
    fn incipient_moments_are_tree_sizes() {
        for t in [RootedTree::path(1), RootedTree::path(2), RootedTree::star(3)] {
            let est = incipient_tree_moment(&t, 3, 50_000, 23);
            let target = t.size() as f64;
            assert!(
                est.sigmas_from(target) < 3.0,
                "{}: mean {} vs {}",
                t.render(),
                est.mean,
                target
            );
        }
    }
}
