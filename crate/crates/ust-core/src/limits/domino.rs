//! The tree/domino correspondence on a finite planar window.
//!
//! Refine the m-by-m grid by a factor of two: grid vertices sit on the even
//! cells of a (2m-1)-by-(2m-1) board, edge midpoints on the odd-sum cells,
//! and grid faces on the odd-odd cells. Given a spanning tree of the grid,
//! direct it toward the root vertex in the deleted corner, and cover each
//! non-root vertex by a domino lying along its outgoing edge; direct the
//! dual forest (the edges crossing non-tree edges) toward the outer face
//! and cover each face the same way. Every cell of the corner-deleted
//! board ends up covered exactly once, and distinct trees give distinct
//! tilings.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::{generate_family, grid_vertex, EdgeSet, Family};
use crate::{Error, Result};

/// A cell of the refined board, `(x, y)` with the origin at the deleted
/// lower-left corner.
pub type Cell = (usize, usize);

/// A domino tiling of the (2m-1)-by-(2m-1) board minus its lower-left
/// corner cell: every remaining cell covered exactly once, each domino a
/// pair of orthogonally adjacent cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominoTiling {
    pub m: usize,
    pub dominoes: Vec<(Cell, Cell)>,
}

impl DominoTiling {
    pub fn board_size(&self) -> usize {
        2 * self.m - 1
    }

    /// All cells of the board (the deleted corner excluded).
    pub fn board_cells(&self) -> BTreeSet<Cell> {
        let side = self.board_size();
        (0..side)
            .flat_map(|x| (0..side).map(move |y| (x, y)))
            .filter(|&cell| cell != (0, 0))
            .collect()
    }

    /// Exact-cover check: every board cell covered once, every domino on
    /// two orthogonally adjacent in-board cells.
    pub fn validate(&self) -> Result<()> {
        let mut covered = BTreeSet::new();
        let side = self.board_size();
        for &(a, b) in &self.dominoes {
            let adjacent = (a.0 == b.0 && a.1.abs_diff(b.1) == 1)
                || (a.1 == b.1 && a.0.abs_diff(b.0) == 1);
            let in_board = |c: Cell| c.0 < side && c.1 < side && c != (0, 0);
            if !adjacent || !in_board(a) || !in_board(b) {
                return Err(Error::NotSpanningTree);
            }
            if !covered.insert(a) || !covered.insert(b) {
                return Err(Error::NotSpanningTree);
            }
        }
        if covered == self.board_cells() {
            Ok(())
        } else {
            Err(Error::NotSpanningTree)
        }
    }

    /// Canonical string of the sorted domino list, for injectivity checks.
    pub fn canonical_encoding(&self) -> String {
        let mut pairs: Vec<(Cell, Cell)> = self
            .dominoes
            .iter()
            .map(|&(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort();
        pairs
            .iter()
            .map(|((ax, ay), (bx, by))| format!("{ax},{ay}-{bx},{by}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn vertex_cell(m: usize, v: usize) -> Cell {
    (2 * (v % m), 2 * (v / m))
}

/// Midpoint cell of the grid edge with the given endpoints.
fn edge_midpoint(m: usize, u: usize, v: usize) -> Cell {
    let (ux, uy) = (u % m, u / m);
    let (vx, vy) = (v % m, v / m);
    (ux + vx, uy + vy)
}

/// Maps a spanning tree of the n-by-n grid to a domino tiling of the
/// corner-deleted board. Errors when the edge set is not a spanning tree.
pub fn temperley_matching(m: usize, tree: &EdgeSet) -> Result<DominoTiling> {
    if m < 2 {
        return Err(Error::InvalidFamily {
            family: "domino window",
            n: m,
        });
    }
    let g = generate_family(Family::Grid, m)?;
    if !g.is_spanning_tree(tree) {
        return Err(Error::NotSpanningTree);
    }
    let mut dominoes = Vec::new();

    // Primal side: direct the tree toward the root at the deleted corner's
    // vertex (0,0); each non-root vertex is covered along its parent edge.
    let root = grid_vertex(m, 0, 0);
    let mut parent: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(id, other) in g.adjacency(v) {
            if tree.contains(&id) && !seen[other] {
                seen[other] = true;
                parent[other] = Some(v);
                queue.push_back(other);
            }
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "spanning tree reaches everything");
    for v in 0..g.vertex_count() {
        if let Some(p) = parent[v] {
            dominoes.push((vertex_cell(m, v), edge_midpoint(m, v, p)));
        }
    }

    // Dual side: faces are the grid squares, plus the outer face. Each
    // non-tree edge crosses a dual edge between the two faces it borders;
    // the dual of the complement is a spanning tree of the faces, directed
    // toward the outer face.
    let faces = (m - 1) * (m - 1);
    let outer = faces;
    let mut dual_adjacency: Vec<Vec<(usize, Cell)>> = vec![Vec::new(); faces + 1];
    for edge in g.edges() {
        if tree.contains(&edge.id) {
            continue;
        }
        let midpoint = edge_midpoint(m, edge.u, edge.v);
        let (ux, uy) = (edge.u % m, edge.u / m);
        let (vx, vy) = (edge.v % m, edge.v / m);
        let (side_a, side_b) = if uy == vy {
            // Horizontal edge at row y: faces above and below.
            let (x, y) = (ux.min(vx), uy);
            let above = if y < m - 1 { y * (m - 1) + x } else { outer };
            let below = if y > 0 { (y - 1) * (m - 1) + x } else { outer };
            (above, below)
        } else {
            // Vertical edge at column x: faces right and left.
            let (x, y) = (ux, uy.min(vy));
            let right = if x < m - 1 { y * (m - 1) + x } else { outer };
            let left = if x > 0 { y * (m - 1) + x - 1 } else { outer };
            (right, left)
        };
        dual_adjacency[side_a].push((side_b, midpoint));
        dual_adjacency[side_b].push((side_a, midpoint));
    }
    let mut face_exit: Vec<Option<Cell>> = vec![None; faces];
    let mut face_seen = vec![false; faces + 1];
    face_seen[outer] = true;
    let mut queue = VecDeque::from([outer]);
    while let Some(f) = queue.pop_front() {
        for &(next, midpoint) in &dual_adjacency[f] {
            if !face_seen[next] {
                face_seen[next] = true;
                face_exit[next] = Some(midpoint);
                queue.push_back(next);
            }
        }
    }
    debug_assert!(
        face_seen.iter().all(|&s| s),
        "complement dual spans the faces of a spanning tree"
    );
    for f in 0..faces {
        let (i, j) = (f % (m - 1), f / (m - 1));
        let face_cell = (2 * i + 1, 2 * j + 1);
        let exit = face_exit[f].expect("dual tree covers every face");
        dominoes.push((face_cell, exit));
    }

    let tiling = DominoTiling { m, dominoes };
    tiling.validate()?;
    Ok(tiling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_spanning_trees;

    #[test]
    fn grid2_trees_give_four_distinct_valid_tilings() {
        let g = generate_family(Family::Grid, 2).unwrap();
        let trees = enumerate_spanning_trees(&g).unwrap();
        assert_eq!(trees.count(), 4);
        let mut seen = BTreeSet::new();
        for tree in &trees.trees {
            let tiling = temperley_matching(2, tree).unwrap();
            tiling.validate().unwrap();
            assert_eq!(tiling.dominoes.len(), 4); // 8 cells
            seen.insert(tiling.canonical_encoding());
        }
        // The corner-deleted 3x3 board has exactly four perfect matchings,
        // so the map is onto as well as injective here.
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn grid3_map_is_injective() {
        let g = generate_family(Family::Grid, 3).unwrap();
        let trees = enumerate_spanning_trees(&g).unwrap();
        assert_eq!(trees.count(), 192);
        let mut seen = BTreeSet::new();
        for tree in &trees.trees {
            let tiling = temperley_matching(3, tree).unwrap();
            seen.insert(tiling.canonical_encoding());
        }
        assert_eq!(seen.len(), 192);
    }

    #[test]
    fn rejects_non_trees() {
        let g = generate_family(Family::Grid, 2).unwrap();
        let cycle: EdgeSet = g.edge_ids().collect();
        assert_eq!(
            temperley_matching(2, &cycle),
            Err(Error::NotSpanningTree)
        );
        let empty = EdgeSet::new();
        assert_eq!(temperley_matching(2, &empty), Err(Error::NotSpanningTree));
        assert!(matches!(
            temperley_matching(1, &EdgeSet::new()),
            Err(Error::InvalidFamily { .. })
        ));
    }
}
