//! Four-connected grid graphs.
//!
//! Every cell of the grid is a vertex, including cells covered by static
//! obstacles: mover agents may travel underneath them, so they cannot simply
//! be deleted from the graph. Each vertex also carries an implicit self-loop
//! that models a wait action.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense vertex index, `y * width + x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex(pub u32);

impl Vertex {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Column/row coordinate of a cell. Column first, as in MovingAI files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: u32,
    pub y: u32,
}

impl Cell {
    pub const fn new(x: u32, y: u32) -> Self {
        Cell { x, y }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Distance value used for unreachable vertices in distance maps.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    width: u32,
    height: u32,
    static_obstacle: Vec<bool>,
}

impl Graph {
    /// Obstacle-free `width` x `height` grid.
    pub fn new(width: u32, height: u32) -> Self {
        assert!(width > 0 && height > 0, "grid must be non-empty");
        Graph {
            width,
            height,
            static_obstacle: vec![false; (width * height) as usize],
        }
    }

    pub fn with_static_obstacles(width: u32, height: u32, cells: &[Cell]) -> Self {
        let mut graph = Graph::new(width, height);
        for &c in cells {
            let v = graph.vertex(c).expect("static obstacle outside grid");
            graph.set_static(v, true);
        }
        graph
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Number of vertices (= cells).
    pub fn len(&self) -> usize {
        self.static_obstacle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.static_obstacle.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.len() as u32).map(Vertex)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.index() < self.len()
    }

    pub fn vertex(&self, c: Cell) -> Option<Vertex> {
        (c.x < self.width && c.y < self.height).then(|| Vertex(c.y * self.width + c.x))
    }

    pub fn cell(&self, v: Vertex) -> Cell {
        Cell {
            x: v.0 % self.width,
            y: v.0 / self.width,
        }
    }

    pub fn is_static(&self, v: Vertex) -> bool {
        self.static_obstacle[v.index()]
    }

    pub fn set_static(&mut self, v: Vertex, blocked: bool) {
        self.static_obstacle[v.index()] = blocked;
    }

    pub fn static_mask(&self) -> &[bool] {
        &self.static_obstacle
    }

    /// Orthogonal neighbours in increasing vertex order (no self-loop).
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> {
        let Cell { x, y } = self.cell(v);
        let w = self.width;
        let h = self.height;
        let up = (y > 0).then(|| Vertex(v.0 - w));
        let left = (x > 0).then(|| Vertex(v.0 - 1));
        let right = (x + 1 < w).then(|| Vertex(v.0 + 1));
        let down = (y + 1 < h).then(|| Vertex(v.0 + w));
        [up, left, right, down].into_iter().flatten()
    }

    /// Wait edge first, then the orthogonal neighbours.
    pub fn successors(&self, v: Vertex) -> impl Iterator<Item = Vertex> {
        std::iter::once(v).chain(self.neighbors(v))
    }

    /// `(a, b)` is an edge of the graph: equal (self-loop) or orthogonally adjacent.
    pub fn is_edge(&self, a: Vertex, b: Vertex) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        self.manhattan(a, b) <= 1
    }

    pub fn manhattan(&self, a: Vertex, b: Vertex) -> u32 {
        let (ca, cb) = (self.cell(a), self.cell(b));
        ca.x.abs_diff(cb.x) + ca.y.abs_diff(cb.y)
    }

    /// Longest shortest path in the obstacle-free grid.
    pub fn diameter(&self) -> u32 {
        self.width + self.height - 2
    }

    /// Breadth-first distances from `source` over vertices accepted by `passable`.
    /// The source itself is always expanded.
    pub fn bfs_distances(&self, source: Vertex, passable: impl Fn(Vertex) -> bool) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.len()];
        let mut queue = VecDeque::new();
        dist[source.index()] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v.index()];
            for n in self.neighbors(v) {
                if dist[n.index()] == UNREACHABLE && passable(n) {
                    dist[n.index()] = d + 1;
                    queue.push_back(n);
                }
            }
        }
        dist
    }

    /// Distances from `source` avoiding static obstacles.
    pub fn free_distances(&self, source: Vertex) -> Vec<u32> {
        self.bfs_distances(source, |v| !self.is_static(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbours_and_self_loops() {
        let g = Graph::new(3, 3);
        let centre = g.vertex(Cell::new(1, 1)).unwrap();
        let n: Vec<_> = g.neighbors(centre).map(|v| g.cell(v)).collect();
        assert_eq!(
            n,
            vec![Cell::new(1, 0), Cell::new(0, 1), Cell::new(2, 1), Cell::new(1, 2)]
        );
        for v in g.vertices() {
            assert!(g.is_edge(v, v));
        }
        let corner = g.vertex(Cell::new(0, 0)).unwrap();
        assert_eq!(g.neighbors(corner).count(), 2);
        assert!(!g.is_edge(corner, centre));
    }

    #[test]
    fn edges_are_symmetric() {
        let g = Graph::new(4, 3);
        for a in g.vertices() {
            for b in g.vertices() {
                assert_eq!(g.is_edge(a, b), g.is_edge(b, a));
            }
        }
    }

    #[test]
    fn bfs_respects_static_cells() {
        let g = Graph::with_static_obstacles(3, 3, &[Cell::new(0, 1), Cell::new(1, 1)]);
        let src = g.vertex(Cell::new(0, 0)).unwrap();
        let d = g.free_distances(src);
        assert_eq!(d[g.vertex(Cell::new(0, 2)).unwrap().index()], 6);
        assert_eq!(d[g.vertex(Cell::new(0, 1)).unwrap().index()], UNREACHABLE);
    }
}
