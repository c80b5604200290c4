//! Small named graphs used throughout the test suites and the CLI examples.
//!
//! Edge indices follow construction order, so `theta()` has edges `0, 1, 2`
//! and `dumbbell()` has `0` = loop at `u`, `1` = bridge, `2` = loop at `v`.

use crate::graph::Graph;

/// Two weight-0 vertices joined by three parallel edges (genus 2).
pub fn theta() -> Graph {
    Graph::new(vec![0, 0], &[(0, 1), (0, 1), (0, 1)], &[]).unwrap()
}

/// Two weight-0 vertices, a loop at each, joined by a bridge (genus 2).
pub fn dumbbell() -> Graph {
    Graph::new(vec![0, 0], &[(0, 0), (0, 1), (1, 1)], &[]).unwrap()
}

/// One weight-0 vertex with a loop and one leg (genus 1, one leg).
pub fn loop_with_leg() -> Graph {
    Graph::new(vec![0], &[(0, 0)], &[0]).unwrap()
}

/// One vertex of the given weight with `loops` loops and no legs.
pub fn rose(loops: usize, weight: u32) -> Graph {
    Graph::new(vec![weight], &vec![(0, 0); loops], &[]).unwrap()
}

/// One vertex of weight `g` with `n` legs: the minimum of the poset of
/// stable graphs of genus `g` with `n` legs.
pub fn weighted_vertex(g: u32, n: usize) -> Graph {
    Graph::single_vertex(g, n)
}

/// Two weight-0 vertices joined by two parallel edges, with a loop at each
/// vertex (genus 3, basic).
pub fn looped_double_edge() -> Graph {
    Graph::new(vec![0, 0], &[(0, 1), (0, 1), (0, 0), (1, 1)], &[]).unwrap()
}

/// Two weight-0 vertices joined by four parallel edges (genus 3, Eulerian,
/// not basic: both vertices have degree 4 and no loop).
pub fn quadruple_edge() -> Graph {
    Graph::new(vec![0, 0], &[(0, 1); 4], &[]).unwrap()
}
