//! Small named graphs used throughout tests and examples.

use super::SimpleGraph;

pub fn cycle(n: usize) -> SimpleGraph {
    SimpleGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle needs n >= 3")
}

pub fn path(n: usize) -> SimpleGraph {
    SimpleGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn complete(n: usize) -> SimpleGraph {
    SimpleGraph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}

pub fn petersen() -> SimpleGraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    SimpleGraph::from_edges(10, e).unwrap()
}

/// Square grid torus C_a x C_b, vertex (i, j) at index i * b + j.
pub fn torus(a: usize, b: usize) -> SimpleGraph {
    let id = |i: usize, j: usize| (i % a) * b + (j % b);
    let mut e = Vec::new();
    for i in 0..a {
        for j in 0..b {
            e.push((id(i, j), id(i + 1, j)));
            e.push((id(i, j), id(i, j + 1)));
        }
    }
    SimpleGraph::from_edges(a * b, e).unwrap()
}

/// Grid graph on the integer points with |x| + |y| <= r (a finite chunk of Z^2).
pub fn lattice_chunk(r: i64) -> (SimpleGraph, Vec<(i64, i64)>) {
    let mut pts = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            if x.abs() + y.abs() <= r {
                pts.push((x, y));
            }
        }
    }
    pts.sort_by_key(|&(x, y)| (x.abs() + y.abs(), x, y));
    let index: std::collections::HashMap<_, _> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut e = Vec::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        for q in [(x + 1, y), (x, y + 1)] {
            if let Some(&j) = index.get(&q) {
                e.push((i, j));
            }
        }
    }
    (SimpleGraph::from_edges(pts.len(), e).unwrap(), pts)
}

/// Complete binary tree of the given depth, root 0, children of v at 2v+1, 2v+2.
pub fn binary_tree(depth: u32) -> SimpleGraph {
    let n = (1usize << (depth + 1)) - 1;
    SimpleGraph::from_edges(n, (1..n).map(|v| ((v - 1) / 2, v))).unwrap()
}
