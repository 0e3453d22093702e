//! Finite simple graphs, balls, isomorphism search and automorphism groups.

mod aut;
mod ball;
mod clique;
pub mod families;
mod iso;
pub mod perm;

pub use aut::{automorphism_group, automorphism_group_with, empirical_rc, local_stabilizer_probe, AutGroup, AutOptions};
pub use ball::{ball, ball_isometric, is_r_locally, BallView, LocalityReport, RootedIsometry};
pub use clique::{max_clique_size, maximum_cliques, CliqueBound};
pub use iso::{find_isomorphism, IsoOptions, IsoSearch};

use crate::error::{malformed, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};

pub const UNREACHED: u32 = u32::MAX;

/// Undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
    // parallel to `adj`
    labels: Option<Vec<Vec<u32>>>,
    vertex_labels: Option<Vec<u32>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        SimpleGraph { adj: vec![Vec::new(); n], labels: None, vertex_labels: None }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        Self::build(n, edges.into_iter().map(|(u, v)| (u, v, 0)), false)
    }

    pub fn from_labeled_edges<I: IntoIterator<Item = (usize, usize, u32)>>(n: usize, edges: I) -> Result<Self> {
        Self::build(n, edges, true)
    }

    fn build<I: IntoIterator<Item = (usize, usize, u32)>>(n: usize, edges: I, labeled: bool) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
        for (u, v, l) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(malformed(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(malformed(format!("duplicate edge {{{u},{v}}}")));
            }
            adj[u].push((v, l));
            adj[v].push((u, l));
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        let labels = labeled.then(|| adj.iter().map(|a| a.iter().map(|x| x.1).collect()).collect());
        Ok(SimpleGraph { adj: adj.into_iter().map(|a| a.into_iter().map(|x| x.0).collect()).collect(), labels, vertex_labels: None })
    }

    pub fn with_vertex_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(malformed("vertex label count differs from vertex count"));
        }
        self.vertex_labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(&self) -> Self {
        SimpleGraph { adj: self.adj.clone(), labels: None, vertex_labels: None }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn has_edge_labels(&self) -> bool {
        self.labels.is_some()
    }

    pub fn edge_label(&self, u: usize, v: usize) -> Option<u32> {
        let i = self.adj.get(u)?.binary_search(&v).ok()?;
        Some(self.labels.as_ref().map_or(0, |l| l[u][i]))
    }

    /// Labels aligned with `neighbors(v)`; zeros when the graph is unlabeled.
    pub fn neighbor_labels(&self, v: usize) -> Vec<u32> {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => vec![0; self.adj[v].len()],
        }
    }

    pub fn vertex_labels(&self) -> Option<&[u32]> {
        self.vertex_labels.as_deref()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, a) in self.adj.iter().enumerate() {
            for &v in a.iter().filter(|&&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn bfs(&self, src: usize) -> Vec<u32> {
        self.bfs_within(src, u32::MAX)
    }

    pub fn bfs_within(&self, src: usize, radius: u32) -> Vec<u32> {
        let mut d = vec![UNREACHED; self.n()];
        let mut q = VecDeque::new();
        d[src] = 0;
        q.push_back(src);
        while let Some(u) = q.pop_front() {
            if d[u] == radius {
                continue;
            }
            for &w in &self.adj[u] {
                if d[w] == UNREACHED {
                    d[w] = d[u] + 1;
                    q.push_back(w);
                }
            }
        }
        d
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<u32> {
        let d = self.bfs(u)[v];
        (d != UNREACHED).then_some(d)
    }

    /// Component id per vertex, numbered by smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut next = 0;
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub fn diameter(&self) -> Option<u32> {
        let mut best = 0;
        for v in 0..self.n() {
            for d in self.bfs(v) {
                if d == UNREACHED {
                    return None;
                }
                best = best.max(d);
            }
        }
        Some(best)
    }

    /// Induced subgraph on `vs` (in that order); labels carried along.
    pub fn induced(&self, vs: &[usize]) -> SimpleGraph {
        let pos: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &v) in vs.iter().enumerate() {
            let labels = self.neighbor_labels(v);
            for (k, w) in self.adj[v].iter().enumerate() {
                if let Some(&j) = pos.get(w) {
                    if i < j {
                        edges.push((i, j, labels[k]));
                    }
                }
            }
        }
        let mut g = SimpleGraph::build(vs.len(), edges, self.labels.is_some()).expect("induced subgraph is simple");
        if let Some(vl) = &self.vertex_labels {
            g.vertex_labels = Some(vs.iter().map(|&v| vl[v]).collect());
        }
        g
    }

    pub fn edge_triangle_count(&self, u: usize, v: usize) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
        Ok(common_count(&self.adj[u], &self.adj[v]))
    }

    /// Triangle count per adjacency slot, aligned with `neighbors`.
    pub fn triangle_profile(&self) -> Vec<Vec<u32>> {
        self.adj
            .iter()
            .map(|a| a.iter().map(|&w| common_count(a, &self.adj[w]) as u32).collect())
            .collect()
    }

    pub fn is_automorphism(&self, p: &[usize], respect_labels: bool) -> bool {
        if p.len() != self.n() {
            return false;
        }
        let mut seen = vec![false; self.n()];
        for &x in p {
            if x >= self.n() || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        self.edges().into_iter().all(|(u, v)| {
            self.has_edge(p[u], p[v]) && (!respect_labels || self.edge_label(u, v) == self.edge_label(p[u], p[v]))
        })
    }

    pub fn to_json(&self) -> GraphJson {
        let edges = self.edges();
        let edge_labels = self
            .labels
            .as_ref()
            .map(|_| edges.iter().map(|&(u, v)| serde_json::Value::from(self.edge_label(u, v).unwrap())).collect());
        GraphJson {
            vertices: self.n(),
            edges: edges.iter().map(|&(u, v)| [u, v]).collect(),
            edge_labels,
            vertex_labels: self.vertex_labels.as_ref().map(|l| l.iter().map(|&x| serde_json::Value::from(x)).collect()),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        let mut g = match &j.edge_labels {
            None => SimpleGraph::from_edges(j.vertices, j.edges.iter().map(|e| (e[0], e[1])))?,
            Some(ls) => {
                if ls.len() != j.edges.len() {
                    return Err(malformed("edge_labels not aligned with edges"));
                }
                let ids = intern(ls)?;
                SimpleGraph::from_labeled_edges(j.vertices, j.edges.iter().zip(ids).map(|(e, l)| (e[0], e[1], l)))?
            }
        };
        for e in &j.edges {
            if e[0] >= e[1] {
                return Err(malformed(format!("edge [{},{}] must be listed with u < v", e[0], e[1])));
            }
        }
        if let Some(vl) = &j.vertex_labels {
            g = g.with_vertex_labels(intern(vl)?)?;
        }
        Ok(g)
    }
}

fn intern(values: &[serde_json::Value]) -> Result<Vec<u32>> {
    let mut ids: HashMap<String, u32> = HashMap::new();
    let all_ints = values.iter().all(|v| v.as_u64().is_some_and(|x| x <= u32::MAX as u64));
    values
        .iter()
        .map(|v| {
            if all_ints {
                return Ok(v.as_u64().unwrap() as u32);
            }
            if v.is_object() || v.is_array() && v.as_array().unwrap().iter().any(|x| x.is_object()) {
                return Err(malformed("labels must be scalars or arrays of scalars"));
            }
            let key = v.to_string();
            let next = ids.len() as u32;
            Ok(*ids.entry(key).or_insert(next))
        })
        .collect()
}

pub(crate) fn common_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_labels: Option<Vec<serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_labels: Option<Vec<serde_json::Value>>,
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(SimpleGraph::from_edges(3, [(0, 0)]).is_err());
        assert!(SimpleGraph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(matches!(SimpleGraph::from_edges(2, [(0, 2)]), Err(Error::UnknownVertex(2))));
    }

    #[test]
    fn json_round_trip() {
        let g = SimpleGraph::from_labeled_edges(4, [(0, 1, 3), (1, 2, 1), (2, 3, 3)]).unwrap();
        let back = SimpleGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let bad: GraphJson = serde_json::from_str(r#"{"vertices":3,"edges":[[1,0]]}"#).unwrap();
        assert!(SimpleGraph::from_json(&bad).is_err());
        let s: GraphJson = serde_json::from_str(r#"{"vertices":3,"edges":[[0,1],[1,2]],"edge_labels":["a","b"]}"#).unwrap();
        let g = SimpleGraph::from_json(&s).unwrap();
        assert_ne!(g.edge_label(0, 1), g.edge_label(1, 2));
    }

    #[test]
    fn triangle_counts() {
        let c6 = cycle(6);
        assert_eq!(c6.edge_triangle_count(0, 1).unwrap(), 0);
        let k4 = complete(4);
        assert_eq!(k4.edge_triangle_count(2, 3).unwrap(), 2);
        let k5 = complete(5);
        assert_eq!(k5.edge_triangle_count(0, 4).unwrap(), 3);
        assert_eq!(c6.edge_triangle_count(0, 2), Err(Error::NotAnEdge(0, 2)));
    }

    #[test]
    fn connectivity() {
        let g = SimpleGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.component_count(), 2);
        assert!(!g.is_connected());
        assert_eq!(cycle(7).diameter(), Some(3));
    }
}
