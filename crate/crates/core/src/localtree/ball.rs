use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::lattice::{LatticeClass, TreeContext};
use super::ring::LocalRing;
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 20_000;

/// Ball of radius `r` in the tree, vertices sorted by sphere then key.
#[derive(Debug, Clone, Serialize)]
pub struct TreeBall {
    pub center: LatticeClass,
    pub radius: u32,
    pub degree: usize,
    #[serde(rename = "spheres")]
    pub sphere_sizes: Vec<usize>,
    #[serde(serialize_with = "labels")]
    pub vertices: Vec<LatticeClass>,
    pub edges: Vec<[usize; 2]>,
    #[serde(skip)]
    pub sphere_of: Vec<u32>,
}

fn labels<S: serde::Serializer>(v: &[LatticeClass], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(LatticeClass::label))
}

/// `1 + d sum_{k < r} (d - 1)^k`, saturating.
pub fn ball_size(degree: usize, radius: u32) -> usize {
    let mut total: usize = 1;
    let mut sphere: usize = degree;
    for _ in 0..radius {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(degree.saturating_sub(1));
    }
    total
}

/// Breadth-first closure of `neighbors`, checking that no vertex is reached
/// twice (no cycles) and that interior degrees agree.
pub fn build_ball<R: LocalRing>(
    ctx: &TreeContext<R>,
    center: &LatticeClass,
    radius: u32,
    budget: usize,
) -> Result<TreeBall> {
    let needed = ball_size(ctx.degree(), radius);
    if needed > budget {
        return Err(Error::BudgetExceeded { budget, needed });
    }
    let mut parent: HashMap<LatticeClass, Option<LatticeClass>> = HashMap::with_capacity(needed);
    parent.insert(center.clone(), None);
    let mut spheres = vec![vec![center.clone()]];
    let mut degree = None;
    for k in 0..radius {
        let mut next = Vec::new();
        for v in &spheres[k as usize] {
            let nbrs = ctx.neighbors(v)?;
            check_degree(&mut degree, nbrs.len(), v)?;
            let up = parent[v].clone();
            let mut seen_parent = false;
            for n in nbrs {
                if Some(&n) == up.as_ref() {
                    if seen_parent {
                        return Err(tree_err(format!("{v} lists its parent twice")));
                    }
                    seen_parent = true;
                } else if parent.contains_key(&n) {
                    return Err(tree_err(format!("cycle through {n}")));
                } else {
                    parent.insert(n.clone(), Some(v.clone()));
                    next.push(n);
                }
            }
            if up.is_some() != seen_parent {
                return Err(tree_err(format!("{v} is not adjacent to its parent")));
            }
        }
        spheres.push(next);
    }
    let degree = match degree {
        Some(d) => d,
        None => ctx.neighbors(center)?.len(),
    };

    for s in spheres.iter_mut() {
        s.sort();
    }
    let mut index = HashMap::with_capacity(parent.len());
    let mut vertices = Vec::with_capacity(parent.len());
    let mut sphere_of = Vec::with_capacity(parent.len());
    for (k, s) in spheres.iter().enumerate() {
        for v in s {
            index.insert(v.clone(), vertices.len());
            vertices.push(v.clone());
            sphere_of.push(k as u32);
        }
    }
    let mut edges: Vec<[usize; 2]> = vertices
        .iter()
        .filter_map(|v| parent[v].as_ref().map(|u| [index[u], index[v]]))
        .collect();
    edges.sort_unstable();

    let ball = TreeBall {
        center: center.clone(),
        radius,
        degree,
        sphere_sizes: spheres.iter().map(Vec::len).collect(),
        vertices,
        edges,
        sphere_of,
    };
    ball.check_invariants()?;
    Ok(ball)
}

fn check_degree(seen: &mut Option<usize>, d: usize, v: &LatticeClass) -> Result<()> {
    match *seen {
        Some(expected) if expected != d => {
            Err(tree_err(format!("{v} has degree {d}, expected {expected}")))
        }
        _ => {
            *seen = Some(d);
            Ok(())
        }
    }
}

fn tree_err(msg: String) -> Error {
    Error::TreeInvariant(msg)
}

impl TreeBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &LatticeClass) -> Option<usize> {
        let k = self.sphere_sizes.iter().scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        });
        for (start, size) in k.zip(&self.sphere_sizes) {
            if let Ok(i) = self.vertices[start..start + size].binary_search(v) {
                return Some(start + i);
            }
        }
        None
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &[u, v] in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Graph distances from `source` inside the ball.
    pub fn bfs_distances(&self, source: usize) -> Vec<u32> {
        let adj = self.adjacency();
        let mut dist = vec![u32::MAX; self.vertices.len()];
        dist[source] = 0;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `|E| = |V| - 1`, connected, constant interior degree.
    pub fn check_invariants(&self) -> Result<()> {
        if self.edges.len() + 1 != self.vertices.len() {
            return Err(tree_err(format!(
                "{} edges on {} vertices",
                self.edges.len(),
                self.vertices.len()
            )));
        }
        if self.bfs_distances(0).contains(&u32::MAX) {
            return Err(tree_err("ball is disconnected".into()));
        }
        let adj = self.adjacency();
        for (i, nbrs) in adj.iter().enumerate() {
            if self.sphere_of[i] < self.radius && nbrs.len() != self.degree {
                return Err(tree_err(format!(
                    "interior vertex {} has degree {}",
                    self.vertices[i],
                    nbrs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tree ball serializes")
    }

    /// Graphviz export; vertex labels are short digests of the canonical form.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tree {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let digest = Sha256::digest(v.label().as_bytes());
            let _ = writeln!(
                out,
                "  v{i} [label=\"{}\"];",
                hex::encode(&digest[..4]),
            );
        }
        for [u, v] in &self.edges {
            let _ = writeln!(out, "  v{u} -- v{v};");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localtree::ring::{DivisionRing, SplitRing};
    use crate::quatalg::choose_algebra;

    #[test]
    fn split_spheres() {
        let ctx = TreeContext::new(SplitRing::new(3, 12).unwrap());
        let ball = build_ball(&ctx, &LatticeClass::standard(), 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(ball.sphere_sizes, vec![1, 4, 12]);
        assert_eq!(ball.degree, 4);
        assert_eq!(ball.edges.len(), 16);
    }

    #[test]
    fn division_spheres() {
        let ctx = TreeContext::new(DivisionRing::new(&choose_algebra(3).unwrap(), 10).unwrap());
        let ball = build_ball(&ctx, &LatticeClass::standard(), 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(ball.degree, 10);
        assert_eq!(ball.sphere_sizes, vec![1, 10, 90]);
    }

    #[test]
    fn radius_zero_and_budget() {
        let ctx = TreeContext::new(SplitRing::new(5, 8).unwrap());
        let ball = build_ball(&ctx, &LatticeClass::standard(), 0, 1).unwrap();
        assert_eq!(ball.len(), 1);
        assert!(ball.edges.is_empty());
        assert_eq!(ball.degree, 6);
        assert_eq!(
            build_ball(&ctx, &LatticeClass::standard(), 3, 100).unwrap_err(),
            Error::BudgetExceeded { budget: 100, needed: 1 + 6 + 30 + 150 }
        );
    }

    #[test]
    fn exports() {
        let ctx = TreeContext::new(SplitRing::new(3, 8).unwrap());
        let ball = build_ball(&ctx, &LatticeClass::standard(), 1, DEFAULT_BUDGET).unwrap();
        let json = ball.to_json();
        assert_eq!(json["degree"], 4);
        assert_eq!(json["spheres"], serde_json::json!([1, 4]));
        assert_eq!(json["edges"].as_array().unwrap().len(), 4);
        let dot = ball.to_dot();
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert_eq!(ball.index_of(&LatticeClass::standard()), Some(0));
    }
}
