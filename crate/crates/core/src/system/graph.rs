use std::collections::HashMap;
use std::str::FromStr;

use super::set_system::{clean_line, is_identifier, SetSystem};
use crate::error::{Error, Result};

/// A directed membership graph with a distinguished node. An edge `v → w`
/// means `w ∈ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedGraph {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    point: usize,
}

impl PointedGraph {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>, point: usize) -> Result<PointedGraph> {
        let names = (0..nodes).map(|i| format!("v{i}")).collect();
        PointedGraph::with_names(names, edges, point)
    }

    pub fn with_names(
        names: Vec<String>,
        edges: Vec<(usize, usize)>,
        point: usize,
    ) -> Result<PointedGraph> {
        let n = names.len();
        if point >= n {
            return Err(Error::InvalidArgument(format!(
                "point {point} is not a node of a {n}-node graph"
            )));
        }
        if let Some(&(v, w)) = edges.iter().find(|&&(v, w)| v >= n || w >= n) {
            return Err(Error::InvalidArgument(format!(
                "edge {v} -> {w} leaves the {n}-node graph"
            )));
        }
        Ok(PointedGraph {
            names,
            edges,
            point,
        })
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub(crate) fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.names.len()];
        for &(v, w) in &self.edges {
            succ[v].push(w);
        }
        succ
    }

    /// The system with one equation per node, without the reachability check.
    pub(crate) fn as_system(&self) -> SetSystem {
        SetSystem::with_names(self.successors(), self.names.clone())
            .expect("graph edges were validated on construction")
    }
}

/// One equation per node; the point's index is returned alongside.
///
/// Every node must be reachable from the point.
pub fn graph_to_system(g: &PointedGraph) -> Result<(SetSystem, usize)> {
    let succ = g.successors();
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![g.point];
    seen[g.point] = true;
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if !std::mem::replace(&mut seen[w], true) {
                stack.push(w);
            }
        }
    }
    let unreachable: Vec<String> = seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| !s)
        .map(|(v, _)| g.names[v].clone())
        .collect();
    if !unreachable.is_empty() {
        return Err(Error::Unreachable(unreachable));
    }
    Ok((g.as_system(), g.point))
}

impl FromStr for PointedGraph {
    type Err = Error;

    /// Edge-list text: `v -> w` lines, an optional `point v` line, and bare
    /// `v` lines to declare isolated nodes. Nodes are numbered by first
    /// appearance; the point defaults to the first node.
    fn from_str(text: &str) -> Result<PointedGraph> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut node = |name: &str, lineno: usize| -> Result<usize> {
            if !is_identifier(name) {
                return Err(Error::parse(lineno, format!("invalid node name '{name}'")));
            }
            Ok(*index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            }))
        };
        let mut edges = Vec::new();
        let mut point = None;
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = clean_line(raw);
            if line.is_empty() {
                continue;
            }
            if let Some((v, w)) = line.split_once("->") {
                let v = node(v.trim(), lineno)?;
                let w = node(w.trim(), lineno)?;
                edges.push((v, w));
            } else if let Some(p) = line.strip_prefix("point ") {
                if point.is_some() {
                    return Err(Error::parse(lineno, "point declared twice"));
                }
                point = Some(node(p.trim(), lineno)?);
            } else {
                node(line, lineno)?;
            }
        }
        if names.is_empty() {
            return Err(Error::parse(1, "graph has no nodes"));
        }
        PointedGraph::with_names(names, edges, point.unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop() {
        let g: PointedGraph = "x -> x".parse().unwrap();
        let (s, p) = graph_to_system(&g).unwrap();
        assert_eq!(p, 0);
        assert_eq!(s.equations(), &[vec![0]]);
    }

    #[test]
    fn single_isolated_node() {
        let g: PointedGraph = "x".parse().unwrap();
        let (s, _) = graph_to_system(&g).unwrap();
        assert_eq!(s.equations(), &[Vec::<usize>::new()]);
    }

    #[test]
    fn cycle_and_leaf_graph() {
        let g: PointedGraph = "p -> q\np -> r\nr -> r\nq\npoint p".parse().unwrap();
        let (s, p) = graph_to_system(&g).unwrap();
        assert_eq!(p, 0);
        // p = {q, r}, q = {}, r = {r}
        let reference: SetSystem = "p = {q, r}\nq = {}\nr = {r}".parse().unwrap();
        assert_eq!(s, reference);
    }

    #[test]
    fn point_and_parallel_edges() {
        let g: PointedGraph = "a -> b\na -> b\nb -> c\npoint a".parse().unwrap();
        let (s, _) = graph_to_system(&g).unwrap();
        assert_eq!(s.rhs(0), &[1]);
        let g: PointedGraph = "a -> b\npoint b".parse().unwrap();
        assert_eq!(g.point(), 1);
    }

    #[test]
    fn unreachable_nodes_reported() {
        let g: PointedGraph = "a -> b\nc -> a\npoint a".parse().unwrap();
        match graph_to_system(&g) {
            Err(Error::Unreachable(names)) => assert_eq!(names, vec!["c".to_string()]),
            other => panic!("expected unreachable error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_graphs() {
        assert!("".parse::<PointedGraph>().is_err());
        assert!("a -> 1b".parse::<PointedGraph>().is_err());
        assert!("a\npoint a\npoint a".parse::<PointedGraph>().is_err());
        assert!(PointedGraph::new(2, vec![(0, 2)], 0).is_err());
        assert!(PointedGraph::new(2, vec![], 2).is_err());
    }
}
