use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::path::Path;

use crate::error::{Error, Result};

/// Undirected fiber network with span lengths in km.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology {
    nodes: BTreeSet<String>,
    /// Adjacency, both directions, neighbours kept in name order.
    adjacency: BTreeMap<String, BTreeMap<String, f64>>,
    edges: Vec<(String, String, f64)>,
}

/// Shortest path between two nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteSummary {
    pub path: Vec<String>,
    pub total_length_km: f64,
    pub intermediate_node_count: usize,
}

impl RouteSummary {
    /// A route that is not tied to a topology, e.g. for sweeping distance.
    pub fn synthetic(total_length_km: f64, intermediate_node_count: usize) -> Self {
        let mut path = vec!["src".to_string()];
        path.extend((0..intermediate_node_count).map(|i| format!("hop{i}")));
        path.push("dst".to_string());
        RouteSummary {
            path,
            total_length_km,
            intermediate_node_count,
        }
    }

    pub fn endpoints(&self) -> (&str, &str) {
        (&self.path[0], &self.path[self.path.len() - 1])
    }
}

#[derive(PartialEq)]
struct Frontier {
    dist: f64,
    node: String,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl NetworkTopology {
    pub fn from_edges<I, S>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S, f64)>,
        S: Into<String>,
    {
        let mut topo = NetworkTopology {
            nodes: BTreeSet::new(),
            adjacency: BTreeMap::new(),
            edges: Vec::new(),
        };
        for (i, (a, b, len)) in edges.into_iter().enumerate() {
            topo.add_edge(a.into(), b.into(), len)
                .map_err(|msg| Error::Parse {
                    source_name: "edge list".into(),
                    line: i + 1,
                    msg,
                })?;
        }
        Ok(topo)
    }

    fn add_edge(&mut self, a: String, b: String, len: f64) -> std::result::Result<(), String> {
        if a == b {
            return Err(format!("self-loop on `{a}`"));
        }
        if !(len > 0.0 && len.is_finite()) {
            return Err(format!("span {a}-{b} has non-positive length {len}"));
        }
        if self.adjacency.get(&a).is_some_and(|n| n.contains_key(&b)) {
            return Err(format!("duplicate span {a}-{b}"));
        }
        self.nodes.insert(a.clone());
        self.nodes.insert(b.clone());
        self.adjacency
            .entry(a.clone())
            .or_default()
            .insert(b.clone(), len);
        self.adjacency
            .entry(b.clone())
            .or_default()
            .insert(a.clone(), len);
        self.edges.push((a, b, len));
        Ok(())
    }

    /// Parses the plain-text edge list: one `<nodeA> <nodeB> <length_km>` per
    /// line, `#` starts a comment.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut topo = NetworkTopology {
            nodes: BTreeSet::new(),
            adjacency: BTreeMap::new(),
            edges: Vec::new(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                source_name: source_name.to_string(),
                line: idx + 1,
                msg,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!(
                    "expected `<nodeA> <nodeB> <length_km>`, found {} fields",
                    fields.len()
                )));
            }
            let len: f64 = fields[2]
                .parse()
                .map_err(|_| err(format!("invalid length `{}`", fields[2])))?;
            topo.add_edge(fields[0].to_string(), fields[1].to_string(), len)
                .map_err(err)?;
        }
        if topo.edges.is_empty() {
            return Err(Error::Parse {
                source_name: source_name.to_string(),
                line: 0,
                msg: "no spans defined".into(),
            });
        }
        Ok(topo)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(String::as_str)
    }

    pub fn contains(&self, node: &str) -> bool {
        self.nodes.contains(node)
    }

    pub fn edges(&self) -> &[(String, String, f64)] {
        &self.edges
    }

    pub fn neighbours(&self, node: &str) -> impl Iterator<Item = (&str, f64)> {
        self.adjacency
            .get(node)
            .into_iter()
            .flat_map(|m| m.iter().map(|(k, v)| (k.as_str(), *v)))
    }

    /// Every unordered node pair `(a, b)` with `a < b`, in name order.
    pub fn all_pairs(&self) -> Vec<(String, String)> {
        let nodes: Vec<&String> = self.nodes.iter().collect();
        let mut out = Vec::new();
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                out.push(((*a).clone(), (*b).clone()));
            }
        }
        out
    }

    fn distances_to(&self, target: &str) -> BTreeMap<String, f64> {
        let mut dist: BTreeMap<String, f64> = BTreeMap::new();
        let mut heap = BinaryHeap::new();
        dist.insert(target.to_string(), 0.0);
        heap.push(Frontier {
            dist: 0.0,
            node: target.to_string(),
        });
        while let Some(Frontier { dist: d, node }) = heap.pop() {
            if d > dist[&node] {
                continue;
            }
            for (next, w) in self.neighbours(&node) {
                let nd = d + w;
                if dist.get(next).is_none_or(|&cur| nd < cur) {
                    dist.insert(next.to_string(), nd);
                    heap.push(Frontier {
                        dist: nd,
                        node: next.to_string(),
                    });
                }
            }
        }
        dist
    }

    /// Minimum-length path from `a` to `b`. Among equal-length paths the one
    /// whose node sequence sorts first is returned.
    pub fn route(&self, a: &str, b: &str) -> Result<RouteSummary> {
        for n in [a, b] {
            if !self.contains(n) {
                return Err(Error::UnknownNode(n.to_string()));
            }
        }
        if a == b {
            return Err(Error::InvalidExperiment(format!(
                "route endpoints must differ (got `{a}` twice)"
            )));
        }
        let dist = self.distances_to(b);
        let Some(&total) = dist.get(a) else {
            return Err(Error::NoRoute(a.to_string(), b.to_string()));
        };

        // Walk forward taking the smallest-named neighbour that stays on a
        // shortest path; this yields the lexicographically first such path.
        let slack = 1e-9 * total.max(1.0);
        let mut path = vec![a.to_string()];
        let mut length = 0.0;
        let mut current = a.to_string();
        while current != b {
            let here = dist[&current];
            let (next, w) = self
                .neighbours(&current)
                .find(|(n, w)| {
                    dist.get(*n)
                        .is_some_and(|&dn| (w + dn - here).abs() <= slack)
                })
                .expect("a shortest-path successor exists");
            length += w;
            current = next.to_string();
            path.push(current.clone());
        }
        let intermediate_node_count = path.len() - 2;
        Ok(RouteSummary {
            path,
            total_length_km: length,
            intermediate_node_count,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_span() {
        let t = NetworkTopology::from_edges([("A", "B", 30.0)]).unwrap();
        let r = t.route("A", "B").unwrap();
        assert_eq!(r.total_length_km, 30.0);
        assert_eq!(r.intermediate_node_count, 0);
    }

    #[test]
    fn line_has_one_intermediate() {
        let t = NetworkTopology::from_edges([("A", "B", 10.0), ("B", "C", 20.0)]).unwrap();
        let r = t.route("A", "C").unwrap();
        assert_eq!(r.total_length_km, 30.0);
        assert_eq!(r.intermediate_node_count, 1);
        assert_eq!(r.path, ["A", "B", "C"]);
    }

    #[test]
    fn two_hops_beat_long_direct_span() {
        let t = NetworkTopology::from_edges([("A", "B", 10.0), ("B", "C", 12.0), ("A", "C", 25.0)])
            .unwrap();
        let r = t.route("A", "C").unwrap();
        assert_eq!(r.total_length_km, 22.0);
        assert_eq!(r.path, ["A", "B", "C"]);
    }

    #[test]
    fn ties_break_by_name() {
        let t = NetworkTopology::from_edges([
            ("S", "Y", 5.0),
            ("Y", "T", 5.0),
            ("S", "X", 5.0),
            ("X", "T", 5.0),
        ])
        .unwrap();
        assert_eq!(t.route("S", "T").unwrap().path, ["S", "X", "T"]);
        assert_eq!(t.route("T", "S").unwrap().path, ["T", "X", "S"]);
    }

    #[test]
    fn errors() {
        let t = NetworkTopology::from_edges([("A", "B", 1.0), ("C", "D", 1.0)]).unwrap();
        assert!(matches!(t.route("A", "C"), Err(Error::NoRoute(..))));
        assert!(matches!(t.route("A", "Z"), Err(Error::UnknownNode(_))));
        assert!(t.route("A", "A").is_err());
        assert!(NetworkTopology::from_edges([("A", "A", 1.0)]).is_err());
        assert!(NetworkTopology::from_edges([("A", "B", 0.0)]).is_err());
        assert!(NetworkTopology::from_edges([("A", "B", 1.0), ("B", "A", 2.0)]).is_err());
    }

    #[test]
    fn parse_with_comments() {
        let text = "# demo\nA B 10  # first\n\n  B C 2.5\n";
        let t = NetworkTopology::parse(text, "demo").unwrap();
        assert_eq!(t.edges().len(), 2);
        assert_eq!(t.nodes().collect::<Vec<_>>(), ["A", "B", "C"]);
        let bad = NetworkTopology::parse("A B\n", "bad").unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 1, .. }));
        assert!(NetworkTopology::parse("A B ten\n", "bad").is_err());
        assert!(NetworkTopology::parse("# nothing\n", "empty").is_err());
    }
}
