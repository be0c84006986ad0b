//! Reduction to a three-layer combination network.
//!
//! The instance maps to a graph with one source, one intermediate node per
//! path, and one destination per required blockage pattern. Destination b
//! attaches to exactly the intermediates of its unblocked paths, so its min
//! cut is |S(b)| * C; high-priority destinations are marked public, full
//! destinations private.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patterns::{BlockagePattern, Grouping, NetworkConfig};
use crate::rational::{parse_rational, rat_int, rat_to_string, Rational};

/// Whether a destination must decode only u1 (public) or both messages
/// (private).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DestinationKind {
    Public,
    Private,
}

impl DestinationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DestinationKind::Public => "public",
            DestinationKind::Private => "private",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Destination {
    pattern: BlockagePattern,
    kind: DestinationKind,
}

impl Destination {
    pub fn pattern(&self) -> &BlockagePattern {
        &self.pattern
    }

    pub fn kind(&self) -> DestinationKind {
        self.kind
    }

    /// Node id in exports: the pattern string.
    pub fn id(&self) -> String {
        self.pattern.to_string()
    }
}

/// Three-layer source / intermediates / destinations graph with uniform edge
/// capacity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinationNetwork {
    num_paths: usize,
    edge_capacity: Rational,
    destinations: Vec<Destination>,
}

/// Builds the combination network of an instance: intermediates p1..pE, one
/// destination per pattern in either group, destination b wired to p_i for
/// every unblocked path i of b.
pub fn reduce_to_combination_network(
    g: &Grouping,
    cfg: &NetworkConfig,
) -> Result<CombinationNetwork> {
    if g.is_empty() {
        return Err(Error::DegenerateInstance(
            "both groups are empty; the reduction has no destinations".into(),
        ));
    }
    if let Some(e) = g.num_paths() {
        if e != cfg.num_paths() {
            return Err(Error::InvalidInput(format!(
                "grouping is over {e} paths, network has {}",
                cfg.num_paths()
            )));
        }
    }
    let mut destinations: Vec<Destination> = g
        .union()
        .into_iter()
        .map(|pattern| {
            let kind = if g.group2().contains(&pattern) {
                DestinationKind::Private
            } else {
                DestinationKind::Public
            };
            Destination { pattern, kind }
        })
        .collect();
    destinations.sort_by_key(|d| d.id());
    Ok(CombinationNetwork {
        num_paths: cfg.num_paths(),
        edge_capacity: cfg.capacity().clone(),
        destinations,
    })
}

impl CombinationNetwork {
    pub fn num_paths(&self) -> usize {
        self.num_paths
    }

    pub fn edge_capacity(&self) -> &Rational {
        &self.edge_capacity
    }

    /// Destinations in lexicographic pattern order.
    pub fn destinations(&self) -> &[Destination] {
        &self.destinations
    }

    pub fn num_destinations(&self) -> usize {
        self.destinations.len()
    }

    fn intermediate_id(i: usize) -> String {
        format!("p{}", i + 1)
    }

    /// All node ids: source, intermediates, then destinations.
    pub fn node_ids(&self) -> Vec<String> {
        let mut ids = vec!["s".to_string()];
        ids.extend((0..self.num_paths).map(Self::intermediate_id));
        ids.extend(self.destinations.iter().map(Destination::id));
        ids
    }

    /// All edges as (from, to) pairs, each carrying `edge_capacity`.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut edges: Vec<(String, String)> = (0..self.num_paths)
            .map(|i| ("s".to_string(), Self::intermediate_id(i)))
            .collect();
        for d in &self.destinations {
            for i in 0..self.num_paths {
                if d.pattern.is_unblocked(i) {
                    edges.push((Self::intermediate_id(i), d.id()));
                }
            }
        }
        edges
    }

    pub fn num_edges(&self) -> usize {
        self.num_paths
            + self
                .destinations
                .iter()
                .map(|d| d.pattern.unblocked_count())
                .sum::<usize>()
    }

    /// Minimum source-to-destination cut value, computed by max-flow over the
    /// unit-capacity edge graph and scaled by the edge capacity.
    pub fn min_cut(&self, dest: &str) -> Result<Rational> {
        let di = self
            .destinations
            .iter()
            .position(|d| d.id() == dest)
            .ok_or_else(|| Error::NotFound(format!("no destination named {dest:?}")))?;
        // Node indices: 0 source, 1..=E intermediates, E+1 the destination.
        let sink = self.num_paths + 1;
        let mut edges = Vec::new();
        for i in 0..self.num_paths {
            edges.push((0, i + 1));
        }
        for i in 0..self.num_paths {
            if self.destinations[di].pattern.is_unblocked(i) {
                edges.push((i + 1, sink));
            }
        }
        let units = max_flow_units(sink + 1, &edges, 0, sink);
        Ok(rat_int(units as i64) * &self.edge_capacity)
    }

    /// Renders the requested format; `dot` or `json`.
    pub fn export(&self, format: &str) -> Result<String> {
        match format {
            "dot" => Ok(self.to_dot()),
            "json" => self.to_json_string(),
            other => Err(Error::InvalidInput(format!(
                "unknown export format {other:?} (expected \"dot\" or \"json\")"
            ))),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph combination_network {\n  rankdir=LR;\n");
        out.push_str("  \"s\" [role=\"source\"];\n");
        for i in 0..self.num_paths {
            out.push_str(&format!(
                "  \"{}\" [role=\"intermediate\"];\n",
                Self::intermediate_id(i)
            ));
        }
        for d in &self.destinations {
            out.push_str(&format!(
                "  \"{}\" [role=\"destination\", kind=\"{}\"];\n",
                d.id(),
                d.kind.as_str()
            ));
        }
        for (from, to) in self.edges() {
            out.push_str(&format!(
                "  \"{from}\" -> \"{to}\" [capacity=\"{}\"];\n",
                rat_to_string(&self.edge_capacity)
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json_string(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.to_json())
            .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
    }

    pub fn to_json(&self) -> NetworkJson {
        let mut nodes = vec![NodeJson {
            id: "s".into(),
            role: "source".into(),
            kind: None,
        }];
        for i in 0..self.num_paths {
            nodes.push(NodeJson {
                id: Self::intermediate_id(i),
                role: "intermediate".into(),
                kind: None,
            });
        }
        for d in &self.destinations {
            nodes.push(NodeJson {
                id: d.id(),
                role: "destination".into(),
                kind: Some(d.kind.as_str().into()),
            });
        }
        NetworkJson {
            edge_capacity: rat_to_string(&self.edge_capacity),
            nodes,
            edges: self
                .edges()
                .into_iter()
                .map(|(from, to)| EdgeJson { from, to })
                .collect(),
        }
    }

    pub fn from_json(j: &NetworkJson) -> Result<CombinationNetwork> {
        let edge_capacity = parse_rational(&j.edge_capacity)?;
        let num_paths = j.nodes.iter().filter(|n| n.role == "intermediate").count();
        let mut destinations = Vec::new();
        for n in &j.nodes {
            match n.role.as_str() {
                "source" | "intermediate" => {}
                "destination" => {
                    let pattern: BlockagePattern = n.id.parse()?;
                    if pattern.num_paths() != num_paths {
                        return Err(Error::InvalidInput(format!(
                            "destination {} does not match {num_paths} intermediates",
                            n.id
                        )));
                    }
                    let kind = match n.kind.as_deref() {
                        Some("public") => DestinationKind::Public,
                        Some("private") => DestinationKind::Private,
                        other => {
                            return Err(Error::InvalidInput(format!(
                                "destination {} has invalid kind {other:?}",
                                n.id
                            )))
                        }
                    };
                    destinations.push(Destination { pattern, kind });
                }
                other => {
                    return Err(Error::InvalidInput(format!("unknown node role {other:?}")));
                }
            }
        }
        destinations.sort_by_key(Destination::id);
        let net = CombinationNetwork {
            num_paths,
            edge_capacity,
            destinations,
        };
        // The edge list is implied by the structure; reject if it disagrees.
        let expected: Vec<EdgeJson> = net
            .edges()
            .into_iter()
            .map(|(from, to)| EdgeJson { from, to })
            .collect();
        let mut given = j.edges.clone();
        given.sort();
        let mut want = expected;
        want.sort();
        if given != want {
            return Err(Error::InvalidInput(
                "edge list does not match the combination-network structure".into(),
            ));
        }
        Ok(net)
    }

    pub fn from_json_str(s: &str) -> Result<CombinationNetwork> {
        let j: NetworkJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidInput(format!("invalid network JSON: {e}")))?;
        Self::from_json(&j)
    }
}

/// Serialized network form.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NetworkJson {
    pub edge_capacity: String,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NodeJson {
    pub id: String,
    pub role: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
}

/// Edmonds-Karp max flow where every listed edge has capacity 1.
fn max_flow_units(num_nodes: usize, edges: &[(usize, usize)], source: usize, sink: usize) -> u64 {
    // Paired forward/backward residual edges: edge 2k forward, 2k+1 backward.
    let mut adj = vec![Vec::new(); num_nodes];
    let mut cap = Vec::with_capacity(edges.len() * 2);
    let mut to = Vec::with_capacity(edges.len() * 2);
    for &(u, v) in edges {
        adj[u].push(cap.len());
        to.push(v);
        cap.push(1u64);
        adj[v].push(cap.len());
        to.push(u);
        cap.push(0u64);
    }
    let mut flow = 0;
    loop {
        let mut prev_edge = vec![usize::MAX; num_nodes];
        let mut visited = vec![false; num_nodes];
        visited[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for &eid in &adj[u] {
                let v = to[eid];
                if cap[eid] > 0 && !visited[v] {
                    visited[v] = true;
                    prev_edge[v] = eid;
                    queue.push_back(v);
                }
            }
        }
        if !visited[sink] {
            return flow;
        }
        let mut bottleneck = u64::MAX;
        let mut v = sink;
        while v != source {
            let eid = prev_edge[v];
            bottleneck = bottleneck.min(cap[eid]);
            v = to[eid ^ 1];
        }
        let mut v = sink;
        while v != source {
            let eid = prev_edge[v];
            cap[eid] -= bottleneck;
            cap[eid ^ 1] += bottleneck;
            v = to[eid ^ 1];
        }
        flow += bottleneck;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::enumerate_patterns;
    use crate::rational::rat;

    fn cfg(e: usize) -> NetworkConfig {
        NetworkConfig::new(e, rat_int(1), vec![0.1; e]).unwrap()
    }

    fn mixed_public_private() -> CombinationNetwork {
        let g = Grouping::parse(&["100", "110"], &["011", "101"]).unwrap();
        reduce_to_combination_network(&g, &cfg(3)).unwrap()
    }

    #[test]
    fn reduction_structure() {
        let net = mixed_public_private();
        assert_eq!(net.num_paths(), 3);
        assert_eq!(net.num_destinations(), 4);
        assert_eq!(net.node_ids().len(), 8);
        assert_eq!(net.num_edges(), 10);
        assert_eq!(net.edges().len(), 10);

        let kinds: Vec<(String, DestinationKind)> = net
            .destinations()
            .iter()
            .map(|d| (d.id(), d.kind()))
            .collect();
        assert_eq!(
            kinds,
            vec![
                ("011".into(), DestinationKind::Private),
                ("100".into(), DestinationKind::Public),
                ("101".into(), DestinationKind::Private),
                ("110".into(), DestinationKind::Public),
            ]
        );
    }

    #[test]
    fn single_destination_reductions() {
        let g = Grouping::parse(&[], &["111"]).unwrap();
        let net = reduce_to_combination_network(&g, &cfg(3)).unwrap();
        assert_eq!(net.num_destinations(), 1);
        assert_eq!(net.destinations()[0].kind(), DestinationKind::Private);
        assert_eq!(net.num_edges(), 3 + 3);

        let g = Grouping::parse(&["100"], &[]).unwrap();
        let net = reduce_to_combination_network(&g, &cfg(3)).unwrap();
        assert_eq!(net.num_destinations(), 1);
        assert_eq!(net.destinations()[0].kind(), DestinationKind::Public);
        assert_eq!(
            net.edges().last().unwrap(),
            &("p1".to_string(), "100".to_string())
        );

        let empty = Grouping::parse(&[], &[]).unwrap();
        assert!(matches!(
            reduce_to_combination_network(&empty, &cfg(3)),
            Err(Error::DegenerateInstance(_))
        ));
    }

    #[test]
    fn min_cuts_match_unblocked_counts() {
        let net = mixed_public_private();
        assert_eq!(net.min_cut("110").unwrap(), rat_int(2));
        assert_eq!(net.min_cut("100").unwrap(), rat_int(1));
        assert!(matches!(net.min_cut("111"), Err(Error::NotFound(_))));

        let g = Grouping::parse(&["100"], &["111"]).unwrap();
        let net = reduce_to_combination_network(&g, &cfg(3)).unwrap();
        assert_eq!(net.min_cut("111").unwrap(), rat_int(3));
    }

    #[test]
    fn min_cut_scales_with_capacity() {
        let g = Grouping::parse(&["100", "110"], &["011", "101"]).unwrap();
        let c = NetworkConfig::new(3, rat(3, 2), vec![0.1, 0.1, 0.1]).unwrap();
        let net = reduce_to_combination_network(&g, &c).unwrap();
        assert_eq!(net.min_cut("110").unwrap(), rat_int(3));
        assert_eq!(net.min_cut("100").unwrap(), rat(3, 2));
    }

    #[test]
    fn min_cut_exhaustive_small_networks() {
        for e in 2..=5 {
            // Odd-weight patterns public, even-weight private: the union is
            // every non-zero pattern.
            let all = enumerate_patterns(e).unwrap();
            let (g1, g2): (Vec<_>, Vec<_>) =
                all.into_iter().partition(|b| b.unblocked_count() % 2 == 1);
            let g = Grouping::new(g1, g2).unwrap();
            let net = reduce_to_combination_network(&g, &cfg(e)).unwrap();
            assert_eq!(net.num_destinations(), (1 << e) - 1);
            for d in net.destinations() {
                assert_eq!(
                    net.min_cut(&d.id()).unwrap(),
                    rat_int(d.pattern().unblocked_count() as i64),
                    "destination {}",
                    d.id()
                );
            }
        }
    }

    #[test]
    fn dot_export() {
        let net = mixed_public_private();
        let dot = net.to_dot();
        assert_eq!(dot.matches("\" [role=").count(), 8);
        assert_eq!(dot.matches(" -> ").count(), 10);
        assert!(dot.contains("\"110\" [role=\"destination\", kind=\"public\"];"));
        assert!(dot.contains("\"011\" [role=\"destination\", kind=\"private\"];"));
        assert!(dot.contains("\"s\" -> \"p1\""));
        assert_eq!(dot, net.to_dot(), "export must be deterministic");

        let g = Grouping::parse(&["100", "110"], &[]).unwrap();
        let public_only = reduce_to_combination_network(&g, &cfg(3)).unwrap();
        assert!(!public_only.to_dot().contains("private"));
    }

    #[test]
    fn json_round_trip() {
        let net = mixed_public_private();
        let s = net.to_json_string().unwrap();
        assert_eq!(s, net.to_json_string().unwrap());
        let back = CombinationNetwork::from_json_str(&s).unwrap();
        assert_eq!(back, net);

        assert!(net.export("dot").is_ok());
        assert_eq!(net.export("json").unwrap(), s);
        assert!(matches!(net.export("gml"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn json_rejects_corrupted_edges() {
        let net = mixed_public_private();
        let mut j = net.to_json();
        j.edges.pop();
        assert!(CombinationNetwork::from_json(&j).is_err());
    }
}
