//! Structural checks on a topology: radial normal state, feeder roots,
//! duplicate cables and dangling nodes.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::topology::{CableId, EcsTopology, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    NoSubstation,
    SelfLoop { cable: String },
    DuplicateCable { first: String, second: String },
    /// Closed cables forming a loop; nodes listed in walk order, first node
    /// repeated at the end.
    Cycle { nodes: Vec<String> },
    DisconnectedTurbine { node: String },
    /// A normally closed component containing more than one substation.
    SharedComponent { substations: Vec<String> },
    DanglingNode { node: String },
    FeederRootMissingSubstation { feeder: String, cable: String },
    FeederRootOpen { feeder: String, cable: String },
    DuplicateFeederRoot { feeder: String, cable: String },
    /// Closed cable at a substation that is not any feeder's root.
    UnrootedSubstationCable { cable: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoSubstation => write!(f, "no substation node"),
            Diagnostic::SelfLoop { cable } => write!(f, "cable {cable} joins a node to itself"),
            Diagnostic::DuplicateCable { first, second } => {
                write!(f, "cables {first} and {second} join the same node pair")
            }
            Diagnostic::Cycle { nodes } => {
                write!(f, "cycle among closed cables: {}", nodes.join("-"))
            }
            Diagnostic::DisconnectedTurbine { node } => {
                write!(f, "turbine {node} has no closed path to a substation")
            }
            Diagnostic::SharedComponent { substations } => write!(
                f,
                "substations {} are joined by closed cables",
                substations.join(", ")
            ),
            Diagnostic::DanglingNode { node } => write!(f, "node {node} has no cables"),
            Diagnostic::FeederRootMissingSubstation { feeder, cable } => write!(
                f,
                "feeder {feeder}: root cable {cable} does not touch a substation"
            ),
            Diagnostic::FeederRootOpen { feeder, cable } => {
                write!(f, "feeder {feeder}: root cable {cable} is normally open")
            }
            Diagnostic::DuplicateFeederRoot { feeder, cable } => write!(
                f,
                "feeder {feeder}: root cable {cable} already roots another feeder"
            ),
            Diagnostic::UnrootedSubstationCable { cable } => write!(
                f,
                "closed cable {cable} leaves a substation but roots no feeder"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn cycles(&self) -> impl Iterator<Item = &Vec<String>> {
        self.diagnostics.iter().filter_map(|d| match d {
            Diagnostic::Cycle { nodes } => Some(nodes),
            _ => None,
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return writeln!(f, "topology valid");
        }
        writeln!(f, "topology invalid:")?;
        for d in &self.diagnostics {
            writeln!(f, "  - {d}")?;
        }
        Ok(())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Node path between `from` and `to` over the given adjacency.
fn tree_path(adj: &[Vec<NodeId>], from: NodeId, to: NodeId) -> Vec<NodeId> {
    let mut prev: Vec<Option<NodeId>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([from]);
    seen[from.0] = true;
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &v in &adj[u.0] {
            if !seen[v.0] {
                seen[v.0] = true;
                prev[v.0] = Some(u);
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while let Some(p) = prev[cur.0] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

pub fn validate_topology(topo: &EcsTopology) -> ValidationReport {
    let mut diags = Vec::new();
    let n = topo.nodes.len();
    let label = |id: NodeId| topo.node_label(id).to_string();

    if topo.substations().next().is_none() {
        diags.push(Diagnostic::NoSubstation);
    }

    let mut pairs: Vec<((NodeId, NodeId), CableId)> = Vec::new();
    for c in &topo.cables {
        if c.ends.0 == c.ends.1 {
            diags.push(Diagnostic::SelfLoop {
                cable: topo.cable_label(c.id),
            });
            continue;
        }
        let key = (c.ends.0.min(c.ends.1), c.ends.0.max(c.ends.1));
        if let Some((_, first)) = pairs.iter().find(|(k, _)| *k == key) {
            diags.push(Diagnostic::DuplicateCable {
                first: topo.cable_label(*first),
                second: topo.cable_label(c.id),
            });
        } else {
            pairs.push((key, c.id));
        }
    }

    let inc = topo.incidence();
    for node in &topo.nodes {
        if inc[node.id.0].is_empty() {
            diags.push(Diagnostic::DanglingNode {
                node: node.label.clone(),
            });
        }
    }

    // Radiality of the normal state.
    let mut uf = UnionFind::new(n);
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for c in topo.cables.iter().filter(|c| c.normally_closed) {
        let (a, b) = c.ends;
        if a == b {
            continue;
        }
        if !uf.union(a.0, b.0) {
            let mut walk: Vec<String> = tree_path(&adj, b, a).into_iter().map(label).collect();
            walk.push(label(b));
            diags.push(Diagnostic::Cycle { nodes: walk });
        }
        adj[a.0].push(b);
        adj[b.0].push(a);
    }
    let mut comp_subs: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for s in topo.substations() {
        let r = uf.find(s.0);
        comp_subs[r].push(s);
    }
    for subs in comp_subs.iter().filter(|s| s.len() > 1) {
        diags.push(Diagnostic::SharedComponent {
            substations: subs.iter().map(|&s| label(s)).collect(),
        });
    }
    for (id, _) in topo.turbines() {
        let r = uf.find(id.0);
        if comp_subs[r].is_empty() {
            diags.push(Diagnostic::DisconnectedTurbine { node: label(id) });
        }
    }

    // Feeder roots.
    let mut roots = HashSet::new();
    for f in &topo.feeders {
        let c = topo.cable(f.root_cable);
        let cable = topo.cable_label(c.id);
        if !roots.insert(c.id) {
            diags.push(Diagnostic::DuplicateFeederRoot {
                feeder: f.label.clone(),
                cable: cable.clone(),
            });
        }
        if !topo.is_substation(c.ends.0) && !topo.is_substation(c.ends.1) {
            diags.push(Diagnostic::FeederRootMissingSubstation {
                feeder: f.label.clone(),
                cable: cable.clone(),
            });
        }
        if !c.normally_closed {
            diags.push(Diagnostic::FeederRootOpen {
                feeder: f.label.clone(),
                cable,
            });
        }
    }
    for c in &topo.cables {
        let at_sub = topo.is_substation(c.ends.0) || topo.is_substation(c.ends.1);
        let turbine_side = !topo.is_substation(c.ends.0) || !topo.is_substation(c.ends.1);
        if c.normally_closed && at_sub && turbine_side && !roots.contains(&c.id) {
            diags.push(Diagnostic::UnrootedSubstationCable {
                cable: topo.cable_label(c.id),
            });
        }
    }

    ValidationReport {
        passed: diags.is_empty(),
        diagnostics: diags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn fig2_passes() {
        let (topo, _) = bundled::fig2();
        let r = validate_topology(&topo);
        assert!(r.passed, "{r}");
    }

    #[test]
    fn closing_the_link_creates_the_ring() {
        let (mut topo, _) = bundled::fig2();
        let link = topo.find_cable("3", "5").unwrap();
        topo.cables[link.0].normally_closed = true;
        let r = validate_topology(&topo);
        assert!(!r.passed);
        let cycles: Vec<_> = r.cycles().collect();
        assert_eq!(cycles.len(), 1);
        let mut ring: Vec<&str> = cycles[0].iter().map(String::as_str).collect();
        ring.pop();
        ring.sort();
        assert_eq!(ring, ["1", "2", "3", "4", "5"]);
    }

    #[test]
    fn isolated_turbine_is_reported() {
        let (mut topo, _) = bundled::fig2();
        let c = topo.find_cable("3", "6").unwrap();
        topo.cables[c.0].normally_closed = false;
        topo.cables[c.0].devices[0].switch = true;
        let r = validate_topology(&topo);
        assert!(r
            .diagnostics
            .contains(&Diagnostic::DisconnectedTurbine { node: "6".into() }));
    }

    #[test]
    fn duplicate_cable_is_reported() {
        let (mut topo, _) = bundled::fig2();
        let mut dup = topo.cables[0].clone();
        dup.id = CableId(topo.cables.len());
        dup.ends = (dup.ends.1, dup.ends.0);
        dup.normally_closed = false;
        topo.cables.push(dup);
        let r = validate_topology(&topo);
        assert!(r
            .diagnostics
            .iter()
            .any(|d| matches!(d, Diagnostic::DuplicateCable { .. })));
    }
}
