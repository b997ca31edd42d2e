//! Feeder affiliation of cables and turbines in the normal state, and the
//! radial tree structure derived from it.

use serde::Serialize;

use crate::error::EcsError;
use crate::topology::{CableId, EcsTopology, FeederId, NodeId};

/// `h^f` indicators for a fixed topology, stored as the owning feeder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffiliationMap {
    /// Owning feeder per cable; `None` for link cables.
    pub cable: Vec<Option<FeederId>>,
    /// Owning feeder per node; `None` for substations.
    pub node: Vec<Option<FeederId>>,
}

impl AffiliationMap {
    pub fn h_cable(&self, f: FeederId, c: CableId) -> bool {
        self.cable[c.0] == Some(f)
    }

    pub fn h_node(&self, f: FeederId, k: NodeId) -> bool {
        self.node[k.0] == Some(f)
    }

    /// Turbines sharing a feeder with cable `c`.
    pub fn same_feeder(&self, c: CableId, k: NodeId) -> bool {
        matches!((self.cable[c.0], self.node[k.0]), (Some(a), Some(b)) if a == b)
    }

    /// Turbines with no feeder.
    pub fn unaffiliated_turbines(&self, topo: &EcsTopology) -> Vec<NodeId> {
        topo.turbine_ids()
            .into_iter()
            .filter(|k| self.node[k.0].is_none())
            .collect()
    }
}

/// Traverses closed cables from each feeder root away from the substation.
pub fn feeder_affiliation(topo: &EcsTopology) -> Result<AffiliationMap, EcsError> {
    let inc = topo.incidence();
    let mut cable = vec![None; topo.cables.len()];
    let mut node = vec![None; topo.nodes.len()];
    for f in &topo.feeders {
        let root = topo.cable(f.root_cable);
        if !root.normally_closed {
            continue;
        }
        let start = if topo.is_substation(root.ends.0) {
            root.ends.1
        } else {
            root.ends.0
        };
        cable[root.id.0] = Some(f.id);
        let mut stack = vec![(start, root.id)];
        while let Some((u, via)) = stack.pop() {
            if topo.is_substation(u) {
                continue;
            }
            if let Some(other) = node[u.0] {
                if other != f.id {
                    return Err(EcsError::InvalidTopology(format!(
                        "turbine {} is reachable from feeders {} and {}",
                        topo.node_label(u),
                        topo.feeder(other).label,
                        f.label
                    )));
                }
                continue;
            }
            node[u.0] = Some(f.id);
            for &c in &inc[u.0] {
                let cab = topo.cable(c);
                if c == via || !cab.normally_closed {
                    continue;
                }
                match cable[c.0] {
                    Some(other) if other != f.id => {
                        return Err(EcsError::InvalidTopology(format!(
                            "cable {} is reachable from feeders {} and {}",
                            topo.cable_label(c),
                            topo.feeder(other).label,
                            f.label
                        )))
                    }
                    Some(_) => continue,
                    None => {}
                }
                cable[c.0] = Some(f.id);
                stack.push((cab.other(u), c));
            }
        }
    }
    Ok(AffiliationMap { cable, node })
}

/// Normal-state radial structure: parent cable of each turbine (towards its
/// substation) and depth in cables from the substation.
#[derive(Debug, Clone)]
pub struct RadialTree {
    pub parent_cable: Vec<Option<CableId>>,
    pub depth: Vec<Option<usize>>,
}

impl RadialTree {
    pub fn build(topo: &EcsTopology) -> Self {
        let inc = topo.incidence();
        let mut parent_cable = vec![None; topo.nodes.len()];
        let mut depth = vec![None; topo.nodes.len()];
        let mut queue = std::collections::VecDeque::new();
        for s in topo.substations() {
            depth[s.0] = Some(0);
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            for &c in &inc[u.0] {
                let cab = topo.cable(c);
                if !cab.normally_closed {
                    continue;
                }
                let v = cab.other(u);
                if depth[v.0].is_none() {
                    depth[v.0] = Some(depth[u.0].unwrap() + 1);
                    parent_cable[v.0] = Some(c);
                    queue.push_back(v);
                }
            }
        }
        RadialTree {
            parent_cable,
            depth,
        }
    }

    /// Endpoint of `c` closer to a substation; ties resolve to end `I`.
    pub fn upstream_node(&self, topo: &EcsTopology, c: CableId) -> NodeId {
        let (a, b) = topo.cable(c).ends;
        let da = self.depth[a.0].unwrap_or(usize::MAX);
        let db = self.depth[b.0].unwrap_or(usize::MAX);
        if db < da {
            b
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::topology::FeederId;

    #[test]
    fn fig2_partition() {
        let (topo, _) = bundled::fig2();
        let aff = feeder_affiliation(&topo).unwrap();
        let f1 = FeederId(0);
        let f2 = FeederId(1);
        for (a, b) in [("1", "2"), ("2", "3"), ("3", "6")] {
            let c = topo.find_cable(a, b).unwrap();
            assert!(aff.h_cable(f1, c) && !aff.h_cable(f2, c));
        }
        for (a, b) in [("1", "4"), ("4", "5")] {
            let c = topo.find_cable(a, b).unwrap();
            assert!(aff.h_cable(f2, c) && !aff.h_cable(f1, c));
        }
        let link = topo.find_cable("3", "5").unwrap();
        assert_eq!(aff.cable[link.0], None);
        for k in ["2", "3", "6"] {
            assert!(aff.h_node(f1, topo.find_node(k).unwrap()));
        }
        for k in ["4", "5"] {
            assert!(aff.h_node(f2, topo.find_node(k).unwrap()));
        }
    }

    #[test]
    fn single_feeder_chain() {
        let topo = bundled::chain(2);
        let aff = feeder_affiliation(&topo).unwrap();
        assert!(aff.cable.iter().all(|f| *f == Some(FeederId(0))));
        assert!(topo
            .turbine_ids()
            .iter()
            .all(|k| aff.h_node(FeederId(0), *k)));
    }

    #[test]
    fn upstream_end_follows_depth() {
        let (topo, _) = bundled::fig2();
        let tree = RadialTree::build(&topo);
        let c = topo.find_cable("3", "6").unwrap();
        assert_eq!(
            topo.node_label(tree.upstream_node(&topo, c)),
            "3"
        );
    }
}
