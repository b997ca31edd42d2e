use std::fmt;

use serde::{Deserialize, Serialize};

use crate::topology::{CableId, EcsTopology, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScenarioId {
    NormalOperation,
    CableFault(CableId),
    TurbineFault(NodeId),
}

impl ScenarioId {
    pub fn label(&self, topo: &EcsTopology) -> String {
        match *self {
            ScenarioId::NormalOperation => "NO".to_string(),
            ScenarioId::CableFault(c) => topo.cable_label(c),
            ScenarioId::TurbineFault(k) => format!("WT{}", topo.node_label(k)),
        }
    }

    pub fn cable(&self) -> Option<CableId> {
        match *self {
            ScenarioId::CableFault(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioId::NormalOperation => write!(f, "NO"),
            ScenarioId::CableFault(c) => write!(f, "cable#{}", c.0),
            ScenarioId::TurbineFault(k) => write!(f, "turbine#{}", k.0),
        }
    }
}

/// Normal operation, then cable faults, then turbine faults, each in id order.
pub fn enumerate_scenarios(topo: &EcsTopology) -> Vec<ScenarioId> {
    let mut out = vec![ScenarioId::NormalOperation];
    out.extend(fault_cables(topo).into_iter().map(ScenarioId::CableFault));
    out.extend(
        topo.turbines()
            .filter(|(_, t)| t.failure_rate > 0.0)
            .map(|(id, _)| ScenarioId::TurbineFault(id)),
    );
    out
}

/// Cables with a positive failure rate.
pub fn fault_cables(topo: &EcsTopology) -> Vec<CableId> {
    topo.cables
        .iter()
        .filter(|c| c.failure_rate > 0.0)
        .map(|c| c.id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn fig2_has_twelve_scenarios() {
        let (topo, _) = bundled::fig2();
        let s = enumerate_scenarios(&topo);
        assert_eq!(s.len(), 12);
        assert_eq!(s[0], ScenarioId::NormalOperation);
        assert_eq!(s.iter().filter(|x| x.cable().is_some()).count(), 6);
    }

    #[test]
    fn zero_rates_leave_normal_operation() {
        let (mut topo, _) = bundled::fig2();
        for c in &mut topo.cables {
            c.failure_rate = 0.0;
        }
        for n in &mut topo.nodes {
            if let crate::topology::NodeKind::Turbine(t) = &mut n.kind {
                t.failure_rate = 0.0;
            }
        }
        assert_eq!(enumerate_scenarios(&topo), vec![ScenarioId::NormalOperation]);
    }
}
