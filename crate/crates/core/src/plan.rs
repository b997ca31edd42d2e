//! Per-fault reconfiguration plans extracted from solved models.

use serde::{Deserialize, Serialize};

use crate::indices::FaultImpact;
use crate::scenario::ScenarioId;
use crate::topology::{CableId, EcsTopology, End, NodeId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconfigurationPlan {
    pub scenario: ScenarioId,
    pub label: String,
    /// Cable states after reconfiguration, indexed by cable.
    pub cable_closed: Vec<bool>,
    /// Cable flows after reconfiguration, MW, positive from end `I` to `J`.
    pub flows: Vec<f64>,
    /// Power delivered to the substation per feeder, MW.
    pub feeder_flows: Vec<f64>,
    /// Node phases, radians.
    pub phases: Vec<f64>,
    /// Turbines interrupted during the tripped stage.
    pub affected: Vec<NodeId>,
    /// Turbines still interrupted after reconfiguration.
    pub unrestored: Vec<NodeId>,
    /// Breakers opened at the tripped stage.
    pub tripped_breakers: Vec<(CableId, End)>,
    /// Every substation infeed opened at the tripped stage.
    pub grid_trip: bool,
    /// Switch states at the reconfiguration stage, where switches exist.
    pub switch_closed: Option<Vec<[Option<bool>; 2]>>,
    /// Ordered operator actions.
    pub actions: Vec<String>,
    /// This scenario's share of EENT, MWh/year.
    pub eent_contribution: f64,
    /// `true` when the reconfiguration stage could not be modeled and the
    /// affected set was kept interrupted until repair.
    pub fallback: bool,
}

impl ReconfigurationPlan {
    pub fn impact(&self, topo: &EcsTopology) -> Option<FaultImpact> {
        let cable = self.scenario.cable()?;
        let mut affected = vec![false; topo.nodes.len()];
        let mut unrestored = vec![false; topo.nodes.len()];
        for k in &self.affected {
            affected[k.0] = true;
        }
        for k in &self.unrestored {
            unrestored[k.0] = true;
        }
        Some(FaultImpact {
            cable,
            affected,
            unrestored,
        })
    }

    pub fn affected_labels(&self, topo: &EcsTopology) -> Vec<String> {
        self.affected
            .iter()
            .map(|&k| topo.node_label(k).to_string())
            .collect()
    }

    pub fn unrestored_labels(&self, topo: &EcsTopology) -> Vec<String> {
        self.unrestored
            .iter()
            .map(|&k| topo.node_label(k).to_string())
            .collect()
    }

    /// Cables whose post-fault state differs from the normal state:
    /// `(opened, closed)`.
    pub fn cable_changes(&self, topo: &EcsTopology) -> (Vec<CableId>, Vec<CableId>) {
        let mut opened = Vec::new();
        let mut closed = Vec::new();
        for c in &topo.cables {
            match (c.normally_closed, self.cable_closed[c.id.0]) {
                (true, false) => opened.push(c.id),
                (false, true) => closed.push(c.id),
                _ => {}
            }
        }
        (opened, closed)
    }
}

pub(crate) fn breaker_label(topo: &EcsTopology, c: CableId, end: End) -> String {
    let cab = topo.cable(c);
    format!(
        "CB {}@{}",
        topo.cable_label(c),
        topo.node_label(cab.node_at(end))
    )
}

pub(crate) fn switch_label(topo: &EcsTopology, c: CableId, end: End) -> String {
    let cab = topo.cable(c);
    format!(
        "SW {}@{}",
        topo.cable_label(c),
        topo.node_label(cab.node_at(end))
    )
}

/// Action list: trip breakers, open and close switches on every changed
/// cable, then reclose the tripped breakers.
pub(crate) fn narrate(
    topo: &EcsTopology,
    tripped: &[(CableId, End)],
    switch_closed: &[[Option<bool>; 2]],
) -> Vec<String> {
    let mut actions = Vec::new();
    for &(c, e) in tripped {
        actions.push(format!("trip {}", breaker_label(topo, c, e)));
    }
    let mut opens = Vec::new();
    let mut closes = Vec::new();
    for c in &topo.cables {
        for end in End::BOTH {
            if let Some(state) = switch_closed[c.id.0][end.index()] {
                if state != c.normally_closed {
                    let l = switch_label(topo, c.id, end);
                    if state {
                        closes.push(l);
                    } else {
                        opens.push(l);
                    }
                }
            }
        }
    }
    if !opens.is_empty() {
        actions.push(format!("open {}", opens.join(", ")));
    }
    for &(c, e) in tripped {
        actions.push(format!("reclose {}", breaker_label(topo, c, e)));
    }
    if !closes.is_empty() {
        actions.push(format!("close {}", closes.join(", ")));
    }
    actions
}
