//! Collector-system network: nodes, cables with their protection devices,
//! feeders, and the economic parameters used to price curtailed energy.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense index of a node inside one [`EcsTopology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

/// Dense index of a cable inside one [`EcsTopology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CableId(pub usize);

/// Dense index of a feeder inside one [`EcsTopology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeederId(pub usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurbineData {
    /// Rated capacity R_k, MW.
    pub rated_mw: f64,
    /// Sent power P_k used for flow feasibility, MW.
    pub sent_mw: f64,
    /// Failures per year.
    pub failure_rate: f64,
    /// Hours to repair a turbine fault.
    pub repair_hours: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NodeKind {
    Substation,
    Turbine(TurbineData),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    /// Label from the input document, used in every report.
    pub label: String,
    pub kind: NodeKind,
}

impl Node {
    pub fn is_substation(&self) -> bool {
        matches!(self.kind, NodeKind::Substation)
    }

    pub fn turbine(&self) -> Option<&TurbineData> {
        match &self.kind {
            NodeKind::Turbine(t) => Some(t),
            NodeKind::Substation => None,
        }
    }
}

/// One end of a cable. `I` is the first endpoint of the ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum End {
    I,
    J,
}

impl End {
    pub const BOTH: [End; 2] = [End::I, End::J];

    pub fn index(self) -> usize {
        match self {
            End::I => 0,
            End::J => 1,
        }
    }

    pub fn other(self) -> End {
        match self {
            End::I => End::J,
            End::J => End::I,
        }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            End::I => "i",
            End::J => "j",
        })
    }
}

/// Protection devices installed at one cable end.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndDevices {
    /// `Some(normally_closed)` when a circuit breaker is installed.
    pub breaker: Option<bool>,
    pub switch: bool,
}

impl EndDevices {
    pub const NONE: EndDevices = EndDevices {
        breaker: None,
        switch: false,
    };

    pub fn switch_only() -> Self {
        Self {
            breaker: None,
            switch: true,
        }
    }

    pub fn breaker_and_switch() -> Self {
        Self {
            breaker: Some(true),
            switch: true,
        }
    }

    pub fn has_breaker(&self) -> bool {
        self.breaker.is_some()
    }

    pub fn device_count(&self) -> (usize, usize) {
        (usize::from(self.breaker.is_some()), usize::from(self.switch))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cable {
    pub id: CableId,
    /// Ordered endpoints; `ends.0` is end `I`, `ends.1` is end `J`.
    pub ends: (NodeId, NodeId),
    /// Susceptance, MW per radian of phase difference.
    pub susceptance: f64,
    pub capacity_mw: f64,
    /// Failures per year.
    pub failure_rate: f64,
    /// Hours to isolate a fault on this cable.
    pub isolation_hours: f64,
    /// Hours to repair a fault on this cable.
    pub repair_hours: f64,
    /// `false` for a link cable (open in normal operation).
    pub normally_closed: bool,
    /// Devices at end `I` and end `J`.
    pub devices: [EndDevices; 2],
}

impl Cable {
    pub fn node_at(&self, end: End) -> NodeId {
        match end {
            End::I => self.ends.0,
            End::J => self.ends.1,
        }
    }

    pub fn devices_at(&self, end: End) -> EndDevices {
        self.devices[end.index()]
    }

    /// End at which `node` sits, if it is an endpoint.
    pub fn end_of(&self, node: NodeId) -> Option<End> {
        if self.ends.0 == node {
            Some(End::I)
        } else if self.ends.1 == node {
            Some(End::J)
        } else {
            None
        }
    }

    pub fn other(&self, node: NodeId) -> NodeId {
        if self.ends.0 == node {
            self.ends.1
        } else {
            self.ends.0
        }
    }

    pub fn has_switch(&self) -> bool {
        self.devices.iter().any(|d| d.switch)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feeder {
    pub id: FeederId,
    pub label: String,
    pub root_cable: CableId,
    pub capacity_mw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomicParams {
    /// Energy price α, $/kWh.
    pub energy_price_per_kwh: f64,
    pub discount_rate: f64,
    pub project_years: f64,
    /// Turbine annual effective utilization hours u_d.
    pub utilization_hours: f64,
    pub breaker_price: f64,
    pub switch_price: f64,
}

impl Default for EconomicParams {
    fn default() -> Self {
        Self {
            energy_price_per_kwh: 0.1,
            discount_rate: 0.08,
            project_years: 25.0,
            utilization_hours: 8760.0,
            breaker_price: 0.0,
            switch_price: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcsTopology {
    pub name: String,
    pub nodes: Vec<Node>,
    pub cables: Vec<Cable>,
    pub feeders: Vec<Feeder>,
}

impl EcsTopology {
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn cable(&self, id: CableId) -> &Cable {
        &self.cables[id.0]
    }

    pub fn feeder(&self, id: FeederId) -> &Feeder {
        &self.feeders[id.0]
    }

    pub fn turbines(&self) -> impl Iterator<Item = (NodeId, &TurbineData)> + '_ {
        self.nodes
            .iter()
            .filter_map(|n| n.turbine().map(|t| (n.id, t)))
    }

    pub fn turbine_ids(&self) -> Vec<NodeId> {
        self.turbines().map(|(id, _)| id).collect()
    }

    pub fn substations(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(|n| n.is_substation()).map(|n| n.id)
    }

    pub fn is_substation(&self, id: NodeId) -> bool {
        self.node(id).is_substation()
    }

    /// Cables incident to each node, in cable order.
    pub fn incidence(&self) -> Vec<Vec<CableId>> {
        let mut inc = vec![Vec::new(); self.nodes.len()];
        for c in &self.cables {
            inc[c.ends.0 .0].push(c.id);
            inc[c.ends.1 .0].push(c.id);
        }
        inc
    }

    pub fn find_node(&self, label: &str) -> Option<NodeId> {
        self.nodes.iter().find(|n| n.label == label).map(|n| n.id)
    }

    /// Cable joining two labelled nodes, in either orientation.
    pub fn find_cable(&self, a: &str, b: &str) -> Option<CableId> {
        let a = self.find_node(a)?;
        let b = self.find_node(b)?;
        self.cables
            .iter()
            .find(|c| c.ends == (a, b) || c.ends == (b, a))
            .map(|c| c.id)
    }

    /// `"i-j"` label of a cable.
    pub fn cable_label(&self, id: CableId) -> String {
        let c = self.cable(id);
        format!("{}-{}", self.node(c.ends.0).label, self.node(c.ends.1).label)
    }

    pub fn node_label(&self, id: NodeId) -> &str {
        &self.node(id).label
    }

    pub fn total_sent_mw(&self) -> f64 {
        self.turbines().map(|(_, t)| t.sent_mw).sum()
    }

    /// Number of installed breakers and switches.
    pub fn device_counts(&self) -> (usize, usize) {
        self.cables
            .iter()
            .flat_map(|c| c.devices.iter())
            .fold((0, 0), |(cb, sw), d| {
                let (b, s) = d.device_count();
                (cb + b, sw + s)
            })
    }

    pub fn feeder_of_root(&self, cable: CableId) -> Option<FeederId> {
        self.feeders
            .iter()
            .find(|f| f.root_cable == cable)
            .map(|f| f.id)
    }

    /// Copy without the cables matching `drop`; remaining cables are
    /// renumbered in order. Feeder roots must survive.
    pub fn without_cables(&self, drop: impl Fn(&Cable) -> bool) -> EcsTopology {
        let mut t = self.clone();
        let mut remap = vec![None; self.cables.len()];
        t.cables.clear();
        for c in &self.cables {
            if !drop(c) {
                let mut c2 = c.clone();
                c2.id = CableId(t.cables.len());
                remap[c.id.0] = Some(c2.id);
                t.cables.push(c2);
            }
        }
        for f in &mut t.feeders {
            f.root_cable = remap[f.root_cable.0].expect("feeder root kept");
        }
        t
    }
}
