//! Example systems shipped with the crate.

use crate::input::TopologyDoc;
use crate::topology::{
    Cable, CableId, EcsTopology, EconomicParams, EndDevices, Feeder, FeederId, Node, NodeId,
    NodeKind, TurbineData,
};

pub const FIG2_JSON: &str = include_str!("../data/fig2.json");
pub const RING2_JSON: &str = include_str!("../data/ring2.json");
pub const RING2_TIGHT_JSON: &str = include_str!("../data/ring2_tight.json");
pub const ORMONDE_LIKE_JSON: &str = include_str!("../data/ormonde_like.json");
pub const ORMONDE_CANDIDATES_JSON: &str = include_str!("../data/ormonde_candidates.json");

/// Name and document text of every bundled system.
pub const ALL: [(&str, &str); 5] = [
    ("fig2", FIG2_JSON),
    ("ring2", RING2_JSON),
    ("ring2_tight", RING2_TIGHT_JSON),
    ("ormonde_like", ORMONDE_LIKE_JSON),
    ("ormonde_candidates", ORMONDE_CANDIDATES_JSON),
];

fn load(text: &str) -> (EcsTopology, EconomicParams) {
    TopologyDoc::from_json(text)
        .and_then(TopologyDoc::into_model)
        .expect("bundled document is valid")
}

/// Six-node system: substation 1, turbines 2-6, feeders rooted at 1-2 and
/// 1-4, link cable 3-5; breakers at the substation end of both roots and
/// switches at both ends of every cable.
pub fn fig2() -> (EcsTopology, EconomicParams) {
    load(FIG2_JSON)
}

/// Two four-turbine feeders tied by links T4-T8 and T2-T6, ample capacity.
pub fn ring2() -> (EcsTopology, EconomicParams) {
    load(RING2_JSON)
}

/// [`ring2`] with links and feeders too small for full restoration.
pub fn ring2_tight() -> (EcsTopology, EconomicParams) {
    load(RING2_TIGHT_JSON)
}

/// Thirty turbines on two rings of fifteen, four feeders, links 7-15 and
/// 22-30.
pub fn ormonde_like() -> (EcsTopology, EconomicParams) {
    load(ORMONDE_LIKE_JSON)
}

/// [`ormonde_like`] with six candidate link cables, two per string end
/// position, for link-placement sweeps.
pub fn ormonde_candidates() -> (EcsTopology, EconomicParams) {
    load(ORMONDE_CANDIDATES_JSON)
}

/// Looks up a bundled system by name.
pub fn by_name(name: &str) -> Option<(EcsTopology, EconomicParams)> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, text)| load(text))
}

pub fn all() -> Vec<(&'static str, EcsTopology, EconomicParams)> {
    ALL.iter()
        .map(|(name, text)| {
            let (t, e) = load(text);
            (*name, t, e)
        })
        .collect()
}

/// Substation `S` feeding a single chain of `n` 5 MW turbines `1..=n`,
/// breaker at the root and switches at both ends of every cable.
pub fn chain(n: usize) -> EcsTopology {
    let mut nodes = vec![Node {
        id: NodeId(0),
        label: "S".into(),
        kind: NodeKind::Substation,
    }];
    let mut cables = Vec::new();
    for k in 1..=n {
        nodes.push(Node {
            id: NodeId(k),
            label: k.to_string(),
            kind: NodeKind::Turbine(TurbineData {
                rated_mw: 5.0,
                sent_mw: 5.0,
                failure_rate: 0.5,
                repair_hours: 240.0,
            }),
        });
        cables.push(Cable {
            id: CableId(k - 1),
            ends: (NodeId(k - 1), NodeId(k)),
            susceptance: 100.0,
            capacity_mw: 5.0 * n as f64,
            failure_rate: 0.1,
            isolation_hours: 2.0,
            repair_hours: 1440.0,
            normally_closed: true,
            devices: [
                if k == 1 {
                    EndDevices::breaker_and_switch()
                } else {
                    EndDevices::switch_only()
                },
                EndDevices::switch_only(),
            ],
        });
    }
    EcsTopology {
        name: format!("chain{n}"),
        nodes,
        cables,
        feeders: vec![Feeder {
            id: FeederId(0),
            label: "F1".into(),
            root_cable: CableId(0),
            capacity_mw: 5.0 * n as f64,
        }],
    }
}
