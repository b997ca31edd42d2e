//! The JSON input document and device-overlay documents.
//!
//! ```json
//! {
//!   "name": "example",
//!   "nodes": [
//!     { "id": 1, "kind": "substation" },
//!     { "id": 2, "kind": "turbine", "rated_mw": 5.0, "sent_mw": 5.0,
//!       "failure_rate": 0.2, "repair_hours": 120.0 }
//!   ],
//!   "cables": [
//!     { "i": 1, "j": 2, "susceptance": 200.0, "capacity_mw": 30.0,
//!       "failure_rate": 0.05, "isolation_hours": 2.0, "repair_hours": 1440.0,
//!       "normal_state": 1,
//!       "end_devices": { "i": ["breaker", "switch"], "j": ["switch"] },
//!       "breaker_normal_state": { "i": 1 } }
//!   ],
//!   "feeders": [ { "id": "F1", "root_cable": [1, 2], "capacity_mw": 30.0 } ],
//!   "economics": { "energy_price_per_kwh": 0.1, "discount_rate": 0.08,
//!                  "project_years": 25, "utilization_hours": 4000,
//!                  "breaker_price": 50000, "switch_price": 5000 }
//! }
//! ```
//!
//! Node ids may be numbers or strings; they become labels. `sent_mw`
//! defaults to `rated_mw`. Missing `end_devices` means no devices; missing
//! `breaker_normal_state` means installed breakers are normally closed.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::EcsError;
use crate::topology::{
    Cable, CableId, EcsTopology, EconomicParams, EndDevices, Feeder, FeederId, Node, NodeId,
    NodeKind, TurbineData,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Num(i64),
    Text(String),
}

impl Label {
    pub fn as_string(&self) -> String {
        match self {
            Label::Num(n) => n.to_string(),
            Label::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceKind {
    Breaker,
    Switch,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EndDevicesDoc {
    #[serde(default)]
    pub i: Vec<DeviceKind>,
    #[serde(default)]
    pub j: Vec<DeviceKind>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BreakerStateDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NodeKindDoc {
    Substation,
    Turbine {
        rated_mw: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sent_mw: Option<f64>,
        failure_rate: f64,
        repair_hours: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: Label,
    #[serde(flatten)]
    pub kind: NodeKindDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CableDoc {
    pub i: Label,
    pub j: Label,
    pub susceptance: f64,
    pub capacity_mw: f64,
    pub failure_rate: f64,
    pub isolation_hours: f64,
    pub repair_hours: f64,
    pub normal_state: u8,
    #[serde(default)]
    pub end_devices: EndDevicesDoc,
    #[serde(default)]
    pub breaker_normal_state: BreakerStateDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeederDoc {
    pub id: Label,
    pub root_cable: (Label, Label),
    pub capacity_mw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyDoc {
    #[serde(default)]
    pub name: String,
    pub nodes: Vec<NodeDoc>,
    pub cables: Vec<CableDoc>,
    pub feeders: Vec<FeederDoc>,
    #[serde(default)]
    pub economics: Option<EconomicParams>,
}

/// Patch of device fields only, keyed by cable endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceOverlay {
    pub name: String,
    /// Remove every device not mentioned in `cables` first.
    #[serde(default)]
    pub clear_unlisted: bool,
    #[serde(default)]
    pub cables: Vec<OverlayCable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayCable {
    pub i: Label,
    pub j: Label,
    #[serde(default)]
    pub end_devices: EndDevicesDoc,
    #[serde(default)]
    pub breaker_normal_state: BreakerStateDoc,
}

fn parse_err(msg: impl Into<String>) -> EcsError {
    EcsError::Parse(msg.into())
}

fn bit(v: u8, what: &str) -> Result<bool, EcsError> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(parse_err(format!("{what} must be 0 or 1, got {other}"))),
    }
}

fn end_devices(
    doc: &EndDevicesDoc,
    states: &BreakerStateDoc,
    who: &str,
) -> Result<[EndDevices; 2], EcsError> {
    let mut out = [EndDevices::NONE; 2];
    for (slot, kinds, state) in [(0, &doc.i, states.i), (1, &doc.j, states.j)] {
        for k in kinds {
            match k {
                DeviceKind::Breaker => {
                    let closed = match state {
                        Some(v) => bit(v, &format!("{who} breaker_normal_state"))?,
                        None => true,
                    };
                    out[slot].breaker = Some(closed);
                }
                DeviceKind::Switch => out[slot].switch = true,
            }
        }
        if state.is_some() && out[slot].breaker.is_none() {
            return Err(parse_err(format!(
                "{who}: breaker_normal_state given for an end without a breaker"
            )));
        }
    }
    Ok(out)
}

fn devices_doc(devices: &[EndDevices; 2]) -> (EndDevicesDoc, BreakerStateDoc) {
    let kinds = |d: &EndDevices| {
        let mut v = Vec::new();
        if d.breaker.is_some() {
            v.push(DeviceKind::Breaker);
        }
        if d.switch {
            v.push(DeviceKind::Switch);
        }
        v
    };
    let state = |d: &EndDevices| match d.breaker {
        Some(false) => Some(0),
        _ => None,
    };
    (
        EndDevicesDoc {
            i: kinds(&devices[0]),
            j: kinds(&devices[1]),
        },
        BreakerStateDoc {
            i: state(&devices[0]),
            j: state(&devices[1]),
        },
    )
}

impl TopologyDoc {
    pub fn from_json(text: &str) -> Result<Self, EcsError> {
        serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, EcsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EcsError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Builds the topology and economics; parameter and reference errors are
    /// reported here, structural ones by [`crate::validate_topology`].
    pub fn into_model(self) -> Result<(EcsTopology, EconomicParams), EcsError> {
        let mut index: HashMap<String, NodeId> = HashMap::new();
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (k, nd) in self.nodes.iter().enumerate() {
            let label = nd.id.as_string();
            if index.insert(label.clone(), NodeId(k)).is_some() {
                return Err(parse_err(format!("duplicate node id {label}")));
            }
            let kind = match nd.kind {
                NodeKindDoc::Substation => NodeKind::Substation,
                NodeKindDoc::Turbine {
                    rated_mw,
                    sent_mw,
                    failure_rate,
                    repair_hours,
                } => {
                    let sent = sent_mw.unwrap_or(rated_mw);
                    if !(rated_mw > 0.0) {
                        return Err(parse_err(format!("turbine {label}: rated_mw must be > 0")));
                    }
                    if !(0.0..=rated_mw).contains(&sent) {
                        return Err(parse_err(format!(
                            "turbine {label}: sent_mw must lie in [0, rated_mw]"
                        )));
                    }
                    if !(failure_rate >= 0.0) || !(repair_hours >= 0.0) {
                        return Err(parse_err(format!(
                            "turbine {label}: failure_rate and repair_hours must be >= 0"
                        )));
                    }
                    NodeKind::Turbine(TurbineData {
                        rated_mw,
                        sent_mw: sent,
                        failure_rate,
                        repair_hours,
                    })
                }
            };
            nodes.push(Node {
                id: NodeId(k),
                label,
                kind,
            });
        }
        let lookup = |l: &Label| -> Result<NodeId, EcsError> {
            index
                .get(&l.as_string())
                .copied()
                .ok_or_else(|| parse_err(format!("unknown node {}", l.as_string())))
        };

        let mut cables = Vec::with_capacity(self.cables.len());
        for (k, cd) in self.cables.iter().enumerate() {
            let who = format!("cable {}-{}", cd.i.as_string(), cd.j.as_string());
            let ends = (lookup(&cd.i)?, lookup(&cd.j)?);
            for (v, name) in [
                (cd.susceptance, "susceptance"),
                (cd.capacity_mw, "capacity_mw"),
            ] {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(parse_err(format!("{who}: {name} must be > 0")));
                }
            }
            for (v, name) in [
                (cd.failure_rate, "failure_rate"),
                (cd.isolation_hours, "isolation_hours"),
                (cd.repair_hours, "repair_hours"),
            ] {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(parse_err(format!("{who}: {name} must be >= 0")));
                }
            }
            cables.push(Cable {
                id: CableId(k),
                ends,
                susceptance: cd.susceptance,
                capacity_mw: cd.capacity_mw,
                failure_rate: cd.failure_rate,
                isolation_hours: cd.isolation_hours,
                repair_hours: cd.repair_hours,
                normally_closed: bit(cd.normal_state, &format!("{who} normal_state"))?,
                devices: end_devices(&cd.end_devices, &cd.breaker_normal_state, &who)?,
            });
        }

        let mut feeders = Vec::with_capacity(self.feeders.len());
        for (k, fd) in self.feeders.iter().enumerate() {
            let a = lookup(&fd.root_cable.0)?;
            let b = lookup(&fd.root_cable.1)?;
            let root = cables
                .iter()
                .find(|c: &&Cable| c.ends == (a, b) || c.ends == (b, a))
                .map(|c| c.id)
                .ok_or_else(|| {
                    parse_err(format!(
                        "feeder {}: root cable {}-{} does not exist",
                        fd.id.as_string(),
                        fd.root_cable.0.as_string(),
                        fd.root_cable.1.as_string()
                    ))
                })?;
            if !(fd.capacity_mw > 0.0) {
                return Err(parse_err(format!(
                    "feeder {}: capacity_mw must be > 0",
                    fd.id.as_string()
                )));
            }
            feeders.push(Feeder {
                id: FeederId(k),
                label: fd.id.as_string(),
                root_cable: root,
                capacity_mw: fd.capacity_mw,
            });
        }

        let econ = self.economics.unwrap_or_default();
        check_economics(&econ)?;
        Ok((
            EcsTopology {
                name: self.name,
                nodes,
                cables,
                feeders,
            },
            econ,
        ))
    }

    /// Inverse of [`TopologyDoc::into_model`].
    pub fn from_model(topo: &EcsTopology, econ: &EconomicParams) -> Self {
        let label = |id: NodeId| Label::Text(topo.node_label(id).to_string());
        TopologyDoc {
            name: topo.name.clone(),
            nodes: topo
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: Label::Text(n.label.clone()),
                    kind: match &n.kind {
                        NodeKind::Substation => NodeKindDoc::Substation,
                        NodeKind::Turbine(t) => NodeKindDoc::Turbine {
                            rated_mw: t.rated_mw,
                            sent_mw: Some(t.sent_mw),
                            failure_rate: t.failure_rate,
                            repair_hours: t.repair_hours,
                        },
                    },
                })
                .collect(),
            cables: topo
                .cables
                .iter()
                .map(|c| {
                    let (end_devices, breaker_normal_state) = devices_doc(&c.devices);
                    CableDoc {
                        i: label(c.ends.0),
                        j: label(c.ends.1),
                        susceptance: c.susceptance,
                        capacity_mw: c.capacity_mw,
                        failure_rate: c.failure_rate,
                        isolation_hours: c.isolation_hours,
                        repair_hours: c.repair_hours,
                        normal_state: u8::from(c.normally_closed),
                        end_devices,
                        breaker_normal_state,
                    }
                })
                .collect(),
            feeders: topo
                .feeders
                .iter()
                .map(|f| {
                    let c = topo.cable(f.root_cable);
                    FeederDoc {
                        id: Label::Text(f.label.clone()),
                        root_cable: (label(c.ends.0), label(c.ends.1)),
                        capacity_mw: f.capacity_mw,
                    }
                })
                .collect(),
            economics: Some(econ.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

pub fn check_economics(e: &EconomicParams) -> Result<(), EcsError> {
    let fields = [
        (e.energy_price_per_kwh, "energy_price_per_kwh"),
        (e.discount_rate, "discount_rate"),
        (e.project_years, "project_years"),
        (e.utilization_hours, "utilization_hours"),
        (e.breaker_price, "breaker_price"),
        (e.switch_price, "switch_price"),
    ];
    for (v, name) in fields {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(parse_err(format!("economics.{name} must be finite and >= 0")));
        }
    }
    if e.project_years > 0.0 && e.discount_rate <= 0.0 {
        return Err(parse_err(
            "economics.discount_rate must be > 0 when project_years > 0",
        ));
    }
    Ok(())
}

/// Reads a topology document from disk.
pub fn load_topology(path: &Path) -> Result<(EcsTopology, EconomicParams), EcsError> {
    TopologyDoc::load(path)?.into_model()
}

impl DeviceOverlay {
    pub fn from_json(text: &str) -> Result<Self, EcsError> {
        serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, EcsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EcsError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Device layout (per cable, per end) after applying this overlay.
    pub fn apply(&self, topo: &EcsTopology) -> Result<Vec<[EndDevices; 2]>, EcsError> {
        let mut layout: Vec<[EndDevices; 2]> = if self.clear_unlisted {
            vec![[EndDevices::NONE; 2]; topo.cables.len()]
        } else {
            topo.cables.iter().map(|c| c.devices).collect()
        };
        for oc in &self.cables {
            let (a, b) = (oc.i.as_string(), oc.j.as_string());
            let id = topo.find_cable(&a, &b).ok_or_else(|| {
                parse_err(format!("overlay {}: unknown cable {a}-{b}", self.name))
            })?;
            let cable = topo.cable(id);
            let mut devs = end_devices(
                &oc.end_devices,
                &oc.breaker_normal_state,
                &format!("overlay {} cable {a}-{b}", self.name),
            )?;
            // Overlay ends follow the overlay's own orientation.
            if topo.node_label(cable.ends.0) != a {
                devs.swap(0, 1);
            }
            layout[id.0] = devs;
        }
        Ok(layout)
    }

    /// Overlay reproducing a given layout exactly.
    pub fn from_layout(name: &str, topo: &EcsTopology, layout: &[[EndDevices; 2]]) -> Self {
        DeviceOverlay {
            name: name.to_string(),
            clear_unlisted: true,
            cables: topo
                .cables
                .iter()
                .zip(layout)
                .filter(|(_, d)| **d != [EndDevices::NONE; 2])
                .map(|(c, d)| {
                    let (end_devices, breaker_normal_state) = devices_doc(d);
                    OverlayCable {
                        i: Label::Text(topo.node_label(c.ends.0).to_string()),
                        j: Label::Text(topo.node_label(c.ends.1).to_string()),
                        end_devices,
                        breaker_normal_state,
                    }
                })
                .collect(),
        }
    }
}

/// Copy of `topo` with a different device layout.
pub fn with_layout(topo: &EcsTopology, layout: &[[EndDevices; 2]]) -> EcsTopology {
    let mut t = topo.clone();
    for (c, d) in t.cables.iter_mut().zip(layout) {
        c.devices = *d;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "name": "small",
        "nodes": [
            {"id": 1, "kind": "substation"},
            {"id": "A", "kind": "turbine", "rated_mw": 5, "failure_rate": 0.2, "repair_hours": 100}
        ],
        "cables": [
            {"i": 1, "j": "A", "susceptance": 100, "capacity_mw": 10, "failure_rate": 0.1,
             "isolation_hours": 2, "repair_hours": 500, "normal_state": 1,
             "end_devices": {"i": ["breaker", "switch"], "j": ["switch"]}}
        ],
        "feeders": [{"id": "F1", "root_cable": [1, "A"], "capacity_mw": 10}]
    }"#;

    #[test]
    fn parses_mixed_labels_and_defaults() {
        let (topo, econ) = TopologyDoc::from_json(SMALL).unwrap().into_model().unwrap();
        assert_eq!(topo.nodes.len(), 2);
        let a = topo.find_node("A").unwrap();
        assert_eq!(topo.node(a).turbine().unwrap().sent_mw, 5.0);
        let c = &topo.cables[0];
        assert_eq!(c.devices[0].breaker, Some(true));
        assert!(c.devices[0].switch && c.devices[1].switch);
        assert_eq!(econ, EconomicParams::default());
    }

    #[test]
    fn document_roundtrip_preserves_model() {
        let (topo, econ) = TopologyDoc::from_json(SMALL).unwrap().into_model().unwrap();
        let text = TopologyDoc::from_model(&topo, &econ).to_json();
        let (topo2, econ2) = TopologyDoc::from_json(&text).unwrap().into_model().unwrap();
        assert_eq!(topo.cables, topo2.cables);
        assert_eq!(econ, econ2);
    }

    #[test]
    fn rejects_unknown_endpoint() {
        let bad = SMALL.replace(r#""j": "A", "susceptance""#, r#""j": "Z", "susceptance""#);
        assert!(matches!(
            TopologyDoc::from_json(&bad).unwrap().into_model(),
            Err(EcsError::Parse(_))
        ));
    }

    #[test]
    fn rejects_sent_power_above_rating() {
        let bad = SMALL.replace(r#""rated_mw": 5,"#, r#""rated_mw": 5, "sent_mw": 6,"#);
        assert!(TopologyDoc::from_json(&bad).unwrap().into_model().is_err());
    }

    #[test]
    fn overlay_follows_its_own_orientation() {
        let (topo, _) = TopologyDoc::from_json(SMALL).unwrap().into_model().unwrap();
        let ov = DeviceOverlay::from_json(
            r#"{"name": "flip", "clear_unlisted": true,
                "cables": [{"i": "A", "j": 1, "end_devices": {"i": ["switch"], "j": ["breaker"]}}]}"#,
        )
        .unwrap();
        let layout = ov.apply(&topo).unwrap();
        // Overlay end i is node A, which is the topology's end j.
        assert_eq!(layout[0][0].breaker, Some(true));
        assert!(!layout[0][0].switch);
        assert!(layout[0][1].switch);
    }
}
