//! Turbine interruption indices, EENT, and the money conversions built on
//! them.

use serde::{Deserialize, Serialize};

use crate::topology::{CableId, EcsTopology, EconomicParams, NodeId};

/// Hours in a year; EENT scales turbine downtime by `u_d / HOURS_PER_YEAR`.
pub const HOURS_PER_YEAR: f64 = 8760.0;

/// Outcome of one cable fault for every node: affected at the tripped stage
/// (`m`) and still interrupted after reconfiguration (`n`). Indexed by
/// [`NodeId`]; substation entries are always `false`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultImpact {
    pub cable: CableId,
    pub affected: Vec<bool>,
    pub unrestored: Vec<bool>,
}

impl FaultImpact {
    /// Every turbine affected and unrestored.
    pub fn blackout(topo: &EcsTopology, cable: CableId) -> Self {
        let all: Vec<bool> = topo.nodes.iter().map(|n| !n.is_substation()).collect();
        FaultImpact {
            cable,
            affected: all.clone(),
            unrestored: all,
        }
    }

    pub fn affected_ids(&self) -> Vec<NodeId> {
        ids(&self.affected)
    }

    pub fn unrestored_ids(&self) -> Vec<NodeId> {
        ids(&self.unrestored)
    }
}

fn ids(flags: &[bool]) -> Vec<NodeId> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, f)| **f)
        .map(|(k, _)| NodeId(k))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeIndices {
    pub node: NodeId,
    pub label: String,
    /// Interruptions per year.
    pub tif: f64,
    /// Interruption hours per year.
    pub tid: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSummary {
    /// One row per turbine, in node order.
    pub nodes: Vec<NodeIndices>,
    /// MWh per year.
    pub eent: f64,
    /// Discounted cost of curtailed energy over the project life, $.
    pub c_rel: f64,
}

/// Present value of one unit per year for `years` at rate `r`.
pub fn annuity_factor(r: f64, years: f64) -> f64 {
    if years <= 0.0 {
        return 0.0;
    }
    let g = (1.0 + r).powf(years);
    (g - 1.0) / (r * g)
}

/// Value in $ of `mwh` megawatt-hours priced in $/kWh.
pub fn energy_value(price_per_kwh: f64, mwh: f64) -> f64 {
    price_per_kwh * 1000.0 * mwh
}

pub fn reliability_cost(econ: &EconomicParams, eent: f64) -> f64 {
    energy_value(econ.energy_price_per_kwh, eent)
        * annuity_factor(econ.discount_rate, econ.project_years)
}

/// Net discounted benefit of a device deployment against the device-free
/// baseline.
pub fn switch_benefit_value(
    econ: &EconomicParams,
    eent0: f64,
    eent: f64,
    n_cb: usize,
    n_sw: usize,
) -> f64 {
    reliability_cost(econ, eent0 - eent)
        - (econ.breaker_price * n_cb as f64 + econ.switch_price * n_sw as f64)
}

/// TIF, TID and EENT from per-cable impacts plus the turbines' own faults.
/// Cables without an impact entry contribute nothing.
pub fn compute_indices(
    topo: &EcsTopology,
    econ: &EconomicParams,
    impacts: &[FaultImpact],
) -> IndexSummary {
    let mut tif = vec![0.0; topo.nodes.len()];
    let mut tid = vec![0.0; topo.nodes.len()];
    for imp in impacts {
        let c = topo.cable(imp.cable);
        for (k, _) in topo.turbines() {
            if imp.affected[k.0] {
                tif[k.0] += c.failure_rate;
                tid[k.0] += c.failure_rate * c.isolation_hours;
            }
            if imp.unrestored[k.0] {
                tid[k.0] += c.failure_rate * c.repair_hours;
            }
        }
    }
    let mut rows = Vec::new();
    let mut weighted = 0.0;
    for (k, t) in topo.turbines() {
        tif[k.0] += t.failure_rate;
        tid[k.0] += t.failure_rate * t.repair_hours;
        weighted += tid[k.0] * t.rated_mw;
        rows.push(NodeIndices {
            node: k,
            label: topo.node_label(k).to_string(),
            tif: tif[k.0],
            tid: tid[k.0],
        });
    }
    let eent = econ.utilization_hours / HOURS_PER_YEAR * weighted;
    IndexSummary {
        nodes: rows,
        eent,
        c_rel: reliability_cost(econ, eent),
    }
}

/// EENT with every cable fault blacking out every turbine until repaired.
pub fn baseline_eent(topo: &EcsTopology, econ: &EconomicParams) -> f64 {
    let impacts: Vec<FaultImpact> = crate::scenario::fault_cables(topo)
        .into_iter()
        .map(|c| FaultImpact::blackout(topo, c))
        .collect();
    compute_indices(topo, econ, &impacts).eent
}
