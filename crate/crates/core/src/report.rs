//! Assessment results and their flat table renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::indices::{FaultImpact, NodeIndices};
use crate::plan::ReconfigurationPlan;
use crate::topology::{EcsTopology, FeederId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Ra1,
    Ra2,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ra1 => "RA1",
            ModelKind::Ra2 => "RA2",
        }
    }
}

/// Normal state and feeder partition chosen by a planning-mode solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanningOutcome {
    pub normal_closed: Vec<bool>,
    pub cable_feeder: Vec<Option<FeederId>>,
    pub node_feeder: Vec<Option<FeederId>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityReport {
    pub system: String,
    pub model: ModelKind,
    /// One row per turbine in node order.
    pub nodes: Vec<NodeIndices>,
    /// MWh/year.
    pub eent: f64,
    /// $.
    pub c_rel: f64,
    /// Sum of solver objectives; equals `eent` up to solver tolerance.
    pub objective: f64,
    /// One plan per cable scenario, in cable order.
    pub plans: Vec<ReconfigurationPlan>,
    pub planning: Option<PlanningOutcome>,
    pub solver: String,
    pub solve_seconds: f64,
}

fn join(labels: &[String]) -> String {
    labels.join(" ")
}

impl ReliabilityReport {
    pub fn impacts(&self, topo: &EcsTopology) -> Vec<FaultImpact> {
        self.plans.iter().filter_map(|p| p.impact(topo)).collect()
    }

    pub fn plan_for(&self, label: &str) -> Option<&ReconfigurationPlan> {
        self.plans.iter().find(|p| p.label == label)
    }

    pub fn tif_vector(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.tif).collect()
    }

    pub fn node_table_csv(&self) -> String {
        let mut out = String::from("node,tif_per_year,tid_hours_per_year\n");
        for n in &self.nodes {
            let _ = writeln!(out, "{},{},{}", n.label, n.tif, n.tid);
        }
        out
    }

    pub fn plan_table_csv(&self, topo: &EcsTopology) -> String {
        let mut out = String::from(
            "fault,affected,unrestored,opened,closed,actions,eent_contribution_mwh_per_year,fallback\n",
        );
        for p in &self.plans {
            let (opened, closed) = p.cable_changes(topo);
            let lab = |v: Vec<crate::topology::CableId>| {
                v.into_iter()
                    .map(|c| topo.cable_label(c))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},\"{}\",{},{}",
                p.label,
                join(&p.affected_labels(topo)),
                join(&p.unrestored_labels(topo)),
                lab(opened),
                lab(closed),
                p.actions.join("; "),
                p.eent_contribution,
                p.fallback
            );
        }
        out
    }

    /// Human-readable summary with per-turbine and per-fault tables.
    pub fn render(&self, topo: &EcsTopology) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} assessment of {} ({} solver, {:.3} s)",
            self.model.name(),
            self.system,
            self.solver,
            self.solve_seconds
        );
        let _ = writeln!(out, "EENT  = {:.6} MWh/year", self.eent);
        let _ = writeln!(out, "C_rel = {:.2} $", self.c_rel);
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<8} {:>14} {:>18}", "turbine", "TIF (1/yr)", "TID (h/yr)");
        for n in &self.nodes {
            let _ = writeln!(out, "{:<8} {:>14.6} {:>18.6}", n.label, n.tif, n.tid);
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<10} {:<24} {:<16} {:>14}",
            "fault", "affected", "unrestored", "EENT (MWh/yr)"
        );
        for p in &self.plans {
            let _ = writeln!(
                out,
                "{:<10} {:<24} {:<16} {:>14.6}{}",
                p.label,
                join(&p.affected_labels(topo)),
                join(&p.unrestored_labels(topo)),
                p.eent_contribution,
                if p.fallback { "  (fallback)" } else { "" }
            );
            for a in &p.actions {
                let _ = writeln!(out, "    {a}");
            }
        }
        out
    }
}
