#![allow(dead_code)]

use ecsrel_core::oracle::{DeviceStates, Stage};
use ecsrel_core::{
    brute_force_reconfigure, vff_floodfill, CableId, EcsTopology, NodeId, ReconfigurationPlan,
    ReliabilityReport,
};

/// Interruption pattern of one turbine for one fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outage {
    None,
    /// Isolation time only.
    Sw,
    /// Isolation plus repair time.
    SwRp,
}

/// Expected outcome on the fig2 system, per closed-cable fault.
pub const FIG2_OUTAGES: [(&str, &str, [Outage; 5]); 5] = {
    use Outage::*;
    [
        ("1", "2", [Sw, Sw, None, None, Sw]),
        ("2", "3", [Sw, Sw, None, None, Sw]),
        ("3", "6", [Sw, Sw, None, None, SwRp]),
        ("1", "4", [None, None, Sw, Sw, None]),
        ("4", "5", [None, None, Sw, Sw, None]),
    ]
};

/// Turbine labels in the order of [`FIG2_OUTAGES`] rows.
pub const FIG2_TURBINES: [&str; 5] = ["2", "3", "4", "5", "6"];

pub fn outage_of(plan: &ReconfigurationPlan, k: NodeId) -> Outage {
    match (plan.affected.contains(&k), plan.unrestored.contains(&k)) {
        (false, false) => Outage::None,
        (true, false) => Outage::Sw,
        (true, true) => Outage::SwRp,
        (false, true) => panic!("unrestored but not affected"),
    }
}

/// Mismatches between a report and the fig2 expectations.
pub fn outage_mismatches(topo: &EcsTopology, report: &ReliabilityReport) -> Vec<String> {
    let mut out = Vec::new();
    for (a, b, expect) in FIG2_OUTAGES {
        let label = format!("{a}-{b}");
        let Some(plan) = report.plan_for(&label) else {
            out.push(format!("{label}: no plan"));
            continue;
        };
        for (t, want) in FIG2_TURBINES.iter().zip(expect) {
            let got = outage_of(plan, topo.find_node(t).unwrap());
            if got != want {
                out.push(format!("{label} turbine {t}: {got:?} != {want:?}"));
            }
        }
    }
    out
}

/// Scenario plans whose unrestored set is not among the enumerated optima,
/// or whose affected set differs.
pub fn brute_force_mismatches(topo: &EcsTopology, report: &ReliabilityReport) -> Vec<String> {
    let mut out = Vec::new();
    for plan in &report.plans {
        let c = plan.scenario.cable().unwrap();
        let bf = brute_force_reconfigure(topo, c).unwrap();
        if bf.affected != plan.affected {
            out.push(format!("{}: affected {:?} vs {:?}", plan.label, plan.affected, bf.affected));
        }
        if !bf.optimal_unrestored.contains(&plan.unrestored) {
            out.push(format!(
                "{}: unrestored {:?} not in {:?}",
                plan.label, plan.unrestored, bf.optimal_unrestored
            ));
        }
    }
    out
}

/// Compares MILP blackout sets with flood fills driven by the plan's own
/// device states.
pub fn floodfill_mismatches(topo: &EcsTopology, report: &ReliabilityReport) -> Vec<String> {
    let mut out = Vec::new();
    for plan in report.plans.iter().filter(|p| !p.fallback) {
        let c: CableId = plan.scenario.cable().unwrap();
        let mut ts = DeviceStates::tripped(topo, &plan.tripped_breakers);
        ts.grid_tripped = plan.grid_trip;
        let ts_dead = vff_floodfill(topo, c, Stage::Tripped, &ts).dead;
        if ts_dead != plan.affected {
            out.push(format!("{} TS: {:?} vs {:?}", plan.label, plan.affected, ts_dead));
        }
        let rs = DeviceStates::switched(topo, plan.switch_closed.clone().unwrap());
        let rs_dead = vff_floodfill(topo, c, Stage::Reconfiguration, &rs).dead;
        if rs_dead != plan.unrestored {
            out.push(format!("{} RS: {:?} vs {:?}", plan.label, plan.unrestored, rs_dead));
        }
    }
    out
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
