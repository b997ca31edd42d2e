//! Reliability assessment of offshore wind collector systems: topology
//! model, the two MILP assessment models, Monte-Carlo and enumeration
//! oracles.

pub mod affiliation;
pub mod bundled;
mod engine;
pub mod error;
pub mod flow;
pub mod indices;
pub mod input;
pub mod oracle;
pub mod plan;
pub mod ra1;
pub mod ra2;
pub mod report;
pub mod scenario;
pub mod smcs;
pub mod sweep;
pub mod topology;
pub mod validate;

pub use affiliation::{feeder_affiliation, AffiliationMap, RadialTree};
pub use engine::AssessOptions;
pub use error::EcsError;
pub use indices::{
    annuity_factor, baseline_eent, compute_indices, energy_value, reliability_cost, FaultImpact,
    IndexSummary, NodeIndices,
};
pub use input::{load_topology, DeviceOverlay, TopologyDoc};
pub use oracle::{brute_force_reconfigure, vff_floodfill, BruteForceResult, DeviceStates, Stage, VffRegion};
pub use plan::ReconfigurationPlan;
pub use ra1::{assess_ra1, build_ra1, scenario_decompose, Ra1Mode, Ra1Model};
pub use ra2::{
    assess_ra2, build_ra2, compare_configurations, deployments, ComparisonRow, Deployment, Ra2Model,
    SwitchBenefit,
};
pub use report::{ModelKind, PlanningOutcome, ReliabilityReport};
pub use scenario::{enumerate_scenarios, ScenarioId};
pub use smcs::{simulate, CollisionPolicy, SimConfig, SimResult};
pub use sweep::{run_sweep, SweepKind, SweepRow};
pub use topology::{
    Cable, CableId, EcsTopology, EconomicParams, End, EndDevices, Feeder, FeederId, Node, NodeId,
    NodeKind, TurbineData,
};
pub use validate::{validate_topology, Diagnostic, ValidationReport};
