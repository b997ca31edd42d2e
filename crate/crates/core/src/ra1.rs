//! First assessment model: post-fault reconfiguration under the smart
//! switch configuration, with an optional planning mode where the normal
//! state and feeder affiliation are decision variables.

use ecsrel_milp::{LinExpr, MilpModel, Solution, SolveStatus, Var};

use crate::affiliation::{feeder_affiliation, AffiliationMap};
use crate::engine::{AssessOptions, Backend, Timer};
use crate::error::EcsError;
use crate::flow::{add_flow_layer, FlowBounds, FlowVars};
use crate::indices::{compute_indices, HOURS_PER_YEAR};
use crate::plan::{narrate, ReconfigurationPlan};
use crate::report::{ModelKind, PlanningOutcome, ReliabilityReport};
use crate::scenario::{fault_cables, ScenarioId};
use crate::topology::{CableId, EcsTopology, EconomicParams, End, FeederId, NodeId};
use crate::validate::validate_topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ra1Mode {
    /// Normal state and feeder affiliation taken from the topology.
    FixedTopology,
    /// Normal cable states and affiliation are variables.
    Planning,
}

/// Columns of one scenario.
#[derive(Debug, Clone)]
pub struct ScenarioVars {
    pub scenario: ScenarioId,
    /// In-service indicator per cable.
    pub state: Vec<LinExpr>,
    /// Cable state binaries, where the state is a decision.
    pub s: Vec<Option<Var>>,
    pub flow: FlowVars,
    /// Injection per node.
    pub generation: Vec<LinExpr>,
    /// Fault impact per node (turbines of cable scenarios only).
    pub m: Vec<Option<Var>>,
    /// Fault continuation per node (turbines of cable scenarios only).
    pub n: Vec<Option<Var>>,
}

/// Planning-mode columns.
#[derive(Debug, Clone)]
pub struct PlanningVars {
    pub s_no: Vec<Var>,
    /// `h[f][cable]`.
    pub h_cable: Vec<Vec<Var>>,
    /// `h[f][node]`, `None` for substations.
    pub h_node: Vec<Vec<Option<Var>>>,
}

#[derive(Debug, Clone)]
pub struct Ra1Model {
    pub model: MilpModel,
    pub scenarios: Vec<ScenarioVars>,
    pub planning: Option<PlanningVars>,
    /// Objective share that only orders equal-EENT optima.
    pub tie_break: LinExpr,
}

/// Per-turbine weight `u_d/8760 · R_k · λ_rs` of cable `c` in EENT.
pub(crate) fn eent_weight(topo: &EcsTopology, econ: &EconomicParams, c: CableId, k: NodeId) -> f64 {
    let r = topo.node(k).turbine().map_or(0.0, |t| t.rated_mw);
    econ.utilization_hours / HOURS_PER_YEAR * r * topo.cable(c).failure_rate
}

/// EENT share of the turbines' own faults.
pub(crate) fn turbine_eent(topo: &EcsTopology, econ: &EconomicParams) -> f64 {
    econ.utilization_hours / HOURS_PER_YEAR
        * topo
            .turbines()
            .map(|(_, t)| t.rated_mw * t.failure_rate * t.repair_hours)
            .sum::<f64>()
}

pub(crate) fn check_valid(topo: &EcsTopology) -> Result<(), EcsError> {
    let report = validate_topology(topo);
    if report.passed {
        Ok(())
    } else {
        let msgs: Vec<String> = report.diagnostics.iter().map(|d| d.to_string()).collect();
        Err(EcsError::InvalidTopology(msgs.join("; ")))
    }
}

pub(crate) fn fixed_affiliation(topo: &EcsTopology) -> Result<AffiliationMap, EcsError> {
    let aff = feeder_affiliation(topo)?;
    let missing = aff.unaffiliated_turbines(topo);
    if !missing.is_empty() {
        let labels: Vec<&str> = missing.iter().map(|&k| topo.node_label(k)).collect();
        return Err(EcsError::AffiliationUnavailable(format!(
            "turbines {} belong to no feeder",
            labels.join(", ")
        )));
    }
    Ok(aff)
}

/// Normal-operation scenario with cable states given as expressions.
pub(crate) fn add_normal_scenario(
    model: &mut MilpModel,
    topo: &EcsTopology,
    bounds: &FlowBounds,
    state: Vec<LinExpr>,
    s: Vec<Option<Var>>,
) -> ScenarioVars {
    let generation: Vec<LinExpr> = topo
        .nodes
        .iter()
        .map(|n| LinExpr::constant(n.turbine().map_or(0.0, |t| t.sent_mw)))
        .collect();
    let flow = add_flow_layer(model, topo, bounds, "NO", &state, &generation);
    ScenarioVars {
        scenario: ScenarioId::NormalOperation,
        state,
        s,
        flow,
        generation,
        m: vec![None; topo.nodes.len()],
        n: vec![None; topo.nodes.len()],
    }
}

/// Fault impact / continuation binaries with ordering, generation coupling
/// and their objective terms. Returns `(m, n, generation, objective)`.
pub(crate) fn add_impact_vars(
    model: &mut MilpModel,
    topo: &EcsTopology,
    econ: &EconomicParams,
    rs: CableId,
    tag: &str,
) -> (Vec<Option<Var>>, Vec<Option<Var>>, Vec<LinExpr>, LinExpr) {
    let cab = topo.cable(rs);
    let mut m = vec![None; topo.nodes.len()];
    let mut n = vec![None; topo.nodes.len()];
    let mut generation = vec![LinExpr::new(); topo.nodes.len()];
    let mut objective = LinExpr::new();
    for (k, t) in topo.turbines() {
        let label = topo.node_label(k);
        let mk = model.add_binary(format!("m[{tag}][{label}]"));
        let nk = model.add_binary(format!("n[{tag}][{label}]"));
        model.add_ge(format!("order[{tag}][{label}]"), mk, nk);
        generation[k.0] = (LinExpr::constant(1.0) - nk) * t.sent_mw;
        let w = eent_weight(topo, econ, rs, k);
        objective += mk * (w * cab.isolation_hours);
        objective += nk * (w * cab.repair_hours);
        m[k.0] = Some(mk);
        n[k.0] = Some(nk);
    }
    (m, n, generation, objective)
}

/// Penalty on device operations, each term worth 0 or `weight`, scaled so
/// the total stays below half the smallest positive coefficient of
/// `primary`. It only selects among optima of `primary`.
pub(crate) fn tie_break(primary: &LinExpr, ops: &[(f64, LinExpr)]) -> LinExpr {
    let w_min = primary
        .terms()
        .iter()
        .map(|&(_, c)| c)
        .filter(|&c| c > 0.0)
        .fold(f64::INFINITY, f64::min);
    let w_min = if w_min.is_finite() { w_min } else { 1.0 };
    let total: f64 = ops.iter().map(|(w, _)| w).sum();
    let eps = w_min / (4.0 * (total + 1.0));
    ops.iter().map(|(w, e)| e.clone() * (eps * w)).sum()
}

/// Spanning-tree count: in-service cables equal supplied turbines.
pub(crate) fn add_radiality(
    model: &mut MilpModel,
    tag: &str,
    state: &[LinExpr],
    n: &[Option<Var>],
) {
    let lhs: LinExpr = state.iter().cloned().sum();
    let rhs: LinExpr = n
        .iter()
        .flatten()
        .map(|&nk| LinExpr::constant(1.0) - nk)
        .sum();
    model.add_eq(format!("radial[{tag}]"), lhs, rhs);
}

fn add_cable_scenario(
    model: &mut MilpModel,
    topo: &EcsTopology,
    econ: &EconomicParams,
    bounds: &FlowBounds,
    rs: CableId,
    affiliation: Affil<'_>,
    force_unrestored: bool,
) -> (ScenarioVars, LinExpr, LinExpr) {
    let tag = topo.cable_label(rs);
    let s: Vec<Var> = topo
        .cables
        .iter()
        .map(|c| model.add_binary(format!("s[{tag}][{}]", topo.cable_label(c.id))))
        .collect();
    model.add_eq(format!("faulted[{tag}]"), s[rs.0], 0.0);
    let (m, n, generation, objective) = add_impact_vars(model, topo, econ, rs, &tag);
    for (k, _) in topo.turbines() {
        let mk = m[k.0].unwrap();
        let label = topo.node_label(k);
        match affiliation {
            Affil::Fixed(aff) => {
                if aff.same_feeder(rs, k) {
                    model.add_ge(format!("impact[{tag}][{label}]"), mk, 1.0);
                }
            }
            Affil::Planning(p) => {
                for f in 0..topo.feeders.len() {
                    let hk = p.h_node[f][k.0].unwrap();
                    model.add_le(
                        format!("impact[{tag}][{label}][{}]", topo.feeders[f].label),
                        hk + p.h_cable[f][rs.0] - 1.0,
                        mk,
                    );
                }
            }
        }
        if force_unrestored {
            model.add_eq(format!("fallback[{tag}][{label}]"), n[k.0].unwrap(), 1.0);
        }
    }
    let state: Vec<LinExpr> = s.iter().map(|&v| v.into()).collect();
    let flow = add_flow_layer(model, topo, bounds, &tag, &state, &generation);
    add_radiality(model, &tag, &state, &n);
    let penalty = match affiliation {
        Affil::Fixed(_) => {
            let ops: Vec<(f64, LinExpr)> = topo
                .cables
                .iter()
                .filter(|c| c.id != rs)
                .map(|c| {
                    let e = if c.normally_closed {
                        LinExpr::constant(1.0) - s[c.id.0]
                    } else {
                        s[c.id.0].into()
                    };
                    (1.0, e)
                })
                .collect();
            tie_break(&objective, &ops)
        }
        Affil::Planning(_) => LinExpr::new(),
    };
    (
        ScenarioVars {
            scenario: ScenarioId::CableFault(rs),
            state,
            s: s.into_iter().map(Some).collect(),
            flow,
            generation,
            m,
            n,
        },
        objective,
        penalty,
    )
}

#[derive(Clone, Copy)]
enum Affil<'a> {
    Fixed(&'a AffiliationMap),
    Planning(&'a PlanningVars),
}

fn add_planning(model: &mut MilpModel, topo: &EcsTopology) -> PlanningVars {
    let s_no: Vec<Var> = topo
        .cables
        .iter()
        .map(|c| model.add_binary(format!("sNO[{}]", topo.cable_label(c.id))))
        .collect();
    let nf = topo.feeders.len();
    let h_cable: Vec<Vec<Var>> = topo
        .feeders
        .iter()
        .map(|f| {
            topo.cables
                .iter()
                .map(|c| {
                    model.add_continuous(
                        format!("h[{}][{}]", f.label, topo.cable_label(c.id)),
                        0.0,
                        1.0,
                    )
                })
                .collect()
        })
        .collect();
    let h_node: Vec<Vec<Option<Var>>> = topo
        .feeders
        .iter()
        .map(|f| {
            topo.nodes
                .iter()
                .map(|n| {
                    (!n.is_substation()).then(|| {
                        model.add_continuous(format!("h[{}][{}]", f.label, n.label), 0.0, 1.0)
                    })
                })
                .collect()
        })
        .collect();

    for c in &topo.cables {
        let cl = topo.cable_label(c.id);
        let slack = LinExpr::constant(1.0) - s_no[c.id.0];
        for f in 0..nf {
            let fl = &topo.feeders[f].label;
            for end in End::BOTH {
                if let Some(h_end) = h_node[f][c.node_at(end).0] {
                    model.add_abs_le(
                        &format!("affil_{end}[{fl}][{cl}]"),
                        h_cable[f][c.id.0],
                        h_end,
                        slack.clone(),
                    );
                }
            }
            model.add_le(format!("affil_open[{fl}][{cl}]"), h_cable[f][c.id.0], s_no[c.id.0]);
        }
        let sum: LinExpr = (0..nf).map(|f| LinExpr::from(h_cable[f][c.id.0])).sum();
        if nf > 0 {
            model.add_le(format!("affil_one[{cl}]"), sum, 1.0);
        }
        let at_sub = topo.is_substation(c.ends.0) || topo.is_substation(c.ends.1);
        if at_sub && topo.feeder_of_root(c.id).is_none() {
            model.add_eq(format!("unrooted_open[{cl}]"), s_no[c.id.0], 0.0);
        }
    }
    for f in &topo.feeders {
        model.add_eq(
            format!("affil_root[{}]", f.label),
            h_cable[f.id.0][f.root_cable.0],
            s_no[f.root_cable.0],
        );
    }
    if nf > 0 {
        for (k, _) in topo.turbines() {
            let sum: LinExpr = (0..nf).map(|f| LinExpr::from(h_node[f][k.0].unwrap())).sum();
            model.add_le(format!("affil_one[{}]", topo.node_label(k)), sum, 1.0);
        }
    }
    PlanningVars {
        s_no,
        h_cable,
        h_node,
    }
}

fn build_scenarios(
    topo: &EcsTopology,
    econ: &EconomicParams,
    mode: Ra1Mode,
    scenarios: &[ScenarioId],
    force_unrestored: bool,
) -> Result<Ra1Model, EcsError> {
    check_valid(topo)?;
    let bounds = FlowBounds::new(topo);
    let mut model = MilpModel::new(format!("ra1_{}", topo.name), bounds.model_m(topo));
    let mut objective = LinExpr::new();
    let mut tie = LinExpr::new();
    let mut vars = Vec::new();

    let (aff, planning) = match mode {
        Ra1Mode::FixedTopology => (Some(fixed_affiliation(topo)?), None),
        Ra1Mode::Planning => (None, Some(add_planning(&mut model, topo))),
    };

    for sc in scenarios {
        match *sc {
            ScenarioId::NormalOperation => {
                objective += LinExpr::constant(turbine_eent(topo, econ));
                let v = match &planning {
                    None => {
                        let state = topo
                            .cables
                            .iter()
                            .map(|c| LinExpr::constant(if c.normally_closed { 1.0 } else { 0.0 }))
                            .collect();
                        add_normal_scenario(&mut model, topo, &bounds, state, vec![None; topo.cables.len()])
                    }
                    Some(p) => {
                        let state: Vec<LinExpr> = p.s_no.iter().map(|&v| v.into()).collect();
                        let count: LinExpr = state.iter().cloned().sum();
                        let turbines = topo.turbines().count() as f64;
                        model.add_eq("radial[NO]", count, turbines);
                        let s = p.s_no.iter().map(|&v| Some(v)).collect();
                        add_normal_scenario(&mut model, topo, &bounds, state, s)
                    }
                };
                vars.push(v);
            }
            ScenarioId::CableFault(rs) => {
                let affil = match (&aff, &planning) {
                    (Some(a), _) => Affil::Fixed(a),
                    (None, Some(p)) => Affil::Planning(p),
                    (None, None) => unreachable!(),
                };
                let (v, obj, penalty) = add_cable_scenario(
                    &mut model,
                    topo,
                    econ,
                    &bounds,
                    rs,
                    affil,
                    force_unrestored,
                );
                objective += obj + penalty.clone();
                tie += penalty;
                vars.push(v);
            }
            ScenarioId::TurbineFault(_) => {}
        }
    }
    model.set_objective(objective);
    Ok(Ra1Model {
        model,
        scenarios: vars,
        planning,
        tie_break: tie,
    })
}

/// Scenarios carried by the model: normal operation and every cable with a
/// positive failure rate.
pub fn model_scenarios(topo: &EcsTopology) -> Vec<ScenarioId> {
    let mut out = vec![ScenarioId::NormalOperation];
    out.extend(fault_cables(topo).into_iter().map(ScenarioId::CableFault));
    out
}

/// Monolithic model over all scenarios.
pub fn build_ra1(
    topo: &EcsTopology,
    econ: &EconomicParams,
    mode: Ra1Mode,
) -> Result<Ra1Model, EcsError> {
    build_scenarios(topo, econ, mode, &model_scenarios(topo), false)
}

/// One model per scenario; their optimal objectives sum to the monolithic
/// optimum.
pub fn scenario_decompose(
    topo: &EcsTopology,
    econ: &EconomicParams,
    mode: Ra1Mode,
) -> Result<Vec<Ra1Model>, EcsError> {
    if mode == Ra1Mode::Planning {
        return Err(EcsError::NotDecomposable);
    }
    model_scenarios(topo)
        .iter()
        .map(|sc| build_scenarios(topo, econ, mode, std::slice::from_ref(sc), false))
        .collect()
}

/// Turbine-level vectors read from a solved scenario.
pub(crate) fn flags(sol: &Solution, vars: &[Option<Var>]) -> Vec<NodeId> {
    vars.iter()
        .enumerate()
        .filter_map(|(k, v)| v.filter(|&v| sol.flag(v)).map(|_| NodeId(k)))
        .collect()
}

pub(crate) fn scenario_contribution(
    topo: &EcsTopology,
    econ: &EconomicParams,
    rs: CableId,
    affected: &[NodeId],
    unrestored: &[NodeId],
) -> f64 {
    let cab = topo.cable(rs);
    affected
        .iter()
        .map(|&k| eent_weight(topo, econ, rs, k) * cab.isolation_hours)
        .chain(
            unrestored
                .iter()
                .map(|&k| eent_weight(topo, econ, rs, k) * cab.repair_hours),
        )
        .sum::<f64>()
        + 0.0
}

/// Solution values common to both models.
pub(crate) struct Extracted {
    pub cable_closed: Vec<bool>,
    pub flows: Vec<f64>,
    pub feeder_flows: Vec<f64>,
    pub phases: Vec<f64>,
    pub affected: Vec<NodeId>,
    pub unrestored: Vec<NodeId>,
}

pub(crate) fn extract(sol: &Solution, v: &ScenarioVars) -> Extracted {
    Extracted {
        cable_closed: v.state.iter().map(|e| sol.eval(e) > 0.5).collect(),
        flows: v.flow.flow.iter().map(|&x| sol.value(x)).collect(),
        feeder_flows: v.flow.feeder_flow.iter().map(|&x| sol.value(x)).collect(),
        phases: v
            .flow
            .theta
            .iter()
            .map(|t| t.map_or(0.0, |x| sol.value(x)))
            .collect(),
        affected: flags(sol, &v.m),
        unrestored: flags(sol, &v.n),
    }
}

fn feeder_of_cable(
    topo: &EcsTopology,
    sol: &Solution,
    aff: Option<&AffiliationMap>,
    planning: Option<&PlanningVars>,
    c: CableId,
) -> Option<FeederId> {
    if let Some(a) = aff {
        return a.cable[c.0];
    }
    let p = planning?;
    topo.feeders
        .iter()
        .find(|f| sol.value(p.h_cable[f.id.0][c.0]) > 0.5)
        .map(|f| f.id)
}

fn make_plan(
    topo: &EcsTopology,
    econ: &EconomicParams,
    sol: &Solution,
    v: &ScenarioVars,
    feeder: Option<FeederId>,
    fallback: bool,
) -> ReconfigurationPlan {
    let rs = v.scenario.cable().expect("cable scenario");
    let ex = extract(sol, v);
    let tripped: Vec<(CableId, End)> = feeder
        .map(|f| {
            let root = topo.cable(topo.feeder(f).root_cable);
            let end = if topo.is_substation(root.ends.0) {
                End::I
            } else {
                End::J
            };
            vec![(root.id, end)]
        })
        .unwrap_or_default();
    let switches: Vec<[Option<bool>; 2]> = ex
        .cable_closed
        .iter()
        .map(|&st| [Some(st), Some(st)])
        .collect();
    let actions = narrate(topo, &tripped, &switches);
    ReconfigurationPlan {
        scenario: v.scenario,
        label: topo.cable_label(rs),
        eent_contribution: scenario_contribution(topo, econ, rs, &ex.affected, &ex.unrestored),
        cable_closed: ex.cable_closed,
        flows: ex.flows,
        feeder_flows: ex.feeder_flows,
        phases: ex.phases,
        affected: ex.affected,
        unrestored: ex.unrestored,
        tripped_breakers: tripped,
        grid_trip: false,
        switch_closed: None,
        actions,
        fallback,
    }
}

fn planning_outcome(topo: &EcsTopology, sol: &Solution, p: &PlanningVars) -> PlanningOutcome {
    let cable_feeder = topo
        .cables
        .iter()
        .map(|c| {
            topo.feeders
                .iter()
                .find(|f| sol.value(p.h_cable[f.id.0][c.id.0]) > 0.5)
                .map(|f| f.id)
        })
        .collect();
    let node_feeder = topo
        .nodes
        .iter()
        .map(|n| {
            topo.feeders
                .iter()
                .find(|f| p.h_node[f.id.0][n.id.0].is_some_and(|v| sol.value(v) > 0.5))
                .map(|f| f.id)
        })
        .collect();
    PlanningOutcome {
        normal_closed: p.s_no.iter().map(|&v| sol.flag(v)).collect(),
        cable_feeder,
        node_feeder,
    }
}

fn infeasible_label(topo: &EcsTopology, sc: ScenarioId) -> String {
    sc.label(topo)
}

fn status_error(topo: &EcsTopology, sc: ScenarioId, sol: &Solution) -> EcsError {
    match sol.status {
        SolveStatus::Infeasible => EcsError::Infeasible(infeasible_label(topo, sc)),
        _ => EcsError::Solver(ecsrel_milp::MilpError::SolverError(format!(
            "{}: {:?} {}",
            sc.label(topo),
            sol.status,
            sol.message.clone().unwrap_or_default()
        ))),
    }
}

/// Solves the model and derives indices and per-fault plans.
pub fn assess_ra1(
    topo: &EcsTopology,
    econ: &EconomicParams,
    mode: Ra1Mode,
    opts: &AssessOptions,
) -> Result<ReliabilityReport, EcsError> {
    let backend = Backend::from_env()?;
    let timer = Timer::start();
    let mut plans = Vec::new();
    let mut objective = 0.0;
    let mut planning = None;

    if mode == Ra1Mode::FixedTopology && opts.decompose {
        let aff = fixed_affiliation(topo)?;
        let models = scenario_decompose(topo, econ, mode)?;
        let raw: Vec<MilpModel> = models.iter().map(|m| m.model.clone()).collect();
        let sols = backend.solve_all(&raw, opts)?;
        for (m, sol) in models.iter().zip(sols) {
            let v = &m.scenarios[0];
            if sol.is_optimal() {
                objective += sol.objective_value - sol.eval(&m.tie_break);
                if let Some(rs) = v.scenario.cable() {
                    plans.push(make_plan(topo, econ, &sol, v, aff.cable[rs.0], false));
                }
                continue;
            }
            let Some(rs) = v.scenario.cable() else {
                return Err(status_error(topo, v.scenario, &sol));
            };
            if sol.status != SolveStatus::Infeasible {
                return Err(status_error(topo, v.scenario, &sol));
            }
            let fb = build_scenarios(topo, econ, mode, &[v.scenario], true)?;
            let fsol = backend.solve(&fb.model, opts.gap)?;
            if !fsol.is_optimal() {
                return Err(status_error(topo, v.scenario, &fsol));
            }
            objective += fsol.objective_value - fsol.eval(&fb.tie_break);
            plans.push(make_plan(topo, econ, &fsol, &fb.scenarios[0], aff.cable[rs.0], true));
        }
    } else {
        let m = build_ra1(topo, econ, mode)?;
        let sol = backend.solve(&m.model, opts.gap)?;
        if !sol.is_optimal() {
            return Err(status_error(topo, ScenarioId::NormalOperation, &sol));
        }
        objective = sol.objective_value - sol.eval(&m.tie_break);
        let aff = match mode {
            Ra1Mode::FixedTopology => Some(fixed_affiliation(topo)?),
            Ra1Mode::Planning => None,
        };
        for v in &m.scenarios {
            if let Some(rs) = v.scenario.cable() {
                let f = feeder_of_cable(topo, &sol, aff.as_ref(), m.planning.as_ref(), rs);
                plans.push(make_plan(topo, econ, &sol, v, f, false));
            }
        }
        if let Some(p) = &m.planning {
            planning = Some(planning_outcome(topo, &sol, p));
        }
    }

    let impacts: Vec<_> = plans.iter().filter_map(|p| p.impact(topo)).collect();
    let summary = compute_indices(topo, econ, &impacts);
    Ok(ReliabilityReport {
        system: topo.name.clone(),
        model: ModelKind::Ra1,
        nodes: summary.nodes,
        eent: summary.eent,
        c_rel: summary.c_rel,
        objective,
        plans,
        planning,
        solver: backend.name().to_string(),
        solve_seconds: timer.seconds(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn fig2_model_shape() {
        let (topo, econ) = bundled::fig2();
        let m = build_ra1(&topo, &econ, Ra1Mode::FixedTopology).unwrap();
        assert_eq!(m.scenarios.len(), 7);
        for v in m.scenarios.iter().skip(1) {
            assert_eq!(v.m.iter().flatten().count(), 5);
            assert_eq!(v.n.iter().flatten().count(), 5);
        }
    }

    #[test]
    fn impact_row_for_fault_1_2_turbine_2() {
        let (topo, econ) = bundled::fig2();
        let m = build_ra1(&topo, &econ, Ra1Mode::FixedTopology).unwrap();
        let row = m
            .model
            .constraints()
            .iter()
            .find(|c| c.name == "impact[1-2][2]")
            .expect("row emitted");
        assert_eq!(row.rhs, 1.0);
        assert!(m
            .model
            .constraints()
            .iter()
            .all(|c| c.name != "impact[1-2][4]"));
    }

    #[test]
    fn planning_is_not_decomposable() {
        let (topo, econ) = bundled::fig2();
        assert!(matches!(
            scenario_decompose(&topo, &econ, Ra1Mode::Planning),
            Err(EcsError::NotDecomposable)
        ));
        assert_eq!(
            scenario_decompose(&topo, &econ, Ra1Mode::FixedTopology)
                .unwrap()
                .len(),
            7
        );
    }

    #[test]
    fn construction_is_deterministic() {
        let (topo, econ) = bundled::fig2();
        let a = build_ra1(&topo, &econ, Ra1Mode::FixedTopology).unwrap();
        let b = build_ra1(&topo, &econ, Ra1Mode::FixedTopology).unwrap();
        assert_eq!(a.model.to_lp_string(), b.model.to_lp_string());
    }
}
