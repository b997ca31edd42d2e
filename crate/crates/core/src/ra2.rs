//! Second assessment model: arbitrary breaker/switch deployments, with
//! blackout regions delimited by virtual fault flow at the tripped and
//! reconfiguration stages.

use ecsrel_milp::{LinExpr, MilpModel, Solution, SolveStatus, Var};
use serde::{Deserialize, Serialize};

use crate::engine::{AssessOptions, Backend, Timer};
use crate::error::EcsError;
use crate::flow::{add_flow_layer, FlowBounds};
use crate::indices::{baseline_eent, compute_indices, switch_benefit_value};
use crate::plan::{breaker_label, narrate, ReconfigurationPlan};
use crate::ra1::{
    add_impact_vars, add_normal_scenario, add_radiality, check_valid, extract, model_scenarios,
    scenario_contribution, tie_break, turbine_eent, ScenarioVars,
};
use crate::report::{ModelKind, ReliabilityReport};
use crate::scenario::ScenarioId;
use crate::topology::{CableId, EcsTopology, EconomicParams, End, EndDevices, NodeId};

/// Virtual-fault-flow columns of one cable scenario.
#[derive(Debug, Clone)]
pub struct VffVars {
    /// Tripped-stage value per node; substations hold `1 - grid_trip`.
    pub ts_node: Vec<LinExpr>,
    pub ts_cable: Vec<Var>,
    /// Reconfiguration-stage value per node; substations hold 1.
    pub rs_node: Vec<LinExpr>,
    pub rs_cable: Vec<Var>,
    /// Breaker state at the tripped stage, per cable end where installed.
    pub breaker: Vec<[Option<Var>; 2]>,
    /// Switch state at the reconfiguration stage, per cable end where
    /// installed.
    pub switch: Vec<[Option<Var>; 2]>,
    /// Cable state implied by its switches.
    pub s: Vec<Var>,
    /// All substation infeeds opened because no breaker can separate the
    /// fault from the grid.
    pub grid_trip: Var,
}

#[derive(Debug, Clone)]
pub struct Ra2Scenario {
    pub base: ScenarioVars,
    /// `None` for normal operation.
    pub vff: Option<VffVars>,
    /// Reconfiguration stage omitted; continuation equals impact.
    pub fallback: bool,
}

#[derive(Debug, Clone)]
pub struct Ra2Model {
    pub model: MilpModel,
    pub scenarios: Vec<Ra2Scenario>,
    /// Objective share that only orders equal-EENT optima.
    pub tie_break: LinExpr,
}

/// Every normally open cable needs a switch somewhere, otherwise it can
/// neither stay open at the tripped stage nor be operated later.
pub fn check_devices(topo: &EcsTopology) -> Result<(), EcsError> {
    let missing: Vec<String> = topo
        .cables
        .iter()
        .filter(|c| !c.normally_closed && !c.has_switch())
        .map(|c| topo.cable_label(c.id))
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(EcsError::MissingDeviceData(format!(
            "normally open cables without a switch: {}",
            missing.join(", ")
        )))
    }
}

fn add_ts_layer(
    model: &mut MilpModel,
    topo: &EcsTopology,
    rs: CableId,
    tag: &str,
    m: &[Option<Var>],
) -> (Vec<LinExpr>, Vec<Var>, Vec<[Option<Var>; 2]>, Var) {
    let grid_trip = model.add_binary(format!("grid_trip[{tag}]"));
    let node: Vec<LinExpr> = topo
        .nodes
        .iter()
        .map(|n| {
            if n.is_substation() {
                LinExpr::constant(1.0) - grid_trip
            } else {
                model
                    .add_continuous(format!("fTS[{tag}][{}]", n.label), 0.0, 1.0)
                    .into()
            }
        })
        .collect();
    let cable: Vec<Var> = topo
        .cables
        .iter()
        .map(|c| model.add_continuous(format!("fTS[{tag}][{}]", topo.cable_label(c.id)), 0.0, 1.0))
        .collect();
    model.add_eq(format!("ts_source[{tag}]"), cable[rs.0], 0.0);

    let mut breaker = vec![[None, None]; topo.cables.len()];
    let mut budget = Vec::new();
    for c in &topo.cables {
        let cl = topo.cable_label(c.id);
        for end in End::BOTH {
            let v = c.node_at(end);
            let dev = c.devices_at(end);
            let name = format!("ts_{end}[{tag}][{cl}]");
            if let Some(normally_closed) = dev.breaker {
                let b = model.add_binary(format!("b_{end}[{tag}][{cl}]"));
                breaker[c.id.0][end.index()] = Some(b);
                budget.push((b, normally_closed));
                model.add_abs_le(
                    &name,
                    cable[c.id.0],
                    node[v.0].clone(),
                    LinExpr::constant(1.0) - b,
                );
            } else if dev.switch {
                let s_no = if c.normally_closed { 1.0 } else { 0.0 };
                model.add_abs_le(
                    &name,
                    cable[c.id.0],
                    node[v.0].clone(),
                    LinExpr::constant(1.0 - s_no),
                );
            } else {
                model.add_eq(name, cable[c.id.0], node[v.0].clone());
            }
        }
    }
    model.add_abs_binary_diff_sum_le(format!("one_trip[{tag}]"), &budget, 1);
    for (k, _) in topo.turbines() {
        model.add_eq(
            format!("impact[{tag}][{}]", topo.node_label(k)),
            m[k.0].unwrap(),
            LinExpr::constant(1.0) - node[k.0].clone(),
        );
    }
    (node, cable, breaker, grid_trip)
}

fn add_rs_layer(
    model: &mut MilpModel,
    topo: &EcsTopology,
    rs: CableId,
    tag: &str,
    n: &[Option<Var>],
) -> (Vec<LinExpr>, Vec<Var>, Vec<[Option<Var>; 2]>) {
    let node: Vec<LinExpr> = topo
        .nodes
        .iter()
        .map(|nd| {
            if nd.is_substation() {
                LinExpr::constant(1.0)
            } else {
                model
                    .add_continuous(format!("fRS[{tag}][{}]", nd.label), 0.0, 1.0)
                    .into()
            }
        })
        .collect();
    let cable: Vec<Var> = topo
        .cables
        .iter()
        .map(|c| model.add_continuous(format!("fRS[{tag}][{}]", topo.cable_label(c.id)), 0.0, 1.0))
        .collect();
    model.add_eq(format!("rs_source[{tag}]"), cable[rs.0], 0.0);
    let mut switch = vec![[None, None]; topo.cables.len()];
    for c in &topo.cables {
        let cl = topo.cable_label(c.id);
        for end in End::BOTH {
            let v = c.node_at(end);
            let name = format!("rs_{end}[{tag}][{cl}]");
            if c.devices_at(end).switch {
                let sw = model.add_binary(format!("sw_{end}[{tag}][{cl}]"));
                switch[c.id.0][end.index()] = Some(sw);
                model.add_abs_le(
                    &name,
                    cable[c.id.0],
                    node[v.0].clone(),
                    LinExpr::constant(1.0) - sw,
                );
            } else {
                model.add_eq(name, cable[c.id.0], node[v.0].clone());
            }
        }
    }
    for (k, _) in topo.turbines() {
        model.add_eq(
            format!("continuation[{tag}][{}]", topo.node_label(k)),
            n[k.0].unwrap(),
            LinExpr::constant(1.0) - node[k.0].clone(),
        );
    }
    (node, cable, switch)
}

/// Cable states from end switches, and the in-service indicator
/// `e = s AND (cable outside the reconfiguration-stage blackout)`.
fn add_switch_coupling(
    model: &mut MilpModel,
    topo: &EcsTopology,
    tag: &str,
    switch: &[[Option<Var>; 2]],
    rs_cable: &[Var],
) -> (Vec<Var>, Vec<LinExpr>) {
    let mut s = Vec::with_capacity(topo.cables.len());
    let mut in_service = Vec::with_capacity(topo.cables.len());
    for c in &topo.cables {
        let cl = topo.cable_label(c.id);
        let sc = model.add_binary(format!("s[{tag}][{cl}]"));
        match switch[c.id.0] {
            [None, None] => {
                model.add_eq(format!("cable_fixed[{tag}][{cl}]"), sc, 1.0);
            }
            [Some(a), None] | [None, Some(a)] => {
                model.add_eq(format!("cable_sw[{tag}][{cl}]"), sc, a);
            }
            [Some(a), Some(b)] => {
                model.add_le(format!("cable_and_i[{tag}][{cl}]"), sc, a);
                model.add_le(format!("cable_and_j[{tag}][{cl}]"), sc, b);
                model.add_ge(format!("cable_and_lo[{tag}][{cl}]"), sc, a + b - 1.0);
            }
        }
        let e = model.add_binary(format!("e[{tag}][{cl}]"));
        let f = rs_cable[c.id.0];
        model.add_le(format!("live_s[{tag}][{cl}]"), e, sc);
        model.add_le(format!("live_f[{tag}][{cl}]"), e, f);
        model.add_ge(format!("live_lo[{tag}][{cl}]"), e, sc + f - 1.0);
        s.push(sc);
        in_service.push(e.into());
    }
    (s, in_service)
}

fn add_cable_scenario(
    model: &mut MilpModel,
    topo: &EcsTopology,
    econ: &EconomicParams,
    bounds: &FlowBounds,
    rs: CableId,
    fallback: bool,
) -> (Ra2Scenario, LinExpr, LinExpr) {
    let tag = topo.cable_label(rs);
    let (m, n, generation, objective) = add_impact_vars(model, topo, econ, rs, &tag);
    let (ts_node, ts_cable, breaker, grid_trip) = add_ts_layer(model, topo, rs, &tag, &m);
    let mut ops: Vec<(f64, LinExpr)> = vec![(2.0, grid_trip.into())];
    for c in &topo.cables {
        for end in End::BOTH {
            if let (Some(b), Some(normal)) =
                (breaker[c.id.0][end.index()], c.devices_at(end).breaker)
            {
                ops.push((1.0, operated(b, normal)));
            }
        }
    }

    if fallback {
        for (k, _) in topo.turbines() {
            model.add_eq(
                format!("fallback[{tag}][{}]", topo.node_label(k)),
                n[k.0].unwrap(),
                m[k.0].unwrap(),
            );
        }
        let state = topo
            .cables
            .iter()
            .map(|c| {
                let closed = c.normally_closed && c.id != rs;
                LinExpr::constant(if closed { 1.0 } else { 0.0 })
            })
            .collect();
        let flow = crate::flow::FlowVars {
            flow: Vec::new(),
            theta: vec![None; topo.nodes.len()],
            feeder_flow: Vec::new(),
        };
        let base = ScenarioVars {
            scenario: ScenarioId::CableFault(rs),
            state,
            s: vec![None; topo.cables.len()],
            flow,
            generation,
            m,
            n,
        };
        let vff = VffVars {
            ts_node,
            ts_cable,
            rs_node: Vec::new(),
            rs_cable: Vec::new(),
            breaker,
            switch: vec![[None, None]; topo.cables.len()],
            s: Vec::new(),
            grid_trip,
        };
        let penalty = tie_break(&objective, &ops);
        return (
            Ra2Scenario {
                base,
                vff: Some(vff),
                fallback: true,
            },
            objective,
            penalty,
        );
    }

    let (rs_node, rs_cable, switch) = add_rs_layer(model, topo, rs, &tag, &n);
    for c in &topo.cables {
        for sw in switch[c.id.0].iter().flatten() {
            ops.push((1.0, operated(*sw, c.normally_closed)));
        }
    }
    let penalty = tie_break(&objective, &ops);
    let (s, in_service) = add_switch_coupling(model, topo, &tag, &switch, &rs_cable);
    let flow = add_flow_layer(model, topo, bounds, &tag, &in_service, &generation);
    add_radiality(model, &tag, &in_service, &n);
    let base = ScenarioVars {
        scenario: ScenarioId::CableFault(rs),
        state: in_service,
        s: s.iter().map(|&v| Some(v)).collect(),
        flow,
        generation,
        m,
        n,
    };
    (
        Ra2Scenario {
            base,
            vff: Some(VffVars {
                ts_node,
                ts_cable,
                rs_node,
                rs_cable,
                breaker,
                switch,
                s,
                grid_trip,
            }),
            fallback: false,
        },
        objective,
        penalty,
    )
}

/// 1 when a device with normal state `normal` is in the other state.
fn operated(x: Var, normal: bool) -> LinExpr {
    if normal {
        LinExpr::constant(1.0) - x
    } else {
        x.into()
    }
}

fn build_scenarios(
    topo: &EcsTopology,
    econ: &EconomicParams,
    scenarios: &[ScenarioId],
    fallback: bool,
) -> Result<Ra2Model, EcsError> {
    check_valid(topo)?;
    check_devices(topo)?;
    let bounds = FlowBounds::new(topo);
    let mut model = MilpModel::new(format!("ra2_{}", topo.name), bounds.model_m(topo));
    let mut objective = LinExpr::new();
    let mut tie = LinExpr::new();
    let mut out = Vec::new();
    for sc in scenarios {
        match *sc {
            ScenarioId::NormalOperation => {
                objective += LinExpr::constant(turbine_eent(topo, econ));
                let state = topo
                    .cables
                    .iter()
                    .map(|c| LinExpr::constant(if c.normally_closed { 1.0 } else { 0.0 }))
                    .collect();
                let base = add_normal_scenario(
                    &mut model,
                    topo,
                    &bounds,
                    state,
                    vec![None; topo.cables.len()],
                );
                out.push(Ra2Scenario {
                    base,
                    vff: None,
                    fallback: false,
                });
            }
            ScenarioId::CableFault(rs) => {
                let (v, obj, penalty) =
                    add_cable_scenario(&mut model, topo, econ, &bounds, rs, fallback);
                objective += obj + penalty.clone();
                tie += penalty;
                out.push(v);
            }
            ScenarioId::TurbineFault(_) => {}
        }
    }
    model.set_objective(objective);
    Ok(Ra2Model {
        model,
        scenarios: out,
        tie_break: tie,
    })
}

/// Monolithic model over normal operation and every cable fault.
pub fn build_ra2(topo: &EcsTopology, econ: &EconomicParams) -> Result<Ra2Model, EcsError> {
    build_scenarios(topo, econ, &model_scenarios(topo), false)
}

/// One model per scenario.
pub fn ra2_decompose(topo: &EcsTopology, econ: &EconomicParams) -> Result<Vec<Ra2Model>, EcsError> {
    model_scenarios(topo)
        .iter()
        .map(|sc| build_scenarios(topo, econ, std::slice::from_ref(sc), false))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwitchBenefit {
    /// Device-free baseline, MWh/year.
    pub eent0: f64,
    /// MWh/year.
    pub eent: f64,
    pub n_cb: usize,
    pub n_sw: usize,
    /// Net discounted benefit, $.
    pub v: f64,
}

impl SwitchBenefit {
    pub fn new(topo: &EcsTopology, econ: &EconomicParams, eent: f64) -> Self {
        let eent0 = baseline_eent(topo, econ);
        let (n_cb, n_sw) = topo.device_counts();
        SwitchBenefit {
            eent0,
            eent,
            n_cb,
            n_sw,
            v: switch_benefit_value(econ, eent0, eent, n_cb, n_sw),
        }
    }
}

fn make_plan(
    topo: &EcsTopology,
    econ: &EconomicParams,
    sol: &Solution,
    sc: &Ra2Scenario,
) -> ReconfigurationPlan {
    let v = &sc.base;
    let rs = v.scenario.cable().expect("cable scenario");
    let vff = sc.vff.as_ref().expect("cable scenario");
    let ex = extract(sol, v);
    let mut tripped = Vec::new();
    for c in &topo.cables {
        for end in End::BOTH {
            if let (Some(b), Some(normal)) =
                (vff.breaker[c.id.0][end.index()], c.devices_at(end).breaker)
            {
                if normal && !sol.flag(b) {
                    tripped.push((c.id, end));
                }
            }
        }
    }
    let switch_closed: Vec<[Option<bool>; 2]> = vff
        .switch
        .iter()
        .map(|ends| [ends[0].map(|x| sol.flag(x)), ends[1].map(|x| sol.flag(x))])
        .collect();
    let mut actions = narrate(topo, &tripped, &switch_closed);
    if sol.flag(vff.grid_trip) {
        actions.insert(0, "trip every substation infeed".to_string());
    }
    for c in &topo.cables {
        for end in End::BOTH {
            if let (Some(b), Some(false)) =
                (vff.breaker[c.id.0][end.index()], c.devices_at(end).breaker)
            {
                if sol.flag(b) {
                    actions.insert(0, format!("close {}", breaker_label(topo, c.id, end)));
                }
            }
        }
    }
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
        grid_trip: sol.flag(vff.grid_trip),
        switch_closed: (!sc.fallback).then_some(switch_closed),
        actions,
        fallback: sc.fallback,
    }
}

fn solver_failure(topo: &EcsTopology, sc: ScenarioId, sol: &Solution) -> EcsError {
    match sol.status {
        SolveStatus::Infeasible => EcsError::Infeasible(sc.label(topo)),
        _ => EcsError::Solver(ecsrel_milp::MilpError::SolverError(format!(
            "{}: {:?} {}",
            sc.label(topo),
            sol.status,
            sol.message.clone().unwrap_or_default()
        ))),
    }
}

/// Solves the model, derives indices, per-fault plans and the deployment's
/// net benefit.
pub fn assess_ra2(
    topo: &EcsTopology,
    econ: &EconomicParams,
    opts: &AssessOptions,
) -> Result<(ReliabilityReport, SwitchBenefit), EcsError> {
    let backend = Backend::from_env()?;
    let timer = Timer::start();
    let models: Vec<Ra2Model> = if opts.decompose {
        ra2_decompose(topo, econ)?
    } else {
        vec![build_ra2(topo, econ)?]
    };
    let raw: Vec<MilpModel> = models.iter().map(|m| m.model.clone()).collect();
    let sols = backend.solve_all(&raw, opts)?;
    let mut plans = Vec::new();
    let mut objective = 0.0;
    for (m, sol) in models.iter().zip(sols) {
        if sol.is_optimal() {
            objective += sol.objective_value - sol.eval(&m.tie_break);
            for sc in &m.scenarios {
                if sc.vff.is_some() {
                    plans.push(make_plan(topo, econ, &sol, sc));
                }
            }
            continue;
        }
        if sol.status != SolveStatus::Infeasible || !opts.decompose {
            return Err(solver_failure(topo, m.scenarios[0].base.scenario, &sol));
        }
        let sc = m.scenarios[0].base.scenario;
        if sc == ScenarioId::NormalOperation {
            return Err(solver_failure(topo, sc, &sol));
        }
        let fb = build_scenarios(topo, econ, &[sc], true)?;
        let fsol = backend.solve(&fb.model, opts.gap)?;
        if !fsol.is_optimal() {
            return Err(solver_failure(topo, sc, &fsol));
        }
        objective += fsol.objective_value - fsol.eval(&fb.tie_break);
        plans.push(make_plan(topo, econ, &fsol, &fb.scenarios[0]));
    }
    let impacts: Vec<_> = plans.iter().filter_map(|p| p.impact(topo)).collect();
    let summary = compute_indices(topo, econ, &impacts);
    let benefit = SwitchBenefit::new(topo, econ, summary.eent);
    let report = ReliabilityReport {
        system: topo.name.clone(),
        model: ModelKind::Ra2,
        nodes: summary.nodes,
        eent: summary.eent,
        c_rel: summary.c_rel,
        objective,
        plans,
        planning: None,
        solver: backend.name().to_string(),
        solve_seconds: timer.seconds(),
    };
    Ok((report, benefit))
}

/// A named device layout for one topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub name: String,
    pub layout: Vec<[EndDevices; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    /// Input position.
    pub index: usize,
    /// 1-based rank by V, `None` for failed deployments.
    pub rank: Option<usize>,
    pub eent: Option<f64>,
    pub c_rel: Option<f64>,
    pub benefit: Option<SwitchBenefit>,
    pub error: Option<String>,
}

/// Runs [`assess_ra2`] per deployment and ranks successful rows by V
/// (highest first, ties by input order); failed rows follow.
pub fn compare_configurations(
    topo: &EcsTopology,
    econ: &EconomicParams,
    deployments: &[Deployment],
    opts: &AssessOptions,
) -> Vec<ComparisonRow> {
    let mut rows: Vec<ComparisonRow> = deployments
        .iter()
        .enumerate()
        .map(|(index, d)| {
            let t = crate::input::with_layout(topo, &d.layout);
            match assess_ra2(&t, econ, opts) {
                Ok((report, benefit)) => ComparisonRow {
                    name: d.name.clone(),
                    index,
                    rank: None,
                    eent: Some(report.eent),
                    c_rel: Some(report.c_rel),
                    benefit: Some(benefit),
                    error: None,
                },
                Err(e) => ComparisonRow {
                    name: d.name.clone(),
                    index,
                    rank: None,
                    eent: None,
                    c_rel: None,
                    benefit: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        let key = |r: &ComparisonRow| r.benefit.as_ref().map(|x| x.v);
        match (key(a), key(b)) {
            (Some(x), Some(y)) => y.total_cmp(&x).then(a.index.cmp(&b.index)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.index.cmp(&b.index),
        }
    });
    let mut rank = 0;
    for r in &mut rows {
        if r.benefit.is_some() {
            rank += 1;
            r.rank = Some(rank);
        }
    }
    rows
}

/// Substation end of a feeder root.
fn root_end(topo: &EcsTopology, c: CableId) -> End {
    if topo.is_substation(topo.cable(c).ends.0) {
        End::I
    } else {
        End::J
    }
}

fn upstream_end(topo: &EcsTopology, tree: &crate::RadialTree, c: CableId) -> End {
    let up = tree.upstream_node(topo, c);
    topo.cable(c).end_of(up).unwrap_or(End::I)
}

/// Standard layouts built from the normal radial structure.
pub mod deployments {
    use super::*;
    use crate::RadialTree;

    fn empty(topo: &EcsTopology) -> Vec<[EndDevices; 2]> {
        vec![[EndDevices::NONE; 2]; topo.cables.len()]
    }

    fn feeder_breakers(topo: &EcsTopology, layout: &mut [[EndDevices; 2]]) {
        for f in &topo.feeders {
            let end = root_end(topo, f.root_cable);
            layout[f.root_cable.0][end.index()].breaker = Some(true);
        }
    }

    fn link_switches(topo: &EcsTopology, layout: &mut [[EndDevices; 2]]) {
        for c in topo.cables.iter().filter(|c| !c.normally_closed) {
            layout[c.id.0][0].switch = true;
            layout[c.id.0][1].switch = true;
        }
    }

    pub fn none(topo: &EcsTopology) -> Deployment {
        Deployment {
            name: "none".into(),
            layout: empty(topo),
        }
    }

    /// Breakers at the substation end of feeder roots, switches at both
    /// ends of every cable.
    pub fn smart(topo: &EcsTopology) -> Deployment {
        let mut layout = empty(topo);
        for row in layout.iter_mut() {
            row[0].switch = true;
            row[1].switch = true;
        }
        feeder_breakers(topo, &mut layout);
        Deployment {
            name: "smart".into(),
            layout,
        }
    }

    /// Breakers and switches at the substation end of feeder roots, plus
    /// switches at both ends of link cables.
    pub fn feeder_only(topo: &EcsTopology) -> Deployment {
        let mut layout = empty(topo);
        feeder_breakers(topo, &mut layout);
        for f in &topo.feeders {
            layout[f.root_cable.0][root_end(topo, f.root_cable).index()].switch = true;
        }
        link_switches(topo, &mut layout);
        Deployment {
            name: "feeder_only".into(),
            layout,
        }
    }

    /// Per feeder, the non-root closed cable whose downstream side holds the
    /// number of turbines closest to half the feeder.
    pub fn sectional_cables(topo: &EcsTopology) -> Vec<CableId> {
        let tree = RadialTree::build(topo);
        let aff = match crate::feeder_affiliation(topo) {
            Ok(a) => a,
            Err(_) => return Vec::new(),
        };
        // Turbines below each cable in the normal tree.
        let mut below = vec![0usize; topo.cables.len()];
        for (k, _) in topo.turbines() {
            let mut cur = k;
            while let Some(c) = tree.parent_cable[cur.0] {
                below[c.0] += 1;
                cur = topo.cable(c).other(cur);
            }
        }
        let mut out = Vec::new();
        for f in &topo.feeders {
            let size = topo
                .turbine_ids()
                .iter()
                .filter(|k| aff.h_node(f.id, **k))
                .count();
            let best = topo
                .cables
                .iter()
                .filter(|c| c.normally_closed && c.id != f.root_cable && aff.h_cable(f.id, c.id))
                .min_by_key(|c| ((2 * below[c.id.0]) as i64 - size as i64).abs());
            if let Some(c) = best {
                out.push(c.id);
            }
        }
        out
    }

    fn sectional(topo: &EcsTopology, name: &str, upstream: bool) -> Deployment {
        let tree = RadialTree::build(topo);
        let mut d = smart(topo);
        for c in sectional_cables(topo) {
            let up = upstream_end(topo, &tree, c);
            let end = if upstream { up } else { up.other() };
            d.layout[c.0][end.index()].breaker = Some(true);
        }
        d.name = name.into();
        d
    }

    pub fn case_i(topo: &EcsTopology) -> Deployment {
        let mut d = smart(topo);
        d.name = "I".into();
        d
    }

    /// Case II is Case I on the topology without link cables; see
    /// [`without_links`].
    pub fn case_ii(topo: &EcsTopology) -> (EcsTopology, Deployment) {
        let t = without_links(topo);
        let mut d = smart(&t);
        d.name = "II".into();
        (t, d)
    }

    pub fn case_iii(topo: &EcsTopology) -> Deployment {
        sectional(topo, "III", true)
    }

    pub fn case_iv(topo: &EcsTopology) -> Deployment {
        sectional(topo, "IV", false)
    }

    /// Feeder breakers, switches at the upstream end of every closed cable
    /// and both ends of link cables.
    pub fn case_v(topo: &EcsTopology) -> Deployment {
        let tree = RadialTree::build(topo);
        let mut layout = empty(topo);
        feeder_breakers(topo, &mut layout);
        for c in topo.cables.iter().filter(|c| c.normally_closed) {
            layout[c.id.0][upstream_end(topo, &tree, c.id).index()].switch = true;
        }
        link_switches(topo, &mut layout);
        Deployment {
            name: "V".into(),
            layout,
        }
    }

    pub fn case_vi(topo: &EcsTopology) -> Deployment {
        let mut d = feeder_only(topo);
        d.name = "VI".into();
        d
    }

    /// Copy of `topo` with every normally open cable removed.
    pub fn without_links(topo: &EcsTopology) -> EcsTopology {
        let mut t = topo.without_cables(|c| !c.normally_closed);
        t.name = format!("{}_radial", topo.name);
        t
    }
}

/// Nodes of `topo` blacked out in a scenario, as booleans per node.
pub fn node_flags(topo: &EcsTopology, ids: &[NodeId]) -> Vec<bool> {
    let mut v = vec![false; topo.nodes.len()];
    for k in ids {
        v[k.0] = true;
    }
    v
}
