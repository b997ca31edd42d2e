//! DC power-flow layer shared by both assessment models, and an
//! independent re-evaluation of extracted plans.

use ecsrel_milp::{LinExpr, MilpModel, Var};

use crate::topology::{CableId, EcsTopology, NodeId};

/// Big-M constants for one topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowBounds {
    /// Total sent power; bounds any cable or feeder flow.
    pub m_flow: f64,
    /// Bound on any node phase, radians: the phase drop along the longest
    /// possible path when every cable runs at its flow limit.
    pub theta_max: f64,
}

impl FlowBounds {
    pub fn new(topo: &EcsTopology) -> Self {
        let m_flow = topo.total_sent_mw();
        let theta_max = topo
            .cables
            .iter()
            .map(|c| c.capacity_mw.min(m_flow) / c.susceptance)
            .sum::<f64>();
        FlowBounds { m_flow, theta_max }
    }

    /// Flow bound on one cable.
    pub fn cable_flow(&self, topo: &EcsTopology, c: CableId) -> f64 {
        topo.cable(c).capacity_mw.min(self.m_flow)
    }

    /// Slack that deactivates the phase-flow coupling of cable `c`:
    /// `|B (θj − θi) − P| ≤ B·2θmax + |P|max`.
    pub fn phase_m(&self, topo: &EcsTopology, c: CableId) -> f64 {
        2.0 * topo.cable(c).susceptance * self.theta_max + self.cable_flow(topo, c)
    }

    /// Largest big-M used by the flow layer.
    pub fn model_m(&self, topo: &EcsTopology) -> f64 {
        topo.cables
            .iter()
            .map(|c| self.phase_m(topo, c.id))
            .fold(self.m_flow.max(1.0), f64::max)
    }
}

/// Columns created by [`add_flow_layer`] for one scenario.
#[derive(Debug, Clone)]
pub struct FlowVars {
    /// `P_ij`, positive from end `I` to end `J`.
    pub flow: Vec<Var>,
    /// `θ_i`; `None` for substations, whose phase is the constant 0.
    pub theta: Vec<Option<Var>>,
    /// Flow into the substation along each feeder root.
    pub feeder_flow: Vec<Var>,
}

impl FlowVars {
    pub fn theta_expr(&self, n: NodeId) -> LinExpr {
        match self.theta[n.0] {
            Some(v) => v.into(),
            None => LinExpr::new(),
        }
    }
}

/// Adds nodal balance, phase-flow coupling, substation reference, feeder
/// flow identity, flow-state coupling and capacity limits for one scenario.
///
/// `in_service[c]` is the 0/1 expression for "cable `c` conducts" and
/// `generation[k]` the power injected at turbine `k` (ignored for
/// substations).
pub fn add_flow_layer(
    model: &mut MilpModel,
    topo: &EcsTopology,
    bounds: &FlowBounds,
    tag: &str,
    in_service: &[LinExpr],
    generation: &[LinExpr],
) -> FlowVars {
    let flow: Vec<Var> = topo
        .cables
        .iter()
        .map(|c| {
            let cap = bounds.cable_flow(topo, c.id);
            model.add_continuous(format!("P[{tag}][{}]", topo.cable_label(c.id)), -cap, cap)
        })
        .collect();
    let theta: Vec<Option<Var>> = topo
        .nodes
        .iter()
        .map(|n| {
            (!n.is_substation()).then(|| {
                model.add_continuous(
                    format!("theta[{tag}][{}]", n.label),
                    -bounds.theta_max,
                    bounds.theta_max,
                )
            })
        })
        .collect();
    let vars = FlowVars {
        flow,
        theta,
        feeder_flow: Vec::new(),
    };

    let inc = topo.incidence();
    for (k, _) in topo.turbines() {
        let mut out = LinExpr::new();
        for &c in &inc[k.0] {
            let cab = topo.cable(c);
            let sign = if cab.ends.0 == k { 1.0 } else { -1.0 };
            out.add_term(vars.flow[c.0], sign);
        }
        model.add_eq(
            format!("balance[{tag}][{}]", topo.node_label(k)),
            out,
            generation[k.0].clone(),
        );
    }

    for c in &topo.cables {
        let label = topo.cable_label(c.id);
        let drop = (vars.theta_expr(c.ends.1) - vars.theta_expr(c.ends.0)) * c.susceptance;
        let m_phase = bounds.phase_m(topo, c.id);
        model.add_abs_le(
            &format!("phase[{tag}][{label}]"),
            drop,
            vars.flow[c.id.0],
            (LinExpr::constant(1.0) - in_service[c.id.0].clone()) * m_phase,
        );
        let m_flow = bounds.cable_flow(topo, c.id);
        model.add_le(
            format!("state_up[{tag}][{label}]"),
            vars.flow[c.id.0],
            in_service[c.id.0].clone() * m_flow,
        );
        model.add_ge(
            format!("state_lo[{tag}][{label}]"),
            vars.flow[c.id.0],
            in_service[c.id.0].clone() * -m_flow,
        );
    }

    let mut feeder_flow = Vec::with_capacity(topo.feeders.len());
    for f in &topo.feeders {
        let cab = topo.cable(f.root_cable);
        let pf = model.add_continuous(
            format!("Pf[{tag}][{}]", f.label),
            -bounds.m_flow,
            f.capacity_mw.min(bounds.m_flow).max(0.0),
        );
        // Positive when power enters the substation.
        let into_sub = if topo.is_substation(cab.ends.1) {
            LinExpr::from(vars.flow[cab.id.0])
        } else {
            -LinExpr::from(vars.flow[cab.id.0])
        };
        model.add_eq(format!("feeder[{tag}][{}]", f.label), pf, into_sub);
        feeder_flow.push(pf);
    }
    FlowVars {
        feeder_flow,
        ..vars
    }
}

/// Re-evaluates a plan outside the solver: flows are recomputed from cable
/// states and phases as `s·B·(θj − θi)`, then nodal balance, cable and
/// feeder limits are checked. Returns the list of violations.
pub fn check_flows(
    topo: &EcsTopology,
    closed: &[bool],
    phases: &[f64],
    generation: &[f64],
    tol: f64,
) -> Vec<String> {
    let mut problems = Vec::new();
    let flow: Vec<f64> = topo
        .cables
        .iter()
        .map(|c| {
            if closed[c.id.0] {
                c.susceptance * (phases[c.ends.1 .0] - phases[c.ends.0 .0])
            } else {
                0.0
            }
        })
        .collect();
    for s in topo.substations() {
        if phases[s.0].abs() > tol {
            problems.push(format!("substation {} phase {}", topo.node_label(s), phases[s.0]));
        }
    }
    for c in &topo.cables {
        if flow[c.id.0].abs() > c.capacity_mw + tol {
            problems.push(format!(
                "cable {} carries {:.6} MW above its {} MW limit",
                topo.cable_label(c.id),
                flow[c.id.0],
                c.capacity_mw
            ));
        }
    }
    let inc = topo.incidence();
    for (k, _) in topo.turbines() {
        let out: f64 = inc[k.0]
            .iter()
            .map(|&c| {
                let cab = topo.cable(c);
                if cab.ends.0 == k {
                    flow[c.0]
                } else {
                    -flow[c.0]
                }
            })
            .sum();
        if (out - generation[k.0]).abs() > tol {
            problems.push(format!(
                "turbine {} exports {:.6} MW but generates {:.6} MW",
                topo.node_label(k),
                out,
                generation[k.0]
            ));
        }
    }
    for f in &topo.feeders {
        let cab = topo.cable(f.root_cable);
        let into = if topo.is_substation(cab.ends.1) {
            flow[cab.id.0]
        } else {
            -flow[cab.id.0]
        };
        if into > f.capacity_mw + tol {
            problems.push(format!(
                "feeder {} delivers {:.6} MW above its {} MW limit",
                f.label, into, f.capacity_mw
            ));
        }
    }
    problems
}

/// Cable flows implied by states and phases.
pub fn flows_from_phases(topo: &EcsTopology, closed: &[bool], phases: &[f64]) -> Vec<f64> {
    topo.cables
        .iter()
        .map(|c| {
            if closed[c.id.0] {
                c.susceptance * (phases[c.ends.1 .0] - phases[c.ends.0 .0])
            } else {
                0.0
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn bounds_cover_chain_phase_drop() {
        let topo = bundled::chain(3);
        let b = FlowBounds::new(&topo);
        assert_eq!(b.m_flow, 15.0);
        // Full output along the whole chain: 15/100 + 10/100 + 5/100.
        assert!(b.theta_max >= 0.3 - 1e-12);
    }

    #[test]
    fn check_flags_imbalance_and_overload() {
        let topo = bundled::chain(1);
        // Turbine phase 0.05 rad over B=100 gives 5 MW from S to turbine,
        // i.e. the turbine would be importing.
        let bad = check_flows(&topo, &[true], &[0.0, 0.05], &[0.0, 5.0], 1e-6);
        assert!(!bad.is_empty());
        let good = check_flows(&topo, &[true], &[0.0, -0.05], &[0.0, 5.0], 1e-6);
        assert!(good.is_empty(), "{good:?}");
    }
}
