//! Independent combinatorial references for the optimization models.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::affiliation::feeder_affiliation;
use crate::error::EcsError;
use crate::topology::{CableId, EcsTopology, End, NodeId};

/// Largest cable count accepted by [`brute_force_reconfigure`].
pub const BRUTE_FORCE_CABLE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceResult {
    pub cable: CableId,
    /// Turbines on the faulted cable's feeder.
    pub affected: Vec<NodeId>,
    /// Unrestored set of the preferred optimum (fewest cable changes).
    pub unrestored: Vec<NodeId>,
    pub cable_closed: Vec<bool>,
    /// Every distinct unrestored set attaining the optimum.
    pub optimal_unrestored: Vec<Vec<NodeId>>,
    /// Rated power left unrestored, MW.
    pub unrestored_mw: f64,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Energized turbines and cable flows of a closed-cable subset, or `None`
/// when the subset is not a substation-rooted forest within capacity.
fn evaluate_subset(topo: &EcsTopology, closed: &[bool]) -> Option<Vec<bool>> {
    let nn = topo.nodes.len();
    let mut parent: Vec<usize> = (0..nn).collect();
    for c in topo.cables.iter().filter(|c| closed[c.id.0]) {
        let (a, b) = (find(&mut parent, c.ends.0 .0), find(&mut parent, c.ends.1 .0));
        if a == b {
            return None;
        }
        parent[a] = b;
    }
    let mut subs = vec![0usize; nn];
    for s in topo.substations() {
        let r = find(&mut parent, s.0);
        subs[r] += 1;
    }
    let mut edges = vec![0usize; nn];
    for c in topo.cables.iter().filter(|c| closed[c.id.0]) {
        let r = find(&mut parent, c.ends.0 .0);
        edges[r] += 1;
    }
    let mut energized = vec![false; nn];
    for k in 0..nn {
        let r = find(&mut parent, k);
        if subs[r] > 1 || (subs[r] == 0 && edges[r] > 0) {
            return None;
        }
        energized[k] = subs[r] == 1 && !topo.is_substation(NodeId(k));
    }
    // Subtree sums from each substation outward.
    let inc = topo.incidence();
    let mut order = Vec::new();
    let mut via: Vec<Option<CableId>> = vec![None; nn];
    let mut seen = vec![false; nn];
    for s in topo.substations() {
        seen[s.0] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &inc[v.0] {
                if !closed[c.0] {
                    continue;
                }
                let w = topo.cable(c).other(v);
                if !seen[w.0] {
                    seen[w.0] = true;
                    via[w.0] = Some(c);
                    queue.push_back(w);
                }
            }
        }
    }
    let mut below: Vec<f64> = topo
        .nodes
        .iter()
        .map(|n| n.turbine().map_or(0.0, |t| t.sent_mw))
        .collect();
    for &v in order.iter().rev() {
        if let Some(c) = via[v.0] {
            let cab = topo.cable(c);
            if below[v.0] > cab.capacity_mw + 1e-9 {
                return None;
            }
            if let Some(f) = topo.feeder_of_root(c) {
                if below[v.0] > topo.feeder(f).capacity_mw + 1e-9 {
                    return None;
                }
            }
            let up = cab.other(v);
            below[up.0] += below[v.0];
        }
    }
    Some(energized)
}

/// Exhaustive post-fault reconfiguration with switches on every cable:
/// turbines of the faulted feeder are affected; among all cable subsets
/// excluding the faulted cable that energize every unaffected turbine
/// radially within capacity, the one restoring the most rated power wins.
pub fn brute_force_reconfigure(
    topo: &EcsTopology,
    cable: CableId,
) -> Result<BruteForceResult, EcsError> {
    let nc = topo.cables.len();
    if nc > BRUTE_FORCE_CABLE_LIMIT {
        return Err(EcsError::TooLarge {
            cables: nc,
            limit: BRUTE_FORCE_CABLE_LIMIT,
        });
    }
    let aff = feeder_affiliation(topo)?;
    let affected: Vec<NodeId> = match aff.cable[cable.0] {
        Some(f) => topo
            .turbine_ids()
            .into_iter()
            .filter(|&k| aff.h_node(f, k))
            .collect(),
        None => Vec::new(),
    };
    let mut is_affected = vec![false; topo.nodes.len()];
    for k in &affected {
        is_affected[k.0] = true;
    }
    let normal: Vec<bool> = topo
        .cables
        .iter()
        .map(|c| c.normally_closed && c.id != cable)
        .collect();

    let mut best: Option<(f64, usize, Vec<bool>, Vec<NodeId>)> = None;
    let mut optimal: Vec<Vec<NodeId>> = Vec::new();
    for mask in 0u32..(1u32 << nc) {
        if mask & (1 << cable.0) != 0 {
            continue;
        }
        let closed: Vec<bool> = (0..nc).map(|i| mask & (1 << i) != 0).collect();
        let Some(energized) = evaluate_subset(topo, &closed) else {
            continue;
        };
        let mut lost = 0.0;
        let mut down = Vec::new();
        let mut ok = true;
        for (k, t) in topo.turbines() {
            if !energized[k.0] {
                if !is_affected[k.0] {
                    ok = false;
                    break;
                }
                lost += t.rated_mw;
                down.push(k);
            }
        }
        if !ok {
            continue;
        }
        let changes = (0..nc).filter(|&i| closed[i] != normal[i]).count();
        let better = match &best {
            None => true,
            Some((bl, bc, _, _)) => lost < bl - 1e-9 || (lost <= bl + 1e-9 && changes < *bc),
        };
        match &best {
            Some((bl, _, _, _)) if lost < bl - 1e-9 => optimal.clear(),
            _ => {}
        }
        let at_best = best.as_ref().is_none_or(|(bl, _, _, _)| lost <= bl + 1e-9);
        if at_best && !optimal.contains(&down) {
            optimal.push(down.clone());
        }
        if better {
            best = Some((lost, changes, closed, down));
        }
    }
    let (lost, _, closed, down) = best.ok_or_else(|| {
        EcsError::Infeasible(format!(
            "{}: no radial configuration supplies the unaffected turbines",
            topo.cable_label(cable)
        ))
    })?;
    optimal.sort();
    Ok(BruteForceResult {
        cable,
        affected,
        unrestored: down,
        cable_closed: closed,
        optimal_unrestored: optimal,
        unrestored_mw: lost,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    Tripped,
    Reconfiguration,
}

/// Device states for one stage; `None` where no device is installed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceStates {
    pub breaker_closed: Vec<[Option<bool>; 2]>,
    pub switch_closed: Vec<[Option<bool>; 2]>,
    /// Substations act as fault-flow sources (tripped stage only).
    pub grid_tripped: bool,
}

impl DeviceStates {
    /// Normal states with the listed breakers opened.
    pub fn tripped(topo: &EcsTopology, tripped: &[(CableId, End)]) -> Self {
        let mut breaker_closed: Vec<[Option<bool>; 2]> = topo
            .cables
            .iter()
            .map(|c| [c.devices[0].breaker, c.devices[1].breaker])
            .collect();
        for &(c, e) in tripped {
            breaker_closed[c.0][e.index()] = Some(false);
        }
        DeviceStates {
            breaker_closed,
            switch_closed: Self::normal_switches(topo),
            grid_tripped: false,
        }
    }

    /// Switch states given explicitly; breakers at normal state.
    pub fn switched(topo: &EcsTopology, switch_closed: Vec<[Option<bool>; 2]>) -> Self {
        DeviceStates {
            breaker_closed: topo
                .cables
                .iter()
                .map(|c| [c.devices[0].breaker, c.devices[1].breaker])
                .collect(),
            switch_closed,
            grid_tripped: false,
        }
    }

    fn normal_switches(topo: &EcsTopology) -> Vec<[Option<bool>; 2]> {
        topo.cables
            .iter()
            .map(|c| {
                let st = |e: End| c.devices_at(e).switch.then_some(c.normally_closed);
                [st(End::I), st(End::J)]
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VffRegion {
    pub nodes: Vec<bool>,
    pub cables: Vec<bool>,
    /// Interrupted turbines at this stage.
    pub dead: Vec<NodeId>,
}

fn blocked(states: &DeviceStates, stage: Stage, c: CableId, e: End) -> bool {
    let br = states.breaker_closed[c.0][e.index()];
    let sw = states.switch_closed[c.0][e.index()];
    match stage {
        Stage::Tripped => match br {
            Some(closed) => !closed,
            None => sw == Some(false),
        },
        Stage::Reconfiguration => sw == Some(false),
    }
}

/// Spread of a virtual fault flow from `faulted` across unblocked cable
/// ends. At the tripped stage the interrupted turbines are those reached;
/// at the reconfiguration stage they also include turbines cut off from
/// every substation by open switches or the fault region.
pub fn vff_floodfill(
    topo: &EcsTopology,
    faulted: CableId,
    stage: Stage,
    states: &DeviceStates,
) -> VffRegion {
    let inc = topo.incidence();
    let mut nodes = vec![false; topo.nodes.len()];
    let mut cables = vec![false; topo.cables.len()];
    cables[faulted.0] = true;
    let mut queue = VecDeque::from([faulted]);
    if stage == Stage::Tripped && states.grid_tripped {
        for s in topo.substations() {
            nodes[s.0] = true;
            for &c2 in &inc[s.0] {
                let e2 = topo.cable(c2).end_of(s).expect("incident cable");
                if !cables[c2.0] && !blocked(states, stage, c2, e2) {
                    cables[c2.0] = true;
                    queue.push_back(c2);
                }
            }
        }
    }
    while let Some(c) = queue.pop_front() {
        let cab = topo.cable(c);
        for e in End::BOTH {
            if blocked(states, stage, c, e) {
                continue;
            }
            let v = cab.node_at(e);
            if nodes[v.0] {
                continue;
            }
            nodes[v.0] = true;
            for &c2 in &inc[v.0] {
                if cables[c2.0] {
                    continue;
                }
                let e2 = topo.cable(c2).end_of(v).expect("incident cable");
                if !blocked(states, stage, c2, e2) {
                    cables[c2.0] = true;
                    queue.push_back(c2);
                }
            }
        }
    }
    let mut dead: Vec<NodeId> = topo
        .turbine_ids()
        .into_iter()
        .filter(|k| nodes[k.0])
        .collect();
    if stage == Stage::Reconfiguration {
        let conducts = |c: CableId| {
            !cables[c.0]
                && End::BOTH
                    .iter()
                    .all(|&e| states.switch_closed[c.0][e.index()] != Some(false))
        };
        let mut live = vec![false; topo.nodes.len()];
        let mut queue: VecDeque<NodeId> = topo.substations().filter(|s| !nodes[s.0]).collect();
        for s in &queue {
            live[s.0] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &c in &inc[v.0] {
                if !conducts(c) {
                    continue;
                }
                let w = topo.cable(c).other(v);
                if !live[w.0] && !nodes[w.0] {
                    live[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        dead = topo
            .turbine_ids()
            .into_iter()
            .filter(|k| nodes[k.0] || !live[k.0])
            .collect();
    }
    VffRegion {
        nodes,
        cables,
        dead,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn labels(topo: &EcsTopology, ids: &[NodeId]) -> Vec<String> {
        ids.iter().map(|&k| topo.node_label(k).to_string()).collect()
    }

    #[test]
    fn fig2_brute_force_restores_via_link() {
        let (topo, _) = bundled::fig2();
        let c = topo.find_cable("3", "6").unwrap();
        let r = brute_force_reconfigure(&topo, c).unwrap();
        assert_eq!(labels(&topo, &r.affected), ["2", "3", "6"]);
        assert_eq!(labels(&topo, &r.unrestored), ["6"]);
        assert_eq!(r.optimal_unrestored.len(), 1);

        let c = topo.find_cable("1", "2").unwrap();
        let r = brute_force_reconfigure(&topo, c).unwrap();
        assert!(r.unrestored.is_empty());
        assert!(r.cable_closed[topo.find_cable("3", "5").unwrap().0]);
    }

    #[test]
    fn link_fault_affects_nobody() {
        let (topo, _) = bundled::fig2();
        let c = topo.find_cable("3", "5").unwrap();
        let r = brute_force_reconfigure(&topo, c).unwrap();
        assert!(r.affected.is_empty() && r.unrestored.is_empty());
    }

    #[test]
    fn large_systems_are_refused() {
        let (topo, _) = bundled::ormonde_like();
        assert!(matches!(
            brute_force_reconfigure(&topo, CableId(0)),
            Err(EcsError::TooLarge { .. })
        ));
    }

    #[test]
    fn floodfill_stops_at_tripped_breaker_and_open_switches() {
        let (topo, _) = bundled::fig2();
        let c = topo.find_cable("2", "3").unwrap();
        let root = topo.find_cable("1", "2").unwrap();
        let ts = DeviceStates::tripped(&topo, &[(root, End::I)]);
        let r = vff_floodfill(&topo, c, Stage::Tripped, &ts);
        assert_eq!(labels(&topo, &r.dead), ["2", "3", "6"]);
        assert!(!r.nodes[topo.find_node("1").unwrap().0]);

        // Isolate 2-3 at both ends, close the link.
        let mut sw: Vec<[Option<bool>; 2]> = topo
            .cables
            .iter()
            .map(|c| [Some(c.normally_closed), Some(c.normally_closed)])
            .collect();
        sw[c.0] = [Some(false), Some(false)];
        sw[topo.find_cable("3", "5").unwrap().0] = [Some(true), Some(true)];
        let rs = DeviceStates::switched(&topo, sw);
        let r = vff_floodfill(&topo, c, Stage::Reconfiguration, &rs);
        assert!(r.dead.is_empty());
        assert!(r.cables[c.0] && r.nodes.iter().all(|x| !x));
    }
}
