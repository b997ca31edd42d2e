//! Sequential Monte-Carlo simulation of fault chronology, applying given
//! per-fault outcomes.

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EcsError;
use crate::indices::{reliability_cost, FaultImpact, HOURS_PER_YEAR};
use crate::topology::{EcsTopology, EconomicParams, NodeId};

/// Treatment of a failure arriving while an earlier fault is unresolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum CollisionPolicy {
    /// Queue the fault: its outage starts when the current one ends.
    #[default]
    Defer,
    /// Discard the arrival and keep sampling.
    Redraw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub horizon_years: u64,
    pub seed: u64,
    /// Years per batch; batches run on independent streams.
    pub batch_years: u64,
    pub collisions: CollisionPolicy,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            horizon_years: 10_000,
            seed: 1,
            batch_years: 1_000,
            collisions: CollisionPolicy::Defer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimNodeIndices {
    pub node: NodeId,
    pub label: String,
    pub tif: f64,
    pub tif_se: f64,
    pub tid: f64,
    pub tid_se: f64,
}

/// Running estimate after each batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub years: u64,
    pub eent: f64,
    pub eent_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub years: u64,
    pub seed: u64,
    pub nodes: Vec<SimNodeIndices>,
    /// MWh/year.
    pub eent: f64,
    pub eent_se: f64,
    /// $.
    pub c_rel: f64,
    /// Failures applied.
    pub events: u64,
    /// Failures whose outage start was postponed.
    pub deferred: u64,
    /// Failures dropped under [`CollisionPolicy::Redraw`].
    pub discarded: u64,
    pub trace: Vec<TracePoint>,
}

impl SimResult {
    pub fn node_table_csv(&self) -> String {
        let mut out = String::from(
            "node,tif_per_year,tif_se,tid_hours_per_year,tid_se\n",
        );
        for n in &self.nodes {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                n.label, n.tif, n.tif_se, n.tid, n.tid_se
            ));
        }
        out
    }
}

/// One failure mode: rate per year, outage duration, and per-node
/// interruption counts and hours.
struct Component {
    rate: f64,
    busy_hours: f64,
    hits: Vec<(usize, f64)>,
    energy: f64,
}

fn components(
    topo: &EcsTopology,
    econ: &EconomicParams,
    impacts: &[FaultImpact],
) -> Result<Vec<Component>, EcsError> {
    let scale = econ.utilization_hours / HOURS_PER_YEAR;
    let mut out = Vec::new();
    for c in topo.cables.iter().filter(|c| c.failure_rate > 0.0) {
        let imp = impacts
            .iter()
            .find(|i| i.cable == c.id)
            .ok_or_else(|| EcsError::MissingPlan(topo.cable_label(c.id)))?;
        let mut hits = Vec::new();
        let mut energy = 0.0;
        for (k, t) in topo.turbines() {
            let mut h = 0.0;
            if imp.affected[k.0] {
                h += c.isolation_hours;
            }
            if imp.unrestored[k.0] {
                h += c.repair_hours;
            }
            if imp.affected[k.0] || imp.unrestored[k.0] {
                hits.push((k.0, h));
                energy += scale * t.rated_mw * h;
            }
        }
        out.push(Component {
            rate: c.failure_rate,
            busy_hours: c.isolation_hours + c.repair_hours,
            hits,
            energy,
        });
    }
    for (k, t) in topo.turbines() {
        if t.failure_rate > 0.0 {
            out.push(Component {
                rate: t.failure_rate,
                busy_hours: t.repair_hours,
                hits: vec![(k.0, t.repair_hours)],
                energy: scale * t.rated_mw * t.repair_hours,
            });
        }
    }
    Ok(out)
}

/// Sums and sums of squares of per-year totals over one batch.
#[derive(Clone)]
struct Moments {
    years: u64,
    tif: Vec<(f64, f64)>,
    tid: Vec<(f64, f64)>,
    eent: (f64, f64),
    events: u64,
    deferred: u64,
    discarded: u64,
}

impl Moments {
    fn new(nodes: usize) -> Self {
        Moments {
            years: 0,
            tif: vec![(0.0, 0.0); nodes],
            tid: vec![(0.0, 0.0); nodes],
            eent: (0.0, 0.0),
            events: 0,
            deferred: 0,
            discarded: 0,
        }
    }

    fn merge(&mut self, o: &Moments) {
        self.years += o.years;
        for (a, b) in self.tif.iter_mut().zip(&o.tif) {
            a.0 += b.0;
            a.1 += b.1;
        }
        for (a, b) in self.tid.iter_mut().zip(&o.tid) {
            a.0 += b.0;
            a.1 += b.1;
        }
        self.eent.0 += o.eent.0;
        self.eent.1 += o.eent.1;
        self.events += o.events;
        self.deferred += o.deferred;
        self.discarded += o.discarded;
    }
}

fn mean_se((s, s2): (f64, f64), n: u64) -> (f64, f64) {
    let n = n as f64;
    let mean = s / n;
    if n < 2.0 {
        // One year gives no spread; report the total itself.
        return (mean, s2.sqrt() / n);
    }
    let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

fn run_batch(
    comps: &[Component],
    nodes: usize,
    cfg: &SimConfig,
    batch: u64,
    years: u64,
) -> Moments {
    let mut m = Moments::new(nodes);
    m.years = years;
    let total: f64 = comps.iter().map(|c| c.rate).sum();
    if total <= 0.0 {
        return m;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(batch);
    let gap = Exp::new(total).expect("positive rate");
    let pick = WeightedIndex::new(comps.iter().map(|c| c.rate)).expect("positive weights");

    let mut tif = vec![0.0; nodes];
    let mut tid = vec![0.0; nodes];
    let mut energy = 0.0;
    let flush = |tif: &mut [f64], tid: &mut [f64], energy: &mut f64, m: &mut Moments| {
        for k in 0..nodes {
            m.tif[k].0 += tif[k];
            m.tif[k].1 += tif[k] * tif[k];
            m.tid[k].0 += tid[k];
            m.tid[k].1 += tid[k] * tid[k];
            tif[k] = 0.0;
            tid[k] = 0.0;
        }
        m.eent.0 += *energy;
        m.eent.1 += *energy * *energy;
        *energy = 0.0;
    };

    // Time in hours from the batch start.
    let horizon = years as f64 * HOURS_PER_YEAR;
    let mut t = 0.0;
    let mut busy_until = 0.0;
    let mut year = 0u64;
    loop {
        t += gap.sample(&mut rng) * HOURS_PER_YEAR;
        if t >= horizon {
            break;
        }
        let c = &comps[pick.sample(&mut rng)];
        if t < busy_until {
            match cfg.collisions {
                CollisionPolicy::Redraw => {
                    m.discarded += 1;
                    continue;
                }
                CollisionPolicy::Defer => m.deferred += 1,
            }
        }
        busy_until = t.max(busy_until) + c.busy_hours;
        let y = (t / HOURS_PER_YEAR) as u64;
        while year < y {
            flush(&mut tif, &mut tid, &mut energy, &mut m);
            year += 1;
        }
        m.events += 1;
        for &(k, h) in &c.hits {
            tif[k] += 1.0;
            tid[k] += h;
        }
        energy += c.energy;
    }
    while year < years {
        flush(&mut tif, &mut tid, &mut energy, &mut m);
        year += 1;
    }
    m
}

/// Simulates `cfg.horizon_years` years. Each event is attributed to the
/// year it arrives in; per-year totals give the standard errors.
pub fn simulate(
    topo: &EcsTopology,
    econ: &EconomicParams,
    impacts: &[FaultImpact],
    cfg: &SimConfig,
) -> Result<SimResult, EcsError> {
    if cfg.horizon_years == 0 || cfg.batch_years == 0 {
        return Err(EcsError::Parse(
            "horizon_years and batch_years must be at least 1".into(),
        ));
    }
    let comps = components(topo, econ, impacts)?;
    let nodes = topo.nodes.len();
    let batches: Vec<(u64, u64)> = (0..cfg.horizon_years.div_ceil(cfg.batch_years))
        .map(|b| {
            let start = b * cfg.batch_years;
            (b, cfg.batch_years.min(cfg.horizon_years - start))
        })
        .collect();
    let parts: Vec<Moments> = batches
        .par_iter()
        .map(|&(b, y)| run_batch(&comps, nodes, cfg, b, y))
        .collect();

    let mut acc = Moments::new(nodes);
    let mut trace = Vec::with_capacity(parts.len());
    for p in &parts {
        acc.merge(p);
        let (eent, eent_se) = mean_se(acc.eent, acc.years);
        trace.push(TracePoint {
            years: acc.years,
            eent,
            eent_se,
        });
    }
    let rows = topo
        .turbines()
        .map(|(k, _)| {
            let (tif, tif_se) = mean_se(acc.tif[k.0], acc.years);
            let (tid, tid_se) = mean_se(acc.tid[k.0], acc.years);
            SimNodeIndices {
                node: k,
                label: topo.node_label(k).to_string(),
                tif,
                tif_se,
                tid,
                tid_se,
            }
        })
        .collect();
    let (eent, eent_se) = mean_se(acc.eent, acc.years);
    Ok(SimResult {
        years: acc.years,
        seed: cfg.seed,
        nodes: rows,
        eent,
        eent_se,
        c_rel: reliability_cost(econ, eent),
        events: acc.events,
        deferred: acc.deferred,
        discarded: acc.discarded,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn zero_rates_give_exact_zeros() {
        let mut topo = bundled::chain(3);
        let econ = EconomicParams::default();
        for c in &mut topo.cables {
            c.failure_rate = 0.0;
        }
        for n in &mut topo.nodes {
            if let crate::topology::NodeKind::Turbine(t) = &mut n.kind {
                t.failure_rate = 0.0;
            }
        }
        let r = simulate(&topo, &econ, &[], &SimConfig::default()).unwrap();
        assert_eq!(r.eent, 0.0);
        assert!(r.nodes.iter().all(|n| n.tif == 0.0 && n.tid == 0.0));
    }

    #[test]
    fn missing_plan_is_reported() {
        let topo = bundled::chain(2);
        let econ = EconomicParams::default();
        assert!(matches!(
            simulate(&topo, &econ, &[], &SimConfig::default()),
            Err(EcsError::MissingPlan(_))
        ));
    }

    #[test]
    fn partial_last_batch_is_counted() {
        let topo = bundled::chain(1);
        let econ = EconomicParams::default();
        let imp = vec![FaultImpact::blackout(&topo, crate::CableId(0))];
        let cfg = SimConfig {
            horizon_years: 25,
            batch_years: 10,
            ..SimConfig::default()
        };
        let r = simulate(&topo, &econ, &imp, &cfg).unwrap();
        assert_eq!(r.years, 25);
        assert_eq!(r.trace.iter().map(|p| p.years).collect::<Vec<_>>(), [10, 20, 25]);
    }
}
