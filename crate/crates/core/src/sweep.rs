//! Families of link-cable variants of one topology, assessed with the fixed
//! topology RA1 model.

use serde::{Deserialize, Serialize};

use crate::engine::AssessOptions;
use crate::error::EcsError;
use crate::ra1::{assess_ra1, Ra1Mode};
use crate::topology::{CableId, EcsTopology, EconomicParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepKind {
    /// Every pair of candidate link cables installed alone.
    LinkPairs,
    /// Candidate links installed cumulatively in input order, from none.
    Cumulative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub name: String,
    pub links: Vec<String>,
    pub eent: Option<f64>,
    pub c_rel: Option<f64>,
    pub tif: Option<Vec<f64>>,
    /// Lowest EENT of the sweep (first in order on ties).
    pub minimum: bool,
    pub error: Option<String>,
}

/// Normally open cables of `topo`, in input order.
pub fn link_candidates(topo: &EcsTopology) -> Vec<CableId> {
    topo.cables
        .iter()
        .filter(|c| !c.normally_closed)
        .map(|c| c.id)
        .collect()
}

/// `topo` with only the listed candidate links kept.
pub fn keep_links(topo: &EcsTopology, keep: &[CableId]) -> EcsTopology {
    topo.without_cables(|c| !c.normally_closed && !keep.contains(&c.id))
}

pub fn sweep_variants(topo: &EcsTopology, kind: SweepKind) -> Vec<(Vec<CableId>, EcsTopology)> {
    let cands = link_candidates(topo);
    let sets: Vec<Vec<CableId>> = match kind {
        SweepKind::LinkPairs if cands.len() <= 2 => vec![cands.clone()],
        SweepKind::LinkPairs => {
            let mut v = Vec::new();
            for (i, &a) in cands.iter().enumerate() {
                for &b in &cands[i + 1..] {
                    v.push(vec![a, b]);
                }
            }
            v
        }
        SweepKind::Cumulative => (0..=cands.len()).map(|i| cands[..i].to_vec()).collect(),
    };
    sets.into_iter()
        .map(|s| {
            let t = keep_links(topo, &s);
            (s, t)
        })
        .collect()
}

/// Assesses every variant; cases run concurrently when `opts.parallel > 1`
/// and rows keep variant order.
pub fn run_sweep(
    topo: &EcsTopology,
    econ: &EconomicParams,
    kind: SweepKind,
    opts: &AssessOptions,
) -> Result<Vec<SweepRow>, EcsError> {
    use rayon::prelude::*;

    let variants = sweep_variants(topo, kind);
    let serial = AssessOptions {
        parallel: 1,
        ..*opts
    };
    let run = |(links, t): &(Vec<CableId>, EcsTopology)| {
        let labels: Vec<String> = links.iter().map(|&c| topo.cable_label(c)).collect();
        let name = if labels.is_empty() {
            "no links".to_string()
        } else {
            labels.join(" + ")
        };
        match assess_ra1(t, econ, Ra1Mode::FixedTopology, &serial) {
            Ok(r) => SweepRow {
                name,
                links: labels,
                eent: Some(r.eent),
                c_rel: Some(r.c_rel),
                tif: Some(r.tif_vector()),
                minimum: false,
                error: None,
            },
            Err(e) => SweepRow {
                name,
                links: labels,
                eent: None,
                c_rel: None,
                tif: None,
                minimum: false,
                error: Some(e.to_string()),
            },
        }
    };
    let mut rows: Vec<SweepRow> = if opts.parallel > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.parallel)
            .build()
            .map_err(|e| EcsError::Io(format!("thread pool: {e}")))?
            .install(|| variants.par_iter().map(run).collect())
    } else {
        variants.iter().map(run).collect()
    };
    let best = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.eent.map(|e| (i, e)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    if let Some((i, _)) = best {
        rows[i].minimum = true;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn variant_counts() {
        let (topo, _) = bundled::ormonde_candidates();
        assert_eq!(link_candidates(&topo).len(), 6);
        assert_eq!(sweep_variants(&topo, SweepKind::LinkPairs).len(), 15);
        let cum = sweep_variants(&topo, SweepKind::Cumulative);
        assert_eq!(cum.len(), 7);
        assert_eq!(cum[0].1.cables.len(), topo.cables.len() - 6);
        let (fig2, _) = bundled::fig2();
        assert_eq!(sweep_variants(&fig2, SweepKind::LinkPairs).len(), 1);
    }
}
