mod common;

use common::{rel, outage_mismatches};
use ecsrel_core::{assess_ra1, assess_ra2, bundled, AssessOptions, Ra1Mode};

/// EENT of the fig2 system written out term by term from its parameters
/// and the expected outage table.
fn fig2_eent_by_hand() -> f64 {
    let scale = 4000.0 / 8760.0;
    let turbines = 5.0 * 5.0 * 0.5 * 240.0;
    let tau_sw = 12.0;
    let tau_rp = 1440.0;
    let cables = 0.06 * tau_sw * 15.0
        + 0.05 * tau_sw * 15.0
        + 0.05 * (tau_sw * 15.0 + tau_rp * 5.0)
        + 0.06 * tau_sw * 10.0
        + 0.05 * tau_sw * 10.0;
    scale * (turbines + cables)
}

#[test]
fn ra1_matches_outage_table() {
    let (topo, econ) = bundled::fig2();
    let r = assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &AssessOptions::default()).unwrap();
    assert_eq!(outage_mismatches(&topo, &r), Vec::<String>::new());
    assert!(rel(r.eent, fig2_eent_by_hand()) < 1e-12, "{}", r.eent);
    assert!(rel(r.objective, r.eent) < 1e-6, "{} vs {}", r.objective, r.eent);
}

#[test]
fn ra2_smart_matches_outage_table() {
    let (topo, econ) = bundled::fig2();
    let (r, b) = assess_ra2(&topo, &econ, &AssessOptions::default()).unwrap();
    assert_eq!(outage_mismatches(&topo, &r), Vec::<String>::new());
    assert!(rel(r.eent, fig2_eent_by_hand()) < 1e-12);
    assert_eq!((b.n_cb, b.n_sw), (2, 12));
}

#[test]
fn link_fault_interrupts_nobody() {
    let (topo, econ) = bundled::fig2();
    let r = assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &AssessOptions::default()).unwrap();
    let p = r.plan_for("3-5").unwrap();
    assert!(p.affected.is_empty() && p.unrestored.is_empty());
    assert_eq!(p.eent_contribution, 0.0);
}

#[test]
fn fault_4_5_closes_the_link() {
    let (topo, econ) = bundled::fig2();
    let (r, _) = assess_ra2(&topo, &econ, &AssessOptions::default()).unwrap();
    let p = r.plan_for("4-5").unwrap();
    assert_eq!(p.actions.first().unwrap(), "trip CB 1-4@1");
    assert!(p.actions.iter().any(|a| a == "close SW 3-5@3, SW 3-5@5"), "{:?}", p.actions);
    let (opened, closed) = p.cable_changes(&topo);
    assert_eq!(opened, vec![topo.find_cable("4", "5").unwrap()]);
    assert_eq!(closed, vec![topo.find_cable("3", "5").unwrap()]);
}

#[test]
fn monolithic_and_decomposed_agree() {
    let (topo, econ) = bundled::fig2();
    let dec = assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &AssessOptions::default()).unwrap();
    let mono = AssessOptions {
        decompose: false,
        ..AssessOptions::default()
    };
    let one = assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &mono).unwrap();
    assert!(rel(dec.eent, one.eent) < 1e-9);
    assert!(rel(dec.objective, one.objective) < 1e-6);
    let (r2, _) = assess_ra2(&topo, &econ, &mono).unwrap();
    assert!(rel(r2.eent, one.eent) < 1e-9);
}

#[test]
fn parallel_solves_match_serial() {
    let (topo, econ) = bundled::ring2();
    let serial = assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &AssessOptions::default()).unwrap();
    let par = AssessOptions {
        parallel: 4,
        ..AssessOptions::default()
    };
    let p = assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &par).unwrap();
    assert_eq!(serial.plans, p.plans);
    assert_eq!(serial.nodes, p.nodes);
}

#[test]
fn planning_mode_never_worse_than_fixed() {
    for (topo, econ) in [bundled::fig2(), bundled::ring2()] {
        let fixed =
            assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &AssessOptions::default()).unwrap();
        let plan = assess_ra1(&topo, &econ, Ra1Mode::Planning, &AssessOptions::default()).unwrap();
        assert!(plan.eent <= fixed.eent * (1.0 + 1e-9), "{} > {}", plan.eent, fixed.eent);
        let p = plan.planning.unwrap();
        let closed = p.normal_closed.iter().filter(|&&c| c).count();
        assert_eq!(closed, topo.turbine_ids().len());
    }
}
