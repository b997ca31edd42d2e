mod common;

use common::{brute_force_mismatches, floodfill_mismatches};
use ecsrel_core::input::with_layout;
use ecsrel_core::oracle::{DeviceStates, Stage};
use ecsrel_core::{
    assess_ra1, assess_ra2, bundled, deployments, vff_floodfill, AssessOptions, EcsTopology,
    Ra1Mode,
};

#[test]
fn ra1_unrestored_sets_match_enumeration() {
    for (name, topo, econ) in bundled::all() {
        if topo.cables.len() > 20 {
            continue;
        }
        let r =
            assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &AssessOptions::default()).unwrap();
        assert_eq!(brute_force_mismatches(&topo, &r), Vec::<String>::new(), "{name}");
    }
}

#[test]
fn ra1_matches_enumeration_on_chains() {
    for n in 1..=5 {
        let topo = bundled::chain(n);
        let econ = ecsrel_core::EconomicParams::default();
        let r =
            assess_ra1(&topo, &econ, Ra1Mode::FixedTopology, &AssessOptions::default()).unwrap();
        assert_eq!(brute_force_mismatches(&topo, &r), Vec::<String>::new(), "chain{n}");
        // Without links nothing can be restored beyond the fault.
        for p in &r.plans {
            let c = topo.cable(p.scenario.cable().unwrap());
            let below = topo.turbine_ids().into_iter().filter(|k| k.0 >= c.ends.1 .0).count();
            assert_eq!(p.unrestored.len(), below);
        }
    }
}

fn deployments_for(topo: &EcsTopology) -> Vec<ecsrel_core::Deployment> {
    vec![
        deployments::smart(topo),
        deployments::feeder_only(topo),
        deployments::case_iii(topo),
        deployments::case_iv(topo),
        deployments::case_v(topo),
    ]
}

#[test]
fn ra2_regions_match_flood_fill() {
    for (topo, econ) in [bundled::fig2(), bundled::ring2(), bundled::ring2_tight()] {
        for d in deployments_for(&topo) {
            let t = with_layout(&topo, &d.layout);
            let (r, _) = assess_ra2(&t, &econ, &AssessOptions::default()).unwrap();
            assert_eq!(
                floodfill_mismatches(&t, &r),
                Vec::<String>::new(),
                "{} / {}",
                topo.name,
                d.name
            );
        }
    }
}

#[test]
fn feeder_only_fig2_blacks_out_whole_feeder_until_repair() {
    let (topo, econ) = bundled::fig2();
    let t = with_layout(&topo, &deployments::feeder_only(&topo).layout);
    let (r, _) = assess_ra2(&t, &econ, &AssessOptions::default()).unwrap();
    // Only the root switch can isolate; faults below the root keep the
    // whole feeder down.
    let p = r.plan_for("2-3").unwrap();
    assert_eq!(p.affected, p.unrestored);
    assert_eq!(p.affected.len(), 3);
}

#[test]
fn no_devices_floods_everything() {
    let (topo, econ) = bundled::fig2();
    let radial = deployments::without_links(&topo);
    let bare = with_layout(&radial, &deployments::none(&radial).layout);
    let c = bare.find_cable("2", "3").unwrap();
    let ts = DeviceStates::tripped(&bare, &[]);
    let region = vff_floodfill(&bare, c, Stage::Tripped, &ts);
    assert_eq!(region.dead, bare.turbine_ids());
    let (r, b) = assess_ra2(&bare, &econ, &AssessOptions::default()).unwrap();
    for p in &r.plans {
        assert_eq!(p.affected, bare.turbine_ids());
        assert_eq!(p.unrestored, bare.turbine_ids());
        assert!(p.fallback && p.grid_trip);
    }
    assert!((b.eent - b.eent0).abs() < 1e-9 * b.eent0);
    assert_eq!(b.v, 0.0);
}
