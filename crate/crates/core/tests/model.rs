mod common;

use common::{node, sched, Toy};
use heliplan::bench::{generate_instance, random_schedule, FamilySpec};
use heliplan::feasibility::{build_flight_ledger, derive_events};
use heliplan::model::format::{
    instance_from_json, instance_to_canonical_json, instance_to_json, load_instance, schedule_from_json,
    schedule_to_json,
};
use heliplan::model::{minutes_to_intervals, validate_instance, HeliIdx, TimeGrid, TrajIdx};
use proptest::prelude::*;

const TINY: &str = include_str!("../examples/data/tiny.json");

#[test]
fn well_formed_instance_has_no_diagnostics() {
    assert_eq!(validate_instance(&Toy::new(2, 12).build()), vec![]);
    assert_eq!(validate_instance(&instance_from_json(TINY).unwrap()), vec![]);
}

#[test]
fn efficiency_above_ten_is_named() {
    let mut toy = Toy::new(2, 12);
    toy.fires[0][6] = 11.0;
    let diags: Vec<_> = validate_instance(&toy.build()).into_iter().filter(|d| d.is_error()).collect();
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert!(diags[0].is_error());
    assert!(diags[0].path.contains("I1"), "{}", diags[0]);
    assert!(diags[0].to_string().contains('7'), "interval missing: {}", diags[0]);
}

#[test]
fn unknown_trajectory_is_reported_once() {
    let mut inst = Toy::new(2, 12).build();
    inst.helicopters[1].trajectory = TrajIdx(4);
    inst.reindex();
    let diags: Vec<_> = validate_instance(&inst).into_iter().filter(|d| d.is_error()).collect();
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert!(diags[0].path.contains("h2"), "{}", diags[0]);
}

#[test]
fn minutes_round_up_to_intervals() {
    let grid = TimeGrid::new(5, 24);
    assert_eq!(minutes_to_intervals(120, &grid), 24);
    assert_eq!(minutes_to_intervals(40, &grid), 8);
    assert_eq!(minutes_to_intervals(0, &grid), 0);
    assert_eq!(minutes_to_intervals(41, &grid), 9);
}

#[test]
fn minute_durations_are_converted_on_load() {
    let inst = instance_from_json(TINY).unwrap();
    let h = &inst.helicopters[0];
    assert_eq!((h.max_consecutive_flight, h.min_rest, h.max_total_flight), (24, 8, 96));
    let (c, i) = (node(&inst, "C1"), node(&inst, "I1"));
    assert_eq!(inst.travel(c, i, HeliIdx(0)), Some(1));
    assert_eq!(inst.travel(inst.starts()[0], c, HeliIdx(0)), Some(2));
    assert_eq!(inst.service_time(c, HeliIdx(1)), 1);
    assert_eq!(inst.epoch_starts(), vec![0, 12]);
}

#[test]
fn load_completes_on_the_interval_after_the_stay() {
    let mut toy = Toy::new(1, 10);
    toy.alpha = 2;
    let inst = toy.build();
    // Stay at C1 over intervals 3..4 (1-based), flying from 5 on.
    let s = sched(&inst, &["P1 >C1 C1 C1 >I1 I1 I1 >B1 B1*2"]);
    let ev = derive_events(&inst, &s).unwrap();
    let loads: Vec<usize> = (0..10).filter(|&t| ev.load_end[0][t].is_some()).map(|t| t + 1).collect();
    assert_eq!(loads, vec![5]);
    let drops: Vec<usize> = (0..10).filter(|&t| ev.drop_end[0][t].is_some()).map(|t| t + 1).collect();
    assert_eq!(drops, vec![8]);
}

#[test]
fn parked_helicopter_has_no_events() {
    let inst = Toy::new(2, 8).build();
    let ev = derive_events(&inst, &heliplan::Schedule::parked(&inst)).unwrap();
    for stream in [&ev.load_end, &ev.drop_end, &ev.rest_end] {
        assert!(stream.iter().flatten().all(Option::is_none));
    }
}

#[test]
fn rest_end_marks_the_last_base_interval() {
    let mut toy = Toy::new(1, 14);
    toy.mr = 4;
    let inst = toy.build();
    // Rest at B1 over intervals 3..6, leave at 7.
    let s = sched(&inst, &["P1 >B1 B1*4 >C1 C1 >I1 I1 >B1 B1*3"]);
    let ev = derive_events(&inst, &s).unwrap();
    let ends: Vec<usize> = (0..14).filter(|&t| ev.rest_end[0][t].is_some()).map(|t| t + 1).collect();
    assert_eq!(ends, vec![6]);
}

#[test]
fn instance_json_round_trips() {
    let inst = instance_from_json(TINY).unwrap();
    let again = instance_from_json(&instance_to_json(&inst)).unwrap();
    assert_eq!(instance_to_canonical_json(&inst), instance_to_canonical_json(&again));

    let gen = generate_instance(&FamilySpec::small(2));
    let back = instance_from_json(&instance_to_json(&gen)).unwrap();
    assert_eq!(instance_to_canonical_json(&gen), instance_to_canonical_json(&back));
    assert_eq!(back.edges, gen.edges);
    assert_eq!(back.helicopters, gen.helicopters);
}

#[test]
fn instance_file_loads_from_disk() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.json");
    let inst = load_instance(path).unwrap();
    assert_eq!(inst.helicopters.len(), 2);
    assert_eq!(inst.horizon(), 24);
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(instance_from_json("{}").is_err());
    let unknown_field = TINY.replacen("\"trajectories\"", "\"colour\": 1, \"trajectories\"", 1);
    assert!(instance_from_json(&unknown_field).is_err());
}

#[test]
fn schedule_json_round_trips() {
    let inst = Toy::new(2, 10).build();
    let s = sched(&inst, &["P1 >C1 C1 >I1 I1 >B1 B1*4", "P2 P2 >C1 C1 >I1 I1 >B1 B1*3"]);
    let text = schedule_to_json(&inst, &s);
    assert_eq!(schedule_from_json(&inst, &text).unwrap(), s);
}

#[test]
fn structure_errors_name_the_interval() {
    let inst = Toy::new(1, 6).build();
    let mut s = sched(&inst, &["P1 >C1 C1 >I1 I1 I1"]);
    // Jump from C1 straight to I1.
    s.timelines[0][3] = heliplan::Activity::At(node(&inst, "I1"));
    let err = s.check_structure(&inst).unwrap_err();
    assert_eq!((err.helicopter, err.interval), (0, 4));
    s.timelines[0].pop();
    assert!(derive_events(&inst, &s).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Water carried only changes through completed loads and drops, and a
    // feasible schedule never carries more than one load.
    #[test]
    fn loads_and_drops_balance(seed in 0u64..10_000) {
        let inst = generate_instance(&FamilySpec::tiny(seed % 50));
        let s = random_schedule(&inst, seed);
        let ev = derive_events(&inst, &s).unwrap();
        let fl = build_flight_ledger(&inst, &s).unwrap();
        for a in 0..inst.helicopters.len() {
            let loads = ev.load_end[a].iter().flatten().count() as i64;
            let drops = ev.drop_end[a].iter().flatten().count() as i64;
            let start = i64::from(inst.helicopters[a].initially_loaded);
            prop_assert_eq!(*fl.water_state[a].last().unwrap(), start + loads - drops);
        }
        if heliplan::feasibility::is_feasible(&inst, &s) {
            for z in fl.water_state.iter().flatten() {
                prop_assert!((0..=1).contains(z));
            }
        }
    }
}
