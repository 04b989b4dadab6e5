mod common;

use common::{node, sched, Toy};
use heliplan::bench::{generate_instance, random_schedule, FamilySpec};
use heliplan::feasibility::{
    build_flight_ledger, build_water_ledger, check_schedule, check_with, ConstraintRef, Derived,
};
use heliplan::Schedule;
use proptest::prelude::*;

fn constraints(report: &heliplan::feasibility::ViolationReport) -> Vec<ConstraintRef> {
    report.count_by_constraint().into_keys().collect()
}

#[test]
fn unvisited_water_point_keeps_its_capacity() {
    let mut toy = Toy::new(1, 12);
    toy.waters = vec![(5000.0, 1), (7000.0, 1)];
    let inst = toy.build();
    let s = sched(&inst, &["P1 >C1 C1 >I1 I1 >B1 B1*6"]);
    let led = build_water_ledger(&inst, &s).unwrap();
    assert!(led.remaining[1].iter().all(|&ca| ca == 7000.0));
    assert!(led.cumulative_drawn[1].iter().all(|&c| c == 0.0));
    assert_eq!(*led.remaining[0].last().unwrap(), 4000.0);
}

#[test]
fn a_load_is_charged_once_when_it_completes() {
    let mut toy = Toy::new(1, 10);
    toy.waters = vec![(5000.0, 1)];
    toy.alpha = 2;
    let inst = toy.build();
    // Stay at C1 over intervals 3..4, the load completes at 5.
    let s = sched(&inst, &["P1 >C1 C1 C1 >I1 I1 I1 >B1 B1*2"]);
    let led = build_water_ledger(&inst, &s).unwrap();
    assert_eq!(&led.cumulative_drawn[0][..6], &[0.0, 0.0, 0.0, 0.0, 1000.0, 1000.0]);
    assert_eq!(led.remaining[0][4], 5000.0);
    assert_eq!(led.remaining[0][5], 4000.0);
}

#[test]
fn simultaneous_loads_draw_both_capacities() {
    let mut toy = Toy::new(2, 10);
    toy.waters = vec![(9000.0, 2)];
    toy.traj_of = vec![0, 1];
    let inst = {
        let mut i = toy.build();
        i.helicopters[1].water_capacity = 2500.0;
        i
    };
    let s = sched(&inst, &["P1 >C1 C1 >I1 I1 >B1 B1*4", "P2 >C1 C1 >I1 I1 >B1 B1*4"]);
    let led = build_water_ledger(&inst, &s).unwrap();
    assert_eq!(led.cumulative_drawn[0][2], 0.0);
    assert_eq!(led.cumulative_drawn[0][3], 3500.0);
    assert_eq!(led.remaining[0][4], 5500.0);
}

#[test]
fn idle_helicopter_counts_nothing() {
    let inst = Toy::new(2, 10).build();
    let fl = build_flight_ledger(&inst, &Schedule::parked(&inst)).unwrap();
    assert!(fl.consecutive.iter().flatten().all(|&c| c == 0));
    assert!(fl.pad.iter().flatten().all(|&p| p == 0));
}

#[test]
fn flights_and_hovers_both_count() {
    let mut toy = Toy::new(1, 12);
    toy.travel = 2;
    let inst = toy.build();
    let s = sched(&inst, &["P1 >C1 >C1 C1 >I1 >I1 I1 >B1 >B1 B1*3"]);
    let fl = build_flight_ledger(&inst, &s).unwrap();
    assert_eq!(&fl.consecutive[0][..7], &[0, 1, 2, 3, 4, 5, 6]);
    assert!(fl.pad[0].iter().all(|&p| p == 0));
}

#[test]
fn rest_end_resets_the_counter() {
    let mut toy = Toy::new(1, 20);
    toy.alpha = 2;
    toy.cfi = 20;
    let inst = toy.build();
    // Four active intervals on top of 20, a full rest, then work again.
    let s = sched(&inst, &["P1 >C1 C1*2 >B1 B1*8 >C1 C1*2 >B1 B1*3"]);
    let fl = build_flight_ledger(&inst, &s).unwrap();
    assert_eq!(fl.consecutive[0][4], 24);
    assert_eq!(fl.consecutive[0][11], 24);
    assert_eq!(fl.consecutive[0][12], 0);
    assert_eq!(fl.consecutive[0][13], 1);
    assert!(fl.pad[0].iter().all(|&p| p == 0));

    // Without the prior flight time the reset overshoots and the pad absorbs it.
    let mut toy = toy.clone();
    toy.cfi = 0;
    let inst = toy.build();
    let fl = build_flight_ledger(&inst, &s).unwrap();
    assert_eq!(fl.consecutive[0][11], 4);
    assert_eq!(fl.pad[0][12], 20);
    assert_eq!(fl.consecutive[0][12], 0);
    assert_eq!(*fl.pad[0].last().unwrap(), 20);
    assert_eq!(fl.final_pad_sum(), 20);
}

#[test]
fn helicopter_left_off_base_violates_row_24() {
    let inst = Toy::new(2, 12).build();
    let s = sched(&inst, &["P1*3 >B1 B1*8", "P2*12"]);
    let report = check_schedule(&inst, &s).unwrap();
    assert_eq!(constraints(&report), vec![ConstraintRef::Model(24)], "{}", report.to_json_lines());
    assert!(report.iter().all(|v| v.row.index.a == Some(1)));
}

#[test]
fn base_capacity_is_counted_per_interval() {
    let mut toy = Toy::new(3, 9);
    toy.bases = vec![2];
    let inst = toy.build();
    let s = sched(&inst, &["P1 >B1 B1*7", "P2 >B1 B1*7", "P3*7 >B1 B1"]);
    let report = check_schedule(&inst, &s).unwrap();
    assert_eq!(report.len(), 1, "{}", report.to_json_lines());
    let row = &report.iter().next().unwrap().row;
    assert_eq!(row.constraint, ConstraintRef::Model(1));
    assert_eq!(row.index.i, Some(node(&inst, "B1").0));
    assert_eq!(row.index.t, Some(9));
}

#[test]
fn members_may_not_drop_together() {
    let inst = Toy::new(2, 12).build();
    let s = sched(&inst, &["P1 >C1 C1 >I1 I1 >B1 B1*6", "P2 >C1 C1 >I1 I1 >B1 B1*6"]);
    let report = check_schedule(&inst, &s).unwrap();
    assert!(report.has(ConstraintRef::Model(40)), "{}", report.to_json_lines());
    let staggered = sched(&inst, &["P1 >C1 C1 >I1 I1 >B1 B1*6", "P2 P2 >C1 C1 >I1 I1 >B1 B1*5"]);
    assert!(check_schedule(&inst, &staggered).unwrap().is_empty());
}

#[test]
fn short_rest_and_long_flight_are_reported() {
    let mut toy = Toy::new(1, 16);
    toy.mcf = 4;
    toy.mr = 4;
    let inst = toy.build();
    let s = sched(&inst, &["P1 >C1 C1 >I1 I1 >C1 C1 >I1 I1 >B1 B1*2 >C1 C1 >B1 B1"]);
    let report = check_schedule(&inst, &s).unwrap();
    let found = constraints(&report);
    assert!(found.contains(&ConstraintRef::Model(22)), "{found:?}");
    assert!(found.contains(&ConstraintRef::Model(21)) || found.contains(&ConstraintRef::Model(20)), "{found:?}");
}

#[test]
fn structurally_broken_schedule_is_an_error() {
    let inst = Toy::new(1, 6).build();
    let s = Schedule::new(vec![vec![heliplan::Activity::At(inst.starts()[0]); 5]]);
    assert!(check_schedule(&inst, &s).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn drawn_water_never_decreases(seed in 0u64..100_000) {
        let inst = generate_instance(&FamilySpec::tiny(seed % 40));
        let s = random_schedule(&inst, seed);
        let led = build_water_ledger(&inst, &s).unwrap();
        for (k, drawn) in led.cumulative_drawn.iter().enumerate() {
            prop_assert!(drawn.windows(2).all(|p| p[0] <= p[1]));
            for (t, &ca) in led.remaining[k].iter().enumerate() {
                let prev = if t == 0 { 0.0 } else { drawn[t - 1] };
                prop_assert!((led.remaining[k][0] - prev - ca).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn pad_is_nondecreasing_and_counter_nonnegative(seed in 0u64..100_000) {
        let inst = generate_instance(&FamilySpec::tiny(seed % 40));
        let s = random_schedule(&inst, seed);
        let fl = build_flight_ledger(&inst, &s).unwrap();
        for a in 0..inst.helicopters.len() {
            prop_assert!(fl.pad[a].windows(2).all(|p| p[0] <= p[1]));
            prop_assert!(fl.consecutive[a].iter().all(|&c| c >= 0));
        }
    }

    #[test]
    fn reports_are_sorted_and_stable(seed in 0u64..100_000) {
        let inst = generate_instance(&FamilySpec::tiny(seed % 40));
        let s = random_schedule(&inst, seed);
        let a = check_schedule(&inst, &s).unwrap();
        let b = check_with(&inst, &s, &Derived::new(&inst, &s).unwrap());
        prop_assert_eq!(&a, &b);
        let keys: Vec<_> = a.iter().map(|v| v.row).collect();
        prop_assert!(keys.windows(2).all(|p| p[0] < p[1]));
    }
}
