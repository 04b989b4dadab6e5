mod common;

use common::{node, set_travel, Toy};
use heliplan::bench::{drops_per_helicopter, generate_instance, summarize, Family, FamilySpec};
use heliplan::construct::{assign_work, decode, initial_solution, plan_trajectories, repair, Shift};
use heliplan::feasibility::{check_schedule, Derived};
use heliplan::model::format::schedule_to_json;
use heliplan::model::{HeliIdx, Instance, TrajIdx};
use heliplan::Activity;
use std::time::Instant;

#[test]
fn drop_node_is_the_efficiency_argmax() {
    let mut toy = Toy::new(1, 12);
    toy.fires = vec![vec![5.0; 12], vec![10.0; 12], vec![5.0; 12]];
    let inst = toy.build();
    for seed in 0..20 {
        let tp = plan_trajectories(&inst, seed);
        assert_eq!(tp.nodes[0][0].drop, node(&inst, "I2"));
        assert!(tp.diagnostics.is_empty());
    }
}

#[test]
fn tied_drop_nodes_are_drawn_evenly() {
    let mut toy = Toy::new(1, 12);
    toy.fires = vec![vec![10.0; 12], vec![10.0; 12]];
    let inst = toy.build();
    let first = node(&inst, "I1");
    let n = 1000u64;
    let hits = (0..n).filter(|&s| plan_trajectories(&inst, s).nodes[0][0].drop == first).count() as f64;
    let expected = n as f64 / 2.0;
    let chi2 = 2.0 * (hits - expected).powi(2) / expected;
    // 99.9% quantile of chi-square with one degree of freedom.
    assert!(chi2 < 10.83, "{hits} of {n} picked I1");
}

#[test]
fn no_evolution_means_one_epoch() {
    let inst = Toy::new(2, 20).build();
    let tp = plan_trajectories(&inst, 1);
    assert_eq!(tp.epoch_starts, vec![0]);
    assert_eq!(tp.nodes[0].len(), 1);
}

#[test]
fn each_evolution_opens_an_epoch() {
    let mut toy = Toy::new(1, 20);
    toy.fires = vec![
        (0..20).map(|t| if t < 10 { 9.0 } else { 2.0 }).collect(),
        (0..20).map(|t| if t < 10 { 3.0 } else { 7.0 }).collect(),
    ];
    toy.evolution = vec![10];
    let inst = toy.build();
    let tp = plan_trajectories(&inst, 4);
    assert_eq!(tp.epoch_starts, vec![0, 10]);
    assert_eq!(tp.nodes[0][0].drop, node(&inst, "I1"));
    assert_eq!(tp.nodes[0][1].drop, node(&inst, "I2"));
    assert_eq!(tp.at(TrajIdx(0), 15).drop, node(&inst, "I2"));
}

#[test]
fn epoch_without_positive_efficiency_is_flagged() {
    let mut toy = Toy::new(1, 12);
    toy.fires = vec![vec![0.0; 12], vec![0.0; 12]];
    let inst = toy.build();
    let tp = plan_trajectories(&inst, 0);
    assert_eq!(tp.diagnostics.len(), 1);
    assert!(inst.is_fire(tp.nodes[0][0].drop));
}

/// One helicopter whose circuit takes 6 intervals and whose way home takes 4.
fn circuit_instance() -> Instance {
    let mut toy = Toy::new(1, 30);
    toy.travel = 4;
    let mut inst = toy.build();
    for (a, b) in [("P1", "C1"), ("C1", "I1"), ("I1", "C1")] {
        set_travel(&mut inst, a, b, 2);
    }
    inst
}

#[test]
fn circuits_stop_when_the_way_home_no_longer_fits() {
    let inst = circuit_instance();
    let plan = assign_work(&inst, plan_trajectories(&inst, 0)).unwrap();
    let d = decode(&inst, &plan).unwrap();
    // 3 circuits of 6 plus 4 home fit in 24, a fourth would not.
    assert_eq!(d.outcomes[0].len(), 1, "{:?}", d.outcomes[0]);
    assert_eq!(d.outcomes[0][0].drops, 3);
    let b1 = node(&inst, "B1");
    assert_eq!(d.schedule.at(HeliIdx(0), 29), Some(b1));
    assert_eq!(d.outcomes[0][0].arrival, 23);
    assert!(check_schedule(&inst, &d.schedule).unwrap().is_empty());
}

#[test]
fn rested_helicopter_leaves_at_once() {
    let inst = Toy::new(1, 12).build();
    let plan = assign_work(&inst, plan_trajectories(&inst, 0)).unwrap();
    let d = decode(&inst, &plan).unwrap();
    assert_eq!(d.outcomes[0][0].departure, 1);
    assert!(matches!(d.schedule.get(HeliIdx(0), 1), Activity::Fly(_)));
}

#[test]
fn partial_rest_is_completed_at_the_start() {
    let mut toy = Toy::new(1, 16);
    toy.ri = Some(5);
    let inst = toy.build();
    let sol = initial_solution(&inst, 0).unwrap();
    // mr = 8 with 5 already rested: three intervals at the start first.
    assert_eq!(sol.outcomes[0][0].departure, 3);
    assert!(check_schedule(&inst, &sol.schedule).unwrap().is_empty());
}

#[test]
fn members_of_a_trajectory_are_staggered() {
    let mut toy = Toy::new(3, 40);
    toy.waters = vec![(1e6, 3)];
    let inst = toy.build();
    let sol = initial_solution(&inst, 5).unwrap();
    assert!(check_schedule(&inst, &sol.schedule).unwrap().is_empty());
    for t in 0..inst.horizon() {
        let service: Vec<_> = inst
            .helicopter_ids()
            .filter_map(|a| sol.schedule.at(a, t))
            .filter(|&i| inst.is_service(i))
            .collect();
        let mut dedup = service.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), service.len(), "shared service node at t = {t}");
    }
    assert!(sol.value.terms.efficiency_raw > 0.0);
}

#[test]
fn repair_leaves_a_feasible_plan_alone() {
    let inst = Toy::new(2, 30).build();
    let mut plan = assign_work(&inst, plan_trajectories(&inst, 2)).unwrap();
    let before = plan.clone();
    let direct = decode(&inst, &plan).unwrap();
    assert!(check_schedule(&inst, &direct.schedule).unwrap().is_empty());
    let (decoded, repairs) = repair(&inst, &mut plan, 10, 2).unwrap();
    assert_eq!(repairs, 0);
    assert_eq!(plan, before);
    assert_eq!(decoded, direct);
}

#[test]
fn full_base_sends_the_second_rester_elsewhere() {
    let mut toy = Toy::new(2, 30);
    toy.traj_of = vec![0, 1];
    toy.bases = vec![1, 1];
    let mut inst = toy.build();
    // B1 is the closer base from everywhere.
    for from in ["P1", "P2", "C1", "I1"] {
        set_travel(&mut inst, from, "B2", 2);
    }
    inst.reindex();
    let sol = initial_solution(&inst, 0).unwrap();
    assert!(check_schedule(&inst, &sol.schedule).unwrap().is_empty());
    let end: Vec<_> = inst.helicopter_ids().map(|a| sol.schedule.at(a, 29).unwrap()).collect();
    let mut bases = end.clone();
    bases.sort();
    assert_eq!(bases, vec![node(&inst, "B1"), node(&inst, "B2")], "{end:?}");
}

#[test]
fn shifts_that_would_collide_are_pushed_apart() {
    let inst = Toy::new(2, 24).build();
    let mut plan = assign_work(&inst, plan_trajectories(&inst, 0)).unwrap();
    for hp in &mut plan.helicopters {
        hp.shifts = vec![Shift {
            start: 3,
            stops: Some(4),
            base: None,
        }];
    }
    let (decoded, _) = repair(&inst, &mut plan, 20, 0).unwrap();
    assert!(check_schedule(&inst, &decoded.schedule).unwrap().is_empty());
    let derived = Derived::new(&inst, &decoded.schedule).unwrap();
    assert_eq!(drops_per_helicopter(&derived), vec![2, 2]);
    assert_ne!(decoded.outcomes[0][0].departure, decoded.outcomes[1][0].departure);
}

#[test]
fn small_family_builds_fast_and_feasible() {
    for spec in FamilySpec::family_rows(Family::Small) {
        let inst = generate_instance(&spec);
        let t0 = Instant::now();
        let sol = initial_solution(&inst, 1).unwrap();
        let took = t0.elapsed();
        assert!(check_schedule(&inst, &sol.schedule).unwrap().is_empty(), "{}", spec.name);
        assert!(took.as_secs_f64() < 1.0, "{} took {took:?}", spec.name);
    }
}

#[test]
fn short_horizon_means_no_drops() {
    let mut toy = Toy::new(2, 5);
    toy.travel = 2;
    let inst = toy.build();
    let sol = initial_solution(&inst, 0).unwrap();
    assert!(check_schedule(&inst, &sol.schedule).unwrap().is_empty());
    assert_eq!(summarize(&inst, &sol.schedule).unwrap().drops, 0);
    for a in inst.helicopter_ids() {
        assert!(inst.is_base(sol.schedule.at(a, 4).unwrap()));
    }
}

#[test]
fn same_seed_same_schedule() {
    let inst = generate_instance(&FamilySpec::medium(2));
    let a = initial_solution(&inst, 11).unwrap();
    let b = initial_solution(&inst, 11).unwrap();
    assert_eq!(schedule_to_json(&inst, &a.schedule), schedule_to_json(&inst, &b.schedule));
    assert_eq!(a.plan, b.plan);
}
