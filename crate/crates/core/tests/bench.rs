mod common;

use common::Toy;
use heliplan::bench::{
    brute_force_optimum, generate_instance, random_schedule, render_schedule, run_comparison, summarize,
    work_windows, Algorithm, ComparisonRequest, Family, FamilySpec,
};
use heliplan::config::Config;
use heliplan::construct::initial_solution;
use heliplan::feasibility::{check_schedule, Derived};
use heliplan::improve::Budget;
use heliplan::model::format::instance_to_json;
use heliplan::model::validate_instance;
use heliplan::objective::evaluate;
use heliplan::Schedule;
use proptest::prelude::*;

#[test]
fn brute_force_beats_every_feasible_schedule_it_is_shown() {
    let mut shown = 0;
    for k in 1..=8u64 {
        let inst = generate_instance(&FamilySpec::tiny(k));
        let best = brute_force_optimum(&inst).unwrap();
        assert!(check_schedule(&inst, &best.schedule).unwrap().is_empty());
        let mut candidates: Vec<Schedule> = (0..400).map(|s| random_schedule(&inst, k * 10_000 + s)).collect();
        candidates.extend((0..5).map(|s| initial_solution(&inst, s).unwrap().schedule));
        for s in candidates {
            if check_schedule(&inst, &s).unwrap().is_empty() {
                let v = evaluate(&inst, &s).unwrap().total;
                assert!(v <= best.value.total + 1e-12, "T{k}: {v} > {}", best.value.total);
                shown += 1;
            }
        }
    }
    assert!(shown >= 100, "only {shown} feasible schedules");
}

#[test]
fn brute_force_finds_the_single_circuit() {
    // Start, fly, load, fly, drop, fly, base: one circuit fits in 8.
    let mut toy = Toy::new(1, 8);
    toy.mr = 2;
    let inst = toy.build();
    let best = brute_force_optimum(&inst).unwrap();
    assert_eq!(summarize(&inst, &best.schedule).unwrap().drops, 1);
    assert_eq!(best.value.terms.efficiency_raw, 10_000.0);
}

#[test]
fn brute_force_without_room_for_a_circuit_rests() {
    let mut toy = Toy::new(1, 5);
    toy.mr = 2;
    let inst = toy.build();
    let best = brute_force_optimum(&inst).unwrap();
    assert_eq!(best.value.terms.efficiency_raw, 0.0);
    assert!(check_schedule(&inst, &best.schedule).unwrap().is_empty());
}

#[test]
fn brute_force_refuses_large_instances() {
    let err = brute_force_optimum(&Toy::new(3, 10).build()).unwrap_err();
    assert!(err.to_string().contains('3'), "{err}");
    assert!(brute_force_optimum(&Toy::new(1, 20).build()).is_err());
}

#[test]
fn family_shapes() {
    let s1 = generate_instance(&FamilySpec::small(1));
    assert_eq!(s1.horizon(), 24);
    assert_eq!((s1.fires().len(), s1.waters().len(), s1.bases().len()), (3, 5, 5));
    let m5 = generate_instance(&FamilySpec::medium(5));
    assert_eq!(m5.helicopters.len(), 25);
    assert_eq!(m5.trajectories.len(), 5);
    for spec in FamilySpec::family_rows(Family::Big) {
        let inst = generate_instance(&spec);
        assert!(validate_instance(&inst).iter().all(|d| !d.is_error()), "{}", spec.name);
    }
}

#[test]
fn same_spec_same_bytes() {
    let spec = FamilySpec::medium(3);
    assert_eq!(instance_to_json(&generate_instance(&spec)), instance_to_json(&generate_instance(&spec)));
}

#[test]
fn windows_match_the_rendered_rows() {
    let inst = generate_instance(&FamilySpec::small(4));
    let sol = initial_solution(&inst, 1).unwrap();
    let text = render_schedule(&inst, &sol.schedule);
    let rows: Vec<&str> = text.lines().skip(1).take(inst.helicopters.len()).collect();
    for (row, h) in rows.iter().zip(&inst.helicopters) {
        let cells: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(cells[0], h.id);
        assert_eq!(cells.len() - 1, inst.horizon());
    }
    let windows = work_windows(&inst, &sol.schedule);
    let total: u32 = windows.iter().flatten().map(|w| w.drops).sum();
    assert_eq!(total, summarize(&inst, &sol.schedule).unwrap().drops);
    for w in windows.iter().flatten() {
        assert!(w.from < w.to);
    }
}

#[test]
fn comparison_aggregates_every_run() {
    let request = ComparisonRequest {
        repetitions: 2,
        budget: Budget::Iterations(150),
        checkpoints: vec![50.0],
        first_seed: 3,
    };
    let specs = [FamilySpec::small(1), FamilySpec::small(2)];
    let report = run_comparison(&specs, &[Algorithm::Sa, Algorithm::Ils], &request, &Config::default()).unwrap();
    assert_eq!(report.runs.len(), 8);
    assert!(report.runs.iter().all(|r| r.error.is_none()));
    // One cell per (spec, method) and mark, plus the final one.
    assert_eq!(report.cells.len(), 2 * 2 * 2);
    for spec in ["S1", "S2"] {
        let best = report.best[spec];
        let cells: Vec<_> = report.cells.iter().filter(|c| c.spec == spec).collect();
        assert!(cells.iter().any(|c| c.rdp == 0.0));
        assert!(cells.iter().all(|c| c.mean <= best && (0.0..=1.0).contains(&c.rdp)));
    }
    let again = run_comparison(&specs, &[Algorithm::Sa, Algorithm::Ils], &request, &Config::default()).unwrap();
    assert_eq!(report.to_json(), again.to_json());
    assert!(report.to_table().lines().count() >= 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn drops_are_drop_events(seed in 0u64..10_000) {
        let inst = generate_instance(&FamilySpec::tiny(seed % 30));
        let s = random_schedule(&inst, seed);
        let d = Derived::new(&inst, &s).unwrap();
        let events = d.events.drop_end.iter().flatten().filter(|e| e.is_some()).count() as u32;
        prop_assert_eq!(summarize(&inst, &s).unwrap().drops, events);
    }

    #[test]
    fn generated_instances_validate(n in 1usize..=20, seed in 0u64..1000, family in 0u8..3) {
        let spec = match family {
            0 => FamilySpec::small(n.min(10)),
            1 => FamilySpec::medium(n),
            _ => FamilySpec::tiny(seed),
        }
        .with_seed(seed);
        let inst = generate_instance(&spec);
        let errors: Vec<_> = validate_instance(&inst).into_iter().filter(|d| d.is_error()).collect();
        prop_assert!(errors.is_empty(), "{}: {:?}", spec.name, errors);
    }
}
