mod common;

use common::{sched, Toy};
use heliplan::bench::{generate_instance, random_schedule, FamilySpec};
use heliplan::objective::{compute_normalizers, evaluate, rdp, Normalizers};
use heliplan::Schedule;
use proptest::prelude::*;

#[test]
fn zero_efficiency_clamps_ub1() {
    let mut toy = Toy::new(2, 24);
    toy.fires = vec![vec![0.0; 24]];
    assert_eq!(compute_normalizers(&toy.build()).ub1, 1.0);
}

#[test]
fn normalizers_follow_fleet_and_horizon() {
    let mut toy = Toy::new(2, 24);
    toy.fires = vec![vec![4.0; 24], vec![10.0; 24]];
    let n = compute_normalizers(&toy.build());
    assert_eq!(n.ub1, 480_000.0);
    assert_eq!((n.ub2, n.ub3, n.ub4), (48.0, 48.0, 24.0));

    let n = compute_normalizers(&Toy::new(5, 48).build());
    assert_eq!(n.ub2, 240.0);
}

#[test]
fn parked_fleet_only_pays_for_blank_time() {
    let inst = Toy::new(2, 24).build();
    let v = evaluate(&inst, &Schedule::parked(&inst)).unwrap();
    assert_eq!(v.terms.efficiency_raw, 0.0);
    assert_eq!(v.terms.flights_raw, 0.0);
    assert_eq!(v.terms.hover_raw, 0.0);
    assert_eq!(v.terms.h1_sum, 22.0);
    assert!((v.total - (-0.005 * 22.0)).abs() < 1e-12);
}

#[test]
fn another_drop_raises_efficiency() {
    let inst = Toy::new(1, 14).build();
    let one = sched(&inst, &["P1 >C1 C1 >I1 I1 >B1 B1*8"]);
    let two = sched(&inst, &["P1 >C1 C1 >I1 I1 >C1 C1 >I1 I1 >B1 B1*4"]);
    let (a, b) = (evaluate(&inst, &one).unwrap(), evaluate(&inst, &two).unwrap());
    assert_eq!(a.terms.efficiency_raw, 10_000.0);
    assert_eq!(b.terms.efficiency_raw, 20_000.0);
    assert!(b.contributions.efficiency > a.contributions.efficiency);
    assert!(b.total > a.total);
}

#[test]
fn total_is_the_weighted_sum_of_terms() {
    let mut toy = Toy::new(2, 16);
    toy.fires = vec![(0..16).map(|t| (t % 11) as f64).collect()];
    let inst = toy.build();
    let s = sched(&inst, &["P1 >C1 C1 >I1 I1 >B1 B1*10", "P2 P2 >C1 C1 >I1 I1 >C1 C1 >I1 I1 >B1 B1*5"]);
    let v = evaluate(&inst, &s).unwrap();
    let Normalizers { ub1, ub2, ub3, ub4 } = v.normalizers;
    let t = v.terms;
    let w = &inst.weights;
    let by_hand = t.efficiency_raw / ub1 - w.mu2 * t.flights_raw / ub2 - w.mu3 * t.hover_raw / ub3
        - w.mu4 * t.changes_raw / ub4
        - w.mu5 * t.h1_sum
        - w.mu6 * t.faux_sum;
    assert!((v.total - by_hand).abs() < 1e-12);
    assert!((v.total - v.contributions.sum()).abs() < 1e-15);
    // Drops at t = 4, 5 and 9 (0-based) with wc = 1000.
    assert_eq!(t.efficiency_raw, 4000.0 + 5000.0 + 9000.0);
    assert_eq!((t.flights_raw, t.hover_raw), (8.0, 6.0));
}

#[test]
fn explicit_normalizers_override_the_formula() {
    let mut inst = Toy::new(1, 12).build();
    let fixed = Normalizers {
        ub1: 1.0,
        ub2: 2.0,
        ub3: 3.0,
        ub4: 4.0,
    };
    inst.weights.normalizers = Some(fixed);
    let v = evaluate(&inst, &Schedule::parked(&inst)).unwrap();
    assert_eq!(v.normalizers, fixed);
}

#[test]
fn rdp_examples() {
    assert_eq!(rdp(10.0, 10.0, 1e-9), 0.0);
    assert!((rdp(10.0, 8.0, 1e-9) - 0.2).abs() < 1e-9);
    assert_eq!(rdp(0.0, 0.0, 1e-9), 0.0);
}

proptest! {
    #[test]
    fn rdp_lies_in_the_unit_interval(best in 0.0f64..100.0, frac in 0.0f64..=1.0) {
        let current = best * frac;
        let r = rdp(best, current, 1e-9);
        prop_assert!((0.0..=1.0).contains(&r));
    }

    #[test]
    fn contributions_sum_to_total(seed in 0u64..100_000) {
        let inst = generate_instance(&FamilySpec::tiny(seed % 40));
        let v = evaluate(&inst, &random_schedule(&inst, seed)).unwrap();
        prop_assert!((v.total - v.contributions.sum()).abs() < 1e-12);
        prop_assert!(v.terms.efficiency_raw >= 0.0);
        prop_assert!(v.contributions.flights <= 0.0 && v.contributions.hover <= 0.0);
    }
}
