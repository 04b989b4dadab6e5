mod common;

use common::{node, Toy};
use heliplan::bench::{generate_instance, summarize, FamilySpec};
use heliplan::config::Config;
use heliplan::construct::{decode, initial_solution, EpochNodes, HeliPlan, Shift, Solution, TrajectoryPlan, WorkPlan};
use heliplan::feasibility::check_schedule;
use heliplan::improve::{
    acceptance_probability, applicable, apply_move, iterated_local_search, neighbour, random_move,
    simulated_annealing, Budget, IlsParams, Move, MoveKind, SaParams,
};
use heliplan::model::{HeliIdx, Instance, TrajIdx};
use heliplan::objective::evaluate;
use heliplan::rng;
use std::collections::BTreeMap;

/// Five helicopters in two trajectories: h1..h3 work C1 and I3, h4 and h5
/// work C2 and I4. I3 and I4 are worth twice I1 and I2.
fn two_crews() -> Instance {
    let mut toy = Toy::new(5, 20);
    toy.traj_of = vec![0, 0, 0, 1, 1];
    toy.waters = vec![(1e6, 3), (1e6, 3)];
    toy.fires = [5.0, 5.0, 10.0, 10.0].iter().map(|&ef| vec![ef; 20]).collect();
    toy.bases = vec![5];
    toy.mcf = 9;
    toy.mr = 4;
    toy.build()
}

fn two_crews_plan(inst: &Instance) -> WorkPlan {
    let trajectories = TrajectoryPlan {
        epoch_starts: vec![0],
        nodes: vec![
            vec![EpochNodes {
                load: node(inst, "C1"),
                drop: node(inst, "I3"),
            }],
            vec![EpochNodes {
                load: node(inst, "C2"),
                drop: node(inst, "I4"),
            }],
        ],
        diagnostics: Vec::new(),
    };
    let at = |start: usize| Shift {
        start,
        stops: None,
        base: None,
    };
    let hp = |shifts: Vec<Shift>| HeliPlan {
        shifts,
        park: node(inst, "B1"),
        park_departure: 0,
        reposition: false,
    };
    WorkPlan {
        trajectories,
        helicopters: vec![
            hp(vec![]),
            hp(vec![at(0)]),
            hp(vec![at(12)]),
            hp(vec![at(0), at(16)]),
            hp(vec![
                Shift {
                    start: 0,
                    stops: Some(2),
                    base: None,
                },
                at(0),
            ]),
        ],
    }
}

fn drops(inst: &Instance, plan: &WorkPlan) -> (u32, f64) {
    let d = decode(inst, plan).unwrap();
    assert!(check_schedule(inst, &d.schedule).unwrap().is_empty());
    let eff = evaluate(inst, &d.schedule).unwrap().terms.efficiency_raw;
    (summarize(inst, &d.schedule).unwrap().drops, eff)
}

#[test]
fn four_moves_lift_seven_drops_to_eleven() {
    let inst = two_crews();
    let plan = two_crews_plan(&inst);
    assert_eq!(drops(&inst, &plan), (7, 70_000.0));

    let moves = [
        // Put the idle h1 to work.
        Move::MI3 {
            a: HeliIdx(0),
            start: 0,
            reposition: false,
        },
        // Bring h3's late shift forward.
        Move::MI6 {
            a: HeliIdx(2),
            shift: Some(0),
            start: 9,
        },
        // Cut h4's rest to the minimum.
        Move::MI5 { a: HeliIdx(3), shift: 1 },
        // Let h5 keep flying instead of returning after one circuit.
        Move::MI7 {
            a: HeliIdx(4),
            shift: 0,
            stops: None,
        },
    ];
    let mut p = plan;
    let mut last = 7;
    for mv in &moves {
        p = apply_move(&p, mv, &inst);
        let (n, _) = drops(&inst, &p);
        assert!(n >= last, "{mv:?} lost drops");
        last = n;
    }
    assert_eq!(drops(&inst, &p), (11, 110_000.0));
}

#[test]
fn grounding_the_only_worker_leaves_no_drops() {
    let inst = Toy::new(1, 20).build();
    let sol = initial_solution(&inst, 0).unwrap();
    assert!(sol.value.terms.efficiency_raw > 0.0);
    let mv = Move::MI4 { a: HeliIdx(0) };
    let next = neighbour(&inst, &sol, &mv, &Config::default().moves, 0).unwrap().unwrap();
    assert!(check_schedule(&inst, &next.schedule).unwrap().is_empty());
    assert_eq!(summarize(&inst, &next.schedule).unwrap().drops, 0);
}

#[test]
fn dry_water_point_is_repaired_or_rejected() {
    let mut toy = Toy::new(2, 24);
    toy.waters = vec![(1e6, 2), (0.0, 2)];
    let inst = toy.build();
    let sol = initial_solution(&inst, 0).unwrap();
    assert_eq!(sol.plan.trajectories.nodes[0][0].load, node(&inst, "C1"));
    let mv = Move::MI1 {
        w: TrajIdx(0),
        k: 0,
        node: node(&inst, "C2"),
    };
    for seed in 0..10 {
        if let Some(next) = neighbour(&inst, &sol, &mv, &Config::default().moves, seed).unwrap() {
            assert!(check_schedule(&inst, &next.schedule).unwrap().is_empty());
            assert!(next.value.terms.efficiency_raw <= sol.value.terms.efficiency_raw);
        }
    }
}

#[test]
fn idle_fleet_only_offers_activation() {
    let mut toy = Toy::new(2, 12);
    toy.fires = vec![vec![10.0; 12]];
    let inst = toy.build();
    let mut sol = initial_solution(&inst, 0).unwrap();
    for hp in &mut sol.plan.helicopters {
        hp.shifts.clear();
    }
    let d = decode(&inst, &sol.plan).unwrap();
    let sol = Solution::from_decoded(&inst, sol.plan, d, 0).unwrap();
    assert_eq!(applicable(&inst, &sol), vec![MoveKind::MI3]);
}

#[test]
fn move_kinds_are_drawn_evenly() {
    let inst = generate_instance(&FamilySpec::medium(1));
    let sol = initial_solution(&inst, 2).unwrap();
    let kinds = applicable(&inst, &sol);
    assert!(kinds.len() >= 5, "{kinds:?}");
    let settings = Config::default().moves;
    let mut r = rng::from_seed(9);
    let n = 10_000;
    let mut seen: BTreeMap<MoveKind, usize> = BTreeMap::new();
    for _ in 0..n {
        *seen.entry(random_move(&inst, &sol, &settings, &mut r).unwrap().kind()).or_default() += 1;
    }
    assert_eq!(seen.keys().copied().collect::<Vec<_>>(), {
        let mut k = kinds.clone();
        k.sort();
        k
    });
    let p = 1.0 / kinds.len() as f64;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    for (kind, &count) in &seen {
        assert!((count as f64 - n as f64 * p).abs() < 4.0 * sd, "{kind}: {count}");
    }
}

#[test]
fn same_seed_same_move() {
    let inst = generate_instance(&FamilySpec::small(2));
    let sol = initial_solution(&inst, 0).unwrap();
    let settings = Config::default().moves;
    for seed in 0..50 {
        let a = random_move(&inst, &sol, &settings, &mut rng::from_seed(seed)).unwrap();
        let b = random_move(&inst, &sol, &settings, &mut rng::from_seed(seed)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn acceptance_follows_the_exponential_law() {
    assert_eq!(acceptance_probability(0.5, 1.0), 1.0);
    assert_eq!(acceptance_probability(0.0, 0.3), 1.0);
    assert!((acceptance_probability(-0.1, 0.1) - (-1.0f64).exp()).abs() < 1e-15);
}

fn sa(seed: u64, iterations: u64) -> SaParams {
    let mut p = SaParams::from_config(&Config::default(), Budget::Iterations(iterations), seed);
    p.checkpoints = vec![iterations as f64 / 4.0, iterations as f64 / 2.0, iterations as f64];
    p
}

fn ils(seed: u64, iterations: u64) -> IlsParams {
    let mut p = IlsParams::from_config(&Config::default(), Budget::Iterations(iterations), seed);
    p.checkpoints = vec![iterations as f64 / 4.0, iterations as f64 / 2.0, iterations as f64];
    p
}

#[test]
fn ils_rejects_an_empty_inner_loop() {
    let inst = generate_instance(&FamilySpec::small(1));
    let mut p = ils(0, 100);
    p.inner_budget = 0;
    assert!(iterated_local_search(&inst, &p).is_err());
    p.inner_budget = 1;
    let out = iterated_local_search(&inst, &p).unwrap();
    assert!(out.trace.iterations <= 100);
    assert!(check_schedule(&inst, &out.best.schedule).unwrap().is_empty());
}

#[test]
fn drivers_never_lose_the_best() {
    for seed in 0..4 {
        let inst = generate_instance(&FamilySpec::small(seed as usize % 3 + 1));
        let start = initial_solution(&inst, seed).unwrap().value.total;
        for out in [
            simulated_annealing(&inst, &sa(seed, 400)).unwrap(),
            iterated_local_search(&inst, &ils(seed, 400)).unwrap(),
        ] {
            let t = &out.trace;
            assert_eq!(t.initial, start);
            assert!(t.best >= t.initial);
            assert_eq!(t.checkpoints.len(), 3);
            assert!(t.checkpoints.windows(2).all(|w| w[0].best <= w[1].best), "{}", t.algorithm);
            assert!(check_schedule(&inst, &out.best.schedule).unwrap().is_empty());
            let value = evaluate(&inst, &out.best.schedule).unwrap().total;
            assert!((value - t.best).abs() < 1e-12);
        }
    }
}

#[test]
fn iteration_budgets_are_reproducible() {
    let inst = generate_instance(&FamilySpec::small(3));
    let a = simulated_annealing(&inst, &sa(7, 300)).unwrap();
    let b = simulated_annealing(&inst, &sa(7, 300)).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.best.schedule, b.best.schedule);
    let a = iterated_local_search(&inst, &ils(7, 300)).unwrap();
    let b = iterated_local_search(&inst, &ils(7, 300)).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.best.schedule, b.best.schedule);
}
