mod common;

use common::{sched, Toy};
use heliplan::bench::{generate_instance, FamilySpec};
use heliplan::construct::initial_solution;
use heliplan::feasibility::{check_schedule, ConstraintRef};
use heliplan::milp::{
    build_milp, build_milp_with_limit, check_assignment, emit_lp, schedule_to_assignment, Assignment, MilpModel,
    VarKind,
};
use heliplan::Schedule;
use std::collections::{BTreeMap, BTreeSet, HashMap};

fn s1() -> heliplan::Instance {
    generate_instance(&FamilySpec::by_name("S1").unwrap())
}

/// Just enough of the LP format to read back what the writer emits.
#[derive(Debug, Default)]
struct ParsedLp {
    sections: Vec<String>,
    objective: BTreeMap<String, f64>,
    rows: BTreeMap<String, (BTreeMap<String, f64>, String, f64)>,
    free: BTreeSet<String>,
    binaries: BTreeSet<String>,
}

fn parse_terms(text: &str) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let toks: Vec<&str> = text.split_whitespace().collect();
    let mut k = 0;
    let mut sign = 1.0;
    while k < toks.len() {
        match toks[k] {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            tok => {
                let (coef, name) = match tok.parse::<f64>() {
                    Ok(c) => {
                        k += 1;
                        (c, toks[k])
                    }
                    Err(_) => (1.0, tok),
                };
                *out.entry(name.to_string()).or_insert(0.0) += sign * coef;
                sign = 1.0;
            }
        }
        k += 1;
    }
    out.retain(|_, c| *c != 0.0);
    out
}

fn parse_lp(text: &str) -> ParsedLp {
    let mut lp = ParsedLp::default();
    // Join continuation lines onto their statement.
    let mut statements: Vec<(String, String)> = Vec::new();
    let mut section = String::new();
    for raw in text.lines() {
        if raw.starts_with('\\') || raw.trim().is_empty() {
            continue;
        }
        if !raw.starts_with(' ') {
            section = raw.trim().to_string();
            lp.sections.push(section.clone());
            continue;
        }
        if raw.starts_with("  ") {
            statements.last_mut().expect("continuation after a statement").1.push_str(raw);
        } else {
            statements.push((section.clone(), raw.to_string()));
        }
    }
    for (section, st) in statements {
        match section.as_str() {
            "Maximize" => {
                let (_, expr) = st.split_once(':').unwrap();
                lp.objective = parse_terms(expr);
            }
            "Subject To" => {
                let (name, rest) = st.trim().split_once(':').unwrap();
                let op = ["<=", ">=", "="].into_iter().find(|op| rest.contains(op)).unwrap();
                let (lhs, rhs) = rest.split_once(op).unwrap();
                let previous = lp
                    .rows
                    .insert(name.to_string(), (parse_terms(lhs), op.to_string(), rhs.trim().parse().unwrap()));
                assert!(previous.is_none(), "row {name} written twice");
            }
            "Bounds" => {
                let name = st.trim().strip_suffix(" free").expect("only free bounds are written");
                lp.free.insert(name.to_string());
            }
            "Binaries" => lp.binaries.extend(st.split_whitespace().map(String::from)),
            other => panic!("statement in section {other}"),
        }
    }
    lp
}

#[test]
fn empty_model_writes_every_section() {
    let text = emit_lp(&MilpModel::default());
    let lp = parse_lp(&text);
    assert_eq!(lp.sections, ["Maximize", "Subject To", "Bounds", "Binaries", "End"]);
    assert!(lp.rows.is_empty());
}

#[test]
fn s1_model_is_deterministic() {
    let inst = s1();
    assert_eq!(inst.horizon(), 24);
    let a = build_milp(&inst).unwrap();
    let b = build_milp(&inst).unwrap();
    assert_eq!(a.rows.len(), b.rows.len());
    assert_eq!(a.variables, b.variables);
    assert_eq!(emit_lp(&a), emit_lp(&b));
    assert!(a.rows.len() > 1000, "{} rows", a.rows.len());
}

#[test]
fn size_limit_is_enforced() {
    let err = build_milp_with_limit(&s1(), 1000).unwrap_err();
    assert!(err.to_string().contains("nonzero"), "{err}");
}

#[test]
fn accounting_rows_cover_later_intervals_once() {
    for horizon in [2usize, 5] {
        let mut toy = Toy::new(2, horizon);
        toy.waters = vec![(1e6, 2), (1e6, 2)];
        let inst = toy.build();
        let m = build_milp(&inst).unwrap();
        let count = |c: ConstraintRef| m.rows.iter().filter(|r| r.key.constraint == c).count();
        // ca for t > 1 and z for t > 1, one row per water point or helicopter.
        assert_eq!(count(ConstraintRef::Aux(2)), 2 * (horizon - 1));
        assert_eq!(count(ConstraintRef::Aux(4)), 2 * (horizon - 1));
        assert_eq!(count(ConstraintRef::Aux(3)), 2);
        assert_eq!(count(ConstraintRef::Aux(5)), 2);
        let names: BTreeSet<String> = m.rows.iter().map(|r| r.key.name()).collect();
        assert_eq!(names.len(), m.rows.len(), "row names collide");
    }
}

#[test]
fn census_counts_every_variable() {
    let inst = Toy::new(2, 6).build();
    let m = build_milp(&inst).unwrap();
    let census = m.census();
    assert_eq!(census.values().sum::<usize>(), m.variables.len());
    let n = inst.nodes.len();
    assert_eq!(census["y"], 2 * n * 6);
    assert_eq!(census["x"], 2 * inst.edges.len() * 6);
    assert_eq!(census["z"], 12);
    assert_eq!(census["cntv"], 12);
    assert_eq!(census["h1"], 6);
    for prefix in ["e", "ec", "ed", "r", "cw", "aux", "faux", "cnta", "ca"] {
        assert!(census.contains_key(prefix), "no {prefix} variables");
    }
}

#[test]
fn s1_lp_reparses_to_the_same_model() {
    let inst = s1();
    let m = build_milp(&inst).unwrap();
    let text = emit_lp(&m);
    let lp = parse_lp(&text);
    assert_eq!(lp.sections, ["Maximize", "Subject To", "Bounds", "Binaries", "End"]);
    assert_eq!(lp.rows.len(), m.rows.len());

    let binaries: BTreeSet<String> =
        m.variables.iter().filter(|v| v.kind == VarKind::Binary).map(|v| v.name.clone()).collect();
    let free: BTreeSet<String> =
        m.variables.iter().filter(|v| v.kind == VarKind::Free).map(|v| v.name.clone()).collect();
    assert_eq!(lp.binaries, binaries);
    assert_eq!(lp.free, free);

    let name_of = |v: usize| m.variables[v].name.clone();
    for row in &m.rows {
        let (terms, op, rhs) = &lp.rows[&row.key.name()];
        let mut expect: BTreeMap<String, f64> = BTreeMap::new();
        for &(v, c) in &row.terms {
            *expect.entry(name_of(v)).or_insert(0.0) += c;
        }
        expect.retain(|_, c| *c != 0.0);
        assert_eq!(terms.len(), expect.len(), "row {}", row.key.name());
        for (k, c) in &expect {
            assert!((terms[k] - c).abs() <= 1e-9 * c.abs().max(1.0), "row {} term {k}", row.key.name());
        }
        assert_eq!(op, row.sense.symbol());
        assert!((rhs - row.rhs).abs() <= 1e-9 * row.rhs.abs().max(1.0));
    }
    let mut obj: BTreeMap<String, f64> = BTreeMap::new();
    for &(v, c) in &m.objective {
        *obj.entry(name_of(v)).or_insert(0.0) += c;
    }
    assert_eq!(lp.objective.keys().collect::<Vec<_>>(), obj.keys().collect::<Vec<_>>());
}

#[test]
fn names_fit_lp_readers() {
    let m = build_milp(&s1()).unwrap();
    let ok = |s: &str| {
        s.len() <= 255
            && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
    };
    for v in &m.variables {
        assert!(ok(&v.name), "variable {}", v.name);
    }
    for r in &m.rows {
        assert!(ok(&r.key.name()), "row {}", r.key.name());
    }
    for line in emit_lp(&m).lines() {
        assert!(line.len() <= 255, "long line: {} chars", line.len());
    }
}

#[test]
fn parked_assignment_has_no_flights() {
    let inst = Toy::new(2, 6).build();
    let asg = schedule_to_assignment(&inst, &Schedule::parked(&inst)).unwrap();
    for (name, v) in asg.entries() {
        if name.starts_with("x_") {
            assert_eq!(v, 0.0, "{name}");
        }
        if let Some(rest) = name.strip_prefix("y_") {
            let i: usize = rest.split('_').next().unwrap().parse().unwrap();
            if v != 0.0 {
                assert!(inst.starts().iter().any(|s| s.0 == i), "{name}");
            }
        }
    }
}

#[test]
fn one_circuit_has_one_load_and_one_drop() {
    let inst = Toy::new(1, 8).build();
    let s = sched(&inst, &["P1 >C1 C1 >I1 I1 >B1 B1*2"]);
    let asg = schedule_to_assignment(&inst, &s).unwrap();
    let ones = |prefix: &str| asg.entries().iter().filter(|(n, v)| n.starts_with(prefix) && *v == 1.0).count();
    assert_eq!(ones("ec_"), 1);
    assert_eq!(ones("ed_"), 1);
    assert!(check_assignment(&build_milp(&inst).unwrap(), &asg).is_empty());
}

// Row 42 fires too: the blank-time slack h1 is zero in the assignment.
#[test]
fn all_zero_assignment_breaks_presence_rows() {
    let inst = Toy::new(2, 6).build();
    let m = build_milp(&inst).unwrap();
    let report = check_assignment(&m, &Assignment::new());
    let model_rows: BTreeSet<ConstraintRef> = report
        .count_by_constraint()
        .into_keys()
        .filter(|c| matches!(c, ConstraintRef::Model(_)))
        .collect();
    assert_eq!(model_rows, BTreeSet::from([ConstraintRef::Model(24), ConstraintRef::Model(25), ConstraintRef::Model(42)]));
}

#[test]
fn feasible_schedule_gives_a_feasible_assignment() {
    let inst = generate_instance(&FamilySpec::small(1));
    let sol = initial_solution(&inst, 3).unwrap();
    assert!(check_schedule(&inst, &sol.schedule).unwrap().is_empty());
    let m = build_milp(&inst).unwrap();
    let asg = schedule_to_assignment(&inst, &sol.schedule).unwrap();
    assert!(check_assignment(&m, &asg).is_empty());
    assert!(m.domain_violations(&asg).is_empty());
    let total = heliplan::objective::evaluate(&inst, &sol.schedule).unwrap().total;
    assert!((m.objective_value(&asg) - total).abs() < 1e-9);
}

#[test]
fn flipping_a_binary_breaks_a_row() {
    let inst = Toy::new(2, 10).build();
    let s = sched(&inst, &["P1 >C1 C1 >I1 I1 >B1 B1*4", "P2 P2 >C1 C1 >I1 I1 >B1 B1*3"]);
    let m = build_milp(&inst).unwrap();
    let asg = schedule_to_assignment(&inst, &s).unwrap();
    assert!(check_assignment(&m, &asg).is_empty());
    let base = m.objective_value(&asg);
    let mut silent: HashMap<String, usize> = HashMap::new();
    for v in m.variables.iter().filter(|v| v.kind == VarKind::Binary) {
        let mut flipped = asg.clone();
        flipped.set(v.name.clone(), 1.0 - asg.get(&v.name));
        if check_assignment(&m, &flipped).is_empty() {
            // Change indicators are only bounded from below; raising one is
            // feasible but always costs objective.
            assert!(v.name.starts_with("aux_"), "{} flips silently", v.name);
            assert!(m.objective_value(&flipped) < base);
            *silent.entry(v.name.clone()).or_default() += 1;
        }
    }
    assert!(silent.len() <= 2, "{silent:?}");
}
