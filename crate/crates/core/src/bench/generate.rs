use super::family::FamilySpec;
use crate::config::GeneratorSettings;
use crate::model::{minutes_to_intervals, Edge, Helicopter, Instance, Node, NodeIdx, Partition, TimeGrid, TrajIdx};
use crate::objective::ObjectiveWeights;
use crate::rng;
use rand::Rng as _;
use std::f64::consts::TAU;

/// Synthesizes an instance with the default generator settings.
pub fn generate_instance(spec: &FamilySpec) -> Instance {
    generate_with(spec, &crate::config::Config::default().generator)
}

/// Nodes are placed on a plane around a wildfire front that moves by a fixed
/// step at every evolution. During epoch `k` only the `k`-th group of drop
/// points has a positive efficiency; the first node of the group is the head
/// of the fire and gets the top value.
pub fn generate_with(spec: &FamilySpec, g: &GeneratorSettings) -> Instance {
    let mut r = rng::from_seed(spec.seed);
    let horizon = spec.horizon_intervals().max(2);
    let grid = TimeGrid::new(spec.interval_minutes, horizon);
    let epochs = spec.fire.evolutions + 1;
    let epoch_start: Vec<usize> = (0..epochs).map(|k| k * horizon / epochs).collect();
    let heading = r.random_range(0.0..TAU);
    let (hx, hy) = (heading.cos(), heading.sin());

    let ring = |r: &mut rng::Rng, range: [f64; 2]| {
        let d = r.random_range(range[0]..=range[1].max(range[0])) * 1000.0;
        let a = r.random_range(0.0..TAU);
        (d * a.cos(), d * a.sin())
    };

    let mut nodes = Vec::new();
    for a in 0..spec.helicopters {
        let (x, y) = ring(&mut r, g.start_distance_km);
        nodes.push(Node::start(format!("P{}", a + 1)).at(x.round(), y.round()));
    }
    for k in 0..spec.water_points {
        let (x, y) = ring(&mut r, g.water_distance_km);
        let cl = r.random_range(g.water_simultaneous[0]..=g.water_simultaneous[1].max(g.water_simultaneous[0]));
        nodes.push(Node::water(format!("C{}", k + 1), g.water_capacity_liters, cl).at(x.round(), y.round()));
    }
    let mut id = 0;
    for k in 0..epochs {
        let (cx, cy) = (hx * g.front_step_km * 1000.0 * k as f64, hy * g.front_step_km * 1000.0 * k as f64);
        let end = epoch_start.get(k + 1).copied().unwrap_or(horizon);
        for n in 0..spec.fire.nodes {
            id += 1;
            let value = if n == 0 {
                g.efficiency[1]
            } else {
                r.random_range(g.efficiency[0]..=g.efficiency[1].max(g.efficiency[0]))
            };
            let mut ef = vec![0.0; horizon];
            for slot in &mut ef[epoch_start[k]..end] {
                *slot = f64::from(value);
            }
            let rad = r.random_range(0.0..=g.fire_jitter_km) * 1000.0;
            let ang = r.random_range(0.0..TAU);
            let (x, y) = (cx + rad * ang.cos(), cy + rad * ang.sin());
            nodes.push(Node::wildfire(format!("I{id}"), ef).at(x.round(), y.round()));
        }
    }
    let min_total = spec.helicopters.div_ceil(spec.bases.max(1)) as u32 + 1;
    for k in 0..spec.bases {
        let (x, y) = ring(&mut r, g.base_distance_km);
        let cb = r.random_range(g.base_capacity[0]..=g.base_capacity[1].max(g.base_capacity[0]));
        nodes.push(Node::base(format!("B{}", k + 1), cb.max(min_total)).at(x.round(), y.round()));
    }

    let classes: Vec<_> = (0..spec.helicopters)
        .map(|_| &g.catalogue[r.random_range(0..g.catalogue.len())])
        .collect();
    let mut edges = Vec::new();
    for (u, from) in nodes.iter().enumerate() {
        for (v, to) in nodes.iter().enumerate() {
            if u == v || to.partition() == Partition::Start {
                continue;
            }
            let d = from.position.unwrap().distance(&to.position.unwrap()) / 1000.0;
            let flight_time = classes
                .iter()
                .map(|c| {
                    let minutes = (d / c.speed_kmh * 60.0).ceil() as u32;
                    minutes_to_intervals(minutes, &grid).max(1)
                })
                .collect();
            edges.push(Edge {
                from: NodeIdx(u),
                to: NodeIdx(v),
                flight_time,
            });
        }
    }

    let reg = spec.regulation;
    let mcf = reg
        .max_consecutive_flight
        .unwrap_or_else(|| minutes_to_intervals(g.max_consecutive_flight_minutes, &grid));
    let mr = reg
        .min_rest
        .unwrap_or_else(|| minutes_to_intervals(g.min_rest_minutes, &grid))
        .max(1);
    let mtf = reg
        .max_total_flight
        .unwrap_or_else(|| minutes_to_intervals(g.max_total_flight_minutes, &grid));
    let load = minutes_to_intervals(g.load_minutes, &grid).max(1);
    let drop = minutes_to_intervals(g.drop_minutes, &grid).max(1);
    let service_time: Vec<u32> = nodes
        .iter()
        .map(|n| match n.partition() {
            Partition::Water => load,
            Partition::Wildfire => drop,
            _ => 1,
        })
        .collect();
    let w = spec.trajectories.max(1);
    let helicopters = classes
        .iter()
        .enumerate()
        .map(|(a, class)| Helicopter {
            id: format!("h{}", a + 1),
            start: NodeIdx(a),
            water_capacity: class.water_capacity_liters,
            initially_loaded: false,
            consecutive_flight: 0,
            total_flight: 0,
            max_consecutive_flight: mcf,
            max_total_flight: mtf,
            consecutive_rest: mr,
            min_rest: mr,
            trajectory: TrajIdx(balanced_group(a, spec.helicopters, w)),
            service_time: service_time.clone(),
        })
        .collect();
    let trajectories = (1..=w).map(|k| format!("w{k}")).collect();
    let mut evolution = vec![false; horizon];
    for &s in &epoch_start[1..] {
        evolution[s] = true;
    }
    Instance::new(
        grid,
        nodes,
        edges,
        helicopters,
        trajectories,
        evolution,
        ObjectiveWeights::default(),
    )
}

/// Contiguous groups whose sizes differ by at most one, larger groups first.
fn balanced_group(a: usize, n: usize, groups: usize) -> usize {
    let base = n / groups;
    let extra = n % groups;
    let big = extra * (base + 1);
    if a < big {
        a / (base + 1)
    } else {
        extra + (a - big) / base.max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{format, validate_instance};

    #[test]
    fn groups_are_balanced() {
        let g: Vec<usize> = (0..10).map(|a| balanced_group(a, 10, 3)).collect();
        assert_eq!(g, vec![0, 0, 0, 0, 1, 1, 1, 2, 2, 2]);
        let g: Vec<usize> = (0..2).map(|a| balanced_group(a, 2, 2)).collect();
        assert_eq!(g, vec![0, 1]);
    }

    #[test]
    fn s1_shape_and_validity() {
        let inst = generate_instance(&FamilySpec::small(1));
        assert_eq!(inst.horizon(), 24);
        assert_eq!((inst.fires().len(), inst.waters().len(), inst.bases().len()), (3, 5, 5));
        assert!(validate_instance(&inst).iter().all(|d| !d.is_error()));
    }

    #[test]
    fn deterministic_bytes() {
        let spec = FamilySpec::medium(7);
        let a = format::instance_to_json(&generate_instance(&spec));
        let b = format::instance_to_json(&generate_instance(&spec));
        assert_eq!(a, b);
    }

    #[test]
    fn evolutions_match_efficiency_changes() {
        let inst = generate_instance(&FamilySpec::medium(13));
        assert_eq!(inst.evolution.iter().filter(|&&e| e).count(), 5);
        assert!(validate_instance(&inst).is_empty());
    }
}
