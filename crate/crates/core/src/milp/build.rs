use super::{MilpModel, Row, Sense, VarId, VarKind};
use crate::feasibility::{ConstraintRef, RowIndex, RowKey};
use crate::model::{HeliIdx, Instance, NodeIdx, NodeKind, Partition, TrajIdx};
use crate::objective::normalizers;
use crate::{Error, Result};

/// Nonzero budget of [`build_milp`].
pub const DEFAULT_NONZERO_LIMIT: usize = 50_000_000;

pub fn build_milp(instance: &Instance) -> Result<MilpModel> {
    build_milp_with_limit(instance, DEFAULT_NONZERO_LIMIT)
}

/// Builds every variable and row of the model. Fails with
/// [`Error::ModelTooLarge`] once the row nonzeros exceed `limit`.
pub fn build_milp_with_limit(instance: &Instance, limit: usize) -> Result<MilpModel> {
    let mut b = Builder::new(instance, limit);
    b.variables();
    b.rows()?;
    b.objective();
    Ok(b.model)
}

struct Builder<'a> {
    inst: &'a Instance,
    model: MilpModel,
    limit: usize,
    nonzeros: usize,
    horizon: usize,
    helis: usize,
    y: Vec<VarId>,
    x: Vec<VarId>,
    event: Vec<Option<VarId>>,
    r: Vec<Option<VarId>>,
    cw: Vec<VarId>,
    aux: Vec<VarId>,
    h1: Vec<VarId>,
    faux: Vec<VarId>,
    cnta: Vec<Option<VarId>>,
    ca: Vec<Option<VarId>>,
    z: Vec<VarId>,
    cntv: Vec<VarId>,
}

impl<'a> Builder<'a> {
    fn new(inst: &'a Instance, limit: usize) -> Self {
        let mut model = MilpModel::default();
        model.notes = vec![
            "rest rows use e(t-1) for the rest-end indicator of the previous interval".into(),
            "rest rows require min(mr, |T|-t+1) intervals so final rests may be cut by the horizon".into(),
            "initial rest rows apply at the helicopter's start position".into(),
            "water drawn is charged once per completed load (ec), not per interval of presence".into(),
            "trajectory rows c34c and c34i bound water and wildfire associations separately".into(),
            "objective pad term uses faux at the last interval".into(),
        ];
        Self {
            inst,
            model,
            limit,
            nonzeros: 0,
            horizon: inst.horizon(),
            helis: inst.helicopters.len(),
            y: Vec::new(),
            x: Vec::new(),
            event: Vec::new(),
            r: Vec::new(),
            cw: Vec::new(),
            aux: Vec::new(),
            h1: Vec::new(),
            faux: Vec::new(),
            cnta: Vec::new(),
            ca: Vec::new(),
            z: Vec::new(),
            cntv: Vec::new(),
        }
    }

    // 0-based t everywhere below; names carry t + 1.
    fn y(&self, i: NodeIdx, a: usize, t: usize) -> VarId {
        self.y[(i.0 * self.helis + a) * self.horizon + t]
    }
    fn x(&self, e: usize, a: usize, t: usize) -> VarId {
        self.x[(e * self.helis + a) * self.horizon + t]
    }
    /// `e`, `ec` or `ed`, depending on the node's partition.
    fn ev(&self, i: NodeIdx, a: usize, t: usize) -> VarId {
        self.event[(i.0 * self.helis + a) * self.horizon + t].expect("event variable")
    }
    fn r(&self, i: NodeIdx, w: usize, t: usize) -> VarId {
        self.r[(i.0 * self.inst.trajectories.len() + w) * self.horizon + t].expect("r variable")
    }
    fn cw(&self, w: usize, t: usize) -> VarId {
        self.cw[w * self.horizon + t]
    }
    fn aux(&self, w: usize, t: usize) -> VarId {
        self.aux[w * self.horizon + t]
    }
    fn faux(&self, a: usize, t: usize) -> VarId {
        self.faux[a * self.horizon + t]
    }
    fn z(&self, a: usize, t: usize) -> VarId {
        self.z[a * self.horizon + t]
    }
    fn cntv(&self, a: usize, t: usize) -> VarId {
        self.cntv[a * self.horizon + t]
    }
    fn cnta(&self, i: NodeIdx, t: usize) -> VarId {
        self.cnta[i.0 * self.horizon + t].expect("cnta variable")
    }
    fn ca(&self, i: NodeIdx, t: usize) -> VarId {
        self.ca[i.0 * self.horizon + t].expect("ca variable")
    }

    fn variables(&mut self) {
        let inst = self.inst;
        let (n, h, horizon, n_w) = (inst.nodes.len(), self.helis, self.horizon, inst.trajectories.len());
        for i in 0..n {
            for a in 0..h {
                for t in 0..horizon {
                    let id = self.model.add_var(format!("y_{i}_{a}_{}", t + 1), VarKind::Binary);
                    self.y.push(id);
                }
            }
        }
        for (e, edge) in inst.edges.iter().enumerate() {
            let _ = e;
            for a in 0..h {
                for t in 0..horizon {
                    let name = format!("x_{}_{}_{a}_{}", edge.from.0, edge.to.0, t + 1);
                    let id = self.model.add_var(name, VarKind::Binary);
                    self.x.push(id);
                }
            }
        }
        for i in 0..n {
            let prefix = match inst.partition(NodeIdx(i)) {
                Partition::Base => Some("e"),
                Partition::Water => Some("ec"),
                Partition::Wildfire => Some("ed"),
                Partition::Start => None,
            };
            for a in 0..h {
                for t in 0..horizon {
                    let id = prefix.map(|p| self.model.add_var(format!("{p}_{i}_{a}_{}", t + 1), VarKind::Binary));
                    self.event.push(id);
                }
            }
        }
        for i in 0..n {
            let service = inst.is_service(NodeIdx(i));
            for w in 0..n_w {
                for t in 0..horizon {
                    let id = service.then(|| self.model.add_var(format!("r_{i}_{w}_{}", t + 1), VarKind::Binary));
                    self.r.push(id);
                }
            }
        }
        for w in 0..n_w {
            for t in 0..horizon {
                let id = self.model.add_var(format!("cw_{w}_{}", t + 1), VarKind::Binary);
                self.cw.push(id);
            }
        }
        for w in 0..n_w {
            for t in 0..horizon {
                let id = self.model.add_var(format!("aux_{w}_{}", t + 1), VarKind::Binary);
                self.aux.push(id);
            }
        }
        for t in 0..horizon {
            let id = self.model.add_var(format!("h1_{}", t + 1), VarKind::NonNegative);
            self.h1.push(id);
        }
        for a in 0..h {
            for t in 0..horizon {
                let id = self.model.add_var(format!("faux_{a}_{}", t + 1), VarKind::NonNegative);
                self.faux.push(id);
            }
        }
        for i in 0..n {
            let water = inst.is_water(NodeIdx(i));
            for t in 0..horizon {
                let id = water.then(|| self.model.add_var(format!("cnta_{i}_{}", t + 1), VarKind::Free));
                self.cnta.push(id);
            }
        }
        for i in 0..n {
            let water = inst.is_water(NodeIdx(i));
            for t in 0..horizon {
                let id = water.then(|| self.model.add_var(format!("ca_{i}_{}", t + 1), VarKind::Free));
                self.ca.push(id);
            }
        }
        for a in 0..h {
            for t in 0..horizon {
                let id = self.model.add_var(format!("z_{a}_{}", t + 1), VarKind::Free);
                self.z.push(id);
            }
        }
        for a in 0..h {
            for t in 0..horizon {
                let id = self.model.add_var(format!("cntv_{a}_{}", t + 1), VarKind::Free);
                self.cntv.push(id);
            }
        }
    }

    fn push(&mut self, key: RowKey, terms: Vec<(VarId, f64)>, sense: Sense, rhs: f64) -> Result<()> {
        let mut terms = terms;
        terms.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
        for (v, c) in terms {
            match merged.last_mut() {
                Some((pv, pc)) if *pv == v => *pc += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        self.nonzeros += merged.len();
        if self.nonzeros > self.limit {
            return Err(Error::ModelTooLarge {
                variables: self.model.variables.len(),
                rows: self.model.rows.len() + 1,
                nonzeros: self.nonzeros,
                limit: self.limit,
            });
        }
        self.model.rows.push(Row {
            key,
            terms: merged,
            sense,
            rhs,
        });
        Ok(())
    }

    fn m(&mut self, n: u8, idx: RowIndex, terms: Vec<(VarId, f64)>, sense: Sense, rhs: f64) -> Result<()> {
        self.push(RowKey::new(ConstraintRef::Model(n), idx), terms, sense, rhs)
    }

    fn aux_row(&mut self, n: u8, idx: RowIndex, terms: Vec<(VarId, f64)>, rhs: f64) -> Result<()> {
        self.push(RowKey::new(ConstraintRef::Aux(n), idx), terms, Sense::Eq, rhs)
    }

    /// Flying and service-node terms of helicopter `a` at `t`.
    fn activity_terms(&self, a: usize, t: usize) -> Vec<(VarId, f64)> {
        let inst = self.inst;
        let mut terms: Vec<(VarId, f64)> = (0..inst.edges.len()).map(|e| (self.x(e, a, t), 1.0)).collect();
        for i in inst.node_ids().filter(|&i| inst.is_service(i)) {
            terms.push((self.y(i, a, t), 1.0));
        }
        terms
    }

    fn rows(&mut self) -> Result<()> {
        let inst = self.inst;
        let horizon = self.horizon;
        let last = horizon - 1;
        let h = self.helis;
        let ix = RowIndex::default;
        let services: Vec<NodeIdx> = inst.node_ids().filter(|&i| inst.is_service(i)).collect();

        // 1 to 4
        for t in 0..horizon {
            for &i in inst.bases() {
                let NodeKind::RestBase { capacity } = inst.node(i).kind else { unreachable!() };
                let terms = (0..h).map(|a| (self.y(i, a, t), 1.0)).collect();
                self.m(1, ix().i(i.0).t(t + 1), terms, Sense::Le, f64::from(capacity))?;
            }
            for &i in inst.waters() {
                let NodeKind::WaterPoint {
                    capacity_liters,
                    simultaneous,
                } = inst.node(i).kind
                else {
                    unreachable!()
                };
                let terms = (0..h).map(|a| (self.y(i, a, t), 1.0)).collect();
                self.m(2, ix().i(i.0).t(t + 1), terms, Sense::Le, f64::from(simultaneous))?;
                let mut terms: Vec<_> = (0..h)
                    .map(|a| (self.y(i, a, t), inst.helicopters[a].water_capacity))
                    .collect();
                if t == 0 {
                    self.m(4, ix().i(i.0), terms, Sense::Le, capacity_liters)?;
                } else {
                    terms.push((self.ca(i, t), -1.0));
                    self.m(3, ix().i(i.0).t(t + 1), terms, Sense::Le, 0.0)?;
                }
            }
        }

        // 5 and 6
        for t in 0..horizon {
            for a in 0..h {
                for &i in inst.fires() {
                    let terms = vec![(self.y(i, a, t), 1.0), (self.z(a, t), -1.0)];
                    self.m(5, ix().i(i.0).a(a).t(t + 1), terms, Sense::Le, 0.0)?;
                }
                for &i in inst.waters() {
                    let terms = vec![(self.y(i, a, t), 1.0), (self.z(a, t), 1.0)];
                    self.m(6, ix().i(i.0).a(a).t(t + 1), terms, Sense::Le, 1.0)?;
                }
            }
        }

        // 7 to 9
        for &i in &services {
            for a in 0..h {
                let alpha = inst.service_time(i, HeliIdx(a)) as usize;
                for t in 1..horizon {
                    let arrive = [(self.y(i, a, t), 1.0), (self.y(i, a, t - 1), -1.0)];
                    if alpha > 1 {
                        for l in t + 1..=last.min(t + alpha - 1) {
                            let mut terms = arrive.to_vec();
                            terms.push((self.y(i, a, l), -1.0));
                            self.m(7, ix().i(i.0).a(a).t(t + 1).l(l + 1), terms, Sense::Le, 0.0)?;
                        }
                    }
                    let mut terms = arrive.to_vec();
                    terms.push((self.ev(i, a, last.min(t + alpha)), -1.0));
                    let n = if inst.is_fire(i) { 8 } else { 9 };
                    self.m(n, ix().i(i.0).a(a).t(t + 1), terms, Sense::Le, 0.0)?;
                }
            }
        }

        // 10 to 18
        for i in inst.node_ids() {
            let (first, part) = match inst.partition(i) {
                Partition::Base => (10, Partition::Base),
                Partition::Water => (13, Partition::Water),
                Partition::Wildfire => (16, Partition::Wildfire),
                Partition::Start => continue,
            };
            for a in 0..h {
                for t in 0..horizon {
                    let idx = ix().i(i.0).a(a).t(t + 1);
                    if part == Partition::Base {
                        if t > 0 {
                            let terms = vec![(self.y(i, a, t - 1), 1.0), (self.y(i, a, t), -1.0), (self.ev(i, a, t - 1), -1.0)];
                            self.m(10, idx, terms, Sense::Le, 0.0)?;
                        }
                        let terms = vec![(self.ev(i, a, t), 1.0), (self.y(i, a, t), -1.0)];
                        self.m(11, idx, terms, Sense::Le, 0.0)?;
                        if t > 0 {
                            let terms = vec![(self.y(i, a, t), 1.0), (self.ev(i, a, t - 1), 1.0)];
                            self.m(12, idx, terms, Sense::Le, 1.0)?;
                        }
                    } else if t > 0 {
                        let terms = vec![(self.y(i, a, t - 1), 1.0), (self.y(i, a, t), -1.0), (self.ev(i, a, t), -1.0)];
                        self.m(first, idx, terms, Sense::Le, 0.0)?;
                        let terms = vec![(self.ev(i, a, t), 1.0), (self.y(i, a, t - 1), -1.0)];
                        self.m(first + 1, idx, terms, Sense::Le, 0.0)?;
                        let terms = vec![(self.y(i, a, t), 1.0), (self.ev(i, a, t), 1.0)];
                        self.m(first + 2, idx, terms, Sense::Le, 1.0)?;
                    }
                }
            }
        }

        // 19 to 23
        for a in 0..h {
            let heli = &inst.helicopters[a];
            let terms: Vec<_> = (0..horizon).flat_map(|t| self.activity_terms(a, t)).collect();
            let rhs = f64::from(heli.max_total_flight) - f64::from(heli.total_flight);
            self.m(19, ix().a(a), terms, Sense::Le, rhs)?;
            for t in 0..horizon {
                let mcf = f64::from(heli.max_consecutive_flight);
                self.m(20, ix().a(a).t(t + 1), vec![(self.cntv(a, t), 1.0)], Sense::Le, mcf)?;
                self.m(21, ix().a(a).t(t + 1), vec![(self.cntv(a, t), 1.0)], Sense::Ge, 0.0)?;
            }
            let mr = heli.min_rest as usize;
            for &i in inst.bases() {
                for t in 1..horizon {
                    let len = mr.min(horizon - t);
                    let lf = len as f64;
                    let mut terms: Vec<_> = (t..t + len).map(|l| (self.y(i, a, l), 1.0)).collect();
                    terms.push((self.y(i, a, t), -lf));
                    terms.push((self.y(i, a, t - 1), lf));
                    terms.push((self.ev(i, a, t - 1), -lf));
                    self.m(22, ix().i(i.0).a(a).t(t + 1), terms, Sense::Ge, 0.0)?;
                }
            }
            let (mr, ri) = (heli.min_rest, heli.consecutive_rest);
            if mr > ri && ri > 0 {
                let need = (mr - ri) as usize;
                let terms = (0..need.min(horizon)).map(|l| (self.y(heli.start, a, l), 1.0)).collect();
                self.m(23, ix().i(heli.start.0).a(a), terms, Sense::Ge, need as f64)?;
            }
        }

        // 24 and 25
        for a in 0..h {
            let terms = inst.bases().iter().map(|&i| (self.y(i, a, last), 1.0)).collect();
            self.m(24, ix().a(a), terms, Sense::Ge, 1.0)?;
            let start = inst.helicopters[a].start;
            self.m(25, ix().a(a), vec![(self.y(start, a, 0), 1.0)], Sense::Eq, 1.0)?;
        }

        // 26, 27 and 30
        for (e, edge) in inst.edges.iter().enumerate() {
            for a in 0..h {
                let lambda = inst.flight_time(crate::model::EdgeIdx(e), HeliIdx(a)) as usize;
                for t in 1..horizon {
                    let idx = ix().i(edge.from.0).j(edge.to.0).a(a).t(t + 1);
                    let start = [(self.x(e, a, t), 1.0), (self.x(e, a, t - 1), -1.0)];
                    let terms = vec![(self.y(edge.to, a, last.min(t + lambda)), 1.0), (start[0].0, -1.0), (start[1].0, 1.0)];
                    self.m(26, idx, terms, Sense::Ge, 0.0)?;
                    let mut terms = start.to_vec();
                    terms.push((self.y(edge.from, a, t - 1), -1.0));
                    self.m(27, idx, terms, Sense::Le, 0.0)?;
                    for l in t..=last.min(t + lambda - 1) {
                        let mut terms = start.to_vec();
                        terms.push((self.x(e, a, l), -1.0));
                        self.m(30, idx.l(l + 1), terms, Sense::Le, 0.0)?;
                    }
                }
            }
        }

        // 28 and 29
        for j in inst.node_ids() {
            let into: Vec<usize> = inst.in_edges(j).iter().map(|e| e.0).collect();
            let out: Vec<usize> = inst.out_edges(j).iter().map(|e| e.0).collect();
            for a in 0..h {
                if inst.partition(j) != Partition::Start {
                    for t in 1..horizon {
                        let mut terms = vec![(self.y(j, a, t), 1.0), (self.y(j, a, t - 1), -1.0)];
                        terms.extend(into.iter().map(|&e| (self.x(e, a, t - 1), -1.0)));
                        self.m(28, ix().i(j.0).a(a).t(t + 1), terms, Sense::Le, 0.0)?;
                    }
                }
                for t in 0..last {
                    let mut terms = vec![(self.y(j, a, t), 1.0), (self.y(j, a, t + 1), -1.0)];
                    terms.extend(out.iter().map(|&e| (self.x(e, a, t + 1), -1.0)));
                    self.m(29, ix().i(j.0).a(a).t(t + 1), terms, Sense::Le, 0.0)?;
                }
            }
        }

        // 31 and 32
        for j in inst.node_ids() {
            let n = match inst.partition(j) {
                Partition::Water | Partition::Wildfire => 31,
                Partition::Base => 32,
                Partition::Start => continue,
            };
            let into: Vec<usize> = inst.in_edges(j).iter().map(|e| e.0).collect();
            let out: Vec<usize> = inst.out_edges(j).iter().map(|e| e.0).collect();
            for a in 0..h {
                for t in 0..horizon {
                    let mut terms: Vec<_> = into.iter().map(|&e| (self.x(e, a, t), 1.0)).collect();
                    for &e in &out {
                        terms.extend((t + 1..horizon).map(|l| (self.x(e, a, l), -1.0)));
                    }
                    if n == 32 {
                        terms.push((self.y(j, a, last), -1.0));
                    }
                    self.m(n, ix().i(j.0).a(a).t(t + 1), terms, Sense::Le, 0.0)?;
                }
            }
        }

        // 33
        for a in 0..h {
            for t in 0..horizon {
                let mut terms: Vec<_> = inst.node_ids().map(|i| (self.y(i, a, t), 1.0)).collect();
                terms.extend((0..inst.edges.len()).map(|e| (self.x(e, a, t), 1.0)));
                self.m(33, ix().a(a).t(t + 1), terms, Sense::Le, 1.0)?;
            }
        }

        // 34 to 41
        let n_w = inst.trajectories.len();
        for w in 0..n_w {
            for t in 0..horizon {
                for (part, nodes) in [('c', inst.waters()), ('i', inst.fires())] {
                    let terms = nodes.iter().map(|&i| (self.r(i, w, t), 1.0)).collect();
                    self.m(34, ix().w(w).t(t + 1).part(part), terms, Sense::Le, 1.0)?;
                }
            }
            for &i in &services {
                for t in 1..horizon {
                    let idx = ix().i(i.0).w(w).t(t + 1);
                    let terms = vec![(self.r(i, w, t - 1), 1.0), (self.r(i, w, t), -1.0), (self.cw(w, t), -1.0)];
                    self.m(35, idx, terms, Sense::Le, 0.0)?;
                    let terms = vec![(self.aux(w, t), 1.0), (self.r(i, w, t), -1.0), (self.r(i, w, t - 1), 1.0)];
                    self.m(36, idx, terms, Sense::Ge, 0.0)?;
                }
            }
            for t in 1..horizon {
                let idx = ix().w(w).t(t + 1);
                let ev = f64::from(u8::from(inst.evolves_at(t)));
                let terms = vec![(self.cw(w, t), 1.0), (self.cw(w, t - 1), -1.0), (self.aux(w, t - 1), 1.0)];
                self.m(37, idx, terms.clone(), Sense::Le, ev)?;
                self.m(38, idx, terms, Sense::Ge, 0.0)?;
                self.m(39, idx, vec![(self.cw(w, t), 1.0)], Sense::Ge, ev)?;
            }
            let members: Vec<usize> = inst.members(TrajIdx(w)).iter().map(|a| a.0).collect();
            for &i in &services {
                for t in 0..horizon {
                    let terms = members.iter().map(|&a| (self.y(i, a, t), 1.0)).collect();
                    self.m(40, ix().i(i.0).w(w).t(t + 1), terms, Sense::Le, 1.0)?;
                    for &a in &members {
                        let terms = vec![(self.y(i, a, t), 1.0), (self.r(i, w, t), -1.0)];
                        self.m(41, ix().i(i.0).w(w).a(a).t(t + 1), terms, Sense::Le, 0.0)?;
                    }
                }
            }
        }

        // 42 and 43
        for t in 1..last {
            let mut terms: Vec<_> = (0..h).flat_map(|a| self.activity_terms(a, t)).collect();
            terms.push((self.h1[t], 1.0));
            self.m(42, ix().t(t + 1), terms, Sense::Ge, 1.0)?;
        }
        for a in 0..h {
            for t in 1..horizon {
                let terms = vec![(self.faux(a, t), 1.0), (self.faux(a, t - 1), -1.0)];
                self.m(43, ix().a(a).t(t + 1), terms, Sense::Ge, 0.0)?;
            }
        }

        // 44 to 48
        for i in inst.node_ids() {
            let n = match inst.partition(i) {
                Partition::Base => 44,
                Partition::Water => 45,
                Partition::Wildfire => 46,
                Partition::Start => continue,
            };
            for a in 0..h {
                self.m(n, ix().i(i.0).a(a), vec![(self.ev(i, a, 0), 1.0)], Sense::Eq, 0.0)?;
            }
        }
        for w in 0..n_w {
            self.m(47, ix().w(w), vec![(self.aux(w, 0), 1.0)], Sense::Eq, 0.0)?;
            self.m(48, ix().w(w), vec![(self.cw(w, 0), 1.0)], Sense::Eq, 0.0)?;
        }

        // Defining equalities of cnta, ca, z and cntv.
        for &i in inst.waters() {
            let NodeKind::WaterPoint { capacity_liters, .. } = inst.node(i).kind else { unreachable!() };
            for t in 0..horizon {
                let mut terms = vec![(self.cnta(i, t), 1.0)];
                if t > 0 {
                    terms.push((self.cnta(i, t - 1), -1.0));
                }
                terms.extend((0..h).map(|a| (self.ev(i, a, t), -inst.helicopters[a].water_capacity)));
                self.aux_row(1, ix().i(i.0).t(t + 1), terms, 0.0)?;
                if t > 0 {
                    let terms = vec![(self.ca(i, t), 1.0), (self.cnta(i, t - 1), 1.0)];
                    self.aux_row(2, ix().i(i.0).t(t + 1), terms, capacity_liters)?;
                }
            }
            self.aux_row(3, ix().i(i.0), vec![(self.ca(i, 0), 1.0)], capacity_liters)?;
        }
        for a in 0..h {
            let heli = &inst.helicopters[a];
            for t in 1..horizon {
                let mut terms = vec![(self.z(a, t), 1.0), (self.z(a, t - 1), -1.0)];
                terms.extend(inst.waters().iter().map(|&i| (self.ev(i, a, t), -1.0)));
                terms.extend(inst.fires().iter().map(|&i| (self.ev(i, a, t), 1.0)));
                self.aux_row(4, ix().a(a).t(t + 1), terms, 0.0)?;
            }
            let wli = f64::from(u8::from(heli.initially_loaded));
            self.aux_row(5, ix().a(a), vec![(self.z(a, 0), 1.0)], wli)?;
            let mcf = f64::from(heli.max_consecutive_flight);
            for t in 0..horizon {
                let mut terms: Vec<_> = self.activity_terms(a, t).into_iter().map(|(v, c)| (v, -c)).collect();
                terms.push((self.cntv(a, t), 1.0));
                terms.push((self.faux(a, t), -1.0));
                terms.extend(inst.bases().iter().map(|&i| (self.ev(i, a, t), mcf)));
                let rhs = if t == 0 {
                    f64::from(heli.consecutive_flight)
                } else {
                    terms.push((self.cntv(a, t - 1), -1.0));
                    terms.push((self.faux(a, t - 1), 1.0));
                    0.0
                };
                self.aux_row(6, ix().a(a).t(t + 1), terms, rhs)?;
            }
        }
        Ok(())
    }

    fn objective(&mut self) {
        let inst = self.inst;
        let w = &inst.weights;
        let n = normalizers(inst);
        let mut obj: Vec<(VarId, f64)> = Vec::new();
        for a in 0..self.helis {
            let wc = inst.helicopters[a].water_capacity;
            for t in 0..self.horizon {
                for &i in inst.fires() {
                    let c = inst.efficiency(i, t) * wc / n.ub1;
                    if c != 0.0 {
                        obj.push((self.y(i, a, t), c));
                    }
                }
                for e in 0..inst.edges.len() {
                    obj.push((self.x(e, a, t), -w.mu2 / n.ub2));
                }
                for i in inst.node_ids().filter(|&i| inst.is_service(i)) {
                    obj.push((self.y(i, a, t), -w.mu3 / n.ub3));
                }
            }
        }
        for wi in 0..inst.trajectories.len() {
            for t in 0..self.horizon {
                obj.push((self.aux(wi, t), -w.mu4 / n.ub4));
            }
        }
        for t in 0..self.horizon {
            obj.push((self.h1[t], -w.mu5));
        }
        for a in 0..self.helis {
            obj.push((self.faux(a, self.horizon - 1), -w.mu6));
        }
        obj.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(obj.len());
        for (v, c) in obj {
            match merged.last_mut() {
                Some((pv, pc)) if *pv == v => *pc += c,
                _ => merged.push((v, c)),
            }
        }
        self.model.objective = merged;
    }
}
