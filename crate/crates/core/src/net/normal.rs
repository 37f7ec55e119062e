//! Normal forms modulo the monoid, comonoid and ν/w equations, and the
//! canonical expansion back to a net with structural cells.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::switching::{Contraction, SwitchGraph};
use super::{all_ports, port_info, GenericNet, NetError, PortRef, Site, Wire};
use crate::formula::{Dir, Formula, Leaf, Polarity, Sort};
use crate::theory::{control_operation, OpKind, SmcOperation, StructuralKind};

/// A net over logical and ν cells only. `t_link` sends each negative `t`
/// port to the positive `t` port it feeds; `v_link` sends each positive
/// `v` port to the negative `v` port producing it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalNet {
    pub dom: Formula,
    pub cod: Formula,
    pub cells: Vec<SmcOperation>,
    pub t_link: BTreeMap<PortRef, PortRef>,
    pub v_link: BTreeMap<PortRef, PortRef>,
}

/// Default bound on the number of partial I assignments tried by `expand`.
pub const DEFAULT_EXPAND_CAP: usize = 200_000;

fn check_operation(op: &SmcOperation) -> Result<(), NetError> {
    let expected = match &op.kind {
        OpKind::Structural(k) => k.operation(),
        OpKind::Logical(c) => control_operation(c),
    };
    if *op != expected {
        return Err(NetError::NonTKOperation(op.name.clone()));
    }
    Ok(())
}

impl NormalNet {
    pub fn ports(&self) -> Vec<(PortRef, Leaf, Polarity)> {
        all_ports(&self.dom, &self.cells, &self.cod)
    }

    /// Producers with the consumers they feed, in port order.
    pub fn fans(&self) -> BTreeMap<PortRef, Vec<PortRef>> {
        let mut fans: BTreeMap<PortRef, Vec<PortRef>> = BTreeMap::new();
        for (p, leaf, pol) in self.ports() {
            if leaf == Leaf::Atom(Sort::V) && pol == Polarity::Negative {
                fans.entry(p).or_default();
            }
        }
        for (c, p) in &self.v_link {
            fans.entry(p.clone()).or_default().push(c.clone());
        }
        fans
    }

    pub fn validate(&self) -> Result<(), NetError> {
        let bad = |m: String| Err(NetError::MalformedNormal(m));
        for (i, c) in self.cells.iter().enumerate() {
            check_operation(c)?;
            if !c.is_kept_in_normal_form() {
                return bad(format!("cell {i} ({}) is structural", c.name));
            }
        }
        let mut t_sources = BTreeSet::new();
        let mut v_consumers = BTreeSet::new();
        for (p, leaf, pol) in self.ports() {
            match (leaf, pol) {
                (Leaf::Atom(Sort::T), Polarity::Negative) => {
                    t_sources.insert(p);
                }
                (Leaf::Atom(Sort::V), Polarity::Positive) => {
                    v_consumers.insert(p);
                }
                _ => {}
            }
        }
        let info = |p: &PortRef| port_info(&self.dom, &self.cells, &self.cod, p);
        if self.t_link.keys().cloned().collect::<BTreeSet<_>>() != t_sources {
            return bad("t links must cover exactly the negative t ports".into());
        }
        for (s, t) in &self.t_link {
            let i = info(t)?;
            if i.leaf != Leaf::Atom(Sort::T) || i.polarity != Polarity::Positive {
                return bad(format!("t link {s} -> {t} does not end at a positive t port"));
            }
        }
        if self.v_link.keys().cloned().collect::<BTreeSet<_>>() != v_consumers {
            return bad("v links must cover exactly the positive v ports".into());
        }
        for (c, p) in &self.v_link {
            let i = info(p)?;
            if i.leaf != Leaf::Atom(Sort::V) || i.polarity != Polarity::Negative {
                return bad(format!("v link {c} -> {p} does not name a negative v port"));
            }
        }
        for (i, c) in self.cells.iter().enumerate() {
            let out = PortRef::new(Site::CellCod(i), &[]);
            if c.is_nu() && !self.v_link.values().any(|p| *p == out) {
                return bad(format!("nu cell {i} feeds nothing"));
            }
        }
        Ok(())
    }

    /// Reorders cells; `order[k]` is the old index of the new cell `k`.
    pub fn permute(&self, order: &[usize]) -> NormalNet {
        let mut new_of = vec![0; order.len()];
        for (k, &old) in order.iter().enumerate() {
            new_of[old] = k;
        }
        let m = |p: &PortRef| p.map_cell(|i| new_of[i]);
        NormalNet {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            cells: order.iter().map(|&i| self.cells[i].clone()).collect(),
            t_link: self.t_link.iter().map(|(a, b)| (m(a), m(b))).collect(),
            v_link: self.v_link.iter().map(|(a, b)| (m(a), m(b))).collect(),
        }
    }
}

fn structural_of(net: &GenericNet, p: &PortRef) -> Option<StructuralKind> {
    p.site.cell().and_then(|i| net.cells[i].structural())
}

/// Contracts `|` and `0`, collapses `c`/`w` trees, deletes idle ν cells and
/// forgets I wiring.
pub fn normalize(net: &GenericNet) -> Result<NormalNet, NetError> {
    for c in &net.cells {
        check_operation(c)?;
    }
    net.validate_shape()?;
    let out: HashMap<&PortRef, &PortRef> = net.wires.iter().map(|w| (&w.source, &w.target)).collect();
    let mut into: HashMap<&PortRef, &PortRef> = HashMap::new();
    for w in &net.wires {
        if net.port(&w.source)?.leaf == Leaf::Atom(Sort::V) {
            into.insert(&w.target, &w.source);
        }
    }
    let limit = net.wires.len() + 1;
    let mut t_link = BTreeMap::new();
    let mut v_link = BTreeMap::new();
    for (p, leaf, pol) in net.ports() {
        let kind = structural_of(net, &p);
        match (leaf, pol) {
            (Leaf::Atom(Sort::T), Polarity::Negative) if !matches!(kind, Some(StructuralKind::Par | StructuralKind::Zero)) => {
                let mut at = out[&p];
                let mut steps = 0;
                while let (Some(StructuralKind::Par), Site::CellDom(i)) = (structural_of(net, at), at.site) {
                    at = out[&PortRef::new(Site::CellCod(i), &[])];
                    steps += 1;
                    if steps > limit {
                        return Err(NetError::CorrectnessViolation);
                    }
                }
                t_link.insert(p, at.clone());
            }
            (Leaf::Atom(Sort::V), Polarity::Positive) if !matches!(kind, Some(StructuralKind::Contract | StructuralKind::Weaken)) => {
                let mut at = into[&p];
                let mut steps = 0;
                while let (Some(StructuralKind::Contract), Site::CellCod(i)) = (structural_of(net, at), at.site) {
                    at = into[&PortRef::new(Site::CellDom(i), &[])];
                    steps += 1;
                    if steps > limit {
                        return Err(NetError::CorrectnessViolation);
                    }
                }
                v_link.insert(p, at.clone());
            }
            _ => {}
        }
    }
    let fed: BTreeSet<&PortRef> = v_link.values().collect();
    let mut new_index = vec![usize::MAX; net.cells.len()];
    let mut cells = Vec::new();
    for (i, c) in net.cells.iter().enumerate() {
        let keep = match c.kind {
            OpKind::Logical(_) => true,
            OpKind::Structural(StructuralKind::Nu) => fed.contains(&PortRef::new(Site::CellCod(i), &[])),
            OpKind::Structural(_) => false,
        };
        if keep {
            new_index[i] = cells.len();
            cells.push(c.clone());
        }
    }
    let m = |p: &PortRef| p.map_cell(|i| new_index[i]);
    Ok(NormalNet {
        dom: net.dom.clone(),
        cod: net.cod.clone(),
        cells,
        t_link: t_link.iter().map(|(a, b)| (m(a), m(b))).collect(),
        v_link: v_link.iter().map(|(a, b)| (m(a), m(b))).collect(),
    })
}

struct Builder {
    cells: Vec<SmcOperation>,
    wires: BTreeSet<Wire>,
}

impl Builder {
    fn add(&mut self, k: StructuralKind) -> usize {
        self.cells.push(k.operation());
        self.cells.len() - 1
    }

    fn wire(&mut self, s: PortRef, t: PortRef) {
        self.wires.insert(Wire::new(s, t));
    }
}

fn cod(i: usize, path: &[Dir]) -> PortRef {
    PortRef::new(Site::CellCod(i), path)
}

fn dom(i: usize, path: &[Dir]) -> PortRef {
    PortRef::new(Site::CellDom(i), path)
}

/// Rebuilds a net with explicit structural cells. Trees are left combs in
/// port order; I ports get canonical targets chosen so that the result is
/// correct whenever the normal net is.
pub fn expand(m: &NormalNet) -> Result<GenericNet, NetError> {
    expand_with_cap(m, DEFAULT_EXPAND_CAP)
}

pub fn expand_with_cap(m: &NormalNet, cap: usize) -> Result<GenericNet, NetError> {
    m.validate()?;
    let mut b = Builder { cells: m.cells.clone(), wires: BTreeSet::new() };
    let mut w_producer: HashMap<usize, PortRef> = HashMap::new();

    let mut feeders: BTreeMap<PortRef, Vec<PortRef>> = BTreeMap::new();
    for (p, leaf, pol) in m.ports() {
        if leaf == Leaf::Atom(Sort::T) && pol == Polarity::Positive {
            feeders.entry(p).or_default();
        }
    }
    for (s, t) in &m.t_link {
        feeders.entry(t.clone()).or_default().push(s.clone());
    }
    for (target, sources) in feeders {
        match sources.as_slice() {
            [] => {
                let z = b.add(StructuralKind::Zero);
                b.wire(cod(z, &[]), target);
            }
            [one] => b.wire(one.clone(), target),
            [first, rest @ ..] => {
                let mut acc = first.clone();
                for s in rest {
                    let p = b.add(StructuralKind::Par);
                    b.wire(acc, dom(p, &[Dir::L]));
                    b.wire(s.clone(), dom(p, &[Dir::R]));
                    acc = cod(p, &[]);
                }
                b.wire(acc, target);
            }
        }
    }

    for (producer, consumers) in m.fans() {
        match consumers.as_slice() {
            [] => {
                let w = b.add(StructuralKind::Weaken);
                b.wire(producer.clone(), dom(w, &[]));
                w_producer.insert(w, producer);
            }
            [one] => b.wire(producer, one.clone()),
            _ => {
                // innermost contraction first, the root one takes the producer
                let k = consumers.len();
                let ids: Vec<usize> = (0..k - 1).map(|_| b.add(StructuralKind::Contract)).collect();
                b.wire(cod(ids[0], &[Dir::L]), consumers[0].clone());
                for (j, &c) in ids.iter().enumerate() {
                    b.wire(cod(c, &[Dir::R]), consumers[j + 1].clone());
                    if j > 0 {
                        b.wire(cod(c, &[Dir::L]), dom(ids[j - 1], &[]));
                    }
                }
                b.wire(producer, dom(ids[k - 2], &[]));
            }
        }
    }

    let mut net = GenericNet { dom: m.dom.clone(), cod: m.cod.clone(), cells: b.cells, wires: b.wires };
    assign_i_targets(&mut net, &w_producer, cap)?;
    Ok(net)
}

/// First positive port right of the innermost Lolli holding `p` on its left.
fn preferred_target(net: &GenericNet, whole: &Formula, by_global: &HashMap<Vec<Dir>, PortRef>, p: &PortRef) -> Option<PortRef> {
    let gp = net.global_path(p).0;
    let mut best = None;
    for k in 0..gp.len() {
        if gp[k] == Dir::L && matches!(whole.subformula(&gp[..k]), Some(Formula::Lolli(..))) {
            best = Some(k);
        }
    }
    let k = best?;
    let mut rhs = gp[..k].to_vec();
    rhs.push(Dir::R);
    let sub = whole.subformula(&rhs)?;
    sub.leaves().into_iter().find_map(|(q, _)| {
        let mut full = rhs.clone();
        full.extend_from_slice(&q.0);
        let port = by_global.get(&full)?;
        (net.global_polarity(port).ok()? == Polarity::Positive).then(|| port.clone())
    })
}

/// Candidate targets of every negative I port, best first.
pub(crate) fn i_candidates(net: &GenericNet, w_producer: &HashMap<usize, PortRef>) -> Vec<(PortRef, Vec<PortRef>)> {
    let whole = net.morphism_formula();
    let ports = net.ports();
    let by_global: HashMap<Vec<Dir>, PortRef> = ports.iter().map(|(p, ..)| (net.global_path(p).0, p.clone())).collect();
    let positive_t: Vec<&PortRef> =
        ports.iter().filter(|(_, l, pol)| *l == Leaf::Atom(Sort::T) && *pol == Polarity::Positive).map(|(p, ..)| p).collect();
    let other_positive: Vec<&PortRef> =
        ports.iter().filter(|(_, l, pol)| *l != Leaf::Atom(Sort::T) && *pol == Polarity::Positive).map(|(p, ..)| p).collect();
    let mut out = Vec::new();
    for (p, leaf, pol) in &ports {
        if *leaf != Leaf::Unit || *pol != Polarity::Negative {
            continue;
        }
        let anchor = match p.site {
            Site::CellCod(i) => w_producer.get(&i).unwrap_or(p),
            _ => p,
        };
        let mut cands: Vec<PortRef> = preferred_target(net, &whole, &by_global, anchor).into_iter().collect();
        for q in positive_t.iter().chain(other_positive.iter()) {
            if !cands.contains(q) {
                cands.push((*q).clone());
            }
        }
        out.push((p.clone(), cands));
    }
    out
}

fn assign_i_targets(net: &mut GenericNet, w_producer: &HashMap<usize, PortRef>, cap: usize) -> Result<(), NetError> {
    let plan = i_candidates(net, w_producer);
    let graph = SwitchGraph::from_net(net)?;
    let vid = |p: &PortRef| graph.vertex(p).expect("port vertex");
    let choices: Vec<(u32, Vec<u32>)> = plan.iter().map(|(e, cs)| (vid(e), cs.iter().map(vid).collect())).collect();
    let mut picked = vec![0usize; choices.len()];
    let mut budget = cap;
    let found = if graph.contraction(&[]) == Contraction::Conflict {
        false
    } else {
        search(&graph, &choices, &mut picked, &mut Vec::new(), 0, &mut budget, cap)?
    };
    if !found {
        picked.iter_mut().for_each(|c| *c = 0);
    }
    for (i, (e, cs)) in plan.into_iter().enumerate() {
        if let Some(t) = cs.into_iter().nth(picked[i]) {
            net.wires.insert(Wire::new(e, t));
        }
    }
    Ok(())
}

fn search(
    graph: &SwitchGraph,
    choices: &[(u32, Vec<u32>)],
    picked: &mut Vec<usize>,
    extra: &mut Vec<(u32, u32)>,
    depth: usize,
    budget: &mut usize,
    cap: usize,
) -> Result<bool, NetError> {
    if depth == choices.len() {
        return Ok(graph.contraction(extra) == Contraction::Point);
    }
    let (e, cs) = &choices[depth];
    for (k, &t) in cs.iter().enumerate() {
        if *budget == 0 {
            return Err(NetError::SizeLimit { what: "I target search", limit: cap as u64 });
        }
        *budget -= 1;
        extra.push((*e, t));
        let viable = depth + 1 == choices.len() || graph.contraction(extra) != Contraction::Conflict;
        if viable && search(graph, choices, picked, extra, depth + 1, budget, cap)? {
            picked[depth] = k;
            extra.pop();
            return Ok(true);
        }
        extra.pop();
    }
    Ok(false)
}
