//! Switching graphs and the two correctness checkers.
//!
//! The graph of a net has one vertex per node of the classical image of
//! the assembled morphism formula. Tensor nodes keep both child edges, a
//! par node keeps one of them per switching, and each wire adds an edge
//! between the two leaves it joins.

use std::collections::HashMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{GenericNet, NetError, PortRef};
use crate::formula::{switchings_for_pars, ClassicalFormula, Dir};
use crate::theory::SmcOperation;
use crate::unionfind::UnionFind;
use crate::formula::Formula;

/// How switching enumeration is scheduled. Results do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Default bound on the number of switchings the oracle will visit.
pub const DEFAULT_SWITCHING_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contraction {
    /// Everything collapsed to one vertex: the net is correct.
    Point,
    /// Some switching has a cycle.
    Conflict,
    /// No rule applies but the graph has not collapsed.
    Stuck,
}

#[derive(Debug, Clone)]
pub struct SwitchGraph {
    vertices: usize,
    hard: Vec<(u32, u32)>,
    pars: Vec<(u32, u32, u32)>,
    leaves: HashMap<PortRef, u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchingReport {
    pub connected: bool,
    pub acyclic: bool,
    pub vertices: usize,
    pub edges: usize,
}

/// Aggregate of every switching of one net.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleSurvey {
    pub switchings: u64,
    pub correct: u64,
    pub connected: u64,
    pub acyclic: u64,
    /// Switchings where exactly one of connected and acyclic holds.
    pub mismatched: u64,
    /// Connected switchings whose vertex count is not edges + 1.
    pub miscounted: u64,
}

impl OracleSurvey {
    pub fn all_correct(&self) -> bool {
        self.correct == self.switchings
    }

    fn merge(mut self, o: OracleSurvey) -> OracleSurvey {
        self.switchings += o.switchings;
        self.correct += o.correct;
        self.connected += o.connected;
        self.acyclic += o.acyclic;
        self.mismatched += o.mismatched;
        self.miscounted += o.miscounted;
        self
    }

    fn single(r: SwitchingReport) -> OracleSurvey {
        OracleSurvey {
            switchings: 1,
            correct: (r.connected && r.acyclic) as u64,
            connected: r.connected as u64,
            acyclic: r.acyclic as u64,
            mismatched: (r.connected != r.acyclic) as u64,
            miscounted: (r.connected && r.vertices != r.edges + 1) as u64,
        }
    }
}

impl SwitchGraph {
    /// The formula tree of a morphism with no wires yet.
    pub fn skeleton(dom: &Formula, cells: &[SmcOperation], cod: &Formula) -> SwitchGraph {
        let types: Vec<(Formula, Formula)> = cells.iter().map(|c| (c.dom.clone(), c.cod.clone())).collect();
        let whole = crate::formula::assemble_morphism_formula(dom, &types, cod).to_classical();
        let mut g = SwitchGraph { vertices: 0, hard: Vec::new(), pars: Vec::new(), leaves: HashMap::new() };
        let mut by_path = HashMap::new();
        let mut path = Vec::new();
        g.walk(&whole, &mut path, &mut by_path);
        for (site, f) in super::sites_of(dom, cells, cod) {
            let prefix = super::site_prefix(site, cells.len());
            for (p, _) in f.leaves() {
                let mut full = prefix.clone();
                full.extend_from_slice(&p.0);
                g.leaves.insert(PortRef { site, path: p }, by_path[&full]);
            }
        }
        g
    }

    pub fn from_net(net: &GenericNet) -> Result<SwitchGraph, NetError> {
        let mut g = SwitchGraph::skeleton(&net.dom, &net.cells, &net.cod);
        for w in &net.wires {
            let a = g.vertex(&w.source).ok_or_else(|| NetError::InvalidPortRef(w.source.clone()))?;
            let b = g.vertex(&w.target).ok_or_else(|| NetError::InvalidPortRef(w.target.clone()))?;
            g.hard.push((a, b));
        }
        Ok(g)
    }

    // Returns the vertex id of the subtree root.
    fn walk(&mut self, c: &ClassicalFormula, path: &mut Vec<Dir>, by_path: &mut HashMap<Vec<Dir>, u32>) -> u32 {
        match c {
            ClassicalFormula::Tensor(a, b) | ClassicalFormula::Par(a, b) => {
                path.push(Dir::L);
                let l = self.walk(a, path, by_path);
                path.pop();
                // in-order numbering: left subtree, this node, right subtree
                let me = self.fresh();
                let slot = if matches!(c, ClassicalFormula::Par(..)) {
                    self.pars.push((me, l, u32::MAX));
                    Some(self.pars.len() - 1)
                } else {
                    None
                };
                path.push(Dir::R);
                let r = self.walk(b, path, by_path);
                path.pop();
                match slot {
                    Some(i) => self.pars[i].2 = r,
                    None => {
                        self.hard.push((me, l));
                        self.hard.push((me, r));
                    }
                }
                me
            }
            _ => {
                let me = self.fresh();
                by_path.insert(path.clone(), me);
                me
            }
        }
    }

    fn fresh(&mut self) -> u32 {
        self.vertices += 1;
        (self.vertices - 1) as u32
    }

    pub fn vertex(&self, p: &PortRef) -> Option<u32> {
        self.leaves.get(p).copied()
    }

    pub fn add_edge(&mut self, a: u32, b: u32) {
        self.hard.push((a, b));
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn par_count(&self) -> usize {
        self.pars.len()
    }

    /// Edges present in every switching graph.
    pub fn edge_count(&self) -> usize {
        self.hard.len() + self.pars.len()
    }

    pub fn switching_count(&self) -> Result<u64, NetError> {
        switchings_for_pars(self.pars.len())
            .map_err(|_| NetError::SizeLimit { what: "switching count", limit: u64::MAX })
    }

    /// Builds the switching with the given index and checks it.
    /// Choice `j` is bit `pars - 1 - j` of `index`, a set bit keeps the right child.
    pub fn report(&self, index: u64) -> SwitchingReport {
        let mut uf = UnionFind::new(self.vertices);
        let mut acyclic = true;
        for &(a, b) in &self.hard {
            acyclic &= uf.union(a, b);
        }
        let n = self.pars.len();
        for (j, &(p, l, r)) in self.pars.iter().enumerate() {
            let right = (index >> (n - 1 - j)) & 1 == 1;
            acyclic &= uf.union(p, if right { r } else { l });
        }
        SwitchingReport { connected: uf.classes() == 1, acyclic, vertices: self.vertices, edges: self.edge_count() }
    }

    /// Polynomial check: contract every hard edge, then merge pars whose
    /// two children already share a class, until nothing moves.
    pub fn contracts(&self) -> bool {
        self.contracts_with(&[])
    }

    pub fn contracts_with(&self, extra: &[(u32, u32)]) -> bool {
        self.contraction(extra) == Contraction::Point
    }

    /// Runs the contraction with `extra` edges added. A conflict is a cycle
    /// in some switching, and it survives adding further edges.
    pub fn contraction(&self, extra: &[(u32, u32)]) -> Contraction {
        let mut uf = UnionFind::new(self.vertices);
        for &(a, b) in self.hard.iter().chain(extra) {
            if !uf.union(a, b) {
                return Contraction::Conflict;
            }
        }
        let mut pending: Vec<(u32, u32, u32)> = self.pars.clone();
        loop {
            let before = pending.len();
            let mut failed = false;
            pending.retain(|&(p, l, r)| {
                if failed {
                    return true;
                }
                let (fp, fl, fr) = (uf.find(p), uf.find(l), uf.find(r));
                if fl == fr {
                    if fp == fl {
                        failed = true;
                    } else {
                        uf.union(fp, fl);
                    }
                    return false;
                }
                if fp == fl || fp == fr {
                    failed = true;
                }
                true
            });
            if failed {
                return Contraction::Conflict;
            }
            if pending.len() == before {
                break;
            }
        }
        if pending.is_empty() && uf.classes() == 1 {
            Contraction::Point
        } else {
            Contraction::Stuck
        }
    }

    pub fn all_correct(&self, cap: u64, exec: Execution) -> Result<bool, NetError> {
        let n = self.bounded_count(cap)?;
        let ok = |i: u64| {
            let r = self.report(i);
            r.connected && r.acyclic
        };
        Ok(match exec {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().all(ok),
            _ => (0..n).all(ok),
        })
    }

    pub fn survey(&self, cap: u64, exec: Execution) -> Result<OracleSurvey, NetError> {
        let n = self.bounded_count(cap)?;
        let one = |i: u64| OracleSurvey::single(self.report(i));
        Ok(match exec {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(one).reduce(OracleSurvey::default, OracleSurvey::merge),
            _ => (0..n).map(one).fold(OracleSurvey::default(), OracleSurvey::merge),
        })
    }

    fn bounded_count(&self, cap: u64) -> Result<u64, NetError> {
        let limit = NetError::SizeLimit { what: "switching count", limit: cap };
        let n = self.switching_count().map_err(|_| limit.clone())?;
        if n > cap {
            return Err(limit);
        }
        Ok(n)
    }
}

/// Number of switchings of the net's assembled formula.
pub fn switching_count(net: &GenericNet) -> Result<u64, NetError> {
    SwitchGraph::skeleton(&net.dom, &net.cells, &net.cod).switching_count()
}

/// Visits every switching. Fails with `SizeLimit` above `cap`.
pub fn is_correct_oracle(net: &GenericNet, cap: u64, exec: Execution) -> Result<bool, NetError> {
    net.validate_shape()?;
    SwitchGraph::from_net(net)?.all_correct(cap, exec)
}

pub fn oracle_survey(net: &GenericNet, cap: u64, exec: Execution) -> Result<OracleSurvey, NetError> {
    net.validate_shape()?;
    SwitchGraph::from_net(net)?.survey(cap, exec)
}

pub fn is_correct_fast(net: &GenericNet) -> Result<bool, NetError> {
    net.validate_shape()?;
    Ok(SwitchGraph::from_net(net)?.contracts())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::net::{identity_net, Site, Wire};
    use crate::theory::StructuralKind;
    use Dir::{L, R};

    fn check_both(net: &GenericNet) -> bool {
        let a = is_correct_oracle(net, DEFAULT_SWITCHING_CAP, Execution::Sequential).unwrap();
        let b = is_correct_fast(net).unwrap();
        let c = is_correct_oracle(net, DEFAULT_SWITCHING_CAP, Execution::default()).unwrap();
        assert_eq!(a, b, "fast and oracle disagree");
        assert_eq!(a, c);
        a
    }

    #[test]
    fn identities_are_correct() {
        for s in ["v", "v -o t", "I", "(v * I -o t) * v", "I -o I"] {
            let net = identity_net(&Formula::parse(s).unwrap());
            assert!(check_both(&net), "{s}");
        }
    }

    #[test]
    fn identity_on_v_has_two_switchings() {
        let net = identity_net(&Formula::v());
        assert_eq!(switching_count(&net).unwrap(), 2);
        let g = SwitchGraph::from_net(&net).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn nu_then_contract_into_tensor() {
        let nu = StructuralKind::Nu.operation();
        let c = StructuralKind::Contract.operation();
        let net = GenericNet::new(
            Formula::Unit,
            Formula::tensor(Formula::v(), Formula::v()),
            vec![nu, c],
            [
                Wire::new(PortRef::new(Site::CellCod(0), &[]), PortRef::new(Site::CellDom(1), &[])),
                Wire::new(PortRef::new(Site::CellCod(1), &[L]), PortRef::new(Site::Cod, &[L])),
                Wire::new(PortRef::new(Site::CellCod(1), &[R]), PortRef::new(Site::Cod, &[R])),
                Wire::new(PortRef::new(Site::Dom, &[]), PortRef::new(Site::CellDom(0), &[])),
            ],
        );
        net.validate_shape().unwrap();
        // the two outputs of c sit under a par once embedded, so this is a
        // perfectly good net
        assert!(check_both(&net));
        let survey = oracle_survey(&net, DEFAULT_SWITCHING_CAP, Execution::Sequential).unwrap();
        assert_eq!(survey.switchings, 1 << 4);
        assert_eq!(survey.connected, survey.acyclic);
    }

    #[test]
    fn crossed_wires_through_a_tensor_fail() {
        // v*v -> v*v wired straight is fine; wiring both to one side is not a
        // bijection, and a swapped pair is still correct
        let f = Formula::tensor(Formula::v(), Formula::v());
        let swapped = GenericNet::new(
            f.clone(),
            f.clone(),
            vec![],
            [
                Wire::new(PortRef::new(Site::Dom, &[L]), PortRef::new(Site::Cod, &[R])),
                Wire::new(PortRef::new(Site::Dom, &[R]), PortRef::new(Site::Cod, &[L])),
            ],
        );
        assert!(check_both(&swapped));
        // a cell whose input is fed from its own output loops
        let par = StructuralKind::Par.operation();
        let looped = GenericNet::new(
            Formula::t(),
            Formula::t(),
            vec![par],
            [
                Wire::new(PortRef::new(Site::Dom, &[]), PortRef::new(Site::CellDom(0), &[L])),
                Wire::new(PortRef::new(Site::CellCod(0), &[]), PortRef::new(Site::CellDom(0), &[R])),
            ],
        );
        assert!(looped.validate_shape().is_err());
    }

    #[test]
    fn i_wires_must_land_on_positive_ports() {
        // dom I to cod I -o I, both units sent into the inner cod unit
        let cod = Formula::lolli(Formula::Unit, Formula::Unit);
        let good = GenericNet::new(
            Formula::Unit,
            cod.clone(),
            vec![],
            [
                Wire::new(PortRef::new(Site::Dom, &[]), PortRef::new(Site::Cod, &[R])),
                Wire::new(PortRef::new(Site::Cod, &[L]), PortRef::new(Site::Cod, &[R])),
            ],
        );
        assert!(check_both(&good));
        let bad = GenericNet::new(
            Formula::Unit,
            cod,
            vec![],
            [
                Wire::new(PortRef::new(Site::Dom, &[]), PortRef::new(Site::Cod, &[R])),
                Wire::new(PortRef::new(Site::Cod, &[L]), PortRef::new(Site::Dom, &[])),
            ],
        );
        // the domain unit is itself negative
        assert!(matches!(bad.validate_shape(), Err(NetError::PolarityViolation(_))));
    }

    #[test]
    fn size_limit_is_reported() {
        let net = identity_net(&Formula::parse("v * v * v * v").unwrap());
        assert!(matches!(
            is_correct_oracle(&net, 4, Execution::Sequential),
            Err(NetError::SizeLimit { limit: 4, .. })
        ));
    }
}
