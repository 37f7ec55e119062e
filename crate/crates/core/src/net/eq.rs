//! Equality of nets: isomorphism of normal forms, with the rewiring search
//! as a second opinion on small nets.

use super::normal::{expand, normalize, NormalNet};
use super::rewire::{rewiring_equivalent, DEFAULT_REWIRING_CAP};
use super::{GenericNet, NetError, PortRef, Site};
use crate::canon::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqMethod {
    /// Canonical forms of the normal nets were compared.
    Canonical,
    /// The rewiring search found a path between the expansions.
    Rewiring,
}

impl std::fmt::Display for EqMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EqMethod::Canonical => "canonical",
            EqMethod::Rewiring => "rewiring",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqOutcome {
    pub equal: bool,
    pub method: EqMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqConfig {
    pub leaf_cap: usize,
    pub rewiring_cap: usize,
    /// Largest expanded net (in cells) handed to the rewiring search.
    pub rewiring_cells: usize,
}

impl Default for EqConfig {
    fn default() -> Self {
        EqConfig { leaf_cap: 100_000, rewiring_cap: DEFAULT_REWIRING_CAP, rewiring_cells: 6 }
    }
}

type EdgeLabel = (u8, u8, String, u8, String);

fn owner(p: &PortRef) -> (usize, u8) {
    match p.site {
        Site::Dom => (0, 0),
        Site::Cod => (1, 1),
        Site::CellDom(i) => (i + 2, 2),
        Site::CellCod(i) => (i + 2, 3),
    }
}

fn graph_of(m: &NormalNet) -> Graph<String, EdgeLabel> {
    let mut labels = vec![format!("0 {}", m.dom), format!("1 {}", m.cod)];
    labels.extend(m.cells.iter().map(|c| format!("2 {:?}", c.kind)));
    let mut edges = Vec::new();
    for (kind, map) in [(0u8, &m.t_link), (1u8, &m.v_link)] {
        for (a, b) in map {
            let (va, sa) = owner(a);
            let (vb, sb) = owner(b);
            edges.push((va, (kind, sa, a.path.to_string(), sb, b.path.to_string()), vb));
        }
    }
    Graph::new(labels, edges)
}

/// Reorders the cells of `m` into a canonical order: two normal nets are
/// isomorphic exactly when their canonical forms are equal.
pub fn canonicalize_normal(m: &NormalNet, leaf_cap: usize) -> Result<NormalNet, NetError> {
    let (_, pos) = graph_of(m)
        .canonical(leaf_cap)
        .map_err(|_| NetError::SizeLimit { what: "canonical labelling leaves", limit: leaf_cap as u64 })?;
    let mut order: Vec<usize> = (0..m.cells.len()).collect();
    order.sort_by_key(|&i| pos[i + 2]);
    Ok(m.permute(&order))
}

pub fn normal_isomorphic(a: &NormalNet, b: &NormalNet, leaf_cap: usize) -> Result<bool, NetError> {
    if a.dom != b.dom || a.cod != b.cod || a.cells.len() != b.cells.len() {
        return Ok(false);
    }
    Ok(canonicalize_normal(a, leaf_cap)? == canonicalize_normal(b, leaf_cap)?)
}

pub fn eq_nets(f: &GenericNet, g: &GenericNet) -> Result<EqOutcome, NetError> {
    eq_nets_with(f, g, &EqConfig::default())
}

pub fn eq_nets_with(f: &GenericNet, g: &GenericNet, cfg: &EqConfig) -> Result<EqOutcome, NetError> {
    let canonical = |equal| Ok(EqOutcome { equal, method: EqMethod::Canonical });
    if f.dom != g.dom || f.cod != g.cod {
        return canonical(false);
    }
    let (nf, ng) = (normalize(f)?, normalize(g)?);
    let (cf, cg) = (canonicalize_normal(&nf, cfg.leaf_cap)?, canonicalize_normal(&ng, cfg.leaf_cap)?);
    if cf == cg {
        return canonical(true);
    }
    let (ef, eg) = (expand(&cf)?, expand(&cg)?);
    if ef.cells.len() <= cfg.rewiring_cells
        && eg.cells.len() <= cfg.rewiring_cells
        && rewiring_equivalent(&ef, &eg, cfg.rewiring_cap)?
    {
        return Ok(EqOutcome { equal: true, method: EqMethod::Rewiring });
    }
    canonical(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Dir, Formula};
    use crate::theory::{control_operation, Control, StructuralKind};
    use std::collections::BTreeMap;
    use Dir::{L, R};

    fn two_gets(swap: bool) -> NormalNet {
        // two get cells in parallel under one root, each fed by a domain name
        let get = control_operation(&Control::new("get", 1, 1, false));
        let nu = StructuralKind::Nu.operation();
        let (a, b) = if swap { (1, 0) } else { (0, 1) };
        let mut t_link = BTreeMap::new();
        let mut v_link = BTreeMap::new();
        t_link.insert(PortRef::new(Site::CellCod(a), &[]), PortRef::new(Site::Cod, &[L]));
        t_link.insert(PortRef::new(Site::CellCod(b), &[]), PortRef::new(Site::Cod, &[R]));
        t_link.insert(PortRef::new(Site::Dom, &[L]), PortRef::new(Site::CellDom(a), &[L, R]));
        t_link.insert(PortRef::new(Site::Dom, &[R]), PortRef::new(Site::CellDom(b), &[L, R]));
        v_link.insert(PortRef::new(Site::CellDom(a), &[R]), PortRef::new(Site::CellCod(2), &[]));
        v_link.insert(PortRef::new(Site::CellDom(b), &[R]), PortRef::new(Site::CellDom(a), &[L, L]));
        NormalNet {
            dom: Formula::parse("t * t").unwrap(),
            cod: Formula::parse("t * t").unwrap(),
            cells: vec![get.clone(), get, nu],
            t_link,
            v_link,
        }
    }

    #[test]
    fn cell_order_does_not_matter() {
        let (a, b) = (two_gets(false), two_gets(true));
        a.validate().unwrap();
        b.validate().unwrap();
        assert_ne!(a, b);
        assert!(normal_isomorphic(&a, &b, 1000).unwrap());
        let out = eq_nets(&expand(&a).unwrap(), &expand(&b).unwrap()).unwrap();
        assert_eq!(out, EqOutcome { equal: true, method: EqMethod::Canonical });
    }

    #[test]
    fn different_producers_are_different() {
        let a = two_gets(false);
        let mut b = a.clone();
        b.v_link.insert(PortRef::new(Site::CellDom(1), &[R]), PortRef::new(Site::CellCod(2), &[]));
        b.validate().unwrap();
        assert!(!normal_isomorphic(&a, &b, 1000).unwrap());
        assert!(!eq_nets(&expand(&a).unwrap(), &expand(&b).unwrap()).unwrap().equal);
    }
}
