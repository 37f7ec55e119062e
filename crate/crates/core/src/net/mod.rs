//! Morphisms of the free SMC category over `T_K`, drawn as nets.
//!
//! A net `A → B` with cells `c` has one port per leaf of
//! `(A ⊗ ⊗_c(α_c ⊸ β_c)) ⊸ B`. The sign of a port is its sign in that
//! formula: domain leaves and cell codomain leaves flip their local sign,
//! codomain leaves and cell domain leaves keep it. Wires run from negative
//! ports to positive ports.

mod compose;
mod eq;
mod normal;
mod rewire;
mod switching;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{assemble_morphism_formula, tensor_factor_path, Dir, Formula, Leaf, LeafPath, Polarity, Sort};
use crate::theory::SmcOperation;

pub use compose::{compose_nets, identity_net, tensor_nets};
pub use eq::{canonicalize_normal, eq_nets, eq_nets_with, normal_isomorphic, EqConfig, EqMethod, EqOutcome};
pub use normal::{expand, expand_with_cap, normalize, NormalNet, DEFAULT_EXPAND_CAP};
pub use rewire::{i_emitters, retarget, retarget_candidates, rewiring_equivalent, DEFAULT_REWIRING_CAP};
pub use switching::{
    is_correct_fast, is_correct_oracle, oracle_survey, switching_count, Contraction, Execution, OracleSurvey,
    SwitchGraph, SwitchingReport, DEFAULT_SWITCHING_CAP,
};

/// Which formula of the morphism a port lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    Dom,
    CellDom(usize),
    CellCod(usize),
    Cod,
}

impl Site {
    fn key(self) -> (u8, usize, u8) {
        match self {
            Site::Dom => (0, 0, 0),
            Site::CellDom(i) => (1, i, 0),
            Site::CellCod(i) => (1, i, 1),
            Site::Cod => (2, 0, 0),
        }
    }

    pub fn cell(self) -> Option<usize> {
        match self {
            Site::CellDom(i) | Site::CellCod(i) => Some(i),
            _ => None,
        }
    }

    pub(crate) fn map_cell(self, f: impl Fn(usize) -> usize) -> Site {
        match self {
            Site::CellDom(i) => Site::CellDom(f(i)),
            Site::CellCod(i) => Site::CellCod(f(i)),
            s => s,
        }
    }
}

/// Ordered as the leaves of the assembled morphism formula.
impl Ord for Site {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Site {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Dom => f.write_str("dom"),
            Site::Cod => f.write_str("cod"),
            Site::CellDom(i) => write!(f, "cell:{i}:dom"),
            Site::CellCod(i) => write!(f, "cell:{i}:cod"),
        }
    }
}

impl std::str::FromStr for Site {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dom" => return Ok(Site::Dom),
            "cod" => return Ok(Site::Cod),
            _ => {}
        }
        let parts: Vec<&str> = s.split(':').collect();
        if let ["cell", idx, side] = parts.as_slice() {
            let i: usize = idx.parse().map_err(|_| format!("bad cell index in site {s:?}"))?;
            return match *side {
                "dom" => Ok(Site::CellDom(i)),
                "cod" => Ok(Site::CellCod(i)),
                _ => Err(format!("bad cell side in site {s:?}")),
            };
        }
        Err(format!("unknown site {s:?}"))
    }
}

/// One leaf occurrence of the assembled morphism formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortRef {
    pub site: Site,
    pub path: LeafPath,
}

impl PortRef {
    pub fn new(site: Site, path: &[Dir]) -> Self {
        PortRef { site, path: LeafPath(path.to_vec()) }
    }

    pub(crate) fn map_cell(&self, f: impl Fn(usize) -> usize) -> PortRef {
        PortRef { site: self.site.map_cell(f), path: self.path.clone() }
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.site, self.path)
    }
}

impl std::str::FromStr for PortRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (site, path) = s.rsplit_once('/').ok_or_else(|| format!("port {s:?} lacks `/`"))?;
        Ok(PortRef { site: site.parse()?, path: path.parse()? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wire {
    pub source: PortRef,
    pub target: PortRef,
}

impl Wire {
    pub fn new(source: PortRef, target: PortRef) -> Self {
        Wire { source, target }
    }
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("port {0} does not resolve to a leaf")]
    InvalidPortRef(PortRef),
    #[error("wire {0} does not run from a negative to a positive port")]
    PolarityViolation(Wire),
    #[error("wiring of sort {sort} is not a bijection at port {port}")]
    SortBijectionViolation { sort: Sort, port: PortRef },
    #[error("negative I port {port} has {wires} outgoing wires, expected exactly one")]
    DanglingIPort { port: PortRef, wires: usize },
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),
    #[error("operation `{0}` is not in the theory")]
    NonTKOperation(String),
    #[error("{what} exceeds the configured limit of {limit}")]
    SizeLimit { what: &'static str, limit: u64 },
    #[error("net is not correct")]
    CorrectnessViolation,
    #[error("malformed normal net: {0}")]
    MalformedNormal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PortInfo<'a> {
    pub leaf: Leaf,
    pub polarity: Polarity,
    pub formula: &'a Formula,
}

/// A net with explicit structural cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericNet {
    pub dom: Formula,
    pub cod: Formula,
    pub cells: Vec<SmcOperation>,
    pub wires: BTreeSet<Wire>,
}

/// Global sign of a leaf given its sign inside its own formula.
pub(crate) fn site_polarity(site: Site, local: Polarity) -> Polarity {
    match site {
        Site::Dom | Site::CellCod(_) => local.flip(),
        Site::Cod | Site::CellDom(_) => local,
    }
}

/// Position of a site's formula inside the assembled morphism formula.
pub(crate) fn site_prefix(site: Site, cells: usize) -> Vec<Dir> {
    if cells == 0 {
        return match site {
            Site::Dom => vec![Dir::L],
            Site::Cod => vec![Dir::R],
            _ => unreachable!("cell site without cells"),
        };
    }
    match site {
        Site::Dom => vec![Dir::L, Dir::L],
        Site::Cod => vec![Dir::R],
        Site::CellDom(i) | Site::CellCod(i) => {
            let mut p = vec![Dir::L, Dir::R];
            p.extend(tensor_factor_path(cells, i));
            p.push(if matches!(site, Site::CellDom(_)) { Dir::L } else { Dir::R });
            p
        }
    }
}

/// Formulas of every site, listed in port order.
pub(crate) fn sites_of<'a>(dom: &'a Formula, cells: &'a [SmcOperation], cod: &'a Formula) -> Vec<(Site, &'a Formula)> {
    let mut out = vec![(Site::Dom, dom)];
    for (i, c) in cells.iter().enumerate() {
        out.push((Site::CellDom(i), &c.dom));
        out.push((Site::CellCod(i), &c.cod));
    }
    out.push((Site::Cod, cod));
    out
}

pub(crate) fn all_ports(dom: &Formula, cells: &[SmcOperation], cod: &Formula) -> Vec<(PortRef, Leaf, Polarity)> {
    let mut out = Vec::new();
    for (site, f) in sites_of(dom, cells, cod) {
        for (path, leaf) in f.leaves() {
            let pol = site_polarity(site, f.local_polarity(&path).expect("leaf path"));
            out.push((PortRef { site, path }, leaf, pol));
        }
    }
    out
}

pub(crate) fn formula_at<'a>(dom: &'a Formula, cells: &'a [SmcOperation], cod: &'a Formula, site: Site) -> Option<&'a Formula> {
    match site {
        Site::Dom => Some(dom),
        Site::Cod => Some(cod),
        Site::CellDom(i) => cells.get(i).map(|c| &c.dom),
        Site::CellCod(i) => cells.get(i).map(|c| &c.cod),
    }
}

pub(crate) fn port_info<'a>(
    dom: &'a Formula,
    cells: &'a [SmcOperation],
    cod: &'a Formula,
    p: &PortRef,
) -> Result<PortInfo<'a>, NetError> {
    let f = formula_at(dom, cells, cod, p.site).ok_or_else(|| NetError::InvalidPortRef(p.clone()))?;
    let leaf = f.leaf_at(&p.path).ok_or_else(|| NetError::InvalidPortRef(p.clone()))?;
    let local = f.local_polarity(&p.path).map_err(|_| NetError::InvalidPortRef(p.clone()))?;
    Ok(PortInfo { leaf, polarity: site_polarity(p.site, local), formula: f })
}

impl GenericNet {
    pub fn new(dom: Formula, cod: Formula, cells: Vec<SmcOperation>, wires: impl IntoIterator<Item = Wire>) -> Self {
        GenericNet { dom, cod, cells, wires: wires.into_iter().collect() }
    }

    pub fn formula(&self, site: Site) -> Option<&Formula> {
        formula_at(&self.dom, &self.cells, &self.cod, site)
    }

    pub fn port(&self, p: &PortRef) -> Result<PortInfo<'_>, NetError> {
        port_info(&self.dom, &self.cells, &self.cod, p)
    }

    pub fn global_polarity(&self, p: &PortRef) -> Result<Polarity, NetError> {
        self.port(p).map(|i| i.polarity)
    }

    /// All ports in port order with their labels and global signs.
    pub fn ports(&self) -> Vec<(PortRef, Leaf, Polarity)> {
        all_ports(&self.dom, &self.cells, &self.cod)
    }

    pub fn cell_types(&self) -> Vec<(Formula, Formula)> {
        self.cells.iter().map(|c| (c.dom.clone(), c.cod.clone())).collect()
    }

    pub fn morphism_formula(&self) -> Formula {
        assemble_morphism_formula(&self.dom, &self.cell_types(), &self.cod)
    }

    /// Path of `p` inside [`GenericNet::morphism_formula`].
    pub fn global_path(&self, p: &PortRef) -> LeafPath {
        let mut v = site_prefix(p.site, self.cells.len());
        v.extend_from_slice(&p.path.0);
        LeafPath(v)
    }

    /// Checks the polarity and bijection rules on the wiring.
    pub fn validate_shape(&self) -> Result<(), NetError> {
        if let Some((dup, _)) = self.cells.iter().enumerate().find(|(_, c)| c.name.is_empty()) {
            return Err(NetError::NonTKOperation(format!("cell {dup} has no name")));
        }
        let mut out_deg: BTreeMap<&PortRef, usize> = BTreeMap::new();
        let mut in_deg: BTreeMap<&PortRef, usize> = BTreeMap::new();
        for w in &self.wires {
            let s = self.port(&w.source)?;
            let t = self.port(&w.target)?;
            if s.polarity != Polarity::Negative || t.polarity != Polarity::Positive {
                return Err(NetError::PolarityViolation(w.clone()));
            }
            if let Leaf::Atom(sort) = s.leaf {
                if t.leaf != s.leaf {
                    return Err(NetError::SortBijectionViolation { sort, port: w.target.clone() });
                }
                *in_deg.entry(&w.target).or_default() += 1;
            }
            *out_deg.entry(&w.source).or_default() += 1;
        }
        for (p, leaf, pol) in self.ports() {
            let outs = out_deg.get(&p).copied().unwrap_or(0);
            let ins = in_deg.get(&p).copied().unwrap_or(0);
            match (leaf, pol) {
                (Leaf::Atom(sort), Polarity::Negative) if outs != 1 => {
                    return Err(NetError::SortBijectionViolation { sort, port: p });
                }
                (Leaf::Atom(sort), Polarity::Positive) if ins != 1 => {
                    return Err(NetError::SortBijectionViolation { sort, port: p });
                }
                (Leaf::Unit, Polarity::Negative) if outs != 1 => {
                    return Err(NetError::DanglingIPort { port: p, wires: outs });
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Wires leaving negative `I` ports.
    pub fn i_wires(&self) -> impl Iterator<Item = &Wire> {
        self.wires.iter().filter(|w| self.port(&w.source).map(|i| i.leaf == Leaf::Unit).unwrap_or(false))
    }

    pub fn wire_from(&self, p: &PortRef) -> Option<&Wire> {
        self.wires.range(Wire::new(p.clone(), PortRef::new(Site::Dom, &[]))..).next().filter(|w| &w.source == p)
    }
}
