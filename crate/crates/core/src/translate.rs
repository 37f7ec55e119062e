//! From bigraphs to nets and back.
//!
//! An interface `(n, X, loc)` becomes `v^{n_g} ⊸ ⊗_i (v^{n_i} ⊸ t)`: one `v`
//! per global name, then one factor per site carrying its local names.
//! Nodes become logical cells and free edges become ν cells; the parent
//! map is carried by the `t` links and the link map by the `v` links.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bigraph::{lean_normalize, Bigraph, BigraphError, Interface, LinkTarget, Locality, Place, Point, PortKind};
use crate::formula::{tensor_factor_path, Dir, Formula, LeafPath, Sort};
use crate::net::{expand, is_correct_fast, NetError, NormalNet, PortRef, Site};
use crate::theory::{control_operation, OpKind, StructuralKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error(transparent)]
    Bigraph(#[from] BigraphError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("net is not closed: expected {expected}, found {found}")]
    NotClosed { expected: String, found: String },
    #[error("NotInImage: {0} is not the image of an interface")]
    NotInImage(String),
    #[error("ScopeViolation: {0}")]
    ScopeViolation(BigraphError),
    #[error("net is not correct")]
    CorrectnessViolation,
}

fn path(parts: &[&[Dir]]) -> LeafPath {
    LeafPath(parts.concat())
}

/// The object an interface is sent to.
pub fn t_obj(u: &Interface) -> Formula {
    let ng = u.global_names().len();
    let sites = (0..u.width).map(|i| Formula::lolli(Formula::v_power(u.local_names(i).len()), Formula::t())).collect();
    Formula::lolli(Formula::v_power(ng), Formula::tensor_all(sites))
}

/// Leaf of the global name `j` among `ng`.
fn global_name_path(ng: usize, j: usize) -> LeafPath {
    path(&[&[Dir::L], &tensor_factor_path(ng, j)])
}

fn site_t_path(n: usize, i: usize) -> LeafPath {
    path(&[&[Dir::R], &tensor_factor_path(n, i), &[Dir::R]])
}

fn local_name_path(n: usize, i: usize, ni: usize, j: usize) -> LeafPath {
    path(&[&[Dir::R], &tensor_factor_path(n, i), &[Dir::L], &tensor_factor_path(ni, j)])
}

/// Where every name and site of an interface lands in its image.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InterfacePorts {
    pub names: BTreeMap<String, LeafPath>,
    pub places: Vec<LeafPath>,
}

pub fn interface_ports(u: &Interface) -> InterfacePorts {
    let globals = u.global_names();
    let mut names = BTreeMap::new();
    for (j, x) in globals.iter().enumerate() {
        names.insert(x.to_string(), global_name_path(globals.len(), j));
    }
    for i in 0..u.width {
        let locals = u.local_names(i);
        for (j, x) in locals.iter().enumerate() {
            names.insert(x.to_string(), local_name_path(u.width, i, locals.len(), j));
        }
    }
    InterfacePorts { names, places: (0..u.width).map(|i| site_t_path(u.width, i)).collect() }
}

/// Shape of a formula in the image of `t_obj`: global name count and the
/// name count of each site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjShape {
    pub globals: usize,
    pub sites: Vec<usize>,
}

fn v_power_len(f: &Formula) -> Option<usize> {
    match f {
        Formula::Unit => Some(0),
        Formula::Atom(Sort::V) => Some(1),
        Formula::Tensor(a, b) if **a == Formula::v() && **b != Formula::Unit => v_power_len(b).map(|k| k + 1),
        _ => None,
    }
}

fn site_factor(f: &Formula) -> Option<usize> {
    match f {
        Formula::Lolli(a, b) if **b == Formula::t() => v_power_len(a),
        _ => None,
    }
}

fn site_factors(f: &Formula) -> Option<Vec<usize>> {
    if *f == Formula::Unit {
        return Some(Vec::new());
    }
    if let Some(k) = site_factor(f) {
        return Some(vec![k]);
    }
    match f {
        Formula::Tensor(a, b) if **b != Formula::Unit => {
            let mut out = vec![site_factor(a)?];
            out.extend(site_factors(b)?);
            Some(out)
        }
        _ => None,
    }
}

/// Inverts `t_obj` up to the choice of names.
pub fn obj_shape(f: &Formula) -> Option<ObjShape> {
    match f {
        Formula::Lolli(a, b) => Some(ObjShape { globals: v_power_len(a)?, sites: site_factors(b)? }),
        _ => None,
    }
}

fn free_port(cell: usize, f: usize, j: usize) -> PortRef {
    PortRef { site: Site::CellDom(cell), path: path(&[&[Dir::R], &tensor_factor_path(f, j)]) }
}

fn binding_port(cell: usize, b: usize, j: usize) -> PortRef {
    PortRef { site: Site::CellDom(cell), path: path(&[&[Dir::L, Dir::L], &tensor_factor_path(b, j)]) }
}

fn body_port(cell: usize) -> PortRef {
    PortRef::new(Site::CellDom(cell), &[Dir::L, Dir::R])
}

fn output_port(cell: usize) -> PortRef {
    PortRef::new(Site::CellCod(cell), &[])
}

/// The image of a bigraph, as a normal net.
pub fn t_mor(g: &Bigraph) -> Result<NormalNet, TranslateError> {
    g.validate()?;
    let g = lean_normalize(g);
    let inner = interface_ports(&g.inner);
    let outer = interface_ports(&g.outer);
    let classes = g.classify_edges();

    let mut cells = Vec::new();
    let mut cell_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (v, k) in &g.nodes {
        cell_of.insert(v, cells.len());
        cells.push(control_operation(k));
    }
    let mut nu_of: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &classes.free {
        nu_of.insert(e, cells.len());
        cells.push(StructuralKind::Nu.operation());
    }

    let place_target = |p: &Place| match p {
        Place::Node(v) => body_port(cell_of[v.as_str()]),
        Place::Root(j) => PortRef { site: Site::Cod, path: outer.places[*j].clone() },
        Place::Site(_) => unreachable!("sites are never parents"),
    };
    let mut t_link = BTreeMap::new();
    for (child, parent) in &g.prnt {
        let source = match child {
            Place::Site(i) => PortRef { site: Site::Dom, path: inner.places[*i].clone() },
            Place::Node(v) => output_port(cell_of[v.as_str()]),
            Place::Root(_) => unreachable!("roots have no parent"),
        };
        t_link.insert(source, place_target(parent));
    }

    let producer = |l: &LinkTarget| -> PortRef {
        match l {
            LinkTarget::Name(y) => PortRef { site: Site::Cod, path: outer.names[y].clone() },
            LinkTarget::Edge(e) => match classes.bound.get(e) {
                Some(Point::Port { node, index, .. }) => binding_port(cell_of[node.as_str()], g.nodes[node].binding, *index),
                _ => output_port(nu_of[e.as_str()]),
            },
        }
    };
    let mut v_link = BTreeMap::new();
    for (p, l) in &g.link {
        let consumer = match p {
            Point::Port { kind: PortKind::Binding, .. } => continue,
            Point::Port { node, index, .. } => free_port(cell_of[node.as_str()], g.nodes[node].free, *index),
            Point::Name(x) => PortRef { site: Site::Dom, path: inner.names[x].clone() },
        };
        v_link.insert(consumer, producer(l));
    }
    Ok(NormalNet { dom: t_obj(&g.inner), cod: t_obj(&g.outer), cells, t_link, v_link })
}

fn synthesized_interface(shape: &ObjShape, prefix: char) -> Interface {
    let mut names = BTreeMap::new();
    let mut k = 0;
    let mut fresh = |loc: Locality, names: &mut BTreeMap<String, Locality>| {
        names.insert(format!("{prefix}{k:04}"), loc);
        k += 1;
    };
    for _ in 0..shape.globals {
        fresh(Locality::Global, &mut names);
    }
    for (i, &ni) in shape.sites.iter().enumerate() {
        for _ in 0..ni {
            fresh(Locality::Site(i), &mut names);
        }
    }
    Interface { width: shape.sites.len(), names }
}

/// Reads a bigraph back from a net between translated interfaces. Names
/// are invented in leaf order, `x0000…` inside and `y0000…` outside.
pub fn try_extract(m: &NormalNet) -> Result<Bigraph, TranslateError> {
    m.validate()?;
    let din = obj_shape(&m.dom).ok_or_else(|| TranslateError::NotInImage(m.dom.to_string()))?;
    let dout = obj_shape(&m.cod).ok_or_else(|| TranslateError::NotInImage(m.cod.to_string()))?;
    let inner = synthesized_interface(&din, 'x');
    let outer = synthesized_interface(&dout, 'y');
    let inner_ports = interface_ports(&inner);
    let outer_ports = interface_ports(&outer);
    let inner_name_at: BTreeMap<&LeafPath, &String> = inner_ports.names.iter().map(|(n, p)| (p, n)).collect();
    let outer_name_at: BTreeMap<&LeafPath, &String> = outer_ports.names.iter().map(|(n, p)| (p, n)).collect();
    let root_at: BTreeMap<&LeafPath, usize> = outer_ports.places.iter().enumerate().map(|(j, p)| (p, j)).collect();

    let node_id = |i: usize| format!("n{i:04}");
    let mut g = Bigraph { inner: inner.clone(), outer: outer.clone(), ..Bigraph::default() };
    for (i, c) in m.cells.iter().enumerate() {
        match &c.kind {
            OpKind::Logical(k) => {
                g.nodes.insert(node_id(i), k.clone());
                for j in 0..k.binding {
                    let e = format!("b{i:04}.{j}");
                    g.edges.insert(e.clone());
                    g.link.insert(Point::port(&node_id(i), PortKind::Binding, j), LinkTarget::Edge(e));
                }
            }
            _ => {
                g.edges.insert(format!("e{i:04}"));
            }
        }
    }

    let unexpected = |p: &PortRef| TranslateError::NotInImage(format!("unexpected port {p}"));
    let place_of = |p: &PortRef| -> Result<Place, TranslateError> {
        match p.site {
            Site::CellDom(i) if p.path.0 == [Dir::L, Dir::R] => Ok(Place::Node(node_id(i))),
            Site::Cod => root_at.get(&p.path).map(|&j| Place::Root(j)).ok_or_else(|| unexpected(p)),
            _ => Err(unexpected(p)),
        }
    };
    for (s, t) in &m.t_link {
        let child = match s.site {
            Site::Dom => Place::Site(inner_ports.places.iter().position(|q| *q == s.path).ok_or_else(|| unexpected(s))?),
            Site::CellCod(i) => Place::Node(node_id(i)),
            _ => return Err(unexpected(s)),
        };
        g.prnt.insert(child, place_of(t)?);
    }

    let target_of = |p: &PortRef| -> Result<LinkTarget, TranslateError> {
        match p.site {
            Site::Cod => outer_name_at.get(&p.path).map(|y| LinkTarget::Name((*y).clone())).ok_or_else(|| unexpected(p)),
            Site::CellCod(i) => Ok(LinkTarget::Edge(format!("e{i:04}"))),
            Site::CellDom(i) => {
                let k = m.cells[i].control().ok_or_else(|| unexpected(p))?;
                let j = (0..k.binding).find(|&j| binding_port(i, k.binding, j) == *p).ok_or_else(|| unexpected(p))?;
                Ok(LinkTarget::Edge(format!("b{i:04}.{j}")))
            }
            Site::Dom => Err(unexpected(p)),
        }
    };
    for (c, p) in &m.v_link {
        let point = match c.site {
            Site::Dom => Point::Name(inner_name_at.get(&c.path).map(|x| (*x).clone()).ok_or_else(|| unexpected(c))?),
            Site::CellDom(i) => {
                let k = m.cells[i].control().ok_or_else(|| unexpected(c))?;
                let j = (0..k.free).find(|&j| free_port(i, k.free, j) == *c).ok_or_else(|| unexpected(c))?;
                Point::port(&node_id(i), PortKind::Free, j)
            }
            _ => return Err(unexpected(c)),
        };
        g.link.insert(point, target_of(p)?);
    }

    match g.validate() {
        Ok(()) => Ok(g),
        Err(e @ BigraphError::ScopeRuleViolation { .. }) => Err(TranslateError::ScopeViolation(e)),
        Err(e) => Err(e.into()),
    }
}

pub fn closed_dom() -> Formula {
    t_obj(&Interface::default())
}

pub fn closed_cod() -> Formula {
    t_obj(&Interface { width: 1, names: BTreeMap::new() })
}

/// The inverse of `t_mor` on nets from `I ⊸ I` to `I ⊸ (I ⊸ t)`.
pub fn from_closed_net(m: &NormalNet) -> Result<Bigraph, TranslateError> {
    for (f, expected) in [(&m.dom, closed_dom()), (&m.cod, closed_cod())] {
        if *f != expected {
            return Err(TranslateError::NotClosed { expected: expected.to_string(), found: f.to_string() });
        }
    }
    if !is_correct_fast(&expand(m)?)? {
        return Err(TranslateError::CorrectnessViolation);
    }
    try_extract(m)
}
