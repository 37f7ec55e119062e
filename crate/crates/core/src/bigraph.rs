//! Abstract binding bigraphs: a place graph and a link graph over shared
//! nodes, between interfaces with located names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::canon::{Encoding, Graph};
use crate::theory::Control;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Locality {
    Site(usize),
    Global,
}

/// Width and names, each name either located at a site or global.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interface {
    pub width: usize,
    pub names: BTreeMap<String, Locality>,
}

impl Interface {
    pub fn new<'a>(width: usize, names: impl IntoIterator<Item = (&'a str, Locality)>) -> Self {
        Interface { width, names: names.into_iter().map(|(n, l)| (n.to_string(), l)).collect() }
    }

    pub fn validate(&self) -> Result<(), BigraphError> {
        for (n, l) in &self.names {
            if n.is_empty() {
                return Err(BigraphError::BadInterface("empty name".into()));
            }
            if let Locality::Site(i) = l {
                if *i >= self.width {
                    return Err(BigraphError::BadInterface(format!("name {n} located at site {i} of {}", self.width)));
                }
            }
        }
        Ok(())
    }

    pub fn global_names(&self) -> Vec<&str> {
        self.names.iter().filter(|(_, l)| **l == Locality::Global).map(|(n, _)| n.as_str()).collect()
    }

    pub fn local_names(&self, site: usize) -> Vec<&str> {
        self.names.iter().filter(|(_, l)| **l == Locality::Site(site)).map(|(n, _)| n.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Site(usize),
    Node(String),
    Root(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortKind {
    Binding,
    Free,
}

/// Something the link map is defined on: a port or an inner name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Port { node: String, kind: PortKind, index: usize },
    Name(String),
}

/// Something the link map points to: an edge or an outer name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkTarget {
    Edge(String),
    Name(String),
}

impl Point {
    pub fn port(node: &str, kind: PortKind, index: usize) -> Point {
        Point::Port { node: node.to_string(), kind, index }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Site(i) => write!(f, "site:{i}"),
            Place::Node(v) => write!(f, "node:{v}"),
            Place::Root(j) => write!(f, "root:{j}"),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Port { node, kind, index } => {
                let k = if *kind == PortKind::Binding { "bind" } else { "free" };
                write!(f, "port:{node}:{k}:{index}")
            }
            Point::Name(x) => write!(f, "name:{x}"),
        }
    }
}

impl fmt::Display for LinkTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkTarget::Edge(e) => write!(f, "edge:{e}"),
            LinkTarget::Name(y) => write!(f, "name:{y}"),
        }
    }
}

fn split_tag(s: &str) -> Result<(&str, &str), String> {
    s.split_once(':').filter(|(_, rest)| !rest.is_empty()).ok_or_else(|| format!("malformed reference {s:?}"))
}

fn index(s: &str, whole: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("bad index in {whole:?}"))
}

impl FromStr for Place {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match split_tag(s)? {
            ("site", i) => Ok(Place::Site(index(i, s)?)),
            ("node", v) => Ok(Place::Node(v.to_string())),
            ("root", j) => Ok(Place::Root(index(j, s)?)),
            _ => Err(format!("unknown place {s:?}")),
        }
    }
}

impl FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match split_tag(s)? {
            ("name", x) => Ok(Point::Name(x.to_string())),
            ("port", rest) => {
                let (rest, idx) = rest.rsplit_once(':').ok_or_else(|| format!("malformed port {s:?}"))?;
                let (node, kind) = rest.rsplit_once(':').ok_or_else(|| format!("malformed port {s:?}"))?;
                let kind = match kind {
                    "bind" => PortKind::Binding,
                    "free" => PortKind::Free,
                    _ => return Err(format!("port kind must be bind or free in {s:?}")),
                };
                if node.is_empty() {
                    return Err(format!("malformed port {s:?}"));
                }
                Ok(Point::Port { node: node.to_string(), kind, index: index(idx, s)? })
            }
            _ => Err(format!("unknown point {s:?}")),
        }
    }
}

impl FromStr for LinkTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match split_tag(s)? {
            ("edge", e) => Ok(LinkTarget::Edge(e.to_string())),
            ("name", y) => Ok(LinkTarget::Name(y.to_string())),
            _ => Err(format!("unknown link target {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BigraphError {
    #[error("bad interface: {0}")]
    BadInterface(String),
    #[error("parent map has a cycle through node {0}")]
    ParentCycle(String),
    #[error("{child} has atomic parent {parent}")]
    AtomicParent { child: Place, parent: Place },
    #[error("binding port {0} is linked to an outer name")]
    BindingRuleViolation(Point),
    #[error("scope rule: {peer} is not located below binder {binder}")]
    ScopeRuleViolation { binder: Point, peer: Point },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("parent map: {0}")]
    BadParent(String),
    #[error("link map: {0}")]
    BadLink(String),
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),
    #[error("canonical labelling exceeded {0} leaves")]
    SizeLimit(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bigraph {
    pub inner: Interface,
    pub outer: Interface,
    pub nodes: BTreeMap<String, Control>,
    pub edges: BTreeSet<String>,
    pub prnt: BTreeMap<Place, Place>,
    pub link: BTreeMap<Point, LinkTarget>,
}

/// Free edges and bound edges with their binding port.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClasses {
    pub free: BTreeSet<String>,
    pub bound: BTreeMap<String, Point>,
}

impl Bigraph {
    /// All ports of all nodes, binding ports first within a node.
    pub fn ports(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for (v, k) in &self.nodes {
            out.extend((0..k.binding).map(|i| Point::port(v, PortKind::Binding, i)));
            out.extend((0..k.free).map(|i| Point::port(v, PortKind::Free, i)));
        }
        out
    }

    pub fn points(&self) -> Vec<Point> {
        let mut out = self.ports();
        out.extend(self.inner.names.keys().map(|x| Point::Name(x.clone())));
        out
    }

    pub fn parent(&self, p: &Place) -> Option<&Place> {
        self.prnt.get(p)
    }

    /// Strict place order: `a` lies strictly inside `b`.
    pub fn precedes(&self, a: &Place, b: &Place) -> bool {
        let mut at = a;
        for _ in 0..=self.nodes.len() {
            match self.prnt.get(at) {
                Some(p) if p == b => return true,
                Some(p) => at = p,
                None => return false,
            }
        }
        false
    }

    /// Where a point sits in the place graph; global inner names sit nowhere.
    pub fn location(&self, p: &Point) -> Option<Place> {
        match p {
            Point::Port { node, .. } => Some(Place::Node(node.clone())),
            Point::Name(x) => match self.inner.names.get(x) {
                Some(Locality::Site(i)) => Some(Place::Site(*i)),
                _ => None,
            },
        }
    }

    pub fn validate(&self) -> Result<(), BigraphError> {
        self.inner.validate()?;
        self.outer.validate()?;
        self.validate_place()?;
        self.validate_link()?;
        self.validate_scope()
    }

    fn validate_place(&self) -> Result<(), BigraphError> {
        let mut expected: BTreeSet<Place> = (0..self.inner.width).map(Place::Site).collect();
        expected.extend(self.nodes.keys().map(|v| Place::Node(v.clone())));
        for (child, parent) in &self.prnt {
            if !expected.contains(child) {
                return Err(BigraphError::BadParent(format!("{child} is not a site or node")));
            }
            match parent {
                Place::Node(v) => match self.nodes.get(v) {
                    None => return Err(BigraphError::BadParent(format!("unknown parent {parent}"))),
                    Some(k) if k.atomic => {
                        return Err(BigraphError::AtomicParent { child: child.clone(), parent: parent.clone() })
                    }
                    Some(_) => {}
                },
                Place::Root(j) if *j < self.outer.width => {}
                _ => return Err(BigraphError::BadParent(format!("{parent} cannot be a parent"))),
            }
        }
        if let Some(missing) = expected.iter().find(|p| !self.prnt.contains_key(*p)) {
            return Err(BigraphError::BadParent(format!("{missing} has no parent")));
        }
        for v in self.nodes.keys() {
            let me = Place::Node(v.clone());
            if self.precedes(&me, &me) || !self.reaches_root(&me) {
                return Err(BigraphError::ParentCycle(v.clone()));
            }
        }
        Ok(())
    }

    fn reaches_root(&self, p: &Place) -> bool {
        let mut at = p;
        for _ in 0..=self.nodes.len() {
            match self.prnt.get(at) {
                Some(Place::Root(_)) => return true,
                Some(q) => at = q,
                None => return false,
            }
        }
        false
    }

    fn validate_link(&self) -> Result<(), BigraphError> {
        let expected: BTreeSet<Point> = self.points().into_iter().collect();
        for (p, target) in &self.link {
            if !expected.contains(p) {
                return Err(match p {
                    Point::Port { node, .. } if self.nodes.contains_key(node) => {
                        BigraphError::ArityMismatch(format!("{p} exceeds the arity of node {node}"))
                    }
                    _ => BigraphError::BadLink(format!("{p} is not a port or inner name")),
                });
            }
            match target {
                LinkTarget::Edge(e) if !self.edges.contains(e) => {
                    return Err(BigraphError::BadLink(format!("unknown edge {e}")));
                }
                LinkTarget::Name(y) if !self.outer.names.contains_key(y) => {
                    return Err(BigraphError::BadLink(format!("unknown outer name {y}")));
                }
                LinkTarget::Name(_) if matches!(p, Point::Port { kind: PortKind::Binding, .. }) => {
                    return Err(BigraphError::BindingRuleViolation(p.clone()));
                }
                _ => {}
            }
        }
        if let Some(missing) = expected.iter().find(|p| !self.link.contains_key(*p)) {
            return Err(BigraphError::BadLink(format!("{missing} is not linked")));
        }
        Ok(())
    }

    fn peers(&self, target: &LinkTarget) -> impl Iterator<Item = &Point> {
        let t = target.clone();
        self.link.iter().filter(move |(_, l)| **l == t).map(|(p, _)| p)
    }

    fn validate_scope(&self) -> Result<(), BigraphError> {
        let mut binders: Vec<(Point, Place, LinkTarget)> = Vec::new();
        for (p, l) in &self.link {
            if let Point::Port { node, kind: PortKind::Binding, .. } = p {
                binders.push((p.clone(), Place::Node(node.clone()), l.clone()));
            }
        }
        for (y, loc) in &self.outer.names {
            if let Locality::Site(j) = loc {
                binders.push((Point::Name(y.clone()), Place::Root(*j), LinkTarget::Name(y.clone())));
            }
        }
        for (binder, at, target) in &binders {
            for peer in self.peers(target) {
                if peer == binder {
                    continue;
                }
                let ok = self.location(peer).is_some_and(|w| self.precedes(&w, at));
                if !ok {
                    return Err(BigraphError::ScopeRuleViolation { binder: binder.clone(), peer: peer.clone() });
                }
            }
        }
        Ok(())
    }

    pub fn classify_edges(&self) -> EdgeClasses {
        let mut bound = BTreeMap::new();
        for (p, l) in &self.link {
            if let (Point::Port { kind: PortKind::Binding, .. }, LinkTarget::Edge(e)) = (p, l) {
                bound.insert(e.clone(), p.clone());
            }
        }
        let free = self.edges.iter().filter(|e| !bound.contains_key(*e)).cloned().collect();
        EdgeClasses { free, bound }
    }

    pub fn idle_edges(&self) -> BTreeSet<String> {
        let used: BTreeSet<&String> = self
            .link
            .values()
            .filter_map(|l| match l {
                LinkTarget::Edge(e) => Some(e),
                LinkTarget::Name(_) => None,
            })
            .collect();
        self.edges.iter().filter(|e| !used.contains(e)).cloned().collect()
    }
}

pub fn identity_bigraph(u: &Interface) -> Bigraph {
    Bigraph {
        inner: u.clone(),
        outer: u.clone(),
        prnt: (0..u.width).map(|i| (Place::Site(i), Place::Root(i))).collect(),
        link: u.names.keys().map(|x| (Point::Name(x.clone()), LinkTarget::Name(x.clone()))).collect(),
        ..Bigraph::default()
    }
}

/// Drops the edges nothing links to.
pub fn lean_normalize(g: &Bigraph) -> Bigraph {
    let idle = g.idle_edges();
    let mut out = g.clone();
    out.edges.retain(|e| !idle.contains(e));
    out
}

fn fresh_id(taken: &BTreeSet<String>, id: &str) -> String {
    let mut candidate = id.to_string();
    while taken.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// `g2 ∘ g1`. Ids of `g2` are renamed only where they clash with `g1`.
pub fn compose_bigraphs(g2: &Bigraph, g1: &Bigraph) -> Result<Bigraph, BigraphError> {
    if g1.outer != g2.inner {
        return Err(BigraphError::InterfaceMismatch(format!(
            "outer face of width {} against inner face of width {}",
            g1.outer.width, g2.inner.width
        )));
    }
    let mut taken_nodes: BTreeSet<String> = g1.nodes.keys().cloned().collect();
    let mut node_name = BTreeMap::new();
    for v in g2.nodes.keys() {
        let n = fresh_id(&taken_nodes, v);
        taken_nodes.insert(n.clone());
        node_name.insert(v.clone(), n);
    }
    let mut taken_edges: BTreeSet<String> = g1.edges.clone();
    let mut edge_name = BTreeMap::new();
    for e in &g2.edges {
        let n = fresh_id(&taken_edges, e);
        taken_edges.insert(n.clone());
        edge_name.insert(e.clone(), n);
    }
    let place2 = |p: &Place| match p {
        Place::Node(v) => Place::Node(node_name[v].clone()),
        q => q.clone(),
    };
    let target2 = |l: &LinkTarget| match l {
        LinkTarget::Edge(e) => LinkTarget::Edge(edge_name[e].clone()),
        n => n.clone(),
    };
    let mut out = Bigraph {
        inner: g1.inner.clone(),
        outer: g2.outer.clone(),
        nodes: g1.nodes.clone(),
        edges: taken_edges,
        ..Bigraph::default()
    };
    for (v, k) in &g2.nodes {
        out.nodes.insert(node_name[v].clone(), k.clone());
    }
    for (child, parent) in &g1.prnt {
        let p = match parent {
            Place::Root(j) => place2(&g2.prnt[&Place::Site(*j)]),
            q => q.clone(),
        };
        out.prnt.insert(child.clone(), p);
    }
    for (child, parent) in &g2.prnt {
        if let Place::Node(_) = child {
            out.prnt.insert(place2(child), place2(parent));
        }
    }
    for (p, l) in &g1.link {
        let t = match l {
            LinkTarget::Name(y) => target2(&g2.link[&Point::Name(y.clone())]),
            e => e.clone(),
        };
        out.link.insert(p.clone(), t);
    }
    for (p, l) in &g2.link {
        if let Point::Port { node, kind, index } = p {
            out.link.insert(Point::Port { node: node_name[node].clone(), kind: *kind, index: *index }, target2(l));
        }
    }
    Ok(out)
}

/// Canonical encoding of the lean support class of `g`.
pub fn canonical_key(g: &Bigraph, leaf_cap: usize) -> Result<Encoding<String, String>, BigraphError> {
    let g = lean_normalize(g);
    let mut labels: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut add = |key: String, label: String, labels: &mut Vec<String>| {
        index.insert(key, labels.len());
        labels.push(label);
    };
    let iface = format!("{:?}|{:?}", g.inner, g.outer);
    add("iface".into(), format!("0 {iface}"), &mut labels);
    for i in 0..g.inner.width {
        add(format!("site:{i}"), format!("1 site {i}"), &mut labels);
    }
    for j in 0..g.outer.width {
        add(format!("root:{j}"), format!("2 root {j}"), &mut labels);
    }
    for x in g.inner.names.keys() {
        add(format!("in:{x}"), format!("3 inner {x}"), &mut labels);
    }
    for y in g.outer.names.keys() {
        add(format!("out:{y}"), format!("4 outer {y}"), &mut labels);
    }
    for (v, k) in &g.nodes {
        add(format!("node:{v}"), format!("5 {:?}", k), &mut labels);
    }
    for e in &g.edges {
        add(format!("edge:{e}"), "6 edge".into(), &mut labels);
    }
    let vertex = |p: &Place| match p {
        Place::Site(i) => index[&format!("site:{i}")],
        Place::Root(j) => index[&format!("root:{j}")],
        Place::Node(v) => index[&format!("node:{v}")],
    };
    let mut edges = Vec::new();
    for (c, p) in &g.prnt {
        edges.push((vertex(c), "prnt".to_string(), vertex(p)));
    }
    for (p, l) in &g.link {
        let (from, label) = match p {
            Point::Port { node, kind, index: k } => (index[&format!("node:{node}")], format!("link {kind:?} {k}")),
            Point::Name(x) => (index[&format!("in:{x}")], "link name".to_string()),
        };
        let to = match l {
            LinkTarget::Edge(e) => index[&format!("edge:{e}")],
            LinkTarget::Name(y) => index[&format!("out:{y}")],
        };
        edges.push((from, label, to));
    }
    Graph::new(labels, edges).canonical(leaf_cap).map(|(e, _)| e).map_err(|_| BigraphError::SizeLimit(leaf_cap))
}

pub const DEFAULT_LEAF_CAP: usize = 100_000;

/// Lean-support equivalence.
pub fn eq_bigraphs(a: &Bigraph, b: &Bigraph) -> Result<bool, BigraphError> {
    if a.inner != b.inner || a.outer != b.outer {
        return Ok(false);
    }
    Ok(canonical_key(a, DEFAULT_LEAF_CAP)? == canonical_key(b, DEFAULT_LEAF_CAP)?)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn send() -> Control {
        Control::new("send", 0, 2, false)
    }

    pub(crate) fn get() -> Control {
        Control::new("get", 1, 1, false)
    }

    fn place(s: &str) -> Place {
        s.parse().unwrap()
    }

    fn point(s: &str) -> Point {
        s.parse().unwrap()
    }

    fn target(s: &str) -> LinkTarget {
        s.parse().unwrap()
    }

    /// Three sites, `send` holding sites 0 and 2 and `get` holding site 1,
    /// side by side under one root.
    pub(crate) fn process_example() -> Bigraph {
        let mut g = Bigraph {
            inner: Interface::new(3, [("z", Locality::Site(0))]),
            outer: Interface::new(1, [("t", Locality::Global), ("y", Locality::Global)]),
            ..Bigraph::default()
        };
        g.nodes.insert("s".into(), send());
        g.nodes.insert("g".into(), get());
        g.edges.extend(["x".to_string(), "z".to_string()]);
        for (c, p) in [("site:0", "node:g"), ("site:1", "node:s"), ("site:2", "node:s"), ("node:s", "root:0"), ("node:g", "root:0")] {
            g.prnt.insert(place(c), place(p));
        }
        for (p, l) in [
            ("port:s:free:0", "edge:x"),
            ("port:s:free:1", "name:y"),
            ("port:g:free:0", "edge:x"),
            ("port:g:bind:0", "edge:z"),
            ("name:z", "edge:z"),
        ] {
            g.link.insert(point(p), target(l));
        }
        g
    }

    #[test]
    fn example_validates() {
        let g = process_example();
        g.validate().unwrap();
        assert!(g.precedes(&place("site:0"), &place("node:g")));
        assert!(g.precedes(&place("site:0"), &place("root:0")));
        assert!(!g.precedes(&place("node:g"), &place("node:g")));
        assert!(g.precedes(&place("node:s"), &place("root:0")));
        let classes = g.classify_edges();
        assert_eq!(classes.free, ["x".to_string()].into_iter().collect());
        assert_eq!(classes.bound.get("z"), Some(&point("port:g:bind:0")));
        assert_eq!(lean_normalize(&g), g);
    }

    #[test]
    fn reference_text_round_trips() {
        for s in ["site:0", "node:a", "root:3"] {
            assert_eq!(place(s).to_string(), s);
        }
        for s in ["port:a:bind:0", "port:a:b:free:2", "name:x"] {
            assert_eq!(point(s).to_string(), s);
        }
        for s in ["edge:e", "name:y"] {
            assert_eq!(target(s).to_string(), s);
        }
        assert!("port:a:both:0".parse::<Point>().is_err());
        assert!("site:".parse::<Place>().is_err());
        assert!("hyper:e".parse::<LinkTarget>().is_err());
    }

    #[test]
    fn validation_errors() {
        let mut cyc = process_example();
        cyc.prnt.insert(place("node:s"), place("node:s"));
        assert!(matches!(cyc.validate(), Err(BigraphError::ParentCycle(_))));

        let mut bind = process_example();
        bind.link.insert(point("port:g:bind:0"), target("name:y"));
        assert!(matches!(bind.validate(), Err(BigraphError::BindingRuleViolation(_))));

        // free port of the sibling send uses get's binder
        let mut scope = process_example();
        scope.link.insert(point("port:s:free:0"), target("edge:z"));
        assert!(matches!(scope.validate(), Err(BigraphError::ScopeRuleViolation { .. })));

        let mut arity = process_example();
        arity.link.insert(point("port:g:free:1"), target("edge:x"));
        assert!(matches!(arity.validate(), Err(BigraphError::ArityMismatch(_))));

        let mut atomic = process_example();
        atomic.nodes.insert("s".into(), Control::new("send", 0, 2, true));
        assert!(matches!(atomic.validate(), Err(BigraphError::AtomicParent { .. })));
    }

    #[test]
    fn idle_edges_and_renaming() {
        let g = process_example();
        let mut idle = g.clone();
        idle.edges.insert("unused".into());
        idle.validate().unwrap();
        assert_ne!(lean_normalize(&idle), idle);
        assert_eq!(lean_normalize(&lean_normalize(&idle)), lean_normalize(&idle));
        assert!(eq_bigraphs(&g, &idle).unwrap());
        let mut renamed = Bigraph { nodes: BTreeMap::new(), prnt: BTreeMap::new(), link: BTreeMap::new(), ..g.clone() };
        let rn = |v: &str| if v == "s" { "n1".to_string() } else { "n2".to_string() };
        for (v, k) in &g.nodes {
            renamed.nodes.insert(rn(v), k.clone());
        }
        for (c, p) in &g.prnt {
            let f = |q: &Place| match q {
                Place::Node(v) => Place::Node(rn(v)),
                q => q.clone(),
            };
            renamed.prnt.insert(f(c), f(p));
        }
        for (p, l) in &g.link {
            let q = match p {
                Point::Port { node, kind, index } => Point::Port { node: rn(node), kind: *kind, index: *index },
                n => n.clone(),
            };
            renamed.link.insert(q, l.clone());
        }
        renamed.validate().unwrap();
        assert!(eq_bigraphs(&g, &renamed).unwrap());
        let mut swapped = g.clone();
        swapped.nodes.insert("s".into(), get());
        swapped.nodes.insert("g".into(), send());
        assert!(!eq_bigraphs(&g, &swapped).unwrap());
    }

    #[test]
    fn identities() {
        let empty = identity_bigraph(&Interface::default());
        assert_eq!(empty, Bigraph::default());
        let u = Interface::new(1, [("x", Locality::Site(0))]);
        let id = identity_bigraph(&u);
        assert_eq!(id.link[&Point::Name("x".into())], LinkTarget::Name("x".into()));
        id.validate().unwrap();
        assert_eq!(compose_bigraphs(&id, &id).unwrap(), id);
        let g = process_example();
        assert_eq!(compose_bigraphs(&identity_bigraph(&g.outer), &g).unwrap(), g);
        assert_eq!(compose_bigraphs(&g, &identity_bigraph(&g.inner)).unwrap(), g);
    }

    #[test]
    fn plugging_a_process_into_a_site() {
        let g = process_example();
        // a closed-off get with its own binder, providing z at site 0
        let mut inner = Bigraph {
            inner: Interface::new(0, []),
            outer: g.inner.clone(),
            ..Bigraph::default()
        };
        inner.nodes.insert("g".into(), get());
        inner.edges.insert("b".into());
        inner.prnt.insert(place("node:g"), place("root:0"));
        inner.link.insert(point("port:g:bind:0"), target("edge:b"));
        inner.link.insert(point("port:g:free:0"), target("name:z"));
        inner.validate().unwrap();
        let h = compose_bigraphs(&g, &inner).unwrap();
        h.validate().unwrap();
        assert_eq!(h.nodes.len(), 3);
        assert!(h.nodes.contains_key("g'"));
        assert!(h.precedes(&place("node:g"), &place("node:g'")));
        assert!(matches!(compose_bigraphs(&inner, &g), Err(BigraphError::InterfaceMismatch(_))));
    }
}
