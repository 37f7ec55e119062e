//! Generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use bignet::bigraph::{canonical_key, Bigraph, Interface, LinkTarget, Locality, Place, Point, PortKind, DEFAULT_LEAF_CAP};
use bignet::formula::{Dir, Formula, Leaf, Polarity, Sort};
use bignet::net::{expand, is_correct_fast, GenericNet, NormalNet, PortRef, Site, Wire};
use bignet::theory::{control_operation, BigSignature, Control, SmcOperation, StructuralKind};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// One atomic control and one binder.
pub fn small_signature() -> BigSignature {
    BigSignature::new(vec![Control::new("a", 0, 1, true), Control::new("b", 1, 1, false)]).unwrap()
}

/// `small_signature` plus a two-port container.
pub fn wide_signature() -> BigSignature {
    let mut controls = small_signature().controls;
    controls.push(Control::new("s", 0, 2, false));
    BigSignature::new(controls).unwrap()
}

pub fn closed_outer() -> Interface {
    Interface::new(1, [])
}

fn node_id(i: usize) -> String {
    format!("n{i}")
}

/// Restricted growth strings: every partition of `0..n` into blocks.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn go(n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        let next = current.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            current.push(b);
            go(n, current, out);
            current.pop();
        }
    }
    go(n, &mut current, &mut out);
    out
}

/// Every valid closed bigraph over `sig` with at most `max_nodes` nodes,
/// one per lean-support class.
pub fn closed_bigraphs(sig: &BigSignature, max_nodes: usize) -> Vec<Bigraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 0..=max_nodes {
        for controls in sig.controls.iter().combinations_with_replacement(n) {
            let containers: Vec<usize> = (0..n).filter(|&i| !controls[i].atomic).collect();
            let parent_choices: Vec<Vec<Place>> = (0..n)
                .map(|i| {
                    let mut ps = vec![Place::Root(0)];
                    ps.extend(containers.iter().filter(|&&j| j != i).map(|&j| Place::Node(node_id(j))));
                    ps
                })
                .collect();
            let points: Vec<Point> = (0..n)
                .flat_map(|i| {
                    let k = controls[i];
                    let binding = (0..k.binding).map(move |j| Point::port(&node_id(i), PortKind::Binding, j));
                    let free = (0..k.free).map(move |j| Point::port(&node_id(i), PortKind::Free, j));
                    binding.chain(free)
                })
                .collect();
            let partitions = set_partitions(points.len());
            for parents in parent_choices.iter().multi_cartesian_product_or_empty(n) {
                for blocks in &partitions {
                    let mut g = Bigraph { outer: closed_outer(), ..Bigraph::default() };
                    for (i, k) in controls.iter().enumerate() {
                        g.nodes.insert(node_id(i), (*k).clone());
                        g.prnt.insert(Place::Node(node_id(i)), (*parents[i]).clone());
                    }
                    for (p, b) in points.iter().zip(blocks) {
                        g.edges.insert(format!("e{b}"));
                        g.link.insert(p.clone(), LinkTarget::Edge(format!("e{b}")));
                    }
                    if g.validate().is_err() {
                        continue;
                    }
                    if seen.insert(canonical_key(&g, DEFAULT_LEAF_CAP).unwrap()) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

trait ProductOrEmpty<'a, T: 'a> {
    fn multi_cartesian_product_or_empty(self, n: usize) -> Vec<Vec<&'a T>>;
}

impl<'a, T: 'a, I: Iterator<Item = &'a Vec<T>>> ProductOrEmpty<'a, T> for I {
    fn multi_cartesian_product_or_empty(self, n: usize) -> Vec<Vec<&'a T>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        self.map(|v| v.iter()).multi_cartesian_product().collect()
    }
}

pub fn random_interface(rng: &mut impl Rng, prefix: &str) -> Interface {
    let width = rng.gen_range(0..=2);
    let count = rng.gen_range(0..=2);
    let mut names = BTreeMap::new();
    for j in 0..count {
        let loc = if width == 0 || rng.gen_bool(0.5) { Locality::Global } else { Locality::Site(rng.gen_range(0..width)) };
        names.insert(format!("{prefix}{j}"), loc);
    }
    Interface { width, names }
}

/// A random valid bigraph between the given interfaces, if one is found.
pub fn random_bigraph(rng: &mut impl Rng, sig: &BigSignature, inner: &Interface, outer: &Interface, max_nodes: usize) -> Option<Bigraph> {
    for _ in 0..200 {
        let n = rng.gen_range(0..=max_nodes);
        let mut g = Bigraph { inner: inner.clone(), outer: outer.clone(), ..Bigraph::default() };
        let controls: Vec<Control> = (0..n).map(|_| sig.controls.choose(rng).unwrap().clone()).collect();
        let pick_parent = |rng: &mut _, above: usize| -> Option<Place> {
            let mut ps: Vec<Place> = (0..outer.width).map(Place::Root).collect();
            ps.extend((above..n).filter(|&j| !controls[j].atomic).map(|j| Place::Node(node_id(j))));
            ps.choose(rng).cloned()
        };
        let mut ok = true;
        for (i, k) in controls.iter().enumerate() {
            g.nodes.insert(node_id(i), k.clone());
            match pick_parent(rng, i + 1) {
                Some(p) => {
                    g.prnt.insert(Place::Node(node_id(i)), p);
                }
                None => ok = false,
            }
        }
        for s in 0..inner.width {
            match pick_parent(rng, 0) {
                Some(p) => {
                    g.prnt.insert(Place::Site(s), p);
                }
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        let mut targets: Vec<LinkTarget> = outer.names.keys().map(|y| LinkTarget::Name(y.clone())).collect();
        for (i, k) in controls.iter().enumerate() {
            for j in 0..k.binding {
                let e = format!("b{i}.{j}");
                g.edges.insert(e.clone());
                g.link.insert(Point::port(&node_id(i), PortKind::Binding, j), LinkTarget::Edge(e.clone()));
                targets.push(LinkTarget::Edge(e));
            }
        }
        for e in ["f0", "f1"] {
            g.edges.insert(e.into());
            targets.push(LinkTarget::Edge(e.into()));
        }
        let mut consumers: Vec<Point> = inner.names.keys().map(|x| Point::Name(x.clone())).collect();
        for (i, k) in controls.iter().enumerate() {
            consumers.extend((0..k.free).map(|j| Point::port(&node_id(i), PortKind::Free, j)));
        }
        for c in consumers {
            g.link.insert(c, targets.choose(rng).unwrap().clone());
        }
        if g.validate().is_ok() {
            return Some(g);
        }
    }
    None
}

fn body(cell: usize) -> PortRef {
    PortRef::new(Site::CellDom(cell), &[Dir::L, Dir::R])
}

fn output(cell: usize) -> PortRef {
    PortRef::new(Site::CellCod(cell), &[])
}

/// A random correct normal net from `I ⊸ I` to `I ⊸ (I ⊸ t)` over `sig`.
pub fn random_closed_normal(rng: &mut impl Rng, sig: &BigSignature, max_cells: usize) -> NormalNet {
    loop {
        let k = rng.gen_range(1..=max_cells);
        let cells: Vec<SmcOperation> = (0..k)
            .map(|_| {
                let i = rng.gen_range(0..=sig.controls.len());
                sig.controls.get(i).map(control_operation).unwrap_or_else(|| StructuralKind::Nu.operation())
            })
            .collect();
        let mut t_targets = vec![PortRef::new(Site::Cod, &[Dir::R, Dir::R])];
        let mut producers = Vec::new();
        let mut consumers = Vec::new();
        for (i, c) in cells.iter().enumerate() {
            match c.control() {
                Some(ctl) => {
                    if !ctl.atomic {
                        t_targets.push(body(i));
                    }
                    let b_path = |j: usize| {
                        let mut p = vec![Dir::L, Dir::L];
                        p.extend(bignet::formula::tensor_factor_path(ctl.binding, j));
                        PortRef::new(Site::CellDom(i), &p)
                    };
                    producers.extend((0..ctl.binding).map(b_path));
                    consumers.extend((0..ctl.free).map(|j| {
                        let mut p = vec![Dir::R];
                        p.extend(bignet::formula::tensor_factor_path(ctl.free, j));
                        PortRef::new(Site::CellDom(i), &p)
                    }));
                }
                None => producers.push(output(i)),
            }
        }
        if !consumers.is_empty() && producers.is_empty() {
            continue;
        }
        let t_link: BTreeMap<PortRef, PortRef> = (0..k)
            .filter(|&i| cells[i].control().is_some())
            .map(|i| (output(i), t_targets.choose(rng).unwrap().clone()))
            .collect();
        let v_link: BTreeMap<PortRef, PortRef> = consumers.iter().map(|c| (c.clone(), producers.choose(rng).unwrap().clone())).collect();
        let used: BTreeSet<&PortRef> = v_link.values().collect();
        if (0..k).any(|i| cells[i].is_nu() && !used.contains(&output(i))) {
            continue;
        }
        let m = NormalNet {
            dom: Formula::parse("I -o I").unwrap(),
            cod: Formula::parse("I -o (I -o t)").unwrap(),
            cells,
            t_link,
            v_link,
        };
        if let Ok(net) = expand(&m) {
            if is_correct_fast(&net).unwrap() {
                return m;
            }
        }
    }
}

/// The structural operations and the controls of `sig`.
pub fn operations(sig: &BigSignature) -> Vec<SmcOperation> {
    let mut ops: Vec<SmcOperation> = StructuralKind::ALL.iter().map(|k| k.operation()).collect();
    ops.extend(sig.controls.iter().map(control_operation));
    ops
}

/// Every wiring of the given ports obeying the sort and polarity rules,
/// stopping after `cap` nets.
pub fn all_wirings(dom: &Formula, cod: &Formula, cells: &[SmcOperation], cap: usize) -> Vec<GenericNet> {
    let empty = GenericNet::new(dom.clone(), cod.clone(), cells.to_vec(), []);
    let ports = empty.ports();
    let side = |leaf: Leaf, pol: Polarity| -> Vec<PortRef> {
        ports.iter().filter(|(_, l, p)| *l == leaf && *p == pol).map(|(r, ..)| r.clone()).collect()
    };
    let (t_out, t_in) = (side(Leaf::Atom(Sort::T), Polarity::Negative), side(Leaf::Atom(Sort::T), Polarity::Positive));
    let (v_out, v_in) = (side(Leaf::Atom(Sort::V), Polarity::Negative), side(Leaf::Atom(Sort::V), Polarity::Positive));
    if t_out.len() != t_in.len() || v_out.len() != v_in.len() {
        return Vec::new();
    }
    let i_out = side(Leaf::Unit, Polarity::Negative);
    let positive: Vec<PortRef> = ports.iter().filter(|(.., p)| *p == Polarity::Positive).map(|(r, ..)| r.clone()).collect();
    if !i_out.is_empty() && positive.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for tp in t_in.iter().permutations(t_in.len()) {
        for vp in v_in.iter().permutations(v_in.len()) {
            let base: Vec<Wire> = t_out
                .iter()
                .zip(&tp)
                .chain(v_out.iter().zip(&vp))
                .map(|(s, t)| Wire::new(s.clone(), (*t).clone()))
                .collect();
            let choices: Vec<Vec<&PortRef>> = if i_out.is_empty() {
                vec![Vec::new()]
            } else {
                std::iter::repeat_n(positive.iter(), i_out.len()).multi_cartesian_product().collect()
            };
            for targets in choices {
                let mut wires = base.clone();
                wires.extend(i_out.iter().zip(targets).map(|(s, t)| Wire::new(s.clone(), t.clone())));
                out.push(GenericNet::new(dom.clone(), cod.clone(), cells.to_vec(), wires));
                if out.len() >= cap {
                    return out;
                }
            }
        }
    }
    out
}

pub fn small_objects() -> Vec<Formula> {
    ["I", "t", "v"].iter().map(|s| Formula::parse(s).unwrap()).collect()
}

/// Every net with at most `max_cells` cells drawn from `ops` between
/// `small_objects`.
pub fn exhaustive_nets(ops: &[SmcOperation], max_cells: usize) -> Vec<GenericNet> {
    let objects = small_objects();
    let mut out = Vec::new();
    for n in 0..=max_cells {
        for cells in ops.iter().cloned().combinations_with_replacement(n) {
            for dom in &objects {
                for cod in &objects {
                    out.extend(all_wirings(dom, cod, &cells, usize::MAX));
                }
            }
        }
    }
    out
}

/// A random net with `cells` random cells drawn from `ops` between random
/// small formulas; `None` when the sorts cannot balance.
pub fn random_net(rng: &mut impl Rng, ops: &[SmcOperation], cells: usize) -> Option<GenericNet> {
    let objects: Vec<Formula> =
        ["I", "t", "v", "t * v", "v -o t", "I -o t", "v * v", "(v -o t) * v"].iter().map(|s| Formula::parse(s).unwrap()).collect();
    let dom = objects.choose(rng).unwrap().clone();
    let cod = objects.choose(rng).unwrap().clone();
    let cells: Vec<SmcOperation> = (0..cells).map(|_| ops.choose(rng).unwrap().clone()).collect();
    let empty = GenericNet::new(dom.clone(), cod.clone(), cells.clone(), []);
    let ports = empty.ports();
    let side = |leaf: Leaf, pol: Polarity| -> Vec<PortRef> {
        ports.iter().filter(|(_, l, p)| *l == leaf && *p == pol).map(|(r, ..)| r.clone()).collect()
    };
    let positive: Vec<PortRef> = ports.iter().filter(|(.., p)| *p == Polarity::Positive).map(|(r, ..)| r.clone()).collect();
    let mut wires = Vec::new();
    for sort in [Sort::T, Sort::V] {
        let out = side(Leaf::Atom(sort), Polarity::Negative);
        let mut into = side(Leaf::Atom(sort), Polarity::Positive);
        if out.len() != into.len() {
            return None;
        }
        into.shuffle(rng);
        wires.extend(out.into_iter().zip(into).map(|(s, t)| Wire::new(s, t)));
    }
    for s in side(Leaf::Unit, Polarity::Negative) {
        wires.push(Wire::new(s, positive.choose(rng)?.clone()));
    }
    Some(GenericNet::new(dom, cod, cells, wires))
}
