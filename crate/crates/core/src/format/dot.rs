use std::fmt::Write;

use crate::bigraph::{Bigraph, LinkTarget, Place, Point, PortKind};
use crate::formula::{Dir, Leaf, Polarity};
use crate::net::{GenericNet, PortRef, Site};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn is_binder(net: &GenericNet, p: &PortRef) -> bool {
    match p.site {
        Site::CellDom(i) => net.cells[i].control().is_some_and(|k| k.binding > 0) && p.path.0.starts_with(&[Dir::L, Dir::L]),
        _ => false,
    }
}

/// Port vertices grouped by site; binders are drawn as diamonds and wires
/// out of I ports are dotted.
pub fn net_dot(net: &GenericNet) -> String {
    let mut out = String::from("digraph net {\n  rankdir=TB;\n  node [shape=circle, fontsize=10];\n");
    let ports = net.ports();
    let mut sites: Vec<Site> = vec![Site::Dom];
    for i in 0..net.cells.len() {
        sites.extend([Site::CellDom(i), Site::CellCod(i)]);
    }
    sites.push(Site::Cod);
    let cluster = |out: &mut String, name: String, label: String, group: &[Site]| {
        let _ = writeln!(out, "  subgraph {} {{\n    label={};", quote(&format!("cluster_{name}")), quote(&label));
        for (p, leaf, pol) in ports.iter().filter(|(p, ..)| group.contains(&p.site)) {
            let sign = if *pol == Polarity::Negative { "-" } else { "+" };
            let shape = if is_binder(net, p) { ", shape=diamond, style=filled" } else { "" };
            let _ = writeln!(out, "    {} [label={}{}];", quote(&p.to_string()), quote(&format!("{leaf}{sign}")), shape);
        }
        out.push_str("  }\n");
    };
    cluster(&mut out, "dom".into(), format!("dom: {}", net.dom), &[Site::Dom]);
    for (i, c) in net.cells.iter().enumerate() {
        cluster(&mut out, format!("cell{i}"), format!("{i}: {}", c.name), &[Site::CellDom(i), Site::CellCod(i)]);
    }
    cluster(&mut out, "cod".into(), format!("cod: {}", net.cod), &[Site::Cod]);
    for w in &net.wires {
        let dotted = matches!(net.port(&w.source), Ok(info) if info.leaf == Leaf::Unit);
        let style = if dotted { " [style=dotted]" } else { "" };
        let _ = writeln!(out, "  {} -> {}{style};", quote(&w.source.to_string()), quote(&w.target.to_string()));
    }
    out.push_str("}\n");
    out
}

/// Places and links in one picture: solid arrows run from child to
/// parent, dashed ones from a point to its link; binding ports get a bold
/// arrow with a diamond tail.
pub fn bigraph_dot(g: &Bigraph) -> String {
    let mut out = String::from("digraph bigraph {\n");
    for j in 0..g.outer.width {
        let _ = writeln!(out, "  {} [shape=box, style=rounded, label={}];", quote(&Place::Root(j).to_string()), quote(&format!("root {j}")));
    }
    for (v, k) in &g.nodes {
        let _ = writeln!(out, "  {} [shape=ellipse, label={}];", quote(&Place::Node(v.clone()).to_string()), quote(&format!("{v}: {}", k.name)));
    }
    for i in 0..g.inner.width {
        let _ = writeln!(out, "  {} [shape=box, style=dashed, label={}];", quote(&Place::Site(i).to_string()), quote(&format!("site {i}")));
    }
    for e in &g.edges {
        let _ = writeln!(out, "  {} [shape=point, xlabel={}];", quote(&format!("edge:{e}")), quote(e));
    }
    for x in g.inner.names.keys() {
        let _ = writeln!(out, "  {} [shape=plaintext, label={}];", quote(&format!("inner:{x}")), quote(x));
    }
    for y in g.outer.names.keys() {
        let _ = writeln!(out, "  {} [shape=plaintext, label={}];", quote(&format!("outer:{y}")), quote(y));
    }
    for (c, p) in &g.prnt {
        let _ = writeln!(out, "  {} -> {};", quote(&c.to_string()), quote(&p.to_string()));
    }
    for (p, l) in &g.link {
        let (from, attrs) = match p {
            Point::Port { node, kind, index } => {
                let binder = *kind == PortKind::Binding;
                let label = format!("{}{index}", if binder { "bind" } else { "free" });
                let extra = if binder { ", style=\"dashed,bold\", dir=both, arrowtail=diamond" } else { ", style=dashed" };
                (Place::Node(node.clone()).to_string(), format!("taillabel={}{extra}", quote(&label)))
            }
            Point::Name(x) => (format!("inner:{x}"), "style=dashed".to_string()),
        };
        let to = match l {
            LinkTarget::Edge(e) => format!("edge:{e}"),
            LinkTarget::Name(y) => format!("outer:{y}"),
        };
        let _ = writeln!(out, "  {} -> {} [{attrs}];", quote(&from), quote(&to));
    }
    out.push_str("}\n");
    out
}
