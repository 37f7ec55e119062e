use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::FormatError;
use crate::bigraph::{Bigraph, Interface, Locality};
use crate::theory::BigSignature;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BigDoc {
    inner: InterfaceDoc,
    outer: InterfaceDoc,
    nodes: Vec<NodeDoc>,
    edges: Vec<String>,
    prnt: BTreeMap<String, String>,
    link: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InterfaceDoc {
    width: usize,
    names: Vec<NameDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NameDoc {
    name: String,
    loc: LocDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LocDoc {
    Site(usize),
    Other(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    control: String,
}

fn schema(message: String) -> FormatError {
    FormatError::Schema(message)
}

fn interface(doc: &InterfaceDoc, key: &str) -> Result<Interface, FormatError> {
    let mut names = BTreeMap::new();
    for n in &doc.names {
        let loc = match &n.loc {
            LocDoc::Site(i) => Locality::Site(*i),
            LocDoc::Other(s) if s == "global" => Locality::Global,
            LocDoc::Other(s) => return Err(schema(format!("{key}: locality must be a site index or \"global\", not {s:?}"))),
        };
        if names.insert(n.name.clone(), loc).is_some() {
            return Err(schema(format!("{key}: repeated name `{}`", n.name)));
        }
    }
    Ok(Interface { width: doc.width, names })
}

fn interface_doc(u: &Interface) -> InterfaceDoc {
    let names = u
        .names
        .iter()
        .map(|(name, loc)| NameDoc {
            name: name.clone(),
            loc: match loc {
                Locality::Site(i) => LocDoc::Site(*i),
                Locality::Global => LocDoc::Other("global".into()),
            },
        })
        .collect();
    InterfaceDoc { width: u.width, names }
}

/// Reads a bigraph document over `sig` and validates it.
pub fn parse_bigraph(text: &str, sig: &BigSignature) -> Result<Bigraph, FormatError> {
    let doc: BigDoc = serde_json::from_str(text)?;
    let mut g = Bigraph { inner: interface(&doc.inner, "inner")?, outer: interface(&doc.outer, "outer")?, ..Bigraph::default() };
    for n in &doc.nodes {
        let k = sig.control(&n.control).ok_or_else(|| schema(format!("node `{}`: unknown control `{}`", n.id, n.control)))?;
        if g.nodes.insert(n.id.clone(), k.clone()).is_some() {
            return Err(schema(format!("repeated node `{}`", n.id)));
        }
    }
    let edges: BTreeSet<String> = doc.edges.iter().cloned().collect();
    if edges.len() != doc.edges.len() {
        return Err(schema("repeated edge".into()));
    }
    g.edges = edges;
    for (child, parent) in &doc.prnt {
        g.prnt.insert(child.parse().map_err(schema)?, parent.parse().map_err(schema)?);
    }
    for (point, target) in &doc.link {
        g.link.insert(point.parse().map_err(schema)?, target.parse().map_err(schema)?);
    }
    g.validate()?;
    Ok(g)
}

/// Pretty JSON; names, nodes and edges in their natural order.
pub fn serialize_bigraph(g: &Bigraph) -> String {
    let doc = BigDoc {
        inner: interface_doc(&g.inner),
        outer: interface_doc(&g.outer),
        nodes: g.nodes.iter().map(|(id, k)| NodeDoc { id: id.clone(), control: k.name.clone() }).collect(),
        edges: g.edges.iter().cloned().collect(),
        prnt: g.prnt.iter().map(|(c, p)| (c.to_string(), p.to_string())).collect(),
        link: g.link.iter().map(|(p, l)| (p.to_string(), l.to_string())).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("bigraph documents serialize");
    out.push('\n');
    out
}
