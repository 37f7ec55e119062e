use serde::{Deserialize, Serialize};

use super::FormatError;
use crate::formula::Formula;
use crate::net::{GenericNet, PortRef, Wire};
use crate::theory::TheoryTK;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetDoc {
    dom: String,
    cod: String,
    cells: Vec<String>,
    wires: Vec<WireDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireDoc {
    from: String,
    to: String,
}

fn formula(text: &str, key: &str) -> Result<Formula, FormatError> {
    Formula::parse(text).map_err(|e| FormatError::Schema(format!("{key}: {e}")))
}

fn port(text: &str) -> Result<PortRef, FormatError> {
    text.parse().map_err(FormatError::Schema)
}

/// Reads a net document and checks its shape against the theory.
pub fn parse_net(text: &str, theory: &TheoryTK) -> Result<GenericNet, FormatError> {
    let doc: NetDoc = serde_json::from_str(text)?;
    let cells = doc
        .cells
        .iter()
        .map(|c| theory.operation(c).cloned().ok_or_else(|| FormatError::Schema(format!("unknown operation `{c}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut wires = Vec::new();
    for w in &doc.wires {
        wires.push(Wire::new(port(&w.from)?, port(&w.to)?));
    }
    let count = wires.len();
    let net = GenericNet::new(formula(&doc.dom, "dom")?, formula(&doc.cod, "cod")?, cells, wires);
    if net.wires.len() != count {
        return Err(FormatError::Schema("repeated wire".into()));
    }
    net.validate_shape()?;
    Ok(net)
}

/// Pretty JSON with wires in port order.
pub fn serialize_net(net: &GenericNet) -> String {
    let doc = NetDoc {
        dom: net.dom.to_string(),
        cod: net.cod.to_string(),
        cells: net.cells.iter().map(|c| c.name.clone()).collect(),
        wires: net.wires.iter().map(|w| WireDoc { from: w.source.to_string(), to: w.target.to_string() }).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("net documents serialize");
    out.push('\n');
    out
}
