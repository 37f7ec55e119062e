use std::collections::{BTreeSet, HashMap, HashSet};

use super::{GenericNet, NetError, PortRef, Site, Wire};
use crate::formula::{Dir, Formula, Polarity};

/// The identity net: each domain leaf is wired to the codomain leaf at the
/// same path, from whichever side is negative.
pub fn identity_net(a: &Formula) -> GenericNet {
    let mut wires = BTreeSet::new();
    for (path, _) in a.leaves() {
        let d = PortRef { site: Site::Dom, path: path.clone() };
        let c = PortRef { site: Site::Cod, path: path.clone() };
        match a.local_polarity(&path).expect("leaf path") {
            Polarity::Positive => wires.insert(Wire::new(d, c)),
            Polarity::Negative => wires.insert(Wire::new(c, d)),
        };
    }
    GenericNet { dom: a.clone(), cod: a.clone(), cells: Vec::new(), wires }
}

fn prefixed(p: &PortRef, d: Dir, shift: usize) -> PortRef {
    match p.site {
        Site::Dom | Site::Cod => {
            let mut path = vec![d];
            path.extend_from_slice(&p.path.0);
            PortRef::new(p.site, &path)
        }
        _ => p.map_cell(|i| i + shift),
    }
}

/// `f ⊗ g`: interfaces side by side, cells of `g` after those of `f`.
pub fn tensor_nets(f: &GenericNet, g: &GenericNet) -> GenericNet {
    let shift = f.cells.len();
    let mut wires = BTreeSet::new();
    for w in &f.wires {
        wires.insert(Wire::new(prefixed(&w.source, Dir::L, 0), prefixed(&w.target, Dir::L, 0)));
    }
    for w in &g.wires {
        wires.insert(Wire::new(prefixed(&w.source, Dir::R, shift), prefixed(&w.target, Dir::R, shift)));
    }
    let mut cells = f.cells.clone();
    cells.extend(g.cells.iter().cloned());
    GenericNet {
        dom: Formula::tensor(f.dom.clone(), g.dom.clone()),
        cod: Formula::tensor(f.cod.clone(), g.cod.clone()),
        cells,
        wires,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Side {
    F,
    G,
}

/// `f ; g`, splicing the wires of both nets through the shared formula.
pub fn compose_nets(g: &GenericNet, f: &GenericNet) -> Result<GenericNet, NetError> {
    if f.cod != g.dom {
        return Err(NetError::InterfaceMismatch(format!("codomain {} against domain {}", f.cod, g.dom)));
    }
    let out_f: HashMap<&PortRef, &PortRef> = f.wires.iter().map(|w| (&w.source, &w.target)).collect();
    let out_g: HashMap<&PortRef, &PortRef> = g.wires.iter().map(|w| (&w.source, &w.target)).collect();
    let shift = f.cells.len();
    let relabel = |side: Side, p: &PortRef| match side {
        Side::F => p.clone(),
        Side::G => p.map_cell(|i| i + shift),
    };
    let chase = |start: Side, target: &PortRef| -> Result<PortRef, NetError> {
        let mut side = start;
        let mut at = target.clone();
        let mut seen = HashSet::new();
        loop {
            let (next_side, map, site) = match (side, at.site) {
                (Side::F, Site::Cod) => (Side::G, &out_g, Site::Dom),
                (Side::G, Site::Dom) => (Side::F, &out_f, Site::Cod),
                _ => return Ok(relabel(side, &at)),
            };
            if !seen.insert((side, at.clone())) {
                return Err(NetError::CorrectnessViolation);
            }
            let from = PortRef { site, path: at.path.clone() };
            at = (*map.get(&from).ok_or_else(|| NetError::InvalidPortRef(from.clone()))?).clone();
            side = next_side;
        }
    };
    let mut wires = BTreeSet::new();
    for w in &f.wires {
        if w.source.site != Site::Cod {
            wires.insert(Wire::new(relabel(Side::F, &w.source), chase(Side::F, &w.target)?));
        }
    }
    for w in &g.wires {
        if w.source.site != Site::Dom {
            wires.insert(Wire::new(relabel(Side::G, &w.source), chase(Side::G, &w.target)?));
        }
    }
    let mut cells = f.cells.clone();
    cells.extend(g.cells.iter().cloned());
    Ok(GenericNet { dom: f.dom.clone(), cod: g.cod.clone(), cells, wires })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{is_correct_fast, is_correct_oracle, Execution};
    use crate::theory::{control_operation, Control};
    use Dir::{L, R};

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn identity_wire_counts() {
        assert_eq!(identity_net(&Formula::v()).wires.len(), 1);
        assert_eq!(identity_net(&f("v -o t")).wires.len(), 2);
        let unit = identity_net(&Formula::Unit);
        assert_eq!(unit.wires.len(), 1);
        let w = unit.wires.iter().next().unwrap();
        assert_eq!((w.source.site, w.target.site), (Site::Dom, Site::Cod));
        for s in ["v", "v -o t", "I", "(I -o v) * t -o I"] {
            identity_net(&f(s)).validate_shape().unwrap();
        }
    }

    #[test]
    fn tensor_of_identities() {
        let v = identity_net(&Formula::v());
        assert_eq!(tensor_nets(&v, &v), identity_net(&f("v * v")));
    }

    #[test]
    fn identities_are_units_of_composition() {
        let simple = GenericNet::new(
            f("v * (v -o t)"),
            Formula::t(),
            vec![control_operation(&Control::new("get", 1, 1, false))],
            [
                Wire::new(PortRef::new(Site::Dom, &[L]), PortRef::new(Site::CellDom(0), &[R])),
                Wire::new(PortRef::new(Site::Dom, &[R, R]), PortRef::new(Site::CellDom(0), &[L, R])),
                Wire::new(PortRef::new(Site::CellCod(0), &[]), PortRef::new(Site::Cod, &[])),
                Wire::new(PortRef::new(Site::CellDom(0), &[L, L]), PortRef::new(Site::Dom, &[R, L])),
            ],
        );
        simple.validate_shape().unwrap();
        assert!(is_correct_oracle(&simple, 1 << 20, Execution::Sequential).unwrap());
        assert!(is_correct_fast(&simple).unwrap());
        assert_eq!(compose_nets(&identity_net(&simple.cod), &simple).unwrap(), simple);
        assert_eq!(compose_nets(&simple, &identity_net(&simple.dom)).unwrap(), simple);
    }

    #[test]
    fn mismatched_interfaces() {
        let a = identity_net(&Formula::v());
        let b = identity_net(&Formula::t());
        assert!(matches!(compose_nets(&a, &b), Err(NetError::InterfaceMismatch(_))));
    }
}
