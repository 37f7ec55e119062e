//! Equivalence of nets up to moving the wires out of negative I ports.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

use super::switching::{Contraction, SwitchGraph};
use super::{GenericNet, NetError, PortRef, Wire};
use crate::formula::{Leaf, Polarity};

/// Default bound on the number of assignments visited per cell matching.
pub const DEFAULT_REWIRING_CAP: usize = 200_000;

/// Negative I ports, in port order.
pub fn i_emitters(net: &GenericNet) -> Vec<PortRef> {
    net.ports().into_iter().filter(|(_, l, p)| *l == Leaf::Unit && *p == Polarity::Negative).map(|(p, ..)| p).collect()
}

/// Every port an I wire may point at, in port order.
pub fn retarget_candidates(net: &GenericNet) -> Vec<PortRef> {
    net.ports().into_iter().filter(|(_, _, p)| *p == Polarity::Positive).map(|(p, ..)| p).collect()
}

fn split_wires(net: &GenericNet) -> (BTreeSet<Wire>, HashMap<PortRef, PortRef>) {
    let emitters: HashSet<PortRef> = i_emitters(net).into_iter().collect();
    let mut plain = BTreeSet::new();
    let mut unit = HashMap::new();
    for w in &net.wires {
        if emitters.contains(&w.source) {
            unit.insert(w.source.clone(), w.target.clone());
        } else {
            plain.insert(w.clone());
        }
    }
    (plain, unit)
}

fn highest_cell(w: &Wire) -> Option<usize> {
    w.source.site.cell().max(w.target.site.cell())
}

/// Label-preserving cell bijections under which the non-I wires agree.
fn matchings(f: &GenericNet, g: &GenericNet, plain_f: &BTreeSet<Wire>, plain_g: &BTreeSet<Wire>) -> Vec<Vec<usize>> {
    let n = f.cells.len();
    let mut by_cell: Vec<Vec<&Wire>> = vec![Vec::new(); n];
    let mut fixed = Vec::new();
    for w in plain_f {
        match highest_cell(w) {
            Some(i) => by_cell[i].push(w),
            None => fixed.push(w),
        }
    }
    if fixed.iter().any(|w| !plain_g.contains(*w)) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut pi = Vec::new();
    let mut used = vec![false; n];
    extend(f, g, plain_g, &by_cell, &mut pi, &mut used, &mut out);
    out
}

fn map_port(pi: &[usize], p: &PortRef) -> PortRef {
    p.map_cell(|i| pi[i])
}

fn extend(
    f: &GenericNet,
    g: &GenericNet,
    plain_g: &BTreeSet<Wire>,
    by_cell: &[Vec<&Wire>],
    pi: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let i = pi.len();
    if i == f.cells.len() {
        out.push(pi.clone());
        return;
    }
    for j in 0..g.cells.len() {
        if used[j] || g.cells[j] != f.cells[i] {
            continue;
        }
        pi.push(j);
        let fits = by_cell[i].iter().all(|w| plain_g.contains(&Wire::new(map_port(pi, &w.source), map_port(pi, &w.target))));
        if fits {
            used[j] = true;
            extend(f, g, plain_g, by_cell, pi, used, out);
            used[j] = false;
        }
        pi.pop();
    }
}

/// Decides whether `g` is reachable from `f`, up to renaming cells, by
/// moving one I wire at a time while staying correct. The search is
/// best-first on the number of I wires that still differ from `g`.
pub fn rewiring_equivalent(f: &GenericNet, g: &GenericNet, state_cap: usize) -> Result<bool, NetError> {
    if f.dom != g.dom || f.cod != g.cod || f.cells.len() != g.cells.len() || f.wires.len() != g.wires.len() {
        return Ok(false);
    }
    let (plain_f, unit_f) = split_wires(f);
    let (plain_g, unit_g) = split_wires(g);
    if plain_f.len() != plain_g.len() {
        return Ok(false);
    }
    let mut skeleton = SwitchGraph::skeleton(&g.dom, &g.cells, &g.cod);
    for w in &plain_g {
        let (a, b) = (skeleton.vertex(&w.source), skeleton.vertex(&w.target));
        match (a, b) {
            (Some(a), Some(b)) => skeleton.add_edge(a, b),
            _ => return Err(NetError::InvalidPortRef(w.source.clone())),
        }
    }
    let emitters = i_emitters(g);
    let targets = retarget_candidates(g);
    let target_index: HashMap<&PortRef, u32> = targets.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
    let emitter_v: Vec<u32> = emitters.iter().map(|e| skeleton.vertex(e).unwrap()).collect();
    let target_v: Vec<u32> = targets.iter().map(|t| skeleton.vertex(t).unwrap()).collect();
    let goal: Vec<u32> = emitters.iter().map(|e| target_index[&unit_g[e]]).collect();
    let correct = |s: &[u32]| {
        let extra: Vec<(u32, u32)> = s.iter().zip(&emitter_v).map(|(&t, &e)| (e, target_v[t as usize])).collect();
        skeleton.contraction(&extra) == Contraction::Point
    };
    for pi in matchings(f, g, &plain_f, &plain_g) {
        let mut inverse = vec![0; pi.len()];
        for (i, &j) in pi.iter().enumerate() {
            inverse[j] = i;
        }
        let start: Option<Vec<u32>> = emitters
            .iter()
            .map(|e| {
                let fe = e.map_cell(|j| inverse[j]);
                unit_f.get(&fe).and_then(|t| target_index.get(&map_port(&pi, t)).copied())
            })
            .collect();
        let Some(start) = start else { continue };
        if search(start, &goal, targets.len() as u32, &correct, state_cap)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn search(start: Vec<u32>, goal: &[u32], width: u32, correct: &dyn Fn(&[u32]) -> bool, cap: usize) -> Result<bool, NetError> {
    let distance = |s: &[u32]| s.iter().zip(goal).filter(|(a, b)| a != b).count();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = BinaryHeap::new();
    let mut tick = 0usize;
    queue.push(Reverse((distance(&start), tick, start.clone())));
    seen.insert(start);
    while let Some(Reverse((d, _, state))) = queue.pop() {
        if d == 0 {
            return Ok(true);
        }
        for k in 0..state.len() {
            for t in 0..width {
                if t == state[k] {
                    continue;
                }
                let mut next = state.clone();
                next[k] = t;
                if seen.contains(&next) || !correct(&next) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(NetError::SizeLimit { what: "rewiring states", limit: cap as u64 });
                }
                tick += 1;
                queue.push(Reverse((distance(&next), tick, next.clone())));
                seen.insert(next);
            }
        }
    }
    Ok(false)
}

/// Moves the wire out of `emitter` to `target`.
pub fn retarget(net: &GenericNet, emitter: &PortRef, target: &PortRef) -> GenericNet {
    let mut out = net.clone();
    out.wires.retain(|w| &w.source != emitter);
    out.wires.insert(Wire::new(emitter.clone(), target.clone()));
    out
}
