//! Canonical labelling by colour refinement with individualisation, and
//! isomorph-free generation of small graphs by adding one vertex at a time.

use crate::error::{check_cap, Result};
use crate::graph::Graph;
use std::collections::HashMap;

/// Canonical codes pack the upper triangle into a `u128`.
pub const MAX_CANON_ORDER: usize = 16;

/// Largest order for which [`graphs_up_to_iso`] is allowed to run.
pub const MAX_ENUMERATION_ORDER: usize = 10;

fn pair_bit(i: usize, j: usize) -> u32 {
    // colex position of {i, j}, i < j
    (j * (j - 1) / 2 + i) as u32
}

fn code_of(masks: &[u64], order: &[usize]) -> u128 {
    let mut code = 0u128;
    for j in 1..order.len() {
        let row = masks[order[j]];
        for i in 0..j {
            if row >> order[i] & 1 == 1 {
                code |= 1u128 << pair_bit(i, j);
            }
        }
    }
    code
}

fn refine(masks: &[u64], cells: &mut Vec<Vec<usize>>) {
    'outer: loop {
        for w in 0..cells.len() {
            let wmask = cells[w].iter().fold(0u64, |m, &v| m | 1 << v);
            for c in 0..cells.len() {
                if cells[c].len() < 2 {
                    continue;
                }
                let counts: Vec<u32> = cells[c].iter().map(|&v| (masks[v] & wmask).count_ones()).collect();
                if counts.iter().all(|&k| k == counts[0]) {
                    continue;
                }
                let mut tagged: Vec<(u32, usize)> = counts.into_iter().zip(cells[c].iter().copied()).collect();
                tagged.sort_unstable();
                let mut parts: Vec<Vec<usize>> = Vec::new();
                let mut last = None;
                for (k, v) in tagged {
                    if last != Some(k) {
                        parts.push(Vec::new());
                        last = Some(k);
                    }
                    parts.last_mut().expect("pushed above").push(v);
                }
                cells.splice(c..=c, parts);
                continue 'outer;
            }
        }
        return;
    }
}

fn twins(masks: &[u64], u: usize, v: usize) -> bool {
    masks[u] & !(1 << v) == masks[v] & !(1 << u)
}

fn search(masks: &[u64], mut cells: Vec<Vec<usize>>, best: &mut Option<(u128, Vec<usize>)>) {
    refine(masks, &mut cells);
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
        let code = code_of(masks, &order);
        if best.as_ref().is_none_or(|(b, _)| code > *b) {
            *best = Some((code, order));
        }
        return;
    };
    let cell = cells[target].clone();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cell {
        // swapping twins inside a cell is an automorphism of the coloured graph
        if tried.iter().any(|&u| twins(masks, u, v)) {
            continue;
        }
        tried.push(v);
        let mut next = cells.clone();
        let rest: Vec<usize> = cell.iter().copied().filter(|&u| u != v).collect();
        next.splice(target..=target, [vec![v], rest]);
        search(masks, next, best);
    }
}

/// Canonical code and labelling: `order[i]` is the vertex placed at position `i`.
/// Two graphs are isomorphic exactly when their codes agree.
pub fn canonical_form(g: &Graph) -> Result<(u128, Vec<usize>)> {
    check_cap("graph order for canonical form", g.n(), MAX_CANON_ORDER)?;
    Ok(canonical_masks(&g.masks()))
}

pub(crate) fn canonical_masks(masks: &[u64]) -> (u128, Vec<usize>) {
    let n = masks.len();
    if n == 0 {
        return (0, Vec::new());
    }
    let mut best = None;
    search(masks, vec![(0..n).collect()], &mut best);
    best.expect("at least one leaf")
}

pub fn canonical_code(g: &Graph) -> Result<u128> {
    canonical_form(g).map(|(c, _)| c)
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() || g.degree_sequence() != h.degree_sequence() {
        return Ok(false);
    }
    Ok(canonical_code(g)? == canonical_code(h)?)
}

/// The canonical representative of `g`'s isomorphism class.
pub fn canonical_graph(g: &Graph) -> Result<Graph> {
    let (_, order) = canonical_form(g)?;
    let mut perm = vec![0; g.n()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    Ok(g.relabel(&perm))
}

/// All graphs on `n` vertices up to isomorphism whose every induced subgraph
/// on a prefix `0..k` passes `keep`. With a hereditary `keep` (closed under
/// deleting vertices) this is exactly the set of graphs satisfying it.
/// Results are sorted by canonical code.
pub fn graphs_up_to_iso(n: usize, keep: &dyn Fn(&Graph) -> bool) -> Result<Vec<Graph>> {
    check_cap("enumeration order", n, MAX_ENUMERATION_ORDER)?;
    let mut level: Vec<Vec<u64>> = vec![Vec::new()];
    for k in 1..=n {
        let mut next: HashMap<u128, Vec<u64>> = HashMap::new();
        for masks in &level {
            for nb in 0u64..1 << (k - 1) {
                let mut m = masks.clone();
                m.push(nb);
                for (v, row) in m.iter_mut().enumerate().take(k - 1) {
                    if nb >> v & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                let g = Graph::from_masks(&m);
                if !keep(&g) {
                    continue;
                }
                let (code, order) = canonical_masks(&m);
                next.entry(code).or_insert_with(|| {
                    let mut perm = vec![0; k];
                    for (pos, &v) in order.iter().enumerate() {
                        perm[v] = pos;
                    }
                    g.relabel(&perm).masks()
                });
            }
        }
        let mut codes: Vec<(u128, Vec<u64>)> = next.into_iter().collect();
        codes.sort_unstable_by_key(|(c, _)| *c);
        level = codes.into_iter().map(|(_, m)| m).collect();
    }
    Ok(level.iter().map(|m| Graph::from_masks(m)).collect())
}

pub fn all_graphs(n: usize) -> Result<Vec<Graph>> {
    graphs_up_to_iso(n, &|_| true)
}
