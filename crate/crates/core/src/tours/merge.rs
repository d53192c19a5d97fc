//! Merging per-city cycles into one spanning cycle.
//!
//! Cities are merged in BFS order of the lattice graph of the selection, so
//! every incoming city is adjacent to an already merged "anchor" city. Each
//! step removes one original edge of the anchor's cycle that is still in the
//! big cycle and one edge of the incoming cycle, then reconnects the two
//! paths with two cross edges. A cross edge joins two adjacent `r × r`
//! squares at gap `s`, so it is never longer than `s + 8r`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{cycle_length, Tour};
use crate::error::{Error, Result};
use crate::geometry::{CitySelection, Point};

/// Fewest edges a per-city cycle may have.
pub const MIN_CYCLE_EDGES: usize = 8;

/// Most removals the lattice allows from one small cycle: once as the
/// incoming city plus at most three later merges as anchor, or four as the
/// BFS root.
pub const MAX_REMOVALS: usize = 4;

/// Cycle through the nodes of one selected city (global node ids).
#[derive(Debug, Clone, PartialEq)]
pub struct CityCycle {
    pub city: usize,
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossEdge {
    pub step: usize,
    pub from: usize,
    pub to: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeTrace {
    /// Selection indices in merge order; the first one seeds the big cycle.
    pub order_of_merging: Vec<usize>,
    /// Anchor city of each merge step (`None` for the seed city).
    pub anchors: Vec<Option<usize>>,
    /// Original cycle edges removed, per selected city.
    pub removed_edges: Vec<Vec<(usize, usize)>>,
    pub added_cross_edges: Vec<CrossEdge>,
    /// Length of each per-city input cycle, by selection index.
    pub city_lengths: Vec<f64>,
    /// Big-cycle length after each step.
    pub step_lengths: Vec<f64>,
    /// `s + 8r`.
    pub cross_edge_cap: f64,
}

impl MergeTrace {
    /// `L(T(i)) − L(T(i−1)) − T_incoming` for every step after the first.
    pub fn step_increments(&self) -> Vec<f64> {
        (1..self.step_lengths.len())
            .map(|i| self.step_lengths[i] - self.step_lengths[i - 1] - self.city_lengths[self.order_of_merging[i]])
            .collect()
    }

    pub fn max_removals(&self) -> usize {
        self.removed_edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Checks the cross-edge cap, the per-step increment `2(s + 8r)` (with a
    /// relative tolerance `tol`) and the removal count.
    pub fn check(&self, tol: f64) -> std::result::Result<(), String> {
        let cap = self.cross_edge_cap;
        if let Some(e) = self.added_cross_edges.iter().find(|e| e.length > cap * (1.0 + tol)) {
            return Err(format!("cross edge {}-{} of length {} exceeds s+8r = {cap}", e.from, e.to, e.length));
        }
        for (i, inc) in self.step_increments().into_iter().enumerate() {
            if inc > 2.0 * cap * (1.0 + tol) {
                return Err(format!("merge step {} grew by {inc} > 2(s+8r) = {}", i + 1, 2.0 * cap));
            }
        }
        if self.max_removals() > MAX_REMOVALS {
            return Err(format!("{} edges removed from one city cycle", self.max_removals()));
        }
        Ok(())
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Doubly linked cycle structure: the two neighbours of every node.
struct Links(Vec<[usize; 2]>);

impl Links {
    fn replace(&mut self, node: usize, old: usize, new: usize) {
        let slot = &mut self.0[node];
        if slot[0] == old {
            slot[0] = new;
        } else {
            debug_assert_eq!(slot[1], old);
            slot[1] = new;
        }
    }

    fn walk(&self, start: usize, len: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(len);
        let (mut prev, mut cur) = (usize::MAX, start);
        for _ in 0..len {
            order.push(cur);
            let [a, b] = self.0[cur];
            let next = if a != prev { a } else { b };
            prev = cur;
            cur = next;
        }
        order
    }
}

/// Merges the per-city cycles of a well-connected selection into a single
/// spanning cycle over `points`.
///
/// At each step the removed pair of edges (and the way the two paths are
/// re-joined) is the one that adds the least length.
pub fn merge_cycles(points: &[Point], selection: &CitySelection, cycles: &[CityCycle]) -> Result<(Tour, MergeTrace)> {
    let n_cities = selection.len();
    let (r, s) = (selection.grid().r(), selection.grid().s());
    if !(s > 0.0) {
        return Err(Error::param("merge needs a positive intercity gap"));
    }
    let mut by_city: Vec<Option<&CityCycle>> = vec![None; n_cities];
    for c in cycles {
        if c.city >= n_cities {
            return Err(Error::param(format!("cycle for unknown city {}", c.city)));
        }
        if by_city[c.city].replace(c).is_some() {
            return Err(Error::param(format!("two cycles given for city {}", c.city)));
        }
    }
    let by_city: Vec<&CityCycle> = by_city
        .into_iter()
        .enumerate()
        .map(|(l, c)| c.ok_or_else(|| Error::param(format!("no cycle for city {l}"))))
        .collect::<Result<_>>()?;

    let mut covered = vec![false; points.len()];
    for c in &by_city {
        for &v in &c.order {
            if v >= points.len() || std::mem::replace(&mut covered[v], true) {
                return Err(Error::param(format!("node {v} missing from the point set or in two cycles")));
            }
        }
    }
    if covered.iter().any(|c| !c) {
        return Err(Error::param("cycles do not cover every node"));
    }
    let city_lengths: Vec<f64> = by_city.iter().map(|c| cycle_length(points, &c.order)).collect();
    let cap = s + 8.0 * r;

    if n_cities == 1 {
        let only = by_city[0];
        let tour = Tour::new(points, only.order.clone())?;
        let trace = MergeTrace {
            order_of_merging: vec![0],
            anchors: vec![None],
            removed_edges: vec![Vec::new()],
            added_cross_edges: Vec::new(),
            city_lengths,
            step_lengths: vec![tour.length()],
            cross_edge_cap: cap,
        };
        return Ok((tour, trace));
    }

    if let Some(c) = by_city.iter().find(|c| c.order.len() < MIN_CYCLE_EDGES) {
        return Err(Error::Precondition(format!(
            "city {} has a cycle with {} edges; merging needs at least {MIN_CYCLE_EDGES}",
            c.city,
            c.order.len()
        )));
    }

    // BFS merge order from selection index 0.
    let adj = selection.adjacency();
    let mut parent = vec![None; n_cities];
    let mut seen = vec![false; n_cities];
    let mut merge_order = Vec::with_capacity(n_cities);
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        merge_order.push(u);
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    if merge_order.len() != n_cities {
        return Err(Error::Disconnected);
    }

    let mut links = Links(vec![[usize::MAX; 2]; points.len()]);
    let mut live: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); n_cities];
    for c in &by_city {
        let len = c.order.len();
        for i in 0..len {
            let (a, b) = (c.order[i], c.order[(i + 1) % len]);
            links.0[a][1] = b;
            links.0[b][0] = a;
            live[c.city].insert(ordered(a, b));
        }
    }

    let d = |a: usize, b: usize| points[a].dist(points[b]);
    let mut removed = vec![Vec::new(); n_cities];
    let mut cross = Vec::new();
    let mut anchors = vec![None];
    let mut current = city_lengths[merge_order[0]];
    let mut step_lengths = vec![current];

    for (step, &city) in merge_order.iter().enumerate().skip(1) {
        let anchor = parent[city].expect("non-root city has a BFS parent");
        if removed[anchor].len() >= MAX_REMOVALS {
            return Err(Error::Precondition(format!("city {anchor} would lose more than {MAX_REMOVALS} edges")));
        }
        // (delta, anchor edge, incoming edge, swap): swap=false joins a-x and b-y.
        let mut best: Option<(f64, (usize, usize), (usize, usize), bool)> = None;
        for &(a, b) in &live[anchor] {
            let dab = d(a, b);
            for &(x, y) in &live[city] {
                let base = dab + d(x, y);
                for swap in [false, true] {
                    let (p, q) = if swap { (y, x) } else { (x, y) };
                    let delta = d(a, p) + d(b, q) - base;
                    if best.is_none_or(|(bd, ..)| delta < bd) {
                        best = Some((delta, (a, b), (x, y), swap));
                    }
                }
            }
        }
        let (delta, (a, b), (x, y), swap) = best.expect("both cycles have edges");
        let (p, q) = if swap { (y, x) } else { (x, y) };
        // a-b and x-y out, a-p and b-q in.
        links.replace(a, b, p);
        links.replace(b, a, q);
        links.replace(p, q, a);
        links.replace(q, p, b);
        live[anchor].remove(&(a, b));
        live[city].remove(&(x, y));
        removed[anchor].push((a, b));
        removed[city].push((x, y));
        cross.push(CrossEdge { step, from: a, to: p, length: d(a, p) });
        cross.push(CrossEdge { step, from: b, to: q, length: d(b, q) });
        current += city_lengths[city] + delta;
        step_lengths.push(current);
        anchors.push(Some(anchor));
    }

    let order = links.walk(by_city[merge_order[0]].order[0], points.len());
    let tour = Tour::new(points, order)?;
    let trace = MergeTrace {
        order_of_merging: merge_order,
        anchors,
        removed_edges: removed,
        added_cross_edges: cross,
        city_lengths,
        step_lengths,
        cross_edge_cap: cap,
    };
    Ok((tour, trace))
}
