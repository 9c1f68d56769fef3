//! Combinatorial injectivity radii and thin-part statistics.
//!
//! For graphs the radius at v is half the shortest non-backtracking closed
//! walk through v, read off one Dijkstra tree. For 2-complexes the universal
//! cover is developed around v up to the horizon: paths are unfolded
//! breadth-first and identified whenever a face boundary forces it
//! (coset-enumeration style deductions and coincidences). Two distinct
//! developed points over the same base vertex at distances d₁, d₂ witness an
//! essential loop of length d₁ + d₂ through v.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rayon::prelude::*;

use crate::complex::{Complex2, Step};
use crate::error::Result;
use crate::minrep::MetricProfile;

/// Limit on developed points per vertex; past it the horizon shrinks to the
/// distance reached.
pub const DEFAULT_NODE_BUDGET: usize = 200_000;

#[derive(PartialEq, PartialOrd)]
struct Key(f64);
impl Eq for Key {}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

pub fn injectivity_profile(k: &Complex2, horizon: f64, r: f64) -> Result<MetricProfile> {
    MetricProfile::new(injectivity_radii(k, horizon, DEFAULT_NODE_BUDGET), horizon, r)
}

/// Radii capped at `horizon`.
pub fn injectivity_radii(k: &Complex2, horizon: f64, node_budget: usize) -> Vec<f64> {
    if k.n_faces() == 0 {
        let inc = k.incidence();
        (0..k.n_vertices())
            .into_par_iter()
            .map(|v| graph_radius(k, &inc, v, horizon))
            .collect()
    } else {
        let dev = DevelopmentData::new(k);
        (0..k.n_vertices())
            .into_par_iter()
            .map(|v| Development::new(&dev, v, horizon, node_budget).radius())
            .collect()
    }
}

fn graph_radius(k: &Complex2, inc: &[Vec<usize>], v: usize, horizon: f64) -> f64 {
    let n = k.n_vertices();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    dist[v] = 0.0;
    let mut heap = BinaryHeap::from([Reverse((Key(0.0), v))]);
    while let Some(Reverse((Key(d), x))) = heap.pop() {
        if d > dist[x] || d > horizon {
            continue;
        }
        for &e in &inc[x] {
            let y = k.edge(e).other(x);
            let nd = d + k.edge(e).length;
            if nd < dist[y] {
                dist[y] = nd;
                parent[y] = e;
                heap.push(Reverse((Key(nd), y)));
            }
        }
    }
    let mut best = 2.0 * horizon;
    for (e, edge) in k.edges().iter().enumerate() {
        if parent[edge.u] == e || parent[edge.v] == e {
            continue;
        }
        let len = dist[edge.u] + edge.length + dist[edge.v];
        best = best.min(len);
    }
    (best / 2.0).min(horizon)
}

/// Per-vertex move and relator tables shared by all developments.
struct DevelopmentData<'a> {
    k: &'a Complex2,
    steps_at: Vec<Vec<Step>>,
    relators_at: Vec<Vec<Vec<Step>>>,
    max_perimeter: f64,
}

impl<'a> DevelopmentData<'a> {
    fn new(k: &'a Complex2) -> Self {
        let mut steps_at = vec![Vec::new(); k.n_vertices()];
        for (e, edge) in k.edges().iter().enumerate() {
            steps_at[edge.u].push(Step::fwd(e));
            steps_at[edge.v].push(Step::rev(e));
        }
        let mut relators_at = vec![Vec::new(); k.n_vertices()];
        let mut max_perimeter: f64 = 0.0;
        for f in 0..k.n_faces() {
            let walk = k.face_walk(f);
            let perimeter: f64 = walk.iter().map(|s| k.edge(s.edge).length).sum();
            max_perimeter = max_perimeter.max(perimeter);
            for i in 0..walk.len() {
                let rot: Vec<Step> = walk[i..].iter().chain(&walk[..i]).copied().collect();
                relators_at[k.step_tail(walk[i])].push(rot);
            }
        }
        Self {
            k,
            steps_at,
            relators_at,
            max_perimeter,
        }
    }
}

struct Development<'d, 'a> {
    data: &'d DevelopmentData<'a>,
    base: Vec<usize>,
    parent: Vec<usize>,
    out: Vec<HashMap<Step, usize>>,
    dist: Vec<f64>,
    pending: Vec<usize>,
    merges: Vec<(usize, usize)>,
    horizon: f64,
    limit: f64,
    node_budget: usize,
}

impl<'d, 'a> Development<'d, 'a> {
    fn new(data: &'d DevelopmentData<'a>, v: usize, horizon: f64, node_budget: usize) -> Self {
        Self {
            data,
            base: vec![v],
            parent: vec![0],
            out: vec![HashMap::new()],
            dist: vec![0.0],
            pending: Vec::new(),
            merges: Vec::new(),
            horizon,
            limit: horizon + data.max_perimeter,
            node_budget,
        }
    }

    fn find(&mut self, mut n: usize) -> usize {
        while self.parent[n] != n {
            self.parent[n] = self.parent[self.parent[n]];
            n = self.parent[n];
        }
        n
    }

    fn target(&mut self, n: usize, s: Step) -> Option<usize> {
        let n = self.find(n);
        let t = *self.out[n].get(&s)?;
        Some(self.find(t))
    }

    fn add_node(&mut self, base: usize, dist: f64) -> usize {
        let id = self.base.len();
        self.base.push(base);
        self.parent.push(id);
        self.out.push(HashMap::new());
        self.dist.push(dist);
        id
    }

    /// Records `n --s--> m` and its reverse, merging on conflicts.
    fn define(&mut self, n: usize, s: Step, m: usize) {
        let (n, m) = (self.find(n), self.find(m));
        for (a, step, b) in [(n, s, m), (m, s.inverse(), n)] {
            match self.out[a].get(&step).copied() {
                Some(t) => self.merges.push((t, b)),
                None => {
                    self.out[a].insert(step, b);
                }
            }
        }
        self.pending.push(n);
        self.pending.push(m);
        self.process_merges();
    }

    fn process_merges(&mut self) {
        while let Some((a, b)) = self.merges.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, gone) = (a.min(b), a.max(b));
            self.parent[gone] = keep;
            self.dist[keep] = self.dist[keep].min(self.dist[gone]);
            let moved = std::mem::take(&mut self.out[gone]);
            for (s, t) in moved {
                match self.out[keep].get(&s).copied() {
                    Some(t2) => self.merges.push((t, t2)),
                    None => {
                        self.out[keep].insert(s, t);
                    }
                }
            }
            self.pending.push(keep);
        }
    }

    /// Traces every relator from `n` in both directions; fills single gaps
    /// and merges endpoints of closed traces.
    fn scan(&mut self, n: usize) {
        let n = self.find(n);
        let base = self.base[n];
        let n_rel = self.data.relators_at[base].len();
        for r in 0..n_rel {
            let rel = &self.data.relators_at[base][r];
            let len = rel.len();
            let mut a = self.find(n);
            let mut p = 0;
            while p < len {
                match self.target(a, rel[p]) {
                    Some(t) => {
                        a = t;
                        p += 1;
                    }
                    None => break,
                }
            }
            let start = self.find(n);
            if p == len {
                if a != start {
                    self.merges.push((a, start));
                    self.process_merges();
                }
                continue;
            }
            let mut b = start;
            let mut q = len;
            while q > p {
                match self.target(b, rel[q - 1].inverse()) {
                    Some(t) => {
                        b = t;
                        q -= 1;
                    }
                    None => break,
                }
            }
            if q == p {
                if a != b {
                    self.merges.push((a, b));
                    self.process_merges();
                }
            } else if q == p + 1 {
                self.define(a, rel[p], b);
            }
        }
    }

    fn settle(&mut self) {
        while let Some(n) = self.pending.pop() {
            self.scan(n);
        }
    }

    fn grow(&mut self) -> f64 {
        let mut heap = BinaryHeap::from([Reverse((Key(0.0), 0usize))]);
        let mut reached = self.limit;
        while let Some(Reverse((Key(d), n))) = heap.pop() {
            let n = self.find(n);
            if d > self.dist[n] {
                continue;
            }
            if self.base.len() > self.node_budget {
                reached = d;
                break;
            }
            let steps = self.data.steps_at[self.base[n]].clone();
            for s in steps {
                let n = self.find(n);
                let nd = self.dist[n] + self.data.k.edge(s.edge).length;
                match self.target(n, s) {
                    Some(t) => {
                        if nd < self.dist[t] {
                            self.dist[t] = nd;
                            heap.push(Reverse((Key(nd), t)));
                        }
                    }
                    None if nd <= self.limit => {
                        let m = self.add_node(self.data.k.step_head(s), nd);
                        self.define(n, s, m);
                        self.settle();
                        let m = self.find(m);
                        heap.push(Reverse((Key(self.dist[m]), m)));
                    }
                    None => {}
                }
            }
        }
        reached
    }

    fn radius(mut self) -> f64 {
        let reached = self.grow();
        let horizon = self.horizon.min((reached - self.data.max_perimeter).max(0.0));
        if reached < self.limit {
            log::debug!("development budget hit; horizon reduced to {horizon}");
        }
        // exact distances in the developed graph
        let root = self.find(0);
        let n = self.base.len();
        let mut dist = vec![f64::INFINITY; n];
        dist[root] = 0.0;
        let mut heap = BinaryHeap::from([Reverse((Key(0.0), root))]);
        while let Some(Reverse((Key(d), x))) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            let edges: Vec<(Step, usize)> = self.out[x].iter().map(|(s, t)| (*s, *t)).collect();
            for (s, t) in edges {
                let t = self.find(t);
                let nd = d + self.data.k.edge(s.edge).length;
                if nd < dist[t] {
                    dist[t] = nd;
                    heap.push(Reverse((Key(nd), t)));
                }
            }
        }
        let mut nearest: HashMap<usize, (f64, f64)> = HashMap::new();
        for x in 0..n {
            if self.parent[x] != x || !dist[x].is_finite() {
                continue;
            }
            let entry = nearest.entry(self.base[x]).or_insert((f64::INFINITY, f64::INFINITY));
            if dist[x] < entry.0 {
                entry.1 = entry.0;
                entry.0 = dist[x];
            } else if dist[x] < entry.1 {
                entry.1 = dist[x];
            }
        }
        let shortest = nearest
            .values()
            .map(|&(a, b)| a + b)
            .fold(f64::INFINITY, f64::min);
        (shortest / 2.0).min(horizon)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BsStatistics {
    /// Fraction of vertices with injectivity radius ≤ R.
    pub thin_fraction: f64,
    /// Distinct radius values with their vertex counts, ascending.
    pub histogram: Vec<(f64, usize)>,
}

pub fn bs_statistics(profile: &MetricProfile) -> BsStatistics {
    let n = profile.n_vertices();
    let thin = (0..n).filter(|&v| !profile.is_thick(v)).count();
    let mut values = profile.injrad().to_vec();
    values.sort_by(f64::total_cmp);
    let mut histogram: Vec<(f64, usize)> = Vec::new();
    for x in values {
        match histogram.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => histogram.push((x, 1)),
        }
    }
    BsStatistics {
        thin_fraction: if n == 0 { 0.0 } else { thin as f64 / n as f64 },
        histogram,
    }
}
