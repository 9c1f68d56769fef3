//! Nerve complexes of ball covers and the chain maps between a complex and
//! its nerve.
//!
//! Centers are a greedy net (scanned in vertex order, pairwise distance at
//! least κ/2), cover sets are closed κ-balls around them, and the nerve has
//! an edge for every pair and a triangle for every triple of balls with a
//! common vertex. Nerve edges map back to shortest paths between centers.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::complex::{is_cycle, Chain1, Complex2};
use crate::error::{Error, Result};
use crate::format::{read_complex, write_complex, COMPLEX_HEADER};
use crate::gf2::BitMatrix;
use crate::homology::homology_basis;
use crate::minrep::circuit_decompose;
use crate::spaces::injectivity_radii;

pub const NERVE_HEADER: &str = "nerve v1";
const TOL: f64 = 1e-9;

#[derive(PartialEq, PartialOrd)]
struct Key(f64);
impl Eq for Key {}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Distances from `src` up to `radius` (∞ beyond).
fn dijkstra(k: &Complex2, inc: &[Vec<usize>], src: usize, radius: f64) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; k.n_vertices()];
    dist[src] = 0.0;
    let mut heap = BinaryHeap::from([Reverse((Key(0.0), src))]);
    while let Some(Reverse((Key(d), x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &e in &inc[x] {
            let y = k.edge(e).other(x);
            let nd = d + k.edge(e).length;
            if nd <= radius + TOL && nd < dist[y] {
                dist[y] = nd;
                heap.push(Reverse((Key(nd), y)));
            }
        }
    }
    dist
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!("kappa must be positive, got {kappa}")));
    }
    Ok(())
}

/// Greedy net: a vertex becomes a center unless it lies closer than κ/2 to
/// an earlier center. `allowed` restricts the candidates.
pub fn build_net(k: &Complex2, kappa: f64) -> Result<Vec<usize>> {
    build_net_within(k, kappa, None)
}

fn build_net_within(k: &Complex2, kappa: f64, allowed: Option<&[bool]>) -> Result<Vec<usize>> {
    check_kappa(kappa)?;
    let inc = k.incidence();
    let mut near = vec![f64::INFINITY; k.n_vertices()];
    let mut centers = Vec::new();
    for v in 0..k.n_vertices() {
        if allowed.is_some_and(|a| !a[v]) || near[v] < kappa / 2.0 - TOL {
            continue;
        }
        centers.push(v);
        for (x, d) in dijkstra(k, &inc, v, kappa / 2.0).into_iter().enumerate() {
            near[x] = near[x].min(d);
        }
    }
    Ok(centers)
}

#[derive(Clone, Debug)]
pub struct NerveData {
    pub kappa: f64,
    pub source: Complex2,
    pub centers: Vec<usize>,
    /// Sorted source vertices of each ball.
    pub balls: Vec<Vec<usize>>,
    pub nerve: Complex2,
    /// Source vertex sequence of the path for each nerve edge, from the
    /// lower-indexed center to the higher.
    pub tau: Vec<Vec<usize>>,
    /// Source edges along each path.
    pub tau_edges: Vec<Vec<usize>>,
    /// Index (into `centers`) of the nearest center of each source vertex.
    pub nearest: Vec<Option<usize>>,
    /// Twice the smallest injectivity radius seen below the 2κ horizon.
    pub systole_estimate: Option<f64>,
}

pub fn build_nerve(k: &Complex2, kappa: f64) -> Result<NerveData> {
    build_nerve_within(k, kappa, None)
}

/// Nerve over the vertices flagged in `allowed` (e.g. the thick part).
pub fn build_nerve_within(k: &Complex2, kappa: f64, allowed: Option<&[bool]>) -> Result<NerveData> {
    if let Some(a) = allowed {
        if a.len() != k.n_vertices() {
            return Err(Error::ProfileMismatch {
                expected: a.len(),
                found: k.n_vertices(),
            });
        }
    }
    let centers = build_net_within(k, kappa, allowed)?;
    let inc = k.incidence();
    let ball_dist: Vec<Vec<f64>> = centers.par_iter().map(|&c| dijkstra(k, &inc, c, 2.0 * kappa)).collect();
    let balls: Vec<Vec<usize>> = ball_dist
        .iter()
        .map(|d| {
            (0..k.n_vertices())
                .filter(|&v| d[v] <= kappa + TOL && allowed.map_or(true, |a| a[v]))
                .collect()
        })
        .collect();

    let mut member: Vec<Vec<usize>> = vec![Vec::new(); k.n_vertices()];
    for (i, ball) in balls.iter().enumerate() {
        for &v in ball {
            member[v].push(i);
        }
    }
    let mut pairs = BTreeSet::new();
    let mut triples = BTreeSet::new();
    for m in &member {
        for a in 0..m.len() {
            for b in a + 1..m.len() {
                pairs.insert((m[a], m[b]));
                for c in b + 1..m.len() {
                    triples.insert((m[a], m[b], m[c]));
                }
            }
        }
    }
    let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
    let edge_id: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    let paths: Vec<(Vec<usize>, Vec<usize>)> = pairs
        .par_iter()
        .map(|&(i, j)| lex_shortest_path(k, &inc, centers[i], centers[j], &ball_dist[j]))
        .collect();
    let nerve_edges = pairs
        .iter()
        .map(|&(i, j)| (i, j, ball_dist[i][centers[j]]))
        .collect();
    let faces = triples
        .iter()
        .map(|&(a, b, c)| vec![edge_id[&(a, b)], edge_id[&(b, c)], edge_id[&(a, c)]])
        .collect();
    let nerve = Complex2::new(centers.len(), nerve_edges, faces)?;
    let nearest = nearest_centers(k, &inc, &centers);

    let radii = injectivity_radii(k, 2.0 * kappa, crate::spaces::DEFAULT_NODE_BUDGET);
    let min_r = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let systole_estimate = (min_r < 2.0 * kappa).then_some(2.0 * min_r);
    if let Some(s) = systole_estimate {
        if 2.0 * kappa >= s {
            log::warn!("2·kappa = {} reaches the systole estimate {s}; the nerve map may miss classes", 2.0 * kappa);
        }
    }
    let (tau, tau_edges) = paths.into_iter().unzip();
    Ok(NerveData {
        kappa,
        source: k.clone(),
        centers,
        balls,
        nerve,
        tau,
        tau_edges,
        nearest,
        systole_estimate,
    })
}

/// Shortest path from `a` to `b` with the lexicographically smallest vertex
/// sequence; `to_b` holds distances to `b`.
fn lex_shortest_path(k: &Complex2, inc: &[Vec<usize>], a: usize, b: usize, to_b: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut verts = vec![a];
    let mut edges = Vec::new();
    let mut x = a;
    while x != b {
        let mut best: Option<(usize, usize)> = None;
        for &e in &inc[x] {
            let y = k.edge(e).other(x);
            if y == x {
                continue;
            }
            if (k.edge(e).length + to_b[y] - to_b[x]).abs() <= TOL * (1.0 + to_b[x]) && best.map_or(true, |(by, be)| (y, e) < (by, be)) {
                best = Some((y, e));
            }
        }
        let (y, e) = best.expect("a shortest path continues");
        verts.push(y);
        edges.push(e);
        x = y;
    }
    (verts, edges)
}

/// Multi-source Dijkstra; ties go to the lower center index.
fn nearest_centers(k: &Complex2, inc: &[Vec<usize>], centers: &[usize]) -> Vec<Option<usize>> {
    let mut best: Vec<(f64, usize)> = vec![(f64::INFINITY, usize::MAX); k.n_vertices()];
    let mut heap = BinaryHeap::new();
    for (i, &c) in centers.iter().enumerate() {
        best[c] = (0.0, i);
        heap.push(Reverse((Key(0.0), i, c)));
    }
    while let Some(Reverse((Key(d), i, x))) = heap.pop() {
        if (d, i) > best[x] {
            continue;
        }
        for &e in &inc[x] {
            let y = k.edge(e).other(x);
            let cand = (d + k.edge(e).length, i);
            if cand < best[y] {
                best[y] = cand;
                heap.push(Reverse((Key(cand.0), i, y)));
            }
        }
    }
    best.into_iter().map(|(d, i)| d.is_finite().then_some(i)).collect()
}

impl NerveData {
    /// Sum of the center-to-center paths of the nerve edges in `z`.
    pub fn push_cycle(&self, z: &Chain1) -> Result<Chain1> {
        if z.n_edges() != self.nerve.n_edges() {
            return Err(Error::DimensionMismatch {
                expected: self.nerve.n_edges(),
                found: z.n_edges(),
            });
        }
        let mut out = Chain1::zero(self.source.n_edges());
        for e in z.support() {
            for &s in &self.tau_edges[e] {
                out.toggle(s);
            }
        }
        Ok(out)
    }

    /// Snaps every vertex of each circuit of `c` to its nearest center and
    /// joins consecutive centers by nerve edges.
    pub fn approximate_class(&self, c: &Chain1) -> Result<Chain1> {
        if !is_cycle(&self.source, c)? {
            return Err(Error::NotACycle);
        }
        let mut out = Chain1::zero(self.nerve.n_edges());
        for walk in circuit_decompose(c, &self.source)? {
            for s in walk {
                let (x, y) = (self.source.step_tail(s), self.source.step_head(s));
                let (Some(a), Some(b)) = (self.nearest[x], self.nearest[y]) else {
                    return Err(Error::EdgeNotCovered { edge: s.edge });
                };
                if a == b {
                    continue;
                }
                let e = self.nerve_edge(a, b).ok_or(Error::EdgeNotCovered { edge: s.edge })?;
                out.toggle(e);
            }
        }
        Ok(out)
    }

    pub fn nerve_edge(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        let edges = self.nerve.edges();
        let pos = edges.partition_point(|e| (e.u, e.v) < key);
        (pos < edges.len() && (edges[pos].u, edges[pos].v) == key).then_some(pos)
    }

    pub fn induced_h1_map(&self) -> Result<H1Map> {
        let src = homology_basis(&self.source);
        let nrv = homology_basis(&self.nerve);
        let mut columns = Vec::with_capacity(nrv.b1());
        for z in &nrv.class_reps {
            columns.push(src.class_coordinates(&self.source, &self.push_cycle(z)?)?);
        }
        let matrix = BitMatrix::from_columns(src.b1(), &columns)?;
        let rank = matrix.rank();
        let mut chain_map = true;
        for f in 0..self.nerve.n_faces() {
            let bd = Chain1::from_edges(self.nerve.n_edges(), self.nerve.face_boundary(f).iter().copied())?;
            if !src.is_boundary(&self.push_cycle(&bd)?) {
                chain_map = false;
                break;
            }
        }
        Ok(H1Map {
            surjective: rank == src.b1(),
            matrix,
            rank,
            chain_map,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{NERVE_HEADER}").unwrap();
        writeln!(out, "kappa {}", self.kappa).unwrap();
        let list = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "net {}", list(&self.centers)).unwrap();
        for (i, b) in self.balls.iter().enumerate() {
            writeln!(out, "ball {i} : {}", list(b)).unwrap();
        }
        for (i, t) in self.tau.iter().enumerate() {
            writeln!(out, "tau {i} : {}", list(t)).unwrap();
        }
        out.push_str(&write_complex(&self.nerve));
        out
    }
}

/// The map H₁(nerve) → H₁(source) in class coordinates.
#[derive(Clone, Debug)]
pub struct H1Map {
    /// One column per nerve class, one row per source class.
    pub matrix: BitMatrix,
    pub rank: usize,
    pub surjective: bool,
    /// Every nerve triangle maps to a source boundary.
    pub chain_map: bool,
}

/// Parsed serialized nerve, without its source complex.
#[derive(Clone, Debug)]
pub struct NerveRecord {
    pub kappa: f64,
    pub centers: Vec<usize>,
    pub balls: Vec<Vec<usize>>,
    pub tau: Vec<Vec<usize>>,
    pub nerve: Complex2,
}

/// Reads the output of [`NerveData::to_text`] and checks that it is
/// consistent: one ball per center, one path per nerve edge, paths joining
/// the right centers.
pub fn parse_nerve_text(text: &str) -> Result<NerveRecord> {
    let perr = |line: usize, msg: String| Error::Parse {
        kind: "nerve",
        line,
        msg,
    };
    let nums = |s: &str, line: usize| -> Result<Vec<usize>> {
        s.split_whitespace()
            .map(|t| t.parse().map_err(|_| perr(line, format!("bad index `{t}`"))))
            .collect()
    };
    let mut kappa = None;
    let mut centers = None;
    let mut balls = Vec::new();
    let mut tau = Vec::new();
    let mut complex_at = None;
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            if line != NERVE_HEADER {
                return Err(perr(n, format!("expected header `{NERVE_HEADER}`")));
            }
            seen_header = true;
            continue;
        }
        if line == COMPLEX_HEADER {
            complex_at = Some(text.lines().skip(i).collect::<Vec<_>>().join("\n"));
            break;
        }
        let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
        match tag {
            "kappa" => kappa = Some(rest.trim().parse::<f64>().map_err(|_| perr(n, "bad kappa".into()))?),
            "net" => centers = Some(nums(rest, n)?),
            "ball" | "tau" => {
                let (idx, body) = rest.split_once(':').ok_or_else(|| perr(n, "expected `<i> : ...`".into()))?;
                let idx: usize = idx.trim().parse().map_err(|_| perr(n, "bad index".into()))?;
                let target = if tag == "ball" { &mut balls } else { &mut tau };
                if idx != target.len() {
                    return Err(perr(n, format!("{tag} {idx} out of order")));
                }
                target.push(nums(body, n)?);
            }
            other => return Err(perr(n, format!("unknown record `{other}`"))),
        }
    }
    let kappa = kappa.ok_or_else(|| perr(0, "missing kappa".into()))?;
    let centers = centers.ok_or_else(|| perr(0, "missing net".into()))?;
    let nerve = read_complex(&complex_at.ok_or_else(|| perr(0, "missing nerve complex".into()))?)?;
    if balls.len() != centers.len() || nerve.n_vertices() != centers.len() {
        return Err(perr(0, "ball, center and nerve vertex counts differ".into()));
    }
    if tau.len() != nerve.n_edges() {
        return Err(perr(0, format!("{} paths for {} nerve edges", tau.len(), nerve.n_edges())));
    }
    for (e, path) in tau.iter().enumerate() {
        let edge = nerve.edge(e);
        if path.first() != Some(&centers[edge.u]) || path.last() != Some(&centers[edge.v]) {
            return Err(perr(0, format!("path {e} does not join its centers")));
        }
    }
    Ok(NerveRecord {
        kappa,
        centers,
        balls,
        tau,
        nerve,
    })
}
