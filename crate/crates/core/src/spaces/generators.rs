//! Fixture complexes: cycles, wedges, surfaces, products of graphs and
//! random 2-complexes.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Complex2, Step};
use crate::error::{Error, Result};

/// Cycle graph on `n` vertices with edges `i -> i+1 mod n`.
pub fn gen_cycle(n: usize, edge_length: f64) -> Result<Complex2> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    let edges = (0..n).map(|i| (i, (i + 1) % n, edge_length)).collect();
    Complex2::new(n, edges, vec![])
}

/// Path graph with `n_edges` edges.
pub fn gen_path(n_edges: usize, edge_length: f64) -> Result<Complex2> {
    if n_edges == 0 {
        return Err(Error::InvalidParameter("path needs at least one edge".into()));
    }
    let edges = (0..n_edges).map(|i| (i, i + 1, edge_length)).collect();
    Complex2::new(n_edges + 1, edges, vec![])
}

/// One vertex with `k` unit loops.
pub fn gen_wedge(k: usize) -> Result<Complex2> {
    if k == 0 {
        return Err(Error::InvalidParameter("wedge needs k >= 1".into()));
    }
    Complex2::new(1, vec![(0, 0, 1.0); k], vec![])
}

/// The 7-vertex torus: K₇ with triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
pub fn csaszar_torus() -> Complex2 {
    let mut index = HashMap::new();
    let mut edges = Vec::new();
    for a in 0..7 {
        for b in a + 1..7 {
            index.insert((a, b), edges.len());
            edges.push((a, b, 1.0));
        }
    }
    let e = |a: usize, b: usize| index[&(a.min(b), a.max(b))];
    let mut faces = Vec::new();
    for i in 0..7 {
        for (x, y) in [(1, 3), (2, 3)] {
            let (p, q, r) = (i, (i + x) % 7, (i + y) % 7);
            faces.push(vec![e(p, q), e(q, r), e(r, p)]);
        }
    }
    Complex2::new(7, edges, faces).expect("fixed torus is valid")
}

/// Square-grid Klein bottle: an `m × n` grid whose top row is glued to the
/// bottom row through the reflection `x -> -x mod m`.
pub fn klein_bottle(m: usize, n: usize) -> Result<Complex2> {
    if m < 3 || n < 3 {
        return Err(Error::InvalidParameter(format!(
            "klein bottle grid needs m, n >= 3, got {m}x{n}"
        )));
    }
    let vid = |i: usize, j: usize| j * m + i;
    let h = |i: usize, j: usize| j * m + i;
    let vt = |i: usize, j: usize| m * n + j * m + i;
    let mut edges = Vec::with_capacity(2 * m * n);
    for j in 0..n {
        for i in 0..m {
            edges.push((vid(i, j), vid((i + 1) % m, j), 1.0));
        }
    }
    for j in 0..n {
        for i in 0..m {
            let top = if j + 1 < n {
                vid(i, j + 1)
            } else {
                vid((m - i) % m, 0)
            };
            edges.push((vid(i, j), top, 1.0));
        }
    }
    let mut faces = Vec::with_capacity(m * n);
    for j in 0..n {
        for i in 0..m {
            let top = if j + 1 < n {
                h(i, j + 1)
            } else {
                h((2 * m - i - 1) % m, 0)
            };
            faces.push(vec![h(i, j), vt((i + 1) % m, j), top, vt(i, j)]);
        }
    }
    Complex2::new(m * n, edges, faces)
}

/// Closed orientable surface of genus `g` as a square complex: a grid
/// rectangle with `g` square holes, doubled along its boundary.
///
/// Bars between holes are 3 cells wide and holes are 2 cells wide, so the
/// shortest essential loop has length 6.
pub fn gen_surface(g: usize) -> Result<Complex2> {
    const BAR: usize = 3;
    const HOLE: usize = 2;
    if g > 64 {
        return Err(Error::InvalidParameter(format!("genus {g} too large")));
    }
    let width = BAR + g * (HOLE + BAR);
    let height = 2 * BAR + HOLE;
    let is_hole = |x: usize, y: usize| {
        (BAR..BAR + HOLE).contains(&y)
            && x >= BAR
            && (x - BAR) % (HOLE + BAR) < HOLE
            && (x - BAR) / (HOLE + BAR) < g
    };
    let in_region = |x: isize, y: isize| {
        x >= 0
            && y >= 0
            && (x as usize) < width
            && (y as usize) < height
            && !is_hole(x as usize, y as usize)
    };
    // Cells on either side of a unit segment.
    let h_cells = |x: usize, y: usize| {
        [(x as isize, y as isize - 1), (x as isize, y as isize)]
            .into_iter()
            .filter(|&(a, b)| in_region(a, b))
            .count()
    };
    let v_cells = |x: usize, y: usize| {
        [(x as isize - 1, y as isize), (x as isize, y as isize)]
            .into_iter()
            .filter(|&(a, b)| in_region(a, b))
            .count()
    };

    // Region edges: (start point, horizontal?, adjacent cell count).
    let mut seg = Vec::new();
    for y in 0..=height {
        for x in 0..width {
            let c = h_cells(x, y);
            if c > 0 {
                seg.push(((x, y), true, c));
            }
        }
    }
    for y in 0..height {
        for x in 0..=width {
            let c = v_cells(x, y);
            if c > 0 {
                seg.push(((x, y), false, c));
            }
        }
    }
    let mut on_boundary = HashMap::new();
    let mut in_use = HashMap::new();
    for &((x, y), horiz, c) in &seg {
        let end = if horiz { (x + 1, y) } else { (x, y + 1) };
        for p in [(x, y), end] {
            in_use.insert(p, ());
            if c == 1 {
                on_boundary.insert(p, ());
            }
        }
    }
    let mut points: Vec<(usize, usize)> = in_use.keys().copied().collect();
    points.sort_by_key(|&(x, y)| (y, x));
    let mut top_id = HashMap::new();
    let mut bot_id = HashMap::new();
    let mut nv = 0;
    for &p in &points {
        top_id.insert(p, nv);
        if on_boundary.contains_key(&p) {
            bot_id.insert(p, nv);
        }
        nv += 1;
    }
    for &p in &points {
        if !on_boundary.contains_key(&p) {
            bot_id.insert(p, nv);
            nv += 1;
        }
    }

    let mut edges = Vec::new();
    let mut top_edge = HashMap::new();
    let mut bot_edge = HashMap::new();
    for &((x, y), horiz, c) in &seg {
        let end = if horiz { (x + 1, y) } else { (x, y + 1) };
        top_edge.insert(((x, y), horiz), edges.len());
        if c == 1 {
            bot_edge.insert(((x, y), horiz), edges.len());
        }
        edges.push((top_id[&(x, y)], top_id[&end], 1.0));
    }
    for &((x, y), horiz, c) in &seg {
        if c == 2 {
            let end = if horiz { (x + 1, y) } else { (x, y + 1) };
            bot_edge.insert(((x, y), horiz), edges.len());
            edges.push((bot_id[&(x, y)], bot_id[&end], 1.0));
        }
    }

    let mut faces = Vec::new();
    for sheet in [&top_edge, &bot_edge] {
        for y in 0..height {
            for x in 0..width {
                if is_hole(x, y) {
                    continue;
                }
                faces.push(vec![
                    sheet[&((x, y), true)],
                    sheet[&((x + 1, y), false)],
                    sheet[&((x, y + 1), true)],
                    sheet[&((x, y), false)],
                ]);
            }
        }
    }
    Complex2::new(nv, edges, faces)
}

/// Cone over a graph: one apex joined to every vertex, one triangle per edge.
pub fn cone_over(g: &Complex2) -> Result<Complex2> {
    if !g.is_graph() {
        return Err(Error::InvalidParameter("cone base must be a graph".into()));
    }
    let apex = g.n_vertices();
    let ne = g.n_edges();
    let mut edges: Vec<(usize, usize, f64)> = g.edges().iter().map(|e| (e.u, e.v, e.length)).collect();
    for v in 0..g.n_vertices() {
        edges.push((v, apex, 1.0));
    }
    let faces = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| vec![i, ne + e.v, ne + e.u])
        .collect();
    Complex2::new(apex + 1, edges, faces)
}

/// Product of two graphs: vertices V₁×V₂, edges e×v and v×e, squares e×e.
///
/// Vertex `(a, b)` is `a·|V₂| + b`. Edges `e₁×b` come first as `e₁·|V₂| + b`,
/// then `a×e₂` as `|E₁|·|V₂| + a·|E₂| + e₂`; square `e₁×e₂` is `e₁·|E₂| + e₂`.
pub fn gen_product_complex(g1: &Complex2, g2: &Complex2) -> Result<Complex2> {
    if !g1.is_graph() || !g2.is_graph() {
        return Err(Error::InvalidParameter("product factors must be graphs".into()));
    }
    let (v1, v2) = (g1.n_vertices(), g2.n_vertices());
    let (n1, n2) = (g1.n_edges(), g2.n_edges());
    let vid = |a: usize, b: usize| a * v2 + b;
    let first = |e1: usize, b: usize| e1 * v2 + b;
    let second = |a: usize, e2: usize| n1 * v2 + a * n2 + e2;
    let mut edges = Vec::with_capacity(n1 * v2 + v1 * n2);
    for (_, e) in g1.edges().iter().enumerate() {
        for b in 0..v2 {
            edges.push((vid(e.u, b), vid(e.v, b), e.length));
        }
    }
    for a in 0..v1 {
        for e in g2.edges() {
            edges.push((vid(a, e.u), vid(a, e.v), e.length));
        }
    }
    let mut faces = Vec::with_capacity(n1 * n2);
    for (i1, e1) in g1.edges().iter().enumerate() {
        for (i2, e2) in g2.edges().iter().enumerate() {
            faces.push(vec![
                Step::fwd(first(i1, e2.u)),
                Step::fwd(second(e1.v, i2)),
                Step::rev(first(i1, e2.v)),
                Step::rev(second(e1.u, i2)),
            ]);
        }
    }
    Complex2::with_steps(v1 * v2, edges, faces)
}

#[derive(Clone, Copy, Debug)]
pub struct RandomComplexParams {
    pub vertices: usize,
    pub extra_edges: usize,
    pub faces: usize,
    /// Edge lengths are drawn uniformly from `1..=max_length`.
    pub max_length: u32,
    /// Probability that an extra edge is a loop.
    pub loop_prob: f64,
}

impl Default for RandomComplexParams {
    fn default() -> Self {
        Self {
            vertices: 8,
            extra_edges: 6,
            faces: 6,
            max_length: 3,
            loop_prob: 0.05,
        }
    }
}

/// Connected random 2-complex. Every face is a simple cycle closed through a
/// randomized breadth-first search, so faces overlap in varied ways.
pub fn random_complex(seed: u64, p: &RandomComplexParams) -> Complex2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.vertices.max(1);
    let mut edges = Vec::new();
    let len = |rng: &mut ChaCha8Rng| rng.gen_range(1..=p.max_length.max(1)) as f64;
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let l = len(&mut rng);
        edges.push((j, i, l));
    }
    for _ in 0..p.extra_edges {
        let u = rng.gen_range(0..n);
        let v = if rng.gen_bool(p.loop_prob.clamp(0.0, 1.0)) {
            u
        } else {
            rng.gen_range(0..n)
        };
        let l = len(&mut rng);
        edges.push((u, v, l));
    }
    let mut inc = vec![Vec::new(); n];
    for (i, &(u, v, _)) in edges.iter().enumerate() {
        inc[u].push(i);
        if u != v {
            inc[v].push(i);
        }
    }
    let mut faces = Vec::new();
    let mut attempts = 0;
    while faces.len() < p.faces && attempts < 50 * p.faces.max(1) {
        attempts += 1;
        let e = rng.gen_range(0..edges.len().max(1));
        if edges.is_empty() {
            break;
        }
        let (u, v, _) = edges[e];
        if u == v {
            faces.push(vec![e]);
            continue;
        }
        // path v -> u avoiding e
        let mut prev: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[v] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            if x == u {
                break;
            }
            let mut nbrs = inc[x].clone();
            nbrs.shuffle(&mut rng);
            for f in nbrs {
                if f == e {
                    continue;
                }
                let (a, b, _) = edges[f];
                let y = if a == x { b } else { a };
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some(f);
                    queue.push_back(y);
                }
            }
        }
        if !seen[u] {
            continue;
        }
        let mut walk = vec![e];
        let mut path = Vec::new();
        let mut x = u;
        while x != v {
            let f = prev[x].expect("reached vertex has a predecessor");
            path.push(f);
            let (a, b, _) = edges[f];
            x = if a == x { b } else { a };
        }
        // path lists u -> v; the face walks u -> v along e, then back v -> u
        path.reverse();
        walk.extend(path);
        faces.push(walk);
    }
    Complex2::new(n, edges, faces).expect("random faces are closed walks")
}
