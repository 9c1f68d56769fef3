//! Weighted 2-dimensional cell complexes and their mod-2 chains.
//!
//! Faces are closed edge walks of any length, so triangles, squares and
//! one-vertex polygons with loop edges all fit the same model. Loops and
//! multi-edges are allowed. For a non-loop edge the direction a face walk
//! traverses it is forced by the walk; for a loop it is not, so each face
//! step carries an explicit `reversed` flag that only matters for loops
//! (it decides how faces lift to covering spaces).

use std::collections::VecDeque;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `w`. For a loop this is `w` itself.
    pub fn other(&self, w: usize) -> usize {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

/// One step of a face boundary walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    /// Traversed from `v` to `u` instead of `u` to `v`.
    pub reversed: bool,
}

impl Step {
    pub fn fwd(edge: usize) -> Self {
        Step {
            edge,
            reversed: false,
        }
    }

    pub fn rev(edge: usize) -> Self {
        Step {
            edge,
            reversed: true,
        }
    }

    pub fn inverse(self) -> Self {
        Step {
            edge: self.edge,
            reversed: !self.reversed,
        }
    }
}

/// A weighted 2-complex. Immutable once built.
#[derive(Clone, Debug)]
pub struct Complex2 {
    n_vertices: usize,
    edges: Vec<Edge>,
    faces: Vec<Vec<Step>>,
    face_start: Vec<usize>,
    face_support: Vec<Vec<usize>>,
    edge_faces: Vec<Vec<usize>>,
    volume: f64,
    euler: i64,
}

impl Complex2 {
    /// Builds a complex from unsigned face edge lists. Loop edges are taken
    /// as traversed forward.
    pub fn new(
        n_vertices: usize,
        edges: Vec<(usize, usize, f64)>,
        faces: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let faces = faces
            .into_iter()
            .map(|f| f.into_iter().map(Step::fwd).collect())
            .collect();
        Self::with_steps(n_vertices, edges, faces)
    }

    /// Builds a complex from face walks given as steps. Directions of
    /// non-loop steps are re-derived from the walk.
    pub fn with_steps(
        n_vertices: usize,
        edges: Vec<(usize, usize, f64)>,
        faces: Vec<Vec<Step>>,
    ) -> Result<Self> {
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(u, v, length)| Edge { u, v, length })
            .collect();
        for (i, e) in edges.iter().enumerate() {
            for w in [e.u, e.v] {
                if w >= n_vertices {
                    return Err(Error::DanglingVertex {
                        edge: i,
                        vertex: w,
                        n_vertices,
                    });
                }
            }
            if !(e.length > 0.0) || !e.length.is_finite() {
                return Err(Error::NonPositiveLength {
                    edge: i,
                    length: e.length,
                });
            }
        }

        let mut walks = Vec::with_capacity(faces.len());
        let mut starts = Vec::with_capacity(faces.len());
        for (fi, face) in faces.iter().enumerate() {
            if let Some(s) = face.iter().find(|s| s.edge >= edges.len()) {
                return Err(Error::DanglingEdge {
                    face: fi,
                    edge: s.edge,
                    n_edges: edges.len(),
                });
            }
            let (start, walk) = orient_walk(&edges, face).ok_or(Error::OpenFace { face: fi })?;
            walks.push(walk);
            starts.push(start);
        }

        let face_support: Vec<Vec<usize>> = walks
            .iter()
            .map(|w: &Vec<Step>| {
                let mut ids: Vec<usize> = w.iter().map(|s| s.edge).collect();
                ids.sort_unstable();
                odd_multiplicity(&ids)
            })
            .collect();
        let mut edge_faces = vec![Vec::new(); edges.len()];
        for (fi, sup) in face_support.iter().enumerate() {
            for &e in sup {
                edge_faces[e].push(fi);
            }
        }

        let volume = if walks.is_empty() {
            edges.iter().map(|e| e.length).sum()
        } else {
            walks.len() as f64
        };
        let euler = n_vertices as i64 - edges.len() as i64 + walks.len() as i64;

        Ok(Self {
            n_vertices,
            edges,
            faces: walks,
            face_start: starts,
            face_support,
            edge_faces,
            volume,
            euler,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Oriented boundary walk of a face.
    pub fn face_walk(&self, f: usize) -> &[Step] {
        &self.faces[f]
    }

    /// Vertex the boundary walk of `f` starts (and ends) at.
    pub fn face_start(&self, f: usize) -> usize {
        self.face_start[f]
    }

    /// Edges appearing an odd number of times on the boundary of `f`, sorted.
    pub fn face_boundary(&self, f: usize) -> &[usize] {
        &self.face_support[f]
    }

    /// Faces whose mod-2 boundary contains `e`.
    pub fn faces_on_edge(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }

    /// Number of faces for 2-complexes, total edge length for graphs.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler
    }

    pub fn is_graph(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn step_tail(&self, s: Step) -> usize {
        let e = &self.edges[s.edge];
        if s.reversed {
            e.v
        } else {
            e.u
        }
    }

    pub fn step_head(&self, s: Step) -> usize {
        let e = &self.edges[s.edge];
        if s.reversed {
            e.u
        } else {
            e.v
        }
    }

    /// Sequence of vertices visited by the walk of `f`, starting vertex first
    /// and not repeated at the end.
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&s| self.step_tail(s)).collect()
    }

    /// Incident edges per vertex, each list in increasing edge order. A loop
    /// appears once.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u].push(i);
            if e.v != e.u {
                inc[e.v].push(i);
            }
        }
        inc
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    pub fn min_edge_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.length)
            .fold(f64::INFINITY, f64::min)
    }

    /// Copy with every edge length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Complex2> {
        if !(factor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        let mut out = self.clone();
        for e in &mut out.edges {
            e.length *= factor;
        }
        if out.is_graph() {
            out.volume = out.edges.iter().map(|e| e.length).sum();
        }
        Ok(out)
    }

    /// Boundary matrix of ∂₂ with one row per edge and one column per face.
    pub fn boundary2_matrix(&self) -> BitMatrix {
        let cols: Vec<BitVec> = (0..self.n_faces())
            .map(|f| BitVec::from_indices(self.n_edges(), self.face_support[f].iter().copied()))
            .collect();
        BitMatrix::from_columns(self.n_edges(), &cols).expect("columns sized by edge count")
    }

    /// Boundary matrix of ∂₁ with one row per vertex and one column per edge.
    pub fn boundary1_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.n_vertices, self.n_edges());
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                m.set(e.u, i, true);
                m.set(e.v, i, true);
            }
        }
        m
    }

    /// Breadth-first spanning forest, roots in vertex order and edges scanned
    /// in index order. Returns the tree flag per edge.
    pub fn spanning_forest(&self) -> SpanningForest {
        let inc = self.incidence();
        let mut parent_edge = vec![None; self.n_vertices];
        let mut component = vec![usize::MAX; self.n_vertices];
        let mut depth = vec![0usize; self.n_vertices];
        let mut in_tree = vec![false; self.n_edges()];
        let mut roots = Vec::new();
        for r in 0..self.n_vertices {
            if component[r] != usize::MAX {
                continue;
            }
            let c = roots.len();
            roots.push(r);
            component[r] = c;
            let mut queue = VecDeque::from([r]);
            while let Some(x) = queue.pop_front() {
                for &e in &inc[x] {
                    let y = self.edges[e].other(x);
                    if component[y] == usize::MAX {
                        component[y] = c;
                        parent_edge[y] = Some(e);
                        depth[y] = depth[x] + 1;
                        in_tree[e] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        SpanningForest {
            parent_edge,
            component,
            depth,
            in_tree,
            roots,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpanningForest {
    pub parent_edge: Vec<Option<usize>>,
    pub component: Vec<usize>,
    pub depth: Vec<usize>,
    pub in_tree: Vec<bool>,
    pub roots: Vec<usize>,
}

impl SpanningForest {
    pub fn n_components(&self) -> usize {
        self.roots.len()
    }

    /// Edges not in the forest, in index order.
    pub fn complement_edges(&self) -> Vec<usize> {
        (0..self.in_tree.len()).filter(|&e| !self.in_tree[e]).collect()
    }

    /// Tree path between two vertices of one component, as edge indices.
    pub fn tree_path(&self, k: &Complex2, mut a: usize, mut b: usize) -> Vec<usize> {
        let mut from_a = Vec::new();
        let mut from_b = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let e = self.parent_edge[a].expect("non-root has a parent");
                from_a.push(e);
                a = k.edge(e).other(a);
            } else {
                let e = self.parent_edge[b].expect("non-root has a parent");
                from_b.push(e);
                b = k.edge(e).other(b);
            }
        }
        from_b.reverse();
        from_a.extend(from_b);
        from_a
    }
}

/// Walks the face from each admissible start and returns the oriented walk.
fn orient_walk(edges: &[Edge], face: &[Step]) -> Option<(usize, Vec<Step>)> {
    let first = face.first()?;
    let e0 = &edges[first.edge];
    let starts: Vec<(usize, bool)> = if e0.is_loop() {
        vec![(e0.u, first.reversed)]
    } else {
        vec![(e0.u, false), (e0.v, true)]
    };
    'outer: for (start, rev0) in starts {
        let mut walk = Vec::with_capacity(face.len());
        let mut cur = start;
        for (i, s) in face.iter().enumerate() {
            let e = &edges[s.edge];
            let reversed = if e.is_loop() {
                if cur != e.u {
                    continue 'outer;
                }
                if i == 0 {
                    rev0
                } else {
                    s.reversed
                }
            } else if cur == e.u {
                false
            } else if cur == e.v {
                true
            } else {
                continue 'outer;
            };
            cur = if reversed { e.u } else { e.v };
            walk.push(Step {
                edge: s.edge,
                reversed,
            });
        }
        if cur == start {
            return Some((start, walk));
        }
    }
    None
}

fn odd_multiplicity(sorted: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(sorted[i]);
        }
        i = j;
    }
    out
}

/// A mod-2 1-chain: a set of edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain1(BitVec);

impl Chain1 {
    pub fn zero(n_edges: usize) -> Self {
        Chain1(BitVec::zeros(n_edges))
    }

    /// Chain with the given edges; repeated edges cancel.
    pub fn from_edges(n_edges: usize, edges: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v = BitVec::zeros(n_edges);
        for e in edges {
            if e >= n_edges {
                return Err(Error::ChainOutOfRange {
                    index: e,
                    size: n_edges,
                });
            }
            v.flip(e);
        }
        Ok(Chain1(v))
    }

    pub fn from_bits(bits: BitVec) -> Self {
        Chain1(bits)
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn into_bits(self) -> BitVec {
        self.0
    }

    /// Size of the ambient edge set.
    pub fn n_edges(&self) -> usize {
        self.0.len()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn support_vec(&self) -> Vec<usize> {
        self.0.ones().collect()
    }

    /// Number of edges in the support.
    pub fn weight(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.get(e)
    }

    pub fn toggle(&mut self, e: usize) {
        self.0.flip(e)
    }

    /// Adds the mod-2 boundary of face `f`.
    pub fn add_face_boundary(&mut self, k: &Complex2, f: usize) {
        for &e in k.face_boundary(f) {
            self.0.flip(e);
        }
    }

    pub fn lex_cmp(&self, other: &Chain1) -> std::cmp::Ordering {
        self.0.lex_cmp(&other.0)
    }

    fn check(&self, k: &Complex2) -> Result<()> {
        if self.n_edges() != k.n_edges() {
            return Err(Error::DimensionMismatch {
                expected: k.n_edges(),
                found: self.n_edges(),
            });
        }
        Ok(())
    }
}

impl AddAssign<&Chain1> for Chain1 {
    fn add_assign(&mut self, rhs: &Chain1) {
        self.0.xor_assign(&rhs.0);
    }
}

impl Add<&Chain1> for &Chain1 {
    type Output = Chain1;

    fn add(self, rhs: &Chain1) -> Chain1 {
        Chain1(self.0.xor(&rhs.0))
    }
}

impl Add for Chain1 {
    type Output = Chain1;

    fn add(mut self, rhs: Chain1) -> Chain1 {
        self.0.xor_assign(&rhs.0);
        self
    }
}

/// A mod-2 0-chain: a set of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain0(BitVec);

impl Chain0 {
    pub fn support_vec(&self) -> Vec<usize> {
        self.0.ones().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }
}

/// Symmetric difference of the boundaries of the given faces.
pub fn boundary2(k: &Complex2, faces: impl IntoIterator<Item = usize>) -> Result<Chain1> {
    let mut c = Chain1::zero(k.n_edges());
    for f in faces {
        if f >= k.n_faces() {
            return Err(Error::ChainOutOfRange {
                index: f,
                size: k.n_faces(),
            });
        }
        c.add_face_boundary(k, f);
    }
    Ok(c)
}

/// Endpoints of the support edges, mod 2. Loops contribute nothing.
pub fn boundary1(k: &Complex2, c: &Chain1) -> Result<Chain0> {
    c.check(k)?;
    let mut v = BitVec::zeros(k.n_vertices());
    for e in c.support() {
        let edge = k.edge(e);
        if !edge.is_loop() {
            v.flip(edge.u);
            v.flip(edge.v);
        }
    }
    Ok(Chain0(v))
}

pub fn is_cycle(k: &Complex2, c: &Chain1) -> Result<bool> {
    Ok(boundary1(k, c)?.is_zero())
}

/// Sum of the lengths of the support edges.
pub fn chain_length(k: &Complex2, c: &Chain1) -> f64 {
    c.support().map(|e| k.edge(e).length).sum()
}
