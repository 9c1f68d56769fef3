//! Finite covers from permutation representations.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::complex::{Complex2, Step};
use crate::error::{Error, Result};

/// A permutation of {0..d}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm((0..d).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidPermRep(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// The cyclic shift `i -> i + k mod d`.
    pub fn shift(d: usize, k: usize) -> Self {
        Perm((0..d).map(|i| (i + k) % d).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)`; `()` is the identity.
    pub fn parse_cycles(text: &str, d: usize) -> Result<Self> {
        let bad = |msg: String| Error::InvalidPermRep(format!("`{text}`: {msg}"));
        let mut images: Vec<usize> = (0..d).collect();
        let mut moved = vec![false; d];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .ok_or_else(|| bad("expected `(`".into()))?;
            let close = inner.find(')').ok_or_else(|| bad("unclosed cycle".into()))?;
            let cycle: Vec<usize> = inner[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<usize>() {
                    Ok(i) if (1..=d).contains(&i) => Ok(i - 1),
                    _ => Err(bad(format!("bad point `{t}` for degree {d}"))),
                })
                .collect::<Result<_>>()?;
            for (i, &a) in cycle.iter().enumerate() {
                if moved[a] {
                    return Err(bad(format!("point {} appears twice", a + 1)));
                }
                moved[a] = true;
                images[a] = cycle[(i + 1) % cycle.len()];
            }
            rest = inner[close + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    /// 1-based cycle notation, each cycle starting at its smallest point,
    /// fixed points omitted.
    pub fn to_cycles(&self) -> String {
        let mut out = String::new();
        let mut seen = vec![false; self.0.len()];
        for s in 0..self.0.len() {
            if seen[s] || self.0[s] == s {
                continue;
            }
            out.push('(');
            let mut i = s;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&(i + 1).to_string());
                first = false;
                i = self.0[i];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycles())
    }
}

/// One permutation per listed edge; unlisted edges lift to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermRep {
    degree: usize,
    perms: BTreeMap<usize, Perm>,
}

impl PermRep {
    pub fn new(degree: usize, perms: BTreeMap<usize, Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermRep("degree must be at least 1".into()));
        }
        if let Some((e, p)) = perms.iter().find(|(_, p)| p.degree() != degree) {
            return Err(Error::InvalidPermRep(format!(
                "edge {e} carries a permutation of degree {}, expected {degree}",
                p.degree()
            )));
        }
        Ok(Self { degree, perms })
    }

    pub fn trivial(degree: usize) -> Self {
        Self {
            degree: degree.max(1),
            perms: BTreeMap::new(),
        }
    }

    /// Regular cover for the abelian group Z_{m₁} × … × Z_{m_r}: each edge
    /// carries a group element, and the voltages are gauged to vanish on the
    /// spanning forest so that only complement edges get permutations.
    pub fn from_abelian_voltages(k: &Complex2, moduli: &[usize], voltage: impl Fn(usize) -> Vec<i64>) -> Result<Self> {
        if moduli.iter().any(|&m| m == 0) {
            return Err(Error::InvalidPermRep("moduli must be positive".into()));
        }
        let r = moduli.len();
        let degree: usize = moduli.iter().product();
        let volt: Vec<Vec<i64>> = (0..k.n_edges())
            .map(|e| {
                let v = voltage(e);
                if v.len() != r {
                    return Err(Error::InvalidPermRep(format!(
                        "edge {e} voltage has {} coordinates, expected {r}",
                        v.len()
                    )));
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let forest = k.spanning_forest();
        let mut order: Vec<usize> = (0..k.n_vertices()).collect();
        order.sort_by_key(|&v| forest.depth[v]);
        let mut potential = vec![vec![0i64; r]; k.n_vertices()];
        for &y in &order {
            let Some(e) = forest.parent_edge[y] else { continue };
            let edge = k.edge(e);
            let x = edge.other(y);
            for i in 0..r {
                potential[y][i] = if edge.v == y {
                    potential[x][i] + volt[e][i]
                } else {
                    potential[x][i] - volt[e][i]
                };
            }
        }
        let encode = |g: &[i64]| -> usize {
            let mut idx = 0;
            for i in 0..r {
                idx = idx * moduli[i] + g[i].rem_euclid(moduli[i] as i64) as usize;
            }
            idx
        };
        let decode = |mut idx: usize| -> Vec<i64> {
            let mut g = vec![0i64; r];
            for i in (0..r).rev() {
                g[i] = (idx % moduli[i]) as i64;
                idx /= moduli[i];
            }
            g
        };
        let mut perms = BTreeMap::new();
        for e in forest.complement_edges() {
            let edge = k.edge(e);
            let shift: Vec<i64> = (0..r)
                .map(|i| potential[edge.u][i] + volt[e][i] - potential[edge.v][i])
                .collect();
            if shift.iter().zip(moduli).all(|(s, &m)| s.rem_euclid(m as i64) == 0) {
                continue;
            }
            let images = (0..degree)
                .map(|g| {
                    let h: Vec<i64> = decode(g).iter().zip(&shift).map(|(a, b)| a + b).collect();
                    encode(&h)
                })
                .collect();
            perms.insert(e, Perm(images));
        }
        Ok(Self { degree, perms })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perms(&self) -> &BTreeMap<usize, Perm> {
        &self.perms
    }

    fn image(&self, e: usize, sheet: usize) -> usize {
        self.perms.get(&e).map_or(sheet, |p| p.apply(sheet))
    }

    fn preimage(&self, e: usize, sheet: usize) -> usize {
        self.perms
            .get(&e)
            .map_or(sheet, |p| p.images().iter().position(|&j| j == sheet).expect("permutation"))
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for p in self.perms.values() {
                for j in [p.apply(i), p.inverse().apply(i)] {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// A cover together with its projection onto the base.
#[derive(Clone, Debug)]
pub struct Cover {
    pub complex: Complex2,
    pub degree: usize,
    pub connected: bool,
    pub vertex_proj: Vec<usize>,
    pub edge_proj: Vec<usize>,
    pub face_proj: Vec<usize>,
}

/// Sheet `i` of vertex `v` is vertex `i·V + v`; edge `e` leaving sheet `j`
/// is edge `j·E + e` and runs from `(u, j)` to `(v, σₑ(j))`; face `f` starting
/// on sheet `j` is face `j·F + f`.
pub fn gen_cover(k: &Complex2, rep: &PermRep) -> Result<Cover> {
    let d = rep.degree();
    if let Some(&e) = rep.perms.keys().find(|&&e| e >= k.n_edges()) {
        return Err(Error::InvalidPermRep(format!(
            "permutation on edge {e}, but the base has {} edges",
            k.n_edges()
        )));
    }
    let (nv, ne, nf) = (k.n_vertices(), k.n_edges(), k.n_faces());
    let mut edges = Vec::with_capacity(d * ne);
    for j in 0..d {
        for (e, edge) in k.edges().iter().enumerate() {
            edges.push((j * nv + edge.u, rep.image(e, j) * nv + edge.v, edge.length));
        }
    }
    let mut faces = Vec::with_capacity(d * nf);
    for j in 0..d {
        for f in 0..nf {
            let mut sheet = j;
            let mut walk = Vec::with_capacity(k.face_walk(f).len());
            for &s in k.face_walk(f) {
                if s.reversed {
                    sheet = rep.preimage(s.edge, sheet);
                    walk.push(Step::rev(sheet * ne + s.edge));
                } else {
                    walk.push(Step::fwd(sheet * ne + s.edge));
                    sheet = rep.image(s.edge, sheet);
                }
            }
            if sheet != j {
                return Err(Error::FaceDoesNotLift { face: f });
            }
            faces.push(walk);
        }
    }
    let connected = rep.is_transitive();
    if !connected {
        log::warn!("permutation action is not transitive; the degree-{d} cover is disconnected");
    }
    let complex = Complex2::with_steps(d * nv, edges, faces)?;
    Ok(Cover {
        complex,
        degree: d,
        connected,
        vertex_proj: (0..d * nv).map(|i| i % nv).collect(),
        edge_proj: (0..d * ne).map(|i| i % ne).collect(),
        face_proj: (0..d * nf).map(|i| i % nf).collect(),
    })
}
