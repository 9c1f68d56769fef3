//! Exact class minima through the homology cover of the 1-skeleton.
//!
//! Each edge carries the class of its fundamental cycle as a voltage, so a
//! closed walk's class is the xor of its voltages. The cheapest closed walk
//! in class β is a shortest path from (x, 0) to (x, β) in the 2^b1-sheeted
//! cover, minimized over base points x. A minimal cycle splits into closed
//! walks whose classes sum to its own class, so the minimum of class α is the
//! cheapest way to write α as a sum of such walk classes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::Objective;
use crate::complex::{Chain1, Complex2};
use crate::error::Result;
use crate::homology::HomologyBasis;

/// Minimal objective value per class, indexed by the class coordinates read
/// as a binary number (coordinate i is bit i).
#[derive(Clone, Debug)]
pub struct ClassMinima {
    pub b1: usize,
    pub values: Vec<f64>,
    pub reps: Vec<Chain1>,
}

impl ClassMinima {
    pub fn class_index(coords: &crate::gf2::BitVec) -> usize {
        coords.ones().fold(0, |acc, i| acc | 1 << i)
    }
}

#[derive(PartialEq, PartialOrd)]
struct Key(f64);
impl Eq for Key {}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Dijkstra in the voltage cover from (x, 0). Returns distances and the
/// predecessor edge of every state.
fn cover_dijkstra(k: &Complex2, inc: &[Vec<usize>], volt: &[usize], w: &[f64], b1: usize, x: usize) -> (Vec<f64>, Vec<usize>) {
    let sheets = 1usize << b1;
    let n = k.n_vertices() * sheets;
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let state = |v: usize, m: usize| v * sheets + m;
    dist[state(x, 0)] = 0.0;
    let mut heap = BinaryHeap::from([Reverse((Key(0.0), state(x, 0)))]);
    while let Some(Reverse((Key(d), s))) = heap.pop() {
        if d > dist[s] {
            continue;
        }
        let (v, m) = (s / sheets, s % sheets);
        for &e in &inc[v] {
            let t = state(k.edge(e).other(v), m ^ volt[e]);
            let nd = d + w[e];
            if nd < dist[t] {
                dist[t] = nd;
                pred[t] = e;
                heap.push(Reverse((Key(nd), t)));
            }
        }
    }
    (dist, pred)
}

/// Minimal values and representatives for every class, or `None` when the
/// cover search would exceed `work_limit` elementary steps.
pub fn class_minima(k: &Complex2, basis: &HomologyBasis, obj: &Objective, work_limit: u64) -> Result<Option<ClassMinima>> {
    obj.check(k)?;
    let b1 = basis.b1();
    let (nv, ne) = (k.n_vertices() as u64, k.n_edges() as u64);
    if b1 > 16 {
        return Ok(None);
    }
    let classes = 1usize << b1;
    let work = nv.saturating_mul(classes as u64).saturating_mul(nv + 2 * ne) + (classes as u64).pow(2);
    if work > work_limit {
        return Ok(None);
    }
    let forest = k.spanning_forest();
    let mut volt = vec![0usize; k.n_edges()];
    for (e, z) in forest.complement_edges().into_iter().zip(&basis.cycle_basis) {
        volt[e] = ClassMinima::class_index(&basis.class_coordinates(k, z)?);
    }
    let mut inc = vec![Vec::new(); k.n_vertices()];
    for (e, edge) in k.edges().iter().enumerate() {
        inc[edge.u].push(e);
        if !edge.is_loop() {
            inc[edge.v].push(e);
        }
    }
    let w = obj.weights();

    // cheapest closed walk per class, with its base point
    let per_base: Vec<Vec<f64>> = (0..k.n_vertices())
        .into_par_iter()
        .map(|x| {
            let (dist, _) = cover_dijkstra(k, &inc, &volt, w, b1, x);
            (0..classes).map(|m| dist[x * classes + m]).collect()
        })
        .collect();
    let mut walk_cost = vec![f64::INFINITY; classes];
    let mut walk_base = vec![usize::MAX; classes];
    for (x, row) in per_base.iter().enumerate() {
        for m in 1..classes {
            if row[m] < walk_cost[m] {
                walk_cost[m] = row[m];
                walk_base[m] = x;
            }
        }
    }
    let mut walk_chain: Vec<Option<Chain1>> = vec![None; classes];
    for m in 1..classes {
        let x = walk_base[m];
        if x == usize::MAX {
            continue;
        }
        let (_, pred) = cover_dijkstra(k, &inc, &volt, w, b1, x);
        let mut c = Chain1::zero(k.n_edges());
        let (mut v, mut s) = (x, m);
        while !(v == x && s == 0) {
            let e = pred[v * classes + s];
            c.toggle(e);
            v = k.edge(e).other(v);
            s ^= volt[e];
        }
        walk_chain[m] = Some(c);
    }

    // cheapest sums of walk classes
    let mut values = vec![f64::INFINITY; classes];
    let mut via = vec![(usize::MAX, usize::MAX); classes];
    let mut done = vec![false; classes];
    let mut settled = Vec::with_capacity(classes);
    values[0] = 0.0;
    for _ in 0..classes {
        let Some(a) = (0..classes).filter(|&a| !done[a] && values[a].is_finite()).min_by(|&a, &b| values[a].total_cmp(&values[b])) else {
            break;
        };
        done[a] = true;
        settled.push(a);
        for m in 1..classes {
            let t = a ^ m;
            let nv = values[a] + walk_cost[m];
            if !done[t] && nv < values[t] {
                values[t] = nv;
                via[t] = (a, m);
            }
        }
    }
    let mut reps = vec![Chain1::zero(k.n_edges()); classes];
    for &a in settled.iter().skip(1) {
        let (prev, m) = via[a];
        let mut c = reps[prev].clone();
        c += walk_chain[m].as_ref().expect("finite walk classes have chains");
        reps[a] = c;
    }
    Ok(Some(ClassMinima { b1, values, reps }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology_basis;
    use crate::minrep::{exact_min_by, DEFAULT_EXACT_CAP};
    use crate::spaces::{csaszar_torus, gen_cycle, gen_product_complex, klein_bottle};

    fn agrees_with_coset_search(k: &Complex2) {
        let hb = homology_basis(k);
        let obj = Objective::length(k);
        let cm = class_minima(k, &hb, &obj, u64::MAX).unwrap().unwrap();
        for a in 1..1usize << hb.b1() {
            let coords = crate::gf2::BitVec::from_indices(hb.b1(), (0..hb.b1()).filter(|i| a >> i & 1 == 1));
            let z = hb.class_representative(&coords).unwrap();
            let exact = exact_min_by(k, &hb, &z, &obj, DEFAULT_EXACT_CAP).unwrap();
            assert!((cm.values[a] - exact.length).abs() < 1e-9, "class {a}");
            assert!(hb.same_class(k, &z, &cm.reps[a]).unwrap());
            assert!((obj.value(&cm.reps[a]) - cm.values[a]).abs() < 1e-9);
        }
    }

    #[test]
    fn matches_exact_search() {
        agrees_with_coset_search(&csaszar_torus());
        agrees_with_coset_search(&klein_bottle(3, 4).unwrap());
        let c3 = gen_cycle(3, 1.0).unwrap();
        let c5 = gen_cycle(5, 2.0).unwrap();
        agrees_with_coset_search(&gen_product_complex(&c3, &c5).unwrap());
    }

    #[test]
    fn large_flat_torus() {
        let k = gen_product_complex(&gen_cycle(12, 1.0).unwrap(), &gen_cycle(16, 1.0).unwrap()).unwrap();
        let hb = homology_basis(&k);
        let cm = class_minima(&k, &hb, &Objective::length(&k), u64::MAX).unwrap().unwrap();
        let mut v = cm.values.clone();
        v.sort_by(f64::total_cmp);
        assert_eq!(v, vec![0.0, 12.0, 16.0, 28.0]);
        assert!(class_minima(&k, &hb, &Objective::length(&k), 10).unwrap().is_none());
    }
}
