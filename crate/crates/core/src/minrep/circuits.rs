use std::collections::{BTreeSet, HashMap};

use super::Objective;
use crate::complex::{is_cycle, Chain1, Complex2, Step};
use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Splits the support of a cycle into edge-disjoint simple closed walks.
///
/// Walks start at the lowest vertex with unused edges and always take the
/// lowest unused incident edge; a circuit is cut off whenever the walk
/// revisits a vertex.
pub fn circuit_decompose(c: &Chain1, k: &Complex2) -> Result<Vec<Vec<Step>>> {
    if !is_cycle(k, c)? {
        return Err(Error::NotACycle);
    }
    let mut unused: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k.n_vertices()];
    for e in c.support() {
        let edge = k.edge(e);
        unused[edge.u].insert(e);
        unused[edge.v].insert(e);
    }
    let mut circuits = Vec::new();
    for s in 0..k.n_vertices() {
        while !unused[s].is_empty() {
            let mut verts = vec![s];
            let mut steps: Vec<Step> = Vec::new();
            let mut pos = HashMap::from([(s, 0usize)]);
            let mut cur = s;
            loop {
                let Some(&e) = unused[cur].iter().next() else {
                    // only the start vertex can run dry, and only with an empty stack
                    debug_assert!(cur == s && steps.is_empty());
                    break;
                };
                let edge = k.edge(e);
                unused[edge.u].remove(&e);
                unused[edge.v].remove(&e);
                let next = edge.other(cur);
                let step = Step {
                    edge: e,
                    reversed: !edge.is_loop() && edge.u != cur,
                };
                if let Some(&p) = pos.get(&next) {
                    let mut circuit = steps.split_off(p);
                    circuit.push(step);
                    circuits.push(circuit);
                    for v in verts.drain(p + 1..) {
                        pos.remove(&v);
                    }
                    cur = next;
                    if steps.is_empty() && unused[s].is_empty() {
                        break;
                    }
                } else {
                    pos.insert(next, verts.len());
                    verts.push(next);
                    steps.push(step);
                    cur = next;
                }
            }
        }
    }
    Ok(circuits)
}

pub(super) fn is_local_min(k: &Complex2, bits: &BitVec, obj: &Objective) -> bool {
    let tol = obj.tolerance();
    (0..k.n_faces()).all(|f| obj.face_delta(k, bits, f) >= -tol)
}

/// True iff adding the boundary of any single face does not shorten `c`.
pub fn local_minimality_check(k: &Complex2, c: &Chain1) -> bool {
    is_local_min(k, c.bits(), &Objective::length(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::gen_cycle;

    fn two_triangles() -> Complex2 {
        Complex2::new(
            6,
            vec![(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (3, 4, 1.0), (4, 5, 1.0), (5, 3, 1.0)],
            vec![vec![0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn triangles() {
        let k = two_triangles();
        let one = Chain1::from_edges(6, [0, 1, 2]).unwrap();
        assert_eq!(circuit_decompose(&one, &k).unwrap().len(), 1);
        let both = Chain1::from_edges(6, 0..6).unwrap();
        let cs = circuit_decompose(&both, &k).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn figure_eight() {
        let k = Complex2::new(1, vec![(0, 0, 1.0), (0, 0, 2.0)], vec![]).unwrap();
        let c = Chain1::from_edges(2, [0, 1]).unwrap();
        assert_eq!(circuit_decompose(&c, &k).unwrap().len(), 2);
        // two triangles sharing vertex 0
        let k = Complex2::new(
            5,
            vec![(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 3, 1.0), (3, 4, 1.0), (4, 0, 1.0)],
            vec![],
        )
        .unwrap();
        let c = Chain1::from_edges(6, 0..6).unwrap();
        let cs = circuit_decompose(&c, &k).unwrap();
        assert_eq!(cs.len(), 2);
        for walk in &cs {
            assert_eq!(k.step_tail(walk[0]), k.step_head(*walk.last().unwrap()));
        }
    }

    #[test]
    fn rejects_non_cycles() {
        let k = two_triangles();
        let c = Chain1::from_edges(6, [0]).unwrap();
        assert_eq!(circuit_decompose(&c, &k), Err(Error::NotACycle));
    }

    #[test]
    fn local_minimality() {
        let k = two_triangles();
        let tri = Chain1::from_edges(6, [0, 1, 2]).unwrap();
        assert!(!local_minimality_check(&k, &tri));
        assert!(local_minimality_check(&k, &Chain1::zero(6)));
        let c7 = gen_cycle(7, 1.0).unwrap();
        assert!(local_minimality_check(&c7, &Chain1::from_edges(7, 0..7).unwrap()));
    }
}
