use proptest::prelude::*;
use reprlab_core::complex::{boundary1, boundary2, chain_length, Chain1, Complex2};
use reprlab_core::gf2::{f2_rank, f2_solve, BitMatrix, BitVec};
use reprlab_core::homology::{betti, homology_basis, same_class};
use reprlab_core::minrep::{
    circuit_decompose, exact_min_representative, local_minimality_check, local_search_reduce, r_length,
    DescentParams, MetricProfile,
};
use reprlab_core::spaces::{
    gen_cover, gen_cycle, gen_path, gen_product_complex, gen_wedge, random_complex, Perm, PermRep,
    RandomComplexParams,
};

fn small_params() -> impl Strategy<Value = (u64, RandomComplexParams)> {
    (any::<u64>(), 2usize..9, 0usize..7, 0usize..8).prop_map(|(seed, v, extra, faces)| {
        (
            seed,
            RandomComplexParams {
                vertices: v,
                extra_edges: extra,
                faces,
                max_length: 3,
                loop_prob: 0.1,
            },
        )
    })
}

fn bitvec(len: usize) -> impl Strategy<Value = BitVec> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVec::from_bools(&b))
}

/// A random cycle: a combination of fundamental cycles plus face boundaries.
fn random_cycle(k: &Complex2, pick: &[bool]) -> Chain1 {
    let hb = homology_basis(k);
    let mut z = Chain1::zero(k.n_edges());
    let mut it = pick.iter().cycle();
    for c in &hb.cycle_basis {
        if *it.next().unwrap() {
            z += c;
        }
    }
    for f in 0..k.n_faces() {
        if *it.next().unwrap() {
            z.add_face_boundary(k, f);
        }
    }
    z
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_of_boundary_vanishes((seed, p) in small_params()) {
        let k = random_complex(seed, &p);
        for f in 0..k.n_faces() {
            prop_assert!(boundary1(&k, &boundary2(&k, [f]).unwrap()).unwrap().is_zero());
        }
        let b = betti(&k);
        prop_assert_eq!(b.euler(), k.euler_characteristic());
    }

    #[test]
    fn rank_of_transpose(rows in 1usize..12, cols in 1usize..12, seed in any::<u64>()) {
        let mut m = BitMatrix::zeros(rows, cols);
        let mut s = seed;
        for r in 0..rows {
            for c in 0..cols {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                m.set(r, c, s >> 62 == 1);
            }
        }
        prop_assert_eq!(f2_rank(&m), f2_rank(&m.transpose()));
    }

    #[test]
    fn solve_is_correct(cols in proptest::collection::vec(bitvec(9), 1..8), x in bitvec(7)) {
        let n = cols.len();
        let m = BitMatrix::from_columns(9, &cols).unwrap();
        let x = BitVec::from_indices(n, x.ones().filter(|&i| i < n));
        let b = m.mul_vec(&x).unwrap();
        let y = f2_solve(&m, &b).unwrap().expect("b is in the column space");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn same_class_is_an_equivalence((seed, p) in small_params(), picks in proptest::collection::vec(any::<bool>(), 3..40)) {
        let k = random_complex(seed, &p);
        let a = random_cycle(&k, &picks);
        let rotated: Vec<bool> = picks.iter().skip(1).chain(picks.iter().take(1)).copied().collect();
        let b = random_cycle(&k, &rotated);
        let flipped: Vec<bool> = picks.iter().map(|x| !x).collect();
        let c = random_cycle(&k, &flipped);
        prop_assert!(same_class(&k, &a, &a).unwrap());
        prop_assert_eq!(same_class(&k, &a, &b).unwrap(), same_class(&k, &b, &a).unwrap());
        if same_class(&k, &a, &b).unwrap() && same_class(&k, &b, &c).unwrap() {
            prop_assert!(same_class(&k, &a, &c).unwrap());
        }
        let hb = homology_basis(&k);
        prop_assert_eq!(hb.same_class(&k, &a, &b).unwrap(), same_class(&k, &a, &b).unwrap());
    }

    #[test]
    fn coordinates_are_linear((seed, p) in small_params(), picks in proptest::collection::vec(any::<bool>(), 3..40)) {
        let k = random_complex(seed, &p);
        let hb = homology_basis(&k);
        let a = random_cycle(&k, &picks);
        let flipped: Vec<bool> = picks.iter().map(|x| !x).collect();
        let b = random_cycle(&k, &flipped);
        let ca = hb.class_coordinates(&k, &a).unwrap();
        let cb = hb.class_coordinates(&k, &b).unwrap();
        prop_assert_eq!(hb.class_coordinates(&k, &(&a + &b)).unwrap(), ca.xor(&cb));
        let rep = hb.class_representative(&ca).unwrap();
        prop_assert!(hb.same_class(&k, &rep, &a).unwrap());
    }

    #[test]
    fn reductions_stay_in_class((seed, p) in small_params(), picks in proptest::collection::vec(any::<bool>(), 3..40)) {
        let k = random_complex(seed, &p);
        let hb = homology_basis(&k);
        let z = random_cycle(&k, &picks);
        let exact = exact_min_representative(&k, &hb, &z).unwrap();
        let desc = local_search_reduce(&k, &z, &DescentParams::default()).unwrap();
        prop_assert!(same_class(&k, &z, &exact.cycle).unwrap());
        prop_assert!(same_class(&k, &z, &desc.cycle).unwrap());
        prop_assert!(desc.length + 1e-9 >= exact.length);
        prop_assert!(desc.length <= chain_length(&k, &z) + 1e-9);
        prop_assert!(local_minimality_check(&k, &desc.cycle));
        prop_assert!(local_minimality_check(&k, &exact.cycle));

        // circuits partition the support
        let mut union = Chain1::zero(k.n_edges());
        let mut count = 0;
        for walk in circuit_decompose(&exact.cycle, &k).unwrap() {
            prop_assert_eq!(k.step_tail(walk[0]), k.step_head(*walk.last().unwrap()));
            for w in walk.windows(2) {
                prop_assert_eq!(k.step_head(w[0]), k.step_tail(w[1]));
            }
            for s in &walk {
                prop_assert!(!union.contains(s.edge));
                union.toggle(s.edge);
                count += 1;
            }
        }
        prop_assert_eq!(union, exact.cycle.clone());
        prop_assert_eq!(count, exact.cycle.weight());
    }

    #[test]
    fn scaling_lengths_scales_minima((seed, p) in small_params(), picks in proptest::collection::vec(any::<bool>(), 3..40), lambda in 0.25f64..4.0) {
        let k = random_complex(seed, &p);
        let ks = k.scaled(lambda).unwrap();
        let z = random_cycle(&k, &picks);
        let a = exact_min_representative(&k, &homology_basis(&k), &z).unwrap();
        let b = exact_min_representative(&ks, &homology_basis(&ks), &z).unwrap();
        prop_assert!((b.length - lambda * a.length).abs() <= 1e-9 * (1.0 + b.length));
        prop_assert_eq!(a.cycle, b.cycle);
    }

    #[test]
    fn r_length_is_monotone((seed, p) in small_params(), picks in proptest::collection::vec(any::<bool>(), 3..40), radii in proptest::collection::vec(0.0f64..5.0, 9)) {
        let k = random_complex(seed, &p);
        let z = random_cycle(&k, &picks);
        let base = MetricProfile::new(radii[..k.n_vertices()].to_vec(), 5.0, 0.0).unwrap();
        let mut last = chain_length(&k, &z);
        for r in [0.0, 0.5, 1.0, 2.0, 3.0, 4.5] {
            let v = r_length(&k, &z, &base.with_threshold(r).unwrap()).unwrap();
            prop_assert!(v <= last + 1e-12);
            last = v;
        }
    }

    #[test]
    fn covers_scale_counts(n in 3usize..7, d in 1usize..5, shift in 0usize..5) {
        let c = gen_cycle(n, 1.5).unwrap();
        let base = gen_product_complex(&c, &gen_path(1, 1.0).unwrap()).unwrap();
        // closing edge of C_n crossed with both ends of the segment
        let rep = PermRep::from_abelian_voltages(&base, &[d], |e| vec![i64::from(e / 2 == n - 1 && e < 2 * n) * shift as i64]).unwrap();
        let cov = gen_cover(&base, &rep).unwrap();
        prop_assert_eq!(cov.complex.n_vertices(), d * base.n_vertices());
        prop_assert_eq!(cov.complex.n_faces(), d * base.n_faces());
        prop_assert_eq!(cov.complex.volume(), d as f64 * base.volume());
        prop_assert_eq!(cov.complex.euler_characteristic(), d as i64 * base.euler_characteristic());
        prop_assert_eq!(betti(&cov.complex).euler(), cov.complex.euler_characteristic());
    }

    #[test]
    fn wedge_covers_follow_euler(k in 2usize..4, d in 1usize..6, seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let w = gen_wedge(k).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perms = std::collections::BTreeMap::new();
        for e in 0..k {
            let mut images: Vec<usize> = (0..d).collect();
            images.shuffle(&mut rng);
            perms.insert(e, Perm::from_images(images).unwrap());
        }
        perms.insert(0, Perm::shift(d, 1));
        let rep = PermRep::new(d, perms).unwrap();
        let cov = gen_cover(&w, &rep).unwrap();
        prop_assert!(cov.connected);
        prop_assert_eq!(betti(&cov.complex).b1, d * (k - 1) + 1);
    }

    #[test]
    fn kunneth_for_graph_products(a in 3usize..6, b in 1usize..4, loops in 1usize..3) {
        let g1 = gen_cycle(a, 1.0).unwrap();
        let g2 = gen_product_complex(&gen_wedge(loops).unwrap(), &gen_path(b, 1.0).unwrap()).unwrap();
        // g2 has faces, so use its 1-skeleton
        let g2 = Complex2::new(g2.n_vertices(), g2.edges().iter().map(|e| (e.u, e.v, e.length)).collect(), vec![]).unwrap();
        let p = gen_product_complex(&g1, &g2).unwrap();
        prop_assert_eq!(betti(&p).b1, betti(&g1).b1 + betti(&g2).b1);
    }
}
