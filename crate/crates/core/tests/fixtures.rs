use reprlab_core::complex::{chain_length, Chain1};
use reprlab_core::format::{read_complex, write_complex};
use reprlab_core::homology::{betti, homology_basis, Betti};
use reprlab_core::minrep::{
    anneal_reduce, exact_min_representative, normalized_r_length, AnnealParams, MetricProfile,
};
use reprlab_core::nerve::build_nerve;
use reprlab_core::spaces::{
    bs_statistics, csaszar_torus, gen_cycle, gen_product_complex, gen_surface, gen_wedge, injectivity_profile,
    klein_bottle, product_tower,
};

#[test]
fn betti_table() {
    assert_eq!(betti(&csaszar_torus()), Betti { b0: 1, b1: 2, b2: 1 });
    assert_eq!(betti(&klein_bottle(3, 3).unwrap()), Betti { b0: 1, b1: 2, b2: 1 });
    for g in [2, 3] {
        assert_eq!(betti(&gen_surface(g).unwrap()), Betti { b0: 1, b1: 2 * g, b2: 1 });
    }
    for k in 1..=8 {
        assert_eq!(betti(&gen_wedge(k).unwrap()), Betti { b0: 1, b1: k, b2: 0 });
    }
}

#[test]
fn files_round_trip() {
    for k in [csaszar_torus(), klein_bottle(4, 3).unwrap(), gen_surface(1).unwrap(), gen_wedge(3).unwrap()] {
        let text = write_complex(&k);
        let back = read_complex(&text).unwrap();
        assert_eq!(write_complex(&back), text);
        assert_eq!(betti(&back), betti(&k));
    }
}

#[test]
fn nerves_of_fixtures_transfer_homology() {
    let torus = gen_product_complex(&gen_cycle(6, 1.0).unwrap(), &gen_cycle(8, 1.0).unwrap()).unwrap();
    let cases = [
        (gen_cycle(12, 1.0).unwrap(), 2.0),
        (torus, 1.0),
        (gen_surface(2).unwrap(), 1.0),
    ];
    for (k, kappa) in cases {
        let nd = build_nerve(&k, kappa).unwrap();
        let map = nd.induced_h1_map().unwrap();
        assert!(map.surjective, "kappa {kappa}");
        assert!(map.chain_map);
        let hb = homology_basis(&k);
        for z in &hb.class_reps {
            let approx = nd.approximate_class(z).unwrap();
            let back = nd.push_cycle(&approx).unwrap();
            assert!(hb.same_class(&k, z, &back).unwrap());
            assert!(chain_length(&k, &back) <= 2.0 * kappa * approx.weight() as f64 + 1e-9);
        }
    }
}

#[test]
fn flat_torus_profile() {
    let t = gen_product_complex(&gen_cycle(6, 1.0).unwrap(), &gen_cycle(8, 1.0).unwrap()).unwrap();
    let p = injectivity_profile(&t, 10.0, 2.0).unwrap();
    assert!(p.injrad().iter().all(|&r| r == 3.0));
    assert_eq!(bs_statistics(&p).thin_fraction, 0.0);
    assert_eq!(bs_statistics(&p.with_threshold(3.0).unwrap()).thin_fraction, 1.0);
}

#[test]
fn thin_part_vanishes_along_the_product_tower() {
    let tower = product_tower(3, 4, &[1, 2, 3]).unwrap();
    let r = 2.0;
    let mut fractions = Vec::new();
    for i in 0..tower.levels.len() {
        let cov = tower.build_level(i).unwrap();
        let p = injectivity_profile(&cov.complex, 2.0 * r + 1.0, r).unwrap();
        fractions.push(bs_statistics(&p).thin_fraction);
    }
    // systoles 3, 6, 9
    assert_eq!(fractions, vec![1.0, 0.0, 0.0]);
}

#[test]
fn torus_normalized_length_uses_the_longest_class() {
    let t = gen_product_complex(&gen_cycle(9, 1.0).unwrap(), &gen_cycle(12, 1.0).unwrap()).unwrap();
    let hb = homology_basis(&t);
    let r = normalized_r_length(&t, &hb, &MetricProfile::all_thick(t.n_vertices()), 64).unwrap();
    assert!(r.exact);
    assert_eq!(r.value, 21.0 / 108.0);
}

#[test]
fn anneal_reaches_torus_minimum() {
    let t = csaszar_torus();
    let hb = homology_basis(&t);
    for z in &hb.class_reps {
        let mut c: Chain1 = z.clone();
        for f in [1, 5, 8, 11] {
            c.add_face_boundary(&t, f);
        }
        let exact = exact_min_representative(&t, &hb, &c).unwrap();
        let ann = anneal_reduce(&t, &c, &AnnealParams::default()).unwrap();
        assert_eq!(ann.length, exact.length);
    }
}

#[test]
fn cover_radii_dominate_the_base() {
    use reprlab_core::spaces::{gen_cover, injectivity_radii, wedge_tower, DEFAULT_NODE_BUDGET};
    let towers = [product_tower(3, 4, &[2, 3]).unwrap(), wedge_tower(&[1, 2, 3]).unwrap()];
    for tower in towers {
        let h = 7.0;
        let base = injectivity_radii(&tower.base, h, DEFAULT_NODE_BUDGET);
        for lvl in &tower.levels {
            let cov = gen_cover(&tower.base, &lvl.rep).unwrap();
            let up = injectivity_radii(&cov.complex, h, DEFAULT_NODE_BUDGET);
            for (v, &r) in up.iter().enumerate() {
                assert!(r >= base[cov.vertex_proj[v]], "{} vertex {v}", lvl.label);
            }
        }
    }
}
