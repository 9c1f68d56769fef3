//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints its PASS/FAIL line under a plain `cargo test`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reprlab::counting::{counting_lemma_check, sweep, threshold_n0};
use reprlab::dimension::{verify_dimension_bound, DimensionCaps, DimensionCheck};
use reprlab::experiment::{loglog_slope, run_tower_experiment, ExperimentParams, ExperimentRecord};
use reprlab_core::complex::{boundary1, boundary2, chain_length, Chain1, Complex2};
use reprlab_core::format::write_complex;
use reprlab_core::gf2::BitVec;
use reprlab_core::homology::{betti, homology_basis, Betti};
use reprlab_core::minrep::{
    anneal_reduce, exact_min_representative, local_search_reduce, AnnealParams, DescentParams,
};
use reprlab_core::nerve::build_nerve;
use reprlab_core::spaces::{
    csaszar_torus, gen_cover, gen_cycle, gen_path, gen_product_complex, gen_surface, gen_wedge, klein_bottle,
    product_tower, random_complex, wedge_tower, RandomComplexParams,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("{what} took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn random_params(seed: u64) -> RandomComplexParams {
    RandomComplexParams {
        vertices: 4 + (seed % 9) as usize,
        extra_edges: (seed % 7) as usize,
        faces: (seed % 11) as usize,
        max_length: 1 + (seed % 3) as u32,
        loop_prob: 0.05,
    }
}

fn fixtures() -> Vec<Complex2> {
    let mut out = vec![csaszar_torus(), klein_bottle(3, 3).unwrap(), klein_bottle(4, 5).unwrap()];
    for g in 1..=3 {
        out.push(gen_surface(g).unwrap());
    }
    for k in 1..=8 {
        out.push(gen_wedge(k).unwrap());
    }
    for n in 3..=8 {
        out.push(gen_cycle(n, 1.0).unwrap());
        out.push(gen_path(n, 2.0).unwrap());
    }
    out.push(gen_product_complex(&gen_cycle(3, 1.0).unwrap(), &gen_cycle(4, 1.0).unwrap()).unwrap());
    out.push(gen_product_complex(&gen_wedge(2).unwrap(), &gen_cycle(5, 1.0).unwrap()).unwrap());
    let spec = product_tower(3, 4, &[2]).unwrap();
    out.push(gen_cover(&spec.base, &spec.levels[0].rep).unwrap().complex);
    out
}

/// Face boundaries and chains as packed words, for the oracles below.
fn words(bits: impl IntoIterator<Item = usize>, n: usize) -> Vec<u64> {
    let mut w = vec![0u64; n.div_ceil(64).max(1)];
    for b in bits {
        w[b / 64] ^= 1 << (b % 64);
    }
    w
}

fn face_words(k: &Complex2) -> Vec<Vec<u64>> {
    (0..k.n_faces())
        .map(|f| words(k.face_boundary(f).iter().copied(), k.n_edges()))
        .collect()
}

fn words_length(k: &Complex2, w: &[u64]) -> f64 {
    (0..k.n_edges())
        .filter(|&e| w[e / 64] >> (e % 64) & 1 == 1)
        .map(|e| k.edge(e).length)
        .sum()
}

/// XOR basis of the face boundaries, keyed by highest set bit.
struct SpanOracle {
    rows: Vec<Vec<u64>>,
}

fn top_bit(w: &[u64]) -> Option<usize> {
    w.iter().enumerate().rev().find(|(_, &x)| x != 0).map(|(i, &x)| i * 64 + 63 - x.leading_zeros() as usize)
}

impl SpanOracle {
    fn new(k: &Complex2) -> Self {
        let mut s = SpanOracle { rows: Vec::new() };
        for f in face_words(k) {
            if let Some(r) = s.reduce(f) {
                s.rows.push(r);
                s.rows.sort_by_key(|r| std::cmp::Reverse(top_bit(r)));
            }
        }
        s
    }

    /// Residue after elimination, or None if it reduces to zero.
    fn reduce(&self, mut w: Vec<u64>) -> Option<Vec<u64>> {
        for r in &self.rows {
            let t = top_bit(r).unwrap();
            if w[t / 64] >> (t % 64) & 1 == 1 {
                for (a, b) in w.iter_mut().zip(r) {
                    *a ^= b;
                }
            }
        }
        top_bit(&w).map(|_| w)
    }

    fn same_class(&self, a: &[u64], b: &[u64]) -> bool {
        self.reduce(a.iter().zip(b).map(|(x, y)| x ^ y).collect()).is_none()
    }
}

fn chain_words(c: &Chain1) -> Vec<u64> {
    words(c.support(), c.n_edges())
}

fn scramble(k: &Complex2, z: &Chain1, rng: &mut ChaCha8Rng) -> Chain1 {
    let mut c = z.clone();
    for _ in 0..k.n_faces() {
        if rng.gen_bool(0.5) {
            c.add_face_boundary(k, rng.gen_range(0..k.n_faces()));
        }
    }
    c
}

fn all_classes(b1: usize) -> impl Iterator<Item = BitVec> {
    (1usize..1 << b1).map(move |a| BitVec::from_indices(b1, (0..b1).filter(|&i| a >> i & 1 == 1)))
}

fn c1_chain_axioms() -> Outcome {
    let start = Instant::now();
    let mut suite = fixtures();
    suite.extend((0..240).map(|s| random_complex(s, &random_params(s))));
    let mut faces_checked = 0;
    for (i, k) in suite.iter().enumerate() {
        for f in 0..k.n_faces() {
            // independent: endpoint parities of the face's edges
            let mut parity = vec![0u8; k.n_vertices()];
            for &e in k.face_boundary(f) {
                let ed = k.edge(e);
                parity[ed.u] ^= 1;
                parity[ed.v] ^= 1;
            }
            ensure(parity.iter().all(|&p| p == 0), || format!("complex {i} face {f}: oracle boundary nonzero"))?;
            let lib = boundary1(k, &boundary2(k, [f]).unwrap()).unwrap();
            ensure(lib.is_zero(), || format!("complex {i} face {f}: library boundary nonzero"))?;
            faces_checked += 1;
        }
    }
    within(start.elapsed(), 10.0, "suite")?;
    Ok(format!(
        "{} complexes, {faces_checked} faces, {:.2}s",
        suite.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn c2_homology() -> Outcome {
    let table: Vec<(&str, Complex2, Betti)> = {
        let mut t = vec![
            ("7-vertex torus", csaszar_torus(), Betti { b0: 1, b1: 2, b2: 1 }),
            ("Klein bottle", klein_bottle(3, 3).unwrap(), Betti { b0: 1, b1: 2, b2: 1 }),
        ];
        for g in [2, 3] {
            t.push(("genus g", gen_surface(g).unwrap(), Betti { b0: 1, b1: 2 * g, b2: 1 }));
        }
        for k in 1..=8 {
            t.push(("wedge", gen_wedge(k).unwrap(), Betti { b0: 1, b1: k, b2: 0 }));
        }
        t
    };
    for (name, k, want) in &table {
        let got = betti(k);
        ensure(got == *want, || format!("{name}: got {got:?}, want {want:?}"))?;
    }
    let mut suite = fixtures();
    suite.extend((0..240).map(|s| random_complex(s, &random_params(s))));
    for (i, k) in suite.iter().enumerate() {
        let b = betti(k);
        let lhs = b.b0 as i64 - b.b1 as i64 + b.b2 as i64;
        let rhs = k.n_vertices() as i64 - k.n_edges() as i64 + k.n_faces() as i64;
        ensure(lhs == rhs, || format!("instance {i}: Euler {lhs} vs {rhs}"))?;
    }
    Ok(format!("{} table entries, Euler on {} instances", table.len(), suite.len()))
}

fn c3_exact_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut instances, mut classes, mut anneal_ok, mut descent_gaps) = (0, 0, 0, 0);
    let mut seed = 1000;
    while instances < 120 {
        seed += 1;
        let p = RandomComplexParams {
            vertices: 5 + (seed % 6) as usize,
            extra_edges: 3 + (seed % 6) as usize,
            faces: 3 + (seed % 12) as usize,
            max_length: 3,
            loop_prob: 0.05,
        };
        let k = random_complex(seed, &p);
        let hb = homology_basis(&k);
        if hb.b1() == 0 || hb.b1() > 5 || k.n_faces() > 16 || hb.boundary_rank > 18 {
            continue;
        }
        instances += 1;
        let fw = face_words(&k);
        let mut anneal_matches = true;
        for coords in all_classes(hb.b1()) {
            let z = hb.class_representative(&coords).unwrap();
            let zw = chain_words(&z);
            let mut naive = f64::INFINITY;
            for s in 0u32..1 << k.n_faces() {
                let mut w = zw.clone();
                for (f, fwf) in fw.iter().enumerate() {
                    if s >> f & 1 == 1 {
                        for (a, b) in w.iter_mut().zip(fwf) {
                            *a ^= b;
                        }
                    }
                }
                naive = naive.min(words_length(&k, &w));
            }
            let input = scramble(&k, &z, &mut rng);
            let exact = exact_min_representative(&k, &hb, &input).map_err(|e| e.to_string())?;
            ensure((exact.length - naive).abs() <= 1e-9, || {
                format!("seed {seed}: exact {} vs oracle {naive}", exact.length)
            })?;
            let desc = local_search_reduce(&k, &input, &DescentParams::default()).map_err(|e| e.to_string())?;
            ensure(desc.length >= exact.length - 1e-9, || format!("seed {seed}: descent below exact"))?;
            if desc.length > exact.length + 1e-9 {
                descent_gaps += 1;
            }
            let ann = anneal_reduce(&k, &input, &AnnealParams::default()).map_err(|e| e.to_string())?;
            anneal_matches &= (ann.length - exact.length).abs() <= 1e-9;
            classes += 1;
        }
        anneal_ok += anneal_matches as usize;
    }
    let rate = anneal_ok as f64 / instances as f64;
    ensure(rate >= 0.9, || format!("anneal matched exact on {:.1}% of instances", 100.0 * rate))?;
    Ok(format!(
        "{instances} instances, {classes} classes agree with the oracle; descent strictly above exact on {descent_gaps}; anneal exact on {:.1}%",
        100.0 * rate
    ))
}

fn c4_surgery_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut suite: Vec<Complex2> = vec![csaszar_torus(), klein_bottle(4, 4).unwrap(), gen_surface(2).unwrap()];
    suite.extend((0..60).map(|s| random_complex(500 + s, &random_params(500 + s))));
    let (mut events, mut runs) = (0usize, 0usize);
    for (i, k) in suite.iter().enumerate() {
        let hb = homology_basis(k);
        if hb.b1() == 0 || k.n_faces() == 0 {
            continue;
        }
        let oracle = SpanOracle::new(k);
        for (j, z) in hb.class_reps.iter().enumerate() {
            let input = scramble(k, z, &mut rng);
            let iw = chain_words(&input);
            let params = AnnealParams {
                seed: (i * 31 + j) as u64,
                ..AnnealParams::default()
            };
            let reps = [
                local_search_reduce(k, &input, &DescentParams::default()).map_err(|e| e.to_string())?,
                anneal_reduce(k, &input, &params).map_err(|e| e.to_string())?,
            ];
            for rep in reps {
                runs += 1;
                ensure(hb.same_class(k, &input, &rep.cycle).unwrap(), || {
                    format!("complex {i}: output left the class")
                })?;
                let mut cur = input.clone();
                for &f in &rep.moves {
                    cur.add_face_boundary(k, f);
                    ensure(oracle.same_class(&iw, &chain_words(&cur)), || {
                        format!("complex {i}: move on face {f} left the class")
                    })?;
                    events += 1;
                }
                ensure(cur == rep.cycle, || format!("complex {i}: replayed moves differ from output"))?;
            }
        }
    }
    ensure(events >= 1000, || format!("only {events} move events"))?;
    Ok(format!("{events} accepted moves over {runs} runs stay in class"))
}

fn pascal_sum(p: u32, n: u32, top: u32) -> BigUint {
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = vec![BigUint::from(1u32); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    (1..=top as usize).fold(BigUint::zero(), |acc, i| acc + &row[i] * BigUint::from(p - 1).pow(i as u32))
}

fn c5_counting() -> Outcome {
    let start = Instant::now();
    let ns: Vec<u32> = (10..=200).step_by(10).collect();
    let deltas: Vec<f64> = (1..=9).map(|i| i as f64 * 0.05).collect();
    let reports = sweep(&[2, 3, 5], &ns, &deltas).map_err(|e| e.to_string())?;
    for r in reports.iter().filter(|r| r.p == 2 && r.n >= 50) {
        ensure(r.holds, || format!("p=2 n={} delta={} fails", r.n, r.delta))?;
    }
    for (p, n, d) in [(2, 20, 0.25), (3, 40, 0.3), (5, 30, 0.45)] {
        let r = counting_lemma_check(p, n, d).map_err(|e| e.to_string())?;
        let want = pascal_sum(p, n, (d * n as f64).floor() as u32);
        ensure(r.exact_sum == want, || format!("p={p} n={n}: sum differs from Pascal oracle"))?;
    }
    within(start.elapsed(), 5.0, "sweep")?;
    let mut n0s = Vec::new();
    for p in [2, 3, 5] {
        let row: Vec<String> = deltas
            .iter()
            .map(|&d| threshold_n0(&reports, p, d).map_or("none".into(), |n| n.to_string()))
            .collect();
        n0s.push(format!("p={p}: [{}]", row.join(" ")));
    }
    Ok(format!("n0 by delta 0.05..0.45 {}", n0s.join("; ")))
}

fn c6_dimension_bound() -> Outcome {
    let caps = DimensionCaps::default();
    let mut suite = vec![csaszar_torus(), klein_bottle(3, 3).unwrap(), gen_surface(1).unwrap()];
    suite.extend((0..50).map(|s| random_complex(700 + s, &random_params(700 + s))));
    let (mut checked, mut skipped, mut min_margin) = (0, 0, f64::INFINITY);
    for (i, k) in suite.iter().enumerate() {
        match verify_dimension_bound(k, &homology_basis(k), &caps).map_err(|e| e.to_string())? {
            DimensionCheck::Checked { holds, margin, .. } => {
                ensure(holds, || format!("instance {i}: bound fails, margin {margin}"))?;
                checked += 1;
                min_margin = min_margin.min(margin);
            }
            DimensionCheck::Skipped { .. } => skipped += 1,
        }
    }
    for k in 1..=8 {
        let w = gen_wedge(k).unwrap();
        match verify_dimension_bound(&w, &homology_basis(&w), &caps).map_err(|e| e.to_string())? {
            DimensionCheck::Checked { m, bound, holds, .. } => {
                ensure(m == k && bound == k as f64 && holds, || format!("wedge({k}): m {m}, bound {bound}"))?;
            }
            DimensionCheck::Skipped { reason } => return Err(format!("wedge({k}) skipped: {reason}")),
        }
    }
    ensure(checked >= 50, || format!("only {checked} instances ran"))?;
    Ok(format!(
        "holds on {checked}/{checked} instances ({skipped} skipped), min margin {min_margin:.3}; wedge(k) needs m = k"
    ))
}

fn c7_nerve() -> Outcome {
    let torus = gen_product_complex(&gen_cycle(6, 1.0).unwrap(), &gen_cycle(8, 1.0).unwrap()).unwrap();
    let cases = [
        ("C12", gen_cycle(12, 1.0).unwrap(), 2.0),
        ("torus C6xC8", torus, 1.0),
        ("genus 2", gen_surface(2).unwrap(), 1.0),
    ];
    let mut notes = Vec::new();
    for (name, k, kappa) in cases {
        let nd = build_nerve(&k, kappa).map_err(|e| format!("{name}: {e}"))?;
        let map = nd.induced_h1_map().map_err(|e| e.to_string())?;
        ensure(map.surjective, || format!("{name}: induced map has rank {}", map.rank))?;
        let hb = homology_basis(&k);
        for z in &hb.class_reps {
            let approx = nd.approximate_class(z).map_err(|e| format!("{name}: {e}"))?;
            let back = nd.push_cycle(&approx).map_err(|e| e.to_string())?;
            ensure(hb.same_class(&k, z, &back).unwrap(), || format!("{name}: class not recovered"))?;
            let (len, cap) = (chain_length(&k, &back), 2.0 * kappa * approx.weight() as f64);
            ensure(len <= cap + 1e-9, || format!("{name}: pushed length {len} > {cap}"))?;
        }
        notes.push(format!("{name} ({} centers, rank {})", nd.centers.len(), map.rank));
    }
    Ok(notes.join(", "))
}

fn c8_tower_decay() -> Outcome {
    let start = Instant::now();
    let spec = product_tower(3, 4, &[1, 2, 3, 4, 5, 6]).unwrap();
    let params = ExperimentParams {
        r_values: vec![2.0],
        ..ExperimentParams::default()
    };
    let rows = run_tower_experiment(&spec, &params);
    within(start.elapsed(), 60.0, "product tower")?;
    for (i, r) in rows.iter().enumerate() {
        let k = (i + 1) as f64;
        ensure(r.error.is_none(), || format!("{}: {:?}", r.level, r.error))?;
        ensure(r.b1_over_vol == 2.0 / (12.0 * k * k), || format!("{}: b1/vol {}", r.level, r.b1_over_vol))?;
        if i > 0 {
            ensure(r.b1_over_vol < rows[i - 1].b1_over_vol, || format!("{}: not decreasing", r.level))?;
        }
    }
    let wedge = run_tower_experiment(&wedge_tower(&[1, 2, 3, 4, 5, 6]).unwrap(), &params);
    for r in &wedge {
        ensure(r.error.is_none() && r.b1_over_vol >= 0.5, || format!("wedge {}: b1/vol {}", r.level, r.b1_over_vol))?;
    }
    let last = wedge.last().unwrap();
    Ok(format!(
        "product b1/vol {:.5} -> {:.5}; wedge b1/vol {:.4} -> {:.4} (no decay); {:.2}s",
        rows[0].b1_over_vol,
        rows[5].b1_over_vol,
        wedge[0].b1_over_vol,
        last.b1_over_vol,
        start.elapsed().as_secs_f64()
    ))
}

fn c9_rlength_scaling() -> Outcome {
    let rs = [1.0, 2.0, 4.0, 8.0];
    let spec = product_tower(3, 4, &[1, 2, 3, 4, 5, 6]).unwrap();
    let params = ExperimentParams {
        r_values: rs.to_vec(),
        seed: 9,
        ..ExperimentParams::default()
    };
    let rows = run_tower_experiment(&spec, &params);
    let level = spec
        .levels
        .iter()
        .rev()
        .find(|l| rows.iter().filter(|r| r.level == l.label).all(|r| r.error.is_none() && r.thin_fraction == 0.0))
        .ok_or("no level is entirely thick")?;
    let vals: Vec<&ExperimentRecord> = rows.iter().filter(|r| r.level == level.label).collect();
    for w in vals.windows(2) {
        ensure(w[1].rlength_norm <= w[0].rlength_norm + 1e-12, || {
            format!("{}: rlength_norm rises from R={} to R={}", level.label, w[0].r, w[1].r)
        })?;
    }
    let slope = loglog_slope(&rows, &level.label).ok_or("slope undefined")?;
    let series: Vec<String> = vals.iter().map(|r| format!("{:.4}", r.rlength_norm)).collect();
    Ok(format!("level {}: rlength_norm [{}], log-log slope {slope:.4}", level.label, series.join(" ")))
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_reprlab");
    let specs = [
        ("product", product_tower(3, 4, &[1, 2, 3, 4]).unwrap(), "1,2,4"),
        ("wedge", wedge_tower(&[1, 2, 3, 4, 5]).unwrap(), "1,2"),
    ];
    for (name, spec, rs) in &specs {
        let base = format!("{name}.base");
        std::fs::write(dir.path().join(&base), write_complex(&spec.base)).map_err(|e| e.to_string())?;
        let spec_path = dir.path().join(format!("{name}.tower"));
        std::fs::write(&spec_path, spec.to_text(&base)).map_err(|e| e.to_string())?;
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{name}-{run}"));
            let status = Command::new(bin)
                .arg("tower")
                .arg(&spec_path)
                .args(["--R", rs, "--seed", "17", "--budget", "8", "--out"])
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(status.status.success(), || {
                format!("{name}: exit {:?}: {}", status.status, String::from_utf8_lossy(&status.stderr))
            })?;
            let csv = std::fs::read(out.join("tower.csv")).map_err(|e| e.to_string())?;
            let json = std::fs::read(out.join("tower.json")).map_err(|e| e.to_string())?;
            outputs.push((csv, json));
        }
        ensure(outputs[0] == outputs[1], || format!("{name}: outputs differ between runs"))?;
    }
    Ok("product and wedge towers: CSV and JSON byte-identical across runs".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("chain axioms", c1_chain_axioms),
        ("homology correctness", c2_homology),
        ("exact-oracle agreement", c3_exact_oracle),
        ("surgery soundness", c4_surgery_soundness),
        ("counting lemma", c5_counting),
        ("dimension bound", c6_dimension_bound),
        ("nerve transfer", c7_nerve),
        ("tower decay", c8_tower_decay),
        ("R-length scaling", c9_rlength_scaling),
        ("determinism", c10_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
