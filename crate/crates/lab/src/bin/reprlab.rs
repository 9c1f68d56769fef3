use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use reprlab::counting::{parse_range_f64, parse_range_u32, sweep, threshold_n0};
use reprlab::experiment::{loglog_slope, run_tower_experiment, ExperimentParams};
use reprlab::report::emit_report;
use reprlab::counting::log2_big;
use reprlab_core::format::{read_complex, write_chain, write_complex, COMPLEX_HEADER};
use reprlab_core::gf2::BitVec;
use reprlab_core::homology::homology_basis;
use reprlab_core::minrep::{
    anneal_reduce, class_minima, exact_min_representative, local_search_reduce, AnnealParams, ClassMinima,
    DescentParams, Objective,
};
use reprlab_core::nerve::{build_nerve, parse_nerve_text, NERVE_HEADER};
use reprlab_core::spaces::{
    csaszar_torus, gen_cycle, gen_product_complex, gen_surface, gen_wedge, klein_bottle, product_tower,
    random_complex, wedge_tower, RandomComplexParams, TowerSpec, DEFAULT_NODE_BUDGET, TOWER_HEADER,
};
use reprlab_core::{Complex2, Error};

const EXIT_INVALID: u8 = 1;
const EXIT_CAPPED: u8 = 2;

#[derive(Parser)]
#[command(name = "reprlab", version, about = "Mod-2 homology, minimal representatives and tower experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Betti numbers and a basis of H1.
    Homology { complex: PathBuf },
    /// Shortest representatives of H1 classes.
    Minrep(MinrepArgs),
    /// Nerve of a κ-net and the induced map on H1.
    Nerve {
        complex: PathBuf,
        #[arg(long)]
        kappa: f64,
        /// Write the serialized nerve here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact binomial sums against the counting estimate.
    Counting {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<u32>,
        #[arg(long)]
        n_range: String,
        #[arg(long)]
        delta_range: String,
    },
    /// Run a tower experiment and write CSV, JSON and SVG.
    Tower(TowerArgs),
    /// Check a complex, tower or nerve file.
    Validate { file: PathBuf },
    /// Write a generated complex or tower.
    Gen(GenArgs),
}

#[derive(Args)]
struct MinrepArgs {
    complex: PathBuf,
    /// Class coordinates in the homology basis, e.g. `101` or `1,0,1`.
    /// Defaults to every basis class.
    #[arg(long)]
    class: Option<String>,
    #[arg(long, group = "method")]
    exact: bool,
    #[arg(long, group = "method")]
    descent: bool,
    #[arg(long, group = "method")]
    anneal: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TowerArgs {
    spec: PathBuf,
    /// Comma-separated thresholds.
    #[arg(long = "R", value_delimiter = ',', default_value = "2")]
    r: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Classes enumerated per level before switching to sampling.
    #[arg(long, default_value_t = 256)]
    budget: usize,
    /// Record wall-clock times in runtime_ms (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
    #[arg(long, default_value = "tower")]
    stem: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Cycle,
    Wedge,
    Torus,
    Klein,
    Surface,
    Product,
    Random,
    ProductTower,
    WedgeTower,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Size parameters: cycle N, wedge K, klein M N, surface G, product A B,
    /// product-tower A B K..., wedge-tower J...
    params: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; towers also write `<out>.base` next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_complex(path: &Path) -> anyhow::Result<Complex2> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_complex(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_tower(path: &Path) -> anyhow::Result<TowerSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let spec = TowerSpec::parse(&text, |base| {
        let p = dir.join(base);
        let t = fs::read_to_string(&p).map_err(|e| Error::InvalidParameter(format!("{}: {e}", p.display())))?;
        read_complex(&t)
    })?;
    Ok(spec)
}

fn parse_coords(text: &str, b1: usize) -> anyhow::Result<BitVec> {
    let digits: Vec<char> = text.chars().filter(|c| !matches!(c, ',' | ' ')).collect();
    if digits.len() != b1 || digits.iter().any(|c| !matches!(c, '0' | '1')) {
        bail!("--class needs {b1} binary coordinates, got `{text}`");
    }
    Ok(BitVec::from_indices(b1, digits.iter().enumerate().filter(|(_, &c)| c == '1').map(|(i, _)| i)))
}

fn cmd_homology(path: &Path) -> anyhow::Result<u8> {
    let k = load_complex(path)?;
    let hb = homology_basis(&k);
    let b = hb.betti();
    println!("betti {} {} {}", b.b0, b.b1, b.b2);
    println!("euler {}", b.euler());
    for (i, z) in hb.class_reps.iter().enumerate() {
        println!("class {i} {}", write_chain(z));
    }
    Ok(0)
}

fn cmd_minrep(a: &MinrepArgs) -> anyhow::Result<u8> {
    let k = load_complex(&a.complex)?;
    let hb = homology_basis(&k);
    let b1 = hb.b1();
    if b1 == 0 {
        println!("b1 0: nothing to minimize");
        return Ok(0);
    }
    let classes: Vec<BitVec> = match &a.class {
        Some(text) => vec![parse_coords(text, b1)?],
        None => (0..b1).map(|i| BitVec::from_indices(b1, [i])).collect(),
    };
    let mut cover: Option<Option<ClassMinima>> = None;
    let mut capped = 0;
    for coords in &classes {
        let z = hb.class_representative(coords)?;
        let label = (0..b1).map(|i| if coords.get(i) { '1' } else { '0' }).collect::<String>();
        if a.descent {
            println!("class {label} {}", local_search_reduce(&k, &z, &DescentParams::default())?.to_line());
        } else if a.anneal {
            let params = AnnealParams {
                seed: a.seed,
                ..AnnealParams::default()
            };
            println!("class {label} {}", anneal_reduce(&k, &z, &params)?.to_line());
        } else {
            match exact_min_representative(&k, &hb, &z) {
                Ok(rep) => println!("class {label} {}", rep.to_line()),
                Err(Error::CapExceeded { rank, cap }) => {
                    let cm = cover.get_or_insert_with(|| {
                        class_minima(&k, &hb, &Objective::length(&k), 2_000_000_000).ok().flatten()
                    });
                    match cm {
                        Some(cm) => {
                            let i = ClassMinima::class_index(coords);
                            println!("class {label} rep exact {0} {0} : {1}", cm.values[i], write_chain(&cm.reps[i]));
                        }
                        None => {
                            capped += 1;
                            println!("class {label} capped: boundary rank {rank} exceeds {cap}");
                        }
                    }
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(if capped == classes.len() { EXIT_CAPPED } else { 0 })
}

fn cmd_nerve(path: &Path, kappa: f64, out: Option<&Path>) -> anyhow::Result<u8> {
    let k = load_complex(path)?;
    let nd = build_nerve(&k, kappa)?;
    let map = nd.induced_h1_map()?;
    let b = homology_basis(&nd.nerve).betti();
    let max_degree = nd.nerve.incidence().iter().map(Vec::len).max().unwrap_or(0);
    println!("centers {}", nd.centers.len());
    // empirical constants: centers per unit volume and the largest nerve degree
    println!("centers_per_volume {:.4}", nd.centers.len() as f64 / k.volume());
    println!("max_degree {max_degree}");
    println!("nerve_betti {} {} {}", b.b0, b.b1, b.b2);
    println!("h1_map rank {} surjective {} chain_map {}", map.rank, map.surjective, map.chain_map);
    if let Some(s) = nd.systole_estimate {
        println!("systole_estimate {s}");
    }
    if let Some(out) = out {
        fs::write(out, nd.to_text()).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(0)
}

fn cmd_counting(ps: &[u32], n_range: &str, delta_range: &str) -> anyhow::Result<u8> {
    let ns = parse_range_u32(n_range)?;
    let deltas = parse_range_f64(delta_range)?;
    let reports = sweep(ps, &ns, &deltas)?;
    println!("p,n,delta,log2_sum,log2_rhs,ratio,holds");
    for r in &reports {
        println!(
            "{},{},{},{:.6},{:.6},{:.6e},{}",
            r.p,
            r.n,
            r.delta,
            log2_big(&r.exact_sum),
            r.ln_rhs / std::f64::consts::LN_2,
            r.ratio,
            r.holds
        );
    }
    for &p in ps {
        for &d in &deltas {
            match threshold_n0(&reports, p, d) {
                Some(n0) => println!("n0 p={p} delta={d} n0={n0}"),
                None => println!("n0 p={p} delta={d} n0=none"),
            }
        }
    }
    Ok(0)
}

fn cmd_tower(a: &TowerArgs) -> anyhow::Result<u8> {
    let spec = load_tower(&a.spec)?;
    spec.validate()?;
    let params = ExperimentParams {
        r_values: a.r.clone(),
        seed: a.seed,
        budget: a.budget,
        timings: a.timings,
        node_budget: DEFAULT_NODE_BUDGET,
    };
    let rows = run_tower_experiment(&spec, &params);
    for path in emit_report(&rows, &a.out, &a.stem)? {
        println!("wrote {}", path.display());
    }
    for lvl in &spec.levels {
        if let Some(s) = loglog_slope(&rows, &lvl.label) {
            println!("slope {} {s:.4}", lvl.label);
        }
    }
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("level {} R={}: {}", r.level, r.r, r.error.as_deref().unwrap_or(""));
    }
    Ok(if rows.iter().all(|r| r.error.is_some()) { EXIT_CAPPED } else { 0 })
}

fn cmd_validate(path: &Path) -> anyhow::Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let result: anyhow::Result<String> = match header {
        COMPLEX_HEADER => read_complex(&text).map_err(Into::into).map(|k| {
            format!("complex2: {} vertices, {} edges, {} faces", k.n_vertices(), k.n_edges(), k.n_faces())
        }),
        TOWER_HEADER => load_tower(path).and_then(|spec| {
            spec.validate()?;
            for i in 0..spec.levels.len() {
                spec.build_level(i)
                    .with_context(|| format!("level {} (`{}`)", i, spec.levels[i].label))?;
            }
            Ok(format!("tower: {} levels", spec.levels.len()))
        }),
        NERVE_HEADER => parse_nerve_text(&text)
            .map_err(Into::into)
            .map(|n| format!("nerve: {} centers, kappa {}", n.centers.len(), n.kappa)),
        other => Err(anyhow::anyhow!("unrecognized header `{other}`")),
    };
    match result {
        Ok(msg) => {
            println!("ok {msg}");
            Ok(0)
        }
        Err(e) => {
            println!("invalid: {e:#}");
            Ok(EXIT_INVALID)
        }
    }
}

fn cmd_gen(a: &GenArgs) -> anyhow::Result<u8> {
    let p = &a.params;
    let need = |n: usize| -> anyhow::Result<()> {
        if p.len() < n {
            bail!("expected {n} size parameters, got {}", p.len());
        }
        Ok(())
    };
    let tower = match a.kind {
        GenKind::ProductTower => {
            need(3)?;
            let ks: Vec<usize> = p[2..].iter().map(|&x| x as usize).collect();
            Some(product_tower(p[0] as usize, p[1] as usize, &ks)?)
        }
        GenKind::WedgeTower => {
            need(1)?;
            Some(wedge_tower(&p.iter().map(|&x| x as u32).collect::<Vec<_>>())?)
        }
        _ => None,
    };
    if let Some(spec) = tower {
        let out = a.out.as_ref().context("towers need --out")?;
        let base = out.with_extension("base");
        let base_name = base.file_name().and_then(|s| s.to_str()).context("bad --out path")?;
        fs::write(&base, write_complex(&spec.base))?;
        fs::write(out, spec.to_text(base_name))?;
        println!("wrote {} and {}", out.display(), base.display());
        return Ok(0);
    }
    let k = match a.kind {
        GenKind::Cycle => {
            need(1)?;
            gen_cycle(p[0] as usize, 1.0)?
        }
        GenKind::Wedge => {
            need(1)?;
            gen_wedge(p[0] as usize)?
        }
        GenKind::Torus => csaszar_torus(),
        GenKind::Klein => {
            need(2)?;
            klein_bottle(p[0] as usize, p[1] as usize)?
        }
        GenKind::Surface => {
            need(1)?;
            gen_surface(p[0] as usize)?
        }
        GenKind::Product => {
            need(2)?;
            gen_product_complex(&gen_cycle(p[0] as usize, 1.0)?, &gen_cycle(p[1] as usize, 1.0)?)?
        }
        GenKind::Random => random_complex(a.seed, &RandomComplexParams::default()),
        GenKind::ProductTower | GenKind::WedgeTower => unreachable!(),
    };
    let text = write_complex(&k);
    match &a.out {
        Some(out) => fs::write(out, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Homology { complex } => cmd_homology(complex),
        Cmd::Minrep(a) => cmd_minrep(a),
        Cmd::Nerve { complex, kappa, out } => cmd_nerve(complex, *kappa, out.as_deref()),
        Cmd::Counting { p, n_range, delta_range } => cmd_counting(p, n_range, delta_range),
        Cmd::Tower(a) => cmd_tower(a),
        Cmd::Validate { file } => cmd_validate(file),
        Cmd::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
