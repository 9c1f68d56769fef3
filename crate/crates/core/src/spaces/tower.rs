//! Towers of finite covers and their text format.
//!
//! ```text
//! tower v1
//! base c3xc4.cx
//! level 4 k=2
//! p 8 (1 2)(3 4)
//! p 20 (1 3)(2 4)
//! ```
//!
//! Each `p` line gives the permutation (1-based cycle notation, `()` for the
//! identity) carried by one base edge; unlisted edges lift trivially.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::cover::{gen_cover, Cover, Perm, PermRep};
use super::generators::{gen_cycle, gen_product_complex, gen_wedge};
use crate::complex::Complex2;
use crate::error::{Error, Result};

pub const TOWER_HEADER: &str = "tower v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    pub label: String,
    pub rep: PermRep,
}

#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub base: Complex2,
    pub levels: Vec<TowerLevel>,
}

impl TowerSpec {
    /// Checks transitivity and strictly increasing degrees.
    pub fn validate(&self) -> Result<()> {
        let mut last = 0;
        for lvl in &self.levels {
            let d = lvl.rep.degree();
            if d <= last {
                return Err(Error::InvalidPermRep(format!(
                    "level `{}` has degree {d}, not above the previous {last}",
                    lvl.label
                )));
            }
            if !lvl.rep.is_transitive() {
                return Err(Error::InvalidPermRep(format!("level `{}` is not transitive", lvl.label)));
            }
            last = d;
        }
        Ok(())
    }

    pub fn build_level(&self, i: usize) -> Result<Cover> {
        gen_cover(&self.base, &self.levels[i].rep)
    }

    /// Text form with `base_path` recorded as the base reference.
    pub fn to_text(&self, base_path: &str) -> String {
        let mut out = String::new();
        writeln!(out, "{TOWER_HEADER}").unwrap();
        writeln!(out, "base {base_path}").unwrap();
        for lvl in &self.levels {
            writeln!(out, "level {} {}", lvl.rep.degree(), lvl.label).unwrap();
            for (e, p) in lvl.rep.perms() {
                writeln!(out, "p {e} {}", p.to_cycles()).unwrap();
            }
        }
        out
    }

    /// Parses the text form; `load_base` resolves the base reference.
    pub fn parse(text: &str, load_base: impl FnOnce(&str) -> Result<Complex2>) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse {
            kind: "tower",
            line,
            msg,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, TOWER_HEADER)) => {}
            Some((n, other)) => return Err(perr(n, format!("expected header `{TOWER_HEADER}`, found `{other}`"))),
            None => return Err(perr(0, "empty input".into())),
        }
        let (n, base_line) = lines.next().ok_or_else(|| perr(0, "missing base line".into()))?;
        let base_ref = base_line
            .strip_prefix("base ")
            .map(str::trim)
            .ok_or_else(|| perr(n, "expected `base <path>`".into()))?;
        let base = load_base(base_ref)?;

        let mut raw: Vec<(usize, String, BTreeMap<usize, Perm>)> = Vec::new();
        for (n, line) in lines {
            let mut tok = line.splitn(3, char::is_whitespace);
            match tok.next() {
                Some("level") => {
                    let d: usize = tok
                        .next()
                        .and_then(|t| t.parse().ok())
                        .filter(|&d| d > 0)
                        .ok_or_else(|| perr(n, "expected `level <degree> [label]`".into()))?;
                    let label = tok.next().map(str::trim).unwrap_or("").to_string();
                    let label = if label.is_empty() { format!("d{d}") } else { label };
                    raw.push((d, label, BTreeMap::new()));
                }
                Some("p") => {
                    let (d, _, perms) = raw
                        .last_mut()
                        .ok_or_else(|| perr(n, "permutation before any level".into()))?;
                    let e: usize = tok
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| perr(n, "expected `p <edge> <cycles>`".into()))?;
                    if e >= base.n_edges() {
                        return Err(perr(n, format!("edge {e} out of range ({} edges)", base.n_edges())));
                    }
                    let p = Perm::parse_cycles(tok.next().unwrap_or("()"), *d).map_err(|err| perr(n, err.to_string()))?;
                    if perms.insert(e, p).is_some() {
                        return Err(perr(n, format!("edge {e} listed twice")));
                    }
                }
                Some(other) => return Err(perr(n, format!("unknown record `{other}`"))),
                None => {}
            }
        }
        let levels = raw
            .into_iter()
            .map(|(d, label, perms)| Ok(TowerLevel { label, rep: PermRep::new(d, perms)? }))
            .collect::<Result<_>>()?;
        Ok(Self { base, levels })
    }
}

/// Covers C_{ak} × C_{bk} of C_a × C_b, degree k², one level per `k`.
pub fn product_tower(a: usize, b: usize, ks: &[usize]) -> Result<TowerSpec> {
    let ca = gen_cycle(a, 1.0)?;
    let cb = gen_cycle(b, 1.0)?;
    let base = gen_product_complex(&ca, &cb)?;
    let first_block = a * b;
    let mut levels = Vec::new();
    for &k in ks {
        if k == 0 {
            return Err(Error::InvalidParameter("tower index k must be positive".into()));
        }
        // closing edge of C_a crossed with a vertex, and a vertex crossed with
        // the closing edge of C_b
        let rep = PermRep::from_abelian_voltages(&base, &[k, k], |e| {
            if e < first_block {
                vec![i64::from(e / b == a - 1), 0]
            } else {
                vec![0, i64::from((e - first_block) % b == b - 1)]
            }
        })?;
        levels.push(TowerLevel {
            label: format!("k={k}"),
            rep,
        });
    }
    Ok(TowerSpec { base, levels })
}

/// Cyclic covers of degree 2^j of the wedge of two circles: the loops act
/// as +1 and +3 mod 2^j.
pub fn wedge_tower(exponents: &[u32]) -> Result<TowerSpec> {
    let base = gen_wedge(2)?;
    let mut levels = Vec::new();
    for &j in exponents {
        if j == 0 || j > 24 {
            return Err(Error::InvalidParameter(format!("wedge tower exponent {j} out of range 1..=24")));
        }
        let d = 1usize << j;
        let rep = PermRep::new(d, BTreeMap::from([(0, Perm::shift(d, 1)), (1, Perm::shift(d, 3 % d))]))?;
        levels.push(TowerLevel {
            label: format!("d={d}"),
            rep,
        });
    }
    Ok(TowerSpec { base, levels })
}
