//! Exact partial binomial sums against the `p^{δ(3 − ln δ)n}` estimate.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use reprlab_core::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CountingReport {
    pub p: u32,
    pub n: u32,
    pub delta: f64,
    /// Σ_{i=1}^{⌊δn⌋} C(n, i)(p − 1)^i.
    pub exact_sum: BigUint,
    /// ln of the right-hand side.
    pub ln_rhs: f64,
    /// The right-hand side itself (may be +∞ when out of f64 range).
    pub rhs: f64,
    /// sum / rhs, computed in the log domain.
    pub ratio: f64,
    pub holds: bool,
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Natural log of a big integer (−∞ for zero).
pub fn ln_big(x: &BigUint) -> f64 {
    log2_big(x) * std::f64::consts::LN_2
}

/// Base-2 log of a big integer from its top 64 bits (−∞ for zero).
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let top = top.iter_u64_digits().next().unwrap_or(0) as f64;
    top.log2() + shift as f64
}

pub fn counting_lemma_check(p: u32, n: u32, delta: f64) -> Result<CountingReport> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("delta = {delta} is outside (0, 1/2)")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let top = (delta * n as f64).floor() as u32;
    let mut sum = BigUint::zero();
    let mut binom = BigUint::one();
    let mut power = BigUint::one();
    let base = BigUint::from(p - 1);
    for i in 1..=top {
        binom = binom * (n - i + 1) / i;
        power *= &base;
        sum += &binom * &power;
    }
    let ln_rhs = delta * (3.0 - delta.ln()) * n as f64 * (p as f64).ln();
    let ln_sum = ln_big(&sum);
    Ok(CountingReport {
        p,
        n,
        delta,
        ratio: (ln_sum - ln_rhs).exp(),
        holds: ln_sum <= ln_rhs,
        rhs: ln_rhs.exp(),
        ln_rhs,
        exact_sum: sum,
    })
}

/// Inclusive arithmetic range `a:b:step`.
pub fn parse_range_u32(text: &str) -> Result<Vec<u32>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidParameter(format!("range `{text}` is not A:B:S"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<u32> = parts.iter().map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    if v[2] == 0 || v[0] > v[1] {
        return Err(bad());
    }
    Ok((v[0]..=v[1]).step_by(v[2] as usize).collect())
}

/// Inclusive real range `a:b:step`; the end point is kept when it is within
/// rounding of a step.
pub fn parse_range_f64(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidParameter(format!("range `{text}` is not A:B:S"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    if !(v[2] > 0.0) || v[0] > v[1] {
        return Err(bad());
    }
    let count = ((v[1] - v[0]) / v[2] + 1e-9).floor() as usize;
    // round to the step's decimal precision so 0.05 + 2·0.05 prints as 0.15
    Ok((0..=count).map(|i| ((v[0] + i as f64 * v[2]) * 1e9).round() / 1e9).collect())
}

/// Smallest n in the sweep from which the estimate holds for every larger
/// n in the sweep; `None` if it fails at the largest n.
pub fn threshold_n0(reports: &[CountingReport], p: u32, delta: f64) -> Option<u32> {
    let mut rows: Vec<&CountingReport> = reports.iter().filter(|r| r.p == p && r.delta == delta).collect();
    rows.sort_by_key(|r| r.n);
    let mut n0 = None;
    for r in rows.iter().rev() {
        if !r.holds {
            break;
        }
        n0 = Some(r.n);
    }
    n0
}

pub fn sweep(ps: &[u32], ns: &[u32], deltas: &[f64]) -> Result<Vec<CountingReport>> {
    let mut out = Vec::with_capacity(ps.len() * ns.len() * deltas.len());
    for &p in ps {
        for &delta in deltas {
            for &n in ns {
                out.push(counting_lemma_check(p, n, delta)?);
            }
        }
    }
    Ok(out)
}
