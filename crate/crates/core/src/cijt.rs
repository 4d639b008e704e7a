//! Search and verification of common index jumps.
//!
//! Given orbits with positive mean index, [`find_jump`] looks for
//! `N = k·N₀` and `m_j = (⌊N/(𝔮Δ_j)⌋ + δ_j)𝔮` such that the iterates
//! `γ_j^{2m_j±1}` and `γ_j^{2m_j}` sit at the common index levels around
//! `2N`. Every candidate is checked with exact Bott arithmetic; the
//! returned [`CijtCertificate`] records both sides of every relation.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bott::{iterated_index, iterated_nullity, mean_index, BottData};
use crate::error::{Error, Result};
use crate::number::{lcm_all, rat, Rational, Real};

/// Identifiers of the checked relations, in report order.
pub const CHECK_IDS: [&str; 8] = [
    "nullity",
    "index-before",
    "index-after",
    "index-at-lower",
    "index-at-upper",
    "m-form",
    "eps-bound",
    "frac-closeness",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub orbit: usize,
    pub pass: bool,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
}

impl Check {
    fn new(
        id: &str,
        orbit: usize,
        lhs: impl ToString,
        relation: &str,
        rhs: impl ToString,
        pass: bool,
    ) -> Self {
        Check {
            id: id.to_string(),
            orbit,
            pass,
            lhs: lhs.to_string(),
            relation: relation.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CijtCertificate {
    pub n: u64,
    pub n0: u64,
    pub k_factor: u64,
    pub m: Vec<u64>,
    pub delta: Vec<u8>,
    pub q_param: u64,
    pub epsilon: Rational,
    pub frac_delta: Option<Rational>,
    /// Search ran on the inverted orbits; relations are stated with `μ⁺`.
    pub mirrored: bool,
    pub checks: Vec<Check>,
}

impl CijtCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Pass/fail per relation, aggregated over orbits.
    pub fn summary(&self) -> BTreeMap<String, bool> {
        let mut out = BTreeMap::new();
        for c in &self.checks {
            let e = out.entry(c.id.clone()).or_insert(true);
            *e &= c.pass;
        }
        out
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

#[derive(Debug, Clone)]
pub struct JumpOptions {
    pub n0: u64,
    /// Defaults to `1/(4q𝔮)`.
    pub epsilon: Option<Rational>,
    pub search_bound: u64,
    /// `𝔮` is lifted to `lcm(choose_q, q_multiple)`.
    pub q_multiple: Option<u64>,
    pub frac_delta: Option<Rational>,
    /// Orbits have negative mean index; search on their inverses.
    pub mirrored: bool,
}

impl Default for JumpOptions {
    fn default() -> Self {
        JumpOptions {
            n0: 1,
            epsilon: None,
            search_bound: 1_000_000,
            q_multiple: None,
            frac_delta: None,
            mirrored: false,
        }
    }
}

/// Least `𝔮` with `𝔮·θ/π ∈ ℤ` for every rational jump angle.
pub fn choose_q(orbits: &[BottData]) -> u64 {
    lcm_all(
        orbits
            .iter()
            .flat_map(|d| d.jumps.iter())
            .filter_map(|j| j.angle.exact().map(|a| a.denom().unsigned_abs() as u64)),
    )
}

/// Multiples of the exact alignment tried once the linear search is spent.
pub const ALIGNED_TRIES: u64 = 64;

pub fn default_epsilon(orbits: usize, q: u64) -> Rational {
    rat(1, 4 * orbits.max(1) as i128 * q as i128)
}

fn search_data(orbits: &[BottData], mirrored: bool) -> Vec<BottData> {
    if mirrored {
        orbits.iter().map(BottData::inverse).collect()
    } else {
        orbits.to_vec()
    }
}

/// `N/(𝔮Δ)` for each orbit.
fn ratios(deltas: &[Real], n: u64, q: u64) -> Result<Vec<(i64, Real)>> {
    deltas
        .iter()
        .map(|d| {
            let x = Real::from(n as i64).div(&d.mul_int(q as i64))?;
            let f = x.floor()?;
            Ok((f, x.sub(&Real::from(f))))
        })
        .collect()
}

pub fn find_jump(orbits: &[BottData], opts: &JumpOptions) -> Result<CijtCertificate> {
    if orbits.is_empty() {
        return Err(Error::Precondition("no orbits given".into()));
    }
    if opts.n0 == 0 {
        return Err(Error::Precondition("N₀ must be positive".into()));
    }
    let data = search_data(orbits, opts.mirrored);
    let deltas: Vec<Real> = data.iter().map(mean_index).collect();
    for (j, d) in deltas.iter().enumerate() {
        if d.signum()? != Ordering::Greater {
            return Err(Error::Precondition(format!(
                "orbit {j} has {} mean index {d}",
                if opts.mirrored {
                    "non-negative"
                } else {
                    "non-positive"
                }
            )));
        }
    }
    let q = lcm_all([choose_q(orbits), opts.q_multiple.unwrap_or(1)]);
    let eps = opts
        .epsilon
        .unwrap_or_else(|| default_epsilon(orbits.len(), q));
    if eps <= rat(0, 1) {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let eps_r = Real::from(eps);
    let one = Real::from(1);
    let qn = orbits.len();

    let attempt = |n: u64| -> Option<Result<CijtCertificate>> {
        let k = n / opts.n0;
        let rs = match ratios(&deltas, n, q) {
            Ok(r) => r,
            Err(e) => return Some(Err(e)),
        };
        // δ_j allowed by the ε-bound
        let mut allowed: Vec<Vec<u8>> = Vec::with_capacity(qn);
        for (f, frac) in &rs {
            let mut a = Vec::new();
            match frac.lt(&eps_r) {
                Ok(true) if *f > 0 => a.push(0u8),
                Ok(_) => {}
                Err(e) => return Some(Err(e)),
            }
            match one.sub(frac).lt(&eps_r) {
                Ok(true) => a.push(1u8),
                Ok(false) => {}
                Err(e) => return Some(Err(e)),
            }
            if a.is_empty() {
                return None;
            }
            allowed.push(a);
        }
        // lexicographic over δ read as a binary number
        let mut idx = vec![0usize; qn];
        loop {
            let delta: Vec<u8> = idx.iter().zip(&allowed).map(|(i, a)| a[*i]).collect();
            let m: Vec<u64> = rs
                .iter()
                .zip(&delta)
                .map(|((f, _), d)| (*f as u64 + *d as u64) * q)
                .collect();
            let mut cert = CijtCertificate {
                n,
                n0: opts.n0,
                k_factor: k,
                m,
                delta,
                q_param: q,
                epsilon: eps,
                frac_delta: opts.frac_delta,
                mirrored: opts.mirrored,
                checks: Vec::new(),
            };
            match verify_certificate(orbits, &cert) {
                Ok(checks) => {
                    if checks.iter().all(|c| c.pass) {
                        cert.checks = checks;
                        return Some(Ok(cert));
                    }
                }
                Err(e) => return Some(Err(e)),
            }
            let mut pos = qn;
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < allowed[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    };

    const CHUNK: u64 = 4096;
    let mut start = 1;
    while start <= opts.search_bound {
        let end = (start + CHUNK - 1).min(opts.search_bound);
        if let Some(r) = (start..=end)
            .into_par_iter()
            .find_map_first(|k| attempt(k * opts.n0))
        {
            return r;
        }
        start = end + 1;
    }
    // exact mean indices: N divisible by every numerator of 𝔮Δ_j puts each
    // ratio on an integer, so a few multiples of that lcm are tried last
    let nums: Option<Vec<u64>> = deltas
        .iter()
        .map(|d| {
            d.exact()
                .map(|r| (r * rat(q as i128, 1)).numer().unsigned_abs() as u64)
        })
        .collect();
    if let Some(nums) = nums {
        let step = nums.into_iter().try_fold(opts.n0, |acc, v| {
            let g = num_integer::gcd(acc, v.max(1));
            acc.checked_mul(v.max(1) / g)
        });
        if let Some(step) = step.filter(|s| s / opts.n0 > opts.search_bound) {
            for j in 1..=ALIGNED_TRIES {
                let Some(n) = step.checked_mul(j) else { break };
                if let Some(r) = attempt(n) {
                    return r;
                }
            }
        }
    }
    Err(Error::BoundedSearch {
        tried: opts.search_bound,
    })
}

/// Recomputes every relation of `cert` from the orbit data.
pub fn verify_certificate(orbits: &[BottData], cert: &CijtCertificate) -> Result<Vec<Check>> {
    if cert.m.len() != orbits.len() || cert.delta.len() != orbits.len() {
        return Err(Error::Structural(
            "certificate and orbit list differ in length".into(),
        ));
    }
    if cert.delta.iter().any(|d| *d > 1) || cert.q_param == 0 || cert.n == 0 {
        return Err(Error::Structural("malformed certificate".into()));
    }
    if cert.m.contains(&0) {
        return Err(Error::Structural("iterates m_j must be positive".into()));
    }
    let data = search_data(orbits, cert.mirrored);
    let two_n = 2 * cert.n as i64;
    let mut checks = Vec::new();
    if cert.n0 == 0 || cert.k_factor.checked_mul(cert.n0) != Some(cert.n) {
        checks.push(Check::new(
            "m-form",
            0,
            cert.n,
            "=",
            format!("{}·{}", cert.k_factor, cert.n0),
            false,
        ));
    }
    for (j, (orig, d)) in orbits.iter().zip(&data).enumerate() {
        let m = cert.m[j];
        let delta = mean_index(d);
        let x = Real::from(cert.n as i64).div(&delta.mul_int(cert.q_param as i64))?;
        let f = x.floor()?;
        let form = (f + cert.delta[j] as i64) * cert.q_param as i64;
        checks.push(Check::new("m-form", j, m, "=", form, form == m as i64));
        let gap = x.sub(&Real::from(f + cert.delta[j] as i64)).abs()?;
        let eps = Real::from(cert.epsilon);
        checks.push(Check::new("eps-bound", j, &gap, "<", &eps, gap.lt(&eps)?));

        let nu = |k: u64| iterated_nullity(orig, k);
        let lo = |k: u64| iterated_index(orig, k);
        let e_half = (orig.elliptic_height / 2) as i64;
        let (n1, nm, np) = (nu(1)?, nu(2 * m - 1)?, nu(2 * m + 1)?);
        checks.push(Check::new(
            "nullity",
            j,
            format!("{n1}"),
            "=",
            format!("{nm} = {np}"),
            n1 == nm && nm == np,
        ));
        if cert.mirrored {
            let hi = |k: u64| -> Result<i64> { Ok(lo(k)? + nu(k)? as i64) };
            let s1 = orig.jump_at_one.map_or(0, |j| (j.nu - j.s) as i64);
            let l2 = hi(2 * m - 1)?;
            let r2 = -two_n - hi(1)? + 2 * s1;
            checks.push(Check::new("index-before", j, l2, "=", r2, l2 == r2));
            let l3 = hi(2 * m + 1)?;
            let r3 = -two_n + hi(1)?;
            checks.push(Check::new("index-after", j, l3, "=", r3, l3 == r3));
            let l4 = hi(2 * m)?;
            let r4 = -two_n + e_half;
            checks.push(Check::new("index-at-lower", j, l4, "<=", r4, l4 <= r4));
            let l5 = hi(2 * m)? - nu(2 * m)? as i64;
            let r5 = -two_n - e_half;
            checks.push(Check::new("index-at-upper", j, l5, ">=", r5, l5 >= r5));
        } else {
            let s1 = orig.jump_at_one.map_or(0, |j| j.s as i64);
            let l2 = lo(2 * m - 1)?;
            let r2 = two_n - lo(1)? - 2 * s1;
            checks.push(Check::new("index-before", j, l2, "=", r2, l2 == r2));
            let l3 = lo(2 * m + 1)?;
            let r3 = two_n + lo(1)?;
            checks.push(Check::new("index-after", j, l3, "=", r3, l3 == r3));
            let l4 = lo(2 * m)?;
            let r4 = two_n - e_half;
            checks.push(Check::new("index-at-lower", j, l4, ">=", r4, l4 >= r4));
            let l5 = lo(2 * m)? + nu(2 * m)? as i64;
            let r5 = two_n + e_half;
            checks.push(Check::new("index-at-upper", j, l5, "<=", r5, l5 <= r5));
        }
        if let Some(fd) = cert.frac_delta {
            let bound = Real::from(fd);
            for jump in &orig.jumps {
                let y = jump.angle.mul_int(m as i64);
                let fr = y.fract()?;
                let dist = fr.min(&Real::from(1).sub(&fr))?;
                checks.push(Check::new(
                    "frac-closeness",
                    j,
                    &dist,
                    "<",
                    &bound,
                    dist.lt(&bound)?,
                ));
            }
        }
    }
    Ok(checks)
}
