//! Contact homology bookkeeping for prequantizations: rank tables, local and
//! mean Euler characteristics, the resonance relation, dynamical convexity,
//! Morse inequalities and degenerate-maximum detection.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::bott::{self, iterated_index, iterated_nullity, mean_index, BottData};
use crate::error::{Error, Result};
use crate::number::{lcm_all, rat, Rational, Real};

pub mod audit;

pub use audit::{audit, AuditOptions, AuditReport, Mode, Verdict};

/// Homological data of a prequantization `M^{2n+1} → B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrequantProfile {
    pub name: String,
    pub n: usize,
    /// Rational Betti numbers `b₀..b_{2n}` of the base.
    pub betti: Vec<u64>,
    /// Robbin-Salamon index of the smallest contractible fiber multiple.
    pub i_index: i64,
    pub c_b: u64,
}

impl PrequantProfile {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Structural("profile needs n ≥ 1".into()));
        }
        if self.betti.len() != 2 * self.n + 1 {
            return Err(Error::Structural(format!(
                "expected {} Betti numbers, got {}",
                2 * self.n + 1,
                self.betti.len()
            )));
        }
        if self.i_index <= 0 || self.i_index % 2 != 0 {
            return Err(Error::Structural(format!(
                "I = {} must be positive and even",
                self.i_index
            )));
        }
        if self.c_b == 0 || self.i_index < 2 * self.c_b as i64 {
            return Err(Error::Structural(format!(
                "I = {} must be at least 2c_B = {}",
                self.i_index,
                2 * self.c_b
            )));
        }
        Ok(())
    }

    /// `b₀ = b_{2n}`; advisory only.
    pub fn poincare_ok(&self) -> bool {
        self.betti.first() == self.betti.last()
    }

    /// Lowest degree with nonzero contact homology, `I - n`.
    pub fn k_minus(&self) -> i64 {
        self.i_index - self.n as i64
    }

    pub fn r_b(&self) -> u64 {
        self.betti.iter().sum()
    }

    pub fn euler(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, b)| if i % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum()
    }

    pub fn odd_betti_vanish(&self) -> bool {
        self.betti.iter().skip(1).step_by(2).all(|b| *b == 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub name: String,
    pub data: BottData,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitCatalog {
    pub profile: PrequantProfile,
    pub orbits: Vec<Orbit>,
    pub claimed_complete: bool,
}

impl OrbitCatalog {
    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        for o in &self.orbits {
            if o.data.dim2n != 2 * self.profile.n {
                return Err(Error::Structural(format!(
                    "orbit {} has dimension {} but the profile needs {}",
                    o.name,
                    o.data.dim2n,
                    2 * self.profile.n
                )));
            }
            o.data.validate()?;
        }
        Ok(())
    }

    /// No iterate of any orbit is degenerate.
    pub fn nondegenerate(&self) -> bool {
        self.orbits.iter().all(|o| never_degenerate(&o.data))
    }

    pub fn without(&self, index: usize) -> OrbitCatalog {
        let mut c = self.clone();
        c.orbits.remove(index);
        c
    }
}

/// True when no iterate has eigenvalue one.
pub fn never_degenerate(d: &BottData) -> bool {
    d.jump_at_one.is_none() && d.jumps.iter().all(|j| !j.angle.is_exact())
}

pub(crate) fn named<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::DataRequired { iterate, .. } => Error::DataRequired {
            orbit: name.to_string(),
            iterate,
        },
        Error::SupportViolation { degree, lo, hi, .. } => Error::SupportViolation {
            orbit: name.to_string(),
            degree,
            lo,
            hi,
        },
        Error::Undecidable { value, .. } => Error::Undecidable {
            orbit: name.to_string(),
            value,
        },
        other => other,
    })
}

/// `dim HC⁰_deg(ξ) = Σ_{k≥1} b_{deg - kI + n}`.
pub fn prequant_rank(p: &PrequantProfile, degree: i64) -> u64 {
    let n = p.n as i64;
    p.betti
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let shift = degree + n - *i as i64;
            shift > 0 && shift % p.i_index == 0
        })
        .map(|(_, b)| *b)
        .sum()
}

/// `χ⁰(ξ) = (-1)ⁿ χ(B) / I`.
pub fn chi0(p: &PrequantProfile) -> Rational {
    let sign = if p.n.is_multiple_of(2) { 1 } else { -1 };
    rat(sign * p.euler() as i128, p.i_index as i128)
}

/// Euler characteristic of the local homology of `γᵏ`.
pub fn local_chi(d: &BottData, k: u64) -> Result<i64> {
    Ok(bott::local_homology(d, k)?
        .iter()
        .map(|(deg, r)| {
            if deg.rem_euclid(2) == 0 {
                *r as i64
            } else {
                -(*r as i64)
            }
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanChi {
    pub value: Rational,
    pub period: u64,
    /// `χ(γ¹)..χ(γ^𝔭)`.
    pub values: Vec<i64>,
}

/// Period of `k ↦ χ(γᵏ)` as known a priori: parity, root orders and the
/// period of user-supplied local homology.
pub fn chi_period(d: &BottData) -> u64 {
    lcm_all([
        2,
        d.root_period(),
        d.local_homology.as_ref().map_or(1, |l| l.period as u64),
    ])
}

/// `χ̂(γ) = (1/𝔭) Σ_{k=1}^{𝔭} χ(γᵏ)`, with the period confirmed over two
/// further periods.
pub fn mean_chi(d: &BottData) -> Result<MeanChi> {
    let p = chi_period(d);
    let values: Vec<i64> = (1..=p).map(|k| local_chi(d, k)).collect::<Result<_>>()?;
    for k in p + 1..=3 * p {
        let v = local_chi(d, k)?;
        if v != values[((k - 1) % p) as usize] {
            return Err(Error::Precondition(format!(
                "local Euler characteristic is not {p}-periodic (iterate {k})"
            )));
        }
    }
    let sum: i64 = values.iter().sum();
    Ok(MeanChi {
        value: rat(sum as i128, p as i128),
        period: p,
        values,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resonance {
    pub lhs: Real,
    pub rhs: Rational,
    /// `lhs - rhs`.
    pub defect: Real,
    pub pass: bool,
    pub per_orbit: Vec<(String, Rational, Real)>,
}

/// `Σ χ̂_j / Δ_j` against `χ⁰(ξ)`; exact on rational data, within the
/// enclosure width otherwise.
pub fn resonance_check(c: &OrbitCatalog) -> Result<Resonance> {
    let mut lhs = Real::zero();
    let mut per_orbit = Vec::new();
    for o in &c.orbits {
        let mc = named(&o.name, mean_chi(&o.data))?;
        let delta = mean_index(&o.data);
        if delta.signum()? != Ordering::Greater {
            return Err(Error::Precondition(format!(
                "orbit {} has non-positive mean index {delta}",
                o.name
            )));
        }
        lhs = lhs.add(&Real::from(mc.value).div(&delta)?);
        per_orbit.push((o.name.clone(), mc.value, delta));
    }
    let rhs = chi0(&c.profile);
    let defect = lhs.sub(&Real::from(rhs));
    let pass = match &defect {
        Real::Exact(r) => *r == rat(0, 1),
        Real::Approx(i) => i.lo <= 0.0 && 0.0 <= i.hi,
    };
    Ok(Resonance {
        lhs,
        rhs,
        defect,
        pass,
        per_orbit,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub mode: Mode,
    pub threshold: i64,
    pub pass: bool,
    /// `(orbit, iterate, index)` of the first violation.
    pub offending: Option<(String, u64, i64)>,
    /// Iterates checked per orbit; later ones pass by the mean-index bound.
    pub closure: Vec<(String, u64)>,
    pub good_only: bool,
}

/// Dynamical convexity: `μ⁻(γᵏ) ≥ T` (positive) or `μ⁺(γᵏ) ≤ -T`
/// (negative) for every iterate, good iterates only on nondegenerate
/// catalogs. `T` defaults to `I - n`.
pub fn convexity_check(
    c: &OrbitCatalog,
    mode: Mode,
    threshold: Option<i64>,
) -> Result<ConvexityReport> {
    let t = threshold.unwrap_or_else(|| c.profile.k_minus());
    let n = c.profile.n as i64;
    let good_only = c.nondegenerate();
    let mut closure = Vec::new();
    for o in &c.orbits {
        let d = match mode {
            Mode::Positive => o.data.clone(),
            Mode::Negative => o.data.inverse(),
        };
        let delta = mean_index(&d);
        if delta.signum()? != Ordering::Greater {
            if t > -n {
                return Err(Error::Undecidable {
                    orbit: o.name.clone(),
                    value: delta.to_string(),
                });
            }
            closure.push((o.name.clone(), 0));
            continue;
        }
        // μ⁻(γᵏ) ≥ kΔ - n, so iterates with kΔ ≥ T + n pass automatically
        let kstar = Real::from(t + n).div(&delta)?.floor()?.max(0) as u64 + 1;
        closure.push((o.name.clone(), kstar));
        for k in 1..=kstar {
            if good_only && !bott::good_iterate(&d, k)? {
                continue;
            }
            let mu = iterated_index(&d, k)?;
            if mu < t {
                let reported = match mode {
                    Mode::Positive => mu,
                    Mode::Negative => -mu,
                };
                return Ok(ConvexityReport {
                    mode,
                    threshold: t,
                    pass: false,
                    offending: Some((o.name.clone(), k, reported)),
                    closure,
                    good_only,
                });
            }
        }
    }
    Ok(ConvexityReport {
        mode,
        threshold: t,
        pass: true,
        offending: None,
        closure,
        good_only,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contribution {
    pub orbit: String,
    pub iterate: u64,
    pub rank: u64,
}

/// Local homology of all iterates landing in degrees `[lo, hi]`.
pub fn contributions(
    c: &OrbitCatalog,
    lo: i64,
    hi: i64,
) -> Result<BTreeMap<i64, Vec<Contribution>>> {
    let n = c.profile.n as i64;
    let mut out: BTreeMap<i64, Vec<Contribution>> = BTreeMap::new();
    for o in &c.orbits {
        let delta = mean_index(&o.data);
        if delta.signum()? != Ordering::Greater {
            // invisible by the positive-mean gate; nothing to enumerate
            continue;
        }
        // support lies in [kΔ - n, kΔ + n]
        let kmax = Real::from(hi + n).div(&delta)?.to_f64().floor().max(0.0) as u64 + 1;
        let kmin = (Real::from(lo - n).div(&delta)?.to_f64().floor() as i64).max(1) as u64;
        for k in kmin..=kmax {
            let lh = named(&o.name, bott::local_homology(&o.data, k))?;
            for (deg, rank) in lh {
                if deg >= lo && deg <= hi && rank > 0 {
                    out.entry(deg).or_default().push(Contribution {
                        orbit: o.name.clone(),
                        iterate: k,
                        rank,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Total local homology rank per degree in `[lo, hi]`.
pub fn degree_counts(c: &OrbitCatalog, lo: i64, hi: i64) -> Result<Vec<u64>> {
    let n = c.profile.n as i64;
    let mut out = vec![0u64; (hi - lo + 1).max(0) as usize];
    for o in &c.orbits {
        let delta = mean_index(&o.data);
        if delta.signum()? != Ordering::Greater {
            continue;
        }
        let kmax = Real::from(hi + n).div(&delta)?.to_f64().floor().max(0.0) as u64 + 1;
        let kmin = (Real::from(lo - n).div(&delta)?.to_f64().floor() as i64).max(1) as u64;
        for k in kmin..=kmax {
            for (deg, rank) in named(&o.name, bott::local_homology(&o.data, k))? {
                if deg >= lo && deg <= hi {
                    out[(deg - lo) as usize] += rank;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseRow {
    pub degree: i64,
    pub c: u64,
    pub b: u64,
    /// `c_k - c_{k-1} + ⋯ ± c_n`.
    pub partial_c: i64,
    pub partial_b: i64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseTable {
    pub cutoff: i64,
    /// Every degree from `n` to the cutoff; empty for summary scans.
    pub rows: Vec<MorseRow>,
    pub last: Option<MorseRow>,
    pub pass: bool,
    pub pointwise: bool,
    pub first_violation: Option<MorseRow>,
    pub first_pointwise_violation: Option<MorseRow>,
    /// `Σ (-1)^k c_k` and `Σ (-1)^k b_k` over the scanned range.
    pub alternating_c: i64,
    pub alternating_b: i64,
}

/// Morse inequalities `c_k - c_{k-1} + ⋯ ≥ b_k - b_{k-1} + ⋯` for
/// `n ≤ k ≤ cutoff`, plus the pointwise `c_k ≥ b_k`.
pub fn morse_check(c: &OrbitCatalog, cutoff: i64) -> Result<MorseTable> {
    morse_scan(c, cutoff, true)
}

pub fn morse_scan(c: &OrbitCatalog, cutoff: i64, keep_rows: bool) -> Result<MorseTable> {
    let n = c.profile.n as i64;
    let counts = if cutoff >= n {
        degree_counts(c, n, cutoff)?
    } else {
        Vec::new()
    };
    let mut t = MorseTable {
        cutoff,
        rows: Vec::new(),
        last: None,
        pass: true,
        pointwise: true,
        first_violation: None,
        first_pointwise_violation: None,
        alternating_c: 0,
        alternating_b: 0,
    };
    let (mut pc, mut pb) = (0i64, 0i64);
    for (i, ck) in counts.into_iter().enumerate() {
        let k = n + i as i64;
        let bk = prequant_rank(&c.profile, k);
        pc = ck as i64 - pc;
        pb = bk as i64 - pb;
        let sgn = if k % 2 == 0 { 1 } else { -1 };
        t.alternating_c += sgn * ck as i64;
        t.alternating_b += sgn * bk as i64;
        let row = MorseRow {
            degree: k,
            c: ck,
            b: bk,
            partial_c: pc,
            partial_b: pb,
            ok: pc >= pb,
        };
        if !row.ok && t.first_violation.is_none() {
            t.pass = false;
            t.first_violation = Some(row.clone());
        }
        if ck < bk && t.first_pointwise_violation.is_none() {
            t.pointwise = false;
            t.first_pointwise_violation = Some(row.clone());
        }
        if keep_rows {
            t.rows.push(row.clone());
        }
        t.last = Some(row);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SdmStatus {
    pub sdm: bool,
    pub sdmin: bool,
    /// Local homology sits in the single degree `Δ ± n`.
    pub concentrated: bool,
}

/// Strongly degenerate maximum / minimum test on the simple orbit.
pub fn sdm_status(d: &BottData) -> Result<SdmStatus> {
    let none = SdmStatus {
        sdm: false,
        sdmin: false,
        concentrated: false,
    };
    if iterated_nullity(d, 1)? == 0 {
        return Ok(none);
    }
    if d.local_homology.is_none() {
        return Err(Error::DataRequired {
            orbit: String::new(),
            iterate: 1,
        });
    }
    bott::check_local_support(d, 2 * chi_period(d))?;
    let delta = mean_index(d);
    let Some(dv) = delta.exact() else {
        return Ok(none);
    };
    if !dv.is_integer() || dv.to_integer() % 2 != 0 {
        return Ok(none);
    }
    let dv = dv.to_integer() as i64;
    let n = d.n() as i64;
    let lh = bott::local_homology(d, 1)?;
    let top = lh.get(&(dv + n)).copied().unwrap_or(0) > 0;
    let bottom = lh.get(&(dv - n)).copied().unwrap_or(0) > 0;
    let others = lh.iter().filter(|(_, r)| **r > 0).count();
    Ok(SdmStatus {
        sdm: top,
        sdmin: bottom,
        concentrated: others == 1 && (top || bottom),
    })
}

pub fn sdm_candidate(d: &BottData) -> Result<bool> {
    Ok(sdm_status(d)?.sdm)
}

pub fn sdmin_candidate(d: &BottData) -> Result<bool> {
    Ok(sdm_status(d)?.sdmin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bott::{JumpAtOne, LocalHomology};

    pub(crate) fn sphere(n: usize) -> PrequantProfile {
        PrequantProfile {
            name: format!("sphere({n})"),
            n,
            betti: (0..=2 * n).map(|i| u64::from(i % 2 == 0)).collect(),
            i_index: 2 * (n as i64 + 1),
            c_b: n as u64 + 1,
        }
    }

    #[test]
    fn s3_ranks() {
        let p = sphere(1);
        for d in [3, 5, 7, 9] {
            assert_eq!(prequant_rank(&p, d), 1);
        }
        assert_eq!(prequant_rank(&p, 4), 0);
        assert_eq!(prequant_rank(&p, 2), 0);
        assert_eq!(chi0(&p), rat(-1, 2));
    }

    #[test]
    fn s5_window() {
        let p = sphere(2);
        assert_eq!(chi0(&p), rat(1, 2));
        let n_big = 6 * 5;
        let ranks: Vec<u64> = (2 * n_big - 2..=2 * n_big + 2)
            .map(|d| prequant_rank(&p, d))
            .collect();
        assert_eq!(ranks, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn euler_characteristics() {
        let hyp = BottData::constant(2, 1);
        assert_eq!(local_chi(&hyp, 2).unwrap(), 0);
        let m = mean_chi(&hyp).unwrap();
        assert_eq!((m.value, m.values.clone()), (rat(-1, 2), vec![-1, 0]));
        let mut g1 = BottData::rotation(&Real::from(1)).unwrap().shifted(2);
        g1.local_homology = Some(LocalHomology::single(0));
        assert_eq!(local_chi(&g1, 1).unwrap(), -1);
        let m = mean_chi(&g1).unwrap();
        assert_eq!((m.value, m.period), (rat(-1, 1), 2));
        let bare = BottData::rotation(&Real::from(1)).unwrap().shifted(2);
        assert!(matches!(
            local_chi(&bare, 2),
            Err(Error::DataRequired { .. })
        ));
    }

    #[test]
    fn sdm_examples() {
        let mut d = BottData::constant(2, 0);
        d.jump_at_one = Some(JumpAtOne { s: 0, nu: 2 });
        d.elliptic_height = 2;
        d.local_homology = Some(LocalHomology::single(1));
        assert!(sdm_candidate(&d).unwrap());
        assert!(!sdm_candidate(&BottData::rotation(&Real::from(rat(2, 5))).unwrap()).unwrap());
        d.local_homology = Some(LocalHomology::single(2));
        assert!(matches!(
            sdm_candidate(&d),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn convexity_examples() {
        let rot = BottData::rotation(&Real::from(rat(2, 5))).unwrap();
        let c = OrbitCatalog {
            profile: sphere(1),
            orbits: vec![Orbit {
                name: "r".into(),
                data: rot,
            }],
            claimed_complete: true,
        };
        let r = convexity_check(&c, Mode::Positive, None).unwrap();
        assert!(!r.pass);
        assert_eq!(r.offending, Some(("r".to_string(), 1, 1)));
        let empty = OrbitCatalog {
            orbits: Vec::new(),
            ..c
        };
        assert!(convexity_check(&empty, Mode::Positive, None).unwrap().pass);
    }
}
