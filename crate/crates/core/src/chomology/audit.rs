//! Full audit of a claimed-complete orbit catalog against the
//! cohomological constraints of a dynamically convex prequantization.
//!
//! Steps, in order: positive-mean gate, convexity, resonance, common jump,
//! the integer identity for `Σ m_j χ̂_j`, window occupancy around `2N`, the
//! top-degree witness and alternating count, Morse inequalities, the case
//! analysis at degree `n`, and perfection. Counting steps keep running after
//! a failure so the report lists every failing check; the verdict names the
//! first.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::{
    chi0, contributions, convexity_check, mean_chi, morse_scan, named, never_degenerate,
    prequant_rank, resonance_check, sdm_status, Contribution, ConvexityReport, MorseTable,
    OrbitCatalog, Resonance,
};
use crate::bott::{self, iterated_index, mean_index, BottData};
use crate::cijt::{self, CijtCertificate, JumpOptions};
use crate::error::{Error, Result};
use crate::number::{lcm_all, rat, Rational, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Positive,
    Negative,
}

#[derive(Debug, Clone)]
pub struct AuditOptions {
    pub mode: Mode,
    /// Convexity threshold; `None` means `I - n`.
    pub threshold: Option<i64>,
    pub search_bound: u64,
    pub epsilon: Option<Rational>,
    /// Morse scans stop here; beyond it the audit is inconclusive.
    pub max_degree: i64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            mode: Mode::Positive,
            threshold: None,
            search_bound: 200_000,
            epsilon: None,
            max_degree: 4_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Contradiction(String),
    Inconclusive(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Contradiction(_) => "contradiction",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Verdict::Consistent => None,
            Verdict::Contradiction(r) | Verdict::Inconclusive(r) => Some(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub name: String,
    pub status: StepStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowRow {
    pub degree: i64,
    pub b0: u64,
    pub c: u64,
    pub contributors: Vec<Contribution>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    pub rows: Vec<WindowRow>,
    pub distinct_orbits: Vec<String>,
    pub required: u64,
    /// Only the iterates `γ_j^{2m_j}` land in the window.
    pub exclusive: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counting {
    pub top_degree: i64,
    pub witnesses: Vec<String>,
    /// `Σ_{k=n}^{2N+n-1} (-1)^k c_k` from the data.
    pub alternating_c: i64,
    /// `Σ_j 2 m_j χ̂_j`.
    pub predicted: Rational,
    /// `(-1)ⁿ 2sχ(B)` with `N = sI`.
    pub expected_c: Rational,
    /// `Σ_{k=n}^{2N+n-1} (-1)^k b⁰_k`.
    pub alternating_b: i64,
    /// Morse inequality at degree `2N+n-1`: `(lhs, rhs)`.
    pub morse_top: (i64, i64),
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perfection {
    pub geometrically_perfect: bool,
    pub even_orbits: Vec<String>,
    pub r_b: u64,
    pub hypotheses: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub verdict: Verdict,
    pub steps: Vec<Step>,
    pub threshold: i64,
    pub convexity: Option<ConvexityReport>,
    pub resonance: Option<Resonance>,
    pub certificate: Option<CijtCertificate>,
    /// `(Σ m_j χ̂_j, N χ⁰)`.
    pub euler_sum: Option<(Rational, Rational)>,
    pub window: Option<Window>,
    pub extended_window: Option<Window>,
    pub counting: Option<Counting>,
    pub morse: Option<MorseTable>,
    pub elliptic_witnesses: Vec<String>,
    pub sdm_witnesses: Vec<String>,
    pub non_hyperbolic_witnesses: Vec<String>,
    pub case_analysis: Option<String>,
    pub perfection: Option<Perfection>,
}

impl AuditReport {
    pub fn failing(&self) -> Vec<&str> {
        self.steps
            .iter()
            .filter(|s| s.status == StepStatus::Fail)
            .map(|s| s.name.as_str())
            .collect()
    }

    pub fn step(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.name == name)
    }
}

struct Run {
    steps: Vec<Step>,
    open: Vec<String>,
}

impl Run {
    fn record(&mut self, name: &str, status: StepStatus, detail: impl Into<String>) {
        self.steps.push(Step {
            name: name.to_string(),
            status,
            detail: detail.into(),
        });
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        let st = if pass {
            StepStatus::Pass
        } else {
            StepStatus::Fail
        };
        self.record(name, st, detail);
    }

    fn skip(&mut self, name: &str, why: impl Into<String>) {
        self.record(name, StepStatus::Skipped, why);
    }

    fn verdict(&self) -> Verdict {
        if let Some(s) = self.steps.iter().find(|s| s.status == StepStatus::Fail) {
            return Verdict::Contradiction(format!("{}: {}", s.name, s.detail));
        }
        match self.open.first() {
            Some(r) => Verdict::Inconclusive(r.clone()),
            None => Verdict::Consistent,
        }
    }
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Runs the audit. Missing local homology turns into an inconclusive
/// verdict; malformed input is an error.
pub fn audit(c: &OrbitCatalog, opts: &AuditOptions) -> Result<AuditReport> {
    c.validate()?;
    for o in &c.orbits {
        let period = super::chi_period(&o.data);
        named(&o.name, bott::check_local_support(&o.data, 2 * period))?;
    }
    let threshold = opts.threshold.unwrap_or_else(|| c.profile.k_minus());
    let mut report = AuditReport {
        verdict: Verdict::Consistent,
        steps: Vec::new(),
        threshold,
        convexity: None,
        resonance: None,
        certificate: None,
        euler_sum: None,
        window: None,
        extended_window: None,
        counting: None,
        morse: None,
        elliptic_witnesses: Vec::new(),
        sdm_witnesses: Vec::new(),
        non_hyperbolic_witnesses: Vec::new(),
        case_analysis: None,
        perfection: None,
    };
    let mut run = Run {
        steps: Vec::new(),
        open: Vec::new(),
    };
    match pipeline(c, opts, threshold, &mut report, &mut run) {
        Ok(()) => {}
        Err(Error::DataRequired { orbit, iterate }) => {
            run.open.insert(
                0,
                format!("local homology of {orbit} at iterate {iterate} is required"),
            );
        }
        Err(Error::BoundedSearch { tried }) => {
            run.open.insert(
                0,
                format!("no common jump found within {tried} candidates (not a refutation)"),
            );
        }
        Err(Error::Precision(m)) => {
            run.open.insert(0, format!("precision exhausted: {m}"));
        }
        Err(e) => return Err(e),
    }
    report.verdict = run.verdict();
    report.steps = run.steps;
    Ok(report)
}

fn pipeline(
    c: &OrbitCatalog,
    opts: &AuditOptions,
    threshold: i64,
    rep: &mut AuditReport,
    run: &mut Run,
) -> Result<()> {
    let p = &c.profile;
    let n = p.n as i64;
    let positive = opts.mode == Mode::Positive;

    // orbits with the wrong mean-index sign must be homologically invisible
    let mut visible = Vec::new();
    let mut hidden = Vec::new();
    for (i, o) in c.orbits.iter().enumerate() {
        let delta = mean_index(&o.data);
        let ok_sign = match delta.signum()? {
            Ordering::Greater => positive,
            Ordering::Less => !positive,
            Ordering::Equal => false,
        };
        if ok_sign {
            continue;
        }
        let period = super::chi_period(&o.data);
        let mut seen = false;
        for k in 1..=2 * period {
            if named(&o.name, bott::local_homology(&o.data, k))?
                .values()
                .any(|r| *r > 0)
            {
                seen = true;
                break;
            }
        }
        if seen {
            visible.push(o.name.clone());
        } else {
            hidden.push(i);
        }
    }
    run.check(
        "mean-index gate",
        visible.is_empty(),
        if visible.is_empty() {
            format!("{} orbit(s) excluded as invisible", hidden.len())
        } else {
            format!(
                "homologically visible orbit(s) with wrong mean-index sign: {}",
                visible.join(", ")
            )
        },
    );
    if !visible.is_empty() {
        return Ok(());
    }
    let mut cat = c.clone();
    for i in hidden.iter().rev() {
        cat.orbits.remove(*i);
    }

    let conv = convexity_check(&cat, opts.mode, Some(threshold))?;
    let detail = match &conv.offending {
        Some((name, k, mu)) => {
            let rel = if positive {
                format!("μ⁻ = {mu} < {threshold}")
            } else {
                format!("μ⁺ = {mu} > {}", -threshold)
            };
            format!("orbit {name} iterate {k}: {rel}")
        }
        None => format!("all iterates clear threshold {threshold}"),
    };
    run.check("convexity", conv.pass, detail);
    let conv_pass = conv.pass;
    rep.convexity = Some(conv);
    if !conv_pass {
        return Ok(());
    }

    if !c.claimed_complete {
        run.open.push("catalog is not claimed complete".into());
        return Ok(());
    }
    if cat.orbits.is_empty() {
        run.check(
            "resonance",
            p.euler() == 0,
            "empty catalog: a complete set of orbits cannot be empty",
        );
        return Ok(());
    }

    let search_orbits: Vec<BottData> = cat.orbits.iter().map(|o| o.data.clone()).collect();
    let oriented: Vec<BottData> = if positive {
        search_orbits.clone()
    } else {
        search_orbits.iter().map(BottData::inverse).collect()
    };

    if !positive {
        let q = cijt::choose_q(&search_orbits);
        let jo = JumpOptions {
            search_bound: opts.search_bound,
            epsilon: opts.epsilon,
            mirrored: true,
            q_multiple: Some(q),
            ..JumpOptions::default()
        };
        let cert = cijt::find_jump(&search_orbits, &jo)?;
        run.check(
            "common jump",
            cert.passed(),
            format!("mirrored jump at N = {}", cert.n),
        );
        rep.certificate = Some(cert);
        run.open.push(
            "negative mode stops after convexity and the mirrored jump; counting is not modeled"
                .into(),
        );
        return Ok(());
    }

    let res = resonance_check(&cat)?;
    run.check(
        "resonance",
        res.pass,
        format!(
            "Σ χ̂/Δ = {} against χ⁰ = {}",
            res.lhs,
            crate::number::rational_to_string(&res.rhs)
        ),
    );
    let mcs: Vec<_> = cat
        .orbits
        .iter()
        .map(|o| named(&o.name, mean_chi(&o.data)))
        .collect::<Result<_>>()?;
    rep.resonance = Some(res);

    // common jump, with 𝔮 a multiple of every χ-period
    let q = lcm_all(std::iter::once(cijt::choose_q(&oriented)).chain(mcs.iter().map(|m| m.period)));
    let single = cat.orbits.len() == 1;
    let mut n0 = p.i_index as u64;
    if single {
        let num = mcs[0].value.numer().unsigned_abs() as u64;
        n0 *= q * num.max(1);
    }
    let chi_sum: Rational = mcs.iter().map(|m| m.value.abs() * rat(q as i128, 1)).sum();
    let mut eps = cijt::default_epsilon(cat.orbits.len(), q);
    if !chi_sum.is_zero() {
        eps = eps.min(rat(1, 2) / chi_sum);
    }
    if let Some(e) = opts.epsilon {
        eps = e;
    }
    let jo = JumpOptions {
        n0,
        epsilon: Some(eps),
        search_bound: opts.search_bound,
        q_multiple: Some(q),
        frac_delta: None,
        mirrored: false,
    };
    let cert = cijt::find_jump(&oriented, &jo)?;
    run.check(
        "common jump",
        cert.passed(),
        format!(
            "N = {} (s = {}), m = {:?}",
            cert.n,
            cert.n / p.i_index as u64,
            cert.m
        ),
    );
    let big_n = cert.n as i64;
    let s = cert.n / p.i_index as u64;
    let m = cert.m.clone();
    rep.certificate = Some(cert);

    let lhs: Rational = m
        .iter()
        .zip(&mcs)
        .map(|(mj, mc)| mc.value * rat(*mj as i128, 1))
        .sum();
    let rhs = chi0(p) * rat(big_n as i128, 1);
    run.check(
        "euler sum",
        lhs == rhs,
        format!(
            "Σ m_j χ̂_j = {} against N χ⁰ = {}",
            crate::number::rational_to_string(&lhs),
            crate::number::rational_to_string(&rhs)
        ),
    );
    rep.euler_sum = Some((lhs, rhs));

    // window occupancy
    let jump_iterates: Vec<(String, u64)> = cat
        .orbits
        .iter()
        .zip(&m)
        .map(|(o, mj)| (o.name.clone(), 2 * mj))
        .collect();
    let r_b = p.r_b();
    let inner = window(
        &cat,
        2 * big_n - n + 1,
        2 * big_n + n - 1,
        r_b.saturating_sub(2),
        &jump_iterates,
    )?;
    run.check("window occupancy", inner.pass, window_detail(&inner));
    let extended = if threshold > n {
        let w = window(&cat, 2 * big_n - n, 2 * big_n + n, r_b, &jump_iterates)?;
        run.check("extended window occupancy", w.pass, window_detail(&w));
        Some(w)
    } else {
        None
    };

    // top-degree witness and the alternating count below it
    let top = 2 * big_n + n;
    let mut witnesses = Vec::new();
    for (o, (_, it)) in cat.orbits.iter().zip(&jump_iterates) {
        let lh = named(&o.name, bott::local_homology(&o.data, *it))?;
        if lh.get(&top).copied().unwrap_or(0) > 0 {
            witnesses.push(o.name.clone());
        }
    }
    let budget_ok = top <= opts.max_degree;
    let morse = if budget_ok {
        Some(morse_scan(&cat, top - 1, false)?)
    } else {
        None
    };
    let predicted: Rational = m
        .iter()
        .zip(&mcs)
        .map(|(mj, mc)| mc.value * rat(2 * *mj as i128, 1))
        .sum();
    let expected_c = rat(sign(n) as i128 * 2 * s as i128 * p.euler() as i128, 1);
    let morse_top = morse
        .as_ref()
        .and_then(|m| m.last.as_ref())
        .map_or((0, 0), |r| (r.partial_c, r.partial_b));
    let counting = Counting {
        top_degree: top,
        witnesses: witnesses.clone(),
        alternating_c: morse.as_ref().map_or(0, |m| m.alternating_c),
        predicted,
        expected_c,
        alternating_b: morse.as_ref().map_or(0, |m| m.alternating_b),
        morse_top,
        pass: !witnesses.is_empty(),
    };
    let detail = if counting.pass {
        format!("HC_{top} ≠ 0 at {}", witnesses.join(", "))
    } else {
        format!(
            "no orbit reaches degree {top}; the Morse inequality at {} would need {} ≥ {}",
            top - 1,
            expected_c * rat(sign(n + 1) as i128, 1),
            expected_c * rat(sign(n + 1) as i128, 1) + rat(1, 1)
        )
    };
    run.check("top-degree count", counting.pass, detail);
    rep.counting = Some(counting);

    match morse {
        Some(morse) => {
            let mdetail = match (&morse.first_violation, &morse.first_pointwise_violation) {
                (None, None) => format!("inequalities hold for degrees {n}..{}", top - 1),
                (Some(r), _) => format!(
                    "partial sum at degree {}: {} < {}",
                    r.degree, r.partial_c, r.partial_b
                ),
                (None, Some(r)) => format!("degree {}: c = {} < b⁰ = {}", r.degree, r.c, r.b),
            };
            run.check("morse", morse.pass && morse.pointwise, mdetail);
            rep.morse = Some(morse);
        }
        None => {
            let why = format!("degree {top} exceeds the scan budget {}", opts.max_degree);
            run.skip("morse", why.clone());
            run.open.push(why);
        }
    }

    // an iterate γ_j^{2m_j} in degree 2N ± n forces e(γ_j) = 2n
    let mut extremal = Vec::new();
    let mut not_elliptic = Vec::new();
    for (o, (_, it)) in cat.orbits.iter().zip(&jump_iterates) {
        let lh = named(&o.name, bott::local_homology(&o.data, *it))?;
        let hit = [top, 2 * big_n - n]
            .iter()
            .any(|d| lh.get(d).copied().unwrap_or(0) > 0);
        if hit {
            extremal.push(o.name.clone());
            if o.data.flags().e as usize == 2 * p.n {
                rep.elliptic_witnesses.push(o.name.clone());
            } else {
                not_elliptic.push(o.name.clone());
            }
        }
        if bott::iterated_nullity(&o.data, 1)? > 0 && o.data.local_homology.is_some() {
            let st = named(&o.name, sdm_status(&o.data))?;
            if st.sdm {
                rep.sdm_witnesses.push(o.name.clone());
            }
        }
    }
    if !extremal.is_empty() {
        run.check(
            "elliptic witness",
            not_elliptic.is_empty(),
            if not_elliptic.is_empty() {
                format!("totally elliptic: {}", rep.elliptic_witnesses.join(", "))
            } else {
                format!(
                    "extremal jump iterate of non-elliptic orbit(s) {}",
                    not_elliptic.join(", ")
                )
            },
        );
    }
    if p.odd_betti_vanish() && p.n % 2 == 1 {
        let w = extended.as_ref().unwrap_or(&inner);
        let mut bad = Vec::new();
        for row in w.rows.iter().filter(|r| r.degree.rem_euclid(2) == 1) {
            for ct in &row.contributors {
                if rep.non_hyperbolic_witnesses.contains(&ct.orbit) {
                    continue;
                }
                let o = cat
                    .orbits
                    .iter()
                    .find(|o| o.name == ct.orbit)
                    .expect("contributor");
                if o.data.flags().e == 0 {
                    bad.push(ct.orbit.clone());
                }
                rep.non_hyperbolic_witnesses.push(ct.orbit.clone());
            }
        }
        run.check(
            "non-hyperbolic",
            bad.is_empty(),
            if bad.is_empty() {
                format!(
                    "odd window degrees carried by {:?}",
                    rep.non_hyperbolic_witnesses
                )
            } else {
                format!(
                    "hyperbolic orbit(s) in odd window degree: {}",
                    bad.join(", ")
                )
            },
        );
    }

    rep.window = Some(inner);
    rep.extended_window = extended;

    if threshold <= n && cat.nondegenerate() {
        case_analysis(&cat, &m, rep, run)?;
    }

    perfection(&cat, rep, run)?;

    if single {
        if p.euler() == 0 {
            run.open.push(
                "single orbit over a base with χ(B) = 0: degenerate-maximum forcing does not apply"
                    .into(),
            );
        }
        let d = &cat.orbits[0].data;
        let totally = d
            .jump_at_one
            .is_some_and(|j| j.nu as usize == 2 * p.n && j.s == 0);
        if p.n == 2 && threshold < p.k_minus() && totally {
            // the relaxed threshold in dimension five leaves this case open
            run.steps.retain(|s| s.status != StepStatus::Fail);
            run.open.insert(
                0,
                "n = 2 with relaxed threshold: a totally degenerate orbit with S⁺(1) = 0 is not excluded".into(),
            );
        }
    }
    Ok(())
}

fn window(
    c: &OrbitCatalog,
    lo: i64,
    hi: i64,
    required: u64,
    jumps: &[(String, u64)],
) -> Result<Window> {
    let contrib = if lo <= hi {
        contributions(c, lo, hi)?
    } else {
        Default::default()
    };
    let mut rows = Vec::new();
    let mut distinct = BTreeSet::new();
    let mut exclusive = true;
    let mut pointwise = true;
    for d in lo..=hi {
        let cs = contrib.get(&d).cloned().unwrap_or_default();
        let b0 = prequant_rank(&c.profile, d);
        let cd: u64 = cs.iter().map(|x| x.rank).sum();
        for x in &cs {
            distinct.insert(x.orbit.clone());
            if !jumps
                .iter()
                .any(|(name, it)| *name == x.orbit && *it == x.iterate)
            {
                exclusive = false;
            }
        }
        if cd < b0 {
            pointwise = false;
        }
        rows.push(WindowRow {
            degree: d,
            b0,
            c: cd,
            contributors: cs,
        });
    }
    let distinct_orbits: Vec<String> = distinct.into_iter().collect();
    let pass = exclusive && pointwise && distinct_orbits.len() as u64 >= required;
    Ok(Window {
        lo,
        hi,
        rows,
        distinct_orbits,
        required,
        exclusive,
        pass,
    })
}

fn window_detail(w: &Window) -> String {
    let short: Vec<i64> = w
        .rows
        .iter()
        .filter(|r| r.c < r.b0)
        .map(|r| r.degree)
        .collect();
    let mut parts = vec![format!(
        "[{}, {}]: {} distinct orbit(s), need {}",
        w.lo,
        w.hi,
        w.distinct_orbits.len(),
        w.required
    )];
    if !short.is_empty() {
        parts.push(format!("degrees {short:?} carry less than b⁰"));
    }
    if !w.exclusive {
        parts.push("an iterate other than γ^{2m} lands in the window".into());
    }
    parts.join("; ")
}

/// Degree-`n` analysis when the convexity threshold is `n`.
fn case_analysis(c: &OrbitCatalog, m: &[u64], rep: &mut AuditReport, run: &mut Run) -> Result<()> {
    let n = c.profile.n as i64;
    let at = |deg: i64| -> Result<Vec<(usize, u64)>> {
        let mut out = Vec::new();
        for (i, o) in c.orbits.iter().enumerate() {
            let delta = mean_index(&o.data);
            let kmax = Real::from(deg + n).div(&delta)?.to_f64().floor().max(0.0) as u64 + 1;
            for k in 1..=kmax {
                if bott::good_iterate(&o.data, k)? && iterated_index(&o.data, k)? == deg {
                    out.push((i, k));
                }
            }
        }
        Ok(out)
    };
    let low = at(n)?;
    let names: BTreeSet<usize> = low.iter().map(|(i, _)| *i).collect();
    let text = match names.len() {
        0 => {
            rep.case_analysis = Some(format!("no good orbit of index {n}"));
            run.skip("case analysis", format!("no good orbit of index {n}"));
            return Ok(());
        }
        1 => {
            let i = *names.iter().next().expect("one");
            let name = &c.orbits[i].name;
            if m[i] >= 2 {
                let gap = bott::index_gap_check(&c.orbits[i].data, m[i])?;
                run.check(
                    "case analysis",
                    gap,
                    format!(
                        "unique index-{n} orbit {name}: index gap at m = {} {}",
                        m[i],
                        if gap { "holds" } else { "fails" }
                    ),
                );
                format!("case 1: unique orbit {name} of index {n}, gap check {gap}")
            } else {
                run.skip(
                    "case analysis",
                    format!(
                        "unique orbit {name}; m = {} too small for the gap check",
                        m[i]
                    ),
                );
                format!("case 1: unique orbit {name} of index {n}")
            }
        }
        _ => {
            let next = at(n + 1)?;
            let found: Vec<&str> = next
                .iter()
                .map(|(i, _)| c.orbits[*i].name.as_str())
                .collect();
            run.check(
                "case analysis",
                !found.is_empty(),
                if found.is_empty() {
                    format!("two orbits of index {n} but none of index {}", n + 1)
                } else {
                    format!("index-{} orbit {}", n + 1, found[0])
                },
            );
            format!(
                "case 2: {} orbits of index {n}; index {} carried by {:?}",
                names.len(),
                n + 1,
                found
            )
        }
    };
    rep.case_analysis = Some(text);
    Ok(())
}

fn perfection(c: &OrbitCatalog, rep: &mut AuditReport, run: &mut Run) -> Result<()> {
    let mut parities = BTreeSet::new();
    let mut even = Vec::new();
    for o in &c.orbits {
        let period = super::chi_period(&o.data);
        for k in 1..=2 * period {
            for (deg, r) in named(&o.name, bott::local_homology(&o.data, k))? {
                if r > 0 {
                    parities.insert(deg.rem_euclid(2));
                }
            }
        }
        if bott::good_iterate(&o.data, 2)? {
            even.push(o.name.clone());
        }
    }
    let p = &c.profile;
    let gp = parities.len() <= 1;
    let hypotheses = c.orbits.iter().all(|o| never_degenerate(&o.data))
        && p.c_b >= p.n as u64
        && (p.c_b > p.n as u64 || p.odd_betti_vanish());
    let pass = !(gp && hypotheses) || even.len() as u64 == p.r_b();
    if gp && hypotheses {
        run.check(
            "perfection",
            pass,
            format!("{} even orbit(s), r_B = {}", even.len(), p.r_b()),
        );
    } else {
        run.skip(
            "perfection",
            if gp {
                "hypotheses not met"
            } else {
                "mixed index parities"
            },
        );
    }
    rep.perfection = Some(Perfection {
        geometrically_perfect: gp,
        even_orbits: even,
        r_b: p.r_b(),
        hypotheses,
        pass,
    });
    Ok(())
}
