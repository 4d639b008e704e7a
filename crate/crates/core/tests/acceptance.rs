//! Acceptance criteria 1-10, one line each. Exits non-zero on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use reebix::bott::{
    infer_bott, iterated_index, iterated_nullity, mean_index, BottData, InferOptions,
};
use reebix::chomology::{
    audit, chi0, prequant_rank, resonance_check, AuditOptions, PrequantProfile, Verdict,
};
use reebix::cijt::{find_jump, verify_certificate, JumpOptions};
use reebix::models::{ellipsoid_catalog, sphere_profile, EllipsoidSpec};
use reebix::number::{rat, Interval, Real};
use reebix::sympath::{
    cz_index, cz_index_with, index_triple, invert_path, iterate_path, Generator, IndexMode,
    IndexOptions, SymplecticPath,
};
use reebix::OrbitCatalog;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(aspects: Vec<Real>) -> OrbitCatalog {
    ellipsoid_catalog(&EllipsoidSpec::new(aspects).unwrap())
        .unwrap()
        .catalog
}

fn irrational(x: f64) -> Real {
    Real::Approx(Interval::around(x, 1e-14))
}

fn within(t: Instant, limit: u64) -> Result<Duration, String> {
    let d = t.elapsed();
    ensure(d < Duration::from_secs(limit), || {
        format!("took {d:?}, limit {limit}s")
    })?;
    Ok(d)
}

fn axioms() -> Outcome {
    let t = Instant::now();
    let mut r = common::rng(1);
    for i in 0..50 {
        let dim = 2 * (1 + i % 3);
        let a = common::random_symmetric(&mut r, dim, 1.8 * std::f64::consts::PI);
        let p = SymplecticPath::from_generator(Generator::ExpSymmetric(a.clone())).unwrap();
        let mu = cz_index(&p).map_err(|e| format!("sample {i}: {e}"))?;
        ensure(2 * mu == common::signature(&a), || {
            format!("sample {i}: μ = {mu}, sign = {}", common::signature(&a))
        })?;
    }
    let sampled = IndexOptions {
        mode: IndexMode::Sampled,
        ..IndexOptions::default()
    };
    for i in 0..10 {
        let a = common::random_symmetric(&mut r, 4, 5.0);
        let base = Generator::ExpSymmetric(a);
        let mu = cz_index_with(
            &SymplecticPath::from_generator(base.clone()).unwrap(),
            &sampled,
        )
        .map_err(|e| e.to_string())?;
        let w = [r.gen_range(-2..=2), r.gen_range(-2..=2)];
        let g = Generator::Product(vec![common::loop_generator(&w), base]);
        let shifted = cz_index_with(&SymplecticPath::from_generator(g).unwrap(), &sampled)
            .map_err(|e| e.to_string())?;
        ensure(shifted == mu + 2 * (w[0] + w[1]), || {
            format!("loop {i}: {shifted} vs {mu} + 2·{}", w[0] + w[1])
        })?;
    }
    let d = within(t, 30)?;
    Ok(format!("50 signature cases, 10 loop products, {d:.2?}"))
}

fn corpus() -> Vec<Vec<common::Drawn>> {
    let mut r = common::rng(2);
    (0..100).map(|_| common::random_blocks(&mut r)).collect()
}

fn bott_oracle() -> Outcome {
    let t = Instant::now();
    for (i, blocks) in corpus().iter().enumerate() {
        let path = common::path_of(blocks);
        let d =
            infer_bott(&path, &InferOptions::default()).map_err(|e| format!("path {i}: {e}"))?;
        for k in 1..=24u32 {
            let lower = reebix::cz_lower(&iterate_path(&path, k).unwrap()).unwrap();
            let inferred = iterated_index(&d, k as u64).unwrap();
            let planes = common::oracle_lower(blocks, k as u64).0;
            ensure(inferred == lower && lower == planes, || {
                format!("path {i} k {k}: Bott {inferred}, path {lower}, planes {planes}")
            })?;
        }
    }
    let d = within(t, 120)?;
    Ok(format!("100 paths × 24 iterates, {d:.2?}"))
}

fn index_relations() -> Outcome {
    let mut count = 0;
    for (i, blocks) in corpus().iter().enumerate() {
        let path = common::path_of(blocks);
        for k in 1..=24u32 {
            let p = iterate_path(&path, k).unwrap();
            let tr = index_triple(&p).unwrap();
            let inv = index_triple(&invert_path(&p)).unwrap();
            ensure(tr.mu_plus == tr.mu_minus + tr.nullity as i64, || {
                format!("path {i} k {k}: μ⁺ ≠ μ⁻ + ν")
            })?;
            ensure(inv.mu_minus == -tr.mu_plus, || {
                format!(
                    "path {i} k {k}: μ⁻(Γ⁻¹) = {} vs -μ⁺ = {}",
                    inv.mu_minus, -tr.mu_plus
                )
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} iterates"))
}

fn iteration_inequalities() -> Outcome {
    let mut mon = 0;
    for (i, blocks) in corpus().iter().enumerate() {
        let base =
            BottData::from_blocks(&blocks.iter().map(common::Drawn::block).collect::<Vec<_>>())
                .unwrap();
        for shift in [0, base.dim2n as i64 + 2] {
            let d = base.shifted(shift);
            let e = d.flags().e as i64;
            let mu1 = iterated_index(&d, 1).unwrap();
            let monotone = d.b_at_one >= d.n() as i64;
            for m in 1..=50u64 {
                let a = iterated_index(&d, m).unwrap();
                let b = iterated_index(&d, m + 1).unwrap();
                let nu = iterated_nullity(&d, m).unwrap() as i64;
                ensure(2 * nu - e <= 2 * (b - a - mu1), || {
                    format!("orbit {i}+{shift} m {m}: gap inequality fails")
                })?;
                if monotone {
                    ensure(b >= a, || format!("orbit {i}+{shift} m {m}: not monotone"))?;
                    mon += 1;
                }
            }
        }
    }
    Ok(format!(
        "200 orbits × 50 iterates, {mon} monotonicity checks"
    ))
}

fn random_orbit(r: &mut rand_chacha::ChaCha8Rng) -> BottData {
    loop {
        let blocks = common::random_blocks(r);
        let d = BottData::from_blocks(&blocks.iter().map(common::Drawn::block).collect::<Vec<_>>())
            .unwrap()
            .shifted(r.gen_range(0..=2) * 2);
        if mean_index(&d).signum().unwrap() == std::cmp::Ordering::Greater {
            return d;
        }
    }
}

fn cijt() -> Outcome {
    let t = Instant::now();
    let mut r = common::rng(5);
    let mut largest = 0;
    for i in 0..50 {
        let q = r.gen_range(1..=3);
        let orbits: Vec<BottData> = (0..q).map(|_| random_orbit(&mut r)).collect();
        let opts = JumpOptions {
            search_bound: 1_000_000,
            ..JumpOptions::default()
        };
        let cert = find_jump(&orbits, &opts).map_err(|e| format!("collection {i}: {e}"))?;
        let recheck = verify_certificate(&orbits, &cert).unwrap();
        ensure(cert.passed() && recheck.iter().all(|c| c.pass), || {
            format!("collection {i}: certificate does not verify")
        })?;
        for id in [
            "nullity",
            "index-before",
            "index-after",
            "index-at-lower",
            "index-at-upper",
            "m-form",
            "eps-bound",
        ] {
            ensure(cert.summary().get(id) == Some(&true), || {
                format!("collection {i}: relation {id} missing")
            })?;
        }
        let mut bad = cert.clone();
        bad.m[r.gen_range(0..q)] += cert.q_param;
        ensure(
            verify_certificate(&orbits, &bad)
                .unwrap()
                .iter()
                .any(|c| !c.pass),
            || format!("collection {i}: tampered certificate verifies"),
        )?;
        largest = largest.max(cert.n);
    }
    let d = within(t, 300)?;
    Ok(format!("50 collections, largest N = {largest}, {d:.2?}"))
}

fn homology_table() -> Outcome {
    let s3 = sphere_profile(1);
    for d in -5..=100 {
        let want = u64::from(d >= 3 && d % 2 != 0);
        let got = prequant_rank(&s3, d);
        ensure(got == want, || format!("S³ degree {d}: rank {got}"))?;
    }
    let mut r = common::rng(6);
    for i in 0..20 {
        let n = r.gen_range(1..=4usize);
        let mut betti = vec![1u64];
        betti.extend((0..2 * n - 1).map(|_| r.gen_range(0..=3u64)));
        betti.push(1);
        let c_b = r.gen_range(1..=4u64);
        let p = PrequantProfile {
            name: format!("random {i}"),
            n,
            betti,
            i_index: 2 * c_b as i64 + 2 * r.gen_range(0..=3i64),
            c_b,
        };
        p.validate().unwrap();
        let first = (-20..500).find(|d| prequant_rank(&p, *d) > 0);
        ensure(first == Some(p.k_minus()), || {
            format!(
                "profile {i}: first nonzero {first:?}, I - n = {}",
                p.k_minus()
            )
        })?;
    }
    Ok("S³ up to degree 100, 20 random profiles".into())
}

fn resonance() -> Outcome {
    let mut r = common::rng(7);
    for n in 1..=3usize {
        let want = if n % 2 == 1 { rat(-1, 2) } else { rat(1, 2) };
        ensure(chi0(&sphere_profile(n)) == want, || {
            format!("χ⁰ of S^{} is not {want}", 2 * n + 1)
        })?;
        for i in 0..20 {
            let a = common::random_aspects(&mut r, n + 1, 9, 5);
            let c = e(a);
            let res = resonance_check(&c).map_err(|e| e.to_string())?;
            ensure(res.lhs == Real::from(want), || {
                format!("n {n} sample {i}: Σ χ̂/Δ = {}", res.lhs)
            })?;
        }
    }
    Ok("60 ellipsoids, S³ -1/2, S⁵ 1/2, S⁷ -1/2".into())
}

fn consistency() -> Outcome {
    let c = e(vec![Real::from(1), Real::from(2)]);
    let rep = audit(&c, &AuditOptions::default()).map_err(|e| e.to_string())?;
    ensure(rep.verdict == Verdict::Consistent, || {
        format!("E(1,2): {:?}", rep.verdict)
    })?;
    let perf = rep
        .perfection
        .as_ref()
        .ok_or("E(1,2): no perfection record")?;
    ensure(perf.geometrically_perfect, || "E(1,2) not perfect".into())?;
    ensure(rep.elliptic_witnesses.len() == 2, || {
        format!("E(1,2) elliptic witnesses {:?}", rep.elliptic_witnesses)
    })?;
    ensure(perf.even_orbits.len() == 2 && perf.r_b == 2, || {
        format!("E(1,2) even orbits {:?}", perf.even_orbits)
    })?;
    let c = e(vec![
        Real::from(1),
        irrational(std::f64::consts::SQRT_2),
        irrational(3f64.sqrt()),
    ]);
    let rep = audit(&c, &AuditOptions::default()).map_err(|e| e.to_string())?;
    ensure(rep.verdict == Verdict::Consistent, || {
        format!("E(1,τ₁,τ₂): {:?}", rep.verdict)
    })?;
    ensure(c.orbits.len() as u64 == c.profile.r_b(), || {
        "orbit count differs from r_B".into()
    })?;
    Ok(
        "E(1,2) consistent, perfect, 2 elliptic, 2 even; E(1,√2,√3) consistent with 3 orbits"
            .into(),
    )
}

fn contradiction() -> Outcome {
    let allowed = [
        "window occupancy",
        "extended window occupancy",
        "top-degree count",
        "morse",
    ];
    let mut singles = Vec::new();
    for aspects in [
        vec![
            Real::from(1),
            irrational(std::f64::consts::SQRT_2),
            irrational(3f64.sqrt()),
        ],
        vec![Real::from(1), Real::from(2), Real::from(3)],
    ] {
        let full = e(aspects);
        for j in 0..full.orbits.len() {
            let mut single = full.clone();
            single.orbits = vec![full.orbits[j].clone()];
            let rep = audit(&single, &AuditOptions::default()).map_err(|e| e.to_string())?;
            ensure(matches!(rep.verdict, Verdict::Contradiction(_)), || {
                format!("single {}: {:?}", full.orbits[j].name, rep.verdict)
            })?;
            let failing = rep.failing();
            let hit = failing.iter().find(|f| allowed.contains(f));
            ensure(hit.is_some(), || {
                format!("single {}: failing {failing:?}", full.orbits[j].name)
            })?;
            singles.push(hit.unwrap().to_string());
        }
    }
    let mut removals = 0;
    for aspects in [
        vec![1, 2],
        vec![2, 3],
        vec![1, 2, 3],
        vec![1, 1, 2],
        vec![2, 3, 5, 7],
    ] {
        let full = e(aspects.into_iter().map(Real::from).collect());
        for j in 0..full.orbits.len() {
            let cut = full.without(j);
            let rep = audit(&cut, &AuditOptions::default()).map_err(|e| e.to_string())?;
            let res_fail = rep.resonance.as_ref().is_some_and(|r| !r.pass);
            ensure(
                matches!(rep.verdict, Verdict::Contradiction(_)) || res_fail,
                || format!("removal {j}: {:?}", rep.verdict),
            )?;
            removals += 1;
        }
    }
    singles.sort();
    singles.dedup();
    Ok(format!(
        "6 single-orbit S⁵ catalogs refuted via {singles:?}; {removals} removals refuted"
    ))
}

fn orbit_bound() -> Outcome {
    let fixtures = vec![
        vec![Real::from(1), irrational(std::f64::consts::SQRT_2)],
        vec![Real::from(1), irrational(std::f64::consts::E / 2.0)],
        vec![
            Real::from(1),
            irrational(std::f64::consts::SQRT_2),
            irrational(3f64.sqrt()),
        ],
        vec![
            Real::from(1),
            irrational(5f64.sqrt() / 2.0),
            irrational(7f64.sqrt() / 2.0),
        ],
        vec![
            Real::from(1),
            irrational(std::f64::consts::SQRT_2),
            irrational(3f64.sqrt()),
            irrational(5f64.sqrt()),
        ],
    ];
    let mut lines = Vec::new();
    for a in fixtures {
        let c = e(a);
        ensure(c.nondegenerate(), || "fixture is degenerate".into())?;
        let rep = audit(&c, &AuditOptions::default()).map_err(|e| e.to_string())?;
        ensure(rep.verdict == Verdict::Consistent, || {
            format!("n = {}: {:?}", c.profile.n, rep.verdict)
        })?;
        let w = rep.window.as_ref().ok_or("no window")?;
        let r_b = c.profile.r_b();
        ensure(w.distinct_orbits.len() as u64 + 2 >= r_b, || {
            format!("window has {} orbits", w.distinct_orbits.len())
        })?;
        let cnt = rep.counting.as_ref().ok_or("no counting record")?;
        ensure(!cnt.witnesses.is_empty(), || "no top-degree witness".into())?;
        ensure(
            cnt.witnesses
                .iter()
                .all(|x| rep.elliptic_witnesses.contains(x)),
            || "top-degree witness not elliptic".into(),
        )?;
        ensure(c.orbits.len() as u64 == r_b, || {
            "orbit count differs from r_B".into()
        })?;
        lines.push(format!(
            "n={}: {}+{}",
            c.profile.n,
            w.distinct_orbits.len(),
            cnt.witnesses.len()
        ));
    }
    Ok(lines.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("axiom suite", axioms),
        ("Bott-formula oracle", bott_oracle),
        ("index relations", index_relations),
        ("iteration inequalities", iteration_inequalities),
        ("common index jump", cijt),
        ("homology table", homology_table),
        ("resonance", resonance),
        ("end-to-end consistency", consistency),
        ("end-to-end contradiction", contradiction),
        ("orbit lower bound", orbit_bound),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(msg) => println!("criterion {:>2} {name}: PASS ({msg})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({msg})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
