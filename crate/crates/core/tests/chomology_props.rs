mod common;

use proptest::prelude::*;
use reebix::bott::{BottData, JumpAtOne, LocalHomology};
use reebix::chomology::{
    audit, chi0, convexity_check, mean_chi, morse_check, prequant_rank, resonance_check,
    sdm_status, AuditOptions, Mode, Orbit, OrbitCatalog, PrequantProfile, Verdict,
};
use reebix::models::{ellipsoid_catalog, sphere_profile, EllipsoidSpec};
use reebix::number::{rat, Real};
use reebix::Error;

fn profile() -> impl Strategy<Value = PrequantProfile> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0u64..=3, 2 * n - 1),
                1u64..=4,
                0i64..=3,
            )
        })
        .prop_map(|(n, mid, c_b, extra)| {
            let mut betti = vec![1];
            betti.extend(mid);
            betti.push(1);
            PrequantProfile {
                name: "random".into(),
                n,
                betti,
                i_index: 2 * c_b as i64 + 2 * extra,
                c_b,
            }
        })
}

fn spec(n: usize) -> impl Strategy<Value = EllipsoidSpec> {
    prop::collection::vec((1i128..=5, 1i128..=3), n + 1).prop_map(|v| {
        EllipsoidSpec::new(v.into_iter().map(|(a, b)| Real::from(rat(a, b))).collect()).unwrap()
    })
}

fn small_spec(n: usize) -> impl Strategy<Value = EllipsoidSpec> {
    prop::collection::vec((1i128..=4, 1i128..=2), n + 1).prop_map(|v| {
        EllipsoidSpec::new(v.into_iter().map(|(a, b)| Real::from(rat(a, b))).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ellipsoid_audits_consistent(s in (1usize..=3).prop_flat_map(small_spec)) {
        let c = ellipsoid_catalog(&s).unwrap().catalog;
        let rep = audit(&c, &AuditOptions::default()).unwrap();
        prop_assert_eq!(&rep.verdict, &Verdict::Consistent, "{:?}", rep.failing());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn first_nonzero_degree(p in profile()) {
        p.validate().unwrap();
        let first = (-10..200).find(|d| prequant_rank(&p, *d) > 0).unwrap();
        prop_assert_eq!(first, p.k_minus());
        // one shifted copy of H_*(B) per multiple of I
        let total: u64 = (p.k_minus()..p.k_minus() + p.i_index).map(|d| prequant_rank(&p, d)).sum();
        prop_assert!(total <= p.r_b());
    }

    #[test]
    fn ellipsoid_resonance(s in (1usize..=3).prop_flat_map(spec)) {
        let c = ellipsoid_catalog(&s).unwrap().catalog;
        let r = resonance_check(&c).unwrap();
        prop_assert!(r.pass, "{:?}", r);
        prop_assert_eq!(r.lhs, Real::from(chi0(&c.profile)));
        prop_assert!(convexity_check(&c, Mode::Positive, None).unwrap().pass);
    }

    #[test]
    fn ellipsoid_morse(s in (1usize..=2).prop_flat_map(spec)) {
        let c = ellipsoid_catalog(&s).unwrap().catalog;
        let m = morse_check(&c, 60).unwrap();
        prop_assert!(m.pass && m.pointwise);
        // the perturbed ellipsoid is perfect: ranks agree degree by degree
        for row in &m.rows {
            prop_assert_eq!(row.c, row.b, "degree {}", row.degree);
        }
    }
}

#[test]
fn hyperbolic_mean_chi() {
    let d = BottData::constant(2, 1);
    assert_eq!(mean_chi(&d).unwrap().value, rat(-1, 2));
}

#[test]
fn sdm_record() {
    let mut d = BottData::constant(2, 0);
    d.jump_at_one = Some(JumpAtOne { s: 0, nu: 2 });
    d.elliptic_height = 2;
    d.local_homology = Some(LocalHomology::single(1));
    let st = sdm_status(&d).unwrap();
    assert!(st.sdm && st.concentrated && !st.sdmin);
}

#[test]
fn non_positive_mean_is_undecidable() {
    let c = OrbitCatalog {
        profile: sphere_profile(1),
        orbits: vec![Orbit {
            name: "flat".into(),
            data: BottData::constant(2, 0),
        }],
        claimed_complete: true,
    };
    assert!(matches!(
        convexity_check(&c, Mode::Positive, None),
        Err(Error::Undecidable { .. })
    ));
}

#[test]
fn chi0_values() {
    assert_eq!(chi0(&sphere_profile(1)), rat(-1, 2));
    assert_eq!(chi0(&sphere_profile(2)), rat(1, 2));
    assert_eq!(chi0(&sphere_profile(3)), rat(-1, 2));
}
