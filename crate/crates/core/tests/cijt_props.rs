mod common;

use proptest::prelude::*;
use reebix::bott::{mean_index, BottData};
use reebix::cijt::{find_jump, verify_certificate, JumpOptions};
use reebix::number::{rat, Interval, Real};
use reebix::sympath::Block;

fn orbit() -> impl Strategy<Value = BottData> {
    let angle = (1i128..=9).prop_flat_map(|den| (1..4 * den, Just(den)));
    (prop::collection::vec(angle, 1..=2), 0i64..=2).prop_map(|(angles, s)| {
        let blocks: Vec<Block> = angles
            .iter()
            .map(|(a, d)| Block::rotation(rat(*a, *d)))
            .collect();
        BottData::from_blocks(&blocks).unwrap().shifted(2 + 2 * s)
    })
}

fn all_pass(orbits: &[BottData], cert: &reebix::CijtCertificate) -> bool {
    verify_certificate(orbits, cert)
        .unwrap()
        .iter()
        .all(|c| c.pass)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jumps_exist_and_reverify(orbits in prop::collection::vec(orbit(), 1..=3)) {
        for o in &orbits {
            prop_assume!(mean_index(o).signum().unwrap() == std::cmp::Ordering::Greater);
        }
        let cert = find_jump(&orbits, &JumpOptions::default()).unwrap();
        prop_assert!(cert.passed());
        prop_assert!(all_pass(&orbits, &cert));
        let mut bad = cert.clone();
        bad.m[0] += cert.q_param;
        prop_assert!(!all_pass(&orbits, &bad));
        let mut bad = cert.clone();
        bad.n += 1;
        prop_assert!(!all_pass(&orbits, &bad));
    }
}

#[test]
fn irrational_collection() {
    let tau = Real::Approx(Interval::around(std::f64::consts::SQRT_2, 1e-15));
    let a = BottData::rotation(&tau).unwrap().shifted(2);
    let b = BottData::rotation(&Real::from(rat(2, 3)))
        .unwrap()
        .shifted(2);
    let orbits = vec![a, b];
    let cert = find_jump(&orbits, &JumpOptions::default()).unwrap();
    assert!(all_pass(&orbits, &cert));
    assert_eq!(find_jump(&orbits, &JumpOptions::default()).unwrap(), cert);
}
