mod common;

use proptest::prelude::*;
use reebix::bott::{
    infer_bott, iterated_index, iterated_nullity, mean_index, nondeg_iteration_params, BottData,
    InferOptions,
};
use reebix::number::{rat, Real};
use reebix::sympath::{cz_lower, iterate_path};

use common::Drawn;

fn drawn() -> impl Strategy<Value = Drawn> {
    prop_oneof![
        4 => (1i128..=9).prop_flat_map(|den| (0..4 * den, Just(den))).prop_map(|(a, d)| Drawn::Rot(rat(a, d))),
        1 => (1.2f64..3.0, any::<bool>()).prop_map(|(l, neg)| Drawn::Hyp(if neg { -l } else { l })),
    ]
}

fn data_of(blocks: &[Drawn]) -> BottData {
    BottData::from_blocks(&blocks.iter().map(Drawn::block).collect::<Vec<_>>()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_plane_count(blocks in prop::collection::vec(drawn(), 1..=3)) {
        let d = data_of(&blocks);
        for k in 1..=24u64 {
            let (mu, nu) = common::oracle_lower(&blocks, k);
            prop_assert_eq!(iterated_index(&d, k).unwrap(), mu, "k = {}", k);
            prop_assert_eq!(iterated_nullity(&d, k).unwrap(), nu, "k = {}", k);
        }
    }

    #[test]
    fn path_iterates_match_plane_count(blocks in prop::collection::vec(drawn(), 1..=3), k in 1u32..=24) {
        let p = iterate_path(&common::path_of(&blocks), k).unwrap();
        prop_assert_eq!(cz_lower(&p).unwrap(), common::oracle_lower(&blocks, k as u64).0);
    }

    #[test]
    fn inverse_data(blocks in prop::collection::vec(drawn(), 1..=3)) {
        let d = data_of(&blocks);
        let inv = d.inverse();
        inv.validate().unwrap();
        for k in 1..=24u64 {
            let up = iterated_index(&d, k).unwrap() + iterated_nullity(&d, k).unwrap() as i64;
            prop_assert_eq!(iterated_index(&inv, k).unwrap(), -up);
        }
        prop_assert_eq!(mean_index(&inv), mean_index(&d).neg());
    }

    #[test]
    fn iteration_inequalities(blocks in prop::collection::vec(drawn(), 1..=3), shift in 0i64..=4) {
        let d = data_of(&blocks).shifted(2 * shift);
        let n = d.n() as i64;
        let e = d.flags().e as i64;
        let mu1 = iterated_index(&d, 1).unwrap();
        let delta = mean_index(&d);
        for m in 1..=50u64 {
            let a = iterated_index(&d, m).unwrap();
            let b = iterated_index(&d, m + 1).unwrap();
            let nu = iterated_nullity(&d, m).unwrap() as i64;
            // ν(γᵐ) - e/2 ≤ μ⁻(γ^{m+1}) - μ⁻(γᵐ) - μ⁻(γ)
            prop_assert!(2 * nu - e <= 2 * (b - a - mu1), "m = {}", m);
            if d.b_at_one >= n {
                prop_assert!(b >= a);
            }
            let centre = delta.mul_int(m as i64);
            prop_assert!(Real::from(a + n).cmp_real(&centre).unwrap() != std::cmp::Ordering::Less);
            prop_assert!(Real::from(a + nu - n).cmp_real(&centre).unwrap() != std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn direct_sum_is_additive(x in prop::collection::vec(drawn(), 1..=2), y in prop::collection::vec(drawn(), 1..=2)) {
        let (a, b) = (data_of(&x), data_of(&y));
        let s = a.direct_sum(&b).unwrap();
        for k in 1..=12u64 {
            prop_assert_eq!(
                iterated_index(&s, k).unwrap(),
                iterated_index(&a, k).unwrap() + iterated_index(&b, k).unwrap()
            );
        }
        prop_assert_eq!(mean_index(&s), mean_index(&a).add(&mean_index(&b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inference_reproduces_path_indices(blocks in prop::collection::vec(drawn(), 1..=3)) {
        let p = common::path_of(&blocks);
        let d = infer_bott(&p, &InferOptions::default()).unwrap();
        for k in 1..=24u64 {
            prop_assert_eq!(iterated_index(&d, k).unwrap(), common::oracle_lower(&blocks, k).0);
        }
    }
}

#[test]
fn nondegenerate_parameters() {
    let d = BottData::rotation(&Real::from(rat(2, 5)))
        .unwrap()
        .shifted(2);
    let p = nondeg_iteration_params(&d).unwrap();
    for m in [1u64, 2, 3, 4, 6, 7] {
        assert_eq!(p.index(m).unwrap(), iterated_index(&d, m).unwrap());
    }
}
