use lvamd::adversary::{
    empirical_delta_strong, empirical_delta_weak, evaluate_strategy, optimal_lv_attack, read_sets,
    rr_evaluate_strategy, rr_optimal_attack, DEFAULT_CAP,
};
use lvamd::lvamd::{lv_weak_decode, lv_weak_encode, LvStrongInstance, LvWeakInstance};
use lvamd::rampsss::RobustRampScheme;
use lvamd::{ExponentMatrix, PrimeField, Ratio, Vector};
use proptest::prelude::*;

fn strong() -> LvStrongInstance {
    LvStrongInstance::new(5, 1, 4).unwrap()
}

fn weak() -> LvWeakInstance {
    let field = PrimeField::new(11).unwrap();
    let g = ExponentMatrix::from_rows(10, &[vec![1, 2], vec![2, 3]]).unwrap();
    LvWeakInstance::new(field, g, Ratio::new(3, 2)).unwrap()
}

#[test]
fn success_grows_with_the_read_set() {
    let inst = strong();
    let sets = read_sets(4, 2);
    for m in 0..5u64 {
        let success: Vec<Ratio> = sets
            .iter()
            .map(|s| optimal_lv_attack(&inst, &[m], s, DEFAULT_CAP).unwrap().0)
            .collect();
        for (a, sa) in sets.iter().enumerate() {
            for (b, sb) in sets.iter().enumerate() {
                if sa.iter().all(|i| sb.contains(i)) {
                    assert!(success[a] <= success[b], "m={m} {sa:?} -> {sb:?}");
                }
            }
        }
    }
}

#[test]
fn leakage_lemma_holds_on_every_row() {
    let report = empirical_delta_strong(&strong(), DEFAULT_CAP).unwrap();
    assert!(report.leakage_lemma);
    let empty = report.rows.iter().find(|r| r.read_set.is_empty()).unwrap();
    assert!((empty.stats.conditional_min_entropy - empty.stats.min_entropy).abs() < 1e-9);

    let report = empirical_delta_weak(&weak(), Ratio::new(1, 3), DEFAULT_CAP).unwrap();
    assert!(report.leakage_lemma);
}

// Reading m₁ = a and writing (-a, m₂ + 2/(3a), t + c) keeps the tag equation
// satisfied for every m₂, since the cubic and quadratic terms cancel.
#[test]
fn weak_instance_admits_an_affine_forgery() {
    let inst = weak();
    let f = inst.field();
    let mut wins = 0;
    let mut total = 0;
    for a in 1..11u64 {
        let d2 = f.mul(2, f.inv(f.mul(3, a)).unwrap());
        let c = f.sub(f.mul(f.mul(a, a), f.pow(d2, 3)), f.mul(a, f.pow(d2, 2)));
        for m2 in 1..11u64 {
            let x = lv_weak_encode(&Vector::new(f, vec![a, m2]), &inst).unwrap();
            let y = Vector::new(f, vec![f.neg(a), f.add(m2, d2), f.add(x.get(2), c)]);
            total += 1;
            if lv_weak_decode(&y, &inst).unwrap().message().is_some() {
                wins += 1;
            }
        }
    }
    assert_eq!(Ratio::new(wins, total), Ratio::new(9, 10));
    assert!(Ratio::new(wins, total) > inst.delta());
}

// Two packed-Shamir shares reveal a linear functional of the inner codeword,
// which coordinate-view hiding does not cover.
#[test]
fn robust_ramp_pair_leak_replays_end_to_end() {
    let rr = RobustRampScheme::new(11, 1, 5, 6, 1).unwrap();
    let recon = [1, 2, 3, 4, 5];
    let (success, strategy) = rr_optimal_attack(&rr, &[8], &[1, 5], &recon, DEFAULT_CAP).unwrap();
    assert!(success > rr.code().delta());
    assert_eq!(rr_evaluate_strategy(&rr, &[8], &recon, &strategy).unwrap(), success);

    let (single, _) = rr_optimal_attack(&rr, &[8], &[1], &recon, DEFAULT_CAP).unwrap();
    assert!(single <= rr.code().delta());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimal_strategy_replays_to_its_value(m in 0..5u64, pick in 0usize..11) {
        let inst = strong();
        let set = read_sets(4, 2)[pick].clone();
        let (success, strategy) = optimal_lv_attack(&inst, &[m], &set, DEFAULT_CAP).unwrap();
        prop_assert_eq!(evaluate_strategy(&inst, &[m], &strategy), success);
    }
}
