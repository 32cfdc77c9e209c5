use super::*;
use crate::constructions::{paley_one, sylvester};
use crate::orders::RegistryMode;
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn syl(k: u32) -> SignMatrix {
    sylvester(k, 1 << 10).unwrap()
}

fn cfg() -> WitnessConfig {
    WitnessConfig::default()
}

#[test]
fn minor_examples() {
    let c = witness_minor(&syl(2), 3, &cfg()).unwrap();
    assert!(c.verified);
    assert_eq!(c.det_abs, BigInt::from(4));

    let p12 = paley_one(11).unwrap();
    let c = witness_minor(&p12, 11, &cfg()).unwrap();
    assert!(c.verified);
    assert_eq!(c.det_abs, BigInt::from(248832));
    assert!(matches!(c.construction, Construction::Minor { h: 12, .. }));

    let c = witness_minor(&syl(3), 4, &cfg()).unwrap();
    assert!(c.verified);
    assert!(c.det_abs >= BigInt::from(8));
}

#[test]
fn minor_rejects_bad_orders() {
    assert!(witness_minor(&syl(2), 4, &cfg()).is_err());
    assert!(witness_minor(&syl(2), 0, &cfg()).is_err());
    let small = WitnessConfig { exact_cap: 2, ..cfg() };
    assert!(matches!(witness_minor(&syl(2), 3, &small), Err(Error::CapExceeded { .. })));
}

#[test]
fn major_examples() {
    let c = witness_major(&syl(1), 3, &cfg()).unwrap();
    assert_eq!(c.det_abs, BigInt::from(4));
    assert!(c.verified);
    let c = witness_major(&syl(2), 6, &cfg()).unwrap();
    assert_eq!(c.det_abs, BigInt::from(64));
    assert_eq!(c.claimed_bound.exact, Some(BigInt::from(64)));
    let c = witness_major(&syl(0), 2, &cfg()).unwrap();
    assert_eq!(c.det_abs, BigInt::from(2));
    assert!(c.verified);
}

#[test]
fn excess_border_examples() {
    let c = witness_excess_border(&syl(2), &cfg()).unwrap();
    assert_eq!(c.sigma_achieved, Some(8));
    assert_eq!(c.det_abs, BigInt::from(48));
    assert!(c.verified);
    assert_eq!(c.meets_sigma_floor(), Some(true));
    // all-+1 border, corner +1
    assert!((0..5).all(|k| c.matrix.get(0, k) > 0 && c.matrix.get(k, 0) > 0));

    let c = witness_excess_border(&syl(3), &cfg()).unwrap();
    assert_eq!(c.sigma_achieved, Some(20));
    assert_eq!(c.det_abs, BigInt::from(14336));
    assert!(c.verified);
}

#[test]
fn double_border_examples() {
    let c = witness_double_border(&syl(2), &cfg()).unwrap();
    assert_eq!(c.det_abs, BigInt::from(96));
    assert!(c.verified);
    let one = witness_excess_border(&syl(3), &cfg()).unwrap();
    let two = witness_double_border(&syl(3), &cfg()).unwrap();
    assert_eq!(two.det_abs, BigInt::from(28672));
    assert_eq!(two.det_abs, one.det_abs * 2);
}

#[test]
fn sylvester_doubling_order_ten() {
    let c = witness_sylvester_doubling(&syl(2), &cfg()).unwrap();
    assert_eq!(c.n, 10);
    // 2^5 * 48^2
    assert_eq!(c.det_abs, BigInt::from(73728));
    assert!(c.verified);
}

#[test]
fn border_up_scales_by_powers_of_two() {
    let w = witness_excess_border(&syl(2), &cfg()).unwrap().matrix;
    for n in 6..9 {
        let b = border_up(&w, n).unwrap();
        assert_eq!(det_exact(&b).abs(), BigInt::from(48) << (n - 5));
    }
    assert!(border_up(&w, 5).is_err());
}

#[test]
fn best_witness_examples() {
    let reg = OrderRegistry::build(32, RegistryMode::Conjecture).unwrap();
    let c = best_witness(5, &reg, &cfg()).unwrap();
    assert_eq!(c.det_abs, BigInt::from(48));
    assert!(matches!(c.construction, Construction::ExcessBorder { h: 4, .. }));
    let c = best_witness(3, &reg, &cfg()).unwrap();
    assert_eq!(c.det_abs, BigInt::from(4));
    let c = best_witness(12, &reg, &cfg()).unwrap();
    assert!(c.ln_r().abs() < 1e-12);
    assert_eq!(c.construction, Construction::Hadamard);
    let c = best_witness(1, &reg, &cfg()).unwrap();
    assert_eq!(c.det_abs, BigInt::from(1));
    let c = best_witness(10, &reg, &cfg()).unwrap();
    assert_eq!(c.det_abs, BigInt::from(73728));
}

#[test]
fn best_witness_without_matrices() {
    let reg = OrderRegistry::build(664, RegistryMode::KnownOrders).unwrap();
    let small = WitnessConfig { exact_cap: 8, ..cfg() };
    assert!(matches!(best_witness(9, &reg, &small), Err(Error::CapExceeded { .. })));
    assert!(matches!(best_witness(0, &reg, &cfg()), Err(Error::Precondition(_))));
}

#[test]
fn certificate_json_round_trip() {
    let reg = OrderRegistry::build(32, RegistryMode::Conjecture).unwrap();
    for n in [3, 5, 7, 10, 11] {
        let c = best_witness(n, &reg, &cfg()).unwrap();
        let back = WitnessCertificate::from_json(&c.to_json().unwrap()).unwrap();
        assert!(back.verified);
        assert_eq!(back.det_abs, c.det_abs);
        assert_eq!(back.construction, c.construction);
        assert!(back.reverify());
    }
}

#[test]
fn tampered_certificate_fails() {
    let reg = OrderRegistry::build(32, RegistryMode::Conjecture).unwrap();
    let c = best_witness(5, &reg, &cfg()).unwrap();
    let json = c.to_json().unwrap().replace("\"48\"", "\"49\"");
    assert!(!WitnessCertificate::from_json(&json).unwrap().verified);

    let mut v: serde_json::Value = serde_json::from_str(&c.to_json().unwrap()).unwrap();
    v["matrix"][1] = serde_json::Value::String("+++++".into());
    let back = WitnessCertificate::from_json(&v.to_string()).unwrap();
    assert!(!back.verified);
}

#[test]
fn block_identity_examples() {
    let h4 = syl(2);
    assert!(verify_block_identity(&h4, &[0], &[0]).unwrap());
    assert!(verify_block_identity(&h4, &[3], &[2]).unwrap());
    // rows 0,1 and cols 0,2 of Sylvester-4 form a singular block
    let (d, _) = complementary_split(&h4, &[0, 1], &[0, 2]).unwrap();
    assert_eq!(det_exact(&d), BigInt::zero());
    assert!(verify_block_identity(&h4, &[0, 1], &[0, 2]).unwrap());
    let p12 = paley_one(11).unwrap();
    assert!(verify_block_identity(&p12, &[1, 5, 9], &[0, 3, 4]).unwrap());
    assert!(verify_block_identity(&p12, &[], &[]).is_err());
    assert!(matches!(verify_block_identity(&SignMatrix::all_ones(4), &[0], &[0]), Err(Error::NotHadamard)));
}

#[test]
fn block_identity_random_splits() {
    let reg = OrderRegistry::build(32, RegistryMode::Constructive).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for h in reg.orders().filter(|&h| h >= 2) {
        let m = reg.realize(h).unwrap();
        for _ in 0..1000 {
            let d = 1 + (rand::Rng::gen_range(&mut rng, 0..h - 1));
            let rows = sample(&mut rng, h, d).into_vec();
            let cols = sample(&mut rng, h, d).into_vec();
            assert!(verify_block_identity(&m, &rows, &cols).unwrap(), "h={h} rows={rows:?} cols={cols:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_best_witness_certified(n in 1usize..=40) {
        let reg = OrderRegistry::build(2 * n + 8, RegistryMode::Constructive).unwrap();
        let c = best_witness(n, &reg, &cfg()).unwrap();
        prop_assert!(c.verified);
        prop_assert_eq!(c.det_abs.clone(), det_exact(&c.matrix).abs());
        prop_assert!(ln_abs(&c.det_abs) >= c.claimed_bound.ln - CERTIFICATE_TOLERANCE);
    }

    #[test]
    fn prop_minor_certificates_satisfy_identity(k in 1u32..=4, seed in any::<u64>()) {
        let h = syl(k);
        let order = h.order();
        let n = 1 + (seed as usize % (order - 1));
        let c = witness_minor(&h, n, &cfg()).unwrap();
        let Construction::Minor { rows, cols, .. } = &c.construction else { unreachable!() };
        prop_assert!(verify_block_identity(&h, rows, cols).unwrap());
        prop_assert!(c.verified);
    }
}
