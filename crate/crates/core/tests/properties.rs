use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wiretap_core::codes::{CodeKind, GeneratorPoly};
use wiretap_core::dmc::DiscreteChannel;
use wiretap_core::ie::{gf_inv, gf_mul, ie_decode, ie_encode, Field, FieldElement, IeParams};
use wiretap_core::polarize::{channel_minus, channel_plus, construct_bounds, BitChannelBounds};
use wiretap_core::scl::SclDecoder;
use wiretap_core::sim::{best_code, simulate, wilson_interval, RunParams, SimCode};
use wiretap_core::wiretap::{coset_encode_with, design_sets, leakage_bound, DesignOptions, SecrecyDesign};
use wiretap_core::Bit;

fn bounds_64() -> &'static (BitChannelBounds, BitChannelBounds) {
    static B: OnceLock<(BitChannelBounds, BitChannelBounds)> = OnceLock::new();
    B.get_or_init(|| {
        (
            construct_bounds(&DiscreteChannel::bsc(0.05).unwrap(), 6, 16).unwrap(),
            construct_bounds(&DiscreteChannel::bsc(0.3).unwrap(), 6, 16).unwrap(),
        )
    })
}

fn bits(len: usize) -> impl Strategy<Value = Vec<Bit>> {
    prop::collection::vec(0u8..2, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn design_partitions_indices(k in 0usize..40, budget in 1e-4f64..1.0, cap in 0usize..24) {
        let (bob, eve) = bounds_64();
        let opts = DesignOptions { fer_budget: budget, max_data: Some(k + cap), ..Default::default() };
        if let Ok(d) = design_sets(bob, eve, k, &opts) {
            let mut seen = vec![0u8; 64];
            for &i in d.info_set().iter().chain(d.random_set()).chain(d.frozen_set()) {
                seen[i] += 1;
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
            prop_assert_eq!(d.k(), k);
            prop_assert!(d.k() + d.r() <= k + cap);
            let union: f64 = d.info_set().iter().chain(d.random_set()).map(|&i| bob.error_prob_ub(i)).sum();
            prop_assert!(union <= budget);
            prop_assert!(d.random_set().iter().all(|&i| eve.capacity_ub(i) > opts.poor_threshold));
            let leak = leakage_bound(&d, eve).unwrap();
            let bare = SecrecyDesign::new(64, d.info_set().to_vec(), vec![], CodeKind::Polar, None).unwrap();
            prop_assert!(leak >= 0.0 && leak <= leakage_bound(&bare, eve).unwrap() + 1e-12);
        }
    }

    #[test]
    fn coset_encoding_is_linear(m1 in bits(12), m2 in bits(12), r1 in bits(6), r2 in bits(6), pac in any::<bool>()) {
        let (bob, eve) = bounds_64();
        let opts = DesignOptions { fer_budget: 1.0, max_data: Some(18), ..Default::default() };
        let mut d = design_sets(bob, eve, 12, &opts).unwrap();
        prop_assume!(d.r() == 6);
        if pac {
            d = d.with_kind(CodeKind::Pac, Some(GeneratorPoly::default_pac())).unwrap();
        }
        let xor = |a: &[Bit], b: &[Bit]| a.iter().zip(b).map(|(x, y)| x ^ y).collect::<Vec<Bit>>();
        let x1 = coset_encode_with(&d, &m1, &r1).unwrap();
        let x2 = coset_encode_with(&d, &m2, &r2).unwrap();
        let x12 = coset_encode_with(&d, &xor(&m1, &m2), &xor(&r1, &r2)).unwrap();
        prop_assert_eq!(x12, xor(&x1, &x2));
    }

    #[test]
    fn noiseless_coset_decoding(msg in bits(16), random in bits(8), pac in any::<bool>(), list in 1usize..5) {
        let (bob, eve) = bounds_64();
        let opts = DesignOptions { fer_budget: 1.0, max_data: Some(24), ..Default::default() };
        let mut d = design_sets(bob, eve, 16, &opts).unwrap();
        prop_assume!(d.r() == 8);
        if pac {
            d = d.with_kind(CodeKind::Pac, Some(GeneratorPoly::default_pac())).unwrap();
        }
        let x = coset_encode_with(&d, &msg, &random).unwrap();
        let llrs: Vec<f64> = x.iter().map(|&b| if b == 0 { 2.9 } else { -2.9 }).collect();
        let dec = SclDecoder::new(&d.code_spec(), list).unwrap().decode_llrs(&llrs).unwrap();
        let got: Vec<Bit> = d.message_positions().iter().map(|&j| dec.data[j]).collect();
        prop_assert_eq!(got, msg);
    }

    #[test]
    fn field_inverse(k in 1usize..80, seed in any::<u64>()) {
        let field = Field::standard(k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = FieldElement::random_nonzero(&field, &mut rng);
        let b = FieldElement::random(&field, &mut rng);
        prop_assert_eq!(gf_mul(&a, &gf_inv(&a).unwrap()).unwrap(), FieldElement::one(&field));
        prop_assert_eq!(gf_mul(&a, &b).unwrap(), gf_mul(&b, &a).unwrap());
    }

    #[test]
    fn extractor_roundtrip(seed in any::<u64>(), b in 1usize..12, t in 1usize..4) {
        let params = IeParams::new(64, 0.05, 0.1, b, t).unwrap();
        let code = best_code(&bounds_64().0, params.k, CodeKind::Polar, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg: Vec<Bit> = (0..b * t).map(|i| ((seed >> (i % 64)) & 1) as Bit).collect();
        let blocks = ie_encode(&params, &msg, &code, &mut rng).unwrap();
        let mut dec = SclDecoder::new(&code, 1).unwrap();
        let out = ie_decode(&params, &blocks, |x: &Vec<Bit>| {
            let llrs: Vec<f64> = x.iter().map(|&v| if v == 0 { 5.0 } else { -5.0 }).collect();
            Ok(dec.decode_llrs(&llrs)?.data)
        })
        .unwrap();
        prop_assert_eq!(out, msg);
    }

    #[test]
    fn polarization_conserves_capacity(raw in prop::collection::vec(0.01f64..1.0, 2..5)) {
        let total: f64 = raw.iter().sum();
        let row0: Vec<f64> = raw.iter().chain(raw.iter().rev()).map(|x| x / (2.0 * total)).collect();
        let row1: Vec<f64> = row0.iter().rev().copied().collect();
        let w = DiscreteChannel::new([row0, row1]).unwrap();
        let sum = channel_minus(&w).capacity() + channel_plus(&w).capacity();
        prop_assert!((sum - 2.0 * w.capacity()).abs() <= 1e-9);
    }

    #[test]
    fn wilson_contains_estimate(frames in 1u64..100_000, frac in 0.0f64..=1.0) {
        let errors = ((frames as f64) * frac).floor() as u64;
        let (lo, hi) = wilson_interval(errors, frames);
        let p = errors as f64 / frames as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }
}

#[test]
fn confidence_interval_coverage() {
    // N=64 polar code with FER near 0.04 under SC decoding.
    let bob = &bounds_64().0;
    let a = bob.reliability_order().into_iter().take(29).collect();
    let code = SimCode::Coset(SecrecyDesign::new(64, a, vec![], CodeKind::Polar, None).unwrap());
    let runs: Vec<_> = (0..100).map(|s| simulate(&code, &RunParams::fixed(0.05, 1, 2000, 1000 + s)).unwrap()).collect();
    let pooled = runs.iter().map(|r| r.errors).sum::<u64>() as f64 / runs.iter().map(|r| r.frames_run).sum::<u64>() as f64;
    assert!((0.03..0.05).contains(&pooled), "pooled {pooled}");
    let covered = runs.iter().filter(|r| r.ci_low <= pooled && pooled <= r.ci_high).count();
    assert!((90..=100).contains(&covered), "covered {covered}");
}
