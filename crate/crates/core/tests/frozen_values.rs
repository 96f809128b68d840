//! Reference values produced by `scripts/oracle_values.py`, a brute-force
//! numpy implementation that shares no code with this crate.

use approx::assert_abs_diff_eq;
use wiretap_core::codes::{encode, CodeSpec, GeneratorPoly};
use wiretap_core::dmc::{secrecy_capacity, DiscreteChannel};
use wiretap_core::ie::{ie_dimension, ie_semantic_bound};
use wiretap_core::oracle::{exact_bit_channels_enumerated, Domain};
use wiretap_core::polarize::{channel_minus, construct_bounds, exact_bit_channels};
use wiretap_core::Bit;

const BIT_CHANNEL_MI_N8_P011: [f64; 8] = [
    0.013583919897,
    0.188862784352,
    0.240914570820,
    0.702846148974,
    0.285457802611,
    0.758920671762,
    0.821834883506,
    0.988251552763,
];

fn bits(s: &str) -> Vec<Bit> {
    s.bytes().map(|b| b - b'0').collect()
}

#[test]
fn secrecy_capacities() {
    let expected = [0.323443347600, 0.435531137771, 0.524881167343, 0.594893942115, 0.647671098260, 0.684553637339];
    for (pe, want) in [0.15, 0.2, 0.25, 0.3, 0.35, 0.4].into_iter().zip(expected) {
        assert_abs_diff_eq!(secrecy_capacity(0.05, pe).unwrap(), want, epsilon = 1e-11);
    }
}

#[test]
fn minus_channel_capacity() {
    let w = DiscreteChannel::bsc(0.11).unwrap();
    assert_abs_diff_eq!(channel_minus(&w).capacity(), 0.286551856011, epsilon = 1e-11);
}

#[test]
fn exact_bit_channels_n8() {
    let w = DiscreteChannel::bsc(0.11).unwrap();
    let synth = exact_bit_channels(&w, 3).unwrap();
    let spec = CodeSpec::pac(8, vec![], GeneratorPoly::new(vec![1, 0, 1, 1]).unwrap()).unwrap();
    let polar = exact_bit_channels_enumerated(&spec, &w, Domain::V).unwrap();
    let pac = exact_bit_channels_enumerated(&spec, &w, Domain::U).unwrap();
    for i in 0..8 {
        let want = BIT_CHANNEL_MI_N8_P011[i];
        assert_abs_diff_eq!(synth[i].capacity(), want, epsilon = 1e-11);
        assert_abs_diff_eq!(polar[i].mutual_information(), want, epsilon = 1e-11);
        assert_abs_diff_eq!(pac[i].mutual_information(), want, epsilon = 1e-11);
    }
}

#[test]
fn quantized_bounds_bracket_exact_n8() {
    let w = DiscreteChannel::bsc(0.11).unwrap();
    for mu in [2, 4, 8] {
        let b = construct_bounds(&w, 3, mu).unwrap();
        for (i, &want) in BIT_CHANNEL_MI_N8_P011.iter().enumerate() {
            assert!(b.capacity_lb(i) <= want + 1e-11, "mu={mu} i={i}");
            assert!(b.capacity_ub(i) >= want - 1e-11, "mu={mu} i={i}");
        }
    }
}

#[test]
fn codewords_n16() {
    let u = bits("1011001001110100");
    let all: Vec<usize> = (0..16).collect();
    let polar = CodeSpec::polar(16, all.clone()).unwrap();
    assert_eq!(encode(&polar, &u).unwrap(), bits("0001101001110100"));
    let pac = CodeSpec::pac(16, all, GeneratorPoly::from_octal("133").unwrap()).unwrap();
    assert_eq!(encode(&pac, &u).unwrap(), bits("0111111100001001"));
}

#[test]
fn extractor_bounds() {
    assert_abs_diff_eq!(ie_semantic_bound(256).unwrap(), 9.1552734375e-05, epsilon = 1e-15);
    assert_abs_diff_eq!(ie_semantic_bound(512).unwrap(), 9.2601923881e-07, epsilon = 1e-16);
    assert_abs_diff_eq!(-ie_semantic_bound(256).unwrap().log2(), 13.415037, epsilon = 1e-6);
    assert_abs_diff_eq!(-ie_semantic_bound(512).unwrap().log2(), 20.042454, epsilon = 1e-6);
    assert_eq!(ie_dimension(512, 0.005, 0.1).unwrap(), 438);
}
