mod common;

use proptest::prelude::*;

use sdcodes::canonical::{code_cert, hadamard_cert, CodeCertOptions};
use sdcodes::code::{four_negacirculant, quasi_twisted};
use sdcodes::gf3::{GF3Vector, MAX_LEN};
use sdcodes::hadamard::{build_w1, orthogonality_parity, HadamardMatrix, SignVector};
use sdcodes::weight::{
    near_extremal_36_coefficients, near_extremal_enumerator_36, sweep, SweepOptions, NEAR_EXTREMAL_36_WEIGHTS,
};

fn symbols(max: usize) -> impl Strategy<Value = Vec<u8>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(0u8..3, n))
}

fn pair(max: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (1..=max).prop_flat_map(|n| (prop::collection::vec(0u8..3, n), prop::collection::vec(0u8..3, n)))
}

fn signs_pair(quarter: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
    quarter.prop_flat_map(|q| (prop::collection::vec(any::<bool>(), 4 * q), prop::collection::vec(any::<bool>(), 4 * q)))
}

fn to_entries(v: &[bool]) -> Vec<i8> {
    v.iter().map(|&b| if b { -1 } else { 1 }).collect()
}

proptest! {
    #[test]
    fn vector_arithmetic_matches_integers((a, b) in pair(MAX_LEN)) {
        let (x, y) = (GF3Vector::from_symbols(&a).unwrap(), GF3Vector::from_symbols(&b).unwrap());
        let sum: Vec<u8> = a.iter().zip(&b).map(|(p, q)| (p + q) % 3).collect();
        let diff: Vec<u8> = a.iter().zip(&b).map(|(p, q)| (3 + p - q) % 3).collect();
        let dot = a.iter().zip(&b).map(|(&p, &q)| u32::from(p) * u32::from(q)).sum::<u32>() % 3;
        prop_assert_eq!(x.add(&y).symbols(), sum);
        prop_assert_eq!(x.sub(&y).symbols(), diff);
        prop_assert_eq!(u32::from(x.dot(&y)), dot);
        prop_assert_eq!(x.weight() as usize, a.iter().filter(|&&s| s != 0).count());
        prop_assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn ternary_text_round_trips(a in symbols(MAX_LEN)) {
        let x = GF3Vector::from_symbols(&a).unwrap();
        prop_assert_eq!(GF3Vector::from_ternary_str(&x.to_ternary_string()).unwrap(), x);
    }

    #[test]
    fn monomial_maps_keep_weight_and_inner_product((a, b) in pair(MAX_LEN), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (x, y) = (GF3Vector::from_symbols(&a).unwrap(), GF3Vector::from_symbols(&b).unwrap());
        let m = common::random_monomial(a.len(), &mut rng);
        let (mx, my) = (m.apply(&x).unwrap(), m.apply(&y).unwrap());
        prop_assert_eq!(mx.weight(), x.weight());
        prop_assert_eq!(mx.dot(&my), x.dot(&y));
        prop_assert_eq!(m.inverse().apply(&mx).unwrap(), x);
    }

    #[test]
    fn near_extremal_counts_total_the_code_size(alpha in 0i64..=2000) {
        let c = near_extremal_36_coefficients(alpha);
        prop_assert_eq!(c.iter().sum::<i64>(), 3i64.pow(18));
        prop_assert_eq!(c[0], 1);
        prop_assert_eq!(c[1], alpha);
    }

    #[test]
    fn near_extremal_enumerator_places_the_coefficients(beta in 1u64..=111) {
        let alpha = 8 * beta;
        let e = near_extremal_enumerator_36(alpha).unwrap();
        let c = near_extremal_36_coefficients(alpha as i64);
        for (w, &x) in NEAR_EXTREMAL_36_WEIGHTS.iter().zip(&c) {
            prop_assert_eq!(e.get(*w) as i64, x);
        }
        prop_assert_eq!(e.total(), 3u128.pow(18));
    }

    #[test]
    fn orthogonal_sign_vectors_have_equal_parity((a, b) in signs_pair(1..=16)) {
        let (ea, eb) = (to_entries(&a), to_entries(&b));
        let dot: i32 = ea.iter().zip(&eb).map(|(&x, &y)| i32::from(x) * i32::from(y)).sum();
        let plus = |e: &[i8]| e.iter().filter(|&&x| x == 1).count();
        let neg: Vec<i8> = eb.iter().map(|x| -x).collect();
        let (r1, r2) = (SignVector::from_entries(&ea).unwrap(), SignVector::from_entries(&eb).unwrap());
        prop_assert_eq!(r1.dot(&r2), dot);
        if dot == 0 && ea != eb && ea != neg {
            prop_assert_eq!(plus(&ea) % 2, plus(&eb) % 2);
        }
        prop_assert!(orthogonality_parity(&r1, &r2));
    }

    #[test]
    fn enumerator_of_random_codes_matches_brute_force(k in 1usize..=6, extra in 0usize..=6, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let code = common::random_systematic_code(k, k + extra, &mut rng);
        let s = sweep(&code, &SweepOptions::default()).unwrap();
        let mut counts = vec![0u64; code.n() + 1];
        for w in common::all_codewords(&code) {
            counts[w.iter().filter(|&&x| x != 0).count()] += 1;
        }
        prop_assert_eq!(s.enumerator.counts(), &counts[..]);
        prop_assert_eq!(s.enumerator.total(), 3u128.pow(k as u32));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn self_dual_weights_are_multiples_of_three(ra in prop::collection::vec(0u8..3, 3), rb in prop::collection::vec(0u8..3, 3)) {
        let code = four_negacirculant(&GF3Vector::from_symbols(&ra).unwrap(), &GF3Vector::from_symbols(&rb).unwrap()).unwrap();
        if code.is_self_dual() {
            let s = sweep(&code, &SweepOptions::default()).unwrap();
            for (w, _) in s.enumerator.support() {
                prop_assert_eq!(w % 3, 0);
            }
        }
    }

    #[test]
    fn monomial_images_share_the_code_certificate(r in prop::collection::vec(0u8..3, 6), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let code = quasi_twisted(&GF3Vector::from_symbols(&r).unwrap()).unwrap();
        let image = code.apply_monomial(&common::random_monomial(code.n(), &mut rng)).unwrap();
        let opts = CodeCertOptions::default();
        prop_assert_eq!(code_cert(&code, &opts).unwrap(), code_cert(&image, &opts).unwrap());
    }

    #[test]
    fn hadamard_certificate_ignores_signed_permutations(m in 1u32..=4, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let h = HadamardMatrix::sylvester(m).unwrap();
        let g = common::perturb_hadamard(&h, &mut rng);
        prop_assert!(g.verify());
        let (a, b) = (hadamard_cert(&h), hadamard_cert(&g));
        prop_assert_eq!(&a.aut_order, &b.aut_order);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn w1_parts_are_disjoint_and_parity_split(r in prop::collection::vec(0u8..3, 3), s in prop::collection::vec(0u8..3, 3)) {
        let code = four_negacirculant(&GF3Vector::from_symbols(&r).unwrap(), &GF3Vector::from_symbols(&s).unwrap()).unwrap();
        let s = sweep(&code, &SweepOptions::collecting(&[12])).unwrap();
        let full = s.words_of_weight(12);
        let (w10, w11) = build_w1(full).unwrap();
        prop_assert_eq!(w10.len() + w11.len(), full.len() / 2);
        prop_assert!(w10.iter().all(|v| v.n_plus() % 2 == 0 && v.get(0) == 1));
        prop_assert!(w11.iter().all(|v| v.n_plus() % 2 == 1 && v.get(0) == 1));
    }
}
