use std::collections::BTreeMap;

use codecrit::bounds::{bound_report, delta_epsilon};
use codecrit::cli::config::ExperimentConfig;
use codecrit::codes::{linear_code, random_code, word_product, Alphabet, Code, Word};
use codecrit::complexity::{kolmogorov_order, proxy_complexity, ProxyConfig, DEFAULT_TAU};
use codecrit::fractal::{enumerate_boxes, sample_fractal, DEFAULT_BOX_CAP};
use codecrit::ising::{energy_h2, SpinLattice, WordLattice};
use codecrit::statmech::{
    critical_beta, evolution_phase, hstat_eigenvalue, keane_residual, partition_function, partition_function_code,
    rescale_to_keane, WeightAssignment,
};
use proptest::prelude::*;

fn small_code() -> impl Strategy<Value = Code> {
    (2u32..=3, 1usize..=4, any::<u64>()).prop_flat_map(|(q, n, seed)| {
        let total = u64::from(q).pow(n as u32);
        (1..=total).prop_map(move |size| random_code(q, n, size, seed).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn full_and_single_word_rates(q in 2u32..=5, n in 1usize..=5) {
        prop_assert!((Code::full(q, n).unwrap().rate() - 1.0).abs() < 1e-12);
        let single = Code::new(Alphabet::new(q).unwrap(), n, vec![Word::from_index(0, q, n)]).unwrap();
        prop_assert_eq!(single.rate(), 0.0);
    }

    #[test]
    fn linear_codes_are_subspaces(
        p in prop::sample::select(vec![2u32, 3, 5]),
        rows in 1usize..=3,
        n in 1usize..=5,
        seed in prop::collection::vec(any::<u32>(), 15),
    ) {
        let g: Vec<Vec<u32>> = (0..rows).map(|r| (0..n).map(|c| seed[r * 5 + c] % p).collect()).collect();
        let code = linear_code(&g, p).unwrap().into_code();
        for u in code.words() {
            for v in code.words() {
                let sum: Vec<u8> = u.letters().iter().zip(v.letters())
                    .map(|(a, b)| ((u32::from(*a) + u32::from(*b)) % p) as u8).collect();
                prop_assert!(code.contains(&Word::new(sum, code.alphabet()).unwrap()));
            }
        }
    }

    #[test]
    fn word_product_is_an_abelian_group(n in 1usize..=12, seed in any::<u64>()) {
        let words = random_code(2, n, 3.min(1 << n.min(20)), seed).unwrap();
        let w = words.words();
        let (u, v, x) = (&w[0], &w[w.len().min(2) - 1], &w[w.len() - 1]);
        let id = Word::new(vec![1; n], Alphabet::binary()).unwrap();
        prop_assert_eq!(word_product(u, v).unwrap(), word_product(v, u).unwrap());
        prop_assert_eq!(
            word_product(&word_product(u, v).unwrap(), x).unwrap(),
            word_product(u, &word_product(v, x).unwrap()).unwrap()
        );
        prop_assert_eq!(&word_product(u, &id).unwrap(), u);
        prop_assert_eq!(word_product(u, u).unwrap(), id);
    }

    #[test]
    fn random_code_is_pure(q in 2u32..=4, n in 1usize..=6, seed in any::<u64>(), frac in 0.0f64..1.0) {
        let total = u64::from(q).pow(n as u32);
        let size = 1 + (frac * (total - 1) as f64) as u64;
        prop_assert_eq!(random_code(q, n, size, seed).unwrap(), random_code(q, n, size, seed).unwrap());
    }

    #[test]
    fn exact_box_counts_are_powers_of_code_size(code in small_code(), m in 1usize..=3) {
        let boxes = enumerate_boxes(&code, m, DEFAULT_BOX_CAP).unwrap();
        prop_assert_eq!(boxes, (code.size() as u64).pow(m as u32));
    }

    #[test]
    fn sampled_occupancy_never_exceeds_exact(code in small_code(), m in 1usize..=3, seed in any::<u64>()) {
        let s = sample_fractal(&code, m, 200, seed).unwrap();
        for k in 1..=m {
            prop_assert!(s.occupancy(k) <= enumerate_boxes(&code, k, DEFAULT_BOX_CAP).unwrap());
        }
    }

    #[test]
    fn proxy_is_pure(symbols in prop::collection::vec(0u8..3, 1..400)) {
        let cfg = ProxyConfig::default();
        prop_assert_eq!(proxy_complexity(&symbols, 3, &cfg).unwrap(), proxy_complexity(&symbols, 3, &cfg).unwrap());
    }

    #[test]
    fn kolmogorov_order_is_sorted_bijection(n in 4usize..=24, seed in any::<u64>()) {
        let code = random_code(2, n, 12, seed).unwrap();
        let order = kolmogorov_order(code.words(), 2, &ProxyConfig::default(), DEFAULT_TAU).unwrap();
        for r in 1..order.words.len() {
            prop_assert!(order.proxy_at(r - 1) <= order.proxy_at(r));
        }
        let inv = order.inverse();
        for (rank, &i) in order.permutation.iter().enumerate() {
            prop_assert_eq!(inv[i], rank);
        }
    }

    #[test]
    fn partition_function_decreases_in_beta(
        lambdas in prop::collection::vec(0.5f64..4.0, 1..20),
        b1 in 0.1f64..5.0,
        db in 0.01f64..2.0,
    ) {
        let weights: BTreeMap<Word, f64> = lambdas.iter().enumerate()
            .map(|(i, &l)| (Word::from_index(i as u64, 2, 8), l)).collect();
        let w = WeightAssignment::new(weights, 0.5).unwrap();
        let (a, b) = (partition_function(&w, b1).unwrap(), partition_function(&w, b1 + db).unwrap());
        if let (Some(za), Some(zb)) = (a.value(), b.value()) {
            prop_assert!(zb < za);
        }
        prop_assert!(b.s < a.s);
    }

    #[test]
    fn direct_sum_matches_closed_form(
        case in prop::sample::select(vec![(2u32, 4usize, 2u64), (2, 8, 16), (3, 4, 9), (2, 10, 32), (5, 4, 25)]),
        k in 0usize..50,
    ) {
        let (q, n, size) = case;
        let words = (0..size).map(|i| Word::from_index(i, q, n)).collect();
        let code = Code::new(Alphabet::new(q).unwrap(), n, words).unwrap();
        let rate = code.rate();
        let w = WeightAssignment::uniform_keane(&code, rate).unwrap();
        let beta = rate + 0.05 + 0.1 * k as f64;
        let a = partition_function(&w, beta).unwrap().value().unwrap();
        let b = partition_function_code(q, n, rate, beta).value().unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn keane_rescaling_puts_transition_at_rate(
        raw in prop::collection::vec(1.0f64..3.0, 2..40),
        rate in 0.1f64..1.0,
    ) {
        let scale = (raw.len() as f64).ln() / rate;
        let weights: BTreeMap<Word, f64> = raw.iter().enumerate()
            .map(|(i, &l)| (Word::from_index(i as u64, 2, 8), l * scale)).collect();
        let w = rescale_to_keane(&weights, rate).unwrap();
        prop_assert!(keane_residual(&w).abs() <= 1e-12);
        prop_assert!((critical_beta(&w).unwrap().beta - rate).abs() <= 1e-8);
    }

    #[test]
    fn hstat_is_additive(
        lambdas in prop::collection::vec(0.1f64..5.0, 4),
        t1 in prop::collection::vec(0usize..4, 0..6),
        t2 in prop::collection::vec(0usize..4, 0..6),
    ) {
        let words: Vec<Word> = (0..4).map(|i| Word::from_index(i, 2, 2)).collect();
        let w = WeightAssignment::from_pairs(words.iter().cloned().zip(lambdas), 1.0).unwrap();
        let a: Vec<Word> = t1.iter().map(|&i| words[i].clone()).collect();
        let b: Vec<Word> = t2.iter().map(|&i| words[i].clone()).collect();
        let ab: Vec<Word> = a.iter().chain(&b).cloned().collect();
        let sum = hstat_eigenvalue(&a, &w).unwrap() + hstat_eigenvalue(&b, &w).unwrap();
        prop_assert!((hstat_eigenvalue(&ab, &w).unwrap() - sum).abs() <= 1e-12 * (1.0 + sum.abs()));
    }

    #[test]
    fn evolution_phase_has_unit_modulus(q in 2u32..=7, n in 1usize..=64, t in -1e3f64..1e3) {
        prop_assert!((evolution_phase(q, n, t).norm() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn single_letter_words_give_ising_energy(d in 2usize..=3, l in 2usize..=5, seed in any::<u64>()) {
        let sites = l.pow(d as u32);
        let code = random_code(2, 20, 1, seed).unwrap();
        let bits = code.words()[0].letters().iter().cycle().take(sites);
        let spins: Vec<i8> = bits.clone().map(|&b| if b == 1 { 1 } else { -1 }).collect();
        let words: Vec<Word> = bits.map(|&b| Word::new(vec![b], Alphabet::binary()).unwrap()).collect();
        let wl = WordLattice::regular(d, l, &words).unwrap();
        let lat = SpinLattice::from_spins(d, l, spins).unwrap();
        prop_assert_eq!(energy_h2(&wl), lat.energy() as f64);
    }

    #[test]
    fn bound_is_monotone(nu in 0.3f64..2.0, dnu in 0.001f64..0.5) {
        for d in 2..=4u32 {
            prop_assert!(delta_epsilon(d, nu + dnu).unwrap() > delta_epsilon(d, nu).unwrap());
        }
        prop_assert!(delta_epsilon(3, nu).unwrap() > delta_epsilon(2, nu).unwrap());
        prop_assert!(delta_epsilon(4, nu).unwrap() > delta_epsilon(3, nu).unwrap());
    }

    #[test]
    fn doubling_nu_error_doubles_bound_error(d in 2u32..=4, nu in 0.3f64..2.0, err in 1e-6f64..0.1) {
        let a = bound_report(d, nu, err).unwrap();
        let b = bound_report(d, nu, 2.0 * err).unwrap();
        prop_assert_eq!(b.bound_err, 2.0 * a.bound_err);
        prop_assert!((a.bound - 2.0 * (f64::from(d) - 1.0 / nu)).abs() <= 1e-12);
    }

    #[test]
    fn config_round_trips(seed in any::<u64>(), quick in any::<bool>(), d in 2usize..=4, tau in 0.0f64..1.0) {
        let mut c = ExperimentConfig { seed, quick, ..ExperimentConfig::default() };
        c.ising.d = d;
        c.complexity.tau = tau;
        prop_assert_eq!(ExperimentConfig::from_json(&c.to_json()).unwrap(), c.clone());
        prop_assert_eq!(ExperimentConfig::from_json(&c.to_compact_json()).unwrap(), c);
    }
}
