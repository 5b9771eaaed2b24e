use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;
use qfhsp::dft::{dft_naive, fft_pow2};
use qfhsp::sampling::*;
use qfhsp::statevector::{l1_distance_slices, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn frac(n: i64, d: i64) -> Fraction {
    Fraction::new(n, d).unwrap()
}

/// Nearest fraction by trying every `p/q` with `q < t`.
fn brute_round(x: &Fraction, t: u64) -> Fraction {
    let mut best = Fraction::zero();
    for q in 1..t as i64 {
        for p in 0..=q {
            let c = frac(p, q);
            let (dc, db) = (x.abs_diff(&c), x.abs_diff(&best));
            if dc < db || (dc == db && c.den() < best.den()) {
                best = c;
            }
        }
    }
    best
}

#[test]
fn cf_round_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10_000 {
        let a: i64 = rng.gen_range(0..1 << 20);
        let t: u64 = rng.gen_range(2..=64);
        let x = frac(a, 1 << 20);
        assert_eq!(cf_round(&x, t).unwrap(), brute_round(&x, t), "x = {x}, T = {t}");
    }
}

#[test]
fn cf_round_ties_prefer_small_denominator() {
    // 1/4 is equidistant from 0/1 and 1/2 when T = 3.
    assert_eq!(cf_round(&frac(1, 4), 3).unwrap(), frac(0, 1));
    assert_eq!(brute_round(&frac(1, 4), 3), frac(0, 1));
}

#[test]
fn cf_round_uniqueness_threshold() {
    // Any x within 1/(2Tq) of p/q (q < T) rounds to p/q.
    let t = 40u64;
    for q in 1..t as i64 {
        for p in 0..q {
            let c = frac(p, q);
            let m = 4 * t as i64 * q * 1000;
            let off = 999;
            let x = frac(p * 4 * t as i64 * 1000 + off, m);
            assert_eq!(cf_round(&x, t).unwrap(), c);
        }
    }
}

#[test]
fn known_sampler_uniform_for_point_mass() {
    let n = 12;
    let s = StateVector::basis(n, 0).unwrap();
    let d = known_sample_distribution(&s, 256, 1 << 14).unwrap();
    let uniform = vec![1.0 / n as f64; n];
    assert!(l1_distance_slices(d.probs(), &uniform) < 8.0 * 12f64.log2() / 16.0);
    let batch = fourier_sample_known_batch(&s, 256, 1 << 14, 12_000, 5).unwrap();
    let mut counts = vec![0usize; n];
    for x in &batch.samples {
        let Sample::Index(i) = x else { panic!() };
        counts[*i as usize] += 1;
    }
    let chi2: f64 = counts
        .iter()
        .zip(d.probs())
        .map(|(&c, &p)| (c as f64 - 12_000.0 * p).powi(2) / (12_000.0 * p))
        .sum();
    // 11 degrees of freedom; 31.3 is the 0.999 quantile.
    assert!(chi2 < 31.3, "chi2 = {chi2}");
}

#[test]
fn known_sampler_l1_within_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let (n, r, m) = (12usize, 1024usize, 1usize << 14);
    let s = StateVector::random(n, &mut rng).unwrap();
    let exact: Vec<f64> = dft_naive(s.amps()).iter().map(|x| x.norm_sqr()).collect();
    let d = known_sample_distribution(&s, r, m).unwrap();
    let bound = 8.0 * (n as f64).log2() / (r as f64).sqrt();
    assert!(l1_distance_slices(d.probs(), &exact) <= bound);
    let draws = 100_000;
    let batch = fourier_sample_known_batch(&s, r, m, draws, 9).unwrap();
    let mut emp = vec![0.0; n];
    for x in &batch.samples {
        let Sample::Index(i) = x else { panic!() };
        emp[*i as usize] += 1.0 / draws as f64;
    }
    // Sampling noise in L1 is about sqrt(N/draws).
    let noise = 3.0 * (n as f64 / draws as f64).sqrt();
    assert!(l1_distance_slices(&emp, &exact) <= bound + noise);
}

#[test]
fn known_sampler_exact_for_power_of_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let s = StateVector::random(16, &mut rng).unwrap();
    let exact: Vec<f64> = dft_naive(s.amps()).iter().map(|x| x.norm_sqr()).collect();
    let d = known_sample_distribution(&s, 64, 1024).unwrap();
    assert!(l1_distance_slices(d.probs(), &exact) < 1e-9);
}

#[test]
fn known_sampler_rejects_small_m() {
    let s = StateVector::uniform(12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(fourier_sample_known(&s, 256, 1000, &mut rng).is_err());
}

#[test]
fn known_batch_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let s = StateVector::random(7, &mut rng).unwrap();
    let a = fourier_sample_known_batch(&s, 64, 1024, 500, 77).unwrap();
    let b = fourier_sample_known_batch(&s, 64, 1024, 500, 77).unwrap();
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(SampleBatch::parse(&a.to_text()).unwrap(), a);
}

#[test]
fn unknown_sampler_period_five() {
    // f one-to-one within period 5: after measuring f the state is a coset 2 + 5Z,
    // whose Fourier transform over Z_5 is uniform.
    let (m, t) = (1usize << 16, 8u64);
    let alpha = StateVector::basis(5, 2).unwrap();
    let s = repeat_state(&alpha, m).unwrap();
    let d = unknown_sample_distribution(&s, t).unwrap();
    let mass5: f64 = d.iter().filter(|(f, _)| f.den() == &BigInt::from(5)).map(|(_, p)| p).sum();
    assert!(mass5 >= 4.0 / 5.0 - 0.05, "mass on denominator 5 = {mass5}");
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..20 {
        let x = fourier_sample_unknown(&s, t, &mut rng).unwrap();
        assert!(d.contains_key(&x));
    }
}

#[test]
fn unknown_sampler_constant_function() {
    let s = StateVector::uniform(1 << 12).unwrap();
    let d = unknown_sample_distribution(&s, 16).unwrap();
    assert_eq!(d.len(), 1);
    assert!((d[&Fraction::zero()] - 1.0).abs() < 1e-9);
}

#[test]
fn unknown_sampler_support_near_multiples() {
    // M = T·N·2^10: every outcome with mass lies within M/2TN of a multiple of M/N.
    let (n, t) = (3usize, 4u64);
    let m = t as usize * n * 1024;
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let alpha = StateVector::random(n, &mut rng).unwrap();
    let s = repeat_state(&alpha, m).unwrap();
    let hat = qfhsp::dft::dft(s.amps());
    for (k, a) in hat.iter().enumerate() {
        if a.norm_sqr() > 1e-20 {
            let step = m / n;
            let off = (k % step).min(step - k % step);
            assert!((off as f64) < m as f64 / (2.0 * t as f64 * n as f64), "k = {k}");
        }
    }
}

#[test]
fn coset_state_matches_dense_transform() {
    for (n, m, offs) in [(5u64, 256u64, vec![0u64]), (12, 256, vec![1, 7]), (6, 64, vec![0, 3, 4]), (7, 7, vec![2])] {
        let cs = CosetState::new(n, m, offs.clone()).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); m as usize];
        for x in 0..m {
            if offs.contains(&(x % n)) {
                v[x as usize] = Complex64::new(1.0, 0.0);
            }
        }
        let s = StateVector::normalized(v).unwrap();
        let hat = if m.is_power_of_two() { fft_pow2(s.amps()).unwrap() } else { dft_naive(s.amps()) };
        for (k, a) in hat.iter().enumerate() {
            assert!((cs.amplitude(k as u64) - a).norm() < 1e-9, "N = {n}, M = {m}, k = {k}");
        }
    }
}

#[test]
fn coset_state_sampler_matches_distribution() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for (n, m, offs) in [(5u64, 512u64, vec![2u64]), (12, 512, vec![1, 7]), (8, 256, vec![0])] {
        let cs = CosetState::new(n, m, offs).unwrap();
        let exact: Vec<f64> = (0..m).map(|k| cs.probability(k)).collect();
        assert!((exact.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let draws = 200_000;
        let mut emp = vec![0.0; m as usize];
        for _ in 0..draws {
            emp[cs.sample(&mut rng) as usize] += 1.0 / draws as f64;
        }
        let noise = 2.0 * (m as f64 / draws as f64).sqrt();
        let l1 = l1_distance_slices(&emp, &exact);
        assert!(l1 < noise, "N = {n}: L1 {l1} vs noise {noise}");
    }
}

#[test]
fn coset_state_huge_modulus_peaks() {
    // At M = 2^28 almost every draw rounds to a multiple of 1/N.
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    let (n, m, t) = (437u64, 1u64 << 28, 512u64);
    let cs = CosetState::new(n, m, vec![100]).unwrap();
    let mut hits = 0;
    for _ in 0..2000 {
        let k = cs.sample(&mut rng);
        let f = cf_round(&Fraction::new(k, m).unwrap(), t).unwrap();
        if (BigInt::from(n) % f.den()) == BigInt::from(0) {
            hits += 1;
        }
    }
    assert!(hits >= 1990, "{hits}");
}

proptest! {
    #[test]
    fn fraction_text_roundtrip(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
        let f = frac(n, d);
        prop_assert_eq!(f.to_string().parse::<Fraction>().unwrap(), f);
    }

    #[test]
    fn cf_round_is_a_fixed_point(p in 0i64..200, q in 1i64..200, t in 2u64..300) {
        prop_assume!(p < q);
        let r = cf_round(&frac(p, q), t).unwrap();
        prop_assume!(r < frac(1, 1));
        prop_assert_eq!(cf_round(&r, t).unwrap(), r.clone());
        prop_assert!(r.den() < &BigInt::from(t));
    }

    #[test]
    fn batch_text_roundtrip(seed in any::<u64>(), xs in proptest::collection::vec((any::<bool>(), 0u64..1000, 1u64..1000), 0..20)) {
        let samples = xs.iter().map(|&(f, a, b)| if f { Sample::Index(a) } else { Sample::Fraction(Fraction::new(a, b).unwrap()) }).collect();
        let mut params = std::collections::BTreeMap::new();
        params.insert("N".to_string(), 12);
        let b = SampleBatch { seed, params, samples };
        prop_assert_eq!(SampleBatch::parse(&b.to_text()).unwrap(), b);
    }
}
