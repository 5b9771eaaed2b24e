use num_complex::Complex64;
use qfhsp::dft::dft_naive;
use qfhsp::qft_modn::*;
use qfhsp::statevector::StateVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Distance after removing the best global phase.
fn phase_aligned_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let ph = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    let a2: Vec<Complex64> = a.iter().map(|x| x * ph).collect();
    dist(&a2, b)
}

fn three_sigma(p: f64, trials: usize) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

#[test]
fn smooth_matches_dft() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for factors in [vec![3u64, 5], vec![4, 3], vec![2, 3, 5], vec![7, 11, 13], vec![17], vec![8, 9, 5, 7]] {
        let f = SmoothFactorization::new(factors).unwrap();
        let n = f.modulus() as usize;
        for _ in 0..3 {
            let s = StateVector::random(n, &mut rng).unwrap();
            let got = qft_smooth(&s, &f).unwrap();
            assert!(max_dev(got.amps(), &dft_naive(s.amps())) < 1e-9, "N = {n}");
        }
    }
}

#[test]
fn smooth_rejects_shared_factor_and_large_factor() {
    assert!(SmoothFactorization::new(vec![6, 9]).is_err());
    let f = SmoothFactorization::new(vec![2053]).unwrap();
    let s = StateVector::uniform(2053).unwrap();
    assert!(qft_smooth(&s, &f).is_err());
}

#[test]
fn crt_round_trip_exhaustive() {
    for n in 1..=10_000u64 {
        let f = SmoothFactorization::prime_powers(n).unwrap();
        assert_eq!(f.factors().iter().product::<u64>(), n);
        for a in 0..n {
            assert_eq!(f.crt_inv(&f.crt_iso(a)), a, "N = {n}, a = {a}");
        }
    }
}

#[test]
fn chirpz_zero_branch_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in [2usize, 3, 5, 12, 31, 64] {
        let s = StateVector::random(n, &mut rng).unwrap();
        let setup = ChirpzSetup::new(&s).unwrap();
        let b = setup.branch(0).unwrap();
        assert!(b.prob > 0.0 && b.collapse > 0.0);
        assert!(max_dev(&b.unwound, &dft_naive(s.amps())) < 1e-9, "N = {n}");
        assert_eq!(setup.correction(0, 0.1), (0, true));
    }
}

#[test]
fn chirpz_h_distribution_sums_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let s = StateVector::random(20, &mut rng).unwrap();
    let p = ChirpzSetup::new(&s).unwrap().h_distribution();
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn chirpz_success_branch_is_eps_close() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let eps = 0.5;
    let mut successes = 0;
    for n in [3usize, 7, 12, 33, 64] {
        for _ in 0..200 {
            let s = StateVector::random(n, &mut rng).unwrap();
            let run = qft_chirpz_quantum(&s, n, eps, &mut rng).unwrap();
            if let ChirpzOutcome::Success(out) = run.outcome {
                successes += 1;
                let d = phase_aligned_dist(out.amps(), &dft_naive(s.amps()));
                assert!(d <= eps, "N = {n}, h = {}, distance {d}", run.h);
            }
        }
    }
    assert!(successes > 0);
}

#[test]
fn chirpz_monte_carlo_matches_exact_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let (n, eps, trials) = (12usize, 0.25, 10_000);
    let s = StateVector::random(n, &mut rng).unwrap();
    let p = ChirpzSetup::new(&s).unwrap().success_probability(eps).unwrap();
    let hits = (0..trials)
        .filter(|_| {
            matches!(qft_chirpz_quantum(&s, n, eps, &mut rng).unwrap().outcome, ChirpzOutcome::Success(_))
        })
        .count();
    let rate = hits as f64 / trials as f64;
    assert!((rate - p).abs() <= three_sigma(p, trials), "rate {rate} vs {p}");
    assert!(p >= qfhsp::constants::C_CHIRPZ * eps * eps, "p = {p}");
}

#[test]
fn fsl_exact_when_n_divides_m() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let s = StateVector::random(8, &mut rng).unwrap();
    let (p, sub) = fsl_branch(&s, 64).unwrap();
    assert!((p - 8.0 / 64.0).abs() < 1e-12);
    assert!(phase_aligned_dist(&sub, &dft_naive(s.amps())) < 1e-9);
    // The flagged amplitudes carry no extra phase when N | M.
    assert!(dist(&sub, &dft_naive(s.amps())) < 1e-9);
}

#[test]
fn fsl_error_and_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (n, m) = (12usize, 4096usize);
    let bound = qfhsp::constants::C_FSL * n as f64 * (n as f64).log2() / m as f64;
    for _ in 0..50 {
        let s = StateVector::random(n, &mut rng).unwrap();
        let (_, sub) = fsl_branch(&s, m).unwrap();
        assert!(dist(&sub, &dft_naive(s.amps())) <= bound);
    }
    let s = StateVector::random(n, &mut rng).unwrap();
    let (p, _) = fsl_branch(&s, m).unwrap();
    assert!((p - n as f64 / m as f64).abs() < 0.5 * n as f64 / m as f64);
    let trials = 10_000;
    let hits = (0..trials).filter(|_| qft_fsl_with_m(&s, m, &mut rng).unwrap().is_some()).count();
    let rate = hits as f64 / trials as f64;
    assert!((rate - p).abs() <= three_sigma(p, trials).max(1.0 / trials as f64), "rate {rate} vs {p}");
}

#[test]
fn fsl_auto_m_meets_eps() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let (n, eps) = (20usize, 0.05);
    let m = fsl_choose_m(n, eps).unwrap();
    for _ in 0..20 {
        let s = StateVector::random(n, &mut rng).unwrap();
        let (_, sub) = fsl_branch(&s, m).unwrap();
        assert!(dist(&sub, &dft_naive(s.amps())) <= eps);
    }
}

#[test]
fn repetition_exact_when_m_equals_rn() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for n in [3usize, 5, 12] {
        let p = RepetitionParams::new(n, 16, 16 * n).unwrap();
        let s = StateVector::random(n, &mut rng).unwrap();
        let out = approx_qft_zn(&s, p).unwrap();
        assert!(out.witness_distance < 1e-9);
        let offs = out.offset_distribution();
        let rad = p.window_radius();
        assert!((offs[rad] - 1.0).abs() < 1e-9);
        let (v, t) = approx_qft_zn_measured(&s, p, &mut rng).unwrap();
        assert_eq!(t, 0);
        assert!(max_dev(v.amps(), &dft_naive(s.amps())) < 1e-9);
    }
}

#[test]
fn repetition_uniform_two_is_point_mass() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let s = StateVector::uniform(2).unwrap();
    let p = RepetitionParams::new(2, 8, 16).unwrap();
    let (v, _) = approx_qft_zn_measured(&s, p, &mut rng).unwrap();
    assert!((v.amps()[0].norm() - 1.0).abs() < 1e-9);
    assert!(v.amps()[1].norm() < 1e-9);
}

#[test]
fn repetition_rejects_small_m() {
    assert!(RepetitionParams::new(12, 256, 3000).is_err());
    assert!(RepetitionParams::new(12, 100, 4000).is_err());
}

#[test]
fn repetition_bound_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let p = RepetitionParams::new(12, 256, 1 << 15).unwrap();
    for _ in 0..100 {
        let s = StateVector::random(12, &mut rng).unwrap();
        let out = approx_qft_zn(&s, p).unwrap();
        assert!(out.witness_distance <= out.bound, "{} > {}", out.witness_distance, out.bound);
    }
}

#[test]
fn repetition_error_moves_with_m_and_r() {
    // For a fixed state, the witness distance shrinks as M/RN grows and as R grows.
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let n = 7;
    let s = StateVector::random(n, &mut rng).unwrap();
    let by_m: Vec<f64> = [1usize, 2, 4, 8, 16]
        .iter()
        .map(|&f| approx_qft_zn(&s, RepetitionParams::new(n, 64, 64 * n * f + 3 * n).unwrap()).unwrap().witness_distance)
        .collect();
    for w in by_m.windows(2) {
        assert!(w[1] <= w[0] + 1e-9, "{by_m:?}");
    }
    let by_r: Vec<f64> = [16usize, 64, 256, 1024]
        .iter()
        .map(|&r| approx_qft_zn(&s, RepetitionParams::new(n, r, 16 * r * n).unwrap()).unwrap().witness_distance)
        .collect();
    for w in by_r.windows(2) {
        assert!(w[1] <= w[0] + 1e-9, "{by_r:?}");
    }
}

#[test]
fn eigen_power_of_two_is_exact() {
    for i in 0..16 {
        let d = eigenvalue_distribution(16, 4, i).unwrap();
        assert!((d.probs()[i] - 1.0).abs() < 1e-9, "i = {i}");
    }
}

#[test]
fn eigen_zero_always_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [5usize, 12, 16] {
        for _ in 0..20 {
            assert_eq!(eigenvalue_estimate(n, 6, 0, &mut rng).unwrap(), 0);
        }
    }
}

#[test]
fn eigen_twelve_top_bits() {
    let (n, k, i, m) = (12usize, 8usize, 5usize, 4usize);
    let want = (i << m) / n;
    let d = eigenvalue_distribution(n, k, i).unwrap();
    let exact: f64 = d.probs().iter().enumerate().filter(|(x, _)| x >> (k - m) == want).map(|(_, p)| p).sum();
    assert!(exact >= 0.9, "exact probability {exact}");
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let hits = (0..1000)
        .filter(|_| (eigenvalue_estimate(n, k, i, &mut rng).unwrap() as usize) >> (k - m) == want)
        .count();
    assert!(hits >= 900, "{hits}/1000");
}

#[test]
fn fbs_map_columns() {
    for n in 1..=64usize {
        let cols: Vec<Complex64> = {
            let mut id = vec![Complex64::new(0.0, 0.0); n];
            (0..n)
                .flat_map(|i| {
                    id.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
                    id[i] = Complex64::new(1.0, 0.0);
                    dft_naive(&id)
                })
                .collect()
        };
        for i in 0..n {
            let out = fbs_map(&StateVector::basis(n, i).unwrap()).unwrap();
            let got = &out.amps()[i * n..(i + 1) * n];
            assert!(max_dev(got, &cols[i * n..(i + 1) * n]) < 1e-10, "N = {n}, i = {i}");
        }
    }
}
