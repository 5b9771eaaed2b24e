//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Tolerances, grids and runtime limits are pinned below.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfhsp::dft::{chirpz, convolve, dft_naive, fft_pow2};
use qfhsp::hsp::abelian::hsp_abelian_with;
use qfhsp::hsp::group::perp_elements;
use qfhsp::hsp::{
    dot_g, exact_distribution, hsp_abelian, leading_bits, period_z, simon_with_budget, GroupSpec, OracleAbelian,
    OracleZ2n, PeriodRParams, PeriodRSetup, PeriodicZ, StepFunctionR, SubgroupSpec,
};
use qfhsp::qft_pow2::{build_qft_exact, circuit_columns};
use qfhsp::sampling::Fraction;
use qfhsp::statevector::StateVector;
use qfhsp::verify::{self, BoundReport};

const SEED: u64 = 0x5eed;

const ORACLE_TOL: f64 = 1e-8;
const ORACLE_INPUTS: usize = 20;
const CHIRPZ_MAX_N: usize = 1024;
const FFT_MAX_BITS: u32 = 12;
const ORACLE_LIMIT: Duration = Duration::from_secs(30);

const CIRCUIT_TOL: f64 = 1e-10;
const CIRCUIT_MATRIX_BITS: usize = 8;
const CIRCUIT_SIZE_BITS: usize = 20;
const CIRCUIT_LIMIT: Duration = Duration::from_secs(60);

const CONV_TOL: f64 = 1e-9;
const CONV_MAX_N: usize = 256;
const CONV_PAIRS: usize = 50;

const FTALG_NS: [u64; 6] = [3, 5, 7, 12, 30, 100];
const FTALG_R: u64 = 1024;
const FTALG_TRIALS: u64 = 50;
const FTALG_LIMIT: Duration = Duration::from_secs(300);

const FTTS_NS: [u64; 5] = [3, 5, 7, 12, 30];
const FTTS_RS: [u64; 4] = [1 << 6, 1 << 8, 1 << 10, 1 << 12];
const FTTS_TRIALS: u64 = 20;
const FTTS_LIMIT: Duration = Duration::from_secs(300);

const SUITE_TRIALS: u64 = 50;
const HEADROOM_MARGIN: f64 = 0.5;
const CALIBRATED: [&str; 1] = ["fsl"];
const SUITE_LIMIT: Duration = Duration::from_secs(600);

const SIMON_TRIALS: usize = 100;

const HSP_TRIALS: usize = 50;
const HSP_RATE: f64 = 0.95;
const UNIFORM_TOL: f64 = 1e-9;

const RELAXED_D: u32 = 3;
const RELAXED_FACTOR: f64 = 4.0;
const RELAXED_RATE: f64 = 0.90;

const PERIOD_Z_T: u64 = 512;
const PERIOD_Z_MAX: u64 = 500;
const PERIOD_Z_TRIALS: usize = 100;
const PERIOD_Z_RATE: f64 = 0.90;
const PERIOD_Z_RELAXED_RATE: f64 = 0.85;

const PERIOD_R_PS: [(i64, i64); 3] = [(5, 2), (7, 3), (11, 4)];
const PERIOD_R_N: u32 = 4;
const PERIOD_R_M: u32 = 2;
const PERIOD_R_TRIALS: usize = 50;
const PERIOD_R_RATE: f64 = 0.80;

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_vec(n: usize, r: &mut ChaCha8Rng) -> Vec<Complex64> {
    StateVector::random(n, r).unwrap().into_amps()
}

fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn frac(n: i64, d: i64) -> Fraction {
    Fraction::new(n, d).unwrap()
}

fn c01_oracles() -> Line {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst_cz = 0.0f64;
    for n in 2..=CHIRPZ_MAX_N {
        for _ in 0..ORACLE_INPUTS {
            let v = random_vec(n, &mut r);
            worst_cz = worst_cz.max(max_dev(&chirpz(&v), &dft_naive(&v)));
        }
    }
    let mut worst_fft = 0.0f64;
    for bits in 0..=FFT_MAX_BITS {
        for _ in 0..ORACLE_INPUTS {
            let v = random_vec(1 << bits, &mut r);
            worst_fft = worst_fft.max(max_dev(&fft_pow2(&v).unwrap(), &dft_naive(&v)));
        }
    }
    let t = start.elapsed();
    Line {
        id: 1,
        name: "fft_pow2 and chirpz match dft_naive",
        pass: worst_cz <= ORACLE_TOL && worst_fft <= ORACLE_TOL && t < ORACLE_LIMIT,
        detail: format!("chirpz max dev {worst_cz:.2e}, fft max dev {worst_fft:.2e} (tol {ORACLE_TOL:e}), {t:.1?}"),
    }
}

fn c02_exact_circuit() -> Line {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=CIRCUIT_MATRIX_BITS {
        let cols = circuit_columns(&build_qft_exact(n)).unwrap();
        for (j, col) in cols.iter().enumerate() {
            let mut e = vec![Complex64::new(0.0, 0.0); 1 << n];
            e[j] = Complex64::new(1.0, 0.0);
            worst = worst.max(max_dev(col, &dft_naive(&e)));
        }
    }
    let mut shape_ok = true;
    for n in 1..=CIRCUIT_SIZE_BITS {
        let c = build_qft_exact(n);
        shape_ok &= c.size() == n * (n + 1) / 2 && c.depth() <= 2 * n + 1;
    }
    let t = start.elapsed();
    Line {
        id: 2,
        name: "exact QFT circuit equals the DFT; size n(n+1)/2, depth ≤ 2n+1",
        pass: worst <= CIRCUIT_TOL && shape_ok && t < CIRCUIT_LIMIT,
        detail: format!("max entry dev {worst:.2e} for n ≤ {CIRCUIT_MATRIX_BITS}, shape ok up to n = {CIRCUIT_SIZE_BITS}: {shape_ok}, {t:.1?}"),
    }
}

fn c03_convolution() -> Line {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for n in 1..=CONV_MAX_N {
        let scale = 1.0 / (n as f64).sqrt();
        for _ in 0..CONV_PAIRS {
            let a = random_vec(n, &mut r);
            let b = random_vec(n, &mut r);
            let lhs: Vec<Complex64> = dft_naive(&convolve(&a, &b).unwrap()).into_iter().map(|x| x * scale).collect();
            let rhs: Vec<Complex64> = dft_naive(&a).iter().zip(dft_naive(&b)).map(|(x, y)| x * y).collect();
            worst = worst.max(max_dev(&lhs, &rhs));
        }
    }
    Line {
        id: 3,
        name: "convolution theorem",
        pass: worst <= CONV_TOL,
        detail: format!("max dev {worst:.2e} over N ≤ {CONV_MAX_N}, {CONV_PAIRS} pairs each (tol {CONV_TOL:e})"),
    }
}

fn c04_ftalg() -> Line {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in FTALG_NS {
        let m = (8 * FTALG_R * n).next_power_of_two();
        let rep = verify::verify_ftt(n, FTALG_R, m, FTALG_TRIALS, SEED).unwrap();
        pass &= rep.pass;
        worst = worst.max(rep.margin);
    }
    let t = start.elapsed();
    Line {
        id: 4,
        name: "repetition algorithm joint distance ≤ 4RN/M + 8 log2 N/√R",
        pass: pass && t < FTALG_LIMIT,
        detail: format!("worst measured/bound {worst:.3}, R = {FTALG_R}, M = 2^ceil(log2 8RN), {FTALG_TRIALS} states each, {t:.1?}"),
    }
}

fn c05_ftts() -> Line {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in FTTS_NS {
        for r in FTTS_RS {
            for m in [r * n, r * n + 17 * n] {
                let rep = verify::verify_ftts(n, r, m, FTTS_TRIALS, SEED).unwrap();
                pass &= rep.pass;
                worst = worst.max(rep.margin);
            }
        }
    }
    let t = start.elapsed();
    Line {
        id: 5,
        name: "sampled distribution L1 ≤ 8 log2 N/√R",
        pass: pass && t < FTTS_LIMIT,
        detail: format!("worst measured/bound {worst:.3} over {} grid points, {t:.1?}", FTTS_NS.len() * FTTS_RS.len() * 2),
    }
}

fn c06_pointmass() -> Line {
    let mut worst = 0.0f64;
    let mut pass = true;
    let mut cases = 0;
    for n in 2..=64u64 {
        for m in 2 * n..=16 * n {
            for rep in verify::verify_pointmass_claims(n, m).unwrap() {
                pass &= rep.pass;
                worst = worst.max(rep.margin);
            }
            cases += 1;
        }
    }
    Line {
        id: 6,
        name: "point-mass amplitude claims, exhaustive",
        pass,
        detail: format!("{cases} (N, M) pairs, worst measured/bound {worst:.3}"),
    }
}

fn c07_suites() -> Line {
    let start = Instant::now();
    let mut reports: Vec<BoundReport> = Vec::new();
    reports.extend(verify::suite_fsl(SUITE_TRIALS, SEED).unwrap());
    reports.extend(verify::suite_tail_shift(SUITE_TRIALS, SEED).unwrap());
    reports.extend(verify::suite_circulant(SUITE_TRIALS, SEED).unwrap());
    let t = start.elapsed();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.theorem.as_str()).collect();
    let calibrated = reports.iter().filter(|r| CALIBRATED.contains(&r.theorem.as_str()));
    let worst_cal = calibrated.map(|r| r.margin).fold(0.0, f64::max);
    Line {
        id: 7,
        name: "fsl, tail/shift/falloff and circulant suites",
        pass: failed.is_empty() && worst_cal <= HEADROOM_MARGIN && t < SUITE_LIMIT,
        detail: format!(
            "{} reports, failed {:?}, worst calibrated margin {worst_cal:.3} (≤ {HEADROOM_MARGIN}), {t:.1?}",
            reports.len(),
            failed
        ),
    }
}

fn c08_simon() -> Line {
    let mut r = rng(8);
    let mut ok = 0;
    let mut total = 0;
    let mut orthogonal = true;
    for n in 2..=10u32 {
        for _ in 0..SIMON_TRIALS {
            let b = r.gen_range(0..1u64 << n);
            let o = OracleZ2n::from_secret(n, b, &mut r).unwrap();
            total += 1;
            if let Ok(res) = simon_with_budget(&o, 4 * n as usize, &mut r) {
                ok += (res.secret.unwrap_or(0) == b) as usize;
                orthogonal &= res.samples.iter().all(|y| (y & b).count_ones() % 2 == 0);
            }
        }
    }
    Line {
        id: 8,
        name: "Simon recovery within 4n rounds, samples orthogonal to b",
        pass: ok == total && orthogonal,
        detail: format!("{ok}/{total} recovered, all samples orthogonal: {orthogonal}"),
    }
}

fn hsp_groups() -> Vec<GroupSpec> {
    [vec![2u64; 6], vec![3, 5, 7], vec![4, 9]].into_iter().map(|o| GroupSpec::finite(o).unwrap()).collect()
}

fn random_subgroup(g: &GroupSpec, r: &mut ChaCha8Rng) -> SubgroupSpec {
    let gens = (0..r.gen_range(0..=2))
        .map(|_| g.orders().iter().map(|&p| r.gen_range(0..p)).collect())
        .collect();
    SubgroupSpec::new(gens, g).unwrap()
}

fn c09_hsp() -> Line {
    let mut r = rng(9);
    let mut rates = Vec::new();
    let mut worst_uniform = 0.0f64;
    for g in hsp_groups() {
        let mut ok = 0;
        for _ in 0..HSP_TRIALS {
            let h = random_subgroup(&g, &mut r);
            let o = OracleAbelian::from_subgroup(g.clone(), h.clone(), &mut r).unwrap();
            let res = hsp_abelian(&o, &mut r, None).unwrap();
            ok += res.subgroup.same_as(&h, &g).unwrap() as usize;
            let perp: BTreeSet<usize> = perp_elements(&h, &g).unwrap().into_iter().collect();
            let u = 1.0 / perp.len() as f64;
            for (y, w) in exact_distribution(&o).unwrap().into_iter().enumerate() {
                let want = if perp.contains(&y) { u } else { 0.0 };
                worst_uniform = worst_uniform.max((w - want).abs());
            }
        }
        rates.push(ok as f64 / HSP_TRIALS as f64);
    }
    Line {
        id: 9,
        name: "finite abelian HSP recovery and uniform sampling on the perp",
        pass: rates.iter().all(|&x| x >= HSP_RATE) && worst_uniform <= UNIFORM_TOL,
        detail: format!("recovery {rates:?} (≥ {HSP_RATE}), max deviation from uniform {worst_uniform:.2e}"),
    }
}

/// Largest sampled mass on a maximal proper subgroup of `H^⊥`; every proper
/// subgroup lies in the kernel of some character of prime order on `H^⊥`.
fn max_proper_mass(dist: &[f64], perp: &[usize], g: &GroupSpec) -> f64 {
    let order = g.order().unwrap() as usize;
    let mut worst = 0.0f64;
    for c in 0..order {
        let gc = g.element(c);
        let kernel: Vec<usize> =
            perp.iter().copied().filter(|&y| dot_g(&g.element(y), &gc, g) == 0u32.into()).collect();
        if kernel.len() < perp.len() {
            worst = worst.max(kernel.iter().map(|&y| dist[y]).sum());
        }
    }
    worst
}

fn c10_relaxed() -> Line {
    let mut r = rng(10);
    let mut rates = Vec::new();
    let bound = 1.0 - 1.0 / (4.0 * (RELAXED_D * RELAXED_D) as f64);
    let mut worst_mass = 0.0f64;
    for g in hsp_groups() {
        let mut ok = 0;
        for _ in 0..HSP_TRIALS {
            let h = random_subgroup(&g, &mut r);
            let o = OracleAbelian::relaxed(g.clone(), h.clone(), RELAXED_D, &mut r).unwrap();
            if let Ok(res) = hsp_abelian_with(&o, Some(RELAXED_D), RELAXED_FACTOR, &mut r) {
                ok += res.subgroup.same_as(&h, &g).unwrap() as usize;
            }
            let perp = perp_elements(&h, &g).unwrap();
            worst_mass = worst_mass.max(max_proper_mass(&exact_distribution(&o).unwrap(), &perp, &g));
        }
        rates.push(ok as f64 / HSP_TRIALS as f64);
    }
    Line {
        id: 10,
        name: "relaxed HSP recovery and reconstruction mass condition",
        pass: rates.iter().all(|&x| x >= RELAXED_RATE) && worst_mass < bound,
        detail: format!(
            "recovery {rates:?} (≥ {RELAXED_RATE}), worst proper-subgroup mass {worst_mass:.4} < {bound:.4}"
        ),
    }
}

fn c11_period_z() -> Line {
    let mut r = rng(11);
    let (mut ok, mut ok_relaxed) = (0, 0);
    for _ in 0..PERIOD_Z_TRIALS {
        let p = r.gen_range(2..=PERIOD_Z_MAX);
        let o = PeriodicZ::one_to_one(p, &mut r).unwrap();
        ok += (period_z(&o, PERIOD_Z_T, &mut r, None).map(|x| x.period).ok() == Some(p)) as usize;
        let o = PeriodicZ::relaxed(p, RELAXED_D, &mut r).unwrap();
        let want = o.period();
        ok_relaxed += (period_z(&o, PERIOD_Z_T, &mut r, Some(RELAXED_D)).map(|x| x.period).ok() == Some(want)) as usize;
    }
    let (rate, rate_relaxed) = (ok as f64 / PERIOD_Z_TRIALS as f64, ok_relaxed as f64 / PERIOD_Z_TRIALS as f64);
    Line {
        id: 11,
        name: "period finding over Z, standard and relaxed (d = 3)",
        pass: rate >= PERIOD_Z_RATE && rate_relaxed >= PERIOD_Z_RELAXED_RATE,
        detail: format!("standard {rate:.2} (≥ {PERIOD_Z_RATE}), relaxed {rate_relaxed:.2} (≥ {PERIOD_Z_RELAXED_RATE}), T = {PERIOD_Z_T}"),
    }
}

fn c12_period_r() -> Line {
    let mut r = rng(12);
    let params = PeriodRParams::tuned(PERIOD_R_N, PERIOD_R_M).unwrap();
    let mut rates = Vec::new();
    for (a, b) in PERIOD_R_PS {
        let f = StepFunctionR::square_wave(frac(a, b), 4).unwrap();
        let want = leading_bits(f.period(), PERIOD_R_M).unwrap();
        let setup = PeriodRSetup::new(&f, 0, params.clone()).unwrap();
        let ok = (0..PERIOD_R_TRIALS)
            .filter(|_| setup.run(PERIOD_R_M, &mut r).map(|o| (o.exponent, o.leading) == want).unwrap_or(false))
            .count();
        rates.push(ok as f64 / PERIOD_R_TRIALS as f64);
    }
    Line {
        id: 12,
        name: "period finding over R, leading bits of 5/2, 7/3, 11/4",
        pass: params.n >= 16 * params.m && rates.iter().all(|&x| x >= PERIOD_R_RATE),
        detail: format!("rates {rates:?} (≥ {PERIOD_R_RATE}), M = {}, N = {}", params.m, params.n),
    }
}

fn c13_real() -> Line {
    let reports = verify::suite_real(SEED).unwrap();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.theorem.as_str()).collect();
    let zero: Vec<&BoundReport> =
        reports.iter().filter(|r| r.theorem == "falloff-r-constant" || r.theorem == "intcl-zero").collect();
    let zero_exact = !zero.is_empty() && zero.iter().all(|r| r.measured == 0.0);
    Line {
        id: 13,
        name: "real-line falloff, integral-period closeness and rescaling separation",
        pass: failed.is_empty() && zero_exact,
        detail: format!("{} reports, failed {failed:?}, {} zero cases exact: {zero_exact}", reports.len(), zero.len()),
    }
}

fn c14_determinism() -> Line {
    let runs: [&[&str]; 10] = [
        &["qft-exact", "--n", "3", "--emit-matrix", "--format", "csv"],
        &["qft-aqft", "--n", "6", "--kmax", "3", "--seed", "4"],
        &["qft-modn", "--N", "12", "--R", "16", "--auto-m", "pow2", "--seed", "5"],
        &["qft-chirpz", "--N", "21", "--eps", "0.5", "--seed", "6"],
        &["eig-est", "--N", "12", "--k", "6", "--i", "5", "--samples", "8", "--seed", "7"],
        &["sample-known", "--N", "30", "--R", "64", "--M", "2000", "--samples", "16", "--seed", "8"],
        &["sample-unknown", "--N", "7", "--M", "4096", "--T", "16", "--samples", "16", "--seed", "9", "--format", "csv"],
        &["simon", "--n", "6", "--seed", "10"],
        &["period-z", "--period", "37", "--T", "64", "--seed", "11"],
        &["verify", "ftts", "--N", "30", "--R", "4096", "--M", "123390", "--seed", "12"],
    ];
    let mut same = 0;
    for args in runs {
        let argv = std::iter::once("qfhsp").chain(args.iter().copied());
        let a = qfhsp_cli::run(argv.clone());
        let b = qfhsp_cli::run(argv);
        same += (a == b && a.code == 0 && !a.stdout.is_empty()) as usize;
    }
    Line {
        id: 14,
        name: "CLI output is byte-identical for repeated runs",
        pass: same == runs.len(),
        detail: format!("{same}/{} spot checks identical", runs.len()),
    }
}

fn main() {
    let checks: [fn() -> Line; 14] = [
        c01_oracles,
        c02_exact_circuit,
        c03_convolution,
        c04_ftalg,
        c05_ftts,
        c06_pointmass,
        c07_suites,
        c08_simon,
        c09_hsp,
        c10_relaxed,
        c11_period_z,
        c12_period_r,
        c13_real,
        c14_determinism,
    ];
    let mut failures = 0;
    for check in checks {
        let start = Instant::now();
        let line = check();
        failures += !line.pass as usize;
        println!(
            "[{}] C{:02} {}: {} ({:.1?})",
            if line.pass { "PASS" } else { "FAIL" },
            line.id,
            line.name,
            line.detail,
            start.elapsed()
        );
    }
    println!("acceptance: {}/{} criteria passed", checks.len() - failures, checks.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
