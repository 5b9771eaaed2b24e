use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use qfhsp::dft::dft;
use qfhsp::hsp::{
    fsp_modulus, hsp_abelian, leading_bits, parse_oracle_file, period_r, period_z, simon_with_budget, GroupSpec, Oracle,
    OracleAbelian, OracleZ2n, PeriodRParams, PeriodicZ, StepFunctionR, SubgroupSpec,
};
use qfhsp::qft_modn::{
    approx_qft_zn, approx_qft_zn_measured, eigenvalue_distribution, qft_chirpz_quantum, qft_smooth, ChirpzOutcome,
    ChirpzSetup, RepetitionParams, SmoothFactorization,
};
use qfhsp::qft_pow2::{build_qft_exact, build_qft_truncated, circuit_columns, pqft, pqft_expected_sq_error, TruncationPolicy};
use qfhsp::sampling::{draw_rng, fourier_sample_known_batch, repeat_state, unknown_sample_distribution, Fraction, Sample};
use qfhsp::statevector::{l2_distance_slices, root_of_unity, ProbDist, StateVector};
use qfhsp::verify::{self, BoundReport};

use crate::output::Report;
use crate::{CliError, Command, Generators, MPolicy, ModulusArgs, OracleArgs, RealPolicy, RunConfig, VerifyId};

type Res<T> = Result<T, CliError>;

const MATRIX_MAX_QUBITS: usize = 8;
const CHECK_MAX_QUBITS: usize = 10;

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// Stream for the random input state, kept apart from the algorithm's draws.
fn state_rng(seed: u64) -> ChaCha8Rng {
    draw_rng(seed, u64::MAX)
}

fn algo_rng(seed: u64) -> ChaCha8Rng {
    draw_rng(seed, u64::MAX - 1)
}

fn random_state(dim: usize, seed: u64) -> Res<StateVector> {
    if dim == 0 {
        return Err(invalid("dimension must be positive"));
    }
    Ok(StateVector::random(dim, &mut state_rng(seed))?)
}

fn load_oracle(path: &Path) -> Res<Oracle> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Oracle(format!("cannot read {}: {e}", path.display())))?;
    parse_oracle_file(&text).map_err(|e| CliError::Oracle(format!("{}: {e}", path.display())))
}

fn wrong_kind(path: &Path, want: &str) -> CliError {
    CliError::Oracle(format!("{}: expected kind={want}", path.display()))
}

fn need<T: Clone>(v: &Option<T>, flag: &str, ctx: &str) -> Res<T> {
    v.clone().ok_or_else(|| invalid(format!("{ctx} needs {flag}")))
}

fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `‖a − e^{iφ}b‖` minimized over the global phase.
fn phase_free_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    (2.0 - 2.0 * ip.norm()).max(0.0).sqrt()
}

/// Column `j` of the DFT matrix over `2^n`.
fn dft_column(dim: usize, j: usize) -> Vec<Complex64> {
    let s = 1.0 / (dim as f64).sqrt();
    (0..dim).map(|k| root_of_unity((j * k) as i128, dim as u128) * s).collect()
}

fn resolve_m(n: usize, r: usize, args: &ModulusArgs, ctx: &str) -> Res<(usize, &'static str)> {
    match (args.m, args.auto_m) {
        (Some(m), None) => Ok((m, "explicit")),
        (None, Some(p)) => p.modulus(n, r).map(|m| (m, p.name())).ok_or_else(|| invalid("RN overflows")),
        _ => Err(invalid(format!("{ctx} needs --M or --auto-m"))),
    }
}

fn fraction_text(x: &Fraction) -> String {
    x.to_string()
}

pub fn dispatch(cfg: &RunConfig) -> Res<Report> {
    let seed = cfg.seed;
    match &cfg.command {
        Command::QftExact { n, emit_matrix } => qft_exact(*n as usize, *emit_matrix),
        Command::QftAqft { n, kmax } => qft_aqft(*n as usize, *kmax, seed),
        Command::QftParallel { n, k } => qft_parallel(*n as usize, *k as usize, seed),
        Command::QftModn { big_n, r, modulus } => qft_modn(*big_n, *r, modulus, seed),
        Command::QftChirpz { big_n, eps } => qft_chirpz(*big_n, *eps, seed),
        Command::QftSmooth { big_n, factors } => qft_smooth_cmd(*big_n, factors.as_deref(), seed),
        Command::EigEst { big_n, k, i, samples } => eig_est(*big_n, *k, *i, *samples, seed),
        Command::SampleKnown { big_n, r, modulus, samples } => sample_known(*big_n, *r, modulus, *samples, seed),
        Command::SampleUnknown { big_n, m, t, samples } => sample_unknown(*big_n, *m, *t, *samples, seed),
        Command::Simon { oracle, n, rounds } => simon_cmd(oracle, *n, *rounds, seed),
        Command::Hsp { oracle, orders, subgroup } => hsp_cmd("hsp", oracle, orders, subgroup, None, seed),
        Command::HspRelaxed { oracle, orders, subgroup, d } => {
            hsp_cmd("hsp-relaxed", oracle, orders, subgroup, Some(*d), seed)
        }
        Command::PeriodZ { oracle, period, t, d } => period_z_cmd(oracle, *period, *t, *d, seed),
        Command::PeriodR { .. } => period_r_cmd(&cfg.command, seed),
        Command::Verify { .. } => verify_cmd(&cfg.command, seed),
    }
}

fn qft_exact(n: usize, emit: bool) -> Res<Report> {
    if emit && n > MATRIX_MAX_QUBITS {
        return Err(invalid(format!("--emit-matrix needs n ≤ {MATRIX_MAX_QUBITS}")));
    }
    let c = build_qft_exact(n);
    let mut rep = Report::new("qft-exact", obj(json!({ "n": n, "emit_matrix": emit })));
    let dim = 1usize << n;
    if emit {
        let cols = circuit_columns(&c)?;
        for row in 0..dim {
            for (col, v) in cols.iter().enumerate() {
                rep = rep.row(json!({ "row": row, "col": col, "re": v[row].re, "im": v[row].im }));
            }
        }
        return Ok(rep);
    }
    let dev = if n <= CHECK_MAX_QUBITS {
        let cols = circuit_columns(&c)?;
        Some(cols.iter().enumerate().map(|(j, v)| max_dev(v, &dft_column(dim, j))).fold(0.0, f64::max))
    } else {
        None
    };
    Ok(rep.row(json!({
        "size": c.size(),
        "depth": c.depth(),
        "expected_size": n * (n + 1) / 2,
        "depth_bound": 2 * n + 1,
        "max_dev_vs_dft": dev,
    })))
}

fn qft_aqft(n: usize, kmax: u32, seed: u64) -> Res<Report> {
    let policy = TruncationPolicy::new(kmax, n)?;
    let c = build_qft_truncated(n, policy);
    let dim = 1usize << n;
    let state = random_state(dim, seed)?;
    let out = c.apply(&state)?;
    let err = l2_distance_slices(out.amps(), &dft(state.amps()))?;
    let worst = if n <= CHECK_MAX_QUBITS {
        let cols = circuit_columns(&c)?;
        let mut w = 0.0f64;
        for (j, v) in cols.iter().enumerate() {
            w = w.max(l2_distance_slices(v, &dft_column(dim, j))?);
        }
        Some(w)
    } else {
        None
    };
    let bound = std::f64::consts::TAU * n as f64 * 2f64.powi(-(kmax as i32));
    Ok(Report::new("qft-aqft", obj(json!({ "n": n, "kmax": kmax }))).row(json!({
        "size": c.size(),
        "depth": c.depth(),
        "random_state_error": err,
        "worst_basis_error": worst,
        "bound": bound,
    })))
}

fn qft_parallel(n: usize, k: usize, seed: u64) -> Res<Report> {
    let mut rng = algo_rng(seed);
    let p = pqft(n, k, &mut rng)?;
    let alpha = random_state(1 << n, seed)?;
    let c = p.circuit()?;
    Ok(Report::new("qft-parallel", obj(json!({ "n": n, "k": k }))).row(json!({
        "shift": p.shift,
        "sq_error": p.sq_error(&alpha),
        "expected_sq_error": pqft_expected_sq_error(p.params, &alpha),
        "wires": c.width(),
        "size": c.size(),
        "depth": c.depth(),
    })))
}

fn qft_modn(n: usize, r: usize, margs: &ModulusArgs, seed: u64) -> Res<Report> {
    let (m, policy) = resolve_m(n, r, margs, "qft-modn")?;
    let p = RepetitionParams::new(n, r, m)?;
    let state = random_state(n, seed)?;
    let out = approx_qft_zn(&state, p)?;
    let (row, t) = approx_qft_zn_measured(&state, p, &mut algo_rng(seed))?;
    let vhat = dft(state.amps());
    let params = obj(json!({ "N": n, "R": r, "M": m, "M_policy": policy }));
    Ok(Report::new("qft-modn", params).row(json!({
        "witness_distance": out.witness_distance,
        "bound": out.bound,
        "offset": t,
        "output_distance": phase_free_distance(row.amps(), &vhat),
    })))
}

fn qft_chirpz(n: usize, eps: f64, seed: u64) -> Res<Report> {
    let state = random_state(n, seed)?;
    let run = qft_chirpz_quantum(&state, n, eps, &mut algo_rng(seed))?;
    let success = ChirpzSetup::new(&state)?.success_probability(eps)?;
    let (outcome, distance) = match &run.outcome {
        ChirpzOutcome::Success(v) => ("success", Some(l2_distance_slices(v.amps(), &dft(state.amps()))?)),
        ChirpzOutcome::Retry => ("retry", None),
    };
    Ok(Report::new("qft-chirpz", obj(json!({ "N": n, "eps": eps }))).row(json!({
        "outcome": outcome,
        "h": run.h,
        "shift": run.shift,
        "success_probability": success,
        "distance": distance,
    })))
}

fn qft_smooth_cmd(n: usize, factors: Option<&[u64]>, seed: u64) -> Res<Report> {
    let (f, policy) = match factors {
        Some(v) => (SmoothFactorization::new(v.to_vec())?, "explicit"),
        None => (SmoothFactorization::prime_powers(n as u64)?, "prime_powers"),
    };
    if f.modulus() != n as u64 {
        return Err(invalid(format!("factors multiply to {}, not N = {n}", f.modulus())));
    }
    let state = random_state(n, seed)?;
    let out = qft_smooth(&state, &f)?;
    let params = obj(json!({ "N": n, "factors": f.factors(), "factors_policy": policy }));
    Ok(Report::new("qft-smooth", params).row(json!({ "max_dev_vs_dft": max_dev(out.amps(), &dft(state.amps())) })))
}

fn eig_est(n: usize, k: usize, i: usize, samples: u64, seed: u64) -> Res<Report> {
    if n < 2 {
        return Err(invalid("eig-est needs N ≥ 2"));
    }
    if k == 0 {
        return Err(invalid("eig-est needs k ≥ 1"));
    }
    let sampler = eigenvalue_distribution(n, k, i)?.sampler();
    let mut rep = Report::new("eig-est", obj(json!({ "N": n, "k": k, "i": i, "samples": samples })));
    let scale = (1u64 << k) as f64;
    for s in 0..samples {
        let x = sampler.draw(&mut draw_rng(seed, s));
        let i_hat = ((x as f64 * n as f64 / scale).round() as usize) % n;
        rep = rep.row(json!({ "sample": s, "x": x, "i_hat": i_hat }));
    }
    Ok(rep)
}

fn sample_known(n: usize, r: usize, margs: &ModulusArgs, samples: u64, seed: u64) -> Res<Report> {
    let (m, policy) = resolve_m(n, r, margs, "sample-known")?;
    RepetitionParams::new(n, r, m)?;
    let state = random_state(n, seed)?;
    let batch = fourier_sample_known_batch(&state, r, m, samples as usize, seed)?;
    let params = obj(json!({ "N": n, "R": r, "M": m, "M_policy": policy, "samples": samples }));
    let mut rep = Report::new("sample-known", params);
    for (s, x) in batch.samples.iter().enumerate() {
        let i = match x {
            Sample::Index(i) => *i,
            Sample::Fraction(_) => unreachable!("known-modulus samples are indices"),
        };
        rep = rep.row(json!({ "sample": s, "i": i }));
    }
    Ok(rep)
}

fn sample_unknown(n: usize, m: usize, t: u64, samples: u64, seed: u64) -> Res<Report> {
    if n == 0 || n > m {
        return Err(invalid(format!("sample-unknown needs 1 ≤ N ≤ M, got N = {n}, M = {m}")));
    }
    if m > qfhsp::statevector::DEFAULT_MAX_DIM {
        return Err(invalid(format!("M = {m} exceeds {}", qfhsp::statevector::DEFAULT_MAX_DIM)));
    }
    if t == 0 {
        return Err(invalid("sample-unknown needs T ≥ 1"));
    }
    let alpha = random_state(n, seed)?;
    let dist = unknown_sample_distribution(&repeat_state(&alpha, m)?, t)?;
    let (keys, weights): (Vec<Fraction>, Vec<f64>) = dist.into_iter().unzip();
    let sampler = ProbDist::from_weights(weights)?.sampler();
    let mut rep = Report::new("sample-unknown", obj(json!({ "N": n, "M": m, "T": t, "samples": samples })));
    for s in 0..samples {
        let x = &keys[sampler.draw(&mut draw_rng(seed, s))];
        rep = rep.row(json!({ "sample": s, "fraction": fraction_text(x) }));
    }
    Ok(rep)
}

fn simon_cmd(oargs: &OracleArgs, n: Option<u32>, rounds: Option<usize>, seed: u64) -> Res<Report> {
    let mut rng = algo_rng(seed);
    let (o, source) = match &oargs.oracle {
        Some(path) => match load_oracle(path)? {
            Oracle::Simon(o) => {
                if let Some(n) = n.filter(|&n| n != o.bits()) {
                    return Err(invalid(format!("--n {n} does not match the oracle's n = {}", o.bits())));
                }
                (o, "file")
            }
            _ => return Err(wrong_kind(path, "simon")),
        },
        None => {
            let n = need(&n, "--n or --oracle", "simon")?;
            if !(1..=20).contains(&n) {
                return Err(invalid(format!("n = {n} must lie in 1..=20")));
            }
            let b = rng.gen_range(0..1u64 << n);
            (OracleZ2n::from_secret(n, b, &mut rng)?, "random")
        }
    };
    let budget = rounds.unwrap_or(4 * o.bits() as usize);
    if budget == 0 {
        return Err(invalid("--rounds must be at least 1"));
    }
    let r = simon_with_budget(&o, budget, &mut rng)?;
    let correct = r.secret.unwrap_or(0) == o.hidden();
    let params = obj(json!({ "n": o.bits(), "oracle": source, "rounds_budget": budget }));
    let mut rep = Report::new("simon", params).row(json!({
        "secret": r.secret,
        "hidden": o.hidden(),
        "correct": correct,
        "rounds": r.rounds,
        "queries": r.queries,
        "samples": r.samples,
    }));
    rep.pass = correct;
    Ok(rep)
}

fn hsp_cmd(
    name: &'static str,
    oargs: &OracleArgs,
    orders: &Option<Vec<u64>>,
    subgroup: &Option<Generators>,
    d: Option<u32>,
    seed: u64,
) -> Res<Report> {
    let mut rng = algo_rng(seed);
    let (o, source) = match &oargs.oracle {
        Some(path) => match load_oracle(path)? {
            Oracle::Abelian(o) => (o, "file"),
            _ => return Err(wrong_kind(path, "abelian")),
        },
        None => {
            let group = GroupSpec::finite(need(orders, "--orders or --oracle", name)?)?;
            let h = SubgroupSpec::new(need(subgroup, "--subgroup or --oracle", name)?.0, &group)?;
            let o = match d {
                Some(d) => OracleAbelian::relaxed(group, h, d, &mut rng)?,
                None => OracleAbelian::from_subgroup(group, h, &mut rng)?,
            };
            (o, "random")
        }
    };
    let group = o.group().clone();
    let r = hsp_abelian(&o, &mut rng, d)?;
    let correct = r.subgroup.same_as(o.hidden(), &group)?;
    let mut params = obj(json!({ "orders": group.orders(), "oracle": source }));
    if let Some(d) = d {
        params.insert("d".into(), json!(d));
    }
    let mut rep = Report::new(name, params).row(json!({
        "subgroup": r.subgroup.generators,
        "hidden": o.hidden().generators,
        "correct": correct,
        "samples": r.samples.len(),
        "queries": r.queries,
    }));
    rep.pass = correct;
    Ok(rep)
}

fn period_z_cmd(oargs: &OracleArgs, period: Option<u64>, t: u64, d: Option<u32>, seed: u64) -> Res<Report> {
    let mut rng = algo_rng(seed);
    let m = fsp_modulus(t)?;
    let (o, source) = match &oargs.oracle {
        Some(path) => match load_oracle(path)? {
            Oracle::PeriodicZ(o) => (o, "file"),
            _ => return Err(wrong_kind(path, "periodic_z")),
        },
        None => {
            let p = need(&period, "--period or --oracle", "period-z")?;
            if p == 0 || p > t {
                return Err(invalid(format!("period {p} must lie in 1..=T = {t}")));
            }
            let o = match d {
                Some(d) => PeriodicZ::relaxed(p, d, &mut rng)?,
                None => PeriodicZ::one_to_one(p, &mut rng)?,
            };
            (o, "random")
        }
    };
    if o.period() > t {
        return Err(invalid(format!("oracle period {} exceeds T = {t}", o.period())));
    }
    let r = period_z(&o, t, &mut rng, d)?;
    let correct = r.period == o.period();
    let mut params = obj(json!({ "T": t, "M": m, "M_policy": "fsp", "oracle": source }));
    if let Some(d) = d {
        params.insert("d".into(), json!(d));
    }
    let mut rep = Report::new("period-z", params).row(json!({
        "period": r.period,
        "hidden": o.period(),
        "correct": correct,
        "samples": r.samples.len(),
        "lcm_final": r.lcm_trace.last(),
        "lcm_steps": r.lcm_trace.len(),
        "queries": r.queries,
    }));
    rep.pass = correct;
    Ok(rep)
}

fn step_function(oargs: &OracleArgs, p: &Option<Fraction>, ctx: &str) -> Res<(StepFunctionR, &'static str)> {
    match &oargs.oracle {
        Some(path) => match load_oracle(path)? {
            Oracle::StepR(f) => Ok((f, "file")),
            _ => Err(wrong_kind(path, "step_r")),
        },
        None => {
            let p = need(p, "--p or --oracle", ctx)?;
            Ok((StepFunctionR::square_wave(p, 4)?, "square_wave"))
        }
    }
}

fn period_r_cmd(cmd: &Command, seed: u64) -> Res<Report> {
    let Command::PeriodR { oracle, p, n, m, k, auto_m, big_m, big_n, j, threshold, range, samples } = cmd else {
        unreachable!()
    };
    let params = match auto_m {
        Some(RealPolicy::Tuned) => PeriodRParams::tuned(*n, *m)?,
        None => PeriodRParams::new(
            need(big_m, "--M or --auto-m", "period-r")?,
            need(big_n, "--N or --auto-m", "period-r")?,
            need(j, "--J or --auto-m", "period-r")?,
            need(threshold, "--threshold or --auto-m", "period-r")?,
            need(range, "--range or --auto-m", "period-r")?,
            need(samples, "--samples or --auto-m", "period-r")?,
        )?,
    };
    if *m == 0 || *m > 63 {
        return Err(invalid(format!("m = {m} must lie in 1..=63")));
    }
    let (f, source) = step_function(oracle, p, "period-r")?;
    let truth = leading_bits(f.period(), *m)?;
    let out = period_r(&f, *n, *k, *m, params.clone(), &mut algo_rng(seed))?;
    let correct = (out.exponent, out.leading) == truth;
    let echo = obj(json!({
        "p": fraction_text(f.period()),
        "f": source,
        "n": n,
        "m": m,
        "k": k,
        "M": params.m,
        "N": params.n,
        "J": params.denom_bound,
        "threshold": params.threshold,
        "range": params.range,
        "samples": params.samples,
        "policy": if auto_m.is_some() { "tuned" } else { "explicit" },
    }));
    let mut rep = Report::new("period-r", echo).row(json!({
        "estimate": fraction_text(&out.estimate),
        "estimate_f64": out.estimate.to_f64(),
        "exponent": out.exponent,
        "leading": format!("{:0width$b}", out.leading, width = *m as usize),
        "expected_exponent": truth.0,
        "expected_leading": format!("{:0width$b}", truth.1, width = *m as usize),
        "correct": correct,
        "valid": out.valid,
        "discarded": out.discarded,
    }));
    rep.pass = correct;
    Ok(rep)
}

fn verify_cmd(cmd: &Command, seed: u64) -> Res<Report> {
    let Command::Verify { id, big_n, r, modulus, trials, k, t, d, p, oracle } = cmd else { unreachable!() };
    let ctx = format!("verify {}", id.name());
    let ctx = ctx.as_str();
    let mut echo = obj(json!({ "id": id.name() }));
    if !matches!(id, VerifyId::Pointmass | VerifyId::Real | VerifyId::SuiteReal) {
        echo.insert("trials".into(), json!(trials));
    }
    let mut put = |key: &str, v: Value| {
        echo.insert(key.to_string(), v);
    };
    let with_r = matches!(id, VerifyId::Ftt | VerifyId::Ftts | VerifyId::TailShift);
    if modulus.auto_m.is_some() && !with_r {
        return Err(invalid(format!("{ctx} takes --M, not --auto-m")));
    }
    let reports: Vec<BoundReport> = match id {
        VerifyId::Fsl | VerifyId::Pointmass | VerifyId::Circulant => {
            let n = need(big_n, "--N", ctx)?;
            let m = need(&modulus.m, "--M", ctx)?;
            put("N", json!(n));
            put("M", json!(m));
            match id {
                VerifyId::Fsl => {
                    if m <= n {
                        return Err(invalid(format!("{ctx} needs M > N")));
                    }
                    vec![verify::verify_fsl(n as usize, m as usize, *trials, seed)?]
                }
                VerifyId::Pointmass => verify::verify_pointmass_claims(n, m)?,
                _ => verify::verify_circulant(n, m, *trials, seed)?,
            }
        }
        VerifyId::Ftt | VerifyId::Ftts | VerifyId::TailShift => {
            let n = need(big_n, "--N", ctx)?;
            let r = need(r, "--R", ctx)?;
            let (m, policy) = match (modulus.m, modulus.auto_m) {
                (Some(m), _) => (m, "explicit"),
                (None, p) => {
                    let p = p.unwrap_or(MPolicy::Rn);
                    let m = p.modulus(n as usize, r as usize).ok_or_else(|| invalid("RN overflows"))?;
                    (m as u64, p.name())
                }
            };
            put("N", json!(n));
            put("R", json!(r));
            put("M", json!(m));
            put("M_policy", json!(policy));
            match id {
                VerifyId::Ftt => vec![verify::verify_ftt(n, r, m, *trials, seed)?],
                VerifyId::Ftts => vec![verify::verify_ftts(n, r, m, *trials, seed)?],
                _ => verify::verify_tail_shift(n, r, m, *trials, seed)?,
            }
        }
        VerifyId::Real => {
            let (f, source) = step_function(oracle, p, ctx)?;
            let n = need(big_n, "--N", ctx)?;
            let m = need(&modulus.m, "--M", ctx)?;
            let k = need(k, "--k", ctx)?;
            let t = need(t, "--t", ctx)?;
            let d = need(d, "--d", ctx)?;
            put("p", json!(fraction_text(f.period())));
            put("f", json!(source));
            put("N", json!(n));
            put("M", json!(m));
            put("k", json!(k));
            put("t", json!(fraction_text(&t)));
            put("d", json!(d));
            verify::verify_real_lemmas(&f, m, n, k, &t, d)?
        }
        VerifyId::SuiteFsl => verify::suite_fsl(*trials, seed)?,
        VerifyId::SuiteTailShift => verify::suite_tail_shift(*trials, seed)?,
        VerifyId::SuiteCirculant => verify::suite_circulant(*trials, seed)?,
        VerifyId::SuiteReal => verify::suite_real(seed)?,
    };
    let mut rep = Report::new("verify", echo);
    rep.pass = verify::all_pass(&reports);
    for b in &reports {
        rep = rep.row(serde_json::to_value(b).map_err(|e| invalid(e.to_string()))?);
    }
    Ok(rep)
}
