//! Period finding over `Z`: Fourier sampling of `Σ_{i<M} |i⟩|f(i)⟩` and rounding to
//! fractions with denominator below the bound `T`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::oracle::PeriodicZ;
use crate::error::{invalid, Error, Result};
use crate::sampling::{cf_round, CosetState, Fraction};

/// Random shifts used to confirm a candidate period.
pub const SPOT_CHECKS: usize = 32;

/// Largest modulus [`period_z`] will use.
pub const MAX_MODULUS: u64 = 1 << 40;

/// `2^⌈log2(T² log²T (log log T)²)⌉`, at least `2T²`.
pub fn fsp_modulus(t: u64) -> Result<u64> {
    if t < 2 {
        return Err(invalid(format!("period bound T = {t} must be at least 2")));
    }
    let lt = (t as f64).log2();
    let llt = lt.log2().max(1.0);
    let target = ((t as f64).powi(2) * lt * lt * llt * llt).max(2.0 * (t as f64).powi(2));
    let m = 1u64.checked_shl(target.log2().ceil() as u32).filter(|&m| m <= MAX_MODULUS);
    m.ok_or_else(|| invalid(format!("T = {t} needs a modulus above 2^40")))
}

#[derive(Debug, Clone)]
pub struct PeriodZResult {
    pub period: u64,
    pub modulus: u64,
    pub samples: Vec<Fraction>,
    /// Running lcm of accepted denominators (relaxed path only).
    pub lcm_trace: Vec<u64>,
    pub queries: u64,
}

fn small(x: &BigInt) -> u64 {
    x.to_u64().expect("denominator below T")
}

/// True when `f(x) = f(x + q)` at `checks` random `x`.
fn invariant_under<R: Rng + ?Sized>(oracle: &PeriodicZ, q: u64, checks: usize, rng: &mut R) -> bool {
    (0..checks).all(|_| {
        let x = rng.gen_range(0..1i64 << 40);
        oracle.eval(x) == oracle.eval(x + q as i64)
    })
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..).take_while(|i| i * i <= n).filter(|i| n % i == 0).flat_map(|i| [i, n / i]).collect();
    d.sort_unstable();
    d.dedup();
    d
}

/// Standard path: `O(n log n)` samples, each denominator tested by one pair of
/// evaluations, smallest passing denominator returned.
/// Relaxed path: `c·n²d²` samples folded into a running lcm kept below `T`; the
/// smallest divisor of the lcm that survives the spot checks is returned.
pub fn period_z<R: Rng + ?Sized>(oracle: &PeriodicZ, t: u64, rng: &mut R, relaxed_d: Option<u32>) -> Result<PeriodZResult> {
    period_z_with(oracle, t, relaxed_d, 2.0, rng)
}

pub fn period_z_with<R: Rng + ?Sized>(
    oracle: &PeriodicZ,
    t: u64,
    relaxed_d: Option<u32>,
    c: f64,
    rng: &mut R,
) -> Result<PeriodZResult> {
    let m = fsp_modulus(t)?;
    let start = oracle.queries.get();
    let n = (t as f64).log2().max(1.0);
    let count = match relaxed_d {
        None => (c * n * n.log2().max(1.0)).ceil() as usize,
        Some(d) => (c * n * n * (d as f64).powi(2)).ceil() as usize,
    };
    let mut states: HashMap<Vec<u64>, CosetState> = HashMap::new();
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let offsets = oracle.measured_coset(m, rng);
        if !states.contains_key(&offsets) {
            states.insert(offsets.clone(), CosetState::new(oracle.period(), m, offsets.clone())?);
        }
        let k = states[&offsets].sample(rng);
        samples.push(cf_round(&Fraction::new(k, m)?, t)?);
    }
    let mut lcm_trace = Vec::new();
    let period = match relaxed_d {
        None => {
            let mut dens: Vec<u64> = samples.iter().map(|f| small(f.den())).collect();
            dens.sort_unstable();
            dens.dedup();
            dens.into_iter().find(|&q| invariant_under(oracle, q, 1, rng))
        }
        Some(_) => {
            let mut l = 1u64;
            for f in &samples {
                let next = l.lcm(&small(f.den()));
                if next < t {
                    l = next;
                    lcm_trace.push(l);
                }
            }
            divisors(l).into_iter().find(|&q| invariant_under(oracle, q, SPOT_CHECKS, rng))
        }
    };
    let period = period.ok_or_else(|| Error::AlgorithmFailure("no candidate period passed".into()))?;
    if !invariant_under(oracle, period, SPOT_CHECKS, rng) {
        return Err(Error::AlgorithmFailure(format!("candidate {period} failed the spot checks")));
    }
    Ok(PeriodZResult { period, modulus: m, samples, lcm_trace, queries: oracle.queries.get() - start })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_at_512_is_2_pow_28() {
        assert_eq!(fsp_modulus(512).unwrap(), 1 << 28);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }
}
