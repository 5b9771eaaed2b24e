//! Simon's algorithm over `(Z_2)^n`.

use rand::Rng;

use super::oracle::OracleZ2n;
use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::statevector::{distribution, sample, StateVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimonResult {
    /// `None` when `f` is 1-1.
    pub secret: Option<u64>,
    pub samples: Vec<u64>,
    pub rounds: usize,
    pub queries: u64,
}

fn hadamard_layer(n: u32) -> Result<Circuit> {
    let mut c = Circuit::new(n as usize);
    c.push_stage((0..n as usize).map(Gate::Hadamard).collect())?;
    Ok(c)
}

/// One run of the quantum subroutine: superpose, query, measure the value
/// register, apply `H^{⊗n}` and measure.
pub fn simon_sample<R: Rng + ?Sized>(oracle: &OracleZ2n, rng: &mut R) -> Result<u64> {
    let layer = hadamard_layer(oracle.bits())?;
    sample_with(oracle, &layer, rng)
}

fn sample_with<R: Rng + ?Sized>(oracle: &OracleZ2n, layer: &Circuit, rng: &mut R) -> Result<u64> {
    let table = oracle.superposition();
    let x0 = rng.gen_range(0..table.len());
    let v = table[x0];
    let amps = table.iter().map(|&y| if y == v { 1.0 } else { 0.0 }).map(|a| a.into()).collect();
    let coset = StateVector::normalized(amps)?;
    let out = layer.apply(&coset)?;
    Ok(sample(&distribution(&out)?, rng) as u64)
}

/// Inserts `y` into an xor basis kept in reduced row echelon form.
fn insert_row(rows: &mut Vec<u64>, mut y: u64) {
    for &r in rows.iter() {
        let pivot = 63 - r.leading_zeros();
        if y >> pivot & 1 == 1 {
            y ^= r;
        }
    }
    if y == 0 {
        return;
    }
    let pivot = 63 - y.leading_zeros();
    for r in rows.iter_mut() {
        if *r >> pivot & 1 == 1 {
            *r ^= y;
        }
    }
    rows.push(y);
    rows.sort_unstable_by(|a, b| b.cmp(a));
}

/// Basis of `{z : y ·₂ z = 0 for every row}` in `n` bits; `rows` must be reduced.
pub fn gf2_nullspace(rows: &[u64], n: u32) -> Vec<u64> {
    let pivots: Vec<u32> = rows.iter().map(|r| 63 - r.leading_zeros()).collect();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut z = 1u64 << free;
            for (r, &p) in rows.iter().zip(&pivots) {
                if r >> free & 1 == 1 {
                    z |= 1 << p;
                }
            }
            z
        })
        .collect()
}

/// Default budget: `4n` rounds of `n` subroutine calls each.
pub fn simon<R: Rng + ?Sized>(oracle: &OracleZ2n, rng: &mut R) -> Result<SimonResult> {
    simon_with_budget(oracle, 4 * oracle.bits() as usize, rng)
}

pub fn simon_with_budget<R: Rng + ?Sized>(oracle: &OracleZ2n, max_rounds: usize, rng: &mut R) -> Result<SimonResult> {
    let n = oracle.bits();
    let layer = hadamard_layer(n)?;
    let start = oracle.queries.get();
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for round in 1..=max_rounds {
        for _ in 0..n {
            let y = sample_with(oracle, &layer, rng)?;
            samples.push(y);
            insert_row(&mut rows, y);
        }
        let null = gf2_nullspace(&rows, n);
        let secret = match null.as_slice() {
            [] => None,
            [z] if oracle.query(0) == oracle.query(*z) => Some(*z),
            _ => continue,
        };
        return Ok(SimonResult { secret, samples, rounds: round, queries: oracle.queries.get() - start });
    }
    Err(Error::AlgorithmFailure(format!("system still underdetermined after {max_rounds} rounds")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_single_row() {
        let mut rows = Vec::new();
        insert_row(&mut rows, 0b110);
        insert_row(&mut rows, 0b011);
        assert_eq!(gf2_nullspace(&rows, 3), vec![0b111]);
    }
}
