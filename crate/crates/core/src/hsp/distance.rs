//! The `D` metric on finite groups, on `Z` and on `ℝ`, and `C_{1/d}` separation.

use std::collections::HashMap;

use num_integer::Integer;

use super::group::{GroupSpec, SubgroupSpec, MAX_ENUMERATION};
use super::real::StepFunctionR;
use crate::error::{Error, Result};
use crate::sampling::Fraction;

pub enum DistanceInput<'a> {
    /// Two tables over the same finite group.
    Finite(&'a [u64], &'a [u64]),
    /// One period of each of two periodic functions on `Z`.
    Z(&'a [u64], &'a [u64]),
    /// Step functions on `ℝ` with rational periods.
    R(&'a StepFunctionR, &'a StepFunctionR),
}

/// Fraction of the (induced) domain on which `f` and `g` disagree.
pub fn distance_d(input: DistanceInput<'_>) -> Result<Fraction> {
    match input {
        DistanceInput::Finite(f, g) => distance_finite(f, g),
        DistanceInput::Z(f, g) => distance_z(f, g),
        DistanceInput::R(f, g) => super::real::distance_r(f, g),
    }
}

pub fn distance_finite(f: &[u64], g: &[u64]) -> Result<Fraction> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch { left: f.len(), right: g.len() });
    }
    if f.is_empty() {
        return Ok(Fraction::zero());
    }
    let diff = f.iter().zip(g).filter(|(a, b)| a != b).count();
    Fraction::new(diff as u64, f.len() as u64)
}

/// Compares one period of each over `Z_{lcm}`.
pub fn distance_z(f: &[u64], g: &[u64]) -> Result<Fraction> {
    if f.is_empty() || g.is_empty() {
        return Err(crate::error::invalid("empty period"));
    }
    let l = f.len().lcm(&g.len());
    if l as u128 > MAX_ENUMERATION * 64 {
        return Err(Error::GroupTooLarge { order: l as u128, max: MAX_ENUMERATION * 64 });
    }
    let diff = (0..l).filter(|&x| f[x % f.len()] != g[x % g.len()]).count();
    Fraction::new(diff as u64, l as u64)
}

/// `1 − (1/|G|) Σ_classes (largest label count)`: the distance from `table` to the nearest
/// function constant on each class of `classes`.
fn distance_to_best(table: &[u64], classes: impl Iterator<Item = Vec<usize>>) -> Fraction {
    let mut agree = 0u64;
    for class in classes {
        let mut count: HashMap<u64, u64> = HashMap::new();
        for &x in &class {
            *count.entry(table[x]).or_default() += 1;
        }
        agree += count.values().copied().max().unwrap_or(0);
    }
    let n = table.len() as u64;
    Fraction::new(n - agree, n).expect("nonempty table")
}

/// Min over `K ≰ H` of the distance from `table` to any `f_K`; `f_H ∈ C_{1/d}` iff this exceeds `1/d`.
///
/// Every `K ≰ H` contains a cyclic `⟨k⟩` with `k ∉ H`, and a function constant on
/// `K`-cosets is constant on `⟨k⟩`-cosets, so cyclic `K` suffice.
pub fn separation_finite(table: &[u64], group: &GroupSpec, hidden: &SubgroupSpec) -> Result<Fraction> {
    let order = group.enumerable(MAX_ENUMERATION)?;
    if table.len() != order {
        return Err(Error::DimensionMismatch { left: table.len(), right: order });
    }
    let h = hidden.span(group)?;
    let mut in_h = vec![false; order];
    h.iter().for_each(|&i| in_h[i] = true);
    let mut best = Fraction::new(1, 1)?;
    for k in (0..order).filter(|&k| !in_h[k]) {
        let gk = group.element(k);
        let mut seen = vec![false; order];
        let classes = (0..order).filter_map(|x| {
            if seen[x] {
                return None;
            }
            let mut class = Vec::new();
            let mut c = group.element(x);
            loop {
                let i = group.index(&c);
                if seen[i] {
                    break;
                }
                seen[i] = true;
                class.push(i);
                c = group.add(&c, &gk);
            }
            Some(class)
        });
        let dist = distance_to_best(table, classes.collect::<Vec<_>>().into_iter());
        if dist < best {
            best = dist;
        }
    }
    Ok(best)
}

/// Separation for a periodic function on `Z` given by one minimal period: the
/// subgroups `kZ ≰ NZ` reduce to the proper divisors `q = gcd(k, N)`.
pub fn separation_z(values: &[u64]) -> Fraction {
    let n = values.len();
    let mut best = Fraction::new(1, 1).expect("nonzero");
    for q in (1..n).filter(|q| n % q == 0) {
        let classes = (0..q).map(|r| (r..n).step_by(q).collect::<Vec<_>>());
        let dist = distance_to_best(values, classes);
        if dist < best {
            best = dist;
        }
    }
    best
}
