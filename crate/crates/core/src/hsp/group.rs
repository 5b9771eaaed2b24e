//! Finite abelian groups `⊕ Z_{p_i} ⊕ Z^m`, the `·_G` pairing and perp subgroups.

use num_bigint::BigUint;

use crate::error::{invalid, Error, Result};

/// Largest group that [`perp`] and [`SubgroupSpec::span`] will enumerate.
pub const MAX_ENUMERATION: u128 = 1_000_000;

/// `⊕ Z_{orders[i]} ⊕ Z^m`. Elements are coordinate vectors, finite part first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    orders: Vec<u64>,
    m: usize,
}

impl GroupSpec {
    pub fn new(orders: Vec<u64>, m: usize) -> Result<Self> {
        if let Some(p) = orders.iter().find(|&&p| p < 2) {
            return Err(invalid(format!("cyclic order {p} must be at least 2")));
        }
        Ok(Self { orders, m })
    }

    pub fn finite(orders: Vec<u64>) -> Result<Self> {
        Self::new(orders, 0)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of `Z` factors.
    pub fn free_rank(&self) -> usize {
        self.m
    }

    /// `P = Π p_i` over the finite part.
    pub fn exponent_product(&self) -> BigUint {
        self.orders.iter().fold(BigUint::from(1u32), |acc, &p| acc * p)
    }

    /// `|G|`, or `None` when `G` is infinite or the order overflows.
    pub fn order(&self) -> Option<u128> {
        if self.m > 0 {
            return None;
        }
        self.orders.iter().try_fold(1u128, |acc, &p| acc.checked_mul(p as u128))
    }

    /// `|G|` when it is at most `cap`.
    pub fn enumerable(&self, cap: u128) -> Result<usize> {
        if self.m > 0 {
            return Err(invalid("enumeration needs a finite group"));
        }
        match self.order() {
            Some(o) if o <= cap => Ok(o as usize),
            Some(o) => Err(Error::GroupTooLarge { order: o, max: cap }),
            None => Err(Error::GroupTooLarge { order: u128::MAX, max: cap }),
        }
    }

    /// Row-major index, first coordinate most significant.
    pub fn index(&self, g: &[u64]) -> usize {
        g.iter().zip(&self.orders).fold(0usize, |acc, (&x, &p)| acc * p as usize + (x % p) as usize)
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut g = vec![0u64; self.orders.len()];
        for (x, &p) in g.iter_mut().zip(&self.orders).rev() {
            *x = (idx % p as usize) as u64;
            idx /= p as usize;
        }
        g
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &p)| (x + y) % p).collect()
    }

    pub fn reduce(&self, g: &[u64]) -> Vec<u64> {
        g.iter().zip(&self.orders).map(|(&x, &p)| x % p).collect()
    }

    fn check_element(&self, g: &[u64]) -> Result<()> {
        if g.len() != self.orders.len() {
            return Err(Error::DimensionMismatch { left: g.len(), right: self.orders.len() });
        }
        Ok(())
    }
}

/// `(Σ P_j g_j h_j) mod P` with `P_j = P/p_j`; zero means `g ⊥ h`.
pub fn dot_g(g: &[u64], h: &[u64], group: &GroupSpec) -> BigUint {
    let p = group.exponent_product();
    let mut acc = BigUint::from(0u32);
    for ((&x, &y), &pj) in g.iter().zip(h).zip(&group.orders) {
        acc += (&p / pj) * (x % pj) * (y % pj);
    }
    acc % p
}

/// Word-size `·_G` for groups small enough to enumerate.
pub(crate) fn dot_small(g: &[u64], h: &[u64], orders: &[u64], p: u128) -> u128 {
    let mut acc = 0u128;
    for ((&x, &y), &pj) in g.iter().zip(h).zip(orders) {
        acc = (acc + (p / pj as u128) * ((x % pj) * (y % pj)) as u128) % p;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub generators: Vec<Vec<u64>>,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<Vec<u64>>, group: &GroupSpec) -> Result<Self> {
        for g in &generators {
            group.check_element(g)?;
        }
        Ok(Self { generators: generators.iter().map(|g| group.reduce(g)).collect() })
    }

    pub fn trivial() -> Self {
        Self { generators: Vec::new() }
    }

    /// Sorted indices of every element of the span.
    pub fn span(&self, group: &GroupSpec) -> Result<Vec<usize>> {
        let order = group.enumerable(MAX_ENUMERATION)?;
        let mut closure = Closure::new(group, order);
        for g in &self.generators {
            group.check_element(g)?;
            closure.insert(g);
        }
        Ok(closure.sorted())
    }

    /// Same element set as `other`.
    pub fn same_as(&self, other: &SubgroupSpec, group: &GroupSpec) -> Result<bool> {
        Ok(self.span(group)? == other.span(group)?)
    }
}

/// Span under construction, grown one generator at a time.
struct Closure<'a> {
    group: &'a GroupSpec,
    member: Vec<bool>,
    elems: Vec<usize>,
}

impl<'a> Closure<'a> {
    fn new(group: &'a GroupSpec, order: usize) -> Self {
        let mut member = vec![false; order];
        member[0] = true;
        Self { group, member, elems: vec![0] }
    }

    fn contains(&self, idx: usize) -> bool {
        self.member[idx]
    }

    /// Adds `g` and returns whether the span grew.
    fn insert(&mut self, g: &[u64]) -> bool {
        if self.member[self.group.index(g)] {
            return false;
        }
        let base: Vec<Vec<u64>> = self.elems.iter().map(|&i| self.group.element(i)).collect();
        let mut c = self.group.reduce(g);
        while !self.member[self.group.index(&c)] {
            for s in &base {
                let idx = self.group.index(&self.group.add(s, &c));
                self.member[idx] = true;
                self.elems.push(idx);
            }
            c = self.group.add(&c, g);
        }
        true
    }

    fn sorted(mut self) -> Vec<usize> {
        self.elems.sort_unstable();
        self.elems
    }
}

/// A small generating set for a subgroup given by its elements.
pub fn generators_of(elements: &[usize], group: &GroupSpec) -> Result<SubgroupSpec> {
    let order = group.enumerable(MAX_ENUMERATION)?;
    let mut closure = Closure::new(group, order);
    let mut gens = Vec::new();
    for &e in elements {
        if !closure.contains(e) {
            let g = group.element(e);
            closure.insert(&g);
            gens.push(g);
        }
    }
    Ok(SubgroupSpec { generators: gens })
}

/// Every `g` with `g ·_G h = 0` for all generators `h`, as sorted indices.
pub fn perp_elements(sub: &SubgroupSpec, group: &GroupSpec) -> Result<Vec<usize>> {
    let order = group.enumerable(MAX_ENUMERATION)?;
    for h in &sub.generators {
        group.check_element(h)?;
    }
    let p = order as u128;
    Ok((0..order)
        .filter(|&i| {
            let g = group.element(i);
            sub.generators.iter().all(|h| dot_small(&g, h, &group.orders, p) == 0)
        })
        .collect())
}

/// `H^⊥` by enumeration.
pub fn perp(sub: &SubgroupSpec, group: &GroupSpec) -> Result<SubgroupSpec> {
    generators_of(&perp_elements(sub, group)?, group)
}
