//! Staged gate circuits, a dense simulator, and permutation gadgets for reversible arithmetic.
//!
//! Wire `w` is bit `w` of the basis index. When several registers are laid out
//! with [`register_layout`], the first register takes the highest wires, so the
//! index of `|a⟩|b⟩` is `a·2^{|b|} + b`, matching [`crate::statevector::tensor`].

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::statevector::StateVector;

const PAR_THRESHOLD: usize = 1 << 14;

/// Wire ranges for registers of the given widths, first register most significant.
pub fn register_layout(widths: &[usize]) -> Vec<Range<usize>> {
    let total: usize = widths.iter().sum();
    let mut top = total;
    widths
        .iter()
        .map(|&w| {
            top -= w;
            top..top + w
        })
        .collect()
}

/// Declared elementary cost of a gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Cost {
    pub size: u64,
    pub depth: u64,
}

type IndexMap = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// A named bijection on the basis states of a list of operand registers.
///
/// The operand value packs the registers with the first one in the lowest bits.
#[derive(Clone)]
pub struct Permutation {
    name: String,
    regs: Vec<Vec<usize>>,
    forward: IndexMap,
    backward: IndexMap,
    cost: Cost,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Permutation")
            .field("name", &self.name)
            .field("regs", &self.regs)
            .field("cost", &self.cost)
            .finish()
    }
}

impl Permutation {
    pub fn new(
        name: impl Into<String>,
        regs: Vec<Range<usize>>,
        forward: impl Fn(u64) -> u64 + Send + Sync + 'static,
        backward: impl Fn(u64) -> u64 + Send + Sync + 'static,
        cost: Cost,
    ) -> Result<Self> {
        let bits: usize = regs.iter().map(|r| r.len()).sum();
        if bits == 0 || bits > 40 {
            return Err(invalid(format!("permutation over {bits} bits")));
        }
        let regs = regs.into_iter().map(|r| r.collect()).collect();
        Ok(Self { name: name.into(), regs, forward: Arc::new(forward), backward: Arc::new(backward), cost })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Operand registers as wire lists, least significant wire first.
    pub fn regs(&self) -> &[Vec<usize>] {
        &self.regs
    }

    pub fn cost(&self) -> Cost {
        self.cost
    }

    pub fn bits(&self) -> usize {
        self.regs.iter().map(|r| r.len()).sum()
    }

    /// Operand wires, least significant first.
    pub fn wires(&self) -> Vec<usize> {
        self.regs.iter().flatten().copied().collect()
    }

    pub fn forward(&self, v: u64) -> u64 {
        (self.forward)(v)
    }

    pub fn backward(&self, v: u64) -> u64 {
        (self.backward)(v)
    }

    pub fn inverse(&self) -> Self {
        let name = match self.name.strip_suffix("^-1") {
            Some(base) => base.to_string(),
            None => format!("{}^-1", self.name),
        };
        Self {
            name,
            regs: self.regs.clone(),
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            cost: self.cost,
        }
    }

    /// Exhaustively checks that `forward` is a bijection with inverse `backward`.
    pub fn is_bijection(&self) -> bool {
        let n = 1u64 << self.bits();
        let mut seen = vec![false; n as usize];
        for v in 0..n {
            let y = self.forward(v);
            if y >= n || seen[y as usize] || self.backward(y) != v {
                return false;
            }
            seen[y as usize] = true;
        }
        true
    }

    fn remap(&self, map: &dyn Fn(usize) -> usize) -> Self {
        Self { regs: self.regs.iter().map(|r| r.iter().map(|&w| map(w)).collect()).collect(), ..self.clone() }
    }
}

/// Gate set. Rotations store the order `k` of `R_k = diag(1, e^{2πi/2^k})`;
/// `inverse` selects the conjugate phase.
#[derive(Debug, Clone)]
pub enum Gate {
    Hadamard(usize),
    Rotation { k: u32, wire: usize, inverse: bool },
    ControlledRotation { k: u32, control: usize, target: usize, inverse: bool },
    Cnot { control: usize, target: usize },
    Toffoli { c1: usize, c2: usize, target: usize },
    Permutation(Permutation),
}

impl Gate {
    pub fn rotation(k: u32, wire: usize) -> Self {
        Gate::Rotation { k, wire, inverse: false }
    }

    pub fn controlled_rotation(k: u32, control: usize, target: usize) -> Self {
        Gate::ControlledRotation { k, control, target, inverse: false }
    }

    pub fn wires(&self) -> Vec<usize> {
        match self {
            Gate::Hadamard(w) => vec![*w],
            Gate::Rotation { wire, .. } => vec![*wire],
            Gate::ControlledRotation { control, target, .. } => vec![*control, *target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Toffoli { c1, c2, target } => vec![*c1, *c2, *target],
            Gate::Permutation(p) => p.wires(),
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Rotation { k, wire, inverse } => Gate::Rotation { k: *k, wire: *wire, inverse: !inverse },
            Gate::ControlledRotation { k, control, target, inverse } => Gate::ControlledRotation {
                k: *k,
                control: *control,
                target: *target,
                inverse: !inverse,
            },
            Gate::Permutation(p) => Gate::Permutation(p.inverse()),
            g => g.clone(),
        }
    }

    fn validate(&self, width: usize) -> Result<()> {
        let ws = self.wires();
        for (i, &w) in ws.iter().enumerate() {
            if w >= width {
                return Err(Error::WireConflict(format!("wire {w} outside width {width}")));
            }
            if ws[..i].contains(&w) {
                return Err(Error::WireConflict(format!("wire {w} repeated in {self}")));
            }
        }
        match self {
            Gate::Rotation { k, .. } | Gate::ControlledRotation { k, .. } if !(1..=64).contains(k) => {
                Err(invalid(format!("rotation order {k} outside 1..=64")))
            }
            _ => Ok(()),
        }
    }

    fn remap(&self, map: &dyn Fn(usize) -> usize) -> Gate {
        match self {
            Gate::Hadamard(w) => Gate::Hadamard(map(*w)),
            Gate::Rotation { k, wire, inverse } => Gate::Rotation { k: *k, wire: map(*wire), inverse: *inverse },
            Gate::ControlledRotation { k, control, target, inverse } => Gate::ControlledRotation {
                k: *k,
                control: map(*control),
                target: map(*target),
                inverse: *inverse,
            },
            Gate::Cnot { control, target } => Gate::Cnot { control: map(*control), target: map(*target) },
            Gate::Toffoli { c1, c2, target } => Gate::Toffoli { c1: map(*c1), c2: map(*c2), target: map(*target) },
            Gate::Permutation(p) => Gate::Permutation(p.remap(map)),
        }
    }

    /// Elementary cost: 1 for basic gates, declared metadata for permutations.
    pub fn cost(&self) -> Cost {
        match self {
            Gate::Permutation(p) => p.cost(),
            _ => Cost { size: 1, depth: 1 },
        }
    }
}

fn fmt_wires(r: &[usize]) -> String {
    if r.windows(2).all(|p| p[1] == p[0] + 1) {
        format!("{}..{}", r[0], r[r.len() - 1] + 1)
    } else {
        r.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("+")
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dg = |inv: &bool| if *inv { "dg" } else { "" };
        match self {
            Gate::Hadamard(w) => write!(f, "H({w})"),
            Gate::Rotation { k, wire, inverse } => write!(f, "R{}({k},{wire})", dg(inverse)),
            Gate::ControlledRotation { k, control, target, inverse } => {
                write!(f, "CR{}({k},{control},{target})", dg(inverse))
            }
            Gate::Cnot { control, target } => write!(f, "CNOT({control},{target})"),
            Gate::Toffoli { c1, c2, target } => write!(f, "TOF({c1},{c2},{target})"),
            Gate::Permutation(p) => {
                let rs: Vec<String> = p.regs.iter().map(|r| fmt_wires(r)).collect();
                write!(f, "PERM({},{})", p.name, rs.join("|"))
            }
        }
    }
}

/// A staged circuit: gates inside a stage act on disjoint wires.
///
/// An optional output relabeling moves the content of wire `w` to wire
/// `relabel[w]` after the last stage; it costs no gates and no depth.
#[derive(Debug, Clone)]
pub struct Circuit {
    width: usize,
    stages: Vec<Vec<Gate>>,
    relabel: Option<Vec<usize>>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self { width, stages: Vec::new(), relabel: None }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn stages(&self) -> &[Vec<Gate>] {
        &self.stages
    }

    pub fn relabel(&self) -> Option<&[usize]> {
        self.relabel.as_deref()
    }

    /// Appends a stage after checking wire bounds and disjointness. Empty stages are dropped.
    pub fn push_stage(&mut self, gates: Vec<Gate>) -> Result<()> {
        let mut used = vec![false; self.width];
        for g in &gates {
            g.validate(self.width)?;
            for w in g.wires() {
                if used[w] {
                    return Err(Error::WireConflict(format!("wire {w} used twice in one stage")));
                }
                used[w] = true;
            }
        }
        if gates.is_empty() {
            return Ok(());
        }
        let gates = match &self.relabel {
            // A pending relabel is kept at the end: later gates are pulled back through it.
            Some(pi) => {
                let inv = invert_perm(pi);
                gates.iter().map(|g| g.remap(&|w| inv[w])).collect()
            }
            None => gates,
        };
        self.stages.push(gates);
        Ok(())
    }

    pub fn push_gate(&mut self, g: Gate) -> Result<()> {
        self.push_stage(vec![g])
    }

    /// Composes an output relabeling after everything added so far.
    pub fn set_output_relabel(&mut self, pi: Vec<usize>) -> Result<()> {
        check_perm(&pi, self.width)?;
        let composed = match &self.relabel {
            Some(prev) => prev.iter().map(|&w| pi[w]).collect(),
            None => pi,
        };
        self.relabel = if composed.iter().enumerate().all(|(i, &w)| i == w) { None } else { Some(composed) };
        Ok(())
    }

    /// `self` followed by `other` (same width).
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if other.width != self.width {
            return Err(Error::DimensionMismatch { left: self.width, right: other.width });
        }
        let mut out = self.clone();
        for st in &other.stages {
            out.push_stage(st.clone())?;
        }
        if let Some(pi) = &other.relabel {
            out.set_output_relabel(pi.clone())?;
        }
        Ok(out)
    }

    /// Places this circuit on `wire_map[w]` inside a wider circuit.
    pub fn embed(&self, width: usize, wire_map: &[usize]) -> Result<Circuit> {
        if wire_map.len() != self.width {
            return Err(Error::DimensionMismatch { left: wire_map.len(), right: self.width });
        }
        let mut out = Circuit::new(width);
        for st in &self.stages {
            let gates = st.iter().map(|g| g.remap(&|w| wire_map[w])).collect();
            out.push_stage(gates)?;
        }
        if let Some(pi) = &self.relabel {
            let mut full: Vec<usize> = (0..width).collect();
            for (w, &t) in pi.iter().enumerate() {
                full[wire_map[w]] = wire_map[t];
            }
            out.set_output_relabel(full)?;
        }
        Ok(out)
    }

    /// Runs circuits on disjoint wire sets side by side, merging stage `s` of each part.
    pub fn parallel(width: usize, parts: &[(Circuit, Vec<usize>)]) -> Result<Circuit> {
        let embedded = parts.iter().map(|(c, m)| c.embed(width, m)).collect::<Result<Vec<_>>>()?;
        let depth = embedded.iter().map(|c| c.stages.len()).max().unwrap_or(0);
        let mut out = Circuit::new(width);
        for s in 0..depth {
            let gates: Vec<Gate> = embedded.iter().filter_map(|c| c.stages.get(s)).flatten().cloned().collect();
            out.push_stage(gates)?;
        }
        let mut full: Vec<usize> = (0..width).collect();
        for c in &embedded {
            if let Some(pi) = &c.relabel {
                for (w, &t) in pi.iter().enumerate() {
                    if t != w {
                        full[w] = t;
                    }
                }
            }
        }
        out.set_output_relabel(full)?;
        Ok(out)
    }

    pub fn size(&self) -> usize {
        self.stages.iter().map(|s| s.len()).sum()
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn size_depth(&self) -> (usize, usize) {
        (self.size(), self.depth())
    }

    /// Size and depth with permutation gadgets expanded to their declared costs.
    pub fn elementary_cost(&self) -> Cost {
        let mut c = Cost::default();
        for st in &self.stages {
            c.size += st.iter().map(|g| g.cost().size).sum::<u64>();
            c.depth += st.iter().map(|g| g.cost().depth).max().unwrap_or(0);
        }
        c
    }

    /// Stable text dump: one stage per line, then an optional `RELABEL(...)` line.
    pub fn dump(&self) -> String {
        let mut s = format!("WIDTH({})\n", self.width);
        for st in &self.stages {
            let line: Vec<String> = st.iter().map(|g| g.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        if let Some(pi) = &self.relabel {
            let ws: Vec<String> = pi.iter().map(|w| w.to_string()).collect();
            s.push_str(&format!("RELABEL({})\n", ws.join(",")));
        }
        s
    }

    /// Applies the circuit to `s`.
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        let dim = 1usize.checked_shl(self.width as u32).unwrap_or(0);
        if s.dim() != dim {
            return Err(Error::DimensionMismatch { left: s.dim(), right: dim });
        }
        let mut amp = s.amps().to_vec();
        for st in &self.stages {
            for g in st {
                apply_gate(g, &mut amp);
            }
        }
        if let Some(pi) = &self.relabel {
            amp = relabel_amps(&amp, pi);
        }
        StateVector::from_raw(amp)
    }
}

/// Inverse circuit: `reverse(c).apply(c.apply(s)) == s`.
pub fn reverse(c: &Circuit) -> Circuit {
    let inv = c.relabel.as_ref().map(|pi| invert_perm(pi));
    let mut out = Circuit::new(c.width);
    for st in c.stages.iter().rev() {
        let gates: Vec<Gate> = st
            .iter()
            .map(|g| {
                let g = g.inverse();
                match &inv {
                    Some(iv) => g.remap(&|w| iv[w]),
                    None => g,
                }
            })
            .collect();
        out.stages.push(gates);
    }
    out.relabel = inv;
    out
}

fn check_perm(pi: &[usize], width: usize) -> Result<()> {
    if pi.len() != width {
        return Err(Error::DimensionMismatch { left: pi.len(), right: width });
    }
    let mut seen = vec![false; width];
    for &w in pi {
        if w >= width || seen[w] {
            return Err(invalid("relabel is not a permutation of the wires"));
        }
        seen[w] = true;
    }
    Ok(())
}

fn invert_perm(pi: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; pi.len()];
    for (w, &t) in pi.iter().enumerate() {
        inv[t] = w;
    }
    inv
}

fn relabel_amps(amp: &[Complex64], pi: &[usize]) -> Vec<Complex64> {
    let inv = invert_perm(pi);
    let src = |y: usize| -> usize {
        let mut x = 0;
        for (t, &w) in inv.iter().enumerate() {
            x |= ((y >> t) & 1) << w;
        }
        x
    };
    if amp.len() >= PAR_THRESHOLD {
        (0..amp.len()).into_par_iter().map(|y| amp[src(y)]).collect()
    } else {
        (0..amp.len()).map(|y| amp[src(y)]).collect()
    }
}

fn rotation_phase(k: u32, inverse: bool) -> Complex64 {
    let angle = std::f64::consts::TAU / 2f64.powi(k as i32);
    Complex64::from_polar(1.0, if inverse { -angle } else { angle })
}

fn phase_where(amp: &mut [Complex64], mask: usize, phase: Complex64) {
    let f = |(i, a): (usize, &mut Complex64)| {
        if i & mask == mask {
            *a *= phase;
        }
    };
    if amp.len() >= PAR_THRESHOLD {
        amp.par_iter_mut().enumerate().for_each(f);
    } else {
        amp.iter_mut().enumerate().for_each(f);
    }
}

fn apply_gate(g: &Gate, amp: &mut Vec<Complex64>) {
    match g {
        Gate::Hadamard(w) => {
            let stride = 1usize << w;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let f = |ch: &mut [Complex64]| {
                let (lo, hi) = ch.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * s;
                    *b = (x - y) * s;
                }
            };
            if amp.len() >= PAR_THRESHOLD {
                amp.par_chunks_mut(2 * stride).for_each(f);
            } else {
                amp.chunks_mut(2 * stride).for_each(f);
            }
        }
        Gate::Rotation { k, wire, inverse } => phase_where(amp, 1 << wire, rotation_phase(*k, *inverse)),
        Gate::ControlledRotation { k, control, target, inverse } => {
            phase_where(amp, (1 << control) | (1 << target), rotation_phase(*k, *inverse))
        }
        Gate::Cnot { control, target } => flip_where(amp, 1 << control, *target),
        Gate::Toffoli { c1, c2, target } => flip_where(amp, (1 << c1) | (1 << c2), *target),
        Gate::Permutation(p) => {
            let wires = p.wires();
            let mask: usize = wires.iter().map(|w| 1usize << w).sum();
            let gather = |i: usize| -> u64 {
                wires.iter().enumerate().map(|(b, &w)| (((i >> w) & 1) as u64) << b).sum()
            };
            let scatter = |v: u64| -> usize {
                wires.iter().enumerate().map(|(b, &w)| (((v >> b) & 1) as usize) << w).sum()
            };
            let src = |y: usize| (y & !mask) | scatter(p.backward(gather(y)));
            let out: Vec<Complex64> = if amp.len() >= PAR_THRESHOLD {
                (0..amp.len()).into_par_iter().map(|y| amp[src(y)]).collect()
            } else {
                (0..amp.len()).map(|y| amp[src(y)]).collect()
            };
            *amp = out;
        }
    }
}

fn flip_where(amp: &mut [Complex64], controls: usize, target: usize) {
    let t = 1usize << target;
    for i in 0..amp.len() {
        if i & t == 0 && i & controls == controls {
            amp.swap(i, i | t);
        }
    }
}

/// Arithmetic gadget kinds. Operands are listed in the order of `arith_gadget`'s registers.
#[derive(Debug, Clone, PartialEq)]
pub enum ArithKind {
    /// `|j⟩|k⟩ → |j⟩|k + j mod 2^{|k|}⟩`
    Add,
    /// `|j⟩|k⟩ → |j⟩|k − j mod 2^{|k|}⟩`
    Sub,
    /// `|j⟩|k⟩ → |j⟩|j + k mod N⟩` for `j, k < N`, identity elsewhere.
    AddMod(u64),
    SubMod(u64),
    /// `|j⟩|k⟩ → |⌊dj⌉ + k⟩` on the joint register, for `0 ≤ k < ⌊d(j+1)⌉ − ⌊dj⌉`.
    MulRound(f64),
    /// Inverse of `MulRound`.
    DivRound(f64),
    /// `|x⟩|0⟩ → |x⟩|x⟩`, realized as `|x⟩|y⟩ → |x⟩|y ⊕ x⟩`.
    Copy,
    /// `|x⟩|y⟩ → |x⟩|y ⊕ x⟩`
    XorInto,
    /// `|x⟩ → |x + c mod 2^{|x|}⟩`
    AddConst(u64),
}

/// `⌊x⌉ = floor(x + 1/2)`.
pub fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        1
    } else {
        64 - (n - 1).leading_zeros() as u64
    }
}

fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Builds the permutation gate of an arithmetic gadget over the given registers.
pub fn arith_gadget(kind: ArithKind, regs: &[Range<usize>]) -> Result<Gate> {
    for (i, a) in regs.iter().enumerate() {
        if a.is_empty() {
            return Err(invalid("empty operand register"));
        }
        for b in &regs[..i] {
            if a.start < b.end && b.start < a.end {
                return Err(Error::WireConflict("operand registers overlap".into()));
            }
        }
    }
    let need = |n: usize| -> Result<()> {
        if regs.len() != n {
            return Err(invalid(format!("{kind:?} takes {n} registers, got {}", regs.len())));
        }
        Ok(())
    };
    let regs_v = regs.to_vec();
    let lin = |n: usize| Cost { size: n as u64, depth: ceil_log2(n as u64) };
    let perm = match kind {
        ArithKind::Add | ArithKind::Sub => {
            need(2)?;
            let (a, b) = (regs[0].len(), regs[1].len());
            let (ma, mb) = (mask(a), mask(b));
            let sign = if kind == ArithKind::Add { 1 } else { -1i64 };
            let step = move |v: u64, s: i64| {
                let j = v & ma;
                let k = v >> a;
                let k2 = (k as i128 + s as i128 * j as i128).rem_euclid(mb as i128 + 1) as u64;
                j | (k2 << a)
            };
            let name = if sign == 1 { "add" } else { "sub" };
            Permutation::new(name, regs_v, move |v| step(v, sign), move |v| step(v, -sign), lin(a.max(b)))?
        }
        ArithKind::AddMod(n) | ArithKind::SubMod(n) => {
            need(2)?;
            let (a, b) = (regs[0].len(), regs[1].len());
            if n < 1 || n > mask(a).min(mask(b)) + 1 {
                return Err(invalid(format!("modulus {n} does not fit the registers")));
            }
            let ma = mask(a);
            let sign = if matches!(kind, ArithKind::AddMod(_)) { 1i128 } else { -1 };
            let step = move |v: u64, s: i128| {
                let j = v & ma;
                let k = v >> a;
                if j >= n || k >= n {
                    return v;
                }
                let k2 = (k as i128 + s * j as i128).rem_euclid(n as i128) as u64;
                j | (k2 << a)
            };
            let name = if sign == 1 { format!("add_mod({n})") } else { format!("sub_mod({n})") };
            Permutation::new(name, regs_v, move |v| step(v, sign), move |v| step(v, -sign), lin(a.max(b)))?
        }
        ArithKind::MulRound(d) | ArithKind::DivRound(d) => {
            need(2)?;
            if !(d > 1.0) || !d.is_finite() {
                return Err(invalid(format!("multiplier {d} must exceed 1")));
            }
            let bits = regs[0].len() + regs[1].len();
            if bits > 22 {
                return Err(invalid("mul/div gadget limited to 22 joint bits"));
            }
            let (fwd, bwd) = mul_round_tables(d, regs[0].len(), regs[1].len());
            let (fwd, bwd) = (Arc::new(fwd), Arc::new(bwd));
            let n = regs[0].len().max(regs[1].len()) as u64;
            let cost = Cost { size: n * ceil_log2(n) * ceil_log2(ceil_log2(n)), depth: ceil_log2(n) };
            let (f2, b2) = (fwd.clone(), bwd.clone());
            let p = Permutation::new(
                format!("mul_round({d})"),
                regs_v,
                move |v| f2[v as usize] as u64,
                move |v| b2[v as usize] as u64,
                cost,
            )?;
            if matches!(kind, ArithKind::DivRound(_)) {
                let mut q = p.inverse();
                q.name = format!("div_round({d})");
                q
            } else {
                p
            }
        }
        ArithKind::Copy | ArithKind::XorInto => {
            need(2)?;
            let (a, b) = (regs[0].len(), regs[1].len());
            if a != b {
                return Err(invalid("copy/xor registers must have equal width"));
            }
            let ma = mask(a);
            let f = move |v: u64| {
                let x = v & ma;
                let y = v >> a;
                x | ((y ^ x) << a)
            };
            let name = if kind == ArithKind::Copy { "copy" } else { "xor" };
            Permutation::new(name, regs_v, f, f, Cost { size: a as u64, depth: 1 })?
        }
        ArithKind::AddConst(c) => {
            need(1)?;
            let n = regs[0].len();
            let m = mask(n);
            let c = c & m;
            Permutation::new(
                format!("add_const({c})"),
                regs_v,
                move |v| v.wrapping_add(c) & m,
                move |v| v.wrapping_sub(c) & m,
                lin(n),
            )?
        }
    };
    Ok(Gate::Permutation(perm))
}

/// Lookup tables for the multiply-with-remainder bijection on `a + b` bits.
///
/// Valid pairs `(j, k)` with `k < ⌊d(j+1)⌉ − ⌊dj⌉` and `⌊dj⌉ + k < 2^{a+b}` map to
/// `⌊dj⌉ + k`. The remaining inputs fill the remaining outputs in increasing order.
fn mul_round_tables(d: f64, a: usize, b: usize) -> (Vec<u32>, Vec<u32>) {
    let size = 1usize << (a + b);
    let mut fwd = vec![u32::MAX; size];
    let mut bwd = vec![u32::MAX; size];
    for j in 0..(1u64 << a) {
        let base = round_half_up(d * j as f64);
        let gap = round_half_up(d * (j + 1) as f64) - base;
        for k in 0..(1u64 << b) {
            let x = base + k as i64;
            if (k as i64) < gap && (x as usize) < size {
                let v = (j | (k << a)) as usize;
                fwd[v] = x as u32;
                bwd[x as usize] = v as u32;
            }
        }
    }
    let free_out: Vec<u32> = (0..size as u32).filter(|&x| bwd[x as usize] == u32::MAX).collect();
    let free_in = (0..size).filter(|&v| fwd[v] == u32::MAX).collect::<Vec<_>>();
    for (v, x) in free_in.into_iter().zip(free_out) {
        fwd[v] = x;
        bwd[x as usize] = v as u32;
    }
    (fwd, bwd)
}
