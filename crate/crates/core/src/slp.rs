//! Straight-line programs for evaluating a polynomial system and its Jacobian.
//!
//! [`compile_horner`] turns every polynomial into an extended Horner form,
//! recursively splitting `p = q·x_k + r` along a chosen variable order, and
//! emits the result as a branch-free list of instructions. Identical
//! instructions are shared through hash-consing, so common subexpressions
//! (within one polynomial or across the system) are evaluated once.
//! [`attach_jacobian`] extends the program with forward-mode derivative
//! instructions for every partial derivative.
//!
//! Each instruction writes the slot equal to its own index and only reads
//! earlier slots. Evaluation is a single pass over a caller-owned
//! [`SlpWorkspace`].

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::PolynomialSystem;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SlpError {
    #[error("expected {expected} inputs, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value produced during evaluation")]
    Overflow,
}

pub type Slot = u32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instruction {
    LoadConst(Complex64),
    LoadInput(u32),
    Add(Slot, Slot),
    Sub(Slot, Slot),
    Mul(Slot, Slot),
}

impl Instruction {
    fn operand_slots(&self) -> [Option<Slot>; 2] {
        match *self {
            Instruction::LoadConst(_) | Instruction::LoadInput(_) => [None, None],
            Instruction::Add(a, b) | Instruction::Sub(a, b) | Instruction::Mul(a, b) => [Some(a), Some(b)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Const(u64, u64),
    Input(u32),
    Add(Slot, Slot),
    Sub(Slot, Slot),
    Mul(Slot, Slot),
}

fn key_of(ins: &Instruction) -> Key {
    match *ins {
        // Normalise -0.0 so that it shares a slot with 0.0.
        Instruction::LoadConst(c) => Key::Const((c.re + 0.0).to_bits(), (c.im + 0.0).to_bits()),
        Instruction::LoadInput(i) => Key::Input(i),
        Instruction::Add(a, b) => Key::Add(a.min(b), a.max(b)),
        Instruction::Sub(a, b) => Key::Sub(a, b),
        Instruction::Mul(a, b) => Key::Mul(a.min(b), a.max(b)),
    }
}

/// Hash-consing program builder.
#[derive(Debug, Default)]
struct Builder {
    code: Vec<Instruction>,
    seen: HashMap<Key, Slot>,
}

impl Builder {
    fn push(&mut self, ins: Instruction) -> Slot {
        let key = key_of(&ins);
        if let Some(&s) = self.seen.get(&key) {
            return s;
        }
        let slot = Slot::try_from(self.code.len()).expect("program exceeds u32 slots");
        for o in ins.operand_slots().into_iter().flatten() {
            assert!(o < slot, "instruction reads a later slot");
        }
        self.code.push(ins);
        self.seen.insert(key, slot);
        slot
    }

    fn constant(&mut self, c: Complex64) -> Slot {
        self.push(Instruction::LoadConst(c))
    }

    fn input(&mut self, i: usize) -> Slot {
        self.push(Instruction::LoadInput(i as u32))
    }

    fn add(&mut self, a: Slot, b: Slot) -> Slot {
        self.push(Instruction::Add(a, b))
    }

    fn sub(&mut self, a: Slot, b: Slot) -> Slot {
        self.push(Instruction::Sub(a, b))
    }

    fn mul(&mut self, a: Slot, b: Slot) -> Slot {
        self.push(Instruction::Mul(a, b))
    }
}

/// A compiled system: value outputs and, once [`attach_jacobian`] has run,
/// row-major Jacobian outputs (`jacobian_outputs[i * n + j]` is ∂fᵢ/∂xⱼ).
#[derive(Debug, Clone, PartialEq)]
pub struct SlProgram {
    instructions: Vec<Instruction>,
    input_arity: usize,
    value_outputs: Vec<Slot>,
    jacobian_outputs: Vec<Slot>,
}

/// Per-caller scratch space for [`SlProgram::evaluate_into`].
#[derive(Debug, Clone, Default)]
pub struct SlpWorkspace {
    slots: Vec<Complex64>,
}

impl SlpWorkspace {
    pub fn new(program: &SlProgram) -> Self {
        SlpWorkspace { slots: vec![Complex64::new(0.0, 0.0); program.instructions.len()] }
    }
}

/// Counts of each opcode in a program.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub consts: usize,
    pub inputs: usize,
    pub adds: usize,
    pub subs: usize,
    pub muls: usize,
}

impl OpCounts {
    pub fn total(&self) -> usize {
        self.consts + self.inputs + self.adds + self.subs + self.muls
    }

    /// Arithmetic instructions only (loads excluded).
    pub fn arithmetic(&self) -> usize {
        self.adds + self.subs + self.muls
    }
}

impl SlProgram {
    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn input_arity(&self) -> usize {
        self.input_arity
    }

    pub fn value_outputs(&self) -> &[Slot] {
        &self.value_outputs
    }

    pub fn jacobian_outputs(&self) -> &[Slot] {
        &self.jacobian_outputs
    }

    pub fn has_jacobian(&self) -> bool {
        !self.jacobian_outputs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn op_counts(&self) -> OpCounts {
        let mut c = OpCounts::default();
        for ins in &self.instructions {
            match ins {
                Instruction::LoadConst(_) => c.consts += 1,
                Instruction::LoadInput(_) => c.inputs += 1,
                Instruction::Add(..) => c.adds += 1,
                Instruction::Sub(..) => c.subs += 1,
                Instruction::Mul(..) => c.muls += 1,
            }
        }
        c
    }

    /// Checks that every instruction reads only earlier slots and every
    /// output names a written slot.
    pub fn validate(&self) -> bool {
        let ordered = self.instructions.iter().enumerate().all(|(k, ins)| {
            let in_range = match ins {
                Instruction::LoadInput(i) => (*i as usize) < self.input_arity,
                _ => true,
            };
            in_range && ins.operand_slots().iter().flatten().all(|&s| (s as usize) < k)
        });
        let outputs = self
            .value_outputs
            .iter()
            .chain(&self.jacobian_outputs)
            .all(|&s| (s as usize) < self.instructions.len());
        ordered && outputs
    }

    /// Runs the program once. `values` receives the system values and, when
    /// the Jacobian is attached and `jacobian` is non-empty, `jacobian`
    /// receives the row-major Jacobian.
    pub fn evaluate_into(
        &self,
        x: &[Complex64],
        ws: &mut SlpWorkspace,
        values: &mut [Complex64],
        jacobian: &mut [Complex64],
    ) -> Result<(), SlpError> {
        if x.len() != self.input_arity {
            return Err(SlpError::DimensionMismatch { expected: self.input_arity, got: x.len() });
        }
        if ws.slots.len() != self.instructions.len() {
            ws.slots.resize(self.instructions.len(), Complex64::new(0.0, 0.0));
        }
        let s = &mut ws.slots;
        for (k, ins) in self.instructions.iter().enumerate() {
            s[k] = match *ins {
                Instruction::LoadConst(c) => c,
                Instruction::LoadInput(i) => x[i as usize],
                Instruction::Add(a, b) => s[a as usize] + s[b as usize],
                Instruction::Sub(a, b) => s[a as usize] - s[b as usize],
                Instruction::Mul(a, b) => s[a as usize] * s[b as usize],
            };
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        for (v, &slot) in values.iter_mut().zip(&self.value_outputs) {
            *v = s[slot as usize];
            if !finite(v) {
                return Err(SlpError::Overflow);
            }
        }
        if !jacobian.is_empty() {
            for (v, &slot) in jacobian.iter_mut().zip(&self.jacobian_outputs) {
                *v = s[slot as usize];
                if !finite(v) {
                    return Err(SlpError::Overflow);
                }
            }
        }
        Ok(())
    }

    /// Allocating convenience wrapper around [`evaluate_into`](Self::evaluate_into).
    /// The Jacobian is empty if none is attached.
    pub fn evaluate(&self, x: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>), SlpError> {
        let mut ws = SlpWorkspace::new(self);
        let mut values = vec![Complex64::new(0.0, 0.0); self.value_outputs.len()];
        let mut jac = vec![Complex64::new(0.0, 0.0); self.jacobian_outputs.len()];
        self.evaluate_into(x, &mut ws, &mut values, &mut jac)?;
        Ok((values, jac))
    }

    /// Text listing, one `slot := op(args)` line per instruction followed by
    /// the output map.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, ins) in self.instructions.iter().enumerate() {
            let rhs = match ins {
                Instruction::LoadConst(c) => format!("const({:e}{:+e}i)", c.re, c.im),
                Instruction::LoadInput(i) => format!("input({i})"),
                Instruction::Add(a, b) => format!("add(s{a}, s{b})"),
                Instruction::Sub(a, b) => format!("sub(s{a}, s{b})"),
                Instruction::Mul(a, b) => format!("mul(s{a}, s{b})"),
            };
            let _ = writeln!(out, "s{k} := {rhs}");
        }
        for (i, s) in self.value_outputs.iter().enumerate() {
            let _ = writeln!(out, "value[{i}] = s{s}");
        }
        let n = self.input_arity;
        for (k, s) in self.jacobian_outputs.iter().enumerate() {
            let _ = writeln!(out, "jacobian[{}][{}] = s{s}", k / n, k % n);
        }
        out
    }
}

/// Variables sorted by how many terms of the system they occur in, most
/// frequent first; ties keep the declaration order.
pub fn frequency_order(sys: &PolynomialSystem) -> Vec<usize> {
    let n = sys.nvars();
    let mut counts = vec![0usize; n];
    for p in sys.polys() {
        for (m, _) in p.terms() {
            for (k, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    counts[k] += 1;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    order
}

fn horner(b: &mut Builder, terms: Vec<(Vec<u32>, Complex64)>, order: &[usize]) -> Slot {
    if terms.is_empty() {
        return b.constant(Complex64::new(0.0, 0.0));
    }
    let split = order.iter().copied().find(|&v| terms.iter().any(|(e, _)| e[v] > 0));
    let Some(v) = split else {
        // Only the constant term is left.
        let c = terms.iter().map(|(_, c)| *c).sum();
        return b.constant(c);
    };
    let (mut quotient, remainder): (Vec<_>, Vec<_>) = terms.into_iter().partition(|(e, _)| e[v] > 0);
    for (e, _) in quotient.iter_mut() {
        e[v] -= 1;
    }
    let q = horner(b, quotient, order);
    let x = b.input(v);
    let qx = b.mul(q, x);
    if remainder.is_empty() {
        qx
    } else {
        let r = horner(b, remainder, order);
        b.add(qx, r)
    }
}

/// Compiles each polynomial of `sys` into extended Horner form using
/// `var_order` (a permutation of variable indices) to pick split variables.
///
/// Panics if `var_order` is not a permutation of `0..sys.nvars()`.
pub fn compile_horner(sys: &PolynomialSystem, var_order: &[usize]) -> SlProgram {
    let n = sys.nvars();
    let mut check = var_order.to_vec();
    check.sort_unstable();
    assert!(check.iter().copied().eq(0..n), "var_order must be a permutation");

    let mut b = Builder::default();
    let value_outputs = sys
        .polys()
        .iter()
        .map(|p| {
            let terms = p.terms().map(|(m, c)| (m.exponents().to_vec(), *c)).collect();
            horner(&mut b, terms, var_order)
        })
        .collect();
    SlProgram { instructions: b.code, input_arity: n, value_outputs, jacobian_outputs: Vec::new() }
}

/// Sparse derivative of one slot: `(variable, slot)` pairs in variable order.
type Tangent = Vec<(u32, Slot)>;

/// Extends `slp` with forward-mode derivative instructions so that it also
/// outputs every ∂fᵢ/∂xⱼ. Structurally zero partials point at a shared zero
/// constant; multiplications by the unit constant are elided.
pub fn attach_jacobian(slp: &SlProgram) -> SlProgram {
    let n = slp.input_arity;
    let mut b = Builder::default();
    for ins in &slp.instructions {
        let s = b.push(*ins);
        debug_assert_eq!(s as usize + 1, b.code.len());
    }
    let one = b.constant(Complex64::new(1.0, 0.0));
    let mut tangents: Vec<Tangent> = Vec::with_capacity(slp.instructions.len());

    let mul_by = |b: &mut Builder, d: Slot, other: Slot| -> Slot {
        if d == one {
            other
        } else if other == one {
            d
        } else {
            b.mul(d, other)
        }
    };

    for ins in &slp.instructions {
        let t: Tangent = match *ins {
            Instruction::LoadConst(_) => Vec::new(),
            Instruction::LoadInput(i) => vec![(i, one)],
            Instruction::Add(x, y) => merge(&mut b, &tangents[x as usize], &tangents[y as usize], false),
            Instruction::Sub(x, y) => merge(&mut b, &tangents[x as usize], &tangents[y as usize], true),
            Instruction::Mul(x, y) => {
                // d(xy) = dx·y + x·dy
                let left: Tangent = tangents[x as usize]
                    .clone()
                    .into_iter()
                    .map(|(v, d)| (v, mul_by(&mut b, d, y)))
                    .collect();
                let right: Tangent = tangents[y as usize]
                    .clone()
                    .into_iter()
                    .map(|(v, d)| (v, mul_by(&mut b, d, x)))
                    .collect();
                merge(&mut b, &left, &right, false)
            }
        };
        tangents.push(t);
    }

    let zero = if slp.value_outputs.iter().any(|&s| tangents[s as usize].len() < n) {
        Some(b.constant(Complex64::new(0.0, 0.0)))
    } else {
        None
    };
    let mut jacobian_outputs = Vec::with_capacity(slp.value_outputs.len() * n);
    for &s in &slp.value_outputs {
        let t = &tangents[s as usize];
        for j in 0..n as u32 {
            let slot = t
                .iter()
                .find(|(v, _)| *v == j)
                .map(|(_, d)| *d)
                .or(zero)
                .expect("zero slot exists for missing partials");
            jacobian_outputs.push(slot);
        }
    }
    SlProgram {
        instructions: b.code,
        input_arity: n,
        value_outputs: slp.value_outputs.clone(),
        jacobian_outputs,
    }
}

fn merge(b: &mut Builder, x: &Tangent, y: &Tangent, subtract: bool) -> Tangent {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let mut neg_zero: Option<Slot> = None;
    while i < x.len() || j < y.len() {
        let vx = x.get(i).map(|p| p.0);
        let vy = y.get(j).map(|p| p.0);
        match (vx, vy) {
            (Some(a), Some(c)) if a == c => {
                let s = if subtract { b.sub(x[i].1, y[j].1) } else { b.add(x[i].1, y[j].1) };
                out.push((a, s));
                i += 1;
                j += 1;
            }
            (Some(a), vy) if vy.is_none_or(|c| a < c) => {
                out.push(x[i]);
                i += 1;
            }
            _ => {
                let d = y[j].1;
                let s = if subtract {
                    let z = *neg_zero.get_or_insert_with(|| b.constant(Complex64::new(0.0, 0.0)));
                    b.sub(z, d)
                } else {
                    d
                };
                out.push((y[j].0, s));
                j += 1;
            }
        }
    }
    out
}

/// Compiles `sys` with the frequency variable order and attaches the Jacobian.
pub fn compile_system(sys: &PolynomialSystem) -> SlProgram {
    attach_jacobian(&compile_horner(sys, &frequency_order(sys)))
}
