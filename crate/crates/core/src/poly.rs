//! Sparse polynomials over a [`FieldCtx`] and their value tables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Polynomial stored as exponent → nonzero coefficient.
///
/// The polynomial does not own its field; every operation takes the
/// [`FieldCtx`] it was built for.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    terms: BTreeMap<u64, FieldElement>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        SparsePoly::monomial(1, FieldElement::ONE)
    }

    pub fn monomial(exp: u64, coeff: FieldElement) -> Self {
        let mut p = SparsePoly::zero();
        p.set(exp, coeff);
        p
    }

    pub fn constant(c: FieldElement) -> Self {
        SparsePoly::monomial(0, c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u64, FieldElement)>, ctx: &FieldCtx) -> Self {
        let mut p = SparsePoly::zero();
        for (e, c) in terms {
            p.add_term(ctx, e, c);
        }
        p
    }

    fn set(&mut self, exp: u64, coeff: FieldElement) {
        if coeff.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, coeff);
        }
    }

    /// Adds `coeff·x^exp`, dropping the term if it cancels.
    pub fn add_term(&mut self, ctx: &FieldCtx, exp: u64, coeff: FieldElement) {
        let cur = self.coeff(exp);
        self.set(exp, ctx.add(cur, coeff));
    }

    pub fn coeff(&self, exp: u64) -> FieldElement {
        self.terms.get(&exp).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u64, FieldElement)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// Evaluates `Σ coeff·a^exp`.
    ///
    /// Powers are reached by walking the exponents in ascending order and
    /// raising `a` to each gap by square-and-multiply; equal consecutive gaps
    /// (the families are arithmetic progressions) reuse the previous power.
    pub fn eval(&self, ctx: &FieldCtx, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut power = FieldElement::ONE;
        let mut prev = 0;
        let mut gap_cache: Option<(u64, FieldElement)> = None;
        for (&e, &c) in &self.terms {
            let gap = e - prev;
            if gap > 0 {
                let step = match gap_cache {
                    Some((g, v)) if g == gap => v,
                    _ => {
                        let v = ctx.pow_u64(a, gap);
                        gap_cache = Some((gap, v));
                        v
                    }
                };
                power = ctx.mul(power, step);
            }
            prev = e;
            acc = ctx.add(acc, ctx.mul(c, power));
        }
        acc
    }

    /// Term-by-term evaluation with an independent power per term.
    pub fn eval_per_term(&self, ctx: &FieldCtx, a: FieldElement) -> FieldElement {
        self.terms.iter().fold(FieldElement::ZERO, |acc, (&e, &c)| {
            ctx.add(acc, ctx.mul(c, ctx.pow_u64(a, e)))
        })
    }

    pub fn add(&self, ctx: &FieldCtx, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(ctx, e, c);
        }
        out
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(ctx, e, ctx.neg(c));
        }
        out
    }

    pub fn scale(&self, ctx: &FieldCtx, b: FieldElement) -> SparsePoly {
        if b.is_zero() {
            return SparsePoly::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(&e, &c)| (e, ctx.mul(b, c))).collect(),
        }
    }

    /// Multiplies by `x^shift`.
    pub fn shift(&self, shift: u64) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(&e, &c)| (e + shift, c)).collect(),
        }
    }

    /// `b·f(x) + k·x`.
    pub fn linear_mix(&self, ctx: &FieldCtx, b: FieldElement, k: FieldElement) -> SparsePoly {
        let mut out = self.scale(ctx, b);
        out.add_term(ctx, 1, k);
        out
    }

    /// Rewrites exponents `e ≥ Q` as `((e − 1) mod (Q − 1)) + 1`, which leaves
    /// the function on GF(Q) unchanged.
    pub fn reduce_exponents(&self, ctx: &FieldCtx) -> SparsePoly {
        let q = ctx.order() as u64;
        let mut out = SparsePoly::zero();
        for (e, c) in self.terms() {
            let e = if e >= q { (e - 1) % (q - 1) + 1 } else { e };
            out.add_term(ctx, e, c);
        }
        out
    }

    pub fn value_table(&self, ctx: &FieldCtx) -> ValueTable {
        ValueTable(ctx.elements().map(|a| self.eval(ctx, a).index()).collect())
    }

    pub fn parse(s: &str, ctx: &FieldCtx) -> Result<SparsePoly> {
        let raw: RawSparse = s.parse()?;
        let mut out = SparsePoly::zero();
        for (e, c) in raw.0 {
            let c = ctx.element(c)?;
            out.add_term(ctx, e, c);
        }
        Ok(out)
    }
}

/// `"exp:coeffIndex"` pairs, highest exponent first.
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}:{c}")?;
        }
        Ok(())
    }
}

struct RawSparse(Vec<(u64, u32)>);

impl FromStr for RawSparse {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(RawSparse(Vec::new()));
        }
        s.split(',')
            .map(|pair| {
                let (e, c) = pair
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("term '{pair}' is not exp:coeff")))?;
                let e = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent '{e}'")))?;
                let c = c.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient '{c}'")))?;
                Ok((e, c))
            })
            .collect::<Result<_>>()
            .map(RawSparse)
    }
}

/// Images of every field element: position `i` holds the index of `f(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ValueTable(Vec<u32>);

impl ValueTable {
    pub fn new(images: Vec<u32>, ctx: &FieldCtx) -> Result<Self> {
        if images.len() != ctx.order() as usize {
            return param(format!("table has {} entries, field has {}", images.len(), ctx.order()));
        }
        if let Some(&bad) = images.iter().find(|&&v| v >= ctx.order()) {
            return param(format!("table entry {bad} is not an element index"));
        }
        Ok(ValueTable(images))
    }

    pub fn identity(len: usize) -> Self {
        ValueTable((0..len as u32).collect())
    }

    pub(crate) fn from_vec(images: Vec<u32>) -> Self {
        ValueTable(images)
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Pointwise `b·f(a) + k·a`, the table of [`SparsePoly::linear_mix`].
    pub fn linear_mix(&self, ctx: &FieldCtx, b: FieldElement, k: FieldElement) -> ValueTable {
        ValueTable(
            ctx.elements()
                .zip(&self.0)
                .map(|(a, &fa)| {
                    let fa = ctx.element(fa).expect("table entries are element indices");
                    ctx.add(ctx.mul(b, fa), ctx.mul(k, a)).index()
                })
                .collect(),
        )
    }

    /// Inverse table, when this table is a permutation.
    pub fn inverse(&self) -> Option<ValueTable> {
        let mut inv = vec![u32::MAX; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            let slot = inv.get_mut(v as usize)?;
            if *slot != u32::MAX {
                return None;
            }
            *slot = i as u32;
        }
        Some(ValueTable(inv))
    }
}

/// `f ∘ g`: apply `g` first, then `f`.
pub fn compose_tables(f: &ValueTable, g: &ValueTable) -> Result<ValueTable> {
    if f.len() != g.len() {
        return param(format!("cannot compose tables of length {} and {}", f.len(), g.len()));
    }
    Ok(ValueTable(g.0.iter().map(|&i| f.0[i as usize]).collect()))
}
