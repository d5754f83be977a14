//! The additive and multiplicative families over an extension GF(q^n)/GF(q):
//!
//! ```text
//! f_{c+}(x) = x + c · Σ_{j=1..m} x^{j(q-1)}
//! f_{c*}(x) = x + c · Σ_{j=1..m} x^{j(q-1)+1}        m = q + q^2 + ... + q^{n-1}
//! ```
//!
//! Both fix the base field pointwise. Off the base field `f_{c+}` translates
//! by `-c` and `f_{c*}` multiplies by `1 - c`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::gf::{FieldCtx, FieldElement, FieldSpec};
use crate::poly::{SparsePoly, ValueTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Plus,
    Star,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Plus => "plus",
            Flavor::Star => "star",
        }
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Flavor::Plus),
            "star" | "*" => Ok(Flavor::Star),
            _ => Err(Error::Parse(format!("unknown family flavor '{s}'"))),
        }
    }
}

/// `q + q^2 + ... + q^{n-1}`.
pub fn family_m(q: u64, n: u32) -> u64 {
    (1..n).map(|i| q.pow(i)).sum()
}

/// GF(q^n) viewed as an extension of its subfield GF(q), `q = p^s`.
///
/// The big field is a single [`FieldCtx`] of degree `s·n`; the base field is
/// recognised through the Frobenius test `a^q = a`.
#[derive(Clone, Debug)]
pub struct Tower {
    ctx: Arc<FieldCtx>,
    s: u32,
    n: u32,
    q: u64,
    m: u64,
}

impl Tower {
    /// Builds GF(p^{s·n}) with its default modulus.
    pub fn new(p: u32, s: u32, n: u32) -> Result<Self> {
        if s == 0 {
            return param("base degree s must be at least 1");
        }
        if n < 2 {
            return param("extension degree n must be at least 2");
        }
        check_odd(p)?;
        let ctx = FieldCtx::with_degree(p, s * n)?;
        Tower::over(Arc::new(ctx), s)
    }

    /// Uses an existing field context; `s` must be a proper divisor of its degree.
    pub fn over(ctx: Arc<FieldCtx>, s: u32) -> Result<Self> {
        check_odd(ctx.characteristic())?;
        let deg = ctx.degree();
        if s == 0 || deg % s != 0 || deg / s < 2 {
            return param(format!("GF({}^{deg}) is not a degree >= 2 extension of a degree-{s} subfield", ctx.characteristic()));
        }
        let n = deg / s;
        let q = (ctx.characteristic() as u64).pow(s);
        Ok(Tower { ctx, s, n, q, m: family_m(q, n) })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn shared_ctx(&self) -> Arc<FieldCtx> {
        self.ctx.clone()
    }

    pub fn characteristic(&self) -> u32 {
        self.ctx.characteristic()
    }

    pub fn base_degree(&self) -> u32 {
        self.s
    }

    pub fn extension_degree(&self) -> u32 {
        self.n
    }

    /// Order `q` of the base field.
    pub fn base_order(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn in_base(&self, a: FieldElement) -> bool {
        self.ctx.is_in_subfield(a, self.s)
    }

    pub fn base_elements(&self) -> Vec<FieldElement> {
        self.ctx
            .enumerate_subfield(self.s)
            .expect("base degree divides the field degree")
    }

    fn check_base(&self, c: FieldElement) -> Result<()> {
        if c.index() >= self.ctx.order() || !self.in_base(c) {
            return param(format!("parameter {c} does not lie in the base field GF({})", self.q));
        }
        Ok(())
    }

    /// `f_{c+}`; exactly `x` when `c = 0`.
    pub fn f_plus(&self, c: FieldElement) -> Result<SparsePoly> {
        self.check_base(c)?;
        let step = self.q - 1;
        Ok(self.series(c, (1..=self.m).map(|j| j * step)))
    }

    /// `f_{c*}`; `c = 1` is allowed here even though it is not a permutation.
    pub fn f_star(&self, c: FieldElement) -> Result<SparsePoly> {
        self.check_base(c)?;
        let step = self.q - 1;
        Ok(self.series(c, (1..=self.m).map(|j| j * step + 1)))
    }

    fn series(&self, c: FieldElement, exps: impl Iterator<Item = u64>) -> SparsePoly {
        let mut f = SparsePoly::x();
        if !c.is_zero() {
            for e in exps {
                f.add_term(&self.ctx, e, c);
            }
        }
        f
    }

    pub fn build(&self, flavor: Flavor, c: FieldElement) -> Result<SparsePoly> {
        match flavor {
            Flavor::Plus => self.f_plus(c),
            Flavor::Star => self.f_star(c),
        }
    }

    /// Piecewise form of `f_{c+}`: identity on the base field, `a - c` elsewhere.
    pub fn closed_eval_plus(&self, c: FieldElement, a: FieldElement) -> Result<FieldElement> {
        self.check_base(c)?;
        Ok(if self.in_base(a) { a } else { self.ctx.sub(a, c) })
    }

    /// Piecewise form of `f_{c*}`: identity on the base field, `(1 - c)·a` elsewhere.
    pub fn closed_eval_star(&self, c: FieldElement, a: FieldElement) -> Result<FieldElement> {
        self.check_base(c)?;
        Ok(if self.in_base(a) {
            a
        } else {
            self.ctx.mul(self.ctx.sub(FieldElement::ONE, c), a)
        })
    }

    pub fn closed_eval(&self, flavor: Flavor, c: FieldElement, a: FieldElement) -> Result<FieldElement> {
        match flavor {
            Flavor::Plus => self.closed_eval_plus(c, a),
            Flavor::Star => self.closed_eval_star(c, a),
        }
    }

    /// Value table of the piecewise form.
    pub fn closed_table(&self, flavor: Flavor, c: FieldElement) -> Result<ValueTable> {
        self.check_base(c)?;
        let images = self
            .ctx
            .elements()
            .map(|a| self.closed_eval(flavor, c, a).map(FieldElement::index))
            .collect::<Result<Vec<_>>>()?;
        Ok(ValueTable::from_vec(images))
    }

    /// `Σ_{j=1..m} a^{j(q-1)}`, summed term by term.
    pub fn geometric_sum(&self, a: FieldElement) -> FieldElement {
        let step = self.ctx.pow_u64(a, self.q - 1);
        let mut term = FieldElement::ONE;
        let mut acc = FieldElement::ZERO;
        for _ in 0..self.m {
            term = self.ctx.mul(term, step);
            acc = self.ctx.add(acc, term);
        }
        acc
    }

    /// Whether `b` lies in some proper subfield other than the prime field.
    pub fn in_middle_subfield(&self, b: FieldElement) -> bool {
        let deg = self.ctx.degree();
        (2..deg)
            .filter(|d| deg % d == 0)
            .any(|d| self.ctx.is_in_subfield(b, d))
    }

    /// Whether `b·f_{c±}` is guaranteed to be complete to level `p - 1`.
    ///
    /// Requires `b` in a middle subfield and outside the prime field, `b` in
    /// the base field so that `bc/(b+k)` stays a family parameter, and for
    /// the star family `b(1 - c) + k ≠ 0` for every integer `k`.
    pub fn maximality_guaranteed(&self, flavor: Flavor, b: FieldElement, c: FieldElement) -> bool {
        let ctx = &self.ctx;
        let p = ctx.characteristic();
        let b_ok = b.index() >= p && self.in_middle_subfield(b) && self.in_base(b) && self.in_base(c);
        match flavor {
            Flavor::Plus => b_ok,
            Flavor::Star => {
                // b(1 - c) must avoid the prime field, zero included
                b_ok && ctx.mul(b, ctx.sub(FieldElement::ONE, c)).index() >= p
            }
        }
    }

    /// `b·f_{c±}` with its maximality flag.
    pub fn build_scaled(&self, flavor: Flavor, b: FieldElement, c: FieldElement) -> Result<ScaledMember> {
        if b.is_zero() {
            return param("scale b must be nonzero");
        }
        self.ctx.element(b.index())?;
        let poly = self.build(flavor, c)?.linear_mix(&self.ctx, b, FieldElement::ZERO);
        Ok(ScaledMember {
            poly,
            maximality_guaranteed: self.maximality_guaranteed(flavor, b, c),
        })
    }
}

fn check_odd(p: u32) -> Result<()> {
    if p < 3 || p % 2 == 0 {
        return param(format!("families need an odd prime characteristic, got {p}"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMember {
    pub poly: SparsePoly,
    pub maximality_guaranteed: bool,
}

/// One family member as named on the command line,
/// e.g. `plus:p=5,s=1,n=2,c=2` or `star:p=7,s=1,n=2,c=6,b=1`.
/// `c` and `b` are element indices of GF(p^{s·n}).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub flavor: Flavor,
    pub p: u32,
    pub s: u32,
    pub n: u32,
    pub c: u32,
    pub b: Option<u32>,
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:p={},s={},n={},c={}", self.flavor.name(), self.p, self.s, self.n, self.c)?;
        if let Some(b) = self.b {
            write!(f, ",b={b}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilyParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (flavor, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("descriptor '{s}' is missing 'flavor:'")))?;
        let flavor: Flavor = flavor.parse()?;
        let (mut p, mut deg_s, mut n, mut c, mut b) = (None, None, None, None, None);
        for kv in rest.split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("'{kv}' is not key=value")))?;
            let v: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad value in '{kv}'")))?;
            let slot = match k.trim() {
                "p" => &mut p,
                "s" => &mut deg_s,
                "n" => &mut n,
                "c" => &mut c,
                "b" => &mut b,
                other => return Err(Error::Parse(format!("unknown descriptor key '{other}'"))),
            };
            if slot.replace(v).is_some() {
                return Err(Error::Parse(format!("duplicate key in '{kv}'")));
            }
        }
        let need = |v: Option<u32>, k: &str| v.ok_or_else(|| Error::Parse(format!("descriptor is missing '{k}='")));
        Ok(FamilyParams {
            flavor,
            p: need(p, "p")?,
            s: need(deg_s, "s")?,
            n: need(n, "n")?,
            c: need(c, "c")?,
            b,
        })
    }
}

/// A [`FamilyParams`] resolved against a concrete field.
#[derive(Clone, Debug)]
pub struct Family {
    params: FamilyParams,
    tower: Tower,
    c: FieldElement,
    b: FieldElement,
}

impl Family {
    pub fn new(params: FamilyParams) -> Result<Self> {
        let tower = Tower::new(params.p, params.s, params.n)?;
        Family::with_tower(params, tower)
    }

    /// Builds the big field from an explicit modulus instead of the default.
    pub fn with_modulus(params: FamilyParams, irr: Vec<u32>) -> Result<Self> {
        check_odd(params.p)?;
        let spec = FieldSpec::with_modulus(params.p, irr)?;
        if spec.m != params.s * params.n {
            return param(format!("modulus has degree {}, descriptor needs {}", spec.m, params.s * params.n));
        }
        let tower = Tower::over(Arc::new(FieldCtx::new(spec)?), params.s)?;
        Family::with_tower(params, tower)
    }

    pub fn with_tower(params: FamilyParams, tower: Tower) -> Result<Self> {
        let ctx = tower.ctx();
        if ctx.characteristic() != params.p
            || tower.base_degree() != params.s
            || tower.extension_degree() != params.n
        {
            return param("tower does not match the descriptor");
        }
        let c = ctx.element(params.c)?;
        tower.check_base(c)?;
        let b = match params.b {
            Some(0) => return param("scale b must be nonzero"),
            Some(b) => ctx.element(b)?,
            None => FieldElement::ONE,
        };
        Ok(Family { params, tower, c, b })
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.tower.ctx()
    }

    pub fn flavor(&self) -> Flavor {
        self.params.flavor
    }

    pub fn c(&self) -> FieldElement {
        self.c
    }

    pub fn b(&self) -> FieldElement {
        self.b
    }

    /// `b·f_{c±}` (just `f_{c±}` when no scale was given).
    pub fn polynomial(&self) -> SparsePoly {
        self.scaled().poly
    }

    pub fn scaled(&self) -> ScaledMember {
        self.tower
            .build_scaled(self.params.flavor, self.b, self.c)
            .expect("parameters validated at construction")
    }

    /// Piecewise evaluation of `b·f_{c±}`.
    pub fn closed_eval(&self, a: FieldElement) -> FieldElement {
        let v = self
            .tower
            .closed_eval(self.params.flavor, self.c, a)
            .expect("parameters validated at construction");
        self.ctx().mul(self.b, v)
    }
}
