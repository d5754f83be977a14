//! Arithmetic in GF(p^m) using a polynomial basis over the prime field.
//!
//! Elements are addressed by their canonical index `Σ coeffs[i]·p^i`, where
//! `coeffs[i]` is the coefficient of the i-th power of the basis element.
//! Indices `0..p` are exactly the prime subfield, with index `k` standing for
//! the integer `k`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::zpoly;

/// Largest field order accepted by [`FieldCtx::new`].
pub const MAX_FIELD_ORDER: u32 = 1 << 20;

/// Fields up to this order get discrete-log tables for multiplication.
pub const LOG_TABLE_LIMIT: u32 = 1 << 16;

const MAX_DEGREE: usize = 20;

/// An element of some [`FieldCtx`], stored as its canonical index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, ascending primes with multiplicity.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Splits a prime power `q = p^m` into `(p, m)`.
pub fn split_prime_power(q: u64) -> Result<(u32, u32)> {
    match factorize(q).as_slice() {
        [(p, m)] => Ok((*p as u32, *m)),
        _ => param(format!("{q} is not a prime power")),
    }
}

fn checked_order(p: u32, m: u32) -> Option<u64> {
    (p as u64).checked_pow(m)
}

/// Searches for the monic irreducible polynomial of degree `m` over GF(p)
/// whose non-leading coefficients, read as base-p digits constant-first,
/// form the smallest integer.
pub fn find_irreducible(p: u32, m: u32) -> Result<Vec<u32>> {
    if !is_prime(p as u64) {
        return param(format!("characteristic {p} is not prime"));
    }
    if m == 0 {
        return param("extension degree must be at least 1");
    }
    let limit = checked_order(p, m)
        .ok_or_else(|| Error::Parameter(format!("{p}^{m} does not fit in 64 bits")))?;
    for value in 0..limit {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut v = value;
        for _ in 0..m {
            coeffs.push((v % p as u64) as u32);
            v /= p as u64;
        }
        coeffs.push(1);
        if rabin_check(p, &coeffs).is_ok() {
            return Ok(coeffs);
        }
    }
    unreachable!("GF({p}) has irreducible polynomials of every degree")
}

/// Rabin's test: `x^(p^m) ≡ x (mod f)` and `gcd(x^(p^(m/r)) − x, f) = 1` for
/// every prime `r | m`. On failure returns the reason, naming a factor when
/// one is found.
fn rabin_check(p: u32, f: &[u32]) -> std::result::Result<(), String> {
    let m = f.len() - 1;
    if m == 1 {
        return Ok(());
    }
    let x = vec![0, 1];
    // frob[k] = x^(p^k) mod f
    let mut frob = vec![zpoly::rem(&x, f, p)];
    for k in 0..m {
        let next = zpoly::pow_mod(&frob[k], p as u64, f, p);
        frob.push(next);
    }
    for (r, _) in factorize(m as u64) {
        let h = &frob[m / r as usize];
        let g = zpoly::gcd(&zpoly::sub(h, &x, p), f, p);
        if zpoly::degree(&g).unwrap_or(0) > 0 {
            return Err(format!("nontrivial factor {g:?} (constant-first)"));
        }
    }
    if zpoly::sub(&frob[m], &x, p).is_empty() {
        Ok(())
    } else {
        Err(format!("x^({p}^{m}) is not congruent to x"))
    }
}

/// Characteristic, degree and modulus of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    /// Monic modulus, constant term first, length `m + 1`.
    pub irr: Vec<u32>,
}

impl FieldSpec {
    /// Spec with the default (smallest) irreducible modulus.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        let irr = find_irreducible(p, m)?;
        Ok(FieldSpec { p, m, irr })
    }

    pub fn with_modulus(p: u32, irr: Vec<u32>) -> Result<Self> {
        if irr.len() < 2 {
            return param("modulus must have degree at least 1");
        }
        let m = (irr.len() - 1) as u32;
        Ok(FieldSpec { p, m, irr })
    }

    pub fn order(&self) -> Option<u64> {
        checked_order(self.p, self.m)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}:", self.p, self.m)?;
        for (i, c) in self.irr.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn parse_u32(s: &str, what: &str) -> Result<u32> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid {what} '{s}'")))
}

/// Parses `"p^m"` or `"p^m:a0,a1,...,am"`.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, modulus) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let (p, m) = head
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("field spec '{s}' is not of the form p^m")))?;
        let p = parse_u32(p, "characteristic")?;
        let m = parse_u32(m, "degree")?;
        match modulus {
            None => FieldSpec::new(p, m),
            Some(list) => {
                let irr = list
                    .split(',')
                    .map(|c| parse_u32(c, "modulus coefficient"))
                    .collect::<Result<Vec<_>>>()?;
                if irr.len() != m as usize + 1 {
                    return Err(Error::Parse(format!(
                        "modulus for degree {m} needs {} coefficients, got {}",
                        m + 1,
                        irr.len()
                    )));
                }
                FieldSpec::with_modulus(p, irr)
            }
        }
    }
}

struct LogTables {
    /// exp[i] = g^i for i in 0..Q-1
    exp: Vec<u32>,
    /// log[a] for a != 0; log[0] is unused
    log: Vec<u32>,
}

/// Validated field context. Immutable once built; the optional log tables
/// are initialised at most once on first use.
pub struct FieldCtx {
    spec: FieldSpec,
    order: u32,
    /// p^i for i in 0..=m
    place: Vec<u32>,
    /// x^m ≡ Σ fold[i]·x^i, i.e. fold[i] = −irr[i] mod p
    fold: Vec<u32>,
    group_factors: Vec<u64>,
    tables: OnceLock<Option<LogTables>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("spec", &self.spec)
            .field("order", &self.order)
            .finish()
    }
}

/// Binary or unary field operation selector for [`FieldCtx::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow,
}

/// Second operand of [`FieldCtx::arith`]; unary operations ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    Element(u32),
    Exponent(i64),
    None,
}

impl FieldCtx {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let FieldSpec { p, m, ref irr } = spec;
        if !is_prime(p as u64) {
            return param(format!("characteristic {p} is not prime"));
        }
        if m == 0 || irr.len() != m as usize + 1 {
            return param(format!("modulus must have exactly {} coefficients", m + 1));
        }
        let order = match checked_order(p, m) {
            Some(q) if q <= MAX_FIELD_ORDER as u64 => q as u32,
            _ => {
                return Err(Error::Capacity {
                    p,
                    m,
                    limit: MAX_FIELD_ORDER,
                })
            }
        };
        if let Some(c) = irr.iter().find(|&&c| c >= p) {
            return param(format!("modulus coefficient {c} is not reduced mod {p}"));
        }
        if irr[m as usize] != 1 {
            return param("modulus must be monic");
        }
        if let Err(reason) = rabin_check(p, irr) {
            return Err(Error::Reducible {
                p,
                modulus: irr.clone(),
                reason,
            });
        }
        let place = (0..=m).map(|i| p.pow(i)).collect();
        let fold = irr[..m as usize].iter().map(|&c| (p - c) % p).collect();
        let group_factors = factorize(order as u64 - 1)
            .into_iter()
            .map(|(r, _)| r)
            .collect();
        Ok(FieldCtx {
            spec,
            order,
            place,
            fold,
            group_factors,
            tables: OnceLock::new(),
        })
    }

    /// GF(p^m) with the default modulus.
    pub fn with_degree(p: u32, m: u32) -> Result<Self> {
        FieldCtx::new(FieldSpec::new(p, m)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.order {
            Ok(FieldElement(index))
        } else {
            param(format!(
                "element index {index} is outside GF({}^{})",
                self.spec.p, self.spec.m
            ))
        }
    }

    /// Image of the integer `k` in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.spec.p as i64) as u32)
    }

    /// The basis power `x^i` of the polynomial basis (`i < m`).
    pub fn basis(&self, i: u32) -> Result<FieldElement> {
        if i >= self.spec.m {
            return param(format!("basis power {i} exceeds degree {}", self.spec.m));
        }
        Ok(FieldElement(self.place[i as usize]))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.spec.m as usize {
            return param(format!("{} coefficients for degree {}", coeffs.len(), self.spec.m));
        }
        let mut idx = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.spec.p {
                return param(format!("coefficient {c} not reduced mod {}", self.spec.p));
            }
            idx += c * self.place[i];
        }
        Ok(FieldElement(idx))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let d = self.digits(a);
        d[..self.spec.m as usize].to_vec()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    fn digits(&self, a: FieldElement) -> [u32; MAX_DEGREE] {
        let mut out = [0; MAX_DEGREE];
        let p = self.spec.p;
        let mut v = a.0;
        let mut i = 0;
        while v > 0 {
            out[i] = v % p;
            v /= p;
            i += 1;
        }
        out
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.spec.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let mut d = x % p + y % p;
            if d >= p {
                d -= p;
            }
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.spec.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let mut d = x % p + p - y % p;
            if d >= p {
                d -= p;
            }
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match self.log_tables() {
            Some(t) => {
                let n = self.order - 1;
                let mut e = t.log[a.0 as usize] + t.log[b.0 as usize];
                if e >= n {
                    e -= n;
                }
                FieldElement(t.exp[e as usize])
            }
            None => self.mul_basis(a, b),
        }
    }

    /// Schoolbook multiplication and reduction in the polynomial basis.
    pub fn mul_basis(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let m = self.spec.m as usize;
        let p = self.spec.p as u64;
        let x = self.digits(a);
        let y = self.digits(b);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + x[i] as u64 * y[j] as u64) % p;
            }
        }
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &f) in self.fold.iter().enumerate() {
                prod[d - m + i] = (prod[d - m + i] + c * f as u64) % p;
            }
        }
        let mut idx = 0;
        for i in 0..m {
            idx += prod[i] as u32 * self.place[i];
        }
        FieldElement(idx)
    }

    /// Scalar multiple by an integer, `k·a`.
    pub fn scale_int(&self, k: i64, a: FieldElement) -> FieldElement {
        self.mul(self.from_int(k), a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Arithmetic("inverse of zero".into()));
        }
        Ok(match self.log_tables() {
            Some(t) => {
                let n = self.order - 1;
                let l = t.log[a.0 as usize];
                FieldElement(t.exp[((n - l) % n) as usize])
            }
            None => self.pow_u64(a, self.order as u64 - 2),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        if b.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` by square-and-multiply.
    pub fn pow_u64(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// `a^e` for any integer exponent; negative exponents need `a != 0`.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow_u64(a, e as u64))
        } else {
            let inv = self.inv(a)?;
            Ok(self.pow_u64(inv, e.unsigned_abs()))
        }
    }

    /// Range-checked arithmetic on raw indices.
    pub fn arith(&self, op: ArithOp, a: u32, b: Operand) -> Result<FieldElement> {
        let a = self.element(a)?;
        let elem = |o: Operand| match o {
            Operand::Element(i) => self.element(i),
            _ => param(format!("{op:?} needs an element operand")),
        };
        match op {
            ArithOp::Add => Ok(self.add(a, elem(b)?)),
            ArithOp::Sub => Ok(self.sub(a, elem(b)?)),
            ArithOp::Mul => Ok(self.mul(a, elem(b)?)),
            ArithOp::Div => self.div(a, elem(b)?),
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Inv => self.inv(a),
            ArithOp::Pow => match b {
                Operand::Exponent(e) => self.pow(a, e),
                _ => param("pow needs an integer exponent"),
            },
        }
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, a: FieldElement, e: u32) -> FieldElement {
        let p = self.spec.p as u64;
        (0..e % self.spec.m).fold(a, |acc, _| self.pow_u64(acc, p))
    }

    fn check_subfield_degree(&self, d: u32) -> Result<()> {
        if d == 0 || self.spec.m % d != 0 {
            return param(format!(
                "GF({}^{}) has no subfield of degree {d}",
                self.spec.p, self.spec.m
            ));
        }
        Ok(())
    }

    /// Whether `a` lies in the subfield GF(p^d); `d` must divide `m`.
    pub fn in_subfield(&self, a: FieldElement, d: u32) -> Result<bool> {
        self.check_subfield_degree(d)?;
        Ok(self.is_in_subfield(a, d))
    }

    pub(crate) fn is_in_subfield(&self, a: FieldElement, d: u32) -> bool {
        if d == self.spec.m {
            return true;
        }
        if d == 1 {
            return a.0 < self.spec.p;
        }
        self.frobenius(a, d) == a
    }

    /// All elements of GF(p^d), ascending by index.
    pub fn enumerate_subfield(&self, d: u32) -> Result<Vec<FieldElement>> {
        self.check_subfield_degree(d)?;
        Ok(self.elements().filter(|&a| self.is_in_subfield(a, d)).collect())
    }

    /// Degrees of all subfields, ascending.
    pub fn subfield_degrees(&self) -> Vec<u32> {
        (1..=self.spec.m).filter(|d| self.spec.m % d == 0).collect()
    }

    /// Least `k ≥ 1` with `a^k = 1`.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return param("zero has no multiplicative order");
        }
        let mut k = self.order as u64 - 1;
        for &r in &self.group_factors {
            while k % r == 0 && self.pow_u64(a, k / r) == FieldElement::ONE {
                k /= r;
            }
        }
        Ok(k)
    }

    /// Whether the discrete-log tables are in use for this field.
    pub fn has_log_tables(&self) -> bool {
        self.log_tables().is_some()
    }

    fn log_tables(&self) -> Option<&LogTables> {
        self.tables.get_or_init(|| self.build_log_tables()).as_ref()
    }

    fn build_log_tables(&self) -> Option<LogTables> {
        if self.order > LOG_TABLE_LIMIT {
            return None;
        }
        let n = self.order - 1;
        let is_generator = |g: FieldElement| {
            self.group_factors
                .iter()
                .all(|&r| self.pow_basis(g, n as u64 / r) != FieldElement::ONE)
        };
        let g = (1..self.order)
            .map(FieldElement)
            .find(|&g| is_generator(g))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![0u32; self.order as usize];
        let mut acc = FieldElement::ONE;
        for i in 0..n {
            exp.push(acc.0);
            log[acc.0 as usize] = i;
            acc = self.mul_basis(acc, g);
        }
        Some(LogTables { exp, log })
    }

    fn pow_basis(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_basis(acc, base);
            }
            base = self.mul_basis(base, base);
            e >>= 1;
        }
        acc
    }
}
