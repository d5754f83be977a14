//! Every stated property of the two families, checked exhaustively and
//! reported one criterion at a time.

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::analysis::{completeness_level_of_table, cycle_type, find_collision, CycleType};
use crate::error::Result;
use crate::family::{Family, FamilyParams, Flavor, Tower};
use crate::gf::{split_prime_power, FieldCtx, FieldElement, FieldSpec};
use crate::group;
use crate::poly::SparsePoly;

/// Largest big-field order in the sweeps.
pub const SWEEP_MAX_ORDER: u32 = 2401;
pub const SWEEP_PRIMES: [u32; 4] = [3, 5, 7, 11];

/// Reference fixtures: descriptor, sparse form, stated level.
pub const FIXTURES: [(&str, &str, i32); 4] = [
    ("plus:p=5,s=1,n=2,c=2", "20:2,16:2,12:2,8:2,4:2,1:1", 3),
    ("star:p=5,s=1,n=2,c=4", "21:4,17:4,13:4,9:4,5:4,1:1", 3),
    ("plus:p=7,s=1,n=2,c=4", "42:4,36:4,30:4,24:4,18:4,12:4,6:4,1:1", 5),
    ("star:p=7,s=1,n=2,c=6", "43:6,37:6,31:6,25:6,19:6,13:6,7:6,1:1", 5),
];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Skip every field whose order exceeds this bound.
    pub max_q: u32,
    /// Moduli to use instead of the default ones, matched on `(p, m)`.
    pub moduli: Vec<FieldSpec>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_q: u32::MAX, moduli: Vec::new() }
    }
}

impl SuiteOptions {
    pub fn with_max_q(max_q: u32) -> Self {
        SuiteOptions { max_q, ..Self::default() }
    }

    /// `GF(p^m)` under the overriding modulus if one was given.
    pub fn field(&self, p: u32, m: u32) -> Result<Arc<FieldCtx>> {
        let spec = match self.moduli.iter().find(|f| f.p == p && f.m == m) {
            Some(spec) => spec.clone(),
            None => FieldSpec::new(p, m)?,
        };
        Ok(Arc::new(FieldCtx::new(spec)?))
    }

    fn tower(&self, p: u32, s: u32, n: u32) -> Result<Tower> {
        Tower::over(self.field(p, s * n)?, s)
    }

    fn family(&self, desc: &str) -> Result<Family> {
        let params: FamilyParams = desc.parse()?;
        let tower = self.tower(params.p, params.s, params.n)?;
        Family::with_tower(params, tower)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    /// Number of individual cases checked.
    pub cases: u64,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub criteria: Vec<CriterionOutcome>,
}

/// Collects failures for one criterion; keeps the first few witnesses.
struct Tally {
    cases: u64,
    failures: u64,
    witnesses: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: 0, witnesses: Vec::new() }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < 5 {
                self.witnesses.push(witness());
            }
        }
    }

    fn finish(self, id: u32, title: &str, start: Instant, limit: Option<Duration>) -> CriterionOutcome {
        let elapsed = start.elapsed();
        let slow = limit.is_some_and(|l| elapsed > l);
        let mut detail = if self.failures == 0 {
            format!("{} cases", self.cases)
        } else {
            format!("{} of {} cases failed: {}", self.failures, self.cases, self.witnesses.join("; "))
        };
        if let Some(l) = limit.filter(|_| slow) {
            detail.push_str(&format!("; time limit {} ms exceeded", l.as_millis()));
        }
        CriterionOutcome {
            id,
            title: title.to_string(),
            passed: self.failures == 0 && !slow && self.cases > 0,
            cases: self.cases,
            detail,
            elapsed,
        }
    }
}

/// `(p, s, n)` with `p` in [`SWEEP_PRIMES`], `n ≥ 2` and `p^{s·n}` at most
/// `min(max_q, 2401)`, ordered by `p`, then field degree, then `s`.
pub fn sweep_towers(max_q: u32) -> Vec<(u32, u32, u32)> {
    let bound = max_q.min(SWEEP_MAX_ORDER) as u64;
    let mut out = Vec::new();
    for p in SWEEP_PRIMES {
        let mut deg = 2;
        while (p as u64).pow(deg) <= bound {
            for s in 1..deg {
                if deg % s == 0 {
                    out.push((p, s, deg / s));
                }
            }
            deg += 1;
        }
    }
    out
}

fn towers(list: &[(u32, u32, u32)], opts: &SuiteOptions) -> Result<Vec<Tower>> {
    list.iter()
        .filter(|&&(p, s, n)| (p as u64).pow(s * n) <= opts.max_q as u64)
        .map(|&(p, s, n)| opts.tower(p, s, n))
        .collect()
}

fn label(t: &Tower) -> String {
    format!("GF({}^{})/GF({}^{})", t.characteristic(), t.ctx().degree(), t.characteristic(), t.base_degree())
}

/// Family parameters `c` checked for `flavor`: the base field, minus `1` for star.
fn family_params(t: &Tower, flavor: Flavor) -> Vec<FieldElement> {
    t.base_elements()
        .into_iter()
        .filter(|&c| flavor == Flavor::Plus || c != FieldElement::ONE)
        .collect()
}

const FLAVORS: [Flavor; 2] = [Flavor::Plus, Flavor::Star];

/// 1: the four reference polynomials, term for term.
pub fn fixtures_exact(opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    let mut slowest = Duration::ZERO;
    for (desc, expected, _) in FIXTURES {
        let t0 = Instant::now();
        let fam = opts.family(desc)?;
        let got = fam.polynomial().to_string();
        slowest = slowest.max(t0.elapsed());
        tally.check(got == expected, || format!("{desc} gave {got}"));
    }
    tally.check(slowest < Duration::from_millis(1), || {
        format!("slowest construction took {} us", slowest.as_micros())
    });
    Ok(tally.finish(1, "reference polynomials reproduced term for term", start, None))
}

/// 2: the reference completeness levels.
pub fn fixtures_levels(opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    for (desc, _, level) in FIXTURES {
        let fam = opts.family(desc)?;
        let ctx = fam.ctx();
        let report = completeness_level_of_table(ctx, &fam.polynomial().value_table(ctx));
        tally.check(report.level == level, || format!("{desc} has level {}", report.level));
    }
    Ok(tally.finish(2, "reference completeness levels", start, Some(Duration::from_millis(50))))
}

/// 3: every family member in the sweep is a permutation of level exactly `p - 2`.
pub fn level_sweep(opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    for t in towers(&sweep_towers(opts.max_q), opts)? {
        let ctx = t.ctx();
        let p = t.characteristic() as i32;
        for flavor in FLAVORS {
            for c in family_params(&t, flavor) {
                let report = completeness_level_of_table(ctx, &t.build(flavor, c)?.value_table(ctx));
                tally.check(report.is_permutation && report.level == p - 2, || {
                    format!("{} {} c={c}: level {}", label(&t), flavor.name(), report.level)
                });
            }
        }
    }
    Ok(tally.finish(3, "families complete to level p-2 exactly", start, Some(Duration::from_secs(60))))
}

/// 4: `b·f_{c±}` is maximally complete and nonlinear for `b` in a middle
/// subfield outside the prime field and `c` in the base field.
pub fn scaled_maximal(opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    for t in towers(&[(3, 2, 2), (5, 2, 2)], opts)? {
        let ctx = t.ctx();
        let p = t.characteristic();
        let scales: Vec<FieldElement> = ctx
            .elements()
            .filter(|&b| b.index() >= p && t.in_middle_subfield(b))
            .collect();
        for flavor in FLAVORS {
            for &b in &scales {
                for c in family_params(&t, flavor) {
                    let member = t.build_scaled(flavor, b, c)?;
                    let report = completeness_level_of_table(ctx, &member.poly.value_table(ctx));
                    let nonlinear = c.is_zero() || member.poly.degree().is_some_and(|d| d > 1);
                    tally.check(report.is_maximal(p) && nonlinear, || {
                        format!("{} {} b={b} c={c}: level {}", label(&t), flavor.name(), report.level)
                    });
                }
            }
        }
    }
    Ok(tally.finish(4, "scaled members maximally complete", start, Some(Duration::from_secs(120))))
}

/// 5: fields without a middle subfield still reach `p - 2`, and `f_{c+} + (p-1)x`
/// collides on the base field.
pub fn prime_degree_boundary(opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    for t in towers(&[(3, 1, 2), (3, 1, 3), (5, 1, 2), (7, 1, 2), (5, 1, 3)], opts)? {
        let ctx = t.ctx();
        let p = t.characteristic();
        for flavor in FLAVORS {
            for c in family_params(&t, flavor) {
                let f = t.build(flavor, c)?;
                let report = completeness_level_of_table(ctx, &f.value_table(ctx));
                tally.check(report.level == p as i32 - 2, || {
                    format!("{} {} c={c}: level {}", label(&t), flavor.name(), report.level)
                });
                if flavor == Flavor::Plus {
                    let top = f.linear_mix(ctx, FieldElement::ONE, ctx.from_int(p as i64 - 1));
                    let witness = find_collision(&top.value_table(ctx));
                    let in_base = witness.is_some_and(|[a, b]| {
                        t.in_base(ctx.element(a).unwrap()) && t.in_base(ctx.element(b).unwrap())
                    });
                    tally.check(in_base, || format!("{} plus c={c}: f + (p-1)x witness {witness:?}", label(&t)));
                }
            }
        }
    }
    Ok(tally.finish(5, "level p-2 without middle subfields; p-1 fails", start, None))
}

/// 6: piecewise forms agree with the polynomials; the geometric sum is `-1`
/// off the base field and `0` on its nonzero elements.
pub fn closed_forms(opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    for t in towers(&sweep_towers(opts.max_q), opts)? {
        let ctx = t.ctx();
        for flavor in FLAVORS {
            for c in t.base_elements() {
                let poly_table = t.build(flavor, c)?.value_table(ctx);
                let closed = t.closed_table(flavor, c)?;
                tally.check(poly_table == closed, || format!("{} {} c={c}: closed form differs", label(&t), flavor.name()));
            }
        }
        let minus_one = ctx.neg(FieldElement::ONE);
        for a in ctx.elements().skip(1) {
            let sum = t.geometric_sum(a);
            let expected = if t.in_base(a) { FieldElement::ZERO } else { minus_one };
            tally.check(sum == expected, || format!("{}: geometric sum at {a} is {sum}", label(&t)));
        }
    }
    Ok(tally.finish(6, "piecewise closed forms and geometric sums", start, None))
}

/// 7: cycle types `{1: q, p: (Q - q)/p}` for plus and `{1: q, d: (Q - q)/d}`
/// with `d = ord(1 - c)` for star.
pub fn cycle_structure(opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    for t in towers(&sweep_towers(opts.max_q), opts)? {
        let ctx = t.ctx();
        let p = t.characteristic() as u64;
        let q = t.base_order();
        let big = ctx.order() as u64;
        for c in t.base_elements().into_iter().filter(|c| !c.is_zero()) {
            let ct = cycle_type(&t.f_plus(c)?.value_table(ctx))?;
            let expected = CycleType::from_counts([(1, q), (p, (big - q) / p)]);
            let ok = ct == expected && ct.order()? == p as u128;
            tally.check(ok, || format!("{} plus c={c}: cycles {:?}", label(&t), ct.counts()));
            if c == FieldElement::ONE {
                continue;
            }
            let d = ctx.multiplicative_order(ctx.sub(FieldElement::ONE, c))?;
            let ct = cycle_type(&t.f_star(c)?.value_table(ctx))?;
            let expected = CycleType::from_counts([(1, q), (d, (big - q) / d)]);
            tally.check(ct == expected, || format!("{} star c={c}: cycles {:?}, ord(1-c) = {d}", label(&t), ct.counts()));
        }
    }
    Ok(tally.finish(7, "cycle structure of family members", start, None))
}

/// 8: composition groups, the `*` identity and the plus/star coefficient identity.
pub fn group_laws(opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    let group_towers = [(3, 1, 2), (5, 1, 2), (7, 1, 2), (3, 2, 2), (3, 3, 2), (5, 2, 2), (7, 2, 2)];
    for t in towers(&group_towers, opts)? {
        let add = group::verify_additive_group(&t)?;
        tally.check(add.law_holds && add.iso_verified, || format!("{}: additive {:?}", label(&t), add.counterexample));
        let mul = group::verify_multiplicative_group(&t)?;
        tally.check(mul.law_holds && mul.iso_verified, || format!("{}: multiplicative {:?}", label(&t), mul.counterexample));
    }
    for q in [3u64, 5, 7, 9, 25, 27, 49].into_iter().filter(|&q| q <= opts.max_q as u64) {
        let (p, m) = split_prime_power(q)?;
        tally.check(group::star_lemma_holds(&*opts.field(p, m)?), || format!("star lemma fails for q = {q}"));
    }
    for t in towers(&sweep_towers(opts.max_q), opts)? {
        tally.check(group::verify_relationship(&t)?, || format!("{}: x(f_c+ - x + 1) != f_c*", label(&t)));
    }
    Ok(tally.finish(8, "composition group laws", start, Some(Duration::from_secs(30))))
}

/// 9: `a·x + b0` has level `p - 1` for `a` outside the prime field and
/// `p - 1 - a` otherwise.
pub fn linear_levels(opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    for (p, m) in [(3u32, 2u32), (5, 2), (3, 3)] {
        if (p as u64).pow(m) > opts.max_q as u64 {
            continue;
        }
        let ctx = opts.field(p, m)?;
        for a in ctx.elements().skip(1) {
            let expected = if a.index() >= p { p - 1 } else { p - 1 - a.index() } as i32;
            for b0 in ctx.elements() {
                let f = SparsePoly::from_terms([(1, a), (0, b0)], &ctx);
                let report = completeness_level_of_table(&ctx, &f.value_table(&ctx));
                tally.check(report.level == expected, || {
                    format!("GF({p}^{m}): {a}x + {b0} has level {}, expected {expected}", report.level)
                });
            }
        }
    }
    Ok(tally.finish(9, "levels of linear polynomials", start, None))
}

type CriterionFn = fn(&SuiteOptions) -> Result<CriterionOutcome>;

const CRITERIA: [CriterionFn; 9] = [
    fixtures_exact,
    fixtures_levels,
    level_sweep,
    scaled_maximal,
    prime_degree_boundary,
    closed_forms,
    cycle_structure,
    group_laws,
    linear_levels,
];

fn run_checks(opts: &SuiteOptions) -> Result<Vec<CriterionOutcome>> {
    CRITERIA.iter().map(|f| f(opts)).collect()
}

/// 10: a second pass produces the same serialized outcomes.
fn determinism(first: &[CriterionOutcome], opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let second = run_checks(opts)?;
    let mut tally = Tally::new();
    let render = |v: &[CriterionOutcome]| {
        v.iter()
            .map(|o| format!("{}|{}|{}|{}", o.id, o.passed, o.cases, o.detail))
            .collect::<Vec<_>>()
    };
    let (a, b) = (render(first), render(&second));
    for (x, y) in a.iter().zip(&b) {
        tally.check(x == y, || format!("outcome changed between runs: '{x}' vs '{y}'"));
    }
    tally.check(a.len() == b.len(), || "criterion count changed".into());
    Ok(tally.finish(10, "repeat run gives identical outcomes", start, None))
}

pub fn run_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut criteria = run_checks(opts)?;
    let det = determinism(&criteria, opts)?;
    criteria.push(det);
    Ok(SuiteReport {
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    })
}
