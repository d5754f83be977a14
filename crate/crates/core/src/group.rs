//! Composition laws of the two families, checked on value tables.

use serde::Serialize;

use crate::error::Result;
use crate::family::{Flavor, Tower};
use crate::gf::{split_prime_power, FieldCtx, FieldElement};
use crate::poly::{compose_tables, SparsePoly, ValueTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub c: u32,
    pub d: u32,
    /// Element index where the two sides differ.
    pub element: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupCheckReport {
    pub law: String,
    /// Base field as `p^s` inside `p^{s·n}`.
    pub base_field: String,
    #[serde(rename = "holds")]
    pub law_holds: bool,
    pub counterexample: Option<Counterexample>,
    #[serde(rename = "pairs_checked")]
    pub checked_pairs: u64,
    pub iso_verified: bool,
}

fn base_label(tower: &Tower) -> String {
    format!(
        "{}^{} in {}^{}",
        tower.characteristic(),
        tower.base_degree(),
        tower.characteristic(),
        tower.ctx().degree()
    )
}

fn first_difference(a: &ValueTable, b: &ValueTable) -> Option<u32> {
    a.images()
        .iter()
        .zip(b.images())
        .position(|(x, y)| x != y)
        .map(|i| i as u32)
}

fn tables(tower: &Tower, flavor: Flavor, params: &[FieldElement]) -> Result<Vec<ValueTable>> {
    params
        .iter()
        .map(|&c| Ok(tower.build(flavor, c)?.value_table(tower.ctx())))
        .collect()
}

fn all_distinct(tables: &[ValueTable]) -> bool {
    let mut sorted: Vec<&ValueTable> = tables.iter().collect();
    sorted.sort_by(|a, b| a.images().cmp(b.images()));
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// `f_{c+} ∘ f_{d+} = f_{(c+d)+}` for all base-field `c, d`, with `c ↦ f_{c+}`
/// injective and `f_{0+}` the identity.
pub fn verify_additive_group(tower: &Tower) -> Result<GroupCheckReport> {
    let ctx = tower.ctx();
    let base = tower.base_elements();
    let tabs = tables(tower, Flavor::Plus, &base)?;
    let pos = |e: FieldElement| base.binary_search(&e).expect("base field is closed");
    let mut counterexample = None;
    let mut checked = 0;
    'outer: for (i, &c) in base.iter().enumerate() {
        for (j, &d) in base.iter().enumerate() {
            checked += 1;
            let lhs = compose_tables(&tabs[i], &tabs[j])?;
            let rhs = &tabs[pos(ctx.add(c, d))];
            if let Some(element) = first_difference(&lhs, rhs) {
                counterexample = Some(Counterexample { c: c.index(), d: d.index(), element });
                break 'outer;
            }
        }
    }
    let neutral = tabs[pos(FieldElement::ZERO)].is_identity();
    Ok(GroupCheckReport {
        law: "additive".into(),
        base_field: base_label(tower),
        law_holds: counterexample.is_none(),
        counterexample,
        checked_pairs: checked,
        iso_verified: counterexample.is_none() && neutral && all_distinct(&tabs),
    })
}

/// `f_{c*} ∘ f_{d*} = f_{(c+d-cd)*}` on the base field minus 1, closure
/// (`c+d-cd ≠ 1`), neutral `c = 0`, and inverse parameter `c/(c-1)`.
pub fn verify_multiplicative_group(tower: &Tower) -> Result<GroupCheckReport> {
    let ctx = tower.ctx();
    let params: Vec<FieldElement> = tower
        .base_elements()
        .into_iter()
        .filter(|&c| c != FieldElement::ONE)
        .collect();
    let tabs = tables(tower, Flavor::Star, &params)?;
    let pos = |e: FieldElement| params.binary_search(&e).ok();
    let phi = |a: FieldElement| ctx.sub(FieldElement::ONE, a);
    let mut phi_ok = true;
    let mut counterexample = None;
    let mut checked = 0;
    'outer: for (i, &c) in params.iter().enumerate() {
        for (j, &d) in params.iter().enumerate() {
            checked += 1;
            let star = star_op(ctx, c, d);
            phi_ok &= phi(star) == ctx.mul(phi(c), phi(d));
            let lhs = compose_tables(&tabs[i], &tabs[j])?;
            let diff = match pos(star) {
                Some(k) => first_difference(&lhs, &tabs[k]),
                // c + d - cd = 1 would leave the family
                None => Some(0),
            };
            if let Some(element) = diff {
                counterexample = Some(Counterexample { c: c.index(), d: d.index(), element });
                break 'outer;
            }
        }
    }
    if counterexample.is_none() {
        for (i, &c) in params.iter().enumerate() {
            let inv = star_inverse(ctx, c)?;
            let Some(k) = pos(inv) else {
                counterexample = Some(Counterexample { c: c.index(), d: inv.index(), element: 0 });
                break;
            };
            let comp = compose_tables(&tabs[k], &tabs[i])?;
            if let Some(element) = first_difference(&comp, &ValueTable::identity(comp.len())) {
                counterexample = Some(Counterexample { c: c.index(), d: inv.index(), element });
                break;
            }
        }
    }
    let neutral = pos(FieldElement::ZERO).is_some_and(|k| tabs[k].is_identity());
    Ok(GroupCheckReport {
        law: "multiplicative".into(),
        base_field: base_label(tower),
        law_holds: counterexample.is_none(),
        counterexample,
        checked_pairs: checked,
        iso_verified: counterexample.is_none() && neutral && phi_ok && all_distinct(&tabs),
    })
}

/// `a * b = a + b - ab`.
pub fn star_op(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> FieldElement {
    ctx.sub(ctx.add(a, b), ctx.mul(a, b))
}

/// Inverse of `c` under `*`: `c/(c-1)`.
pub fn star_inverse(ctx: &FieldCtx, c: FieldElement) -> Result<FieldElement> {
    ctx.div(c, ctx.sub(c, FieldElement::ONE))
}

/// Checks that `K \ {1}` with `a * b = a + b - ab` is an abelian group and that
/// `a ↦ 1 - a` is an isomorphism onto `K^*`, for `K = GF(q)`.
pub fn verify_star_lemma(q: u64) -> Result<bool> {
    let (p, m) = split_prime_power(q)?;
    let ctx = FieldCtx::with_degree(p, m)?;
    Ok(star_lemma_holds(&ctx))
}

pub fn star_lemma_holds(ctx: &FieldCtx) -> bool {
    let one = FieldElement::ONE;
    let set: Vec<FieldElement> = ctx.elements().filter(|&a| a != one).collect();
    let phi = |a: FieldElement| ctx.sub(one, a);
    let mut image_seen = vec![false; ctx.order() as usize];
    for &a in &set {
        let fa = phi(a);
        if fa.is_zero() || image_seen[fa.index() as usize] {
            return false;
        }
        image_seen[fa.index() as usize] = true;
        if star_op(ctx, a, FieldElement::ZERO) != a {
            return false;
        }
        if !set.iter().any(|&b| star_op(ctx, a, b) == FieldElement::ZERO) {
            return false;
        }
        for &b in &set {
            let ab = star_op(ctx, a, b);
            if ab == one || ab != star_op(ctx, b, a) || phi(ab) != ctx.mul(fa, phi(b)) {
                return false;
            }
            for &c in &set {
                if star_op(ctx, ab, c) != star_op(ctx, a, star_op(ctx, b, c)) {
                    return false;
                }
            }
        }
    }
    // bijective onto the nonzero elements
    image_seen.iter().filter(|&&s| s).count() as u32 == ctx.order() - 1
}

/// `x·(f_{c+}(x) - x + 1)`, computed on coefficients.
pub fn shifted_plus(tower: &Tower, c: FieldElement) -> Result<SparsePoly> {
    let ctx = tower.ctx();
    let f = tower.f_plus(c)?;
    let inner = f
        .sub(ctx, &SparsePoly::x())
        .add(ctx, &SparsePoly::constant(FieldElement::ONE));
    Ok(inner.shift(1))
}

/// Coefficient identity `x·(f_{c+}(x) - x + 1) = f_{c*}(x)` for every base `c`.
pub fn verify_relationship(tower: &Tower) -> Result<bool> {
    for c in tower.base_elements() {
        if shifted_plus(tower, c)? != tower.f_star(c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reads the inverse display `x ↦ cx/(c-1)` (off the base field) literally as
/// a map and returns the first `c` for which it fails to invert `f_{c*}`.
pub fn literal_inverse_counterexample(tower: &Tower) -> Result<Option<Counterexample>> {
    let ctx = tower.ctx();
    for c in tower.base_elements() {
        if c == FieldElement::ONE {
            continue;
        }
        let f = tower.f_star(c)?.value_table(ctx);
        let mult = star_inverse(ctx, c)?;
        let literal: Vec<u32> = ctx
            .elements()
            .map(|a| if tower.in_base(a) { a } else { ctx.mul(mult, a) }.index())
            .collect();
        let literal = ValueTable::new(literal, ctx)?;
        let comp = compose_tables(&literal, &f)?;
        if let Some(element) = first_difference(&comp, &ValueTable::identity(comp.len())) {
            return Ok(Some(Counterexample { c: c.index(), d: mult.index(), element }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_group_small_fields() {
        let r = verify_additive_group(&Tower::new(3, 1, 2).unwrap()).unwrap();
        assert!(r.law_holds && r.iso_verified);
        assert_eq!(r.checked_pairs, 9);
        let r = verify_additive_group(&Tower::new(5, 1, 2).unwrap()).unwrap();
        assert!(r.law_holds && r.iso_verified);
        assert_eq!(r.checked_pairs, 25);
    }

    #[test]
    fn multiplicative_group_small_fields() {
        let t = Tower::new(3, 1, 2).unwrap();
        let ctx = t.ctx();
        let two = ctx.from_int(2);
        assert_eq!(star_op(ctx, two, two), FieldElement::ZERO);
        assert_eq!(star_inverse(ctx, two).unwrap(), two);
        let r = verify_multiplicative_group(&t).unwrap();
        assert!(r.law_holds && r.iso_verified, "{r:?}");
        assert_eq!(r.checked_pairs, 4);
        for (p, s, n) in [(5, 1, 2), (3, 2, 2), (7, 1, 2)] {
            let r = verify_multiplicative_group(&Tower::new(p, s, n).unwrap()).unwrap();
            assert!(r.law_holds && r.iso_verified, "{r:?}");
        }
    }

    #[test]
    fn star_lemma() {
        for q in [3, 5, 7, 9, 25, 27] {
            assert!(verify_star_lemma(q).unwrap(), "q = {q}");
        }
        assert!(verify_star_lemma(6).is_err());
        let ctx = FieldCtx::with_degree(3, 2).unwrap();
        for a in ctx.elements() {
            assert_eq!(star_op(&ctx, a, FieldElement::ZERO), a);
        }
    }

    #[test]
    fn relationship_identity() {
        let t = Tower::new(3, 1, 2).unwrap();
        assert_eq!(shifted_plus(&t, FieldElement::ZERO).unwrap(), SparsePoly::x());
        assert!(verify_relationship(&t).unwrap());
        let t = Tower::new(5, 1, 2).unwrap();
        let four = t.ctx().from_int(4);
        let shifted = shifted_plus(&t, four).unwrap();
        assert_eq!(shifted.to_string(), "21:4,17:4,13:4,9:4,5:4,1:1");
        assert!(verify_relationship(&t).unwrap());
    }

    #[test]
    fn literal_inverse_reading() {
        // at c = 0 the literal map collapses everything off the base field
        let cex = literal_inverse_counterexample(&Tower::new(3, 1, 2).unwrap()).unwrap();
        assert_eq!(cex.map(|c| c.c), Some(0));
        let cex = literal_inverse_counterexample(&Tower::new(5, 1, 2).unwrap()).unwrap();
        assert_eq!(cex.map(|c| c.c), Some(0));
    }
}
