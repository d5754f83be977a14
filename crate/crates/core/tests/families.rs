//! Completeness levels and cycle structure of the two families, computed
//! exhaustively and compared with direct pointwise reasoning.

use permfield_core::analysis::{completeness_level_of_table, cycle_type, CycleType};
use permfield_core::group;
use permfield_core::{Family, FieldCtx, FieldElement, Flavor, Tower};

fn level(ctx: &FieldCtx, f: &permfield_core::SparsePoly) -> i32 {
    completeness_level_of_table(ctx, &f.value_table(ctx)).level
}

/// Level of `a ↦ base_mult·a` on the base field and `a ↦ off_mult·a + shift`
/// off it, from the multipliers alone: `f + kx` is a bijection exactly when
/// neither `base_mult + k` nor `off_mult + k` vanishes.
fn predicted_level(ctx: &FieldCtx, base_mult: FieldElement, off_mult: FieldElement) -> i32 {
    let p = ctx.characteristic();
    for k in 0..p {
        let kk = ctx.from_int(k as i64);
        if ctx.add(base_mult, kk).is_zero() || ctx.add(off_mult, kk).is_zero() {
            return k as i32 - 1;
        }
    }
    p as i32 - 1
}

const TOWERS: [(u32, u32, u32); 9] =
    [(3, 1, 2), (3, 1, 3), (3, 1, 4), (3, 2, 2), (3, 1, 5), (5, 1, 2), (5, 1, 3), (7, 1, 2), (11, 1, 2)];

#[test]
fn plus_members_have_level_p_minus_two() {
    for (p, s, n) in TOWERS {
        let t = Tower::new(p, s, n).unwrap();
        for c in t.base_elements() {
            assert_eq!(level(t.ctx(), &t.f_plus(c).unwrap()), p as i32 - 2, "{p} {s} {n} c={c}");
        }
    }
}

#[test]
fn star_levels_depend_on_c_in_the_prime_field() {
    for (p, s, n) in TOWERS {
        let t = Tower::new(p, s, n).unwrap();
        let ctx = t.ctx();
        for c in t.base_elements() {
            let got = level(ctx, &t.f_star(c).unwrap());
            let i = c.index();
            let expected = match i {
                0 => p as i32 - 2,
                1 => -1,
                _ if i < p => i as i32 - 2,
                _ => p as i32 - 2,
            };
            assert_eq!(got, expected, "GF({p}^{})/GF({p}^{s}) c={c}", s * n);
            let one_minus_c = ctx.sub(FieldElement::ONE, c);
            assert_eq!(got, predicted_level(ctx, FieldElement::ONE, one_minus_c));
        }
    }
}

#[test]
fn star_fixture_levels() {
    for (desc, expected) in [
        ("star:p=5,s=1,n=2,c=4", 2),
        ("star:p=7,s=1,n=2,c=6", 4),
        ("plus:p=5,s=1,n=2,c=2", 3),
        ("plus:p=7,s=1,n=2,c=4", 5),
    ] {
        let fam = Family::new(desc.parse().unwrap()).unwrap();
        assert_eq!(level(fam.ctx(), &fam.polynomial()), expected, "{desc}");
    }
}

#[test]
fn scaled_members_fail_exactly_where_a_multiplier_vanishes() {
    for (p, s, n) in [(3, 2, 2), (5, 2, 2), (3, 2, 3)] {
        let t = Tower::new(p, s, n).unwrap();
        let ctx = t.ctx();
        let bs: Vec<_> = t.base_elements().into_iter().filter(|b| !ctx.in_subfield(*b, 1).unwrap()).collect();
        assert_eq!(bs.len() as u64, t.base_order() - p as u64);
        let mut star_failures = 0;
        for &b in &bs {
            let b_inv = ctx.inv(b).unwrap();
            for c in t.base_elements() {
                let plus = t.build_scaled(Flavor::Plus, b, c).unwrap();
                assert_eq!(level(ctx, &plus.poly), p as i32 - 1);
                assert!(plus.maximality_guaranteed);

                let star = t.build_scaled(Flavor::Star, b, c).unwrap();
                let got = level(ctx, &star.poly);
                let off = ctx.mul(b, ctx.sub(FieldElement::ONE, c));
                assert_eq!(got, predicted_level(ctx, b, off));
                // c = 1 + k/b is the only way to drop below p - 1
                let bad = (0..p).any(|k| c == ctx.add(FieldElement::ONE, ctx.mul(ctx.from_int(k as i64), b_inv)));
                assert_eq!(got < p as i32 - 1, bad, "b={b} c={c}");
                assert_eq!(star.maximality_guaranteed, !bad);
                star_failures += bad as u32;
            }
        }
        // each b rules out exactly p values of c
        assert_eq!(star_failures as usize, bs.len() * p as usize);
    }
}

#[test]
fn scaling_outside_the_base_is_not_guaranteed() {
    let t = Tower::new(3, 3, 2).unwrap();
    let ctx = t.ctx();
    let nine: Vec<_> = ctx.enumerate_subfield(2).unwrap();
    let mut misses = 0;
    for &b in nine.iter().filter(|b| b.index() >= 3) {
        assert!(!t.in_base(b));
        for c in t.base_elements() {
            let member = t.build_scaled(Flavor::Plus, b, c).unwrap();
            assert!(!member.maximality_guaranteed);
            misses += (level(ctx, &member.poly) < 2) as u32;
        }
    }
    assert!(misses > 0);
}

#[test]
fn cycle_types_follow_the_closed_forms() {
    for (p, s, n) in TOWERS {
        let t = Tower::new(p, s, n).unwrap();
        let ctx = t.ctx();
        let q = t.base_order();
        let off = ctx.order() as u64 - q;
        for c in t.base_elements().into_iter().filter(|c| !c.is_zero()) {
            let plus = cycle_type(&t.f_plus(c).unwrap().value_table(ctx)).unwrap();
            assert_eq!(plus, CycleType::from_counts([(1, q), (p as u64, off / p as u64)]));
            assert_eq!(plus.order().unwrap(), p as u128);

            if c == FieldElement::ONE {
                continue;
            }
            let lambda = ctx.sub(FieldElement::ONE, c);
            let ord = ctx.multiplicative_order(lambda).unwrap();
            let star = cycle_type(&t.f_star(c).unwrap().value_table(ctx)).unwrap();
            let expected = if ord == 1 {
                CycleType::from_counts([(1, q + off)])
            } else {
                CycleType::from_counts([(1, q), (ord, off / ord)])
            };
            assert_eq!(star, expected);
            assert_eq!(star.size(), ctx.order() as u64);
        }
    }
}

#[test]
fn group_laws_hold_across_towers() {
    for (p, s, n) in [(3, 1, 2), (3, 1, 3), (3, 2, 2), (5, 1, 2), (5, 2, 2), (7, 1, 2), (3, 3, 2)] {
        let t = Tower::new(p, s, n).unwrap();
        let add = group::verify_additive_group(&t).unwrap();
        assert!(add.law_holds && add.iso_verified, "{p} {s} {n}");
        assert_eq!(add.checked_pairs, t.base_order().pow(2));
        let mul = group::verify_multiplicative_group(&t).unwrap();
        assert!(mul.law_holds && mul.iso_verified, "{p} {s} {n}");
        assert_eq!(mul.checked_pairs, (t.base_order() - 1).pow(2));
        assert!(group::verify_relationship(&t).unwrap());
    }
}

#[test]
fn inverse_parameters_undo_each_member() {
    let t = Tower::new(5, 1, 2).unwrap();
    let ctx = t.ctx();
    for c in t.base_elements().into_iter().filter(|&c| c != FieldElement::ONE) {
        let d = ctx.div(c, ctx.sub(c, FieldElement::ONE)).unwrap();
        let f = t.f_star(c).unwrap().value_table(ctx);
        let g = t.f_star(d).unwrap().value_table(ctx);
        assert!(permfield_core::compose_tables(&f, &g).unwrap().is_identity());
        assert_eq!(f.inverse().unwrap(), g);
    }
}
