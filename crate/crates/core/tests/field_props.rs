//! Field arithmetic against an independent schoolbook model, plus
//! polynomial and table invariants.

use permfield_core::poly::compose_tables;
use permfield_core::{FieldCtx, FieldElement, SparsePoly, ValueTable};
use proptest::prelude::*;

/// Vectors of coefficients mod `p`, reduced by the context's own modulus.
struct Model {
    p: u64,
    irr: Vec<u64>,
}

impl Model {
    fn of(ctx: &FieldCtx) -> Self {
        Model {
            p: ctx.characteristic() as u64,
            irr: ctx.spec().irr.iter().map(|&c| c as u64).collect(),
        }
    }

    fn digits(&self, mut i: u64) -> Vec<u64> {
        let m = self.irr.len() - 1;
        (0..m)
            .map(|_| {
                let d = i % self.p;
                i /= self.p;
                d
            })
            .collect()
    }

    fn index(&self, v: &[u64]) -> u64 {
        v.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.index(&x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect::<Vec<_>>())
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.digits(a), self.digits(b));
        let m = self.irr.len() - 1;
        let mut prod = vec![0u64; 2 * m];
        for (i, u) in x.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        for d in (m..2 * m).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            for (k, c) in self.irr.iter().enumerate() {
                let slot = &mut prod[d - m + k];
                *slot = (*slot + self.p * self.p - lead * c % self.p) % self.p;
            }
        }
        prod.truncate(m);
        self.index(&prod)
    }
}

fn el(ctx: &FieldCtx, i: u32) -> FieldElement {
    ctx.element(i).unwrap()
}

#[test]
fn small_fields_match_model_exhaustively() {
    for (p, m) in [(2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (3, 4), (5, 2), (7, 2)] {
        let ctx = FieldCtx::with_degree(p, m).unwrap();
        let model = Model::of(&ctx);
        let q = ctx.order();
        for a in 0..q {
            for b in 0..q {
                let (x, y) = (el(&ctx, a), el(&ctx, b));
                assert_eq!(ctx.add(x, y).index() as u64, model.add(a as u64, b as u64));
                assert_eq!(ctx.mul(x, y).index() as u64, model.mul(a as u64, b as u64), "{p}^{m}: {a}*{b}");
                assert_eq!(ctx.add(ctx.sub(x, y), y), x);
                if b != 0 {
                    assert_eq!(ctx.mul(ctx.div(x, y).unwrap(), y), x);
                }
            }
        }
    }
}

#[test]
fn small_fields_satisfy_axioms_exhaustively() {
    for (p, m) in [(3, 2), (2, 4), (3, 3), (5, 2), (3, 4)] {
        let ctx = FieldCtx::with_degree(p, m).unwrap();
        let all: Vec<_> = ctx.elements().collect();
        for &a in &all {
            assert_eq!(ctx.add(a, ctx.neg(a)), FieldElement::ZERO);
            assert_eq!(ctx.mul(a, FieldElement::ONE), a);
            for &b in &all {
                assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                for &c in &all {
                    assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                    assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn frobenius_is_an_automorphism_fixing_the_prime_field() {
    for (p, m) in [(3, 4), (5, 2), (7, 2), (2, 6)] {
        let ctx = FieldCtx::with_degree(p, m).unwrap();
        for a in ctx.elements() {
            assert_eq!(ctx.frobenius(a, m), a);
            assert_eq!(ctx.frobenius(a, 1), ctx.pow_u64(a, p as u64));
            if a.index() < p {
                assert_eq!(ctx.frobenius(a, 1), a);
            }
            for b in ctx.elements().step_by(7) {
                assert_eq!(ctx.frobenius(ctx.mul(a, b), 1), ctx.mul(ctx.frobenius(a, 1), ctx.frobenius(b, 1)));
                assert_eq!(ctx.frobenius(ctx.add(a, b), 1), ctx.add(ctx.frobenius(a, 1), ctx.frobenius(b, 1)));
            }
        }
    }
}

#[test]
fn subfield_lattice() {
    for (p, m) in [(3, 4), (2, 6), (5, 2), (3, 6)] {
        let ctx = FieldCtx::with_degree(p, m).unwrap();
        for d in 1..=m {
            if m % d != 0 {
                assert!(ctx.in_subfield(FieldElement::ONE, d).is_err());
                continue;
            }
            let sub = ctx.enumerate_subfield(d).unwrap();
            assert_eq!(sub.len() as u64, (p as u64).pow(d));
            for &a in &sub {
                for &b in sub.iter().step_by(3) {
                    assert!(ctx.in_subfield(ctx.mul(a, b), d).unwrap());
                    assert!(ctx.in_subfield(ctx.sub(a, b), d).unwrap());
                }
                for e in (1..=m).filter(|e| m % e == 0) {
                    // GF(p^d) meets GF(p^e) in GF(p^gcd(d, e))
                    let g = (1..=d.min(e)).rev().find(|g| d % g == 0 && e % g == 0).unwrap();
                    assert_eq!(ctx.in_subfield(a, e).unwrap(), ctx.in_subfield(a, g).unwrap());
                }
            }
        }
        let degrees = ctx.subfield_degrees();
        assert_eq!(degrees, (1..=m).filter(|d| m % d == 0).collect::<Vec<_>>());
    }
}

#[test]
fn multiplicative_orders_divide_group_order() {
    let ctx = FieldCtx::with_degree(3, 4).unwrap();
    let mut generators = 0;
    for a in ctx.elements().skip(1) {
        let ord = ctx.multiplicative_order(a).unwrap();
        assert_eq!(80 % ord, 0);
        assert_eq!(ctx.pow_u64(a, ord), FieldElement::ONE);
        let smallest = (1..=80).find(|&k| ctx.pow_u64(a, k) == FieldElement::ONE).unwrap();
        assert_eq!(ord, smallest);
        generators += (ord == 80) as u32;
    }
    // Euler phi(80)
    assert_eq!(generators, 32);
    assert!(ctx.multiplicative_order(FieldElement::ZERO).is_err());
}

fn field_strategy() -> impl Strategy<Value = (u32, u32)> {
    prop_oneof![Just((3, 9)), Just((5, 5)), Just((7, 4)), Just((11, 3)), Just((2, 13)), Just((13, 4))]
}

fn sparse_strategy(max_exp: u64) -> impl Strategy<Value = Vec<(u64, u32)>> {
    proptest::collection::vec((0..max_exp, any::<u32>()), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn large_fields_match_model((p, m) in field_strategy(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let ctx = FieldCtx::with_degree(p, m).unwrap();
        let q = ctx.order();
        let (a, b, c) = (a % q, b % q, c % q);
        let model = Model::of(&ctx);
        let (x, y, z) = (el(&ctx, a), el(&ctx, b), el(&ctx, c));
        prop_assert_eq!(ctx.mul(x, y).index() as u64, model.mul(a as u64, b as u64));
        prop_assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
        prop_assert_eq!(ctx.mul(x, ctx.add(y, z)), ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
        prop_assert_eq!(ctx.pow_u64(x, q as u64), x);
        prop_assert_eq!(ctx.frobenius(ctx.mul(x, y), 1), ctx.mul(ctx.frobenius(x, 1), ctx.frobenius(y, 1)));
        if a != 0 {
            prop_assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), FieldElement::ONE);
            prop_assert_eq!(ctx.pow(x, -3).unwrap(), ctx.inv(ctx.pow_u64(x, 3)).unwrap());
        }
    }

    #[test]
    fn reduce_exponents_preserves_the_function(
        (p, m) in prop_oneof![Just((3u32, 2u32)), Just((3, 3)), Just((5, 2)), Just((3, 6)), Just((7, 2))],
        terms in sparse_strategy(5000),
    ) {
        let ctx = FieldCtx::with_degree(p, m).unwrap();
        let q = ctx.order();
        let f = SparsePoly::from_terms(terms.into_iter().map(|(e, c)| (e, el(&ctx, c % q))), &ctx);
        let r = f.reduce_exponents(&ctx);
        prop_assert!(r.degree().map_or(true, |d| d < q as u64));
        prop_assert_eq!(f.value_table(&ctx), r.value_table(&ctx));
        for a in ctx.elements() {
            prop_assert_eq!(f.eval(&ctx, a), f.eval_per_term(&ctx, a));
        }
    }

    #[test]
    fn sparse_text_round_trips((p, m) in field_strategy(), terms in sparse_strategy(1 << 40)) {
        let ctx = FieldCtx::with_degree(p, m).unwrap();
        let q = ctx.order();
        let f = SparsePoly::from_terms(terms.into_iter().map(|(e, c)| (e, el(&ctx, c % q))), &ctx);
        let back = SparsePoly::parse(&f.to_string(), &ctx).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn composition_is_associative(seed in proptest::collection::vec(any::<u32>(), 3 * 81)) {
        let ctx = FieldCtx::with_degree(3, 4).unwrap();
        let tables: Vec<ValueTable> = seed
            .chunks(81)
            .map(|c| ValueTable::new(c.iter().map(|v| v % 81).collect(), &ctx).unwrap())
            .collect();
        let (f, g, h) = (&tables[0], &tables[1], &tables[2]);
        let left = compose_tables(&compose_tables(f, g).unwrap(), h).unwrap();
        let right = compose_tables(f, &compose_tables(g, h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(compose_tables(f, &ValueTable::identity(81)).unwrap(), f.clone());
    }
}
