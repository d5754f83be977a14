//! Exhaustive permutation verdicts: bijectivity, completeness level, cycle
//! structure.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{param, Error, Result};
use crate::gf::FieldCtx;
use crate::poly::{SparsePoly, ValueTable};

/// Two distinct inputs with the same image, smaller index first.
pub type Collision = [u32; 2];

/// First collision in index order: the pair whose second element is
/// smallest, paired with the earliest input sharing its image.
pub fn find_collision(table: &ValueTable) -> Option<Collision> {
    let mut first = vec![u32::MAX; table.len()];
    for (i, &v) in table.images().iter().enumerate() {
        let slot = &mut first[v as usize];
        if *slot != u32::MAX {
            return Some([*slot, i as u32]);
        }
        *slot = i as u32;
    }
    None
}

pub fn is_permutation(table: &ValueTable) -> (bool, Option<Collision>) {
    match find_collision(table) {
        Some(w) => (false, Some(w)),
        None => (true, None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelFailure {
    pub k: u32,
    pub collision: Collision,
}

/// Completeness verdict. `level` is `-1` when `f` itself is not a
/// permutation; otherwise the largest `k ≤ p - 1` with `f + i·x` a
/// permutation for every `i ≤ k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermReport {
    pub is_permutation: bool,
    pub collision_witness: Option<Collision>,
    pub level: i32,
    pub level_failure: Option<LevelFailure>,
}

impl PermReport {
    pub fn is_maximal(&self, p: u32) -> bool {
        self.level == p as i32 - 1
    }
}

pub fn completeness_level(ctx: &FieldCtx, f: &SparsePoly) -> PermReport {
    completeness_level_of_table(ctx, &f.value_table(ctx))
}

/// Same as [`completeness_level`] starting from the value table of `f`.
pub fn completeness_level_of_table(ctx: &FieldCtx, table: &ValueTable) -> PermReport {
    if let Some(w) = find_collision(table) {
        return PermReport {
            is_permutation: false,
            collision_witness: Some(w),
            level: -1,
            level_failure: Some(LevelFailure { k: 0, collision: w }),
        };
    }
    let p = ctx.characteristic();
    for k in 1..p {
        let mixed = table.linear_mix(ctx, crate::gf::FieldElement::ONE, ctx.from_int(k as i64));
        if let Some(w) = find_collision(&mixed) {
            return PermReport {
                is_permutation: true,
                collision_witness: None,
                level: k as i32 - 1,
                level_failure: Some(LevelFailure { k, collision: w }),
            };
        }
    }
    PermReport {
        is_permutation: true,
        collision_witness: None,
        level: p as i32 - 1,
        level_failure: None,
    }
}

/// Cycle length → number of cycles of that length.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleType {
    counts: BTreeMap<u64, u64>,
}

impl CycleType {
    pub fn from_counts(counts: impl IntoIterator<Item = (u64, u64)>) -> Self {
        CycleType {
            counts: counts.into_iter().filter(|&(_, n)| n > 0).collect(),
        }
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, len: u64) -> u64 {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    pub fn fixed_points(&self) -> u64 {
        self.count(1)
    }

    /// Number of points permuted, `Σ length·count`.
    pub fn size(&self) -> u64 {
        self.counts.iter().map(|(l, c)| l * c).sum()
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> Result<u128> {
        self.counts.keys().try_fold(1u128, |acc, &len| {
            let len = len as u128;
            (acc / gcd(acc, len))
                .checked_mul(len)
                .ok_or_else(|| Error::Arithmetic("permutation order overflows 128 bits".into()))
        })
    }
}

impl Serialize for CycleType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.counts.iter().map(|(l, c)| [*l, *c]))
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn cycle_type(table: &ValueTable) -> Result<CycleType> {
    if let Some([a, b]) = find_collision(table) {
        return param(format!("not a permutation: {a} and {b} share an image"));
    }
    let mut seen = vec![false; table.len()];
    let mut counts = BTreeMap::new();
    for start in 0..table.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = table.images()[cur] as usize;
            len += 1;
        }
        *counts.entry(len).or_insert(0) += 1;
    }
    Ok(CycleType { counts })
}

pub fn permutation_order(table: &ValueTable) -> Result<u128> {
    cycle_type(table)?.order()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Tower;
    use crate::gf::FieldElement;

    fn brute_force_order(table: &ValueTable) -> u128 {
        let mut cur = table.clone();
        let mut k = 1;
        while !cur.is_identity() {
            cur = crate::poly::compose_tables(table, &cur).unwrap();
            k += 1;
        }
        k
    }

    #[test]
    fn permutation_verdicts() {
        let ctx = FieldCtx::with_degree(3, 2).unwrap();
        assert_eq!(is_permutation(&ValueTable::identity(9)), (true, None));
        let constant = SparsePoly::constant(ctx.from_int(1)).value_table(&ctx);
        assert_eq!(is_permutation(&constant), (false, Some([0, 1])));
        let t = Tower::new(3, 1, 2).unwrap();
        let f = t.f_star(FieldElement::ONE).unwrap().value_table(&ctx);
        let (ok, w) = is_permutation(&f);
        assert!(!ok);
        let [a, b] = w.unwrap();
        assert!(a < b && f.get(a) == f.get(b));
    }

    #[test]
    fn level_of_identity_on_f9() {
        let ctx = FieldCtx::with_degree(3, 2).unwrap();
        let r = completeness_level(&ctx, &SparsePoly::x());
        assert_eq!(r.level, 1);
        let fail = r.level_failure.unwrap();
        assert_eq!(fail.k, 2);
        assert_eq!(fail.collision, [0, 1]);
    }

    #[test]
    fn level_sentinel_for_non_permutations() {
        let ctx = FieldCtx::with_degree(3, 2).unwrap();
        let r = completeness_level(&ctx, &SparsePoly::monomial(2, FieldElement::ONE));
        assert!(!r.is_permutation);
        assert_eq!(r.level, -1);
        assert_eq!(r.level_failure.unwrap().k, 0);
        // x + x^3 is additive with kernel {0, ±t} and so not injective
        let ctx = FieldCtx::with_degree(3, 2).unwrap();
        let g = SparsePoly::from_terms([(1, FieldElement::ONE), (3, FieldElement::ONE)], &ctx);
        assert_eq!(completeness_level(&ctx, &g).level, -1);
    }

    #[test]
    fn level_zero_is_distinct_from_non_permutation() {
        // 2x over GF(9): a permutation, but 2x + x = 0
        let ctx = FieldCtx::with_degree(3, 2).unwrap();
        let r = completeness_level(&ctx, &SparsePoly::monomial(1, ctx.from_int(2)));
        assert!(r.is_permutation);
        assert_eq!(r.level, 0);
    }

    #[test]
    fn table_and_polynomial_routes_agree() {
        let t = Tower::new(3, 2, 2).unwrap();
        let ctx = t.ctx();
        for c in t.base_elements() {
            let f = t.f_plus(c).unwrap();
            let direct = completeness_level(ctx, &f);
            // recompute level by building each f + kx as a polynomial
            let mut level = -1;
            for k in 0..3 {
                let fk = f.linear_mix(ctx, FieldElement::ONE, ctx.from_int(k));
                if find_collision(&fk.value_table(ctx)).is_some() {
                    break;
                }
                level = k as i32;
            }
            assert_eq!(direct.level, level);
        }
    }

    #[test]
    fn cycle_examples_on_f9() {
        let t = Tower::new(3, 1, 2).unwrap();
        let ctx = t.ctx();
        let id = cycle_type(&ValueTable::identity(9)).unwrap();
        assert_eq!(id, CycleType::from_counts([(1, 9)]));
        assert_eq!(id.order().unwrap(), 1);

        let plus = t.f_plus(FieldElement::ONE).unwrap().value_table(ctx);
        assert_eq!(cycle_type(&plus).unwrap(), CycleType::from_counts([(1, 3), (3, 2)]));
        assert_eq!(permutation_order(&plus).unwrap(), 3);
        assert_eq!(brute_force_order(&plus), 3);

        let star = t.f_star(ctx.from_int(2)).unwrap().value_table(ctx);
        let ct = cycle_type(&star).unwrap();
        assert_eq!(ct, CycleType::from_counts([(1, 3), (2, 3)]));
        assert_eq!(ct.fixed_points(), 3);
        assert_eq!(ct.size(), 9);
        assert_eq!(permutation_order(&star).unwrap(), 2);

        let bad = t.f_star(FieldElement::ONE).unwrap().value_table(ctx);
        assert!(cycle_type(&bad).is_err());
        assert!(permutation_order(&bad).is_err());
    }

    #[test]
    fn cycle_type_serializes_as_pairs() {
        let ct = CycleType::from_counts([(3, 2), (1, 3)]);
        assert_eq!(serde_json::to_string(&ct).unwrap(), "[[1,3],[3,2]]");
    }
}
