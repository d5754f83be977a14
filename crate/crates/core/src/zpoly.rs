//! Dense polynomials over the prime field Z/p, constant term first.
//!
//! Only what the irreducibility test needs: products and remainders modulo a
//! monic polynomial, Frobenius powering and gcd.

pub(crate) type Poly = Vec<u32>;

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo an arbitrary nonzero `f`.
pub(crate) fn rem(a: &[u32], f: &[u32], p: u32) -> Poly {
    let df = degree(f).expect("division by the zero polynomial");
    let lead_inv = inv_mod(f[df], p) as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    while let Some(dr) = r.iter().rposition(|&c| c % p64 != 0) {
        if dr < df {
            break;
        }
        let factor = (r[dr] % p64) * lead_inv % p64;
        let shift = dr - df;
        for (i, &fc) in f[..=df].iter().enumerate() {
            let sub = factor * fc as u64 % p64;
            r[shift + i] = (r[shift + i] % p64 + p64 - sub) % p64;
        }
    }
    trim(r.into_iter().map(|c| (c % p64) as u32).collect())
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    rem(&prod, f, p)
}

pub(crate) fn pow_mod(a: &[u32], mut e: u64, f: &[u32], p: u32) -> Poly {
    let mut acc = rem(&[1], f, p);
    let mut base = rem(a, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &base, f, p);
        }
        base = mul_mod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let li = inv_mod(x[d], p) as u64;
        for c in x.iter_mut() {
            *c = (*c as u64 * li % p as u64) as u32;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_product_recovers_common_factor() {
        // (x+1)(x+2) and (x+1)(x+3) over GF(5)
        let a = vec![2, 3, 1];
        let b = vec![3, 4, 1];
        assert_eq!(gcd(&a, &b, 5), vec![1, 1]);
    }

    #[test]
    fn pow_mod_matches_repeated_multiplication() {
        let f = vec![1, 0, 1];
        let x = vec![0, 1];
        let mut acc = vec![1];
        for e in 0..10u64 {
            assert_eq!(pow_mod(&x, e, &f, 3), acc);
            acc = mul_mod(&acc, &x, &f, 3);
        }
    }
}
