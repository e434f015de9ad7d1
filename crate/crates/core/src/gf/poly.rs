//! Dense polynomials over a prime field F_p, little-endian coefficient vectors.
//!
//! Only what modulus selection needs: reduction, products modulo a fixed
//! polynomial, gcd and the Rabin irreducibility test.

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod_p(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod_p(a, p - 2, p)
}

pub(crate) fn pow_mod_p(base: u32, mut exp: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    let mut b = (base % p) as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        exp >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo `m` (m nonzero, any leading coefficient).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p) as u64;
    let p64 = p as u64;
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * lead_inv) % p64;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let sub = c * mi as u64 % p64;
                let v = &mut r[shift + i];
                *v = ((*v as u64 + p64 - sub) % p64) as u32;
            }
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai as u64 * bj as u64) % p64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// `t^(p^k) mod m`.
fn t_pow_p_iter(m: &[u32], p: u32, k: u32) -> Vec<u32> {
    let mut cur = rem(&[0, 1], m, p);
    for _ in 0..k {
        cur = pow_poly(&cur, p as u64, m, p);
    }
    cur
}

fn pow_poly(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

/// Rabin's test: a monic `f` of degree d is irreducible over F_p iff
/// t^(p^d) = t mod f and gcd(t^(p^(d/r)) - t, f) = 1 for every prime r | d.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() as u32 - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let t = vec![0u32, 1];
    if sub(&t_pow_p_iter(f, p, d), &t, p) != rem(&[], f, p) {
        return false;
    }
    for r in prime_factors(d as u64) {
        let k = d / r as u32;
        let g = gcd(&sub(&t_pow_p_iter(f, p, k), &t, p), f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Distinct prime factors by trial division, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}
