//! Elementary integer arithmetic shared by every module: primality,
//! factorization, p-adic valuations, Legendre symbols, and modular helpers.
//!
//! Everything here operates on machine integers; levels, primes, and search
//! boxes in this crate are desk scale.

/// Deterministic Miller-Rabin, valid for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set is deterministic for n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, `n >= 1`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut t = 0u32;
            while n % p == 0 {
                n /= p;
                t += 1;
            }
            out.push((p, t));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation of `n`; `None` for n = 0 (infinite valuation).
pub fn valuation(n: i64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as i64;
    let mut n = n;
    let mut v = 0u32;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, when gcd(a, m) = 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Legendre symbol (a|p) for an odd prime p, computed by Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> i32 {
    debug_assert!(p > 2 && is_prime(p));
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    let e = mod_pow(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Exact test for perfect squares; returns the nonnegative root.
pub fn perfect_square_root(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as u64).isqrt() as i64;
    if r * r == n {
        Some(r)
    } else {
        None
    }
}

/// Smallest positive square root of -1 modulo q, for primes q = 1 mod 4.
pub fn sqrt_minus_one(q: u64) -> Option<u64> {
    if q % 4 != 1 || !is_prime(q) {
        return None;
    }
    (1..q).find(|&i| mul_mod(i, i, q) == q - 1)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
