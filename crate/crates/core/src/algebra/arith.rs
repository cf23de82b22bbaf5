//! Machine- and big-integer number theory: primality, factorization,
//! square classes and Legendre symbols.
//!
//! Factorization is limited to inputs of absolute value at most `2^63`.
//! Trial division runs up to `10^6`; whatever cofactor is left is split with
//! Brent's variant of Pollard rho, using a deterministic Miller–Rabin test
//! (valid for every 64-bit integer) to recognise primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest absolute value accepted by [`factorize`].
pub const FACTOR_LIMIT: u64 = 1 << 63;

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero has no factorization")]
    Zero,
    #[error("|{0}| exceeds the factorization limit 2^63")]
    TooLarge(BigInt),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
}

/// Signed prime factorization `sign * prod(p^e)`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for &(p, e) in &self.factors {
            acc *= BigInt::from(p).pow(e);
        }
        acc
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
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

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's cycle detection with batched gcds. `n` must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys);
        let mut g;
        const BATCH: u64 = 128;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += BATCH;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Factors a nonzero integer with `|n| <= 2^63`.
pub fn factorize(n: &BigInt) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mag = n
        .abs()
        .to_u64()
        .filter(|&m| m <= FACTOR_LIMIT)
        .ok_or_else(|| ArithError::TooLarge(n.clone()))?;
    Ok(Factorization { sign, factors: factorize_u64(mag) })
}

pub(crate) fn factorize_u64(mut m: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            factors.push((p, e));
        }
    };
    for p in [2u64, 3] {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        push(p, e);
    }
    // wheel 6k +- 1
    let mut d = 5u64;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= m {
        for q in [d, d + 2] {
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            push(q, e);
        }
        d += 6;
    }
    let mut rest = Vec::new();
    split_into(m, &mut rest);
    rest.sort_unstable();
    let mut i = 0;
    while i < rest.len() {
        let p = rest[i];
        let j = rest[i..].iter().take_while(|&&q| q == p).count();
        push(p, j as u32);
        i += j;
    }
    factors.sort_unstable();
    factors
}

/// The unique squarefree `d` with `n = d * s^2`, sign preserved.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt, ArithError> {
    let fac = factorize(n)?;
    let mut d = BigInt::from(fac.sign);
    for (p, e) in fac.factors {
        if e % 2 == 1 {
            d *= p;
        }
    }
    Ok(d)
}

/// p-adic valuation of a nonzero big integer, and the unit part.
pub(crate) fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut u = n.clone();
    loop {
        let (q, r) = u.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        u = q;
        v += 1;
    }
    (v, u)
}

/// Residue of `a` in `[0, m)`.
pub(crate) fn mod_u64(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

/// Legendre symbol `(a / p)` for an odd prime `p`.
pub fn legendre_symbol(a: &BigInt, p: u64) -> Result<i8, ArithError> {
    if p == 2 || !is_prime(p) {
        return Err(ArithError::NotOddPrime(p));
    }
    let r = mod_u64(a, p);
    Ok(match pow_mod(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// Modular inverse of `a` modulo prime `p` (`a` must be nonzero mod `p`).
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}
