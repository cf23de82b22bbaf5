//! Polynomials over a prime field `F_p` (`p < 2^63`) and their factorization:
//! squarefree decomposition, distinct-degree splitting, then Cantor–Zassenhaus
//! equal-degree splitting.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::arith::{inv_mod, is_prime, mod_u64};
use super::poly::RationalPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModPolyError {
    #[error("{0} is not a prime below 2^63")]
    BadModulus(u64),
    #[error("cannot factor the zero polynomial")]
    Zero,
    #[error("prime {0} divides the leading coefficient or the discriminant")]
    BadPrime(u64),
    #[error("polynomial must have degree at least 1")]
    Constant,
}

/// Dense polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModPoly {
    modulus: u64,
    coeffs: Vec<u64>,
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b { a - b } else { p - (b - a) }
}

impl ModPoly {
    /// Reduces `coeffs` modulo `modulus`, which must be prime.
    pub fn new(modulus: u64, coeffs: Vec<u64>) -> Result<Self, ModPolyError> {
        if modulus >= 1 << 63 || !is_prime(modulus) {
            return Err(ModPolyError::BadModulus(modulus));
        }
        Ok(Self::from_raw(modulus, coeffs.into_iter().map(|c| c % modulus).collect()))
    }

    pub fn from_i64(modulus: u64, coeffs: &[i64]) -> Result<Self, ModPolyError> {
        let m = modulus as i128;
        let c = coeffs.iter().map(|&c| (c as i128).rem_euclid(m) as u64).collect();
        Self::new(modulus, c)
    }

    /// Reduction of an integer polynomial.
    pub fn from_bigints(modulus: u64, coeffs: &[BigInt]) -> Result<Self, ModPolyError> {
        Self::new(modulus, coeffs.iter().map(|c| mod_u64(c, modulus)).collect())
    }

    fn from_raw(modulus: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { modulus, coeffs }
    }

    fn with(&self, coeffs: Vec<u64>) -> Self {
        Self::from_raw(self.modulus, coeffs)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn one(&self) -> Self {
        self.with(vec![1])
    }

    fn x(&self) -> Self {
        self.with(vec![0, 1])
    }

    fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading_coeff(), self.modulus);
        self.scale(inv)
    }

    fn scale(&self, c: u64) -> Self {
        let p = self.modulus;
        self.with(self.coeffs.iter().map(|&a| mulm(a, c, p)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0);
        self.with((0..n).map(|k| addm(get(&self.coeffs, k), get(&other.coeffs, k), p)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0);
        self.with((0..n).map(|k| subm(get(&self.coeffs, k), get(&other.coeffs, k), p)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.with(Vec::new());
        }
        let p = self.modulus;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = addm(out[i + j], mulm(a, b, p), p);
            }
        }
        self.with(out)
    }

    /// Division with remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let p = self.modulus;
        let d = divisor.degree().expect("division by zero polynomial");
        if self.coeffs.len() <= d {
            return (self.with(Vec::new()), self.clone());
        }
        let inv = inv_mod(divisor.leading_coeff(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = mulm(rem[k + d], inv, p);
            if c != 0 {
                for (j, &dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = subm(rem[k + j], mulm(c, dc, p), p);
                }
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (self.with(quot), self.with(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended gcd: returns monic `g` and `s, t` with `s*self + t*other = g`.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let zero = self.with(Vec::new());
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (self.one(), zero.clone());
        let (mut t0, mut t1) = (zero.clone(), self.one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.leading_coeff(), self.modulus);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let p = self.modulus;
        self.with(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| mulm(c, k as u64 % p, p))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = self.one().rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    // p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Self {
        let p = self.modulus as usize;
        self.with(self.coeffs.iter().step_by(p).copied().collect())
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with
    /// `g` squarefree, pairwise coprime and `self = prod g^e`.
    fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let p = self.modulus as u32;
        let df = self.derivative();
        if df.is_zero() {
            for (g, e) in self.pth_root().squarefree_decomposition() {
                out.push((g, e * p));
            }
            return out;
        }
        let mut c = self.gcd(&df);
        let mut w = self.div_rem(&c).0;
        let mut i = 1u32;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_rem(&y).0;
            if fac.deg() > 0 {
                out.push((fac.make_monic(), i));
            }
            w = y;
            c = c.div_rem(&w).0;
            i += 1;
        }
        if !c.is_one() && c.deg() > 0 {
            for (g, e) in c.pth_root().squarefree_decomposition() {
                out.push((g, e * p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(g_d, d)` where `g_d` is the product of all irreducible factors
    /// of degree `d`.
    pub fn distinct_degree_factorization(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        let mut f = self.make_monic();
        let x = self.x();
        let mut h = x.rem(&f);
        let mut d = 0;
        while f.deg() >= 2 * (d + 1) {
            d += 1;
            h = h.pow_mod(self.modulus, &f);
            let g = h.sub(&x).gcd(&f);
            if g.deg() > 0 {
                f = f.div_rem(&g).0;
                h = h.rem(&f);
                out.push((g, d));
            }
        }
        if f.deg() > 0 {
            let d = f.deg();
            out.push((f, d));
        }
        out
    }

    // Splits a monic squarefree product of irreducibles of degree `d`.
    fn equal_degree_split(&self, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Self>) {
        let n = self.deg();
        if n == d {
            out.push(self.clone());
            return;
        }
        let p = self.modulus;
        loop {
            let a = self.with((0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.deg() == 0 {
                continue;
            }
            let b = if p == 2 {
                // trace map a + a^2 + ... + a^{2^{d-1}}
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                // norm-like exponent: a^{(p^d - 1)/2} = (a^{1 + p + ... + p^{d-1}})^{(p-1)/2}
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.pow_mod(p, self);
                    acc = acc.mul(&t).rem(self);
                }
                acc.pow_mod((p - 1) / 2, self).sub(&self.one())
            };
            let g = b.gcd(self);
            if g.deg() > 0 && g.deg() < n {
                let h = self.div_rem(&g).0.make_monic();
                g.equal_degree_split(d, rng, out);
                h.equal_degree_split(d, rng, out);
                return;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted. The leading coefficient of `self` is returned separately.
    pub fn factor(&self) -> Result<(u64, Vec<(Self, u32)>), ModPolyError> {
        if self.is_zero() {
            return Err(ModPolyError::Zero);
        }
        let lc = self.leading_coeff();
        let monic = self.make_monic();
        let mut rng = ChaCha8Rng::seed_from_u64(self.modulus ^ 0x5eed_f00d);
        let mut out = Vec::new();
        for (sq, e) in monic.squarefree_decomposition() {
            for (g, d) in sq.distinct_degree_factorization() {
                let mut pieces = Vec::new();
                g.equal_degree_split(d, &mut rng, &mut pieces);
                out.extend(pieces.into_iter().map(|f| (f, e)));
            }
        }
        out.sort_by(|a, b| (a.0.deg(), &a.0.coeffs, a.1).cmp(&(b.0.deg(), &b.0.coeffs, b.1)));
        Ok((lc, out))
    }

    /// Factor degrees of a monic squarefree polynomial, ascending.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut degs = Vec::new();
        for (g, d) in self.make_monic().distinct_degree_factorization() {
            degs.extend(std::iter::repeat(d).take(g.deg() / d));
        }
        degs.sort_unstable();
        degs
    }

    /// True iff irreducible over `F_p` (degree at least 1).
    pub fn is_irreducible(&self) -> bool {
        self.deg() >= 1 && self.is_squarefree() && self.factor_degrees().len() == 1
    }
}

/// Factorization of `f` over `F_p` into monic irreducibles with exponents.
pub fn factor_mod_p(f: &ModPoly) -> Result<Vec<(ModPoly, u32)>, ModPolyError> {
    f.factor().map(|(_, fs)| fs)
}

/// Degrees of the irreducible factors of `f mod p`, ascending. Fails with
/// `BadPrime` when `p` divides the leading coefficient or the discriminant of
/// the primitive integer multiple of `f`.
pub fn cycle_type_mod_p(f: &RationalPoly, p: u64) -> Result<Vec<usize>, ModPolyError> {
    if f.degree().unwrap_or(0) < 1 {
        return Err(ModPolyError::Constant);
    }
    let ints = f.primitive_integer_part();
    cycle_type_of_integer_poly(&ints, p)
}

pub(crate) fn cycle_type_of_integer_poly(
    ints: &[BigInt],
    p: u64,
) -> Result<Vec<usize>, ModPolyError> {
    let g = ModPoly::from_bigints(p, ints)?;
    if g.coeffs.len() != ints.len() || !g.is_squarefree() {
        return Err(ModPolyError::BadPrime(p));
    }
    Ok(g.factor_degrees())
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly({:?} mod {})", self.coeffs, self.modulus)
    }
}
