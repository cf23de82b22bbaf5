//! Irreducibility over ℚ by the Zassenhaus method.
//!
//! The input is scaled to a primitive integer polynomial `f`. A prime `p`
//! that keeps `f mod p` squarefree of full degree is chosen among the first
//! five such primes (fewest modular factors wins), the modular factors are
//! lifted quadratically to `p^(2^k)` beyond twice the Landau–Mignotte bound,
//! and every subset of at most half the lifted factors is tested as a
//! candidate integer divisor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith::next_prime;
use super::modpoly::ModPoly;
use super::poly::{PolyError, RationalPoly};

const CANDIDATE_PRIMES: usize = 5;

/// Complete decision of irreducibility in `ℚ[x]`.
pub fn is_irreducible_over_rationals(f: &RationalPoly) -> Result<bool, PolyError> {
    find_rational_factor(f).map(|w| w.is_none())
}

/// A nontrivial factor of `f` in `ℚ[x]` (as a primitive integer polynomial),
/// or `None` when `f` is irreducible.
pub fn find_rational_factor(f: &RationalPoly) -> Result<Option<RationalPoly>, PolyError> {
    let n = f.degree().filter(|&n| n >= 1).ok_or(PolyError::Constant)?;
    if n == 1 {
        return Ok(None);
    }
    let g = f.gcd(&f.derivative());
    if g.degree() != Some(0) {
        return Ok(Some(g));
    }
    let ints = f.primitive_integer_part();
    Ok(zassenhaus_factor(&ints).map(|c| to_rational(&c)))
}

fn to_rational(c: &[BigInt]) -> RationalPoly {
    RationalPoly::new(c.iter().cloned().map(BigRational::from_integer).collect())
}

// --- arithmetic in (Z/M)[x], residues kept in [0, M) ---

fn zreduce(a: Vec<BigInt>, m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.into_iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn zadd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zreduce(
        (0..n)
            .map(|k| a.get(k).unwrap_or(&z) + b.get(k).unwrap_or(&z))
            .collect(),
        m,
    )
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zreduce(
        (0..n)
            .map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z))
            .collect(),
        m,
    )
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zreduce(out, m)
}

// Division by a monic divisor.
fn zdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = b.len() - 1;
    debug_assert!(b[d].is_one());
    if a.len() <= d {
        return (Vec::new(), a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - d];
    for k in (0..quot.len()).rev() {
        let c = rem[k + d].mod_floor(m);
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                rem[k + j] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    rem.truncate(d);
    (zreduce(quot, m), zreduce(rem, m))
}

fn lift_residues(p: &ModPoly) -> Vec<BigInt> {
    p.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step from modulus `m` to `m^2`.
///
/// Requires `f = g h mod m`, `s g + t h = 1 mod m`, `h` monic.
fn hensel_step(
    m: &BigInt,
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = zsub(f, &zmul(g, h, &m2), &m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e, &m2), h, &m2);
    let g_new = zadd(g, &zadd(&zmul(t, &e, &m2), &zmul(&q, g, &m2), &m2), &m2);
    let h_new = zadd(h, &r, &m2);
    let one = vec![BigInt::one()];
    let b = zsub(
        &zadd(&zmul(s, &g_new, &m2), &zmul(t, &h_new, &m2), &m2),
        &one,
        &m2,
    );
    let (c, d) = zdivrem_monic(&zmul(s, &b, &m2), &h_new, &m2);
    let s_new = zsub(s, &d, &m2);
    let t_new = zsub(&zsub(t, &zmul(t, &b, &m2), &m2), &zmul(&c, &g_new, &m2), &m2);
    (g_new, h_new, s_new, t_new)
}

/// Lifts the monic factorization `f = lc * prod(factors) mod p` to modulus
/// `p^(2^steps)`, returning monic lifted factors in the same order.
fn multifactor_lift(f: &[BigInt], factors: &[ModPoly], p: u64, steps: u32) -> Vec<Vec<BigInt>> {
    let big_m = BigInt::from(p).pow(1u32 << steps);
    if factors.len() == 1 {
        let lc = f.last().expect("nonzero").mod_floor(&big_m);
        let inv = lc.modinv(&big_m).expect("p does not divide lc");
        return vec![zreduce(f.iter().map(|c| c * &inv).collect(), &big_m)];
    }
    let mid = factors.len() / 2;
    let lc_p = crate::algebra::arith::mod_u64(f.last().expect("nonzero"), p);
    let prod = |fs: &[ModPoly]| {
        fs.iter()
            .fold(ModPoly::new(p, vec![1]).expect("prime"), |acc, u| acc.mul(u))
    };
    let g0 = prod(&factors[..mid]).mul(&ModPoly::new(p, vec![lc_p]).expect("prime"));
    let h0 = prod(&factors[mid..]);
    let (one, s0, t0) = g0.ext_gcd(&h0);
    debug_assert_eq!(one.coeffs(), &[1]);

    let (mut g, mut h) = (lift_residues(&g0), lift_residues(&h0));
    let (mut s, mut t) = (lift_residues(&s0), lift_residues(&t0));
    let mut m = BigInt::from(p);
    for _ in 0..steps {
        let fm = zreduce(f.to_vec(), &(&m * &m));
        (g, h, s, t) = hensel_step(&m, &fm, &g, &h, &s, &t);
        m = &m * &m;
    }
    let mut out = multifactor_lift(&g, &factors[..mid], p, steps);
    out.extend(multifactor_lift(&h, &factors[mid..], p, steps));
    out
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Exact quotient `a / b` over ℤ when `b` divides `a`.
pub(crate) fn int_exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let d = b.len().checked_sub(1)?;
    if a.len() <= d {
        return if a.iter().all(Zero::is_zero) { Some(Vec::new()) } else { None };
    }
    let lc = &b[d];
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - d];
    for k in (0..quot.len()).rev() {
        let (c, r) = rem[k + d].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                rem[k + j] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

/// Landau–Mignotte style bound `2^n * ceil(||f||_2)` on the coefficients of
/// `lc(f)/lc(g) * g` for any integer divisor `g` of `f`.
pub(crate) fn factor_coefficient_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + 1;
    norm << n
}

// Squarefree primitive integer polynomial of degree >= 2.
fn zassenhaus_factor(f: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = f.len() - 1;
    let lc = f[n].clone();

    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    let mut p = 1u64;
    while tried < CANDIDATE_PRIMES {
        p = next_prime(p);
        let fp = ModPoly::from_bigints(p, f).expect("prime modulus");
        if fp.degree() != Some(n) || !fp.is_squarefree() {
            continue;
        }
        tried += 1;
        let (_, facs) = fp.factor().expect("nonzero");
        let facs: Vec<ModPoly> = facs.into_iter().map(|(g, _)| g).collect();
        if facs.len() == 1 {
            return None;
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, facs) = best.expect("at least one good prime");

    let bound = factor_coefficient_bound(f) * lc.abs() * 2;
    let mut steps = 0u32;
    while BigInt::from(p).pow(1u32 << steps) <= bound {
        steps += 1;
    }
    let m = BigInt::from(p).pow(1u32 << steps);
    let lifted = multifactor_lift(f, &facs, p, steps);
    debug_assert_eq!(
        lifted.iter().fold(vec![lc.clone()], |acc, u| zmul(&acc, u, &m)),
        zreduce(f.to_vec(), &m)
    );

    let r = lifted.len();
    for size in 1..=r / 2 {
        for subset in Combinations::new(r, size) {
            let mut cand = vec![lc.clone()];
            for &i in &subset {
                cand = zmul(&cand, &lifted[i], &m);
            }
            let cand: Vec<BigInt> = cand.iter().map(|c| symmetric(c, &m)).collect();
            let cont = content(&cand);
            let prim: Vec<BigInt> = cand.iter().map(|c| c / &cont).collect();
            if int_exact_div(f, &prim).is_some() {
                return Some(prim);
            }
        }
    }
    None
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_i64(c)
    }

    #[test]
    fn examples() {
        assert_eq!(is_irreducible_over_rationals(&p(&[-1, 0, 1])), Ok(false));
        assert_eq!(is_irreducible_over_rationals(&p(&[-2, 0, 1])), Ok(true));
        assert_eq!(is_irreducible_over_rationals(&p(&[1, 0, 0, 0, 1])), Ok(true));
        assert_eq!(is_irreducible_over_rationals(&p(&[7])), Err(PolyError::Constant));
    }

    #[test]
    fn repeated_factor_is_reducible() {
        assert_eq!(is_irreducible_over_rationals(&p(&[1, -2, 1])), Ok(false));
    }

    #[test]
    fn swinnerton_dyer_like_cases() {
        // x^4 - 10x^2 + 1, minimal polynomial of sqrt2 + sqrt3: reducible mod every prime
        assert_eq!(is_irreducible_over_rationals(&p(&[1, 0, -10, 0, 1])), Ok(true));
        // (x^2 - 2)(x^2 - 3)
        let f = p(&[6, 0, -5, 0, 1]);
        let w = find_rational_factor(&f).unwrap().unwrap();
        assert!(f.rem(&w).unwrap().is_zero());
        // non-monic: (2x^2 + 1)(3x^3 - x + 5)
        let f = &p(&[1, 0, 2]) * &p(&[5, -1, 0, 3]);
        let w = find_rational_factor(&f).unwrap().unwrap();
        assert!(f.rem(&w).unwrap().is_zero());
        assert!(matches!(w.degree(), Some(2) | Some(3)));
    }

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_5, Phi_8, Phi_12 are irreducible; x^6 - 1 is not
        assert_eq!(is_irreducible_over_rationals(&p(&[1, 1, 1, 1, 1])), Ok(true));
        assert_eq!(is_irreducible_over_rationals(&p(&[1, 0, -1, 0, 1])), Ok(true));
        assert_eq!(is_irreducible_over_rationals(&p(&[-1, 0, 0, 0, 0, 0, 1])), Ok(false));
        // x^8 + 1 = Phi_16
        assert_eq!(
            is_irreducible_over_rationals(&p(&[1, 0, 0, 0, 0, 0, 0, 0, 1])),
            Ok(true)
        );
    }

    #[test]
    fn rational_coefficients() {
        let f = RationalPoly::new(vec![
            BigRational::new((-1).into(), 2.into()),
            BigRational::zero(),
            BigRational::new(1.into(), 4.into()),
        ]);
        // x^2/4 - 1/2 ~ x^2 - 2
        assert_eq!(is_irreducible_over_rationals(&f), Ok(true));
    }

    #[test]
    fn combinations_enumerate() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
    }
}
