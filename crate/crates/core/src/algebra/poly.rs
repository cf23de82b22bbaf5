//! Dense univariate polynomials over ℚ, lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial must have degree at least 1")]
    Constant,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// A polynomial with rational coefficients. The coefficient vector never has
/// trailing zeros, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `x - c`
    pub fn linear_root(c: BigRational) -> Self {
        Self::new(vec![-c, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn make_monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        let d = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let lc_inv = divisor.coeffs[d].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(d);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// True iff `gcd(f, f')` is constant.
    pub fn is_separable(&self) -> Result<bool, PolyError> {
        match self.degree() {
            None | Some(0) => Err(PolyError::Constant),
            Some(_) => Ok(self.gcd(&self.derivative()).degree() == Some(0)),
        }
    }

    /// The integer polynomial with content 1 and positive leading coefficient
    /// that is a rational multiple of `self`.
    pub fn primitive_integer_part(&self) -> Vec<BigInt> {
        let denom_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return ints;
        }
        let sign = if ints.last().is_some_and(Signed::is_negative) { -1 } else { 1 };
        ints.into_iter().map(|c| c / &content * sign).collect()
    }

    /// Power sums of the roots: entry `k` is `Tr(x^k)` on `ℚ[x]/(self)` for
    /// `k = 0..=count`, via Newton's identities.
    pub fn power_traces(&self, count: usize) -> Result<Vec<BigRational>, PolyError> {
        let n = self.degree().filter(|&n| n >= 1).ok_or(PolyError::Constant)?;
        if !self.is_monic() {
            return Err(PolyError::NotMonic);
        }
        // f = x^n + c_{n-1} x^{n-1} + ... + c_0; write e_j-style coefficients
        // a_j = coeff of x^{n-j}, so p_k + a_1 p_{k-1} + ... + k a_k = 0 (k <= n)
        // and p_k + a_1 p_{k-1} + ... + a_n p_{k-n} = 0 (k > n).
        let a: Vec<BigRational> = (0..=n).map(|j| self.coeffs[n - j].clone()).collect();
        let mut p = Vec::with_capacity(count + 1);
        p.push(rat(n as i64));
        for k in 1..=count {
            let mut s = BigRational::zero();
            for j in 1..=(k - 1).min(n) {
                s += &a[j] * &p[k - j];
            }
            if k <= n {
                s += &a[k] * rat(k as i64);
            }
            p.push(-s);
        }
        Ok(p)
    }

    /// `Tr_{F/ℚ}(g)` for `F = ℚ[x]/(self)`.
    pub fn trace_of_element(&self, g: &Self) -> Result<BigRational, PolyError> {
        let n = self.degree().filter(|&n| n >= 1).ok_or(PolyError::Constant)?;
        let traces = self.power_traces(n.saturating_sub(1))?;
        let reduced = g.rem(self)?;
        Ok(reduced
            .coeffs
            .iter()
            .zip(&traces)
            .map(|(c, t)| c * t)
            .sum())
    }

    /// Discriminant, `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigRational, PolyError> {
        let n = self.degree().filter(|&n| n >= 1).ok_or(PolyError::Constant)?;
        let lc = self.coeffs[n].clone();
        let res = resultant(self, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { rat(1) } else { rat(-1) };
        Ok(sign * res / lc)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

/// Resultant by the Euclidean remainder sequence over ℚ.
pub fn resultant(f: &RationalPoly, g: &RationalPoly) -> BigRational {
    let (Some(mut m), Some(mut n)) = (f.degree(), g.degree()) else {
        return BigRational::zero();
    };
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut acc = BigRational::one();
    loop {
        if n == 0 {
            return acc * b.coeffs[0].pow(m as i32);
        }
        let r = a.rem(&b).expect("nonzero divisor");
        let Some(k) = r.degree() else {
            return BigRational::zero();
        };
        // Res(a, b) = (-1)^{mn} lc(b)^{m-k} Res(b, r)
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= b.coeffs[n].pow((m - k) as i32);
        a = b;
        b = r;
        m = n;
        n = k;
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalPoly {
            type Output = RationalPoly;
            fn $m(self, rhs: RationalPoly) -> RationalPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
