//! Non-degenerate quadratic forms over ℚ and their classification by
//! dimension, discriminant, signature and Hasse invariants.
//!
//! Hasse invariants use the convention `c_v(<a_1..a_n>) = prod_{i<j} (a_i, a_j)_v`.
//! Both sides of every comparison use the same convention, so equivalence
//! does not depend on it.
//!
//! Places are only inspected where a symbol can be `-1`: `∞`, `2`, and the
//! primes dividing the determinant of the form scaled to an integral Gram
//! matrix. At every other prime the scaled lattice is unimodular and all
//! local invariants are trivial.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::arith::{self, is_prime, split_valuation, legendre_symbol, mod_u64, ArithError};
use crate::algebra::{ExactMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("gram matrix must be symmetric")]
    NotSymmetric,
    #[error("degenerate form (determinant zero)")]
    Degenerate,
    #[error("form must have dimension at least 1")]
    Empty,
    #[error("{0} is not a prime place")]
    CompositePlace(u64),
    #[error("basis does not diagonalize the form")]
    NotDiagonalizing,
    #[error("Hilbert symbol arguments must be nonzero")]
    ZeroArgument,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A place of ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inf" | "infinity" | "∞" => Ok(Place::Infinity),
            _ => s.parse().map(Place::Prime).map_err(|e| format!("bad place {s:?}: {e}")),
        }
    }
}

/// A non-degenerate symmetric bilinear form given by its Gram matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymmetricForm {
    gram: ExactMatrix,
}

impl SymmetricForm {
    pub fn new(gram: ExactMatrix) -> Result<Self, FormError> {
        if gram.rows() == 0 {
            return Err(FormError::Empty);
        }
        if !gram.is_symmetric() {
            return Err(FormError::NotSymmetric);
        }
        if gram.det()?.is_zero() {
            return Err(FormError::Degenerate);
        }
        Ok(SymmetricForm { gram })
    }

    pub fn diagonal(entries: &[BigRational]) -> Result<Self, FormError> {
        Self::new(ExactMatrix::diagonal(entries))
    }

    pub fn from_i64_diagonal(entries: &[i64]) -> Result<Self, FormError> {
        let e: Vec<BigRational> = entries.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Self::diagonal(&e)
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigRational {
        self.gram.det().expect("square")
    }

    /// The form `Q^T G Q`.
    pub fn transform(&self, q: &ExactMatrix) -> Result<Self, FormError> {
        Self::new(q.congruent(&self.gram)?)
    }

    /// `x^T G x`
    pub fn evaluate(&self, x: &[BigRational]) -> BigRational {
        let gx = self.gram.mul_vec(x);
        x.iter().zip(&gx).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Debug for SymmetricForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymmetricForm({:?})", self.gram)
    }
}

/// Complete invariants of a rational quadratic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittInvariants {
    pub dim: usize,
    /// Signed squarefree representative of the determinant's square class.
    pub disc: BigInt,
    /// (positive, negative)
    pub signature: (usize, usize),
    /// Places where the Hasse invariant is `-1`.
    pub hasse_minus_one_at: BTreeSet<Place>,
}

impl WittInvariants {
    pub fn hasse_at(&self, place: Place) -> i8 {
        if self.hasse_minus_one_at.contains(&place) {
            -1
        } else {
            1
        }
    }
}

// Square-class representative of a nonzero rational as an integer: num * den.
fn class_integer(a: &BigRational) -> BigInt {
    a.numer() * a.denom()
}

fn hilbert_integers(a: &BigInt, b: &BigInt, place: Place) -> i8 {
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, v) = split_valuation(b, 2);
            let eps = |x: &BigInt| u32::from(mod_u64(x, 4) == 3);
            let omega = |x: &BigInt| u32::from(matches!(mod_u64(x, 8), 3 | 5));
            let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_valuation(a, p);
            let (beta, v) = split_valuation(b, p);
            let mut s: i8 = 1;
            if (alpha * beta) % 2 == 1 && p % 4 == 3 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= legendre_symbol(&u, p).expect("odd prime");
            }
            if alpha % 2 == 1 {
                s *= legendre_symbol(&v, p).expect("odd prime");
            }
            s
        }
    }
}

/// Hilbert symbol `(a, b)_v`: `+1` iff `z^2 = a x^2 + b y^2` has a nontrivial
/// solution over the completion of ℚ at `v`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> Result<i8, FormError> {
    if a.is_zero() || b.is_zero() {
        return Err(FormError::ZeroArgument);
    }
    if let Place::Prime(p) = place {
        if !is_prime(p) {
            return Err(FormError::CompositePlace(p));
        }
    }
    Ok(hilbert_integers(&class_integer(a), &class_integer(b), place))
}

/// Primes dividing `n` (nonzero). Integers beyond `2^63` are accepted when
/// trial division up to `10^6` followed by taking exact roots leaves a
/// cofactor within the factorization limit.
pub(crate) fn prime_support(n: &BigInt) -> Result<BTreeSet<u64>, ArithError> {
    let mut out = BTreeSet::new();
    let mut c = n.abs();
    if c.is_zero() {
        return Err(ArithError::Zero);
    }
    if c <= BigInt::from(arith::FACTOR_LIMIT) {
        out.extend(arith::factorize(&c)?.primes());
        return Ok(out);
    }
    let mut d = 2u64;
    while d <= 1_000_000 && c > BigInt::from(arith::FACTOR_LIMIT) {
        if mod_u64(&c, d) == 0 {
            out.insert(d);
            while mod_u64(&c, d) == 0 {
                c /= d;
            }
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    loop {
        if c <= BigInt::from(arith::FACTOR_LIMIT) {
            if !c.is_one() {
                out.extend(arith::factorize(&c)?.primes());
            }
            return Ok(out);
        }
        let root = (2..c.bits() as u32).find_map(|k| {
            let r = c.nth_root(k);
            (r.pow(k) == c).then_some(r)
        });
        match root {
            Some(r) => c = r,
            None => return Err(ArithError::TooLarge(n.clone())),
        }
    }
}

/// `∞`, `2`, and the primes dividing `det(S G S)` where `S` is diagonal and
/// `s_i` clears the denominators of row `i`, so `S G S` is integral.
fn relevant_places(gram: &ExactMatrix) -> Result<BTreeSet<Place>, FormError> {
    let s: Vec<BigInt> = (0..gram.rows())
        .map(|i| gram.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())))
        .collect();
    let scale: BigInt = s.iter().product();
    let det = (gram.det()? * BigRational::from_integer(&scale * &scale)).to_integer();
    let mut places: BTreeSet<Place> = prime_support(&det)?.into_iter().map(Place::Prime).collect();
    places.insert(Place::Prime(2));
    places.insert(Place::Infinity);
    Ok(places)
}

fn squarefree_class(det: &BigRational, primes: &BTreeSet<Place>) -> BigInt {
    let n = class_integer(det);
    let mut out = BigInt::from(if n.is_negative() { -1 } else { 1 });
    for place in primes {
        if let Place::Prime(p) = *place {
            if split_valuation(&n, p).0 % 2 == 1 {
                out *= p;
            }
        }
    }
    out
}

fn hasse_of_diagonal(entries: &[BigRational], place: Place) -> i8 {
    let ints: Vec<BigInt> = entries.iter().map(class_integer).collect();
    let mut c = 1;
    for i in 0..ints.len() {
        for j in i + 1..ints.len() {
            c *= hilbert_integers(&ints[i], &ints[j], place);
        }
    }
    c
}

struct LocalData {
    diag: Vec<BigRational>,
    places: BTreeSet<Place>,
    invariants: WittInvariants,
}

fn local_data(form: &SymmetricForm, diag: Vec<BigRational>) -> Result<LocalData, FormError> {
    if diag.iter().any(Zero::is_zero) {
        return Err(FormError::Degenerate);
    }
    let places = relevant_places(&form.gram)?;
    let det: BigRational = diag.iter().product();
    let disc = squarefree_class(&det, &places);
    let pos = diag.iter().filter(|x| x.is_positive()).count();
    let signature = (pos, diag.len() - pos);
    let hasse_minus_one_at = places
        .iter()
        .copied()
        .filter(|&v| hasse_of_diagonal(&diag, v) == -1)
        .collect();
    Ok(LocalData {
        diag,
        places,
        invariants: WittInvariants { dim: form.dim(), disc, signature, hasse_minus_one_at },
    })
}

fn default_local_data(form: &SymmetricForm) -> Result<LocalData, FormError> {
    let (_, diag) = form.gram.congruence_diagonalize()?;
    local_data(form, diag)
}

/// Classifying invariants of `form`, computed from a congruence
/// diagonalization.
pub fn invariants(form: &SymmetricForm) -> Result<WittInvariants, FormError> {
    default_local_data(form).map(|d| d.invariants)
}

/// Invariants read off the caller's diagonalizing basis: `q` must be
/// invertible with `q^T G q` diagonal.
pub fn invariants_with_basis(form: &SymmetricForm, q: &ExactMatrix) -> Result<WittInvariants, FormError> {
    let d = q.congruent(&form.gram)?;
    if !d.is_diagonal() {
        return Err(FormError::NotDiagonalizing);
    }
    local_data(form, d.diagonal_entries()).map(|d| d.invariants)
}

/// Hasse–Minkowski: rational forms are isometric iff dimension,
/// discriminant, signature and every Hasse invariant agree.
pub fn equivalent(f1: &SymmetricForm, f2: &SymmetricForm) -> Result<bool, FormError> {
    Ok(invariants(f1)? == invariants(f2)?)
}

/// Whether the squarefree integer `d` is a square in `ℚ_p`.
fn is_local_square(d: &BigInt, p: u64) -> bool {
    let (v, u) = split_valuation(d, p);
    if v % 2 == 1 {
        return false;
    }
    if p == 2 {
        mod_u64(&u, 8) == 1
    } else {
        legendre_symbol(&u, p).expect("odd prime") == 1
    }
}

/// Whether the form has a nontrivial rational zero, decided place by place.
pub fn is_isotropic(form: &SymmetricForm) -> Result<bool, FormError> {
    let data = default_local_data(form)?;
    let n = form.dim();
    let (pos, neg) = data.invariants.signature;
    let indefinite = pos > 0 && neg > 0;
    let d = &data.invariants.disc;
    Ok(match n {
        1 => false,
        2 => *d == BigInt::from(-1),
        _ if n >= 5 => indefinite,
        _ => {
            indefinite
                && data.places.iter().all(|&v| {
                    let Place::Prime(p) = v else { return true };
                    let c = hasse_of_diagonal(&data.diag, v);
                    if n == 3 {
                        c == hilbert_integers(&BigInt::from(-1), &-d, v)
                    } else {
                        !is_local_square(d, p) || c == hilbert_integers(&BigInt::from(-1), &BigInt::from(-1), v)
                    }
                })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn diag(e: &[i64]) -> SymmetricForm {
        SymmetricForm::from_i64_diagonal(e).unwrap()
    }

    #[test]
    fn hilbert_examples() {
        let h = |a: i64, b: i64, v| hilbert_symbol(&q(a), &q(b), v).unwrap();
        assert_eq!(h(1, 7, Place::Prime(3)), 1);
        assert_eq!(h(1, -5, Place::Infinity), 1);
        assert_eq!(h(-1, -1, Place::Infinity), -1);
        assert_eq!(h(-1, -1, Place::Prime(2)), -1);
        assert_eq!(h(2, 3, Place::Prime(3)), -1);
        assert_eq!(h(2, 3, Place::Prime(2)), -1);
        assert_eq!(h(2, 3, Place::Prime(5)), 1);
        assert_eq!(hilbert_symbol(&q(2), &q(3), Place::Prime(9)), Err(FormError::CompositePlace(9)));
        assert_eq!(hilbert_symbol(&q(0), &q(3), Place::Infinity), Err(FormError::ZeroArgument));
    }

    #[test]
    fn invariant_examples() {
        let inv = invariants(&diag(&[1, 1])).unwrap();
        assert_eq!((inv.dim, inv.disc.clone(), inv.signature), (2, 1.into(), (2, 0)));
        assert!(inv.hasse_minus_one_at.is_empty());

        let inv = invariants(&diag(&[1, -1])).unwrap();
        assert_eq!((inv.disc.clone(), inv.signature), ((-1).into(), (1, 1)));
        assert!(inv.hasse_minus_one_at.is_empty());

        let inv = invariants(&diag(&[2, 3])).unwrap();
        assert_eq!((inv.disc.clone(), inv.signature), (6.into(), (2, 0)));
        let expect: BTreeSet<Place> = [Place::Prime(2), Place::Prime(3)].into();
        assert_eq!(inv.hasse_minus_one_at, expect);
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent(&diag(&[1, 1]), &diag(&[2, 2])).unwrap());
        assert!(!equivalent(&diag(&[1, 1]), &diag(&[1, -1])).unwrap());
        let f = SymmetricForm::new(ExactMatrix::from_i64(&[&[2, 1], &[1, 3]])).unwrap();
        let t = ExactMatrix::from_i64(&[&[1, 4], &[-2, 3]]);
        assert!(equivalent(&f, &f.transform(&t).unwrap()).unwrap());
    }

    #[test]
    fn isotropy_examples() {
        assert!(is_isotropic(&diag(&[1, -1])).unwrap());
        assert!(!is_isotropic(&diag(&[1, 1])).unwrap());
        assert!(!is_isotropic(&diag(&[1, 1, -3])).unwrap());
        assert!(is_isotropic(&diag(&[1, 1, -2])).unwrap());
        assert!(!is_isotropic(&diag(&[1, 1, 1, 1])).unwrap());
        assert!(is_isotropic(&diag(&[1, 1, 1, -1])).unwrap());
        // <1,1,1,-7>: anisotropic at 2 (sums of three squares miss 7 mod 8)
        assert!(!is_isotropic(&diag(&[1, 1, 1, -7])).unwrap());
        assert!(is_isotropic(&diag(&[1, 1, 1, 1, -7])).unwrap());
        assert!(!is_isotropic(&diag(&[5])).unwrap());
    }

    #[test]
    fn rejects_bad_forms() {
        assert_eq!(SymmetricForm::from_i64_diagonal(&[1, 0]), Err(FormError::Degenerate));
        assert_eq!(
            SymmetricForm::new(ExactMatrix::from_i64(&[&[1, 2], &[0, 1]])),
            Err(FormError::NotSymmetric)
        );
        assert_eq!(SymmetricForm::from_i64_diagonal(&[]), Err(FormError::Empty));
    }

    #[test]
    fn support_beyond_factor_limit() {
        let p = BigInt::from(1_000_000_007u64);
        let n = &p * &p * &p * &p * 12;
        let s = prime_support(&n).unwrap();
        assert_eq!(s, [2, 3, 1_000_000_007].into());
    }
}
