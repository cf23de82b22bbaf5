//! Galois-group evidence for characteristic polynomials `charpoly(A D)` of a
//! random symmetric `A` against a fixed nonzero diagonal `D`: Frobenius cycle
//! types sampled prime by prime, a sound `S_n` criterion, and the block
//! factorization used when one row of `A` is switched off.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::arith::{is_prime, next_prime};
use crate::algebra::{
    cycle_type_mod_p, is_irreducible_over_rationals, BigInt, ExactMatrix, MatrixError, ModPolyError,
    PolyError, RationalPoly,
};

/// Smallest prime used by [`generic_experiment`].
pub const DEFAULT_PRIME_FLOOR: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("polynomial has a repeated root")]
    NotSquarefree,
    #[error("polynomial must have degree at least 1")]
    Constant,
    #[error("diagonal entry {0} is zero")]
    ZeroDiagonal(usize),
    #[error("diagonal must be nonempty")]
    Empty,
    #[error("{0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Observed factorization patterns of `f` modulo successive good primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTypeSample {
    pub f: RationalPoly,
    /// Ascending degree lists and how often each occurred.
    pub entries: BTreeMap<Vec<usize>, usize>,
    pub primes_used: usize,
    pub primes_skipped: usize,
}

impl CycleTypeSample {
    pub fn count(&self, cycle_type: &[usize]) -> usize {
        self.entries.get(cycle_type).copied().unwrap_or(0)
    }

    pub fn frequency(&self, cycle_type: &[usize]) -> f64 {
        if self.primes_used == 0 {
            return 0.0;
        }
        self.count(cycle_type) as f64 / self.primes_used as f64
    }

    fn empty(f: RationalPoly) -> Self {
        CycleTypeSample { f, entries: BTreeMap::new(), primes_used: 0, primes_skipped: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SnVerdict {
    Certified,
    Inconclusive,
}

impl SnVerdict {
    pub fn name(self) -> &'static str {
        match self {
            SnVerdict::Certified => "Certified",
            SnVerdict::Inconclusive => "Inconclusive",
        }
    }
}

/// Outcome of one random specialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecReport {
    pub n: usize,
    pub d: Vec<BigRational>,
    pub seed: u64,
    pub a: ExactMatrix,
    pub f: RationalPoly,
    pub separable: bool,
    pub irreducible: bool,
    pub sn_verdict: SnVerdict,
    pub cycle_stats: CycleTypeSample,
}

/// Factors `f` modulo the first `prime_budget` good primes `p >= prime_floor`.
/// Primes dividing the leading coefficient or discriminant are skipped and
/// counted.
pub fn sample_cycle_types(
    f: &RationalPoly,
    prime_budget: usize,
    prime_floor: u64,
) -> Result<CycleTypeSample, GaloisError> {
    if !f.is_separable().map_err(|_| GaloisError::Constant)? {
        return Err(GaloisError::NotSquarefree);
    }
    let mut sample = CycleTypeSample::empty(f.clone());
    let mut p = if is_prime(prime_floor) { prime_floor } else { next_prime(prime_floor) };
    while sample.primes_used < prime_budget {
        let need = prime_budget - sample.primes_used;
        let mut batch = Vec::with_capacity(need);
        for _ in 0..need {
            batch.push(p);
            p = next_prime(p);
        }
        let types: Vec<_> = batch.par_iter().map(|&q| cycle_type_mod_p(f, q)).collect();
        for t in types {
            match t {
                Ok(t) => {
                    *sample.entries.entry(t).or_default() += 1;
                    sample.primes_used += 1;
                }
                Err(ModPolyError::BadPrime(_)) => sample.primes_skipped += 1,
                Err(_) => return Err(GaloisError::Constant),
            }
        }
    }
    Ok(sample)
}

fn is_transposition(t: &[usize], n: usize) -> bool {
    t.len() == n - 1 && t.iter().filter(|&&k| k == 2).count() == 1
}

/// Sound sufficient test for `Gal(f) = S_n`, assuming `f` is irreducible.
///
/// A transitive group containing a transposition and a `q`-cycle for a prime
/// `n/2 < q <= n` is `S_n`. A Frobenius type with such a part `q` yields a
/// `q`-cycle on raising to the product of the other parts, which are all
/// smaller than `q`. For `n <= 3` a transposition alone suffices.
pub fn sn_certificate(sample: &CycleTypeSample, n: usize) -> SnVerdict {
    if n <= 1 {
        return SnVerdict::Certified;
    }
    let has_transposition = sample.entries.keys().any(|t| is_transposition(t, n));
    let has_long_prime = n <= 3
        || sample
            .entries
            .keys()
            .any(|t| t.iter().any(|&q| 2 * q > n && is_prime(q as u64)));
    if has_transposition && has_long_prime {
        SnVerdict::Certified
    } else {
        SnVerdict::Inconclusive
    }
}

fn check_diagonal(d: &[BigRational]) -> Result<(), GaloisError> {
    if d.is_empty() {
        return Err(GaloisError::Empty);
    }
    match d.iter().position(Zero::is_zero) {
        Some(i) => Err(GaloisError::ZeroDiagonal(i)),
        None => Ok(()),
    }
}

/// Symmetric integer matrix with entries uniform in `[-bound, bound]`.
pub fn random_symmetric(n: usize, bound: u64, rng: &mut impl Rng) -> ExactMatrix {
    let b = bound as i64;
    let mut a = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = BigRational::from_integer(BigInt::from(rng.gen_range(-b..=b)));
            a[(i, j)] = x.clone();
            a[(j, i)] = x;
        }
    }
    a
}

/// Samples `A`, forms `f = charpoly(A D)` and reports separability,
/// irreducibility and the `S_n` verdict from `prime_budget` primes above
/// [`DEFAULT_PRIME_FLOOR`].
pub fn generic_experiment(
    d: &[BigRational],
    coeff_bound: u64,
    prime_budget: usize,
    seed: u64,
) -> Result<SpecReport, GaloisError> {
    check_diagonal(d)?;
    let n = d.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_symmetric(n, coeff_bound, &mut rng);
    let f = a.checked_mul(&ExactMatrix::diagonal(d))?.charpoly()?;
    let separable = f.is_separable()?;
    let irreducible = is_irreducible_over_rationals(&f)?;
    let cycle_stats = if separable {
        sample_cycle_types(&f, prime_budget, DEFAULT_PRIME_FLOOR)?
    } else {
        CycleTypeSample::empty(f.clone())
    };
    let sn_verdict = if irreducible { sn_certificate(&cycle_stats, n) } else { SnVerdict::Inconclusive };
    Ok(SpecReport { n, d: d.to_vec(), seed, a, f, separable, irreducible, sn_verdict, cycle_stats })
}

/// With the first row and column of `T` zero off the diagonal,
/// `charpoly(T D) = (x - d_1 t_11) charpoly(T' D')` for the trailing blocks.
/// Returns whether that identity holds exactly.
pub fn block_split_check(d: &[BigRational], t: &ExactMatrix) -> Result<bool, GaloisError> {
    check_diagonal(d)?;
    let n = d.len();
    if t.rows() != n || t.cols() != n {
        return Err(GaloisError::Precondition("T must be square of the same size as D"));
    }
    if !t.is_symmetric() {
        return Err(GaloisError::Precondition("T must be symmetric"));
    }
    if (1..n).any(|j| !t[(0, j)].is_zero()) {
        return Err(GaloisError::Precondition("first row of T must vanish off the diagonal"));
    }
    let whole = t.checked_mul(&ExactMatrix::diagonal(d))?.charpoly()?;
    let linear = RationalPoly::linear_root(&d[0] * &t[(0, 0)]);
    let rest = if n == 1 {
        RationalPoly::one()
    } else {
        let rows: Vec<Vec<BigRational>> = (1..n).map(|i| t.row(i)[1..].to_vec()).collect();
        let lower = ExactMatrix::from_rows(rows)?;
        lower.checked_mul(&ExactMatrix::diagonal(&d[1..]))?.charpoly()?
    };
    Ok(whole == &linear * &rest)
}
