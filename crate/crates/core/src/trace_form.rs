//! Realization of rational quadratic forms as scaled trace forms
//! `x -> Tr_{F/ℚ}(α x^2)`, with exact certificates.
//!
//! For symmetric `A` and `D` the matrix `M = AD` is self-adjoint for `D`
//! (`M^T D = D M`). If its characteristic polynomial `f` is irreducible, every
//! nonzero `v` is cyclic, and in the basis `v, Mv, ..., M^{n-1}v` the form `D`
//! becomes the Hankel matrix `h_{i+j} = v^T D M^{i+j} v`. That sequence is
//! `m -> Tr(α x^m)` for exactly one `α` in `F = ℚ[x]/(f)`.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{
    is_irreducible_over_rationals, ExactMatrix, MatrixError, PolyError, RationalPoly,
};
use crate::quadform::{FormError, SymmetricForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceFormError {
    #[error("alpha is zero modulo f")]
    AlphaZero,
    #[error("f must be monic, separable and of degree at least 1")]
    BadModulus,
    #[error("expected {expected} trace values, got {got}")]
    SequenceLength { expected: usize, got: usize },
    #[error("trace sequence is not of the form Tr(alpha x^m) (fails at m = {0})")]
    InconsistentHankel(usize),
    #[error("no admissible A found after {tries} candidates")]
    SearchExhausted { tries: u64 },
    #[error("degenerate form")]
    DegenerateForm,
    #[error("characteristic polynomial of AD is not irreducible")]
    NotIrreducible,
    #[error("invalid search policy: {0}")]
    BadPolicy(&'static str),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Witness that `d` is isometric to the scaled trace form of `alpha` on
/// `ℚ[x]/(f)`: `P^T D P = gram`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub d: SymmetricForm,
    pub a: ExactMatrix,
    pub f: RationalPoly,
    pub alpha: RationalPoly,
    pub p: ExactMatrix,
    pub gram: ExactMatrix,
    pub seed: u64,
    pub tries: u64,
}

/// Randomized search parameters for [`realize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchPolicy {
    pub seed: u64,
    pub coeff_bound_schedule: Vec<u64>,
    pub max_tries_per_bound: u64,
}

impl SearchPolicy {
    pub fn new(seed: u64, schedule: Vec<u64>, tries: u64) -> Result<Self, TraceFormError> {
        if schedule.is_empty() || schedule[0] == 0 {
            return Err(TraceFormError::BadPolicy("schedule must start with a positive bound"));
        }
        if schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TraceFormError::BadPolicy("bounds must be strictly increasing"));
        }
        if tries == 0 {
            return Err(TraceFormError::BadPolicy("tries per bound must be positive"));
        }
        Ok(SearchPolicy { seed, coeff_bound_schedule: schedule, max_tries_per_bound: tries })
    }

    pub fn with_seed(seed: u64) -> Self {
        SearchPolicy { seed, ..Self::default() }
    }
}

impl Default for SearchPolicy {
    fn default() -> Self {
        SearchPolicy { seed: 0, coeff_bound_schedule: vec![1, 2, 3, 5, 9], max_tries_per_bound: 200 }
    }
}

/// The first clause of [`verify_certificate`] that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    Shape,
    ANotSymmetric,
    NotSeparable,
    NotIrreducible,
    CharpolyMismatch,
    AlphaZero,
    GramMismatch,
    PSingular,
    CongruenceMismatch,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::Shape => "shape",
            Clause::ANotSymmetric => "a_not_symmetric",
            Clause::NotSeparable => "not_separable",
            Clause::NotIrreducible => "not_irreducible",
            Clause::CharpolyMismatch => "charpoly_mismatch",
            Clause::AlphaZero => "alpha_zero",
            Clause::GramMismatch => "gram_mismatch",
            Clause::PSingular => "p_singular",
            Clause::CongruenceMismatch => "congruence_mismatch",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn require_modulus(f: &RationalPoly) -> Result<usize, TraceFormError> {
    match f.degree() {
        Some(n) if n >= 1 && f.is_monic() => Ok(n),
        _ => Err(TraceFormError::BadModulus),
    }
}

// Tr(x^j) for j = 0..=2n-2+extra
fn traces(f: &RationalPoly, n: usize, extra: usize) -> Result<Vec<BigRational>, TraceFormError> {
    Ok(f.power_traces(2 * n - 2 + extra)?)
}

/// Gram matrix of `x -> Tr(α x^2)` on `ℚ[x]/(f)` in the basis `1, x, ..., x^{n-1}`.
pub fn scaled_trace_gram(f: &RationalPoly, alpha: &RationalPoly) -> Result<ExactMatrix, TraceFormError> {
    let n = require_modulus(f)?;
    let alpha = alpha.rem(f)?;
    if alpha.is_zero() {
        return Err(TraceFormError::AlphaZero);
    }
    let s = traces(f, n, n - 1)?;
    let h: Vec<BigRational> = (0..2 * n - 1)
        .map(|m| alpha.coeffs().iter().enumerate().map(|(k, a)| a * &s[m + k]).sum())
        .collect();
    let mut g = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = h[i + j].clone();
        }
    }
    Ok(g)
}

/// The unique `α` of degree `< n` with `Tr(α x^m) = h_m` for `m < n`,
/// checked against the remaining `h_n..h_{2n-2}`.
pub fn solve_alpha(f: &RationalPoly, h: &[BigRational]) -> Result<RationalPoly, TraceFormError> {
    let n = require_modulus(f)?;
    if h.len() != 2 * n - 1 {
        return Err(TraceFormError::SequenceLength { expected: 2 * n - 1, got: h.len() });
    }
    let s = traces(f, n, n - 1)?;
    let mut t = ExactMatrix::zeros(n, n);
    for m in 0..n {
        for k in 0..n {
            t[(m, k)] = s[m + k].clone();
        }
    }
    let a = t.solve(&h[..n]).map_err(|e| match e {
        MatrixError::Singular => TraceFormError::BadModulus,
        e => e.into(),
    })?;
    for (m, hm) in h.iter().enumerate().skip(n) {
        let tr: BigRational = a.iter().enumerate().map(|(k, ak)| ak * &s[m + k]).sum();
        if &tr != hm {
            return Err(TraceFormError::InconsistentHankel(m));
        }
    }
    Ok(RationalPoly::new(a))
}

/// Builds the certificate for a given symmetric `a` and start vector `v`.
/// Fails unless `charpoly(a d)` is irreducible.
pub fn certify(d: &SymmetricForm, a: &ExactMatrix, v: &[BigRational]) -> Result<Certificate, TraceFormError> {
    if !a.is_symmetric() || a.rows() != d.dim() {
        return Err(MatrixError::NotSymmetric.into());
    }
    let m = a.checked_mul(d.gram())?;
    let f = m.charpoly()?;
    if !is_irreducible_over_rationals(&f)? {
        return Err(TraceFormError::NotIrreducible);
    }
    let p = m.krylov_matrix(v)?;
    let gram = p.congruent(d.gram())?;
    let n = d.dim();
    let h: Vec<BigRational> = (0..2 * n - 1)
        .map(|k| if k < n { gram[(0, k)].clone() } else { gram[(n - 1, k + 1 - n)].clone() })
        .collect();
    let alpha = solve_alpha(&f, &h)?;
    let cert = Certificate { d: d.clone(), a: a.clone(), f, alpha, p, gram, seed: 0, tries: 0 };
    debug_assert_eq!(verify_certificate(&cert), Ok(()));
    Ok(cert)
}

fn sample_symmetric(n: usize, bound: u64, seed: u64, counter: u64) -> ExactMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(counter);
    let b = bound as i64;
    let mut a = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = BigRational::from_integer(rng.gen_range(-b..=b).into());
            a[(i, j)] = x.clone();
            a[(j, i)] = x;
        }
    }
    a
}

fn admissible(a: &ExactMatrix, d: &ExactMatrix) -> bool {
    let Ok(f) = a.checked_mul(d).and_then(|m| m.charpoly()) else { return false };
    matches!(f.is_separable(), Ok(true)) && matches!(is_irreducible_over_rationals(&f), Ok(true))
}

/// Searches for symmetric `A` with `charpoly(A D)` irreducible and returns
/// the resulting certificate.
///
/// `D` is first diagonalized as `Q^T D Q = D'`; the search runs against `D'`
/// and the witness is pulled back with `A = Q A' Q^T`, `v = Q e_1`. The
/// accepted candidate is the one with the smallest counter in the seeded
/// candidate stream, so results do not depend on thread scheduling.
pub fn realize(d: &SymmetricForm, policy: &SearchPolicy) -> Result<Certificate, TraceFormError> {
    let n = d.dim();
    let (q, diag) = d.gram().congruence_diagonalize()?;
    if diag.iter().any(Zero::is_zero) {
        return Err(TraceFormError::DegenerateForm);
    }
    let v = q.column(0);
    if n == 1 {
        let mut cert = certify(d, &ExactMatrix::identity(1), &v)?;
        cert.seed = policy.seed;
        return Ok(cert);
    }
    let d_diag = ExactMatrix::diagonal(&diag);
    let per = policy.max_tries_per_bound;
    for (level, &bound) in policy.coeff_bound_schedule.iter().enumerate() {
        let base = level as u64 * per;
        let found = (0..per).into_par_iter().find_first(|&t| {
            admissible(&sample_symmetric(n, bound, policy.seed, base + t), &d_diag)
        });
        if let Some(t) = found {
            let a_diag = sample_symmetric(n, bound, policy.seed, base + t);
            let a = q.transpose().congruent(&a_diag)?;
            let mut cert = certify(d, &a, &v)?;
            cert.seed = policy.seed;
            cert.tries = base + t + 1;
            return Ok(cert);
        }
    }
    Err(TraceFormError::SearchExhausted { tries: per * policy.coeff_bound_schedule.len() as u64 })
}

/// Checks every clause of the certificate exactly, in order, and reports the
/// first one that fails.
pub fn verify_certificate(c: &Certificate) -> Result<(), Clause> {
    let n = c.d.dim();
    let square = |m: &ExactMatrix| m.rows() == n && m.cols() == n;
    if !square(&c.a) || !square(&c.p) || !square(&c.gram) || c.f.degree() != Some(n) || !c.f.is_monic() {
        return Err(Clause::Shape);
    }
    if !c.a.is_symmetric() {
        return Err(Clause::ANotSymmetric);
    }
    if c.f.is_separable() != Ok(true) {
        return Err(Clause::NotSeparable);
    }
    if is_irreducible_over_rationals(&c.f) != Ok(true) {
        return Err(Clause::NotIrreducible);
    }
    let m = c.a.checked_mul(c.d.gram()).map_err(|_| Clause::Shape)?;
    if m.charpoly().map_err(|_| Clause::Shape)? != c.f {
        return Err(Clause::CharpolyMismatch);
    }
    if c.alpha.degree().is_some_and(|k| k >= n) {
        return Err(Clause::Shape);
    }
    let gram = match scaled_trace_gram(&c.f, &c.alpha) {
        Ok(g) => g,
        Err(TraceFormError::AlphaZero) => return Err(Clause::AlphaZero),
        Err(_) => return Err(Clause::Shape),
    };
    if gram != c.gram {
        return Err(Clause::GramMismatch);
    }
    if c.p.det().map_err(|_| Clause::Shape)?.is_zero() {
        return Err(Clause::PSingular);
    }
    if c.p.congruent(c.d.gram()).map_err(|_| Clause::Shape)? != c.gram {
        return Err(Clause::CongruenceMismatch);
    }
    Ok(())
}

impl Certificate {
    pub fn verify(&self) -> Result<(), Clause> {
        verify_certificate(self)
    }

    pub fn is_valid(&self) -> bool {
        verify_certificate(self).is_ok()
    }

    /// `Tr(α x^{i+j})` as a form.
    pub fn gram_form(&self) -> Result<SymmetricForm, FormError> {
        SymmetricForm::new(self.gram.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BigInt;
    use crate::quadform::equivalent;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    fn x2m2() -> RationalPoly {
        RationalPoly::from_i64(&[-2, 0, 1])
    }

    fn golden() -> Certificate {
        let d = SymmetricForm::new(ExactMatrix::identity(2)).unwrap();
        let a = ExactMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        certify(&d, &a, &ints(&[1, 0])).unwrap()
    }

    #[test]
    fn gram_examples() {
        let lin = RationalPoly::from_i64(&[-3, 1]);
        assert_eq!(
            scaled_trace_gram(&lin, &RationalPoly::from_i64(&[7])).unwrap(),
            ExactMatrix::from_i64(&[&[7]])
        );
        assert_eq!(
            scaled_trace_gram(&x2m2(), &RationalPoly::one()).unwrap(),
            ExactMatrix::from_i64(&[&[2, 0], &[0, 4]])
        );
        let alpha = RationalPoly::new(vec![q(1, 2), q(1, 4)]);
        assert_eq!(
            scaled_trace_gram(&x2m2(), &alpha).unwrap(),
            ExactMatrix::from_i64(&[&[1, 1], &[1, 2]])
        );
        assert_eq!(scaled_trace_gram(&x2m2(), &x2m2()), Err(TraceFormError::AlphaZero));
    }

    #[test]
    fn gram_matches_direct_traces() {
        let f = RationalPoly::from_i64(&[1, -3, 0, 2, 1]);
        let alpha = RationalPoly::new(vec![q(2, 3), q(-1, 1), q(0, 1), q(5, 7)]);
        let g = scaled_trace_gram(&f, &alpha).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e = &alpha * &RationalPoly::monomial(q(1, 1), i + j);
                assert_eq!(g[(i, j)], f.trace_of_element(&e).unwrap());
            }
        }
    }

    #[test]
    fn solve_alpha_examples() {
        assert_eq!(solve_alpha(&x2m2(), &ints(&[2, 0, 4])).unwrap(), RationalPoly::one());
        assert_eq!(
            solve_alpha(&x2m2(), &ints(&[1, 1, 2])).unwrap(),
            RationalPoly::new(vec![q(1, 2), q(1, 4)])
        );
        assert_eq!(solve_alpha(&x2m2(), &ints(&[1, 1, 5])), Err(TraceFormError::InconsistentHankel(2)));
        assert!(matches!(solve_alpha(&x2m2(), &ints(&[1, 1])), Err(TraceFormError::SequenceLength { .. })));
    }

    #[test]
    fn golden_certificate() {
        let c = golden();
        assert_eq!(c.f, x2m2());
        assert_eq!(c.alpha, RationalPoly::new(vec![q(1, 2), q(1, 4)]));
        assert_eq!(c.p, ExactMatrix::from_i64(&[&[1, 1], &[0, 1]]));
        assert_eq!(c.gram, ExactMatrix::from_i64(&[&[1, 1], &[1, 2]]));
        assert_eq!(verify_certificate(&c), Ok(()));
    }

    #[test]
    fn tampering_is_caught() {
        let mut c = golden();
        c.alpha = RationalPoly::one();
        assert_eq!(verify_certificate(&c), Err(Clause::GramMismatch));

        let mut c = golden();
        c.f = RationalPoly::from_i64(&[-1, 0, 1]);
        assert_eq!(verify_certificate(&c), Err(Clause::NotIrreducible));

        let mut c = golden();
        c.f = RationalPoly::from_i64(&[-3, 0, 1]);
        assert_eq!(verify_certificate(&c), Err(Clause::CharpolyMismatch));

        let mut c = golden();
        c.a = ExactMatrix::from_i64(&[&[1, 2], &[1, -1]]);
        assert_eq!(verify_certificate(&c), Err(Clause::ANotSymmetric));

        let mut c = golden();
        c.alpha = RationalPoly::zero();
        assert_eq!(verify_certificate(&c), Err(Clause::AlphaZero));

        let mut c = golden();
        c.p = ExactMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(verify_certificate(&c), Err(Clause::PSingular));

        let mut c = golden();
        c.p = ExactMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        assert_eq!(verify_certificate(&c), Err(Clause::CongruenceMismatch));
    }

    #[test]
    fn realize_one_dimensional() {
        let d = SymmetricForm::from_i64_diagonal(&[5]).unwrap();
        let c = realize(&d, &SearchPolicy::default()).unwrap();
        assert_eq!(c.f, RationalPoly::from_i64(&[-5, 1]));
        assert_eq!(c.alpha, RationalPoly::from_i64(&[5]));
        assert_eq!(c.a, ExactMatrix::identity(1));
        assert_eq!(c.p, ExactMatrix::identity(1));
    }

    #[test]
    fn realize_hyperbolic_plane() {
        let d = SymmetricForm::from_i64_diagonal(&[1, -1]).unwrap();
        let c = realize(&d, &SearchPolicy::with_seed(3)).unwrap();
        assert_eq!(verify_certificate(&c), Ok(()));
        assert!(equivalent(&d, &c.gram_form().unwrap()).unwrap());
    }

    #[test]
    fn realize_non_diagonal_and_deterministic() {
        let d = SymmetricForm::new(ExactMatrix::from_i64(&[&[0, 1, 2], &[1, 0, -1], &[2, -1, 3]])).unwrap();
        let c = realize(&d, &SearchPolicy::with_seed(11)).unwrap();
        assert_eq!(verify_certificate(&c), Ok(()));
        assert!(equivalent(&d, &c.gram_form().unwrap()).unwrap());
        assert_eq!(realize(&d, &SearchPolicy::with_seed(11)).unwrap(), c);
    }

    #[test]
    fn policy_validation() {
        assert!(SearchPolicy::new(0, vec![1, 1], 5).is_err());
        assert!(SearchPolicy::new(0, vec![], 5).is_err());
        assert!(SearchPolicy::new(0, vec![1, 2], 0).is_err());
        assert!(SearchPolicy::new(0, vec![1, 2], 1).is_ok());
    }
}
