//! Exact realization of rational quadratic forms as scaled trace forms.
//!
//! The crate is layered bottom-up:
//!
//! - [`algebra`]: integers, polynomials over ℚ and `F_p`, exact matrices.
//! - [`quadform`]: Hilbert symbols, Hasse–Minkowski invariants, isotropy.
//! - [`trace_form`]: the search for `A` with irreducible `charpoly(A D)`
//!   and the certificate that `D ≅ Tr(α x^2)`.
//! - [`galois`]: cycle-type evidence that those characteristic polynomials
//!   have full symmetric Galois group.
//! - [`groups`]: the semidirect products `ℤ/m ⋊ ℤ/p^k` and their subgroups.
//! - [`io`]: the JSON formats.

pub mod algebra;
pub mod galois;
pub mod groups;
pub mod io;
pub mod quadform;
pub mod trace_form;

pub use algebra::{BigInt, BigRational, ExactMatrix, RationalPoly};
pub use quadform::{SymmetricForm, WittInvariants};
pub use trace_form::{realize, verify_certificate, Certificate, SearchPolicy};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-algebra.md")]
    mod exact_algebra {}
    #[doc = include_str!("../../../book/src/quadratic-forms.md")]
    mod quadratic_forms {}
    #[doc = include_str!("../../../book/src/scaled-trace-forms.md")]
    mod scaled_trace_forms {}
    #[doc = include_str!("../../../book/src/galois-evidence.md")]
    mod galois_evidence {}
    #[doc = include_str!("../../../book/src/semidirect-products.md")]
    mod semidirect_products {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
