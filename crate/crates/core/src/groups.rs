//! The metacyclic groups `H = ℤ/m ⋊ ℤ/p^k` with law
//! `(a, x)(b, y) = (a + α^x b, x + y)` for a unit `α` of order `p`, and
//! brute-force checks of their subgroup structure.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::algebra::arith::{factorize_u64, is_prime};

/// Groups larger than this are refused; everything here is enumerative.
pub const MAX_ORDER: u64 = 1 << 16;
/// Largest order for which normal subgroups are enumerated by default.
pub const EXHAUSTIVE_LIMIT: usize = 300;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{n} does not divide {m}")]
    NonDivisor { n: u64, m: u64 },
    #[error("closed-form power of {g} to {n} is {closed}, iterated product is {iterated}")]
    PowerDivergence { g: Element, n: u64, closed: Element, iterated: Element },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub a: u64,
    pub x: u64,
}

impl Element {
    pub fn new(a: u64, x: u64) -> Self {
        Element { a, x }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidirectGroup {
    p: u64,
    k: u32,
    m: u64,
    pk: u64,
    alpha: u64,
    // alpha^x mod m for x = 0..p
    alpha_pow: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn euler_phi(m: u64) -> u64 {
    factorize_u64(m).iter().fold(m, |acc, &(q, _)| acc / q * (q - 1))
}

fn multiplicative_order_is(alpha: u64, p: u64, m: u64) -> bool {
    if alpha % m == 1 % m {
        return false;
    }
    let mut t = 1 % m;
    for _ in 0..p {
        t = mul_mod(t, alpha, m);
    }
    t == 1 % m
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl SemidirectGroup {
    fn validate(p: u64, k: u32, m: u64) -> Result<u64, GroupError> {
        let bad = |s: String| Err(GroupError::InvalidParams(s));
        if !is_prime(p) {
            return bad(format!("p = {p} is not prime"));
        }
        if k == 0 || m == 0 {
            return bad("k and m must be positive".into());
        }
        if m % p == 0 {
            return bad(format!("p = {p} divides m = {m}"));
        }
        if euler_phi(m) % p != 0 {
            return bad(format!("p = {p} does not divide phi({m}) = {}", euler_phi(m)));
        }
        let pk = p
            .checked_pow(k)
            .filter(|pk| pk.checked_mul(m).is_some_and(|o| o <= MAX_ORDER))
            .ok_or_else(|| GroupError::InvalidParams(format!("order exceeds {MAX_ORDER}")))?;
        Ok(pk)
    }

    fn build(p: u64, k: u32, m: u64, pk: u64, alpha: u64) -> Self {
        let mut alpha_pow = vec![1 % m];
        for i in 1..p as usize {
            alpha_pow.push(mul_mod(alpha_pow[i - 1], alpha, m));
        }
        SemidirectGroup { p, k, m, pk, alpha, alpha_pow }
    }

    /// Same law with `α = 1`: the direct product. Only for negative controls.
    #[cfg(test)]
    pub(crate) fn direct_product(p: u64, k: u32, m: u64) -> Self {
        Self::build(p, k, m, p.pow(k), 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn m(&self) -> u64 {
        self.m
    }
    pub fn alpha(&self) -> u64 {
        self.alpha
    }
    /// `p^k`
    pub fn top_order(&self) -> u64 {
        self.pk
    }
    pub fn order(&self) -> usize {
        (self.m * self.pk) as usize
    }

    pub fn identity(&self) -> Element {
        Element::new(0, 0)
    }

    pub fn contains(&self, g: Element) -> bool {
        g.a < self.m && g.x < self.pk
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.m).flat_map(move |a| (0..self.pk).map(move |x| Element::new(a, x)))
    }

    fn index(&self, g: Element) -> usize {
        (g.a * self.pk + g.x) as usize
    }

    fn element_at(&self, i: usize) -> Element {
        Element::new(i as u64 / self.pk, i as u64 % self.pk)
    }

    pub fn alpha_power(&self, x: u64) -> u64 {
        self.alpha_pow[(x % self.p) as usize]
    }

    pub fn multiply(&self, g: Element, h: Element) -> Element {
        Element::new(
            (g.a + mul_mod(self.alpha_power(g.x), h.a, self.m)) % self.m,
            (g.x + h.x) % self.pk,
        )
    }

    pub fn inverse(&self, g: Element) -> Element {
        let x = (self.pk - g.x) % self.pk;
        let a = mul_mod(self.alpha_power(x), g.a, self.m);
        Element::new((self.m - a) % self.m, x)
    }

    /// `g^n` by repeated multiplication.
    pub fn power(&self, g: Element, n: u64) -> Element {
        (0..n).fold(self.identity(), |acc, _| self.multiply(acc, g))
    }

    /// `(a, x)^n = (a (1 + α^x + ... + α^{(n-1)x}), n x)`.
    pub fn power_closed_form(&self, g: Element, n: u64) -> Element {
        let step = self.alpha_power(g.x);
        // the sum is periodic in j with period dividing p
        let period = self.p;
        let mut cycle_sum = 0;
        let mut t = 1 % self.m;
        let mut partial = Vec::with_capacity(period as usize + 1);
        partial.push(0);
        for _ in 0..period {
            cycle_sum = (cycle_sum + t) % self.m;
            partial.push(cycle_sum);
            t = mul_mod(t, step, self.m);
        }
        let full = (n / period) % self.m;
        let s = (mul_mod(full, cycle_sum, self.m) + partial[(n % period) as usize]) % self.m;
        Element::new(mul_mod(g.a, s, self.m), mul_mod(n % self.pk, g.x, self.pk))
    }

    /// Iterated power, cross-checked against [`Self::power_closed_form`].
    pub fn power_checked(&self, g: Element, n: u64) -> Result<Element, GroupError> {
        let iterated = self.power(g, n);
        let closed = self.power_closed_form(g, n);
        if closed == iterated {
            Ok(iterated)
        } else {
            Err(GroupError::PowerDivergence { g, n, closed, iterated })
        }
    }

    pub fn element_order(&self, g: Element) -> u64 {
        let mut h = g;
        let mut n = 1;
        while h != self.identity() {
            h = self.multiply(h, g);
            n += 1;
        }
        n
    }

    fn closure_bits(&self, gens: &[Element]) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        let e = self.identity();
        seen[self.index(e)] = true;
        let mut queue = VecDeque::from([e]);
        while let Some(h) = queue.pop_front() {
            for &g in gens {
                let hg = self.multiply(h, g);
                let i = self.index(hg);
                if !seen[i] {
                    seen[i] = true;
                    queue.push_back(hg);
                }
            }
        }
        seen
    }

    fn bits_to_vec(&self, bits: &[bool]) -> Vec<Element> {
        bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| self.element_at(i)).collect()
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn subgroup_closure(&self, gens: &[Element]) -> Vec<Element> {
        self.bits_to_vec(&self.closure_bits(gens))
    }

    /// Subgroup generated by all elements of `p`-power order.
    pub fn p_generated_subgroup(&self) -> Vec<Element> {
        let gens: Vec<Element> = self.elements().filter(|&g| self.is_p_element(g)).collect();
        self.subgroup_closure(&gens)
    }

    fn is_p_element(&self, g: Element) -> bool {
        let mut o = self.element_order(g);
        while o % self.p == 0 {
            o /= self.p;
        }
        o == 1
    }

    fn conjugate(&self, g: Element, by: Element) -> Element {
        self.multiply(self.multiply(by, g), self.inverse(by))
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[Element]) -> Vec<Element> {
        let mut conj: HashSet<Element> = HashSet::new();
        for &g in gens {
            for h in self.elements() {
                conj.insert(self.conjugate(g, h));
            }
        }
        let conj: Vec<Element> = conj.into_iter().collect();
        self.subgroup_closure(&conj)
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<Element>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for g in self.elements() {
            if seen[self.index(g)] {
                continue;
            }
            let mut class: Vec<Element> = self.elements().map(|h| self.conjugate(g, h)).collect();
            class.sort();
            class.dedup();
            for &c in &class {
                seen[self.index(c)] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Every normal subgroup, as sorted element lists ordered by size.
    ///
    /// Normal subgroups are unions of conjugacy classes, so each is a join of
    /// normal closures of single classes; joins are taken until no new
    /// subgroup appears.
    pub fn normal_subgroups(&self) -> Vec<Vec<Element>> {
        let atoms: Vec<Vec<bool>> =
            self.conjugacy_classes().iter().map(|c| self.closure_bits(c)).collect();
        let mut found: HashSet<Vec<bool>> = HashSet::new();
        let trivial = self.closure_bits(&[]);
        found.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while let Some(n) = frontier.pop() {
            for atom in &atoms {
                let gens: Vec<Element> = n
                    .iter()
                    .zip(atom)
                    .enumerate()
                    .filter(|(_, (&a, &b))| a || b)
                    .map(|(i, _)| self.element_at(i))
                    .collect();
                let join = self.closure_bits(&gens);
                if found.insert(join.clone()) {
                    frontier.push(join);
                }
            }
        }
        let mut out: Vec<Vec<Element>> = found.iter().map(|b| self.bits_to_vec(b)).collect();
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        out
    }

    /// Whether `H` has no nontrivial quotient of order prime to `p`, decided
    /// from the normal closure of the `p`-elements.
    pub fn prime_to_p_quotient_derived(&self) -> bool {
        self.normal_closure(&self.p_generated_subgroup()).len() == self.order()
    }

    /// Same question, by listing every normal subgroup.
    pub fn prime_to_p_quotient_exhaustive(&self) -> bool {
        let order = self.order();
        self.normal_subgroups()
            .iter()
            .filter(|n| gcd((order / n.len()) as u64, self.p) == 1)
            .all(|n| n.len() == order)
    }

    /// Both paths; the exhaustive one only when `|H| <= EXHAUSTIVE_LIMIT` or
    /// when `force_exhaustive` is set.
    pub fn prime_to_p_quotient_check(&self, force_exhaustive: bool) -> QuotientCheck {
        let derived = self.prime_to_p_quotient_derived();
        let exhaustive = (force_exhaustive || self.order() <= EXHAUSTIVE_LIMIT)
            .then(|| self.prime_to_p_quotient_exhaustive());
        QuotientCheck { derived, exhaustive }
    }

    /// `H_0 = nℤ/m` inside the normal factor and `H_1 = H_0 ⋊ ℤ/p^k`.
    pub fn index_subgroups(&self, n: u64) -> Result<IndexSubgroups, GroupError> {
        if n == 0 || self.m % n != 0 {
            return Err(GroupError::NonDivisor { n, m: self.m });
        }
        let h0: Vec<Element> = (0..self.m).step_by(n as usize).map(|a| Element::new(a, 0)).collect();
        let h1: Vec<Element> = h0
            .iter()
            .flat_map(|g| (0..self.pk).map(move |x| Element::new(g.a, x)))
            .collect();
        let alpha_invariant = h0.iter().all(|g| mul_mod(self.alpha, g.a, self.m) % n == 0);
        let closed = self.subgroup_closure(&h0) == h0 && self.subgroup_closure(&h1) == h1;
        let order = self.order();
        Ok(IndexSubgroups {
            n,
            index_h0: order / h0.len(),
            index_h1: order / h1.len(),
            alpha_invariant,
            closed,
            h0,
            h1,
        })
    }

    /// Whether `H_0` and `H_1` are subgroups of index exactly `p^k n` and `n`.
    pub fn index_check(&self, n: u64) -> Result<bool, GroupError> {
        let s = self.index_subgroups(n)?;
        Ok(s.closed
            && s.alpha_invariant
            && s.index_h0 as u64 == self.pk * n
            && s.index_h1 as u64 == n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientCheck {
    pub derived: bool,
    pub exhaustive: Option<bool>,
}

impl QuotientCheck {
    pub fn passed(&self) -> bool {
        self.derived && self.exhaustive.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSubgroups {
    pub n: u64,
    pub h0: Vec<Element>,
    pub h1: Vec<Element>,
    pub index_h0: usize,
    pub index_h1: usize,
    pub alpha_invariant: bool,
    pub closed: bool,
}

/// Builds `H` with the smallest unit of order `p` modulo `m`.
pub fn construct_group(p: u64, k: u32, m: u64) -> Result<SemidirectGroup, GroupError> {
    let pk = SemidirectGroup::validate(p, k, m)?;
    let alpha = (2..m)
        .find(|&a| gcd(a, m) == 1 && multiplicative_order_is(a, p, m))
        .ok_or_else(|| GroupError::InvalidParams(format!("no unit of order {p} mod {m}")))?;
    Ok(SemidirectGroup::build(p, k, m, pk, alpha))
}

/// Builds `H` with a caller-chosen `α`, which must have order exactly `p`.
pub fn construct_group_with_alpha(p: u64, k: u32, m: u64, alpha: u64) -> Result<SemidirectGroup, GroupError> {
    let pk = SemidirectGroup::validate(p, k, m)?;
    if alpha >= m || !multiplicative_order_is(alpha, p, m) {
        return Err(GroupError::InvalidParams(format!("{alpha} does not have order {p} mod {m}")));
    }
    Ok(SemidirectGroup::build(p, k, m, pk, alpha))
}

/// Every `α` of order exactly `p` modulo `m`.
pub fn admissible_alphas(p: u64, m: u64) -> Vec<u64> {
    (2..m).filter(|&a| multiplicative_order_is(a, p, m)).collect()
}

/// All `(p, k, m)` with `p` from `primes`, `m p^k <= max_order`, `p ∤ m` and
/// `p | φ(m)`.
pub fn valid_parameters(primes: &[u64], max_order: u64) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for &p in primes {
        let mut k = 1;
        while p.pow(k) <= max_order {
            for m in 2..=max_order / p.pow(k) {
                if m % p != 0 && euler_phi(m) % p == 0 {
                    out.push((p, k, m));
                }
            }
            k += 1;
        }
    }
    out
}

pub fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m % d == 0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRow {
    pub n: u64,
    pub index_h0: usize,
    pub index_h1: usize,
    pub ok: bool,
}

/// Results of all three structural checks on one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupReport {
    pub p: u64,
    pub k: u32,
    pub m: u64,
    pub alpha: u64,
    pub order: usize,
    pub lemma_a: bool,
    pub lemma_b: QuotientCheck,
    pub lemma_c: Vec<IndexRow>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.lemma_a && self.lemma_b.passed() && self.lemma_c.iter().all(|r| r.ok)
    }
}

/// Runs the `p`-generation, quotient and index checks. With `n` given only
/// that divisor is examined, otherwise every divisor of `m`.
pub fn group_report(g: &SemidirectGroup, n: Option<u64>, exhaustive: bool) -> Result<GroupReport, GroupError> {
    let ns = match n {
        Some(n) => vec![n],
        None => divisors(g.m),
    };
    let lemma_c = ns
        .into_iter()
        .map(|n| {
            let s = g.index_subgroups(n)?;
            let ok = g.index_check(n)?;
            Ok(IndexRow { n, index_h0: s.index_h0, index_h1: s.index_h1, ok })
        })
        .collect::<Result<Vec<_>, GroupError>>()?;
    Ok(GroupReport {
        p: g.p,
        k: g.k,
        m: g.m,
        alpha: g.alpha,
        order: g.order(),
        lemma_a: g.p_generated_subgroup().len() == g.order(),
        lemma_b: g.prime_to_p_quotient_check(exhaustive),
        lemma_c,
    })
}
