use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

use scaled_trace::algebra::{
    cycle_type_mod_p, factor_mod_p, find_rational_factor, factorize, is_irreducible_over_rationals, BigInt, BigRational,
    ExactMatrix, ModPoly, RationalPoly,
};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn int_poly(c: &[i64]) -> RationalPoly {
    RationalPoly::from_i64(c)
}

fn mat(rows: &[Vec<i64>]) -> ExactMatrix {
    let r: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    ExactMatrix::from_i64(&r)
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    (1..=n).filter(|d| n % d == 0).flat_map(|d| [d, -d]).collect()
}

fn divides(g: &[i64], f: &[i64]) -> bool {
    let g = int_poly(g);
    let f = int_poly(f);
    f.rem(&g).unwrap().is_zero()
}

// Reducibility of an integer polynomial of degree <= 5 by enumerating
// candidate factors of degree 1 and 2 inside the Mignotte coefficient bound.
fn brute_force_reducible(f: &[i64]) -> bool {
    let n = f.len() - 1;
    if f[0] == 0 {
        return n > 1;
    }
    let norm = (f.iter().map(|c| c * c).sum::<i64>() as f64).sqrt();
    let lc = *f.last().unwrap();
    for a in divisors(lc).into_iter().filter(|&a| a > 0) {
        for b in divisors(f[0]) {
            if divides(&[b, a], f) && n > 1 {
                return true;
            }
        }
    }
    if n >= 4 {
        let bound = (2.0 * norm).ceil() as i64 * lc.abs();
        for a in divisors(lc).into_iter().filter(|&a| a > 0) {
            for c in divisors(f[0]) {
                for b in -bound..=bound {
                    if divides(&[c, b, a], f) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn companion(f: &RationalPoly) -> ExactMatrix {
    let n = f.degree().unwrap();
    let mut c = ExactMatrix::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = q(1);
    }
    for i in 0..n {
        c[(i, n - 1)] = -f.coeff(i);
    }
    c
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 101, 65537])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factor_mod_p_multiplies_back(p in small_prime(), coeffs in prop::collection::vec(0u64..1000, 2..9)) {
        let f = ModPoly::new(p, coeffs).unwrap();
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let factors = factor_mod_p(&f).unwrap();
        let mut prod = ModPoly::new(p, vec![f.leading_coeff()]).unwrap();
        for (g, e) in &factors {
            prop_assert!(g.is_irreducible());
            for _ in 0..*e {
                prod = prod.mul(g);
            }
        }
        prop_assert_eq!(prod, f);
    }

    #[test]
    fn factorize_matches_trial_division(n in 1u64..2_000_000) {
        let f = factorize(&BigInt::from(n)).unwrap();
        prop_assert_eq!(f.factors, trial_factor(n));
    }

    #[test]
    fn factorize_round_trips_large(a in 2u64..3_000_000_000, b in 2u64..3_000_000_000) {
        let n = BigInt::from(a) * BigInt::from(b);
        let f = factorize(&n).unwrap();
        prop_assert_eq!(f.value(), n);
        for (p, _) in &f.factors {
            prop_assert!(trial_factor(*p).len() == 1 || *p > 1_000_000_000);
        }
    }

    #[test]
    fn irreducibility_agrees_with_brute_force(mut c in prop::collection::vec(-6i64..=6, 3..5), lc in 1i64..=3) {
        c.push(lc);
        let f = int_poly(&c);
        prop_assume!(f.is_separable().unwrap());
        let content = c.iter().fold(0i64, |g, x| g.gcd(x));
        prop_assume!(content == 1);
        prop_assert_eq!(is_irreducible_over_rationals(&f).unwrap(), !brute_force_reducible(&c));
    }

    #[test]
    fn products_are_reducible(g in prop::collection::vec(-7i64..=7, 1..5), h in prop::collection::vec(-7i64..=7, 1..6), lg in 1i64..=3) {
        let mut g = g;
        g.push(lg);
        let mut h = h;
        h.push(1);
        let f = &int_poly(&g) * &int_poly(&h);
        prop_assert!(!is_irreducible_over_rationals(&f).unwrap());
        let factor = find_rational_factor(&f).unwrap().unwrap();
        let d = factor.degree().unwrap();
        prop_assert!(d >= 1 && d < f.degree().unwrap());
        prop_assert!(f.rem(&factor).unwrap().is_zero());
    }

    #[test]
    fn charpoly_matches_interpolation(n in 1usize..6, entries in prop::collection::vec(-9i64..=9, 36)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 6..i * 6 + n].to_vec()).collect();
        let m = mat(&rows);
        let f = m.charpoly().unwrap();
        prop_assert_eq!(&f, &m.charpoly_by_interpolation().unwrap());
        prop_assert_eq!(f.coeff(0) * q(if n % 2 == 0 { 1 } else { -1 }), m.det().unwrap());
        prop_assert_eq!(-f.coeff(n - 1), m.trace());
    }

    #[test]
    fn diagonalization_is_a_congruence(n in 1usize..7, entries in prop::collection::vec(-5i64..=5, 49)) {
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                rows[i][j] = entries[i * 7 + j];
                rows[j][i] = entries[i * 7 + j];
            }
        }
        let b = mat(&rows);
        let (qm, d) = b.congruence_diagonalize().unwrap();
        prop_assert!(!qm.det().unwrap().is_zero());
        prop_assert_eq!(qm.congruent(&b).unwrap(), ExactMatrix::diagonal(&d));
    }

    #[test]
    fn power_traces_match_companion_powers(c in prop::collection::vec(-5i64..=5, 1..6)) {
        let mut c = c;
        c.push(1);
        let f = int_poly(&c);
        let n = f.degree().unwrap();
        let comp = companion(&f);
        let traces = f.power_traces(2 * n).unwrap();
        let mut pw = ExactMatrix::identity(n);
        for t in traces {
            prop_assert_eq!(pw.trace(), t);
            pw = pw.checked_mul(&comp).unwrap();
        }
    }

    #[test]
    fn trace_of_element_is_companion_trace(c in prop::collection::vec(-5i64..=5, 1..5), g in prop::collection::vec(-5i64..=5, 0..7)) {
        let mut c = c;
        c.push(1);
        let f = int_poly(&c);
        let comp = companion(&f);
        let n = f.degree().unwrap();
        let mut expected = q(0);
        let mut pw = ExactMatrix::identity(n);
        for &k in &g {
            expected += q(k) * pw.trace();
            pw = pw.checked_mul(&comp).unwrap();
        }
        prop_assert_eq!(f.trace_of_element(&int_poly(&g)).unwrap(), expected);
    }

    #[test]
    fn discriminant_matches_root_free_formula(b in -20i64..=20, c in -20i64..=20) {
        let f = int_poly(&[c, b, 1]);
        prop_assert_eq!(f.discriminant().unwrap(), q(b * b - 4 * c));
    }

    #[test]
    fn cycle_type_sums_to_degree(c in prop::collection::vec(-9i64..=9, 2..7), p in prop::sample::select(vec![101u64, 103, 107, 109])) {
        let mut c = c;
        c.push(1);
        let f = int_poly(&c);
        if let Ok(t) = cycle_type_mod_p(&f, p) {
            prop_assert_eq!(t.iter().sum::<usize>(), f.degree().unwrap());
            prop_assert!(t.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

#[test]
fn x4_plus_1_splits_everywhere_but_is_irreducible() {
    let f = int_poly(&[1, 0, 0, 0, 1]);
    assert!(is_irreducible_over_rationals(&f).unwrap());
    let mut p = 3;
    let mut checked = 0;
    while checked < 50 {
        if let Ok(t) = cycle_type_mod_p(&f, p) {
            assert!(t.len() > 1, "x^4+1 irreducible mod {p}");
            checked += 1;
        }
        p += 2;
        while !scaled_trace::algebra::is_prime(p) {
            p += 2;
        }
    }
}
