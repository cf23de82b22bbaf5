use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scaled_trace::algebra::{BigRational, ExactMatrix, RationalPoly};
use scaled_trace::galois::{
    block_split_check, generic_experiment, random_symmetric, sample_cycle_types, sn_certificate, SnVerdict,
};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

// Proportion of S_n made of permutations with the given cycle type.
fn class_proportion(cycle_type: &[usize]) -> f64 {
    let mut denom = 1.0;
    let mut k = 0;
    while k < cycle_type.len() {
        let part = cycle_type[k];
        let mult = cycle_type[k..].iter().take_while(|&&c| c == part).count();
        denom *= (part as f64).powi(mult as i32) * factorial(mult);
        k += mult;
    }
    1.0 / denom
}

fn nonzero_diag(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| loop {
            let x = rng.gen_range(-9..=9);
            if x != 0 {
                break q(x);
            }
        })
        .collect()
}

#[test]
fn class_proportions_sum_to_one() {
    let s4 = [&[4][..], &[1, 3], &[2, 2], &[1, 1, 2], &[1, 1, 1, 1]];
    let total: f64 = s4.iter().map(|t| class_proportion(t)).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!((class_proportion(&[1, 1, 2]) - 0.25).abs() < 1e-12);
}

#[test]
fn frobenius_frequencies_follow_class_sizes() {
    for (n, seed) in [(3usize, 1u64), (4, 2), (5, 3)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let report = loop {
            let d = nonzero_diag(&mut rng, n);
            let r = generic_experiment(&d, 20, 300, rng.gen()).unwrap();
            if r.sn_verdict == SnVerdict::Certified {
                break r;
            }
        };
        let s = &report.cycle_stats;
        assert_eq!(s.entries.values().sum::<usize>(), s.primes_used);
        for (t, _) in &s.entries {
            assert_eq!(t.iter().sum::<usize>(), n);
            assert!((s.frequency(t) - class_proportion(t)).abs() <= 0.1, "{t:?} at n = {n}");
        }
        let mut transposition = vec![1; n - 2];
        transposition.push(2);
        assert!((s.frequency(&[n]) - 1.0 / n as f64).abs() <= 0.1);
        assert!((s.frequency(&transposition) - class_proportion(&transposition)).abs() <= 0.1);
    }
}

#[test]
fn small_galois_groups_are_never_certified() {
    let cases: [&[i64]; 4] = [
        &[1, 0, 0, 0, 1],
        &[1, 1, 1, 1, 1],
        &[-2, 0, 0, 0, 1],
        &[1, -1, 1, -1, 1, -1, 1],
    ];
    for c in cases {
        let f = RationalPoly::from_i64(c);
        let n = f.degree().unwrap();
        let s = sample_cycle_types(&f, 200, 3).unwrap();
        assert_eq!(sn_certificate(&s, n), SnVerdict::Inconclusive, "{f}");
    }
}

#[test]
fn irreducible_outputs_are_separable() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..40 {
        let n = rng.gen_range(1..=5);
        let d = nonzero_diag(&mut rng, n);
        let r = generic_experiment(&d, 5, 20, rng.gen()).unwrap();
        if r.irreducible {
            assert!(r.separable);
            assert!(r.f.is_separable().unwrap());
        }
        if r.sn_verdict == SnVerdict::Certified {
            assert!(r.irreducible);
        }
        assert_eq!(r.f.degree(), Some(n));
    }
}

#[test]
fn specialized_discriminants_are_not_squares() {
    // n = 2: disc(charpoly(A D)) is generically a non-square rational
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut non_squares = 0;
    for _ in 0..100 {
        let d = nonzero_diag(&mut rng, 2);
        let r = generic_experiment(&d, 20, 1, rng.gen()).unwrap();
        let disc = r.f.discriminant().unwrap();
        let is_square = !disc.is_zero() && {
            let num = disc.numer().clone();
            let den = disc.denom().clone();
            num >= 0.into() && num.sqrt().pow(2) == num && den.sqrt().pow(2) == den
        };
        if !is_square && !disc.is_zero() {
            non_squares += 1;
        }
        assert_eq!(!is_square && !disc.is_zero(), r.irreducible);
    }
    assert!(non_squares >= 80);
}

#[test]
fn block_split_identity_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in 2..=6 {
        for _ in 0..100 {
            let d = nonzero_diag(&mut rng, n);
            let mut t = random_symmetric(n, 9, &mut rng);
            for j in 1..n {
                t[(0, j)] = q(0);
                t[(j, 0)] = q(0);
            }
            assert!(block_split_check(&d, &t).unwrap());
        }
    }
}

#[test]
fn coupled_first_row_breaks_the_split() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut nonroots = 0;
    for _ in 0..50 {
        let n = rng.gen_range(2..=5);
        let d = nonzero_diag(&mut rng, n);
        let t = random_symmetric(n, 9, &mut rng);
        if t[(0, 1)].is_zero() {
            continue;
        }
        let f = t.checked_mul(&ExactMatrix::diagonal(&d)).unwrap().charpoly().unwrap();
        if !f.eval(&(&d[0] * &t[(0, 0)])).is_zero() {
            nonroots += 1;
        }
        assert!(block_split_check(&d, &t).is_err());
    }
    assert!(nonroots >= 40);
}
