//! Exact integer arithmetic: the two binomial-coefficient conventions and
//! line-bundle cohomology on projective n-space.
//!
//! Two distinct binomial operations are exposed on purpose. [`binom_trunc`]
//! counts global sections and is zero whenever the top argument drops below
//! the bottom one; [`binom_poly`] is the degree-k polynomial extension used
//! for Euler characteristics and Hilbert-polynomial identities, and may be
//! negative. Call sites must name which convention they use.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Truncated binomial: C(m, k) for m >= k >= 0, otherwise 0.
pub fn binom_trunc(m: i64, k: u32) -> BigInt {
    if m < k as i64 {
        BigInt::zero()
    } else {
        binom_poly(m, k)
    }
}

/// Polynomial binomial: m(m-1)...(m-k+1) / k! at any integer m.
///
/// Agrees with [`binom_trunc`] for m >= k and extends it to negative m,
/// e.g. `binom_poly(-1, 2) == 1`.
pub fn binom_poly(m: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        // The partial product after i steps is C(m, i), an integer, so the
        // stepwise division stays exact for every integer m.
        acc *= BigInt::from(m) - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// h^q of the line bundle O(d) on projective n-space.
///
/// Nonzero only for q = 0 (d >= 0) and q = n (d <= -n-1), with binomial
/// dimensions. Panics if q > n or n == 0.
pub fn line_cohom(n: u32, d: i64, q: u32) -> BigInt {
    assert!(n >= 1, "projective space dimension must be at least 1");
    assert!(q <= n, "cohomological degree {q} outside [0, {n}]");
    if q == 0 {
        let top = d.checked_add(n as i64).expect("twist overflow");
        binom_trunc(top, n)
    } else if q == n {
        let top = (-d).checked_sub(1).expect("twist overflow");
        binom_trunc(top, n)
    } else {
        BigInt::zero()
    }
}

/// Euler characteristic of O(d) on projective n-space.
///
/// Equals the alternating sum of [`line_cohom`] over q for every d.
pub fn line_euler(n: u32, d: i64) -> BigInt {
    assert!(n >= 1, "projective space dimension must be at least 1");
    let top = d.checked_add(n as i64).expect("twist overflow");
    binom_poly(top, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn binom_trunc_examples() {
        assert_eq!(binom_trunc(5, 3), bi(10));
        assert_eq!(binom_trunc(1, 3), bi(0));
        assert_eq!(binom_trunc(0, 0), bi(1));
        assert_eq!(binom_trunc(-2, 3), bi(0));
    }

    #[test]
    fn binom_poly_examples() {
        assert_eq!(binom_poly(-1, 2), bi(1));
        assert_eq!(binom_poly(5, 3), bi(10));
        assert_eq!(binom_poly(-3, 2), bi(6));
        assert_eq!(binom_poly(7, 0), bi(1));
        assert_eq!(binom_poly(-4, 3), bi(-20));
    }

    #[test]
    fn line_cohom_examples() {
        // h^2(O_{P^2}(-3)) = h^0(O_{P^2}(0)) by Serre duality
        assert_eq!(line_cohom(2, -3, 2), bi(1));
        assert_eq!(line_cohom(3, 2, 0), bi(10));
        assert_eq!(line_cohom(2, -2, 1), bi(0));
        // h^0(O_{P^3}(-2)) = 0, the truncation convention at work
        assert_eq!(line_cohom(3, -2, 0), bi(0));
    }

    #[test]
    fn line_euler_examples() {
        assert_eq!(line_euler(2, -3), bi(1));
        assert_eq!(line_euler(2, 0), bi(1));
        assert_eq!(line_euler(3, -2), bi(0));
    }

    #[test]
    #[should_panic]
    fn line_cohom_rejects_out_of_range_degree() {
        line_cohom(2, 0, 3);
    }

    proptest! {
        #[test]
        fn trunc_agrees_with_poly_above_diagonal(k in 0u32..8, extra in 0i64..40) {
            let m = k as i64 + extra;
            prop_assert_eq!(binom_trunc(m, k), binom_poly(m, k));
        }

        #[test]
        fn pascal_rule(m in -40i64..40, k in 1u32..8) {
            let lhs = binom_poly(m, k);
            let rhs = binom_poly(m - 1, k) + binom_poly(m - 1, k - 1);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn euler_is_alternating_sum(n in 1u32..6, d in -30i64..30) {
            let mut sum = BigInt::zero();
            for q in 0..=n {
                let sign = if q % 2 == 0 { 1 } else { -1 };
                sum += BigInt::from(sign) * line_cohom(n, d, q);
            }
            prop_assert_eq!(sum, line_euler(n, d));
        }

        #[test]
        fn intermediate_cohomology_vanishes(n in 2u32..6, d in -30i64..30, q in 1u32..5) {
            prop_assume!(q < n);
            prop_assert_eq!(line_cohom(n, d, q), BigInt::zero());
        }

        #[test]
        fn serre_duality(n in 1u32..6, d in -30i64..30, q in 0u32..6) {
            prop_assume!(q <= n);
            prop_assert_eq!(line_cohom(n, d, q), line_cohom(n, -d - n as i64 - 1, n - q));
        }
    }
}
