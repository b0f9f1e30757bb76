//! Generators for the classical pure-resolution families.
//!
//! Every generator returns data that passes validation, the Betti
//! inequalities, and agrees with the minimal solution from
//! [`hk_betti`](crate::resolution::hk_betti); the tests pin this down.

use crate::arith::binom_trunc;
use crate::resolution::{BettiVector, DegreeSequence, PureResolution, ResolutionError};
use num_bigint::BigInt;

/// Koszul complex on n+1 variables: degrees (0, 1, ..., n+1) and binomial
/// Betti numbers b_i = C(n+1, i).
pub fn koszul(n: u32) -> Result<PureResolution, ResolutionError> {
    let degrees: Vec<i64> = (0..=n as i64 + 1).collect();
    let betti: Vec<BigInt> = (0..=n + 1).map(|i| binom_trunc(n as i64 + 1, i)).collect();
    PureResolution::new(DegreeSequence::new(n, degrees)?, BettiVector::new(betti))
}

/// Resolution of a compressed Gorenstein Artinian algebra of socle degree 2t:
/// degrees d_i = t + i for 1 <= i <= n, d_{n+1} = 2t + n + 1, with
/// `a_i = C(t+i-1, i-1) C(t+n+1, n+1-i) - C(t+n-i, n+1-i) C(t+n, i-1)`
/// in the middle and 1 at both ends.
pub fn compressed_gorenstein(n: u32, t: u32) -> Result<PureResolution, ResolutionError> {
    assert!(t >= 1, "socle parameter t must be at least 1");
    let t = t as i64;
    let n_i = n as i64;
    let mut degrees = vec![0i64];
    degrees.extend((1..=n_i).map(|i| t + i));
    degrees.push(2 * t + n_i + 1);
    let mut betti = vec![BigInt::from(1)];
    for i in 1..=n {
        let i_i = i as i64;
        let alpha = binom_trunc(t + i_i - 1, i - 1) * binom_trunc(t + n_i + 1, n + 1 - i)
            - binom_trunc(t + n_i - i_i, n + 1 - i) * binom_trunc(t + n_i, i - 1);
        betti.push(alpha);
    }
    betti.push(BigInt::from(1));
    PureResolution::new(DegreeSequence::new(n, degrees)?, BettiVector::new(betti))
}

/// Eagon-Northcott resolution of the maximal-minor ideal of a generic map
/// `R(-d)^a -> R^{a+n}`: degrees d_i = d(a+i-1) and
/// `b_i = C(a+n, a+i-1) C(a+i-2, i-1)` for i = 1..n+1.
///
/// The closed general term interpolates the displayed bottom, second-to-top
/// and top multiplicities and is pinned by the exactness check.
pub fn eagon_northcott(n: u32, d: u32, a: u32) -> Result<PureResolution, ResolutionError> {
    assert!(d >= 1 && a >= 1, "parameters d and a must be at least 1");
    let d_i = d as i64;
    let a_i = a as i64;
    let mut degrees = vec![0i64];
    degrees.extend((1..=n as i64 + 1).map(|i| d_i * (a_i + i - 1)));
    let mut betti = vec![BigInt::from(1)];
    for i in 1..=n + 1 {
        betti.push(binom_trunc(a_i + n as i64, a + i - 1) * binom_trunc(a_i + i as i64 - 2, i - 1));
    }
    PureResolution::new(DegreeSequence::new(n, degrees)?, BettiVector::new(betti))
}
