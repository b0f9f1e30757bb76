//! Dimension bookkeeping along long exact sequences.
//!
//! A short exact sequence of sheaves induces a long exact sequence in
//! cohomology, flattened here to a chain `0 -> v_0 -> v_1 -> ... -> v_{L-1} -> 0`
//! of group dimensions. Such a chain is exact iff there are ranks r_j >= 0
//! with `v_j = r_{j-1} + r_j` and zero ranks at both ends. [`chase_ses`]
//! propagates interval bounds on the ranks to a fixpoint and refines each
//! entry to the tightest sound bound; entries collapse to Known when forced.
//!
//! The solver never guesses connecting-map ranks: an entry stays an interval
//! unless exactness alone pins it down.

use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

/// A cohomology-group dimension with determinacy status.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CohomDim {
    Known(BigInt),
    Interval { lo: BigInt, hi: BigInt },
    Unknown,
}

impl CohomDim {
    pub fn known<T: Into<BigInt>>(value: T) -> Self {
        let v = value.into();
        debug_assert!(v >= BigInt::zero(), "dimensions are non-negative");
        CohomDim::Known(v)
    }

    pub fn zero() -> Self {
        CohomDim::Known(BigInt::zero())
    }

    /// Known(k) and Interval(k, k) are the same statement.
    pub fn interval(lo: BigInt, hi: BigInt) -> Self {
        debug_assert!(lo <= hi, "empty interval");
        if lo == hi {
            CohomDim::Known(lo)
        } else {
            CohomDim::Interval { lo, hi }
        }
    }

    pub fn is_known(&self) -> bool {
        matches!(self, CohomDim::Known(_))
    }

    pub fn as_known(&self) -> Option<&BigInt> {
        match self {
            CohomDim::Known(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_known_zero(&self) -> bool {
        matches!(self, CohomDim::Known(v) if v.is_zero())
    }

    pub fn is_known_nonzero(&self) -> bool {
        matches!(self, CohomDim::Known(v) if !v.is_zero())
    }

    /// Dimension of m copies: scales every bound by m >= 0.
    pub fn scale(&self, m: &BigInt) -> Self {
        debug_assert!(*m >= BigInt::zero());
        if m.is_zero() {
            return CohomDim::zero();
        }
        match self {
            CohomDim::Known(v) => CohomDim::Known(v * m),
            CohomDim::Interval { lo, hi } => CohomDim::interval(lo * m, hi * m),
            CohomDim::Unknown => CohomDim::Unknown,
        }
    }

    /// Intersection of the two statements; `None` means they contradict.
    pub fn intersect(&self, other: &CohomDim) -> Option<CohomDim> {
        let a = Bounds::from(self);
        let b = Bounds::from(other);
        let lo = a.lo.max(b.lo);
        let hi = match (a.hi, b.hi) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (Some(x), None) | (None, Some(x)) => Some(x),
            (None, None) => None,
        };
        match hi {
            Some(h) if lo > h => None,
            Some(h) => Some(CohomDim::interval(lo, h)),
            None => Some(bounds_to_dim(lo, None)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CohomDim::Known(v) => crate::resolution::bigint_to_json(v),
            CohomDim::Interval { lo, hi } => serde_json::json!(format!("{lo}..{hi}")),
            CohomDim::Unknown => serde_json::json!("?"),
        }
    }
}

impl fmt::Display for CohomDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomDim::Known(v) => write!(f, "{v}"),
            CohomDim::Interval { lo, hi } => write!(f, "{lo}..{hi}"),
            CohomDim::Unknown => write!(f, "?"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChaseError {
    #[error("no exact chain is compatible with the supplied dimensions (position {position})")]
    Inconsistent { position: usize },
}

/// Interval with an optional (infinite) upper bound, for internal propagation.
#[derive(Debug, Clone)]
struct Bounds {
    lo: BigInt,
    hi: Option<BigInt>,
}

impl Bounds {
    fn exact(v: BigInt) -> Self {
        Bounds { lo: v.clone(), hi: Some(v) }
    }

    fn nonnegative() -> Self {
        Bounds { lo: BigInt::zero(), hi: None }
    }

    fn is_empty(&self) -> bool {
        matches!(&self.hi, Some(h) if self.lo > *h)
    }
}

impl From<&CohomDim> for Bounds {
    fn from(dim: &CohomDim) -> Self {
        match dim {
            CohomDim::Known(v) => Bounds::exact(v.clone()),
            CohomDim::Interval { lo, hi } => Bounds { lo: lo.clone(), hi: Some(hi.clone()) },
            CohomDim::Unknown => Bounds::nonnegative(),
        }
    }
}

fn bounds_to_dim(lo: BigInt, hi: Option<BigInt>) -> CohomDim {
    match hi {
        Some(h) => CohomDim::interval(lo, h),
        // An infinite upper bound has no representation; degrade soundly.
        None => CohomDim::Unknown,
    }
}

/// Refine an exact chain of dimensions to the tightest bounds the exactness
/// model forces. The chain is `0 -> v_0 -> ... -> v_{L-1} -> 0`; for a long
/// exact sequence of a short exact sequence on P^n it has length 3(n+1) laid
/// out as H^0 A, H^0 B, H^0 C, H^1 A, ..., H^n C.
///
/// Errors with [`ChaseError::Inconsistent`] when the Known entries admit no
/// exact chain, which signals invalid input or an upstream bug.
pub fn chase_ses(chain: &[CohomDim]) -> Result<Vec<CohomDim>, ChaseError> {
    let len = chain.len();
    if len == 0 {
        return Ok(Vec::new());
    }
    let v: Vec<Bounds> = chain.iter().map(Bounds::from).collect();
    // ranks[j] is the rank of the map into v_j; ranks[len] is the rank out of
    // the last entry. Both ends are pinned to zero by exactness.
    let mut ranks: Vec<Bounds> = (0..=len).map(|_| Bounds::nonnegative()).collect();
    ranks[0] = Bounds::exact(BigInt::zero());
    ranks[len] = Bounds::exact(BigInt::zero());

    loop {
        let mut changed = false;
        // constraint at j: ranks[j] + ranks[j+1] within v[j]
        for (j, vj) in v.iter().enumerate() {
            changed |=
                tighten_pair(&mut ranks, j, vj).map_err(|_| ChaseError::Inconsistent { position: j })?;
        }
        for (j, vj) in v.iter().enumerate().rev() {
            changed |=
                tighten_pair(&mut ranks, j, vj).map_err(|_| ChaseError::Inconsistent { position: j })?;
        }
        if !changed {
            break;
        }
    }

    let mut refined = Vec::with_capacity(len);
    for j in 0..len {
        let lo = &ranks[j].lo + &ranks[j + 1].lo;
        let hi = match (&ranks[j].hi, &ranks[j + 1].hi) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let combined = bounds_to_dim(lo, hi);
        match combined.intersect(&chain[j]) {
            Some(dim) => refined.push(dim),
            None => return Err(ChaseError::Inconsistent { position: j }),
        }
    }
    Ok(refined)
}

/// Enforce `ranks[j] + ranks[j+1] in v` in both directions; reports whether
/// anything tightened, or Err(()) when a rank interval empties.
fn tighten_pair(ranks: &mut [Bounds], j: usize, v: &Bounds) -> Result<bool, ()> {
    let mut changed = false;
    for (this, other) in [(j, j + 1), (j + 1, j)] {
        // lower bound: v.lo - hi(other)
        if let Some(other_hi) = ranks[other].hi.clone() {
            let implied = &v.lo - &other_hi;
            if implied > ranks[this].lo {
                ranks[this].lo = implied;
                changed = true;
            }
        }
        // upper bound: v.hi - lo(other)
        if let Some(v_hi) = &v.hi {
            let implied = v_hi - &ranks[other].lo;
            let tighter = match &ranks[this].hi {
                Some(cur) => implied < *cur,
                None => true,
            };
            if tighter {
                ranks[this].hi = Some(implied);
                changed = true;
            }
        }
        if ranks[this].is_empty() {
            return Err(());
        }
    }
    Ok(changed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: i64) -> CohomDim {
        CohomDim::known(v)
    }

    fn iv(lo: i64, hi: i64) -> CohomDim {
        CohomDim::interval(BigInt::from(lo), BigInt::from(hi))
    }

    #[test]
    fn squeeze_between_zeros() {
        let chain = vec![k(0), CohomDim::Unknown, k(0)];
        let out = chase_ses(&chain).unwrap();
        assert_eq!(out[1], k(0));
    }

    #[test]
    fn rank_nullity_three_term() {
        // 0 -> a -> ? -> c -> 0 with zero padding forces the middle to a + c.
        let chain = vec![k(0), k(4), CohomDim::Unknown, k(7), k(0)];
        let out = chase_ses(&chain).unwrap();
        assert_eq!(out[2], k(11));
    }

    #[test]
    fn partial_refinement_keeps_interval() {
        // 0 -> ? -> 5 -> 3 -> ? -> 0: first entry lands in [2, 5].
        let chain = vec![CohomDim::Unknown, k(5), k(3), CohomDim::Unknown];
        let out = chase_ses(&chain).unwrap();
        assert_eq!(out[0], iv(2, 5));
        assert_eq!(out[3], iv(0, 3));
    }

    #[test]
    fn alternating_sum_inconsistency_detected() {
        // 0 -> 1 -> 0 -> 0: no exact chain has v_0 = 1 dying into zero.
        let chain = vec![k(1), k(0)];
        assert!(chase_ses(&chain).is_err());
        let chain = vec![k(2), k(1), k(2)];
        // ranks: r1 = 2, then v1 = 2 + r2 >= 2 > 1
        assert!(chase_ses(&chain).is_err());
    }

    #[test]
    fn interval_inputs_are_respected() {
        let chain = vec![k(0), iv(1, 4), k(2), k(0)];
        let out = chase_ses(&chain).unwrap();
        assert_eq!(out[1], k(2));
    }

    #[test]
    fn single_entry_chain_must_vanish() {
        let out = chase_ses(&[CohomDim::Unknown]).unwrap();
        assert_eq!(out[0], k(0));
        assert!(chase_ses(&[k(3)]).is_err());
    }

    #[test]
    fn two_unknowns_in_a_row_stay_partially_free() {
        let chain = vec![k(1), CohomDim::Unknown, CohomDim::Unknown, k(1)];
        let out = chase_ses(&chain).unwrap();
        // r_1 = 1 and r_3 = 1 are forced, the middle rank is free.
        assert_eq!(out[0], k(1));
        assert_eq!(out[3], k(1));
        assert_eq!(out[1], CohomDim::Unknown);
        assert_eq!(out[2], CohomDim::Unknown);
    }

    #[test]
    fn intersect_and_scale() {
        assert_eq!(k(3).intersect(&iv(0, 5)), Some(k(3)));
        assert_eq!(k(3).intersect(&k(4)), None);
        assert_eq!(iv(1, 4).intersect(&iv(3, 9)), Some(iv(3, 4)));
        assert_eq!(iv(2, 3).scale(&BigInt::from(5)), iv(10, 15));
        assert_eq!(CohomDim::Unknown.scale(&BigInt::zero()), k(0));
    }

    #[test]
    fn display_matches_csv_grammar() {
        assert_eq!(k(7).to_string(), "7");
        assert_eq!(iv(2, 5).to_string(), "2..5");
        assert_eq!(CohomDim::Unknown.to_string(), "?");
    }
}
