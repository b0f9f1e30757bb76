//! Cohomology of syzygy bundles, their duals and endomorphism-type tensor
//! products, by recursive propagation through the defining short exact
//! sequences.
//!
//! Every syzygy bundle sits in two chains: one presenting it as a cokernel,
//! one as a kernel. The engine evaluates both recursion directions and
//! intersects the results; forced values must agree, and a disagreement of
//! Known values is a hard failure. Dimensions that exactness alone does not
//! pin down stay Interval or Unknown, and no caller may treat them as facts.
//!
//! G-side bundles are evaluated as F-side bundles of the dualized resolution,
//! which has the same original chain term by term.

use crate::arith::line_cohom;
use crate::chase::{chase_ses, ChaseError, CohomDim};
use crate::node::{BaseNode, NodeError, SheafNode};
use crate::resolution::{PureResolution, ResolutionError, Side, SyzygyId};
use dashmap::DashMap;
use num_bigint::BigInt;
use std::fmt;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("inconsistent exact sequence while evaluating {context}: {source}")]
    Chase {
        context: String,
        #[source]
        source: ChaseError,
    },
    #[error("two-sided evaluation disagrees for {node} at q = {q}: {left} vs {right}")]
    TwoSided {
        node: String,
        q: u32,
        left: CohomDim,
        right: CohomDim,
    },
    #[error("window lower bound {lo} exceeds upper bound {hi}")]
    BadWindow { lo: i64, hi: i64 },
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Node(#[from] NodeError),
}

/// Inclusive twist range for tables and homological-dimension scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwistWindow {
    pub lo: i64,
    pub hi: i64,
}

impl TwistWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self, EngineError> {
        if lo > hi {
            return Err(EngineError::BadWindow { lo, hi });
        }
        Ok(TwistWindow { lo, hi })
    }

    /// Conservative default: every line-bundle twist reached by the
    /// recursions differs from t by at most d_{n+1}, and line cohomology
    /// vanishes outside a band of width n+1 around the origin.
    pub fn default_for(res: &PureResolution) -> Self {
        let res = res.normalize();
        let span = res.top_degree() + res.n() as i64 + 1;
        TwistWindow { lo: -span, hi: span }
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn contains(&self, other: &TwistWindow) -> bool {
        self.lo <= other.lo && self.hi >= other.hi
    }
}

impl fmt::Display for TwistWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// Cohomology table of one sheaf expression over a twist window.
#[derive(Debug, Clone)]
pub struct CohomologyTable {
    pub node: SheafNode,
    pub window: TwistWindow,
    n: u32,
    columns: Vec<Arc<Vec<CohomDim>>>,
}

impl CohomologyTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, q: u32, t: i64) -> Option<&CohomDim> {
        if q > self.n || t < self.window.lo || t > self.window.hi {
            return None;
        }
        Some(&self.columns[(t - self.window.lo) as usize][q as usize])
    }

    pub fn column(&self, t: i64) -> Option<&[CohomDim]> {
        if t < self.window.lo || t > self.window.hi {
            return None;
        }
        Some(&self.columns[(t - self.window.lo) as usize])
    }

    /// CSV export: header `t,q0,...,qn`; integer cells for Known, `lo..hi`
    /// for intervals, `?` for unknowns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for q in 0..=self.n {
            out.push_str(&format!(",q{q}"));
        }
        out.push('\n');
        for t in self.window.iter() {
            out.push_str(&t.to_string());
            for cell in self.column(t).expect("t in window").iter() {
                out.push(',');
                out.push_str(&cell.to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum MemoKey {
    SyzDown(u32, i64),
    SyzUp(u32, i64),
    DualUp(u32, i64),
    DualDown(u32, i64),
    TensorDown(u32, u32, i64),
    TensorUp(u32, u32, i64),
    Syz(u32, i64),
    Dual(u32, i64),
    Tensor(u32, u32, i64),
}

type Column = Arc<Vec<CohomDim>>;

/// Pure evaluator over one validated, normalized resolution.
///
/// The memo table is safe under concurrent lookups; evaluation is
/// deterministic, so concurrent inserts for the same key are idempotent.
pub struct Engine {
    res: PureResolution,
    memo: DashMap<MemoKey, Column>,
    dual: OnceLock<Box<Engine>>,
}

impl Engine {
    /// Validates the resolution and works with its normalization.
    pub fn new(res: &PureResolution) -> Result<Self, EngineError> {
        res.ensure_valid()?;
        Ok(Engine {
            res: res.normalize(),
            memo: DashMap::new(),
            dual: OnceLock::new(),
        })
    }

    /// The normalized resolution the engine evaluates over.
    pub fn resolution(&self) -> &PureResolution {
        &self.res
    }

    pub fn default_window(&self) -> TwistWindow {
        TwistWindow::default_for(&self.res)
    }

    /// Engine over the dualized resolution; G-side queries route here.
    pub fn dual_engine(&self) -> &Engine {
        self.dual.get_or_init(|| {
            Box::new(Engine::new(&self.res.dualize()).expect("dual of valid resolution is valid"))
        })
    }

    fn n(&self) -> u32 {
        self.res.n()
    }

    fn top(&self) -> i64 {
        self.res.top_degree()
    }

    fn beta(&self, i: u32) -> &BigInt {
        self.res.beta(i as usize)
    }

    fn deg(&self, i: u32) -> i64 {
        self.res.degree(i as usize)
    }

    /// h^q(node(t)) for q = 0..n.
    pub fn node_cohomology(&self, node: &SheafNode, t: i64) -> Result<Column, EngineError> {
        let t = t + node.outer_twist();
        match node.base() {
            BaseNode::LineSum(entries) => {
                let n = self.n();
                let col: Vec<CohomDim> = (0..=n)
                    .map(|q| {
                        let total: BigInt = entries
                            .iter()
                            .map(|(a, m)| m * line_cohom(n, a + t, q))
                            .sum();
                        CohomDim::Known(total)
                    })
                    .collect();
                Ok(Arc::new(col))
            }
            BaseNode::Syzygy(id) => match id.side {
                Side::F => {
                    self.res.syzygy(Side::F, id.index)?;
                    self.syzygy_final(id.index, t)
                }
                Side::G => self
                    .dual_engine()
                    .node_cohomology(&SheafNode::syzygy(SyzygyId::new(Side::F, id.index)), t),
            },
            BaseNode::DualSyzygy(id) => match id.side {
                Side::F => {
                    self.res.syzygy(Side::F, id.index)?;
                    self.dual_final(id.index, t)
                }
                Side::G => self.dual_engine().node_cohomology(
                    &SheafNode::syzygy(SyzygyId::new(Side::F, id.index)).dual(),
                    t,
                ),
            },
            BaseNode::Tensor { left, dual_right } => match left.side {
                Side::F => {
                    self.res.syzygy(Side::F, left.index)?;
                    self.res.syzygy(Side::F, dual_right.index)?;
                    self.tensor_final(left.index, dual_right.index, t)
                }
                Side::G => self.dual_engine().node_cohomology(
                    &SheafNode::tensor(
                        SyzygyId::new(Side::F, left.index),
                        SyzygyId::new(Side::F, dual_right.index),
                    )
                    .expect("same side"),
                    t,
                ),
            },
        }
    }

    /// Full table over the window.
    pub fn cohom_table(
        &self,
        node: &SheafNode,
        window: TwistWindow,
    ) -> Result<CohomologyTable, EngineError> {
        let columns = window
            .iter()
            .map(|t| self.node_cohomology(node, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CohomologyTable {
            node: node.clone(),
            window,
            n: self.n(),
            columns,
        })
    }

    /// Homological dimension of a node, bounded through intermediate
    /// cohomology vanishing over the window: hd <= d iff h^q vanishes for
    /// 1 <= q <= n-d-1. Known only when every consulted row is decided.
    pub fn hd_node(&self, node: &SheafNode, window: TwistWindow) -> Result<CohomDim, EngineError> {
        let n = self.n();
        #[derive(PartialEq)]
        enum Row {
            Vanishes,
            NonVanishing,
            Undecided,
        }
        let mut rows = Vec::new();
        for q in 1..n {
            let mut all_zero = true;
            let mut nonzero = false;
            for t in window.iter() {
                let col = self.node_cohomology(node, t)?;
                let cell = &col[q as usize];
                if cell.is_known_nonzero() {
                    nonzero = true;
                    all_zero = false;
                    break;
                }
                if !cell.is_known_zero() {
                    all_zero = false;
                }
            }
            rows.push(if nonzero {
                Row::NonVanishing
            } else if all_zero {
                Row::Vanishes
            } else {
                Row::Undecided
            });
        }
        // rows[q-1] covers cohomological degree q; hd <= d needs rows 1..=n-d-1.
        let candidate = |d: u32, pred: &dyn Fn(&Row) -> bool| -> bool {
            (1..n.saturating_sub(d)).all(|q| pred(&rows[q as usize - 1]))
        };
        let lo = (0..n)
            .find(|&d| candidate(d, &|r| r != &Row::NonVanishing))
            .unwrap_or(n - 1);
        let hi = (0..n)
            .find(|&d| candidate(d, &|r| r == &Row::Vanishes))
            .unwrap_or(n - 1);
        Ok(CohomDim::interval(BigInt::from(lo), BigInt::from(hi)))
    }

    /// Homological dimension of a syzygy bundle.
    pub fn hd(&self, id: SyzygyId, window: TwistWindow) -> Result<CohomDim, EngineError> {
        self.res.syzygy(id.side, id.index)?;
        self.hd_node(&SheafNode::syzygy(id), window)
    }

    fn line_column(&self, mult: &BigInt, twist: i64) -> Column {
        let n = self.n();
        Arc::new(
            (0..=n)
                .map(|q| CohomDim::Known(mult * line_cohom(n, twist, q)))
                .collect(),
        )
    }

    fn unknown_column(&self) -> Vec<CohomDim> {
        vec![CohomDim::Unknown; self.n() as usize + 1]
    }

    fn memoized<F>(&self, key: MemoKey, compute: F) -> Result<Column, EngineError>
    where
        F: FnOnce(&Self) -> Result<Column, EngineError>,
    {
        if let Some(hit) = self.memo.get(&key).map(|r| r.value().clone()) {
            return Ok(hit);
        }
        let value = compute(self)?;
        self.memo.insert(key, value.clone());
        Ok(value)
    }

    /// Run the long exact sequence of `0 -> A -> B -> C -> 0` and return the
    /// refined column in the requested slot (0 = A, 1 = B, 2 = C).
    fn chase_slot(
        &self,
        a: &[CohomDim],
        b: &[CohomDim],
        c: &[CohomDim],
        slot: usize,
        context: impl Fn() -> String,
    ) -> Result<Column, EngineError> {
        let n = self.n() as usize;
        let mut chain = Vec::with_capacity(3 * (n + 1));
        for q in 0..=n {
            chain.push(a[q].clone());
            chain.push(b[q].clone());
            chain.push(c[q].clone());
        }
        let refined = chase_ses(&chain).map_err(|source| EngineError::Chase {
            context: context(),
            source,
        })?;
        Ok(Arc::new(
            (0..=n).map(|q| refined[3 * q + slot].clone()).collect(),
        ))
    }

    /// F_i(t) as a cokernel, recursing toward i = 1.
    fn syzygy_down(&self, i: u32, t: i64) -> Result<Column, EngineError> {
        self.memoized(MemoKey::SyzDown(i, t), |eng| {
            let a = if i == 1 {
                eng.line_column(eng.beta(0), t - eng.top())
            } else {
                eng.syzygy_down(i - 1, t)?
            };
            let b = eng.line_column(eng.beta(i), t + eng.deg(i) - eng.top());
            let c = eng.unknown_column();
            eng.chase_slot(&a, &b, &c, 2, || format!("F_{i}({t}) via cokernel chain"))
        })
    }

    /// F_i(t) as a kernel, recursing toward i = n-1.
    fn syzygy_up(&self, i: u32, t: i64) -> Result<Column, EngineError> {
        self.memoized(MemoKey::SyzUp(i, t), |eng| {
            let n = eng.n();
            let a = eng.unknown_column();
            let b = eng.line_column(eng.beta(i + 1), t + eng.deg(i + 1) - eng.top());
            let c = if i == n - 1 {
                eng.line_column(eng.beta(n + 1), t)
            } else {
                eng.syzygy_up(i + 1, t)?
            };
            eng.chase_slot(&a, &b, &c, 0, || format!("F_{i}({t}) via kernel chain"))
        })
    }

    fn syzygy_final(&self, i: u32, t: i64) -> Result<Column, EngineError> {
        self.memoized(MemoKey::Syz(i, t), |eng| {
            let down = eng.syzygy_down(i, t)?;
            let up = eng.syzygy_up(i, t)?;
            eng.merge_routes(&down, &up, || format!("F_{i}({t})"))
        })
    }

    /// F_i^dual(t) as a cokernel, recursing toward i = n-1.
    fn dual_up(&self, i: u32, t: i64) -> Result<Column, EngineError> {
        self.memoized(MemoKey::DualUp(i, t), |eng| {
            let n = eng.n();
            let a = if i == n - 1 {
                eng.line_column(eng.beta(n + 1), t)
            } else {
                eng.dual_up(i + 1, t)?
            };
            let b = eng.line_column(eng.beta(i + 1), t + eng.top() - eng.deg(i + 1));
            let c = eng.unknown_column();
            eng.chase_slot(&a, &b, &c, 2, || format!("F_{i}v({t}) via cokernel chain"))
        })
    }

    /// F_i^dual(t) as a kernel, recursing toward i = 1.
    fn dual_down(&self, i: u32, t: i64) -> Result<Column, EngineError> {
        self.memoized(MemoKey::DualDown(i, t), |eng| {
            let a = eng.unknown_column();
            let b = eng.line_column(eng.beta(i), t + eng.top() - eng.deg(i));
            let c = if i == 1 {
                eng.line_column(eng.beta(0), t + eng.top())
            } else {
                eng.dual_down(i - 1, t)?
            };
            eng.chase_slot(&a, &b, &c, 0, || format!("F_{i}v({t}) via kernel chain"))
        })
    }

    fn dual_final(&self, i: u32, t: i64) -> Result<Column, EngineError> {
        self.memoized(MemoKey::Dual(i, t), |eng| {
            let up = eng.dual_up(i, t)?;
            let down = eng.dual_down(i, t)?;
            eng.merge_routes(&up, &down, || format!("F_{i}v({t})"))
        })
    }

    fn scaled_dual(&self, b: u32, mult: &BigInt, t: i64) -> Result<Vec<CohomDim>, EngineError> {
        let col = self.dual_final(b, t)?;
        Ok(col.iter().map(|dim| dim.scale(mult)).collect())
    }

    /// (F_a (x) F_b^dual)(t) along the chain of F_a, toward a = 1.
    fn tensor_down(&self, a: u32, b: u32, t: i64) -> Result<Column, EngineError> {
        self.memoized(MemoKey::TensorDown(a, b, t), |eng| {
            let first = if a == 1 {
                eng.scaled_dual(b, &eng.beta(0).clone(), t - eng.top())?
            } else {
                eng.tensor_down(a - 1, b, t)?.to_vec()
            };
            let mid = eng.scaled_dual(b, &eng.beta(a).clone(), t + eng.deg(a) - eng.top())?;
            let c = eng.unknown_column();
            eng.chase_slot(&first, &mid, &c, 2, || {
                format!("F_{a}xF_{b}v({t}) via cokernel chain")
            })
        })
    }

    /// (F_a (x) F_b^dual)(t) along the chain of F_a, toward a = n-1.
    fn tensor_up(&self, a: u32, b: u32, t: i64) -> Result<Column, EngineError> {
        self.memoized(MemoKey::TensorUp(a, b, t), |eng| {
            let n = eng.n();
            let first = eng.unknown_column();
            let mid = eng.scaled_dual(b, &eng.beta(a + 1).clone(), t + eng.deg(a + 1) - eng.top())?;
            let c = if a == n - 1 {
                eng.scaled_dual(b, &eng.beta(n + 1).clone(), t)?
            } else {
                eng.tensor_up(a + 1, b, t)?.to_vec()
            };
            eng.chase_slot(&first, &mid, &c, 0, || {
                format!("F_{a}xF_{b}v({t}) via kernel chain")
            })
        })
    }

    fn tensor_final(&self, a: u32, b: u32, t: i64) -> Result<Column, EngineError> {
        self.memoized(MemoKey::Tensor(a, b, t), |eng| {
            let down = eng.tensor_down(a, b, t)?;
            let up = eng.tensor_up(a, b, t)?;
            eng.merge_routes(&down, &up, || format!("F_{a}xF_{b}v({t})"))
        })
    }

    /// Intersect the two recursion directions; Known values must agree.
    fn merge_routes(
        &self,
        left: &[CohomDim],
        right: &[CohomDim],
        context: impl Fn() -> String,
    ) -> Result<Column, EngineError> {
        let mut merged = Vec::with_capacity(left.len());
        for (q, (l, r)) in left.iter().zip(right.iter()).enumerate() {
            match l.intersect(r) {
                Some(dim) => merged.push(dim),
                None => {
                    return Err(EngineError::TwoSided {
                        node: context(),
                        q: q as u32,
                        left: l.clone(),
                        right: r.clone(),
                    })
                }
            }
        }
        Ok(Arc::new(merged))
    }
}
