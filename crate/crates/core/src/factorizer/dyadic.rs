//! Dyadic blocks and the bounds assembled from them.
//!
//! Cells: `I_k = [2^{-k-1}, 2^{-k})`, `J_k = (0, 2^{-k-1})` for `k ≥ 0`,
//! `I_{-1} = [1, ∞)`, `J_{-1} = (0, 1)`, `J_{-2} = (0, ∞)`. The sets
//! `I_k × J_{k-1}` and `J_k × I_k` partition `{max(x, y) ∈ I_k}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

#[allow(unused_imports)]
use num_traits::Float;

use super::catalog::{Theta2Far, Theta2Near, ThetaPlus};
use super::kernel::{certified_bound_from_sobolev, certified_pcb_bound, sobolev_constant, SmoothKernel};
use crate::error::{invalid, Result};
use crate::matcore::SchattenIndex;

/// Interval with a half-open right end; `lo_open` marks `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        let above = if self.lo_open { v > self.lo } else { v >= self.lo };
        above && v < self.hi
    }

    /// `I_k`.
    pub fn dyadic_i(k: i32) -> Self {
        if k == -1 {
            Self { lo: 1.0, hi: f64::INFINITY, lo_open: false }
        } else {
            Self { lo: pow2(-k - 1), hi: pow2(-k), lo_open: false }
        }
    }

    /// `J_k`, including `J_{-1} = (0, 1)` and `J_{-2} = (0, ∞)`.
    pub fn dyadic_j(k: i32) -> Self {
        let hi = if k == -2 { f64::INFINITY } else { pow2(-k - 1) };
        Self { lo: 0.0, hi, lo_open: true }
    }
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

/// The `k` with `v ∈ I_k`, for `v > 0`. Exact: read off the binary exponent.
pub fn level_of(v: f64) -> i32 {
    debug_assert!(v > 0.0);
    if v >= 1.0 {
        return -1;
    }
    let mut v = v;
    let mut extra = 0;
    while v < f64::MIN_POSITIVE {
        v *= pow2(64);
        extra += 64;
    }
    let e = ((v.to_bits() >> 52) & 0x7ff) as i32 - 1023 - extra;
    // v ∈ [2^e, 2^{e+1}) = I_{-e-1}
    -e - 1
}

/// Which half of `{max(x, y) ∈ I_k}` a pair falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseOneCell {
    /// `I_k × J_{k-1}`
    XDominant,
    /// `J_k × I_k`
    YDominant,
}

/// `(k, cell, x-interval, y-interval)` for `k = -1, …, k_max`.
pub fn case_one_partition(k_max: i32) -> Vec<(i32, CaseOneCell, Interval, Interval)> {
    let mut out = Vec::new();
    for k in -1..=k_max {
        out.push((k, CaseOneCell::XDominant, Interval::dyadic_i(k), Interval::dyadic_j(k - 1)));
        out.push((k, CaseOneCell::YDominant, Interval::dyadic_j(k), Interval::dyadic_i(k)));
    }
    out
}

/// Cell of a positive pair.
pub fn cell_of(x: f64, y: f64) -> (i32, CaseOneCell) {
    let k = level_of(x.max(y));
    (k, if level_of(x) == k { CaseOneCell::XDominant } else { CaseOneCell::YDominant })
}

/// The divided-difference symbol restricted to `x ≥ 0, y ∈ I_k`, with its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicBlock {
    pub k: i32,
    pub x_interval: Interval,
    pub y_interval: Interval,
    pub bound: f64,
}

fn quasi_p(p: SchattenIndex) -> Result<f64> {
    match p {
        SchattenIndex::Finite(v) if v <= 1.0 => Ok(v),
        _ => Err(invalid("p", "dyadic assembly needs 0 < p ≤ 1")),
    }
}

/// Scales the `k = 0` bound to block `k` by homogeneity, or gathers all
/// `y ≥ 1` blocks for `k = -1` through the `p`-triangle inequality.
pub fn dyadic_block_bound(theta: f64, p: SchattenIndex, k: i32, base_bound: f64) -> Result<DyadicBlock> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid("theta", "exponent must lie strictly inside (0, 1)"));
    }
    let pv = quasi_p(p)?;
    if k < -1 {
        return Err(invalid("k", "blocks start at k = -1"));
    }
    if !(base_bound >= 0.0 && base_bound.is_finite()) {
        return Err(invalid("base_bound", "must be finite and nonnegative"));
    }
    let bound = if k >= 0 {
        pow2(-k).powf(theta - 1.0) * base_bound
    } else {
        // Σ_{j≥0} 2^{jp(θ-1)} = (1 - 2^{p(θ-1)})^{-1}
        base_bound * (1.0 - 2f64.powf(pv * (theta - 1.0))).powf(-1.0 / pv)
    };
    Ok(DyadicBlock {
        k,
        x_interval: Interval { lo: 0.0, hi: f64::INFINITY, lo_open: false },
        y_interval: Interval::dyadic_i(k),
        bound,
    })
}

/// `⌈1/p⌉ + 1`, the smallest integer Sobolev order safely above `1/p`.
pub fn default_order(p: SchattenIndex) -> u32 {
    match p {
        SchattenIndex::Finite(v) => (1.0 / v).ceil() as u32 + 1,
        SchattenIndex::Infinity => 1,
    }
}

/// Grid used when certifying catalog kernels.
pub const CERTIFICATION_GRID: usize = 512;

/// Certified bounds for `1/(a + x + y)` on `[0,1]²`, cached by dyadic level.
///
/// Direct certification is done at `a_0 = 2^j`. For `a ≥ a_0`,
/// `1/(a+x+y) = (a_0/a) · 1/(a_0 + x' + y')` with `x' = a_0 x/a ∈ [0, 1]`,
/// so the restriction argument gives `(a_0/a) B(a_0)`; the bound at `a` is
/// the least of these over `2^j ≤ a`, and `a · bound(a)` is nonincreasing.
#[derive(Debug)]
pub struct PlusBoundLadder {
    p: SchattenIndex,
    d: u32,
    cache: RefCell<BTreeMap<u32, f64>>,
}

impl PlusBoundLadder {
    pub fn new(p: SchattenIndex) -> Result<Self> {
        quasi_p(p)?;
        Ok(Self { p, d: default_order(p), cache: RefCell::new(BTreeMap::new()) })
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    /// Direct certification of the cut-off kernel at `a = 2^j`.
    pub fn direct(&self, j: u32) -> Result<f64> {
        if let Some(&v) = self.cache.borrow().get(&j) {
            return Ok(v);
        }
        let kernel = SmoothKernel::from_kernel(ThetaPlus::new(pow2(j as i32))?, CERTIFICATION_GRID)?;
        let v = certified_pcb_bound(&kernel, self.d, self.p)?;
        self.cache.borrow_mut().insert(j, v);
        Ok(v)
    }

    pub fn bound(&self, a: f64) -> Result<f64> {
        if !(a >= 1.0 && a.is_finite()) {
            return Err(invalid("a", "must be at least 1"));
        }
        let top = a.log2().floor() as u32;
        let mut best = f64::INFINITY;
        for j in 0..=top {
            if pow2(j as i32) > a {
                break;
            }
            best = best.min(pow2(j as i32) * self.direct(j)?);
        }
        Ok(best / a)
    }
}

/// Certified bound for `(1/(a+x+y))_{x,y∈[0,1]}`, `a ≥ 1`.
pub fn plus_kernel_bound(a: f64, p: SchattenIndex) -> Result<f64> {
    PlusBoundLadder::new(p)?.bound(a)
}

/// Number of explicitly assembled levels before the geometric tail.
pub const QUADRANT_LEVELS: i32 = 60;

/// `((u^p + v^p))^{1/p}`: bound for the rank-two numerator `f(x)·1 ± 1·g(y)`.
fn two_term(u: f64, v: f64, pv: f64) -> f64 {
    (u.powf(pv) + v.powf(pv)).powf(1.0 / pv)
}

/// Certified bound for `((x^θ ± y^θ)/(x+y))_{x ≥ a, y ≥ b}`.
///
/// With `a ≥ b` and `t = b/a` the symbol is `a^{θ-1}` times the same symbol
/// for `(1+x)` and `(t+y)` over the whole quadrant. That one is cut into
/// `[0,1)²` and, for each `k ≥ 0` with `I_k = [2^k, 2^{k+1})`,
/// `J_k = [0, 2^k)`, the product sets `I_k×J_k`, `J_k×I_k`, `I_k×I_k`. Each
/// piece is bounded by its numerator (rank two) times the rescaled
/// `1/(c + x + y)` bound; pieces past [`QUADRANT_LEVELS`] are summed as a
/// geometric series.
pub fn sum_quadrant_bound(a: f64, b: f64, theta: f64, p: SchattenIndex, ladder: &PlusBoundLadder) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
        return Err(invalid("a, b", "must be finite and nonnegative"));
    }
    if a + b <= 0.0 {
        return Err(invalid("a, b", "need a + b > 0"));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid("theta", "exponent must lie strictly inside (0, 1)"));
    }
    let pv = quasi_p(p)?;
    if ladder.p != p {
        return Err(invalid("ladder", "certified for a different p"));
    }
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    let t = small / big;

    let mut total = (two_term(2f64.powf(theta), (1.0 + t).powf(theta), pv) * ladder.bound(1.0 + t)?).powf(pv);
    for k in 0..=QUADRANT_LEVELS {
        let s = pow2(k);
        let lift = 1.0 / s;
        let c = 1.0 + (1.0 + t) / s;
        let den_mixed = lift * ladder.bound(c)?;
        let den_top = lift * ladder.bound(c + 1.0)?;
        let x_dom = two_term((1.0 + 2.0 * s).powf(theta), (t + s).powf(theta), pv) * den_mixed;
        let y_dom = two_term((1.0 + s).powf(theta), (t + 2.0 * s).powf(theta), pv) * den_mixed;
        let both = two_term((1.0 + 2.0 * s).powf(theta), (t + 2.0 * s).powf(theta), pv) * den_top;
        total += x_dom.powf(pv) + y_dom.powf(pv) + both.powf(pv);
    }
    // For k > K every piece is at most 2^{1/p} 4^θ B(1) 2^{-k(1-θ)}.
    let r = 2f64.powf(-pv * (1.0 - theta));
    let piece = 2f64.powf(1.0 / pv) * 4f64.powf(theta) * ladder.direct(0)?;
    total += 3.0 * piece.powf(pv) * r.powi(QUADRANT_LEVELS + 1) / (1.0 - r);
    Ok(big.powf(theta - 1.0) * total.powf(1.0 / pv))
}

/// Pieces of the certified bound for `((x^θ - y^θ)/(x - y))_{x ≥ 0, y ∈ [1, 2]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta2Bound {
    pub d: u32,
    /// `x ∈ [0, 1/2]`: `1/(x-y)` certified, composed with the rank-two numerator.
    pub near: f64,
    /// `x ≥ 1/2`: stacked family over shifts `0..=shift_max`.
    pub far: f64,
    pub near_sobolev: f64,
    pub far_sobolev: f64,
    pub shift_max: u32,
    /// `(near^p + far^p)^{1/p}`.
    pub combined: f64,
}

/// Certifies the `k = 0` divided-difference block.
///
/// The far family is certified over shifts `i ≤ shift_max`; the Sobolev
/// constants decrease with `i` (every derivative of the quotient is
/// controlled by the smallest point of the segment, which moves right).
pub fn theta2_base_bound(theta: f64, p: SchattenIndex, shift_max: u32) -> Result<Theta2Bound> {
    let pv = quasi_p(p)?;
    let d = default_order(p);
    let near_kernel = SmoothKernel::from_kernel(Theta2Near::new(), CERTIFICATION_GRID)?;
    let near_sobolev = sobolev_constant(&near_kernel, d)?;
    // Numerator x^θ - y^θ on [0,1/2]×[1,2]: two rank-one terms, each ≤ 2^θ.
    let numerator = two_term(0.5f64.powf(theta), 2f64.powf(theta), pv);
    let near = certified_bound_from_sobolev(near_sobolev, d, p)? * numerator;

    let mut far_sobolev = 0.0f64;
    for shift in 0..=shift_max {
        let k = SmoothKernel::from_kernel(Theta2Far::new(theta, shift)?, CERTIFICATION_GRID)?;
        far_sobolev = far_sobolev.max(sobolev_constant(&k, d)?);
    }
    let far = certified_bound_from_sobolev(far_sobolev, d, p)?;
    let combined = two_term(near, far, pv);
    Ok(Theta2Bound { d, near, far, near_sobolev, far_sobolev, shift_max, combined })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_follow_half_open_intervals() {
        assert_eq!(level_of(1.0), -1);
        assert_eq!(level_of(7.0), -1);
        assert_eq!(level_of(0.5), 0);
        assert_eq!(level_of(0.999), 0);
        assert_eq!(level_of(0.25), 1);
        assert_eq!(level_of(0.49), 1);
        assert_eq!(level_of(1e-310), level_of(1e-310 * 1.5));
        for v in [0.3, 0.01, 2e-5, 0.7] {
            let k = level_of(v);
            assert!(Interval::dyadic_i(k).contains(v));
        }
    }

    #[test]
    fn partition_is_disjoint_and_covering() {
        let cells = case_one_partition(12);
        let pts = [1e-3, 0.1, 0.24, 0.25, 0.26, 0.5, 0.9, 1.0, 1.5, 40.0];
        for &x in &pts {
            for &y in &pts {
                let hits: Vec<_> = cells.iter().filter(|(_, _, ix, iy)| ix.contains(x) && iy.contains(y)).collect();
                assert_eq!(hits.len(), 1, "({x}, {y})");
                assert_eq!((hits[0].0, hits[0].1), cell_of(x, y));
            }
        }
    }

    #[test]
    fn block_examples() {
        let p = SchattenIndex::Finite(0.5);
        assert_eq!(dyadic_block_bound(0.5, p, 0, 3.0).unwrap().bound, 3.0);
        let b3 = dyadic_block_bound(0.5, p, 3, 3.0).unwrap().bound;
        assert!((b3 / 3.0 - 2f64.powf(1.5)).abs() < 1e-14);
        let gathered = dyadic_block_bound(0.5, p, -1, 1.0).unwrap().bound;
        let series: f64 = (0..400).map(|j| 2f64.powf(-(j as f64) / 4.0)).sum();
        assert!((gathered - series * series).abs() < 1e-9 * gathered);
        assert!(dyadic_block_bound(0.5, p, -2, 1.0).is_err());
    }

    #[test]
    fn default_orders() {
        assert_eq!(default_order(SchattenIndex::Finite(1.0)), 2);
        assert_eq!(default_order(SchattenIndex::Finite(0.5)), 3);
        assert_eq!(default_order(SchattenIndex::Finite(0.3)), 5);
    }
}
