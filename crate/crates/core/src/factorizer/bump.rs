//! Smooth cutoffs: 1 on a flat interval, 0 outside a support interval.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Result};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl Span {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// `C^∞` function equal to 1 on `flat` and 0 off `support`.
///
/// Each side uses the transition `s ↦ h(s) / (h(s) + h(1-s))` with
/// `h(s) = e^{-1/s}`, which is flat to all orders at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    flat: Span,
    support: Span,
}

fn h(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// Smooth step from 0 at `s ≤ 0` to 1 at `s ≥ 1`.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = h(s);
    a / (a + h(1.0 - s))
}

impl Bump {
    pub fn new(flat: Span, support: Span) -> Result<Self> {
        if !(flat.lo <= flat.hi) {
            return Err(invalid("flat_interval", "lower end exceeds upper end"));
        }
        if !(support.lo < flat.lo && flat.hi < support.hi) {
            return Err(invalid("flat_interval", "must lie strictly inside the support interval"));
        }
        Ok(Self { flat, support })
    }

    pub fn flat(&self) -> Span {
        self.flat
    }

    pub fn support(&self) -> Span {
        self.support
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.support.lo || t >= self.support.hi {
            0.0
        } else if t < self.flat.lo {
            smooth_step((t - self.support.lo) / (self.flat.lo - self.support.lo))
        } else if t > self.flat.hi {
            smooth_step((self.support.hi - t) / (self.support.hi - self.flat.hi))
        } else {
            1.0
        }
    }
}

/// Bump with the given flat and support intervals.
pub fn bump_function(flat_interval: Span, support_interval: Span) -> Result<Bump> {
    Bump::new(flat_interval, support_interval)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_vanishing_regions() {
        let b = bump_function(Span::new(0.0, 0.5), Span::new(-0.25, 0.75)).unwrap();
        assert_eq!(b.eval(0.25), 1.0);
        assert_eq!(b.eval(0.0), 1.0);
        assert_eq!(b.eval(-0.3), 0.0);
        assert_eq!(b.eval(0.75), 0.0);
        assert_eq!(b.eval(2.0), 0.0);
        for i in 0..=100 {
            let v = b.eval(-0.3 + 1.1 * i as f64 / 100.0);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn nesting_is_validated() {
        assert!(bump_function(Span::new(0.0, 1.0), Span::new(0.0, 2.0)).is_err());
        assert!(bump_function(Span::new(1.0, 0.0), Span::new(-1.0, 2.0)).is_err());
        assert!(bump_function(Span::new(0.0, 3.0), Span::new(-1.0, 2.0)).is_err());
    }

    #[test]
    fn sixth_derivative_vanishes_at_the_support_edge() {
        // Central differences of order 6 with step 1e-2; wide ramps keep the
        // finite-difference stencil inside the flat-to-all-orders zone.
        let b = bump_function(Span::new(-1.0, 1.0), Span::new(-3.0, 3.0)).unwrap();
        let binom = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];
        let step = 1e-2;
        for edge in [-3.0, 3.0] {
            let d6: f64 = binom
                .iter()
                .enumerate()
                .map(|(i, c)| c * b.eval(edge + (i as f64 - 3.0) * step))
                .sum::<f64>()
                / step.powi(6);
            assert!(d6.abs() <= 1e-4, "edge {edge}: {d6}");
        }
    }
}
