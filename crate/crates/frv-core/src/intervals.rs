//! Nonempty closed bounded intervals of the real line.
//!
//! Intervals carry Minkowski arithmetic, support functions over the two
//! unit directions, and the Hausdorff metric, which collapses to a closed
//! form on interval endpoints.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum IntervalError {
    #[error("interval endpoints must be finite, got [{lo}, {hi}]")]
    NonFinite { lo: f64, hi: f64 },
    #[error("interval endpoints out of order: lo {lo} exceeds hi {hi}")]
    Inverted { lo: f64, hi: f64 },
}

/// One of the two directions of the unit sphere of ℝ, the signs −1 and +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Neg,
    Pos,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Neg, Direction::Pos];

    pub fn sign(self) -> f64 {
        match self {
            Direction::Neg => -1.0,
            Direction::Pos => 1.0,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Neg => "-1",
            Direction::Pos => "+1",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "-1" => Ok(Direction::Neg),
            "+1" | "1" => Ok(Direction::Pos),
            other => Err(format!(
                "unknown direction `{other}`, expected `+1` or `-1`"
            )),
        }
    }
}

/// Nonempty closed bounded interval `[lo, hi]`, `lo <= hi`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(IntervalError::Inverted { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// The one-point interval `{x}`.
    pub fn singleton(x: f64) -> Result<Self, IntervalError> {
        Interval::new(x, x)
    }

    /// The one-point interval `{0}`.
    pub fn zero() -> Self {
        Interval { lo: 0.0, hi: 0.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Pointwise sum `{a + b : a ∈ self, b ∈ other}`.
    pub fn minkowski_add(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    /// Pointwise scaling `{λ·a : a ∈ self}`; negative λ swaps the endpoints.
    pub fn scale(&self, lambda: f64) -> Interval {
        debug_assert!(lambda.is_finite());
        if lambda >= 0.0 {
            Interval {
                lo: lambda * self.lo,
                hi: lambda * self.hi,
            }
        } else {
            Interval {
                lo: lambda * self.hi,
                hi: lambda * self.lo,
            }
        }
    }

    /// Hausdorff distance; on intervals it is the larger endpoint gap.
    pub fn hausdorff(&self, other: &Interval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }

    /// Distance from the point `x` to the nearest point of the interval.
    pub fn dist_point(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }

    /// Magnitude `max(|lo|, |hi|)`, the Hausdorff distance to `{0}`.
    pub fn norm(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Support function: the largest value of `dir·x` over the interval.
    pub fn support(&self, dir: Direction) -> f64 {
        match dir {
            Direction::Pos => self.hi,
            Direction::Neg => -self.lo,
        }
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        self.minkowski_add(&rhs)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
