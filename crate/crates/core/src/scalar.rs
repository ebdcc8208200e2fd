//! Scalars shared by exact and floating computations.

use std::fmt;

use gpm_exact::rat::{to_f64, Rat};
use num_traits::{Signed, Zero};

/// Absolute tolerance for every floating verdict.
pub const TOL: f64 = 1e-10;

/// Field elements used for coordinates and map entries.
///
/// `Rat` compares exactly; `f64` compares with the absolute tolerance
/// [`TOL`].
pub trait Scalar: Clone + fmt::Debug + PartialOrd + Signed + Send + Sync + 'static {
    const EXACT: bool;

    fn from_rat(r: &Rat) -> Self;

    fn to_f64(&self) -> f64;

    fn near_zero(&self) -> bool;

    fn near(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).near_zero()
    }

    /// `self ≥ 0` up to tolerance.
    fn nonneg(&self) -> bool;

    fn from_i64(k: i64) -> Self {
        Self::from_rat(&gpm_exact::rat::int(k))
    }

    /// Rendering used in reports: `p/q` for rationals, shortest float
    /// otherwise.
    fn render(&self) -> String;
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        to_f64(self)
    }

    fn near_zero(&self) -> bool {
        self.is_zero()
    }

    fn nonneg(&self) -> bool {
        !self.is_negative()
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn near_zero(&self) -> bool {
        self.abs() <= TOL
    }

    fn nonneg(&self) -> bool {
        *self >= -TOL
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn vadd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vsub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vscale<S: Scalar>(c: &S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn vnear<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.near(y))
}

pub fn max_abs<S: Scalar>(a: &[S]) -> S {
    a.iter()
        .map(|x| x.abs())
        .fold(S::zero(), |m, x| if x > m { x } else { m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use gpm_exact::rat::rat;

    #[test]
    fn exact_and_float_comparisons() {
        assert!(rat(1, 3).near(&rat(2, 6)));
        assert!(!rat(1, 3).near(&rat(1, 3 + 1)));
        assert!((0.1f64 + 0.2).near(&0.3));
        assert!(!(1e-9f64).near_zero());
        assert!((-1e-12f64).nonneg());
        assert_eq!(rat(-1, 2).render(), "-1/2");
    }
}
