//! Independent checks of reductions and the approximation composites.
//!
//! Everything here works on tensor grids in ambient coordinates and never
//! consults the oracle, so a reduction is judged only by its polynomials.

mod approx;
mod equivalence;
mod hausdorff;

#[cfg(test)]
mod tests;

use alloc::vec::Vec;

use crate::poly::TensorGrid;
use crate::{Error, Result};

pub use approx::{approx_polynomial, approx_polynomial_vanishing, sandwich_check, ApproxConfig, Approximation, SandwichReport};
pub use equivalence::{grid_equivalence, EquivalenceReport, Membership};
pub use hausdorff::{hausdorff_estimate, HausdorffEstimate};

/// Axis-aligned box with a number of equispaced nodes per axis, both ends
/// included.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub resolution: Vec<usize>,
}

impl GridSpec {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, resolution: Vec<usize>) -> Result<Self> {
        let d = lo.len();
        if hi.len() != d || resolution.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: hi.len().min(resolution.len()) });
        }
        if d == 0 {
            return Err(Error::EmptyInput("grid dimension"));
        }
        if resolution.iter().any(|&n| n < 2) {
            return Err(Error::InvalidArgument("grid needs at least 2 nodes per axis".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidArgument("grid box needs finite lo < hi on every axis".into()));
        }
        Ok(GridSpec { lo, hi, resolution })
    }

    /// Same number of nodes on every axis.
    pub fn uniform(lo: Vec<f64>, hi: Vec<f64>, n: usize) -> Result<Self> {
        let d = lo.len();
        Self::new(lo, hi, alloc::vec![n; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn spacing(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(&self.resolution)
            .map(|((a, b), n)| (b - a) / (n - 1) as f64)
            .collect()
    }

    /// Length of a cell diagonal.
    pub fn cell_diameter(&self) -> f64 {
        libm::sqrt(self.spacing().iter().map(|h| h * h).sum())
    }

    pub fn grid(&self) -> TensorGrid {
        TensorGrid::uniform(&self.lo, &self.hi, &self.resolution)
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
