//! Polynomial systems together with the coordinate frame they are written in.

use alloc::vec::Vec;

use crate::poly::{Coeff, Dd, Polynomial, Rational, TensorGrid};
use crate::{Error, Result};

/// Isotropic affine change of coordinates `x = center + scale * y`.
///
/// A system stored in a frame is a list of polynomials in `y`; it describes
/// the set of ambient points `x` whose local coordinates satisfy it.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFrame {
    pub center: Vec<f64>,
    pub scale: f64,
}

impl AffineFrame {
    pub fn identity(dim: usize) -> Self {
        AffineFrame { center: alloc::vec![0.0; dim], scale: 1.0 }
    }

    pub fn is_identity(&self) -> bool {
        self.scale == 1.0 && self.center.iter().all(|c| *c == 0.0)
    }

    pub fn to_local(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.center).map(|(xi, ci)| (xi - ci) / self.scale).collect()
    }

    pub fn to_global(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.center).map(|(yi, ci)| ci + self.scale * yi).collect()
    }
}

/// Polynomials in the coordinates of a frame. Outputs of high degree use
/// double-double coefficients ([`Dd`]); everything else uses `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct System<C: Coeff = f64> {
    polys: Vec<Polynomial<C>>,
    frame: AffineFrame,
}

impl<C: Coeff> System<C> {
    /// A system in ambient coordinates. All polynomials must share a dimension.
    pub fn new(polys: Vec<Polynomial<C>>) -> Result<Self> {
        let dim = polys.first().ok_or(Error::EmptyInput("polynomial system"))?.dim();
        for p in &polys {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
        }
        Ok(System { polys, frame: AffineFrame::identity(dim) })
    }

    pub fn with_frame(polys: Vec<Polynomial<C>>, frame: AffineFrame) -> Result<Self> {
        let mut s = Self::new(polys)?;
        if frame.center.len() != s.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), found: frame.center.len() });
        }
        if !(frame.scale > 0.0) {
            return Err(Error::InvalidArgument("frame scale must be positive".into()));
        }
        s.frame = frame;
        Ok(s)
    }

    pub fn polys(&self) -> &[Polynomial<C>] {
        &self.polys
    }

    pub fn frame(&self) -> &AffineFrame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.polys[0].dim()
    }
}

impl System<Dd> {
    /// Values of every polynomial at the ambient point `x`, accumulated in
    /// double-double arithmetic.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let y = self.frame.to_local(x);
        self.polys.iter().map(|p| p.eval_f64(&y)).collect()
    }

    /// The same system with coefficients rounded to `f64`.
    pub fn to_f64(&self) -> System {
        System { polys: self.polys.iter().map(|p| p.to_f64()).collect(), frame: self.frame.clone() }
    }
}

impl System {
    /// Rewrites the polynomials so that they are expressed in `frame`. The
    /// substitution is carried out in exact arithmetic and rounded once.
    pub fn reframe(&self, frame: AffineFrame) -> Result<Self> {
        let old = &self.frame;
        let shift: Vec<f64> = frame
            .center
            .iter()
            .zip(&old.center)
            .map(|(n, o)| (n - o) / old.scale)
            .collect();
        let scale = frame.scale / old.scale;
        let exact = |v: f64| {
            Rational::from_float(v).ok_or_else(|| Error::InvalidArgument("frame must be finite".into()))
        };
        let shift = shift.into_iter().map(exact).collect::<Result<Vec<_>>>()?;
        let scale = exact(scale)?;
        let polys = self
            .polys
            .iter()
            .map(|p| Ok(p.to_rational().affine_substitute(&shift, scale.clone())?.to_f64()))
            .collect::<Result<Vec<_>>>()?;
        Self::with_frame(polys, frame)
    }

    /// Values of every polynomial at the ambient point `x`.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let y = self.frame.to_local(x);
        self.polys.iter().map(|p| p.eval(&y)).collect()
    }

    /// Per-polynomial values and magnitude scales at every point of an
    /// ambient grid.
    pub fn eval_grid(&self, grid: &TensorGrid) -> Vec<(Vec<f64>, Vec<f64>)> {
        let local = grid.to_local(&self.frame.center, self.frame.scale);
        self.polys.iter().map(|p| (local.eval(p), local.eval_abs(p))).collect()
    }
}
