//! Grid comparison of the closed and open sets of two systems.

use alloc::vec;
use alloc::vec::Vec;

use super::GridSpec;
use crate::poly::{Polynomial, Precision};
use crate::system::System;
use crate::{Error, Result};

/// Membership of a grid point in the set of one system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Some polynomial is certainly negative.
    Outside,
    /// Every polynomial is certainly positive.
    Inside,
    /// Not certainly outside, and within the band of some zero level.
    Band,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub spec: GridSpec,
    /// Half-width of the boundary band, as a distance.
    pub tol: f64,
    pub points: usize,
    /// Points in the band of either system; they are not compared.
    pub band: usize,
    pub closed_agree: usize,
    pub closed_disagree: usize,
    pub open_agree: usize,
    pub open_disagree: usize,
    /// Largest first-order distance from a disagreeing point to the nearest
    /// zero level of either system; 0 when there is no disagreement.
    pub max_violation: f64,
    /// Up to 16 disagreeing points.
    pub examples: Vec<Vec<f64>>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.closed_disagree == 0 && self.open_disagree == 0
    }
}

/// Per-point data of one system on a grid.
pub(crate) struct Classified {
    pub membership: Vec<Membership>,
    /// Per point, smallest first-order distance to a zero level.
    pub distance: Vec<f64>,
    /// Per point, whether every polynomial is nonnegative up to rounding.
    pub closed: Vec<bool>,
}

/// Rounding bound for a value computed from the sum of absolute terms.
pub(crate) fn rounding(p: &Polynomial, abs: f64) -> f64 {
    (2.0 * (p.degree() as f64 + p.len() as f64 + p.dim() as f64) + 4.0) * f64::EPSILON * abs
}

/// Value and error bound at a point, re-evaluated in double-double
/// arithmetic when the plain value is within its rounding bound of zero.
///
/// `v` and `abs` are the plain value and magnitude scale of `lead`, the
/// leading part of `p`.
pub(crate) fn settle<C: Precision>(
    p: &Polynomial<C>,
    lead: &Polynomial,
    v: f64,
    abs: f64,
    point: impl FnOnce() -> Vec<f64>,
) -> (f64, f64) {
    let err = rounding(lead, abs) + C::TAIL * abs;
    if v.abs() > err {
        return (v, err);
    }
    C::refined(p, &point())
}

/// Classifies every grid point against `system`. A polynomial is within the
/// band at a point when its value is within rounding error of zero, or when
/// the first-order distance `|f| / |grad f|` to its zero level is at most
/// `tol`.
pub(crate) fn classify<C: Precision>(system: &System<C>, spec: &GridSpec, tol: f64) -> Result<Classified> {
    if system.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: system.dim() });
    }
    let frame = system.frame();
    let grid = spec.grid().to_local(&frame.center, frame.scale);
    let n = grid.len();
    let d = spec.dim();
    let mut membership = vec![Membership::Inside; n];
    let mut distance = vec![f64::INFINITY; n];
    let mut closed = vec![true; n];
    let mut near = vec![false; n];
    for p in system.polys() {
        let lead = C::leading(p);
        let vals = grid.eval(&lead);
        let abs = grid.eval_abs(&lead);
        let mut grad2 = vec![0.0; n];
        for i in 0..d {
            let g = grid.eval(&lead.derivative(i));
            for (a, v) in grad2.iter_mut().zip(g) {
                *a += v * v;
            }
        }
        for j in 0..n {
            let (v, err) = settle(p, &lead, vals[j], abs[j], || grid.point(j));
            // gradient with respect to ambient coordinates
            let gn = libm::sqrt(grad2[j]) / frame.scale;
            let width = tol * gn + err;
            if v < -err {
                closed[j] = false;
            }
            if v < -width {
                membership[j] = Membership::Outside;
            } else if v.abs() <= width {
                near[j] = true;
            }
            let dist = if gn > 0.0 { v.abs() / gn } else if v == 0.0 { 0.0 } else { f64::INFINITY };
            distance[j] = distance[j].min(dist);
        }
    }
    for j in 0..n {
        if near[j] && membership[j] != Membership::Outside {
            membership[j] = Membership::Band;
        }
    }
    Ok(Classified { membership, distance, closed })
}

/// Compares the closed sets `(a)>=0`, `(b)>=0` and the open sets `(a)>0`,
/// `(b)>0` at every grid point. A point is compared only when its membership
/// is decided for both systems; points within `tol` (a distance) of a zero
/// level of either system, or whose signs rounding leaves undecided, are
/// counted in the band.
///
/// Off the band a decided point has every value bounded away from zero, so
/// its closed and open memberships coincide; both are tallied.
pub fn grid_equivalence<A: Precision, B: Precision>(a: &System<A>, b: &System<B>, spec: &GridSpec, tol: f64) -> Result<EquivalenceReport> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("band width must be nonnegative, got {tol}")));
    }
    let ca = classify(a, spec, tol)?;
    let cb = classify(b, spec, tol)?;
    let grid = spec.grid();
    let mut rep = EquivalenceReport {
        spec: spec.clone(),
        tol,
        points: grid.len(),
        band: 0,
        closed_agree: 0,
        closed_disagree: 0,
        open_agree: 0,
        open_disagree: 0,
        max_violation: 0.0,
        examples: Vec::new(),
    };
    for j in 0..grid.len() {
        let (ma, mb) = (ca.membership[j], cb.membership[j]);
        if ma == Membership::Band || mb == Membership::Band {
            rep.band += 1;
            continue;
        }
        let inside_a = ma == Membership::Inside;
        let inside_b = mb == Membership::Inside;
        if inside_a == inside_b {
            rep.closed_agree += 1;
            rep.open_agree += 1;
        } else {
            rep.closed_disagree += 1;
            rep.open_disagree += 1;
            rep.max_violation = rep.max_violation.max(ca.distance[j].min(cb.distance[j]));
            if rep.examples.len() < 16 {
                rep.examples.push(grid.point(j));
            }
        }
    }
    Ok(rep)
}
