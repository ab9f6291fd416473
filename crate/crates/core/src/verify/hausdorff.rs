//! Hausdorff distance between two solution sets, sampled on a grid.

use alloc::vec;
use alloc::vec::Vec;

use super::equivalence::classify;
use super::GridSpec;
use crate::poly::Precision;
use crate::system::System;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct HausdorffEstimate {
    /// Hausdorff distance between the member grid points of both sets.
    pub lower: f64,
    /// `lower` plus one cell diameter. A true bound when every point of each
    /// set lies within half a cell diameter of a member grid point of it.
    pub upper: f64,
    pub spec: GridSpec,
    pub a_points: usize,
    pub b_points: usize,
}

/// Estimates the Hausdorff distance between `(a)>=0` and `(b)>=0` inside the
/// grid box. Membership is closed membership up to rounding.
pub fn hausdorff_estimate<A: Precision, B: Precision>(a: &System<A>, b: &System<B>, spec: &GridSpec) -> Result<HausdorffEstimate> {
    let ma = classify(a, spec, 0.0)?.closed;
    let mb = classify(b, spec, 0.0)?.closed;
    let a_points = ma.iter().filter(|m| **m).count();
    let b_points = mb.iter().filter(|m| **m).count();
    if a_points == 0 {
        return Err(Error::EmptyInput("first set has no grid point"));
    }
    if b_points == 0 {
        return Err(Error::EmptyInput("second set has no grid point"));
    }
    let h = spec.spacing();
    let da = squared_distance_transform(&ma, &spec.resolution, &h);
    let db = squared_distance_transform(&mb, &spec.resolution, &h);
    let directed = |from: &[bool], to: &[f64]| from.iter().zip(to).filter(|(m, _)| **m).fold(0.0f64, |acc, (_, d)| acc.max(*d));
    let lower = libm::sqrt(directed(&ma, &db).max(directed(&mb, &da)));
    Ok(HausdorffEstimate { lower, upper: lower + spec.cell_diameter(), spec: spec.clone(), a_points, b_points })
}

/// Squared Euclidean distance from every node to the nearest marked node,
/// for a row-major grid with the given shape and spacings.
pub(crate) fn squared_distance_transform(mask: &[bool], shape: &[usize], h: &[f64]) -> Vec<f64> {
    let mut f: Vec<f64> = mask.iter().map(|m| if *m { 0.0 } else { f64::INFINITY }).collect();
    let d = shape.len();
    for axis in 0..d {
        let n = shape[axis];
        let stride: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let mut line = vec![0.0; n];
        let mut out = vec![0.0; n];
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for (i, v) in line.iter_mut().enumerate() {
                    *v = f[base + i * stride];
                }
                lower_envelope(&line, h[axis], &mut out);
                for (i, v) in out.iter().enumerate() {
                    f[base + i * stride] = *v;
                }
            }
        }
    }
    f
}

/// One-dimensional transform `out[p] = min_q (h (p - q))^2 + f[q]` by the
/// lower envelope of parabolas.
fn lower_envelope(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    let mut v: Vec<usize> = Vec::with_capacity(n);
    let mut z: Vec<f64> = Vec::with_capacity(n + 1);
    let pos = |q: usize| h * q as f64;
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        loop {
            let Some(&r) = v.last() else {
                v.push(q);
                z.clear();
                z.push(f64::NEG_INFINITY);
                break;
            };
            let s = ((f[q] + pos(q) * pos(q)) - (f[r] + pos(r) * pos(r))) / (2.0 * (pos(q) - pos(r)));
            if s <= *z.last().unwrap() {
                v.pop();
                z.pop();
                continue;
            }
            v.push(q);
            z.push(s);
            break;
        }
    }
    if v.is_empty() {
        out.iter_mut().for_each(|o| *o = f64::INFINITY);
        return;
    }
    let mut k = 0;
    for (p, o) in out.iter_mut().enumerate() {
        let x = pos(p);
        while k + 1 < v.len() && z[k + 1] < x {
            k += 1;
        }
        let dq = x - pos(v[k]);
        *o = dq * dq + f[v[k]];
    }
}
