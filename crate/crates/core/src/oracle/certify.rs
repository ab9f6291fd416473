//! Boundedness of the relaxed sets `P(M, eps)`.
//!
//! `P(M, eps) = { x : (1 + |x|^2)^M p_i(x) >= -eps for all i }`. The test has
//! three parts:
//!
//! * a falsifier that looks for points of `P(M, eps)` beyond `r_max`,
//! * branch-and-bound over the cube `[-r_max, r_max]^d`, bounding the largest
//!   norm of a feasible point,
//! * a growth test on the faces of that cube: with `F = sum_j F_j` split into
//!   homogeneous parts of degree `j <= D`, a face box `T` is settled for all
//!   `r >= r_max` once
//!   `F_D(T) + sum_{j<D} r_max^{j-D} |F_j(T)| + eps r_max^{-D} < 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bnb::{Goal, Limits, Problem, Status};
use super::enclosure::{Enclosure, IntervalPoly};
use super::interval::{pow_down, pow_up, Interval, IntervalBox};
use super::{OracleConfig, Verdict};
use crate::poly::{Polynomial, DEFAULT_DEGREE_CAP};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct EnclosureCertificate {
    pub verdict: Verdict,
    /// When proved, `P(M, eps)` lies in the closed ball of this radius.
    pub radius: Option<f64>,
}

/// `(1 + |x|^2)^M p` for every `p`.
pub fn weighted_system(system: &[Polynomial], m: u32) -> Result<Vec<Polynomial>> {
    let dim = system.first().ok_or(Error::EmptyInput("polynomial system"))?.dim();
    let mut w = Polynomial::one(dim);
    for i in 0..dim {
        w = w.add(&Polynomial::var(dim, i).pow(2)?)?;
    }
    let w = w.pow_capped(m, DEFAULT_DEGREE_CAP * 4)?;
    system.iter().map(|p| w.mul_capped(p, DEFAULT_DEGREE_CAP * 4)).collect()
}

pub fn certify_enclosure(system: &[Polynomial], m: u32, eps: f64, cfg: &OracleConfig) -> Result<EnclosureCertificate> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let weighted = weighted_system(system, m)?;
    let dim = weighted[0].dim();
    let relaxed: Vec<Enclosure> = weighted.iter().map(|p| Enclosure::from_poly(&p.add_constant(eps))).collect();
    let r_max = cfg.r_max;

    if let Some(w) = falsify_beyond(&relaxed, dim, r_max, cfg) {
        return Ok(EnclosureCertificate { verdict: Verdict::Refuted { witness: w }, radius: None });
    }

    if let Err(reason) = tail_test(&weighted, eps, r_max, cfg) {
        return Ok(EnclosureCertificate { verdict: Verdict::Unknown { reason }, radius: None });
    }

    // largest |x|^2 over the feasible part of the cube
    let mut norm = Polynomial::zero(dim);
    for i in 0..dim {
        norm = norm.add(&Polynomial::var(dim, i).pow(2)?)?;
    }
    let limits = Limits { max_depth: cfg.max_depth, max_boxes: cfg.max_boxes, min_width: 0.0 };
    let mut cube = IntervalBox::cube(dim, r_max);
    // smallest radius proved by a converged pass
    let mut best: Option<f64> = None;
    let mut tol = 1.0;
    let status = loop {
        let out = Problem::new(cube.clone(), Enclosure::from_poly(&norm).negate())
            .with_constraints(relaxed.clone())
            .solve(Goal::Minimize { tol }, &limits);
        if out.region_empty() {
            break Status::Converged;
        }
        if out.status != Status::Converged {
            // a refinement that fails keeps the bound of the previous pass
            break if best.is_some() { Status::Converged } else { out.status };
        }
        let hi = Interval::point(-out.lower).sqrt().hi;
        let lo = if out.upper.is_finite() { Interval::point((-out.upper).max(0.0)).sqrt().lo } else { 0.0 };
        best = Some(best.map_or(hi, |b: f64| b.min(hi)));
        if hi - lo <= cfg.radius_tol || tol < 1e-12 {
            break Status::Converged;
        }
        if hi < r_max {
            // every feasible point has norm at most hi
            cube = IntervalBox::cube(dim, hi);
        }
        tol = (tol * 0.25).min(2.0 * cfg.radius_tol * lo.max(cfg.radius_tol) * 0.5);
    };
    match status {
        Status::Converged => {
            let radius = best.unwrap_or(0.0);
            if radius > r_max {
                return Ok(EnclosureCertificate {
                    verdict: Verdict::Unknown { reason: "feasible points reach the edge of the search cube".into() },
                    radius: None,
                });
            }
            Ok(EnclosureCertificate { verdict: Verdict::Proved, radius: Some(radius) })
        }
        Status::Exhausted(r) => Ok(EnclosureCertificate {
            verdict: Verdict::Unknown { reason: format!("bounding the feasible radius: {r}") },
            radius: None,
        }),
        _ => Ok(EnclosureCertificate {
            verdict: Verdict::Unknown { reason: "bounding the feasible radius did not converge".into() },
            radius: None,
        }),
    }
}

/// Samples the shell `r_max <= |x| <= 4 r_max` and refines the best samples
/// by pattern search on `min_i (F_i(x) + eps)`.
fn falsify_beyond(relaxed: &[Enclosure], dim: usize, r_max: f64, cfg: &OracleConfig) -> Option<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb0_0d);
    let polys: Vec<&IntervalPoly> = relaxed.iter().map(|e| e.poly()).collect();
    let score = |x: &[f64]| -> f64 {
        polys
            .iter()
            .map(|p| {
                let iv = p.eval_point(x);
                0.5 * (iv.lo + iv.hi)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let project = |x: &mut Vec<f64>| {
        let n = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
        let floor = r_max * (1.0 + 1e-9);
        if n < floor {
            let s = if n > 0.0 { floor / n } else { 1.0 };
            for v in x.iter_mut() {
                *v *= s;
            }
            if n == 0.0 {
                x[0] = floor;
            }
        }
    };
    let certified = |x: &[f64]| -> bool {
        let nrm = IntervalBox::point(x).dist_sq(&vec![0.0; dim]);
        nrm.lo > Interval::point(r_max).sqr().hi && relaxed.iter().all(|e| e.eval_point(x).lo >= 0.0)
    };

    let mut pool: Vec<(f64, Vec<f64>)> = Vec::new();
    let n = cfg.samples.max(64);
    for _ in 0..n {
        let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let nrm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
        if nrm == 0.0 {
            continue;
        }
        let r = r_max * rng.gen_range(1.0..4.0);
        for v in x.iter_mut() {
            *v *= r / nrm;
        }
        let s = score(&x);
        if s >= 0.0 && certified(&x) {
            return Some(x);
        }
        pool.push((s, x));
    }
    pool.sort_by(|a, b| b.0.total_cmp(&a.0));
    pool.truncate(24);
    for (_, start) in pool {
        let x = pattern_search(start, &score, &project, 4000);
        if certified(&x) {
            return Some(x);
        }
    }
    None
}

/// Hooke-Jeeves maximization with a projection after every move.
pub(crate) fn pattern_search(
    mut x: Vec<f64>,
    f: &dyn Fn(&[f64]) -> f64,
    project: &dyn Fn(&mut Vec<f64>),
    max_iter: usize,
) -> Vec<f64> {
    project(&mut x);
    let mut fx = f(&x);
    let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut h = 0.05 * scale;
    let mut iter = 0;
    while h > 1e-15 * scale && iter < max_iter {
        iter += 1;
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += dir * h;
                project(&mut y);
                let fy = f(&y);
                if fy > fx {
                    // pattern move along the successful direction
                    let mut z: Vec<f64> = y.iter().zip(&x).map(|(a, b)| 2.0 * a - b).collect();
                    project(&mut z);
                    let fz = f(&z);
                    if fz > fy {
                        x = z;
                        fx = fz;
                    } else {
                        x = y;
                        fx = fy;
                    }
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    x
}

/// Settles every direction of the faces of `[-r_max, r_max]^d` for all radii
/// beyond `r_max`.
fn tail_test(weighted: &[Polynomial], eps: f64, r_max: f64, cfg: &OracleConfig) -> core::result::Result<(), alloc::string::String> {
    let dim = weighted[0].dim();
    let parts: Vec<(u32, Vec<IntervalPoly>)> = weighted
        .iter()
        .map(|p| {
            let d = p.degree();
            (d, (0..=d).map(|j| IntervalPoly::from_poly(&p.homogeneous_part(j))).collect())
        })
        .collect();
    let settled = |t: &IntervalBox| -> bool {
        parts.iter().any(|(d, hp)| {
            let d = *d;
            let mut acc = hp[d as usize].eval(t);
            for (j, h) in hp.iter().enumerate().take(d as usize) {
                let w = Interval::point(1.0).div(&Interval { lo: pow_down(r_max, d - j as u32), hi: pow_up(r_max, d - j as u32) });
                let mag = h.eval(t).mag();
                acc = acc.add(&Interval::point(mag).mul(&w));
            }
            let w = Interval::point(eps).div(&Interval { lo: pow_down(r_max, d), hi: pow_up(r_max, d) });
            acc = acc.add(&w);
            acc.hi < 0.0
        })
    };
    let budget = cfg.max_boxes;
    let mut used = 0usize;
    for face in 0..2 * dim {
        let axis = face / 2;
        let sign = if face % 2 == 0 { 1.0 } else { -1.0 };
        let mut sides = vec![Interval::new(-1.0, 1.0); dim];
        sides[axis] = Interval::point(sign);
        let mut stack = vec![(IntervalBox::new(sides), 0u32)];
        while let Some((t, depth)) = stack.pop() {
            used += 1;
            if used > budget {
                return Err("growth test exceeded the box budget".into());
            }
            if settled(&t) {
                continue;
            }
            if depth >= cfg.max_depth.min(40) {
                return Err(format!(
                    "growth test could not settle directions near {:?} beyond radius {r_max}",
                    t.midpoint()
                ));
            }
            let (a, b) = t.bisect();
            stack.push((a, depth + 1));
            stack.push((b, depth + 1));
        }
    }
    Ok(())
}
