//! Assembly of `g`, `h` and `q`, and small polynomial helpers used by the
//! parameter searches.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::ParameterSet;
use crate::elemsym::elem_sym_compose_capped;
use crate::oracle::{active_set, rational_interval, Enclosure};
use crate::poly::{Dd, Polynomial, Rational};
use crate::{Error, Result};

fn exact(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {v}")))
}

fn check_cap(p: &Polynomial<Rational>, cap: u32) -> Result<()> {
    if p.degree() > cap {
        return Err(Error::DegreeCapExceeded { degree: p.degree(), cap });
    }
    Ok(())
}

/// `(1 + |x|^2)^M`.
fn weight(dim: usize, m: u32, cap: u32) -> Result<Polynomial<Rational>> {
    let mut w = Polynomial::one(dim);
    for i in 0..dim {
        w = w.add(&Polynomial::var(dim, i).pow(2)?)?;
    }
    w.pow_capped(m, cap)
}

/// The polynomials `1 - (1 + |x|^2)^M p_i / lambda`, exactly.
fn g_inner(system: &[Polynomial], m: u32, lambda: f64, k: u32, cap: u32) -> Result<Vec<Polynomial<Rational>>> {
    let first = system.first().ok_or(Error::EmptyInput("polynomial system"))?;
    if !(lambda > 0.0) || k == 0 {
        return Err(Error::InvalidArgument(format!("need lambda > 0 and k >= 1, got {lambda} and {k}")));
    }
    let w = weight(first.dim(), m, cap)?;
    let inv = exact(lambda)?.recip();
    system
        .iter()
        .map(|p| Ok(w.mul_capped(&p.to_rational(), cap)?.scale(&inv).neg().add_constant(Rational::one())))
        .collect()
}

/// `g = (1/s) sum_i (1 - (1 + |x|^2)^M p_i / lambda)^(2k)`, exactly.
pub fn build_g_exact(system: &[Polynomial], m: u32, lambda: f64, k: u32, cap: u32) -> Result<Polynomial<Rational>> {
    let inner = g_inner(system, m, lambda, k, cap)?;
    let mut g = Polynomial::zero(inner[0].dim());
    for t in &inner {
        g = g.add(&t.pow_capped(2 * k, cap)?)?;
    }
    let s = Rational::from_integer(system.len().into());
    let g = g.scale(&s.recip());
    check_cap(&g, cap)?;
    Ok(g)
}

/// Range enclosure of `g` that evaluates it through its definition.
pub fn g_enclosure(system: &[Polynomial], m: u32, lambda: f64, k: u32, cap: u32) -> Result<Enclosure> {
    let g = build_g_exact(system, m, lambda, k, cap)?;
    let inner = g_inner(system, m, lambda, k, cap)?;
    let s = Rational::from_integer(system.len().into());
    Ok(Enclosure::power_mean(&g, &inner, 2 * k, rational_interval(&s.recip())))
}

pub fn build_g(system: &[Polynomial], m: u32, lambda: f64, k: u32, cap: u32) -> Result<Polynomial> {
    Ok(build_g_exact(system, m, lambda, k, cap)?.to_f64())
}

/// `h = prod_{v in X} |x - v|^2 / mu^2`, exactly.
pub fn build_h_exact(x: &[Vec<Rational>], mu: f64) -> Result<Polynomial<Rational>> {
    let first = x.first().ok_or(Error::EmptyInput("point set X"))?;
    if !(mu > 0.0) {
        return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
    }
    let mu = exact(mu)?;
    let inv = (&mu * &mu).recip();
    let mut h = Polynomial::one(first.len());
    for v in x {
        if v.len() != first.len() {
            return Err(Error::DimensionMismatch { expected: first.len(), found: v.len() });
        }
        h = h.mul(&Polynomial::squared_distance(v).scale(&inv))?;
    }
    Ok(h)
}

pub fn build_h(x: &[Vec<f64>], mu: f64) -> Result<Polynomial> {
    let exact_x = x.iter().map(|v| v.iter().map(|&c| exact(c)).collect()).collect::<Result<Vec<Vec<_>>>>()?;
    Ok(build_h_exact(&exact_x, mu)?.to_f64())
}

/// `q = sigma_{s-n+1}(p) - g^l h^m` for the parameters of a mode `N` run.
///
/// `sigma`, `g` and `h` are formed exactly and rounded once to
/// double-double; the powers and the product are formed in double-double.
/// Plain floating point is not enough here: `q` is a small difference of
/// large terms away from `P`, and rounding its coefficients to `f64` can flip
/// its sign there.
pub fn build_q(system: &[Polynomial], x: &[Vec<Rational>], n: usize, params: &ParameterSet, cap: u32) -> Result<Polynomial<Dd>> {
    let q = params
        .q
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("parameters of q are missing".into()))?;
    let s = system.len();
    if n == 0 || n >= s {
        return Err(Error::ActiveCountEqualsSize { n, s });
    }
    let exact_sys: Vec<Polynomial<Rational>> = system.iter().map(|p| p.to_rational()).collect();
    let sigma = elem_sym_compose_capped(&exact_sys, s - n + 1, cap)?.to_dd();
    let g = build_g_exact(system, params.weight.value, params.lambda.value, params.k.value, cap)?.to_dd();
    let h = build_h_exact(x, q.mu.value)?.to_dd();
    let degree = g.degree() as u64 * q.l.value as u64 + h.degree() as u64 * q.m.value as u64;
    if degree > cap as u64 {
        return Err(Error::DegreeCapExceeded { degree: degree.min(u32::MAX as u64) as u32, cap });
    }
    let gh = g.pow_capped(q.l.value, cap)?.mul_capped(&h.pow_capped(q.m.value, cap)?, cap)?;
    sigma.sub(&gh)
}

/// `p` as a polynomial in `total` variables, reading its own variables at
/// positions `offset..offset + p.dim()`.
pub fn lift<C: crate::poly::Coeff>(p: &Polynomial<C>, total: usize, offset: usize) -> Result<Polynomial<C>> {
    if offset + p.dim() > total {
        return Err(Error::DimensionMismatch { expected: total, found: offset + p.dim() });
    }
    let args: Vec<Polynomial<C>> = (0..p.dim()).map(|i| Polynomial::var(total, offset + i)).collect();
    if args.is_empty() {
        return Ok(Polynomial::constant(total, p.coeff(&[])));
    }
    p.compose(&args)
}

/// `p(w + B u)` as a polynomial in `u`, where `b` is a square matrix given by
/// rows.
pub fn linear_substitute(p: &Polynomial<Rational>, w: &[Rational], b: &[Vec<Rational>]) -> Result<Polynomial<Rational>> {
    let d = w.len();
    if b.len() != d || b.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: b.len() });
    }
    let args: Vec<Polynomial<Rational>> = (0..d)
        .map(|j| Polynomial::linear(&b[j], w[j].clone()))
        .collect();
    p.compose(&args)
}

/// Exact solution of `a x = rhs`, or `None` when `a` is singular.
pub(crate) fn solve_exact(mut a: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, piv);
        rhs.swap(col, piv);
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let f = &a[row][col] / &a[col][col];
            for k in col..n {
                let t = &f * &a[col][k];
                a[row][k] -= t;
            }
            let t = &f * &rhs[col];
            rhs[row] -= t;
        }
    }
    Some((0..n).map(|i| &rhs[i] / &a[i][i]).collect())
}

/// Inverse of a square matrix, by rows.
pub(crate) fn invert_exact(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rational> = (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
        cols.push(solve_exact(a.to_vec(), e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Affine constraint as `(gradient, constant)` over the rationals, or `None`
/// when `p` is not of degree at most one.
pub(crate) fn affine_parts(p: &Polynomial) -> Option<(Vec<Rational>, Rational)> {
    if p.degree() > 1 {
        return None;
    }
    let d = p.dim();
    let grad = (0..d)
        .map(|i| {
            let mut e = vec![0u32; d];
            e[i] = 1;
            Rational::from_float(p.coeff(&e))
        })
        .collect::<Option<Vec<_>>>()?;
    Some((grad, Rational::from_float(p.coeff(&vec![0; d]))?))
}

/// Replaces a numerically located point of `X` by the exact common zero of
/// the affine constraints active at it.
///
/// Succeeds when the constraints active within `tol` include `d` affine ones
/// with independent gradients, and every affine constraint active within
/// `tol` vanishes exactly at the solution. Otherwise the point is returned
/// unchanged (converted exactly).
pub fn snap_vertex(system: &[Polynomial], v: &[f64], tol: f64) -> (Vec<Rational>, bool) {
    let as_is: Vec<Rational> = v.iter().map(|&c| Rational::from_float(c).unwrap_or_else(Rational::zero)).collect();
    let d = v.len();
    let act = active_set(system, v, tol);
    let lin: Vec<(Vec<Rational>, Rational)> = act.iter().filter_map(|&i| affine_parts(&system[i])).collect();
    if lin.len() < d {
        return (as_is, false);
    }
    // greedily pick d independent rows
    let mut rows: Vec<usize> = Vec::new();
    for i in 0..lin.len() {
        rows.push(i);
        if rank(&rows.iter().map(|&r| lin[r].0.clone()).collect::<Vec<_>>()) < rows.len() {
            rows.pop();
        }
        if rows.len() == d {
            break;
        }
    }
    if rows.len() < d {
        return (as_is, false);
    }
    let a: Vec<Vec<Rational>> = rows.iter().map(|&r| lin[r].0.clone()).collect();
    let rhs: Vec<Rational> = rows.iter().map(|&r| -lin[r].1.clone()).collect();
    let Some(w) = solve_exact(a, rhs) else {
        return (as_is, false);
    };
    let vanish = lin
        .iter()
        .all(|(g, c)| (g.iter().zip(&w).fold(c.clone(), |acc, (gi, wi)| acc + gi * wi)).is_zero());
    let close = w
        .iter()
        .zip(v)
        .all(|(wi, vi)| (wi - Rational::from_float(*vi).unwrap_or_else(Rational::zero)).abs() <= Rational::from_float(tol.max(1e-300) * 1e3).unwrap());
    if vanish && close {
        (w, true)
    } else {
        (as_is, false)
    }
}

/// Rank by exact elimination.
pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &m[rank][col];
            for c in col..cols {
                let t = &f * &m[rank][c];
                m[r][c] -= t;
            }
        }
        rank += 1;
    }
    rank
}
