//! The two reductions, end to end.

use alloc::format;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::audit::audit;
use super::build::{build_g_exact, build_h_exact, build_q, g_enclosure, snap_vertex};
use super::params::{
    find_alpha, find_eps, find_gamma, find_k, find_l, find_lambda, find_loj_params, find_m_eps0, find_mu, find_rho, LInputs, MEps0,
};
use super::{Certified, Mode, ParameterSet, PipelineConfig, QParameters, Record, Reduction};
use crate::elemsym::elem_sym_compose_capped;
use crate::oracle::interval::{add_up, mul_up, sqrt_up, sub_up};
use crate::oracle::{active_set, estimate_n_x, max_on_feasible, IntervalBox, Verdict};
use crate::poly::{Dd, Polynomial, Rational};
use crate::system::{AffineFrame, System};
use crate::{Error, Result};

/// A system moved into its working frame, with `P(M, eps0)` certified
/// bounded there.
#[derive(Clone, Debug, PartialEq)]
pub struct Prepared {
    pub input: System,
    pub local: System,
    pub enclosing: MEps0,
    /// Box containing `P` in local coordinates.
    pub domain: IntervalBox,
}

/// Frame `x = c + r y` in which the box `[lo, hi]` lies in the open unit
/// ball. The center is rounded to a short dyadic and the scale is a power of
/// two, so that rewriting integer polynomials in the frame is exact.
pub fn choose_frame(lo: &[f64], hi: &[f64]) -> AffineFrame {
    let half: f64 = lo
        .iter()
        .zip(hi)
        .map(|(a, b)| {
            let h = 0.5 * (b - a);
            h * h
        })
        .sum::<f64>();
    let half = libm::sqrt(half);
    let quantum = if half > 0.0 { libm::ldexp(1.0, libm::ilogb(half) - 8) } else { 1.0 / 256.0 };
    let center: Vec<f64> = lo
        .iter()
        .zip(hi)
        .map(|(a, b)| libm::round(0.5 * (a + b) / quantum) * quantum)
        .collect();
    // farthest corner of the box from the rounded center
    let mut r2 = 0.0;
    for ((a, b), c) in lo.iter().zip(hi).zip(&center) {
        let d = sub_up(*b, *c).max(sub_up(*c, *a)).max(0.0);
        r2 = add_up(r2, mul_up(d, d));
    }
    let r = sqrt_up(r2);
    let scale = if r > 0.0 { libm::ldexp(1.0, libm::ilogb(r * (1.0 + 1.0 / 64.0)) + 1) } else { 1.0 };
    AffineFrame { center, scale }
}

/// Certifies that `P` is bounded, moves the system into a frame with `P` in
/// the open unit ball, and finds `M` and `eps0` there.
pub fn prepare(system: &System, cfg: &PipelineConfig) -> Result<Prepared> {
    let ambient = find_m_eps0(system.polys(), cfg)?;
    let d = system.dim();
    let cube = IntervalBox::cube(d, ambient.radius);
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for i in 0..d {
        let x = Polynomial::var(d, i);
        let up = max_on_feasible(&x, system.polys(), &cube, &cfg.oracle);
        let down = max_on_feasible(&x.neg(), system.polys(), &cube, &cfg.oracle);
        for r in [&up, &down] {
            if let Verdict::Unknown { reason } = &r.verdict {
                return Err(Error::OracleUnknown(format!("bounding box of P: {reason}")));
            }
            if r.upper == f64::NEG_INFINITY {
                return Err(Error::EmptyInput("P is empty"));
            }
        }
        lo.push(-down.upper);
        hi.push(up.upper);
    }
    // the box is in the coordinates of the input frame
    let f = system.frame();
    let lo = f.to_global(&lo);
    let hi = f.to_global(&hi);
    let frame = choose_frame(&lo, &hi);
    let local = balance(&system.reframe(frame)?)?;
    let enclosing = find_m_eps0(local.polys(), cfg)?;
    Ok(Prepared { input: system.clone(), local, enclosing, domain: IntervalBox::cube(d, 1.0) })
}

/// Scales every polynomial by the power of two nearest to the reciprocal of
/// its largest coefficient. Positive scaling leaves `P` and `P_0` unchanged,
/// and keeps `lambda` near 1 so that `k`, and with it every degree, stays
/// small.
pub fn balance(system: &System) -> Result<System> {
    let polys = system
        .polys()
        .iter()
        .map(|p| {
            let c = p.max_abs_coeff();
            if c > 0.0 && c.is_finite() {
                p.scale(&libm::ldexp(1.0, -libm::ilogb(c)))
            } else {
                p.clone()
            }
        })
        .collect();
    System::with_frame(polys, system.frame().clone())
}

fn sigmas(system: &[Polynomial], from: usize, cap: u32) -> Result<Vec<Polynomial<Dd>>> {
    let exact: Vec<Polynomial<Rational>> = system.iter().map(|p| p.to_rational()).collect();
    (from..=system.len())
        .map(|k| Ok(elem_sym_compose_capped(&exact, k, cap)?.to_dd()))
        .collect()
}

/// `n + 1` polynomials `1 - g, sigma_{s-n+1}(p), ..., sigma_s(p)` with the
/// same closed and open sets as the input.
pub fn reduce_n_plus_1(system: &System, cfg: &PipelineConfig) -> Result<Reduction> {
    let prep = prepare(system, cfg)?;
    let polys = prep.local.polys();
    let s = polys.len();
    let est = estimate_n_x(polys, &prep.domain, &cfg.oracle)?;
    if let Verdict::Unknown { reason } = &est.verdict {
        return Err(Error::OracleUnknown(format!("estimating n: {reason}")));
    }
    let n = est.n;
    if n >= s {
        return Err(Error::ActiveCountEqualsSize { n, s });
    }
    let m = prep.enclosing.m.value;
    let radius = prep.enclosing.radius;
    let relaxed = IntervalBox::cube(polys[0].dim(), radius);
    let lambda = find_lambda(polys, m, &prep.domain, cfg)?;
    let eps = find_eps(polys, n, m, prep.enclosing.eps0.value.min(cfg.eps_cap), 1.0, &relaxed, cfg)?;
    let k = find_k(s, eps.value, lambda.value);
    let g = build_g_exact(polys, m, lambda.value, k, cfg.degree_cap)?;
    let mut out = vec_with(g.neg().add_constant(num_traits::One::one()).to_dd());
    out.extend(sigmas(polys, s - n + 1, cfg.degree_cap)?);
    let params = ParameterSet {
        weight: prep.enclosing.m.clone(),
        eps0: prep.enclosing.eps0.clone(),
        k: Certified::new(k, Record::proved(format!("{s} <= (1 + eps/lambda)^(2k), rounded down"))),
        eps,
        lambda,
        q: None,
    };
    finish(prep, Mode::NPlus1, out, n, Vec::new(), Vec::new(), params, cfg)
}

fn vec_with(p: Polynomial<Dd>) -> Vec<Polynomial<Dd>> {
    alloc::vec![p]
}

/// `n` polynomials `q, sigma_{s-n+2}(p), ..., sigma_s(p)` with
/// `q = sigma_{s-n+1}(p) - g^l h^m`, for a system whose maximally active
/// points `x` (ambient coordinates) are finitely many.
pub fn reduce_n(system: &System, x: &[Vec<f64>], cfg: &PipelineConfig) -> Result<Reduction> {
    if x.is_empty() {
        return Err(Error::EmptyInput("point set X"));
    }
    let prep = prepare(system, cfg)?;
    let polys = prep.local.polys();
    let s = polys.len();
    let d = polys[0].dim();
    let frame = prep.local.frame().clone();
    let mut x_exact = Vec::with_capacity(x.len());
    let mut n = 0;
    for v in x {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: v.len() });
        }
        let y = frame.to_local(v);
        if polys.iter().any(|p| p.eval(&y) < -cfg.snap_tol) {
            return Err(Error::InvalidArgument(format!("point {v:?} of X is not in P")));
        }
        let act = active_set(polys, &y, cfg.snap_tol).len();
        if act == 0 {
            return Err(Error::InvalidArgument(format!("no constraint is active at the point {v:?} of X")));
        }
        if n != 0 && act != n {
            return Err(Error::InvalidArgument(format!("points of X have different numbers of active constraints ({n} and {act})")));
        }
        n = act;
        x_exact.push(snap_vertex(polys, &y, cfg.snap_tol).0);
    }
    if n >= s {
        return Err(Error::ActiveCountEqualsSize { n, s });
    }
    let x_local: Vec<Vec<f64>> = x_exact.iter().map(|v| v.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()).collect();

    let m = prep.enclosing.m.value;
    let radius = prep.enclosing.radius;
    let relaxed = IntervalBox::cube(d, radius);
    let lambda = find_lambda(polys, m, &prep.domain, cfg)?;
    let eps = find_eps(polys, n, m, (0.5 * prep.enclosing.eps0.value).min(cfg.eps_cap), 2.0, &relaxed, cfg)?;
    let k = find_k(s, eps.value, lambda.value);
    let g = g_enclosure(polys, m, lambda.value, k, cfg.degree_cap)?;
    let mu = find_mu(polys, &prep.domain, cfg)?;
    let alpha = find_alpha(polys, &g, &prep.domain, cfg)?;
    let rho = find_rho(&x_exact, &g, cfg)?;
    let gamma = find_gamma(polys, n, &x_local, rho.value, &prep.domain, cfg)?;
    let (loj_m, tau) = find_loj_params(polys, n, &x_exact, rho.value, mu.value, cfg)?;
    let h_deg = build_h_exact(&x_exact, mu.value)?.degree();
    let budget = cfg.degree_cap.saturating_sub(h_deg.saturating_mul(loj_m.value));
    let inp = LInputs {
        tau: tau.value,
        alpha: alpha.value,
        gamma: gamma.value,
        lambda: lambda.value,
        eps: eps.value,
        k,
        rho: rho.value,
        mu: mu.value,
        m: loj_m.value,
        s,
        n,
        card_x: x_exact.len(),
        l_max: budget / g.poly().degree().max(1),
    };
    let l = find_l(&inp)?;
    let params = ParameterSet {
        weight: prep.enclosing.m.clone(),
        eps0: prep.enclosing.eps0.clone(),
        k: Certified::new(k, Record::proved(format!("{s} <= (1 + eps/lambda)^(2k), rounded down"))),
        eps,
        lambda,
        q: Some(QParameters {
            rho,
            mu,
            m: loj_m,
            tau,
            alpha,
            gamma,
            l: Certified::new(l, Record::proved("tau alpha^l < 1, alpha^l < gamma and the growth condition, exactly")),
        }),
    };
    let q = build_q(polys, &x_exact, n, &params, cfg.degree_cap)?;
    let mut out = vec_with(q);
    out.extend(sigmas(polys, s - n + 2, cfg.degree_cap)?);
    let x_ambient: Vec<Vec<f64>> = x_local.iter().map(|y| frame.to_global(y)).collect();
    finish(prep, Mode::N, out, n, x_ambient, x_local, params, cfg)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    prep: Prepared,
    mode: Mode,
    out: Vec<Polynomial<Dd>>,
    n: usize,
    x: Vec<Vec<f64>>,
    x_local: Vec<Vec<f64>>,
    params: ParameterSet,
    cfg: &PipelineConfig,
) -> Result<Reduction> {
    let frame = prep.local.frame().clone();
    let output = System::with_frame(out.iter().map(|p| p.normalized()).collect(), frame)?;
    let report = audit(&prep.local, mode, n, &x_local, &params, prep.enclosing.radius, cfg);
    Ok(Reduction {
        input: prep.input,
        local: prep.local,
        mode,
        output,
        n,
        x,
        params,
        radius: prep.enclosing.radius,
        audit: report,
    })
}
