//! Searches for the constants of the construction. Every value returned here
//! is backed by a certified oracle answer or by exact arithmetic.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, ToPrimitive, Zero};

use super::build::{affine_parts, invert_exact, lift, linear_substitute, rank};
use super::{Certified, PipelineConfig, Record};
use crate::elemsym::elem_sym_compose_capped;
use crate::oracle::interval::{add_down, div_down, mul_down, pow_down, sqrt_up};
use crate::oracle::{
    certify_enclosure, lojasiewicz_search_exact, max_on_feasible_enclosed, min_on_feasible_enclosed, prove_lower, prove_upper,
    weighted_system, Enclosure, IntervalBox, LojForm, LojRegion, OracleConfig, Verdict,
};
use crate::poly::{Polynomial, Rational};
use crate::{Error, Result};

fn enclosures(polys: &[Polynomial]) -> Vec<Enclosure> {
    polys.iter().map(Enclosure::from_poly).collect()
}

fn exact(v: f64) -> Rational {
    Rational::from_float(v).expect("finite value")
}

fn sigma_exact(system: &[Polynomial], k: usize, cap: u32) -> Result<Polynomial<Rational>> {
    let exact_sys: Vec<Polynomial<Rational>> = system.iter().map(|p| p.to_rational()).collect();
    elem_sym_compose_capped(&exact_sys, k, cap)
}

/// `M`, `eps0`, and the certified radius of `P(M, eps0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MEps0 {
    pub m: Certified<u32>,
    pub eps0: Certified<f64>,
    pub radius: f64,
}

/// Smallest `M = 0, 1, ...` for which `P(M, eps0)` is proved bounded for some
/// `eps0` in `1, 1/2, 1/4, ...`.
///
/// An exponent is skipped only when every `eps0` was refuted; an undecided
/// exponent aborts the search, since moving on would not give the smallest `M`.
pub fn find_m_eps0(system: &[Polynomial], cfg: &PipelineConfig) -> Result<MEps0> {
    for m in 0..=cfg.m_max {
        let mut unknown: Option<String> = None;
        let mut eps0 = 1.0;
        for _ in 0..=cfg.eps0_halvings {
            let cert = certify_enclosure(system, m, eps0, &cfg.oracle)?;
            match cert.verdict {
                Verdict::Proved => {
                    let radius = cert.radius.unwrap_or(cfg.oracle.r_max);
                    let query = format!("P({m}, {eps0}) lies in the ball of radius {radius}");
                    return Ok(MEps0 {
                        m: Certified::new(m, Record::proved(query.clone())),
                        eps0: Certified::new(eps0, Record::proved(query)),
                        radius,
                    });
                }
                Verdict::Refuted { .. } => {}
                Verdict::Unknown { reason } => {
                    unknown.get_or_insert(format!("eps0 = {eps0}: {reason}"));
                }
            }
            eps0 *= 0.5;
        }
        if let Some(reason) = unknown {
            return Err(Error::OracleUnknown(format!("boundedness of P({m}, eps0) undecided ({reason})")));
        }
    }
    Err(Error::OracleUnknown(format!(
        "P(M, eps0) has points beyond radius {} for every M <= {} and every eps0 tried",
        cfg.oracle.r_max, cfg.m_max
    )))
}

/// Smallest power of two `lambda >= 1` with `(1 + |x|^2)^M p_i <= lambda` on
/// `P` for every `i`. `domain` must contain `P`.
pub fn find_lambda(system: &[Polynomial], m: u32, domain: &IntervalBox, cfg: &PipelineConfig) -> Result<Certified<f64>> {
    let weighted = weighted_system(system, m)?;
    let cons = enclosures(system);
    let mut log2 = 0i32;
    for (i, w) in weighted.iter().enumerate() {
        let e = Enclosure::from_poly(w);
        loop {
            let lambda = libm::ldexp(1.0, log2);
            match prove_upper(&e, &cons, &[], domain, lambda, false, &cfg.oracle) {
                Verdict::Proved => break,
                Verdict::Refuted { witness } => {
                    let need = w.eval(&witness);
                    let next = if need.is_finite() && need > 0.0 { libm::ceil(libm::log2(need)) as i32 } else { log2 };
                    log2 = next.max(log2 + 1);
                }
                Verdict::Unknown { .. } => log2 += 1,
            }
            if log2 > cfg.lambda_log2_max {
                return Err(Error::OracleUnknown(format!(
                    "no certified upper bound for the weighted constraint {i} up to 2^{}",
                    cfg.lambda_log2_max
                )));
            }
        }
    }
    let lambda = libm::ldexp(1.0, log2);
    Ok(Certified::new(lambda, Record::proved(format!("(1+|x|^2)^{m} p_i <= {lambda} on P for all i"))))
}

/// Smallest `k >= 1` with `s <= (1 + eps / lambda)^(2k)`, checked with
/// downward rounding.
pub fn find_k(s: usize, eps: f64, lambda: f64) -> u32 {
    assert!(eps > 0.0 && lambda > 0.0, "eps and lambda must be positive");
    let base = add_down(1.0, div_down(eps, lambda));
    let ok = |k: u32| pow_down(base, 2 * k) >= s as f64;
    let est = libm::ceil(libm::log(s as f64) / (2.0 * libm::log1p(eps / lambda)));
    let mut k = if est.is_finite() && est >= 1.0 { est.min(u32::MAX as f64 / 4.0) as u32 } else { 1 };
    while !ok(k) {
        k += 1;
    }
    while k > 1 && ok(k - 1) {
        k -= 1;
    }
    k
}

/// Upper bound on `diam(P)`: the square root of the certified maximum of
/// `|x' - x''|^2` over pairs of points of `P`, found in `2d` variables.
pub fn find_mu(system: &[Polynomial], domain: &IntervalBox, cfg: &PipelineConfig) -> Result<Certified<f64>> {
    let d = domain.dim();
    let mut cons = Vec::with_capacity(2 * system.len());
    for off in [0, d] {
        for p in system {
            cons.push(Enclosure::from_poly(&lift(p, 2 * d, off)?));
        }
    }
    let mut objective = Polynomial::zero(2 * d);
    for i in 0..d {
        let diff = Polynomial::var(2 * d, i).sub(&Polynomial::var(2 * d, d + i))?;
        objective = objective.add(&diff.mul(&diff)?)?;
    }
    let sides: Vec<_> = domain.sides().iter().chain(domain.sides()).copied().collect();
    let doubled = IntervalBox::new(sides);
    let mut tol = cfg.oracle.tol;
    let mut last = String::new();
    for _ in 0..3 {
        let oc = OracleConfig { tol, ..cfg.oracle.clone() };
        let out = max_on_feasible_enclosed(&Enclosure::from_poly(&objective), &cons, &[], &doubled, &oc);
        if out.verdict.is_proved() {
            if out.upper == f64::NEG_INFINITY {
                return Err(Error::EmptyInput("P is empty"));
            }
            let diam = sqrt_up(out.upper.max(0.0));
            if diam < cfg.oracle.tol {
                return Ok(Certified::new(
                    cfg.mu_min,
                    Record::proved(format!("diam(P) <= {diam} is below tolerance; using the default {}", cfg.mu_min)),
                ));
            }
            return Ok(Certified::new(diam, Record::proved(format!("diam(P)^2 <= {} (tolerance {tol})", out.upper))));
        }
        if let Verdict::Unknown { reason } = out.verdict {
            last = reason;
        }
        tol *= 100.0;
    }
    Err(Error::OracleUnknown(format!("bounding diam(P): {last}")))
}

/// Half the smallest distance between two points of `X` (infinite for a
/// single point).
pub fn disjointness_bound(x: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in x.iter().enumerate() {
        for b in &x[i + 1..] {
            let d2: f64 = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum();
            best = best.min(libm::sqrt(d2) * 0.5);
        }
    }
    best
}

fn ball_constraint(v: &[Rational], rho: f64) -> Polynomial<Rational> {
    let r = exact(rho);
    Polynomial::squared_distance(v).neg().add_constant(&r * &r)
}

fn ball_box(v: &[f64], rho: f64) -> IntervalBox {
    let lo: Vec<f64> = v.iter().map(|c| crate::oracle::interval::sub_down(*c, rho)).collect();
    let hi: Vec<f64> = v.iter().map(|c| crate::oracle::interval::add_up(*c, rho)).collect();
    IntervalBox::from_bounds(&lo, &hi)
}

fn to_f64_point(v: &[Rational]) -> Vec<f64> {
    v.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Largest `rho = 2^-j` strictly below [`disjointness_bound`] such that
/// `g <= 1` is certified on every closed ball `B(v, rho)`.
pub fn find_rho(x: &[Vec<Rational>], ge: &Enclosure, cfg: &PipelineConfig) -> Result<Certified<f64>> {
    if x.is_empty() {
        return Err(Error::EmptyInput("point set X"));
    }
    let xf: Vec<Vec<f64>> = x.iter().map(|v| to_f64_point(v)).collect();
    let bound = disjointness_bound(&xf);
    let mut last = String::from("every radius in the schedule reached the disjointness bound");
    for j in 0..=cfg.rho_halvings {
        let rho = libm::ldexp(1.0, -(j as i32));
        if rho >= bound * (1.0 - 1e-12) {
            continue;
        }
        let mut all = true;
        for (v, vf) in x.iter().zip(&xf) {
            let c = Enclosure::from_rational(&ball_constraint(v, rho));
            match prove_upper(ge, &[c], &[], &ball_box(vf, rho), 1.0, false, &cfg.oracle) {
                Verdict::Proved => {}
                Verdict::Refuted { .. } => {
                    all = false;
                    break;
                }
                Verdict::Unknown { reason } => {
                    last = reason;
                    all = false;
                    break;
                }
            }
        }
        if all {
            return Ok(Certified::new(
                rho,
                Record::proved(format!("g <= 1 on B(v, {rho}) for all v in X; balls disjoint (half distance {bound})")),
            ));
        }
    }
    Err(Error::OracleUnknown(format!("no radius with g <= 1 on the balls around X: {last}")))
}

const GRID: f64 = 1048576.0; // 2^20

/// Certified `alpha >= max_P g`, rounded up to a multiple of `2^-20`; fails
/// unless `alpha < 1`.
pub fn find_alpha(system: &[Polynomial], g: &Enclosure, domain: &IntervalBox, cfg: &PipelineConfig) -> Result<Certified<f64>> {
    let out = max_on_feasible_enclosed(g, &enclosures(system), &[], domain, &cfg.oracle);
    if let Verdict::Unknown { reason } = out.verdict {
        return Err(Error::OracleUnknown(format!("bounding max g over P: {reason}")));
    }
    let alpha = libm::ceil(out.upper * GRID) / GRID;
    if !(alpha < 1.0) {
        return Err(Error::CertificationFailed(format!(
            "certified bound {} on max g over P is not below 1 (n = s, or the oracle is too coarse)",
            out.upper
        )));
    }
    Ok(Certified::new(alpha.max(0.0), Record::proved(format!("max g over P <= {}", out.upper))))
}

/// Certified `gamma > 0` below `sigma_{s-n+1}(p)` on `P` minus the open balls
/// `int B(v, rho)`.
pub fn find_gamma(
    system: &[Polynomial],
    n: usize,
    x: &[Vec<f64>],
    rho: f64,
    domain: &IntervalBox,
    cfg: &PipelineConfig,
) -> Result<Certified<f64>> {
    let s = system.len();
    if n == 0 || n >= s {
        return Err(Error::ActiveCountEqualsSize { n, s });
    }
    let sigma = sigma_exact(system, s - n + 1, cfg.degree_cap)?;
    let holes: Vec<(Vec<f64>, f64)> = x.iter().map(|v| (v.clone(), rho)).collect();
    let out = min_on_feasible_enclosed(&Enclosure::from_rational(&sigma), &enclosures(system), &holes, domain, &cfg.oracle);
    if let Verdict::Unknown { reason } = out.verdict {
        return Err(Error::OracleUnknown(format!("bounding sigma_{} away from X: {reason}", s - n + 1)));
    }
    if out.lower == f64::INFINITY {
        // P is covered by the balls; any positive value works
        return Ok(Certified::new(1.0, Record::proved("P lies inside the balls around X")));
    }
    let gamma = mul_down(out.lower, 1.0 - 1.0 / 1024.0);
    if !(gamma > 0.0) {
        return Err(Error::CertificationFailed(format!(
            "certified lower bound {} on sigma_{} away from X is not positive",
            out.lower,
            s - n + 1
        )));
    }
    Ok(Certified::new(gamma, Record::proved(format!("sigma_{} >= {} on P minus the balls", s - n + 1, out.lower))))
}

/// Exponent `m` and factor `tau` with `(|x - w| / mu)^(2m) <= tau sigma_{s-n+1}(p)`
/// on `P` intersected with `B(w, rho)`, maximized over `w` in `X`.
///
/// At a point where `d` affine constraints with independent gradients
/// vanish, the search runs in the coordinates `u_i = p_i(x)` of those
/// constraints, where the region near the point is the nonnegative orthant.
/// Elsewhere it runs in the original coordinates with a ball of radius
/// `loj_hole * rho` around the point left out; the record says so.
pub fn find_loj_params(
    system: &[Polynomial],
    n: usize,
    x: &[Vec<Rational>],
    rho: f64,
    mu: f64,
    cfg: &PipelineConfig,
) -> Result<(Certified<u32>, Certified<f64>)> {
    let s = system.len();
    if n == 0 || n >= s {
        return Err(Error::ActiveCountEqualsSize { n, s });
    }
    if x.is_empty() {
        return Err(Error::EmptyInput("point set X"));
    }
    let sigma = sigma_exact(system, s - n + 1, cfg.degree_cap)?;
    let mu_r = exact(mu);
    let inv_mu2 = (&mu_r * &mu_r).recip();
    let mut m_max = 0u32;
    let mut tau_max = 0.0f64;
    let mut notes: Vec<String> = Vec::new();
    for w in x {
        let (m, tau, note) = loj_at(system, &sigma, w, rho, &inv_mu2, cfg)?;
        m_max = m_max.max(m);
        tau_max = tau_max.max(tau);
        if let Some(note) = note {
            notes.push(note);
        }
    }
    // (|x-w|/mu)^2 <= 1 on P, so raising m keeps each inequality valid
    let mut query = format!("(|x-w|/mu)^(2m) <= tau sigma_{} on P and B(w, {rho}) for all w in X", s - n + 1);
    for note in &notes {
        query.push_str("; ");
        query.push_str(note);
    }
    let record = Record::proved(query);
    Ok((Certified::new(m_max, record.clone()), Certified::new(tau_max, record)))
}

fn loj_at(
    system: &[Polynomial],
    sigma: &Polynomial<Rational>,
    w: &[Rational],
    rho: f64,
    inv_mu2: &Rational,
    cfg: &PipelineConfig,
) -> Result<(u32, f64, Option<String>)> {
    let d = w.len();
    let wf = to_f64_point(w);
    let dist = Polynomial::squared_distance(w).scale(inv_mu2);
    let ball = ball_constraint(w, rho);
    let zero_at = |p: &Polynomial| -> bool {
        match affine_parts(p) {
            Some((g, c)) => g.iter().zip(w).fold(c, |acc, (gi, wi)| acc + gi * wi).is_zero(),
            None => false,
        }
    };
    // affine constraints vanishing exactly at w
    let active: Vec<usize> = (0..system.len()).filter(|&i| zero_at(&system[i])).collect();
    let mut chosen: Vec<usize> = Vec::new();
    for &i in &active {
        chosen.push(i);
        let rows: Vec<Vec<Rational>> = chosen.iter().map(|&j| affine_parts(&system[j]).unwrap().0).collect();
        if rank(&rows) < chosen.len() {
            chosen.pop();
        }
        if chosen.len() == d {
            break;
        }
    }
    if chosen.len() == d {
        let a: Vec<Vec<Rational>> = chosen.iter().map(|&j| affine_parts(&system[j]).unwrap().0).collect();
        let b = invert_exact(&a).expect("independent rows");
        let f_u = linear_substitute(sigma, w, &b)?;
        let g_u = linear_substitute(&dist, w, &b)?;
        let mut constraints = vec![Enclosure::from_rational(&linear_substitute(&ball, w, &b)?)];
        for (i, p) in system.iter().enumerate() {
            if !chosen.contains(&i) {
                constraints.push(Enclosure::from_rational(&linear_substitute(&p.to_rational(), w, &b)?));
            }
        }
        // u_i = a_i . (x - w) lies in [0, |a_i| rho]
        let hi: Vec<f64> = a
            .iter()
            .map(|row| {
                let n2: f64 = row.iter().map(|c| c.to_f64().map_or(f64::INFINITY, |v| v * v)).sum();
                crate::oracle::interval::mul_up(sqrt_up(n2), rho) * (1.0 + 1e-12)
            })
            .collect();
        let region = LojRegion { domain: IntervalBox::from_bounds(&vec![0.0; d], &hi), constraints, holes: Vec::new() };
        let r = lojasiewicz_search_exact(&f_u, &g_u, LojForm::Linear, &region, cfg.loj_m_max, &cfg.oracle)?;
        return match r.verdict {
            Verdict::Proved => Ok((r.m, r.lambda, None)),
            v => Err(Error::OracleUnknown(format!("Lojasiewicz search at {wf:?}: {v:?}"))),
        };
    }
    let hole = cfg.loj_hole * rho;
    let mut constraints = vec![Enclosure::from_rational(&ball)];
    constraints.extend(system.iter().map(Enclosure::from_poly));
    let region = LojRegion { domain: ball_box(&wf, rho), constraints, holes: vec![(wf.clone(), hole)] };
    let r = lojasiewicz_search_exact(sigma, &dist, LojForm::Linear, &region, cfg.loj_m_max, &cfg.oracle)?;
    match r.verdict {
        Verdict::Proved => Ok((
            r.m,
            r.lambda,
            Some(format!("at {wf:?} certified outside the ball of radius {hole} only")),
        )),
        v => Err(Error::OracleUnknown(format!("Lojasiewicz search at {wf:?}: {v:?}"))),
    }
}

/// Inputs of [`find_l`].
#[derive(Clone, Debug, PartialEq)]
pub struct LInputs {
    pub tau: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub eps: f64,
    pub k: u32,
    pub rho: f64,
    pub mu: f64,
    pub m: u32,
    pub s: usize,
    pub n: usize,
    pub card_x: usize,
    /// Largest admissible `l`.
    pub l_max: u32,
}

fn rpow(b: &Rational, e: i64) -> Rational {
    let mut out = Rational::one();
    let mut base = if e < 0 { b.recip() } else { b.clone() };
    let mut e = e.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            out *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    out
}

fn binom(n: usize, k: usize) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    r
}

/// Which of the three inequalities on `l` hold, in exact arithmetic.
pub(crate) fn l_conditions(inp: &LInputs, l: u32) -> [bool; 3] {
    let (tau, alpha, gamma) = (exact(inp.tau), exact(inp.alpha), exact(inp.gamma));
    let (lambda, eps) = (exact(inp.lambda), exact(inp.eps));
    let al = rpow(&alpha, l as i64);
    let c56 = &tau * &al < Rational::one();
    let c57 = al < gamma;
    let t = (inp.s + 1 - inp.n) as i64;
    let two = Rational::from_integer(2.into());
    let lhs = &two * binom(inp.s, inp.n - 1) * rpow(&lambda, t) * rpow(&Rational::from_integer((inp.s + 1).into()), t);
    let ratio = (&lambda + &two * &eps) / (&lambda + &eps);
    let e = 2 * inp.k as i64 * (l as i64 - t);
    let rm = exact(inp.rho) / exact(inp.mu);
    let rhs = rpow(&ratio, e) * rpow(&rm, 2 * inp.m as i64 * inp.card_x as i64);
    [c56, c57, lhs <= rhs]
}

/// Smallest `l >= 1` with `tau alpha^l < 1`, `alpha^l < gamma` and the growth
/// condition that makes `q < 0` outside `P(M, 2 eps)`. The conditions are
/// checked in exact arithmetic, starting from the logarithmic estimates.
pub fn find_l(inp: &LInputs) -> Result<u32> {
    if !(inp.alpha >= 0.0 && inp.alpha < 1.0) || !(inp.gamma > 0.0) || !(inp.tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= alpha < 1, gamma > 0, tau > 0; got {}, {}, {}",
            inp.alpha, inp.gamma, inp.tau
        )));
    }
    if inp.n == 0 || inp.n >= inp.s {
        return Err(Error::ActiveCountEqualsSize { n: inp.n, s: inp.s });
    }
    let la = -libm::log(inp.alpha);
    let mut est: f64 = 1.0;
    if la.is_finite() && la > 0.0 {
        est = est.max(libm::floor(libm::log(inp.tau) / la) + 1.0);
        est = est.max(libm::floor(-libm::log(inp.gamma) / la) + 1.0);
    }
    let t = (inp.s + 1 - inp.n) as f64;
    let lr = libm::log((inp.lambda + 2.0 * inp.eps) / (inp.lambda + inp.eps));
    let lhs = libm::log(2.0)
        + binom(inp.s, inp.n - 1).to_f64().map_or(0.0, libm::log)
        + t * (libm::log(inp.lambda) + libm::log((inp.s + 1) as f64));
    let gap = lhs - 2.0 * inp.m as f64 * inp.card_x as f64 * libm::log(inp.rho / inp.mu);
    if lr > 0.0 {
        est = est.max(t + libm::ceil(gap / (2.0 * inp.k as f64 * lr)));
    }
    let mut l = if est.is_finite() { est.clamp(1.0, inp.l_max as f64 + 1.0) as u32 } else { inp.l_max + 1 };
    let ok = |l: u32| l_conditions(inp, l).iter().all(|c| *c);
    if l > inp.l_max {
        return Err(Error::DegreeCapExceeded { degree: l, cap: inp.l_max });
    }
    while !ok(l) {
        l += 1;
        if l > inp.l_max {
            return Err(Error::DegreeCapExceeded { degree: l, cap: inp.l_max });
        }
    }
    while l > 1 && ok(l - 1) {
        l -= 1;
    }
    Ok(l)
}

/// Largest `eps` in `start, start/2, ...` such that `sigma_i(p) > 0` on
/// `P(M, factor * eps)` for `1 <= i <= s - n`. `domain` must contain
/// `P(M, factor * start)`.
pub fn find_eps(
    system: &[Polynomial],
    n: usize,
    m: u32,
    start: f64,
    factor: f64,
    domain: &IntervalBox,
    cfg: &PipelineConfig,
) -> Result<Certified<f64>> {
    let s = system.len();
    if n >= s {
        return Err(Error::ActiveCountEqualsSize { n, s });
    }
    let weighted = weighted_system(system, m)?;
    let sigmas: Vec<Enclosure> = (1..=s - n)
        .map(|i| sigma_exact(system, i, cfg.degree_cap).map(|p| Enclosure::from_rational(&p)))
        .collect::<Result<_>>()?;
    let mut eps = start;
    let mut last = String::from("no sigma to check");
    for _ in 0..=cfg.eps_halvings {
        let relax = factor * eps;
        let cons: Vec<Enclosure> = weighted.iter().map(|w| Enclosure::from_poly(&w.add_constant(relax))).collect();
        let mut all = true;
        for (i, e) in sigmas.iter().enumerate() {
            match prove_lower(e, &cons, &[], domain, 0.0, true, &cfg.oracle) {
                Verdict::Proved => {}
                Verdict::Refuted { .. } => {
                    all = false;
                    last = format!("sigma_{} has a certified non-positive value", i + 1);
                    break;
                }
                Verdict::Unknown { reason } => {
                    all = false;
                    last = reason;
                    break;
                }
            }
        }
        if all {
            return Ok(Certified::new(
                eps,
                Record::proved(format!("sigma_1..sigma_{} > 0 on P({m}, {relax})", s - n)),
            ));
        }
        eps *= 0.5;
    }
    Err(Error::OracleUnknown(format!("no eps with positive sigma_1..sigma_{} on the relaxation: {last}", s - n)))
}
