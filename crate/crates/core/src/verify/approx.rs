//! Single polynomials whose nonnegativity set approximates `P`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::equivalence::settle;
use super::{hausdorff_estimate, GridSpec, HausdorffEstimate};
use crate::construct::{build_g_exact, find_k, find_lambda, prepare, reduce_n, ParameterSet, PipelineConfig, Reduction};
use crate::poly::{Dd, Polynomial};
use crate::system::{AffineFrame, System};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxConfig {
    pub pipeline: PipelineConfig,
    /// Grid nodes per axis for the Hausdorff estimates.
    pub resolution: usize,
    /// Number of times the relaxation is halved before giving up.
    pub max_halvings: u32,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        ApproxConfig { pipeline: PipelineConfig::default(), resolution: 601, max_halvings: 12 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    /// The polynomial, normalized, in the coordinates of `frame`.
    pub q: Polynomial<Dd>,
    pub frame: AffineFrame,
    /// Relaxation used for the final `q`.
    pub eps_used: f64,
    pub weight: u32,
    pub lambda: f64,
    pub k: u32,
    pub hausdorff: HausdorffEstimate,
    /// Every estimate computed along the way, in order.
    pub history: Vec<(f64, HausdorffEstimate)>,
    /// Full reduction when `q` was built to vanish on a point set.
    pub reduction: Option<Reduction>,
}

impl Approximation {
    pub fn as_system(&self) -> Result<System<Dd>> {
        System::with_frame(vec![self.q.clone()], self.frame.clone())
    }
}

/// Ambient grid over the ball of radius `radius` of a frame.
fn frame_grid(frame: &AffineFrame, radius: f64, n: usize) -> Result<GridSpec> {
    let r = frame.scale * radius;
    GridSpec::uniform(
        frame.center.iter().map(|c| c - r).collect(),
        frame.center.iter().map(|c| c + r).collect(),
        n,
    )
}

/// `q = 1 - g` with the relaxation halved from `eps0` until the grid
/// estimate of the Hausdorff distance between `P` and `(q)>=0` is at most
/// `eps`.
pub fn approx_polynomial(system: &System, eps: f64, cfg: &ApproxConfig) -> Result<Approximation> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let pc = &cfg.pipeline;
    let prep = prepare(system, pc)?;
    let polys = prep.local.polys();
    let m = prep.enclosing.m.value;
    let lambda = find_lambda(polys, m, &prep.domain, pc)?.value;
    let frame = prep.local.frame().clone();
    let spec = frame_grid(&frame, prep.enclosing.radius, cfg.resolution)?;
    let mut e = prep.enclosing.eps0.value.min(pc.eps_cap);
    let mut history = Vec::new();
    for _ in 0..=cfg.max_halvings {
        let k = find_k(polys.len(), e, lambda);
        let g = build_g_exact(polys, m, lambda, k, pc.degree_cap)?;
        let q = g.neg().add_constant(num_traits::One::one()).to_dd().normalized();
        let approx = System::with_frame(vec![q.clone()], frame.clone())?;
        let est = hausdorff_estimate(system, &approx, &spec)?;
        history.push((e, est.clone()));
        if est.upper <= eps {
            return Ok(Approximation {
                q,
                frame,
                eps_used: e,
                weight: m,
                lambda,
                k,
                hausdorff: est,
                history,
                reduction: None,
            });
        }
        e *= 0.5;
    }
    Err(Error::CertificationFailed(format!(
        "Hausdorff estimate {} still above {eps} after {} halvings",
        history.last().map_or(f64::NAN, |h| h.1.upper),
        cfg.max_halvings
    )))
}

/// `q = sigma_{s-n+1} - g^l h^m` from the `n` reduction, with the relaxation
/// halved until the Hausdorff estimate between `P` and `(q)>=0` is at most
/// `eps`. `q` vanishes on `x`.
pub fn approx_polynomial_vanishing(system: &System, x: &[Vec<f64>], eps: f64, cfg: &ApproxConfig) -> Result<Approximation> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let mut pc = cfg.pipeline.clone();
    let mut history = Vec::new();
    for _ in 0..=cfg.max_halvings {
        let red = reduce_n(system, x, &pc)?;
        let frame = red.output.frame().clone();
        let q = red.output.polys()[0].clone();
        let spec = frame_grid(&frame, red.radius, cfg.resolution)?;
        let approx = System::with_frame(vec![q.clone()], frame.clone())?;
        let est = hausdorff_estimate(system, &approx, &spec)?;
        let used = red.params.eps.value;
        history.push((used, est.clone()));
        if est.upper <= eps {
            let ParameterSet { weight, lambda, k, .. } = &red.params;
            return Ok(Approximation {
                q,
                frame,
                eps_used: used,
                weight: weight.value,
                lambda: lambda.value,
                k: k.value,
                hausdorff: est,
                history,
                reduction: Some(red),
            });
        }
        pc.eps_cap = 0.5 * used;
    }
    Err(Error::CertificationFailed(format!(
        "Hausdorff estimate {} still above {eps} after {} halvings",
        history.last().map_or(f64::NAN, |h| h.1.upper),
        cfg.max_halvings
    )))
}

/// Grid counts for the inclusions `P_0 in (g < 1)`, `P in (g <= 1)` and
/// `(g <= 1) in P(M, eps)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SandwichReport {
    pub open_points: usize,
    /// Points of `P_0` with `g >= 1`.
    pub open_violations: usize,
    pub closed_points: usize,
    /// Points of `P` with `g > 1 + 1e-10`.
    pub closed_violations: usize,
    pub sublevel_points: usize,
    /// Points with `g <= 1` outside `P(M, eps)`.
    pub relaxed_violations: usize,
}

impl SandwichReport {
    pub fn violations(&self) -> usize {
        self.open_violations + self.closed_violations + self.relaxed_violations
    }
}

/// Checks the three inclusions on a grid. `local` and `g` are in the same
/// frame; the weight `(1 + |y|^2)^M` is taken in that frame's coordinates.
pub fn sandwich_check(local: &System, g: &Polynomial, m: u32, eps: f64, spec: &GridSpec) -> Result<SandwichReport> {
    let frame = local.frame();
    let grid = spec.grid().to_local(&frame.center, frame.scale);
    if g.dim() != grid.dim() || local.dim() != grid.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), found: g.dim() });
    }
    let g1 = g.add_constant(-1.0);
    let (gv, ga) = (grid.eval(&g1), grid.eval_abs(&g1));
    let vals: Vec<(Vec<f64>, Vec<f64>)> = local.polys().iter().map(|p| (grid.eval(p), grid.eval_abs(p))).collect();
    let mut rep = SandwichReport::default();
    for j in 0..grid.len() {
        let y = grid.point(j);
        let w = libm::pow(1.0 + y.iter().map(|v| v * v).sum::<f64>(), m as f64);
        let mut open = true;
        let mut closed = true;
        let mut relaxed = true;
        // g - 1
        let (gm, _) = settle(&g1, &g1, gv[j], ga[j], || y.clone());
        for (p, (v, a)) in local.polys().iter().zip(&vals) {
            let (v, err) = settle(p, p, v[j], a[j], || y.clone());
            open &= v > err;
            closed &= v >= 0.0;
            relaxed &= w * v >= -eps - w * err;
        }
        if open {
            rep.open_points += 1;
            rep.open_violations += usize::from(gm >= 0.0);
        }
        if closed {
            rep.closed_points += 1;
            rep.closed_violations += usize::from(gm > 1e-10);
        }
        if gm <= 0.0 {
            rep.sublevel_points += 1;
            rep.relaxed_violations += usize::from(!relaxed);
        }
    }
    Ok(rep)
}
