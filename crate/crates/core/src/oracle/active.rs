//! Active constraints, the maximal number `n` of simultaneously active
//! constraints over `P`, and the set `X` of points where it is attained.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::bnb::contract;
use super::enclosure::Enclosure;
use super::interval::IntervalBox;
use super::{OracleConfig, Verdict};
use crate::poly::Polynomial;
use crate::{Error, Result};

/// Clusters beyond this count mark `X` as not finite.
pub const MAX_CLUSTERS: usize = 64;
/// A cluster spanning more than this many leaf widths is treated as a curve.
const CLUSTER_SPAN: f64 = 8.0;
const EXTRA_REFINEMENTS: u32 = 6;

/// Indices `i` (zero-based) with `|p_i(x)| <= tol`.
pub fn active_set(system: &[Polynomial], x: &[f64], tol: f64) -> Vec<usize> {
    system
        .iter()
        .enumerate()
        .filter(|(_, p)| p.eval(x).abs() <= tol)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct NxEstimate {
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    pub finite: bool,
    pub verdict: Verdict,
}

#[derive(Clone)]
struct Leaf {
    b: IntervalBox,
    /// Constraints whose range over the box contains zero.
    zero: Vec<usize>,
}

/// Estimates `n` and `X` for the system on the box `b`, which must contain `P`.
pub fn estimate_n_x(system: &[Polynomial], b: &IntervalBox, cfg: &OracleConfig) -> Result<NxEstimate> {
    if system.is_empty() {
        return Err(Error::EmptyInput("polynomial system"));
    }
    let encl: Vec<Enclosure> = system.iter().map(Enclosure::from_poly).collect();
    let linear: Vec<_> = encl.iter().filter_map(|e| e.poly().as_linear()).collect();

    let mut leaves = refine(&encl, &linear, vec![b.clone()], 1, cfg.cluster_tol, cfg.max_boxes)
        .ok_or_else(|| Error::OracleUnknown("box budget exhausted while locating the boundary".into()))?;
    if leaves.is_empty() {
        return Err(Error::OracleUnknown("no boundary point of P found in the search box".into()));
    }

    let mut best: Option<(usize, Vec<Vec<Leaf>>, Vec<Vec<f64>>)> = None;
    for k in 1..=system.len() {
        let mut level: Vec<Leaf> = leaves.into_iter().filter(|l| l.zero.len() >= k).collect();
        let mut width = cfg.cluster_tol;
        let mut confirmed: Option<(Vec<Vec<Leaf>>, Vec<Vec<f64>>)> = None;
        for round in 0..=EXTRA_REFINEMENTS {
            if level.is_empty() {
                break;
            }
            let clusters = cluster(core::mem::take(&mut level));
            let points = confirm(system, &clusters, k, cfg);
            if !points.is_empty() {
                confirmed = Some((clusters, points));
                break;
            }
            if round == EXTRA_REFINEMENTS {
                level = clusters.into_iter().flatten().collect();
                break;
            }
            width *= 0.5;
            let boxes = clusters.into_iter().flatten().map(|l| l.b).collect();
            level = refine(&encl, &linear, boxes, k, width, cfg.max_boxes)
                .ok_or_else(|| Error::OracleUnknown("box budget exhausted while separating levels".into()))?;
        }
        match confirmed {
            Some((clusters, points)) => {
                leaves = clusters.iter().flatten().cloned().collect();
                best = Some((k, clusters, points));
            }
            None if level.is_empty() => {
                // level k is certified empty
                let Some((n, clusters, points)) = best else {
                    return Err(Error::OracleUnknown("no point of P with an active constraint was confirmed".into()));
                };
                let finite = clusters.len() <= MAX_CLUSTERS
                    && clusters.iter().all(|c| span(c) <= CLUSTER_SPAN * cfg.cluster_tol)
                    && points.len() == clusters.len();
                return Ok(NxEstimate { n, points, finite, verdict: Verdict::Proved });
            }
            None => {
                let (n, clusters, points) = best.unwrap_or((k - 1, Vec::new(), Vec::new()));
                let finite = !clusters.is_empty()
                    && clusters.len() <= MAX_CLUSTERS
                    && clusters.iter().all(|c| span(c) <= CLUSTER_SPAN * cfg.cluster_tol);
                return Ok(NxEstimate {
                    n,
                    points,
                    finite,
                    verdict: Verdict::Unknown {
                        reason: format!("could not separate level {k} from level {n} at the configured depth"),
                    },
                });
            }
        }
        if leaves.is_empty() {
            break;
        }
    }
    let (n, clusters, points) = best.expect("at least one level confirmed");
    let finite = clusters.len() <= MAX_CLUSTERS && clusters.iter().all(|c| span(c) <= CLUSTER_SPAN * cfg.cluster_tol);
    Ok(NxEstimate { n, points, finite, verdict: Verdict::Proved })
}

/// Subdivides until every kept box is at most `width` wide. A box is kept
/// when no constraint is certified negative on it and at least `k`
/// constraints may vanish on it. `None` when the budget runs out.
fn refine(
    encl: &[Enclosure],
    linear: &[(Vec<super::Interval>, super::Interval)],
    start: Vec<IntervalBox>,
    k: usize,
    width: f64,
    budget: usize,
) -> Option<Vec<Leaf>> {
    let mut stack = start;
    let mut out = Vec::new();
    let mut used = 0usize;
    while let Some(mut b) = stack.pop() {
        used += 1;
        if used > budget {
            return None;
        }
        if !contract(&mut b, linear) {
            continue;
        }
        let mut zero = Vec::new();
        let mut dead = false;
        for (i, e) in encl.iter().enumerate() {
            let r = e.range(&b);
            if r.hi < 0.0 {
                dead = true;
                break;
            }
            if r.lo <= 0.0 {
                zero.push(i);
            }
        }
        if dead || zero.len() < k {
            continue;
        }
        if b.max_width() <= width {
            out.push(Leaf { b, zero });
        } else {
            let (l, r) = b.bisect();
            stack.push(l);
            stack.push(r);
        }
    }
    Some(out)
}

/// Groups leaves whose boxes touch.
fn cluster(leaves: Vec<Leaf>) -> Vec<Vec<Leaf>> {
    let n = leaves.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    // sort along the first axis so that only nearby pairs are compared
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| leaves[a].b.side(0).lo.total_cmp(&leaves[b].b.side(0).lo));
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if leaves[j].b.side(0).lo > leaves[i].b.side(0).hi {
                break;
            }
            if touch(&leaves[i].b, &leaves[j].b) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<Leaf>> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; n];
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    for (i, leaf) in leaves.into_iter().enumerate() {
        let r = roots[i];
        match slot[r] {
            Some(g) => groups[g].push(leaf),
            None => {
                slot[r] = Some(groups.len());
                groups.push(vec![leaf]);
            }
        }
    }
    groups
}

fn touch(a: &IntervalBox, b: &IntervalBox) -> bool {
    a.sides().iter().zip(b.sides()).all(|(x, y)| x.lo <= y.hi && y.lo <= x.hi)
}

fn hull(c: &[Leaf]) -> IntervalBox {
    let mut h = c[0].b.clone();
    for l in &c[1..] {
        for i in 0..h.dim() {
            h.set_side(i, h.side(i).hull(&l.b.side(i)));
        }
    }
    h
}

fn span(c: &[Leaf]) -> f64 {
    hull(c).max_width()
}

/// Projects a representative of each cluster onto the zero set of its
/// possibly active constraints and keeps those with `k` confirmed zeros.
fn confirm(system: &[Polynomial], clusters: &[Vec<Leaf>], k: usize, cfg: &OracleConfig) -> Vec<Vec<f64>> {
    let tol = cfg.tol;
    let mut out = Vec::new();
    for c in clusters {
        let h = hull(c);
        let mut zero: Vec<usize> = c.iter().flat_map(|l| l.zero.iter().copied()).collect();
        zero.sort_unstable();
        zero.dedup();
        // the hull centre first, then the leaves nearest to it
        let centre = h.midpoint();
        let mut starts: Vec<(Vec<f64>, &[usize])> = c.iter().map(|l| (l.b.midpoint(), l.zero.as_slice())).collect();
        starts.sort_by(|a, b| dist2(&a.0, &centre).total_cmp(&dist2(&b.0, &centre)));
        starts.truncate(4);
        starts.insert(0, (centre.clone(), zero.as_slice()));
        let reach = h.max_width() + cfg.cluster_tol;
        for (x0, idx) in starts {
            let x = project(system, idx, x0);
            let act = active_set(system, &x, tol);
            let feasible = system.iter().all(|p| p.eval(&x) >= -tol);
            if act.len() >= k && feasible && libm::sqrt(dist2(&x, &centre)) <= reach {
                out.push(x);
                break;
            }
        }
    }
    out
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Damped Gauss-Newton on `p_j(x) = 0, j in idx`, taking minimum-norm steps.
fn project(system: &[Polynomial], idx: &[usize], mut x: Vec<f64>) -> Vec<f64> {
    let d = x.len();
    let grads: Vec<Vec<Polynomial>> = idx.iter().map(|&j| (0..d).map(|i| system[j].derivative(i)).collect()).collect();
    for _ in 0..60 {
        let r: Vec<f64> = idx.iter().map(|&j| system[j].eval(&x)).collect();
        if r.iter().all(|v| v.abs() <= 1e-15) {
            break;
        }
        let jac: Vec<Vec<f64>> = grads.iter().map(|g| g.iter().map(|p| p.eval(&x)).collect()).collect();
        // (J J^T + mu I) y = r, step = -J^T y
        let m = idx.len();
        let mut a = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                a[i][j] = (0..d).map(|t| jac[i][t] * jac[j][t]).sum();
            }
            a[i][i] += 1e-14 * (1.0 + a[i][i]);
        }
        let Some(y) = solve(a, r.clone()) else { break };
        let step: Vec<f64> = (0..d).map(|t| (0..m).map(|i| jac[i][t] * y[i]).sum::<f64>()).collect();
        let norm: f64 = step.iter().map(|v| v * v).sum::<f64>();
        for (xi, si) in x.iter_mut().zip(&step) {
            *xi -= si;
        }
        if norm <= 1e-34 {
            break;
        }
    }
    x
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}
