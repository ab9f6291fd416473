//! Certified numerical decision procedures.
//!
//! The constructions need answers to bounded-quantifier questions such as
//! "is `max_P f <= c`?" or "is `P(M, eps)` bounded?". Each query here is
//! answered with a [`Verdict`]: `Proved` is backed by outward-rounded interval
//! arithmetic, `Refuted` carries a witness whose violation was certified the
//! same way, and `Unknown` is returned when the configured limits are reached.

mod active;
pub mod bnb;
mod certify;
pub mod enclosure;
pub mod interval;
mod loj;

use alloc::string::String;
use alloc::vec::Vec;

pub use active::{active_set, estimate_n_x, NxEstimate};
pub use certify::{certify_enclosure, weighted_system, EnclosureCertificate};
pub use enclosure::{rational_interval, Enclosure, IntervalPoly};
pub use interval::{Interval, IntervalBox};
pub use loj::{lojasiewicz_search, lojasiewicz_search_exact, LojForm, LojRegion, LojResult};

use bnb::{Goal, Limits, Problem, Status};

use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Proved,
    Refuted { witness: Vec<f64> },
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    fn unknown(reason: impl Into<String>) -> Self {
        Verdict::Unknown { reason: reason.into() }
    }
}

/// Oracle limits. All randomness is drawn from `seed`.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Target width of certified bounds.
    pub tol: f64,
    /// Maximal bisection depth of a branch-and-bound box.
    pub max_depth: u32,
    /// Radius of the finite region searched by the boundedness test.
    pub r_max: f64,
    /// Number of random samples used by falsifiers.
    pub samples: usize,
    /// Box width at which active-set search stops refining and clusters.
    pub cluster_tol: f64,
    /// Box budget of a single branch-and-bound run.
    pub max_boxes: usize,
    /// Accuracy of the radius reported by the boundedness test.
    pub radius_tol: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            tol: 1e-6,
            max_depth: 60,
            r_max: 1e6,
            samples: 20_000,
            cluster_tol: 1e-3,
            max_boxes: 200_000,
            radius_tol: 1e-3,
            seed: 0x5eed_cafe,
        }
    }
}

impl OracleConfig {
    fn limits(&self) -> Limits {
        Limits { max_depth: self.max_depth, max_boxes: self.max_boxes, min_width: 0.0 }
    }
}

/// Certified enclosures of the minimum and the maximum of `p` over `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeReport {
    pub min: Interval,
    pub max: Interval,
    pub verdict: Verdict,
}

pub fn range_on_box(p: &Polynomial, b: &IntervalBox, tol: f64, max_depth: u32) -> RangeReport {
    let limits = Limits { max_depth, ..Limits::default() };
    let e = Enclosure::from_poly(p);
    let lo = Problem::new(b.clone(), e.clone()).solve(Goal::Minimize { tol }, &limits);
    let hi = Problem::new(b.clone(), e.negate()).solve(Goal::Minimize { tol }, &limits);
    let verdict = match (&lo.status, &hi.status) {
        (Status::Converged, Status::Converged) => Verdict::Proved,
        (Status::Exhausted(r), _) | (_, Status::Exhausted(r)) => Verdict::unknown(r.clone()),
        _ => Verdict::unknown("branch-and-bound did not converge"),
    };
    RangeReport {
        min: Interval { lo: lo.lower, hi: lo.upper.max(lo.lower) },
        max: Interval { lo: (-hi.upper).min(-hi.lower), hi: -hi.lower },
        verdict,
    }
}

/// Certified upper bound on `sup { f(x) : x in B, c_j(x) >= 0 }`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibleMax {
    /// Upper bound; `-inf` when the feasible set is proved empty.
    pub upper: f64,
    /// Certified lower bound on the supremum, from `witness`.
    pub lower: f64,
    pub witness: Option<Vec<f64>>,
    pub verdict: Verdict,
}

pub fn max_on_feasible(objective: &Polynomial, constraints: &[Polynomial], b: &IntervalBox, cfg: &OracleConfig) -> FeasibleMax {
    let cons: Vec<Enclosure> = constraints.iter().map(Enclosure::from_poly).collect();
    max_on_feasible_enclosed(&Enclosure::from_poly(objective), &cons, &[], b, cfg)
}

/// [`max_on_feasible`] over enclosures, with open balls `holes` removed.
pub fn max_on_feasible_enclosed(
    objective: &Enclosure,
    constraints: &[Enclosure],
    holes: &[(Vec<f64>, f64)],
    b: &IntervalBox,
    cfg: &OracleConfig,
) -> FeasibleMax {
    let out = Problem::new(b.clone(), objective.negate())
        .with_constraints(constraints.to_vec())
        .with_holes(holes.to_vec())
        .solve(Goal::Minimize { tol: cfg.tol }, &cfg.limits());
    let verdict = match out.status {
        Status::Converged => Verdict::Proved,
        Status::Exhausted(r) => Verdict::unknown(r),
        _ => Verdict::unknown("branch-and-bound did not converge"),
    };
    FeasibleMax { upper: -out.lower, lower: -out.upper, witness: out.witness, verdict }
}

/// Certified lower bound on `inf { f(x) : x in B, c_j(x) >= 0, x outside holes }`.
pub fn min_on_feasible_enclosed(
    objective: &Enclosure,
    constraints: &[Enclosure],
    holes: &[(Vec<f64>, f64)],
    b: &IntervalBox,
    cfg: &OracleConfig,
) -> FeasibleMax {
    let m = max_on_feasible_enclosed(&objective.negate(), constraints, holes, b, cfg);
    FeasibleMax { upper: -m.lower, lower: -m.upper, witness: m.witness, verdict: m.verdict }
}

/// Decides `f >= bound` (`f > bound` when `strict`) on the feasible region.
pub fn prove_lower(
    objective: &Enclosure,
    constraints: &[Enclosure],
    holes: &[(Vec<f64>, f64)],
    b: &IntervalBox,
    bound: f64,
    strict: bool,
    cfg: &OracleConfig,
) -> Verdict {
    let out = Problem::new(b.clone(), objective.clone())
        .with_constraints(constraints.to_vec())
        .with_holes(holes.to_vec())
        .solve(Goal::ProveAtLeast { bound, strict }, &cfg.limits());
    match out.status {
        Status::Proved => Verdict::Proved,
        Status::Refuted => Verdict::Refuted { witness: out.witness.unwrap_or_default() },
        Status::Exhausted(r) => Verdict::unknown(r),
        Status::Converged => Verdict::unknown("unexpected convergence status"),
    }
}

/// Decides `f <= bound` (`f < bound` when `strict`) on the feasible region.
pub fn prove_upper(
    objective: &Enclosure,
    constraints: &[Enclosure],
    holes: &[(Vec<f64>, f64)],
    b: &IntervalBox,
    bound: f64,
    strict: bool,
    cfg: &OracleConfig,
) -> Verdict {
    prove_lower(&objective.negate(), constraints, holes, b, -bound, strict, cfg)
}
