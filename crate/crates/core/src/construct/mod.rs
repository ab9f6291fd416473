//! Parameter searches and assembly of the reduced systems.
//!
//! Both reductions start from a system whose region `P` is non-empty and
//! bounded. The system is first moved into a frame in which `P` lies in the
//! open unit ball; every parameter and every output polynomial refers to that
//! frame, and the [`Reduction`] carries it so that callers can map ambient
//! points in.
//!
//! * [`reduce_n_plus_1`] returns `1 - g, sigma_{s-n+1}, ..., sigma_s`.
//! * [`reduce_n`] needs the finite set `X` of points where `n` constraints
//!   vanish and returns `q, sigma_{s-n+2}, ..., sigma_s` with
//!   `q = sigma_{s-n+1} - g^l h^m`.

mod audit;
mod build;
mod params;
mod pipeline;

#[cfg(test)]
mod tests;

use alloc::string::String;
use alloc::vec::Vec;

use crate::oracle::{OracleConfig, Verdict};
use crate::poly::Dd;
use crate::system::System;

pub use audit::{audit, AuditCheck, AuditReport};
pub use build::{build_g, build_g_exact, build_h, g_enclosure, build_h_exact, build_q, lift, linear_substitute, snap_vertex};
pub use params::{
    disjointness_bound, find_alpha, find_eps, find_gamma, find_k, find_l, find_lambda, find_loj_params, find_m_eps0, find_mu,
    find_rho, LInputs, MEps0,
};
pub use pipeline::{balance, choose_frame, prepare, reduce_n, reduce_n_plus_1, Prepared};

/// How a parameter value was established.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    /// The query that was answered, in words.
    pub query: String,
    pub verdict: Verdict,
}

impl Record {
    pub fn proved(query: impl Into<String>) -> Self {
        Record { query: query.into(), verdict: Verdict::Proved }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certified<T> {
    pub value: T,
    pub record: Record,
}

impl<T> Certified<T> {
    pub fn new(value: T, record: Record) -> Self {
        Certified { value, record }
    }
}

/// Parameters of the `q` polynomial, needed only by [`reduce_n`].
#[derive(Clone, Debug, PartialEq)]
pub struct QParameters {
    pub rho: Certified<f64>,
    pub mu: Certified<f64>,
    /// Exponent of `h`.
    pub m: Certified<u32>,
    pub tau: Certified<f64>,
    pub alpha: Certified<f64>,
    pub gamma: Certified<f64>,
    /// Exponent of `g`.
    pub l: Certified<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet {
    /// Exponent `M` of the weight `(1 + |x|^2)^M`.
    pub weight: Certified<u32>,
    pub eps0: Certified<f64>,
    pub eps: Certified<f64>,
    pub lambda: Certified<f64>,
    pub k: Certified<u32>,
    pub q: Option<QParameters>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `n + 1` output polynomials.
    NPlus1,
    /// `n` output polynomials; needs finite `X`.
    N,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub oracle: OracleConfig,
    /// Total degree cap for every polynomial built by the pipeline.
    pub degree_cap: u32,
    /// Largest weight exponent `M` tried.
    pub m_max: u32,
    /// Number of halvings of `eps0`, starting from 1.
    pub eps0_halvings: u32,
    /// Number of halvings of `eps`, starting from `eps0` (or `eps0 / 2`).
    pub eps_halvings: u32,
    /// Number of halvings of `rho`, starting from 1.
    pub rho_halvings: u32,
    /// Largest exponent tried by the Lojasiewicz search at each point of `X`.
    pub loj_m_max: u32,
    /// `mu` used when the diameter of `P` is below the oracle tolerance.
    pub mu_min: f64,
    /// Largest `log2(lambda)` tried.
    pub lambda_log2_max: i32,
    /// Active-set tolerance used to snap points of `X` onto vertices.
    pub snap_tol: f64,
    /// Radius, relative to `rho`, of the ball around a curved vertex that the
    /// Lojasiewicz certificate leaves out.
    pub loj_hole: f64,
    /// Upper limit on `eps`; the searches start at the smaller of this and
    /// the value allowed by `eps0`.
    pub eps_cap: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            oracle: OracleConfig::default(),
            degree_cap: 1024,
            m_max: 4,
            eps0_halvings: 10,
            eps_halvings: 20,
            rho_halvings: 30,
            loj_m_max: 8,
            mu_min: 1.0,
            lambda_log2_max: 40,
            snap_tol: 1e-6,
            loj_hole: 1e-6,
            eps_cap: f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    /// The system as given, in ambient coordinates.
    pub input: System,
    /// The input rewritten in the working frame, each polynomial scaled by a
    /// power of two.
    pub local: System,
    pub mode: Mode,
    /// Output polynomials, normalized, in the working frame. Coefficients
    /// are double-double: the outputs are high-degree polynomials whose
    /// values away from `P` are small differences of large terms.
    pub output: System<Dd>,
    pub n: usize,
    /// Points of `X` in ambient coordinates (mode `N` only).
    pub x: Vec<Vec<f64>>,
    pub params: ParameterSet,
    /// Certified radius of a ball around the origin of the working frame
    /// containing `P(M, eps0)`.
    pub radius: f64,
    pub audit: AuditReport,
}
