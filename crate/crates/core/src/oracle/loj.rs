//! Search for exponents in inequalities `|g|^M <= lambda |f|`.

use alloc::format;
use alloc::vec::Vec;

use super::enclosure::Enclosure;
use super::interval::IntervalBox;
use super::{prove_lower, OracleConfig, Verdict};
use crate::poly::{Polynomial, Rational};
use crate::Result;

const LAMBDA_LOG2_MAX: i32 = 40;
const ROUNDS_PER_EXPONENT: usize = 64;
const LOJ_DEGREE_CAP: u32 = 512;

/// Compact region `{ x in domain : c_j(x) >= 0 }` with the open balls
/// `holes` removed.
#[derive(Clone, Debug)]
pub struct LojRegion {
    pub domain: IntervalBox,
    pub constraints: Vec<Enclosure>,
    pub holes: Vec<(Vec<f64>, f64)>,
}

/// How the inequality is certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LojForm {
    /// `lambda^2 f^2 - g^(2M) >= 0`, valid for any signs of `f` and `g`.
    Squared,
    /// `lambda f - g^M >= 0`, for callers that know `f, g >= 0` on the region.
    Linear,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LojResult {
    pub m: u32,
    pub lambda: f64,
    pub verdict: Verdict,
}

/// Smallest `M <= m_max` with a certified `lambda` (a power of two) such that
/// `|g|^M <= lambda |f|` on the region.
pub fn lojasiewicz_search(f: &Polynomial, g: &Polynomial, region: &LojRegion, m_max: u32, cfg: &OracleConfig) -> Result<LojResult> {
    lojasiewicz_search_exact(&f.to_rational(), &g.to_rational(), LojForm::Squared, region, m_max, cfg)
}

pub fn lojasiewicz_search_exact(
    f: &Polynomial<Rational>,
    g: &Polynomial<Rational>,
    form: LojForm,
    region: &LojRegion,
    m_max: u32,
    cfg: &OracleConfig,
) -> Result<LojResult> {
    let f2 = match form {
        LojForm::Squared => f.mul_capped(f, LOJ_DEGREE_CAP)?,
        LojForm::Linear => f.clone(),
    };
    let gf = g.to_f64();
    let ff = f.to_f64();
    let mut last_reason = alloc::string::String::from("no exponent tried");
    for m in 1..=m_max {
        let gm = match form {
            LojForm::Squared => g.pow_capped(2 * m, LOJ_DEGREE_CAP)?,
            LojForm::Linear => g.pow_capped(m, LOJ_DEGREE_CAP)?,
        };
        let mut log2 = 0i32;
        let mut rounds = 0;
        loop {
            rounds += 1;
            let lambda = Rational::from_float(libm::ldexp(1.0, log2)).expect("finite");
            let coeff = match form {
                LojForm::Squared => &lambda * &lambda,
                LojForm::Linear => lambda.clone(),
            };
            let h = f2.scale(&coeff).sub(&gm)?;
            let v = prove_lower(&Enclosure::from_rational(&h), &region.constraints, &region.holes, &region.domain, 0.0, false, cfg);
            match v {
                Verdict::Proved => {
                    return Ok(LojResult { m, lambda: libm::ldexp(1.0, log2), verdict: Verdict::Proved });
                }
                Verdict::Refuted { witness } => {
                    // lambda needed at the witness
                    let fv = ff.eval(&witness).abs();
                    let gv = gf.eval(&witness).abs();
                    let need = libm::pow(gv, m as f64) / fv;
                    if !need.is_finite() || fv == 0.0 {
                        last_reason = format!("M = {m} fails where f vanishes at {witness:?}");
                        break;
                    }
                    let next = libm::ceil(libm::log2(need.max(1.0))) as i32;
                    log2 = next.max(log2 + 1);
                }
                Verdict::Unknown { reason } => {
                    last_reason = format!("M = {m}: {reason}");
                    log2 += 1;
                }
            }
            if log2 > LAMBDA_LOG2_MAX || rounds >= ROUNDS_PER_EXPONENT {
                last_reason = format!("M = {m}: no certified lambda up to 2^{LAMBDA_LOG2_MAX} ({last_reason})");
                break;
            }
        }
    }
    Ok(LojResult { m: m_max, lambda: f64::INFINITY, verdict: Verdict::Unknown { reason: last_reason } })
}
