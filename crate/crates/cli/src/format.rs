//! JSON file formats.
//!
//! Polynomials are `{"dim": d, "terms": [{"e": [...], "c": ...}]}` with terms in
//! graded lexicographic order. A coefficient may be a number or a decimal
//! string. Output polynomials carry double-double coefficients; one whose low
//! part is nonzero is written as the exact decimal expansion of its value.
//! Serializing a parsed canonical file reproduces it byte for byte.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use semialg_core::construct::{Certified, Mode, ParameterSet, Reduction};
use semialg_core::oracle::Verdict;
use semialg_core::verify::{EquivalenceReport, GridSpec, HausdorffEstimate};
use semialg_core::{AffineFrame, Dd, Polynomial, System};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermFile {
    pub e: Vec<u32>,
    pub c: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyFile {
    pub dim: usize,
    pub terms: Vec<TermFile>,
}

fn coefficient(c: &Value) -> Result<f64> {
    let v = match c {
        Value::Number(n) => n.as_f64().context("coefficient out of range")?,
        Value::String(s) => s.trim().parse::<f64>().with_context(|| format!("bad decimal coefficient {s:?}"))?,
        other => bail!("coefficient must be a number or a decimal string, got {other}"),
    };
    if !v.is_finite() {
        bail!("coefficient {c} is not finite");
    }
    Ok(v)
}

fn dd_coefficient(c: &Value) -> Result<Dd> {
    let v = match c {
        Value::Number(n) => Dd::new(n.as_f64().context("coefficient out of range")?),
        Value::String(s) => Dd::from_decimal_str(s).with_context(|| format!("bad decimal coefficient {s:?}"))?,
        other => bail!("coefficient must be a number or a decimal string, got {other}"),
    };
    if !v.is_finite() {
        bail!("coefficient {c} is not finite");
    }
    Ok(v)
}

fn dd_value(c: &Dd) -> Value {
    if c.lo == 0.0 {
        Value::from(c.hi)
    } else {
        Value::from(c.to_decimal_string())
    }
}

impl PolyFile {
    pub fn from_dd(p: &Polynomial<Dd>) -> Self {
        let terms = p.terms().map(|(m, c)| TermFile { e: m.exponents().to_vec(), c: dd_value(c) }).collect();
        PolyFile { dim: p.dim(), terms }
    }

    pub fn to_dd(&self) -> Result<Polynomial<Dd>> {
        let terms = self.terms.iter().map(|t| Ok((t.e.clone(), dd_coefficient(&t.c)?))).collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_terms(self.dim, terms)?)
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        // terms() runs in ascending graded lexicographic order
        let terms = p.terms().map(|(m, c)| TermFile { e: m.exponents().to_vec(), c: Value::from(*c) }).collect();
        PolyFile { dim: p.dim(), terms }
    }

    pub fn to_poly(&self) -> Result<Polynomial> {
        let terms = self.terms.iter().map(|t| Ok((t.e.clone(), coefficient(&t.c)?))).collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_terms(self.dim, terms)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FrameFile {
    pub center: Vec<f64>,
    pub scale: f64,
}

impl From<&AffineFrame> for FrameFile {
    fn from(f: &AffineFrame) -> Self {
        FrameFile { center: f.center.clone(), scale: f.scale }
    }
}

impl FrameFile {
    pub fn to_frame(&self) -> Result<AffineFrame> {
        if !(self.scale > 0.0 && self.scale.is_finite()) || self.center.iter().any(|c| !c.is_finite()) {
            bail!("frame needs a positive finite scale and a finite center");
        }
        Ok(AffineFrame { center: self.center.clone(), scale: self.scale })
    }
}

/// A system of polynomials, optionally written in a frame `x = center + scale y`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SystemFile {
    pub polys: Vec<PolyFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameFile>,
}

impl SystemFile {
    pub fn from_system(s: &System) -> Self {
        let frame = (!s.frame().is_identity()).then(|| FrameFile::from(s.frame()));
        SystemFile { polys: s.polys().iter().map(PolyFile::from_poly).collect(), frame }
    }

    pub fn to_system(&self) -> Result<System> {
        self.build(PolyFile::to_poly)
    }

    pub fn from_dd_system(s: &System<Dd>) -> Self {
        let frame = (!s.frame().is_identity()).then(|| FrameFile::from(s.frame()));
        SystemFile { polys: s.polys().iter().map(PolyFile::from_dd).collect(), frame }
    }

    pub fn to_dd_system(&self) -> Result<System<Dd>> {
        self.build(PolyFile::to_dd)
    }

    fn build<C: semialg_core::poly::Coeff>(&self, parse: impl Fn(&PolyFile) -> Result<Polynomial<C>>) -> Result<System<C>> {
        if self.polys.is_empty() {
            bail!("system has no polynomials");
        }
        let polys = self.polys.iter().map(parse).collect::<Result<Vec<_>>>()?;
        Ok(match &self.frame {
            Some(f) => System::with_frame(polys, f.to_frame()?)?,
            None => System::new(polys)?,
        })
    }
}

/// A point set: `{"points": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PointsFile {
    pub points: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum VerdictFile {
    Proved,
    Refuted { witness: Vec<f64> },
    Unknown { reason: String },
}

impl From<&Verdict> for VerdictFile {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Proved => VerdictFile::Proved,
            Verdict::Refuted { witness } => VerdictFile::Refuted { witness: witness.clone() },
            Verdict::Unknown { reason } => VerdictFile::Unknown { reason: reason.clone() },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ParamFile {
    pub name: String,
    pub value: f64,
    pub query: String,
    pub verdict: VerdictFile,
}

fn param<T: Copy + Into<f64>>(name: &str, c: &Certified<T>) -> ParamFile {
    ParamFile { name: name.into(), value: c.value.into(), query: c.record.query.clone(), verdict: (&c.record.verdict).into() }
}

pub fn params_file(p: &ParameterSet) -> Vec<ParamFile> {
    let mut out = vec![
        param("M", &p.weight),
        param("eps0", &p.eps0),
        param("eps", &p.eps),
        param("lambda", &p.lambda),
        param("k", &p.k),
    ];
    if let Some(q) = &p.q {
        out.extend([
            param("rho", &q.rho),
            param("mu", &q.mu),
            param("m", &q.m),
            param("tau", &q.tau),
            param("alpha", &q.alpha),
            param("gamma", &q.gamma),
            param("l", &q.l),
        ]);
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AuditFile {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridFile {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub resolution: Vec<usize>,
}

impl From<&GridSpec> for GridFile {
    fn from(g: &GridSpec) -> Self {
        GridFile { lo: g.lo.clone(), hi: g.hi.clone(), resolution: g.resolution.clone() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EquivalenceFile {
    pub passed: bool,
    pub grid: GridFile,
    pub tol: f64,
    pub points: usize,
    pub band: usize,
    pub closed_agree: usize,
    pub closed_disagree: usize,
    pub open_agree: usize,
    pub open_disagree: usize,
    pub max_violation: f64,
    pub examples: Vec<Vec<f64>>,
}

impl From<&EquivalenceReport> for EquivalenceFile {
    fn from(r: &EquivalenceReport) -> Self {
        EquivalenceFile {
            passed: r.passed(),
            grid: (&r.spec).into(),
            tol: r.tol,
            points: r.points,
            band: r.band,
            closed_agree: r.closed_agree,
            closed_disagree: r.closed_disagree,
            open_agree: r.open_agree,
            open_disagree: r.open_disagree,
            max_violation: r.max_violation,
            examples: r.examples.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HausdorffFile {
    pub lower: f64,
    pub upper: f64,
    pub grid: GridFile,
    pub a_points: usize,
    pub b_points: usize,
    /// The assumption under which `upper` is a true bound.
    pub assumption: String,
}

impl From<&HausdorffEstimate> for HausdorffFile {
    fn from(h: &HausdorffEstimate) -> Self {
        HausdorffFile {
            lower: h.lower,
            upper: h.upper,
            grid: (&h.spec).into(),
            a_points: h.a_points,
            b_points: h.b_points,
            assumption: "every point of each set lies within half a cell diameter of one of its member grid points".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReductionFile {
    pub input: SystemFile,
    pub mode: String,
    pub n: usize,
    #[serde(default)]
    pub x: Vec<Vec<f64>>,
    pub radius: f64,
    pub parameters: Vec<ParamFile>,
    /// Output polynomials, each scaled so its largest coefficient has
    /// magnitude 1, in the working frame.
    pub output: SystemFile,
    pub audit: Vec<AuditFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<EquivalenceFile>,
}

pub fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::N => "n",
        Mode::NPlus1 => "n+1",
    }
}

impl ReductionFile {
    pub fn new(r: &Reduction, verification: Option<&EquivalenceReport>) -> Self {
        ReductionFile {
            input: SystemFile::from_system(&r.input),
            mode: mode_name(r.mode).into(),
            n: r.n,
            x: r.x.clone(),
            radius: r.radius,
            parameters: params_file(&r.params),
            output: SystemFile::from_dd_system(&r.output),
            audit: r.audit.checks.iter().map(|c| AuditFile { name: c.name.clone(), passed: c.passed, detail: c.detail.clone() }).collect(),
            verification: verification.map(Into::into),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ApproxFile {
    pub q: PolyFile,
    pub frame: FrameFile,
    pub eps: f64,
    pub eps_used: f64,
    pub weight: u32,
    pub lambda: f64,
    pub k: u32,
    pub hausdorff: HausdorffFile,
    /// `(relaxation, Hausdorff upper bound)` for every attempt.
    pub history: Vec<(f64, f64)>,
    #[serde(default)]
    pub vanish_at: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NxFile {
    pub n: usize,
    pub finite: bool,
    pub points: Vec<Vec<f64>>,
    pub verdict: VerdictFile,
    pub search_radius: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundedFile {
    pub m: u32,
    pub eps: f64,
    pub verdict: VerdictFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}
