//! Independent re-verification of a finished parameter set.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::build::{g_enclosure, lift};
use super::params::{disjointness_bound, l_conditions, LInputs};
use super::{Mode, ParameterSet, PipelineConfig};
use crate::elemsym::elem_sym_compose_capped;
use crate::oracle::interval::{add_down, div_down, mul_down, pow_down};
use crate::oracle::{prove_lower, prove_upper, weighted_system, Enclosure, IntervalBox, Verdict};
use crate::poly::{Polynomial, Rational};
use crate::system::System;

#[derive(Clone, Debug, PartialEq)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn all_passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(AuditCheck { name: name.into(), passed, detail: detail.into() });
    }

    fn push_verdict(&mut self, name: &str, v: Verdict) {
        let detail = match &v {
            Verdict::Proved => String::from("proved"),
            Verdict::Refuted { witness } => format!("refuted at {witness:?}"),
            Verdict::Unknown { reason } => format!("undecided: {reason}"),
        };
        self.push(name, v.is_proved(), detail);
    }
}

fn all_proved(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
    for v in vs {
        if !v.is_proved() {
            return v;
        }
    }
    Verdict::Proved
}

/// Re-checks every inequality the parameters must satisfy. `local` is the
/// input in the working frame, `x` the points of `X` there, and `radius` the
/// certified radius of `P(M, eps0)`.
pub fn audit(
    local: &System,
    mode: Mode,
    n: usize,
    x: &[Vec<f64>],
    params: &ParameterSet,
    radius: f64,
    cfg: &PipelineConfig,
) -> AuditReport {
    let mut rep = AuditReport::default();
    let polys = local.polys();
    let s = polys.len();
    let d = local.dim();
    let oc = &cfg.oracle;
    let domain = IntervalBox::cube(d, 1.0);
    let cons: Vec<Enclosure> = polys.iter().map(Enclosure::from_poly).collect();
    let m = params.weight.value;
    let (eps, eps0, lambda, k) = (params.eps.value, params.eps0.value, params.lambda.value, params.k.value);
    let factor = if mode == Mode::N { 2.0 } else { 1.0 };

    rep.push(
        "eps range",
        eps > 0.0 && factor * eps <= eps0,
        format!("eps = {eps}, eps0 = {eps0}, factor {factor}"),
    );

    match weighted_system(polys, m) {
        Ok(w) => {
            let v = all_proved(w.iter().map(|p| prove_upper(&Enclosure::from_poly(p), &cons, &[], &domain, lambda, false, oc)));
            rep.push_verdict("lambda bounds every weighted constraint on P", v);

            let relaxed: Vec<Enclosure> = w.iter().map(|p| Enclosure::from_poly(&p.add_constant(factor * eps))).collect();
            let exact: Vec<Polynomial<Rational>> = polys.iter().map(|p| p.to_rational()).collect();
            let big = IntervalBox::cube(d, radius);
            let v = all_proved((1..=s - n.min(s)).map(|i| match elem_sym_compose_capped(&exact, i, cfg.degree_cap) {
                Ok(sig) => prove_lower(&Enclosure::from_rational(&sig), &relaxed, &[], &big, 0.0, true, oc),
                Err(e) => Verdict::Unknown { reason: format!("{e}") },
            }));
            rep.push_verdict("sigma_1..sigma_{s-n} positive on the relaxation", v);
        }
        Err(e) => rep.push("lambda bounds every weighted constraint on P", false, format!("{e}")),
    }

    let base = add_down(1.0, div_down(eps, lambda));
    let lhs = pow_down(base, 2 * k);
    rep.push("s <= (1 + eps/lambda)^(2k)", lhs >= s as f64, format!("(1 + eps/lambda)^(2k) >= {lhs}, s = {s}"));

    let Some(q) = &params.q else {
        return rep;
    };
    if mode != Mode::N {
        rep.push("mode", false, "parameters of q given for mode n + 1");
        return rep;
    }
    let (rho, mu, lm, tau, alpha, gamma, l) =
        (q.rho.value, q.mu.value, q.m.value, q.tau.value, q.alpha.value, q.gamma.value, q.l.value);

    // mu >= diam(P)
    let v = (|| -> crate::Result<Verdict> {
        let mut dcons = Vec::new();
        for off in [0, d] {
            for p in polys {
                dcons.push(Enclosure::from_poly(&lift(p, 2 * d, off)?));
            }
        }
        let mut obj = Polynomial::zero(2 * d);
        for i in 0..d {
            let diff = Polynomial::var(2 * d, i).sub(&Polynomial::var(2 * d, d + i))?;
            obj = obj.add(&diff.mul(&diff)?)?;
        }
        let sides: Vec<_> = domain.sides().iter().chain(domain.sides()).copied().collect();
        Ok(prove_upper(&Enclosure::from_poly(&obj), &dcons, &[], &IntervalBox::new(sides), mul_down(mu, mu), false, oc))
    })()
    .unwrap_or_else(|e| Verdict::Unknown { reason: format!("{e}") });
    rep.push_verdict("mu >= diam(P)", v);

    match g_enclosure(polys, m, lambda, k, cfg.degree_cap) {
        Ok(ge) => {
            let v = prove_upper(&ge, &cons, &[], &domain, alpha, false, oc);
            rep.push("alpha < 1", alpha < 1.0, format!("alpha = {alpha}"));
            rep.push_verdict("max of g over P <= alpha", v);

            let sep = x.len() < 2 || rho < disjointness_bound(x);
            rep.push("balls around X are disjoint", sep, format!("rho = {rho}"));
            let v = all_proved(x.iter().map(|v| {
                let vr: Vec<Rational> = v.iter().map(|c| Rational::from_float(*c).unwrap()).collect();
                let r = Rational::from_float(rho).unwrap();
                let ball = Polynomial::squared_distance(&vr).neg().add_constant(&r * &r);
                let lo: Vec<f64> = v.iter().map(|c| c - 2.0 * rho).collect();
                let hi: Vec<f64> = v.iter().map(|c| c + 2.0 * rho).collect();
                prove_upper(&ge, &[Enclosure::from_rational(&ball)], &[], &IntervalBox::from_bounds(&lo, &hi), 1.0, false, oc)
            }));
            rep.push_verdict("g <= 1 on the balls around X", v);
        }
        Err(e) => rep.push("max of g over P <= alpha", false, format!("{e}")),
    }

    let exact: Vec<Polynomial<Rational>> = polys.iter().map(|p| p.to_rational()).collect();
    let v = match elem_sym_compose_capped(&exact, s - n + 1, cfg.degree_cap) {
        Ok(sig) => {
            let holes: Vec<(Vec<f64>, f64)> = x.iter().map(|v| (v.clone(), rho)).collect();
            prove_lower(&Enclosure::from_rational(&sig), &cons, &holes, &domain, gamma, false, oc)
        }
        Err(e) => Verdict::Unknown { reason: format!("{e}") },
    };
    rep.push("gamma > 0", gamma > 0.0, format!("gamma = {gamma}"));
    rep.push_verdict("sigma_{s-n+1} >= gamma on P away from X", v);

    let inp = LInputs {
        tau,
        alpha,
        gamma,
        lambda,
        eps,
        k,
        rho,
        mu,
        m: lm,
        s,
        n,
        card_x: x.len(),
        l_max: l,
    };
    let [c56, c57, c58] = l_conditions(&inp, l);
    rep.push("tau alpha^l < 1", c56, format!("tau = {tau}, alpha = {alpha}, l = {l}"));
    rep.push("alpha^l < gamma", c57, format!("alpha = {alpha}, gamma = {gamma}, l = {l}"));
    rep.push("growth condition on l", c58, format!("l = {l}, k = {k}, m = {lm}, |X| = {}", x.len()));
    rep
}
