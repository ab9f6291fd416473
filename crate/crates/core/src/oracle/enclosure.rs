//! Range enclosures of polynomials over boxes.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive};

use super::interval::{power_table, Interval, IntervalBox};
use crate::poly::{Polynomial, Rational};

/// Polynomial with interval coefficients, used to carry exact data (such as
/// rational coefficients) into interval evaluation without losing soundness.
#[derive(Clone, Debug)]
pub struct IntervalPoly {
    dim: usize,
    terms: Vec<(Vec<u32>, Interval)>,
    max_exp: Vec<u32>,
}

/// Tightest float interval around a rational number.
pub fn rational_interval(c: &Rational) -> Interval {
    let f = c.to_f64().unwrap_or(f64::NAN);
    if !f.is_finite() {
        return if c.is_negative() {
            Interval { lo: f64::NEG_INFINITY, hi: -f64::MAX }
        } else {
            Interval { lo: f64::MAX, hi: f64::INFINITY }
        };
    }
    match Rational::from_float(f) {
        Some(r) if r == *c => Interval::point(f),
        Some(r) if r < *c => Interval { lo: f, hi: f.next_up() },
        _ => Interval { lo: f.next_down(), hi: f },
    }
}

impl IntervalPoly {
    fn build(dim: usize, terms: Vec<(Vec<u32>, Interval)>) -> Self {
        let mut max_exp = vec![0; dim];
        for (e, _) in &terms {
            for (m, v) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(*v);
            }
        }
        IntervalPoly { dim, terms, max_exp }
    }

    pub fn from_poly(p: &Polynomial<f64>) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), Interval::point(*c)))
            .collect();
        Self::build(p.dim(), terms)
    }

    pub fn from_rational(p: &Polynomial<Rational>) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), rational_interval(c)))
            .collect();
        Self::build(p.dim(), terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> &[(Vec<u32>, Interval)] {
        &self.terms
    }

    pub fn negate(&self) -> Self {
        Self::build(self.dim, self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect())
    }

    pub fn derivative(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut d = e.clone();
                d[i] -= 1;
                (d, c.scale(e[i] as f64))
            })
            .collect();
        Self::build(self.dim, terms)
    }

    /// Natural interval extension over `b`, with exact ranges of powers.
    pub fn eval(&self, b: &IntervalBox) -> Interval {
        assert_eq!(b.dim(), self.dim, "box has wrong dimension");
        if self.terms.is_empty() {
            return Interval::point(0.0);
        }
        let tables: Vec<Vec<Interval>> = b
            .sides()
            .iter()
            .zip(&self.max_exp)
            .map(|(s, &m)| power_table(s, m))
            .collect();
        let mut acc = Interval::point(0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    t = t.mul(&tables[i][ei as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Certified value at a point.
    pub fn eval_point(&self, x: &[f64]) -> Interval {
        self.eval(&IntervalBox::point(x))
    }

    /// Coefficients as linear form `(a, b)` with value `a . x + b`, when the
    /// degree is at most one.
    pub fn as_linear(&self) -> Option<(Vec<Interval>, Interval)> {
        if self.degree() > 1 {
            return None;
        }
        let mut a = vec![Interval::point(0.0); self.dim];
        let mut b = Interval::point(0.0);
        for (e, c) in &self.terms {
            match e.iter().position(|v| *v == 1) {
                Some(i) => a[i] = *c,
                None => b = *c,
            }
        }
        Some((a, b))
    }
}

/// An interval polynomial with its gradient, evaluated by intersecting the
/// natural extension with the mean-value form.
///
/// A polynomial known to be `c * sum_i u_i^e` with low-degree `u_i` can carry
/// that structure; ranges and gradients are then taken from it, which is far
/// tighter and cheaper than working with the expanded form.
#[derive(Clone, Debug)]
pub struct Enclosure {
    f: IntervalPoly,
    grad: Vec<IntervalPoly>,
    mean: Option<PowerMean>,
}

#[derive(Clone, Debug)]
struct PowerMean {
    inner: Vec<Enclosure>,
    exp: u32,
    coef: Interval,
}

impl PowerMean {
    fn range(&self, b: &IntervalBox) -> Interval {
        let sum = self.inner.iter().fold(Interval::point(0.0), |acc, u| acc.add(&u.range(b).powi(self.exp)));
        self.coef.mul(&sum)
    }

    fn gradient(&self, b: &IntervalBox) -> Vec<Interval> {
        let mut out = vec![Interval::point(0.0); b.dim()];
        let e = Interval::point(self.exp as f64);
        for u in &self.inner {
            let outer = e.mul(&u.range(b).powi(self.exp - 1));
            for (o, g) in out.iter_mut().zip(u.gradient(b)) {
                *o = o.add(&outer.mul(&g));
            }
        }
        out.iter().map(|g| self.coef.mul(g)).collect()
    }
}

impl Enclosure {
    pub fn new(f: IntervalPoly) -> Self {
        let grad = (0..f.dim()).map(|i| f.derivative(i)).collect();
        Enclosure { f, grad, mean: None }
    }

    pub fn from_poly(p: &Polynomial<f64>) -> Self {
        Self::new(IntervalPoly::from_poly(p))
    }

    pub fn from_rational(p: &Polynomial<Rational>) -> Self {
        Self::new(IntervalPoly::from_rational(p))
    }

    /// Enclosure of `expanded`, which the caller guarantees equals
    /// `coef * sum_i inner_i^exp` for every `coef` in the interval.
    pub fn power_mean(expanded: &Polynomial<Rational>, inner: &[Polynomial<Rational>], exp: u32, coef: Interval) -> Self {
        assert!(exp >= 1, "exponent must be positive");
        Enclosure {
            f: IntervalPoly::from_rational(expanded),
            grad: Vec::new(),
            mean: Some(PowerMean { inner: inner.iter().map(Enclosure::from_rational).collect(), exp, coef }),
        }
    }

    pub fn poly(&self) -> &IntervalPoly {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn negate(&self) -> Self {
        Enclosure {
            f: self.f.negate(),
            grad: self.grad.iter().map(IntervalPoly::negate).collect(),
            mean: self.mean.as_ref().map(|m| PowerMean { coef: m.coef.neg(), ..m.clone() }),
        }
    }

    /// Range over `b` without the mean-value refinement.
    pub fn natural(&self, b: &IntervalBox) -> Interval {
        match &self.mean {
            Some(m) => m.range(b),
            None => self.f.eval(b),
        }
    }

    pub fn gradient(&self, b: &IntervalBox) -> Vec<Interval> {
        match &self.mean {
            Some(m) => m.gradient(b),
            None => self.grad.iter().map(|g| g.eval(b)).collect(),
        }
    }

    pub fn eval_point(&self, x: &[f64]) -> Interval {
        match &self.mean {
            Some(m) => m.range(&IntervalBox::point(x)),
            None => self.f.eval_point(x),
        }
    }

    /// Range enclosure over `b`.
    pub fn range(&self, b: &IntervalBox) -> Interval {
        let natural = self.natural(b);
        if self.f.degree() <= 1 || b.sides().iter().all(Interval::is_point) {
            return natural;
        }
        let grad = self.gradient(b);
        self.range_with_gradient(b, &grad, natural)
    }

    pub fn range_with_gradient(&self, b: &IntervalBox, grad: &[Interval], natural: Interval) -> Interval {
        let m = b.midpoint();
        let mut mv = self.eval_point(&m);
        for (i, g) in grad.iter().enumerate() {
            let s = b.side(i);
            if s.is_point() {
                continue;
            }
            let dx = s.sub(&Interval::point(m[i]));
            mv = mv.add(&g.mul(&dx));
        }
        natural.intersect(&mv).unwrap_or(natural)
    }
}
