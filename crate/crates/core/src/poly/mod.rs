//! Sparse multivariate polynomials.
//!
//! A [`Polynomial`] is a map from exponent vectors ([`Monomial`]) to nonzero
//! coefficients. Terms are kept in graded lexicographic order, so iteration,
//! equality and serialization are deterministic.
//!
//! Coefficients are `f64` by default. Any type implementing [`Coeff`] works;
//! [`Rational`] gives exact arithmetic for integer-input pipelines.

pub mod dd;
mod grid;

pub use dd::Dd;
pub use grid::TensorGrid;

use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Neg;

use num_traits::{FromPrimitive, NumAssign, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;

/// Total-degree cap applied by [`Polynomial::mul`] and [`Polynomial::pow`].
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Largest dense accumulation buffer used by multiplication.
const DENSE_LIMIT: usize = 1 << 24;

pub trait Coeff: Clone + PartialEq + fmt::Debug + NumAssign + FromPrimitive + Neg<Output = Self> {}

impl<T> Coeff for T where T: Clone + PartialEq + fmt::Debug + NumAssign + FromPrimitive + Neg<Output = T> {}

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<C = f64> {
    dim: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: C) -> Self {
        let mut p = Self::zero(dim);
        p.insert(Monomial::one(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, C::one())
    }

    /// The coordinate function `x_i` (zero-based).
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index {i} out of range for dimension {dim}");
        let mut p = Self::zero(dim);
        p.insert(Monomial::var(dim, i), C::one());
        p
    }

    /// `a . x + b`.
    pub fn linear(a: &[C], b: C) -> Self {
        let dim = a.len();
        let mut p = Self::constant(dim, b);
        for (i, ai) in a.iter().enumerate() {
            p.insert(Monomial::var(dim, i), ai.clone());
        }
        p
    }

    /// `||x - v||^2`.
    pub fn squared_distance(v: &[C]) -> Self {
        let dim = v.len();
        let two = C::one() + C::one();
        let mut p = Self::zero(dim);
        let mut c = C::zero();
        for (i, vi) in v.iter().enumerate() {
            let mut e = vec![0; dim];
            e[i] = 2;
            p.insert(Monomial(e), C::one());
            p.insert(Monomial::var(dim, i), -(two.clone() * vi.clone()));
            c += vi.clone() * vi.clone();
        }
        p.insert(Monomial::one(dim), c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs. Zero
    /// coefficients are dropped; a repeated exponent vector is an error.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.len() });
            }
            if map.insert(Monomial(e), c).is_some() {
                return Err(Error::DuplicateMonomial);
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial { dim, terms: map })
    }

    fn insert(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> C {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Per-variable maximal exponent.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.dim];
        for e in self.terms.keys() {
            for (mi, ei) in m.iter_mut().zip(&e.0) {
                *mi = (*mi).max(*ei);
            }
        }
        m
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let sum = out.terms.get(m).cloned().unwrap_or_else(C::zero) + c.clone();
            out.insert(m.clone(), sum);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn add_constant(&self, c: C) -> Self {
        let one = Monomial::one(self.dim);
        let mut out = self.clone();
        let sum = out.terms.get(&one).cloned().unwrap_or_else(C::zero) + c;
        out.insert(one, sum);
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_capped(other, DEFAULT_DEGREE_CAP)
    }

    /// Product, rejecting results whose total degree exceeds `cap`.
    pub fn mul_capped(&self, other: &Self, cap: u32) -> Result<Self> {
        self.check_dim(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.dim));
        }
        let degree = self.degree() + other.degree();
        if degree > cap {
            return Err(Error::DegreeCapExceeded { degree, cap });
        }
        if let Some(p) = self.mul_dense(other) {
            return Ok(p);
        }
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca.clone() * cb.clone();
                acc.entry(ma.mul(mb))
                    .and_modify(|c| *c += prod.clone())
                    .or_insert(prod);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Polynomial { dim: self.dim, terms: acc })
    }

    /// Multiplication through a dense exponent-box accumulator, used when the
    /// box is small compared to the number of term pairs.
    fn mul_dense(&self, other: &Self) -> Option<Self> {
        let (ma, mb) = (self.max_exponents(), other.max_exponents());
        let mut strides = Vec::with_capacity(self.dim);
        let mut size = 1usize;
        for i in (0..self.dim).rev() {
            strides.push(size);
            size = size.checked_mul((ma[i] + mb[i] + 1) as usize)?;
        }
        strides.reverse();
        let pairs = self.len().saturating_mul(other.len());
        if size > DENSE_LIMIT || size > pairs.saturating_mul(8) || pairs < 64 {
            return None;
        }
        let index = |m: &Monomial| -> usize { m.0.iter().zip(&strides).map(|(e, s)| *e as usize * s).sum() };
        let ia: Vec<(usize, &C)> = self.terms.iter().map(|(m, c)| (index(m), c)).collect();
        let ib: Vec<(usize, &C)> = other.terms.iter().map(|(m, c)| (index(m), c)).collect();
        let mut buf = vec![C::zero(); size];
        for (a, ca) in &ia {
            for (b, cb) in &ib {
                buf[a + b] += (*ca).clone() * (*cb).clone();
            }
        }
        let mut terms = BTreeMap::new();
        for (k, c) in buf.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut rest = k;
            let e = strides
                .iter()
                .map(|s| {
                    let ei = rest / s;
                    rest %= s;
                    ei as u32
                })
                .collect();
            terms.insert(Monomial(e), c);
        }
        Some(Polynomial { dim: self.dim, terms })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        self.pow_capped(e, DEFAULT_DEGREE_CAP)
    }

    /// `self^e` by repeated squaring; `pow(0)` is the constant one.
    pub fn pow_capped(&self, e: u32, cap: u32) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(self.dim));
        }
        let degree = self.degree().saturating_mul(e);
        if degree > cap {
            return Err(Error::DegreeCapExceeded { degree, cap });
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut k = e;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul_capped(&base, cap)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul_capped(&base, cap)?;
        }
        Ok(result.unwrap_or_else(|| Self::one(self.dim)))
    }

    /// Evaluates at `x`. Panics if `x.len()` differs from the dimension.
    pub fn eval(&self, x: &[C]) -> C {
        assert_eq!(x.len(), self.dim, "evaluation point has wrong dimension");
        let maxe = self.max_exponents();
        let powers: Vec<Vec<C>> = x
            .iter()
            .zip(&maxe)
            .map(|(xi, &m)| {
                let mut v = Vec::with_capacity(m as usize + 1);
                v.push(C::one());
                for k in 1..=m as usize {
                    let next = v[k - 1].clone() * xi.clone();
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= powers[i][e as usize].clone();
                }
            }
            acc += t;
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[i] -= 1;
            let k = C::from_u32(e).expect("exponent representable as coefficient");
            out.insert(Monomial(d), c.clone() * k);
        }
        out
    }

    /// Returns `p(center + scale * y)` as a polynomial in `y`.
    pub fn affine_substitute(&self, center: &[C], scale: C) -> Result<Self> {
        if center.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: center.len() });
        }
        let maxe = self.max_exponents();
        // lin[i][e][j] = coefficient of y^j in (c_i + scale*y)^e
        let lin: Vec<Vec<Vec<C>>> = center
            .iter()
            .zip(&maxe)
            .map(|(ci, &m)| {
                let mut rows: Vec<Vec<C>> = vec![vec![C::one()]];
                for e in 1..=m as usize {
                    let prev = &rows[e - 1];
                    let mut row = vec![C::zero(); e + 1];
                    for (j, pj) in prev.iter().enumerate() {
                        row[j] += pj.clone() * ci.clone();
                        row[j + 1] += pj.clone() * scale.clone();
                    }
                    rows.push(row);
                }
                rows
            })
            .collect();
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = &m.0;
            let mut j = vec![0u32; self.dim];
            loop {
                let mut t = c.clone();
                for i in 0..self.dim {
                    t *= lin[i][e[i] as usize][j[i] as usize].clone();
                }
                if !t.is_zero() {
                    acc.entry(Monomial(j.clone())).and_modify(|a| *a += t.clone()).or_insert(t);
                }
                // odometer over 0 <= j_i <= e_i
                let mut i = 0;
                while i < self.dim {
                    if j[i] < e[i] {
                        j[i] += 1;
                        break;
                    }
                    j[i] = 0;
                    i += 1;
                }
                if i == self.dim {
                    break;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Polynomial { dim: self.dim, terms: acc })
    }

    /// `p(a_1(z), ..., a_d(z))` for polynomials `a_i` in a common dimension.
    pub fn compose(&self, args: &[Polynomial<C>]) -> Result<Self> {
        if args.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: args.len() });
        }
        let dim = args.first().map_or(0, |a| a.dim);
        if let Some(a) = args.iter().find(|a| a.dim != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: a.dim });
        }
        let maxe = self.max_exponents();
        let mut powers: Vec<Vec<Polynomial<C>>> = Vec::with_capacity(self.dim);
        for (a, &m) in args.iter().zip(&maxe) {
            let mut row = vec![Polynomial::one(dim)];
            for e in 1..=m as usize {
                let next = row[e - 1].mul(a)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Polynomial::zero(dim);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(dim, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize])?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Homogeneous component of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Polynomial<D> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                terms.insert(m.clone(), d);
            }
        }
        Polynomial { dim: self.dim, terms }
    }

    /// Value at `x` accumulated in double-double arithmetic, with each
    /// coefficient converted by `coeff`, and the magnitude scale
    /// `sum |c| prod |x_i|^e_i` of the sum.
    fn eval_dd(&self, x: &[f64], coeff: impl Fn(&C) -> Dd) -> (Dd, f64) {
        assert_eq!(x.len(), self.dim, "evaluation point has wrong dimension");
        let maxe = self.max_exponents();
        let powers: Vec<Vec<Dd>> = x
            .iter()
            .zip(&maxe)
            .map(|(xi, &m)| {
                let mut v = vec![Dd::new(1.0)];
                for k in 1..=m as usize {
                    let next = v[k - 1] * Dd::new(*xi);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Dd::new(0.0);
        let mut abs = 0.0;
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= powers[i][e as usize];
                }
            }
            acc += t;
            abs += t.hi.abs();
        }
        // the computed magnitude sum is within a relative n u of the true one
        let n = (self.len() + self.degree() as usize + self.dim + 2) as f64;
        (acc, abs * (1.0 + 4.0 * n * f64::EPSILON))
    }

    /// Error bound of [`eval_dd`](Self::eval_dd) given the magnitude scale
    /// `abs` of the evaluation sum.
    fn refined_error(&self, abs: f64) -> f64 {
        let n = 2.0 * (self.degree() as f64 + self.len() as f64 + self.dim as f64) + 4.0;
        let u = f64::EPSILON * 0.5;
        8.0 * n * u * u * abs * (1.0 + 1e-10)
    }
}

impl Polynomial<f64> {
    /// `sum |c| * prod |x_i|^e_i`, the magnitude scale of the evaluation sum
    /// at `x`; rounding error of [`eval`](Self::eval) is a small multiple of
    /// this times the unit roundoff.
    pub fn eval_abs(&self, x: &[f64]) -> f64 {
        let ax: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        self.map_coeffs(|c| c.abs()).eval(&ax)
    }

    /// Value at `x` in double-double arithmetic, rounded to `f64`, together
    /// with a bound on the error of the unrounded double-double sum. Meant
    /// for points where [`eval`](Self::eval) cannot decide the sign.
    pub fn eval_refined(&self, x: &[f64]) -> (f64, f64) {
        let (v, abs) = self.eval_dd(x, |c| Dd::new(*c));
        (v.to_f64(), self.refined_error(abs))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Scales by the reciprocal of the largest coefficient magnitude. Positive
    /// scaling leaves both the `>= 0` and the `> 0` sets unchanged.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs_coeff();
        if m == 0.0 {
            return self.clone();
        }
        self.scale(&(1.0 / m))
    }
}

impl Polynomial<Rational> {
    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.to_f64().unwrap_or(f64::NAN))
    }
}

impl Polynomial<f64> {
    /// Exact conversion of every coefficient. Panics on non-finite values.
    pub fn to_rational(&self) -> Polynomial<Rational> {
        self.map_coeffs(|c| Rational::from_float(*c).expect("finite coefficient"))
    }
}

impl Polynomial<Rational> {
    /// Rounds every coefficient to the nearest double-double.
    pub fn to_dd(&self) -> Polynomial<Dd> {
        self.map_coeffs(Dd::from_rational)
    }
}

impl Polynomial<f64> {
    pub fn to_dd(&self) -> Polynomial<Dd> {
        self.map_coeffs(|c| Dd::new(*c))
    }
}

impl Polynomial<Dd> {
    /// The high parts of the coefficients. Differs from the polynomial by at
    /// most `2^-53 |hi|` per coefficient.
    pub fn hi(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.hi)
    }

    /// Coefficients rounded to `f64`.
    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.to_f64())
    }

    pub fn to_rational(&self) -> Polynomial<Rational> {
        self.map_coeffs(|c| c.to_rational().expect("finite coefficient"))
    }

    pub fn max_abs_coeff(&self) -> Dd {
        self.terms.values().fold(Dd::new(0.0), |m, c| if c.abs() > m { c.abs() } else { m })
    }

    /// Scales by the reciprocal of the largest coefficient magnitude.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs_coeff();
        if m.is_zero() {
            return self.clone();
        }
        self.map_coeffs(|c| if c.abs() == m { Dd::new(c.hi.signum()) } else { *c / m })
    }

    /// Value at `x`, accumulated in double-double arithmetic and rounded.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.eval_dd(x, |c| *c).0.to_f64()
    }

    /// Value at `x` in double-double arithmetic, rounded to `f64`, with a
    /// bound on the error of the unrounded sum.
    pub fn eval_refined(&self, x: &[f64]) -> (f64, f64) {
        let (v, abs) = self.eval_dd(x, |c| *c);
        (v.to_f64(), self.refined_error(abs))
    }
}

/// Coefficient types whose polynomials can be classified by sign with
/// rigorous error bounds: fast `f64` evaluation of a leading part first, and
/// a double-double fallback near zero.
pub trait Precision: Coeff {
    /// Bound on `|p(x) - leading(p)(x)|` as a multiple of the magnitude scale
    /// `eval_abs` of the leading part at `x`.
    const TAIL: f64;

    fn leading(p: &Polynomial<Self>) -> Cow<'_, Polynomial<f64>>;

    /// Value of `p` at `x` and a bound on its error.
    fn refined(p: &Polynomial<Self>, x: &[f64]) -> (f64, f64);
}

impl Precision for f64 {
    const TAIL: f64 = 0.0;

    fn leading(p: &Polynomial<f64>) -> Cow<'_, Polynomial<f64>> {
        Cow::Borrowed(p)
    }

    fn refined(p: &Polynomial<f64>, x: &[f64]) -> (f64, f64) {
        p.eval_refined(x)
    }
}

impl Precision for Dd {
    // |lo| <= 2^-53 |hi| for every coefficient
    const TAIL: f64 = f64::EPSILON * 0.5 * (1.0 + 1e-10);

    fn leading(p: &Polynomial<Dd>) -> Cow<'_, Polynomial<f64>> {
        Cow::Owned(p.hi())
    }

    fn refined(p: &Polynomial<Dd>, x: &[f64]) -> (f64, f64) {
        p.eval_refined(x)
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}
