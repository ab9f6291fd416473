//! Elementary symmetric functions.
//!
//! `sigma_k(y)` is the sum of all products of `k` distinct entries of `y`, with
//! `sigma_0 = 1`. All values are obtained by expanding `prod (t + y_i)` one
//! factor at a time, which needs `O(s^2)` operations and works unchanged for
//! polynomial entries.
//!
//! A vector is componentwise nonnegative exactly when all of its elementary
//! symmetric functions are nonnegative, and componentwise positive exactly
//! when all of them are positive. [`nonneg_via_sigma`] and [`pos_via_sigma`]
//! decide these conditions through the `sigma_k` and determine every sign
//! exactly, falling back to rational arithmetic when a float value is too
//! close to zero to be trusted.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use crate::poly::{Coeff, Polynomial, Rational, DEFAULT_DEGREE_CAP};
use crate::{Error, Result};

/// `(sigma_1, ..., sigma_s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaVector<C = f64> {
    values: Vec<C>,
}

impl<C: Coeff> SigmaVector<C> {
    pub fn values(&self) -> &[C] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sigma_k`, with `sigma_0 = 1`. Panics when `k > s`.
    pub fn get(&self, k: usize) -> C {
        if k == 0 {
            C::one()
        } else {
            self.values[k - 1].clone()
        }
    }

    /// Coefficients of `prod (t + y_i)` from `t^s` down to `t^0`.
    pub fn monic_coefficients(&self) -> Vec<C> {
        let mut c = vec![C::one()];
        c.extend(self.values.iter().cloned());
        c
    }
}

/// Values of all elementary symmetric functions of `y`.
pub fn elem_sym_values<C: Coeff>(y: &[C]) -> Result<SigmaVector<C>> {
    if y.is_empty() {
        return Err(Error::EmptyInput("vector for elementary symmetric functions"));
    }
    let e = expand(y, y.len(), |a, b| a.clone() * b.clone(), |a, b| a.clone() + b.clone());
    Ok(SigmaVector { values: e.into_iter().skip(1).collect() })
}

/// `e[j] = sigma_j(y)` for `j <= top`, by multiplying in one factor at a time.
fn expand<T: Clone + Zero>(
    y: &[T],
    top: usize,
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    // e[0] = 1 is implicit
    let mut e: Vec<T> = vec![T::zero(); top + 1];
    for (i, yi) in y.iter().enumerate() {
        for j in (1..=(i + 1).min(top)).rev() {
            let prod = if j == 1 { yi.clone() } else { mul(&e[j - 1], yi) };
            e[j] = add(&e[j], &prod);
        }
    }
    e
}

/// Exact signs of `sigma_1(y), ..., sigma_s(y)` for a float vector.
pub fn sigma_signs(y: &[f64]) -> Vec<Ordering> {
    if y.contains(&0.0) {
        // zero entries drop out: sigma_k(y) = sigma_k(y'), which vanishes
        // for k beyond the length of y'
        let nonzero: Vec<f64> = y.iter().copied().filter(|v| *v != 0.0).collect();
        let mut out = sigma_signs(&nonzero);
        out.resize(y.len(), Ordering::Equal);
        return out;
    }
    let s = y.len();
    if s == 0 {
        return Vec::new();
    }
    let sig = expand(y, s, |a, b| a * b, |a, b| a + b);
    let abs: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    let mag = expand(&abs, s, |a, b| a * b, |a, b| a + b);
    let slack = 4.0 * (s as f64 + 1.0) * f64::EPSILON;
    let mut out = Vec::with_capacity(s);
    let mut exact: Option<Vec<Rational>> = None;
    for k in 1..=s {
        let bound = slack * mag[k];
        if sig[k].abs() > bound && mag[k] > 1e-280 && sig[k].is_finite() {
            out.push(if sig[k] > 0.0 { Ordering::Greater } else { Ordering::Less });
            continue;
        }
        let ex = exact.get_or_insert_with(|| {
            let r: Vec<Rational> = y
                .iter()
                .map(|v| Rational::from_float(*v).expect("finite entries"))
                .collect();
            elem_sym_values(&r).expect("nonempty").values
        });
        out.push(ex[k - 1].cmp(&Rational::zero()));
    }
    out
}

/// True iff every `sigma_k(y)` is nonnegative, equivalently every `y_i >= 0`.
pub fn nonneg_via_sigma(y: &[f64]) -> bool {
    sigma_signs(y).iter().all(|o| *o != Ordering::Less)
}

/// True iff every `sigma_k(y)` is positive, equivalently every `y_i > 0`.
pub fn pos_via_sigma(y: &[f64]) -> bool {
    sigma_signs(y).iter().all(|o| *o == Ordering::Greater)
}

/// [`nonneg_via_sigma`] for any ordered coefficient type, evaluated directly.
pub fn nonneg_via_sigma_exact<C: Coeff + PartialOrd>(y: &[C]) -> bool {
    elem_sym_values(y).is_ok_and(|s| s.values.iter().all(|v| *v >= C::zero()))
}

/// [`pos_via_sigma`] for any ordered coefficient type, evaluated directly.
pub fn pos_via_sigma_exact<C: Coeff + PartialOrd>(y: &[C]) -> bool {
    elem_sym_values(y).is_ok_and(|s| s.values.iter().all(|v| *v > C::zero()))
}

/// The polynomial `sigma_k(p_1(x), ..., p_s(x))`.
pub fn elem_sym_compose<C: Coeff>(system: &[Polynomial<C>], k: usize) -> Result<Polynomial<C>> {
    elem_sym_compose_capped(system, k, DEFAULT_DEGREE_CAP)
}

pub fn elem_sym_compose_capped<C: Coeff>(system: &[Polynomial<C>], k: usize, cap: u32) -> Result<Polynomial<C>> {
    let all = compose_upto(system, k, cap)?;
    Ok(all.into_iter().nth(k - 1).expect("k in range"))
}

/// `[sigma_1(p(x)), ..., sigma_s(p(x))]`.
pub fn elem_sym_compose_all<C: Coeff>(system: &[Polynomial<C>], cap: u32) -> Result<Vec<Polynomial<C>>> {
    compose_upto(system, system.len(), cap)
}

fn compose_upto<C: Coeff>(system: &[Polynomial<C>], k: usize, cap: u32) -> Result<Vec<Polynomial<C>>> {
    let first = system.first().ok_or(Error::EmptyInput("polynomial system"))?;
    let dim = first.dim();
    if k == 0 || k > system.len() {
        return Err(Error::InvalidArgument(alloc::format!(
            "k = {k} outside 1..={}",
            system.len()
        )));
    }
    for p in system {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
    }
    let mut e: Vec<Polynomial<C>> = vec![Polynomial::zero(dim); k + 1];
    e[0] = Polynomial::one(dim);
    for (i, p) in system.iter().enumerate() {
        let hi = (i + 1).min(k);
        for j in (1..=hi).rev() {
            let prod = e[j - 1].mul_capped(p, cap)?;
            e[j] = e[j].add(&prod)?;
        }
    }
    e.remove(0);
    Ok(e)
}
