//! Outward-rounded interval arithmetic.
//!
//! Directed rounding is emulated on top of round-to-nearest: each operation
//! computes the nearest result, recovers its exact error with error-free
//! transformations, and moves one ulp outward only when the result was
//! inexact in the wrong direction. Exactly representable results therefore
//! stay exact, which matters when certifying values that are exactly zero.

use alloc::vec::Vec;
use core::fmt;

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
const SPLIT_LIMIT: f64 = 6.69692879491417e299; // 2^996
const TINY_PRODUCT: f64 = 1.0020841800044864e-292; // 2^-969

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

fn split(a: f64) -> (f64, f64) {
    let c = SPLITTER * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

/// `a * b = p + e` exactly, when the operands are in range.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

fn prod_is_safe(a: f64, b: f64, p: f64) -> bool {
    a.abs() < SPLIT_LIMIT && b.abs() < SPLIT_LIMIT && p.abs() > TINY_PRODUCT && p.is_finite()
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if s == f64::INFINITY && a.is_finite() && b.is_finite() { f64::MAX } else { s };
    }
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub fn add_up(a: f64, b: f64) -> f64 {
    -add_down(-a, -b)
}

pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let (p, e) = two_prod(a, b);
    if prod_is_safe(a, b, p) {
        if e < 0.0 {
            p.next_down()
        } else {
            p
        }
    } else if p == f64::INFINITY && a.is_finite() && b.is_finite() {
        f64::MAX
    } else if p.is_nan() {
        f64::NEG_INFINITY
    } else {
        p.next_down()
    }
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    -mul_down(-a, b)
}

pub fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 && b != 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_finite() && q != 0.0 && prod_is_safe(q, b, a) {
        // r = a - q b is exact; the true quotient is q + r / b
        let (p, e) = two_prod(q, b);
        let r = (a - p) - e;
        let below = (r < 0.0) == (b > 0.0) && r != 0.0;
        if below {
            q.next_down()
        } else {
            q
        }
    } else if q == f64::INFINITY && a.is_finite() {
        f64::MAX
    } else if q.is_nan() {
        f64::NEG_INFINITY
    } else {
        q.next_down()
    }
}

pub fn div_up(a: f64, b: f64) -> f64 {
    -div_down(-a, b)
}

pub fn sqrt_down(a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    let r = libm::sqrt(a);
    let (p, e) = two_prod(r, r);
    if prod_is_safe(r, r, p) && (p > a || (p == a && e > 0.0)) {
        r.next_down()
    } else if prod_is_safe(r, r, p) {
        r
    } else {
        r.next_down().max(0.0)
    }
}

pub fn sqrt_up(a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    let r = libm::sqrt(a);
    let (p, e) = two_prod(r, r);
    if prod_is_safe(r, r, p) && (p < a || (p == a && e < 0.0)) {
        r.next_up()
    } else if prod_is_safe(r, r, p) {
        r
    } else {
        r.next_up()
    }
}

/// `a^n` rounded down, for `a >= 0`.
pub fn pow_down(a: f64, n: u32) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r = mul_down(r, a);
    }
    r
}

/// `a^n` rounded up, for `a >= 0`.
pub fn pow_up(a: f64, n: u32) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r = mul_up(r, a);
    }
    r
}

/// Closed interval `[lo, hi]` with `lo <= hi`. Infinite endpoints are allowed.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Largest absolute value.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: add_down(self.lo, o.lo), hi: add_up(self.hi, o.hi) }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: sub_down(self.lo, o.hi), hi: sub_up(self.hi, o.lo) }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        if self.is_zero() || o.is_zero() {
            return Interval::point(0.0);
        }
        let (a, b, c, d) = (self.lo, self.hi, o.lo, o.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval { lo: mul_down(a, c), hi: mul_up(b, d) };
        }
        let lo = mul_down(a, c).min(mul_down(a, d)).min(mul_down(b, c)).min(mul_down(b, d));
        let hi = mul_up(a, c).max(mul_up(a, d)).max(mul_up(b, c)).max(mul_up(b, d));
        Interval { lo, hi }
    }

    pub fn scale(&self, s: f64) -> Interval {
        self.mul(&Interval::point(s))
    }

    /// Division; the result is the entire line when `o` contains zero.
    pub fn div(&self, o: &Interval) -> Interval {
        if o.contains(0.0) {
            return Interval::ENTIRE;
        }
        let (a, b, c, d) = (self.lo, self.hi, o.lo, o.hi);
        let lo = div_down(a, c).min(div_down(a, d)).min(div_down(b, c)).min(div_down(b, d));
        let hi = div_up(a, c).max(div_up(a, d)).max(div_up(b, c)).max(div_up(b, d));
        Interval { lo, hi }
    }

    pub fn sqr(&self) -> Interval {
        self.powi(2)
    }

    /// `x^n` with the exact range of the power function (even powers are
    /// nonnegative).
    pub fn powi(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::point(1.0);
        }
        let (a, b) = (self.lo, self.hi);
        if a >= 0.0 {
            Interval { lo: pow_down(a, n), hi: pow_up(b, n) }
        } else if b <= 0.0 {
            if n % 2 == 0 {
                Interval { lo: pow_down(-b, n), hi: pow_up(-a, n) }
            } else {
                Interval { lo: -pow_up(-a, n), hi: -pow_down(-b, n) }
            }
        } else if n % 2 == 0 {
            Interval { lo: 0.0, hi: pow_up(-a, n).max(pow_up(b, n)) }
        } else {
            Interval { lo: -pow_up(-a, n), hi: pow_up(b, n) }
        }
    }

    pub fn sqrt(&self) -> Interval {
        Interval { lo: sqrt_down(self.lo.max(0.0)), hi: sqrt_up(self.hi.max(0.0)) }
    }

    fn is_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `[x^0, x^1, ..., x^n]` over an interval, each with its exact power range.
pub fn power_table(x: &Interval, n: u32) -> Vec<Interval> {
    let (a, b) = (x.lo.abs(), x.hi.abs());
    let mut out = Vec::with_capacity(n as usize + 1);
    let (mut ad, mut au, mut bd, mut bu) = (1.0f64, 1.0f64, 1.0f64, 1.0f64);
    out.push(Interval::point(1.0));
    for e in 1..=n {
        ad = mul_down(ad, a);
        au = mul_up(au, a);
        bd = mul_down(bd, b);
        bu = mul_up(bu, b);
        let even = e % 2 == 0;
        let iv = if x.lo >= 0.0 {
            Interval { lo: ad, hi: bu }
        } else if x.hi <= 0.0 {
            if even {
                Interval { lo: bd, hi: au }
            } else {
                Interval { lo: -au, hi: -bd }
            }
        } else if even {
            Interval { lo: 0.0, hi: au.max(bu) }
        } else {
            Interval { lo: -au, hi: bu }
        };
        out.push(iv);
    }
    out
}

/// Axis-aligned box.
#[derive(Clone, PartialEq, Debug)]
pub struct IntervalBox {
    sides: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(sides: Vec<Interval>) -> Self {
        IntervalBox { sides }
    }

    pub fn from_bounds(lo: &[f64], hi: &[f64]) -> Self {
        IntervalBox { sides: lo.iter().zip(hi).map(|(a, b)| Interval::new(*a, *b)).collect() }
    }

    /// `[-r, r]^d`.
    pub fn cube(dim: usize, r: f64) -> Self {
        IntervalBox { sides: alloc::vec![Interval::new(-r, r); dim] }
    }

    pub fn point(x: &[f64]) -> Self {
        IntervalBox { sides: x.iter().map(|v| Interval::point(*v)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[Interval] {
        &self.sides
    }

    pub fn side(&self, i: usize) -> Interval {
        self.sides[i]
    }

    pub fn set_side(&mut self, i: usize, v: Interval) {
        self.sides[i] = v;
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.sides.iter().map(Interval::mid).collect()
    }

    pub fn max_width(&self) -> f64 {
        self.sides.iter().fold(0.0, |m, s| m.max(s.width()))
    }

    pub fn widest(&self) -> usize {
        let mut best = 0;
        for (i, s) in self.sides.iter().enumerate() {
            if s.width() > self.sides[best].width() {
                best = i;
            }
        }
        best
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.sides.iter().zip(x).all(|(s, v)| s.contains(*v))
    }

    /// Splits at the midpoint of the widest side.
    pub fn bisect(&self) -> (IntervalBox, IntervalBox) {
        let i = self.widest();
        let s = self.sides[i];
        let m = s.mid();
        let mut a = self.clone();
        let mut b = self.clone();
        a.sides[i] = Interval { lo: s.lo, hi: m };
        b.sides[i] = Interval { lo: m, hi: s.hi };
        (a, b)
    }

    /// Enclosure of `||x - c||^2` over the box.
    pub fn dist_sq(&self, c: &[f64]) -> Interval {
        let mut acc = Interval::point(0.0);
        for (s, ci) in self.sides.iter().zip(c) {
            acc = acc.add(&s.sub(&Interval::point(*ci)).sqr());
        }
        acc
    }

    pub fn corners(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|i| if mask >> i & 1 == 1 { self.sides[i].hi } else { self.sides[i].lo })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = num_rational::BigRational;

    fn q(x: f64) -> Q {
        Q::from_float(x).unwrap()
    }

    #[test]
    fn directed_operations_bracket_exact_results() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20_000 {
            let a: f64 = rng.gen_range(-1e3..1e3) * 10f64.powi(rng.gen_range(-20..20));
            let b: f64 = rng.gen_range(-1e3..1e3) * 10f64.powi(rng.gen_range(-20..20));
            let (qa, qb) = (q(a), q(b));
            let sum = &qa + &qb;
            assert!(q(add_down(a, b)) <= sum && sum <= q(add_up(a, b)));
            let prod = &qa * &qb;
            assert!(q(mul_down(a, b)) <= prod && prod <= q(mul_up(a, b)));
            if b != 0.0 {
                let quo = &qa / &qb;
                assert!(q(div_down(a, b)) <= quo && quo <= q(div_up(a, b)));
            }
            let sq = a.abs();
            let (lo, hi) = (sqrt_down(sq), sqrt_up(sq));
            assert!(q(lo) * q(lo) <= q(sq) && q(sq) <= q(hi) * q(hi));
        }
    }

    #[test]
    fn exact_results_stay_exact() {
        assert_eq!(add_down(0.5, 0.25), 0.75);
        assert_eq!(add_up(0.5, 0.25), 0.75);
        assert_eq!(mul_down(3.0, 0.125), 0.375);
        assert_eq!(mul_up(3.0, 0.125), 0.375);
        assert_eq!(div_down(1.0, 4.0), 0.25);
        assert_eq!(div_up(1.0, 4.0), 0.25);
        assert_eq!(sqrt_up(2.25), 1.5);
        assert!(div_down(1.0, 3.0) < div_up(1.0, 3.0));
        assert_eq!(sub_down(1.0, 1.0), 0.0);
    }

    #[test]
    fn even_powers_are_nonnegative() {
        let x = Interval::new(-2.0, 1.0);
        assert_eq!(x.powi(2), Interval::new(0.0, 4.0));
        assert_eq!(x.powi(3), Interval::new(-8.0, 1.0));
        let t = power_table(&x, 4);
        assert_eq!(t[2], Interval::new(0.0, 4.0));
        assert_eq!(t[4], Interval::new(0.0, 16.0));
        assert_eq!(Interval::new(-3.0, -1.0).powi(2), Interval::new(1.0, 9.0));
    }

    #[test]
    fn interval_ops_enclose_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let mk = |rng: &mut ChaCha8Rng| {
                let a: f64 = rng.gen_range(-3.0..3.0);
                let b: f64 = rng.gen_range(-3.0..3.0);
                Interval::new(a.min(b), a.max(b))
            };
            let x = mk(&mut rng);
            let y = mk(&mut rng);
            let s: f64 = rng.gen_range(0.0..1.0);
            let t: f64 = rng.gen_range(0.0..1.0);
            let xv = x.lo + s * (x.hi - x.lo);
            let yv = y.lo + t * (y.hi - y.lo);
            let (qx, qy) = (q(xv), q(yv));
            let inside = |iv: Interval, v: Q| q(iv.lo) <= v && v <= q(iv.hi);
            assert!(inside(x.add(&y), &qx + &qy));
            assert!(inside(x.sub(&y), &qx - &qy));
            assert!(inside(x.mul(&y), &qx * &qy));
            assert!(inside(x.powi(3), &qx * &qx * &qx));
            if !y.contains(0.0) {
                assert!(inside(x.div(&y), &qx / &qy));
            }
            let _ = (qx.to_f64(), qy.to_f64());
        }
    }

    #[test]
    fn box_helpers() {
        let b = IntervalBox::from_bounds(&[0.0, -1.0], &[2.0, 1.0]);
        let (l, r) = b.bisect();
        assert_eq!(l.side(0), Interval::new(0.0, 1.0));
        assert_eq!(r.side(0), Interval::new(1.0, 2.0));
        assert_eq!(b.dist_sq(&[0.0, 0.0]), Interval::new(0.0, 5.0));
        assert_eq!(b.corners().len(), 4);
        assert!(b.contains(&[1.0, 0.0]));
    }
}
