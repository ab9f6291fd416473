use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::float::Float;

use super::Polynomial;

/// Cartesian product grid. Points are ordered row-major with the last axis
/// varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorGrid {
    axes: Vec<Vec<f64>>,
}

impl TensorGrid {
    pub fn new(axes: Vec<Vec<f64>>) -> Self {
        TensorGrid { axes }
    }

    /// `n[i]` equispaced nodes from `lo[i]` to `hi[i]` inclusive.
    pub fn uniform(lo: &[f64], hi: &[f64], n: &[usize]) -> Self {
        let axes = lo
            .iter()
            .zip(hi)
            .zip(n)
            .map(|((&a, &b), &k)| {
                if k <= 1 {
                    return vec![0.5 * (a + b)];
                }
                let h = (b - a) / (k - 1) as f64;
                (0..k).map(|j| if j + 1 == k { b } else { a + h * j as f64 }).collect()
            })
            .collect();
        TensorGrid { axes }
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, mut index: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        for i in (0..self.dim()).rev() {
            let n = self.axes[i].len();
            x[i] = self.axes[i][index % n];
            index /= n;
        }
        x
    }

    /// Applies `x -> (x - center) / scale` to every axis.
    pub fn to_local(&self, center: &[f64], scale: f64) -> Self {
        TensorGrid {
            axes: self
                .axes
                .iter()
                .zip(center)
                .map(|(a, c)| a.iter().map(|v| (v - c) / scale).collect())
                .collect(),
        }
    }

    /// Values of `p` at every grid point, contracting one variable at a time.
    pub fn eval(&self, p: &Polynomial<f64>) -> Vec<f64> {
        assert_eq!(p.dim(), self.dim(), "grid has wrong dimension");
        let terms: Vec<(&[u32], f64)> = p.terms().map(|(m, c)| (m.exponents(), *c)).collect();
        let idx: Vec<usize> = (0..terms.len()).collect();
        contract(&terms, &idx, &self.axes, 0)
    }

    /// Values of `sum |c| prod |x_i|^e_i` at every grid point.
    pub fn eval_abs(&self, p: &Polynomial<f64>) -> Vec<f64> {
        assert_eq!(p.dim(), self.dim(), "grid has wrong dimension");
        let terms: Vec<(&[u32], f64)> = p.terms().map(|(m, c)| (m.exponents(), c.abs())).collect();
        let idx: Vec<usize> = (0..terms.len()).collect();
        let axes: Vec<Vec<f64>> = self.axes.iter().map(|a| a.iter().map(|v| v.abs()).collect()).collect();
        contract(&terms, &idx, &axes, 0)
    }
}

fn contract(terms: &[(&[u32], f64)], idx: &[usize], axes: &[Vec<f64>], var: usize) -> Vec<f64> {
    if var == axes.len() {
        return vec![idx.iter().map(|&t| terms[t].1).sum()];
    }
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for &t in idx {
        groups.entry(terms[t].0[var]).or_default().push(t);
    }
    let rest: usize = axes[var + 1..].iter().map(Vec::len).product();
    let xs = &axes[var];
    let mut out = vec![0.0; xs.len() * rest];
    for (e, group) in groups {
        let sub = contract(terms, &group, axes, var + 1);
        for (i, x) in xs.iter().enumerate() {
            let w = x.powi(e as i32);
            if w == 0.0 {
                continue;
            }
            let row = &mut out[i * rest..(i + 1) * rest];
            for (o, s) in row.iter_mut().zip(&sub) {
                *o += w * s;
            }
        }
    }
    out
}
