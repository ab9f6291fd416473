//! Best-first interval branch-and-bound over a box intersected with polynomial
//! constraints `c_j >= 0`, optionally with open balls removed.
//!
//! Every lower bound it reports is certified by outward-rounded interval
//! arithmetic; every upper bound comes from a feasible point whose
//! feasibility and objective value are certified the same way.

use alloc::collections::BinaryHeap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::enclosure::Enclosure;
use super::interval::{div_down, div_up, Interval, IntervalBox};

/// Region and objective of a minimization.
#[derive(Clone, Debug)]
pub struct Problem {
    pub domain: IntervalBox,
    pub objective: Enclosure,
    pub constraints: Vec<Enclosure>,
    /// Open balls `(center, radius)` excluded from the region.
    pub holes: Vec<(Vec<f64>, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Goal {
    /// Enclose the minimum to within `tol`.
    Minimize { tol: f64 },
    /// Decide whether the objective is `>= bound` (or `> bound` when strict)
    /// on the whole region.
    ProveAtLeast { bound: f64, strict: bool },
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_depth: u32,
    pub max_boxes: usize,
    pub min_width: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_depth: 60, max_boxes: 200_000, min_width: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Converged,
    Proved,
    Refuted,
    Exhausted(String),
}

#[derive(Clone, Debug)]
pub struct Outcome {
    /// Certified lower bound on the minimum; `+inf` when the region is empty.
    pub lower: f64,
    /// Certified upper bound on the objective at `witness`.
    pub upper: f64,
    pub witness: Option<Vec<f64>>,
    pub status: Status,
    pub boxes: usize,
}

impl Outcome {
    pub fn region_empty(&self) -> bool {
        self.lower == f64::INFINITY
    }
}

struct Node {
    key: f64,
    seq: usize,
    depth: u32,
    b: IntervalBox,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap on the reversed key: smallest lower bound first
    fn cmp(&self, other: &Self) -> Ordering {
        other.key.total_cmp(&self.key).then_with(|| other.seq.cmp(&self.seq))
    }
}

type Linear = (Vec<Interval>, Interval);

/// Shrinks `b` using the linear constraints; `false` when the box is proved
/// infeasible.
pub fn contract(b: &mut IntervalBox, linear: &[Linear]) -> bool {
    for _ in 0..2 {
        for (a, c) in linear {
            for i in 0..b.dim() {
                let ai = a[i];
                if ai.contains(0.0) {
                    continue;
                }
                let mut s = *c;
                for (j, aj) in a.iter().enumerate() {
                    if j != i && !(aj.lo == 0.0 && aj.hi == 0.0) {
                        s = s.add(&aj.mul(&b.side(j)));
                    }
                }
                // need a_i x_i >= v
                let v = -s.hi;
                if v == f64::NEG_INFINITY && ai.lo > 0.0 || v == f64::NEG_INFINITY && ai.hi < 0.0 {
                    continue;
                }
                let side = b.side(i);
                let new = if ai.lo > 0.0 {
                    let lo = div_down(v, ai.lo).min(div_down(v, ai.hi));
                    Interval { lo: side.lo.max(lo), hi: side.hi }
                } else {
                    let hi = div_up(v, ai.lo).max(div_up(v, ai.hi));
                    Interval { lo: side.lo, hi: side.hi.min(hi) }
                };
                if !(new.lo <= new.hi) {
                    return false;
                }
                b.set_side(i, new);
            }
        }
    }
    true
}

impl Problem {
    pub fn new(domain: IntervalBox, objective: Enclosure) -> Self {
        Problem { domain, objective, constraints: Vec::new(), holes: Vec::new() }
    }

    pub fn with_constraints(mut self, constraints: Vec<Enclosure>) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn with_holes(mut self, holes: Vec<(Vec<f64>, f64)>) -> Self {
        self.holes = holes;
        self
    }

    /// Whether `x` is certified to lie in the region.
    pub fn is_feasible(&self, x: &[f64]) -> bool {
        self.domain.contains(x)
            && self.constraints.iter().all(|c| c.eval_point(x).lo >= 0.0)
            && self.holes.iter().all(|(c, r)| {
                let d = IntervalBox::point(x).dist_sq(c);
                d.lo >= Interval::point(*r).sqr().hi
            })
    }

    pub fn solve(&self, goal: Goal, limits: &Limits) -> Outcome {
        let linear: Vec<Linear> = self.constraints.iter().filter_map(|c| c.poly().as_linear()).collect();
        let mut heap = BinaryHeap::new();
        let mut seq = 0usize;
        heap.push(Node { key: f64::NEG_INFINITY, seq, depth: 0, b: self.domain.clone() });
        let mut best_upper = f64::INFINITY;
        let mut witness: Option<Vec<f64>> = None;
        let mut settled_lower = f64::INFINITY;
        let mut stuck = false;
        let mut boxes = 0usize;

        let status = loop {
            let heap_lower = heap.peek().map_or(f64::INFINITY, |n| n.key);
            let global_lower = heap_lower.min(settled_lower);
            if let Goal::Minimize { tol } = goal {
                if best_upper - global_lower <= tol {
                    break Status::Converged;
                }
            }
            let Some(node) = heap.pop() else {
                break match goal {
                    Goal::Minimize { .. } if stuck => Status::Exhausted(String::from("depth limit reached")),
                    Goal::Minimize { .. } if best_upper == f64::INFINITY && settled_lower == f64::INFINITY => {
                        Status::Converged
                    }
                    Goal::Minimize { .. } => Status::Exhausted(String::from("gap not closed")),
                    Goal::ProveAtLeast { .. } if stuck => Status::Exhausted(String::from("depth limit reached")),
                    Goal::ProveAtLeast { .. } => Status::Proved,
                };
            };
            if boxes >= limits.max_boxes {
                heap.push(node);
                break Status::Exhausted(String::from("box budget exhausted"));
            }
            boxes += 1;

            let mut b = node.b;
            if !contract(&mut b, &linear) {
                continue;
            }
            let mut inner = true;
            let mut infeasible = false;
            for c in &self.constraints {
                let r = c.range(&b);
                if r.hi < 0.0 {
                    infeasible = true;
                    break;
                }
                if r.lo < 0.0 {
                    inner = false;
                }
            }
            if infeasible {
                continue;
            }
            let mut near_hole = false;
            let mut in_hole = false;
            for (c, r) in &self.holes {
                let d = b.dist_sq(c);
                let r2 = Interval::point(*r).sqr();
                if d.hi < r2.lo {
                    in_hole = true;
                    break;
                }
                if d.lo < r2.hi {
                    near_hole = true;
                }
            }
            if in_hole {
                continue;
            }

            let natural = self.objective.natural(&b);
            let mut grad = self.objective.gradient(&b);
            if inner && !near_hole {
                // the minimum over an inner box lies on the face the gradient points away from
                let mut reduced = false;
                for (i, g) in grad.iter().enumerate() {
                    let s = b.side(i);
                    if s.is_point() {
                        continue;
                    }
                    if g.lo > 0.0 {
                        b.set_side(i, Interval::point(s.lo));
                        reduced = true;
                    } else if g.hi < 0.0 {
                        b.set_side(i, Interval::point(s.hi));
                        reduced = true;
                    }
                }
                if reduced {
                    grad = self.objective.gradient(&b);
                }
            }
            let natural = if inner && !near_hole { self.objective.natural(&b) } else { natural };
            let f = self.objective.range_with_gradient(&b, &grad, natural);

            let x = b.midpoint();
            if self.is_feasible(&x) {
                let v = self.objective.eval_point(&x).hi;
                if v < best_upper {
                    best_upper = v;
                    witness = Some(x);
                }
            }

            match goal {
                Goal::ProveAtLeast { bound, strict } => {
                    if best_upper < bound || (strict && best_upper <= bound) {
                        break Status::Refuted;
                    }
                    if f.lo > bound || (!strict && f.lo >= bound) {
                        settled_lower = settled_lower.min(f.lo);
                        continue;
                    }
                }
                Goal::Minimize { .. } => {
                    if f.lo > best_upper {
                        continue;
                    }
                }
            }

            let all_points = b.sides().iter().all(Interval::is_point);
            if all_points || node.depth >= limits.max_depth || b.max_width() <= limits.min_width {
                settled_lower = settled_lower.min(f.lo);
                stuck = true;
                continue;
            }
            let (l, r) = b.bisect();
            for child in [l, r] {
                seq += 1;
                heap.push(Node { key: f.lo, seq, depth: node.depth + 1, b: child });
            }
        };

        let heap_lower = heap.iter().map(|n| n.key).fold(f64::INFINITY, f64::min);
        Outcome { lower: heap_lower.min(settled_lower), upper: best_upper, witness, status, boxes }
    }
}
