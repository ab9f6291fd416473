use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hausdorff::squared_distance_transform;
use super::*;
use crate::construct::{build_g, reduce_n, PipelineConfig};
use crate::poly::{Dd, Polynomial};
use crate::system::System;

fn var(d: usize, i: usize) -> Polynomial {
    Polynomial::var(d, i)
}

fn square() -> System {
    System::new(vec![var(2, 0), var(2, 0).neg().add_constant(1.0), var(2, 1), var(2, 1).neg().add_constant(1.0)]).unwrap()
}

fn triangle() -> System {
    System::new(vec![var(2, 0), var(2, 1), var(2, 0).add(&var(2, 1)).unwrap().neg().add_constant(1.0)]).unwrap()
}

fn ball(r2: f64) -> System {
    let n = var(2, 0).mul(&var(2, 0)).unwrap().add(&var(2, 1).mul(&var(2, 1)).unwrap()).unwrap();
    System::new(vec![n.neg().add_constant(r2)]).unwrap()
}

fn spec(n: usize) -> GridSpec {
    GridSpec::uniform(vec![-0.5, -0.5], vec![1.5, 1.5], n).unwrap()
}

#[test]
fn grid_spec_validation() {
    assert!(GridSpec::uniform(vec![0.0], vec![1.0], 1).is_err());
    assert!(GridSpec::uniform(vec![1.0], vec![0.0], 3).is_err());
    assert!(GridSpec::new(vec![0.0, 0.0], vec![1.0], vec![3, 3]).is_err());
    let s = GridSpec::uniform(vec![0.0, 0.0], vec![1.0, 2.0], 3).unwrap();
    assert_eq!(s.spacing(), vec![0.5, 1.0]);
    assert_eq!(s.len(), 9);
}

#[test]
fn identical_systems_agree() {
    let rep = grid_equivalence(&square(), &square(), &spec(201), 1e-7).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.points, 201 * 201);
    assert_eq!(rep.closed_agree + rep.band, rep.points);
}

#[test]
fn square_and_disk_disagree() {
    let rep = grid_equivalence(&square(), &ball(1.0), &spec(101), 1e-7).unwrap();
    assert!(!rep.passed());
    assert!(rep.closed_disagree > 0 && rep.open_disagree > 0);
    assert!(!rep.examples.is_empty());
}

#[test]
fn equivalence_is_symmetric_and_scale_invariant() {
    let s = spec(81);
    let ab = grid_equivalence(&square(), &triangle(), &s, 1e-7).unwrap();
    let ba = grid_equivalence(&triangle(), &square(), &s, 1e-7).unwrap();
    assert_eq!(ab.closed_disagree, ba.closed_disagree);
    assert_eq!(ab.band, ba.band);
    let scaled = System::new(square().polys().iter().zip([3.0, 0.5, 7.0, 1e3]).map(|(p, c)| p.scale(&c)).collect()).unwrap();
    let sc = grid_equivalence(&scaled, &triangle(), &s, 1e-7).unwrap();
    assert_eq!(sc.closed_disagree, ab.closed_disagree);
    assert_eq!(sc.band, ab.band);
}

#[test]
fn equivalence_respects_frames() {
    // the square written around its center with half scale
    let frame = crate::system::AffineFrame { center: vec![0.5, 0.5], scale: 0.5 };
    let local = square().reframe(frame).unwrap();
    let rep = grid_equivalence(&square(), &local, &spec(101), 1e-7).unwrap();
    assert!(rep.passed());
    assert!(rep.band < 101 * 8);
}

fn brute_sdt(mask: &[bool], shape: &[usize], h: &[f64]) -> Vec<f64> {
    let point = |mut j: usize| {
        let mut x = vec![0.0; shape.len()];
        for i in (0..shape.len()).rev() {
            x[i] = (j % shape[i]) as f64 * h[i];
            j /= shape[i];
        }
        x
    };
    (0..mask.len())
        .map(|a| {
            let pa = point(a);
            (0..mask.len())
                .filter(|&b| mask[b])
                .map(|b| point(b).iter().zip(&pa).map(|(u, v)| (u - v) * (u - v)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

#[test]
fn distance_transform_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for shape in [vec![13], vec![9, 11], vec![5, 4, 6]] {
        let h: Vec<f64> = shape.iter().map(|_| rng.gen_range(0.1..2.0)).collect();
        let n: usize = shape.iter().product();
        let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.15)).collect();
        let fast = squared_distance_transform(&mask, &shape, &h);
        let slow = brute_sdt(&mask, &shape, &h);
        for (f, s) in fast.iter().zip(&slow) {
            assert!((f - s).abs() <= 1e-9 * s.max(1.0) || (f.is_infinite() && s.is_infinite()), "{f} vs {s}");
        }
    }
}

#[test]
fn hausdorff_examples() {
    let s = GridSpec::uniform(vec![-1.5, -1.5], vec![1.5, 1.5], 301).unwrap();
    let same = hausdorff_estimate(&ball(1.0), &ball(1.0), &s).unwrap();
    assert_eq!(same.lower, 0.0);
    assert!(same.upper <= s.cell_diameter() + 1e-15);

    let h = hausdorff_estimate(&ball(1.0), &ball(1.21), &s).unwrap();
    assert!(h.lower <= h.upper);
    assert!((h.lower - 0.1).abs() <= s.cell_diameter(), "{h:?}");
    assert!(h.upper >= 0.1);

    let empty = System::new(vec![Polynomial::constant(2, -1.0)]).unwrap();
    assert!(hausdorff_estimate(&ball(1.0), &empty, &s).is_err());
}

#[test]
fn relaxations_converge() {
    // P(0, e) of the triangle approaches the triangle as e shrinks
    let s = GridSpec::uniform(vec![-1.0, -1.0], vec![2.0, 2.0], 301).unwrap();
    let mut last = f64::INFINITY;
    for e in [0.1, 0.05, 0.025] {
        let relaxed = System::new(triangle().polys().iter().map(|p| p.add_constant(e)).collect()).unwrap();
        let h = hausdorff_estimate(&triangle(), &relaxed, &s).unwrap();
        assert!(h.lower <= last);
        last = h.lower;
    }
}

#[test]
fn sandwich_on_square() {
    let sq = square();
    let g = build_g(sq.polys(), 0, 1.0, 1, 1024).unwrap();
    let rep = sandwich_check(&sq, &g, 0, 1.0, &spec(101)).unwrap();
    assert_eq!(rep.violations(), 0, "{rep:?}");
    assert!(rep.open_points > 0 && rep.closed_points > rep.open_points && rep.sublevel_points >= rep.closed_points);
}

fn small_cfg() -> ApproxConfig {
    ApproxConfig { resolution: 301, ..ApproxConfig::default() }
}

#[test]
fn approx_triangle() {
    let a = approx_polynomial(&triangle(), 0.1, &small_cfg()).unwrap();
    assert!(a.hausdorff.upper <= 0.1);
    let sys = a.as_system().unwrap();
    // P lies in (q)>=0
    for i in 0..=50 {
        for j in 0..=50 - i {
            let x = [i as f64 / 50.0, j as f64 / 50.0];
            assert!(sys.eval(&x)[0] >= -1e-12);
        }
    }
    // a loose target is met by the first relaxation
    let loose = approx_polynomial(&triangle(), 10.0, &small_cfg()).unwrap();
    assert_eq!(loose.history.len(), 1);
    assert!(approx_polynomial(&triangle(), 0.0, &small_cfg()).is_err());
}

#[test]
fn approx_disk() {
    let a = approx_polynomial(&ball(1.0), 0.05, &small_cfg()).unwrap();
    assert!(a.hausdorff.upper <= 0.05);
}

#[test]
fn approx_vanishing_square() {
    let x = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
    let a = approx_polynomial_vanishing(&square(), &x, 0.1, &small_cfg()).unwrap();
    assert!(a.hausdorff.upper <= 0.1);
    let sys = a.as_system().unwrap();
    for v in &x {
        assert!(sys.eval(v)[0].abs() <= 1e-9);
    }
    // halving the relaxation never made the estimate worse
    for w in a.history.windows(2) {
        assert!(w[1].1.upper <= w[0].1.upper + 1e-12);
    }
}

#[test]
fn reduction_of_square_passes_equivalence() {
    let x = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
    let red = reduce_n(&square(), &x, &PipelineConfig::default()).unwrap();
    let rep = grid_equivalence(&square(), &red.output, &spec(201), 1e-7).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert!(rep.band < rep.points / 10);
    // perturbing a coefficient of q breaks it
    let mut polys = red.output.polys().to_vec();
    polys[0] = polys[0].add_constant(Dd::new(0.1) * polys[0].max_abs_coeff());
    let bad = System::with_frame(polys, red.output.frame().clone()).unwrap();
    assert!(!grid_equivalence(&square(), &bad, &spec(201), 1e-7).unwrap().passed());
}
