use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::oracle::IntervalBox;
use crate::poly::{Polynomial, Rational};
use crate::Error;

fn var(d: usize, i: usize) -> Polynomial {
    Polynomial::var(d, i)
}

fn square() -> Vec<Polynomial> {
    vec![var(2, 0), var(2, 0).neg().add_constant(1.0), var(2, 1), var(2, 1).neg().add_constant(1.0)]
}

fn triangle() -> Vec<Polynomial> {
    vec![var(2, 0), var(2, 1), var(2, 0).add(&var(2, 1)).unwrap().neg().add_constant(1.0)]
}

/// Vertices (0,0), (2,0), (2,1), (1,2), (0,2).
fn pentagon() -> Vec<Polynomial> {
    vec![
        var(2, 0),
        var(2, 1),
        var(2, 0).neg().add_constant(2.0),
        var(2, 1).neg().add_constant(2.0),
        var(2, 0).add(&var(2, 1)).unwrap().neg().add_constant(3.0),
    ]
}

fn disk() -> Vec<Polynomial> {
    let r2 = var(2, 0).mul(&var(2, 0)).unwrap().add(&var(2, 1).mul(&var(2, 1)).unwrap()).unwrap();
    vec![r2.neg().add_constant(1.0)]
}

fn square_vertices() -> Vec<Vec<f64>> {
    vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]
}

fn exact_points(x: &[Vec<f64>]) -> Vec<Vec<Rational>> {
    x.iter().map(|v| v.iter().map(|c| Rational::from_float(*c).unwrap()).collect()).collect()
}

fn domain() -> IntervalBox {
    IntervalBox::cube(2, 2.0)
}

fn cfg() -> PipelineConfig {
    PipelineConfig::default()
}

/// Elementary symmetric function of the values, by its definition as a sum
/// over subsets.
fn sigma_brute(vals: &[f64], k: usize) -> f64 {
    let s = vals.len();
    let mut total = 0.0;
    for mask in 0u32..(1 << s) {
        if mask.count_ones() as usize == k {
            total += (0..s).filter(|i| mask >> i & 1 == 1).map(|i| vals[i]).product::<f64>();
        }
    }
    total
}

fn feasible(sys: &[Polynomial], x: &[f64]) -> bool {
    sys.iter().all(|p| p.eval(x) >= 0.0)
}

#[test]
fn find_k_examples() {
    assert_eq!(find_k(4, 1.0, 1.0), 1);
    assert_eq!(find_k(1, 0.3, 7.0), 1);
    assert_eq!(find_k(5, 0.1, 1.0), 9);
    // brute check of minimality against the definition
    for s in 1..12usize {
        for &(e, l) in &[(0.05, 1.0), (0.5, 2.0), (1.0, 8.0)] {
            let k = find_k(s, e, l);
            let at = |k: u32| libm::pow(1.0 + e / l, 2.0 * k as f64);
            assert!(at(k) >= s as f64);
            assert!(k == 1 || at(k - 1) < s as f64);
        }
    }
}

#[test]
fn g_examples() {
    let g = build_g(&square(), 0, 1.0, 1, 1024).unwrap();
    assert!((g.eval(&[0.5, 0.5]) - 0.25).abs() < 1e-15);
    // all constraints vanish: x1 = x2 = 0 for a system of two
    let two = vec![var(2, 0), var(2, 1)];
    let g2 = build_g(&two, 3, 2.0, 4, 1024).unwrap();
    assert!((g2.eval(&[0.0, 0.0]) - 1.0).abs() < 1e-15);
    let c = vec![Polynomial::constant(2, 3.0)];
    let g3 = build_g(&c, 0, 3.0, 2, 1024).unwrap();
    assert!(g3.eval(&[0.3, -2.0]).abs() < 1e-15);
}

#[test]
fn g_matches_its_formula() {
    let sys = triangle();
    let (m, lambda, k) = (1, 4.0, 2);
    let g = build_g(&sys, m, lambda, k, 1024).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let w = libm::pow(1.0 + x[0] * x[0] + x[1] * x[1], m as f64);
        let want: f64 =
            sys.iter().map(|p| libm::pow(1.0 - w * p.eval(&x) / lambda, 2.0 * k as f64)).sum::<f64>() / sys.len() as f64;
        assert!((g.eval(&x) - want).abs() <= 1e-10 * want.abs().max(1.0));
    }
}

#[test]
fn g_degree_cap() {
    assert!(matches!(build_g(&square(), 2, 1.0, 50, 64), Err(Error::DegreeCapExceeded { .. })));
}

#[test]
fn h_examples() {
    let h = build_h(&square_vertices(), core::f64::consts::SQRT_2).unwrap();
    assert!((h.eval(&[0.5, 0.5]) - libm::pow(0.25, 4.0)).abs() < 1e-15);
    for v in square_vertices() {
        assert!(h.eval(&v).abs() < 1e-15);
    }
    let h0 = build_h(&[vec![0.0, 0.0]], 1.0).unwrap();
    let want = var(2, 0).mul(&var(2, 0)).unwrap().add(&var(2, 1).mul(&var(2, 1)).unwrap()).unwrap();
    assert_eq!(h0, want);
    assert!(matches!(build_h(&[], 1.0), Err(Error::EmptyInput(_))));
}

#[test]
fn lambda_examples() {
    for sys in [square(), triangle(), disk()] {
        let l = find_lambda(&sys, 0, &domain(), &cfg()).unwrap();
        assert_eq!(l.value, 1.0);
    }
}

#[test]
fn mu_examples() {
    let c = cfg();
    let tol = c.oracle.tol;
    for sys in [square(), triangle()] {
        let mu = find_mu(&sys, &domain(), &c).unwrap().value;
        assert!(mu >= core::f64::consts::SQRT_2, "{mu}");
        assert!(mu <= core::f64::consts::SQRT_2 + 10.0 * tol.max(1e-6), "{mu}");
    }
    let point = vec![var(2, 0), var(2, 0).neg(), var(2, 1), var(2, 1).neg()];
    assert_eq!(find_mu(&point, &domain(), &c).unwrap().value, c.mu_min);
}

#[test]
fn disjointness_examples() {
    assert_eq!(disjointness_bound(&[vec![0.0, 0.0], vec![3.0, 0.0]]), 1.5);
    assert_eq!(disjointness_bound(&square_vertices()), 0.5);
    assert_eq!(disjointness_bound(&[vec![1.0, 1.0]]), f64::INFINITY);
}

#[test]
fn rho_is_below_the_disjointness_bound_and_keeps_g_small() {
    let g = g_enclosure(&square(), 0, 1.0, 1, 1024).unwrap();
    let rho = find_rho(&exact_points(&square_vertices()), &g, &cfg()).unwrap().value;
    assert!(rho > 0.0 && rho < 0.5);
    let gf = build_g(&square(), 0, 1.0, 1, 1024).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for v in square_vertices() {
        for _ in 0..2000 {
            let (a, r) = (rng.gen_range(0.0..core::f64::consts::TAU), rho * libm::sqrt(rng.gen::<f64>()));
            let x = [v[0] + r * libm::cos(a), v[1] + r * libm::sin(a)];
            assert!(gf.eval(&x) <= 1.0 + 1e-12);
        }
    }
    let single = find_rho(&exact_points(&[vec![0.0, 0.0]]), &g, &cfg()).unwrap().value;
    assert!(single > 0.0);
}

#[test]
fn alpha_examples() {
    let c = cfg();
    for (sys, want) in [(square(), 0.5), (triangle(), 2.0 / 3.0)] {
        let g = g_enclosure(&sys, 0, 1.0, 1, 1024).unwrap();
        let a = find_alpha(&sys, &g, &domain(), &c).unwrap().value;
        assert!(a >= want && a <= want + 1e-4, "{a} vs {want}");
    }
    // n = s: g reaches 1 on P
    let d = disk();
    let g = g_enclosure(&d, 0, 1.0, 1, 1024).unwrap();
    assert!(find_alpha(&d, &g, &domain(), &c).is_err());
}

fn grid_min_sigma(sys: &[Polynomial], k: usize, holes: &[Vec<f64>], rho: f64, lo: f64, hi: f64) -> f64 {
    let steps = 400;
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        for j in 0..=steps {
            let x = [lo + (hi - lo) * i as f64 / steps as f64, lo + (hi - lo) * j as f64 / steps as f64];
            if !feasible(sys, &x) || holes.iter().any(|v| (x[0] - v[0]).hypot(x[1] - v[1]) < rho) {
                continue;
            }
            let vals: Vec<f64> = sys.iter().map(|p| p.eval(&x)).collect();
            best = best.min(sigma_brute(&vals, k));
        }
    }
    best
}

#[test]
fn gamma_against_grid() {
    let c = cfg();
    let rho = 0.25;
    let x = square_vertices();
    let gamma = find_gamma(&square(), 2, &x, rho, &domain(), &c).unwrap().value;
    let grid = grid_min_sigma(&square(), 3, &x, rho, 0.0, 1.0);
    assert!(gamma > 0.0 && gamma <= grid, "{gamma} vs {grid}");
    assert!(gamma >= 0.9 * grid, "{gamma} vs {grid}");

    let tx = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let gamma = find_gamma(&triangle(), 2, &tx, rho, &domain(), &c).unwrap().value;
    let grid = grid_min_sigma(&triangle(), 2, &tx, rho, 0.0, 1.0);
    assert!(gamma > 0.0 && gamma <= grid, "{gamma} vs {grid}");
    assert!(gamma >= 0.9 * grid, "{gamma} vs {grid}");

    assert!(matches!(find_gamma(&disk(), 1, &[], rho, &domain(), &c), Err(Error::ActiveCountEqualsSize { .. })));
}

#[test]
fn lojasiewicz_at_square_vertices() {
    let sys = square();
    let (rho, mu) = (0.25, core::f64::consts::SQRT_2);
    let x = square_vertices();
    let (m, tau) = find_loj_params(&sys, 2, &exact_points(&x), rho, mu, &cfg()).unwrap();
    let (m, tau) = (m.value, tau.value);
    assert!((1..=2).contains(&m), "m = {m}");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100_000 {
        let v = &x[checked % 4];
        let p = [v[0] + rng.gen_range(-rho..rho), v[1] + rng.gen_range(-rho..rho)];
        let r2 = (p[0] - v[0]).powi(2) + (p[1] - v[1]).powi(2);
        if r2 > rho * rho || !feasible(&sys, &p) {
            continue;
        }
        let vals: Vec<f64> = sys.iter().map(|q| q.eval(&p)).collect();
        let lhs = libm::pow(r2 / (mu * mu), m as f64);
        assert!(lhs <= tau * sigma_brute(&vals, 3) + 1e-10, "at {p:?}");
        checked += 1;
    }
    // both symmetric vertices give the same pair
    let one = find_loj_params(&sys, 2, &exact_points(&x[..1]), rho, mu, &cfg()).unwrap();
    let other = find_loj_params(&sys, 2, &exact_points(&x[3..]), rho, mu, &cfg()).unwrap();
    assert_eq!(one.0.value, other.0.value);
    assert_eq!(one.1.value, other.1.value);
}

fn l_inputs(tau: f64, alpha: f64, gamma: f64) -> LInputs {
    LInputs { tau, alpha, gamma, lambda: 1.0, eps: 1.0, k: 1, rho: 1.0, mu: 1.0, m: 1, s: 2, n: 1, card_x: 1, l_max: 1000 }
}

/// Smallest `l` with the growth condition, computed in logarithms.
fn l58(i: &LInputs) -> u32 {
    let t = (i.s + 1 - i.n) as f64;
    let binom = (0..i.n - 1).fold(1.0, |b, j| b * (i.s - j) as f64 / (j + 1) as f64);
    let lhs = libm::log(2.0 * binom) + t * libm::log(i.lambda * (i.s + 1) as f64);
    let per = 2.0 * i.k as f64 * libm::log((i.lambda + 2.0 * i.eps) / (i.lambda + i.eps));
    let rhs0 = 2.0 * (i.m * i.card_x as u32) as f64 * libm::log(i.rho / i.mu);
    (1..).find(|&l| lhs <= per * (l as f64 - t) + rhs0 + 1e-12).unwrap()
}

#[test]
fn find_l_examples() {
    // growth condition already holds at l = 1 when rho/mu is large
    let mut a = l_inputs(1.0, 0.5, 1.0);
    a.rho = 8.0;
    assert_eq!(l58(&a), 1);
    assert_eq!(find_l(&a).unwrap(), 1);

    let b = l_inputs(10.0, 0.5, 0.1);
    assert_eq!(find_l(&b).unwrap(), 4.max(l58(&b)));

    let mut c = l_inputs(1.0, 0.99, 0.5);
    c.rho = 1e6;
    assert_eq!(find_l(&c).unwrap(), 69);

    let mut capped = l_inputs(1.0, 0.99, 0.5);
    capped.l_max = 10;
    assert!(matches!(find_l(&capped), Err(Error::DegreeCapExceeded { .. })));
    assert!(find_l(&l_inputs(1.0, 1.0, 0.5)).is_err());
}

#[test]
fn snapping_square_vertices() {
    let (w, ok) = snap_vertex(&square(), &[1.0 + 1e-9, -1e-9], 1e-6);
    assert!(ok);
    assert_eq!(w, vec![Rational::from_float(1.0).unwrap(), Rational::from_float(0.0).unwrap()]);
    let (_, ok) = snap_vertex(&disk(), &[1.0, 0.0], 1e-6);
    assert!(!ok);
}

#[test]
fn frame_contains_box() {
    let f = choose_frame(&[0.0, 0.0], &[1.0, 1.0]);
    assert_eq!(f.center, vec![0.5, 0.5]);
    assert_eq!(f.scale, 1.0);
    let f = choose_frame(&[-8.0, 0.0], &[8.0, 9.0]);
    for corner in [[-8.0, 0.0], [8.0, 0.0], [-8.0, 9.0], [8.0, 9.0]] {
        let y = f.to_local(&corner);
        assert!(y[0].hypot(y[1]) < 1.0);
    }
    assert!(f.scale.log2().fract() == 0.0);
}

fn check_outputs_on_grid(red: &Reduction, sys: &[Polynomial], lo: f64, hi: f64) {
    let steps = 60;
    for i in 0..=steps {
        for j in 0..=steps {
            let x = [lo + (hi - lo) * i as f64 / steps as f64, lo + (hi - lo) * j as f64 / steps as f64];
            let vals: Vec<f64> = sys.iter().map(|p| p.eval(&x)).collect();
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let y = red.output.frame().to_local(&x);
            let out: Vec<f64> = red.output.polys().iter().map(|p| p.eval_f64(&y)).collect();
            let omin = out.iter().cloned().fold(f64::INFINITY, f64::min);
            // away from the boundary the signs must agree
            if min > 1e-3 {
                assert!(omin > 0.0, "inside at {x:?}: {out:?}");
            } else if min < -1e-3 {
                assert!(omin < 0.0, "outside at {x:?}: {out:?}");
            }
        }
    }
}

#[test]
fn reduce_square_both_modes() {
    let sys = System::new(square()).unwrap();
    let red = reduce_n_plus_1(&sys, &cfg()).unwrap();
    assert_eq!(red.n, 2);
    assert_eq!(red.output.len(), 3);
    assert!(red.audit.all_passed(), "{:?}", red.audit.failures().collect::<Vec<_>>());
    check_outputs_on_grid(&red, &square(), -0.5, 1.5);

    let red = reduce_n(&sys, &square_vertices(), &cfg()).unwrap();
    assert_eq!(red.output.len(), 2);
    assert!(red.audit.all_passed(), "{:?}", red.audit.failures().collect::<Vec<_>>());
    let q = &red.output.polys()[0];
    let f = red.output.frame();
    for v in square_vertices() {
        assert!(q.eval_f64(&f.to_local(&v)).abs() < 1e-9);
    }
    assert!(q.eval_f64(&f.to_local(&[0.5, 0.5])) > 0.0);
    check_outputs_on_grid(&red, &square(), -0.5, 1.5);
}

#[test]
fn reduce_pentagon() {
    let red = reduce_n_plus_1(&System::new(pentagon()).unwrap(), &cfg()).unwrap();
    assert_eq!(red.output.len(), 3);
    assert!(red.audit.all_passed());
    check_outputs_on_grid(&red, &pentagon(), -0.5, 2.5);
}

#[test]
fn reduce_interval() {
    let sys = vec![var(1, 0), var(1, 0).neg().add_constant(1.0)];
    let red = reduce_n_plus_1(&System::new(sys.clone()).unwrap(), &cfg()).unwrap();
    assert_eq!(red.n, 1);
    assert_eq!(red.output.len(), 2);
    assert!(red.audit.all_passed());
    for i in 0..=200 {
        let x = -0.5 + 2.0 * i as f64 / 200.0;
        let inside = x > 1e-3 && x < 1.0 - 1e-3;
        let outside = x < -1e-3 || x > 1.0 + 1e-3;
        let y = red.output.frame().to_local(&[x]);
        let omin = red.output.polys().iter().map(|p| p.eval_f64(&y)).fold(f64::INFINITY, f64::min);
        assert!(!inside || omin > 0.0);
        assert!(!outside || omin < 0.0);
    }
}

#[test]
fn reduce_rejects_full_active_count() {
    let sys = System::new(disk()).unwrap();
    let r = reduce_n_plus_1(&sys, &cfg());
    assert!(matches!(r, Err(Error::ActiveCountEqualsSize { n: 1, s: 1 })), "{:?}", r.map(|r| r.n));
    assert!(matches!(reduce_n(&System::new(square()).unwrap(), &[], &cfg()), Err(Error::EmptyInput(_))));
}
