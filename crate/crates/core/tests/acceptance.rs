//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Exact-arithmetic criteria assert literal zero; float criteria pin their
//! tolerances in the constants below.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use momenta::central::{fit_lambda, s_matrix, verify_all, zero_total_mass_checks, CentralSystem};
use momenta::config::{dot, sub};
use momenta::distgeom::{
    cayley_menger_det, cayley_menger_det_subset, constraint_count, constraint_set,
    extended_leibniz_form,
};
use momenta::equilibrium::{
    dziobek_factorize, dziobek_synthesize, inverse_interactions, verify_equilibrium_ac,
    verify_equilibrium_leibniz, InteractionCoefficients,
};
use momenta::moments::{hlk_difference_residual, leibniz_identity_residual};
use momenta::nullspace::{
    config_matrix, config_matrix_kernel, find_core, membership_identities, plucker_residual,
    plucker_residual_from_deltas, volume, w0_basis, PluckerDeltas,
};
use momenta::solver::{solve_central, AcResidualSystem, SolveOptions};
use momenta::{Configuration, Mat, Scalar, WeightVector, WeightedSystem};

const CENTRAL_TOL: f64 = 1e-12;
const SOLVER_RESIDUAL: f64 = 1e-10;
const SOLVER_MAX_ITERS: usize = 50;
const JACOBIAN_REL: f64 = 1e-5;
const JACOBIAN_STEP: f64 = 1e-6;

fn report(criterion: u32, label: &str, pass: bool) {
    println!(
        "acceptance criterion {criterion} ({label}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn rand_rational(rng: &mut StdRng, max_num: i64, max_den: i64) -> Scalar {
    let num = rng.random_range(-max_num..=max_num);
    let den = rng.random_range(1..=max_den);
    Scalar::rational(num, den)
}

fn rand_point(rng: &mut StdRng, dim: usize) -> Vec<Scalar> {
    (0..dim).map(|_| rand_rational(rng, 12, 5)).collect()
}

fn rand_config(rng: &mut StdRng, n: usize, dim: usize) -> Configuration {
    Configuration::new((0..n).map(|_| rand_point(rng, dim)).collect()).unwrap()
}

/// Random configuration with exact codimension `c`: `d+1` affinely
/// independent points plus `c` more, all in a `d`-dimensional frame.
fn rand_config_with_codim(rng: &mut StdRng, d: usize, c: usize) -> Configuration {
    let n = d + 1 + c;
    loop {
        let x = rand_config(rng, n, d);
        let (dim, codim) = momenta::nullspace::dimension_codimension(&x, 0.0);
        if dim == d && codim == c && x.check_pairwise_distinct().is_ok() {
            return x;
        }
    }
}

fn rand_weights(rng: &mut StdRng, n: usize) -> WeightVector {
    WeightVector::new((0..n).map(|_| rand_rational(rng, 9, 4)).collect()).unwrap()
}

#[test]
fn criterion_1_identity_suite() {
    let mut rng = StdRng::seed_from_u64(101);
    let start = Instant::now();
    let mut pass = true;
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let dim = rng.random_range(1..=4);
        let x = rand_config(&mut rng, n, dim);
        let w = rand_weights(&mut rng, n);
        let ws = WeightedSystem::new(x, w).unwrap();
        let q = rand_point(&mut rng, dim);
        let p = rand_point(&mut rng, dim);
        pass &= leibniz_identity_residual(&ws, &q).unwrap().value.is_zero();
        pass &= hlk_difference_residual(&ws, &p, &q)
            .unwrap()
            .value
            .is_zero();
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs_f64() < 5.0;
    report(1, "exact identity suite, 200 systems", pass);
    assert!(pass, "elapsed {elapsed:?}");
}

#[test]
fn criterion_2_kernel_dimension() {
    let mut rng = StdRng::seed_from_u64(202);
    let start = Instant::now();
    let mut pass = true;
    for case in 0..100 {
        let c = case % 4;
        let d = rng.random_range(1..=4.min(7 - c)); // keep n = d+1+c <= 8
        let x = rand_config_with_codim(&mut rng, d, c);
        let oracle = config_matrix_kernel(&x, 0.0);
        pass &= oracle.len() == c;
        let xmat = config_matrix(&x);
        if c > 0 {
            let core = find_core(&x, 0.0);
            let basis = w0_basis(&x, &core, 0.0).unwrap();
            pass &= basis.c() == c;
            for w in basis.vectors() {
                let prod = xmat.mul_vec(w.entries()).unwrap();
                pass &= prod.iter().all(|s| s.is_zero());
            }
            pass &= basis.matrix().rank(0.0) == c;

            // a member: random combination of the basis
            let coeffs: Vec<Scalar> = (0..c).map(|_| rand_rational(&mut rng, 7, 3)).collect();
            let mut member = vec![Scalar::int(0); x.n()];
            for (k, coeff) in coeffs.iter().enumerate() {
                for (i, m) in member.iter_mut().enumerate() {
                    *m = &*m + coeff * basis.vectors()[k].entry(i);
                }
            }
            let member = WeightVector::new(member).unwrap();
            pass &= membership_identities(&x, &member, 0.0)
                .unwrap()
                .is_exact_zero();
        }
        // a non-member: resample until the kernel product is nonzero
        let non_member = loop {
            let w = rand_weights(&mut rng, x.n());
            let prod = xmat.mul_vec(w.entries()).unwrap();
            if !prod.iter().all(|s| s.is_zero()) {
                break w;
            }
        };
        pass &= !membership_identities(&x, &non_member, 0.0)
            .unwrap()
            .is_exact_zero();
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs_f64() < 10.0;
    report(2, "kernel bases and membership, 100 configurations", pass);
    assert!(pass, "elapsed {elapsed:?}");
}

#[test]
fn criterion_3_plucker() {
    let mut rng = StdRng::seed_from_u64(303);
    let mut pass = true;
    for _ in 0..100 {
        let x = rand_config(&mut rng, 5, 2);
        pass &= plucker_residual(&x).unwrap().value.is_zero();
    }
    let mut nonzero = 0;
    for _ in 0..100 {
        let d = PluckerDeltas {
            d23: rand_rational(&mut rng, 50, 9),
            d24: rand_rational(&mut rng, 50, 9),
            d25: rand_rational(&mut rng, 50, 9),
            d34: rand_rational(&mut rng, 50, 9),
            d35: rand_rational(&mut rng, 50, 9),
            d45: rand_rational(&mut rng, 50, 9),
        };
        if !plucker_residual_from_deltas(&d).value.is_zero() {
            nonzero += 1;
        }
    }
    pass &= nonzero >= 99;
    report(
        3,
        "Pluecker relation, 100 configurations and 100 free tuples",
        pass,
    );
    assert!(pass, "nonzero count {nonzero}");
}

#[test]
fn criterion_4_equilibrium_equivalence() {
    let mut rng = StdRng::seed_from_u64(404);
    let mut pass = true;
    for case in 0..50 {
        let c = 1 + case % 3;
        let d = rng.random_range(1..=3.min(7 - c));
        let x = rand_config_with_codim(&mut rng, d, c);
        let family = inverse_interactions(&x, 0.0).unwrap();
        // random symmetric parameter matrix
        let mut s = Mat::zeros(c, c, momenta::Mode::Rational);
        for i in 0..c {
            for j in i..c {
                let v = rand_rational(&mut rng, 6, 3);
                *s.at_mut(i, j) = v.clone();
                *s.at_mut(j, i) = v;
            }
        }
        let phi = family.symmetric_member(&s).unwrap();
        pass &= verify_equilibrium_ac(&x, &phi).unwrap().is_exact_zero();
        pass &= verify_equilibrium_leibniz(&x, &phi)
            .unwrap()
            .is_exact_zero();
        // third leg of the equivalence: every induced column in the kernel
        let xmat = config_matrix(&x);
        let induced = momenta::equilibrium::induced_weight_systems(&x, &phi).unwrap();
        for j in 0..x.n() {
            let prod = xmat.mul_vec(&induced.matrix().column(j)).unwrap();
            pass &= prod.iter().all(|s| s.is_zero());
        }

        // a nonzero rational bump in one off-diagonal entry breaks all three
        let n = x.n();
        let i = rng.random_range(0..n);
        let j = (i + 1 + rng.random_range(0..n - 1)) % n;
        let mut grid = phi.grid().clone();
        *grid.at_mut(i, j) = grid.at(i, j) + Scalar::rational(1, 11);
        let perturbed = InteractionCoefficients::new(grid).unwrap();
        pass &= !verify_equilibrium_ac(&x, &perturbed)
            .unwrap()
            .is_exact_zero();
        pass &= !verify_equilibrium_leibniz(&x, &perturbed)
            .unwrap()
            .is_exact_zero();
        let induced = momenta::equilibrium::induced_weight_systems(&x, &perturbed).unwrap();
        let some_outside = (0..x.n()).any(|j| {
            !xmat
                .mul_vec(&induced.matrix().column(j))
                .unwrap()
                .iter()
                .all(|s| s.is_zero())
        });
        pass &= some_outside;
    }
    report(4, "equilibrium families agree, 50 configurations", pass);
    assert!(pass);
}

#[test]
fn criterion_5_dziobek_round_trip() {
    let mut rng = StdRng::seed_from_u64(505);
    let mut pass = true;
    for case in 0..50 {
        let c = 1 + case % 3;
        let d = rng.random_range(1..=3.min(7 - c));
        let x = rand_config_with_codim(&mut rng, d, c);
        let core = find_core(&x, 0.0);
        let basis = w0_basis(&x, &core, 0.0).unwrap();
        let mut s = Mat::zeros(c, c, momenta::Mode::Rational);
        for i in 0..c {
            for j in i..c {
                let v = rand_rational(&mut rng, 8, 5);
                *s.at_mut(i, j) = v.clone();
                *s.at_mut(j, i) = v;
            }
        }
        let f = dziobek_synthesize(&basis, &s).unwrap();
        let fac = dziobek_factorize(&f, &basis, 0.0).unwrap();
        pass &= *fac.s() == s;
        pass &= fac.reconstruction_residual().is_zero();
    }
    report(5, "symmetric factorization round trip, 50 systems", pass);
    assert!(pass);
}

fn battery() -> Vec<(&'static str, CentralSystem, f64)> {
    let fvec = |vals: &[f64]| {
        WeightVector::new(vals.iter().map(|&v| Scalar::float(v).unwrap()).collect()).unwrap()
    };
    let a = Scalar::float(-1.5).unwrap();
    let h = 3f64.sqrt() / 2.0;
    let triangle = CentralSystem::new(
        Configuration::from_floats(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]]).unwrap(),
        fvec(&[1.0, 1.0, 1.0]),
        a.clone(),
        None,
    )
    .unwrap();
    let euler = CentralSystem::new(
        Configuration::from_floats(&[&[-1.0], &[0.0], &[1.0]]).unwrap(),
        fvec(&[1.0, 1.0, 1.0]),
        a.clone(),
        None,
    )
    .unwrap();
    let square = CentralSystem::new(
        Configuration::from_floats(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]).unwrap(),
        fvec(&[1.0, 1.0, 1.0, 1.0]),
        a,
        None,
    )
    .unwrap();
    vec![
        ("equilateral triangle", triangle, 3.0),
        ("Euler collinear", euler, 1.25),
        ("unit square", square, 2.0 + 2f64.sqrt() / 2.0),
    ]
}

#[test]
fn criterion_6_central_battery() {
    let mut pass = true;
    for (label, cs, lambda_expect) in battery() {
        let fit = fit_lambda(&cs).unwrap();
        pass &= (fit.lambda.to_f64() - lambda_expect).abs() < CENTRAL_TOL;
        let cert = verify_all(&cs, CENTRAL_TOL).unwrap();
        pass &= cert.passes(CENTRAL_TOL);
        if label == "equilateral triangle" {
            // S vanishes identically at lambda = mu0
            let with_lambda = cs.with_lambda(fit.lambda.clone());
            let sm = s_matrix(&with_lambda).unwrap();
            pass &= sm.grid().max_abs_entry().to_f64() < CENTRAL_TOL;
        }

        // a one-percent shape perturbation (relative to the unit gauge
        // distance) fails every applicable family
        let mut points: Vec<Vec<Scalar>> = cs.configuration().points().to_vec();
        points[1][0] = Scalar::float(points[1][0].to_f64() + 0.01).unwrap();
        let perturbed = CentralSystem::new(
            Configuration::new(points).unwrap(),
            cs.masses().clone(),
            cs.exponent().clone(),
            None,
        )
        .unwrap();
        let cert = verify_all(&perturbed, CENTRAL_TOL).unwrap();
        pass &= !cert.definition.passes(CENTRAL_TOL);
        pass &= !cert.ac.passes(CENTRAL_TOL);
        pass &= !cert.minors.all_vanish;
        pass &= !cert.extended_leibniz.passes(CENTRAL_TOL);
        if let Some(dias) = &cert.dias {
            pass &= !dias.passes(CENTRAL_TOL);
        }
    }
    report(6, "central battery and perturbations at 1e-12", pass);
    assert!(pass);
}

#[test]
fn criterion_7_zero_total_mass() {
    let x = Configuration::from_ints(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
    let m = WeightVector::from_ints(&[-1, 1, -1, 1]);
    let cs = CentralSystem::new(x, m, Scalar::int(-1), Some(Scalar::int(1))).unwrap();
    let r = zero_total_mass_checks(&cs).unwrap();
    let mut pass = r.all_pass(0.0);
    pass &= r.leibniz_sum.value.is_zero();
    report(7, "zero-total-mass checks on the alternating square", pass);
    assert!(pass);
}

#[test]
fn criterion_8_distance_geometry() {
    let mut rng = StdRng::seed_from_u64(808);
    let mut pass = true;

    // equilateral of side 1, built from exact squared distances
    let mut cm = Mat::zeros(4, 4, momenta::Mode::Rational);
    for i in 1..4 {
        *cm.at_mut(0, i) = Scalar::int(1);
        *cm.at_mut(i, 0) = Scalar::int(1);
        for j in 1..4 {
            if i != j {
                *cm.at_mut(i, j) = Scalar::int(1);
            }
        }
    }
    pass &= cm.det().unwrap() == Scalar::int(-3);

    // -16 area^2 cross-oracle on 50 random rational triangles
    for _ in 0..50 {
        let x = rand_config_with_codim(&mut rng, 2, 0);
        let det = cayley_menger_det(&x).unwrap();
        let two_area = volume(&x, &[0, 1, 2]).unwrap();
        pass &= det == Scalar::int(-4) * &two_area * &two_area;
    }

    pass &= constraint_count(5, 2).unwrap() == 3;
    let subsets = constraint_set(5, 2).unwrap();
    pass &= subsets.len() == 3;
    for _ in 0..20 {
        let x = rand_config_with_codim(&mut rng, 2, 2);
        for subset in &subsets {
            pass &= cayley_menger_det_subset(&x, subset).unwrap().is_zero();
        }
        // lift one point off the plane: some constraint must break
        let victim = rng.random_range(0..5);
        let z = loop {
            let v = rand_rational(&mut rng, 5, 3);
            if !v.is_zero() {
                break v;
            }
        };
        let lifted = Configuration::new(
            (0..5)
                .map(|i| {
                    let mut p = x.point(i).to_vec();
                    p.push(if i == victim {
                        z.clone()
                    } else {
                        Scalar::int(0)
                    });
                    p
                })
                .collect(),
        )
        .unwrap();
        pass &= subsets
            .iter()
            .any(|s| !cayley_menger_det_subset(&lifted, s).unwrap().is_zero());
    }
    report(8, "Cayley-Menger values, oracle, and constraint sets", pass);
    assert!(pass);
}

#[test]
fn criterion_9_solver() {
    let mut rng = StdRng::seed_from_u64(909);
    let mut pass = true;
    let opts = SolveOptions {
        max_iterations: SOLVER_MAX_ITERS,
        tolerance: 1e-12,
        damping: 1.0,
    };
    let h = 3f64.sqrt() / 2.0;
    let shapes: Vec<(&str, Vec<Vec<f64>>, f64)> = vec![
        (
            "triangle",
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]],
            3.0,
        ),
        (
            "square",
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
            2.0 + 2f64.sqrt() / 2.0,
        ),
    ];
    for (label, base, lambda_expect) in &shapes {
        // five-percent perturbation of every coordinate
        let start_points: Vec<Vec<Scalar>> = base
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&v| Scalar::float(v + rng.random_range(-0.05..0.05)).unwrap())
                    .collect()
            })
            .collect();
        let start = Configuration::new(start_points).unwrap();
        let masses = WeightVector::new(vec![Scalar::float(1.0).unwrap(); base.len()]).unwrap();
        let clock = Instant::now();
        let result = solve_central(&masses, &Scalar::float(-1.5).unwrap(), &start, &opts)
            .unwrap_or_else(|e| panic!("{label}: {e}"));
        let elapsed = clock.elapsed().as_secs_f64();
        pass &= result.converged;
        pass &= result.iterations <= SOLVER_MAX_ITERS;
        pass &= *result.residual_history.last().unwrap() <= SOLVER_RESIDUAL;
        pass &= result.certificate.ac.max_abs().to_f64() <= SOLVER_RESIDUAL;
        pass &= elapsed <= 1.0;
        pass &= (result.lambda.to_f64() - lambda_expect).abs() < 1e-7;
    }

    // analytic Jacobian against central differences at random feasible points
    let system = AcResidualSystem::new(&[1.0, 1.3, 0.7, 1.1], -1.5, 4, 2).unwrap();
    for _ in 0..5 {
        let z: Vec<f64> = (0..system.unknown_count())
            .map(|_| rng.random_range(-1.5..1.5))
            .collect();
        if system.residuals(&z).is_err() {
            continue; // coincident sample; separation is part of the contract
        }
        let jac = system.jacobian(&z).unwrap();
        for col in 0..system.unknown_count() {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[col] += JACOBIAN_STEP;
            zm[col] -= JACOBIAN_STEP;
            let (Ok(rp), Ok(rm)) = (system.residuals(&zp), system.residuals(&zm)) else {
                continue;
            };
            for row in 0..system.residual_count() {
                let fd = (rp[row] - rm[row]) / (2.0 * JACOBIAN_STEP);
                let an = jac[row][col];
                pass &= (fd - an).abs() <= JACOBIAN_REL * an.abs().max(1.0);
            }
        }
    }
    report(9, "solver recovery and Jacobian check", pass);
    assert!(pass);
}

#[test]
fn criterion_10_extended_leibniz() {
    let mut rng = StdRng::seed_from_u64(1010);
    let mut pass = true;
    for case in 0..100 {
        let c = 1 + case % 3;
        let d = rng.random_range(1..=3.min(7 - c));
        let x = rand_config_with_codim(&mut rng, d, c);
        let core = find_core(&x, 0.0);
        let basis = w0_basis(&x, &core, 0.0).unwrap();
        // W1: a random kernel member
        let coeffs: Vec<Scalar> = (0..c).map(|_| rand_rational(&mut rng, 7, 3)).collect();
        let mut w1 = vec![Scalar::int(0); x.n()];
        for (k, coeff) in coeffs.iter().enumerate() {
            for (i, m) in w1.iter_mut().enumerate() {
                *m = &*m + coeff * basis.vectors()[k].entry(i);
            }
        }
        let w1 = WeightVector::new(w1).unwrap();
        // W2: a random zero-sum vector
        let mut w2: Vec<Scalar> = (0..x.n() - 1)
            .map(|_| rand_rational(&mut rng, 9, 4))
            .collect();
        let sum = w2.iter().fold(Scalar::int(0), |acc, v| acc + v);
        w2.push(-sum);
        let w2 = WeightVector::new(w2).unwrap();
        pass &= extended_leibniz_form(&x, &w1, &w2).unwrap().is_zero();
    }
    report(10, "extended Leibniz bilinear form, 100 pairs", pass);
    assert!(pass);
}

/// The first moment of a zero-sum weight vector is constant; checked here so
/// the bilinear-form criterion rests on verified inputs.
#[test]
fn zero_sum_partners_have_constant_first_moment() {
    let mut rng = StdRng::seed_from_u64(1111);
    let x = rand_config(&mut rng, 5, 3);
    let mut w: Vec<Scalar> = (0..4).map(|_| rand_rational(&mut rng, 9, 4)).collect();
    let sum = w.iter().fold(Scalar::int(0), |acc, v| acc + v);
    w.push(-sum);
    let ws = WeightedSystem::new(x.clone(), WeightVector::new(w).unwrap()).unwrap();
    let p = rand_point(&mut rng, 3);
    let q = rand_point(&mut rng, 3);
    let m1p = momenta::moments::first_moment(&ws, &p).unwrap();
    let m1q = momenta::moments::first_moment(&ws, &q).unwrap();
    assert!(dot(&sub(&m1p, &m1q), &sub(&m1p, &m1q)).is_zero());
}
