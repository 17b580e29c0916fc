//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured quantities. Tolerances are pinned in the assertions.

mod common;

use std::time::Instant;

use common::{
    random_points, random_simplex_weights, random_unit, random_vector, rescale_pairwise_lipschitz,
    rng, two_ball_best_approximation, v, AffineContraction,
};
use lipext_core::body::ConvexBody;
use lipext_core::checker::{
    check_lipschitz_condition, evaluate_certificate, ConditionKind, EnumerationPolicy,
    VectorFieldSample, ViolationCertificate,
};
use lipext_core::extension::{
    extend_lipschitz, extend_monotone, extend_strain, kirszbraun_extend,
    strain_to_monotone_reduction, verify_extension, ExtensionMode, ExtensionProblem,
    OrderStrategy,
};
use lipext_core::feasibility::{
    dykstra_solve, infeasibility_probe, ConstraintSet, ConstraintSystem,
};
use lipext_core::geometry::{self, PointSet, RealVector, Tolerances};
use lipext_core::necessity::{
    construct_offset_isometry, delta_threshold, necessity_probe, square_demo, NecessityVerdict,
};
use lipext_core::simplex::{brute_force_over_simplex, maximize_over_simplex, SimplexQuadratic};

use rand::Rng;

#[test]
fn acceptance_01_kirszbraun_suite() {
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut r = rng(0xACC0_0001);
    let instances = 200;
    let mut worst_pair_excess = f64::NEG_INFINITY;
    let mut worst_hull_distance = 0.0_f64;

    for case in 0..instances {
        let dom = r.gen_range(1..=6);
        let codom = r.gen_range(1..=6);
        let n = r.gen_range(5..=40);
        let a_size = r.gen_range(2..=n);
        let domain = random_points(&mut r, n, dom, 2.0);

        let mut mask = vec![false; n];
        for flag in mask.iter_mut().take(a_size) {
            *flag = true;
        }
        for i in 0..n {
            let j = r.gen_range(0..n);
            mask.swap(i, j);
        }
        if mask.iter().filter(|&&m| m).count() < 2 {
            mask[0] = true;
            mask[n - 1] = true;
        }

        let raw: Vec<RealVector> =
            (0..n).map(|_| random_vector(&mut r, codom, 2.0)).collect();
        let lip = rescale_pairwise_lipschitz(&domain, raw);
        let u_partial: Vec<Option<RealVector>> = (0..n)
            .map(|i| if mask[i] { Some(lip[i].clone()) } else { None })
            .collect();

        let result = kirszbraun_extend(&domain, &mask, &u_partial, &OrderStrategy::default(), &tol)
            .unwrap_or_else(|e| panic!("instance {case} failed: {e}"));

        // Pairwise 1-Lipschitz residual.
        for i in 0..n {
            for j in i + 1..n {
                let excess = result.u_full[i].distance(&result.u_full[j])
                    - domain.point(i).distance(domain.point(j));
                worst_pair_excess = worst_pair_excess.max(excess);
                assert!(excess <= 1e-7, "instance {case}, pair ({i},{j}): excess {excess}");
            }
        }
        // All values in the hull of the prescribed values.
        let prescribed =
            PointSet::new(u_partial.iter().flatten().cloned().collect()).unwrap();
        for (i, value) in result.u_full.iter().enumerate() {
            let dist = geometry::hull_distance(value, &prescribed).unwrap();
            worst_hull_distance = worst_hull_distance.max(dist);
            assert!(dist <= 1e-7, "instance {case}, point {i}: hull distance {dist}");
        }
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() <= 60.0,
        "runtime budget exceeded: {:.1}s",
        elapsed.as_secs_f64()
    );
    println!(
        "acceptance 01 kirszbraun_suite: PASS ({instances} instances, worst pair excess \
         {worst_pair_excess:.3e}, worst hull distance {worst_hull_distance:.3e}, {:.1}s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn acceptance_02_distance_preservation() {
    let tol = Tolerances::default();
    let mut r = rng(0xACC0_0002);
    let instances = 100;
    let mut worst_ratio = f64::NEG_INFINITY;

    for case in 0..instances {
        let dom = r.gen_range(1..=5);
        let codom = r.gen_range(1..=5);
        let n = r.gen_range(4..=16);
        let map = AffineContraction::random(&mut r, codom, dom);
        let domain = random_points(&mut r, n, dom, 2.0);
        let values = PointSet::new(domain.iter().map(|x| map.apply(x)).collect()).unwrap();
        let sample = VectorFieldSample::new(domain.clone(), values).unwrap();

        let a_size = r.gen_range(2..=n);
        let mut mask = vec![false; n];
        for flag in mask.iter_mut().take(a_size) {
            *flag = true;
        }
        for i in 0..n {
            let j = r.gen_range(0..n);
            mask.swap(i, j);
        }
        if mask.iter().filter(|&&m| m).count() < 2 {
            mask[0] = true;
            mask[n - 1] = true;
        }
        let raw: Vec<RealVector> =
            (0..n).map(|_| random_vector(&mut r, codom, 2.0)).collect();
        let lip = rescale_pairwise_lipschitz(sample.domain(), raw);
        let mut delta = 0.0_f64;
        let mut u_partial: Vec<Option<RealVector>> = vec![None; n];
        for i in 0..n {
            if mask[i] {
                delta = delta.max(lip[i].distance(sample.value(i)));
                u_partial[i] = Some(lip[i].clone());
            }
        }
        let body = ConvexBody::ball(RealVector::zeros(codom), delta).unwrap();
        let problem =
            ExtensionProblem::new(sample, mask, u_partial, body, ExtensionMode::Lipschitz)
                .unwrap();
        let result = extend_lipschitz(&problem, &OrderStrategy::default(), &tol)
            .unwrap_or_else(|e| panic!("instance {case} failed: {e}"));
        worst_ratio = worst_ratio.max(result.sup_dist_x - delta);
        assert!(
            result.sup_dist_x <= delta + 1e-7,
            "instance {case}: sup {} vs delta {}",
            result.sup_dist_x,
            delta
        );
        let report = verify_extension(&result, &problem, &tol).unwrap();
        assert!(report.passed, "instance {case}");
    }
    println!(
        "acceptance 02 distance_preservation: PASS ({instances} instances, worst sup excess \
         {worst_ratio:.3e})"
    );
}

/// Shared generator for the monotone suite (criteria 3 and 4).
fn monotone_instance(
    r: &mut rand_chacha::ChaCha8Rng,
) -> (ExtensionProblem, VectorFieldSample, f64) {
    let dim = r.gen_range(1..=4);
    let n = r.gen_range(4..=14);
    let field = common::random_psd(r, dim, 1.0);
    let domain = random_points(r, n, dim, 2.0);
    let values = PointSet::new(
        domain.iter().map(|x| common::apply_matrix(&field, dim, dim, x)).collect(),
    )
    .unwrap();
    let sample = VectorFieldSample::new(domain, values).unwrap();

    let a_size = r.gen_range(2..=n);
    let mut mask = vec![false; n];
    for flag in mask.iter_mut().take(a_size) {
        *flag = true;
    }
    for i in 0..n {
        let j = r.gen_range(0..n);
        mask.swap(i, j);
    }
    if mask.iter().filter(|&&m| m).count() < 2 {
        mask[0] = true;
        mask[n - 1] = true;
    }

    let mut u_partial: Vec<Option<RealVector>> = vec![None; n];
    let mut delta = 0.0_f64;
    if dim == 1 {
        // Sorted construction: nondecreasing values against the coordinate.
        let mut masked: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
        masked.sort_by(|&a, &b| {
            sample.point(a)[0].partial_cmp(&sample.point(b)[0]).unwrap()
        });
        let mut level = r.gen_range(-2.0..0.0);
        for &i in &masked {
            level += r.gen_range(0.0..1.0);
            let u = RealVector::new(vec![level]).unwrap();
            delta = delta.max(u.distance(sample.value(i)));
            u_partial[i] = Some(u);
        }
    } else {
        // Gradient-of-convex sampling: u = Ax + c with A positive semidefinite.
        let gradient_field = common::random_psd(r, dim, 1.0);
        let shift = random_vector(r, dim, 1.0);
        for i in 0..n {
            if mask[i] {
                let u = common::apply_matrix(&gradient_field, dim, dim, sample.point(i))
                    .add(&shift);
                delta = delta.max(u.distance(sample.value(i)));
                u_partial[i] = Some(u);
            }
        }
    }
    let body = ConvexBody::ball(RealVector::zeros(dim), delta).unwrap();
    let problem = ExtensionProblem::new(
        sample.clone(),
        mask,
        u_partial,
        body,
        ExtensionMode::Monotone,
    )
    .unwrap();
    (problem, sample, delta)
}

#[test]
fn acceptance_03_monotone_suite() {
    // The pairwise product bound is two decades below the default feasibility
    // slack, so the projection cycles run to a much tighter iterate change.
    let tol = Tolerances::new(1e-7, 1e-13, 400_000).unwrap();
    let mut r = rng(0xACC0_0003);
    let instances = 100;
    let mut worst_product = f64::INFINITY;
    let mut worst_membership = 0.0_f64;

    for case in 0..instances {
        let (problem, sample, _delta) = monotone_instance(&mut r);
        let result = extend_monotone(&problem, &OrderStrategy::default(), &tol)
            .unwrap_or_else(|e| panic!("instance {case} failed: {e}"));
        let n = sample.len();
        for i in 0..n {
            for j in i + 1..n {
                let du = result.u_full[i].sub(&result.u_full[j]);
                let dx = sample.point(i).sub(sample.point(j));
                let product = du.dot(&dx);
                worst_product = worst_product.min(product);
                assert!(product >= -1e-9, "instance {case}, pair ({i},{j}): {product}");
            }
            let offset = result.u_full[i].sub(sample.value(i));
            let dist = problem.body.distance(&offset, &tol).unwrap();
            worst_membership = worst_membership.max(dist);
            assert!(dist <= 1e-7, "instance {case}, point {i}: membership {dist}");
        }
    }
    println!(
        "acceptance 03 monotone_suite: PASS ({instances} instances, worst pair product \
         {worst_product:.3e}, worst membership distance {worst_membership:.3e})"
    );
}

#[test]
fn acceptance_04_strain_duality() {
    let tol = Tolerances::new(1e-7, 1e-13, 400_000).unwrap();
    let mut r = rng(0xACC0_0003); // same seed: the same monotone suite
    let instances = 100;
    let mut worst_strain_excess = f64::NEG_INFINITY;

    for case in 0..instances {
        let (monotone_problem, sample, _delta) = monotone_instance(&mut r);
        // Transform the monotone instance into its strain counterpart.
        let strain_sample = sample.identity_minus_values().unwrap();
        let strain_u: Vec<Option<RealVector>> = monotone_problem
            .u_partial
            .iter()
            .enumerate()
            .map(|(i, u)| u.as_ref().map(|val| sample.point(i).sub(val)))
            .collect();
        let strain_problem = ExtensionProblem::new(
            strain_sample,
            monotone_problem.a_mask.clone(),
            strain_u,
            monotone_problem.body.negated(),
            ExtensionMode::Strain,
        )
        .unwrap();

        let strain_result = extend_strain(&strain_problem, &OrderStrategy::default(), &tol)
            .unwrap_or_else(|e| panic!("instance {case} failed: {e}"));

        let n = sample.len();
        for i in 0..n {
            for j in i + 1..n {
                let du = strain_result.u_full[i].sub(&strain_result.u_full[j]);
                let dx = sample.point(i).sub(sample.point(j));
                let excess = du.dot(&dx) - dx.norm_squared();
                worst_strain_excess = worst_strain_excess.max(excess);
                assert!(excess <= 1e-9, "instance {case}, pair ({i},{j}): {excess}");
            }
        }

        // Reduction identity, exact: the strain output is pointwise
        // id − (monotone extension of the engine's reduced problem).
        let reduced = strain_to_monotone_reduction(&strain_problem).unwrap();
        let monotone_result =
            extend_monotone(&reduced, &OrderStrategy::default(), &tol).unwrap();
        for i in 0..n {
            let mapped = strain_problem.sample.point(i).sub(&monotone_result.u_full[i]);
            assert_eq!(
                strain_result.u_full[i], mapped,
                "instance {case}, point {i}: reduction identity is not exact"
            );
        }
    }
    println!(
        "acceptance 04 strain_duality: PASS ({instances} instances, worst strain excess \
         {worst_strain_excess:.3e}, reduction identity exact)"
    );
}

#[test]
fn acceptance_05_checker_exactness() {
    let mut r = rng(0xACC0_0005);
    let instances = 500;
    let mut worst_grid_gap = f64::NEG_INFINITY;
    let mut worst_polish_gap = f64::NEG_INFINITY;

    for case in 0..instances {
        let k = r.gen_range(1..=4);
        let mut q = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..=i {
                let val = r.gen_range(-3.0..3.0);
                q[i * k + j] = val;
                q[j * k + i] = val;
            }
        }
        let b: Vec<f64> = (0..k).map(|_| r.gen_range(-3.0..3.0)).collect();
        let c = r.gen_range(-3.0..3.0);
        let quad = SimplexQuadratic::new(q, b, c).unwrap();

        let exact = maximize_over_simplex(&quad).unwrap();
        let grid = brute_force_over_simplex(&quad, 50).unwrap();
        worst_grid_gap = worst_grid_gap.max(grid - exact.value);
        assert!(
            exact.value >= grid - 1e-9,
            "case {case}: exact {} below grid {}",
            exact.value,
            grid
        );

        let (_, argmax) = common::grid_max_on_simplex(&quad, 50);
        let (_, polished) = common::polish_max_on_simplex(&quad, &argmax, 4000);
        worst_polish_gap = worst_polish_gap.max((exact.value - polished).abs());
        assert!(
            (exact.value - polished).abs() <= 1e-6,
            "case {case}: exact {} vs polished {}",
            exact.value,
            polished
        );
    }
    println!(
        "acceptance 05 checker_exactness: PASS ({instances} quadratics, worst grid gap \
         {worst_grid_gap:.3e}, worst polish gap {worst_polish_gap:.3e})"
    );
}

#[test]
fn acceptance_06_square_constants() {
    let tol = Tolerances::default();
    let report = square_demo(&tol).unwrap();
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();

    assert!(
        (report.min_hull_distance - inv_sqrt2).abs() <= 1e-12,
        "hull distance {} vs {}",
        report.min_hull_distance,
        inv_sqrt2
    );
    assert!(
        (report.affinity_defect - 0.5 * inv_sqrt2).abs() <= 1e-12,
        "affinity defect {}",
        report.affinity_defect
    );
    let forbidden = 1.0 / (5.0 * 2.0_f64.sqrt());
    assert!((report.forbidden_threshold - forbidden).abs() <= 1e-12);
    assert!(report.lipschitz.is_satisfied(), "square field must satisfy the condition");
    assert_eq!(report.lipschitz.stats.m_checked, vec![1, 2, 3]);

    // The chain forbids exactly below the threshold: C = 0.1 collides,
    // C = 0.2 does not.
    let tight = &report.obstructions[0];
    let loose = &report.obstructions[1];
    assert!(tight.chain_forbids && !loose.chain_forbids);
    assert!((tight.lower_bound - (inv_sqrt2 - 0.4)).abs() <= 1e-12);
    assert!((loose.lower_bound - (inv_sqrt2 - 0.8)).abs() <= 1e-12);
    assert!(!tight.search.found_within_budget);
    assert!(report.parallelogram_residual <= 1e-9);

    println!(
        "acceptance 06 square_constants: PASS (hull distance {:.15}, affinity defect {:.15}, \
         forbidden threshold {:.15})",
        report.min_hull_distance, report.affinity_defect, report.forbidden_threshold
    );
}

#[test]
fn acceptance_07_delta_threshold_formula() {
    let a = delta_threshold(1.0, 1.0, 1.0).unwrap();
    let b = delta_threshold(0.0, 1.0, 2.0).unwrap();
    assert_eq!(a, 111.0);
    assert_eq!(b, 4.0);
    println!("acceptance 07 delta_threshold_formula: PASS (111 and 4, exact)");
}

#[test]
fn acceptance_08_isometry_constructor() {
    let tol = Tolerances::default();
    let mut r = rng(0xACC0_0008);
    let instances = 200;
    let mut worst_distance_residual = 0.0_f64;
    let mut worst_alignment_residual = 0.0_f64;

    for case in 0..instances {
        let m = r.gen_range(1..=3);
        let dom = r.gen_range(m.max(1)..=4);
        let target = r.gen_range(m.max(2)..=5);
        let points = loop {
            let candidate = random_points(&mut r, m, dom, 1.5);
            if m < 2 || candidate.point(0).distance(candidate.point(1)) > 0.05 {
                break candidate;
            }
        };
        // Random 1-Lipschitz v on the points, sampled from a contraction.
        let map = AffineContraction::random(&mut r, target, dom);
        let values = PointSet::new(points.iter().map(|x| map.apply(x)).collect()).unwrap();
        let w = random_unit(&mut r, target);
        let delta = r.gen_range(0.1..25.0);

        let u = construct_offset_isometry(&points, &values, &w, delta, &tol)
            .unwrap_or_else(|e| panic!("instance {case} (m={m}) failed: {e}"));

        let sqrt_delta = delta.sqrt();
        let diam = geometry::diameter(&points).unwrap();
        for i in 0..m {
            let alignment = (u.point(i).sub(values.point(i)).dot(&w) - sqrt_delta).abs();
            worst_alignment_residual = worst_alignment_residual.max(alignment);
            assert!(alignment <= 1e-9, "instance {case}, point {i}: alignment {alignment}");
            for j in i + 1..m {
                let residual =
                    (u.point(i).distance(u.point(j)) - points.point(i).distance(points.point(j)))
                        .abs();
                worst_distance_residual = worst_distance_residual.max(residual);
                assert!(residual <= 1e-9, "instance {case}, pair ({i},{j}): {residual}");
            }
            let off = u.point(i).sub(values.point(i)).norm_squared();
            assert!(off >= delta - 1e-7, "instance {case}: lower estimate");
            assert!(
                off <= delta + 4.0 * diam * diam + 1e-7,
                "instance {case}: upper estimate"
            );
        }
    }
    println!(
        "acceptance 08 isometry_constructor: PASS ({instances} instances, worst distance \
         residual {worst_distance_residual:.3e}, worst alignment residual \
         {worst_alignment_residual:.3e})"
    );
}

#[test]
fn acceptance_09_necessity_cross_check() {
    let tol = Tolerances::default();
    let mut r = rng(0xACC0_0009);
    let violating = 50;
    let affine = 50;

    for case in 0..violating {
        let m = r.gen_range(1..=3);
        let dom = r.gen_range(2..=3);
        let base_points = loop {
            let candidate = random_points(&mut r, m, dom, 1.0);
            let mut ok = true;
            for i in 0..m {
                for j in i + 1..m {
                    if candidate.point(i).distance(candidate.point(j)) < 0.3 {
                        ok = false;
                    }
                }
            }
            if ok {
                break candidate;
            }
        };
        let extra = random_vector(&mut r, dom, 1.0);
        let weights = random_simplex_weights(&mut r, m);
        let mut x_mix = RealVector::zeros(dom);
        for (i, &t) in weights.iter().enumerate() {
            x_mix.add_scaled_assign(base_points.point(i), t);
        }
        let gap = r.gen_range(0.1..0.8);
        let reach = extra.distance(&x_mix) + gap;
        let dir = random_unit(&mut r, 3);

        let mut points: Vec<RealVector> = base_points.iter().cloned().collect();
        points.push(extra.clone());
        let mut values: Vec<RealVector> = (0..m).map(|_| RealVector::zeros(3)).collect();
        values.push(dir.scale(reach));
        let sample = VectorFieldSample::new(
            PointSet::new(points).unwrap(),
            PointSet::new(values).unwrap(),
        )
        .unwrap();

        let base_indices: Vec<usize> = (0..m).collect();
        let probe = necessity_probe(&sample, &base_indices, m, &weights, 0.5, &tol).unwrap();
        assert_eq!(
            probe.verdict,
            NecessityVerdict::ViolationConfirmed,
            "violating case {case}: verdict {:?}, gap {}",
            probe.verdict,
            probe.gap
        );
        assert!(probe.gap >= 0.1 - 1e-9);

        // Independent flagging by the checker at the same tuple.
        let policy = EnumerationPolicy { m_max: m, ..EnumerationPolicy::default() };
        let check = check_lipschitz_condition(&sample, &policy, &tol).unwrap();
        assert!(!check.is_satisfied(), "violating case {case}");
        let cert = ViolationCertificate {
            base_index: m,
            tuple_indices: base_indices.clone(),
            weights: weights.clone(),
            margin: 0.0,
        };
        let margin = evaluate_certificate(ConditionKind::Lipschitz, &sample, &cert).unwrap();
        assert!(margin > 0.0, "violating case {case}: margin {margin}");
        assert!(
            check
                .certificates()
                .iter()
                .any(|c| c.base_index == m && c.tuple_indices.iter().all(|&i| i < m)),
            "violating case {case}: no certificate at the engineered tuple"
        );
    }

    let mut confirmed = 0usize;
    for _ in 0..affine {
        let dom = r.gen_range(1..=3);
        let codom = r.gen_range(2..=4);
        let n = r.gen_range(4..=8);
        let map = AffineContraction::random(&mut r, codom, dom);
        let domain = random_points(&mut r, n, dom, 2.0);
        let values = PointSet::new(domain.iter().map(|x| map.apply(x)).collect()).unwrap();
        let sample = VectorFieldSample::new(domain, values).unwrap();
        for _ in 0..4 {
            let m = r.gen_range(1..=codom.min(3));
            let mut picks: Vec<usize> = Vec::new();
            while picks.len() < m + 1 {
                let candidate = r.gen_range(0..n);
                if !picks.contains(&candidate) {
                    picks.push(candidate);
                }
            }
            let extra = picks.pop().unwrap();
            let weights = random_simplex_weights(&mut r, m);
            let probe = necessity_probe(&sample, &picks, extra, &weights, 0.5, &tol).unwrap();
            if probe.verdict == NecessityVerdict::ViolationConfirmed {
                confirmed += 1;
            }
        }
    }
    assert_eq!(confirmed, 0, "affine fields must never be confirmed as violating");

    println!(
        "acceptance 09 necessity_cross_check: PASS ({violating} engineered violations all \
         confirmed and flagged, 0/{affine} affine samples confirmed)"
    );
}

#[test]
fn acceptance_10_solver_unit_truths() {
    let tol = Tolerances::default();
    let mut r = rng(0xACC0_0010);
    let mut done = 0usize;
    let mut worst = 0.0_f64;
    while done < 100 {
        let dim = r.gen_range(2..=4);
        let c1 = random_vector(&mut r, dim, 2.0);
        let dir = random_unit(&mut r, dim);
        let d = r.gen_range(0.5..2.0);
        let c2 = c1.add(&dir.scale(d));
        let r1 = d * r.gen_range(0.6..1.2);
        let r2 = d * r.gen_range(0.6..1.2);
        if r1 + r2 < d * 1.05 || (r1 - r2).abs() > d * 0.95 {
            continue;
        }
        let start = random_vector(&mut r, dim, 5.0);
        let sys = ConstraintSystem::new(
            vec![
                ConstraintSet::Ball { center: c1.clone(), radius: r1 },
                ConstraintSet::Ball { center: c2.clone(), radius: r2 },
            ],
            dim,
        )
        .unwrap();
        let outcome = dykstra_solve(&sys, &start, &tol).unwrap();
        assert!(outcome.is_feasible());
        let expect = two_ball_best_approximation(&c1, r1, &c2, r2, &start);
        let err = outcome.point.distance(&expect);
        worst = worst.max(err);
        assert!(err <= 1e-5, "instance {done}: error {err}");
        done += 1;
    }

    // The canonical separated pair: residual 1 at the midpoint.
    let sys = ConstraintSystem::new(
        vec![
            ConstraintSet::Ball { center: v(&[0.0, 0.0]), radius: 1.0 },
            ConstraintSet::Ball { center: v(&[4.0, 0.0]), radius: 1.0 },
        ],
        2,
    )
    .unwrap();
    let probe = infeasibility_probe(&sys, &v(&[1.0, 1.0]), &tol).unwrap();
    assert!((probe.residual_lb - 1.0).abs() <= 1e-3, "residual {}", probe.residual_lb);
    assert!(probe.witness.distance(&v(&[2.0, 0.0])) <= 1e-3);

    println!(
        "acceptance 10 solver_unit_truths: PASS (100 two-ball systems, worst best-approximation \
         error {worst:.3e}; separated pair residual {:.6})",
        probe.residual_lb
    );
}
