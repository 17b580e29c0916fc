//! Property tests for the projection primitives, the offset bodies, and the
//! simplex optimizer.

mod common;

use common::{grid_max_on_simplex, polish_max_on_simplex};
use lipext_core::body::{ConvexBody, ShiftedBody};
use lipext_core::geometry::{
    self, diameter, project_ball, project_halfspace, project_hull, rigid_embed, PointSet,
    RealVector, Tolerances,
};
use lipext_core::simplex::{
    brute_force_over_simplex, maximize_over_simplex, minimize_over_simplex, SimplexQuadratic,
};

use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -10.0_f64..10.0_f64
}

fn vector(dim: usize) -> impl Strategy<Value = RealVector> {
    prop::collection::vec(coord(), dim).prop_map(|v| RealVector::new(v).unwrap())
}

fn dim_and_vectors(count: usize) -> impl Strategy<Value = (usize, Vec<RealVector>)> {
    (1usize..=5).prop_flat_map(move |dim| {
        (Just(dim), prop::collection::vec(vector(dim), count))
    })
}

fn dim_and_generators() -> impl Strategy<Value = (usize, Vec<RealVector>, RealVector)> {
    (1usize..=5).prop_flat_map(|dim| {
        (
            Just(dim),
            prop::collection::vec(vector(dim), 1..=7),
            vector(dim),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ball_projection_idempotent_and_nonexpansive(
        (dim, vs) in dim_and_vectors(3),
        radius in 0.0_f64..5.0,
    ) {
        let center = &vs[0];
        let p = &vs[1];
        let q = &vs[2];
        let pp = project_ball(p, center, radius).unwrap();
        let pq = project_ball(q, center, radius).unwrap();
        let ppp = project_ball(&pp, center, radius).unwrap();
        prop_assert!(ppp.distance(&pp) <= 1e-12, "idempotence, dim {dim}");
        prop_assert!(pp.distance(&pq) <= p.distance(q) + 1e-12, "nonexpansiveness");
    }

    #[test]
    fn halfspace_projection_idempotent_and_nonexpansive(
        (dim, vs) in dim_and_vectors(3),
        offset in -5.0_f64..5.0,
    ) {
        let normal = &vs[0];
        prop_assume!(normal.norm() > 1e-6);
        let p = &vs[1];
        let q = &vs[2];
        let pp = project_halfspace(p, normal, offset).unwrap();
        let pq = project_halfspace(q, normal, offset).unwrap();
        let ppp = project_halfspace(&pp, normal, offset).unwrap();
        prop_assert!(ppp.distance(&pp) <= 1e-12, "idempotence, dim {dim}");
        prop_assert!(pp.distance(&pq) <= p.distance(q) + 1e-12, "nonexpansiveness");
    }

    #[test]
    fn hull_projection_weights_and_idempotence((dim, gens, p) in dim_and_generators()) {
        let generators = PointSet::new(gens).unwrap();
        let (point, weights) = project_hull(&p, &generators).unwrap();

        let sum: f64 = weights.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(weights.iter().all(|&w| w >= -1e-12));
        let mut recombined = RealVector::zeros(dim);
        for (g, &w) in generators.iter().zip(&weights) {
            recombined.add_scaled_assign(g, w);
        }
        prop_assert!(recombined.distance(&point) <= 1e-10);

        let (point2, _) = project_hull(&point, &generators).unwrap();
        prop_assert!(point2.distance(&point) <= 1e-9, "idempotence");
    }

    #[test]
    fn hull_projection_nonexpansive((dim, gens, p) in dim_and_generators(), q in vector(5)) {
        prop_assume!(dim == 5);
        let generators = PointSet::new(gens).unwrap();
        let (pp, _) = project_hull(&p, &generators).unwrap();
        let (pq, _) = project_hull(&q, &generators).unwrap();
        prop_assert!(pp.distance(&pq) <= p.distance(&q) + 1e-9);
    }

    #[test]
    fn hull_projection_beats_every_generator_mix(
        (dim, gens, p) in dim_and_generators(),
        raw in prop::collection::vec(0.0_f64..1.0, 7),
    ) {
        // The projected point must be at least as close as any convex mix.
        let generators = PointSet::new(gens).unwrap();
        let (point, _) = project_hull(&p, &generators).unwrap();
        let k = generators.len();
        let mut weights: Vec<f64> = raw[..k].to_vec();
        let sum: f64 = weights.iter().sum();
        prop_assume!(sum > 1e-9);
        for w in &mut weights {
            *w /= sum;
        }
        let mut mix = RealVector::zeros(dim);
        for (g, &w) in generators.iter().zip(&weights) {
            mix.add_scaled_assign(g, w);
        }
        prop_assert!(point.distance(&p) <= mix.distance(&p) + 1e-9);
    }

    #[test]
    fn rigid_embed_round_trips_random_configurations((dim, points) in dim_and_vectors(5)) {
        let ps = PointSet::new(points).unwrap();
        let k = ps.len();
        let mut dists = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                dists[i * k + j] = ps.point(i).distance(ps.point(j));
            }
        }
        let tol = Tolerances::default();
        let embedded = rigid_embed(&dists, k, dim, &tol).unwrap();
        for i in 0..k {
            for j in 0..k {
                let got = embedded.point(i).distance(embedded.point(j));
                prop_assert!((got - dists[i * k + j]).abs() <= tol.feas_tol);
            }
        }
        prop_assert!(embedded.point(0).norm() <= 1e-12);
    }

    #[test]
    fn diameter_is_max_pairwise((_dim, points) in dim_and_vectors(6)) {
        let ps = PointSet::new(points).unwrap();
        let d = diameter(&ps).unwrap();
        let mut expect = 0.0_f64;
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                expect = expect.max(ps.point(i).distance(ps.point(j)));
            }
        }
        prop_assert_eq!(d, expect);
    }

    #[test]
    fn body_projection_lands_inside_and_is_sound(
        (dim, vs) in dim_and_vectors(4),
        radius in 0.1_f64..5.0,
        offsets in prop::collection::vec(-3.0_f64..3.0, 2),
    ) {
        let tol = Tolerances::default();
        let p = &vs[0];
        let q = &vs[1];

        let ball = ConvexBody::ball(vs[2].clone(), radius).unwrap();
        let proj = ball.project(p, &tol).unwrap();
        prop_assert!(ball.contains(&proj, tol.feas_tol).unwrap());
        let again = ball.project(&proj, &tol).unwrap();
        prop_assert!(again.distance(&proj) <= 1e-12);
        let proj_q = ball.project(q, &tol).unwrap();
        prop_assert!(proj.distance(&proj_q) <= p.distance(q) + 1e-12);

        prop_assume!(vs[2].norm() > 1e-6 && vs[3].norm() > 1e-6);
        // Anchor both half-spaces on a common witness point so the
        // intersection is guaranteed nonempty (emptiness is out of contract
        // for projection).
        let witness = &vs[1];
        let slab = ConvexBody::halfspace_intersection(vec![
            (vs[2].clone(), vs[2].dot(witness) - offsets[0].abs()),
            (vs[3].clone(), vs[3].dot(witness) - offsets[1].abs()),
        ])
        .unwrap();
        let proj = slab.project(p, &tol).unwrap();
        prop_assert!(slab.contains(&proj, tol.feas_tol).unwrap(), "dim {dim}");
        let again = slab.project(&proj, &tol).unwrap();
        prop_assert!(again.distance(&proj) <= 10.0 * tol.solve_tol.max(1e-12) + 1e-9);
        let proj_q = slab.project(q, &tol).unwrap();
        prop_assert!(proj.distance(&proj_q) <= p.distance(q) + 10.0 * tol.solve_tol + 1e-9);
    }

    #[test]
    fn shifted_body_projection_identity(
        (dim, vs) in dim_and_vectors(3),
        radius in 0.1_f64..5.0,
    ) {
        let _ = dim;
        let tol = Tolerances::default();
        let body = ConvexBody::ball(vs[0].clone(), radius).unwrap();
        let shifted = ShiftedBody::new(body.clone(), vs[1].clone()).unwrap();
        let direct = shifted.project(&vs[2], &tol).unwrap();
        let manual = vs[1].add(&body.project(&vs[2].sub(&vs[1]), &tol).unwrap());
        prop_assert_eq!(direct, manual);
    }
}

fn quadratic(k: usize) -> impl Strategy<Value = SimplexQuadratic> {
    (
        prop::collection::vec(-3.0_f64..3.0, k * k),
        prop::collection::vec(-3.0_f64..3.0, k),
        -3.0_f64..3.0,
    )
        .prop_map(move |(raw, b, c)| {
            let mut q = vec![0.0; k * k];
            for i in 0..k {
                for j in 0..k {
                    q[i * k + j] = 0.5 * (raw[i * k + j] + raw[j * k + i]);
                }
            }
            SimplexQuadratic::new(q, b, c).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_maximum_dominates_grid(
        q in (1usize..=4).prop_flat_map(quadratic),
        resolution in 1usize..=23,
    ) {
        let exact = maximize_over_simplex(&q).unwrap();
        let grid = brute_force_over_simplex(&q, resolution).unwrap();
        prop_assert!(exact.value >= grid - 1e-9);
        // Witness validity.
        let sum: f64 = exact.t.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(exact.t.iter().all(|&t| t >= 0.0));
        prop_assert!((q.evaluate(&exact.t) - exact.value).abs() <= 1e-10);
        // Min/max consistency.
        let min = minimize_over_simplex(&q).unwrap();
        prop_assert!(min.value <= exact.value + 1e-12);
    }

    #[test]
    fn concave_maximum_matches_projected_gradient_polish(
        k in 2usize..=4,
        raw in prop::collection::vec(-2.0_f64..2.0, 16),
        b in prop::collection::vec(-2.0_f64..2.0, 4),
    ) {
        // Build a negative semidefinite matrix -GᵀG.
        let mut q = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = 0.0;
                for l in 0..k {
                    acc += raw[l * 4 + i] * raw[l * 4 + j];
                }
                q[i * k + j] = -acc;
            }
        }
        let quad = SimplexQuadratic::new(q, b[..k].to_vec(), 0.0).unwrap();
        let exact = maximize_over_simplex(&quad).unwrap();
        let uniform = vec![1.0 / k as f64; k];
        let (_, polished) = polish_max_on_simplex(&quad, &uniform, 4000);
        prop_assert!((exact.value - polished).abs() <= 1e-8,
            "exact {} vs polished {}", exact.value, polished);
    }
}

#[test]
fn grid_argmax_polish_agrees_with_exact_on_indefinite_quadratics() {
    // Indefinite quadratics: exact value vs polished grid argmax.
    let mut rng = common::rng(0x5ea1);
    for _ in 0..60 {
        let k = 1 + (rand::Rng::gen_range(&mut rng, 0..4usize));
        let mut q = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..=i {
                let val = rand::Rng::gen_range(&mut rng, -2.0..2.0);
                q[i * k + j] = val;
                q[j * k + i] = val;
            }
        }
        let b: Vec<f64> = (0..k).map(|_| rand::Rng::gen_range(&mut rng, -2.0..2.0)).collect();
        let quad = SimplexQuadratic::new(q, b, 0.0).unwrap();
        let exact = maximize_over_simplex(&quad).unwrap();
        let (_, argmax) = grid_max_on_simplex(&quad, 50);
        let (_, polished) = polish_max_on_simplex(&quad, &argmax, 4000);
        assert!(
            (exact.value - polished).abs() <= 1e-6,
            "exact {} vs polished {}",
            exact.value,
            polished
        );
    }
}

#[test]
fn hull_projection_triangle_matches_fine_grid() {
    // Grid over simplex weights confirms the projected distance.
    let gens = PointSet::new(vec![
        common::v(&[0.0, 0.0]),
        common::v(&[2.0, 0.0]),
        common::v(&[0.0, 2.0]),
    ])
    .unwrap();
    let p = common::v(&[1.0, 1.0]);
    let (point, _) = project_hull(&p, &gens).unwrap();
    let mut best = f64::INFINITY;
    let steps = 1000;
    for a in 0..=steps {
        for b in 0..=(steps - a) {
            let t = [
                a as f64 / steps as f64,
                b as f64 / steps as f64,
                (steps - a - b) as f64 / steps as f64,
            ];
            let mut mix = RealVector::zeros(2);
            for (g, &w) in gens.iter().zip(&t) {
                mix.add_scaled_assign(g, w);
            }
            best = best.min(mix.distance(&p));
        }
    }
    assert!(point.distance(&p) <= best + 1e-9);
    assert!(point.distance(&p) < 1e-10, "interior point distance is zero");
    let _ = geometry::hull_distance(&p, &gens).unwrap();
}
