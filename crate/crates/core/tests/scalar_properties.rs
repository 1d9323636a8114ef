//! Property batteries for the scalarizing primitives.
//!
//! The oriented-distance checks run the full property list (real-valued,
//! 1-Lipschitz, sign pattern on interior/boundary/exterior, positive
//! homogeneity, convexity, order monotonicity) on the scalar half-line, the
//! orthant, and five sector-cone geometries. The Gerstewitz checks cover the
//! level-set equivalences against the raw componentwise predicates,
//! convexity, a Lipschitz ratio bound, subadditivity, and agreement with the
//! bisection oracle on the defining feasibility predicate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgop_core::cone::SectorCone;
use sgop_core::scalar::{
    gerstewitz, oriented_distance_halfline, oriented_distance_orthant, oriented_distance_sector,
    OrthantParams,
};
use sgop_core::sphere::{tangent_basis, SpherePoint, TangentVector};
use std::f64::consts::PI;

const SLACK: f64 = 1e-9;
const SAMPLES: usize = 1000;

fn base() -> SpherePoint {
    SpherePoint::from_array([0.0, 0.0, 1.0]).unwrap()
}

fn sector(half_aperture: f64, tilt: f64) -> SectorCone {
    let p = base();
    let (e1, e2) = tangent_basis(&p);
    let dir = |phi: f64| TangentVector::projected(p, e1 * phi.cos() + e2 * phi.sin());
    SectorCone::new(p, dir(tilt - half_aperture), dir(tilt + half_aperture)).unwrap()
}

fn plane_vec(phi: f64, r: f64) -> TangentVector {
    let p = base();
    let (e1, e2) = tangent_basis(&p);
    TangentVector::projected(p, (e1 * phi.cos() + e2 * phi.sin()) * r)
}

#[test]
fn halfline_property_list() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..SAMPLES {
        let s1: f64 = rng.gen_range(-5.0..5.0);
        let s2: f64 = rng.gen_range(-5.0..5.0);
        let d1 = oriented_distance_halfline(s1);
        // (i) real valued.
        assert!(d1.is_finite());
        // (ii) 1-Lipschitz.
        assert!((d1 - oriented_distance_halfline(s2)).abs() <= (s1 - s2).abs() + 1e-12);
        // (iii)/(iv)/(v) sign pattern.
        assert!(oriented_distance_halfline(s1.abs() + 0.1) < 0.0);
        assert_eq!(oriented_distance_halfline(0.0), 0.0);
        assert!(oriented_distance_halfline(-s1.abs() - 0.1) > 0.0);
        // (vi) positive homogeneity.
        for t in [0.5, 2.0, 10.0] {
            assert!((oriented_distance_halfline(t * s1) - t * d1).abs() <= 1e-9);
        }
        // (vii) convexity (linear, so equality holds).
        let alpha: f64 = rng.gen_range(0.0..1.0);
        let mix = oriented_distance_halfline((1.0 - alpha) * s1 + alpha * s2);
        assert!(mix <= (1.0 - alpha) * d1 + alpha * oriented_distance_halfline(s2) + 1e-12);
        // (viii) monotonicity: s1 − s2 ∈ R₊ ⟹ Δ(s1) ≤ Δ(s2).
        let hi = s2 + rng.gen_range(0.0..2.0);
        assert!(oriented_distance_halfline(hi) <= oriented_distance_halfline(s2) + 1e-12);
    }
}

#[test]
fn orthant_property_list() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let l = 3;
    let rand_vec =
        |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..l).map(|_| rng.gen_range(-3.0..3.0)).collect() };
    let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    for _ in 0..SAMPLES {
        let v1 = rand_vec(&mut rng);
        let v2 = rand_vec(&mut rng);
        let d1 = oriented_distance_orthant(&v1);
        assert!(d1.is_finite());
        // 1-Lipschitz.
        let diff: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| a - b).collect();
        assert!((d1 - oriented_distance_orthant(&v2)).abs() <= norm(&diff) + 1e-12);
        // Sign pattern.
        let interior: Vec<f64> = v1.iter().map(|c| c.abs() + 0.1).collect();
        assert!(oriented_distance_orthant(&interior) < 0.0);
        let mut boundary = interior.clone();
        boundary[rng.gen_range(0..l)] = 0.0;
        assert!(oriented_distance_orthant(&boundary).abs() <= SLACK);
        let mut exterior = interior.clone();
        exterior[rng.gen_range(0..l)] = -0.2;
        assert!(oriented_distance_orthant(&exterior) > 0.0);
        // Positive homogeneity.
        for t in [0.5, 2.0, 10.0] {
            let scaled: Vec<f64> = v1.iter().map(|c| c * t).collect();
            assert!((oriented_distance_orthant(&scaled) - t * d1).abs() <= 1e-9);
        }
        // Convexity along the segment.
        let alpha: f64 = rng.gen_range(0.0..1.0);
        let mix: Vec<f64> =
            v1.iter().zip(&v2).map(|(a, b)| (1.0 - alpha) * a + alpha * b).collect();
        assert!(
            oriented_distance_orthant(&mix)
                <= (1.0 - alpha) * d1 + alpha * oriented_distance_orthant(&v2) + 1e-12
        );
        // Monotonicity: v1 − v2 ∈ R₊ˡ ⟹ Δ(v1) ≤ Δ(v2).
        let above: Vec<f64> = v2.iter().map(|c| c + rng.gen_range(0.0..1.0)).collect();
        assert!(oriented_distance_orthant(&above) <= oriented_distance_orthant(&v2) + 1e-12);
    }
}

#[test]
fn sector_property_list_over_five_geometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let geometries =
        [(0.2, 0.0), (0.5, 1.0), (PI / 4.0, -0.7), (1.1, 2.0), (1.45, 0.3)];
    for &(half, tilt) in &geometries {
        let cone = sector(half, tilt);
        let delta = |v: &TangentVector| oriented_distance_sector(&cone, v).unwrap();
        for _ in 0..SAMPLES {
            let phi1: f64 = rng.gen_range(-PI..PI);
            let r1: f64 = rng.gen_range(0.0..3.0);
            let v1 = plane_vec(phi1, r1);
            let d1 = delta(&v1);
            // (i) real valued.
            assert!(d1.is_finite());
            // (ii) 1-Lipschitz.
            let v2 = plane_vec(rng.gen_range(-PI..PI), rng.gen_range(0.0..3.0));
            assert!((d1 - delta(&v2)).abs() <= (v1.vec() - v2.vec()).norm() + 1e-12);
            // (iii) negative strictly inside.
            let inner = plane_vec(tilt + rng.gen_range(-0.9..0.9) * half * 0.9, 0.5 + r1);
            assert!(delta(&inner) < 0.0);
            // (iv) zero on the boundary rays.
            let edge = plane_vec(tilt + half, 0.1 + r1);
            assert!(delta(&edge).abs() <= SLACK);
            // (v) positive strictly outside.
            let gap = rng.gen_range(0.1..(PI - half - 0.1));
            let outer = plane_vec(tilt + half + gap, 0.1 + r1);
            assert!(delta(&outer) > 0.0);
            // (vi) positive homogeneity.
            for t in [0.5, 2.0, 10.0] {
                assert!((delta(&v1.scaled(t)) - t * d1).abs() <= 1e-9 * (1.0 + t * r1));
            }
            // (viii) monotonicity: v1 + cone element sits no higher.
            let c = TangentVector::projected(
                cone.base(),
                cone.gen_a().vec() * rng.gen_range(0.0..1.0)
                    + cone.gen_b().vec() * rng.gen_range(0.0..1.0),
            );
            let shifted = TangentVector::projected(cone.base(), v1.vec() + c.vec());
            assert!(delta(&shifted) <= d1 + 1e-12);
        }
        // (vii) convexity along 100 random segments.
        for _ in 0..100 {
            let a = plane_vec(rng.gen_range(-PI..PI), rng.gen_range(0.0..2.0));
            let b = plane_vec(rng.gen_range(-PI..PI), rng.gen_range(0.0..2.0));
            let da = delta(&a);
            let db = delta(&b);
            for alpha in [0.25, 0.5, 0.75] {
                let mix = TangentVector::projected(
                    cone.base(),
                    a.vec() * (1.0 - alpha) + b.vec() * alpha,
                );
                assert!(delta(&mix) <= (1.0 - alpha) * da + alpha * db + 1e-12);
            }
        }
    }
}

#[test]
fn gerstewitz_level_sets_match_componentwise_predicates() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..SAMPLES {
        let l = rng.gen_range(1..=4);
        let q: Vec<f64> = (0..l).map(|_| -rng.gen_range(0.1..3.0)).collect();
        let params = OrthantParams::new(q.clone()).unwrap();
        let v: Vec<f64> = (0..l).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let xi = gerstewitz(&v, &params).unwrap();

        // Strict and non-strict level sets, off the knife edge.
        for dr in [-0.37, 0.41, 1.3, -2.2] {
            let r = xi + dr;
            let strict_set = v.iter().zip(&q).all(|(vi, qi)| vi - r * qi > 0.0);
            let closed_set = v.iter().zip(&q).all(|(vi, qi)| vi - r * qi >= 0.0);
            assert_eq!(xi < r, strict_set, "xi={xi} r={r}");
            assert_eq!(xi <= r, closed_set);
        }

        // Boundary construction: v = rq + w with w on the orthant boundary.
        let r: f64 = rng.gen_range(-2.0..2.0);
        let mut w: Vec<f64> = (0..l).map(|_| rng.gen_range(0.0..2.0)).collect();
        w[rng.gen_range(0..l)] = 0.0;
        let vb: Vec<f64> = q.iter().zip(&w).map(|(qi, wi)| r * qi + wi).collect();
        assert!((gerstewitz(&vb, &params).unwrap() - r).abs() <= 1e-12);
    }
}

#[test]
fn gerstewitz_convex_lipschitz_subadditive() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..SAMPLES {
        let l = rng.gen_range(1..=4);
        let q: Vec<f64> = (0..l).map(|_| -rng.gen_range(0.1..3.0)).collect();
        let params = OrthantParams::new(q.clone()).unwrap();
        let v: Vec<f64> = (0..l).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let w: Vec<f64> = (0..l).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let xi_v = gerstewitz(&v, &params).unwrap();
        let xi_w = gerstewitz(&w, &params).unwrap();

        // Convexity along the segment.
        let alpha: f64 = rng.gen_range(0.0..1.0);
        let mix: Vec<f64> =
            v.iter().zip(&w).map(|(a, b)| (1.0 - alpha) * a + alpha * b).collect();
        assert!(
            gerstewitz(&mix, &params).unwrap() <= (1.0 - alpha) * xi_v + alpha * xi_w + 1e-12
        );

        // Lipschitz ratio bounded by max_i 1/|q_i| in the sup norm.
        let lip: f64 = q.iter().map(|qi| 1.0 / qi.abs()).fold(0.0, f64::max);
        let sup: f64 = v.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!((xi_v - xi_w).abs() <= lip * sup + 1e-12);

        // Subadditivity.
        let sum: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        assert!(gerstewitz(&sum, &params).unwrap() <= xi_v + xi_w + 1e-12);
    }
}

#[test]
fn gerstewitz_matches_bisection_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let bisect = |v: &[f64], q: &[f64]| -> f64 {
        let feasible = |t: f64| v.iter().zip(q).all(|(vi, qi)| vi - t * qi >= 0.0);
        let (mut lo, mut hi) = (-1e6, 1e6);
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    for _ in 0..1000 {
        let l = rng.gen_range(1..=4);
        let q: Vec<f64> = (0..l).map(|_| -rng.gen_range(0.1..3.0)).collect();
        let params = OrthantParams::new(q.clone()).unwrap();
        let v: Vec<f64> = (0..l).map(|_| rng.gen_range(-50.0..50.0)).collect();
        let closed = gerstewitz(&v, &params).unwrap();
        assert!((closed - bisect(&v, &q)).abs() <= 1e-9);
    }
}
