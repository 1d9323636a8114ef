//! Seeded random instance generation for the verification suites.
//!
//! Instances are drawn reproducibly from a ChaCha stream: a random patch, a
//! sector cone with random tilt and aperture at the reference point, an
//! objective from the closed registry, and ball/half-space constraints that
//! keep the feasible set visible on the grid. Candidate points are feasible
//! grid samples spread deterministically across the feasible list.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgop_core::cone::SectorCone;
use sgop_core::problem::{
    is_feasible, ConstraintTerm, GopInstance, Objective, Resolution, Tolerances,
};
use sgop_core::sphere::{
    exp_map, sample_patch, tangent_basis, Patch, SpherePoint, TangentVector,
};
use sgop_core::Vec3;
use std::f64::consts::PI;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    SpherePoint::new(Vec3::new(r * phi.cos(), r * phi.sin(), z)).unwrap()
}

pub fn frame_dir(p: &SpherePoint, phi: f64) -> Vec3 {
    let (e1, e2) = tangent_basis(p);
    e1 * phi.cos() + e2 * phi.sin()
}

pub fn random_tangent(rng: &mut ChaCha8Rng, p: &SpherePoint, max_norm: f64) -> TangentVector {
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let norm: f64 = rng.gen_range(0.0..max_norm);
    TangentVector::projected(*p, frame_dir(p, phi) * norm)
}

pub fn cone_span(base: SpherePoint, lo: f64, hi: f64) -> SectorCone {
    let dir = |phi: f64| TangentVector::projected(base, frame_dir(&base, phi));
    SectorCone::new(base, dir(lo), dir(hi)).unwrap()
}

/// A generated instance with feasible candidate points.
pub struct SuiteInstance {
    pub instance: GopInstance,
    pub candidates: Vec<SpherePoint>,
}

/// Draws a general instance: random geometry, an objective from the whole
/// registry, and one to three constraints with a nonempty sampled K.
pub fn random_instance(rng: &mut ChaCha8Rng, resolution: Resolution) -> SuiteInstance {
    loop {
        let center = random_point(rng);
        let radius: f64 = rng.gen_range(0.3..0.6);
        let patch = Patch::new(center, radius).unwrap();
        let ref_point = center;

        let tilt: f64 = rng.gen_range(0.0..2.0 * PI);
        let aperture: f64 = rng.gen_range(0.5..2.4);
        let cone = cone_span(ref_point, tilt - aperture / 2.0, tilt + aperture / 2.0);

        let objective = match rng.gen_range(0..5) {
            0 | 1 | 2 => Objective::Identity,
            3 => Objective::Rotation {
                axis: Vec3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0) + 1.5,
                ),
                angle: rng.gen_range(-0.3..0.3),
            },
            _ => {
                let anchor_dir = random_tangent(rng, &ref_point, 0.4 * radius);
                Objective::Pull { anchor: exp_map(&anchor_dir).unwrap(), t: rng.gen_range(0.0..1.0) }
            }
        };

        let mut constraints = Vec::new();
        let ball_center = exp_map(&random_tangent(rng, &ref_point, 0.3 * radius)).unwrap();
        constraints.push(ConstraintTerm::Ball {
            center: ball_center,
            radius: rng.gen_range(0.4 * radius..0.9 * radius),
        });
        for _ in 0..rng.gen_range(0..3u32) {
            let anchor = exp_map(&random_tangent(rng, &ref_point, 0.4 * radius)).unwrap();
            let normal = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if normal.norm() < 1e-3 {
                continue;
            }
            // Offset chosen so the anchor keeps a little slack.
            let offset = normal.dot(anchor.coords()) - rng.gen_range(0.0..0.2);
            constraints.push(ConstraintTerm::Affine { normal, offset });
        }

        let Ok(instance) = GopInstance::new(
            patch,
            ref_point,
            cone,
            objective,
            constraints,
            Tolerances::default(),
        ) else {
            continue;
        };

        let candidates = feasible_candidates(&instance, resolution, 5);
        if candidates.is_empty() {
            continue;
        }
        return SuiteInstance { instance, candidates };
    }
}

/// Instances for the scalarization batteries, engineered in two regimes
/// that keep the quasi-minimum, the impossibility scan, and brute-force
/// efficiency in agreement:
///
/// * `true` regime — a wedge feasible set with the cone perpendicular to
///   it: the candidate is G-minimal and efficient;
/// * `false` regime — a ball feasible set with the cone through it: the
///   quasi-minimum improves and efficiency fails symmetrically.
///
/// Returns the instance, the candidate, and the regime flag.
pub fn random_scalarization_instance(
    rng: &mut ChaCha8Rng,
    resolution: Resolution,
) -> (GopInstance, SpherePoint, bool) {
    let agree_true = rng.gen_bool(0.5);
    loop {
        let center = random_point(rng);
        let radius: f64 = rng.gen_range(0.3..0.5);
        let patch = Patch::new(center, radius).unwrap();
        let y = center;
        let orient: f64 = rng.gen_range(0.0..2.0 * PI);

        let (cone, constraints) = if agree_true {
            // K-sector of half-width ~45° about `orient`; cone perpendicular.
            let half = rng.gen_range(0.6..0.9);
            let n1 = frame_dir(&y, orient + PI / 2.0 - half);
            let n2 = frame_dir(&y, orient - PI / 2.0 + half);
            let aperture = rng.gen_range(0.3..0.7);
            let cone_center = orient + PI / 2.0 + rng.gen_range(-0.05..0.05);
            let cone = cone_span(y, cone_center - aperture / 2.0, cone_center + aperture / 2.0);
            let constraints = vec![
                ConstraintTerm::Affine { normal: n1, offset: 0.0 },
                ConstraintTerm::Affine { normal: n2, offset: 0.0 },
                ConstraintTerm::Ball { center: y, radius: 0.9 * radius },
            ];
            (cone, constraints)
        } else {
            let aperture = rng.gen_range(0.4..1.2);
            let cone = cone_span(y, orient - aperture / 2.0, orient + aperture / 2.0);
            let constraints =
                vec![ConstraintTerm::Ball { center: y, radius: 0.9 * radius }];
            (cone, constraints)
        };

        let Ok(instance) = GopInstance::new(
            patch,
            y,
            cone,
            Objective::Identity,
            constraints,
            Tolerances::default(),
        ) else {
            continue;
        };
        if !is_feasible(&instance, &y).unwrap_or(false) {
            continue;
        }
        if feasible_candidates(&instance, resolution, 1).is_empty() {
            continue;
        }
        return (instance, y, agree_true);
    }
}

/// Up to `n` feasible grid samples, spread evenly along the deterministic
/// sample order.
pub fn feasible_candidates(
    instance: &GopInstance,
    resolution: Resolution,
    n: usize,
) -> Vec<SpherePoint> {
    let Ok(samples) = sample_patch(instance.patch(), resolution.radial, resolution.angular)
    else {
        return Vec::new();
    };
    let feasible: Vec<SpherePoint> = samples
        .into_iter()
        .filter(|x| is_feasible(instance, x).unwrap_or(false))
        .collect();
    if feasible.is_empty() {
        return Vec::new();
    }
    let stride = (feasible.len() / n.max(1)).max(1);
    feasible.into_iter().step_by(stride).take(n).collect()
}
