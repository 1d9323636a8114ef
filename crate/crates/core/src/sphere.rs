//! Closed-form geometry of the unit 2-sphere.
//!
//! Points live on S² = {x ∈ R³ : ‖x‖ = 1}; the tangent space at `x` is the
//! orthogonal 2-plane T_x = {v ∈ R³ : ⟨x,v⟩ = 0}. Everything below is the
//! standard constant-curvature toolkit in closed form:
//!
//! * intrinsic distance `d(x,y) = arccos⟨x,y⟩ ∈ [0, π]`,
//! * exponential map `exp_x v = cos‖v‖·x + sin‖v‖·v/‖v‖`,
//! * logarithm map `log_x q = θ·ŵ` with `θ = d(x,q)` and `ŵ` the unit
//!   tangential component of `q` at `x`,
//! * unit-speed minimal geodesics `γ_xy(t)`,
//! * parallel transport along minimal geodesics,
//! * a deterministic polar sampling grid over a geodesic ball.
//!
//! All operations work inside the injectivity region: near-antipodal pairs
//! are rejected with [`Error::Antipodal`] rather than silently producing
//! garbage, and inner products are clamped to `[-1, 1]` before `arccos`.

use crate::error::{Error, Result};
use crate::math;
use crate::vec3::Vec3;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Orthogonality/unit-norm tolerance for stored invariants.
pub const TOL_UNIT: f64 = 1e-12;
/// Pairs with `d(p,q) ≥ π − TOL_ANTIPODAL` are treated as antipodal.
pub const TOL_ANTIPODAL: f64 = 1e-9;
/// Smallest vector norm a constructor will renormalize.
const MIN_CONSTRUCT_NORM: f64 = 1e-6;
/// Patch radii are kept strictly below π/2 so geodesic balls stay convex.
const MAX_PATCH_RADIUS: f64 = PI / 2.0 - 1e-6;

/// A point of the unit sphere, stored as a unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    coords: Vec3,
}

impl SpherePoint {
    /// Builds a point from ambient coordinates, renormalizing to unit norm.
    ///
    /// Inputs with norm below `1e-6` are rejected as directionless.
    pub fn new(coords: Vec3) -> Result<Self> {
        match coords.normalized(MIN_CONSTRUCT_NORM) {
            Some(unit) => Ok(SpherePoint { coords: unit }),
            None => Err(Error::Invalid(format!(
                "sphere point needs a direction; got norm {:.3e}",
                coords.norm()
            ))),
        }
    }

    pub fn from_array(a: [f64; 3]) -> Result<Self> {
        Self::new(Vec3::from_array(a))
    }

    #[inline]
    pub fn coords(&self) -> Vec3 {
        self.coords
    }

    /// The antipode −p.
    #[inline]
    pub fn antipode(&self) -> SpherePoint {
        SpherePoint { coords: -self.coords }
    }

    /// Exact coordinate equality; used where determinism contracts require
    /// bitwise-stable deduplication.
    #[inline]
    pub fn same_coords(&self, other: &SpherePoint) -> bool {
        self.coords == other.coords
    }
}

/// A tangent vector: a base point plus an ambient 3-vector orthogonal to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    base: SpherePoint,
    vec: Vec3,
}

impl TangentVector {
    /// Builds a tangent vector, requiring `⟨base, vec⟩ = 0` within `TOL_UNIT`.
    pub fn new(base: SpherePoint, vec: Vec3) -> Result<Self> {
        let dot = base.coords.dot(vec);
        if dot.abs() > TOL_UNIT * (1.0 + vec.norm()) {
            return Err(Error::Invalid(format!(
                "vector is not tangent: <base, vec> = {dot:.3e}"
            )));
        }
        // Remove the residual normal component so stored invariants are exact.
        Ok(TangentVector { base, vec: vec - base.coords * dot })
    }

    /// Projects an arbitrary ambient vector onto the tangent plane at `base`.
    pub fn projected(base: SpherePoint, vec: Vec3) -> Self {
        let dot = base.coords.dot(vec);
        TangentVector { base, vec: vec - base.coords * dot }
    }

    /// The zero vector of `T_base`.
    pub fn zero(base: SpherePoint) -> Self {
        TangentVector { base, vec: Vec3::ZERO }
    }

    #[inline]
    pub fn base(&self) -> SpherePoint {
        self.base
    }

    #[inline]
    pub fn vec(&self) -> Vec3 {
        self.vec
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    /// Same tangent plane test; bases must agree to `TOL_UNIT` in coordinates.
    pub fn same_base(&self, other: &TangentVector) -> bool {
        (self.base.coords - other.base.coords).norm() <= TOL_UNIT
    }

    pub fn based_at(&self, point: &SpherePoint) -> bool {
        (self.base.coords - point.coords).norm() <= TOL_UNIT
    }

    /// Scales the vector, staying in the same tangent plane.
    pub fn scaled(&self, s: f64) -> TangentVector {
        TangentVector { base: self.base, vec: self.vec * s }
    }

    /// Adds a vector from the same tangent plane.
    pub fn add(&self, other: &TangentVector) -> Result<TangentVector> {
        if !self.same_base(other) {
            return Err(Error::BaseMismatch);
        }
        Ok(TangentVector { base: self.base, vec: self.vec + other.vec })
    }
}

/// A geodesic ball around `center` with radius strictly below π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Patch {
    center: SpherePoint,
    radius: f64,
}

impl Patch {
    pub fn new(center: SpherePoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius <= MAX_PATCH_RADIUS) {
            return Err(Error::Range(format!(
                "patch radius must lie in (0, {MAX_PATCH_RADIUS:.6}); got {radius}"
            )));
        }
        Ok(Patch { center, radius })
    }

    #[inline]
    pub fn center(&self) -> SpherePoint {
        self.center
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Membership with a hair of slack so boundary samples stay inside.
    pub fn contains(&self, p: &SpherePoint) -> bool {
        distance(&self.center, p) <= self.radius + TOL_UNIT
    }
}

/// Intrinsic distance `d(p,q) = arccos⟨p,q⟩`.
///
/// Evaluated as `atan2(‖p×q‖, ⟨p,q⟩)` — the same angle, but exact at
/// coincident points and well conditioned at both ends of `[0, π]`, where
/// a bare `arccos` of the (clamped) inner product loses half the mantissa.
pub fn distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    let c = p.coords.dot(q.coords).clamp(-1.0, 1.0);
    let s = p.coords.cross(q.coords).norm();
    math::atan2(s, c)
}

/// Exponential map: follows the geodesic with initial velocity `v` for unit time.
///
/// Restricted to `‖v‖ < π` (the injectivity radius) for this artifact.
pub fn exp_map(v: &TangentVector) -> Result<SpherePoint> {
    let norm = v.norm();
    if norm >= PI {
        return Err(Error::Range(format!(
            "exp_map needs ‖v‖ < π for injectivity; got {norm}"
        )));
    }
    if norm == 0.0 {
        return Ok(v.base);
    }
    let p = v.base.coords;
    let dir = v.vec * (1.0 / norm);
    let coords = p * math::cos(norm) + dir * math::sin(norm);
    // cos²+sin² keeps this unit to machine precision; renormalize anyway.
    Ok(SpherePoint { coords: coords.normalized(MIN_CONSTRUCT_NORM).expect("unit") })
}

/// Logarithm map: the initial velocity of the minimal geodesic from `p` to `q`.
///
/// `‖log_p q‖ = d(p,q)` exactly; fails with [`Error::Antipodal`] when
/// `d(p,q) ≥ π − TOL_ANTIPODAL`.
pub fn log_map(p: &SpherePoint, q: &SpherePoint) -> Result<TangentVector> {
    let theta = distance(p, q);
    if theta >= PI - TOL_ANTIPODAL {
        return Err(Error::Antipodal);
    }
    // Tangential component of q at p: (I − pp^T) q.
    let w = q.coords - p.coords * p.coords.dot(q.coords);
    match w.normalized(1e-15) {
        Some(unit) => Ok(TangentVector { base: *p, vec: unit * theta }),
        // q = p (or numerically indistinguishable): log is the zero vector.
        None => Ok(TangentVector::zero(*p)),
    }
}

/// Point at arc length `t` along the unit-speed minimal geodesic from `x` to `y`.
///
/// Uses the explicit great-circle formula; `t` must lie in `[0, d(x,y)]`.
pub fn geodesic_point(x: &SpherePoint, y: &SpherePoint, t: f64) -> Result<SpherePoint> {
    let d = distance(x, y);
    if d >= PI - TOL_ANTIPODAL {
        return Err(Error::Antipodal);
    }
    if !(0.0..=d + TOL_UNIT).contains(&t) {
        return Err(Error::Range(format!(
            "geodesic parameter {t} outside [0, {d}]"
        )));
    }
    if d <= TOL_UNIT {
        // x = y within tolerance; only t = 0 reaches here.
        return Ok(*x);
    }
    let c = x.coords.dot(y.coords).clamp(-1.0, 1.0);
    let s = math::sqrt(1.0 - c * c);
    let (sin_t, cos_t) = (math::sin(t), math::cos(t));
    let coords = x.coords * (cos_t - c * sin_t / s) + y.coords * (sin_t / s);
    Ok(SpherePoint { coords: coords.normalized(MIN_CONSTRUCT_NORM).expect("unit") })
}

/// Parallel transport of `v` along the minimal geodesic from `v.base` to `to`.
///
/// Decomposition form: with `ê = log_base(to)/d`, the component of `v`
/// orthogonal to the geodesic plane is unchanged, and the `ê` component maps
/// to `cos d·ê' − sin d·base` evaluated at the far end. Identity when
/// `to = v.base`; preserves inner products.
pub fn parallel_transport(v: &TangentVector, to: &SpherePoint) -> Result<TangentVector> {
    let d = distance(&v.base, to);
    if d >= PI - TOL_ANTIPODAL {
        return Err(Error::Antipodal);
    }
    if d <= TOL_UNIT {
        return Ok(TangentVector { base: *to, vec: v.vec });
    }
    let dir = log_map(&v.base, to)?;
    let e = dir.vec * (1.0 / d);
    let along = v.vec.dot(e);
    let perp = v.vec - e * along;
    let e_transported = e * math::cos(d) - v.base.coords * math::sin(d);
    let vec = perp + e_transported * along;
    // Clean any residual normal component at the destination.
    Ok(TangentVector::projected(*to, vec))
}

/// Deterministic polar grid over a geodesic ball.
///
/// Returns the center followed by `radial_steps × angular_steps` points in
/// radius-major, angle-minor order: ring `i` has radius `radius·i/radial_steps`
/// and angles `2πj/angular_steps` in a fixed tangent frame at the center.
/// Repeated calls with equal arguments produce bitwise-identical sequences.
pub fn sample_patch(
    patch: &Patch,
    radial_steps: u32,
    angular_steps: u32,
) -> Result<Vec<SpherePoint>> {
    if radial_steps < 1 {
        return Err(Error::Range(format!("radial_steps must be ≥ 1; got {radial_steps}")));
    }
    if angular_steps < 3 {
        return Err(Error::Range(format!("angular_steps must be ≥ 3; got {angular_steps}")));
    }
    let (e1, e2) = tangent_basis(&patch.center);
    let mut out = Vec::with_capacity(1 + (radial_steps * angular_steps) as usize);
    out.push(patch.center);
    for i in 1..=radial_steps {
        let r = patch.radius * f64::from(i) / f64::from(radial_steps);
        for j in 0..angular_steps {
            let phi = 2.0 * PI * f64::from(j) / f64::from(angular_steps);
            let dir = e1 * math::cos(phi) + e2 * math::sin(phi);
            let v = TangentVector { base: patch.center, vec: dir * r };
            out.push(exp_map(&v).expect("radius < π/2 stays in injectivity range"));
        }
    }
    Ok(out)
}

/// A deterministic orthonormal basis of the tangent plane at `p`.
///
/// Picks the coordinate axis least aligned with `p` as the seed, so the frame
/// is a pure function of the point.
pub fn tangent_basis(p: &SpherePoint) -> (Vec3, Vec3) {
    let c = p.coords();
    let seed = if c.x.abs() <= c.y.abs() && c.x.abs() <= c.z.abs() {
        Vec3::new(1.0, 0.0, 0.0)
    } else if c.y.abs() <= c.z.abs() {
        Vec3::new(0.0, 1.0, 0.0)
    } else {
        Vec3::new(0.0, 0.0, 1.0)
    };
    let e1 = c.cross(seed).normalized(1e-12).expect("seed not parallel");
    let e2 = c.cross(e1);
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::new(Vec3::new(x, y, z)).unwrap()
    }

    #[test]
    fn constructor_renormalizes_and_rejects() {
        let p = SpherePoint::new(Vec3::new(3.0, 4.0, 0.0)).unwrap();
        assert_relative_eq!(p.coords().norm(), 1.0, epsilon = 1e-15);
        assert!(SpherePoint::new(Vec3::new(1e-7, 0.0, 0.0)).is_err());
    }

    #[test]
    fn tangent_constructor_enforces_orthogonality() {
        let p = pt(1.0, 0.0, 0.0);
        assert!(TangentVector::new(p, Vec3::new(0.1, 1.0, 0.0)).is_err());
        let v = TangentVector::new(p, Vec3::new(0.0, 1.0, 0.5)).unwrap();
        assert!(v.vec().dot(p.coords()).abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let p = pt(0.3, -0.2, 0.9);
        assert_eq!(distance(&p, &p), 0.0);
        assert_relative_eq!(
            distance(&pt(1.0, 0.0, 0.0), &pt(0.0, 1.0, 0.0)),
            PI / 2.0,
            epsilon = 1e-15
        );
        // d(x,y) = π exactly at antipodes.
        assert_relative_eq!(distance(&p, &p.antipode()), PI, epsilon = 1e-15);
    }

    #[test]
    fn exp_map_examples() {
        let p = pt(1.0, 0.0, 0.0);
        assert_eq!(exp_map(&TangentVector::zero(p)).unwrap(), p);

        let v = TangentVector::new(p, Vec3::new(0.0, PI / 2.0, 0.0)).unwrap();
        let q = exp_map(&v).unwrap();
        assert_relative_eq!(q.coords().x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(q.coords().y, 1.0, epsilon = 1e-15);

        let half = TangentVector::new(p, Vec3::new(0.0, PI / 4.0, 0.0)).unwrap();
        let r = exp_map(&half).unwrap();
        let s2 = core::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(r.coords().x, s2, epsilon = 1e-15);
        assert_relative_eq!(r.coords().y, s2, epsilon = 1e-15);

        let too_far = TangentVector::new(p, Vec3::new(0.0, PI, 0.0)).unwrap();
        assert!(matches!(exp_map(&too_far), Err(Error::Range(_))));
    }

    #[test]
    fn log_map_examples() {
        let p = pt(1.0, 0.0, 0.0);
        let zero = log_map(&p, &p).unwrap();
        assert_eq!(zero.norm(), 0.0);
        assert!(zero.based_at(&p));

        let q = pt(0.0, 0.0, 1.0);
        let v = log_map(&p, &q).unwrap();
        assert_relative_eq!(v.vec().z, PI / 2.0, epsilon = 1e-15);
        assert!(v.vec().x.abs() < 1e-15 && v.vec().y.abs() < 1e-15);

        assert_eq!(log_map(&p, &p.antipode()), Err(Error::Antipodal));
    }

    #[test]
    fn geodesic_examples() {
        let x = pt(1.0, 0.0, 0.0);
        let y = pt(0.0, 1.0, 0.0);
        assert_eq!(geodesic_point(&x, &y, 0.0).unwrap(), x);

        let mid = geodesic_point(&x, &y, PI / 4.0).unwrap();
        let s2 = core::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(mid.coords().x, s2, epsilon = 1e-15);
        assert_relative_eq!(mid.coords().y, s2, epsilon = 1e-15);

        let end = geodesic_point(&x, &y, distance(&x, &y)).unwrap();
        assert_relative_eq!(distance(&end, &y), 0.0, epsilon = 1e-12);

        assert!(matches!(geodesic_point(&x, &y, 2.0), Err(Error::Range(_))));
        assert_eq!(geodesic_point(&x, &x.antipode(), 0.1), Err(Error::Antipodal));
    }

    #[test]
    fn geodesic_matches_exp_of_scaled_log() {
        let x = pt(0.2, -0.5, 0.9);
        let y = pt(-0.3, 0.8, 0.4);
        let d = distance(&x, &y);
        let dir = log_map(&x, &y).unwrap();
        for k in 0..=8 {
            let t = d * f64::from(k) / 8.0;
            let via_formula = geodesic_point(&x, &y, t).unwrap();
            let via_exp = exp_map(&dir.scaled(t / d)).unwrap();
            assert!(distance(&via_formula, &via_exp) < 1e-12);
        }
    }

    #[test]
    fn transport_examples() {
        let p = pt(1.0, 0.0, 0.0);
        let q = pt(0.0, 1.0, 0.0);

        // Identity geodesic.
        let v = TangentVector::new(p, Vec3::new(0.0, 0.3, -0.2)).unwrap();
        let same = parallel_transport(&v, &p).unwrap();
        assert_eq!(same.vec(), v.vec());

        // Component orthogonal to the geodesic plane is fixed.
        let normal = TangentVector::new(p, Vec3::new(0.0, 0.0, 1.0)).unwrap();
        let moved = parallel_transport(&normal, &q).unwrap();
        assert_relative_eq!(moved.vec().z, 1.0, epsilon = 1e-15);
        assert!(moved.vec().x.abs() < 1e-15 && moved.vec().y.abs() < 1e-15);

        // The geodesic's own tangent maps to the terminal velocity.
        let tangent = TangentVector::new(p, Vec3::new(0.0, 1.0, 0.0)).unwrap();
        let turned = parallel_transport(&tangent, &q).unwrap();
        assert_relative_eq!(turned.vec().x, -1.0, epsilon = 1e-15);
        assert!(turned.vec().y.abs() < 1e-12 && turned.vec().z.abs() < 1e-15);

        assert_eq!(parallel_transport(&v, &p.antipode()), Err(Error::Antipodal));
    }

    #[test]
    fn sample_patch_counts_and_membership() {
        let patch = Patch::new(pt(0.0, 0.0, 1.0), 0.4).unwrap();
        let pts = sample_patch(&patch, 1, 4).unwrap();
        assert_eq!(pts.len(), 5);
        let pts = sample_patch(&patch, 3, 5).unwrap();
        assert_eq!(pts.len(), 16);
        for p in &pts {
            assert!(distance(&patch.center(), p) <= patch.radius() + 1e-12);
        }
        // Determinism: bitwise identical across calls.
        let again = sample_patch(&patch, 3, 5).unwrap();
        for (a, b) in pts.iter().zip(again.iter()) {
            assert!(a.same_coords(b));
        }
        assert!(sample_patch(&patch, 0, 4).is_err());
        assert!(sample_patch(&patch, 1, 2).is_err());
    }

    #[test]
    fn patch_radius_bounds() {
        let c = pt(0.0, 0.0, 1.0);
        assert!(Patch::new(c, 0.0).is_err());
        assert!(Patch::new(c, PI / 2.0).is_err());
        assert!(Patch::new(c, 1.5).is_ok());
    }
}
