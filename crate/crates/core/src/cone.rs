//! Sector cones in tangent planes and the order relation they induce.
//!
//! In a tangent 2-plane every pointed closed convex cone with nonempty
//! interior is a sector spanned by two unit generator rays with aperture in
//! (0, π). That representation makes membership, polar (dual) cones and
//! parallel-transported copies closed-form:
//!
//! * membership is a 2×2 decomposition against the generators,
//! * the polar of a sector of half-angle α about axis m is the sector of
//!   half-angle π/2 − α about the same axis,
//! * transported cones transport the generators (an isometry, so apertures
//!   are preserved).
//!
//! The strict order of the problem reads `y <_x x` iff `log_x y` lies in the
//! transported cone minus its apex.

use crate::error::{Error, Result};
use crate::math;
use crate::sphere::{log_map, parallel_transport, SpherePoint, TangentVector};
use crate::vec3::Vec3;
use alloc::format;
use core::f64::consts::PI;

/// Apertures this close to 0 or π are rejected as degenerate.
const MIN_APERTURE_MARGIN: f64 = 1e-9;

/// A pointed closed convex cone `{α·gen_a + β·gen_b : α, β ≥ 0}` in the
/// tangent plane at `base`, with unit generators and aperture in (0, π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorCone {
    base: SpherePoint,
    gen_a: TangentVector,
    gen_b: TangentVector,
}

impl SectorCone {
    /// Builds a sector from two generator directions at `base`.
    ///
    /// Generators are renormalized; the aperture must stay strictly inside
    /// (0, π) so the cone is pointed with nonempty interior and its polar is
    /// again a sector.
    pub fn new(base: SpherePoint, gen_a: TangentVector, gen_b: TangentVector) -> Result<Self> {
        if !gen_a.based_at(&base) || !gen_b.based_at(&base) {
            return Err(Error::BaseMismatch);
        }
        let a = gen_a
            .vec()
            .normalized(1e-12)
            .ok_or_else(|| Error::Degenerate(format!("generator a has norm {:.3e}", gen_a.norm())))?;
        let b = gen_b
            .vec()
            .normalized(1e-12)
            .ok_or_else(|| Error::Degenerate(format!("generator b has norm {:.3e}", gen_b.norm())))?;
        let aperture = math::acos(a.dot(b).clamp(-1.0, 1.0));
        if aperture <= MIN_APERTURE_MARGIN || aperture >= PI - MIN_APERTURE_MARGIN {
            return Err(Error::Degenerate(format!(
                "aperture {aperture:.6} outside (0, π)"
            )));
        }
        Ok(SectorCone {
            base,
            gen_a: TangentVector::projected(base, a),
            gen_b: TangentVector::projected(base, b),
        })
    }

    #[inline]
    pub fn base(&self) -> SpherePoint {
        self.base
    }

    #[inline]
    pub fn gen_a(&self) -> TangentVector {
        self.gen_a
    }

    #[inline]
    pub fn gen_b(&self) -> TangentVector {
        self.gen_b
    }

    /// Opening angle between the generators, in (0, π).
    pub fn aperture(&self) -> f64 {
        math::acos(self.gen_a.vec().dot(self.gen_b.vec()).clamp(-1.0, 1.0))
    }

    /// Orthonormal in-plane frame `(m, n)` with `m` the unit bisector and
    /// `gen_b = cos(α)·m + sin(α)·n`, `gen_a = cos(α)·m − sin(α)·n`, where α
    /// is the half-aperture.
    pub fn frame(&self) -> (Vec3, Vec3) {
        let m = (self.gen_a.vec() + self.gen_b.vec())
            .normalized(1e-12)
            .expect("aperture < π keeps the bisector nonzero");
        let n = (self.gen_b.vec() - m * self.gen_b.vec().dot(m))
            .normalized(1e-15)
            .expect("aperture > 0 keeps generators independent");
        (m, n)
    }

    /// Unit bisector of the sector as a tangent vector.
    pub fn bisector(&self) -> TangentVector {
        TangentVector::projected(self.base, self.frame().0)
    }

    /// Coefficients `(α, β)` of `v = α·gen_a + β·gen_b` in the tangent plane.
    pub fn decompose(&self, v: &TangentVector) -> Result<(f64, f64)> {
        if !v.based_at(&self.base) {
            return Err(Error::BaseMismatch);
        }
        let a = self.gen_a.vec();
        let b = self.gen_b.vec();
        let c = a.dot(b);
        let det = 1.0 - c * c;
        let va = v.vec().dot(a);
        let vb = v.vec().dot(b);
        Ok(((va - c * vb) / det, (vb - c * va) / det))
    }

    /// Closed-cone membership: both decomposition coefficients ≥ −tol.
    pub fn contains(&self, v: &TangentVector, tol: f64) -> Result<bool> {
        let (alpha, beta) = self.decompose(v)?;
        Ok(alpha >= -tol && beta >= -tol)
    }

    /// Membership in `C \ {0}`: closed-cone membership and `‖v‖ > tol`.
    pub fn contains_strict(&self, v: &TangentVector, tol: f64) -> Result<bool> {
        Ok(v.norm() > tol && self.contains(v, tol)?)
    }

    /// The polar (dual) cone `{a ∈ T_base : ⟨a,b⟩ ≥ 0 ∀b ∈ C}`.
    ///
    /// For half-angle α about axis m this is the sector of half-angle
    /// π/2 − α about m; its generators are the inward normals of the
    /// original boundary rays.
    pub fn polar(&self) -> Result<SectorCone> {
        let (m, n) = self.frame();
        let alpha = self.aperture() / 2.0;
        let beta = PI / 2.0 - alpha;
        if beta <= MIN_APERTURE_MARGIN / 2.0 {
            return Err(Error::Degenerate(
                "polar cone has empty interior (aperture ≈ π)".into(),
            ));
        }
        let (sin_a, cos_a) = (math::sin(alpha), math::cos(alpha));
        // Normal of ray b on the a side, and of ray a on the b side.
        let p_a = m * sin_a - n * cos_a;
        let p_b = m * sin_a + n * cos_a;
        SectorCone::new(
            self.base,
            TangentVector::projected(self.base, p_a),
            TangentVector::projected(self.base, p_b),
        )
    }

    /// Parallel-transports the whole sector to another base point.
    pub fn transport_to(&self, to: &SpherePoint) -> Result<SectorCone> {
        let a = parallel_transport(&self.gen_a, to)?;
        let b = parallel_transport(&self.gen_b, to)?;
        SectorCone::new(*to, a, b)
    }
}

/// The strict tangent-cone order: `y < x` iff `log_x y ∈ C_x \ {0}`.
///
/// `cone_at_x` must be based at `x`.
pub fn cone_order_lt(
    y: &SpherePoint,
    x: &SpherePoint,
    cone_at_x: &SectorCone,
    tol: f64,
) -> Result<bool> {
    if !cone_at_x.base().same_coords(x)
        && (cone_at_x.base().coords() - x.coords()).norm() > 1e-12
    {
        return Err(Error::BaseMismatch);
    }
    let v = log_map(x, y)?;
    cone_at_x.contains_strict(&v, tol)
}

/// Membership of a sphere point in the exponential image of the cone,
/// `C̃ = {exp_base c : c ∈ C}`, restricted to the injectivity region.
pub fn tilde_cone_contains(cone: &SectorCone, m: &SpherePoint, tol: f64) -> Result<bool> {
    let v = log_map(&cone.base(), m)?;
    cone.contains(&v, tol)
}

/// A canonical interior point of the polar cone: its unit bisector.
///
/// Pairs strictly positively with every nonzero element of the cone.
pub fn pick_interior_polar(cone: &SectorCone) -> Result<TangentVector> {
    Ok(cone.polar()?.bisector())
}
