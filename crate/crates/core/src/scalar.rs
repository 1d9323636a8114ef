//! Scalarizing primitives: oriented distance and the Gerstewitz functional.
//!
//! The oriented distance of a set A is `Δ_A(y) = d_A(y) − d_{A^c}(y)`:
//! negative inside, zero on the boundary, positive outside. It is provided in
//! closed form for the half-line `R₊` (the case the nonlinear separation
//! function needs), the orthant `R₊ˡ`, and sector cones in tangent planes
//! (used to exercise the full property list in nontrivial geometry).
//!
//! The Gerstewitz functional for the orthant with direction `q < 0`
//! componentwise is `ξ_q(v) = min{t : v ∈ tq + R₊ˡ} = max_i v_i/q_i`.

use crate::cone::SectorCone;
use crate::error::{Error, Result};
use crate::math;
use crate::sphere::TangentVector;
use alloc::format;
use alloc::vec::Vec;

/// Orthant dimension plus a strictly negative Gerstewitz direction.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthantParams {
    dimension: usize,
    q: Vec<f64>,
}

impl OrthantParams {
    /// `q` must be strictly negative componentwise (`q ∈ −int R₊ˡ`).
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::Invalid("Gerstewitz direction must be nonempty".into()));
        }
        if let Some(bad) = q.iter().find(|c| !(**c < 0.0)) {
            return Err(Error::Invalid(format!(
                "Gerstewitz direction must be strictly negative; got component {bad}"
            )));
        }
        let dimension = q.len();
        Ok(OrthantParams { dimension, q })
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    #[inline]
    pub fn q(&self) -> &[f64] {
        &self.q
    }
}

/// Oriented distance of the half-line `R₊` in `R`: `Δ_{R₊}(s) = −s`.
///
/// For `s ≥ 0` the distance to the complement is `s` and the distance to the
/// set is 0; for `s < 0` the roles swap, so both branches collapse to `−s`.
#[inline]
pub fn oriented_distance_halfline(s: f64) -> f64 {
    -s
}

/// Oriented distance of the orthant `R₊ˡ` in `Rˡ`.
///
/// Inside (all components ≥ 0) the nearest boundary facet is the smallest
/// component; outside, the projection clamps negative components to zero.
pub fn oriented_distance_orthant(v: &[f64]) -> f64 {
    let mut neg_sq = 0.0;
    let mut min_comp = f64::INFINITY;
    for &c in v {
        if c < 0.0 {
            neg_sq += c * c;
        }
        min_comp = min_comp.min(c);
    }
    if neg_sq > 0.0 {
        math::sqrt(neg_sq)
    } else {
        -min_comp
    }
}

/// Oriented distance of a sector cone within its tangent plane.
///
/// Works in the cone's polar frame: for a vector of length `r` at signed
/// angle ψ from the bisector of a sector of half-angle α, the distance to a
/// boundary ray at angular gap g is `r·sin g` while the ray's nearest point
/// is interior (g ≤ π/2) and `r` (the apex) beyond that.
pub fn oriented_distance_sector(cone: &SectorCone, v: &TangentVector) -> Result<f64> {
    if !v.based_at(&cone.base()) {
        return Err(Error::BaseMismatch);
    }
    let (m, n) = cone.frame();
    let alpha = cone.aperture() / 2.0;
    let x = v.vec().dot(m);
    let y = v.vec().dot(n);
    let r = math::sqrt(x * x + y * y);
    if r == 0.0 {
        // The apex lies on the boundary of every pointed sector.
        return Ok(0.0);
    }
    let psi = math::atan2(y, x); // in (−π, π]

    let dist_to_ray = |gap: f64| -> f64 {
        if gap <= core::f64::consts::FRAC_PI_2 {
            r * math::sin(gap)
        } else {
            r
        }
    };

    if psi.abs() <= alpha {
        // Inside: distance to the complement is the distance to the nearer
        // boundary ray.
        let d = dist_to_ray(alpha - psi).min(dist_to_ray(alpha + psi));
        Ok(-d)
    } else {
        // Outside: distance to the sector via its nearer boundary ray.
        let gap = psi.abs() - alpha;
        Ok(dist_to_ray(gap))
    }
}

/// Gerstewitz functional for the orthant: `ξ_q(v) = max_i v_i / q_i`.
///
/// Derivation: `v − tq ≥ 0 ⟺ t ≥ v_i/q_i` for each `i` since `q_i < 0`, so
/// the minimal such `t` is the maximum ratio.
pub fn gerstewitz(v: &[f64], params: &OrthantParams) -> Result<f64> {
    if v.len() != params.dimension {
        return Err(Error::DimensionMismatch { expected: params.dimension, actual: v.len() });
    }
    let mut t = f64::NEG_INFINITY;
    for (vi, qi) in v.iter().zip(params.q.iter()) {
        t = t.max(vi / qi);
    }
    Ok(t)
}
