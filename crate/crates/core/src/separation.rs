//! Weak separation functions, optimality certificates, generalized
//! Lagrangians, saddle points, and the image duality gap.
//!
//! Two parametric families separate the good set `H` from the problem image:
//!
//! * the linear family `ω₁(u,v;θ,λ) = ⟨θ,u⟩ + ⟨λ,v⟩` with `θ ∈ C*\{0}` and
//!   `λ ≥ 0`, whose positive level sets intersect exactly in `H`;
//! * the nonlinear family `ω₂(u,v;φ,γ) = ω̃(u;φ) + ω̲(v;γ)` built from the
//!   oriented distance of `R₊` (`ω̃(u;φ) = −Δ_{R₊}(⟨φ,u⟩) = ⟨φ,u⟩`) and the
//!   Gerstewitz functional (`ω̲(v;γ) = −ξ_γ(v)` for `γ < 0`, and `≡ 0` for
//!   the distinguished `γ = 0ˡ`).
//!
//! Both `find_separator_*` functions are the constructive content of the
//! level-set theorems: given a point outside `H` they produce parameters
//! with `ω ≤ 0`. A certificate — parameters whose maximum of `ω` over the
//! image cloud is ≤ τ_cert — is a sufficient optimality condition at the
//! sampled resolution; `certificate_search` scans a declared, reproducible
//! parameter grid for one. Negated separation functions composed with the
//! image map give the generalized Lagrangians `L¹`, `L²`; their saddle
//! points characterize the same inequality, and the min–max of `ω₁` over
//! the grid and the cloud is the image duality gap, which vanishes exactly
//! when a linear certificate exists on the same grid.
//!
//! Scans run in deterministic order with first-index tie-breaking so every
//! report is reproducible.

use crate::cone::SectorCone;
use crate::error::{Error, Result};
use crate::math;
use crate::problem::{
    evaluate_constraints, evaluate_objective, image_map, is_feasible, transported_cone,
    GopInstance, ImagePoint, ImageSample, Resolution,
};
use crate::scalar::{gerstewitz, OrthantParams};
use crate::sphere::{SpherePoint, TangentVector};
use alloc::vec;
use alloc::vec::Vec;

/// Parameters of the linear separation function: `θ ∈ C*\{0}`, `λ ∈ R₊ˡ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSepParams {
    pub theta: TangentVector,
    pub lambda: Vec<f64>,
}

/// The second argument of the nonlinear family: either the distinguished
/// zero element (making `ω̲ ≡ 0`) or a strictly negative vector.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaParam {
    Zero,
    Interior(Vec<f64>),
}

impl GammaParam {
    /// `ω̲(v;γ)`: `−ξ_γ(v)` in the interior case, `0` for the zero element.
    pub fn omega_under(&self, v: &[f64]) -> Result<f64> {
        match self {
            GammaParam::Zero => Ok(0.0),
            GammaParam::Interior(q) => {
                let params = OrthantParams::new(q.clone())?;
                Ok(-gerstewitz(v, &params)?)
            }
        }
    }
}

/// Parameters of the nonlinear separation function: `φ ∈ C*` (zero allowed),
/// `γ ∈ −int R₊ˡ ∪ {0ˡ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearSepParams {
    pub phi: TangentVector,
    pub gamma: GammaParam,
}

/// Declared parameter grid for certificate and duality-gap scans.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchGrid {
    /// Number of unit directions spanning the polar sector.
    pub n_angle: usize,
    /// Componentwise λ levels, combined as an l-fold product.
    pub lambda_levels: Vec<f64>,
    /// Magnitude multipliers applied to each λ tuple.
    pub lambda_scales: Vec<f64>,
    /// Componentwise γ levels (strictly negative); the zero element is
    /// always included separately.
    pub gamma_levels: Vec<f64>,
}

impl Default for SearchGrid {
    fn default() -> Self {
        SearchGrid {
            n_angle: 64,
            lambda_levels: vec![0.0, 0.25, 0.5, 1.0],
            lambda_scales: vec![1.0, 10.0],
            gamma_levels: vec![-0.25, -1.0, -4.0],
        }
    }
}

impl SearchGrid {
    /// Unit directions spanning the polar sector of `cone`, endpoints
    /// included; a single-direction grid degenerates to the polar bisector.
    pub fn polar_directions(&self, cone: &SectorCone) -> Result<Vec<TangentVector>> {
        polar_directions(cone, self.n_angle)
    }

    /// The λ tuples of the grid in deterministic (scale-major,
    /// lexicographic) order, with repeated all-zero tuples dropped.
    pub fn lambda_points(&self, l: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for (si, scale) in self.lambda_scales.iter().enumerate() {
            for tuple in cartesian(&self.lambda_levels, l) {
                if si > 0 && tuple.iter().all(|c| *c == 0.0) {
                    continue;
                }
                out.push(tuple.iter().map(|c| c * scale).collect());
            }
        }
        out
    }

    /// The γ grid: the zero element first, then all strictly negative tuples.
    pub fn gamma_points(&self, l: usize) -> Vec<GammaParam> {
        let mut out = vec![GammaParam::Zero];
        for tuple in cartesian(&self.gamma_levels, l) {
            out.push(GammaParam::Interior(tuple));
        }
        out
    }
}

fn cartesian(levels: &[f64], l: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..l {
        let mut next = Vec::with_capacity(out.len() * levels.len());
        for prefix in &out {
            for &level in levels {
                let mut tuple = prefix.clone();
                tuple.push(level);
                next.push(tuple);
            }
        }
        out = next;
    }
    out
}

/// `n` unit directions spanning the polar sector of `cone` (endpoints
/// included); `n = 1` yields just the polar bisector.
pub fn polar_directions(cone: &SectorCone, n: usize) -> Result<Vec<TangentVector>> {
    if n == 0 {
        return Err(Error::Range("direction count must be ≥ 1".into()));
    }
    let polar = cone.polar()?;
    let (m, nv) = polar.frame();
    let beta = polar.aperture() / 2.0;
    let base = cone.base();
    let mut out = Vec::with_capacity(n);
    if n == 1 {
        out.push(TangentVector::projected(base, m));
        return Ok(out);
    }
    for k in 0..n {
        let eta = -beta + 2.0 * beta * (k as f64) / ((n - 1) as f64);
        out.push(TangentVector::projected(base, m * math::cos(eta) + nv * math::sin(eta)));
    }
    Ok(out)
}

/// Which separation family a certificate belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Linear,
    Nonlinear,
}

/// The parameters witnessing a certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum CertificateParams {
    Linear(LinearSepParams),
    Nonlinear(NonlinearSepParams),
}

/// A sufficient-optimality certificate: parameters whose separation value
/// stays ≤ τ_cert across the entire image cloud at the given resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationCertificate {
    pub params: CertificateParams,
    pub max_omega_over_cloud: f64,
    pub resolution: Resolution,
}

/// Result of the duality-gap min–max scan.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityGap {
    pub omega: f64,
    pub argmin: LinearSepParams,
}

/// `ω₁(u,v;θ,λ) = ⟨θ,u⟩ + ⟨λ,v⟩`.
pub fn omega1(pt: &ImagePoint, params: &LinearSepParams) -> Result<f64> {
    if !params.theta.same_base(&pt.u) {
        return Err(Error::BaseMismatch);
    }
    if params.lambda.len() != pt.v.len() {
        return Err(Error::DimensionMismatch {
            expected: params.lambda.len(),
            actual: pt.v.len(),
        });
    }
    let lv: f64 = params.lambda.iter().zip(&pt.v).map(|(l, v)| l * v).sum();
    Ok(params.theta.vec().dot(pt.u.vec()) + lv)
}

/// `ω₂(u,v;φ,γ) = ω̃(u;φ) + ω̲(v;γ)` with `ω̃(u;φ) = ⟨φ,u⟩`.
///
/// The inner product form is the closed evaluation of `−Δ_{R₊}(⟨φ,u⟩)`;
/// the tie to the oriented-distance definition is covered by tests.
pub fn omega2(pt: &ImagePoint, params: &NonlinearSepParams) -> Result<f64> {
    if !params.phi.same_base(&pt.u) {
        return Err(Error::BaseMismatch);
    }
    if let GammaParam::Interior(q) = &params.gamma {
        if q.len() != pt.v.len() {
            return Err(Error::DimensionMismatch { expected: q.len(), actual: pt.v.len() });
        }
    }
    Ok(params.phi.vec().dot(pt.u.vec()) + params.gamma.omega_under(&pt.v)?)
}

fn point_in_h(pt: &ImagePoint, cone: &SectorCone, tol: f64) -> Result<bool> {
    Ok(cone.contains_strict(&pt.u, tol)? && pt.v.iter().all(|vi| *vi >= -tol))
}

/// Picks the polar generator that pairs nonpositively with `u ∉ C`.
///
/// The coefficient signs locate `u`: a negative `gen_a` coefficient puts it
/// in the open half-plane past `gen_b`, where the polar generator orthogonal
/// to `gen_b` pairs ≤ 0 with it (and symmetrically for the other side).
fn boundary_normal_separator(
    cone: &SectorCone,
    u: &TangentVector,
    tol: f64,
) -> Result<TangentVector> {
    let (alpha_c, beta_c) = cone.decompose(u)?;
    let polar = cone.polar()?;
    if alpha_c < -tol {
        Ok(polar.gen_a())
    } else if beta_c < -tol {
        Ok(polar.gen_b())
    } else {
        Err(Error::Precondition("vector already lies in the cone".into()))
    }
}

/// Constructive linear separator for a point outside `H`.
///
/// Mirrors the level-set theorem's proof cases: when `u ∉ C\{0}` the
/// parameters are a polar separator of `u` with `λ = 0`; when instead some
/// `v_i < 0`, a scaled coordinate `λ` beats the positive `⟨θ,u⟩` term.
pub fn find_separator_omega1(
    pt: &ImagePoint,
    cone: &SectorCone,
    tol: f64,
) -> Result<LinearSepParams> {
    if point_in_h(pt, cone, tol)? {
        return Err(Error::Precondition("point lies in H; no separator exists".into()));
    }
    let zero_lambda = vec![0.0; pt.v.len()];
    // Case (i): u outside C \ {0}.
    if pt.u.norm() <= tol {
        return Ok(LinearSepParams { theta: cone.polar()?.bisector(), lambda: zero_lambda });
    }
    if !cone.contains(&pt.u, tol)? {
        let theta = boundary_normal_separator(cone, &pt.u, tol)?;
        return Ok(LinearSepParams { theta, lambda: zero_lambda });
    }
    // Case (ii): u ∈ C \ {0} but some component of v is negative.
    let i0 = pt
        .v
        .iter()
        .position(|vi| *vi < -tol)
        .ok_or_else(|| Error::Precondition("point unexpectedly lies in H".into()))?;
    let mut lambda = vec![0.0; pt.v.len()];
    lambda[i0] = 1.0;
    let bisector = cone.polar()?.bisector();
    let s = bisector.vec().dot(pt.u.vec());
    let theta = if s <= 0.0 {
        bisector
    } else {
        // Scale θ so ⟨θ,u⟩ = |v_{i0}|/2, leaving ω₁ = v_{i0}/2 < 0.
        bisector.scaled(-pt.v[i0] / (2.0 * s))
    };
    Ok(LinearSepParams { theta, lambda })
}

/// Constructive nonlinear separator for a point outside `H`.
///
/// When `v` leaves the orthant, any interior `γ` makes `ω̲ ≤ −|v_{i0}| < 0`
/// with `φ = 0`; otherwise `u ∉ C\{0}` and a polar separator with the zero
/// `γ` element drives `ω₂ = ⟨φ,u⟩ ≤ 0`.
pub fn find_separator_omega2(
    pt: &ImagePoint,
    cone: &SectorCone,
    tol: f64,
) -> Result<NonlinearSepParams> {
    if point_in_h(pt, cone, tol)? {
        return Err(Error::Precondition("point lies in H; no separator exists".into()));
    }
    let base = cone.base();
    if pt.v.iter().any(|vi| *vi < -tol) {
        return Ok(NonlinearSepParams {
            phi: TangentVector::zero(base),
            gamma: GammaParam::Interior(vec![-1.0; pt.v.len()]),
        });
    }
    // v ≥ 0, so u ∉ C \ {0}.
    let gamma = GammaParam::Zero;
    if pt.u.norm() <= tol {
        return Ok(NonlinearSepParams { phi: cone.polar()?.bisector(), gamma });
    }
    let phi = boundary_normal_separator(cone, &pt.u, tol)?;
    Ok(NonlinearSepParams { phi, gamma })
}

fn max_omega_linear(cloud: &[ImageSample], params: &LinearSepParams) -> Result<f64> {
    let mut max = f64::NEG_INFINITY;
    for sample in cloud {
        max = max.max(omega1(&sample.image, params)?);
    }
    Ok(max)
}

fn max_omega_nonlinear(cloud: &[ImageSample], params: &NonlinearSepParams) -> Result<f64> {
    let mut max = f64::NEG_INFINITY;
    for sample in cloud {
        max = max.max(omega2(&sample.image, params)?);
    }
    Ok(max)
}

/// Scans the parameter grid for a sufficient-optimality certificate.
///
/// Returns the first grid point (direction-major, λ/γ-minor order) whose
/// maximum of `ω` over the cloud is ≤ τ_cert; a returned certificate
/// implies, at the sampled resolution, that `y` is efficient.
pub fn certificate_search(
    inst: &GopInstance,
    y: &SpherePoint,
    kind: CertificateKind,
    cloud: &[ImageSample],
    grid: &SearchGrid,
    resolution: Resolution,
) -> Result<Option<SeparationCertificate>> {
    if !is_feasible(inst, y)? {
        return Err(Error::Infeasible);
    }
    if cloud.is_empty() {
        return Err(Error::Precondition("image cloud is empty".into()));
    }
    let fy = evaluate_objective(inst, y)?;
    if !cloud[0].image.u.based_at(&fy) {
        return Err(Error::BaseMismatch);
    }
    let cone = transported_cone(inst, &fy)?;
    let tau = inst.tolerances().certificate;
    let directions = grid.polar_directions(&cone)?;
    let l = inst.constraint_len();
    match kind {
        CertificateKind::Linear => {
            let lambdas = grid.lambda_points(l);
            for theta in &directions {
                for lambda in &lambdas {
                    let params = LinearSepParams { theta: *theta, lambda: lambda.clone() };
                    let max = max_omega_linear(cloud, &params)?;
                    if max <= tau {
                        return Ok(Some(SeparationCertificate {
                            params: CertificateParams::Linear(params),
                            max_omega_over_cloud: max,
                            resolution,
                        }));
                    }
                }
            }
        }
        CertificateKind::Nonlinear => {
            let gammas = grid.gamma_points(l);
            for phi in &directions {
                for gamma in &gammas {
                    let params = NonlinearSepParams { phi: *phi, gamma: gamma.clone() };
                    let max = max_omega_nonlinear(cloud, &params)?;
                    if max <= tau {
                        return Ok(Some(SeparationCertificate {
                            params: CertificateParams::Nonlinear(params),
                            max_omega_over_cloud: max,
                            resolution,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Generalized Lagrangian `L¹_y(x;θ,λ) = −ω₁(M_y(x);θ,λ)`.
pub fn lagrangian1(
    inst: &GopInstance,
    y: &SpherePoint,
    x: &SpherePoint,
    params: &LinearSepParams,
) -> Result<f64> {
    Ok(-omega1(&image_map(inst, y, x)?, params)?)
}

/// Generalized Lagrangian `L²_y(x;φ,γ) = −ω₂(M_y(x);φ,γ)`.
pub fn lagrangian2(
    inst: &GopInstance,
    y: &SpherePoint,
    x: &SpherePoint,
    params: &NonlinearSepParams,
) -> Result<f64> {
    Ok(-omega2(&image_map(inst, y, x)?, params)?)
}

fn validate_theta(cone: &SectorCone, theta: &TangentVector, tol: f64) -> Result<()> {
    let polar = cone.polar()?;
    if theta.norm() <= tol || !polar.contains(theta, tol)? {
        return Err(Error::Precondition("θ must lie in the polar cone minus zero".into()));
    }
    Ok(())
}

/// Saddle-point check for `L¹`: both inequality families of
/// `L¹(y;θ̄,λ) ≤ L¹(y;θ̄,λ̄) ≤ L¹(x;θ̄,λ̄)` within `tol`, the left over the
/// λ grid and the right over the cloud's source points.
pub fn is_saddle_point1(
    inst: &GopInstance,
    y: &SpherePoint,
    theta: &TangentVector,
    lambda: &[f64],
    cloud: &[ImageSample],
    lambda_grid: &[Vec<f64>],
    tol: f64,
) -> Result<bool> {
    if !is_feasible(inst, y)? {
        return Err(Error::Infeasible);
    }
    if lambda.iter().any(|li| *li < 0.0) {
        return Err(Error::Precondition("λ must be componentwise nonnegative".into()));
    }
    let fy = evaluate_objective(inst, y)?;
    let cone = transported_cone(inst, &fy)?;
    validate_theta(&cone, theta, inst.tolerances().membership)?;
    let gy = evaluate_constraints(inst, y)?;
    if lambda.len() != gy.len() {
        return Err(Error::DimensionMismatch { expected: gy.len(), actual: lambda.len() });
    }
    let pair = |l: &[f64]| -> f64 { l.iter().zip(&gy).map(|(a, b)| a * b).sum() };
    // L¹(y;θ̄,λ) = −⟨λ, g(y)⟩ since log_{f(y)} f(y) = 0.
    let at_saddle = -pair(lambda);
    for l in lambda_grid {
        if -pair(l) > at_saddle + tol {
            return Ok(false);
        }
    }
    let params = LinearSepParams { theta: *theta, lambda: lambda.to_vec() };
    for sample in cloud {
        if at_saddle > -omega1(&sample.image, &params)? + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Saddle-point check for `L²`, with the left inequality family over a γ grid.
pub fn is_saddle_point2(
    inst: &GopInstance,
    y: &SpherePoint,
    phi: &TangentVector,
    gamma: &GammaParam,
    cloud: &[ImageSample],
    gamma_grid: &[GammaParam],
    tol: f64,
) -> Result<bool> {
    if !is_feasible(inst, y)? {
        return Err(Error::Infeasible);
    }
    let fy = evaluate_objective(inst, y)?;
    let cone = transported_cone(inst, &fy)?;
    let polar = cone.polar()?;
    if !polar.contains(phi, inst.tolerances().membership)? {
        return Err(Error::Precondition("φ must lie in the polar cone".into()));
    }
    if let GammaParam::Interior(q) = gamma {
        if q.iter().any(|qi| !(*qi < 0.0)) {
            return Err(Error::Precondition("interior γ must be strictly negative".into()));
        }
    }
    let gy = evaluate_constraints(inst, y)?;
    // L²(y;φ̄,γ) = −ω̲(g(y);γ) since ω̃ vanishes at u = 0.
    let at_saddle = -gamma.omega_under(&gy)?;
    for g in gamma_grid {
        if -g.omega_under(&gy)? > at_saddle + tol {
            return Ok(false);
        }
    }
    let params = NonlinearSepParams { phi: *phi, gamma: gamma.clone() };
    for sample in cloud {
        if at_saddle > -omega2(&sample.image, &params)? + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Value of the dual problem at fixed parameters: `max_{cloud} ω₁`.
///
/// The cloud always contains the candidate's own image `(0, g(y))`, whose
/// value `⟨λ, g(y)⟩` is ≥ 0 for feasible `y`, so the maximum is ≥ 0 up to
/// feasibility slack.
pub fn dual_value(
    inst: &GopInstance,
    y: &SpherePoint,
    params: &LinearSepParams,
    cloud: &[ImageSample],
) -> Result<f64> {
    if cloud.is_empty() {
        return Err(Error::Precondition("image cloud is empty".into()));
    }
    let value = max_omega_linear(cloud, params)?;
    if is_feasible(inst, y)? {
        let slack: f64 = params.lambda.iter().sum::<f64>() * inst.tolerances().feasibility;
        debug_assert!(value >= -slack - 1e-12, "dual value {value} below its lower bound");
    }
    Ok(value)
}

/// The image duality gap: `Ω = min over the (θ,λ) grid of dual_value`.
///
/// `θ` entries must be unit; ties resolve to the first grid point.
pub fn duality_gap(
    inst: &GopInstance,
    y: &SpherePoint,
    theta_grid: &[TangentVector],
    lambda_grid: &[Vec<f64>],
    cloud: &[ImageSample],
) -> Result<DualityGap> {
    if theta_grid.is_empty() || lambda_grid.is_empty() {
        return Err(Error::Precondition("duality-gap grids must be nonempty".into()));
    }
    let mut best: Option<DualityGap> = None;
    for theta in theta_grid {
        if (theta.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition("duality-gap θ grid entries must be unit".into()));
        }
        for lambda in lambda_grid {
            let params = LinearSepParams { theta: *theta, lambda: lambda.clone() };
            let value = dual_value(inst, y, &params, cloud)?;
            let better = match &best {
                None => true,
                Some(b) => value < b.omega,
            };
            if better {
                best = Some(DualityGap { omega: value, argmin: params });
            }
        }
    }
    Ok(best.expect("grids are nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{ConstraintTerm, Objective, Tolerances};
    use crate::sphere::{exp_map, tangent_basis, Patch};
    use crate::vec3::Vec3;
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn north() -> SpherePoint {
        SpherePoint::from_array([0.0, 0.0, 1.0]).unwrap()
    }

    fn frame_dir(phi: f64) -> Vec3 {
        let (e1, e2) = tangent_basis(&north());
        e1 * math::cos(phi) + e2 * math::sin(phi)
    }

    fn cone_span(lo: f64, hi: f64) -> SectorCone {
        let p = north();
        let dir = |phi: f64| TangentVector::projected(p, frame_dir(phi));
        SectorCone::new(p, dir(lo), dir(hi)).unwrap()
    }

    /// Wedge instance as in the problem-module tests: K-sector [−50°, 50°].
    fn wedge_instance(cone_lo: f64, cone_hi: f64) -> GopInstance {
        let y = north();
        let patch = Patch::new(y, 0.6).unwrap();
        let half = 50.0_f64.to_radians();
        let constraints = vec![
            ConstraintTerm::Affine { normal: frame_dir(FRAC_PI_2 - half), offset: 0.0 },
            ConstraintTerm::Affine { normal: frame_dir(-FRAC_PI_2 + half), offset: 0.0 },
            ConstraintTerm::Ball { center: y, radius: 0.5 },
        ];
        GopInstance::new(
            patch,
            y,
            cone_span(cone_lo, cone_hi),
            Objective::Identity,
            constraints,
            Tolerances::default(),
        )
        .unwrap()
    }

    fn img(u_phi: f64, u_norm: f64, v: Vec<f64>) -> ImagePoint {
        ImagePoint { u: TangentVector::projected(north(), frame_dir(u_phi) * u_norm), v }
    }

    /// An instance whose candidate sits on the patch boundary with the whole
    /// feasible ball behind it: every sample direction points back into the
    /// patch, so an outward cone admits λ = 0 certificates. The cone spans
    /// `cone_center ± cone_half` in a frame at `y` whose zero angle points
    /// away from the patch center.
    fn edge_instance(cone_center: f64, cone_half: f64) -> (GopInstance, SpherePoint) {
        let c = north();
        let radius = 0.45;
        let (e1, _) = tangent_basis(&c);
        let y = exp_map(&TangentVector::projected(c, e1 * radius)).unwrap();
        let inward = crate::sphere::log_map(&y, &c).unwrap();
        let e_out = inward.vec() * (-1.0 / inward.norm());
        let e_perp = y.coords().cross(e_out);
        let dir = |phi: f64| {
            TangentVector::projected(y, e_out * math::cos(phi) + e_perp * math::sin(phi))
        };
        let cone =
            SectorCone::new(y, dir(cone_center - cone_half), dir(cone_center + cone_half))
                .unwrap();
        let constraints = vec![
            ConstraintTerm::Ball { center: c, radius },
            // Polar-cap half-space with positive slack everywhere in the patch.
            ConstraintTerm::Affine { normal: Vec3::new(0.0, 0.0, 1.0), offset: math::cos(0.6) },
        ];
        let inst = GopInstance::new(
            Patch::new(c, radius).unwrap(),
            y,
            cone,
            Objective::Identity,
            constraints,
            Tolerances::default(),
        )
        .unwrap();
        (inst, y)
    }

    #[test]
    fn omega1_examples() {
        let cone = cone_span(0.0, 1.0);
        // u = 0, λ = 0 → 0.
        let pt = img(0.0, 0.0, vec![3.0, -1.0]);
        let params =
            LinearSepParams { theta: cone.polar().unwrap().bisector(), lambda: vec![0.0, 0.0] };
        assert_eq!(omega1(&pt, &params).unwrap(), 0.0);

        // θ aligned with an interior u, λ = 0 → ‖u‖.
        let u = cone.bisector().scaled(0.7);
        let pt = ImagePoint { u, v: vec![0.0] };
        let params = LinearSepParams { theta: cone.bisector(), lambda: vec![0.0] };
        assert_relative_eq!(omega1(&pt, &params).unwrap(), 0.7, epsilon = 1e-12);

        // Dimension mismatch.
        let bad = LinearSepParams { theta: cone.bisector(), lambda: vec![0.0, 1.0] };
        assert!(matches!(omega1(&pt, &bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn omega1_positive_on_h() {
        let cone = cone_span(0.2, 1.4);
        let polar = cone.polar().unwrap();
        // Points of H paired with valid parameters stay ≥ 0.
        for k in 0..10 {
            let phi = 0.2 + 1.2 * f64::from(k) / 9.0;
            let pt = img(phi, 0.5, vec![0.3, 0.0]);
            for j in 0..5 {
                let eta = f64::from(j) / 4.0;
                let theta = TangentVector::projected(
                    north(),
                    polar.gen_a().vec() * (1.0 - eta) + polar.gen_b().vec() * eta,
                );
                let params = LinearSepParams { theta, lambda: vec![0.7, 1.3] };
                assert!(omega1(&pt, &params).unwrap() >= -1e-12);
            }
        }
    }

    #[test]
    fn omega2_examples() {
        let cone = cone_span(0.0, 1.0);
        // φ = 0 and the zero γ element: identically zero.
        let pt = img(2.0, 0.9, vec![-5.0, 2.0]);
        let params =
            NonlinearSepParams { phi: TangentVector::zero(north()), gamma: GammaParam::Zero };
        assert_eq!(omega2(&pt, &params).unwrap(), 0.0);

        // Gerstewitz side: v = (2,3), γ = (−1,−1), φ = 0 → 2.
        let pt = img(0.0, 0.0, vec![2.0, 3.0]);
        let params = NonlinearSepParams {
            phi: TangentVector::zero(north()),
            gamma: GammaParam::Interior(vec![-1.0, -1.0]),
        };
        assert_relative_eq!(omega2(&pt, &params).unwrap(), 2.0, epsilon = 1e-12);

        // ω₂ ≥ 0 on H for valid parameters.
        let h_pt = img(0.5, 0.4, vec![0.2, 0.0]);
        let params = NonlinearSepParams {
            phi: cone.polar().unwrap().bisector(),
            gamma: GammaParam::Interior(vec![-0.5, -2.0]),
        };
        assert!(omega2(&h_pt, &params).unwrap() >= -1e-12);
    }

    #[test]
    fn omega2_matches_oriented_distance_route() {
        // ω̃ computed as ⟨φ,u⟩ must equal −Δ_{R₊}(⟨φ,u⟩) evaluated directly.
        let cone = cone_span(0.3, 1.7);
        let phi = cone.polar().unwrap().bisector();
        for k in 0..16 {
            let pt = img(2.0 * PI * f64::from(k) / 16.0, 0.8, vec![]);
            let inner = phi.vec().dot(pt.u.vec());
            let via_delta = -crate::scalar::oriented_distance_halfline(inner);
            let params = NonlinearSepParams { phi, gamma: GammaParam::Zero };
            assert_relative_eq!(omega2(&pt, &params).unwrap(), via_delta, epsilon = 1e-15);
        }
    }

    #[test]
    fn separator_omega1_covers_proof_cases() {
        let cone = cone_span(-0.4, 0.9);
        let tol = 1e-9;

        // u = 0, v ≥ 0 is outside H: any θ with λ = 0 gives exactly 0.
        let pt = img(0.0, 0.0, vec![1.0, 2.0]);
        let params = find_separator_omega1(&pt, &cone, tol).unwrap();
        assert_eq!(omega1(&pt, &params).unwrap(), 0.0);

        // u outside the cone on either side: the boundary normal wins.
        for &phi in &[1.2, 2.5, -0.7, -2.0, PI] {
            let pt = img(phi, 0.8, vec![0.5]);
            let params = find_separator_omega1(&pt, &cone, tol).unwrap();
            assert!(params.lambda.iter().all(|l| *l == 0.0));
            assert!(
                omega1(&pt, &params).unwrap() <= 1e-12,
                "phi = {phi}, omega = {}",
                omega1(&pt, &params).unwrap()
            );
        }

        // u interior but v negative: the scaled-α construction is negative.
        let pt = img(0.25, 0.6, vec![1.0, -1.0]);
        let params = find_separator_omega1(&pt, &cone, tol).unwrap();
        assert!(omega1(&pt, &params).unwrap() < 0.0);

        // Points of H are rejected.
        let h_pt = img(0.25, 0.6, vec![1.0, 1.0]);
        assert!(matches!(find_separator_omega1(&h_pt, &cone, tol), Err(Error::Precondition(_))));
    }

    #[test]
    fn separator_omega2_covers_proof_cases() {
        let cone = cone_span(-0.4, 0.9);
        let tol = 1e-9;

        // Case (ii): v outside the orthant.
        let pt = img(0.25, 0.6, vec![-1.0, 2.0]);
        let params = find_separator_omega2(&pt, &cone, tol).unwrap();
        assert_eq!(params.phi.norm(), 0.0);
        assert_relative_eq!(omega2(&pt, &params).unwrap(), -1.0, epsilon = 1e-12);

        // Case (i): u = 0.
        let pt = img(0.0, 0.0, vec![0.3]);
        let params = find_separator_omega2(&pt, &cone, tol).unwrap();
        assert_eq!(omega2(&pt, &params).unwrap(), 0.0);

        // Case (i): u strictly outside with ⟨φ,u⟩ < 0.
        let pt = img(2.2, 0.7, vec![0.3]);
        let params = find_separator_omega2(&pt, &cone, tol).unwrap();
        assert!(matches!(params.gamma, GammaParam::Zero));
        assert!(omega2(&pt, &params).unwrap() <= 1e-12);
    }

    #[test]
    fn lagrangians_are_negated_separations() {
        let inst = wedge_instance(PI - 0.4, PI + 0.4);
        let y = north();
        let x = exp_map(&TangentVector::projected(y, frame_dir(0.3) * 0.2)).unwrap();
        let fy = evaluate_objective(&inst, &y).unwrap();
        let cone = transported_cone(&inst, &fy).unwrap();

        let lin = LinearSepParams {
            theta: cone.polar().unwrap().bisector(),
            lambda: vec![0.4, 0.1, 0.9],
        };
        let pt = image_map(&inst, &y, &x).unwrap();
        assert_relative_eq!(
            lagrangian1(&inst, &y, &x, &lin).unwrap(),
            -omega1(&pt, &lin).unwrap(),
            epsilon = 1e-15
        );

        // x = y: L¹ collapses to −⟨λ, g(y)⟩.
        let gy = evaluate_constraints(&inst, &y).unwrap();
        let expected: f64 = -lin.lambda.iter().zip(&gy).map(|(a, b)| a * b).sum::<f64>();
        assert_relative_eq!(lagrangian1(&inst, &y, &y, &lin).unwrap(), expected, epsilon = 1e-12);

        let nl = NonlinearSepParams {
            phi: cone.polar().unwrap().bisector(),
            gamma: GammaParam::Interior(vec![-1.0, -1.0, -2.0]),
        };
        assert_relative_eq!(
            lagrangian2(&inst, &y, &x, &nl).unwrap(),
            -omega2(&pt, &nl).unwrap(),
            epsilon = 1e-15
        );
        // Feasible y: L²(y) = −ω̲(g(y);γ) ≤ 0.
        assert!(lagrangian2(&inst, &y, &y, &nl).unwrap() <= 1e-12);

        // φ = 0 with the zero γ element: identically zero.
        let trivial =
            NonlinearSepParams { phi: TangentVector::zero(fy), gamma: GammaParam::Zero };
        assert_eq!(lagrangian2(&inst, &y, &x, &trivial).unwrap(), 0.0);
    }

    #[test]
    fn certificate_found_for_outward_cone() {
        let (inst, y) = edge_instance(0.0, 0.5);
        let res = Resolution::new(10, 20);
        let cloud = crate::problem::image_cloud(&inst, &y, res).unwrap();
        let grid = SearchGrid::default();

        let cert = certificate_search(&inst, &y, CertificateKind::Linear, &cloud, &grid, res)
            .unwrap()
            .expect("outward cone admits a linear certificate");
        assert!(cert.max_omega_over_cloud <= inst.tolerances().certificate);

        let cert2 = certificate_search(&inst, &y, CertificateKind::Nonlinear, &cloud, &grid, res)
            .unwrap()
            .expect("outward cone admits a nonlinear certificate");
        assert!(cert2.max_omega_over_cloud <= inst.tolerances().certificate);

        // The certificate coincides with brute-force efficiency.
        assert!(crate::problem::brute_force_efficient(&inst, &y, res).unwrap().efficient);
    }

    #[test]
    fn no_certificate_for_inefficient_candidate() {
        let inst = wedge_instance(-0.3, 0.3);
        let y = north();
        let res = Resolution::new(10, 20);
        let cloud = crate::problem::image_cloud(&inst, &y, res).unwrap();
        let grid = SearchGrid::default();
        assert!(!crate::problem::brute_force_efficient(&inst, &y, res).unwrap().efficient);
        assert!(certificate_search(&inst, &y, CertificateKind::Linear, &cloud, &grid, res)
            .unwrap()
            .is_none());
        assert!(certificate_search(&inst, &y, CertificateKind::Nonlinear, &cloud, &grid, res)
            .unwrap()
            .is_none());
    }

    #[test]
    fn single_direction_grid_hits_seeded_theta() {
        // The polar bisector (the outward direction) alone certifies the
        // symmetric edge instance.
        let (inst, y) = edge_instance(0.0, 0.5);
        let res = Resolution::new(8, 16);
        let cloud = crate::problem::image_cloud(&inst, &y, res).unwrap();
        let grid = SearchGrid { n_angle: 1, ..SearchGrid::default() };
        let cert = certificate_search(&inst, &y, CertificateKind::Linear, &cloud, &grid, res)
            .unwrap()
            .expect("bisector certifies the symmetric instance");
        match cert.params {
            CertificateParams::Linear(p) => {
                assert!(p.lambda.iter().all(|l| *l == 0.0));
            }
            _ => panic!("expected linear parameters"),
        }
    }

    #[test]
    fn saddle_point_linear_both_directions() {
        let (inst, y) = edge_instance(0.0, 0.5);
        let res = Resolution::new(8, 16);
        let cloud = crate::problem::image_cloud(&inst, &y, res).unwrap();
        let grid = SearchGrid::default();
        let lambda_grid = grid.lambda_points(inst.constraint_len());
        let cert = certificate_search(&inst, &y, CertificateKind::Linear, &cloud, &grid, res)
            .unwrap()
            .unwrap();
        let CertificateParams::Linear(params) = cert.params else { panic!() };

        // Certificate params with ⟨λ̄, g(y)⟩ = 0 form a saddle point.
        assert!(is_saddle_point1(
            &inst,
            &y,
            &params.theta,
            &params.lambda,
            &cloud,
            &lambda_grid,
            1e-9
        )
        .unwrap());

        // λ̄ pairing positively with g(y) breaks the left inequality at λ=0:
        // the polar-cap constraint has slack ≈ 0.075 at y.
        let bad_lambda = vec![0.0, 1.0];
        assert!(!is_saddle_point1(
            &inst,
            &y,
            &params.theta,
            &bad_lambda,
            &cloud,
            &lambda_grid,
            1e-9
        )
        .unwrap());

        // Invalid θ (outside the polar) is a precondition error.
        let fy = evaluate_objective(&inst, &y).unwrap();
        let cone = transported_cone(&inst, &fy).unwrap();
        let outside = cone.bisector().scaled(-1.0);
        assert!(matches!(
            is_saddle_point1(&inst, &y, &outside, &params.lambda, &cloud, &lambda_grid, 1e-9),
            Err(Error::Precondition(_))
        ));

        // Inefficient instance: no valid parameters form a saddle point.
        let (bad_inst, by) = edge_instance(PI, 0.5);
        let bad_cloud = crate::problem::image_cloud(&bad_inst, &by, res).unwrap();
        let bfy = evaluate_objective(&bad_inst, &by).unwrap();
        let bad_cone = transported_cone(&bad_inst, &bfy).unwrap();
        assert!(!is_saddle_point1(
            &bad_inst,
            &by,
            &bad_cone.polar().unwrap().bisector(),
            &[0.0, 0.0],
            &bad_cloud,
            &lambda_grid,
            1e-9
        )
        .unwrap());
    }

    #[test]
    fn saddle_point_nonlinear_both_directions() {
        let (inst, y) = edge_instance(0.0, 0.5);
        let res = Resolution::new(8, 16);
        let cloud = crate::problem::image_cloud(&inst, &y, res).unwrap();
        let grid = SearchGrid::default();
        let gamma_grid = grid.gamma_points(inst.constraint_len());
        let cert = certificate_search(&inst, &y, CertificateKind::Nonlinear, &cloud, &grid, res)
            .unwrap()
            .unwrap();
        let CertificateParams::Nonlinear(params) = cert.params else { panic!() };

        assert!(is_saddle_point2(
            &inst,
            &y,
            &params.phi,
            &params.gamma,
            &cloud,
            &gamma_grid,
            1e-9
        )
        .unwrap());

        // Infeasible y errors out: shrink the feasible set to a small ball
        // around y and query from the opposite side of the patch.
        let tight = GopInstance::new(
            *inst.patch(),
            inst.ref_point(),
            *inst.ref_cone(),
            Objective::Identity,
            vec![ConstraintTerm::Ball { center: y, radius: 0.05 }],
            inst.tolerances(),
        )
        .unwrap();
        let c = north();
        let (e1, _) = tangent_basis(&c);
        let bad = exp_map(&TangentVector::projected(c, e1 * -0.44)).unwrap();
        assert_eq!(
            is_saddle_point2(&tight, &bad, &params.phi, &params.gamma, &cloud, &gamma_grid, 1e-9),
            Err(Error::Infeasible)
        );
    }

    #[test]
    fn dual_value_examples() {
        let (inst, y) = edge_instance(0.0, 0.5);
        let res = Resolution::new(8, 16);
        let cloud = crate::problem::image_cloud(&inst, &y, res).unwrap();
        let fy = evaluate_objective(&inst, &y).unwrap();
        let cone = transported_cone(&inst, &fy).unwrap();

        // λ = 0 and all ⟨θ,u⟩ ≤ 0: the maximum is 0, attained at x = y.
        let params = LinearSepParams {
            theta: cone.polar().unwrap().bisector(),
            lambda: vec![0.0, 0.0],
        };
        let v = dual_value(&inst, &y, &params, &cloud).unwrap();
        assert_relative_eq!(v, 0.0, epsilon = 1e-12);

        // Single-point cloud {x = y}: value is ⟨λ, g(y)⟩.
        let single = vec![cloud[0].clone()];
        let params = LinearSepParams {
            theta: cone.polar().unwrap().bisector(),
            lambda: vec![1.0, 2.0],
        };
        let gy = evaluate_constraints(&inst, &y).unwrap();
        let expected: f64 = params.lambda.iter().zip(&gy).map(|(a, b)| a * b).sum();
        assert_relative_eq!(
            dual_value(&inst, &y, &params, &single).unwrap(),
            expected,
            epsilon = 1e-12
        );

        // Any feasible instance: value ≥ −slack.
        assert!(v >= -1e-9);
    }

    #[test]
    fn duality_gap_zero_iff_certificate() {
        let res = Resolution::new(10, 20);
        let grid = SearchGrid::default();

        // Outward cone: zero gap; inward cone: strictly positive gap.
        for (angle, expect_zero) in [(0.0, true), (PI, false)] {
            let (inst, y) = edge_instance(angle, 0.5);
            let cloud = crate::problem::image_cloud(&inst, &y, res).unwrap();
            let fy = evaluate_objective(&inst, &y).unwrap();
            let cone = transported_cone(&inst, &fy).unwrap();
            let thetas = grid.polar_directions(&cone).unwrap();
            let lambdas = grid.lambda_points(inst.constraint_len());
            let gap = duality_gap(&inst, &y, &thetas, &lambdas, &cloud).unwrap();
            let cert = certificate_search(&inst, &y, CertificateKind::Linear, &cloud, &grid, res)
                .unwrap();
            let tau = inst.tolerances().certificate;
            assert_eq!(gap.omega <= tau, cert.is_some());
            assert_eq!(cert.is_some(), expect_zero, "cone angle {angle}");
            // Ω is never negative beyond slack.
            assert!(gap.omega >= -1e-9);

            // Determinism: identical scans give identical results.
            let again = duality_gap(&inst, &y, &thetas, &lambdas, &cloud).unwrap();
            assert_eq!(gap, again);
        }
    }

    #[test]
    fn grid_shapes() {
        let grid = SearchGrid::default();
        let lambdas = grid.lambda_points(2);
        // 16 tuples at scale 1 plus 15 nonzero tuples at scale 10.
        assert_eq!(lambdas.len(), 31);
        assert_eq!(lambdas[0], vec![0.0, 0.0]);
        let gammas = grid.gamma_points(2);
        assert_eq!(gammas.len(), 10);
        assert_eq!(gammas[0], GammaParam::Zero);

        let cone = cone_span(0.0, 1.0);
        let dirs = polar_directions(&cone, 5).unwrap();
        assert_eq!(dirs.len(), 5);
        let polar = cone.polar().unwrap();
        for d in &dirs {
            assert_relative_eq!(d.norm(), 1.0, epsilon = 1e-12);
            assert!(polar.contains(d, 1e-9).unwrap());
        }
        // The single-direction grid is the polar bisector.
        let one = polar_directions(&cone, 1).unwrap();
        assert!((one[0].vec() - polar.bisector().vec()).norm() < 1e-12);
    }
}
