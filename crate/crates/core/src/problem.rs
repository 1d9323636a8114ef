//! Problem instances and their image-space analysis.
//!
//! An instance bundles a patch, a reference point `p` with a sector cone
//! `C_p ⊂ T_p`, an objective family `f : M → M` and a constraint family
//! `g : M → Rˡ`. A candidate `y` is efficient when no feasible `x` satisfies
//! `log_{f(y)} f(x) ∈ C_{f(y)} \ {0}`, where `C_{f(y)}` is the parallel
//! transport of `C_p` to `f(y)`.
//!
//! The image map `M_y(x) = (log_{f(y)} f(x), g(x))` sends candidates into
//! `T_{f(y)} × Rˡ`; there the good set is
//! `H = {(u,v) : u ∈ C_{f(y)}\{0}, v ≥ 0}` and the problem's image is the
//! cloud of `M_y(x)` over a deterministic sample grid. Efficiency of `y`,
//! disjointness of `H` from the cloud, and disjointness of `H` from the
//! extended image (the Minkowski difference of the cloud and `cl H`) are
//! equivalent decisions, and all three are provided.
//!
//! Quantification over the continuum is replaced by a declared deterministic
//! grid; the resolution is a first-class argument recorded in every report.

use crate::cone::SectorCone;
use crate::error::{Error, Result};
use crate::sphere::{
    distance, exp_map, log_map, sample_patch, Patch, SpherePoint, TangentVector,
};
use crate::vec3::Vec3;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Objective family `f : M → M`, drawn from a closed registry.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// `f(x) = x`.
    Identity,
    /// Rotation of the ambient space about `axis` by `angle` radians.
    Rotation { axis: Vec3, angle: f64 },
    /// Geodesic pull toward `anchor`: `f(x) = exp_x(t·log_x(anchor))`.
    Pull { anchor: SpherePoint, t: f64 },
}

/// One scalar constraint `g_i : M → R`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintTerm {
    /// `g(x) = r − d(x, center)`: nonnegative inside the geodesic ball.
    Ball { center: SpherePoint, radius: f64 },
    /// `g(x) = ⟨n, x⟩ − b`: an ambient half-space.
    Affine { normal: Vec3, offset: f64 },
}

/// Tolerance record carried by every instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Cone-membership slack on decomposition coefficients (τ_mem).
    pub membership: f64,
    /// Constraint slack: feasible means `g_i ≥ −feasibility` (τ_feas).
    pub feasibility: f64,
    /// Near-antipodal rejection threshold for image-map geometry.
    pub antipodal: f64,
    /// Separation-certificate validity threshold (τ_cert).
    pub certificate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { membership: 1e-9, feasibility: 1e-9, antipodal: 1e-9, certificate: 1e-9 }
    }
}

/// Sampling resolution of the deterministic patch grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub radial: u32,
    pub angular: u32,
}

impl Resolution {
    pub fn new(radial: u32, angular: u32) -> Self {
        Resolution { radial, angular }
    }
}

/// A full problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GopInstance {
    patch: Patch,
    ref_point: SpherePoint,
    ref_cone: SectorCone,
    objective: Objective,
    constraints: Vec<ConstraintTerm>,
    tolerances: Tolerances,
}

impl GopInstance {
    pub fn new(
        patch: Patch,
        ref_point: SpherePoint,
        ref_cone: SectorCone,
        objective: Objective,
        constraints: Vec<ConstraintTerm>,
        tolerances: Tolerances,
    ) -> Result<Self> {
        if !patch.contains(&ref_point) {
            return Err(Error::Invalid("reference point lies outside the patch".into()));
        }
        if !ref_cone.base().same_coords(&ref_point)
            && (ref_cone.base().coords() - ref_point.coords()).norm() > 1e-12
        {
            return Err(Error::Invalid(
                "reference cone must be based at the reference point".into(),
            ));
        }
        if constraints.is_empty() {
            return Err(Error::Invalid("at least one constraint term is required".into()));
        }
        match &objective {
            Objective::Identity => {}
            Objective::Rotation { axis, .. } => {
                if axis.norm() < 1e-9 {
                    return Err(Error::Invalid("rotation axis must be nonzero".into()));
                }
            }
            Objective::Pull { anchor, t } => {
                if !patch.contains(anchor) {
                    return Err(Error::Invalid("pull anchor lies outside the patch".into()));
                }
                if !(0.0..=1.0).contains(t) {
                    return Err(Error::Invalid(format!("pull parameter t={t} outside [0,1]")));
                }
            }
        }
        Ok(GopInstance { patch, ref_point, ref_cone, objective, constraints, tolerances })
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }
    pub fn ref_point(&self) -> SpherePoint {
        self.ref_point
    }
    pub fn ref_cone(&self) -> &SectorCone {
        &self.ref_cone
    }
    pub fn objective(&self) -> &Objective {
        &self.objective
    }
    pub fn constraints(&self) -> &[ConstraintTerm] {
        &self.constraints
    }
    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    /// Number of constraint components `l`.
    pub fn constraint_len(&self) -> usize {
        self.constraints.len()
    }

    /// True when at least one grid sample is feasible; used at load time.
    pub fn has_feasible_sample(&self, resolution: Resolution) -> Result<bool> {
        let samples = sample_patch(&self.patch, resolution.radial, resolution.angular)?;
        for x in &samples {
            if is_feasible(self, x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// A point of the image space `T_{f(y)} × Rˡ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePoint {
    pub u: TangentVector,
    pub v: Vec<f64>,
}

/// A cloud element: an image point tagged with the sample it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSample {
    pub source: SpherePoint,
    pub image: ImagePoint,
}

/// Outcome of the brute-force efficiency scan.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub efficient: bool,
    /// First violating sample in deterministic order, when not efficient.
    pub witness: Option<SpherePoint>,
}

/// Outcome of the `H ∩ cloud` disjointness scan.
#[derive(Debug, Clone, PartialEq)]
pub struct DisjointReport {
    pub disjoint: bool,
    pub witness: Option<ImageSample>,
}

fn require_in_patch(inst: &GopInstance, x: &SpherePoint, role: &str) -> Result<()> {
    if !inst.patch.contains(x) {
        return Err(Error::Range(format!(
            "{role} lies outside the patch (d = {:.6}, radius = {:.6})",
            distance(&inst.patch.center(), x),
            inst.patch.radius()
        )));
    }
    Ok(())
}

/// Evaluates the objective family at `x`.
pub fn evaluate_objective(inst: &GopInstance, x: &SpherePoint) -> Result<SpherePoint> {
    require_in_patch(inst, x, "objective argument")?;
    match &inst.objective {
        Objective::Identity => Ok(*x),
        Objective::Rotation { axis, angle } => {
            let k = axis.normalized(1e-12).expect("validated at construction");
            let c = x.coords();
            let (sin_a, cos_a) = (crate::math::sin(*angle), crate::math::cos(*angle));
            // Rodrigues rotation.
            let rotated = c * cos_a + k.cross(c) * sin_a + k * (k.dot(c) * (1.0 - cos_a));
            SpherePoint::new(rotated)
        }
        Objective::Pull { anchor, t } => {
            let dir = log_map(x, anchor)?;
            exp_map(&dir.scaled(*t))
        }
    }
}

/// Componentwise constraint evaluation `g(x) ∈ Rˡ`.
pub fn evaluate_constraints(inst: &GopInstance, x: &SpherePoint) -> Result<Vec<f64>> {
    require_in_patch(inst, x, "constraint argument")?;
    Ok(inst
        .constraints
        .iter()
        .map(|term| match term {
            ConstraintTerm::Ball { center, radius } => radius - distance(x, center),
            ConstraintTerm::Affine { normal, offset } => normal.dot(x.coords()) - offset,
        })
        .collect())
}

/// `x ∈ K`: every component of `g(x)` at least `−τ_feas`.
pub fn is_feasible(inst: &GopInstance, x: &SpherePoint) -> Result<bool> {
    let g = evaluate_constraints(inst, x)?;
    Ok(g.iter().all(|gi| *gi >= -inst.tolerances.feasibility))
}

/// The transported order cone `C_{f(y)} = P_{f(y),p} C_p` at an image point.
pub fn transported_cone(inst: &GopInstance, at: &SpherePoint) -> Result<SectorCone> {
    if distance(&inst.ref_point, at) >= PI - inst.tolerances.antipodal {
        return Err(Error::Antipodal);
    }
    inst.ref_cone.transport_to(at)
}

/// The image map `M_y(x) = (log_{f(y)} f(x), g(x))`.
pub fn image_map(inst: &GopInstance, y: &SpherePoint, x: &SpherePoint) -> Result<ImagePoint> {
    require_in_patch(inst, y, "candidate y")?;
    let fy = evaluate_objective(inst, y)?;
    let fx = evaluate_objective(inst, x)?;
    if distance(&fy, &fx) >= PI - inst.tolerances.antipodal {
        return Err(Error::Antipodal);
    }
    Ok(ImagePoint { u: log_map(&fy, &fx)?, v: evaluate_constraints(inst, x)? })
}

/// Membership of an image point in `H = (C_{f(y)}\{0}) × R₊ˡ`.
pub fn in_h(inst: &GopInstance, y: &SpherePoint, pt: &ImagePoint) -> Result<bool> {
    let fy = evaluate_objective(inst, y)?;
    if !pt.u.based_at(&fy) {
        return Err(Error::BaseMismatch);
    }
    if pt.v.len() != inst.constraint_len() {
        return Err(Error::DimensionMismatch {
            expected: inst.constraint_len(),
            actual: pt.v.len(),
        });
    }
    let cone = transported_cone(inst, &fy)?;
    Ok(cone.contains_strict(&pt.u, inst.tolerances.membership)?
        && pt.v.iter().all(|vi| *vi >= -inst.tolerances.feasibility))
}

/// The deterministic candidate list behind every scan: the candidate `y`
/// first, then the patch grid with bitwise duplicates of `y` removed.
///
/// Keeping `y` in the list guarantees the image cloud contains the point
/// `(0, g(y))`, which the dual problem's lower bound relies on.
pub fn candidate_samples(
    inst: &GopInstance,
    y: &SpherePoint,
    resolution: Resolution,
) -> Result<Vec<SpherePoint>> {
    require_in_patch(inst, y, "candidate y")?;
    let grid = sample_patch(&inst.patch, resolution.radial, resolution.angular)?;
    let mut out = Vec::with_capacity(grid.len() + 1);
    out.push(*y);
    out.extend(grid.into_iter().filter(|x| !x.same_coords(y)));
    Ok(out)
}

/// The image cloud: `M_y` applied to the candidate list, in deterministic
/// order, each element tagged with its source.
pub fn image_cloud(
    inst: &GopInstance,
    y: &SpherePoint,
    resolution: Resolution,
) -> Result<Vec<ImageSample>> {
    candidate_samples(inst, y, resolution)?
        .into_iter()
        .map(|x| Ok(ImageSample { source: x, image: image_map(inst, y, &x)? }))
        .collect()
}

/// Extended-image membership: `pt ∈ ε(y) = cloud − cl H`, i.e. some cloud
/// element `(u_x, v_x)` has `u_x − u ∈ C_{f(y)}` (closed) and `v ≤ v_x`
/// componentwise within tolerance.
pub fn in_extended_image(
    inst: &GopInstance,
    y: &SpherePoint,
    pt: &ImagePoint,
    cloud: &[ImageSample],
) -> Result<bool> {
    let fy = evaluate_objective(inst, y)?;
    if !pt.u.based_at(&fy) {
        return Err(Error::BaseMismatch);
    }
    if pt.v.len() != inst.constraint_len() {
        return Err(Error::DimensionMismatch {
            expected: inst.constraint_len(),
            actual: pt.v.len(),
        });
    }
    let cone = transported_cone(inst, &fy)?;
    let tol = inst.tolerances.membership;
    let feas = inst.tolerances.feasibility;
    for sample in cloud {
        let diff = TangentVector::projected(fy, sample.image.u.vec() - pt.u.vec());
        if cone.contains(&diff, tol)?
            && pt.v.iter().zip(&sample.image.v).all(|(vi, vx)| *vi <= vx + feas)
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Brute-force efficiency: `y` is efficient iff no feasible sample `x` has
/// `log_{f(y)} f(x) ∈ C_{f(y)} \ {0}` (strict membership with `τ_mem`).
pub fn brute_force_efficient(
    inst: &GopInstance,
    y: &SpherePoint,
    resolution: Resolution,
) -> Result<EfficiencyReport> {
    if !is_feasible(inst, y)? {
        return Err(Error::Infeasible);
    }
    let fy = evaluate_objective(inst, y)?;
    let cone = transported_cone(inst, &fy)?;
    for x in candidate_samples(inst, y, resolution)? {
        if !is_feasible(inst, &x)? {
            continue;
        }
        let fx = evaluate_objective(inst, &x)?;
        if distance(&fy, &fx) >= PI - inst.tolerances.antipodal {
            return Err(Error::Antipodal);
        }
        let u = log_map(&fy, &fx)?;
        if cone.contains_strict(&u, inst.tolerances.membership)? {
            return Ok(EfficiencyReport { efficient: false, witness: Some(x) });
        }
    }
    Ok(EfficiencyReport { efficient: true, witness: None })
}

/// `H ∩ cloud = ∅` decision; agrees with [`brute_force_efficient`] by
/// construction of `H` (the equivalence is exercised as a tested property).
pub fn check_disjoint_h_k(
    inst: &GopInstance,
    y: &SpherePoint,
    resolution: Resolution,
) -> Result<DisjointReport> {
    if !is_feasible(inst, y)? {
        return Err(Error::Infeasible);
    }
    let cloud = image_cloud(inst, y, resolution)?;
    for sample in &cloud {
        if in_h(inst, y, &sample.image)? {
            return Ok(DisjointReport { disjoint: false, witness: Some(sample.clone()) });
        }
    }
    Ok(DisjointReport { disjoint: true, witness: None })
}
